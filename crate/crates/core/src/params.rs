//! Parameter tuples naming one member of the family.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ParamError;

/// The prime. Everything in this crate is specialised to it.
pub const P: u32 = 5;

/// Largest supported order exponent for element arithmetic.
pub const MAX_N: usize = 12;

/// Largest defect accepted by [`PresentationParams::new`].
pub const MAX_DEFECT: usize = 3;

/// Raw, unreduced parameters as they arrive from a descriptor or the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawParams {
    pub p: i64,
    pub n: i64,
    pub w: i64,
    pub z: i64,
    pub a: Vec<i64>,
}

impl RawParams {
    pub fn new(n: i64, w: i64, z: i64, a: &[i64]) -> Self {
        Self {
            p: P as i64,
            n,
            w,
            z,
            a: a.to_vec(),
        }
    }
}

/// The tuple `(n, a, z, w)` naming one metabelian 5-group of maximal class of
/// order `5^n`.
///
/// `a` is stored in the order `(a_{n-1}, a_{n-2}, …, a_{n-k})` and is kept free of
/// trailing zeros, so `k = a.len()` is also the defect of the built group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PresentationParams {
    n: usize,
    w: u8,
    z: u8,
    a: Vec<u8>,
}

fn reduce(v: i64) -> u8 {
    v.rem_euclid(P as i64) as u8
}

impl PresentationParams {
    /// Validates and canonicalises a parameter tuple.
    ///
    /// Exponents are reduced mod 5 and trailing zeros of `a` are dropped before
    /// the defect bound `k ≤ min(n − 4, 3)` is checked.
    pub fn new(n: i64, w: i64, z: i64, a: &[i64]) -> Result<Self, ParamError> {
        if n < 4 {
            return Err(ParamError::OrderTooSmall { n });
        }
        if n as usize > MAX_N {
            return Err(ParamError::OrderTooLarge { n, max: MAX_N });
        }
        let n = n as usize;
        let mut a: Vec<u8> = a.iter().map(|&v| reduce(v)).collect();
        while a.last() == Some(&0) {
            a.pop();
        }
        let bound = core::cmp::min(n - 4, MAX_DEFECT);
        if a.len() > bound {
            return Err(ParamError::DefectTooLarge {
                k: a.len(),
                bound,
                n,
            });
        }
        Ok(Self {
            n,
            w: reduce(w),
            z: reduce(z),
            a,
        })
    }

    pub fn from_raw(raw: &RawParams) -> Result<Self, ParamError> {
        if raw.p != P as i64 {
            return Err(ParamError::UnsupportedPrime { p: raw.p });
        }
        Self::new(raw.n, raw.w, raw.z, &raw.a)
    }

    pub fn to_raw(&self) -> RawParams {
        RawParams {
            p: P as i64,
            n: self.n as i64,
            w: self.w as i64,
            z: self.z as i64,
            a: self.a.iter().map(|&v| v as i64).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn w(&self) -> u8 {
        self.w
    }

    pub fn z(&self) -> u8 {
        self.z
    }

    /// `(a_{n-1}, …, a_{n-k})`.
    pub fn a(&self) -> &[u8] {
        &self.a
    }

    /// Length of `a`; equals the defect of commutativity of the built group.
    pub fn k(&self) -> usize {
        self.a.len()
    }

    /// Groups with `k = 3` build and check out, but lie outside the range the
    /// classification results were stated for.
    pub fn outside_verified_family(&self) -> bool {
        self.k() >= 3
    }

    /// Every canonical tuple of order exponent `n`, sorted.
    pub fn enumerate(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        if !(4..=MAX_N).contains(&n) {
            return out;
        }
        let bound = core::cmp::min(n - 4, MAX_DEFECT);
        let mut tails: Vec<Vec<u8>> = alloc::vec![Vec::new()];
        for k in 1..=bound {
            // a_{n-1}, …, a_{n-k+1} free, a_{n-k} nonzero
            let total = (P as usize).pow(k as u32 - 1);
            for free in 0..total {
                for last in 1..P as u8 {
                    let mut a = Vec::with_capacity(k);
                    let mut f = free;
                    for _ in 0..k - 1 {
                        a.push((f % P as usize) as u8);
                        f /= P as usize;
                    }
                    a.push(last);
                    tails.push(a);
                }
            }
        }
        for a in &tails {
            for w in 0..P as u8 {
                for z in 0..P as u8 {
                    out.push(Self {
                        n,
                        w,
                        z,
                        a: a.clone(),
                    });
                }
            }
        }
        out.sort();
        out
    }

    /// Closed-form number of canonical tuples for a given `n`.
    pub fn count(n: usize) -> usize {
        if !(4..=MAX_N).contains(&n) {
            return 0;
        }
        let bound = core::cmp::min(n - 4, MAX_DEFECT);
        // 1 + 4 + 4·5 + 4·25 …
        let tails: usize = 1
            + (1..=bound)
                .map(|k| 4 * 5usize.pow(k as u32 - 1))
                .sum::<usize>();
        25 * tails
    }

    /// Label text `G_a^(n)(z,w)`.
    pub fn label(&self) -> String {
        alloc::string::ToString::to_string(&crate::classify::FamilyLabel::from_params(self))
    }
}

impl fmt::Display for PresentationParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, w={}, z={}, a=(", self.n, self.w, self.z)?;
        for (i, v) in self.a.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("))")
    }
}
