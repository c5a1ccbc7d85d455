use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::params::{MAX_N, P};

/// A normal form `x^{e_x} y^{e_y} s_2^{c_2} ⋯ s_{n-1}^{c_{n-1}}`.
///
/// Position 0 is the exponent of `x`, position 1 of `y`, and position `j ≥ 2` of
/// `s_j`. Entries are always in `0..5`. Ordering is lexicographic on the
/// exponent vector, which coincides with [`Element::index`] order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Element {
    exps: [u8; MAX_N],
    len: u8,
}

impl Element {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_N, "length {n} exceeds {MAX_N}");
        Self {
            exps: [0; MAX_N],
            len: n as u8,
        }
    }

    /// Generator `g` of a group of order `5^n`: 0 is `x`, 1 is `y`, `j ≥ 2` is `s_j`.
    /// Indices `j ≥ n` give the identity, matching `s_m = 1` for `m ≥ n`.
    pub fn generator(n: usize, g: usize) -> Self {
        let mut e = Self::identity(n);
        if g < n {
            e.exps[g] = 1;
        }
        e
    }

    /// Builds an element from exponents, reducing each mod 5.
    pub fn from_exponents(exps: &[i64]) -> Self {
        let mut e = Self::identity(exps.len());
        for (slot, &v) in e.exps.iter_mut().zip(exps) {
            *slot = v.rem_euclid(P as i64) as u8;
        }
        e
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exps[..self.len as usize]
    }

    pub fn get(&self, g: usize) -> u8 {
        if g < self.len() {
            self.exps[g]
        } else {
            0
        }
    }

    pub(crate) fn set(&mut self, g: usize, v: u8) {
        debug_assert!(v < P as u8);
        self.exps[g] = v;
    }

    pub fn is_identity(&self) -> bool {
        self.exponents().iter().all(|&e| e == 0)
    }

    /// True when the element lies in the derived subgroup `⟨s_2, …, s_{n-1}⟩`.
    pub fn in_derived(&self) -> bool {
        self.get(0) == 0 && self.get(1) == 0
    }

    /// Position in the lexicographic enumeration of all `5^n` normal forms.
    pub fn index(&self) -> usize {
        self.exponents()
            .iter()
            .fold(0usize, |acc, &e| acc * P as usize + e as usize)
    }

    pub fn from_index(n: usize, mut idx: usize) -> Self {
        let mut e = Self::identity(n);
        for g in (0..n).rev() {
            e.exps[g] = (idx % P as usize) as u8;
            idx /= P as usize;
        }
        e
    }

    pub fn to_vec(&self) -> Vec<u8> {
        self.exponents().to_vec()
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exponents()
            .cmp(other.exponents())
            .then(self.len.cmp(&other.len))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.exponents().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.exponents().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<i64> = Vec::deserialize(d)?;
        if v.len() > MAX_N {
            return Err(serde::de::Error::custom("exponent vector too long"));
        }
        if v.iter().any(|e| !(0..P as i64).contains(e)) {
            return Err(serde::de::Error::custom("exponents must lie in 0..5"));
        }
        Ok(Element::from_exponents(&v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip_and_order() {
        let n = 5;
        let mut prev = None;
        for idx in 0..5usize.pow(n as u32) {
            let e = Element::from_index(n, idx);
            assert_eq!(e.index(), idx);
            if let Some(p) = prev {
                assert!(p < e);
            }
            prev = Some(e);
        }
    }

    #[test]
    fn generators() {
        assert_eq!(Element::generator(4, 0).exponents(), &[1, 0, 0, 0]);
        assert_eq!(Element::generator(4, 3).exponents(), &[0, 0, 0, 1]);
        assert!(Element::generator(4, 4).is_identity());
        assert!(Element::generator(4, 2).in_derived());
        assert!(!Element::generator(4, 1).in_derived());
    }

    #[test]
    fn reduction() {
        assert_eq!(Element::from_exponents(&[5, -1, 7]).exponents(), &[0, 4, 2]);
    }
}
