//! The executable group: power and conjugation tables plus multiplication.
//!
//! Every element is a normal form `x^α y^β c` with `c` in the abelian derived
//! subgroup `γ₂ = ⟨s_2, …, s_{n-1}⟩`. Because `γ₂` is abelian, an exponent vector
//! `(c_2, …, c_{n-1})` with arbitrary integer entries still names a unique element
//! of `γ₂`, and reducing it to normal form is a carry pass from `s_2` upwards
//! using the stored fifth powers. Conjugation by `x` and `y` is linear on these
//! vectors, so a product of two normal forms can be collected in closed form:
//!
//! ```text
//! x^α y^β c · x^α' y^β' c' = x^{α+α'} y^{β+β'} · [y^β, x^α']^{y^β'} · c^{x^α' y^β'} · c'
//! ```
//!
//! with the overflow `x^5` and `y^5` moved into the `γ₂` part.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::element::Element;
use crate::error::GroupError;
use crate::params::{PresentationParams, MAX_N, P};

pub(crate) const MAX_D: usize = MAX_N - 2;

/// Exponent vector over `s_2, …, s_{n-1}` with unreduced integer entries.
pub(crate) type Lift = [i32; MAX_D];

type Matrix = [Lift; MAX_D];

const ZERO: Lift = [0; MAX_D];

/// Cached linear data derived from the tables.
#[derive(Clone, Debug)]
struct Tables {
    d: usize,
    /// `s_j^5` for each `j`, in normal form.
    pow: Vec<Lift>,
    /// `x^5`, an element of `γ₂`.
    x5: Lift,
    /// `y^5`, an element of `γ₂`.
    y5: Lift,
    /// `act[α][β]` has columns `s_j^{x^α y^β}`.
    act: Vec<Matrix>,
    /// `twist[β][α][β'] = ([y^β, x^α])^{y^β'}`.
    twist: Vec<Lift>,
}

/// A metabelian 5-group of maximal class given by a consistent polycyclic
/// presentation. Immutable once built.
#[derive(Clone, Debug)]
pub struct PcGroup {
    params: PresentationParams,
    n: usize,
    power_table: Vec<Element>,
    conj_x: Vec<Element>,
    conj_y: Vec<Element>,
    tables: Tables,
}

/// A relation that failed to evaluate to its stated value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationFailure {
    pub relation: String,
    pub expected: Element,
    pub observed: Element,
}

impl PcGroup {
    /// Builds the group named by `params` and verifies every defining relation
    /// through the multiplication engine.
    pub fn build(params: &PresentationParams) -> Result<Self, GroupError> {
        let n = params.n();
        let d = n - 2;
        let mut pow = vec![ZERO; d];
        // fifth powers from the bottom of the chain upwards
        for j in (2..n).rev() {
            let mut v = ZERO;
            for (offset, coeff) in [(1, 10), (2, 10), (3, 5), (4, 1)] {
                if j + offset < n {
                    v[j + offset - 2] -= coeff;
                }
            }
            normalize_with(&pow, d, &mut v);
            pow[j - 2] = v;
        }

        let mut conj_x_lift = vec![ZERO; d];
        for (i, col) in conj_x_lift.iter_mut().enumerate() {
            col[i] = 1;
            if i + 1 < d {
                col[i + 1] = 1;
            }
        }

        // s_2^y = s_2 · [y, s_2]^{-1}
        let mut a_vec = ZERO;
        for (i, &c) in params.a().iter().enumerate() {
            a_vec[n - 1 - i - 2] = c as i32;
        }
        let mut conj_y_lift = vec![ZERO; d];
        let mut cur = ZERO;
        cur[0] = 1;
        sub_assign(&mut cur, &a_vec, d);
        normalize_with(&pow, d, &mut cur);
        conj_y_lift[0] = cur;
        // s_{j+1}^y = (s_j^y)^{-1} (s_j^y)^x
        for j in 1..d {
            let prev = conj_y_lift[j - 1];
            let mut next = apply_with(&conj_x_lift, d, &prev);
            sub_assign(&mut next, &prev, d);
            normalize_with(&pow, d, &mut next);
            conj_y_lift[j] = next;
        }

        let mut x5 = ZERO;
        x5[d - 1] = params.w() as i32;
        let mut y5 = ZERO;
        y5[d - 1] += params.z() as i32;
        for (j, coeff) in [(2, 10), (3, 10), (4, 5), (5, 1)] {
            if j < n {
                y5[j - 2] -= coeff;
            }
        }
        normalize_with(&pow, d, &mut y5);

        let mut power_table = Vec::with_capacity(n);
        power_table.push(to_element(n, 0, 0, &x5));
        power_table.push(to_element(n, 0, 0, &y5));
        power_table.extend(pow.iter().map(|v| to_element(n, 0, 0, v)));
        let conj_x = conj_x_lift.iter().map(|v| to_element(n, 0, 0, v)).collect();
        let conj_y = conj_y_lift.iter().map(|v| to_element(n, 0, 0, v)).collect();

        let group = Self::from_tables(params.clone(), power_table, conj_x, conj_y)?;
        if let Some(w) = group.actions_commute_witness() {
            return Err(GroupError::Consistency(format!(
                "x- and y-actions do not commute on s_{}",
                w + 2
            )));
        }
        if let Some(f) = group.relation_failures().into_iter().next() {
            return Err(GroupError::Consistency(format!(
                "relation {} gives {} instead of {}",
                f.relation, f.observed, f.expected
            )));
        }
        Ok(group)
    }

    /// Assembles a group from explicit tables without checking consistency.
    ///
    /// `power_table[g]` is `g^5` for each of the `n` generators; `conj_x[j-2]`
    /// and `conj_y[j-2]` are `s_j^x` and `s_j^y`. All entries must lie in `γ₂`.
    /// Run [`crate::consistency::consistency_check`] before trusting the result.
    pub fn from_tables(
        params: PresentationParams,
        power_table: Vec<Element>,
        conj_x: Vec<Element>,
        conj_y: Vec<Element>,
    ) -> Result<Self, GroupError> {
        let n = params.n();
        let d = n - 2;
        if power_table.len() != n || conj_x.len() != d || conj_y.len() != d {
            return Err(GroupError::Consistency(String::from(
                "table sizes do not match the order exponent",
            )));
        }
        for e in power_table.iter().chain(&conj_x).chain(&conj_y) {
            if e.len() != n {
                return Err(GroupError::Dimension {
                    expected: n,
                    got: e.len(),
                });
            }
            if !e.in_derived() {
                return Err(GroupError::Consistency(format!(
                    "table entry {e} is not in the derived subgroup"
                )));
            }
        }
        for (j, e) in power_table.iter().enumerate().skip(2) {
            if (2..=j).any(|i| e.get(i) != 0) {
                return Err(GroupError::Consistency(format!(
                    "s_{j}^5 = {e} does not lie strictly below s_{j}"
                )));
            }
        }

        let lift = |e: &Element| to_lift(e, d);
        let pow: Vec<Lift> = power_table[2..].iter().map(lift).collect();
        let x5 = lift(&power_table[0]);
        let y5 = lift(&power_table[1]);
        let xm: Vec<Lift> = conj_x.iter().map(lift).collect();
        let ym: Vec<Lift> = conj_y.iter().map(lift).collect();

        let mut act = vec![[ZERO; MAX_D]; 25];
        for alpha in 0..5 {
            for beta in 0..5 {
                let m = &mut act[alpha * 5 + beta];
                for (j, col) in m.iter_mut().enumerate().take(d) {
                    let mut v = ZERO;
                    v[j] = 1;
                    for _ in 0..alpha {
                        v = apply_with(&xm, d, &v);
                        normalize_with(&pow, d, &mut v);
                    }
                    for _ in 0..beta {
                        v = apply_with(&ym, d, &v);
                        normalize_with(&pow, d, &mut v);
                    }
                    *col = v;
                }
            }
        }

        // y^{x^α} = y · t_α with t_{α+1} = s_2 · t_α^x
        let mut t = [ZERO; 5];
        for alpha in 1..5 {
            let mut v = apply_with(&xm, d, &t[alpha - 1]);
            v[0] += 1;
            normalize_with(&pow, d, &mut v);
            t[alpha] = v;
        }
        // [y^β, x^α] = ∏_{i<β} t_α^{y^i}
        let mut twist = vec![ZERO; 125];
        for beta in 0..5 {
            for alpha in 0..5 {
                let mut comm = ZERO;
                let mut term = t[alpha];
                for _ in 0..beta {
                    add_assign(&mut comm, &term, d);
                    term = apply_with(&ym, d, &term);
                    normalize_with(&pow, d, &mut term);
                }
                normalize_with(&pow, d, &mut comm);
                for beta2 in 0..5 {
                    let mut v = comm;
                    for _ in 0..beta2 {
                        v = apply_with(&ym, d, &v);
                        normalize_with(&pow, d, &mut v);
                    }
                    twist[(beta * 5 + alpha) * 5 + beta2] = v;
                }
            }
        }

        Ok(Self {
            params,
            n,
            power_table,
            conj_x,
            conj_y,
            tables: Tables {
                d,
                pow,
                x5,
                y5,
                act,
                twist,
            },
        })
    }

    pub fn params(&self) -> &PresentationParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `5^n`.
    pub fn order(&self) -> usize {
        (P as usize).pow(self.n as u32)
    }

    pub fn power_table(&self) -> &[Element] {
        &self.power_table
    }

    /// `s_j^x`, indexed by `j - 2`.
    pub fn conj_x(&self) -> &[Element] {
        &self.conj_x
    }

    /// `s_j^y`, indexed by `j - 2`.
    pub fn conj_y(&self) -> &[Element] {
        &self.conj_y
    }

    pub fn identity(&self) -> Element {
        Element::identity(self.n)
    }

    pub fn x(&self) -> Element {
        Element::generator(self.n, 0)
    }

    pub fn y(&self) -> Element {
        Element::generator(self.n, 1)
    }

    /// `s_j`, which is the identity for `j ≥ n`.
    pub fn s(&self, j: usize) -> Element {
        assert!(j >= 2, "s_j is defined for j >= 2");
        Element::generator(self.n, j)
    }

    /// All `n` polycyclic generators `x, y, s_2, …, s_{n-1}`.
    pub fn generators(&self) -> Vec<Element> {
        (0..self.n).map(|g| Element::generator(self.n, g)).collect()
    }

    pub fn contains(&self, u: &Element) -> bool {
        u.len() == self.n
    }

    fn check(&self, u: &Element) -> Result<(), GroupError> {
        if self.contains(u) {
            Ok(())
        } else {
            Err(GroupError::Dimension {
                expected: self.n,
                got: u.len(),
            })
        }
    }

    fn normalize(&self, v: &mut Lift) {
        normalize_with(&self.tables.pow, self.tables.d, v);
    }

    fn compose(&self, alpha: usize, beta: usize, mut v: Lift) -> Element {
        self.normalize(&mut v);
        to_element(self.n, alpha as u8, beta as u8, &v)
    }

    /// Normal form of `uv`.
    pub fn multiply(&self, u: &Element, v: &Element) -> Element {
        debug_assert!(self.contains(u) && self.contains(v));
        let t = &self.tables;
        let d = t.d;
        let (a1, b1) = (u.get(0) as usize, u.get(1) as usize);
        let (a2, b2) = (v.get(0) as usize, v.get(1) as usize);
        let m = &t.act[a2 * 5 + b2];
        let tw = &t.twist[(b1 * 5 + a2) * 5 + b2];
        let mut acc = ZERO;
        for i in 0..d {
            acc[i] = tw[i] + v.get(i + 2) as i32;
        }
        for (j, col) in m.iter().enumerate().take(d) {
            let c = u.get(j + 2) as i32;
            if c != 0 {
                for i in 0..d {
                    acc[i] += c * col[i];
                }
            }
        }
        let alpha = a1 + a2;
        if alpha >= 5 {
            add_assign(&mut acc, &t.x5, d);
        }
        let beta = b1 + b2;
        if beta >= 5 {
            add_assign(&mut acc, &t.y5, d);
        }
        self.compose(alpha % 5, beta % 5, acc)
    }

    pub fn try_multiply(&self, u: &Element, v: &Element) -> Result<Element, GroupError> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.multiply(u, v))
    }

    pub fn inverse(&self, u: &Element) -> Element {
        let t = &self.tables;
        let d = t.d;
        let (a1, b1) = (u.get(0) as usize, u.get(1) as usize);
        let a2 = (5 - a1) % 5;
        let b2 = (5 - b1) % 5;
        // uv = 1 is linear in the γ₂-part of v
        let m = &t.act[a2 * 5 + b2];
        let tw = &t.twist[(b1 * 5 + a2) * 5 + b2];
        let mut acc = ZERO;
        for i in 0..d {
            acc[i] = -tw[i];
        }
        for (j, col) in m.iter().enumerate().take(d) {
            let c = u.get(j + 2) as i32;
            if c != 0 {
                for i in 0..d {
                    acc[i] -= c * col[i];
                }
            }
        }
        if a1 != 0 {
            sub_assign(&mut acc, &t.x5, d);
        }
        if b1 != 0 {
            sub_assign(&mut acc, &t.y5, d);
        }
        self.compose(a2, b2, acc)
    }

    pub fn try_inverse(&self, u: &Element) -> Result<Element, GroupError> {
        self.check(u)?;
        Ok(self.inverse(u))
    }

    /// `u^m` by square-and-multiply; negative `m` goes through the inverse.
    pub fn power(&self, u: &Element, m: i64) -> Element {
        let mut base = if m < 0 { self.inverse(u) } else { *u };
        let mut e = m.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.multiply(&base, &base);
            }
        }
        acc
    }

    /// `[u, v] = u^{-1} v^{-1} u v`.
    pub fn commutator(&self, u: &Element, v: &Element) -> Element {
        let uv = self.multiply(u, v);
        let vu = self.multiply(v, u);
        // [u,v] = (vu)^{-1} (uv)
        self.multiply(&self.inverse(&vu), &uv)
    }

    /// `u^v = v^{-1} u v`.
    pub fn conjugate(&self, u: &Element, v: &Element) -> Element {
        self.multiply(&self.inverse(v), &self.multiply(u, v))
    }

    /// Least `m ≥ 1` with `u^m = 1`.
    pub fn element_order(&self, u: &Element) -> u64 {
        let mut g = *u;
        let mut order = 1u64;
        while !g.is_identity() {
            g = self.power(&g, P as i64);
            order *= P as u64;
        }
        order
    }

    /// Product of a list of elements, left to right.
    pub fn product<'a, I>(&self, items: I) -> Element
    where
        I: IntoIterator<Item = &'a Element>,
    {
        items
            .into_iter()
            .fold(self.identity(), |acc, e| self.multiply(&acc, e))
    }

    /// `∏ s_j^{e_j}` over `(j, e_j)` pairs, evaluated through the engine.
    pub fn s_word(&self, terms: &[(usize, i64)]) -> Element {
        terms.iter().fold(self.identity(), |acc, &(j, e)| {
            self.multiply(&acc, &self.power(&self.s(j), e))
        })
    }

    /// First `j` (as an index into `s_2, …`) on which `s_j^{xy} ≠ s_j^{yx}`,
    /// comparing the action matrices built from the conjugation tables.
    pub fn actions_commute_witness(&self) -> Option<usize> {
        let d = self.tables.d;
        let xm: Vec<Lift> = self.conj_x.iter().map(|e| to_lift(e, d)).collect();
        let ym: Vec<Lift> = self.conj_y.iter().map(|e| to_lift(e, d)).collect();
        (0..d).find(|&j| {
            let mut xy = apply_with(&ym, d, &xm[j]);
            let mut yx = apply_with(&xm, d, &ym[j]);
            self.normalize(&mut xy);
            self.normalize(&mut yx);
            xy != yx
        })
    }

    /// Evaluates the defining relations with the multiplication engine and
    /// returns every one that fails.
    pub fn relation_failures(&self) -> Vec<RelationFailure> {
        let n = self.n;
        let one = self.identity();
        let mut out = Vec::new();
        let mut check = |relation: String, expected: Element, observed: Element| {
            if expected != observed {
                out.push(RelationFailure {
                    relation,
                    expected,
                    observed,
                });
            }
        };

        let x = self.x();
        let y = self.y();
        check(
            String::from("s_2 = [y,x]"),
            self.s(2),
            self.commutator(&y, &x),
        );
        for j in 3..n {
            check(
                format!("s_{j} = [s_{},x]", j - 1),
                self.s(j),
                self.commutator(&self.s(j - 1), &x),
            );
        }
        // [s_{n-1}, x] = 1 closes the chain
        check(
            format!("[s_{},x] = 1", n - 1),
            one,
            self.commutator(&self.s(n - 1), &x),
        );
        for j in 2..n {
            let w = self.s_word(&[(j, 5), (j + 1, 10), (j + 2, 10), (j + 3, 5), (j + 4, 1)]);
            check(format!("(1) j={j}"), one, w);
        }
        let top = self.s(n - 1);
        check(
            String::from("(2) x^5 = s_{n-1}^w"),
            self.power(&top, self.params.w() as i64),
            self.power(&x, 5),
        );
        let lhs = self.multiply(
            &self.power(&y, 5),
            &self.s_word(&[(2, 10), (3, 10), (4, 5), (5, 1)]),
        );
        check(
            String::from("(3) y^5 s_2^10 s_3^10 s_4^5 s_5 = s_{n-1}^z"),
            self.power(&top, self.params.z() as i64),
            lhs,
        );
        let rhs: Vec<(usize, i64)> = self
            .params
            .a()
            .iter()
            .enumerate()
            .map(|(i, &c)| (n - 1 - i, c as i64))
            .collect();
        check(
            String::from("(4) [y,s_2] = prod s_{n-i}^{a_{n-i}}"),
            self.s_word(&rhs),
            self.commutator(&y, &self.s(2)),
        );
        for i in 2..n {
            for j in i + 1..n {
                check(
                    format!("[s_{i},s_{j}] = 1"),
                    one,
                    self.commutator(&self.s(i), &self.s(j)),
                );
            }
        }
        out
    }
}

pub(crate) fn to_lift(e: &Element, d: usize) -> Lift {
    let mut v = ZERO;
    for (i, slot) in v.iter_mut().enumerate().take(d) {
        *slot = e.get(i + 2) as i32;
    }
    v
}

fn to_element(n: usize, alpha: u8, beta: u8, v: &Lift) -> Element {
    let mut e = Element::identity(n);
    e.set(0, alpha);
    e.set(1, beta);
    for (i, &c) in v.iter().enumerate().take(n - 2) {
        debug_assert!((0..5).contains(&c));
        e.set(i + 2, c as u8);
    }
    e
}

fn add_assign(acc: &mut Lift, v: &Lift, d: usize) {
    for i in 0..d {
        acc[i] += v[i];
    }
}

fn sub_assign(acc: &mut Lift, v: &Lift, d: usize) {
    for i in 0..d {
        acc[i] -= v[i];
    }
}

/// `Σ v_j · cols[j]`.
fn apply_with(cols: &[Lift], d: usize, v: &Lift) -> Lift {
    let mut out = ZERO;
    for j in 0..d {
        if v[j] != 0 {
            for i in 0..d {
                out[i] += v[j] * cols[j][i];
            }
        }
    }
    out
}

/// Carry pass: rewrite `s_j^{5q}` as `(s_j^5)^q` from the top of the chain down.
fn normalize_with(pow: &[Lift], d: usize, v: &mut Lift) {
    for j in 0..d {
        let q = v[j].div_euclid(5);
        if q != 0 {
            v[j] -= 5 * q;
            let p = &pow[j];
            for i in j + 1..d {
                v[i] += q * p[i];
            }
        }
    }
}
