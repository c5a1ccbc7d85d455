//! Subgroups as explicit element sets.

use alloc::vec;
use alloc::vec::Vec;

use crate::element::Element;
use crate::group::PcGroup;

/// Largest order exponent for which subgroups are enumerated.
pub const ENUMERATION_LIMIT: usize = 8;

/// Membership bitset over the `5^n` normal forms.
#[derive(Clone, PartialEq, Eq)]
pub struct ElementSet {
    n: usize,
    bits: Vec<u64>,
    len: usize,
}

impl ElementSet {
    pub fn new(n: usize) -> Self {
        let size = 5usize.pow(n as u32);
        Self {
            n,
            bits: vec![0; size.div_ceil(64)],
            len: 0,
        }
    }

    pub fn contains(&self, e: &Element) -> bool {
        let i = e.index();
        self.bits[i >> 6] >> (i & 63) & 1 == 1
    }

    /// Returns true if `e` was not present.
    pub fn insert(&mut self, e: &Element) -> bool {
        let i = e.index();
        let word = &mut self.bits[i >> 6];
        let mask = 1u64 << (i & 63);
        if *word & mask == 0 {
            *word |= mask;
            self.len += 1;
            true
        } else {
            false
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// Elements in increasing normal-form order.
    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        let n = self.n;
        self.bits.iter().enumerate().flat_map(move |(wi, &word)| {
            let mut w = word;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(Element::from_index(n, wi * 64 + b))
            })
        })
    }
}

impl core::fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "ElementSet(n = {}, {} elements)", self.n, self.len)
    }
}

/// A subgroup given by generators together with its full element set.
#[derive(Clone, Debug)]
pub struct Subgroup {
    generators: Vec<Element>,
    elements: Vec<Element>,
    set: ElementSet,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.set == other.set
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn trivial(g: &PcGroup) -> Self {
        Self::closure(g, &[])
    }

    /// Smallest subgroup containing `gens`, by breadth-first right
    /// multiplication from the identity. Generators already inside the span of
    /// earlier ones are dropped.
    pub fn closure(g: &PcGroup, gens: &[Element]) -> Self {
        assert!(
            g.n() <= ENUMERATION_LIMIT,
            "subgroup enumeration is limited to n <= {ENUMERATION_LIMIT}"
        );
        let mut set = ElementSet::new(g.n());
        let elements = vec![g.identity()];
        set.insert(&elements[0]);
        let mut sub = Self {
            generators: Vec::new(),
            elements,
            set,
        };
        for s in gens {
            sub.extend(g, s);
        }
        sub
    }

    /// Adds a generator and closes again. Returns false if `s` was already a member.
    pub fn extend(&mut self, g: &PcGroup, s: &Element) -> bool {
        if self.contains(s) {
            return false;
        }
        let old = self.elements.len();
        self.generators.push(*s);
        let mut i = 0;
        while i < self.elements.len() {
            let u = self.elements[i];
            // old elements times old generators are already present
            let from = if i < old {
                self.generators.len() - 1
            } else {
                0
            };
            for k in from..self.generators.len() {
                let p = g.multiply(&u, &self.generators[k]);
                if self.set.insert(&p) {
                    self.elements.push(p);
                }
            }
            i += 1;
        }
        true
    }

    /// Smallest subgroup containing `gens` that is normalised by `ambient`.
    pub fn normal_closure(g: &PcGroup, gens: &[Element], ambient: &[Element]) -> Self {
        let mut sub = Self::closure(g, gens);
        loop {
            let mut extra = None;
            'scan: for s in &sub.generators {
                for h in ambient {
                    let c = g.conjugate(s, h);
                    if !sub.contains(&c) {
                        extra = Some(c);
                        break 'scan;
                    }
                }
            }
            match extra {
                Some(c) => {
                    sub.extend(g, &c);
                }
                None => return sub,
            }
        }
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    /// Elements in discovery order, starting with the identity.
    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn set(&self) -> &ElementSet {
        &self.set
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `log_5` of the order.
    pub fn log_order(&self) -> u32 {
        let mut o = self.order();
        let mut e = 0;
        while o > 1 {
            o /= 5;
            e += 1;
        }
        e
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.set.contains(e)
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.set.is_subset(&other.set)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// True if conjugation by every generator of `by` preserves this subgroup.
    pub fn is_normalized_by(&self, g: &PcGroup, by: &[Element]) -> bool {
        self.generators
            .iter()
            .all(|s| by.iter().all(|h| self.contains(&g.conjugate(s, h))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::PresentationParams;

    fn group(n: i64, w: i64, z: i64, a: &[i64]) -> PcGroup {
        PcGroup::build(&PresentationParams::new(n, w, z, a).unwrap()).unwrap()
    }

    #[test]
    fn trivial_closure() {
        let g = group(5, 0, 0, &[]);
        let t = Subgroup::closure(&g, &[g.identity()]);
        assert_eq!(t.order(), 1);
        assert!(t.is_trivial());
    }

    #[test]
    fn derived_generators_span_order_n_minus_2() {
        for n in 4..=7 {
            let g = group(n, 1, 0, &[]);
            let gens: Vec<_> = (2..n as usize).map(|j| g.s(j)).collect();
            let sub = Subgroup::closure(&g, &gens);
            assert_eq!(sub.order(), 5usize.pow(n as u32 - 2));
        }
    }

    #[test]
    fn chi2_candidate_at_order_five() {
        let g = group(5, 0, 0, &[1]);
        let sub = Subgroup::closure(&g, &[g.y(), g.s(2), g.s(3), g.s(4)]);
        assert_eq!(sub.order(), 625);
        // enumeration oracle: exactly the normal forms with e_x = 0
        let brute = (0..g.order())
            .map(|i| Element::from_index(5, i))
            .filter(|e| e.get(0) == 0)
            .count();
        assert_eq!(brute, sub.order());
        assert!(sub.elements().iter().all(|e| e.get(0) == 0));
    }

    #[test]
    fn set_iteration_is_sorted() {
        let g = group(4, 0, 0, &[]);
        let sub = Subgroup::closure(&g, &[g.x(), g.y()]);
        let v: Vec<_> = sub.set().iter().collect();
        assert_eq!(v.len(), 625);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn normal_closure_of_s2() {
        let g = group(6, 0, 0, &[]);
        let ambient = [g.x(), g.y()];
        let nc = Subgroup::normal_closure(&g, &[g.s(2)], &ambient);
        assert_eq!(nc.order(), 5usize.pow(4));
        assert!(nc.is_normalized_by(&g, &ambient));
    }
}
