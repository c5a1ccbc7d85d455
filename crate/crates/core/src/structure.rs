//! Central series, maximal subgroups, abelianizations and the invariants
//! `χ₂`, `k` and `e`.

use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::element::Element;
use crate::error::StructureError;
use crate::group::PcGroup;
use crate::subgroup::{ElementSet, Subgroup, ENUMERATION_LIMIT};

/// Cyclic decomposition of a finite abelian 5-group, largest factor first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AbelianType(pub Vec<u64>);

impl AbelianType {
    pub fn orders(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().product()
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Recovers the type from `|A[5^i]|` for `i = 0, 1, 2, …` (the number of
    /// elements of order dividing `5^i`), until the whole group is reached.
    pub fn from_torsion_counts(counts: &[u64]) -> Self {
        // r_i = log_5(|A[5^i]| / |A[5^{i-1}]|) = number of factors of order >= 5^i
        let mut ranks = Vec::new();
        for w in counts.windows(2) {
            let mut q = w[1] / w[0];
            let mut r = 0;
            while q > 1 {
                q /= 5;
                r += 1;
            }
            ranks.push(r);
        }
        let mut out = Vec::new();
        for i in (0..ranks.len()).rev() {
            let next = ranks.get(i + 1).copied().unwrap_or(0);
            for _ in 0..ranks[i] - next {
                out.push(5u64.pow(i as u32 + 1));
            }
        }
        Self(out)
    }
}

impl core::fmt::Display for AbelianType {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("(")?;
        for (i, o) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{o}")?;
        }
        f.write_str(")")
    }
}

/// `γ_1 = G ⊋ γ_2 ⊋ … ⊋ γ_{c+1} = 1`.
#[derive(Clone, Debug)]
pub struct CentralSeries {
    terms: Vec<Subgroup>,
}

impl CentralSeries {
    /// `γ_j` for `j ≥ 1`; the trivial group past the end of the series.
    pub fn term(&self, j: usize) -> &Subgroup {
        assert!(j >= 1);
        let last = self.terms.len() - 1;
        &self.terms[core::cmp::min(j - 1, last)]
    }

    /// Nilpotency class `c`.
    pub fn class(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn terms(&self) -> &[Subgroup] {
        &self.terms
    }

    /// `log_5 |γ_j|` for `j = 1 ..= c + 1`.
    pub fn log_orders(&self) -> Vec<u32> {
        self.terms.iter().map(Subgroup::log_order).collect()
    }
}

fn guard(g: &PcGroup) -> Result<(), StructureError> {
    if g.n() > ENUMERATION_LIMIT {
        Err(StructureError::TooLarge {
            n: g.n(),
            limit: ENUMERATION_LIMIT,
        })
    } else {
        Ok(())
    }
}

pub fn whole_group(g: &PcGroup) -> Subgroup {
    Subgroup::closure(g, &[g.x(), g.y()])
}

/// `[H, H]`: normal closure in `H` of the commutators of its generators.
pub fn derived_subgroup(g: &PcGroup, h: &Subgroup) -> Subgroup {
    let gens = h.generators();
    let mut comms = Vec::new();
    for (i, u) in gens.iter().enumerate() {
        for v in &gens[i + 1..] {
            comms.push(g.commutator(u, v));
        }
    }
    Subgroup::normal_closure(g, &comms, gens)
}

/// `[M, N]` for subgroups normalised by the generators in `ambient`.
pub fn commutator_subgroup(
    g: &PcGroup,
    m: &Subgroup,
    n: &Subgroup,
    ambient: &[Element],
) -> Subgroup {
    let mut comms = Vec::new();
    for u in m.generators() {
        for v in n.generators() {
            comms.push(g.commutator(u, v));
        }
    }
    Subgroup::normal_closure(g, &comms, ambient)
}

pub fn lower_central_series(g: &PcGroup) -> Result<CentralSeries, StructureError> {
    guard(g)?;
    let ambient = [g.x(), g.y()];
    let whole = whole_group(g);
    let mut terms = alloc::vec![whole];
    loop {
        let last = terms.last().expect("series is never empty");
        if last.is_trivial() {
            break;
        }
        let mut comms = Vec::new();
        for u in last.generators() {
            for s in &ambient {
                comms.push(g.commutator(u, s));
            }
        }
        let next = Subgroup::normal_closure(g, &comms, &ambient);
        if next.order() == last.order() {
            // not nilpotent; cannot happen for a 5-group
            return Err(StructureError::DefectNotInSeries);
        }
        terms.push(next);
    }
    Ok(CentralSeries { terms })
}

/// The six subgroups of index 5 containing `γ₂`, ordered
/// `H_1 = ⟨y, γ₂⟩`, `H_i = ⟨x y^{i-2}, γ₂⟩`.
pub fn maximal_subgroups(g: &PcGroup, gamma2: &Subgroup) -> Result<Vec<Subgroup>, StructureError> {
    let log_index = g.n() as u32 - gamma2.log_order();
    let x5 = g.power(&g.x(), 5);
    let y5 = g.power(&g.y(), 5);
    if log_index != 2 || !gamma2.contains(&x5) || !gamma2.contains(&y5) {
        // G/γ₂ is not elementary abelian of order 25
        return Err(StructureError::MaximalSubgroupCount(0));
    }
    let mut out: Vec<Subgroup> = Vec::with_capacity(6);
    for t in (1..=6).map(|i| maximal_top(g, i)) {
        let mut gens = alloc::vec![t];
        gens.extend_from_slice(gamma2.generators());
        let h = Subgroup::closure(g, &gens);
        if h.log_order() != g.n() as u32 - 1 || out.iter().any(|o| o == &h) {
            return Err(StructureError::MaximalSubgroupCount(out.len()));
        }
        out.push(h);
    }
    Ok(out)
}

/// Quotient `H / D` for `D ⊴ H`: orders of all cosets, via enumeration.
fn coset_orders(g: &PcGroup, h: &Subgroup, d: &Subgroup) -> Vec<u64> {
    let mut marked = ElementSet::new(g.n());
    let mut orders = Vec::new();
    for u in h.elements() {
        if marked.contains(u) {
            continue;
        }
        for k in d.elements() {
            marked.insert(&g.multiply(u, k));
        }
        let mut v = *u;
        let mut ord = 1u64;
        while !d.contains(&v) {
            v = g.power(&v, 5);
            ord *= 5;
        }
        orders.push(ord);
    }
    orders
}

/// Type of `H / D` from the census of coset orders.
pub fn quotient_type(g: &PcGroup, h: &Subgroup, d: &Subgroup) -> AbelianType {
    let orders = coset_orders(g, h, d);
    let total = orders.len() as u64;
    let mut counts = alloc::vec![1u64];
    let mut bound = 1u64;
    while *counts.last().unwrap() < total {
        bound *= 5;
        counts.push(orders.iter().filter(|&&o| o <= bound).count() as u64);
    }
    AbelianType::from_torsion_counts(&counts)
}

/// Cyclic decomposition of `H / [H, H]`.
pub fn abelian_type(g: &PcGroup, h: &Subgroup) -> AbelianType {
    quotient_type(g, h, &derived_subgroup(g, h))
}

/// Least common multiple of element orders.
pub fn exponent(g: &PcGroup, h: &Subgroup) -> u64 {
    h.elements()
        .iter()
        .map(|e| g.element_order(e))
        .max()
        .unwrap_or(1)
}

/// `χ₂(G)` together with its position among the maximal subgroups.
#[derive(Clone, Debug)]
pub struct TwoStepCentralizer {
    /// 1-based index into the `H_i`, or `None` when `χ₂ = G`.
    pub index: Option<usize>,
    pub subgroup: Subgroup,
}

fn centralizes_mod(g: &PcGroup, gens: &[Element], gamma2: &Subgroup, gamma4: &Subgroup) -> bool {
    gens.iter().all(|h| {
        gamma2
            .generators()
            .iter()
            .all(|u| gamma4.contains(&g.commutator(h, u)))
    })
}

/// The largest subgroup acting trivially on `γ₂/γ₄`.
///
/// The defining condition is closed under products and contains `γ₂`, so the
/// result is `G`, one of the `H_i`, or `γ₂` itself; the last case and the
/// case of two qualifying `H_i` are rejected.
pub fn two_step_centralizer(
    g: &PcGroup,
    series: &CentralSeries,
    maximal: &[Subgroup],
) -> Result<TwoStepCentralizer, StructureError> {
    let gamma2 = series.term(2);
    let gamma4 = series.term(4);
    let whole = series.term(1);
    if centralizes_mod(g, whole.generators(), gamma2, gamma4) {
        return Ok(TwoStepCentralizer {
            index: None,
            subgroup: whole.clone(),
        });
    }
    let hits: Vec<usize> = maximal
        .iter()
        .enumerate()
        .filter(|(_, h)| centralizes_mod(g, h.generators(), gamma2, gamma4))
        .map(|(i, _)| i)
        .collect();
    match hits.as_slice() {
        [i] => Ok(TwoStepCentralizer {
            index: Some(i + 1),
            subgroup: maximal[*i].clone(),
        }),
        _ => Err(StructureError::Centralizer(format!(
            "{} maximal subgroups qualify",
            hits.len()
        ))),
    }
}

/// `k` with `[χ₂, γ₂] = γ_{n-k}`.
pub fn defect(
    g: &PcGroup,
    series: &CentralSeries,
    chi2: &Subgroup,
) -> Result<usize, StructureError> {
    let c = commutator_subgroup(g, chi2, series.term(2), &[g.x(), g.y()]);
    let n = g.n();
    (2..=n)
        .find(|&j| series.term(j) == &c)
        .map(|j| n - j)
        .ok_or(StructureError::DefectNotInSeries)
}

/// `e` with `e + 1 = min{ j ≥ 3 : |γ_j / γ_{j+1}| ≤ 5 }`.
pub fn invariant_e(series: &CentralSeries) -> Option<usize> {
    let c = series.class();
    (3..=c.max(3)).find_map(|j| {
        let q = series.term(j).order() / series.term(j + 1).order();
        (1..=5).contains(&q).then_some(j - 1)
    })
}

/// The generator outside `γ₂` used for `H_i`: `y` for `i = 1`, `x y^{i-2}` otherwise.
pub fn maximal_top(g: &PcGroup, i: usize) -> Element {
    assert!((1..=6).contains(&i), "maximal subgroups are numbered 1..=6");
    if i == 1 {
        g.y()
    } else {
        g.multiply(&g.x(), &g.power(&g.y(), i as i64 - 2))
    }
}

// Generator-level invariants. They rely on `γ_j = ⟨s_j, …, s_{n-1}⟩`, which the
// enumerated series confirms for every built group, and never enumerate `G`,
// so they work above the enumeration limit.

/// Largest `j` with `u ∈ γ_j`; `n` for the identity.
pub fn depth(g: &PcGroup, u: &Element) -> usize {
    if !u.in_derived() {
        return 1;
    }
    (2..g.n()).find(|&j| u.get(j) != 0).unwrap_or(g.n())
}

/// Index `i` of the maximal subgroup `H_i` equal to `χ₂`, from the action of
/// its top generator on `γ₂/γ₄`.
pub fn chi2_index_by_generators(g: &PcGroup) -> Result<usize, StructureError> {
    let n = g.n();
    let hits: Vec<usize> = (1..=6)
        .filter(|&i| {
            let h = maximal_top(g, i);
            (2..n).all(|j| depth(g, &g.commutator(&h, &g.s(j))) >= 4)
        })
        .collect();
    match hits.as_slice() {
        [i] => Ok(*i),
        _ => Err(StructureError::Centralizer(format!(
            "{} maximal subgroups qualify",
            hits.len()
        ))),
    }
}

/// `k` from `[χ₂, γ₂] = γ_m`, where `m` is the least depth of `[h, s_j]`;
/// the only normal subgroups inside `γ₂` are terms of the series.
pub fn defect_by_generators(g: &PcGroup, chi2_index: usize) -> usize {
    let h = maximal_top(g, chi2_index);
    let m = (2..g.n())
        .map(|j| depth(g, &g.commutator(&h, &g.s(j))))
        .min()
        .unwrap_or(g.n());
    g.n() - m
}

/// Exponent of the abelian group `γ₂`: the largest order of an `s_j`.
pub fn gamma2_exponent_by_generators(g: &PcGroup) -> u64 {
    (2..g.n())
        .map(|j| g.element_order(&g.s(j)))
        .max()
        .unwrap_or(1)
}

/// `log_5 |H_i / [H_i, H_i]|`, enumerating only `[H_i, H_i] ⊆ γ₃`.
pub fn commutator_factor_log_order(g: &PcGroup, i: usize) -> u32 {
    let h = maximal_top(g, i);
    let mut gens = alloc::vec![h];
    gens.extend((2..g.n()).map(|j| g.s(j)));
    let comms: Vec<Element> = (2..g.n()).map(|j| g.commutator(&h, &g.s(j))).collect();
    let d = Subgroup::normal_closure(g, &comms, &gens);
    g.n() as u32 - 1 - d.log_order()
}

/// `log_5 |γ_j|` for `j = 1, 2, …` down to the trivial term, built from normal
/// closures of commutators without enumerating `G`.
pub fn series_log_orders_by_generators(g: &PcGroup) -> Vec<u32> {
    let ambient = [g.x(), g.y()];
    let mut out = alloc::vec![g.n() as u32];
    let mut term = Subgroup::normal_closure(g, &[g.commutator(&g.x(), &g.y())], &ambient);
    loop {
        out.push(term.log_order());
        if term.is_trivial() || out.len() > g.n() + 1 {
            return out;
        }
        let comms: Vec<Element> = term
            .generators()
            .iter()
            .flat_map(|u| ambient.iter().map(move |s| (u, s)))
            .map(|(u, s)| g.commutator(u, s))
            .collect();
        term = Subgroup::normal_closure(g, &comms, &ambient);
    }
}

/// Every structural invariant of a built group, computed once.
#[derive(Clone, Debug)]
pub struct GroupStructure {
    pub series: CentralSeries,
    pub maximal: Vec<Subgroup>,
    pub maximal_derived: Vec<Subgroup>,
    pub maximal_types: Vec<AbelianType>,
    pub chi2: TwoStepCentralizer,
    pub defect: usize,
    pub invariant_e: Option<usize>,
    pub gamma2_exponent: u64,
}

impl GroupStructure {
    pub fn compute(g: &PcGroup) -> Result<Self, StructureError> {
        let series = lower_central_series(g)?;
        let maximal = maximal_subgroups(g, series.term(2))?;
        let maximal_derived: Vec<Subgroup> =
            maximal.iter().map(|h| derived_subgroup(g, h)).collect();
        let maximal_types = maximal
            .iter()
            .zip(&maximal_derived)
            .map(|(h, d)| quotient_type(g, h, d))
            .collect();
        let chi2 = two_step_centralizer(g, &series, &maximal)?;
        let defect = defect(g, &series, &chi2.subgroup)?;
        let invariant_e = invariant_e(&series);
        let gamma2_exponent = exponent(g, series.term(2));
        Ok(Self {
            series,
            maximal,
            maximal_derived,
            maximal_types,
            chi2,
            defect,
            invariant_e,
            gamma2_exponent,
        })
    }

    pub fn gamma(&self, j: usize) -> &Subgroup {
        self.series.term(j)
    }

    /// Number of maximal subgroups whose commutator factor group has order 25.
    pub fn maximal_with_factor_25(&self) -> usize {
        self.maximal_types
            .iter()
            .filter(|t| t.total() == 25)
            .count()
    }

    pub fn report(&self, g: &PcGroup) -> StructureReport {
        let n = g.n();
        let class = self.series.class();
        let count25 = self.maximal_with_factor_25();
        StructureReport {
            n,
            class,
            coclass: n - class,
            defect_k: self.defect,
            invariant_e: self.invariant_e,
            chi2_index: self.chi2.index,
            subgroup_types: self.maximal_types.clone(),
            gamma2_exponent: self.gamma2_exponent,
            series_log_orders: self.series.log_orders(),
            maximal_with_factor_25: count25,
            lemma_maximal_class: count25 >= 1,
        }
    }
}

/// Serialized summary; field order is the JSON key order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub n: usize,
    pub class: usize,
    pub coclass: usize,
    pub defect_k: usize,
    pub invariant_e: Option<usize>,
    pub chi2_index: Option<usize>,
    pub subgroup_types: Vec<AbelianType>,
    pub gamma2_exponent: u64,
    pub series_log_orders: Vec<u32>,
    pub maximal_with_factor_25: usize,
    /// Maximal class according to the criterion "some maximal subgroup has
    /// commutator factor group of order 25".
    pub lemma_maximal_class: bool,
}

pub fn structure_report(g: &PcGroup) -> Result<StructureReport, StructureError> {
    Ok(GroupStructure::compute(g)?.report(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::PresentationParams;

    fn group(n: i64, w: i64, z: i64, a: &[i64]) -> PcGroup {
        PcGroup::build(&PresentationParams::new(n, w, z, a).unwrap()).unwrap()
    }

    #[test]
    fn torsion_counts_to_type() {
        // Z25 x Z5: |A[1]| = 1, |A[5]| = 25, |A[25]| = 125
        assert_eq!(AbelianType::from_torsion_counts(&[1, 25, 125]).0, [25, 5]);
        assert_eq!(AbelianType::from_torsion_counts(&[1, 125]).0, [5, 5, 5]);
        assert_eq!(AbelianType::from_torsion_counts(&[1]).0, Vec::<u64>::new());
        assert_eq!(AbelianType::from_torsion_counts(&[1, 5, 25, 125]).0, [125]);
    }

    #[test]
    fn series_orders_order_five() {
        let g = group(5, 1, 3, &[2]);
        let s = lower_central_series(&g).unwrap();
        assert_eq!(s.log_orders(), [5, 3, 2, 1, 0]);
        assert_eq!(s.class(), 4);
    }

    #[test]
    fn class_three_at_order_four() {
        let g = group(4, 0, 0, &[]);
        assert_eq!(lower_central_series(&g).unwrap().class(), 3);
    }

    #[test]
    fn derived_subgroups() {
        let g = group(5, 0, 0, &[]);
        let whole = whole_group(&g);
        let gens: Vec<_> = (2..5).map(|j| g.s(j)).collect();
        assert_eq!(derived_subgroup(&g, &whole), Subgroup::closure(&g, &gens));
        let gamma2 = Subgroup::closure(&g, &gens);
        assert!(derived_subgroup(&g, &gamma2).is_trivial());
        let mut h1 = gens.clone();
        h1.insert(0, g.y());
        assert!(derived_subgroup(&g, &Subgroup::closure(&g, &h1)).is_trivial());
    }

    #[test]
    fn maximal_subgroup_layout() {
        let g = group(6, 2, 1, &[3, 1]);
        let s = lower_central_series(&g).unwrap();
        let m = maximal_subgroups(&g, s.term(2)).unwrap();
        assert_eq!(m.len(), 6);
        for (i, h) in m.iter().enumerate() {
            assert_eq!(h.order(), 5usize.pow(5));
            assert!(s.term(2).is_subgroup_of(h));
            for other in &m[i + 1..] {
                assert_ne!(h, other);
            }
        }
        assert!(m[0].contains(&g.y()));
        assert!(m[1].contains(&g.x()));
        assert!(m[2].contains(&g.multiply(&g.x(), &g.y())));
    }

    #[test]
    fn abelianization_types_order_four() {
        let g = group(4, 0, 0, &[]);
        let st = GroupStructure::compute(&g).unwrap();
        assert_eq!(st.maximal_types[0].0, [5, 5, 5]);
        for t in &st.maximal_types[1..] {
            assert_eq!(t.total(), 25);
        }
        assert_eq!(abelian_type(&g, &whole_group(&g)).0, [5, 5]);
    }

    #[test]
    fn report_for_defect_one() {
        let g = group(6, 0, 1, &[1]);
        let r = structure_report(&g).unwrap();
        assert_eq!(r.class, 5);
        assert_eq!(r.coclass, 1);
        assert_eq!(r.defect_k, 1);
        assert_eq!(r.invariant_e, Some(2));
        assert_eq!(r.chi2_index, Some(1));
        assert_eq!(r.gamma2_exponent, 5);
        assert_eq!(r.subgroup_types[0].total(), 5u64.pow(4));
        assert_eq!(r.maximal_with_factor_25, 5);
        assert!(r.lemma_maximal_class);
    }

    #[test]
    fn exponent_of_derived_subgroup() {
        let g = group(7, 0, 0, &[]);
        let s = lower_central_series(&g).unwrap();
        assert_eq!(exponent(&g, s.term(2)), 25);
        assert_eq!(exponent(&g, s.term(7)), 1);
    }

    #[test]
    fn chi2_abelian_without_defect() {
        for n in 4..=6 {
            let g = group(n, 1, 1, &[]);
            let st = GroupStructure::compute(&g).unwrap();
            assert_eq!(st.chi2.index, Some(1));
            assert_eq!(st.defect, 0);
            assert!(derived_subgroup(&g, &st.chi2.subgroup).is_trivial());
        }
    }

    #[test]
    fn kaloujnine_sampled() {
        let g = group(7, 1, 2, &[1, 0, 3]);
        let s = lower_central_series(&g).unwrap();
        for j in 1..=6 {
            for l in 1..=6 {
                let target = s.term(j + l);
                for u in s.term(j).elements().iter().step_by(97).take(20) {
                    for v in s.term(l).elements().iter().step_by(89).take(20) {
                        assert!(target.contains(&g.commutator(u, v)), "j={j} l={l}");
                    }
                }
            }
        }
    }

    #[test]
    fn generator_level_invariants_match_enumeration() {
        for n in 4..=6 {
            for p in PresentationParams::enumerate(n).iter().step_by(3) {
                let g = PcGroup::build(p).unwrap();
                let st = GroupStructure::compute(&g).unwrap();
                let chi2 = chi2_index_by_generators(&g).unwrap();
                assert_eq!(Some(chi2), st.chi2.index, "{p}");
                assert_eq!(defect_by_generators(&g, chi2), st.defect, "{p}");
                assert_eq!(gamma2_exponent_by_generators(&g), st.gamma2_exponent, "{p}");
                for i in 1..=6 {
                    assert_eq!(
                        5u64.pow(commutator_factor_log_order(&g, i)),
                        st.maximal_types[i - 1].total(),
                        "{p} H_{i}"
                    );
                }
                assert_eq!(series_log_orders_by_generators(&g), st.series.log_orders());
                for j in 1..=n {
                    for u in st.gamma(j).elements().iter().step_by(7) {
                        assert!(depth(&g, u) >= j);
                    }
                }
            }
        }
    }
}
