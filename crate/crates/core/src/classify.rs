//! Standard generators, family labels, the transfer-driven classification and
//! the proposition sweeps.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::element::Element;
use crate::error::{ClassifyError, LabelError, StructureError};
use crate::group::PcGroup;
use crate::params::{PresentationParams, MAX_DEFECT};
use crate::structure::{
    chi2_index_by_generators, commutator_factor_log_order, defect_by_generators, depth,
    gamma2_exponent_by_generators, series_log_orders_by_generators, GroupStructure,
};
use crate::subgroup::ElementSet;
use crate::transfer::{maximal_transfer_fingerprint, transfer_general, transfer_kernel_image};

/// The label `G_a^(n)(z,w)` of a family member.
///
/// `a` is written `0` when empty, as a bare digit when it has one entry and as
/// `(a_{n-1},…,a_{n-k})` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct FamilyLabel {
    pub n: usize,
    pub a: Vec<u8>,
    pub z: u8,
    pub w: u8,
}

impl FamilyLabel {
    pub fn new(n: usize, a: &[u8], z: u8, w: u8) -> Result<Self, LabelError> {
        let a: Vec<i64> = a.iter().map(|&v| v as i64).collect();
        Ok(Self::from_params(&PresentationParams::new(
            n as i64, w as i64, z as i64, &a,
        )?))
    }

    pub fn from_params(p: &PresentationParams) -> Self {
        Self {
            n: p.n(),
            a: p.a().to_vec(),
            z: p.z(),
            w: p.w(),
        }
    }

    pub fn to_params(&self) -> PresentationParams {
        let a: Vec<i64> = self.a.iter().map(|&v| v as i64).collect();
        PresentationParams::new(self.n as i64, self.w as i64, self.z as i64, &a)
            .expect("labels are validated on construction")
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }
}

impl fmt::Display for FamilyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("G_")?;
        match self.a.as_slice() {
            [] => f.write_str("0")?,
            [v] => write!(f, "{v}")?,
            vs => {
                f.write_str("(")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str(")")?;
            }
        }
        write!(f, "^({})({},{})", self.n, self.z, self.w)
    }
}

impl FromStr for FamilyLabel {
    type Err = LabelError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| LabelError::Malformed {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let digit = |s: &str| -> Result<u8, LabelError> {
            match s.as_bytes() {
                [c @ b'0'..=b'4'] => Ok(c - b'0'),
                _ => Err(bad("exponents are single digits 0..4")),
            }
        };
        let rest = text
            .strip_prefix("G_")
            .ok_or_else(|| bad("expected prefix G_"))?;
        let (a_text, rest) = rest.split_once("^(").ok_or_else(|| bad("expected ^(n)"))?;
        let a: Vec<u8> = if let Some(inner) = a_text.strip_prefix('(') {
            let inner = inner
                .strip_suffix(')')
                .ok_or_else(|| bad("unclosed a tuple"))?;
            let a = inner.split(',').map(digit).collect::<Result<Vec<_>, _>>()?;
            if a.len() < 2 {
                return Err(bad("tuples need at least two entries"));
            }
            a
        } else {
            match digit(a_text)? {
                0 => Vec::new(),
                v => vec![v],
            }
        };
        if a.last() == Some(&0) {
            return Err(bad("last entry of a must be nonzero"));
        }
        let (n_text, rest) = rest.split_once(")(").ok_or_else(|| bad("expected (z,w)"))?;
        let n: usize = n_text.parse().map_err(|_| bad("n is not a number"))?;
        let zw = rest
            .strip_suffix(')')
            .ok_or_else(|| bad("unclosed (z,w)"))?;
        let (z, w) = zw.split_once(',').ok_or_else(|| bad("expected (z,w)"))?;
        Self::new(n, &a, digit(z)?, digit(w)?)
    }
}

impl From<FamilyLabel> for String {
    fn from(l: FamilyLabel) -> Self {
        l.to_string()
    }
}

impl TryFrom<String> for FamilyLabel {
    type Error = LabelError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Coordinates of `u ∈ γ₂` in a basis `b_2, …, b_{n-1}` with `b_j` of depth `j`.
fn coordinates(g: &PcGroup, basis: &[Element], u: &Element) -> Option<Vec<u8>> {
    if !u.in_derived() {
        return None;
    }
    let mut rest = *u;
    let mut coords = vec![0u8; basis.len()];
    for (i, b) in basis.iter().enumerate() {
        let j = i + 2;
        let lead = b.get(j);
        let c = (rest.get(j) * inverse_mod5(lead)) % 5;
        if c != 0 {
            rest = g.multiply(&rest, &g.power(b, -(c as i64)));
            coords[i] = c;
        }
    }
    rest.is_identity().then_some(coords)
}

fn inverse_mod5(v: u8) -> u8 {
    match v % 5 {
        1 => 1,
        2 => 3,
        3 => 2,
        4 => 4,
        _ => panic!("zero has no inverse mod 5"),
    }
}

/// A generator pair of the built group together with the parameters it reads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardGenerators {
    pub x: Element,
    pub y: Element,
    /// `s_2, …, s_{n-1}` built from `x` and `y`.
    pub s: Vec<Element>,
    pub params: PresentationParams,
}

impl StandardGenerators {
    fn word(&self, g: &PcGroup, e: &Element) -> Element {
        let mut acc = g.power(&self.x, e.get(0) as i64);
        acc = g.multiply(&acc, &g.power(&self.y, e.get(1) as i64));
        for (i, s) in self.s.iter().enumerate() {
            let c = e.get(i + 2);
            if c != 0 {
                acc = g.multiply(&acc, &g.power(s, c as i64));
            }
        }
        acc
    }
}

/// Reads `(w, z, a)` from the relation format for the pair `(x', y')`, or
/// `None` when the pair does not fit it.
pub fn read_parameters(g: &PcGroup, x: &Element, y: &Element) -> Option<StandardGenerators> {
    let n = g.n();
    let mut s = Vec::with_capacity(n - 2);
    let mut cur = g.commutator(y, x);
    for j in 2..n {
        if depth(g, &cur) != j {
            return None;
        }
        s.push(cur);
        cur = g.commutator(&cur, x);
    }
    if !cur.is_identity() {
        return None;
    }
    let sj = |j: usize| if j < n { s[j - 2] } else { g.identity() };
    let word = |parts: &[(Element, i64)]| {
        parts.iter().fold(g.identity(), |acc, (e, m)| {
            g.multiply(&acc, &g.power(e, *m))
        })
    };
    for j in 2..n {
        let r = word(&[
            (sj(j), 5),
            (sj(j + 1), 10),
            (sj(j + 2), 10),
            (sj(j + 3), 5),
            (sj(j + 4), 1),
        ]);
        if !r.is_identity() {
            return None;
        }
    }
    // only the s_{n-1} coordinate may be nonzero
    let top = |u: &Element| -> Option<u8> {
        let c = coordinates(g, &s, u)?;
        let (last, lower) = c.split_last()?;
        lower.iter().all(|&v| v == 0).then_some(*last)
    };
    let w = top(&g.power(x, 5))?;
    let t = word(&[(*y, 5), (sj(2), 10), (sj(3), 10), (sj(4), 5), (sj(5), 1)]);
    let z = top(&t)?;
    let c = coordinates(g, &s, &g.commutator(y, &s[0]))?;
    let bound = core::cmp::min(n - 4, MAX_DEFECT);
    // c is indexed by j - 2; a runs j = n-1, n-2, …
    let split = c.len() - bound;
    if c[..split].iter().any(|&v| v != 0) {
        return None;
    }
    let a: Vec<i64> = c[split..].iter().rev().map(|&v| v as i64).collect();
    let params = PresentationParams::new(n as i64, w as i64, z as i64, &a).ok()?;
    Some(StandardGenerators {
        x: *x,
        y: *y,
        s,
        params,
    })
}

/// True if `x ↦ x', y ↦ y'` satisfies every relation of the polycyclic
/// presentation built from the read parameters. The images generate the group
/// and both groups have order `5^n`, so this is an isomorphism.
pub fn realizes(g: &PcGroup, std: &StandardGenerators) -> bool {
    let Ok(reference) = PcGroup::build(&std.params) else {
        return false;
    };
    let n = g.n();
    let mut images = vec![std.x, std.y];
    images.extend_from_slice(&std.s);
    for (i, img) in images.iter().enumerate() {
        if std.word(g, &reference.power_table()[i]) != g.power(img, 5) {
            return false;
        }
    }
    let yx = reference.conjugate(&reference.y(), &reference.x());
    if std.word(g, &yx) != g.conjugate(&std.y, &std.x) {
        return false;
    }
    for j in 2..n {
        let sj = &std.s[j - 2];
        if std.word(g, &reference.conj_x()[j - 2]) != g.conjugate(sj, &std.x)
            || std.word(g, &reference.conj_y()[j - 2]) != g.conjugate(sj, &std.y)
        {
            return false;
        }
        for si in &std.s[..j - 2] {
            if !g.commutator(si, sj).is_identity() {
                return false;
            }
        }
    }
    true
}

fn in_chi2(u: &Element, chi2_index: usize) -> bool {
    // H_1 = ⟨y, γ₂⟩, H_i = ⟨x y^{i-2}, γ₂⟩
    let (ex, ey) = (u.get(0), u.get(1));
    if chi2_index == 1 {
        ex == 0
    } else {
        (ey + 5 - (ex * (chi2_index as u8 - 2)) % 5).is_multiple_of(5)
    }
}

/// The lexicographically least pair `x' ∉ χ₂`, then `y' ∈ χ₂ ∖ γ₂`, that
/// reproduces the full presentation.
pub fn standard_generators(g: &PcGroup) -> Result<StandardGenerators, StructureError> {
    let chi2 = chi2_index_by_generators(g)?;
    let n = g.n();
    let all = || (0..g.order()).map(move |i| Element::from_index(n, i));
    for x in all().filter(|u| !in_chi2(u, chi2)) {
        for y in all().filter(|u| in_chi2(u, chi2) && !u.in_derived()) {
            if let Some(std) = read_parameters(g, &x, &y) {
                if realizes(g, &std) {
                    return Ok(std);
                }
            }
        }
    }
    Err(StructureError::NoStandardPair)
}

/// Parameters read from every substitution `(x^d y^e, y^c)` of the standard
/// pair that still realizes the presentation, sorted and deduplicated. All of
/// them name groups isomorphic to `g`.
pub fn label_orbit(g: &PcGroup, std: &StandardGenerators) -> Vec<FamilyLabel> {
    let mut out = Vec::new();
    let chi2 = chi2_index_by_generators(g).unwrap_or(1);
    for d in 1..5 {
        for e in 0..5 {
            let x = g.multiply(&g.power(&std.x, d), &g.power(&std.y, e));
            if in_chi2(&x, chi2) {
                continue;
            }
            for c in 1..5 {
                let y = g.power(&std.y, c);
                if let Some(r) = read_parameters(g, &x, &y) {
                    if realizes(g, &r) {
                        out.push(FamilyLabel::from_params(&r.params));
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

pub fn family_label(g: &PcGroup) -> Result<FamilyLabel, ClassifyError> {
    let std = standard_generators(g)?;
    let orbit = label_orbit(g, &std);
    Ok(orbit
        .into_iter()
        .min_by(|a, b| (a.z, a.w, &a.a).cmp(&(b.z, b.w, &b.a)))
        .unwrap_or_else(|| FamilyLabel::from_params(&std.params)))
}

/// Largest order exponent accepted by [`brute_force_isomorphic`].
pub const BRUTE_FORCE_LIMIT: usize = 5;

/// True if `x_1 ↦ x_2, y_1 ↦ y_2` extends to a bijective homomorphism, by
/// walking the Cayley graph of the first group and checking every edge.
pub fn extends_to_isomorphism(
    g1: &PcGroup,
    gens1: [Element; 2],
    g2: &PcGroup,
    gens2: [Element; 2],
) -> bool {
    if g1.order() != g2.order() {
        return false;
    }
    let mut slot = vec![u32::MAX; g1.order()];
    let mut used = ElementSet::new(g2.n());
    let mut queue = vec![(g1.identity(), g2.identity())];
    slot[g1.identity().index()] = 0;
    used.insert(&g2.identity());
    let mut i = 0;
    while i < queue.len() {
        let (u, img) = queue[i];
        for (a, b) in gens1.iter().zip(&gens2) {
            let v = g1.multiply(&u, a);
            let w = g2.multiply(&img, b);
            match slot[v.index()] {
                u32::MAX => {
                    if !used.insert(&w) {
                        return false;
                    }
                    slot[v.index()] = queue.len() as u32;
                    queue.push((v, w));
                }
                k => {
                    if queue[k as usize].1 != w {
                        return false;
                    }
                }
            }
        }
        i += 1;
    }
    queue.len() == g1.order()
}

/// Isomorphism invariants that are cheap to compare: the number of elements of
/// each order, the transfer triviality on `χ₂`, and how many of the other five
/// maximal subgroups have trivial transfer.
fn census(g: &PcGroup) -> Result<(Vec<usize>, bool, usize), StructureError> {
    let mut orders = vec![0usize; g.n() + 1];
    for i in 0..g.order() {
        let ord = g.element_order(&Element::from_index(g.n(), i));
        orders[ord.ilog(5) as usize] += 1;
    }
    let chi2 = chi2_index_by_generators(g)?;
    let fp = maximal_transfer_fingerprint(g);
    let others = (1..=6).filter(|&i| i != chi2 && fp[i - 1]).count();
    Ok((orders, fp[chi2 - 1], others))
}

/// Exhaustive isomorphism test for `n ≤ 5`.
///
/// Isomorphisms preserve `γ₂` and `χ₂`, so the image of the first group's
/// standard pair is searched among `x' ∉ χ₂`, `y' ∈ χ₂ ∖ γ₂` whose relation
/// format matches; each candidate is confirmed edge by edge. Groups whose
/// cheap invariants differ are rejected before the search. A seed shuffles the
/// search order without changing the answer.
pub fn brute_force_isomorphic(
    g1: &PcGroup,
    g2: &PcGroup,
    seed: Option<u64>,
) -> Result<bool, ClassifyError> {
    for n in [g1.n(), g2.n()] {
        if n > BRUTE_FORCE_LIMIT {
            return Err(ClassifyError::SizeGuard {
                n,
                limit: BRUTE_FORCE_LIMIT,
            });
        }
    }
    if g1.n() != g2.n() || census(g1)? != census(g2)? {
        return Ok(false);
    }
    let n = g2.n();
    let std = standard_generators(g1)?;
    let chi2 = chi2_index_by_generators(g2)?;
    let all = (0..g2.order()).map(|i| Element::from_index(n, i));
    let mut xs: Vec<Element> = all
        .clone()
        .filter(|u| !in_chi2(u, chi2) && depth(g2, &g2.power(u, 5)) >= n - 1)
        .collect();
    let mut ys: Vec<Element> = all
        .filter(|u| in_chi2(u, chi2) && !u.in_derived())
        .collect();
    if let Some(seed) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        xs.shuffle(&mut rng);
        ys.shuffle(&mut rng);
    }
    for x in &xs {
        for y in &ys {
            let Some(r) = read_parameters(g2, x, y) else {
                continue;
            };
            if r.params == std.params && extends_to_isomorphism(g1, [std.x, std.y], g2, [*x, *y]) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// The statements checked by the sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PropositionId {
    #[serde(rename = "3.1")]
    Prop31,
    #[serde(rename = "3.2")]
    Prop32,
    #[serde(rename = "3.3")]
    Prop33,
    #[serde(rename = "thm2.2")]
    Thm22,
    #[serde(rename = "lemma2.1")]
    Lemma21,
}

impl PropositionId {
    pub const ALL: [Self; 5] = [
        Self::Prop31,
        Self::Prop32,
        Self::Prop33,
        Self::Thm22,
        Self::Lemma21,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Prop31 => "3.1",
            Self::Prop32 => "3.2",
            Self::Prop33 => "3.3",
            Self::Thm22 => "thm2.2",
            Self::Lemma21 => "lemma2.1",
        }
    }
}

impl fmt::Display for PropositionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PropositionId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "3.1" | "prop31" | "prop3.1" => Ok(Self::Prop31),
            "3.2" | "prop32" | "prop3.2" => Ok(Self::Prop32),
            "3.3" | "prop33" | "prop3.3" => Ok(Self::Prop33),
            "thm2.2" | "thm22" => Ok(Self::Thm22),
            "lemma2.1" | "lemma21" => Ok(Self::Lemma21),
            _ => Err(format!("unknown proposition {s:?}")),
        }
    }
}

/// Every label `G_a^(n)(z,w)` with `k ≤ max_k`.
fn labels_up_to_defect(n: usize, z: u8, w: u8, max_k: usize) -> Vec<FamilyLabel> {
    PresentationParams::enumerate(n)
        .into_iter()
        .filter(|p| p.z() == z && p.w() == w && p.k() <= max_k)
        .map(|p| FamilyLabel::from_params(&p))
        .collect()
}

/// Outcome of the transfer-driven case distinction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub trigger: Option<PropositionId>,
    pub candidates: Vec<FamilyLabel>,
    pub diagnostic: String,
}

/// Hypotheses of the three propositions on a triviality fingerprint of
/// `V_{H_1}, …, V_{H_6}`.
pub fn hypothesis(id: PropositionId, fp: &[bool; 6]) -> bool {
    match id {
        PropositionId::Prop31 => fp[0] && fp[1],
        PropositionId::Prop32 => fp[1] && fp[2..].iter().any(|&t| t),
        PropositionId::Prop33 => fp[2..].iter().filter(|&&t| t).count() >= 2,
        PropositionId::Thm22 | PropositionId::Lemma21 => true,
    }
}

/// Candidate families for a group of order `5^n` with the given fingerprint,
/// trying the three propositions in order.
pub fn classify_fingerprint(n: usize, fp: &[bool; 6]) -> Classification {
    let found = |id, candidates: Vec<FamilyLabel>, diagnostic: String| Classification {
        trigger: Some(id),
        candidates,
        diagnostic,
    };
    let zero = |n| FamilyLabel::new(n, &[], 0, 0).expect("valid label");
    if hypothesis(PropositionId::Prop31, fp) {
        let c = match n {
            4 => vec![zero(4)],
            5 => labels_up_to_defect(5, 0, 0, 1),
            6 => labels_up_to_defect(6, 1, 0, 2),
            _ => Vec::new(),
        };
        let d = if c.is_empty() {
            format!("V_H1 and V_H2 trivial, but the proposition excludes n = {n}")
        } else {
            String::from("V_H1 and V_H2 trivial")
        };
        return found(PropositionId::Prop31, c, d);
    }
    if hypothesis(PropositionId::Prop32, fp) {
        let c = match n {
            5 | 6 => labels_up_to_defect(n, 0, 0, n - 4),
            n if n >= 7 => vec![zero(n)],
            _ => Vec::new(),
        };
        return found(
            PropositionId::Prop32,
            c,
            String::from("V_H2 and some V_Hi, i >= 3, trivial"),
        );
    }
    if hypothesis(PropositionId::Prop33, fp) {
        return found(
            PropositionId::Prop33,
            vec![zero(n)],
            String::from("two of V_H3, ..., V_H6 trivial"),
        );
    }
    Classification {
        trigger: None,
        candidates: Vec::new(),
        diagnostic: String::from(
            "no proposition applies: V_H2 nontrivial and at most one V_Hi, i >= 3, trivial",
        ),
    }
}

pub fn classify_by_transfers(g: &PcGroup) -> Classification {
    classify_fingerprint(g.n(), &maximal_transfer_fingerprint(g))
}

/// Everything the sweeps look at for one parameter tuple. All of it is read
/// from generators, so it is available at every order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TupleObservation {
    pub params: PresentationParams,
    pub label: FamilyLabel,
    /// Triviality of `V_{H_i → γ₂}` for `i = 1..6`.
    pub fingerprint: [bool; 6],
    pub k: usize,
    pub gamma2_exponent: u64,
    pub chi2_index: usize,
    /// `log_5 |H_i / [H_i, H_i]|` for `i = 1..6`.
    pub factor_log_orders: [u32; 6],
    pub series_log_orders: Vec<u32>,
    pub outside_verified_family: bool,
}

impl TupleObservation {
    pub fn class(&self) -> usize {
        self.series_log_orders.iter().filter(|&&o| o > 0).count()
    }
}

pub fn observe(g: &PcGroup) -> Result<TupleObservation, ClassifyError> {
    let chi2_index = chi2_index_by_generators(g)?;
    let mut factor_log_orders = [0u32; 6];
    for (i, slot) in factor_log_orders.iter_mut().enumerate() {
        *slot = commutator_factor_log_order(g, i + 1);
    }
    Ok(TupleObservation {
        params: g.params().clone(),
        label: family_label(g)?,
        fingerprint: maximal_transfer_fingerprint(g),
        k: defect_by_generators(g, chi2_index),
        gamma2_exponent: gamma2_exponent_by_generators(g),
        chi2_index,
        factor_log_orders,
        series_log_orders: series_log_orders_by_generators(g),
        outside_verified_family: g.params().outside_verified_family(),
    })
}

/// Image and kernel of `V_{χ₂ → γ₂}` against `γ_5` and `γ_{n-4}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelImageCheck {
    pub image_log_order: u32,
    pub kernel_log_order: u32,
    pub image_is_gamma5: bool,
    pub kernel_is_gamma_n_minus_4: bool,
}

pub fn chi2_kernel_image(g: &PcGroup) -> Result<KernelImageCheck, ClassifyError> {
    let st = GroupStructure::compute(g)?;
    let i = st
        .chi2
        .index
        .ok_or_else(|| StructureError::Centralizer(String::from("chi2 = G")))?;
    let source = &st.maximal[i - 1];
    let t = transfer_general(g, source, st.gamma(2))?;
    let ki = transfer_kernel_image(g, source, st.gamma(2), &t)?;
    Ok(KernelImageCheck {
        image_log_order: ki.image.log_order(),
        kernel_log_order: ki.kernel.log_order(),
        image_is_gamma5: ki.image == *st.gamma(5),
        kernel_is_gamma_n_minus_4: ki.kernel == *st.gamma(g.n() - 4),
    })
}

/// Reasons the statement fails for this tuple; empty when it holds or its
/// hypothesis does not apply.
pub fn violations(
    id: PropositionId,
    g: &PcGroup,
    obs: &TupleObservation,
) -> Result<Vec<String>, ClassifyError> {
    let n = obs.params.n();
    let l = &obs.label;
    let mut out = Vec::new();
    let mut expect = |ok: bool, what: String| {
        if !ok {
            out.push(what);
        }
    };
    if !hypothesis(id, &obs.fingerprint) {
        return Ok(out);
    }
    match id {
        PropositionId::Prop31 => {
            expect(n <= 6, format!("hypothesis holds at n = {n} > 6"));
            expect(
                obs.gamma2_exponent == 5,
                format!("exponent of gamma_2 is {}", obs.gamma2_exponent),
            );
            let family = match n {
                4 => l.k() == 0 && (l.z, l.w) == (0, 0),
                5 => (l.z, l.w) == (0, 0) && l.k() <= 1,
                6 => (l.z, l.w) == (1, 0) && l.k() <= 2,
                _ => false,
            };
            expect(family, format!("label {l} outside the stated family"));
        }
        PropositionId::Prop32 => {
            if n >= 5 {
                expect(
                    (l.z, l.w) == (0, 0),
                    format!("label {l} has (z,w) != (0,0)"),
                );
            }
            if n >= 7 {
                expect(
                    obs.k == 0,
                    format!("defect k = {} at n = {n}, expected 0", obs.k),
                );
                if n == 7 {
                    let ki = chi2_kernel_image(g)?;
                    expect(
                        ki.image_is_gamma5,
                        format!("Im V_chi2 has order 5^{}, not gamma_5", ki.image_log_order),
                    );
                    expect(
                        ki.kernel_is_gamma_n_minus_4,
                        format!(
                            "ker V_chi2 has order 5^{}, not gamma_(n-4)",
                            ki.kernel_log_order
                        ),
                    );
                }
            }
        }
        PropositionId::Prop33 => {
            expect(
                (l.z, l.w) == (0, 0),
                format!("label {l} has (z,w) != (0,0)"),
            );
            expect(obs.k == 0, format!("defect k = {}, expected 0", obs.k));
        }
        PropositionId::Thm22 => {
            let want_h1 = (n - obs.k - 1) as u32;
            for (i, &f) in obs.factor_log_orders.iter().enumerate() {
                let want = if i + 1 == obs.chi2_index { want_h1 } else { 2 };
                expect(
                    f == want,
                    format!("|H_{}/H_{}'| = 5^{f}, expected 5^{want}", i + 1, i + 1),
                );
            }
        }
        PropositionId::Lemma21 => {
            let count = obs.factor_log_orders.iter().filter(|&&f| f == 2).count();
            expect(
                count >= 5,
                format!("only {count} maximal subgroups with factor order 25"),
            );
            let maximal_class = obs.class() == n - 1;
            expect(
                (count >= 1) == maximal_class,
                format!("criterion says {} but class is {}", count >= 1, obs.class()),
            );
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub params: PresentationParams,
    pub label: FamilyLabel,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropositionReport {
    pub proposition: PropositionId,
    pub n_range: [usize; 2],
    pub tuples_tested: usize,
    pub expected_tuples: usize,
    pub hypothesis_count: usize,
    pub violations: Vec<Violation>,
    pub observations: Vec<TupleObservation>,
}

impl PropositionReport {
    /// Merges per-tuple results in parameter order, so the report does not
    /// depend on the order they were computed in.
    pub fn assemble(
        id: PropositionId,
        n_range: [usize; 2],
        mut results: Vec<(TupleObservation, Vec<String>)>,
    ) -> Self {
        results.sort_by(|a, b| a.0.params.cmp(&b.0.params));
        let mut violations = Vec::new();
        let mut observations = Vec::with_capacity(results.len());
        let mut hypothesis_count = 0;
        for (obs, reasons) in results {
            if hypothesis(id, &obs.fingerprint) {
                hypothesis_count += 1;
            }
            for reason in reasons {
                violations.push(Violation {
                    params: obs.params.clone(),
                    label: obs.label.clone(),
                    reason,
                });
            }
            observations.push(obs);
        }
        Self {
            proposition: id,
            n_range,
            tuples_tested: observations.len(),
            expected_tuples: (n_range[0]..=n_range[1])
                .map(PresentationParams::count)
                .sum(),
            hypothesis_count,
            violations,
            observations,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.tuples_tested == self.expected_tuples
    }
}

/// Builds, observes and checks one tuple.
pub fn verify_tuple(
    id: PropositionId,
    params: &PresentationParams,
) -> Result<(TupleObservation, Vec<String>), ClassifyError> {
    let g = PcGroup::build(params).map_err(|e| ClassifyError::Sweep {
        params: params.to_string(),
        reason: e.to_string(),
    })?;
    let obs = observe(&g)?;
    let v = violations(id, &g, &obs)?;
    Ok((obs, v))
}

/// Every canonical tuple with `n` in the range.
pub fn sweep_params(n_range: [usize; 2]) -> Vec<PresentationParams> {
    (n_range[0]..=n_range[1])
        .flat_map(PresentationParams::enumerate)
        .collect()
}

/// Sequential sweep over every tuple in the range.
pub fn verify_proposition(
    id: PropositionId,
    n_range: [usize; 2],
) -> Result<PropositionReport, ClassifyError> {
    let results = sweep_params(n_range)
        .iter()
        .map(|p| verify_tuple(id, p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PropositionReport::assemble(id, n_range, results))
}
