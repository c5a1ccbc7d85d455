//! Transfer homomorphisms into normal subgroups of index 5.
//!
//! For `N ⊴ H` with `H/N` cyclic of order 5 and a representative system
//! `g_1, …, g_5` of `H/N`, the transfer sends `g` to
//! `∏ g_i^{-1} g^f g_i` over one representative per `⟨g⟩`-orbit on the cosets,
//! where `f` is the order of `gN`, read modulo `[N, N]`. With a prime index
//! either `g ∈ N` (`f = 1`, five orbits) or `g ∉ N` (`f = 5`, one orbit).

use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use crate::element::Element;
use crate::error::TransferError;
use crate::group::PcGroup;
use crate::structure::derived_subgroup;
pub use crate::structure::maximal_top;
use crate::subgroup::{ElementSet, Subgroup};

/// Images of the source generators in `N / [N, N]`, each given by the least
/// normal form in its coset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferMap {
    pub source_generators: Vec<Element>,
    pub images: Vec<Element>,
    pub trivial: bool,
}

impl TransferMap {
    pub fn is_trivial(&self) -> bool {
        self.trivial
    }
}

/// One representative per coset of `target` in `source`, each the least
/// normal form of its coset, in increasing order.
pub fn coset_reps(
    g: &PcGroup,
    source: &Subgroup,
    target: &Subgroup,
) -> Result<Vec<Element>, TransferError> {
    if !target.is_subgroup_of(source) || !target.is_normalized_by(g, source.generators()) {
        return Err(TransferError::Index);
    }
    let mut marked = ElementSet::new(g.n());
    let mut reps = Vec::new();
    for u in source.set().iter() {
        if marked.contains(&u) {
            continue;
        }
        reps.push(u);
        for k in target.elements() {
            marked.insert(&g.multiply(&u, k));
        }
    }
    Ok(reps)
}

/// Evaluates the transfer for arbitrary elements of the source.
#[derive(Clone, Debug)]
pub struct Transfer<'a> {
    group: &'a PcGroup,
    target: &'a Subgroup,
    target_derived: Subgroup,
    reps: Vec<Element>,
}

impl<'a> Transfer<'a> {
    /// Prepares the transfer with the canonical representative system.
    pub fn new(
        g: &'a PcGroup,
        source: &'a Subgroup,
        target: &'a Subgroup,
    ) -> Result<Self, TransferError> {
        let index = source.order() / target.order().max(1);
        let reps = coset_reps(g, source, target)?;
        if index != 5 {
            return Err(TransferError::UnsupportedQuotient(index));
        }
        Ok(Self {
            group: g,
            target,
            target_derived: derived_subgroup(g, target),
            reps,
        })
    }

    /// Replaces the representative system; it must meet every coset exactly once.
    pub fn with_reps(mut self, reps: Vec<Element>) -> Result<Self, TransferError> {
        if reps.len() != self.reps.len() {
            return Err(TransferError::Index);
        }
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i + 1..] {
                let q = self.group.multiply(&self.group.inverse(a), b);
                if self.target.contains(&q) {
                    return Err(TransferError::Index);
                }
            }
        }
        self.reps = reps;
        Ok(self)
    }

    pub fn reps(&self) -> &[Element] {
        &self.reps
    }

    pub fn target_derived(&self) -> &Subgroup {
        &self.target_derived
    }

    /// Least normal form of `u · [N, N]`.
    pub fn reduce(&self, u: &Element) -> Element {
        if self.target_derived.is_trivial() {
            return *u;
        }
        self.target_derived
            .elements()
            .iter()
            .map(|k| self.group.multiply(u, k))
            .min()
            .expect("subgroup contains the identity")
    }

    /// Transfer of `u` straight from the coset-representative definition.
    pub fn evaluate(&self, u: &Element) -> Element {
        let g = self.group;
        let raw = if self.target.contains(u) {
            // f = 1: every coset is its own orbit
            self.reps
                .iter()
                .map(|r| g.conjugate(u, r))
                .fold(g.identity(), |acc, c| g.multiply(&acc, &c))
        } else {
            // f = 5: a single orbit
            let r = &self.reps[0];
            g.conjugate(&g.power(u, 5), r)
        };
        self.reduce(&raw)
    }

    pub fn map(&self, generators: &[Element]) -> TransferMap {
        let images: Vec<Element> = generators.iter().map(|u| self.evaluate(u)).collect();
        let trivial = images.iter().all(Element::is_identity);
        TransferMap {
            source_generators: generators.to_vec(),
            images,
            trivial,
        }
    }
}

/// Transfer from `source` to `target` by the general definition.
pub fn transfer_general(
    g: &PcGroup,
    source: &Subgroup,
    target: &Subgroup,
) -> Result<TransferMap, TransferError> {
    Ok(Transfer::new(g, source, target)?.map(source.generators()))
}

/// `u^{1 + h + h² + h³ + h⁴}` in the right-action convention.
pub fn norm_element(g: &PcGroup, u: &Element, h: &Element) -> Element {
    let mut acc = g.identity();
    let mut term = *u;
    for _ in 0..5 {
        acc = g.multiply(&acc, &term);
        term = g.conjugate(&term, h);
    }
    acc
}

/// Transfer for `source = ⟨h, target⟩` by the cyclic shortcut: `g ↦ g^{1+h+…+h⁴}`
/// for `g` in the target and `h ↦ h^5`.
pub fn transfer_cyclic(
    g: &PcGroup,
    source: &Subgroup,
    target: &Subgroup,
    h: &Element,
) -> Result<TransferMap, TransferError> {
    if target.contains(h) {
        return Err(TransferError::BadGenerator(*h));
    }
    if !source.contains(h)
        || !target.is_subgroup_of(source)
        || !target.is_normalized_by(g, source.generators())
    {
        return Err(TransferError::Index);
    }
    let index = source.order() / target.order();
    if index != 5 {
        return Err(TransferError::UnsupportedQuotient(index));
    }
    let target_derived = derived_subgroup(g, target);
    let h5 = g.power(h, 5);
    let hinv = g.inverse(h);
    let mut images = Vec::with_capacity(source.generators().len());
    for u in source.generators() {
        // u = h^e m with m in the target
        let mut m = *u;
        let mut e = 0;
        while !target.contains(&m) {
            m = g.multiply(&hinv, &m);
            e += 1;
        }
        let img = g.multiply(&g.power(&h5, e), &norm_element(g, &m, h));
        let img = if target_derived.is_trivial() {
            img
        } else {
            target_derived
                .elements()
                .iter()
                .map(|k| g.multiply(&img, k))
                .min()
                .expect("identity")
        };
        images.push(img);
    }
    let trivial = images.iter().all(Element::is_identity);
    Ok(TransferMap {
        source_generators: source.generators().to_vec(),
        images,
        trivial,
    })
}

pub fn is_trivial(t: &TransferMap) -> bool {
    t.trivial
}

/// Kernel (as the preimage in the source, containing `[H, H]`) and image of a
/// transfer.
#[derive(Clone, Debug)]
pub struct KernelImage {
    pub kernel: Subgroup,
    pub image: Subgroup,
}

/// Walks the source breadth-first, carrying transfer images along generator
/// edges, and collects the elements mapping into `[N, N]`.
pub fn transfer_kernel_image(
    g: &PcGroup,
    source: &Subgroup,
    target: &Subgroup,
    t: &TransferMap,
) -> Result<KernelImage, TransferError> {
    let nd = derived_subgroup(g, target);
    let mut pos = vec![u32::MAX; g.order()];
    let mut elements = vec![g.identity()];
    let mut images = vec![g.identity()];
    pos[g.identity().index()] = 0;
    let mut i = 0;
    while i < elements.len() {
        let (u, img) = (elements[i], images[i]);
        for (s, s_img) in t.source_generators.iter().zip(&t.images) {
            let p = g.multiply(&u, s);
            if pos[p.index()] == u32::MAX {
                pos[p.index()] = elements.len() as u32;
                elements.push(p);
                images.push(g.multiply(&img, s_img));
            }
        }
        i += 1;
    }
    if elements.len() != source.order() {
        return Err(TransferError::Index);
    }
    let mut kernel = Subgroup::trivial(g);
    for (u, img) in elements.iter().zip(&images) {
        if nd.contains(img) {
            kernel.extend(g, u);
        }
    }
    let mut gens = t.images.clone();
    gens.extend_from_slice(nd.generators());
    let image = Subgroup::closure(g, &gens);
    Ok(KernelImage { kernel, image })
}

/// Triviality of `V_{H_i → γ₂}` for the six maximal subgroups, from the cyclic
/// formula applied to the polycyclic generators `h_i, s_2, …, s_{n-1}`.
/// Needs no enumeration, so it runs at every order.
pub fn maximal_transfer_fingerprint(g: &PcGroup) -> [bool; 6] {
    let mut out = [false; 6];
    for (i, slot) in out.iter_mut().enumerate() {
        let h = maximal_top(g, i + 1);
        *slot = g.power(&h, 5).is_identity()
            && (2..g.n()).all(|j| norm_element(g, &g.s(j), &h).is_identity());
    }
    out
}

/// `V_{H_i → γ₂}` for all six maximal subgroups via the cyclic formula.
pub fn maximal_transfers(
    g: &PcGroup,
    maximal: &[Subgroup],
    gamma2: &Subgroup,
) -> Result<Vec<TransferMap>, TransferError> {
    maximal
        .iter()
        .enumerate()
        .map(|(i, h)| transfer_cyclic(g, h, gamma2, &maximal_top(g, i + 1)))
        .collect()
}

/// One line of a transfer report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferEntry {
    pub subgroup: usize,
    pub top_generator: Element,
    pub generator_images: Vec<TransferImage>,
    pub trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferImage {
    pub generator: Element,
    pub image: Element,
}

pub fn transfer_report(g: &PcGroup, maps: &[TransferMap]) -> Vec<TransferEntry> {
    maps.iter()
        .enumerate()
        .map(|(i, t)| TransferEntry {
            subgroup: i + 1,
            top_generator: maximal_top(g, i + 1),
            generator_images: t
                .source_generators
                .iter()
                .zip(&t.images)
                .map(|(a, b)| TransferImage {
                    generator: *a,
                    image: *b,
                })
                .collect(),
            trivial: t.trivial,
        })
        .collect()
}
