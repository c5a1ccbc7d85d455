//! Consistency checks for a polycyclic presentation.
//!
//! Associativity is checked on pairs `(u, v)` against every generator `g`:
//! `(uv)g = u(vg)`. When this holds for all pairs, induction on the length of
//! a generator word `w` gives `(uv)w = u(vw)` for every triple, so the
//! exhaustive mode covers all `5^{3n}` triples without enumerating them.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::element::Element;
use crate::group::{PcGroup, RelationFailure};
use crate::subgroup::ENUMERATION_LIMIT;

/// Default number of random triples in sampled mode.
pub const DEFAULT_SAMPLES: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    /// Every pair of elements against every generator. Only allowed for `n ≤ 4`.
    Exhaustive,
    /// At least `count` random triples plus every triple of generators.
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssociativityWitness {
    pub u: Element,
    pub v: Element,
    pub w: Element,
    pub left: Element,
    pub right: Element,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationWitness {
    pub relation: String,
    pub expected: Element,
    pub observed: Element,
}

impl From<RelationFailure> for RelationWitness {
    fn from(f: RelationFailure) -> Self {
        Self {
            relation: f.relation,
            expected: f.expected,
            observed: f.observed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub mode: String,
    pub triples_tested: u64,
    pub associativity: Option<AssociativityWitness>,
    /// Number of distinct normal forms reached from `x, y`; `None` above the
    /// enumeration limit.
    pub closure_size: Option<usize>,
    pub closure_ok: bool,
    pub relations: Vec<RelationWitness>,
    /// Index `j` of the first `s_j` on which the two actions disagree.
    pub noncommuting_action: Option<usize>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.associativity.is_none()
            && self.closure_ok
            && self.relations.is_empty()
            && self.noncommuting_action.is_none()
    }
}

fn assoc(g: &PcGroup, u: &Element, v: &Element, w: &Element) -> Option<AssociativityWitness> {
    let left = g.multiply(&g.multiply(u, v), w);
    let right = g.multiply(u, &g.multiply(v, w));
    (left != right).then_some(AssociativityWitness {
        u: *u,
        v: *v,
        w: *w,
        left,
        right,
    })
}

/// Runs every consistency check and reports the first witness of each kind.
///
/// Exhaustive mode on `n > 4` falls back to sampled mode with the default
/// sample count and seed 0.
pub fn consistency_check(g: &PcGroup, mode: CheckMode) -> ConsistencyReport {
    let n = g.n();
    let gens = g.generators();
    let mut tested = 0u64;
    let mut witness = None;

    let mode = match mode {
        CheckMode::Exhaustive if n > 4 => CheckMode::Sampled {
            count: DEFAULT_SAMPLES,
            seed: 0,
        },
        m => m,
    };

    let mode_name = match mode {
        CheckMode::Exhaustive => {
            'outer: for ui in 0..g.order() {
                let u = Element::from_index(n, ui);
                for vi in 0..g.order() {
                    let v = Element::from_index(n, vi);
                    let uv = g.multiply(&u, &v);
                    for s in &gens {
                        tested += 1;
                        let left = g.multiply(&uv, s);
                        let right = g.multiply(&u, &g.multiply(&v, s));
                        if left != right {
                            witness = Some(AssociativityWitness {
                                u,
                                v,
                                w: *s,
                                left,
                                right,
                            });
                            break 'outer;
                        }
                    }
                }
            }
            String::from("exhaustive")
        }
        CheckMode::Sampled { count, seed } => {
            'gens: for u in &gens {
                for v in &gens {
                    for w in &gens {
                        tested += 1;
                        if let Some(wit) = assoc(g, u, v, w) {
                            witness = Some(wit);
                            break 'gens;
                        }
                    }
                }
            }
            if witness.is_none() {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut random = || Element::from_index(n, rng.random_range(0..g.order()));
                for _ in 0..count {
                    let (u, v, w) = (random(), random(), random());
                    tested += 1;
                    if let Some(wit) = assoc(g, &u, &v, &w) {
                        witness = Some(wit);
                        break;
                    }
                }
            }
            alloc::format!("sampled({count}, seed {seed})")
        }
    };

    let (closure_size, closure_ok) = if n <= ENUMERATION_LIMIT {
        let size = crate::subgroup::Subgroup::closure(g, &[g.x(), g.y()]).order();
        (Some(size), size == g.order())
    } else {
        (None, true)
    };

    ConsistencyReport {
        mode: mode_name,
        triples_tested: tested,
        associativity: witness,
        closure_size,
        closure_ok,
        relations: g
            .relation_failures()
            .into_iter()
            .map(RelationWitness::from)
            .collect(),
        noncommuting_action: g.actions_commute_witness().map(|j| j + 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::PresentationParams;

    #[test]
    fn smallest_group_exhaustive() {
        let g = PcGroup::build(&PresentationParams::new(4, 0, 0, &[]).unwrap()).unwrap();
        let r = consistency_check(&g, CheckMode::Exhaustive);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.triples_tested, 625 * 625 * 4);
        assert_eq!(r.closure_size, Some(625));
    }

    #[test]
    fn sampled_order_six() {
        let g = PcGroup::build(&PresentationParams::new(6, 1, 1, &[1]).unwrap()).unwrap();
        let r = consistency_check(
            &g,
            CheckMode::Sampled {
                count: 100_000,
                seed: 7,
            },
        );
        assert!(r.passed(), "{r:?}");
        assert!(r.triples_tested >= 100_000 + 216);
    }

    #[test]
    fn corrupted_conjugation_table_is_caught() {
        let g = PcGroup::build(&PresentationParams::new(5, 0, 0, &[1]).unwrap()).unwrap();
        let mut conj_y = g.conj_y().to_vec();
        // s_3^y := s_3 s_4 breaks the commuting actions and the relation for [y, s_2]
        conj_y[1] = Element::from_exponents(&[0, 0, 0, 1, 1]);
        let bad = PcGroup::from_tables(
            g.params().clone(),
            g.power_table().to_vec(),
            g.conj_x().to_vec(),
            conj_y,
        )
        .unwrap();
        let r = consistency_check(
            &bad,
            CheckMode::Sampled {
                count: 2_000,
                seed: 0,
            },
        );
        assert!(!r.passed());
        assert_eq!(r.noncommuting_action, Some(2));
        assert!(r.associativity.is_some());
        let wit = r.associativity.unwrap();
        assert_ne!(wit.left, wit.right);
    }

    #[test]
    fn corrupted_power_table_is_caught() {
        let g = PcGroup::build(&PresentationParams::new(4, 0, 0, &[]).unwrap()).unwrap();
        let mut powers = g.power_table().to_vec();
        powers[2] = Element::from_exponents(&[0, 0, 0, 1]);
        let bad = PcGroup::from_tables(
            g.params().clone(),
            powers,
            g.conj_x().to_vec(),
            g.conj_y().to_vec(),
        )
        .unwrap();
        let r = consistency_check(&bad, CheckMode::Exhaustive);
        assert!(!r.passed());
        assert!(r.relations.iter().any(|w| w.relation.starts_with("(1)")));
    }
}
