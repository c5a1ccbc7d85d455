//! Group exports: subgroup diagram, JSON descriptor with invariants, and the
//! multiplication table of small groups.

use std::fmt::Write as _;

use maxclass5_core::structure::{chi2_index_by_generators, structure_report, StructureReport};
use maxclass5_core::subgroup::ENUMERATION_LIMIT;
use maxclass5_core::transfer::{
    maximal_top, maximal_transfer_fingerprint, norm_element, TransferEntry, TransferImage,
};
use maxclass5_core::{Element, PcGroup, RawParams};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Largest `n` for which the multiplication table is written.
pub const TABLE_LIMIT: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupExport {
    pub descriptor: RawParams,
    pub structure: StructureReport,
}

pub fn guard(what: &'static str, g: &PcGroup, limit: usize) -> Result<(), CliError> {
    if g.n() > limit {
        return Err(CliError::SizeGuard {
            what,
            n: g.n(),
            limit,
        });
    }
    Ok(())
}

pub fn invariants(g: &PcGroup) -> Result<StructureReport, CliError> {
    guard("subgroup enumeration", g, ENUMERATION_LIMIT)?;
    Ok(structure_report(g)?)
}

pub fn json(g: &PcGroup) -> Result<GroupExport, CliError> {
    Ok(GroupExport {
        descriptor: g.params().to_raw(),
        structure: invariants(g)?,
    })
}

/// `V_{H_i → γ₂}` on the polycyclic generators `h_i, s_2, …, s_{n-1}` of each
/// maximal subgroup, by the index-5 formula.
pub fn transfers(g: &PcGroup) -> Vec<TransferEntry> {
    (1..=6)
        .map(|i| {
            let h = maximal_top(g, i);
            let mut generator_images = vec![TransferImage {
                generator: h,
                image: g.power(&h, 5),
            }];
            generator_images.extend((2..g.n()).map(|j| TransferImage {
                generator: g.s(j),
                image: norm_element(g, &g.s(j), &h),
            }));
            let trivial = generator_images.iter().all(|t| t.image.is_identity());
            TransferEntry {
                subgroup: i,
                top_generator: h,
                generator_images,
                trivial,
            }
        })
        .collect()
}

/// Graphviz diagram of `G`, the six maximal subgroups and `γ₂`, with each
/// `H_i → γ₂` edge marked by whether its transfer is trivial.
pub fn dot(g: &PcGroup) -> Result<String, CliError> {
    let chi2 = chi2_index_by_generators(g)?;
    let fp = maximal_transfer_fingerprint(g);
    let mut out = String::new();
    let label = g.params().label();
    writeln!(out, "digraph \"{label}\" {{").unwrap();
    writeln!(out, "  rankdir=TB;").unwrap();
    writeln!(out, "  G [label=\"G = {label}\\norder 5^{}\"];", g.n()).unwrap();
    for i in 1..=6 {
        let top = maximal_top(g, i);
        let extra = if i == chi2 { " = chi2" } else { "" };
        writeln!(out, "  H{i} [label=\"H{i}{extra}\\n<{top}, gamma2>\"];").unwrap();
    }
    writeln!(out, "  gamma2 [label=\"gamma2\\norder 5^{}\"];", g.n() - 2).unwrap();
    for i in 1..=6 {
        writeln!(out, "  G -> H{i};").unwrap();
    }
    for (i, &trivial) in fp.iter().enumerate() {
        let (text, style) = if trivial {
            ("V trivial", "dashed")
        } else {
            ("V nontrivial", "solid")
        };
        writeln!(
            out,
            "  H{} -> gamma2 [label=\"{text}\", style={style}];",
            i + 1
        )
        .unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

/// One line per left factor in normal-form order; entry `j` of line `i` is the
/// index of `u_i · u_j`.
pub fn table(g: &PcGroup) -> Result<String, CliError> {
    guard("multiplication table export", g, TABLE_LIMIT)?;
    let n = g.n();
    let order = g.order();
    let mut out = String::with_capacity(order * order * 4);
    for i in 0..order {
        let u = Element::from_index(n, i);
        for j in 0..order {
            if j > 0 {
                out.push(' ');
            }
            let v = g.multiply(&u, &Element::from_index(n, j));
            write!(out, "{}", v.index()).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}
