//! Class-group records of pure quintic fields and the Galois-group families
//! predicted from them.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::classify::FamilyLabel;
use crate::error::TableError;

/// Expected CSV header.
pub const HEADER: &str = "p,p_mod_25,h_k5,type,rank_sigma";

/// One row: a prime `p`, its residue mod 25 as printed, the 5-class number of
/// `Q(p^{1/5}, ζ_5)`, the type of its 5-class group and the rank of the
/// ambiguous classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldRecord {
    pub p: u64,
    pub p_mod_25: i64,
    pub h_k5: u64,
    #[serde(
        rename = "type",
        serialize_with = "ser_type",
        deserialize_with = "de_type"
    )]
    pub class_type: Vec<u64>,
    pub rank_sigma: u32,
}

fn format_type(t: &[u64]) -> String {
    let parts: Vec<String> = t.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(";"))
}

fn parse_type(s: &str) -> Option<Vec<u64>> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    inner.split(';').map(|v| v.trim().parse().ok()).collect()
}

fn ser_type<S: Serializer>(t: &[u64], s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_type(t))
}

fn de_type<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u64>, D::Error> {
    let s = String::deserialize(d)?;
    parse_type(&s).ok_or_else(|| serde::de::Error::custom(format!("bad class group type {s:?}")))
}

impl FieldRecord {
    pub fn type_text(&self) -> String {
        format_type(&self.class_type)
    }
}

/// Parses the CSV text. Blank lines are skipped; an empty input gives no records.
pub fn parse_table(text: &str) -> Result<Vec<FieldRecord>, TableError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let Some((_, header)) = lines.next() else {
        return Ok(Vec::new());
    };
    if header.trim() != HEADER {
        return Err(TableError::Format {
            line: 1,
            message: format!("header must be {HEADER:?}"),
        });
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        let err = |message: String| TableError::Format {
            line: line_no,
            message,
        };
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let [p, r, h, t, rank] = cols.as_slice() else {
            return Err(err(format!("expected 5 columns, found {}", cols.len())));
        };
        out.push(FieldRecord {
            p: p.parse()
                .map_err(|_| err(format!("p: {p:?} is not a positive integer")))?,
            p_mod_25: r
                .parse()
                .map_err(|_| err(format!("p_mod_25: {r:?} is not an integer")))?,
            h_k5: h
                .parse()
                .map_err(|_| err(format!("h_k5: {h:?} is not a positive integer")))?,
            class_type: parse_type(t)
                .ok_or_else(|| err(format!("type: {t:?} is not of the form (a;b;...)")))?,
            rank_sigma: rank
                .parse()
                .map_err(|_| err(format!("rank_sigma: {rank:?} is not an integer")))?,
        });
    }
    Ok(out)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordFlag {
    NotPrime,
    BadCongruence,
    InconsistentOrder,
}

/// Flags for a record; empty means it is usable.
pub fn validate_record(r: &FieldRecord) -> Vec<RecordFlag> {
    let mut flags = Vec::new();
    if !is_prime(r.p) {
        flags.push(RecordFlag::NotPrime);
    }
    let actual = (r.p % 25) as i64;
    if actual != 24 || r.p_mod_25.rem_euclid(25) != actual {
        flags.push(RecordFlag::BadCongruence);
    }
    if r.class_type.iter().product::<u64>() != r.h_k5 {
        flags.push(RecordFlag::InconsistentOrder);
    }
    flags
}

/// Which maximal subgroup is the two-step centralizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    /// `χ₂ = H_{L_i}` for one of the two subfields with trivial 5-class number.
    #[serde(rename = "HL")]
    HL,
    /// `χ₂ = H̃`.
    #[serde(rename = "HTilde")]
    HTilde,
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hl" | "h_l" => Ok(Self::HL),
            "htilde" | "h~" | "ht" => Ok(Self::HTilde),
            _ => Err(format!("unknown scenario {s:?} (expected HL or HTilde)")),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::HL => "HL",
            Self::HTilde => "HTilde",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub record: FieldRecord,
    pub scenario: Scenario,
    pub s: Option<u32>,
    /// Label texts exactly as the theorem lists them.
    pub candidates: Vec<String>,
    /// Candidates that name no valid parameter tuple.
    pub unrealizable: Vec<String>,
}

fn label_text(n: usize, a: u8, z: u8) -> String {
    format!("G_{a}^({n})({z},0)")
}

/// Candidate families for the Galois group of the Hilbert 5-class field of the
/// genus field over `Q(ζ_5)`.
///
/// `large_order` states that the group has order at least `5^7`; the order is
/// then `5^{s+1}`, so `s` must be given.
pub fn predict_families(
    r: &FieldRecord,
    scenario: Scenario,
    s: Option<u32>,
    large_order: bool,
) -> Result<Prediction, TableError> {
    let flags = validate_record(r);
    if !flags.is_empty() {
        return Err(TableError::Precond {
            p: r.p,
            reason: format!("record flagged {flags:?}"),
        });
    }
    if r.class_type != [5, 5] || r.rank_sigma != 1 {
        return Err(TableError::Precond {
            p: r.p,
            reason: format!(
                "needs class group type (5;5) and ambiguous rank 1, got {} and {}",
                r.type_text(),
                r.rank_sigma
            ),
        });
    }
    let mut candidates = Vec::new();
    match scenario {
        Scenario::HL => {
            for n in [4, 5, 6] {
                for a in [0, 1] {
                    for z in [0, 1] {
                        candidates.push(label_text(n, a, z));
                    }
                }
            }
        }
        Scenario::HTilde => {
            if large_order && s.is_none() {
                return Err(TableError::MissingS);
            }
            candidates.extend([label_text(5, 1, 0), label_text(6, 1, 0)]);
            match s {
                Some(s) if s >= 6 => candidates.push(label_text(s as usize + 1, 0, 0)),
                Some(s) => {
                    return Err(TableError::Precond {
                        p: r.p,
                        reason: format!("s = {s} gives order 5^{} < 5^7", s + 1),
                    })
                }
                None => {}
            }
        }
    }
    let unrealizable = candidates
        .iter()
        .filter(|c| c.parse::<FamilyLabel>().is_err())
        .cloned()
        .collect();
    Ok(Prediction {
        record: r.clone(),
        scenario,
        s,
        candidates,
        unrealizable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    const ROW: &str = "p,p_mod_25,h_k5,type,rank_sigma\n149,-1,25,(5;5),1\n";

    #[test]
    fn parses_one_row() {
        let rs = parse_table(ROW).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].p, 149);
        assert_eq!(rs[0].class_type, [5, 5]);
        assert!(validate_record(&rs[0]).is_empty());
    }

    #[test]
    fn empty_and_bad_input() {
        assert!(parse_table("").unwrap().is_empty());
        assert!(matches!(
            parse_table("p,mod,h,type,rank\n"),
            Err(TableError::Format { line: 1, .. })
        ));
        assert!(matches!(
            parse_table("p,p_mod_25,h_k5,type,rank_sigma\n149,-1,25,(5;5),1\n151,x,25,(5;5),1\n"),
            Err(TableError::Format { line: 3, .. })
        ));
    }

    #[test]
    fn composite_row_flagged() {
        let r = FieldRecord {
            p: 559,
            p_mod_25: -1,
            h_k5: 25,
            class_type: vec![5, 5],
            rank_sigma: 1,
        };
        assert_eq!(
            validate_record(&r),
            [RecordFlag::NotPrime, RecordFlag::BadCongruence]
        );
        assert!(matches!(
            predict_families(&r, Scenario::HL, None, false),
            Err(TableError::Precond { p: 559, .. })
        ));
    }

    #[test]
    fn order_mismatch_flagged() {
        let r = FieldRecord {
            p: 149,
            p_mod_25: -1,
            h_k5: 125,
            class_type: vec![5, 5],
            rank_sigma: 1,
        };
        assert_eq!(validate_record(&r), [RecordFlag::InconsistentOrder]);
    }

    #[test]
    fn predictions() {
        let r = &parse_table(ROW).unwrap()[0];
        let hl = predict_families(r, Scenario::HL, None, false).unwrap();
        assert_eq!(hl.candidates.len(), 12);
        assert_eq!(hl.unrealizable, ["G_1^(4)(0,0)", "G_1^(4)(1,0)"]);
        let ht = predict_families(r, Scenario::HTilde, None, false).unwrap();
        assert_eq!(ht.candidates, ["G_1^(5)(0,0)", "G_1^(6)(0,0)"]);
        let ht = predict_families(r, Scenario::HTilde, Some(6), true).unwrap();
        assert_eq!(ht.candidates.last().unwrap(), "G_0^(7)(0,0)");
        assert_eq!(
            predict_families(r, Scenario::HTilde, None, true),
            Err(TableError::MissingS)
        );
    }

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(small, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
