use alloc::string::String;

use thiserror::Error;

use crate::element::Element;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("n: order exponent {n} is below 4")]
    OrderTooSmall { n: i64 },
    #[error("n: order exponent {n} exceeds supported maximum {max}")]
    OrderTooLarge { n: i64, max: usize },
    #[error("a: defect k = {k} exceeds min(n - 4, 3) = {bound} for n = {n}")]
    DefectTooLarge { k: usize, bound: usize, n: usize },
    #[error("p: only p = 5 is supported, got {p}")]
    UnsupportedPrime { p: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("element has length {got}, group expects {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("inconsistent presentation: {0}")]
    Consistency(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("expected six maximal subgroups above the derived subgroup, found {0}")]
    MaximalSubgroupCount(usize),
    #[error("two-step centralizer is not a single maximal subgroup ({0})")]
    Centralizer(String),
    #[error("[chi2, gamma2] is not a term of the lower central series")]
    DefectNotInSeries,
    #[error("group of order 5^{n} is too large to enumerate (limit 5^{limit})")]
    TooLarge { n: usize, limit: usize },
    #[error("no standard generator pair reproduces the relation format")]
    NoStandardPair,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransferError {
    #[error("target is not a normal subgroup of the source")]
    Index,
    #[error("quotient of order {0} is not cyclic of order 5")]
    UnsupportedQuotient(usize),
    #[error("generator {0} lies in the target subgroup")]
    BadGenerator(Element),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Transfer(#[from] TransferError),
    #[error("brute-force isomorphism test limited to n <= {limit}, got n = {n}")]
    SizeGuard { n: usize, limit: usize },
    #[error("sweep failed on {params}: {reason}")]
    Sweep { params: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("record p = {p} does not satisfy the prediction preconditions: {reason}")]
    Precond { p: u64, reason: String },
    #[error("orders 5^n with n >= 7 need the exponent s of h_5(L~) = 5^s")]
    MissingS,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("malformed family label {text:?}: {reason}")]
    Malformed { text: String, reason: String },
    #[error(transparent)]
    Param(#[from] ParamError),
}
