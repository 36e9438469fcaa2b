//! Enumeration of homomorphisms from `UVB_n` (and its relatives) into finite
//! groups, conjugation dedup, the classification of the results against the
//! structure theorems, and totally-symmetric-set analysis.
//!
//! Everything here is deterministic: search shards merge in a fixed order, so
//! parallel runs byte-match serial runs.

mod classify;
mod enumerate;
mod table;
mod tss;

pub use classify::{
    canonical_form, classify_theorem_a, classify_theorem_b, dedup_conjugation,
    km_shadow_violations, verify_theorem_a_staged, HomClass, StagedReport, TheoremABucket,
    TheoremAClassifier, TheoremBBucket, TheoremBClassEntry, TheoremBReport,
};
pub use enumerate::{
    enumerate_homs, enumerate_homs_counted, EnumOptions, EnumOutcome, HomImage,
    DEFAULT_NODE_BUDGET,
};
pub use table::{
    cyclic_table, product_table, symmetric_group_table, FiniteGroupTable, SymmetricGroupTable,
    TableError,
};
pub use tss::{analyze_totally_symmetric, build_a_i, km_bound, TotSymReport};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("node budget {budget} exceeded after {visited} nodes; no partial results returned")]
    BudgetExceeded { budget: u64, visited: u64 },
    #[error("group table: {0}")]
    Table(#[from] TableError),
    #[error("n = {0} unsupported here: {1}")]
    UnsupportedN(usize, &'static str),
    #[error("classification needs a symmetric-group target")]
    NotASymmetricTarget,
}
