//! Exact combinatorics of the monotone triangle lattice.
//!
//! Monotone triangles of size `n` are in bijection with `n x n`
//! alternating-sign matrices and form a lattice under entrywise comparison.
//! This crate validates and converts them, enumerates, ranks and samples
//! them, and counts exactly how many `r`-tuples have the minimal triangle as
//! their meet.

pub mod census;
pub mod counting;
pub mod enumeration;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod meet_census;
pub mod numeric;
pub mod permutation;
pub mod rowset;
pub mod text;
pub mod triangle;

pub use census::{CensusTable, RunHistogram};
pub use counting::{asm_number, asm_number_dp, eta, BigCount};
pub use error::{Error, Result};
pub use lattice::{compare, is_trivial, join, meet, LatticeOp, OrderRelation};
pub use matrix::{
    from_asm, from_column_sum, to_asm, to_column_sum, AlternatingSignMatrix, ColumnSumMatrix,
};
pub use meet_census::{avoid_count, n_min_census, n_min_exact, p_extreme, MeetCensusReport};
pub use permutation::{perm_to_triangle, Permutation};
pub use rowset::RowSet;
pub use triangle::{
    extremal_triangle, near_minimal_triangle, validate_triangle, Extreme, MonotoneTriangle,
    NearMinimal,
};

pub use num_rational::BigRational;

/// Largest supported triangle size; row sets are 64-bit masks.
pub const MAX_SIZE: usize = 64;

/// Size limits for the expensive operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Exhaustive enumeration and everything built on it (census, classes).
    pub enumeration: usize,
    /// Completion-count tables: ranking, unranking, sampling, the forward DP.
    pub dp: usize,
    /// Outer inclusion-exclusion over subsets of `[n-1]`.
    pub inclusion_exclusion: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration: 7,
            dp: 12,
            inclusion_exclusion: 18,
        }
    }
}

impl Limits {
    fn check(what: &'static str, n: usize, limit: usize) -> Result<()> {
        if n > limit {
            return Err(Error::LimitExceeded { what, n, limit });
        }
        Ok(())
    }

    pub fn check_enumeration(&self, n: usize) -> Result<()> {
        Self::check("enumeration", n, self.enumeration)
    }

    pub fn check_dp(&self, n: usize) -> Result<()> {
        Self::check("dp", n, self.dp)
    }

    pub fn check_inclusion_exclusion(&self, n: usize) -> Result<()> {
        Self::check("inclusion-exclusion", n, self.inclusion_exclusion)
    }
}

/// Runs `f` on a dedicated pool of `workers` threads, or inline for one worker.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers <= 1 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
        .install(f)
}
