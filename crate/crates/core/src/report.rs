use serde::{Deserialize, Serialize};

use crate::adjsort::f_formula;
use crate::allswaps::{is_prime, lower_bound_t, t_exhaustive, LowerBound};
use crate::error::Result;
use crate::oracle::{diameter, Mode, SearchConfig};
use crate::probbound::general_lower_bound;

/// Known formulas and bounds for one circle size, optionally with exact
/// search results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: u64,
    /// `floor((n-1)^2 / 4)`.
    pub f_formula: u64,
    /// `n - 2`, the all-swaps upper bound (0 for `n = 1`).
    pub t_upper: u64,
    pub t_lower_bounds: Vec<LowerBound>,
    pub general_lower_bound: i64,
    pub is_prime: bool,
    pub oracle: Option<OracleValues>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleValues {
    pub adjacent_diameter: u32,
    pub allswap_diameter: u32,
    pub t_exhaustive: usize,
}

impl BoundReport {
    pub fn formulas(n: u64) -> Self {
        Self {
            n,
            f_formula: f_formula(n),
            t_upper: n.saturating_sub(2),
            t_lower_bounds: lower_bound_t(n),
            general_lower_bound: general_lower_bound(n.max(2)),
            is_prime: is_prime(n),
            oracle: None,
        }
    }

    /// Formulas plus exhaustive-search values, subject to the state budget.
    pub fn with_oracle(n: u64, cfg: &SearchConfig) -> Result<Self> {
        let mut report = Self::formulas(n);
        let size = n as usize;
        report.oracle = Some(OracleValues {
            adjacent_diameter: diameter(size, Mode::Adjacent, cfg)?,
            allswap_diameter: diameter(size, Mode::AllSwap, cfg)?,
            t_exhaustive: t_exhaustive(size, cfg.max_states)?.t_n,
        });
        Ok(report)
    }
}
