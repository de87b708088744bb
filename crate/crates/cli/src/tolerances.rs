//! Pass thresholds for the numerical checks of `verify`.

use serde::{Deserialize, Serialize};

/// Relative error allowed on the fitted `d_1`, `d_2` against the exact invariants.
pub const FIT_LEADING: f64 = 1e-2;
/// Relative error allowed on the fitted `d_3`.
pub const FIT_THIRD: f64 = 5e-2;
/// Multiplicative slack on the Duhamel bounds.
pub const DUHAMEL_SLACK: f64 = 1e-6;
/// Rate ratio expected when the support margin doubles (`δ²` scaling).
pub const GAP_RATIO: f64 = 4.0;
/// Relative tolerance on that ratio.
pub const GAP_RATIO_TOLERANCE: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub fit_leading: f64,
    pub fit_third: f64,
    pub duhamel_slack: f64,
    pub gap_ratio: f64,
    pub gap_ratio_tolerance: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            fit_leading: FIT_LEADING,
            fit_third: FIT_THIRD,
            duhamel_slack: DUHAMEL_SLACK,
            gap_ratio: GAP_RATIO,
            gap_ratio_tolerance: GAP_RATIO_TOLERANCE,
        }
    }
}

impl Tolerances {
    /// Accepted range of the rate ratio.
    pub fn gap_ratio_range(&self) -> (f64, f64) {
        (self.gap_ratio * (1.0 - self.gap_ratio_tolerance), self.gap_ratio * (1.0 + self.gap_ratio_tolerance))
    }
}
