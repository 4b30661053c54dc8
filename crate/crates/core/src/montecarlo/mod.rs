//! Seeded, replicate-parallel Monte Carlo engine.

pub mod alternatives;
pub mod calibrated;
pub mod diagnostics;
pub mod null;
pub mod power;

pub use alternatives::{sample_alternative, Alternative};
pub use calibrated::{
    changepoint_test, ksample_test, two_sample_test, ChangePointTest, IntegratorSpec, PairedReport,
};
pub use diagnostics::{
    ks_distance, lil_constant, lil_diagnostic, rate_study, LilDiagnostic, RateRow,
};
pub use null::{
    gof_test, limit_draw, null_critical_value, null_distribution, null_statistics, Calibration,
};
pub use power::{power_study, PowerRow, PowerStudyConfig, PowerTable};
