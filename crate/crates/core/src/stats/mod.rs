//! Test statistics built on integrated empirical d.f.s.

pub mod changepoint;
pub mod estimated;
pub mod onesample;
pub mod report;
pub mod twosample;

pub use changepoint::{changepoint_scan, changepoint_scan_with, ChangePointResult, ProfileRow};
pub use estimated::{
    estimated_gof, estimated_statistic, simulate_estimated_limit, ExponentialFamily, NormalFamily,
    ParametricFamily, UniformScaleFamily,
};
pub use onesample::{cvm_integrated, ks_integrated, omega_integrated, uniform_scores, StatKind};
pub use report::{Method, TestReport};
pub use twosample::{
    ksample_process, ksample_statistics, two_sample_process, two_sample_statistics, Integrator,
    KSampleStatistics, TwoSampleStatistics,
};
