pub mod cli;
pub mod dist;
pub mod empirical;
pub mod error;
pub mod gaussproc;
pub mod localtime;
pub mod montecarlo;
pub mod output;
pub mod parallel;
pub mod quad;
pub mod rng;
pub mod sample;
pub mod stats;
