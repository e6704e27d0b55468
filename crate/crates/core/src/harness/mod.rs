//! Experiment runner, lemma validators and problem/report I/O.

pub mod chernoff;
pub mod experiment;
pub mod problem;
pub mod reference;
pub mod sweep;
pub mod validity;

pub use chernoff::{chernoff_lemma_check, LemmaCheck, Source};
pub use experiment::{
    run_dist, run_ptp, Aggregate, ExperimentReport, ExperimentSpec, Metric, TrialRow,
};
pub use problem::{DistProblem, PtpProblem};
pub use validity::{validity_rate, ChernoffCheck};
