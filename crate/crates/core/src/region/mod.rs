//! Achievable-rate regions and auxiliary-channel certificates.

pub mod dist;
pub mod frontier;
pub mod ptp;

pub use dist::{dist_membership, dist_rates_for, AuxChannelDist, DistLimits, DistRateTriple};
pub use frontier::{ptp_frontier, Frontier, FrontierPoint, SearchConfig};
pub use ptp::{ptp_membership, ptp_rates_for, AuxChannelPtp, PtpRatePair};
