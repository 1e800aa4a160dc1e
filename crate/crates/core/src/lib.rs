//! Simulator and analysis toolkit for CHIM, a distributed inter-WBAN
//! interference mitigation scheme based on predictable channel hopping over
//! mutually orthogonal Latin rectangles.
//!
//! The crate is organized around five pieces:
//!
//! - [`latin`]: Latin squares/rectangles, orthogonal families from the
//!   finite-field construction, and per-column symbol assignment.
//! - [`schedule`]: turning symbol assignments into per-WBAN CHIM schedules
//!   (default channel, TDMA slots, backup channel/slot pairs) and the
//!   ZigBee GTS baseline schedule.
//! - [`simcore`]: the slot-synchronous multi-WBAN simulation with collision
//!   resolution, energy and deferral accounting, for both schemes.
//! - [`analysis`]: the closed-form collision-probability model plus a
//!   Monte-Carlo cross-validation oracle.
//! - [`config`] / [`sweep`]: experiment configuration, the seeded sweep
//!   runner, and CSV emission.
//!
//! Individual simulation runs are single-threaded and deterministic for a
//! given seed. Sweep jobs and Monte-Carlo sample blocks are independent and
//! run on a rayon pool when the `parallel` feature (default) is enabled;
//! disabling it falls back to sequential execution with identical output.

pub mod analysis;
pub mod config;
pub mod exec;
pub mod latin;
pub mod schedule;
pub mod simcore;
pub mod sweep;

pub use analysis::AnalysisParams;
pub use config::ExperimentConfig;
pub use latin::{LatinRectangle, LatinSquare, OrthogonalFamily, SymbolAssignment};
pub use schedule::{WbanSchedule, ZigbeeGtsSchedule};
pub use simcore::{NetworkModel, RunMetrics, SimOptions, TransmissionRecord};
