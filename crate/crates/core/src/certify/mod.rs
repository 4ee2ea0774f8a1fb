//! Convergence diagnostics over run traces.

pub mod ergodic;
pub mod kkt;
pub mod lyapunov;
pub mod rate;
pub mod report;
pub mod stationarity;
pub mod trace;

pub use ergodic::{check_ergodic_gap, ergodic_averages, gap_certificate};
pub use kkt::{kkt_residual, KktResidual};
pub use lyapunov::{check_descent, check_master_inequality, lyapunov_series, lyapunov_value, summed_squares_certificate};
pub use rate::{check_nonincreasing, fit_linear_rate, rate_potential, weighted_distance, RateFit};
pub use report::CertificateReport;
pub use stationarity::stationarity_bound;
pub use trace::{IterRecord, RunStatus, RunTrace, Snapshot};
