//! Energy ledgers of transient runs and the checks performed on them.

mod checks;
mod ledger;

pub use checks::{check_conservation, check_dissipation_inequality, fit_exponential_decay, CheckReport};
pub use ledger::{read_csv, write_csv, EnergyLedger, LedgerRow, CSV_HEADER};

/// Slack tolerance `1e-8 (1 + |E⁰|)` for the dissipation inequality.
pub fn default_slack_tol(initial_energy: f64) -> f64 {
    1e-8 * (1.0 + initial_energy.abs())
}
