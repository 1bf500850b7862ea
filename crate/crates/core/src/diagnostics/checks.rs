use super::ledger::EnergyLedger;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub pass: bool,
    /// Largest amount by which the checked quantity falls on the wrong side
    /// of zero (0 when nothing is violated).
    pub worst_violation: f64,
    pub tolerance: f64,
    /// Steps whose check failed.
    pub offending_steps: Vec<usize>,
    /// Named auxiliary quantities (minimum slack and the like).
    pub details: Vec<(&'static str, f64)>,
}

impl CheckReport {
    pub fn detail(&self, name: &str) -> Option<f64> {
        self.details.iter().find(|(k, _)| *k == name).map(|(_, v)| *v)
    }
}

/// Checks `E(uⁿ) ≤ E(uᵐ) - ∫ D dt` for consecutive steps and, via prefix sums
/// of the slack, for every pair `m < n`.
///
/// Slack is recomputed from the energy and dissipation columns rather than
/// read from the ledger.
pub fn check_dissipation_inequality(ledger: &EnergyLedger, tol: f64) -> CheckReport {
    let rows = ledger.rows();
    let mut min_slack = f64::INFINITY;
    let mut offending = Vec::new();
    // prefix sum of slacks; Σ_{m<j≤n} slack_j = P_n - P_m
    let mut prefix = 0.0;
    let mut max_prefix = 0.0;
    let mut min_telescoped = f64::INFINITY;
    for w in rows.windows(2) {
        let slack = w[0].energy - w[1].energy - w[1].dissipation_integral;
        min_slack = min_slack.min(slack);
        prefix += slack;
        let telescoped = prefix - max_prefix;
        min_telescoped = min_telescoped.min(telescoped);
        max_prefix = f64::max(max_prefix, prefix);
        if slack < -tol || telescoped < -tol {
            offending.push(w[1].step);
        }
    }
    if rows.len() < 2 {
        min_slack = 0.0;
        min_telescoped = 0.0;
    }
    let worst = (-min_slack.min(min_telescoped)).max(0.0);
    CheckReport {
        pass: offending.is_empty() && worst <= tol,
        worst_violation: worst,
        tolerance: tol,
        offending_steps: offending,
        details: vec![("min_slack", min_slack), ("min_telescoped_slack", min_telescoped)],
    }
}

/// Passes iff `max |F(uⁿ) - F(u⁰)| ≤ tol (1 + |F(u⁰)|)`.
pub fn check_conservation<T>(trajectory: &[T], functional: impl Fn(&T) -> f64, tol: f64) -> CheckReport {
    let values: Vec<f64> = trajectory.iter().map(functional).collect();
    let Some(&f0) = values.first() else {
        return CheckReport {
            pass: true,
            worst_violation: 0.0,
            tolerance: tol,
            offending_steps: Vec::new(),
            details: Vec::new(),
        };
    };
    let bound = tol * (1.0 + f0.abs());
    let mut worst: f64 = 0.0;
    let mut offending = Vec::new();
    for (n, v) in values.iter().enumerate() {
        let drift = (v - f0).abs();
        if !(drift <= bound) {
            offending.push(n);
        }
        worst = worst.max(drift);
    }
    CheckReport {
        pass: offending.is_empty(),
        worst_violation: worst,
        tolerance: bound,
        offending_steps: offending,
        details: vec![("initial_value", f0)],
    }
}

/// Least-squares line through `(tⁿ, log(Eⁿ - floor))`; returns slope and
/// coefficient of determination. Rows with `Eⁿ ≤ floor` are skipped.
pub fn fit_exponential_decay(ledger: &EnergyLedger, floor: f64) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = ledger
        .rows()
        .iter()
        .filter(|r| r.energy > floor)
        .map(|r| (r.t, (r.energy - floor).ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::argument(format!(
            "exponential fit needs at least 3 rows above the floor, found {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let tm = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ym = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let stt: f64 = pts.iter().map(|p| (p.0 - tm).powi(2)).sum();
    let sty: f64 = pts.iter().map(|p| (p.0 - tm) * (p.1 - ym)).sum();
    if stt == 0.0 {
        return Err(Error::argument("exponential fit needs distinct times"));
    }
    let slope = sty / stt;
    let icpt = ym - slope * tm;
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - ym).powi(2)).sum();
    let ss_res: f64 = pts.iter().map(|p| (p.1 - icpt - slope * p.0).powi(2)).sum();
    // a constant series leaves only rounding noise in ss_tot
    let r2 = if ss_tot <= 1e-28 * n * (1.0 + ym * ym) { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok((slope, r2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::LedgerRow;

    #[test]
    fn slack_examples() {
        let ok = EnergyLedger::from_series(&[1.0, 0.9], &[0.0, 0.05]);
        let r = check_dissipation_inequality(&ok, 1e-12);
        assert!(r.pass);
        assert!((r.detail("min_slack").unwrap() - 0.05).abs() < 1e-15);

        let bad = EnergyLedger::from_series(&[1.0, 0.99], &[0.0, 0.05]);
        let r = check_dissipation_inequality(&bad, 1e-12);
        assert!(!r.pass);
        assert_eq!(r.offending_steps, vec![1]);
        assert!((r.worst_violation - 0.04).abs() < 1e-15);
        assert!((r.detail("min_slack").unwrap() + 0.04).abs() < 1e-15);

        let steady = EnergyLedger::from_series(&[2.0; 5], &[0.0; 5]);
        let r = check_dissipation_inequality(&steady, 0.0);
        assert!(r.pass);
        assert_eq!(r.worst_violation, 0.0);
    }

    #[test]
    fn telescoped_pairs_accumulate() {
        // each step is within tolerance, the sum over steps 1..=3 is not
        let e = [1.0, 1.0 + 4e-9, 1.0 + 8e-9, 1.0 + 1.2e-8];
        let l = EnergyLedger::from_series(&e, &[0.0; 4]);
        let r = check_dissipation_inequality(&l, 1e-8);
        assert!(!r.pass);
        assert!((r.detail("min_telescoped_slack").unwrap() + 1.2e-8).abs() < 1e-15);
        assert_eq!(r.offending_steps, vec![3]);
    }

    #[test]
    fn telescoped_matches_brute_force() {
        let e = [3.0, 2.5, 2.6, 2.0, 2.05, 1.0];
        let d = [0.0, 0.1, 0.0, 0.3, 0.0, 0.2];
        let l = EnergyLedger::from_series(&e, &d);
        let mut brute = f64::INFINITY;
        for m in 0..e.len() {
            for n in m + 1..e.len() {
                let s: f64 = d[m + 1..=n].iter().sum();
                brute = brute.min(e[m] - e[n] - s);
            }
        }
        let r = check_dissipation_inequality(&l, 0.0);
        assert!((r.detail("min_telescoped_slack").unwrap() - brute).abs() < 1e-14);
    }

    #[test]
    fn conservation_examples() {
        let r = check_conservation(&[1.0, 1.0, 1.0], |v| *v, 1e-12);
        assert!(r.pass);
        assert_eq!(r.worst_violation, 0.0);

        let r = check_conservation(&[0.0, 0.5, 1.0], |v| *v, 1e-3);
        assert!(!r.pass);
        assert_eq!(r.offending_steps, vec![1, 2]);
        assert_eq!(r.worst_violation, 1.0);
    }

    fn ledger_from(times: &[f64], energy: impl Fn(f64) -> f64) -> EnergyLedger {
        EnergyLedger::new(
            times
                .iter()
                .enumerate()
                .map(|(n, &t)| LedgerRow {
                    t,
                    step: n,
                    ..LedgerRow::initial(t, energy(t))
                })
                .collect(),
        )
    }

    #[test]
    fn fit_examples() {
        let ts: Vec<f64> = (0..10).map(|i| 0.1 * i as f64).collect();
        let (rate, r2) = fit_exponential_decay(&ledger_from(&ts, |t| (-2.0 * t).exp()), 0.0).unwrap();
        assert!((rate + 2.0).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);

        let (rate, r2) = fit_exponential_decay(&ledger_from(&ts, |_| 5.0), 0.0).unwrap();
        assert!(rate.abs() < 1e-14);
        assert_eq!(r2, 1.0);

        let short = ledger_from(&[0.0, 1.0], |t| (-t).exp());
        assert!(fit_exponential_decay(&short, 0.0).is_err());
        // rows at or below the floor are not usable
        assert!(fit_exponential_decay(&ledger_from(&ts, |_| 1.0), 1.0).is_err());
    }
}
