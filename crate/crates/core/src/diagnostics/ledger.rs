use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "step,t,energy,dissipation_integral,slack,newton_iters,residual_norm";

/// One slab of a run. Row 0 holds the initial energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LedgerRow {
    pub step: usize,
    pub t: f64,
    /// `E(uⁿ(tⁿ))`.
    pub energy: f64,
    /// `∫ D dt` over the slab.
    pub dissipation_integral: f64,
    /// `E(uⁿ⁻¹(tⁿ⁻¹)) - E(uⁿ(tⁿ)) - ∫ D dt`.
    pub slack: f64,
    pub newton_iters: usize,
    pub residual_norm: f64,
}

impl LedgerRow {
    pub fn initial(t: f64, energy: f64) -> Self {
        Self {
            step: 0,
            t,
            energy,
            dissipation_integral: 0.0,
            slack: 0.0,
            newton_iters: 0,
            residual_norm: 0.0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnergyLedger {
    rows: Vec<LedgerRow>,
}

impl EnergyLedger {
    pub fn new(rows: Vec<LedgerRow>) -> Self {
        Self { rows }
    }

    /// Ledger from energies and slab dissipation integrals; `dissipation[0]`
    /// is ignored. Times are the step indices.
    pub fn from_series(energy: &[f64], dissipation: &[f64]) -> Self {
        let rows = energy
            .iter()
            .enumerate()
            .map(|(n, &e)| {
                if n == 0 {
                    LedgerRow::initial(0.0, e)
                } else {
                    LedgerRow {
                        step: n,
                        t: n as f64,
                        energy: e,
                        dissipation_integral: dissipation[n],
                        slack: energy[n - 1] - e - dissipation[n],
                        newton_iters: 0,
                        residual_norm: 0.0,
                    }
                }
            })
            .collect();
        Self { rows }
    }

    pub fn push(&mut self, row: LedgerRow) {
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[LedgerRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.energy).collect()
    }

    pub fn last(&self) -> Option<&LedgerRow> {
        self.rows.last()
    }

    /// CSV text: fixed header, LF endings, floats with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(64 * (self.rows.len() + 1));
        s.push_str(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.step,
                fmt_float(r.t),
                fmt_float(r.energy),
                fmt_float(r.dissipation_integral),
                fmt_float(r.slack),
                r.newton_iters,
                fmt_float(r.residual_norm),
            ));
        }
        s
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim_end_matches('\r') == CSV_HEADER => {}
            Some(h) => return Err(Error::Parse(format!("unexpected header '{h}'"))),
            None => return Err(Error::Parse("empty input".into())),
        }
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let lineno = i + 2;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 7 {
                return Err(Error::Parse(format!(
                    "line {lineno}: expected 7 fields, found {}",
                    fields.len()
                )));
            }
            let int = |k: usize| {
                fields[k]
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("line {lineno}, field {}: {e}", k + 1)))
            };
            let float = |k: usize| {
                fields[k]
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {lineno}, field {}: {e}", k + 1)))
            };
            rows.push(LedgerRow {
                step: int(0)?,
                t: float(1)?,
                energy: float(2)?,
                dissipation_integral: float(3)?,
                slack: float(4)?,
                newton_iters: int(5)?,
                residual_norm: float(6)?,
            });
        }
        Ok(Self { rows })
    }
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv(ledger: &EnergyLedger, destination: impl AsRef<Path>) -> Result<()> {
    let mut f = fs::File::create(destination)?;
    f.write_all(ledger.to_csv().as_bytes())?;
    Ok(())
}

pub fn read_csv(source: impl AsRef<Path>) -> Result<EnergyLedger> {
    EnergyLedger::parse_csv(&fs::read_to_string(source)?)
}
