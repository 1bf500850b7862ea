//! `key = value` run configurations.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use dissipative_core::problems::ProblemKind;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ConfigError {
    /// 1-based line of the offending entry, if there is one.
    pub line: Option<usize>,
    pub reason: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.reason),
            None => f.write_str(&self.reason),
        }
    }
}

fn err(line: Option<usize>, reason: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        reason: reason.into(),
    }
}

pub const KNOWN_KEYS: &[&str] = &[
    "problem",
    "nx",
    "L",
    "tau",
    "n_steps",
    "dg_order",
    "out",
    "ic",
    "m",
    "gamma",
    "eps0",
    "mu0",
    "chi1",
    "chi3",
    "sigma0",
    "sigma2",
    "potential",
    "potential_strength",
    "mass",
    "gradient",
    "damping",
    "seed",
    "newton_tol",
    "newton_maxit",
    "slack_tol",
];

/// Keys holding a number; these are the ones a sweep may vary.
pub const NUMERIC_KEYS: &[&str] = &[
    "nx",
    "L",
    "tau",
    "n_steps",
    "dg_order",
    "m",
    "gamma",
    "eps0",
    "mu0",
    "chi1",
    "chi3",
    "sigma0",
    "sigma2",
    "potential_strength",
    "mass",
    "damping",
    "seed",
    "newton_tol",
    "newton_maxit",
    "slack_tol",
];

/// Raw entries of a configuration file, before validation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigEntries {
    entries: BTreeMap<String, (String, Option<usize>)>,
}

impl ConfigEntries {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(err(Some(line), format!("expected 'key = value', found '{content}'")));
            };
            let (key, value) = (key.trim(), value.trim());
            if !KNOWN_KEYS.contains(&key) {
                return Err(err(Some(line), format!("unknown key '{key}'")));
            }
            if value.is_empty() {
                return Err(err(Some(line), format!("empty value for '{key}'")));
            }
            if entries.insert(key.to_string(), (value.to_string(), Some(line))).is_some() {
                return Err(err(Some(line), format!("duplicate key '{key}'")));
            }
        }
        Ok(Self { entries })
    }

    /// Replaces (or adds) an entry, e.g. for sweeps.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(err(None, format!("unknown key '{key}'")));
        }
        self.entries.insert(key.to_string(), (value.to_string(), None));
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.entries.get(key).and_then(|(_, l)| *l)
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| err(self.line(key), format!("invalid value '{v}' for '{key}': {e}"))),
        }
    }

    fn positive(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        let v = self.parsed::<f64>(key)?;
        if let Some(x) = v {
            if !(x > 0.0 && x.is_finite()) {
                return Err(err(self.line(key), format!("'{key}' must be positive, got {x}")));
            }
        }
        Ok(v)
    }

    fn nonnegative(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        let v = self.parsed::<f64>(key)?;
        if let Some(x) = v {
            if !(x >= 0.0 && x.is_finite()) {
                return Err(err(self.line(key), format!("'{key}' must be nonnegative, got {x}")));
            }
        }
        Ok(v)
    }

    pub fn validate(&self) -> Result<RunConfig, ConfigError> {
        let problem: ProblemKind = match self.get("problem") {
            None => return Err(err(None, "problem required")),
            Some(p) => p.parse().map_err(|_| {
                err(
                    self.line("problem"),
                    format!(
                        "unknown problem '{p}' (expected one of {})",
                        ProblemKind::ALL.map(|k| k.tag()).join(", ")
                    ),
                )
            })?,
        };

        let nx = self.parsed::<usize>("nx")?.unwrap_or(16);
        if nx == 0 {
            return Err(err(self.line("nx"), "'nx' must be at least 1"));
        }
        let dg_order = self.parsed::<usize>("dg_order")?.unwrap_or(0);
        if dg_order > 1 {
            return Err(err(
                self.line("dg_order"),
                format!("unsupported dG degree {dg_order} (use 0 or 1)"),
            ));
        }
        let m = self.parsed::<f64>("m")?;
        if let Some(m) = m {
            if !(m > 1.0) {
                return Err(err(self.line("m"), format!("'m' must exceed 1, got {m}")));
            }
        }
        let gamma = self.parsed::<f64>("gamma")?;
        if let Some(g) = gamma {
            if !(g > 1.0) {
                return Err(err(self.line("gamma"), format!("'gamma' must exceed 1, got {g}")));
            }
        }
        match problem {
            ProblemKind::PorousMedium if m.is_none() => return Err(err(None, "m required")),
            ProblemKind::Gas if gamma.is_none() => return Err(err(None, "gamma required")),
            _ => {}
        }

        let potential = match self.get("potential") {
            None => PotentialKind::Zero,
            Some(v) => v.parse().map_err(|e: String| err(self.line("potential"), e))?,
        };
        let gradient = match self.get("gradient") {
            None => GradientPreset::Decay,
            Some(v) => v.parse().map_err(|e: String| err(self.line("gradient"), e))?,
        };
        let newton_maxit = self.parsed::<usize>("newton_maxit")?;
        if newton_maxit == Some(0) {
            return Err(err(self.line("newton_maxit"), "'newton_maxit' must be at least 1"));
        }

        Ok(RunConfig {
            problem,
            nx,
            length: self.positive("L")?.unwrap_or(1.0),
            tau: self.positive("tau")?,
            n_steps: self.parsed::<usize>("n_steps")?.unwrap_or(50),
            dg_order,
            out: self
                .get("out")
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from(format!("{}.csv", problem.tag()))),
            ic: self.get("ic").map(str::to_string),
            m,
            gamma,
            eps0: self.positive("eps0")?.unwrap_or(1.0),
            mu0: self.positive("mu0")?.unwrap_or(1.0),
            chi1: self.positive("chi1")?.unwrap_or(1.0),
            chi3: self.positive("chi3")?.unwrap_or(1.0),
            sigma0: self.nonnegative("sigma0")?.unwrap_or(0.0),
            sigma2: self.nonnegative("sigma2")?.unwrap_or(0.0),
            potential,
            potential_strength: self.parsed::<f64>("potential_strength")?.unwrap_or(1.0),
            mass: self.positive("mass")?.unwrap_or(1.0),
            gradient,
            damping: self.nonnegative("damping")?,
            seed: self.parsed::<u64>("seed")?.unwrap_or(42),
            newton_tol: self.positive("newton_tol")?,
            newton_maxit,
            slack_tol: self.positive("slack_tol")?,
        })
    }
}

/// Potential `V(x)` of the Fokker-Planck problem, scaled by
/// `potential_strength`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialKind {
    Zero,
    /// `x / L`
    Linear,
    /// `(x / L - 1/2)²`
    Quadratic,
    /// `cos(2π x / L)`
    Cosine,
}

impl FromStr for PotentialKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "zero" => Ok(Self::Zero),
            "linear" => Ok(Self::Linear),
            "quadratic" => Ok(Self::Quadratic),
            "cosine" => Ok(Self::Cosine),
            _ => Err(format!("unknown potential '{s}' (zero, linear, quadratic, cosine)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientPreset {
    /// `H = ½x²`, `J = 0`, `R = damping` in one dimension.
    Decay,
    /// `H(q, p) = q²/2 + q⁴/4 + p²/2`, canonical `J`, `R = diag(0, damping)`.
    Oscillator,
}

impl FromStr for GradientPreset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "decay" => Ok(Self::Decay),
            "oscillator" => Ok(Self::Oscillator),
            _ => Err(format!("unknown gradient preset '{s}' (decay, oscillator)")),
        }
    }
}

/// Validated run configuration. Optional fields fall back to per-problem
/// presets.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemKind,
    pub nx: usize,
    pub length: f64,
    pub tau: Option<f64>,
    pub n_steps: usize,
    pub dg_order: usize,
    pub out: PathBuf,
    pub ic: Option<String>,
    pub m: Option<f64>,
    pub gamma: Option<f64>,
    pub eps0: f64,
    pub mu0: f64,
    pub chi1: f64,
    pub chi3: f64,
    /// Conductivity `σ(E) = sigma0 + sigma2 E²`.
    pub sigma0: f64,
    pub sigma2: f64,
    pub potential: PotentialKind,
    pub potential_strength: f64,
    pub mass: f64,
    pub gradient: GradientPreset,
    pub damping: Option<f64>,
    pub seed: u64,
    pub newton_tol: Option<f64>,
    pub newton_maxit: Option<usize>,
    pub slack_tol: Option<f64>,
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    ConfigEntries::parse(text)?.validate()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_heat_config() {
        let c = parse_config("problem = heat\nnx = 16\ntau = 0.01\nn_steps = 20\ndg_order = 0\nout = run.csv").unwrap();
        assert_eq!(c.problem, ProblemKind::Heat);
        assert_eq!((c.nx, c.n_steps, c.dg_order), (16, 20, 0));
        assert_eq!(c.tau, Some(0.01));
        assert_eq!(c.out, PathBuf::from("run.csv"));
        assert_eq!(c.length, 1.0);
        assert_eq!(c.seed, 42);
    }

    #[test]
    fn comments_and_whitespace() {
        let c = parse_config("# header\n  problem=gradient   # trailing\n\nseed =7\n").unwrap();
        assert_eq!(c.problem, ProblemKind::Gradient);
        assert_eq!(c.seed, 7);
    }

    #[test]
    fn required_parameters() {
        assert_eq!(parse_config("problem = pme").unwrap_err().reason, "m required");
        assert_eq!(parse_config("problem = gas").unwrap_err().reason, "gamma required");
        assert!(parse_config("problem = pme\nm = 2").is_ok());
        assert_eq!(parse_config("nx = 3").unwrap_err().reason, "problem required");
    }

    #[test]
    fn rejections_carry_line_numbers() {
        let e = parse_config("problem = heat\ndg_order = 2").unwrap_err();
        assert_eq!(e.line, Some(2));
        assert!(e.reason.contains("unsupported"));

        let e = parse_config("problem = heat\n\nfoo = 1").unwrap_err();
        assert_eq!(e.line, Some(3));
        assert_eq!(e.to_string(), "line 3: unknown key 'foo'");

        assert_eq!(parse_config("problem heat").unwrap_err().line, Some(1));
        assert_eq!(parse_config("problem = nope").unwrap_err().line, Some(1));
        assert_eq!(parse_config("problem = heat\nnx = -3").unwrap_err().line, Some(2));
        assert_eq!(parse_config("problem = heat\ntau = 0").unwrap_err().line, Some(2));
        assert_eq!(parse_config("problem = pme\nm = 1").unwrap_err().line, Some(2));
        assert_eq!(parse_config("problem = heat\nnx = 4\nnx = 5").unwrap_err().line, Some(3));
    }

    #[test]
    fn overrides() {
        let mut e = ConfigEntries::parse("problem = heat\ntau = 0.1").unwrap();
        e.set("tau", "0.05").unwrap();
        assert_eq!(e.validate().unwrap().tau, Some(0.05));
        assert!(e.set("bogus", "1").is_err());
    }
}
