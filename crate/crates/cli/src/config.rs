//! `key = value` run configuration with dotted keys.

use std::collections::BTreeMap;
use std::path::PathBuf;

use chill_core::toda::system::CH_COEFFICIENT;
use chill_core::toda::TodaKind;
use chill_core::verify::check_names;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
    #[error("`{key}` expects {expected}, got `{found}`")]
    TypeMismatch { key: String, expected: &'static str, found: String },
    #[error("`{key}` out of range: {reason}")]
    RangeViolation { key: String, reason: String },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
}

type Result<T> = std::result::Result<T, ConfigError>;

/// Fully resolved configuration of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: String,
    pub k: usize,
    pub t0: f64,
    pub t_end: f64,
    pub grid_l: f64,
    pub grid_n: usize,
    pub dt0: f64,
    pub dt_max: f64,
    pub growth: f64,
    pub error_control: bool,
    pub per_decade: usize,
    pub sigma: f64,
    pub alpha: f64,
    pub fit_window: Option<(f64, f64)>,
    pub toda_system: TodaKind,
    pub out: PathBuf,
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    pub jobs: usize,
    pub tighten: f64,
    pub tolerances: BTreeMap<String, f64>,
    pub allow_single_interface: bool,
    /// Interaction coefficient of the Toda system (test hook).
    pub ch_coefficient: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            subcommand: String::new(),
            k: 2,
            t0: 10.0,
            t_end: 5e3,
            grid_l: 30.0,
            grid_n: 1201,
            dt0: 1e-3,
            dt_max: 0.05,
            growth: 1.02,
            error_control: true,
            per_decade: 40,
            sigma: 1.0,
            alpha: 2.0,
            fit_window: None,
            toda_system: TodaKind::ChFull,
            out: PathBuf::from("chill-lab-out"),
            seed: 0,
            jobs: 0,
            tighten: 1.0,
            tolerances: BTreeMap::new(),
            allow_single_interface: false,
            ch_coefficient: CH_COEFFICIENT,
        }
    }
}

/// Every accepted key with its value type and documentation.
pub const KEYS: [(&str, &str, &str); 20] = [
    ("k", "integer", "number of interfaces"),
    ("T", "real", "initial time"),
    ("t_end", "real", "final time"),
    ("grid.L", "real", "domain half-width"),
    ("grid.N", "integer", "grid points"),
    ("solver.dt0", "real", "initial time step"),
    ("solver.dt_max", "real", "largest time step"),
    ("solver.growth", "real", "per-step growth factor of the time step"),
    ("solver.error_control", "bool", "reject steps that raise the energy"),
    ("snapshots.per_decade", "integer", "log-spaced snapshots per decade"),
    ("ansatz.sigma", "real", "weight exponent sigma"),
    ("ansatz.alpha", "real", "weight exponent alpha"),
    ("fit.t_a", "real", "start of the fit window"),
    ("fit.t_b", "real", "end of the fit window"),
    ("toda.system", "ch_full | ch_gaps | ac", "interface system for `toda`"),
    ("out", "path", "output directory"),
    ("seed", "integer", "seed for randomised checks"),
    ("jobs", "integer", "worker threads (0 = all cores)"),
    ("verify.tighten", "real", "divide every verify tolerance by this factor"),
    ("test.single_interface", "bool", "allow k = 1"),
];

fn strip(v: &str) -> &str {
    let v = v.trim();
    v.strip_prefix('"').and_then(|s| s.strip_suffix('"')).unwrap_or(v)
}

fn real(key: &str, v: &str) -> Result<f64> {
    strip(v).parse::<f64>().map_err(|_| ConfigError::TypeMismatch { key: key.into(), expected: "a real number", found: v.into() })
}

fn integer(key: &str, v: &str) -> Result<u64> {
    let s = strip(v);
    s.parse::<u64>().or_else(|_| {
        // allow integral reals such as 1e3
        match s.parse::<f64>() {
            Ok(x) if x.fract() == 0.0 && x >= 0.0 && x < 1e18 => Ok(x as u64),
            _ => Err(ConfigError::TypeMismatch { key: key.into(), expected: "a non-negative integer", found: v.into() }),
        }
    })
}

fn boolean(key: &str, v: &str) -> Result<bool> {
    match strip(v) {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(ConfigError::TypeMismatch { key: key.into(), expected: "true or false", found: v.into() }),
    }
}

impl RunConfig {
    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim();
        match key {
            "k" => self.k = integer(key, value)? as usize,
            "T" => self.t0 = real(key, value)?,
            "t_end" => self.t_end = real(key, value)?,
            "grid.L" => self.grid_l = real(key, value)?,
            "grid.N" => self.grid_n = integer(key, value)? as usize,
            "solver.dt0" => self.dt0 = real(key, value)?,
            "solver.dt_max" => self.dt_max = real(key, value)?,
            "solver.growth" => self.growth = real(key, value)?,
            "solver.error_control" => self.error_control = boolean(key, value)?,
            "snapshots.per_decade" => self.per_decade = integer(key, value)? as usize,
            "ansatz.sigma" => self.sigma = real(key, value)?,
            "ansatz.alpha" => self.alpha = real(key, value)?,
            "fit.t_a" => {
                let b = self.fit_window.map_or(f64::NAN, |w| w.1);
                self.fit_window = Some((real(key, value)?, b));
            }
            "fit.t_b" => {
                let a = self.fit_window.map_or(f64::NAN, |w| w.0);
                self.fit_window = Some((a, real(key, value)?));
            }
            "toda.system" => {
                self.toda_system = match strip(value) {
                    "ch_full" => TodaKind::ChFull,
                    "ch_gaps" => TodaKind::ChGaps,
                    "ac" => TodaKind::AcComparison,
                    _ => {
                        return Err(ConfigError::TypeMismatch {
                            key: key.into(),
                            expected: "one of ch_full, ch_gaps, ac",
                            found: value.into(),
                        })
                    }
                }
            }
            "out" => self.out = PathBuf::from(strip(value)),
            "seed" => self.seed = integer(key, value)?,
            "jobs" => self.jobs = integer(key, value)? as usize,
            "verify.tighten" => self.tighten = real(key, value)?,
            "test.single_interface" => self.allow_single_interface = boolean(key, value)?,
            _ => {
                let check = key.strip_prefix("tolerance.").filter(|c| check_names().contains(c));
                match check {
                    Some(c) => {
                        let v = real(key, value)?;
                        self.tolerances.insert(c.to_string(), v);
                    }
                    None => return Err(ConfigError::UnknownKey(key.into())),
                }
            }
        }
        Ok(())
    }

    /// Applies the lines of a configuration file.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax { line: n + 1, text: raw.into() })?;
            if k.trim().is_empty() {
                return Err(ConfigError::Syntax { line: n + 1, text: raw.into() });
            }
            self.set(k, v)?;
        }
        Ok(())
    }

    /// Checks every range constraint, naming the first offending key.
    pub fn validate(&self) -> Result<()> {
        let range = |key: &str, reason: String| Err(ConfigError::RangeViolation { key: key.into(), reason });
        let min_k = if self.allow_single_interface { 1 } else { 2 };
        if self.k < min_k || self.k > 10 {
            return range("k", format!("{} not in {min_k}..=10", self.k));
        }
        let positive = [
            ("T", self.t0),
            ("t_end", self.t_end),
            ("grid.L", self.grid_l),
            ("solver.dt0", self.dt0),
            ("solver.dt_max", self.dt_max),
            ("solver.growth", self.growth),
            ("ansatz.sigma", self.sigma),
            ("ansatz.alpha", self.alpha),
            ("verify.tighten", self.tighten),
        ];
        for (key, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return range(key, format!("{v} must be positive and finite"));
            }
        }
        for (key, v) in &self.tolerances {
            if !(*v > 0.0) {
                return range(&format!("tolerance.{key}"), format!("{v} must be positive"));
            }
        }
        if self.t_end <= self.t0 {
            return range("t_end", format!("{} must exceed T = {}", self.t_end, self.t0));
        }
        if self.grid_n < chill_core::pde::field::MIN_POINTS {
            return range("grid.N", format!("{} is below {}", self.grid_n, chill_core::pde::field::MIN_POINTS));
        }
        let dx = 2.0 * self.grid_l / (self.grid_n - 1) as f64;
        if dx > chill_core::operators::MAX_DX {
            return range("grid.N", format!("spacing {dx} exceeds {}", chill_core::operators::MAX_DX));
        }
        if self.growth < 1.0 {
            return range("solver.growth", format!("{} must be at least 1", self.growth));
        }
        if self.dt0 > self.dt_max {
            return range("solver.dt0", format!("{} exceeds solver.dt_max = {}", self.dt0, self.dt_max));
        }
        if self.per_decade == 0 {
            return range("snapshots.per_decade", "must be positive".into());
        }
        if !(self.sigma < std::f64::consts::SQRT_2) {
            return range("ansatz.sigma", format!("{} must be below sqrt 2", self.sigma));
        }
        if !(self.alpha > 1.0) {
            return range("ansatz.alpha", format!("{} must exceed 1", self.alpha));
        }
        if let Some((a, b)) = self.fit_window {
            if !(a > 0.0) {
                return range("fit.t_a", format!("{a} must be positive"));
            }
            if !(b > a) {
                return range("fit.t_b", format!("{b} must exceed fit.t_a = {a}"));
            }
        }
        Ok(())
    }

    /// Fit window, defaulting to `[max(10 T, t_end/100), t_end]`.
    pub fn window(&self) -> (f64, f64) {
        self.fit_window.unwrap_or_else(|| chill_core::tracker::default_window(self.t0, self.t_end))
    }

    /// Flat key/value echo for the manifest.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("subcommand", self.subcommand.clone());
        put("k", self.k.to_string());
        put("T", self.t0.to_string());
        put("t_end", self.t_end.to_string());
        put("grid.L", self.grid_l.to_string());
        put("grid.N", self.grid_n.to_string());
        put("solver.dt0", self.dt0.to_string());
        put("solver.dt_max", self.dt_max.to_string());
        put("solver.growth", self.growth.to_string());
        put("solver.error_control", self.error_control.to_string());
        put("snapshots.per_decade", self.per_decade.to_string());
        put("ansatz.sigma", self.sigma.to_string());
        put("ansatz.alpha", self.alpha.to_string());
        let (a, b) = self.window();
        put("fit.t_a", a.to_string());
        put("fit.t_b", b.to_string());
        put(
            "toda.system",
            match self.toda_system {
                TodaKind::ChFull => "ch_full",
                TodaKind::ChGaps => "ch_gaps",
                TodaKind::AcComparison => "ac",
            }
            .into(),
        );
        put("out", self.out.display().to_string());
        put("seed", self.seed.to_string());
        put("jobs", self.jobs.to_string());
        put("verify.tighten", self.tighten.to_string());
        for (c, v) in &self.tolerances {
            put(&format!("tolerance.{c}"), v.to_string());
        }
        if self.ch_coefficient != CH_COEFFICIENT {
            put("toda.ch_coefficient", self.ch_coefficient.to_string());
        }
        m
    }
}
