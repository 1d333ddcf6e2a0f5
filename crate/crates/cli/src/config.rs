//! Flat `key = value` run configuration.
//!
//! ```text
//! # strong resonance
//! mode = reduced
//! omega_rabi = 1.0
//! gamma1 = 0.2
//! gamma2 = 0
//! delta = 0
//! t_max = 30
//! n_points = 2000
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use starkdyn_core::oracle::{build_hamiltonian, build_reduced_hamiltonian, LatticeHamiltonian};
use starkdyn_core::spectral::{
    derive_spectrum, AtomParams, DriveParams, InitialCondition, PhysicalConstants, ReducedParams,
    Spectrum,
};

pub const DEFAULT_POINTS: usize = 2000;
pub const DEFAULT_DRAWS: usize = 100;

const REDUCED_REQUIRED: &[&str] = &["omega_rabi", "gamma1", "gamma2", "delta"];
const REDUCED_OPTIONAL: &[&str] = &["hbar_k", "p0", "e_plus", "e_minus", "omega_l"];
const SI_REQUIRED: &[&str] = &[
    "mass", "omega_a", "dipole", "gamma1", "gamma2", "e0", "omega_l",
];
const SI_OPTIONAL: &[&str] = &["k", "p0", "v0"];
const NUMERIC_SHARED: &[&str] = &["t_max", "sweep_start", "sweep_end"];
const INTEGER_SHARED: &[&str] = &["n_points", "sweep_steps", "verify_draws"];
const TEXT_SHARED: &[&str] = &["mode", "sweep_param", "csv_path", "svg_path"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IssueKind {
    Parse,
    Validation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigIssue {
    pub kind: IssueKind,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            IssueKind::Parse => "parse error",
            IssueKind::Validation => "validation error",
        };
        match self.line {
            Some(line) => write!(f, "{kind} on line {line}: {}", self.message),
            None => write!(f, "{kind}: {}", self.message),
        }
    }
}

/// Every problem found in a configuration, in line order.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError(pub Vec<ConfigIssue>);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Reduced,
    Si,
}

impl Mode {
    fn required(self) -> &'static [&'static str] {
        match self {
            Mode::Reduced => REDUCED_REQUIRED,
            Mode::Si => SI_REQUIRED,
        }
    }

    fn optional(self) -> &'static [&'static str] {
        match self {
            Mode::Reduced => REDUCED_OPTIONAL,
            Mode::Si => SI_OPTIONAL,
        }
    }

    fn accepts(self, key: &str) -> bool {
        self.required().contains(&key) || self.optional().contains(&key)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Reduced => "reduced",
            Mode::Si => "si",
        }
    }
}

/// Physical model of one run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Model {
    Reduced(ReducedParams),
    Si {
        atom: AtomParams,
        drive: DriveParams,
        init: InitialCondition,
    },
}

impl Model {
    /// Builds the model from its numeric parameters. Errors name the
    /// offending key.
    pub fn from_values(mode: Mode, values: &BTreeMap<String, f64>) -> Result<Model, String> {
        let get = |k: &str| values.get(k).copied();
        let req = |k: &str| get(k).ok_or_else(|| format!("missing required key `{k}`"));
        let model = match mode {
            Mode::Reduced => {
                let mut p = ReducedParams::new(
                    req("omega_rabi")?,
                    req("gamma1")?,
                    req("gamma2")?,
                    req("delta")?,
                );
                p.hbar_k = get("hbar_k").unwrap_or(p.hbar_k);
                p.p0 = get("p0").unwrap_or(p.p0);
                p.e_plus = get("e_plus").unwrap_or(p.e_plus);
                p.e_minus = get("e_minus").unwrap_or(p.e_minus);
                p.omega_l = get("omega_l").unwrap_or(p.omega_l);
                p.validate().map_err(|e| e.to_string())?;
                Model::Reduced(p)
            }
            Mode::Si => {
                let constants = PhysicalConstants::SI;
                let atom = AtomParams {
                    mass: req("mass")?,
                    omega_a: req("omega_a")?,
                    dipole: req("dipole")?,
                    gamma1: req("gamma1")?,
                    gamma2: req("gamma2")?,
                };
                let drive =
                    DriveParams::si(&constants, &atom, req("e0")?, req("omega_l")?, get("k"))
                        .map_err(|e| e.to_string())?;
                let init = match (get("p0"), get("v0")) {
                    (Some(_), Some(_)) => return Err("set at most one of `p0` and `v0`".into()),
                    (Some(p0), None) => InitialCondition::state2(p0),
                    (None, Some(v0)) => InitialCondition::from_velocity(&atom, v0),
                    (None, None) => InitialCondition::state2(0.0),
                };
                Model::Si { atom, drive, init }
            }
        };
        model.spectrum().map_err(|e| e.to_string())?;
        Ok(model)
    }

    pub fn spectrum(&self) -> starkdyn_core::Result<Spectrum> {
        match self {
            Model::Reduced(p) => Spectrum::from_reduced(p),
            Model::Si { atom, drive, init } => {
                derive_spectrum(&PhysicalConstants::SI, atom, drive, init)
            }
        }
    }

    pub fn hamiltonian(&self) -> starkdyn_core::Result<LatticeHamiltonian> {
        match self {
            Model::Reduced(p) => build_reduced_hamiltonian(p),
            Model::Si { atom, drive, init } => {
                build_hamiltonian(&PhysicalConstants::SI, atom, drive, init)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub param: String,
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl SweepSpec {
    /// Evenly spaced axis, `start` alone when `steps == 1`.
    pub fn axis(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| self.start + (self.end - self.start) * i as f64 / last)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub model: Model,
    /// Numeric model parameters as written, kept so sweeps can rebuild the
    /// model with one value replaced.
    pub values: BTreeMap<String, f64>,
    /// Horizon; the library default is used when absent.
    pub t_max: Option<f64>,
    pub n_points: usize,
    pub sweep: Option<SweepSpec>,
    pub verify_draws: usize,
    pub csv_path: Option<PathBuf>,
    pub svg_path: Option<PathBuf>,
}

impl RunConfig {
    /// The model with `key` replaced by `value`.
    pub fn model_with(&self, key: &str, value: f64) -> Result<Model, String> {
        let mut values = self.values.clone();
        values.insert(key.to_string(), value);
        // p0 and v0 are alternatives; sweeping one drops the other
        match key {
            "p0" => values.remove("v0"),
            "v0" => values.remove("p0"),
            _ => None,
        };
        Model::from_values(self.mode, &values).map_err(|e| format!("{key} = {value}: {e}"))
    }
}

enum Value {
    Number(f64),
    Integer(usize),
    Text(String),
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut issues = Vec::new();
    let mut entries: BTreeMap<String, (usize, Value)> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let parse_issue = |message: String| ConfigIssue {
            kind: IssueKind::Parse,
            line: Some(line),
            message,
        };
        let Some((key, value)) = content.split_once('=') else {
            issues.push(parse_issue(format!(
                "expected `key = value`, found `{content}`"
            )));
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            issues.push(parse_issue(format!(
                "expected `key = value`, found `{content}`"
            )));
            continue;
        }
        if let Some((first, _)) = entries.get(key) {
            issues.push(parse_issue(format!(
                "duplicate key `{key}` (first set on line {first})"
            )));
            continue;
        }
        let parsed = if TEXT_SHARED.contains(&key) {
            Ok(Value::Text(value.to_string()))
        } else if INTEGER_SHARED.contains(&key) {
            value
                .parse::<usize>()
                .map(Value::Integer)
                .map_err(|_| format!("`{key}` expects a non-negative integer, found `{value}`"))
        } else if NUMERIC_SHARED.contains(&key)
            || Mode::Reduced.accepts(key)
            || Mode::Si.accepts(key)
        {
            match value.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(Value::Number(v)),
                _ => Err(format!("`{key}` expects a finite number, found `{value}`")),
            }
        } else {
            Err(format!("unknown key `{key}`"))
        };
        match parsed {
            Ok(v) => {
                entries.insert(key.to_string(), (line, v));
            }
            Err(message) => issues.push(parse_issue(message)),
        }
    }

    let validation = |line: Option<usize>, message: String| ConfigIssue {
        kind: IssueKind::Validation,
        line,
        message,
    };
    let text_of = |key: &str| match entries.get(key) {
        Some((line, Value::Text(s))) => Some((*line, s.clone())),
        _ => None,
    };
    let number_of = |key: &str| match entries.get(key) {
        Some((line, Value::Number(v))) => Some((*line, *v)),
        _ => None,
    };
    let integer_of = |key: &str| match entries.get(key) {
        Some((line, Value::Integer(v))) => Some((*line, *v)),
        _ => None,
    };

    let mode = match text_of("mode") {
        None => {
            issues.push(validation(
                None,
                "missing `mode` (expected `reduced` or `si`)".into(),
            ));
            None
        }
        Some((_, m)) if m.eq_ignore_ascii_case("reduced") => Some(Mode::Reduced),
        Some((_, m)) if m.eq_ignore_ascii_case("si") => Some(Mode::Si),
        Some((line, m)) => {
            issues.push(validation(
                Some(line),
                format!("unknown mode `{m}` (expected `reduced` or `si`)"),
            ));
            None
        }
    };

    let mut values = BTreeMap::new();
    if let Some(mode) = mode {
        for key in mode.required() {
            if !entries.contains_key(*key) {
                issues.push(validation(
                    None,
                    format!("missing required key `{key}` for mode {}", mode.as_str()),
                ));
            }
        }
        for (key, (line, value)) in &entries {
            if let Value::Number(v) = value {
                if mode.accepts(key) {
                    values.insert(key.clone(), *v);
                } else if !NUMERIC_SHARED.contains(&key.as_str()) {
                    issues.push(validation(
                        Some(*line),
                        format!("key `{key}` does not apply to mode {}", mode.as_str()),
                    ));
                }
            }
        }
        if let (Some((line, _)), Some(_)) = (number_of("p0"), number_of("v0")) {
            if mode == Mode::Si {
                issues.push(validation(
                    Some(line),
                    "set at most one of `p0` and `v0`".into(),
                ));
            }
        }
    }

    let t_max = number_of("t_max");
    if let Some((line, t)) = t_max {
        if !(t > 0.0) {
            issues.push(validation(
                Some(line),
                format!("`t_max` must be > 0, got {t}"),
            ));
        }
    }
    let n_points = match integer_of("n_points") {
        Some((line, n)) if n < 2 => {
            issues.push(validation(
                Some(line),
                format!("`n_points` must be >= 2, got {n}"),
            ));
            n
        }
        Some((_, n)) => n,
        None => DEFAULT_POINTS,
    };
    let verify_draws = integer_of("verify_draws").map_or(DEFAULT_DRAWS, |(_, n)| n);

    let sweep_keys = ["sweep_param", "sweep_start", "sweep_end", "sweep_steps"];
    let present: Vec<&str> = sweep_keys
        .iter()
        .copied()
        .filter(|k| entries.contains_key(*k))
        .collect();
    let mut sweep = None;
    if !present.is_empty() && present.len() < sweep_keys.len() {
        let missing: Vec<&str> = sweep_keys
            .iter()
            .copied()
            .filter(|k| !present.contains(k))
            .collect();
        issues.push(validation(
            None,
            format!("incomplete sweep: missing {}", missing.join(", ")),
        ));
    } else if present.len() == sweep_keys.len() {
        let (pline, param) = text_of("sweep_param").unwrap();
        let (_, start) = number_of("sweep_start").unwrap();
        let (_, end) = number_of("sweep_end").unwrap();
        let (sline, steps) = integer_of("sweep_steps").unwrap();
        if let Some(mode) = mode {
            if !mode.accepts(&param) {
                issues.push(validation(
                    Some(pline),
                    format!(
                        "`sweep_param` must name a numeric {} parameter, got `{param}`",
                        mode.as_str()
                    ),
                ));
            }
        }
        if steps == 0 {
            issues.push(validation(Some(sline), "`sweep_steps` must be >= 1".into()));
        }
        sweep = Some(SweepSpec {
            param,
            start,
            end,
            steps,
        });
    }

    let mut model = None;
    if let Some(mode) = mode {
        if issues.is_empty() {
            match Model::from_values(mode, &values) {
                Ok(m) => model = Some(m),
                Err(message) => issues.push(validation(None, message)),
            }
        }
    }

    if !issues.is_empty() {
        issues.sort_by_key(|i| (i.line.is_none(), i.line));
        return Err(ConfigError(issues));
    }
    Ok(RunConfig {
        mode: mode.unwrap(),
        model: model.unwrap(),
        values,
        t_max: t_max.map(|(_, t)| t),
        n_points,
        sweep,
        verify_draws,
        csv_path: text_of("csv_path").map(|(_, p)| PathBuf::from(p)),
        svg_path: text_of("svg_path").map(|(_, p)| PathBuf::from(p)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_whitespace() {
        let cfg = parse_config(
            "# header\n\nmode = reduced   # trailing\n omega_rabi=2\ngamma1 = 0.1\ngamma2=0\ndelta = -0.5\n",
        )
        .unwrap();
        assert_eq!(cfg.n_points, DEFAULT_POINTS);
        assert_eq!(cfg.t_max, None);
        match cfg.model {
            Model::Reduced(p) => {
                assert_eq!(p.omega_rabi, 2.0);
                assert_eq!(p.delta, -0.5);
                assert_eq!(p.hbar_k, 1.0);
            }
            _ => panic!("expected reduced model"),
        }
    }

    #[test]
    fn collects_every_issue() {
        let err = parse_config(
            "mode = reduced\nomega_rabi = x\nbogus = 1\nno equals sign\nn_points = 1\n",
        )
        .unwrap_err();
        let lines: Vec<Option<usize>> = err.0.iter().map(|i| i.line).collect();
        assert_eq!(&lines[..4], &[Some(2), Some(3), Some(4), Some(5)]);
        let text = err.to_string();
        for key in ["gamma1", "gamma2", "delta"] {
            assert!(text.contains(&format!("`{key}`")), "{text}");
        }
    }

    #[test]
    fn mode_mixing_rejected() {
        let err = parse_config(
            "mode = reduced\nomega_rabi = 1\ngamma1 = 0\ngamma2 = 0\ndelta = 0\nmass = 1e-26\n",
        )
        .unwrap_err();
        assert_eq!(err.0.len(), 1);
        assert_eq!(err.0[0].line, Some(6));
    }

    #[test]
    fn duplicate_keys() {
        let err = parse_config("mode = reduced\ngamma1 = 0\ngamma1 = 1\n").unwrap_err();
        assert!(err
            .0
            .iter()
            .any(|i| i.kind == IssueKind::Parse && i.line == Some(3)));
    }

    #[test]
    fn model_errors_are_reported() {
        let err =
            parse_config("mode = reduced\nomega_rabi = 1\ngamma1 = -1\ngamma2 = 0\ndelta = 0\n")
                .unwrap_err();
        assert!(err.to_string().contains("gamma1"));
    }

    #[test]
    fn sweep_axis() {
        let s = SweepSpec {
            param: "delta".into(),
            start: -1.0,
            end: 1.0,
            steps: 5,
        };
        assert_eq!(s.axis(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        let single = SweepSpec { steps: 1, ..s };
        assert_eq!(single.axis(), vec![-1.0]);
    }

    #[test]
    fn incomplete_sweep() {
        let err = parse_config("mode = reduced\nomega_rabi = 1\ngamma1 = 0\ngamma2 = 0\ndelta = 0\nsweep_param = delta\n")
            .unwrap_err();
        assert!(err.to_string().contains("sweep_start"));
    }
}
