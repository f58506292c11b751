use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::DataSpec;
use crate::error::{Error, Result};
use crate::heat::HeatConfig;
use crate::semilinear::SemilinearConfig;
use crate::wave::{OuterRule, WaveConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    HeatDecay,
    LinearEstimates,
    Inequalities,
    LifespanSweep,
    GlobalDecay,
    SupersolutionCompare,
    VerifyAll,
}

/// Either an explicit list or a geometric progression from `max` down to `min`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsilonGrid {
    List(Vec<f64>),
    Geometric { max: f64, min: f64, count: usize },
}

impl EpsilonGrid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            EpsilonGrid::List(v) => v.clone(),
            EpsilonGrid::Geometric { max, min, count } => match *count {
                0 => Vec::new(),
                1 => vec![*max],
                n => (0..n).map(|i| max * (min / max).powf(i as f64 / (n - 1) as f64)).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepParams {
    pub p: f64,
    pub epsilons: EpsilonGrid,
    pub horizon: f64,
    /// Radial spacing of the semilinear runs.
    pub dr: f64,
    pub data: DataSpec,
}

impl SweepParams {
    pub fn subcritical() -> Self {
        Self {
            p: 1.5,
            epsilons: EpsilonGrid::Geometric {
                max: 0.3,
                min: 0.03,
                count: 8,
            },
            horizon: 12000.0,
            dr: 0.1,
            data: DataSpec::default(),
        }
    }

    pub fn critical() -> Self {
        Self {
            p: 2.0,
            epsilons: EpsilonGrid::Geometric {
                max: 60.0,
                min: 23.0,
                count: 6,
            },
            horizon: 5000.0,
            ..Self::subcritical()
        }
    }
}

impl Default for SweepParams {
    fn default() -> Self {
        Self::subcritical()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HardyParams {
    pub fuzz_count: usize,
    pub cutoffs: Vec<f64>,
    pub dr: f64,
    pub tol: f64,
}

impl Default for HardyParams {
    fn default() -> Self {
        Self {
            fuzz_count: 500,
            cutoffs: vec![10.0, 30.0, 100.0, 300.0, 1e3, 3e3, 1e4],
            dr: 0.01,
            tol: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LogGnParams {
    pub centers: Vec<f64>,
    pub width: f64,
    pub qs: Vec<f64>,
    pub dr: f64,
    pub max_drift: f64,
}

impl Default for LogGnParams {
    fn default() -> Self {
        Self {
            centers: vec![2.0, 10.0, 100.0, 1000.0],
            width: 1.0,
            qs: vec![1.5, 2.0, 3.0],
            dr: 0.02,
            max_drift: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PositivityParams {
    pub count: usize,
    pub horizon: f64,
    /// Largest spacing used; narrower bumps get a finer one.
    pub dr: f64,
    /// Minimum number of nodes across each bump on the coarse grid.
    pub nodes_per_width: f64,
}

impl Default for PositivityParams {
    fn default() -> Self {
        Self {
            count: 50,
            horizon: 50.0,
            dr: 0.1,
            nodes_per_width: 32.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinearParams {
    pub l1_times: Vec<f64>,
    pub matsumura_times: Vec<f64>,
    /// Spacings of the refinement ladder used by the Matsumura and
    /// cross-solver checks.
    pub drs: Vec<f64>,
    pub log_times: Vec<f64>,
}

impl Default for LinearParams {
    fn default() -> Self {
        Self {
            l1_times: vec![0.1, 1.0, 10.0, 50.0],
            matsumura_times: vec![1.0, 3.0, 10.0, 30.0, 100.0],
            drs: vec![0.1, 0.05, 0.025],
            log_times: vec![0.1, 1.0, 10.0, 100.0, 1000.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleParams {
    /// Refinement ladder for the radial versus reduced comparison.
    pub agreement_drs: Vec<f64>,
    pub agreement_horizon: f64,
    pub duhamel_drs: Vec<f64>,
    pub duhamel_epsilon: f64,
    pub duhamel_p: f64,
    /// Sample times; each must be a multiple of 0.1.
    pub duhamel_times: Vec<f64>,
}

impl Default for OracleParams {
    fn default() -> Self {
        Self {
            agreement_drs: vec![0.1, 0.05, 0.025, 0.0125],
            agreement_horizon: 5.0,
            duhamel_drs: vec![0.1, 0.05, 0.025],
            duhamel_epsilon: 2.0,
            duhamel_p: 2.0,
            duhamel_times: vec![2.0, 4.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeatDecayParams {
    pub qs: Vec<f64>,
    pub times: Vec<f64>,
    pub dr: f64,
    pub residual_samples: usize,
}

impl Default for HeatDecayParams {
    fn default() -> Self {
        Self {
            qs: vec![1.0, 2.0],
            times: vec![1.0, 10.0, 100.0, 1000.0, 10000.0],
            dr: 0.2,
            residual_samples: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GlobalParams {
    pub p: f64,
    pub delta: f64,
    pub horizon: f64,
    pub dr: f64,
}

impl Default for GlobalParams {
    fn default() -> Self {
        Self {
            p: 3.0,
            delta: 1.0,
            horizon: 1000.0,
            dr: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SupersolutionParams {
    pub p: f64,
    pub epsilons: Vec<f64>,
    pub horizon: f64,
    pub dr: f64,
}

impl Default for SupersolutionParams {
    fn default() -> Self {
        Self {
            p: 2.0,
            epsilons: vec![200.0, 100.0, 60.0, 40.0],
            horizon: 200.0,
            dr: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModalParams {
    pub modes: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub time_points: usize,
}

impl Default for ModalParams {
    fn default() -> Self {
        Self {
            modes: 25,
            lambda_min: 1e-3,
            lambda_max: 1e3,
            time_points: 401,
        }
    }
}

/// Everything one invocation needs; every section is optional in the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Option<ExperimentKind>,
    pub seed: u64,
    pub jobs: Option<usize>,
    pub out: Option<String>,
    pub wave: WaveConfig,
    pub heat: HeatConfig,
    pub semilinear: SemilinearConfig,
    pub hardy: HardyParams,
    pub log_gn: LogGnParams,
    pub positivity: PositivityParams,
    pub linear: LinearParams,
    pub heat_decay: HeatDecayParams,
    pub sweep: SweepParams,
    pub critical: SweepParams,
    pub global: GlobalParams,
    pub oracle: OracleParams,
    pub supersolution: SupersolutionParams,
    pub modal: ModalParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let mut semilinear = SemilinearConfig::default();
        semilinear.wave.outer = OuterRule::DampedFront { tol: 1e-10 };
        Self {
            kind: None,
            seed: 20240,
            jobs: None,
            out: None,
            wave: WaveConfig::default(),
            heat: HeatConfig::default(),
            semilinear,
            hardy: HardyParams::default(),
            log_gn: LogGnParams::default(),
            positivity: PositivityParams::default(),
            linear: LinearParams::default(),
            heat_decay: HeatDecayParams::default(),
            sweep: SweepParams::subcritical(),
            critical: SweepParams::critical(),
            global: GlobalParams::default(),
            oracle: OracleParams::default(),
            supersolution: SupersolutionParams::default(),
            modal: ModalParams::default(),
        }
    }
}

fn positive(errs: &mut Vec<String>, key: &str, v: f64) {
    if !(v > 0.0) || !v.is_finite() {
        errs.push(format!("{key}: must be finite and positive, got {v}"));
    }
}

fn exponent(errs: &mut Vec<String>, key: &str, p: f64) {
    if !(p > 1.0) {
        errs.push(format!("{key}: nonlinearity exponent must satisfy p > 1, got {p}"));
    }
}

fn cfl(errs: &mut Vec<String>, key: &str, wave: &WaveConfig, dr: f64) {
    if let Some(dt) = wave.dt {
        let limit = wave.cfl_safety * dr;
        if dt > limit * (1.0 + 1e-12) {
            errs.push(format!(
                "{key}.dt: CFL rule dt <= cfl_safety * dr violated ({dt} > {limit} for dr = {dr})"
            ));
        }
    }
}

fn sweep(errs: &mut Vec<String>, key: &str, s: &SweepParams, wave: &WaveConfig) {
    exponent(errs, &format!("{key}.p"), s.p);
    positive(errs, &format!("{key}.horizon"), s.horizon);
    positive(errs, &format!("{key}.dr"), s.dr);
    cfl(errs, "semilinear.wave", wave, s.dr);
    let eps = s.epsilons.values();
    if eps.is_empty() {
        errs.push(format!("{key}.epsilons: grid is empty"));
    }
    if let Some(bad) = eps.iter().find(|e| !(**e > 0.0)) {
        errs.push(format!("{key}.epsilons: amplitudes must be positive, got {bad}"));
    }
    if !(s.data.outer > 1.0) || s.data.power < 1 {
        errs.push(format!("{key}.data: need outer > 1 and power >= 1"));
    }
}

impl ExperimentConfig {
    /// Every precondition violation, each naming its key.
    pub fn violations(&self) -> Vec<String> {
        let mut errs = Vec::new();
        for (key, res) in [
            ("wave", self.wave.validate()),
            ("heat", self.heat.validate()),
            ("semilinear", self.semilinear.validate()),
        ] {
            if let Err(e) = res {
                errs.push(format!("{key}: {e}"));
            }
        }
        if self.jobs == Some(0) {
            errs.push("jobs: must be at least 1".into());
        }
        sweep(&mut errs, "sweep", &self.sweep, &self.semilinear.wave);
        sweep(&mut errs, "critical", &self.critical, &self.semilinear.wave);
        for &dr in &self.linear.drs {
            positive(&mut errs, "linear.drs", dr);
            cfl(&mut errs, "wave", &self.wave, dr);
        }
        positive(&mut errs, "positivity.dr", self.positivity.dr);
        cfl(&mut errs, "wave", &self.wave, self.positivity.dr);
        positive(&mut errs, "positivity.horizon", self.positivity.horizon);
        positive(&mut errs, "positivity.nodes_per_width", self.positivity.nodes_per_width);
        positive(&mut errs, "hardy.dr", self.hardy.dr);
        if let Some(bad) = self.hardy.cutoffs.iter().find(|c| !(**c > 1.0)) {
            errs.push(format!("hardy.cutoffs: must exceed 1, got {bad}"));
        }
        positive(&mut errs, "log_gn.dr", self.log_gn.dr);
        positive(&mut errs, "log_gn.width", self.log_gn.width);
        for &q in &self.log_gn.qs {
            if !(q > 1.0) {
                errs.push(format!("log_gn.qs: need q > 1, got {q}"));
            }
        }
        for &q in &self.heat_decay.qs {
            if !(1.0..=2.0).contains(&q) {
                errs.push(format!("heat_decay.qs: need q in [1, 2], got {q}"));
            }
        }
        if self.heat_decay.times.iter().any(|t| !(*t > 0.0)) || self.heat_decay.times.windows(2).any(|w| w[1] <= w[0]) {
            errs.push("heat_decay.times: must be positive and increasing".into());
        }
        positive(&mut errs, "heat_decay.dr", self.heat_decay.dr);
        exponent(&mut errs, "global.p", self.global.p);
        if !(self.global.p > 2.0) {
            errs.push(format!("global.p: global decay needs p > 2, got {}", self.global.p));
        }
        positive(&mut errs, "global.horizon", self.global.horizon);
        positive(&mut errs, "global.dr", self.global.dr);
        cfl(&mut errs, "semilinear.wave", &self.semilinear.wave, self.global.dr);
        for (key, drs) in [
            ("oracle.agreement_drs", &self.oracle.agreement_drs),
            ("oracle.duhamel_drs", &self.oracle.duhamel_drs),
        ] {
            if drs.len() < 2 {
                errs.push(format!("{key}: need at least two spacings"));
            }
            for &dr in drs {
                positive(&mut errs, key, dr);
                cfl(&mut errs, "wave", &self.wave, dr);
            }
        }
        positive(&mut errs, "oracle.agreement_horizon", self.oracle.agreement_horizon);
        exponent(&mut errs, "oracle.duhamel_p", self.oracle.duhamel_p);
        exponent(&mut errs, "supersolution.p", self.supersolution.p);
        positive(&mut errs, "supersolution.horizon", self.supersolution.horizon);
        if !(self.modal.lambda_min >= 0.0 && self.modal.lambda_max > self.modal.lambda_min) {
            errs.push("modal: need 0 <= lambda_min < lambda_max".into());
        }
        if self.modal.modes < 2 || self.modal.time_points < 2 {
            errs.push("modal: need at least 2 modes and 2 time points".into());
        }
        errs
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(format!("schema: {e}")))?;
        let errs = cfg.violations();
        if errs.is_empty() {
            Ok(cfg)
        } else {
            Err(Error::Config(errs.join("\n")))
        }
    }
}

/// Reads and validates a TOML experiment file.
pub fn parse_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    ExperimentConfig::from_toml(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_gets_defaults() {
        let cfg = ExperimentConfig::from_toml("kind = \"lifespan-sweep\"\n").unwrap();
        assert_eq!(cfg.kind, Some(ExperimentKind::LifespanSweep));
        assert_eq!(cfg.sweep.p, 1.5);
        assert_eq!(cfg.semilinear.m_blow, 1e8);
        assert_eq!(cfg.sweep.epsilons.values().len(), 8);
    }

    #[test]
    fn subcritical_exponent_is_named() {
        let err = ExperimentConfig::from_toml("[sweep]\np = 0.5\n").unwrap_err().to_string();
        assert!(err.contains("sweep.p") && err.contains("p > 1"), "{err}");
    }

    #[test]
    fn cfl_violation_is_named() {
        let err = ExperimentConfig::from_toml("[wave]\ndt = 0.2\n").unwrap_err().to_string();
        assert!(err.contains("CFL"), "{err}");
    }

    #[test]
    fn all_violations_are_collected() {
        let err = ExperimentConfig::from_toml("[sweep]\np = 0.5\nepsilons = []\n[wave]\ndt = 0.2\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("sweep.p") && err.contains("empty") && err.contains("CFL"), "{err}");
    }

    #[test]
    fn unknown_keys_are_schema_errors() {
        let err = ExperimentConfig::from_toml("[sweep]\nq = 2.0\n").unwrap_err().to_string();
        assert!(err.contains("schema"), "{err}");
    }

    #[test]
    fn shipped_configs_parse() {
        for text in [
            include_str!("../../configs/quick.toml"),
            include_str!("../../configs/lifespan_p2.toml"),
        ] {
            ExperimentConfig::from_toml(text).unwrap();
        }
    }

    #[test]
    fn geometric_grid_hits_both_ends() {
        let v = EpsilonGrid::Geometric {
            max: 1.0,
            min: 0.01,
            count: 3,
        }
        .values();
        assert_eq!(v.len(), 3);
        assert!((v[1] - 0.1).abs() < 1e-15 && (v[2] - 0.01).abs() < 1e-15);
    }

    #[test]
    fn outer_rule_parses_from_a_table() {
        let cfg = ExperimentConfig::from_toml("[semilinear.wave.outer]\nkind = \"damped-front\"\ntol = 1e-8\n").unwrap();
        assert_eq!(cfg.semilinear.wave.outer, OuterRule::DampedFront { tol: 1e-8 });
    }
}
