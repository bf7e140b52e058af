//! Run configuration: a JSON document validated in full before any computation.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::experiments::*;
use crate::numerics::{Grid, PhysParams, Representation};
use crate::states::{CoherentParams, GaussianParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Build a state and write it out.
    State,
    /// Build a state, evolve it freely and write the densities and peak trajectory.
    Evolve,
    /// Run one experiment.
    Verify,
    /// Run a list of experiments.
    Scan,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n_points: usize,
    pub x_min: f64,
    pub x_max: f64,
}

impl GridSpec {
    pub fn build(&self, phys: &PhysParams) -> Result<Grid> {
        Grid::for_phys(self.n_points, self.x_min, self.x_max, phys)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Coherent {
        eps: f64,
        xi: f64,
        t: f64,
        #[serde(default = "position")]
        representation: Representation,
    },
    Gaussian {
        x0: f64,
        p0: f64,
        sigma: f64,
    },
    XiEigenstate {
        xi: f64,
        t: f64,
    },
    BerryBalazs {
        b: f64,
    },
}

fn position() -> Representation {
    Representation::Position
}

impl StateSpec {
    pub fn coherent(&self) -> Option<CoherentParams> {
        match *self {
            StateSpec::Coherent { eps, xi, t, .. } => Some(CoherentParams::new(eps, xi, t)),
            _ => None,
        }
    }

    pub fn gaussian(&self) -> Option<GaussianParams> {
        match *self {
            StateSpec::Gaussian { x0, p0, sigma } => Some(GaussianParams { x0, p0, sigma }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum ExperimentSpec {
    EigenrelationResidual(EigenrelationConfig),
    AccelerationFit(AccelerationConfig),
    ShapeDistortion(ShapeConfig),
    EvolutionEquivalence(EvolutionConfig),
    OverlapScan(OverlapConfig),
    BasisOrthonormality(BasisConfig),
    KExpectationSeries(KExpectationConfig),
    BoostCovarianceResidual(BoostCovarianceConfig),
    BerryBalazsTrajectory(BerryBalazsConfig),
    EpsilonZeroLimit(EpsZeroConfig),
    EpsilonInfinityFidelity(EpsInfinityConfig),
    CommutatorTable(CommutatorConfig),
    RepresentationCrosscheck(CrosscheckConfig),
    DisplacementComposition(DisplacementConfig),
    ZassenhausCheck(ZassenhausConfig),
}

impl ExperimentSpec {
    pub fn run(&self, grid: &Grid, phys: &PhysParams) -> Result<ExperimentReport> {
        use ExperimentSpec::*;
        match self {
            EigenrelationResidual(c) => eigenrelation_residual(c, grid, phys),
            AccelerationFit(c) => acceleration_fit(c, grid, phys),
            ShapeDistortion(c) => shape_distortion(c, grid, phys),
            EvolutionEquivalence(c) => evolution_equivalence(c, grid, phys),
            OverlapScan(c) => overlap_scan(c, phys),
            BasisOrthonormality(c) => basis_orthonormality(c, grid, phys),
            KExpectationSeries(c) => k_expectation_series(c, grid, phys),
            BoostCovarianceResidual(c) => boost_covariance_residual(c, grid, phys),
            BerryBalazsTrajectory(c) => berry_balazs_trajectory(c, grid, phys),
            EpsilonZeroLimit(c) => epsilon_zero_limit(c, grid, phys),
            EpsilonInfinityFidelity(c) => epsilon_infinity_fidelity(c, grid, phys),
            CommutatorTable(c) => commutator_table(c, grid, phys),
            RepresentationCrosscheck(c) => representation_crosscheck(c, grid, phys),
            DisplacementComposition(c) => displacement_composition(c, grid, phys),
            ZassenhausCheck(c) => zassenhaus_check(c, grid, phys),
        }
    }
}

/// One entry of a scan: an experiment with an optional grid of its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanEntry {
    #[serde(default)]
    pub grid: Option<GridSpec>,
    pub experiment: ExperimentSpec,
}

/// File names, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub report: String,
    pub state_csv: String,
    pub density_svg: String,
    pub trajectory_csv: String,
    pub trajectory_svg: String,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            report: "report.json".into(),
            state_csv: "state.csv".into(),
            density_svg: "density.svg".into(),
            trajectory_csv: "trajectory.csv".into(),
            trajectory_svg: "trajectory.svg".into(),
        }
    }
}

impl OutputSpec {
    fn names(&self) -> [&str; 5] {
        [&self.report, &self.state_csv, &self.density_svg, &self.trajectory_csv, &self.trajectory_svg]
    }

    pub fn validate(&self) -> Result<()> {
        for n in self.names() {
            let p = std::path::Path::new(n);
            let plain = p.components().count() == 1
                && matches!(p.components().next(), Some(std::path::Component::Normal(_)));
            if !plain {
                return Err(LabError::Config(format!("output name '{n}' must be a plain file name")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub phys: PhysParams,
    #[serde(default)]
    pub state: Option<StateSpec>,
    /// Evolution times for `evolve`.
    #[serde(default)]
    pub taus: Vec<f64>,
    #[serde(default)]
    pub experiment: Option<ExperimentSpec>,
    #[serde(default)]
    pub experiments: Vec<ScanEntry>,
    #[serde(default)]
    pub outputs: OutputSpec,
}

/// Configuration with every grid constructed and every requirement of its command checked.
#[derive(Debug, Clone)]
pub struct ValidatedRun {
    pub config: RunConfig,
    pub grid: Option<Grid>,
    pub jobs: Vec<(Grid, ExperimentSpec)>,
}

fn need<T>(v: Option<T>, what: &str, cmd: Command) -> Result<T> {
    v.ok_or_else(|| LabError::Config(format!("command {cmd:?} requires '{what}'")))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| LabError::Config(e.to_string()))
    }

    pub fn validate(self) -> Result<ValidatedRun> {
        self.phys.validate()?;
        self.outputs.validate()?;
        let grid = match &self.grid {
            Some(g) => Some(g.build(&self.phys)?),
            None => None,
        };
        let mut jobs = Vec::new();
        match self.command {
            Command::State | Command::Evolve => {
                need(grid, "grid", self.command)?;
                need(self.state, "state", self.command)?;
                if self.command == Command::Evolve && self.taus.is_empty() {
                    return Err(LabError::Config("command Evolve requires a non-empty 'taus' list".into()));
                }
                if self.taus.iter().any(|t| !t.is_finite()) {
                    return Err(LabError::Config("taus must be finite".into()));
                }
            }
            Command::Verify => {
                let e = need(self.experiment.clone(), "experiment", self.command)?;
                jobs.push((need(grid, "grid", self.command)?, e));
            }
            Command::Scan => {
                if self.experiments.is_empty() {
                    return Err(LabError::Config("command Scan requires a non-empty 'experiments' list".into()));
                }
                for entry in &self.experiments {
                    let g = match &entry.grid {
                        Some(spec) => spec.build(&self.phys)?,
                        None => need(grid, "grid (top-level or per experiment)", self.command)?,
                    };
                    jobs.push((g, entry.experiment.clone()));
                }
            }
        }
        Ok(ValidatedRun { config: self, grid, jobs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_verify_config() {
        let text = r#"{
            "command": "verify",
            "grid": {"n_points": 4096, "x_min": -32, "x_max": 32},
            "experiment": {"name": "eigenrelation_residual", "state": {"eps": 1, "xi": 0, "t": 0}}
        }"#;
        let run = RunConfig::parse(text).unwrap().validate().unwrap();
        assert_eq!(run.jobs.len(), 1);
        match &run.jobs[0].1 {
            ExperimentSpec::EigenrelationResidual(c) => assert_eq!(c.tol, 1e-6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_keys_everywhere() {
        let top = r#"{"command": "state", "bogus": 1}"#;
        assert!(RunConfig::parse(top).is_err());
        let inner = r#"{"command": "verify", "grid": {"n_points": 64, "x_min": 0, "x_max": 1},
            "experiment": {"name": "shape_distortion", "tau": 1, "taux": 2}}"#;
        assert!(RunConfig::parse(inner).is_err());
        let state = r#"{"command": "state", "grid": {"n_points": 64, "x_min": 0, "x_max": 1},
            "state": {"kind": "gaussian", "x0": 0, "p0": 0, "sigma": 1, "extra": 0}}"#;
        assert!(RunConfig::parse(state).is_err());
    }

    #[test]
    fn grid_rule_is_validated() {
        let text = r#"{"command": "verify", "grid": {"n_points": 100, "x_min": -1, "x_max": 1},
            "experiment": {"name": "commutator_table"}}"#;
        let err = RunConfig::parse(text).unwrap().validate().unwrap_err();
        assert!(err.to_string().contains("power of two"));
    }

    #[test]
    fn commands_require_their_inputs() {
        let text = r#"{"command": "evolve", "grid": {"n_points": 64, "x_min": -1, "x_max": 1},
            "state": {"kind": "berry_balazs", "b": 1}}"#;
        assert!(RunConfig::parse(text).unwrap().validate().is_err());
        let text = r#"{"command": "scan", "experiments": [{"experiment": {"name": "overlap_scan"}}]}"#;
        assert!(RunConfig::parse(text).unwrap().validate().is_err());
    }
}
