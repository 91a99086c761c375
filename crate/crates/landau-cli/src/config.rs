//! Run configuration: strict JSON parsing (unknown keys rejected) plus the
//! cross-field physics checks that a silent typo in `gamma` or `dt` would
//! otherwise slip past.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use fuzzy_landau::collision::Backend;
use fuzzy_landau::grid::{build_grid, Field, Grid, GridSpec};
use fuzzy_landau::kernels::{SpatialKernelSpec, VelocityKernelSpec};
use fuzzy_landau::la::VecD;
use fuzzy_landau::solver::{
    read_snapshot, with_gaussian_floor, DiagnosticsConfig, SolverConfig, Splitting,
};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn default_grid() -> GridSpec {
    GridSpec {
        dim: 2,
        n_x: 4,
        n_v: 24,
        v_max: 6.0,
    }
}

fn default_vkernel() -> VelocityKernelSpec {
    VelocityKernelSpec::power_law(0.0)
}

fn default_skernel() -> SpatialKernelSpec {
    SpatialKernelSpec::Uniform { value: 1.0 }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub struct SolverSection {
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default)]
    pub splitting: Splitting,
    #[serde(default)]
    pub viscosity_inv_n: f64,
    #[serde(default)]
    pub clamp_n: Option<u32>,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    #[serde(default = "default_true")]
    pub adaptive: bool,
    #[serde(default = "default_true")]
    pub deterministic: bool,
    #[serde(default)]
    pub collision_only: bool,
    #[serde(default)]
    pub backend: Backend,
}

fn default_dt() -> f64 {
    1e-3
}
fn default_t_end() -> f64 {
    0.2
}
fn default_record_every() -> usize {
    10
}
fn default_true() -> bool {
    true
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection {
            dt: default_dt(),
            t_end: default_t_end(),
            splitting: Splitting::default(),
            viscosity_inv_n: 0.0,
            clamp_n: None,
            record_every: default_record_every(),
            adaptive: true,
            deterministic: true,
            collision_only: false,
            backend: Backend::default(),
        }
    }
}

impl SolverSection {
    pub fn to_solver_config(&self) -> SolverConfig {
        SolverConfig {
            dt: self.dt,
            t_end: self.t_end,
            splitting: self.splitting,
            viscosity_inv_n: self.viscosity_inv_n,
            clamp_n: self.clamp_n,
            record_every: self.record_every,
            adaptive: self.adaptive,
            deterministic: self.deterministic,
            collision_only: self.collision_only,
            backend: self.backend,
            floor: fuzzy_landau::collision::LOG_FLOOR,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialCondition {
    Maxwellian {
        rho: f64,
        u: Vec<f64>,
        temperature: f64,
    },
    GaussianMixture {
        #[serde(default = "default_components")]
        components: usize,
    },
    Separable {},
    FromSnapshot {
        path: PathBuf,
    },
}

fn default_components() -> usize {
    2
}

impl Default for InitialCondition {
    fn default() -> Self {
        InitialCondition::Maxwellian {
            rho: 1.0,
            u: Vec::new(),
            temperature: 1.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub struct DiagnosticsSection {
    #[serde(default = "default_moments")]
    pub moment_orders: Vec<f64>,
    #[serde(default = "default_lp")]
    pub lp_orders: Vec<f64>,
}

fn default_moments() -> Vec<f64> {
    vec![4.0]
}
fn default_lp() -> Vec<f64> {
    vec![2.0]
}

impl Default for DiagnosticsSection {
    fn default() -> Self {
        DiagnosticsSection {
            moment_orders: default_moments(),
            lp_orders: default_lp(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub struct RunConfig {
    #[serde(default = "default_grid")]
    pub grid: GridSpec,
    #[serde(default = "default_vkernel")]
    pub velocity_kernel: VelocityKernelSpec,
    #[serde(default = "default_skernel")]
    pub spatial_kernel: SpatialKernelSpec,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub initial_condition: InitialCondition,
    #[serde(default)]
    pub diagnostics: DiagnosticsSection,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// additive Gaussian floor level applied once to the initial state
    #[serde(default)]
    pub gaussian_floor: f64,
}

fn default_seed() -> u64 {
    42
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.grid
            .validate()
            .map_err(|e| ConfigError(format!("grid: {e}")))?;
        // apply the solver-level clamp before kernel validation
        let mut vk = self.velocity_kernel;
        if let Some(n) = self.solver.clamp_n {
            vk.clamp_n = Some(n);
        }
        vk.validate(self.grid.dim)
            .map_err(|e| ConfigError(format!("velocity_kernel: {e}")))?;
        if vk.singular_at_zero() && vk.clamp_n.is_none() {
            return Err(ConfigError(
                "velocity_kernel: PowerLaw with gamma <= -2 requires clamp_n".into(),
            ));
        }
        self.spatial_kernel
            .validate()
            .map_err(|e| ConfigError(format!("spatial_kernel: {e}")))?;
        let s = &self.solver;
        if !(s.dt > 0.0) {
            return Err(ConfigError("solver.dt must be positive".into()));
        }
        if !(s.t_end >= 0.0) {
            return Err(ConfigError("solver.t_end must be nonnegative".into()));
        }
        if !(s.viscosity_inv_n >= 0.0) {
            return Err(ConfigError(
                "solver.viscosity_inv_n must be nonnegative".into(),
            ));
        }
        if s.record_every == 0 {
            return Err(ConfigError("solver.record_every must be at least 1".into()));
        }
        if let InitialCondition::Maxwellian {
            rho,
            u,
            temperature,
        } = &self.initial_condition
        {
            if !(*rho > 0.0) || !(*temperature > 0.0) {
                return Err(ConfigError(
                    "initial_condition: rho and temperature must be positive".into(),
                ));
            }
            // an empty u means zero mean velocity
            if !u.is_empty() && u.len() != self.grid.dim {
                return Err(ConfigError(format!(
                    "initial_condition: u has {} entries, grid dim is {}",
                    u.len(),
                    self.grid.dim
                )));
            }
        }
        if !(self.gaussian_floor >= 0.0) {
            return Err(ConfigError("gaussian_floor must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn build_grid(&self) -> Result<Grid, ConfigError> {
        build_grid(self.grid).map_err(|e| ConfigError(format!("grid: {e}")))
    }

    pub fn build_initial(&self, grid: &Grid) -> Result<Field, ConfigError> {
        let mut field = match &self.initial_condition {
            InitialCondition::Maxwellian {
                rho,
                u,
                temperature,
            } => {
                let mut uu: VecD = [0.0; 3];
                for (a, v) in u.iter().enumerate() {
                    uu[a] = *v;
                }
                fuzzy_landau::grid::maxwellian(grid, *rho, &uu, *temperature)
            }
            InitialCondition::GaussianMixture { components } => {
                let sampler = fuzzy_landau::analysis::FieldSampler {
                    min_components: *components,
                    max_components: *components,
                    ..Default::default()
                };
                let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(
                    self.seed,
                );
                sampler.sample(grid, &mut rng)
            }
            InitialCondition::Separable {} => {
                fuzzy_landau::analysis::sample_separable(grid, self.seed)
            }
            InitialCondition::FromSnapshot { path } => {
                let (field, _t, _v, _s) =
                    read_snapshot(path).map_err(|e| ConfigError(format!("snapshot: {e}")))?;
                if field.grid.spec != self.grid {
                    return Err(ConfigError(format!(
                        "snapshot grid {:?} does not match configured grid {:?}",
                        field.grid.spec, self.grid
                    )));
                }
                field
            }
        };
        if self.gaussian_floor > 0.0 {
            field = with_gaussian_floor(&field, self.gaussian_floor);
        }
        Ok(field)
    }

    pub fn diagnostics_config(&self) -> DiagnosticsConfig {
        DiagnosticsConfig {
            s_values: self.diagnostics.moment_orders.clone(),
            p_values: self.diagnostics.lp_orders.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = RunConfig::parse("{}").unwrap();
        assert_eq!(cfg.grid.n_x, 4);
        assert_eq!(cfg.grid.n_v, 24);
        assert_eq!(cfg.solver.dt, 1e-3);
        assert!(cfg.solver.deterministic);
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = RunConfig::parse(r#"{"grdi": {}}"#).unwrap_err();
        assert!(err.0.contains("grdi"), "{err}");
        let err =
            RunConfig::parse(r#"{"solver": {"dt": 0.001, "dtt": 1}}"#).unwrap_err();
        assert!(err.0.contains("dtt"), "{err}");
    }

    #[test]
    fn gamma_out_of_family_range_rejected() {
        let err = RunConfig::parse(
            r#"{"velocity_kernel": {"family": "power-law", "gamma": -3.0}}"#,
        )
        .unwrap_err();
        assert!(
            err.0
                .contains("gamma must lie in (-2, 1] for PowerLaw in d=2"),
            "{err}"
        );
    }

    #[test]
    fn very_soft_requires_clamp() {
        let err = RunConfig::parse(
            r#"{"grid": {"dim": 3, "n_x": 2, "n_v": 8, "v_max": 5.0},
                "velocity_kernel": {"family": "power-law", "gamma": -2.5}}"#,
        )
        .unwrap_err();
        assert!(err.0.contains("requires clamp_n"), "{err}");
        // clamp via the solver section is honored
        let ok = RunConfig::parse(
            r#"{"grid": {"dim": 3, "n_x": 2, "n_v": 8, "v_max": 5.0},
                "velocity_kernel": {"family": "power-law", "gamma": -2.5},
                "solver": {"clamp_n": 10}}"#,
        );
        assert!(ok.is_ok());
    }
}
