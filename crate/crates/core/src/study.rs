//! Convergence studies: solve on successive refinement levels and collect
//! errors, orders, Newton statistics and optionally the property measures.

use alloc::format;
use alloc::vec::Vec;

use crate::analysis::{compute_errors, compute_properties, observed_order, ErrorBundle, PropertyMeasures};
use crate::assembly::Assembler;
use crate::discretisation::{build, Method};
use crate::exec::{CellExecutor, Sequential};
use crate::mesh::Domain;
use crate::problems::{ExactSolution, Problem};
use crate::solver::{newton, NewtonConfig, NewtonReport};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StudyConfig {
    pub problem: Problem,
    pub method: Method,
    pub domain: Domain,
    /// Number of levels, starting from the coarse mesh.
    pub levels: usize,
    pub newton: NewtonConfig,
    pub properties: bool,
    /// Permits the combinations without published reference results:
    /// GR or Navier–Stokes on the L-shaped domain.
    pub allow_extension: bool,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            problem: Problem::NavierStokes,
            method: Method::Morley,
            domain: Domain::Square,
            levels: 4,
            newton: NewtonConfig::default(),
            properties: false,
            allow_extension: false,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.levels == 0 {
            return Err(Error::InvalidConfig("levels must be at least 1".into()));
        }
        self.newton.validate()?;
        if self.domain == Domain::LShape && !self.allow_extension {
            if self.method == Method::Gr {
                return Err(Error::InvalidConfig(format!(
                    "method {} on domain {} needs --allow-extension",
                    self.method, self.domain
                )));
            }
            if self.problem == Problem::NavierStokes {
                return Err(Error::InvalidConfig(format!(
                    "problem {} on domain {} needs --allow-extension",
                    self.problem, self.domain
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelRow {
    pub level: usize,
    pub h: f64,
    pub n_dofs: usize,
    pub newton: NewtonReport,
    pub errors: ErrorBundle,
    /// Observed broken-H¹ order per component; absent on the first row.
    pub orders: Vec<Option<f64>>,
    pub properties: Option<PropertyMeasures>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub config: StudyConfig,
    pub rows: Vec<LevelRow>,
}

impl ConvergenceReport {
    pub fn n_components(&self) -> usize {
        self.config.problem.n_components()
    }

    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.newton.converged)
    }

    /// Broken-H¹ errors of component `c`, one per row.
    pub fn h1_errors(&self, c: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.errors.components[c].rel_h1).collect()
    }
}

pub fn run_study(cfg: &StudyConfig) -> Result<ConvergenceReport> {
    run_study_with(cfg, Sequential)
}

/// [`run_study`] with per-cell work scheduled by `exec`.
pub fn run_study_with<E: CellExecutor + Clone>(cfg: &StudyConfig, exec: E) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let exact = ExactSolution::for_domain(cfg.problem, cfg.domain);
    let mut rows: Vec<LevelRow> = Vec::with_capacity(cfg.levels);
    for level in 0..cfg.levels {
        let mesh = cfg.method.mesh(cfg.domain, level);
        let h = mesh.h;
        let hd = build(cfg.method, &mesh)?;
        let asm = Assembler::with_executor(&hd, cfg.problem, exec.clone());
        let load = asm.load(&exact)?;
        let (psi, report) = newton(&asm, &load, &cfg.newton)?;
        let errors = compute_errors(&hd, &exact, &psi)?;
        let properties = if cfg.properties { Some(compute_properties(&hd, cfg.domain)?) } else { None };
        rows.push(LevelRow {
            level,
            h,
            n_dofs: hd.n_dofs(),
            newton: report,
            errors,
            orders: Vec::new(),
            properties,
        });
    }
    let k = cfg.problem.n_components();
    let per_component: Vec<Vec<Option<f64>>> =
        (0..k).map(|c| observed_order(&rows.iter().map(|r| r.errors.components[c].rel_h1).collect::<Vec<_>>())).collect();
    for (l, row) in rows.iter_mut().enumerate() {
        row.orders = per_component.iter().map(|o| o[l]).collect();
    }
    Ok(ConvergenceReport { config: *cfg, rows })
}
