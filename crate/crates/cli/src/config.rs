use std::path::Path;

use fracwin::analysis::{SampleBox, SamplePlan, StructuralSpec};
use fracwin::solver::{ShortMemorySystem, SolveConfig};
use fracwin::sysdsl::{parse_system, Expr, ExprField, ExprScalar, ParsedSystem};
use fracwin::{grid::aligned_steps, Order, UniformGrid, Window};

use crate::error::CliError;

/// Default for examples that do not state a horizon.
pub const DEFAULT_HORIZON: f64 = 50.0;
pub const DEFAULT_STEP: f64 = 0.01;

/// A validated scenario: everything needed to solve and check one system.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub alpha: f64,
    pub omega: f64,
    pub t0: f64,
    pub x0: Vec<f64>,
    pub horizon: f64,
    pub step: f64,
    pub field: Vec<Expr>,
    pub lyapunov: Option<(Expr, f64)>,
    pub structural: Option<(Vec<u32>, f64)>,
    pub compare_a: Option<f64>,
    pub box_radius: Option<f64>,
    pub seed: u64,
}

/// Command-line overrides applied on top of a config file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub step: Option<f64>,
    pub horizon: Option<f64>,
    pub seed: Option<u64>,
}

impl ScenarioConfig {
    pub fn from_source(src: &str, fallback_name: &str) -> Result<Self, CliError> {
        let parsed = parse_system(src)?;
        ScenarioConfig::from_parsed(parsed, fallback_name)
    }

    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let src = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
        ScenarioConfig::from_source(&src, stem).map_err(|e| e.in_file(path))
    }

    pub fn from_parsed(p: ParsedSystem, fallback_name: &str) -> Result<Self, CliError> {
        let dim = p.dim();
        let required = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| CliError::Config(format!("missing required key '{key}'")))
        };
        let x0 = p.x0.clone().ok_or_else(|| CliError::Config("missing required key 'x0'".into()))?;
        if x0.len() != dim {
            return Err(CliError::Config(format!(
                "x0 has {} entries but the field has {dim} components (f1..f{dim})",
                x0.len()
            )));
        }
        let lyapunov = match (p.v.clone(), p.lambda) {
            (Some(v), Some(l)) => Some((v, l)),
            (None, None) => None,
            (Some(_), None) => return Err(CliError::Config("'V' is set but 'lambda' is missing".into())),
            (None, Some(_)) => return Err(CliError::Config("'lambda' is set but 'V' is missing".into())),
        };
        let structural = match (p.m.clone(), p.phi) {
            (Some(m), Some(phi)) => Some((m, phi)),
            (None, None) => None,
            _ => return Err(CliError::Config("'m' and 'phi' must be given together".into())),
        };
        let cfg = ScenarioConfig {
            name: p.name.clone().unwrap_or_else(|| fallback_name.to_string()),
            alpha: required(p.alpha, "alpha")?,
            omega: required(p.omega, "omega")?,
            t0: p.t0.unwrap_or(0.0),
            x0,
            horizon: p.horizon.unwrap_or(DEFAULT_HORIZON),
            step: p.step.unwrap_or(DEFAULT_STEP),
            field: p.components,
            lyapunov,
            structural,
            compare_a: p.compare_a,
            box_radius: p.box_radius,
            seed: p.seed.unwrap_or(SamplePlan::default().seed),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_overrides(mut self, o: Overrides) -> Result<Self, CliError> {
        if let Some(h) = o.step {
            self.step = h;
        }
        if let Some(t) = o.horizon {
            self.horizon = t;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        self.validate()?;
        Ok(self)
    }

    /// Checks every construction rule, with messages that say what to change.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha = {} must lie strictly between 0 and 1", self.alpha));
        }
        if !(self.step > 0.0) || !self.step.is_finite() {
            return bad(format!("step = {} must be positive", self.step));
        }
        if !(self.horizon > self.t0) || !self.horizon.is_finite() {
            return bad(format!("horizon = {} must exceed t0 = {}", self.horizon, self.t0));
        }
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return bad(format!("omega = {} must be positive", self.omega));
        }
        if aligned_steps("omega", self.omega, self.step).is_err() {
            return bad(format!(
                "omega = {} is not a whole number of steps (omega / step = {}); pick step = omega / N",
                self.omega,
                self.omega / self.step
            ));
        }
        UniformGrid::spanning(self.t0, self.horizon, self.step)
            .map_err(|e| CliError::Config(format!("time grid: {e}")))?;
        if self.x0.iter().any(|v| !v.is_finite()) {
            return bad("x0 must be finite".into());
        }
        if let Some((_, lambda)) = &self.lyapunov {
            if !(*lambda > 0.0) {
                return bad(format!("lambda = {lambda} must be positive"));
            }
        }
        if let Some((m, phi)) = &self.structural {
            if m.len() != self.dim() {
                return bad(format!("m has {} entries, expected {}", m.len(), self.dim()));
            }
            StructuralSpec::new(m.clone(), *phi).map_err(|e| CliError::Config(e.to_string()))?;
        }
        if let Some(a) = self.compare_a {
            if !(a > 0.0) {
                return bad(format!("compare_a = {a} must be positive"));
            }
            if self.dim() != 1 {
                return bad("the comparison needs a scalar system (one component)".into());
            }
        }
        if let Some(r) = self.box_radius {
            if !(r > 0.0) || !r.is_finite() {
                return bad(format!("box_radius = {r} must be positive"));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.field.len()
    }

    pub fn order(&self) -> Order {
        Order::new(self.alpha).expect("validated")
    }

    pub fn window(&self) -> Window {
        Window::new(self.omega, self.t0).expect("validated")
    }

    pub fn solve_config(&self) -> SolveConfig {
        SolveConfig::new(self.t0, self.horizon, self.step)
    }

    pub fn vector_field(&self) -> ExprField {
        ExprField::new(self.field.clone()).expect("parser checked variable ranges")
    }

    pub fn system(&self) -> ShortMemorySystem<ExprField> {
        ShortMemorySystem::new(self.vector_field(), self.order(), self.window(), self.x0.clone())
            .expect("validated")
    }

    pub fn candidate(&self) -> Option<(ExprScalar, f64)> {
        self.lyapunov.as_ref().map(|(v, l)| (ExprScalar(v.clone()), *l))
    }

    /// `[-r, r]^n` with `r = box_radius`, or `max(|x0|_inf, 1)` when unset.
    pub fn sample_box(&self) -> SampleBox {
        let r = self.box_radius.unwrap_or_else(|| self.x0.iter().fold(1.0_f64, |m, v| m.max(v.abs())));
        SampleBox::symmetric(self.dim(), r).expect("validated")
    }

    pub fn sample_plan(&self) -> SamplePlan {
        SamplePlan::with_seed(self.seed)
    }

    /// Times at which sampled checks evaluate a non-autonomous field.
    pub fn sample_times(&self) -> Vec<f64> {
        vec![self.t0, 0.5 * (self.t0 + self.horizon), self.horizon]
    }
}
