use super::report::{fmt_vec, input, Condition, Criterion, StabilityReport};
use super::sampling::{SampleBox, SamplePlan};
use super::AnalysisError;
use crate::grid::{Order, Window};
use crate::operators::memory_threshold;
use crate::solver::{DelayLinearSystem, VectorField};

/// Relative rounding allowance (in units of machine epsilon) for the sampled
/// structural inequality.
const ROUNDING_ULPS: f64 = 64.0;

/// Exponents `m_i` and constant `phi` of `zeta^T f <= -phi sum x_i^(2^m_i)`,
/// with `zeta_i = x_i^(2^m_i - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuralSpec {
    m: Vec<u32>,
    phi: f64,
}

impl StructuralSpec {
    /// Every `m_i` must lie in `1..=30`.
    pub fn new(m: Vec<u32>, phi: f64) -> Result<Self, AnalysisError> {
        if m.is_empty() {
            return Err(AnalysisError::DimensionMismatch { expected: 1, got: 0 });
        }
        if let Some((i, &value)) = m.iter().enumerate().find(|(_, &v)| !(1..=30).contains(&v)) {
            return Err(AnalysisError::InvalidExponent { component: i + 1, value });
        }
        if !(phi > 0.0) || !phi.is_finite() {
            return Err(AnalysisError::NonPositivePhi(phi));
        }
        Ok(StructuralSpec { m, phi })
    }

    pub fn m(&self) -> &[u32] {
        &self.m
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    /// `min_i m_i`.
    pub fn m_hat(&self) -> u32 {
        *self.m.iter().min().expect("spec has at least one exponent")
    }

    /// `phi * 2^m_hat`, the rate compared against the memory threshold.
    pub fn rate(&self) -> f64 {
        self.phi * 2f64.powi(self.m_hat() as i32)
    }
}

/// `(x^(2^m - 1), x^(2^m))` by repeated squaring.
fn zeta_and_power(x: f64, m: u32) -> (f64, f64) {
    let mut zeta = 1.0;
    let mut p = x;
    for _ in 0..m {
        zeta *= p;
        p *= p;
    }
    (zeta, p)
}

/// Checks the structural criterion for `D~^alpha x = f(x, t)`.
///
/// * `threshold`: `phi 2^m_hat > 1/(omega^alpha Gamma(1-alpha))`, exact.
/// * `structural inequality`: `-phi sum x_i^(2^m_i) - zeta^T f >= -tol` at
///   every sample of `region` and every time in `times` (`t0` when empty).
///   `tol` is 64 ulps of the magnitudes involved, enough to absorb the
///   rounding of an exact identity.
pub fn check_theorem5<F: VectorField + ?Sized>(
    field: &F,
    spec: &StructuralSpec,
    order: Order,
    win: Window,
    region: &SampleBox,
    times: &[f64],
    plan: &SamplePlan,
) -> Result<StabilityReport, AnalysisError> {
    let dim = field.dim();
    if spec.dim() != dim {
        return Err(AnalysisError::DimensionMismatch { expected: dim, got: spec.dim() });
    }
    if region.dim() != dim {
        return Err(AnalysisError::DimensionMismatch { expected: dim, got: region.dim() });
    }
    let default_times = [win.t0()];
    let times = if times.is_empty() { &default_times[..] } else { times };
    let points = plan.points(region);

    let mut f = vec![0.0; dim];
    // (slack relative to tolerance, margin, tolerance, sample index, t)
    let mut worst: Option<(f64, f64, f64, usize, f64)> = None;
    for &t in times {
        for (k, x) in points.iter().enumerate() {
            field.eval(x, t, &mut f)?;
            if f.iter().any(|v| !v.is_finite()) {
                return Err(AnalysisError::NonFiniteField { x: x.clone(), t });
            }
            let mut power_sum = 0.0;
            let mut dot = 0.0;
            let mut scale = 0.0;
            for i in 0..dim {
                let (zeta, p) = zeta_and_power(x[i], spec.m[i]);
                if !p.is_finite() || !zeta.is_finite() {
                    return Err(AnalysisError::Overflow {
                        component: i + 1,
                        exponent: spec.m[i],
                        value: x[i],
                    });
                }
                power_sum += p;
                dot += zeta * f[i];
                scale += (zeta * f[i]).abs();
            }
            let margin = -spec.phi * power_sum - dot;
            let tol = ROUNDING_ULPS * f64::EPSILON * (spec.phi * power_sum + scale);
            let slack = margin + tol;
            if worst.is_none_or(|w| slack < w.0) {
                worst = Some((slack, margin, tol, k, t));
            }
        }
    }
    let (_, worst_margin, worst_tol, worst_k, worst_t) = worst.expect("at least one sample");
    let worst_case = format!("x = {}, t = {worst_t}", fmt_vec(&points[worst_k]));

    let threshold = memory_threshold(order, win);
    let conditions = vec![
        Condition::strict("threshold", spec.rate(), threshold),
        Condition::sampled("structural inequality", worst_margin, worst_tol, Some(worst_case)),
    ];
    let inputs = vec![
        input("alpha", order.alpha()),
        input("omega", win.omega()),
        input("m", format!("{:?}", spec.m)),
        input("phi", spec.phi),
        input("m_hat", spec.m_hat()),
        input("box lower", fmt_vec(region.lower())),
        input("box upper", fmt_vec(region.upper())),
        input("times", fmt_vec(times)),
        input("lattice per axis", plan.lattice_per_axis),
        input("random points", plan.random_points),
        input("seed", plan.seed),
        input("samples", points.len() * times.len()),
    ];
    let notes = vec![
        "the inequality is checked on samples of the box only".into(),
        format!("sample tolerance = {ROUNDING_ULPS} eps * (phi sum x_i^(2^m_i) + sum |zeta_i f_i|)"),
        "global stability is not verified".into(),
    ];
    Ok(StabilityReport::assemble(
        Criterion::Theorem5,
        inputs,
        vec![("memory threshold".into(), threshold), ("phi 2^m_hat".into(), spec.rate())],
        conditions,
        notes,
    ))
}

/// `a > b > 0` for `D^alpha x = -a x + b x(t - q)`, with margins `b` and `a - b`.
pub fn lemma5_condition(sys: &DelayLinearSystem) -> StabilityReport {
    StabilityReport::assemble(
        Criterion::Lemma5,
        vec![input("a", sys.a), input("b", sys.b), input("q", sys.q)],
        Vec::new(),
        vec![Condition::strict("b > 0", sys.b, 0.0), Condition::strict("a > b", sys.a, sys.b)],
        Vec::new(),
    )
}
