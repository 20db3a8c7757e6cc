use std::fmt::{self, Write as _};

/// Which criterion a [`StabilityReport`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// Lyapunov direct method for short-memory systems.
    Theorem4,
    /// Structural criterion with exponents `2^m_i`.
    Theorem5,
    /// `a > b > 0` for linear delayed systems.
    Lemma5,
}

impl Criterion {
    pub fn id(self) -> &'static str {
        match self {
            Criterion::Theorem4 => "theorem4",
            Criterion::Theorem5 => "theorem5",
            Criterion::Lemma5 => "lemma5",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Criterion::Theorem4 => "short-memory Lyapunov certificate",
            Criterion::Theorem5 => "structural power-law criterion",
            Criterion::Lemma5 => "linear delayed system condition a > b > 0",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Certified,
    NotCertified(String),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Certified => f.write_str("certified"),
            Verdict::NotCertified(reason) => write!(f, "not-certified ({reason})"),
        }
    }
}

/// One checked inequality: `margin = measured - bound` for lower bounds (or
/// the sampled worst case for pointwise checks); satisfied when
/// `margin > 0`, or `margin >= -tolerance` for tolerance-based checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub margin: f64,
    pub tolerance: Option<f64>,
    pub satisfied: bool,
    /// Where the worst margin was observed, for sampled conditions.
    pub worst_case: Option<String>,
}

impl Condition {
    /// `measured > bound`, compared exactly.
    pub fn strict(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        let margin = measured - bound;
        Condition {
            name: name.into(),
            measured,
            bound,
            margin,
            tolerance: None,
            satisfied: measured > bound,
            worst_case: None,
        }
    }

    /// Worst sampled margin, accepted down to `-tolerance`.
    pub fn sampled(
        name: impl Into<String>,
        worst_margin: f64,
        tolerance: f64,
        worst_case: Option<String>,
    ) -> Self {
        Condition {
            name: name.into(),
            measured: worst_margin,
            bound: -tolerance,
            margin: worst_margin,
            tolerance: Some(tolerance),
            satisfied: worst_margin >= -tolerance,
            worst_case,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub criterion: Criterion,
    pub inputs: Vec<(String, String)>,
    /// Named threshold values, e.g. the memory threshold.
    pub thresholds: Vec<(String, f64)>,
    pub conditions: Vec<Condition>,
    pub notes: Vec<String>,
    pub verdict: Verdict,
}

impl StabilityReport {
    pub(crate) fn assemble(
        criterion: Criterion,
        inputs: Vec<(String, String)>,
        thresholds: Vec<(String, f64)>,
        conditions: Vec<Condition>,
        notes: Vec<String>,
    ) -> Self {
        let failed: Vec<&str> =
            conditions.iter().filter(|c| !c.satisfied).map(|c| c.name.as_str()).collect();
        let verdict = if failed.is_empty() {
            Verdict::Certified
        } else {
            Verdict::NotCertified(failed.join(", "))
        };
        StabilityReport { criterion, inputs, thresholds, conditions, notes, verdict }
    }

    pub fn is_certified(&self) -> bool {
        self.verdict.is_certified()
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }

    pub fn threshold(&self, name: &str) -> Option<f64> {
        self.thresholds.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    /// Plain-text document: inputs, thresholds, margins, verdict, notes.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "criterion: {} ({})", self.criterion.id(), self.criterion.title());
        render_inputs(&mut out, &self.inputs);
        out.push_str("\n[thresholds]\n");
        for (name, value) in &self.thresholds {
            let _ = writeln!(out, "{name} = {value:.12e}");
        }
        out.push_str("\n[margins]\n");
        for c in &self.conditions {
            let status = if c.satisfied { "ok" } else { "FAILED" };
            let _ = write!(
                out,
                "{}: measured {:.6e}, bound {:.6e}, margin {:.6e}",
                c.name, c.measured, c.bound, c.margin
            );
            if let Some(tol) = c.tolerance {
                let _ = write!(out, ", tolerance {tol:.3e}");
            }
            let _ = writeln!(out, " [{status}]");
            if let Some(w) = &c.worst_case {
                let _ = writeln!(out, "  worst case: {w}");
            }
        }
        let _ = writeln!(out, "\n[verdict]\n{}", self.verdict);
        render_notes(&mut out, &self.notes);
        out
    }
}

pub(crate) fn render_inputs(out: &mut String, inputs: &[(String, String)]) {
    out.push_str("\n[inputs]\n");
    for (k, v) in inputs {
        let _ = writeln!(out, "{k} = {v}");
    }
}

pub(crate) fn render_notes(out: &mut String, notes: &[String]) {
    if notes.is_empty() {
        return;
    }
    out.push_str("\n[notes]\n");
    for n in notes {
        let _ = writeln!(out, "- {n}");
    }
}

pub(crate) fn input(key: &str, value: impl fmt::Display) -> (String, String) {
    (key.to_string(), value.to_string())
}

pub(crate) fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    format!("({})", parts.join(", "))
}
