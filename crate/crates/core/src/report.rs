//! Outcome records shared by every identity and inequality check.

use crate::ext::Ext;
use serde::{Deserialize, Serialize};

/// How the compared quantities were computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Exact,
    Quad,
    Grid,
    Mc,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Exact => "exact",
            Route::Quad => "quad",
            Route::Grid => "grid",
            Route::Mc => "mc",
        }
    }
}

/// Whether a check passed, failed its conclusion, or was fed inputs that
/// violate its hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Satisfied,
    Violated,
    HypothesisFailed,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub n: Option<usize>,
    pub i: Option<usize>,
    pub k: Option<usize>,
    pub alpha: Option<Ext>,
    pub gamma: Option<Ext>,
    pub beta: Option<Ext>,
    /// `λ` or `s:t`, as printed in the CSV column.
    pub weights: Option<String>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub params: Params,
    pub lhs: Ext,
    pub rhs: Ext,
    pub margin: Ext,
    pub tol: f64,
    pub outcome: Outcome,
    pub route: Route,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

impl Report {
    /// Builds an inequality report `lhs ≥ rhs − tol`.
    pub fn inequality(check: &str, params: Params, lhs: Ext, rhs: Ext, tol: f64, route: Route) -> Report {
        let margin = lhs.sub(rhs);
        let outcome = if margin >= Ext::Finite(-tol) { Outcome::Satisfied } else { Outcome::Violated };
        Report { check: check.to_string(), params, lhs, rhs, margin, tol, outcome, route, note: None, witness: None }
    }

    /// Builds an identity report `|lhs − rhs| ≤ tol`; the margin keeps its sign.
    pub fn identity(check: &str, params: Params, lhs: Ext, rhs: Ext, tol: f64, route: Route) -> Report {
        let margin = lhs.sub(rhs);
        let ok = match margin {
            Ext::Finite(m) => m.abs() <= tol,
            _ => false,
        };
        let outcome = if ok { Outcome::Satisfied } else { Outcome::Violated };
        Report { check: check.to_string(), params, lhs, rhs, margin, tol, outcome, route, note: None, witness: None }
    }

    pub fn satisfied(&self) -> bool {
        self.outcome == Outcome::Satisfied
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Report {
        self.note = Some(note.into());
        self
    }

    pub fn with_witness(mut self, w: serde_json::Value) -> Report {
        self.witness = Some(w);
        self
    }

    pub fn hypothesis_failed(mut self, note: impl Into<String>) -> Report {
        self.outcome = Outcome::HypothesisFailed;
        self.note = Some(note.into());
        self
    }

    /// Margin relative to the larger side, for corpus summaries.
    pub fn relative_margin(&self) -> f64 {
        match (self.lhs, self.rhs, self.margin) {
            (Ext::Finite(l), Ext::Finite(r), Ext::Finite(m)) => m / l.abs().max(r.abs()).max(1e-300),
            (_, _, m) => m.to_f64(),
        }
    }
}

pub const CSV_HEADER: [&str; 14] = [
    "check", "n", "i", "k", "alpha", "gamma", "beta", "lambda_or_s_t", "lhs", "rhs", "margin", "satisfied", "route",
    "seed",
];

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

impl Report {
    /// One CSV row in `CSV_HEADER` order.
    pub fn csv_row(&self) -> Vec<String> {
        let p = &self.params;
        vec![
            self.check.clone(),
            opt(&p.n),
            opt(&p.i),
            opt(&p.k),
            opt(&p.alpha),
            opt(&p.gamma),
            opt(&p.beta),
            opt(&p.weights),
            self.lhs.to_string(),
            self.rhs.to_string(),
            self.margin.to_string(),
            self.satisfied().to_string(),
            self.route.as_str().to_string(),
            opt(&p.seed),
        ]
    }
}
