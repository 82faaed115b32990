//! The one-dimensional inequality on the half-line with a `γ`-mean of the
//! arguments.

use crate::error::{Error, Result};
use crate::ext::{Alpha, Ext};
use crate::means::{beta_pl, m_alpha_f, Weights};
use crate::numeric::{factorial, integrate, integrate_split, integrate_to_inf};
use crate::report::{Params, Report, Route};
use serde::{Deserialize, Serialize};

/// Non-negative test functions on `(0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum HalfLine {
    /// `a·e^{−c x}`.
    Exp { a: f64, rate: f64 },
    /// `a·x^k e^{−c x}`.
    Gamma { a: f64, k: u32, rate: f64 },
    /// `a·χ_{(lo, hi)}`.
    Pulse { a: f64, lo: f64, hi: f64 },
}

impl HalfLine {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            HalfLine::Exp { a, rate } => a > 0.0 && rate > 0.0,
            HalfLine::Gamma { a, rate, .. } => a > 0.0 && rate > 0.0,
            HalfLine::Pulse { a, lo, hi } => a > 0.0 && lo >= 0.0 && hi > lo && hi.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidFunction(format!("invalid half-line function {self:?}")))
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match *self {
            HalfLine::Exp { a, rate } => a * (-rate * x).exp(),
            HalfLine::Gamma { a, k, rate } => a * x.powi(k as i32) * (-rate * x).exp(),
            HalfLine::Pulse { a, lo, hi } => {
                if x > lo && x < hi {
                    a
                } else {
                    0.0
                }
            }
        }
    }

    pub fn integral(&self) -> f64 {
        match *self {
            HalfLine::Exp { a, rate } => a / rate,
            HalfLine::Gamma { a, k, rate } => a * factorial(k as usize) / rate.powi(k as i32 + 1),
            HalfLine::Pulse { a, lo, hi } => a * (hi - lo),
        }
    }

    /// `sup_{y ≥ x} f(y)`.
    pub fn tail_sup(&self, x: f64) -> f64 {
        match *self {
            HalfLine::Exp { .. } => self.value(x.max(f64::MIN_POSITIVE)),
            HalfLine::Gamma { k, rate, .. } => self.value(x.max(k as f64 / rate).max(f64::MIN_POSITIVE)),
            HalfLine::Pulse { a, hi, .. } => {
                if x < hi {
                    a
                } else {
                    0.0
                }
            }
        }
    }

    /// Points where the function or its derivative jumps, and its mode.
    fn features(&self) -> Vec<f64> {
        match *self {
            HalfLine::Exp { .. } => vec![],
            HalfLine::Gamma { k, rate, .. } => vec![k as f64 / rate],
            HalfLine::Pulse { lo, hi, .. } => vec![lo, hi],
        }
    }

    /// Right end of the support, if bounded.
    fn support_end(&self) -> Option<f64> {
        match *self {
            HalfLine::Pulse { hi, .. } => Some(hi),
            _ => None,
        }
    }

    pub fn scaled(&self, c: f64) -> HalfLine {
        match *self {
            HalfLine::Exp { a, rate } => HalfLine::Exp { a: a * c, rate },
            HalfLine::Gamma { a, k, rate } => HalfLine::Gamma { a: a * c, k, rate },
            HalfLine::Pulse { a, lo, hi } => HalfLine::Pulse { a: a * c, lo, hi },
        }
    }
}

/// `y > 0` with `M_γ^{(λ)}(x, y) = z`, if any.
fn partner(z: f64, x: f64, lam: f64, gamma: Alpha) -> Option<f64> {
    let y = match gamma {
        Ext::NegInf => return None,
        Ext::PosInf => return None,
        Ext::Finite(g) if g == 0.0 => (z / x.powf(1.0 - lam)).powf(1.0 / lam),
        Ext::Finite(g) => {
            let r = (z.powf(g) - (1.0 - lam) * x.powf(g)) / lam;
            if r <= 0.0 {
                return None;
            }
            r.powf(1.0 / g)
        }
    };
    (y.is_finite() && y > 0.0).then_some(y)
}

/// The `x`-range over which `partner(z, x)` exists, as a map from `(0, 1)`.
fn param(z: f64, u: f64, lam: f64, gamma: f64) -> f64 {
    if gamma > 0.0 {
        z * (1.0 - lam).powf(-1.0 / gamma) * u
    } else if gamma == 0.0 {
        z * (40.0 * (u - 0.5)).exp()
    } else {
        z * (1.0 - lam).powf(-1.0 / gamma) / u
    }
}

/// `sup{M_α^{(λ)}(f(x), g(y)) : M_γ^{(λ)}(x, y) = z, f(x)g(y) > 0}`, the
/// smallest `h(z)` allowed by the hypothesis.
pub fn minimal_h(alpha: Alpha, gamma: Alpha, lam: f64, f: &HalfLine, g: &HalfLine, z: f64) -> f64 {
    let w = Weights { s: 1.0 - lam, t: lam };
    let pair = |x: f64, y: f64| {
        let (a, b) = (f.value(x), g.value(y));
        if a > 0.0 && b > 0.0 {
            m_alpha_f(alpha, w, a, b)
        } else {
            0.0
        }
    };
    if z <= 0.0 {
        return 0.0;
    }
    let gam = match gamma {
        Ext::NegInf => {
            let v1 = if f.value(z) > 0.0 { m_alpha_f(alpha, w, f.value(z), g.tail_sup(z)) } else { 0.0 };
            let v2 = if g.value(z) > 0.0 { m_alpha_f(alpha, w, f.tail_sup(z), g.value(z)) } else { 0.0 };
            return v1.max(v2);
        }
        Ext::Finite(v) => v,
        Ext::PosInf => return 0.0,
    };
    let along = |x: f64| partner(z, x, lam, gamma).map_or(0.0, |y| pair(x, y));
    let mut best = 0.0f64;
    let mut cands: Vec<f64> = Vec::new();
    const N: usize = 256;
    for j in 0..N {
        cands.push(param(z, (j as f64 + 0.5) / N as f64, lam, gam));
    }
    let eps = 1e-9;
    for c in f.features() {
        cands.extend([c * (1.0 - eps), c * (1.0 + eps), c]);
    }
    for c in g.features() {
        for y in [c * (1.0 - eps), c * (1.0 + eps), c] {
            if let Some(x) = partner(z, y, 1.0 - lam, gamma) {
                cands.push(x);
            }
        }
    }
    cands.retain(|x| *x > 0.0 && x.is_finite());
    cands.sort_by(f64::total_cmp);
    let mut best_j = None;
    for (j, &x) in cands.iter().enumerate() {
        let v = along(x);
        if v > best {
            best = v;
            best_j = Some(j);
        }
    }
    let Some(j) = best_j else {
        return 0.0;
    };
    // golden-section polish between the neighbouring samples
    let (mut a, mut b) = (
        if j > 0 { cands[j - 1] } else { cands[j] * 0.5 },
        cands.get(j + 1).copied().unwrap_or(cands[j] * 2.0),
    );
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut c, mut d) = (b - phi * (b - a), a + phi * (b - a));
    let (mut fc, mut fd) = (along(c), along(d));
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = along(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = along(d);
        }
    }
    best.max(fc).max(fd)
}

/// The supplied or minimal `h`.
pub enum HalfLineH<'a> {
    Minimal,
    Given(&'a dyn Fn(f64) -> f64),
}

fn params(alpha: Alpha, gamma: Alpha, beta: Alpha, lam: f64) -> Params {
    Params {
        n: Some(1),
        alpha: Some(alpha),
        gamma: Some(gamma),
        beta: Some(beta),
        weights: Some(format!("{lam}")),
        ..Params::default()
    }
}

/// Hypothesis on a grid of `z`, conclusion `∫h ≥ M_β^{(λ)}(∫f, ∫g)` with
/// `β = αγ/(α+γ)`.
pub fn check_pl_1d(
    gamma: Alpha,
    alpha: Alpha,
    lam: f64,
    f: &HalfLine,
    g: &HalfLine,
    h: HalfLineH<'_>,
    grid: usize,
) -> Result<Report> {
    if !(lam > 0.0 && lam < 1.0) {
        return Err(Error::Range(format!("λ must lie in (0, 1), got {lam}")));
    }
    if gamma > Ext::Finite(1.0) {
        return Err(Error::Range(format!("γ must lie in [−∞, 1], got {gamma}")));
    }
    let neg_gamma = match gamma {
        Ext::NegInf => Ext::PosInf,
        Ext::Finite(v) => Ext::Finite(-v),
        Ext::PosInf => Ext::NegInf,
    };
    if alpha < neg_gamma && !alpha.approx_eq(neg_gamma, 1e-12) {
        return Err(Error::Range(format!("α must lie in [−γ, +∞], got α = {alpha}, γ = {gamma}")));
    }
    f.validate()?;
    g.validate()?;
    let beta = beta_pl(alpha, gamma)?;
    let w = Weights { s: 1.0 - lam, t: lam };
    let hmin = |z: f64| minimal_h(alpha, gamma, lam, f, g, z);
    let p = params(alpha, gamma, beta, lam);
    // support bound for h and the z-range of the hypothesis grid
    let reach = |e: Option<f64>| e.unwrap_or(f64::INFINITY);
    let end = {
        let (a, b) = (reach(f.support_end()), reach(g.support_end()));
        if a.is_finite() && b.is_finite() {
            Some(match gamma {
                Ext::NegInf => a.min(b),
                Ext::Finite(gm) if gm == 0.0 => a.powf(1.0 - lam) * b.powf(lam),
                Ext::Finite(gm) => ((1.0 - lam) * a.powf(gm) + lam * b.powf(gm)).powf(1.0 / gm),
                Ext::PosInf => a.max(b),
            })
        } else {
            None
        }
    };
    let zmax = end.unwrap_or(40.0);
    if let HalfLineH::Given(hf) = &h {
        for j in 0..grid {
            let z = zmax * (j as f64 + 0.5) / grid as f64;
            let need = hmin(z);
            let have = hf(z);
            if have < need * (1.0 - 1e-9) - 1e-300 {
                return Ok(Report::inequality("pl-1d", p, Ext::Finite(0.0), Ext::Finite(0.0), 0.0, Route::Quad)
                    .hypothesis_failed(format!("h({z}) = {have} < {need}"))
                    .with_witness(serde_json::json!({"f": f, "g": g, "z": z, "h": have, "required": need})));
            }
        }
    }
    let tol = 1e-10;
    let int_h = match (&h, end) {
        (HalfLineH::Minimal, Some(e)) => integrate(hmin, 0.0, e, tol)?,
        (HalfLineH::Minimal, None) => integrate_split(hmin, 0.0, 40.0, &[1.0, 5.0, 10.0], tol)? + integrate_to_inf(hmin, 40.0, tol)?,
        (HalfLineH::Given(hf), _) => integrate_split(hf, 0.0, 40.0, &[1.0, 5.0, 10.0], tol)? + integrate_to_inf(hf, 40.0, tol)?,
    };
    let rhs = m_alpha_f(beta, w, f.integral(), g.integral());
    let scale = int_h.abs().max(rhs.abs()).max(1e-300);
    Ok(Report::inequality("pl-1d", p, Ext::Finite(int_h), Ext::Finite(rhs), 1e-6 * scale, Route::Quad)
        .with_witness(serde_json::json!({"f": f, "g": g})))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_equality_case() {
        let (a, b, lam) = (2.0f64, 0.5f64, 0.3);
        let f = HalfLine::Exp { a, rate: 1.0 };
        let g = HalfLine::Exp { a: b, rate: 1.0 };
        let c = a.powf(1.0 - lam) * b.powf(lam);
        let h = move |z: f64| if z > 0.0 { c * (-z).exp() } else { 0.0 };
        let r = check_pl_1d(Ext::Finite(1.0), Ext::Finite(0.0), lam, &f, &g, HalfLineH::Given(&h), 200).unwrap();
        assert!(r.satisfied());
        assert!(r.margin.to_f64().abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn ball_case_with_minimal_h() {
        let f = HalfLine::Gamma { a: 1.0, k: 1, rate: 1.0 };
        let g = HalfLine::Exp { a: 3.0, rate: 2.0 };
        let r = check_pl_1d(Ext::Finite(0.0), Ext::Finite(0.0), 0.5, &f, &g, HalfLineH::Minimal, 100).unwrap();
        assert!(r.satisfied(), "{r:?}");
        assert!(r.margin.to_f64() >= 0.0);
    }

    #[test]
    fn indicator_equality() {
        let f = HalfLine::Pulse { a: 1.0, lo: 0.0, hi: 1.0 };
        let h = |z: f64| if z > 0.0 && z < 1.0 { 1.0 } else { 0.0 };
        for (gamma, alpha) in [(1.0, 0.0), (0.5, 1.0), (-0.5, 0.5), (0.0, 0.0)] {
            let r = check_pl_1d(Ext::Finite(gamma), Ext::Finite(alpha), 0.5, &f, &f, HalfLineH::Given(&h), 100).unwrap();
            assert!(r.satisfied(), "{r:?}");
            assert!((r.lhs.to_f64() - 1.0).abs() < 1e-9);
            assert!((r.rhs.to_f64() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn min_mean_case() {
        let f = HalfLine::Pulse { a: 1.0, lo: 0.0, hi: 2.0 };
        let g = HalfLine::Pulse { a: 3.0, lo: 0.0, hi: 0.5 };
        let r = check_pl_1d(Ext::NegInf, Ext::PosInf, 0.4, &f, &g, HalfLineH::Minimal, 100).unwrap();
        assert!(r.satisfied(), "{r:?}");
        assert!(r.lhs.to_f64() >= 1.5 - 1e-9);
    }

    #[test]
    fn shrunk_h_fails_hypothesis() {
        let f = HalfLine::Exp { a: 1.0, rate: 1.0 };
        let g = HalfLine::Exp { a: 2.0, rate: 0.5 };
        let h = |z: f64| 0.9 * minimal_h(Ext::Finite(1.0), Ext::Finite(0.5), 0.5, &f, &g, z);
        let r = check_pl_1d(Ext::Finite(0.5), Ext::Finite(1.0), 0.5, &f, &g, HalfLineH::Given(&h), 50).unwrap();
        assert_eq!(r.outcome, crate::report::Outcome::HypothesisFailed);
    }
}
