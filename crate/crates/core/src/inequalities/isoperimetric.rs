//! Sobolev-, entropy- and Urysohn-type inequalities for functional
//! quermassintegrals, and mean-width rearrangement.

use crate::error::{Error, Result};
use crate::ext::Ext;
use crate::numeric::kappa;
use crate::qcfun::QCFunction;
use crate::quermass::{entropy, integral, lp_norm, mean_width_f, perimeter, w, QuadratureSpec};
use crate::report::{Params, Report, Route};

fn tol(lhs: Ext, rhs: Ext) -> f64 {
    1e-9 * lhs.to_f64().abs().max(rhs.to_f64().abs()).min(f64::MAX).max(1.0)
}

fn times(c: f64, e: Ext) -> Ext {
    match e {
        Ext::Finite(v) => Ext::Finite(c * v),
        other => other,
    }
}

fn params(n: usize, i: Option<usize>, k: Option<usize>) -> Params {
    Params { n: Some(n), i, k, ..Params::default() }
}

/// `Per(f) ≥ nκ_n^{1/n} ‖f‖_{n/(n−1)}`.
pub fn check_isoperimetric(f: &QCFunction, q: &QuadratureSpec) -> Result<Report> {
    let n = f.dim();
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    let nf = n as f64;
    let lhs = perimeter(f, q)?;
    let rhs = times(nf * kappa(n).powf(1.0 / nf), lp_norm(f, nf / (nf - 1.0), q)?);
    Ok(Report::inequality("isoperimetric", params(n, None, None), lhs, rhs, tol(lhs, rhs), Route::Exact))
}

/// `Per(f) ≥ n I(f) + Ent(f) + I(f) log κ_n` for log-concave `f`; equality
/// on the unit ball.
pub fn check_entropy(f: &QCFunction, q: &QuadratureSpec) -> Result<Report> {
    if !f.is_log_concave() {
        return Err(Error::InvalidFunction("the entropy inequality needs a log-concave function".into()));
    }
    let n = f.dim();
    let lhs = perimeter(f, q)?;
    let i = integral(f, q)?.finite().ok_or_else(|| Error::Divergent("I(f)".into()))?;
    let ent = entropy(f, q)?;
    let rhs = ent.add(Ext::Finite(n as f64 * i + i * kappa(n).ln()));
    Ok(Report::inequality("entropy", params(n, None, None), lhs, rhs, tol(lhs, rhs), Route::Exact))
}

/// `W_k(f) ≥ κ_n^{1−1/p} W_i(f^p)^{1/p}`, `p = (n−i)/(n−k)`, `0 ≤ i ≤ k ≤ n−1`.
pub fn check_wk_wi(f: &QCFunction, i: usize, k: usize, q: &QuadratureSpec) -> Result<Report> {
    let n = f.dim();
    if !(i <= k && k < n) {
        return Err(Error::Range(format!("need 0 ≤ i ≤ k ≤ n−1, got i = {i}, k = {k}, n = {n}")));
    }
    let p = (n - i) as f64 / (n - k) as f64;
    let lhs = w(f, k, q)?;
    let rhs = match w(&f.power(p)?, i, q)? {
        Ext::Finite(v) => Ext::Finite(kappa(n).powf(1.0 - 1.0 / p) * v.powf(1.0 / p)),
        e => e,
    };
    Ok(Report::inequality("wk-wi", params(n, Some(i), Some(k)), lhs, rhs, tol(lhs, rhs), Route::Exact))
}

/// `W_k(f) ≥ κ_n^{k/n} ‖f‖_{n/(n−k)}`.
pub fn check_wk_norm(f: &QCFunction, k: usize, q: &QuadratureSpec) -> Result<Report> {
    let n = f.dim();
    if k >= n {
        return Err(Error::Range(format!("need 0 ≤ k ≤ n−1, got k = {k}")));
    }
    let nf = n as f64;
    let lhs = w(f, k, q)?;
    let rhs = times(kappa(n).powf(k as f64 / nf), lp_norm(f, nf / (nf - k as f64), q)?);
    Ok(Report::inequality("wk-norm", params(n, None, Some(k)), lhs, rhs, tol(lhs, rhs), Route::Exact))
}

/// `M(f) ≥ 2κ_n^{−1/n} ‖f‖_n`.
pub fn check_urysohn(f: &QCFunction, q: &QuadratureSpec) -> Result<Report> {
    let n = f.dim();
    let nf = n as f64;
    let lhs = mean_width_f(f, q)?;
    let rhs = times(2.0 * kappa(n).powf(-1.0 / nf), lp_norm(f, nf, q)?);
    Ok(Report::inequality("urysohn", params(n, None, None), lhs, rhs, tol(lhs, rhs), Route::Exact))
}

/// `W_k(f) ≥ W_k(f*)`, with `f*` the mean-width rearrangement.
pub fn check_rearrangement(f: &QCFunction, k: usize, q: &QuadratureSpec) -> Result<Report> {
    let n = f.dim();
    if k >= n {
        return Err(Error::Range(format!("need 0 ≤ k ≤ n−1, got k = {k}")));
    }
    let lhs = w(f, k, q)?;
    let rhs = w(&f.rearrange()?, k, q)?;
    Ok(Report::inequality("rearrangement", params(n, None, Some(k)), lhs, rhs, tol(lhs, rhs), Route::Exact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConvexBody;

    fn ball() -> QCFunction {
        QCFunction::indicator(ConvexBody::centered_ball(2, 1.0))
    }

    #[test]
    fn unit_ball_is_extremal() {
        let q = QuadratureSpec::default();
        let b = ball();
        for r in [
            check_isoperimetric(&b, &q).unwrap(),
            check_entropy(&b, &q).unwrap(),
            check_wk_wi(&b, 0, 1, &q).unwrap(),
            check_wk_norm(&b, 1, &q).unwrap(),
            check_urysohn(&b, &q).unwrap(),
        ] {
            assert!(r.margin.to_f64().abs() < 1e-9, "{r:?}");
        }
        let r = check_urysohn(&b, &q).unwrap();
        assert!((r.lhs.to_f64() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn square_is_strict() {
        let q = QuadratureSpec::default();
        let s = QCFunction::indicator(ConvexBody::unit_square());
        for r in [check_isoperimetric(&s, &q).unwrap(), check_entropy(&s, &q).unwrap(), check_urysohn(&s, &q).unwrap()] {
            assert!(r.margin.to_f64() > 1e-6, "{r:?}");
        }
    }
}
