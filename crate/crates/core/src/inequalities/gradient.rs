//! The gradient form of the perimeter inequality for smooth radial functions
//! in the plane.

use crate::error::{Error, Result};
use crate::ext::{Alpha, Ext};
use crate::means::{beta_hyp, m_alpha, m_alpha_f, Weights};
use crate::numeric::{integrate_split, integrate_to_inf};
use crate::qcfun::{Profile, QCFunction, Radial};
use crate::report::{Params, Report, Route};

fn gaussian(f: &QCFunction) -> Result<&Radial> {
    match f {
        QCFunction::Radial(r) if r.dim == 2 && r.shift == 0.0 && matches!(r.profile, Profile::Gauss { .. }) => Ok(r),
        _ => Err(Error::InvalidFunction("the gradient check takes smooth radial Gaussian profiles in the plane".into())),
    }
}

/// Radial profile of the sup-convolution of two centred radial functions:
/// `H(r) = sup{M_α(F(a), G(b)) : a, b ≥ 0, (1−λ)a + λb = r}`.
pub fn radial_supconv(alpha: Alpha, lam: f64, f: &Profile, g: &Profile, r: f64) -> f64 {
    let w = Weights { s: 1.0 - lam, t: lam };
    let amax = r / (1.0 - lam);
    let along = |u: f64| {
        let a = u * amax;
        let b = ((r - (1.0 - lam) * a) / lam).max(0.0);
        let (x, y) = (f.value(a), g.value(b));
        if x > 0.0 && y > 0.0 {
            m_alpha_f(alpha, w, x, y)
        } else {
            0.0
        }
    };
    const N: usize = 128;
    let mut best = along(0.0).max(along(1.0));
    let mut bu = if along(0.0) >= along(1.0) { 0.0 } else { 1.0 };
    for j in 1..N {
        let u = j as f64 / N as f64;
        let v = along(u);
        if v > best {
            best = v;
            bu = u;
        }
    }
    let (mut a, mut b) = ((bu - 1.0 / N as f64).max(0.0), (bu + 1.0 / N as f64).min(1.0));
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut c, mut d) = (b - phi * (b - a), a + phi * (b - a));
    let (mut fc, mut fd) = (along(c), along(d));
    for _ in 0..60 {
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

/// `∫_{R²} |∇h|` for a radial non-increasing `h = H(|x|)`, which equals
/// `2π ∫_0^∞ H(r) dr` after integrating by parts.
fn radial_total_variation<F: Fn(f64) -> f64>(h: F, tol: f64) -> Result<f64> {
    Ok(2.0 * std::f64::consts::PI * (integrate_split(&h, 0.0, 20.0, &[1.0, 4.0], tol)? + integrate_to_inf(&h, 20.0, tol)?))
}

/// `∫|∇f|` by central differences and the trapezoid rule on
/// `[−half, half]²` with `m` cells per side.
pub fn gradient_integral_grid(f: &QCFunction, half: f64, m: usize) -> f64 {
    let h = 2.0 * half / m as f64;
    let mut total = 0.0;
    for j in 0..=m {
        for i in 0..=m {
            let (x, y) = (-half + i as f64 * h, -half + j as f64 * h);
            let dx = (f.eval(&[x + h, y]) - f.eval(&[x - h, y])) / (2.0 * h);
            let dy = (f.eval(&[x, y + h]) - f.eval(&[x, y - h])) / (2.0 * h);
            let wx = if i == 0 || i == m { 0.5 } else { 1.0 };
            let wy = if j == 0 || j == m { 0.5 } else { 1.0 };
            total += wx * wy * (dx * dx + dy * dy).sqrt();
        }
    }
    total * h * h
}

/// `∫|∇h| ≥ M_β^{(λ)}(∫|∇f|, ∫|∇g|)`, `β = α/(1 + α(n−1))`, with `h` the
/// sup-convolution unless a radial profile is supplied; a supplied `h` is
/// first tested against the hypothesis on a radial grid.
pub fn check_gradient_pl(
    alpha: Alpha,
    lambda: f64,
    f: &QCFunction,
    g: &QCFunction,
    h: Option<&dyn Fn(f64) -> f64>,
    grid: usize,
) -> Result<Report> {
    let (rf, rg) = (gaussian(f)?, gaussian(g)?);
    let n = 2usize;
    if !(alpha >= Ext::Finite(-1.0 / (n as f64 - 1.0))) {
        return Err(Error::Range(format!("α must lie in [−1/(n−1), +∞], got {alpha}")));
    }
    let w = Weights::lambda(lambda)?;
    let beta = beta_hyp(alpha, (n - 1) as f64)?;
    let params = Params {
        n: Some(n),
        i: Some(1),
        alpha: Some(alpha),
        beta: Some(beta),
        weights: Some(format!("{lambda}")),
        ..Params::default()
    };
    let hmin = |r: f64| radial_supconv(alpha, lambda, &rf.profile, &rg.profile, r);
    let tol = 1e-11;
    let lhs = match h {
        Some(hf) => {
            for j in 0..grid {
                let r = 8.0 * j as f64 / grid as f64;
                let (need, have) = (hmin(r), hf(r));
                if have < need * (1.0 - 1e-9) {
                    return Ok(Report::inequality("gradient-pl", params, Ext::Finite(0.0), Ext::Finite(0.0), 0.0, Route::Quad)
                        .hypothesis_failed(format!("h({r}) = {have} < {need}")));
                }
            }
            radial_total_variation(hf, tol)?
        }
        None => radial_total_variation(hmin, tol)?,
    };
    let pf = radial_total_variation(|r| rf.profile.value(r), tol)?;
    let pg = radial_total_variation(|r| rg.profile.value(r), tol)?;
    let rhs = m_alpha(beta, w, Ext::Finite(pf), Ext::Finite(pg));
    let scale = lhs.abs().max(rhs.to_f64().abs());
    Ok(Report::inequality("gradient-pl", params, Ext::Finite(lhs), rhs, 1e-8 * scale, Route::Quad)
        .with_witness(serde_json::json!({"f": f, "g": g})))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quermass::{perimeter, QuadratureSpec};

    fn gauss(scale: f64, width: f64) -> QCFunction {
        QCFunction::radial(2, Profile::Gauss { scale, width }).unwrap()
    }

    #[test]
    fn equal_gaussians_are_an_equality_case() {
        let f = gauss(1.0, 1.0);
        for alpha in [Ext::Finite(-1.0), Ext::Finite(-0.5), Ext::Finite(0.0)] {
            let r = check_gradient_pl(alpha, 0.3, &f, &f, None, 100).unwrap();
            assert!(r.margin.to_f64().abs() < 1e-8 * r.lhs.to_f64(), "{alpha}: {r:?}");
        }
    }

    #[test]
    fn distinct_gaussians_log_concave_case() {
        let r = check_gradient_pl(Ext::Finite(0.0), 0.5, &gauss(2.0, 0.7), &gauss(0.5, 1.6), None, 100).unwrap();
        assert!(r.satisfied(), "{r:?}");
    }

    #[test]
    fn coarea_matches_perimeter() {
        let f = gauss(1.5, 0.8);
        let grid = gradient_integral_grid(&f, 6.0, 600);
        let per = perimeter(&f, &QuadratureSpec::default()).unwrap().to_f64();
        assert!((grid - per).abs() < 1e-4 * per, "{grid} vs {per}");
    }
}
