//! Functional quermassintegrals by the layer-cake principle, the Steiner
//! polynomial of the rounding `f_ρ`, its dual and the entropy functionals.

use crate::error::{Error, Result};
use crate::ext::Ext;
use crate::numeric::{binomial, factorial, integrate, kappa, richardson};
use crate::qcfun::{Layered, Profile, QCFunction};
use crate::report::{Params, Report, Route};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Placement {
    ExactSums,
    LogGrid,
}

/// Numerical budget for the non-exact routes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub t_nodes: usize,
    pub placement: Placement,
    pub angular_nodes: usize,
    pub mc_samples: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            t_nodes: 256,
            placement: Placement::ExactSums,
            angular_nodes: 256,
            mc_samples: 1_000_000,
            seed: 0,
            tol: 1e-11,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.t_nodes == 0 || self.angular_nodes == 0 || self.mc_samples == 0 {
            return Err(Error::Range("quadrature node counts must be ≥ 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Range(format!("tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

fn check_index(f: &QCFunction, i: usize) -> Result<usize> {
    let n = f.dim();
    if i > n {
        return Err(Error::Range(format!("quermassintegral index {i} exceeds dimension {n}")));
    }
    Ok(n)
}

fn layered_w(l: &Layered, i: usize) -> f64 {
    let mut prev = 0.0;
    let mut total = 0.0;
    for lv in l.levels() {
        total += (lv.t - prev) * lv.body.quermass().w(i);
        prev = lv.t;
    }
    total
}

/// `W_i(f) = ∫_0^∞ W_i({f ≥ t}) dt`.
pub fn w(f: &QCFunction, i: usize, q: &QuadratureSpec) -> Result<Ext> {
    let n = check_index(f, i)?;
    Ok(match f {
        QCFunction::Radial(r) => {
            if r.unbounded && i == n {
                return Ok(Ext::PosInf);
            }
            Ext::Finite(kappa(n) * r.profile.moment(n - i, r.shift, q.tol)?)
        }
        QCFunction::CharScaled { height, body } => Ext::Finite(height * body.quermass().w(i)),
        QCFunction::ExpNegSupport { body } => {
            if !body.origin_interior() {
                if i == n && body.contains(&vec![0.0; n], 0.0) {
                    return Ok(Ext::Finite(kappa(n)));
                }
                return Ok(Ext::PosInf);
            }
            Ext::Finite(factorial(n - i) * body.polar()?.quermass().w(i))
        }
        QCFunction::Layered(l) => Ext::Finite(layered_w(l, i)),
        QCFunction::Sampled(s) => Ext::Finite(layered_w(&s.to_layered(), i)),
    })
}

/// `[W_0(f), …, W_n(f)]`.
pub fn quermass_vector(f: &QCFunction, q: &QuadratureSpec) -> Result<Vec<Ext>> {
    (0..=f.dim()).map(|i| w(f, i, q)).collect()
}

/// `Per(f) = n W_1(f)`.
pub fn perimeter(f: &QCFunction, q: &QuadratureSpec) -> Result<Ext> {
    let n = f.dim();
    Ok(match w(f, 1, q)? {
        Ext::Finite(v) => Ext::Finite(n as f64 * v),
        e => e,
    })
}

/// `M(f) = 2κ_n^{-1} W_{n−1}(f)`.
pub fn mean_width_f(f: &QCFunction, q: &QuadratureSpec) -> Result<Ext> {
    let n = f.dim();
    Ok(match w(f, n - 1, q)? {
        Ext::Finite(v) => Ext::Finite(2.0 * v / kappa(n)),
        e => e,
    })
}

/// `χ(f) = max f`.
pub fn euler(f: &QCFunction) -> Ext {
    f.max_value()
}

pub fn integral(f: &QCFunction, q: &QuadratureSpec) -> Result<Ext> {
    w(f, 0, q)
}

/// `‖f‖_p = (∫ f^p)^{1/p}`.
pub fn lp_norm(f: &QCFunction, p: f64, q: &QuadratureSpec) -> Result<Ext> {
    Ok(match integral(&f.power(p)?, q)? {
        Ext::Finite(v) => Ext::Finite(v.powf(1.0 / p)),
        e => e,
    })
}

/// `∫ f log f`.
pub fn f_log_f(f: &QCFunction, q: &QuadratureSpec) -> Result<Ext> {
    let xlogx = |u: f64| if u > 0.0 { u * u.ln() } else { 0.0 };
    Ok(Ext::Finite(match f {
        QCFunction::Radial(r) => {
            if r.unbounded {
                return Err(Error::Divergent("∫ f log f of an unbounded profile".into()));
            }
            r.profile.radial_integral(r.dim, r.shift, xlogx, q.tol)?
        }
        QCFunction::CharScaled { height, body } => body.volume() * xlogx(*height),
        QCFunction::ExpNegSupport { body } => {
            let n = body.dim();
            -(n as f64) * factorial(n) * body.polar()?.volume()
        }
        _ => {
            let l = f.as_layered().expect("piecewise constant");
            let lv = l.levels();
            lv.iter()
                .enumerate()
                .map(|(k, level)| {
                    let inner = lv.get(k + 1).map_or(0.0, |nx| nx.body.quermass().w(0));
                    (level.body.quermass().w(0) - inner) * xlogx(level.t)
                })
                .sum()
        }
    }))
}

/// `Ent(f) = ∫ f log f − I(f) log I(f)`.
pub fn entropy(f: &QCFunction, q: &QuadratureSpec) -> Result<Ext> {
    let i = integral(f, q)?
        .finite()
        .ok_or_else(|| Error::Divergent("entropy of a non-integrable function".into()))?;
    Ok(match f_log_f(f, q)? {
        Ext::Finite(v) => Ext::Finite(v - i * i.ln()),
        e => e,
    })
}

/// `I(f_ρ) = Σ C(n,i) W_i(f) ρ^i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteinerPoly {
    pub dim: usize,
    /// `C(n,i)·W_i(f)` for `i = 0..=n`.
    pub coeffs: Vec<f64>,
}

impl SteinerPoly {
    pub fn eval(&self, rho: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * rho + c)
    }

    pub fn w(&self, i: usize) -> f64 {
        self.coeffs[i] / binomial(self.dim, i)
    }
}

pub fn steiner_poly(f: &QCFunction, q: &QuadratureSpec) -> Result<SteinerPoly> {
    let n = f.dim();
    let coeffs = (0..=n)
        .map(|i| match w(f, i, q)? {
            Ext::Finite(v) => Ok(binomial(n, i) * v),
            _ => Err(Error::Divergent(format!("W_{i}(f) is infinite, so I(f_ρ) = +∞ for every ρ"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SteinerPoly { dim: n, coeffs })
}

/// `I(f_ρ)` through the level sets `{f ≥ t} + ρB`.
pub fn rounded_integral(f: &QCFunction, rho: f64, q: &QuadratureSpec) -> Result<Ext> {
    integral(&f.round(rho)?, q)
}

/// Monte-Carlo estimate `(mean, σ)` of `I(f_ρ)` by evaluating ball suprema
/// uniformly in a bounding box; blocks have their own streams so the
/// estimate does not depend on the thread count.
pub fn rounded_integral_mc(f: &Layered, rho: f64, samples: usize, seed: u64) -> (f64, f64) {
    const BLOCK: usize = 1 << 14;
    let n = f.dim();
    let half = f.levels()[0].body.max_norm() + rho;
    let vol = (2.0 * half).powi(n as i32);
    let blocks = samples.div_ceil(BLOCK);
    let sums: Vec<(f64, f64)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let count = BLOCK.min(samples - b * BLOCK);
            let mut x = vec![0.0; n];
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..count {
                for c in x.iter_mut() {
                    *c = rng.random_range(-half..half);
                }
                let v = f.ball_sup(&x, rho);
                s1 += v;
                s2 += v * v;
            }
            (s1, s2)
        })
        .collect();
    let (s1, s2) = sums.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let m = samples as f64;
    let mean = s1 / m;
    let var = (s2 / m - mean * mean).max(0.0);
    (vol * mean, vol * (var / m).sqrt())
}

fn params_n(n: usize) -> Params {
    Params { n: Some(n), ..Params::default() }
}

/// Compares `I(f_ρ)` from the exact parallel-body route with the Steiner
/// polynomial at every `ρ`, and, for layered input when `q.mc_samples > 0`,
/// a Monte-Carlo estimate at the largest `ρ` within `5σ`.
pub fn steiner_check(f: &QCFunction, rhos: &[f64], q: &QuadratureSpec) -> Result<Vec<Report>> {
    let poly = steiner_poly(f, q)?;
    let n = f.dim();
    let mut out = Vec::new();
    for &rho in rhos {
        let exact = rounded_integral(f, rho, q)?;
        let p = poly.eval(rho);
        let tol = 1e-10 * p.abs();
        out.push(
            Report::identity("steiner", params_n(n), exact, Ext::Finite(p), tol, Route::Exact)
                .with_note(format!("rho={rho}")),
        );
    }
    if let (Some(l), Some(&rho)) = (f.as_layered(), rhos.iter().max_by(|a, b| a.total_cmp(b))) {
        let (mean, sigma) = rounded_integral_mc(&l, rho, q.mc_samples, q.seed);
        let p = poly.eval(rho);
        let params = Params { seed: Some(q.seed), ..params_n(n) };
        out.push(
            Report::identity("steiner-mc", params, Ext::Finite(mean), Ext::Finite(p), 5.0 * sigma, Route::Mc)
                .with_note(format!("rho={rho} sigma={sigma:e}")),
        );
    }
    Ok(out)
}

fn finite(e: Ext, what: &str) -> Result<f64> {
    e.finite().ok_or_else(|| Error::Divergent(format!("{what} is infinite")))
}

/// `Per(f) = lim (I(f_ρ) − I(f))/ρ`, Richardson-extrapolated on
/// `ρ = 10^{-2}·2^{-k}`, `k = 0..n`.
pub fn per_limit(f: &QCFunction, q: &QuadratureSpec) -> Result<f64> {
    let n = f.dim();
    let i0 = finite(integral(f, q)?, "I(f)")?;
    let slopes = (0..=n)
        .map(|k| {
            let rho = 1e-2 / 2f64.powi(k as i32);
            Ok((finite(rounded_integral(f, rho, q)?, "I(f_ρ)")? - i0) / rho)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(richardson(&slopes, 1))
}

pub fn per_limit_check(f: &QCFunction, q: &QuadratureSpec) -> Result<Report> {
    let lim = per_limit(f, q)?;
    let per = finite(perimeter(f, q)?, "Per(f)")?;
    Ok(Report::identity("per-limit", params_n(f.dim()), Ext::Finite(lim), Ext::Finite(per), 1e-6 * per.abs(), Route::Exact))
}

/// `M(f) = 2/(nκ_n) lim (I(f_ρ) − κ_n max f ρ^n)/ρ^{n−1}`, evaluated on the
/// ladder `ρ = 10³·2^k` and extrapolated in `1/ρ`.
pub fn mwidth_limit(f: &QCFunction, q: &QuadratureSpec) -> Result<f64> {
    let n = f.dim();
    let kn = kappa(n);
    let m = finite(f.max_value(), "max f")?;
    let vals = (0..n)
        .map(|k| {
            let rho = 1e3 * 2f64.powi(k as i32);
            let i = finite(rounded_integral(f, rho, q)?, "I(f_ρ)")?;
            Ok((i - kn * m * rho.powi(n as i32)) / rho.powi(n as i32 - 1))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(2.0 / (n as f64 * kn) * richardson(&vals, 1))
}

pub fn mwidth_limit_check(f: &QCFunction, q: &QuadratureSpec) -> Result<Report> {
    let lim = mwidth_limit(f, q)?;
    let mw = finite(mean_width_f(f, q)?, "M(f)")?;
    Ok(Report::identity("mwidth-limit", params_n(f.dim()), Ext::Finite(lim), Ext::Finite(mw), 1e-6 * mw.abs(), Route::Exact))
}

/// `∫_0^{m^ρ} W_{n−j}(cl{f > u^{1/ρ}}) du` for a level body family `K(t)`.
fn dual_layer(l: &Layered, j: usize, rho: f64) -> f64 {
    let n = l.dim();
    let mut prev = 0.0;
    let mut total = 0.0;
    for lv in l.levels() {
        let tr = lv.t.powf(rho);
        total += (tr - prev) * lv.body.quermass().w(n - j);
        prev = tr;
    }
    total
}

/// `Ψ(ρ) = I(χ_B ⊕ ρ·f)` in the log-concave algebra, as
/// `Σ_j C(n,j) ρ^j ∫_0^{m^ρ} W_{n−j}(cl{f > u^{1/ρ}}) du`.
pub fn dual_psi(f: &QCFunction, rho: f64, q: &QuadratureSpec) -> Result<Ext> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Range(format!("ρ must be positive, got {rho}")));
    }
    let n = f.dim();
    let kn = kappa(n);
    let mut total = 0.0;
    for j in 0..=n {
        let layer = match f {
            QCFunction::Radial(r) => {
                if r.unbounded {
                    return Ok(Ext::PosInf);
                }
                let top = r.profile.max().powf(rho);
                let radius = |u: f64| r.level_radius_ln(u.ln() / rho).unwrap_or(0.0);
                let g = |u: f64| kn * radius(u).powi(j as i32);
                match &r.profile {
                    Profile::Steps { .. } => dual_layer(&f.as_layered().expect("steps"), j, rho),
                    _ => integrate(g, 0.0, top, q.tol)?,
                }
            }
            QCFunction::ExpNegSupport { body } => {
                if !body.origin_interior() {
                    return Ok(Ext::PosInf);
                }
                // cl{f > t} = (−ln t)K°, so the layer is j!/ρ^j · W_{n−j}(K°)
                factorial(j) / rho.powi(j as i32) * body.polar()?.quermass().w(n - j)
            }
            _ => dual_layer(&f.as_layered().expect("piecewise constant"), j, rho),
        };
        total += binomial(n, j) * rho.powi(j as i32) * layer;
    }
    Ok(Ext::Finite(total))
}

/// `M̃(f) = κ_n log max f + n W_{n−1}(K_f)` for compact support, `+∞` otherwise.
pub fn dual_mwidth(f: &QCFunction) -> Result<Ext> {
    if !f.is_log_concave() {
        return Err(Error::InvalidFunction("the dual mean width closed form needs a log-concave function".into()));
    }
    let n = f.dim();
    let Some(m) = f.max_value().finite() else {
        return Ok(Ext::PosInf);
    };
    let Some(support) = f.support_body() else {
        return Ok(Ext::PosInf);
    };
    Ok(Ext::Finite(kappa(n) * m.ln() + n as f64 * support.quermass().w(n - 1)))
}

/// `(Ψ(ρ) − κ_n)/ρ` on `ρ, ρ/2, ρ/4`, Richardson-extrapolated and compared
/// with the closed form within `1e-4` relative.
pub fn dual_mwidth_check(f: &QCFunction, rho: f64, q: &QuadratureSpec) -> Result<Report> {
    let n = f.dim();
    let kn = kappa(n);
    let closed = dual_mwidth(f)?;
    let mut diffs = Vec::new();
    for k in 0..3 {
        let r = rho / 2f64.powi(k);
        match dual_psi(f, r, q)? {
            Ext::Finite(p) => diffs.push((p - kn) / r),
            e => return Ok(Report::identity("dual-mwidth", params_n(n), e, closed, 0.0, Route::Exact)),
        }
    }
    let lhs = Ext::Finite(richardson(&diffs, 1));
    let tol = closed.finite().map_or(0.0, |c| 1e-4 * c.abs());
    Ok(Report::identity("dual-mwidth", params_n(n), lhs, closed, tol, Route::Exact).with_note(format!("rho={rho}")))
}

/// `κ_n ∫ r^{n−i} dμ_f(r)` with `μ_f(r) = max_{|x| ≥ r} f`.
pub fn moment_bound(f: &QCFunction, i: usize, q: &QuadratureSpec) -> Result<Ext> {
    let n = check_index(f, i)?;
    let m = (n - i) as i32;
    let kn = kappa(n);
    Ok(match f {
        QCFunction::Radial(_) => return w(f, i, q),
        QCFunction::ExpNegSupport { body } => {
            let depth = -body.signed_distance(&vec![0.0; n]);
            if depth <= 0.0 {
                return Ok(Ext::PosInf);
            }
            // μ(r) = e^{−r·depth}
            Ext::Finite(kn * factorial(n - i) / depth.powi(m))
        }
        _ => {
            let l = f.as_layered().expect("piecewise constant");
            let mut prev = 0.0;
            let mut total = 0.0;
            for lv in l.levels() {
                total += (lv.t - prev) * lv.body.max_norm().powi(m);
                prev = lv.t;
            }
            Ext::Finite(kn * total)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConvexBody;
    use std::f64::consts::{E, PI};

    fn q() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn laplace_density_in_one_dimension() {
        let f = QCFunction::radial(1, Profile::Exp { rate: 1.0, scale: 1.0 }).unwrap();
        assert!((w(&f, 0, &q()).unwrap().to_f64() - 2.0).abs() < 1e-10);
        assert!((w(&f, 1, &q()).unwrap().to_f64() - 2.0).abs() < 1e-10);
        let p = steiner_poly(&f, &q()).unwrap();
        assert!((p.eval(0.5) - 3.0).abs() < 1e-10);
        assert!((integral(&f, &q()).unwrap().to_f64() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn radial_steps_moment_sum() {
        let f = QCFunction::radial(2, Profile::Steps { points: vec![[1.0, 3.0], [2.0, 1.0]] }).unwrap();
        let w0 = w(&f, 0, &q()).unwrap().to_f64();
        assert!((w0 - 6.0 * PI).abs() < 1e-12);
        let direct = 1.0 * PI * 4.0 + 2.0 * PI * 1.0;
        assert!((w0 - direct).abs() < 1e-12);
    }

    #[test]
    fn scaled_ball_quantities() {
        let f = QCFunction::char_scaled(2.0, ConvexBody::centered_ball(2, 1.0)).unwrap();
        for i in 0..=2 {
            assert!((w(&f, i, &q()).unwrap().to_f64() - 2.0 * PI).abs() < 1e-12);
        }
        assert_eq!(euler(&f), Ext::Finite(2.0));
        let b = QCFunction::indicator(ConvexBody::centered_ball(2, 1.0));
        assert!((perimeter(&b, &q()).unwrap().to_f64() - 2.0 * PI).abs() < 1e-12);
        assert!((lp_norm(&b, 2.0, &q()).unwrap().to_f64() - PI.sqrt()).abs() < 1e-12);
        assert!((entropy(&b, &q()).unwrap().to_f64() + PI * PI.ln()).abs() < 1e-12);
    }

    #[test]
    fn square_steiner_and_limits() {
        let f = QCFunction::indicator(ConvexBody::unit_square());
        let p = steiner_poly(&f, &q()).unwrap();
        assert!((p.coeffs[0] - 1.0).abs() < 1e-12);
        assert!((p.coeffs[1] - 4.0).abs() < 1e-12);
        assert!((p.coeffs[2] - PI).abs() < 1e-12);
        assert!((per_limit(&f, &q()).unwrap() - 4.0).abs() < 1e-8);
        assert!((mwidth_limit(&f, &q()).unwrap() - 4.0 / PI).abs() < 1e-8);
        assert!((mean_width_f(&f, &q()).unwrap().to_f64() - 4.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn dual_steiner_on_scaled_ball() {
        let f = QCFunction::char_scaled(E, ConvexBody::centered_ball(2, 1.0)).unwrap();
        let rho = 0.3;
        let psi = dual_psi(&f, rho, &q()).unwrap().to_f64();
        assert!((psi - E.powf(rho) * PI * (1.0 + rho).powi(2)).abs() < 1e-12);
        assert_eq!(dual_mwidth(&f).unwrap(), Ext::Finite(3.0 * PI));
        let r = dual_mwidth_check(&f, 1e-4, &q()).unwrap();
        assert!(r.satisfied(), "{r:?}");
        let e = QCFunction::radial(2, Profile::Exp { rate: 1.0, scale: 1.0 }).unwrap();
        assert_eq!(dual_mwidth(&e).unwrap(), Ext::PosInf);
    }

    #[test]
    fn moment_bound_dominates_for_inscribed_square() {
        let f = QCFunction::indicator(ConvexBody::unit_square().translate(&[-0.5, -0.5]));
        for i in 0..=2 {
            let b = moment_bound(&f, i, &q()).unwrap().to_f64();
            let wi = w(&f, i, &q()).unwrap().to_f64();
            assert!(b >= wi - 1e-12);
            assert!((b - PI * 0.5f64.sqrt().powi(2 - i as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn exp_neg_support_of_square() {
        let k = ConvexBody::polygon(vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]).unwrap();
        let f = QCFunction::exp_neg_support(k).unwrap();
        // ∫ e^{−|x|_1} over R² = 4
        assert!((integral(&f, &q()).unwrap().to_f64() - 4.0).abs() < 1e-12);
        let flogf = f_log_f(&f, &q()).unwrap().to_f64();
        // ∫ −|x|_1 e^{−|x|_1} = −8
        assert!((flogf + 8.0).abs() < 1e-12);
    }
}
