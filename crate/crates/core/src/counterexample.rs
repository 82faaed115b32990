//! The `p`-gradient functional `F_p(K) = ∫|∇h_K|^p e^{−h_K}` and its
//! failure to be monotone under inclusion: cap bodies `conv(B ∪ l·e₁)`
//! beat the ball they contain.

use crate::error::{Error, Result};
use crate::ext::Ext;
use crate::geometry::{ConvexBody, P2};
use crate::numeric::{factorial, integrate, integrate_split, integrate_to_inf, kappa};
use crate::quermass::QuadratureSpec;
use crate::report::{Params, Report, Route};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// `conv(B ∪ l·e₁)` in `R^n`, `l = 1/cos φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapBody {
    pub dim: usize,
    pub l: f64,
}

impl CapBody {
    pub fn new(dim: usize, l: f64) -> Result<CapBody> {
        if dim < 2 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if !(l >= 1.0 && l.is_finite()) {
            return Err(Error::Range(format!("cap needs 1 ≤ l < ∞, got {l}")));
        }
        Ok(CapBody { dim, l })
    }

    pub fn from_phi(dim: usize, phi: f64) -> Result<CapBody> {
        if !(0.0..FRAC_PI_2).contains(&phi) {
            return Err(Error::Range(format!("φ must lie in [0, π/2), got {phi}")));
        }
        CapBody::new(dim, 1.0 / phi.cos())
    }

    pub fn phi(&self) -> f64 {
        (1.0 / self.l).acos()
    }

    /// `h(x) = max(|x|, l·x₁)`.
    pub fn support(&self, x: &[f64]) -> f64 {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        r.max(self.l * x[0])
    }
}

/// Axially symmetric profiles `H(θ₁) = h_K(x(1, θ))` and
/// `N(θ₁) = |∇h_K(x(1, θ))|` of `α·conv(B ∪ l·e₁)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportOracle {
    pub phi: f64,
    pub scale: f64,
}

impl SupportOracle {
    pub fn ball() -> SupportOracle {
        SupportOracle { phi: 0.0, scale: 1.0 }
    }

    pub fn scaled(self, alpha: f64) -> SupportOracle {
        SupportOracle { scale: self.scale * alpha, ..self }
    }

    pub fn h(&self, theta1: f64) -> f64 {
        let t = theta1.abs();
        if t < self.phi {
            self.scale * t.cos() / self.phi.cos()
        } else {
            self.scale
        }
    }

    pub fn n(&self, theta1: f64) -> f64 {
        if theta1.abs() < self.phi {
            self.scale / self.phi.cos()
        } else {
            self.scale
        }
    }

    /// `H > 0` and `N ≥ H` on a sample of `θ₁`.
    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0 && (0.0..FRAC_PI_2).contains(&self.phi)) {
            return Err(Error::Range(format!("oracle needs scale > 0 and φ ∈ [0, π/2), got {self:?}")));
        }
        for k in 0..=256 {
            let t = PI * k as f64 / 256.0;
            let (h, n) = (self.h(t), self.n(t));
            if !(h > 0.0 && n >= h * (1.0 - 1e-14)) {
                return Err(Error::InvalidBody(format!("profile fails N ≥ H > 0 at θ₁ = {t}")));
            }
        }
        Ok(())
    }
}

pub fn cap_profiles(c: CapBody) -> SupportOracle {
    SupportOracle { phi: c.phi(), scale: 1.0 }
}

/// `∫₀^π sin^i t dt`.
pub fn wallis(i: usize) -> f64 {
    match i {
        0 => PI,
        1 => 2.0,
        _ => (i as f64 - 1.0) / i as f64 * wallis(i - 2),
    }
}

/// `C(n) = ∏_{i=1}^{n−3} ∫₀^π sin^i`.
pub fn c_n(n: usize) -> f64 {
    (1..n.saturating_sub(2)).map(wallis).product()
}

/// `F_p` by angular quadrature of `(n−1)!·N^p/H^n`: the full circle for
/// `n = 2`, the `θ₁` reduction with `2π(n−1)!C(n)` for `n ≥ 3`.
pub fn f_p(o: &SupportOracle, n: usize, p: f64, q: &QuadratureSpec) -> Result<f64> {
    o.validate()?;
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    if !(p > 0.0) {
        return Err(Error::Range(format!("p must be positive, got {p}")));
    }
    let nf = n as i32;
    let g = |t: f64| o.n(t).powf(p) / o.h(t).powi(nf);
    let phi = o.phi;
    let divergent = |e: Error| Error::Divergent(format!("F_p(cap) quadrature blew up at φ = {phi} (growth towards π/2): {e}"));
    if n == 2 {
        let v = integrate_split(g, -PI, PI, &[-phi, phi], q.tol).map_err(divergent)?;
        return Ok(v);
    }
    let m = (n - 2) as i32;
    let v = integrate_split(|t: f64| g(t) * t.sin().powi(m), 0.0, PI, &[phi], q.tol).map_err(divergent)?;
    Ok(TAU * factorial(n - 1) * c_n(n) * v)
}

/// `∫_φ^π sin^m`.
fn sin_tail(m: usize, phi: f64) -> f64 {
    match m {
        0 => PI - phi,
        1 => 1.0 + phi.cos(),
        _ => {
            let mf = m as f64;
            (mf - 1.0) / mf * sin_tail(m - 2, phi) + phi.sin().powi(m as i32 - 1) * phi.cos() / mf
        }
    }
}

/// Closed form of `F_p(cap)`, using `∫₀^φ sin^{n−2}/cos^n = tan^{n−1}φ/(n−1)`.
pub fn f_p_cap_closed(c: CapBody, p: f64) -> f64 {
    let (n, phi) = (c.dim, c.phi());
    let cap = phi.cos().powf(n as f64 - p) * phi.tan().powi(n as i32 - 1) / (n as f64 - 1.0);
    if n == 2 {
        2.0 * (cap + PI - phi)
    } else {
        TAU * factorial(n - 1) * c_n(n) * (cap + sin_tail(n - 2, phi))
    }
}

/// `F_p(B) = (n−1)!·nκ_n`.
pub fn f_p_ball(n: usize) -> f64 {
    factorial(n - 1) * n as f64 * kappa(n)
}

fn num_grad_norm(h: &(impl Fn(&[f64]) -> f64 + ?Sized), x: &[f64]) -> f64 {
    let d = 1e-6;
    let mut y = x.to_vec();
    let mut s = 0.0;
    for j in 0..x.len() {
        y[j] = x[j] + d;
        let a = h(&y);
        y[j] = x[j] - d;
        let b = h(&y);
        y[j] = x[j];
        s += ((a - b) / (2.0 * d)).powi(2);
    }
    s.sqrt()
}

/// `F_p` straight from a support function `h` on `R²` or `R³`: numerical
/// gradient, numerical radial integral, quadrature over the sphere split at
/// the given `θ₁` seams.
pub fn f_p_brute<S: Fn(&[f64]) -> f64 + Sync>(h: S, n: usize, p: f64, seams: &[f64], tol: f64) -> Result<f64> {
    let nf = n as i32;
    let radial = |x: &[f64]| -> Result<f64> {
        let hx = h(x);
        let g = num_grad_norm(&h, x).powf(p);
        let r = integrate_to_inf(|r| r.powi(nf - 1) * (-r * hx).exp(), 0.0, tol * 1e-2)?;
        Ok(g * r)
    };
    // errors inside closures surface as NaN and are caught below
    let lift = |v: Result<f64>| v.unwrap_or(f64::NAN);
    let v = match n {
        2 => {
            let mut br: Vec<f64> = seams.iter().flat_map(|&s| [s, TAU - s]).collect();
            br.retain(|&s| s > 0.0 && s < TAU);
            integrate_split(|t| lift(radial(&[t.cos(), t.sin()])), 0.0, TAU, &br, tol)?
        }
        3 => integrate_split(
            |t1| {
                let s1 = t1.sin();
                let inner = integrate(|t2| lift(radial(&[t1.cos(), s1 * t2.cos(), s1 * t2.sin()])), 0.0, TAU, tol);
                lift(inner) * s1
            },
            0.0,
            PI,
            seams,
            tol,
        )?,
        _ => return Err(Error::UnsupportedDimension(n)),
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Quadrature("brute F_p integrand failed".into()))
    }
}

/// Brute `F_p(α·cap)`.
pub fn f_p_cap_brute(c: CapBody, alpha: f64, p: f64, tol: f64) -> Result<f64> {
    f_p_brute(|x: &[f64]| alpha * c.support(x), c.dim, p, &[c.phi()], tol)
}

/// `F_p(αK) = α^{p−n}F_p(K)`, both sides by quadrature on the scaled
/// profiles.
pub fn homothety_check(o: &SupportOracle, n: usize, p: f64, alpha: f64, q: &QuadratureSpec) -> Result<Report> {
    let lhs = f_p(&o.scaled(alpha), n, p, q)?;
    let rhs = alpha.powf(p - n as f64) * f_p(o, n, p, q)?;
    let params = Params { n: Some(n), weights: Some(format!("alpha={alpha}")), ..Params::default() };
    Ok(Report::identity("fp-homothety", params, Ext::Finite(lhs), Ext::Finite(rhs), 1e-8 * rhs.abs().max(1.0), Route::Quad)
        .with_note(format!("p = {p}, φ = {}", o.phi)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub phi: f64,
    pub l: f64,
    pub f_p_cap: Ext,
    pub f_p_ball: f64,
    pub ratio: Ext,
}

/// `j·π/32` for `j = 1…15`, then `π/2 − 2^{−k}π/32`, `k = 1…12`.
pub fn default_phis() -> Vec<f64> {
    let mut v: Vec<f64> = (1..16).map(|j| j as f64 * PI / 32.0).collect();
    v.extend((1..=12).map(|k| FRAC_PI_2 - PI / 32.0 * 0.5f64.powi(k)));
    v
}

/// `F_p(cap)` over the given angles; rows whose quadrature diverges carry `+∞`.
pub fn sweep(n: usize, p: f64, phis: &[f64], q: &QuadratureSpec) -> Result<Vec<SweepRow>> {
    let ball = f_p(&SupportOracle::ball(), n, p, q)?;
    phis.par_iter()
        .map(|&phi| {
            let c = CapBody::from_phi(n, phi)?;
            let v = match f_p(&cap_profiles(c), n, p, q) {
                Ok(v) => Ext::Finite(v),
                Err(Error::Divergent(_)) => Ext::PosInf,
                Err(e) => return Err(e),
            };
            let ratio = match v {
                Ext::Finite(x) => Ext::Finite(x / ball),
                other => other,
            };
            Ok(SweepRow { phi, l: c.l, f_p_cap: v, f_p_ball: ball, ratio })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub n: usize,
    pub p: f64,
    pub phi: f64,
    pub l: f64,
    pub f_p_cap: f64,
    pub f_p_ball: f64,
}

fn excess(n: usize, p: f64, phi: f64, ball: f64, q: &QuadratureSpec) -> Result<Option<f64>> {
    let v = f_p(&cap_profiles(CapBody::from_phi(n, phi)?), n, p, q)?;
    Ok((v - ball > 1e-6 * ball).then_some(v))
}

/// Smallest tested `φ` with `F_p(cap) > F_p(B)`: a scan over
/// [`default_phis`], then bisection against the last non-violating node.
pub fn find_violation(n: usize, p: f64, q: &QuadratureSpec) -> Result<Violation> {
    if !(p > 1.0) {
        return Err(Error::Range(format!("a cap violation needs p > 1, got {p}")));
    }
    let ball = f_p(&SupportOracle::ball(), n, p, q)?;
    let mut lo = 0.0;
    let mut hit = None;
    for phi in default_phis() {
        if let Some(v) = excess(n, p, phi, ball, q)? {
            hit = Some((phi, v));
            break;
        }
        lo = phi;
    }
    let Some((mut hi, mut v)) = hit else {
        return Err(Error::Divergent(format!("no violation before φ = {lo} for (n, p) = ({n}, {p})")));
    };
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match excess(n, p, mid, ball, q)? {
            Some(x) => {
                hi = mid;
                v = x;
            }
            None => lo = mid,
        }
    }
    Ok(Violation { n, p, phi: hi, l: 1.0 / hi.cos(), f_p_cap: v, f_p_ball: ball })
}

/// Report for `F_p(K) ≥ F_p(K′)`, `K = B ⊂ K′ = cap`; a violation is the
/// expected outcome.
pub fn monotonicity_report(v: &Violation) -> Report {
    let params = Params { n: Some(v.n), ..Params::default() };
    Report::inequality("fp-monotone", params, Ext::Finite(v.f_p_ball), Ext::Finite(v.f_p_cap), 1e-9 * v.f_p_ball, Route::Quad)
        .with_note(format!("p = {}, K = B, K' = conv(B ∪ l e1), l = {}", v.p, v.l))
        .with_witness(serde_json::json!({"phi": v.phi, "l": v.l, "p": v.p}))
}

/// `f_t = e^{−h_B}` for `f₀ = e^{−h_B}`, `f₁ = e^{−h_cap}` (the intersection
/// is `B`): reports `I_p(f_t) ≥ I_p(f₀)^{1−t} I_p(f₁)^t`, which the cap
/// violates for every `t ∈ (0, 1]`.
pub fn gradient_p_report(v: &Violation, t: f64) -> Result<Report> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::Range(format!("t must lie in (0, 1], got {t}")));
    }
    let lhs = v.f_p_ball;
    let rhs = v.f_p_ball.powf(1.0 - t) * v.f_p_cap.powf(t);
    let params = Params { n: Some(v.n), weights: Some(format!("{t}")), ..Params::default() };
    Ok(Report::inequality("ip-pl", params, Ext::Finite(lhs), Ext::Finite(rhs), 1e-9 * lhs, Route::Quad)
        .with_note(format!("p = {}, f0 = exp(-h_B), f1 = exp(-h_cap), l = {}", v.p, v.l))
        .with_witness(serde_json::json!({"phi": v.phi, "l": v.l, "p": v.p, "t": t})))
}

/// Evaluation window and step of [`check_supconv_support`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupGrid {
    pub half: f64,
    pub step: f64,
}

impl Default for SupGrid {
    fn default() -> Self {
        SupGrid { half: 0.5, step: 1e-2 }
    }
}

fn fan(k: &ConvexBody) -> Result<Vec<P2>> {
    let ConvexBody::Polygon(p) = k else {
        return Err(Error::Unsupported("sup-convolution support check needs polygons".into()));
    };
    let v = p.vertices();
    Ok((0..v.len())
        .map(|j| {
            let (a, b) = (v[j], v[(j + 1) % v.len()]);
            [b[1] - a[1], a[0] - b[0]]
        })
        .collect())
}

/// `inf_x (1−t)h₀(x) + t·h₁((z − (1−t)x)/t)`. The objective is piecewise
/// linear with pointed cells, so the minimum sits at a cell vertex: the
/// origin, `z/(1−t)`, or a crossing of a kink line of `h₀` (through 0) with
/// one of `h₁` (through `z/(1−t)`).
fn inf_conv(k0: &ConvexBody, k1: &ConvexBody, n0: &[P2], n1: &[P2], t: f64, z: P2) -> f64 {
    let s = 1.0 - t;
    let obj = |x: P2| {
        let y = [(z[0] - s * x[0]) / t, (z[1] - s * x[1]) / t];
        s * k0.support(&x) + t * k1.support(&y)
    };
    let p = [z[0] / s, z[1] / s];
    let mut best = obj([0.0, 0.0]).min(obj(p));
    for a in n0 {
        for b in n1 {
            // x = σ·a = p + τ·b
            let det = a[0] * b[1] - a[1] * b[0];
            if det.abs() < 1e-14 * (a[0].hypot(a[1]) * b[0].hypot(b[1])) {
                continue;
            }
            let sigma = (p[0] * b[1] - p[1] * b[0]) / det;
            best = best.min(obj([sigma * a[0], sigma * a[1]]));
        }
    }
    best
}

/// `(1−t)·e^{−h_{K₀}} ⊕ t·e^{−h_{K₁}}` (log-concave weights) on a grid
/// against `e^{−h_{K₀∩K₁}}`; identity on the maximal absolute deviation.
pub fn check_supconv_support(k0: &ConvexBody, k1: &ConvexBody, t: f64, grid: SupGrid) -> Result<Report> {
    if k0.dim() != 2 || k1.dim() != 2 {
        return Err(Error::UnsupportedDimension(k0.dim().max(k1.dim())));
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Range(format!("t must lie in (0, 1), got {t}")));
    }
    if !(grid.step > 0.0 && grid.half > 0.0) {
        return Err(Error::Range("grid step and half-width must be positive".into()));
    }
    let cap = k0.intersect(k1)?;
    if !cap.origin_interior() {
        return Err(Error::InvalidBody("the origin must be interior to K0 ∩ K1".into()));
    }
    let (n0, n1) = (fan(k0)?, fan(k1)?);
    let m = (2.0 * grid.half / grid.step).round() as usize;
    let pts: Vec<[f64; 2]> = (0..=m)
        .flat_map(|i| (0..=m).map(move |j| (i, j)))
        .map(|(i, j)| [-grid.half + i as f64 * grid.step, -grid.half + j as f64 * grid.step])
        .collect();
    let dev = pts
        .par_iter()
        .map(|&z| ((-inf_conv(k0, k1, &n0, &n1, t, z)).exp() - (-cap.support(&z)).exp()).abs())
        .reduce(|| 0.0, f64::max);
    let params = Params { n: Some(2), alpha: Some(Ext::Finite(0.0)), weights: Some(format!("{t}")), ..Params::default() };
    Ok(Report::identity("supconv-support", params, Ext::Finite(dev), Ext::Finite(0.0), 1e-4, Route::Grid)
        .with_note(format!("{} grid points, step {}", pts.len(), grid.step)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Polygon;

    fn q() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn profiles_of_l2() {
        let o = cap_profiles(CapBody::new(3, 2.0).unwrap());
        assert!((o.phi - PI / 3.0).abs() < 1e-15);
        // h(e1) = l
        assert!((o.h(0.0) - 2.0).abs() < 1e-14);
        assert!((o.n(0.1) - 2.0).abs() < 1e-14);
        assert!((o.h(o.phi - 1e-12) - 1.0).abs() < 1e-9 && o.h(o.phi + 1e-12) == 1.0);
        o.validate().unwrap();
        let b = cap_profiles(CapBody::new(2, 1.0).unwrap());
        assert!(b.h(0.3) == 1.0 && b.n(0.0) == 1.0);
    }

    #[test]
    fn ball_values() {
        assert!((f_p(&SupportOracle::ball(), 2, 2.0, &q()).unwrap() - TAU).abs() < 1e-9);
        for n in [3, 4, 5] {
            let v = f_p(&SupportOracle::ball(), n, 1.7, &q()).unwrap();
            assert!((v - f_p_ball(n)).abs() < 1e-9 * v, "{n}");
        }
        let b3 = f_p_brute(|x: &[f64]| x.iter().map(|v| v * v).sum::<f64>().sqrt(), 3, 2.0, &[], 1e-9).unwrap();
        assert!((b3 - 8.0 * PI).abs() < 1e-8);
    }

    #[test]
    fn reduction_matches_brute_and_closed() {
        for (n, p, phi) in [(2, 2.0, PI / 3.0), (2, 1.5, 0.7), (3, 2.0, PI / 3.0), (3, 2.5, 1.1)] {
            let c = CapBody::from_phi(n, phi).unwrap();
            let red = f_p(&cap_profiles(c), n, p, &q()).unwrap();
            let brute = f_p_cap_brute(c, 1.0, p, 1e-9).unwrap();
            let closed = f_p_cap_closed(c, p);
            assert!((red - brute).abs() < 1e-8 * red, "{n} {p}: {red} vs {brute}");
            assert!((red - closed).abs() < 1e-10 * red, "{n} {p}: {red} vs {closed}");
        }
    }

    #[test]
    fn wallis_product() {
        assert_eq!(c_n(3), 1.0);
        assert!((c_n(4) - 2.0).abs() < 1e-15);
        assert!((c_n(5) - PI).abs() < 1e-15);
        // 2π C(n) ∏ = surface area of the sphere
        for n in 3..8 {
            assert!((TAU * c_n(n) * wallis(n - 2) - n as f64 * kappa(n)).abs() < 1e-12);
        }
    }

    #[test]
    fn homothety() {
        let o = cap_profiles(CapBody::from_phi(2, 0.9).unwrap());
        let r = homothety_check(&o, 2, 3.0, 2.0, &q()).unwrap();
        assert!(r.satisfied(), "{r:?}");
        let brute = f_p_cap_brute(CapBody::from_phi(2, 0.9).unwrap(), 2.0, 3.0, 1e-9).unwrap();
        assert!((brute - r.rhs.to_f64()).abs() < 1e-8 * brute);
        // p > n: the doubled ball beats the ball
        let b = f_p(&SupportOracle::ball().scaled(2.0), 2, 3.0, &q()).unwrap();
        assert!((b - 2.0 * TAU).abs() < 1e-9);
    }

    #[test]
    fn violations_found() {
        for (n, p) in [(2, 2.0), (3, 2.0), (2, 1.5), (3, 1.5)] {
            let v = find_violation(n, p, &q()).unwrap();
            assert!(v.f_p_cap > v.f_p_ball && v.phi < FRAC_PI_2, "{v:?}");
            let r = monotonicity_report(&v);
            assert!(!r.satisfied());
            assert!(!gradient_p_report(&v, 0.5).unwrap().satisfied());
        }
        assert!(find_violation(2, 1.0, &q()).is_err());
    }

    #[test]
    fn sweep_grows() {
        let rows = sweep(2, 2.0, &default_phis(), &q()).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].f_p_cap > w[0].f_p_cap);
        }
        assert!(rows.last().unwrap().ratio > Ext::Finite(100.0));
    }

    #[test]
    fn supconv_of_support_exponentials() {
        let sq = ConvexBody::Polygon(Polygon::from_box(-1.0, -1.0, 1.0, 1.0));
        let r = check_supconv_support(&sq, &sq, 0.5, SupGrid { half: 0.5, step: 0.1 }).unwrap();
        assert!(r.lhs.to_f64() < 1e-7, "{r:?}");
        let rot = ConvexBody::Polygon(Polygon::regular(4, 2f64.sqrt(), [0.0, 0.0], 0.0));
        let r = check_supconv_support(&sq, &rot, 0.3, SupGrid { half: 0.5, step: 0.05 }).unwrap();
        assert!(r.satisfied(), "{r:?}");
        let off = ConvexBody::Polygon(Polygon::from_box(0.5, 0.5, 1.0, 1.0));
        assert!(check_supconv_support(&sq, &off, 0.5, SupGrid::default()).is_err());
    }
}
