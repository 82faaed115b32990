//! Small numeric kernel: ball volumes, binomials, adaptive Gauss–Kronrod
//! quadrature and Richardson extrapolation.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Volume of the unit ball in `R^n`.
pub fn kappa(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * kappa(n - 2),
    }
}

/// Binomial coefficient as a float; exact for the small arguments used here.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, j| acc * j as f64)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive G7K15 quadrature of `f` on `[a, b]` to absolute-or-relative
/// tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Quadrature(format!("non-finite bounds [{a}, {b}]")));
    }
    let (v, e) = gk15(&f, a, b);
    let mut segs = vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    let mut iter = 0;
    while err > tol.max(tol * total.abs()) {
        iter += 1;
        if iter > 20_000 {
            return Err(Error::Quadrature(format!(
                "no convergence on [{a}, {b}]: estimate {total}, error {err:e}"
            )));
        }
        let (idx, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (sa, sb, sv, se) = segs.swap_remove(idx);
        let m = 0.5 * (sa + sb);
        if m <= sa || m >= sb {
            // interval exhausted at machine precision
            segs.push((sa, sb, sv, 0.0));
            err -= se;
            continue;
        }
        let (v1, e1) = gk15(&f, sa, m);
        let (v2, e2) = gk15(&f, m, sb);
        total += v1 + v2 - sv;
        err += e1 + e2 - se;
        segs.push((sa, m, v1, e1));
        segs.push((m, sb, v2, e2));
        if !total.is_finite() {
            return Err(Error::Quadrature("non-finite integrand".into()));
        }
    }
    // recompute to shed accumulated cancellation in the running sum
    Ok(segs.iter().map(|s| s.2).sum())
}

/// Quadrature over `[a, b]` split at the given interior breakpoints.
pub fn integrate_split<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breaks: &[f64], tol: f64) -> Result<f64> {
    let mut pts = vec![a];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    inner.sort_by(f64::total_cmp);
    pts.extend(inner);
    pts.push(b);
    let mut total = 0.0;
    for w in pts.windows(2) {
        total += integrate(&f, w[0], w[1], tol)?;
    }
    Ok(total)
}

/// Quadrature over `[a, ∞)` via `x = a + u/(1-u)`.
pub fn integrate_to_inf<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> Result<f64> {
    let g = |u: f64| {
        if u >= 1.0 {
            return 0.0;
        }
        let d = 1.0 - u;
        let v = f(a + u / d) / (d * d);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(g, 0.0, 1.0, tol)
}

/// Richardson extrapolation of a sequence `a(h), a(h/2), a(h/4), …` whose
/// error expands in integer powers `h^p, h^{p+1}, …`.
pub fn richardson(values: &[f64], p: u32) -> f64 {
    let mut table = values.to_vec();
    let mut order = p;
    while table.len() > 1 {
        let f = 2f64.powi(order as i32);
        table = table.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
        order += 1;
    }
    table[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kappa_values() {
        assert_eq!(kappa(2), PI);
        assert_relative_eq!(kappa(3), 4.0 * PI / 3.0, max_relative = 1e-15);
        assert_relative_eq!(kappa(4), PI * PI / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(3, 0), 1.0);
        assert_eq!(binomial(3, 4), 0.0);
    }

    #[test]
    fn quadrature_polynomial_and_exp() {
        let v = integrate(|x| x * x, 0.0, 3.0, 1e-13).unwrap();
        assert_relative_eq!(v, 9.0, max_relative = 1e-14);
        let v = integrate_to_inf(|x| (-x).exp(), 0.0, 1e-12).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-11);
        let v = integrate(|x: f64| x.sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(v, 2.0 / 3.0, max_relative = 1e-11);
    }

    #[test]
    fn richardson_removes_linear_bias() {
        let a = |h: f64| 2.0 + 3.0 * h + 5.0 * h * h;
        let v = richardson(&[a(0.1), a(0.05), a(0.025)], 1);
        assert_relative_eq!(v, 2.0, max_relative = 1e-13);
    }
}
