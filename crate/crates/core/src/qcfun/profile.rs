use crate::error::{Error, Result};
use crate::numeric::{integrate, integrate_to_inf, kappa};
use serde::{Deserialize, Serialize};

fn one() -> f64 {
    1.0
}

/// A non-increasing radial profile `F : [0, ∞) → [0, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Profile {
    /// `F = F_j` on `(r_{j−1}, r_j]`, zero beyond the last radius.
    Steps { points: Vec<[f64; 2]> },
    /// `F(r) = c·e^{−a r}`.
    Exp { rate: f64, scale: f64 },
    /// `F(r) = c·e^{−r²/(2σ²)}`.
    Gauss {
        scale: f64,
        #[serde(default = "one")]
        width: f64,
    },
    /// `F(r) = c·(1 − r/R)_+^q`.
    PowerCut { scale: f64, radius: f64, power: f64 },
}

impl Profile {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidFunction(m));
        match self {
            Profile::Steps { points } => {
                if points.is_empty() {
                    return bad("step profile needs at least one step".into());
                }
                let mut prev_r = 0.0;
                let mut prev_f = f64::INFINITY;
                for p in points {
                    let [r, f] = *p;
                    if !(r > prev_r && r.is_finite()) {
                        return bad(format!("step radii must be positive and strictly increasing, got {r}"));
                    }
                    if !(f > 0.0 && f <= prev_f && f.is_finite()) {
                        return bad(format!("step values must be positive and non-increasing, got {f}"));
                    }
                    prev_r = r;
                    prev_f = f;
                }
                Ok(())
            }
            Profile::Exp { rate, scale } => {
                if !(*rate > 0.0 && *scale > 0.0 && rate.is_finite() && scale.is_finite()) {
                    return bad(format!("exp profile needs rate, scale > 0, got {rate}, {scale}"));
                }
                Ok(())
            }
            Profile::Gauss { scale, width } => {
                if !(*scale > 0.0 && *width > 0.0 && scale.is_finite() && width.is_finite()) {
                    return bad(format!("gauss profile needs scale, width > 0, got {scale}, {width}"));
                }
                Ok(())
            }
            Profile::PowerCut { scale, radius, power } => {
                if !(*scale > 0.0 && *radius > 0.0 && *power > 0.0) || !(scale.is_finite() && radius.is_finite()) {
                    return bad("power-cut profile needs scale, radius, power > 0".into());
                }
                Ok(())
            }
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        let r = r.max(0.0);
        match self {
            Profile::Steps { points } => points.iter().find(|p| r <= p[0]).map_or(0.0, |p| p[1]),
            Profile::Exp { rate, scale } => scale * (-rate * r).exp(),
            Profile::Gauss { scale, width } => scale * (-(r * r) / (2.0 * width * width)).exp(),
            Profile::PowerCut { scale, radius, power } => {
                if r >= *radius {
                    0.0
                } else {
                    scale * (1.0 - r / radius).powf(*power)
                }
            }
        }
    }

    /// `F'(r)` away from jumps; zero for step profiles.
    pub fn derivative(&self, r: f64) -> f64 {
        let r = r.max(0.0);
        match self {
            Profile::Steps { .. } => 0.0,
            Profile::Exp { rate, .. } => -rate * self.value(r),
            Profile::Gauss { width, .. } => -r / (width * width) * self.value(r),
            Profile::PowerCut { scale, radius, power } => {
                if r >= *radius {
                    0.0
                } else {
                    -scale * power / radius * (1.0 - r / radius).powf(power - 1.0)
                }
            }
        }
    }

    pub fn max(&self) -> f64 {
        self.value(0.0)
    }

    /// `sup{r : F(r) ≥ t}` for `0 < t ≤ max F`.
    pub fn radius_at(&self, t: f64) -> Option<f64> {
        if t > self.max() || t <= 0.0 {
            return None;
        }
        Some(match self {
            Profile::Steps { points } => points.iter().rev().find(|p| p[1] >= t).map(|p| p[0]).unwrap_or(0.0),
            Profile::Exp { rate, scale } => (scale / t).ln().max(0.0) / rate,
            Profile::Gauss { scale, width } => width * (2.0 * (scale / t).ln().max(0.0)).sqrt(),
            Profile::PowerCut { scale, radius, power } => radius * (1.0 - (t / scale).powf(1.0 / power)).max(0.0),
        })
    }

    /// [`radius_at`](Self::radius_at) from `ln t`, for levels below the
    /// smallest positive double.
    pub fn radius_at_ln(&self, ln_t: f64) -> Option<f64> {
        let ln_max = self.max().ln();
        if ln_t > ln_max || ln_t.is_nan() {
            return None;
        }
        match self {
            Profile::Exp { rate, .. } => Some((ln_max - ln_t) / rate),
            Profile::Gauss { width, .. } => Some(width * (2.0 * (ln_max - ln_t)).sqrt()),
            _ => {
                let t = ln_t.exp();
                if t > 0.0 {
                    self.radius_at(t)
                } else {
                    self.support_radius()
                }
            }
        }
    }

    /// `sup{r : F(r) > 0}`, `None` when the support is unbounded.
    pub fn support_radius(&self) -> Option<f64> {
        match self {
            Profile::Steps { points } => Some(points[points.len() - 1][0]),
            Profile::PowerCut { radius, .. } => Some(*radius),
            _ => None,
        }
    }

    pub fn is_log_concave(&self) -> bool {
        match self {
            Profile::Steps { points } => points.iter().all(|p| p[1] == points[0][1]),
            _ => true,
        }
    }

    /// `{F^p}`.
    pub fn power(&self, p: f64) -> Profile {
        match self {
            Profile::Steps { points } => Profile::Steps { points: points.iter().map(|q| [q[0], q[1].powf(p)]).collect() },
            Profile::Exp { rate, scale } => Profile::Exp { rate: rate * p, scale: scale.powf(p) },
            Profile::Gauss { scale, width } => Profile::Gauss { scale: scale.powf(p), width: width / p.sqrt() },
            Profile::PowerCut { scale, radius, power } => {
                Profile::PowerCut { scale: scale.powf(p), radius: *radius, power: power * p }
            }
        }
    }

    /// `r ↦ F(r/λ)`.
    pub fn dilate(&self, l: f64) -> Profile {
        match self {
            Profile::Steps { points } => Profile::Steps { points: points.iter().map(|q| [q[0] * l, q[1]]).collect() },
            Profile::Exp { rate, scale } => Profile::Exp { rate: rate / l, scale: *scale },
            Profile::Gauss { scale, width } => Profile::Gauss { scale: *scale, width: width * l },
            Profile::PowerCut { scale, radius, power } => {
                Profile::PowerCut { scale: *scale, radius: radius * l, power: *power }
            }
        }
    }

    /// `c·F`.
    pub fn scale_values(&self, c: f64) -> Profile {
        match self {
            Profile::Steps { points } => Profile::Steps { points: points.iter().map(|q| [q[0], q[1] * c]).collect() },
            Profile::Exp { rate, scale } => Profile::Exp { rate: *rate, scale: scale * c },
            Profile::Gauss { scale, width } => Profile::Gauss { scale: scale * c, width: *width },
            Profile::PowerCut { scale, radius, power } => {
                Profile::PowerCut { scale: scale * c, radius: *radius, power: *power }
            }
        }
    }

    /// `∫_0^{max F} (R(t) + ρ)^m dt`, the layer-cake moment of the shifted
    /// profile; exact for steps, adaptive quadrature otherwise.
    pub fn moment(&self, m: usize, shift: f64, tol: f64) -> Result<f64> {
        let mi = m as i32;
        match self {
            Profile::Steps { points } => {
                let mut total = 0.0;
                for (j, p) in points.iter().enumerate() {
                    let next = points.get(j + 1).map_or(0.0, |q| q[1]);
                    total += (p[1] - next) * (p[0] + shift).powi(mi);
                }
                Ok(total)
            }
            _ => {
                let base = shift.powi(mi) * self.max();
                if m == 0 {
                    return Ok(self.max());
                }
                let g = |r: f64| m as f64 * (r + shift).powi(mi - 1) * self.value(r);
                let tail = match self.support_radius() {
                    Some(r) => integrate(g, 0.0, r, tol)?,
                    None => integrate_to_inf(g, 0.0, tol)?,
                };
                Ok(base + tail)
            }
        }
    }

    /// `∫_{R^n} φ(f) dx` for `f(x) = F((|x| − ρ)_+)`, with `φ(0) = 0`.
    pub fn radial_integral<P: Fn(f64) -> f64>(&self, n: usize, shift: f64, phi: P, tol: f64) -> Result<f64> {
        let kn = kappa(n);
        let ni = n as i32;
        match self {
            Profile::Steps { points } => {
                let mut total = 0.0;
                let mut inner = 0.0f64;
                for p in points {
                    let outer = (p[0] + shift).powi(ni);
                    total += kn * (outer - inner) * phi(p[1]);
                    inner = outer;
                }
                Ok(total)
            }
            _ => {
                let core = kn * shift.powi(ni) * phi(self.max());
                let g = |r: f64| {
                    let v = self.value(r);
                    if v <= 0.0 {
                        0.0
                    } else {
                        n as f64 * kn * (r + shift).powi(ni - 1) * phi(v)
                    }
                };
                let tail = match self.support_radius() {
                    Some(r) => integrate(g, 0.0, r, tol)?,
                    None => integrate_to_inf(g, 0.0, tol)?,
                };
                Ok(core + tail)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn exp_moments_match_gamma_function() {
        let p = Profile::Exp { rate: 2.0, scale: 3.0 };
        for m in 0..4 {
            let fact: f64 = (1..=m).map(|k| k as f64).product();
            let exact = 3.0 * fact / 2f64.powi(m as i32);
            let v = p.moment(m, 0.0, 1e-12).unwrap();
            assert!((v - exact).abs() < 1e-10 * exact, "m={m}: {v} vs {exact}");
        }
    }

    #[test]
    fn step_moment_is_jump_sum() {
        let p = Profile::Steps { points: vec![[1.0, 3.0], [2.0, 1.0]] };
        assert_eq!(p.moment(2, 0.0, 1e-12).unwrap(), 2.0 * 1.0 + 1.0 * 4.0);
        assert_eq!(p.value(1.0), 3.0);
        assert_eq!(p.value(1.5), 1.0);
        assert_eq!(p.value(2.5), 0.0);
        assert_eq!(p.radius_at(2.0), Some(1.0));
    }

    #[test]
    fn gauss_integral_and_inverse() {
        let p = Profile::Gauss { scale: 1.0, width: 1.0 };
        let v = p.radial_integral(2, 0.0, |u| u, 1e-12).unwrap();
        assert!((v - 2.0 * PI).abs() < 1e-10);
        let r = p.radius_at(0.5).unwrap();
        assert!((p.value(r) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn shifted_moment_matches_direct_layer_cake() {
        let p = Profile::Exp { rate: 1.0, scale: 1.0 };
        let direct = integrate(|t: f64| (p.radius_at(t).unwrap() + 0.7).powi(2), 1e-300, 1.0, 1e-12).unwrap();
        let v = p.moment(2, 0.7, 1e-12).unwrap();
        assert!((v - direct).abs() < 1e-9);
    }
}
