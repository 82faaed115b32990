//! Weighted power means `M_α^{(s,t)}` on `[0, +∞]` and the exponent maps of
//! the Prékopa–Leindler family.

use crate::error::{Error, Result};
use crate::ext::{Alpha, Ext};
use crate::report::{Params, Report, Route};
use serde::{Deserialize, Serialize};

const ALPHA_EQ_TOL: f64 = 1e-12;

/// Positive weights `(s, t)`; `λ`-weights are `(1 − λ, λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub s: f64,
    pub t: f64,
}

impl Weights {
    pub fn new(s: f64, t: f64) -> Result<Weights> {
        if !(s > 0.0 && t > 0.0 && s.is_finite() && t.is_finite()) {
            return Err(Error::Range(format!("weights must be positive, got s={s}, t={t}")));
        }
        Ok(Weights { s, t })
    }

    pub fn lambda(lambda: f64) -> Result<Weights> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::Range(format!("λ must lie in (0,1), got {lambda}")));
        }
        Ok(Weights { s: 1.0 - lambda, t: lambda })
    }

    pub fn is_normalized(&self) -> bool {
        (self.s + self.t - 1.0).abs() < 1e-12
    }

    pub fn total(&self) -> f64 {
        self.s + self.t
    }

    pub fn label(&self) -> String {
        if self.is_normalized() {
            format!("{}", self.t)
        } else {
            format!("{}:{}", self.s, self.t)
        }
    }
}

fn same_alpha(a: Alpha, b: Alpha) -> bool {
    a.approx_eq(b, ALPHA_EQ_TOL)
}

/// The α-mean of `u, v ∈ [0, +∞]` with the extended-real conventions:
/// geometric mean at `α = 0`, min/max at `α = ∓∞`, zero whenever `uv = 0`
/// and `α ≤ 0`, and `+∞` whenever an argument is infinite and `α > 0`.
pub fn m_alpha(alpha: Alpha, w: Weights, u: Ext, v: Ext) -> Ext {
    debug_assert!(u >= Ext::ZERO && v >= Ext::ZERO, "α-means take nonnegative arguments");
    let (s, t) = (w.s, w.t);
    match alpha {
        Ext::NegInf => u.min(v),
        Ext::PosInf => u.max(v),
        Ext::Finite(a) if a == 0.0 => {
            if u.is_zero() || v.is_zero() {
                Ext::ZERO
            } else if !u.is_finite() || !v.is_finite() {
                Ext::PosInf
            } else {
                let (x, y) = (u.to_f64(), v.to_f64());
                Ext::Finite((s * x.ln() + t * y.ln()).exp())
            }
        }
        Ext::Finite(a) if a < 0.0 => {
            if u.is_zero() || v.is_zero() {
                return Ext::ZERO;
            }
            match (u, v) {
                (Ext::PosInf, Ext::PosInf) => Ext::PosInf,
                (Ext::PosInf, Ext::Finite(y)) => Ext::Finite(t.powf(1.0 / a) * y),
                (Ext::Finite(x), Ext::PosInf) => Ext::Finite(s.powf(1.0 / a) * x),
                (Ext::Finite(x), Ext::Finite(y)) => {
                    // factor out the smaller argument so that the powers stay ≤ 1
                    let m = x.min(y);
                    let core = s * (x / m).powf(a) + t * (y / m).powf(a);
                    Ext::Finite(m * core.powf(1.0 / a))
                }
                _ => unreachable!("nonnegative arguments"),
            }
        }
        Ext::Finite(a) => {
            if !u.is_finite() || !v.is_finite() {
                return Ext::PosInf;
            }
            let (x, y) = (u.to_f64(), v.to_f64());
            let m = x.max(y);
            if m == 0.0 {
                return Ext::ZERO;
            }
            let core = s * (x / m).powf(a) + t * (y / m).powf(a);
            Ext::from_f64(m * core.powf(1.0 / a))
        }
    }
}

/// Convenience wrapper on finite arguments.
pub fn m_alpha_f(alpha: Alpha, w: Weights, u: f64, v: f64) -> f64 {
    m_alpha(alpha, w, Ext::from_f64(u), Ext::from_f64(v)).to_f64()
}

/// `β = αγ/(α+γ)` for `γ ∈ [−∞, 1]`, `α ∈ [−γ, +∞]`.
pub fn beta_pl(alpha: Alpha, gamma: Alpha) -> Result<Alpha> {
    if gamma > Ext::Finite(1.0) {
        return Err(Error::Range(format!("γ must be ≤ 1, got {gamma}")));
    }
    let neg_gamma = match gamma {
        Ext::NegInf => Ext::PosInf,
        Ext::PosInf => Ext::NegInf,
        Ext::Finite(g) => Ext::Finite(-g),
    };
    if alpha < neg_gamma && !same_alpha(alpha, neg_gamma) {
        return Err(Error::Range(format!("α must lie in [−γ, +∞] = [{neg_gamma}, inf], got {alpha}")));
    }
    Ok(match (alpha, gamma) {
        (_, Ext::NegInf) => Ext::NegInf,
        (_, g) if g.is_zero() => Ext::ZERO,
        (Ext::PosInf, g) => g,
        (a, _) if same_alpha(a, neg_gamma) => Ext::NegInf,
        (Ext::Finite(a), Ext::Finite(g)) => Ext::Finite(a * g / (a + g)),
        _ => unreachable!("range checked above"),
    })
}

/// `β = α/(1+αρ)` for `α ∈ [−1/ρ, +∞]`, with `β(−1/ρ) = −∞`, `β(+∞) = 1/ρ`.
pub fn beta_hyp(alpha: Alpha, rho: f64) -> Result<Alpha> {
    if rho == 0.0 || !rho.is_finite() {
        return Err(Error::Range(format!("homogeneity order must be finite and nonzero, got {rho}")));
    }
    let lower = Ext::Finite(-1.0 / rho);
    if alpha < lower && !same_alpha(alpha, lower) {
        return Err(Error::Range(format!("α must lie in [{lower}, inf], got {alpha}")));
    }
    Ok(match alpha {
        Ext::PosInf => Ext::Finite(1.0 / rho),
        a if same_alpha(a, lower) => Ext::NegInf,
        Ext::Finite(a) => Ext::Finite(a / (1.0 + a * rho)),
        Ext::NegInf => unreachable!("range checked above"),
    })
}

/// `β = α/(1+αn)`, the Brascamp–Lieb exponent.
pub fn beta_bl(alpha: Alpha, n: usize) -> Result<Alpha> {
    if n == 0 {
        return Err(Error::Range("dimension must be positive".into()));
    }
    beta_hyp(alpha, n as f64)
}

/// Which of the admissible exponent regimes a Hölder triple falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HolderRegime {
    Conjugate,
    ZeroLeft,
    ZeroRight,
    MinLimit,
}

/// Classifies `(α0, α1, α2)` into an admissible regime, if any.
pub fn holder_regime(a0: Alpha, a1: Alpha, a2: Alpha) -> Option<HolderRegime> {
    let nonneg = |a: Alpha| a >= Ext::ZERO;
    if a0 == Ext::NegInf {
        let sum_ok = match (a1, a2) {
            (Ext::NegInf, Ext::PosInf) | (Ext::PosInf, Ext::NegInf) => true,
            _ => a1.add(a2) >= Ext::ZERO,
        };
        if sum_ok {
            return Some(HolderRegime::MinLimit);
        }
    }
    if a0.is_zero() && a1.is_zero() && nonneg(a2) {
        return Some(HolderRegime::ZeroLeft);
    }
    if a0.is_zero() && a2.is_zero() && nonneg(a1) {
        return Some(HolderRegime::ZeroRight);
    }
    let positive_sum = match (a1, a2) {
        (Ext::PosInf, Ext::NegInf) | (Ext::NegInf, Ext::PosInf) => false,
        _ => a1.add(a2) > Ext::ZERO,
    };
    if positive_sum {
        if let (Some(r1), Some(r2), Some(r0)) = (a1.recip(), a2.recip(), a0.recip()) {
            if r0.approx_eq(r1.add(r2), 1e-12) {
                return Some(HolderRegime::Conjugate);
            }
        }
    }
    None
}

/// Checks `M_{α1}(u1,v1)·M_{α2}(u2,v2) ≥ M_{α0}(u1u2, v1v2)` for `λ`-weights.
#[allow(clippy::too_many_arguments)]
pub fn holder_product_check(
    a0: Alpha,
    a1: Alpha,
    a2: Alpha,
    w: Weights,
    u1: f64,
    u2: f64,
    v1: f64,
    v2: f64,
) -> Result<Report> {
    let regime = holder_regime(a0, a1, a2)
        .ok_or_else(|| Error::Range(format!("inadmissible exponent triple ({a0}, {a1}, {a2})")))?;
    if !w.is_normalized() {
        return Err(Error::Range("the product inequality needs λ-weights (s + t = 1)".into()));
    }
    if [u1, u2, v1, v2].iter().any(|x| !(*x >= 0.0)) {
        return Err(Error::Range("arguments must be nonnegative".into()));
    }
    let m1 = m_alpha_f(a1, w, u1, v1);
    let m2 = m_alpha_f(a2, w, u2, v2);
    let lhs = if m1 == 0.0 || m2 == 0.0 { 0.0 } else { m1 * m2 };
    let rhs = m_alpha_f(a0, w, u1 * u2, v1 * v2);
    let scale = lhs.abs().max(rhs.abs()).max(1.0);
    let params = Params { alpha: Some(a0), weights: Some(w.label()), ..Params::default() };
    Ok(Report::inequality("holder-product", params, Ext::from_f64(lhs), Ext::from_f64(rhs), 1e-12 * scale, Route::Exact)
        .with_note(format!("regime {regime:?}; α1={a1}, α2={a2}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn half() -> Weights {
        Weights::lambda(0.5).unwrap()
    }

    #[test]
    fn geometric_mean() {
        assert_relative_eq!(m_alpha_f(Ext::ZERO, half(), 4.0, 9.0), 6.0, max_relative = 1e-15);
    }

    #[test]
    fn extreme_conventions() {
        let w = Weights::new(0.3, 2.0).unwrap();
        assert_eq!(m_alpha_f(Ext::NegInf, w, 3.0, 5.0), 3.0);
        assert_eq!(m_alpha_f(Ext::PosInf, w, 3.0, 5.0), 5.0);
        assert_eq!(m_alpha_f(Ext::Finite(-1.0), half(), 2.0, 0.0), 0.0);
        assert_eq!(m_alpha(Ext::Finite(0.5), half(), Ext::PosInf, Ext::ZERO), Ext::PosInf);
        assert_eq!(m_alpha(Ext::Finite(-0.5), half(), Ext::PosInf, Ext::ZERO), Ext::ZERO);
        assert_eq!(m_alpha(Ext::ZERO, half(), Ext::PosInf, Ext::ZERO), Ext::ZERO);
        assert_eq!(m_alpha(Ext::NegInf, half(), Ext::PosInf, Ext::ZERO), Ext::ZERO);
        assert_eq!(m_alpha(Ext::ZERO, half(), Ext::PosInf, Ext::Finite(2.0)), Ext::PosInf);
    }

    #[test]
    fn negative_alpha_with_infinite_argument_is_monotone_limit() {
        let w = half();
        let big = m_alpha_f(Ext::Finite(-1.0), w, 1e15, 2.0);
        let inf = m_alpha(Ext::Finite(-1.0), w, Ext::PosInf, Ext::Finite(2.0)).to_f64();
        assert_relative_eq!(big, inf, max_relative = 1e-12);
    }

    #[test]
    fn homogeneity_of_unnormalized_mean() {
        let w = Weights::new(1.0, 1.0).unwrap();
        assert_relative_eq!(m_alpha_f(Ext::Finite(0.5), w, 3.0, 3.0), 3.0 * 2f64.powf(2.0), max_relative = 1e-14);
    }

    #[test]
    fn beta_maps() {
        assert_relative_eq!(beta_pl(Ext::Finite(1.0), Ext::Finite(0.5)).unwrap().to_f64(), 1.0 / 3.0);
        assert_eq!(beta_pl(Ext::PosInf, Ext::Finite(0.25)).unwrap(), Ext::Finite(0.25));
        assert_eq!(beta_pl(Ext::Finite(-0.5), Ext::Finite(0.5)).unwrap(), Ext::NegInf);
        assert_eq!(beta_pl(Ext::PosInf, Ext::NegInf).unwrap(), Ext::NegInf);
        assert_eq!(beta_pl(Ext::ZERO, Ext::ZERO).unwrap(), Ext::ZERO);
        assert!(beta_pl(Ext::Finite(-1.0), Ext::Finite(0.5)).is_err());
        assert!(beta_pl(Ext::Finite(1.0), Ext::Finite(2.0)).is_err());
        assert_eq!(beta_bl(Ext::ZERO, 3).unwrap(), Ext::ZERO);
        assert_relative_eq!(beta_bl(Ext::PosInf, 3).unwrap().to_f64(), 1.0 / 3.0);
        assert_eq!(beta_bl(Ext::Finite(-1.0 / 3.0), 3).unwrap(), Ext::NegInf);
        assert_relative_eq!(beta_hyp(Ext::Finite(1.0), 2.0).unwrap().to_f64(), 1.0 / 3.0);
    }

    #[test]
    fn holder_regimes() {
        let w = half();
        let r = holder_product_check(Ext::Finite(1.0), Ext::Finite(2.0), Ext::Finite(2.0), w, 1.0, 1.0, 1.0, 1.0)
            .unwrap();
        assert!(r.satisfied());
        assert!(r.margin.approx_eq(Ext::ZERO, 1e-14));
        let r = holder_product_check(Ext::NegInf, Ext::PosInf, Ext::NegInf, w, 1.0, 3.0, 2.0, 0.5).unwrap();
        assert!(r.satisfied());
        assert!(holder_product_check(Ext::Finite(1.0), Ext::Finite(1.0), Ext::Finite(1.0), w, 1.0, 1.0, 1.0, 1.0)
            .is_err());
    }
}
