//! Quasi-concave functions: representations, level sets and the
//! sup-convolution algebra.

mod layered;
mod ops;
mod profile;
mod sampled;
mod schema;

pub use layered::{Layered, Level};
pub use ops::{lattice_max, lattice_min, mu_envelope, project_fn, supconv};
pub use profile::Profile;
pub use sampled::{Grid, Sampled};
pub use schema::FunctionSpec;

use crate::error::{Error, Result};
use crate::ext::Ext;
use crate::geometry::{ConvexBody, ParallelBody};
use serde::{Deserialize, Serialize};

/// A radially symmetric function `f(x) = F((|x| − ρ)_+)` about the origin;
/// `ρ` is the rounding shift.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Radial {
    pub dim: usize,
    pub profile: Profile,
    #[serde(default)]
    pub shift: f64,
    /// The true maximum is `+∞`; the profile carries a finite cap.
    #[serde(default)]
    pub unbounded: bool,
}

impl Radial {
    pub fn new(dim: usize, profile: Profile) -> Result<Radial> {
        if dim == 0 {
            return Err(Error::InvalidFunction("dimension must be positive".into()));
        }
        profile.validate()?;
        Ok(Radial { dim, profile, shift: 0.0, unbounded: false })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        self.profile.value((r - self.shift).max(0.0))
    }

    /// Radius of `{f ≥ t}`.
    pub fn level_radius(&self, t: f64) -> Option<f64> {
        self.profile.radius_at(t).map(|r| r + self.shift)
    }

    /// Radius of `{f ≥ e^{ln_t}}`.
    pub fn level_radius_ln(&self, ln_t: f64) -> Option<f64> {
        self.profile.radius_at_ln(ln_t).map(|r| r + self.shift)
    }
}

/// A function of the class of upper semicontinuous quasi-concave functions
/// vanishing at infinity.
#[derive(Debug, Clone, PartialEq)]
pub enum QCFunction {
    Layered(Layered),
    Radial(Radial),
    /// `c·χ_K`.
    CharScaled { height: f64, body: ConvexBody },
    /// `e^{−h_K}`.
    ExpNegSupport { body: ConvexBody },
    Sampled(Sampled),
}

impl QCFunction {
    pub fn char_scaled(height: f64, body: ConvexBody) -> Result<QCFunction> {
        if !(height > 0.0 && height.is_finite()) {
            return Err(Error::InvalidFunction(format!("height must be positive, got {height}")));
        }
        Ok(QCFunction::CharScaled { height, body })
    }

    pub fn indicator(body: ConvexBody) -> QCFunction {
        QCFunction::CharScaled { height: 1.0, body }
    }

    pub fn exp_neg_support(body: ConvexBody) -> Result<QCFunction> {
        if !body.origin_interior() {
            return Err(Error::InvalidFunction("e^{-h_K} needs the origin in the interior of K".into()));
        }
        Ok(QCFunction::ExpNegSupport { body })
    }

    pub fn radial(dim: usize, profile: Profile) -> Result<QCFunction> {
        Radial::new(dim, profile).map(QCFunction::Radial)
    }

    pub fn layered(pairs: Vec<(f64, ConvexBody)>) -> Result<QCFunction> {
        Layered::from_bodies(pairs).map(QCFunction::Layered)
    }

    pub fn dim(&self) -> usize {
        match self {
            QCFunction::Layered(l) => l.dim(),
            QCFunction::Radial(r) => r.dim,
            QCFunction::CharScaled { body, .. } | QCFunction::ExpNegSupport { body } => body.dim(),
            QCFunction::Sampled(s) => s.dim(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            QCFunction::Layered(l) => l.eval(x),
            QCFunction::Radial(r) => r.eval(x),
            QCFunction::CharScaled { height, body } => {
                if body.contains(x, 0.0) {
                    *height
                } else {
                    0.0
                }
            }
            QCFunction::ExpNegSupport { body } => (-body.support(x)).exp(),
            QCFunction::Sampled(s) => s.to_layered().eval(x),
        }
    }

    /// `max f`, symbolically infinite for flagged unbounded profiles.
    pub fn max_value(&self) -> Ext {
        match self {
            QCFunction::Layered(l) => Ext::Finite(l.max_value()),
            QCFunction::Radial(r) if r.unbounded => Ext::PosInf,
            QCFunction::Radial(r) => Ext::Finite(r.profile.max()),
            QCFunction::CharScaled { height, .. } => Ext::Finite(*height),
            QCFunction::ExpNegSupport { .. } => Ext::Finite(1.0),
            QCFunction::Sampled(s) => Ext::Finite(s.max_value()),
        }
    }

    /// `{f ≥ t}` for `t > 0`; `None` when empty.
    pub fn superlevel(&self, t: f64) -> Option<ParallelBody> {
        if t <= 0.0 {
            return None;
        }
        let plain = |k: ConvexBody| Some(ParallelBody { base: k, radius: 0.0 });
        match self {
            QCFunction::Layered(l) => l.superlevel(t).cloned(),
            QCFunction::Radial(r) => {
                r.level_radius(t).and_then(|rad| plain(ConvexBody::centered_ball(r.dim, rad)))
            }
            QCFunction::CharScaled { height, body } => (t <= *height).then(|| body.clone()).and_then(plain),
            QCFunction::ExpNegSupport { body } => {
                if t > 1.0 {
                    return None;
                }
                let polar = body.polar().ok()?;
                plain(polar.scale(-t.ln()))
            }
            QCFunction::Sampled(s) => s.superlevel(t).and_then(plain),
        }
    }

    /// Closure of `{f > 0}`; `None` when unbounded.
    pub fn support_body(&self) -> Option<ParallelBody> {
        match self {
            QCFunction::Layered(l) => Some(l.levels()[0].body.clone()),
            QCFunction::Radial(r) => r
                .profile
                .support_radius()
                .map(|rad| ParallelBody { base: ConvexBody::centered_ball(r.dim, rad + r.shift), radius: 0.0 }),
            QCFunction::CharScaled { body, .. } => Some(ParallelBody { base: body.clone(), radius: 0.0 }),
            QCFunction::ExpNegSupport { .. } => None,
            QCFunction::Sampled(s) => Some(s.to_layered().levels()[0].body.clone()),
        }
    }

    /// Layered form of piecewise-constant representations.
    pub fn as_layered(&self) -> Option<Layered> {
        match self {
            QCFunction::Layered(l) => Some(l.clone()),
            QCFunction::CharScaled { height, body } => Some(Layered::new_unchecked(vec![Level {
                t: *height,
                body: ParallelBody { base: body.clone(), radius: 0.0 },
            }])),
            QCFunction::Sampled(s) => Some(s.to_layered()),
            QCFunction::Radial(r) => match &r.profile {
                Profile::Steps { points } if !r.unbounded => {
                    let levels = points
                        .iter()
                        .rev()
                        .map(|p| Level {
                            t: p[1],
                            body: ParallelBody { base: ConvexBody::centered_ball(r.dim, p[0]), radius: r.shift },
                        })
                        .collect::<Vec<_>>();
                    // merge equal values, keeping the outermost body
                    let mut merged: Vec<Level> = Vec::new();
                    for l in levels {
                        match merged.last_mut() {
                            Some(last) if last.t == l.t => *last = l,
                            _ => merged.push(l),
                        }
                    }
                    Some(Layered::new_unchecked(merged))
                }
                _ => None,
            },
            QCFunction::ExpNegSupport { .. } => None,
        }
    }

    /// `f_ρ(x) = sup_{|y − x| ≤ ρ} f(y)`, whose level sets are `{f ≥ t} + ρB`.
    pub fn round(&self, rho: f64) -> Result<QCFunction> {
        if !(rho >= 0.0 && rho.is_finite()) {
            return Err(Error::Range(format!("rounding radius must be finite and ≥ 0, got {rho}")));
        }
        match self {
            QCFunction::Radial(r) => {
                let mut out = r.clone();
                out.shift += rho;
                Ok(QCFunction::Radial(out))
            }
            QCFunction::ExpNegSupport { .. } => {
                Err(Error::Unsupported("rounding of e^{-h_K} has no exact representation".into()))
            }
            other => {
                let l = other.as_layered().expect("piecewise-constant variant");
                Ok(QCFunction::Layered(l.map_levels(|lv| Level {
                    t: lv.t,
                    body: ParallelBody { base: lv.body.base.clone(), radius: lv.body.radius + rho },
                })))
            }
        }
    }

    /// `f^p` for `p > 0`.
    pub fn power(&self, p: f64) -> Result<QCFunction> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::Range(format!("power must be positive, got {p}")));
        }
        Ok(match self {
            QCFunction::Layered(l) => {
                QCFunction::Layered(l.map_levels(|lv| Level { t: lv.t.powf(p), body: lv.body.clone() }))
            }
            QCFunction::Radial(r) => {
                let mut out = r.clone();
                out.profile = r.profile.power(p);
                QCFunction::Radial(out)
            }
            QCFunction::CharScaled { height, body } => {
                QCFunction::CharScaled { height: height.powf(p), body: body.clone() }
            }
            QCFunction::ExpNegSupport { body } => QCFunction::ExpNegSupport { body: body.scale(p) },
            QCFunction::Sampled(s) => QCFunction::Sampled(Sampled {
                grid: s.grid.clone(),
                values: s.values.iter().map(|v| v.powf(p)).collect(),
            }),
        })
    }

    /// `c·f`.
    pub fn scale_values(&self, c: f64) -> Result<QCFunction> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Range(format!("scaling factor must be positive, got {c}")));
        }
        Ok(match self {
            QCFunction::Layered(l) => QCFunction::Layered(l.map_levels(|lv| Level { t: lv.t * c, body: lv.body.clone() })),
            QCFunction::Radial(r) => {
                let mut out = r.clone();
                out.profile = r.profile.scale_values(c);
                QCFunction::Radial(out)
            }
            QCFunction::CharScaled { height, body } => QCFunction::CharScaled { height: height * c, body: body.clone() },
            QCFunction::Sampled(s) => QCFunction::Sampled(Sampled {
                grid: s.grid.clone(),
                values: s.values.iter().map(|v| v * c).collect(),
            }),
            QCFunction::ExpNegSupport { .. } => {
                return Err(Error::Unsupported("c·e^{-h_K} is not an e^{-h_K} function".into()))
            }
        })
    }

    /// `f_λ(x) = f(x/λ)` for `λ > 0`.
    pub fn dilate(&self, l: f64) -> Result<QCFunction> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::Range(format!("dilation factor must be positive, got {l}")));
        }
        Ok(match self {
            QCFunction::Layered(f) => QCFunction::Layered(f.map_levels(|lv| Level { t: lv.t, body: lv.body.scale(l) })),
            QCFunction::Radial(r) => {
                let mut out = r.clone();
                out.profile = r.profile.dilate(l);
                out.shift *= l;
                QCFunction::Radial(out)
            }
            QCFunction::CharScaled { height, body } => QCFunction::CharScaled { height: *height, body: body.scale(l) },
            QCFunction::ExpNegSupport { body } => QCFunction::ExpNegSupport { body: body.scale(1.0 / l) },
            QCFunction::Sampled(s) => QCFunction::Sampled(Sampled {
                grid: Grid {
                    origin: s.grid.origin.iter().map(|o| o * l).collect(),
                    step: s.grid.step * l,
                    shape: s.grid.shape.clone(),
                },
                values: s.values.clone(),
            }),
        })
    }

    /// Mean-width rearrangement: each level body becomes the centred ball
    /// with the same `W_{n−1}`.
    pub fn rearrange(&self) -> Result<QCFunction> {
        let n = self.dim();
        let ball = |pb: &ParallelBody| {
            let w = pb.quermass().values[n - 1];
            ParallelBody { base: ConvexBody::centered_ball(n, w / crate::numeric::kappa(n)), radius: 0.0 }
        };
        match self {
            QCFunction::Radial(_) => Ok(self.clone()),
            QCFunction::CharScaled { height, body } => Ok(QCFunction::CharScaled {
                height: *height,
                body: ball(&ParallelBody { base: body.clone(), radius: 0.0 }).base,
            }),
            QCFunction::Layered(_) | QCFunction::Sampled(_) => {
                let l = self.as_layered().expect("piecewise constant");
                Ok(QCFunction::Layered(l.map_levels(|lv| Level { t: lv.t, body: ball(&lv.body) })))
            }
            QCFunction::ExpNegSupport { .. } => {
                Err(Error::Unsupported("rearrangement is implemented for layered and radial functions".into()))
            }
        }
    }

    /// `true` for log-concave representations.
    pub fn is_log_concave(&self) -> bool {
        match self {
            QCFunction::Layered(l) => l.levels().len() == 1,
            QCFunction::Radial(r) => r.profile.is_log_concave(),
            QCFunction::CharScaled { .. } | QCFunction::ExpNegSupport { .. } => true,
            QCFunction::Sampled(s) => {
                let l = s.to_layered();
                l.levels().len() == 1
            }
        }
    }
}
