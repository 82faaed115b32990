use super::{Grid, Layered, Level, Profile, QCFunction, Radial, Sampled};
use crate::error::{Error, Result};
use crate::geometry::{BodySpec, ConvexBody, ParallelBody};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelSpec {
    pub t: f64,
    pub body: BodySpec,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub offset: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// JSON form of a function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FunctionSpec {
    Layered {
        levels: Vec<LevelSpec>,
    },
    Radial {
        dim: usize,
        profile: Profile,
        #[serde(default, skip_serializing_if = "is_zero")]
        shift: f64,
        #[serde(default, skip_serializing_if = "is_false")]
        unbounded: bool,
    },
    Char {
        height: f64,
        body: BodySpec,
    },
    ExpNegSupport {
        body: BodySpec,
    },
    Sampled {
        grid: Grid,
        values: Vec<f64>,
    },
}

impl TryFrom<FunctionSpec> for QCFunction {
    type Error = Error;

    fn try_from(s: FunctionSpec) -> Result<QCFunction> {
        match s {
            FunctionSpec::Layered { levels } => {
                let levels = levels
                    .into_iter()
                    .map(|l| Ok(Level { t: l.t, body: ParallelBody::new(ConvexBody::try_from(l.body)?, l.offset)? }))
                    .collect::<Result<Vec<_>>>()?;
                Layered::new(levels).map(QCFunction::Layered)
            }
            FunctionSpec::Radial { dim, profile, shift, unbounded } => {
                let mut r = Radial::new(dim, profile)?;
                if !(shift >= 0.0 && shift.is_finite()) {
                    return Err(Error::InvalidFunction(format!("shift must be ≥ 0, got {shift}")));
                }
                r.shift = shift;
                r.unbounded = unbounded;
                Ok(QCFunction::Radial(r))
            }
            FunctionSpec::Char { height, body } => QCFunction::char_scaled(height, ConvexBody::try_from(body)?),
            FunctionSpec::ExpNegSupport { body } => QCFunction::exp_neg_support(ConvexBody::try_from(body)?),
            FunctionSpec::Sampled { grid, values } => {
                let g = Grid::new(grid.origin, grid.step, grid.shape)?;
                Sampled::new(g, values).map(QCFunction::Sampled)
            }
        }
    }
}

impl From<&QCFunction> for FunctionSpec {
    fn from(f: &QCFunction) -> FunctionSpec {
        match f {
            QCFunction::Layered(l) => FunctionSpec::Layered {
                levels: l
                    .levels()
                    .iter()
                    .map(|lv| LevelSpec { t: lv.t, body: BodySpec::from(&lv.body.base), offset: lv.body.radius })
                    .collect(),
            },
            QCFunction::Radial(r) => FunctionSpec::Radial {
                dim: r.dim,
                profile: r.profile.clone(),
                shift: r.shift,
                unbounded: r.unbounded,
            },
            QCFunction::CharScaled { height, body } => FunctionSpec::Char { height: *height, body: BodySpec::from(body) },
            QCFunction::ExpNegSupport { body } => FunctionSpec::ExpNegSupport { body: BodySpec::from(body) },
            QCFunction::Sampled(s) => FunctionSpec::Sampled { grid: s.grid.clone(), values: s.values.clone() },
        }
    }
}

impl Serialize for QCFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FunctionSpec::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for QCFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<QCFunction, D::Error> {
        let spec = FunctionSpec::deserialize(d)?;
        QCFunction::try_from(spec).map_err(serde::de::Error::custom)
    }
}
