use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, ParallelBody};

/// One level `{f ≥ t} = K + ρB` of a layered function.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub t: f64,
    pub body: ParallelBody,
}

/// A piecewise-constant quasi-concave function
/// `f(x) = max{t_k : x ∈ K_k}` with nested level bodies `K_1 ⊇ … ⊇ K_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layered {
    dim: usize,
    levels: Vec<Level>,
}

fn nesting_tol(a: &ParallelBody, b: &ParallelBody) -> f64 {
    1e-9 * (1.0 + a.max_norm().max(b.max_norm()))
}

impl Layered {
    /// Validates values (positive, strictly increasing) and nesting.
    pub fn new(levels: Vec<Level>) -> Result<Layered> {
        if levels.is_empty() {
            return Err(Error::InvalidFunction("layered function needs at least one level".into()));
        }
        let dim = levels[0].body.dim();
        let mut prev = 0.0;
        for (k, l) in levels.iter().enumerate() {
            if l.body.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: l.body.dim() });
            }
            if !(l.t > prev && l.t.is_finite()) {
                return Err(Error::InvalidFunction(format!(
                    "level values must be positive and strictly increasing (level {k}: {})",
                    l.t
                )));
            }
            prev = l.t;
        }
        for k in 1..levels.len() {
            let (outer, inner) = (&levels[k - 1].body, &levels[k].body);
            if !inner.is_subset_of(outer, nesting_tol(outer, inner)) {
                return Err(Error::InvalidFunction(format!("level {k} body is not contained in level {}", k - 1)));
            }
        }
        Ok(Layered { dim, levels })
    }

    /// Layered function from plain bodies.
    pub fn from_bodies(pairs: Vec<(f64, ConvexBody)>) -> Result<Layered> {
        let levels = pairs
            .into_iter()
            .map(|(t, body)| Ok(Level { t, body: ParallelBody::new(body, 0.0)? }))
            .collect::<Result<Vec<_>>>()?;
        Layered::new(levels)
    }

    /// Trusted constructor for outputs of exact operations.
    pub(crate) fn new_unchecked(levels: Vec<Level>) -> Layered {
        let dim = levels[0].body.dim();
        Layered { dim, levels }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn max_value(&self) -> f64 {
        self.levels[self.levels.len() - 1].t
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        // nested bodies: membership is monotone in the level index
        let (mut lo, mut hi) = (0usize, self.levels.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.levels[mid].body.contains(x, 0.0) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo == 0 {
            0.0
        } else {
            self.levels[lo - 1].t
        }
    }

    /// `sup_{|y − x| ≤ ρ} f(y) = max{t_k : dist(x, K_k) ≤ ρ}`.
    pub fn ball_sup(&self, x: &[f64], rho: f64) -> f64 {
        let (mut lo, mut hi) = (0usize, self.levels.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.levels[mid].body.distance(x) <= rho {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo == 0 {
            0.0
        } else {
            self.levels[lo - 1].t
        }
    }

    /// Level body for `{f ≥ t}`, `None` above the maximum.
    pub fn superlevel(&self, t: f64) -> Option<&ParallelBody> {
        if t <= 0.0 {
            return None;
        }
        self.levels.iter().find(|l| l.t >= t).map(|l| &l.body)
    }

    /// Common level offset, when all levels share one.
    pub fn common_offset(&self) -> Option<f64> {
        let r = self.levels[0].body.radius;
        self.levels.iter().all(|l| (l.body.radius - r).abs() <= 1e-15 * (1.0 + r)).then_some(r)
    }

    pub fn map_levels<F: Fn(&Level) -> Level>(&self, f: F) -> Layered {
        Layered { dim: self.dim, levels: self.levels.iter().map(f).collect() }
    }
}
