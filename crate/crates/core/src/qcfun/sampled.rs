use super::layered::{Layered, Level};
use crate::error::{Error, Result};
use crate::ext::Alpha;
use crate::geometry::{convex_hull, ConvexBody, Interval, ParallelBody, Polygon, P2};
use crate::means::{m_alpha_f, Weights};
use serde::{Deserialize, Serialize};

/// A regular grid `origin + step·idx` in dimension 1 or 2 (x fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub origin: Vec<f64>,
    pub step: f64,
    pub shape: Vec<usize>,
}

impl Grid {
    pub fn new(origin: Vec<f64>, step: f64, shape: Vec<usize>) -> Result<Grid> {
        if origin.len() != shape.len() || !(1..=2).contains(&origin.len()) {
            return Err(Error::InvalidFunction("grids are one- or two-dimensional".into()));
        }
        if !(step > 0.0 && step.is_finite()) || shape.iter().any(|&s| s == 0) {
            return Err(Error::InvalidFunction("grid step must be positive and every axis non-empty".into()));
        }
        Ok(Grid { origin, step, shape })
    }

    /// Square grid covering `[-half, half]^n` with `2m + 1` nodes per axis.
    pub fn centered(n: usize, half: f64, m: usize) -> Grid {
        Grid { origin: vec![-half; n], step: half / m as f64, shape: vec![2 * m + 1; n] }
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, k: usize) -> (usize, usize) {
        if self.dim() == 1 {
            (k, 0)
        } else {
            (k % self.shape[0], k / self.shape[0])
        }
    }

    pub fn point(&self, k: usize) -> Vec<f64> {
        let (i, j) = self.index(k);
        if self.dim() == 1 {
            vec![self.origin[0] + self.step * i as f64]
        } else {
            vec![self.origin[0] + self.step * i as f64, self.origin[1] + self.step * j as f64]
        }
    }
}

/// Grid samples of a quasi-concave function. Level sets are read as the
/// convex hulls of the nodes at or above each value.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampled {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl Sampled {
    /// Validating constructor: the superlevel node sets must be convex.
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Sampled> {
        let s = Sampled::new_unchecked(grid, values)?;
        if let Some(v) = s.nonconvex_level() {
            return Err(Error::InvalidFunction(format!("superlevel set at value {v} is not convex on the grid")));
        }
        Ok(s)
    }

    pub fn new_unchecked(grid: Grid, values: Vec<f64>) -> Result<Sampled> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: values.len() });
        }
        if values.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(Error::InvalidFunction("sampled values must be finite and nonnegative".into()));
        }
        if values.iter().all(|v| *v == 0.0) {
            return Err(Error::InvalidFunction("sampled function vanishes identically".into()));
        }
        Ok(Sampled { grid, values })
    }

    pub fn from_fn<F: Fn(&[f64]) -> f64>(grid: Grid, f: F) -> Result<Sampled> {
        let values = (0..grid.len()).map(|k| f(&grid.point(k))).collect();
        Sampled::new_unchecked(grid, values)
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Distinct positive values (descending) with node hulls in grid units.
    fn level_hulls(&self) -> Vec<(f64, Vec<P2>, usize)> {
        let mut order: Vec<usize> = (0..self.values.len()).filter(|&k| self.values[k] > 0.0).collect();
        order.sort_by(|a, b| self.values[*b].total_cmp(&self.values[*a]));
        let mut out = Vec::new();
        let mut hull: Vec<P2> = Vec::new();
        let mut idx = 0;
        while idx < order.len() {
            let v = self.values[order[idx]];
            let mut pts = hull.clone();
            while idx < order.len() && self.values[order[idx]] == v {
                let (i, j) = self.grid.index(order[idx]);
                pts.push([i as f64, j as f64]);
                idx += 1;
            }
            hull = convex_hull(&pts);
            out.push((v, hull.clone(), idx));
        }
        out
    }

    /// Nodes (in grid units) lying in the polygon with vertices `hull`.
    fn count_inside(&self, hull: &[P2]) -> usize {
        let (nx, ny) = (self.grid.shape[0], if self.dim() == 2 { self.grid.shape[1] } else { 1 });
        let eps = 1e-9;
        let mut count = 0usize;
        let ymin = hull.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
        let ymax = hull.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max);
        let j0 = (ymin - eps).ceil().max(0.0) as usize;
        let j1 = ((ymax + eps).floor() as usize).min(ny - 1);
        for j in j0..=j1 {
            let y = j as f64;
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            let m = hull.len();
            for e in 0..m {
                let (a, b) = (hull[e], hull[(e + 1) % m]);
                let (ya, yb) = (a[1], b[1]);
                if (ya - y).abs() <= eps {
                    lo = lo.min(a[0]);
                    hi = hi.max(a[0]);
                }
                if (ya < y - eps && yb > y + eps) || (yb < y - eps && ya > y + eps) {
                    let x = a[0] + (y - ya) / (yb - ya) * (b[0] - a[0]);
                    lo = lo.min(x);
                    hi = hi.max(x);
                }
            }
            if lo > hi {
                continue;
            }
            let i0 = (lo - eps).ceil().max(0.0) as usize;
            let i1 = (hi + eps).floor();
            if i1 < 0.0 {
                continue;
            }
            let i1 = (i1 as usize).min(nx - 1);
            if i1 >= i0 {
                count += i1 - i0 + 1;
            }
        }
        count
    }

    /// First value whose superlevel node set is not convex, if any.
    pub fn nonconvex_level(&self) -> Option<f64> {
        for (v, hull, count) in self.level_hulls() {
            if self.count_inside(&hull) != count {
                return Some(v);
            }
        }
        None
    }

    /// True when every superlevel node set is the full lattice hull.
    pub fn is_quasi_concave(&self) -> bool {
        self.nonconvex_level().is_none()
    }

    fn to_body(&self, hull: &[P2]) -> ConvexBody {
        let (o, d) = (&self.grid.origin, self.grid.step);
        if self.dim() == 1 {
            let lo = hull.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let hi = hull.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            ConvexBody::Interval(Interval { a: o[0] + d * lo, b: o[0] + d * hi })
        } else {
            let pts: Vec<P2> = hull.iter().map(|p| [o[0] + d * p[0], o[1] + d * p[1]]).collect();
            ConvexBody::Polygon(Polygon::hull(&pts).expect("non-empty hull"))
        }
    }

    /// Superlevel body `conv{nodes with value ≥ t}`.
    pub fn superlevel(&self, t: f64) -> Option<ConvexBody> {
        let pts: Vec<P2> = (0..self.values.len())
            .filter(|&k| self.values[k] >= t && self.values[k] > 0.0)
            .map(|k| {
                let (i, j) = self.grid.index(k);
                [i as f64, j as f64]
            })
            .collect();
        if pts.is_empty() {
            return None;
        }
        Some(self.to_body(&convex_hull(&pts)))
    }

    /// Layered function with the hulled superlevels.
    pub fn to_layered(&self) -> Layered {
        let mut levels: Vec<Level> = self
            .level_hulls()
            .into_iter()
            .map(|(t, hull, _)| Level { t, body: ParallelBody { base: self.to_body(&hull), radius: 0.0 } })
            .collect();
        levels.reverse();
        Layered::new_unchecked(levels)
    }

    /// Discrete sup-convolution `s·f ⊕ t·g` over node pairs. Both grids must
    /// share the step and the weights must be equal, so that `s x + t y`
    /// lands on the refined output lattice.
    pub fn supconv(alpha: Alpha, w: Weights, f: &Sampled, g: &Sampled) -> Result<Sampled> {
        if f.dim() != g.dim() {
            return Err(Error::DimensionMismatch { expected: f.dim(), found: g.dim() });
        }
        if (f.grid.step - g.grid.step).abs() > 1e-12 * f.grid.step {
            return Err(Error::Unsupported("grid sup-convolution needs a shared grid step".into()));
        }
        if (w.s - w.t).abs() > 1e-12 * w.s {
            return Err(Error::Unsupported("grid sup-convolution needs equal weights s = t".into()));
        }
        let s = w.s;
        let dim = f.dim();
        let shape: Vec<usize> = (0..dim).map(|a| f.grid.shape[a] + g.grid.shape[a] - 1).collect();
        let origin: Vec<f64> = (0..dim).map(|a| s * (f.grid.origin[a] + g.grid.origin[a])).collect();
        let grid = Grid { origin, step: s * f.grid.step, shape };
        let nx = grid.shape[0];
        let mut out = vec![0.0f64; grid.len()];
        let fs: Vec<(usize, usize, f64)> = (0..f.values.len())
            .filter(|&k| f.values[k] > 0.0)
            .map(|k| {
                let (i, j) = f.grid.index(k);
                (i, j, f.values[k])
            })
            .collect();
        let gs: Vec<(usize, usize, f64)> = (0..g.values.len())
            .filter(|&k| g.values[k] > 0.0)
            .map(|k| {
                let (i, j) = g.grid.index(k);
                (i, j, g.values[k])
            })
            .collect();
        for &(i, j, a) in &fs {
            for &(p, q, b) in &gs {
                let k = (i + p) + nx * (j + q);
                let v = m_alpha_f(alpha, w, a, b);
                if v > out[k] {
                    out[k] = v;
                }
            }
        }
        Sampled::new_unchecked(grid, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_nonconvex_levels() {
        let g = Grid::new(vec![0.0], 1.0, vec![5]).unwrap();
        assert!(Sampled::new(g.clone(), vec![0.0, 1.0, 2.0, 1.0, 0.0]).is_ok());
        assert!(Sampled::new(g, vec![1.0, 0.0, 1.0, 0.0, 0.0]).is_err());
        let g2 = Grid::new(vec![0.0, 0.0], 1.0, vec![3, 3]).unwrap();
        let ring = vec![1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 1.0];
        assert!(Sampled::new(g2.clone(), ring).is_err());
        let bump = vec![0.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 0.0];
        assert!(Sampled::new(g2, bump).is_ok());
    }

    #[test]
    fn hull_layer_cake() {
        let g = Grid::new(vec![0.0], 0.5, vec![5]).unwrap();
        let s = Sampled::new(g, vec![0.0, 1.0, 2.0, 1.0, 0.0]).unwrap();
        let l = s.to_layered();
        assert_eq!(l.levels().len(), 2);
        assert_eq!(l.eval(&[1.0]), 2.0);
        assert_eq!(l.eval(&[0.75]), 1.0);
    }
}
