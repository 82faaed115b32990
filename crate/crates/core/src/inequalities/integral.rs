//! Projection averages and the lattice valuation identity.

use crate::error::{Error, Result};
use crate::ext::Ext;
use crate::geometry::{random_subspace_with, QuermassVector};
use crate::qcfun::{lattice_max, lattice_min, project_fn, QCFunction};
use crate::quermass::{w, QuadratureSpec};
use crate::report::{Params, Report, Route};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Index of the matching quermassintegral on `k`-dimensional projections.
pub fn projected_index(i: usize, k: usize, n: usize) -> Result<usize> {
    if !matches!((n, k), (2, 1) | (3, 1) | (3, 2)) {
        return Err(Error::Unsupported(format!("projection formula for (n, k) = ({n}, {k})")));
    }
    if i + k < n || i > n {
        return Err(Error::Unsupported(format!("no projection formula for W_{i} with k = {k}, n = {n}")));
    }
    Ok(i + k - n)
}

/// `c(i, k, n)` from the unit ball: `W_i(B^n) / W_{i′}(B^k)`.
pub fn calibrate_c(i: usize, k: usize, n: usize) -> Result<f64> {
    let ip = projected_index(i, k, n)?;
    Ok(QuermassVector::ball(n, 1.0).w(i) / QuermassVector::ball(k, 1.0).w(ip))
}

/// Monte-Carlo average of `c·W_{i′}(f|L)` over `m` Haar-random `k`-planes
/// against `W_i(f)`, within three standard errors.
pub fn check_cauchy_kubota(f: &QCFunction, i: usize, k: usize, m: usize, seed: u64, q: &QuadratureSpec) -> Result<Report> {
    let n = f.dim();
    let ip = projected_index(i, k, n)?;
    let c = calibrate_c(i, k, n)?;
    if m < 2 {
        return Err(Error::Range("need at least two subspaces".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    for _ in 0..m {
        let l = random_subspace_with(&mut rng, n, k);
        let v = c * w(&project_fn(f, &l)?, ip, q)?.finite().ok_or_else(|| Error::Divergent("projected W".into()))?;
        s1 += v;
        s2 += v * v;
    }
    let mean = s1 / m as f64;
    let var = ((s2 - s1 * mean) / (m as f64 - 1.0)).max(0.0);
    let se = (var / m as f64).sqrt();
    let target = w(f, i, q)?;
    let tol = 3.0 * se + 1e-12 * mean.abs().max(1.0);
    let params = Params { n: Some(n), i: Some(i), k: Some(k), seed: Some(seed), ..Params::default() };
    Ok(Report::identity("cauchy-kubota", params, Ext::Finite(mean), target, tol, Route::Mc)
        .with_note(format!("c={c} se={se:e} m={m}")))
}

/// `W_i(f∧g) + W_i(f∨g) = W_i(f) + W_i(g)`; a non-convex union is an error.
pub fn check_valuation(f: &QCFunction, g: &QCFunction, i: usize, q: &QuadratureSpec) -> Result<Report> {
    let n = f.dim();
    if i >= n {
        return Err(Error::Range(format!("valuation check takes 0 ≤ i ≤ n−1, got {i}")));
    }
    let hi = lattice_max(f, g)?;
    let lhs_min = match lattice_min(f, g) {
        Ok(lo) => w(&lo, i, q)?,
        Err(Error::EmptyIntersection) => Ext::Finite(0.0),
        Err(e) => return Err(e),
    };
    let lhs = lhs_min.add(w(&hi, i, q)?);
    let rhs = w(f, i, q)?.add(w(g, i, q)?);
    let params = Params { n: Some(n), i: Some(i), ..Params::default() };
    Ok(Report::identity("valuation", params, lhs, rhs, 1e-12, Route::Exact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ConvexBody, Polygon};
    use std::f64::consts::PI;

    #[test]
    fn cauchy_constant_for_lines_in_the_plane() {
        assert!((calibrate_c(1, 1, 2).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((calibrate_c(2, 2, 3).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!(calibrate_c(0, 1, 2).is_err());
    }

    #[test]
    fn balls_project_exactly() {
        let f = QCFunction::char_scaled(3.0, ConvexBody::centered_ball(3, 1.5)).unwrap();
        for (i, k) in [(2, 1), (1, 2), (2, 2)] {
            let r = check_cauchy_kubota(&f, i, k, 10, 4, &QuadratureSpec::default()).unwrap();
            assert!(r.margin.to_f64().abs() < 1e-10, "{r:?}");
        }
    }

    #[test]
    fn square_perimeter_from_widths() {
        let f = QCFunction::indicator(ConvexBody::unit_square());
        let r = check_cauchy_kubota(&f, 1, 1, 10_000, 11, &QuadratureSpec::default()).unwrap();
        assert!(r.satisfied(), "{r:?}");
    }

    #[test]
    fn overlapping_rectangles() {
        let f = QCFunction::indicator(ConvexBody::Polygon(Polygon::from_box(0.0, 0.0, 1.0, 1.0)));
        let g = QCFunction::indicator(ConvexBody::Polygon(Polygon::from_box(0.5, 0.0, 1.5, 1.0)));
        let r = check_valuation(&f, &g, 1, &QuadratureSpec::default()).unwrap();
        assert!((r.lhs.to_f64() - 4.0).abs() < 1e-12);
        assert!(r.satisfied());
        let far = QCFunction::indicator(ConvexBody::Polygon(Polygon::from_box(3.0, 0.0, 4.0, 1.0)));
        assert!(check_valuation(&f, &far, 0, &QuadratureSpec::default()).is_err());
    }
}
