//! Fixed inputs for the benchmarks.

use quermass::inequalities::corpus::{case_rng, random_centered_polygon, random_layered};
use quermass::{ConvexBody, QCFunction};

pub const SEED: u64 = 7;

/// `count` layered functions on the plane, `levels` levels each.
pub fn layered(count: usize, levels: usize) -> Vec<QCFunction> {
    (0..count)
        .map(|c| {
            let mut rng = case_rng(SEED, c);
            random_layered(&mut rng, levels, levels)
        })
        .collect()
}

/// Polygon with up to `m` vertices, origin inside.
pub fn polygon(case: usize, m: usize) -> ConvexBody {
    let mut rng = case_rng(SEED, case);
    ConvexBody::Polygon(random_centered_polygon(&mut rng, m))
}
