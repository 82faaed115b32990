//! Seeded random corpora and the suite runners built on them.

use super::functional::{check_generalized_pl, check_hyperbolic, check_quermass_pl, FunctionalId};
use super::gradient::{check_gradient_pl, radial_supconv};
use super::integral::{calibrate_c, check_cauchy_kubota, check_valuation};
use super::isoperimetric::{check_entropy, check_isoperimetric, check_rearrangement, check_urysohn, check_wk_norm, check_wk_wi};
use super::pl::{check_pl_1d, minimal_h, HalfLine, HalfLineH};
use crate::counterexample::{check_supconv_support, SupGrid};
use crate::error::Result;
use crate::ext::{Alpha, Ext};
use crate::geometry::{random_convex_polygon, ConvexBody, Polygon, P2, P3};
use crate::means::Weights;
use crate::qcfun::{supconv, Profile, QCFunction};
use crate::quermass::QuadratureSpec;
use crate::report::{Outcome, Report};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const LAMBDAS: [f64; 3] = [0.25, 0.5, 0.75];
pub const ST_GRID: [(f64, f64); 5] = [(0.5, 0.5), (0.3, 0.7), (1.0, 1.0), (2.0, 0.5), (0.4, 1.5)];

/// Case generator: one independent stream per case index.
pub fn case_rng(seed: u64, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case as u64);
    rng
}

/// Runs `f` on a pool sized by `QK_THREADS` (default: all cores).
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var("QK_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).unwrap_or(0);
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// `{lo, −0.5, 0, 1, +∞}` restricted to `[lo, +∞]`.
pub fn alpha_grid(lo: Alpha) -> Vec<Alpha> {
    let mut out = vec![lo];
    for a in [Ext::Finite(-0.5), Ext::Finite(0.0), Ext::Finite(1.0), Ext::PosInf] {
        if a > lo && !out.iter().any(|b| b.approx_eq(a, 1e-12)) {
            out.push(a);
        }
    }
    out
}

fn uniform_in_polygon<R: Rng + ?Sized>(rng: &mut R, p: &Polygon) -> P2 {
    let v = p.vertices();
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for q in v {
        for c in 0..2 {
            lo[c] = lo[c].min(q[c]);
            hi[c] = hi[c].max(q[c]);
        }
    }
    loop {
        let x = [rng.random_range(lo[0]..=hi[0]), rng.random_range(lo[1]..=hi[1])];
        if p.contains(x, 0.0) {
            return x;
        }
    }
}

/// Random planar polygon with 3–`max_m` vertices around a random centre.
pub fn random_polygon<R: Rng + ?Sized>(rng: &mut R, max_m: usize, r: f64) -> Polygon {
    let m = rng.random_range(3..=max_m.max(3));
    let shift = [rng.random_range(-0.3..0.3) * r, rng.random_range(-0.3..0.3) * r];
    random_convex_polygon(rng, m, r).translate(shift)
}

/// Nested stack of random polygons with increasing values in `[0.2, …]`.
pub fn random_layered<R: Rng + ?Sized>(rng: &mut R, min_levels: usize, max_levels: usize) -> QCFunction {
    let levels = rng.random_range(min_levels..=max_levels);
    let r = rng.random_range(0.5..2.0);
    let mut bodies = vec![random_polygon(rng, 8, r)];
    while bodies.len() < levels {
        let outer = bodies.last().expect("non-empty");
        let pts: Vec<P2> = (0..rng.random_range(3..9)).map(|_| uniform_in_polygon(rng, outer)).collect();
        match Polygon::hull(&pts) {
            Ok(p) if !p.is_degenerate() && p.area() > 1e-3 * outer.area() => bodies.push(p),
            _ => continue,
        }
    }
    let mut t = 0.0;
    let pairs = bodies
        .into_iter()
        .map(|b| {
            t += rng.random_range(0.2..1.0);
            (t, ConvexBody::Polygon(b))
        })
        .collect();
    QCFunction::layered(pairs).expect("nested by construction")
}

/// Nested stack of random polytopes in `R³`.
pub fn random_layered3<R: Rng + ?Sized>(rng: &mut R, max_levels: usize) -> QCFunction {
    let levels = rng.random_range(1..=max_levels);
    let mut pts: Vec<P3> = Vec::new();
    let mut pairs = Vec::new();
    let mut t = 0.0;
    let r = rng.random_range(0.5..1.5);
    for _ in 0..levels {
        let next: Vec<P3> = if pts.is_empty() {
            (0..8).map(|_| [rng.random_range(-r..r), rng.random_range(-r..r), rng.random_range(-r..r)]).collect()
        } else {
            // convex combinations of the previous vertices stay inside
            (0..8)
                .map(|_| {
                    let wts: Vec<f64> = pts.iter().map(|_| rng.random::<f64>().powi(3)).collect();
                    let s: f64 = wts.iter().sum();
                    let mut x = [0.0; 3];
                    for (p, wt) in pts.iter().zip(&wts) {
                        for c in 0..3 {
                            x[c] += p[c] * wt / s;
                        }
                    }
                    x
                })
                .collect()
        };
        let body = ConvexBody::polytope3(&next).expect("finite points");
        t += rng.random_range(0.2..1.0);
        pts = body.points().iter().map(|p| [p[0], p[1], p[2]]).collect();
        pairs.push((t, body));
    }
    QCFunction::layered(pairs).expect("nested by construction")
}

/// Random one-dimensional test function on the half-line.
pub fn random_half_line<R: Rng + ?Sized>(rng: &mut R) -> HalfLine {
    let a = rng.random_range(0.2..3.0);
    match rng.random_range(0..3) {
        0 => HalfLine::Exp { a, rate: rng.random_range(0.3..3.0) },
        1 => HalfLine::Gamma { a, k: rng.random_range(1..=3), rate: rng.random_range(0.5..3.0) },
        _ => {
            let lo = rng.random_range(0.0..2.0);
            HalfLine::Pulse { a, lo, hi: lo + rng.random_range(0.2..3.0) }
        }
    }
}

pub fn random_gaussian<R: Rng + ?Sized>(rng: &mut R) -> QCFunction {
    QCFunction::radial(2, Profile::Gauss { scale: rng.random_range(0.3..3.0), width: rng.random_range(0.4..2.0) })
        .expect("valid profile")
}

/// A suite's reports together with its negative controls (`h` shrunk by `0.9`).
#[derive(Debug, Clone, Default)]
pub struct SuiteResult {
    pub reports: Vec<Report>,
    pub controls: Vec<Report>,
}

impl SuiteResult {
    pub fn violations(&self) -> usize {
        self.reports.iter().filter(|r| !r.satisfied()).count()
    }

    /// Controls that were not flagged.
    pub fn missed_controls(&self) -> usize {
        self.controls.iter().filter(|r| r.outcome == Outcome::Satisfied).count()
    }

    fn from_pairs(v: Vec<(Report, Report)>) -> SuiteResult {
        let (reports, controls) = v.into_iter().unzip();
        SuiteResult { reports, controls }
    }
}

fn run_cases<F>(cases: usize, f: F) -> Result<SuiteResult>
where
    F: Fn(usize) -> Result<(Report, Report)> + Sync + Send,
{
    let out: Result<Vec<_>> = with_pool(|| (0..cases).into_par_iter().map(&f).collect());
    out.map(SuiteResult::from_pairs)
}

fn pl_1d_combos() -> Vec<(Alpha, Alpha)> {
    let mut out = Vec::new();
    for gamma in [Ext::NegInf, Ext::Finite(-0.5), Ext::Finite(0.0), Ext::Finite(0.5), Ext::Finite(1.0)] {
        let lo = match gamma {
            Ext::NegInf => Ext::PosInf,
            Ext::Finite(g) => Ext::Finite(-g),
            Ext::PosInf => Ext::NegInf,
        };
        let alphas = if lo == Ext::PosInf { vec![Ext::PosInf] } else { alpha_grid(lo) };
        for a in alphas {
            out.push((gamma, a));
        }
    }
    out
}

/// One-dimensional suite over the admissible `(γ, α, λ)` grid.
pub fn suite_pl_1d(seed: u64, cases: usize) -> Result<SuiteResult> {
    let combos = pl_1d_combos();
    run_cases(cases, |c| {
        let (gamma, alpha) = combos[c % combos.len()];
        let lam = LAMBDAS[(c / combos.len()) % LAMBDAS.len()];
        let mut rng = case_rng(seed, c);
        let (f, g) = (random_half_line(&mut rng), random_half_line(&mut rng));
        let mut r = check_pl_1d(gamma, alpha, lam, &f, &g, HalfLineH::Minimal, 64)?;
        r.params.seed = Some(seed);
        let shrunk = |z: f64| 0.9 * minimal_h(alpha, gamma, lam, &f, &g, z);
        let ctl = check_pl_1d(gamma, alpha, lam, &f, &g, HalfLineH::Given(&shrunk), 64)?;
        Ok((r, ctl))
    })
}

fn level_combos(n: usize, phis: &[FunctionalId]) -> Result<Vec<(FunctionalId, Alpha)>> {
    let mut out = Vec::new();
    for &phi in phis {
        let rho = phi.order(n)? as f64;
        for a in alpha_grid(Ext::Finite(-1.0 / rho)) {
            out.push((phi, a));
        }
    }
    Ok(out)
}

fn control(
    alpha: Alpha,
    w: Weights,
    f: &QCFunction,
    g: &QCFunction,
    run: impl Fn(Option<&QCFunction>) -> Result<Report>,
) -> Result<Report> {
    let h = supconv(alpha, w, f, g)?.scale_values(0.9)?;
    run(Some(&h))
}

/// Generalized Prékopa–Leindler suite for `Φ = W_0, W_1` in the plane.
pub fn suite_generalized_pl(seed: u64, cases: usize, q: &QuadratureSpec) -> Result<SuiteResult> {
    let combos = level_combos(2, &[FunctionalId::W { i: 0 }, FunctionalId::W { i: 1 }])?;
    run_cases(cases, |c| {
        let (phi, alpha) = combos[c % combos.len()];
        let lam = LAMBDAS[(c / combos.len()) % LAMBDAS.len()];
        let mut rng = case_rng(seed, c);
        let (f, g) = (random_layered(&mut rng, 1, 3), random_layered(&mut rng, 1, 3));
        let mut r = check_generalized_pl(phi, alpha, lam, &f, &g, None, q)?;
        r.params.seed = Some(seed);
        let ctl = control(alpha, Weights::lambda(lam)?, &f, &g, |h| check_generalized_pl(phi, alpha, lam, &f, &g, h, q))?;
        Ok((r, ctl))
    })
}

fn st_for(c: usize, alpha: Alpha) -> (f64, f64) {
    let (s, t) = ST_GRID[c % ST_GRID.len()];
    if alpha.is_zero() && (s + t - 1.0).abs() > 1e-12 {
        ST_GRID[(c / ST_GRID.len()) % 2]
    } else {
        (s, t)
    }
}

/// Hyperbolic-functional suite for `Φ = I, Per` with unnormalized weights.
pub fn suite_hyperbolic(seed: u64, cases: usize, q: &QuadratureSpec) -> Result<SuiteResult> {
    let combos = level_combos(2, &[FunctionalId::Integral, FunctionalId::Perimeter])?;
    run_cases(cases, |c| {
        let (phi, alpha) = combos[c % combos.len()];
        let (s, t) = st_for(c / combos.len(), alpha);
        let mut rng = case_rng(seed, c);
        let (f, g) = (random_layered(&mut rng, 1, 3), random_layered(&mut rng, 1, 3));
        let mut r = check_hyperbolic(phi, alpha, s, t, &f, &g, None, q)?;
        r.params.seed = Some(seed);
        let ctl = control(alpha, Weights::new(s, t)?, &f, &g, |h| check_hyperbolic(phi, alpha, s, t, &f, &g, h, q))?;
        Ok((r, ctl))
    })
}

/// Quermassintegral suite: `W_0, W_1` in the plane, with every fifth case
/// drawn from stacks of polytopes in `R³`.
pub fn suite_quermass_pl(seed: u64, cases: usize, q: &QuadratureSpec) -> Result<SuiteResult> {
    let c2 = level_combos(2, &[FunctionalId::W { i: 0 }, FunctionalId::W { i: 1 }])?;
    let c3 = level_combos(3, &[FunctionalId::W { i: 0 }, FunctionalId::W { i: 1 }, FunctionalId::W { i: 2 }])?;
    run_cases(cases, |c| {
        let mut rng = case_rng(seed, c);
        let three = c % 5 == 4;
        let combos = if three { &c3 } else { &c2 };
        let (phi, alpha) = combos[c % combos.len()];
        let i = phi.index(if three { 3 } else { 2 });
        let (s, t) = st_for(c / combos.len(), alpha);
        let (f, g) = if three {
            (random_layered3(&mut rng, 2), random_layered3(&mut rng, 2))
        } else {
            (random_layered(&mut rng, 1, 3), random_layered(&mut rng, 1, 3))
        };
        let mut r = check_quermass_pl(i, alpha, s, t, &f, &g, None, q)?;
        r.params.seed = Some(seed);
        let ctl = control(alpha, Weights::new(s, t)?, &f, &g, |h| check_quermass_pl(i, alpha, s, t, &f, &g, h, q))?;
        Ok((r, ctl))
    })
}

/// Gradient suite over planar Gaussians.
pub fn suite_gradient_pl(seed: u64, cases: usize) -> Result<SuiteResult> {
    let alphas = alpha_grid(Ext::Finite(-1.0));
    run_cases(cases, |c| {
        let alpha = alphas[c % alphas.len()];
        let lam = LAMBDAS[(c / alphas.len()) % LAMBDAS.len()];
        let mut rng = case_rng(seed, c);
        let (f, g) = (random_gaussian(&mut rng), random_gaussian(&mut rng));
        let mut r = check_gradient_pl(alpha, lam, &f, &g, None, 64)?;
        r.params.seed = Some(seed);
        let (QCFunction::Radial(rf), QCFunction::Radial(rg)) = (&f, &g) else { unreachable!("radial by construction") };
        let shrunk = |r: f64| 0.9 * radial_supconv(alpha, lam, &rf.profile, &rg.profile, r);
        let ctl = check_gradient_pl(alpha, lam, &f, &g, Some(&shrunk), 64)?;
        Ok((r, ctl))
    })
}

/// Pair of layered functions with convex per-level unions: the same stack
/// cut by two overlapping half-planes.
pub fn random_valuation_pair<R: Rng + ?Sized>(rng: &mut R) -> (QCFunction, QCFunction) {
    loop {
        let base = random_layered(rng, 1, 3);
        let QCFunction::Layered(l) = &base else { unreachable!() };
        let th = rng.random_range(0.0..std::f64::consts::TAU);
        let u = [th.cos(), th.sin()];
        let ConvexBody::Polygon(p1) = &l.levels()[0].body.base else { unreachable!() };
        let iv = p1.project(u);
        let b2 = iv.a + rng.random_range(0.2..0.5) * iv.length();
        let b1 = b2 + rng.random_range(0.1..0.4) * iv.length();
        let big = 10.0 * (1.0 + p1.max_norm());
        let v = [-u[1], u[0]];
        let half = |lo: f64, hi: f64| {
            let c = |s: f64, r: f64| [u[0] * s + v[0] * r, u[1] * s + v[1] * r];
            Polygon::new(vec![c(lo, -big), c(hi, -big), c(hi, big), c(lo, big)]).expect("rectangle")
        };
        let (h1, h2) = (half(-big, b1), half(b2, big));
        let cut = |h: &Polygon| -> Option<QCFunction> {
            let pairs: Vec<(f64, ConvexBody)> = l
                .levels()
                .iter()
                .filter_map(|lv| {
                    let ConvexBody::Polygon(p) = &lv.body.base else { return None };
                    p.intersect(h).filter(|q| !q.is_degenerate()).map(|q| (lv.t, ConvexBody::Polygon(q)))
                })
                .collect();
            (!pairs.is_empty()).then(|| QCFunction::layered(pairs).ok()).flatten()
        };
        if let (Some(f), Some(g)) = (cut(&h1), cut(&h2)) {
            return (f, g);
        }
    }
}

/// Valuation identity on admissible pairs.
pub fn suite_valuation(seed: u64, cases: usize, q: &QuadratureSpec) -> Result<Vec<Report>> {
    with_pool(|| {
        (0..cases)
            .into_par_iter()
            .map(|c| {
                let mut rng = case_rng(seed, c);
                let (f, g) = random_valuation_pair(&mut rng);
                let mut r = check_valuation(&f, &g, c % 2, q)?;
                r.params.seed = Some(seed);
                Ok(r)
            })
            .collect()
    })
}

/// Projection-average suite over random polygons (`n = 2`, `k = 1`, `i = 1`).
pub fn suite_kubota(seed: u64, cases: usize, subspaces: usize, q: &QuadratureSpec) -> Result<Vec<Report>> {
    calibrate_c(1, 1, 2)?;
    with_pool(|| {
        (0..cases)
            .into_par_iter()
            .map(|c| {
                let mut rng = case_rng(seed, c);
                let f = QCFunction::indicator(ConvexBody::Polygon(random_polygon(&mut rng, 10, 1.0)));
                check_cauchy_kubota(&f, 1, 1, subspaces, seed.wrapping_add(c as u64), q)
            })
            .collect()
    })
}

/// Every planar inequality of the isoperimetric family on one function;
/// `(i, k)` pairs with `i = k` and `k = 0` are identities and are skipped.
pub fn section6_reports(f: &QCFunction, q: &QuadratureSpec) -> Result<Vec<Report>> {
    let n = f.dim();
    let mut out = vec![check_isoperimetric(f, q)?, check_urysohn(f, q)?];
    for k in 1..n {
        out.push(check_wk_norm(f, k, q)?);
        for i in 0..k {
            out.push(check_wk_wi(f, i, k, q)?);
        }
    }
    if f.is_log_concave() {
        out.push(check_entropy(f, q)?);
    }
    Ok(out)
}

/// `W_k(f) − W_k(f*)` for `k = 0..n−1`.
pub fn rearrangement_reports(f: &QCFunction, q: &QuadratureSpec) -> Result<Vec<Report>> {
    (0..f.dim()).map(|k| check_rearrangement(f, k, q)).collect()
}

/// Section-6 family on random stacks (and single scaled polygons for the
/// entropy inequality).
pub fn suite_section6(seed: u64, cases: usize, q: &QuadratureSpec) -> Result<Vec<Report>> {
    let per_case: Result<Vec<Vec<Report>>> = with_pool(|| {
        (0..cases)
            .into_par_iter()
            .map(|c| {
                let mut rng = case_rng(seed, c);
                let f = random_layered(&mut rng, 1, 4);
                let mut out = section6_reports(&f, q)?;
                let c_height = rng.random_range(0.3..3.0);
                let single = QCFunction::char_scaled(c_height, ConvexBody::Polygon(random_polygon(&mut rng, 10, 1.0)))?;
                out.push(check_entropy(&single, q)?);
                for r in out.iter_mut() {
                    r.params.seed = Some(seed);
                }
                Ok(out)
            })
            .collect()
    });
    Ok(per_case?.into_iter().flatten().collect())
}

/// Ball and scaled-ball family for the equality cases.
pub fn ball_family() -> Vec<QCFunction> {
    vec![
        QCFunction::indicator(ConvexBody::centered_ball(2, 1.0)),
        QCFunction::indicator(ConvexBody::ball(vec![0.3, -0.2], 1.0).expect("ball")),
        QCFunction::indicator(ConvexBody::centered_ball(3, 1.0)),
    ]
}

/// `W_k(f) ≥ W_k(f*)` over random stacks, every `k < n`.
pub fn suite_rearrangement(seed: u64, cases: usize, q: &QuadratureSpec) -> Result<Vec<Report>> {
    let per_case: Result<Vec<Vec<Report>>> = with_pool(|| {
        (0..cases)
            .into_par_iter()
            .map(|c| {
                let mut rng = case_rng(seed, c);
                let mut out = rearrangement_reports(&random_layered(&mut rng, 1, 4), q)?;
                for r in out.iter_mut() {
                    r.params.seed = Some(seed);
                }
                Ok(out)
            })
            .collect()
    });
    Ok(per_case?.into_iter().flatten().collect())
}

/// Random polygon with its centroid at the origin.
pub fn random_centered_polygon<R: Rng + ?Sized>(rng: &mut R, max_m: usize) -> Polygon {
    let m = rng.random_range(3..=max_m.max(3));
    let p = random_convex_polygon(rng, m, 1.0);
    let c = p.centroid();
    p.translate([-c[0], -c[1]])
}

/// Support-exponential sup-convolutions on random centred polygon pairs.
pub fn suite_supconv_support(seed: u64, cases: usize, t: f64, grid: SupGrid) -> Result<Vec<Report>> {
    (0..cases)
        .map(|c| {
            let mut rng = case_rng(seed, c);
            let k0 = ConvexBody::Polygon(random_centered_polygon(&mut rng, 8));
            let k1 = ConvexBody::Polygon(random_centered_polygon(&mut rng, 8));
            let mut r = with_pool(|| check_supconv_support(&k0, &k1, t, grid))?;
            r.params.seed = Some(seed);
            Ok(r)
        })
        .collect()
}
