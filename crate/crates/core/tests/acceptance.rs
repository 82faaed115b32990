//! Acceptance suite: one line per criterion, `PASS`/`FAIL`.
//!
//! Rows marked `known` are implemented exactly as stated and are expected to
//! stay red; they do not affect the exit status. Anything else that fails
//! makes the binary exit non-zero.

use quermass::counterexample::{
    cap_profiles, check_supconv_support, f_p, f_p_ball, f_p_cap_brute, find_violation, gradient_p_report,
    homothety_check, monotonicity_report, sweep, default_phis, CapBody, SupGrid, SupportOracle,
};
use quermass::inequalities::corpus::{
    case_rng, random_layered, random_polygon, random_valuation_pair, suite_generalized_pl, suite_gradient_pl,
    suite_hyperbolic, suite_pl_1d, suite_quermass_pl, suite_rearrangement, suite_supconv_support, suite_valuation,
    SuiteResult,
};
use quermass::inequalities::{
    calibrate_c, check_cauchy_kubota, check_entropy, check_isoperimetric, check_pl_1d, check_urysohn, check_valuation,
    check_wk_norm, check_wk_wi, HalfLine, HalfLineH,
};
use quermass::numeric::kappa;
use quermass::qcfun::Profile;
use quermass::quermass::{dual_mwidth_check, dual_psi, mwidth_limit_check, per_limit_check, steiner_check, QuadratureSpec};
use quermass::{ConvexBody, Error, Ext, QCFunction, Report};
use std::f64::consts::{E, FRAC_PI_2, PI, TAU};
use std::time::Instant;

const SEED: u64 = 20_240_917;

struct Board {
    unexpected: usize,
}

impl Board {
    fn line(&mut self, id: &str, pass: bool, known_red: bool, detail: String) {
        let tag = if pass { "PASS" } else { "FAIL" };
        let k = if known_red && !pass { " (known)" } else { "" };
        println!("[{tag}]{k} {id}: {detail}");
        if !pass && !known_red {
            self.unexpected += 1;
        }
    }

    fn check(&mut self, id: &str, pass: bool, detail: String) {
        self.line(id, pass, false, detail);
    }
}

fn worst_rel(reports: &[Report]) -> f64 {
    reports
        .iter()
        .map(|r| r.margin.to_f64().abs() / r.rhs.to_f64().abs().max(1e-300))
        .fold(0.0, f64::max)
}

fn all_ok(reports: &[Report]) -> bool {
    reports.iter().all(Report::satisfied)
}

fn c1_c2(b: &mut Board, q: &QuadratureSpec) {
    let rhos: Vec<f64> = (1..=20).map(|j| 0.25 * j as f64).collect();
    let mut exact = Vec::new();
    let mut mc = Vec::new();
    let mut limits = Vec::new();
    let mut secs = 0.0;
    for c in 0..50 {
        let mut rng = case_rng(SEED, c);
        let f = random_layered(&mut rng, 3, 6);
        let qc = QuadratureSpec { seed: SEED + c as u64, mc_samples: 1_000_000, ..q.clone() };
        let t0 = Instant::now();
        let reps = steiner_check(&f, &rhos, &qc).expect("steiner check");
        secs += t0.elapsed().as_secs_f64();
        for r in reps {
            if r.check == "steiner-mc" {
                mc.push(r);
            } else {
                exact.push(r);
            }
        }
        limits.push(per_limit_check(&f, q).expect("per limit"));
        limits.push(mwidth_limit_check(&f, q).expect("mwidth limit"));
    }
    b.check(
        "C1 Steiner formula",
        all_ok(&exact) && exact.len() == 1000 && all_ok(&mc) && mc.len() == 50 && secs < 60.0,
        format!(
            "{} exact rows, worst rel err {:.2e} (< 1e-10); MC {}/{} within 5σ at 1e6 samples; {:.1}s (< 60s)",
            exact.len(),
            worst_rel(&exact),
            mc.iter().filter(|r| r.satisfied()).count(),
            mc.len(),
            secs
        ),
    );
    b.check(
        "C2 Per and M limits",
        all_ok(&limits),
        format!("{} limits, worst rel err {:.2e} (< 1e-6)", limits.len(), worst_rel(&limits)),
    );
}

fn c3(b: &mut Board, q: &QuadratureSpec) {
    let rho = 1e-4;
    let mut plain = Vec::new();
    let mut extrap = Vec::new();
    for c in [1.0, E, 10.0] {
        let f = QCFunction::char_scaled(c, ConvexBody::centered_ball(2, 1.0)).expect("char");
        let psi = dual_psi(&f, rho, q).expect("psi").to_f64();
        let fd = (psi - kappa(2)) / rho;
        let target = PI * c.ln() + TAU;
        plain.push((c, (fd - target).abs() / target));
        extrap.push(dual_mwidth_check(&f, rho, q).expect("dual check"));
    }
    let plain_ok = plain.iter().all(|p| p.1 < 1e-4);
    b.line(
        "C3a dual Steiner, plain quotient at ρ = 1e-4",
        plain_ok,
        true,
        format!(
            "rel err {} (< 1e-4); the quotient's O(ρ) term is ρ(1 + 2 ln c + ln²c/2)/(2 + ln c)",
            plain.iter().map(|(c, e)| format!("c={c:.3}: {e:.2e}")).collect::<Vec<_>>().join(", ")
        ),
    );
    b.check(
        "C3b dual Steiner, Richardson on ρ, ρ/2, ρ/4",
        all_ok(&extrap),
        format!("worst rel err {:.2e} (< 1e-4)", worst_rel(&extrap)),
    );
    let gauss = QCFunction::radial(2, Profile::Gauss { scale: 1.0, width: 1.0 }).expect("gauss");
    let quot: Vec<f64> = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&r| (dual_psi(&gauss, r, q).expect("psi").to_f64() - kappa(2)) / r)
        .collect();
    let m = quermass::quermass::dual_mwidth(&gauss).expect("dual mean width");
    b.check(
        "C3c non-compact support",
        m == Ext::PosInf && quot.windows(2).all(|w| w[1] > w[0]),
        format!("Gaussian: M̃ = {m}; quotients at ρ = 1e-2, 1e-3, 1e-4 grow: {quot:.3?}"),
    );
}

fn suite_line(b: &mut Board, name: &str, r: SuiteResult) {
    b.check(
        &format!("C4 {name}"),
        r.reports.len() >= 500 && r.violations() == 0 && r.missed_controls() == 0,
        format!(
            "{} cases, {} violations, controls flagged {}/{}",
            r.reports.len(),
            r.violations(),
            r.controls.len() - r.missed_controls(),
            r.controls.len()
        ),
    );
}

fn c4(b: &mut Board, q: &QuadratureSpec) {
    let t0 = Instant::now();
    suite_line(b, "half-line PL", suite_pl_1d(SEED, 500).expect("pl-1d"));
    suite_line(b, "generalized PL", suite_generalized_pl(SEED, 500, q).expect("generalized"));
    suite_line(b, "hyperbolic functionals", suite_hyperbolic(SEED, 500, q).expect("hyperbolic"));
    suite_line(b, "quermassintegral PL", suite_quermass_pl(SEED, 500, q).expect("quermass"));
    suite_line(b, "gradient PL", suite_gradient_pl(SEED, 500).expect("gradient"));
    let (a, bb, lam) = (2.0f64, 0.5f64, 0.3);
    let c = a.powf(1.0 - lam) * bb.powf(lam);
    let h = move |z: f64| if z > 0.0 { c * (-z).exp() } else { 0.0 };
    let r = check_pl_1d(
        Ext::Finite(1.0),
        Ext::Finite(0.0),
        lam,
        &HalfLine::Exp { a, rate: 1.0 },
        &HalfLine::Exp { a: bb, rate: 1.0 },
        HalfLineH::Given(&h),
        200,
    )
    .expect("exp case");
    b.check(
        "C4 exponential equality",
        r.satisfied() && r.margin.to_f64().abs() < 1e-9,
        format!("|margin| = {:.2e} (< 1e-9); suites took {:.1}s", r.margin.to_f64().abs(), t0.elapsed().as_secs_f64()),
    );
}

fn c5(b: &mut Board, q: &QuadratureSpec) {
    let t0 = Instant::now();
    let fb = f_p(&SupportOracle::ball(), 2, 2.0, q).expect("ball");
    let mut detail = vec![format!("F_2(B²) − 2π = {:.1e}", fb - TAU)];
    let mut ok = (fb - TAU).abs() < 1e-9;
    for (n, p) in [(2, 2.0), (3, 2.0), (2, 1.5)] {
        let rows = sweep(n, p, &default_phis(), q).expect("sweep");
        let inc = rows.windows(2).all(|w| w[1].f_p_cap > w[0].f_p_cap);
        let over = rows.iter().find(|r| r.f_p_cap > Ext::Finite(r.f_p_ball) && r.phi < FRAC_PI_2);
        let v = find_violation(n, p, q).expect("violation");
        let cor = gradient_p_report(&v, 0.5).expect("cor");
        let mono = monotonicity_report(&v);
        ok &= inc && over.is_some() && !mono.satisfied() && !cor.satisfied();
        detail.push(format!(
            "(n,p)=({n},{p}): increasing={inc}, first sweep excess at φ={:.3}, bisected φ={:.3e}, I_p(f_t) < product: {}",
            over.map_or(f64::NAN, |r| r.phi),
            v.phi,
            !cor.satisfied()
        ));
    }
    let mut homo = Vec::new();
    for (n, p, phi) in [(2, 3.0, 0.0), (2, 3.0, 0.8), (3, 4.0, 0.6), (2, 2.5, 1.2)] {
        let o = if phi == 0.0 { SupportOracle::ball() } else { cap_profiles(CapBody::from_phi(n, phi).expect("cap")) };
        homo.push(homothety_check(&o, n, p, 2.0, q).expect("homothety"));
    }
    ok &= all_ok(&homo);
    detail.push(format!("homothety worst rel {:.1e} (< 1e-8)", worst_rel(&homo)));
    let c = CapBody::from_phi(2, PI / 3.0).expect("cap");
    let red = f_p(&cap_profiles(c), 2, 2.0, q).expect("reduction");
    let brute = f_p_cap_brute(c, 1.0, 2.0, 1e-9).expect("brute");
    ok &= (red - brute).abs() < 1e-8 * red && (f_p_ball(3) - 8.0 * PI).abs() < 1e-12;
    detail.push(format!("reduction vs brute at φ=π/3: {:.1e}", (red - brute).abs() / red));
    let secs = t0.elapsed().as_secs_f64();
    ok &= secs < 30.0;
    detail.push(format!("{secs:.1}s (< 30s)"));
    b.check("C5 cap counterexample", ok, detail.join("; "));
}

fn c6(b: &mut Board) {
    let t0 = Instant::now();
    let reps = suite_supconv_support(SEED, 20, 0.4, SupGrid::default()).expect("supconv support");
    let worst = reps.iter().map(|r| r.lhs.to_f64()).fold(0.0, f64::max);
    let sq = ConvexBody::Polygon(quermass::geometry::Polygon::from_box(-1.0, -1.0, 1.0, 1.0));
    let same = check_supconv_support(&sq, &sq, 0.5, SupGrid { half: 0.5, step: 0.1 }).expect("same").lhs.to_f64();
    b.check(
        "C6 support exponentials",
        all_ok(&reps) && reps.len() == 20,
        format!("20 pairs, max deviation {worst:.2e} (< 1e-4) at step 1e-2; K0 = K1 gives {same:.1e}; {:.1}s", t0.elapsed().as_secs_f64()),
    );
}

fn c7(b: &mut Board, q: &QuadratureSpec) {
    let c = calibrate_c(1, 1, 2).expect("calibrate");
    let mut reps = Vec::new();
    for k in 0..20 {
        let mut rng = case_rng(SEED ^ 0x7, k);
        let f = QCFunction::indicator(ConvexBody::Polygon(random_polygon(&mut rng, 10, 1.0)));
        reps.push(check_cauchy_kubota(&f, 1, 1, 10_000, SEED + k as u64, q).expect("kubota"));
    }
    b.check(
        "C7 projection averages",
        (c - FRAC_PI_2).abs() < 1e-12 && all_ok(&reps),
        format!(
            "c(1,1,2) − π/2 = {:.1e}; {}/20 polygons recover W_1 within 3σ at 1e4 subspaces",
            c - FRAC_PI_2,
            reps.iter().filter(|r| r.satisfied()).count()
        ),
    );
}

fn c8(b: &mut Board, q: &QuadratureSpec) {
    let reps = suite_valuation(SEED, 100, q).expect("valuation");
    let worst = reps.iter().map(|r| r.margin.to_f64().abs()).fold(0.0, f64::max);
    let mut rejected = 0;
    for k in 0..10 {
        let d = 1.5 + 0.1 * k as f64;
        let f = QCFunction::indicator(ConvexBody::unit_square());
        let g = QCFunction::indicator(ConvexBody::unit_square().translate(&[d, 0.0]));
        if matches!(check_valuation(&f, &g, 0, q), Err(Error::NonConvexUnion { .. })) {
            rejected += 1;
        }
    }
    let mut rng = case_rng(SEED, 10_000);
    let (f, g) = random_valuation_pair(&mut rng);
    let both = check_valuation(&f, &g, 1, q).map(|r| r.satisfied()).unwrap_or(false);
    b.check(
        "C8 valuation",
        all_ok(&reps) && reps.len() == 100 && worst < 1e-12 && rejected == 10 && both,
        format!("100 admissible pairs, max |defect| {worst:.1e} (< 1e-12); {rejected}/10 disjoint pairs rejected"),
    );
}

fn c9(b: &mut Board, q: &QuadratureSpec) {
    let unit = [
        QCFunction::indicator(ConvexBody::centered_ball(2, 1.0)),
        QCFunction::indicator(ConvexBody::ball(vec![0.3, -0.2], 1.0).expect("ball")),
        QCFunction::indicator(ConvexBody::centered_ball(3, 1.0)),
    ];
    let scaled = [
        QCFunction::indicator(ConvexBody::centered_ball(2, 1.7)),
        QCFunction::indicator(ConvexBody::ball(vec![0.1, 0.2, -0.4], 0.6).expect("ball")),
    ];
    let mut eq = Vec::new();
    for f in unit.iter().chain(scaled.iter()) {
        let n = f.dim();
        eq.push(check_isoperimetric(f, q).expect("6.1"));
        eq.push(check_urysohn(f, q).expect("6.6"));
        for k in 1..n {
            eq.push(check_wk_norm(f, k, q).expect("6.4"));
            for i in 0..k {
                eq.push(check_wk_wi(f, i, k, q).expect("6.3"));
            }
        }
    }
    for f in &unit {
        eq.push(check_entropy(f, q).expect("6.2"));
    }
    let worst_eq = eq.iter().map(|r| r.margin.to_f64().abs()).fold(0.0, f64::max);
    b.check(
        "C9a ball equality",
        eq.iter().all(|r| r.satisfied() && r.margin.to_f64().abs() < 1e-9),
        format!("{} rows over the ball family, max |margin| {worst_eq:.1e} (< 1e-9)", eq.len()),
    );

    let mut strict = Vec::new();
    for c in 0..100 {
        let mut rng = case_rng(SEED ^ 0x9, c);
        let f = random_layered(&mut rng, 1, 4);
        strict.push(check_isoperimetric(&f, q).expect("6.1"));
        strict.push(check_urysohn(&f, q).expect("6.6"));
        strict.push(check_wk_norm(&f, 1, q).expect("6.4"));
        strict.push(check_wk_wi(&f, 0, 1, q).expect("6.3"));
        let h = 0.3 + 2.7 * (c as f64 / 99.0);
        let single = QCFunction::char_scaled(h, ConvexBody::Polygon(random_polygon(&mut rng, 10, 1.0))).expect("char");
        strict.push(check_entropy(&single, q).expect("6.2"));
    }
    let min_margin = strict.iter().map(|r| r.margin.to_f64()).fold(f64::INFINITY, f64::min);
    b.check(
        "C9b strict on non-balls",
        strict.iter().all(|r| r.margin.to_f64() > 0.0),
        format!("{} rows on 100 random functions, min margin {min_margin:.2e} (> 0)", strict.len()),
    );

    let dom = suite_rearrangement(SEED, 100, q).expect("rearrangement");
    let bad: Vec<&Report> = dom.iter().filter(|r| !r.satisfied()).collect();
    let worst = bad.iter().map(|r| r.margin.to_f64()).fold(0.0, f64::min);
    let per_k = |k: usize| dom.iter().filter(|r| r.params.k == Some(k) && !r.satisfied()).count();
    b.line(
        "C9c rearrangement dominance",
        bad.is_empty(),
        true,
        format!(
            "{} rows, {} below −1e-9 (k=0: {}, k=1: {}), worst margin {worst:.3}; for k < n−1 a mean-width ball has the larger W_k",
            dom.len(),
            bad.len(),
            per_k(0),
            per_k(1)
        ),
    );
}

fn main() {
    let q = QuadratureSpec::default();
    let mut b = Board { unexpected: 0 };
    let t0 = Instant::now();
    c1_c2(&mut b, &q);
    c3(&mut b, &q);
    c4(&mut b, &q);
    c5(&mut b, &q);
    c6(&mut b);
    c7(&mut b, &q);
    c8(&mut b, &q);
    c9(&mut b, &q);
    println!("[INFO] C10 no large-scale experiments to reproduce");
    println!("acceptance: {} unexpected failure(s), {:.1}s", b.unexpected, t0.elapsed().as_secs_f64());
    if b.unexpected > 0 {
        std::process::exit(1);
    }
}
