use crate::args::{Cli, Command, Common, Format, Params, Suite};
use quermass::counterexample::{find_violation, monotonicity_report, sweep, default_phis, SupGrid};
use quermass::counterexample::check_supconv_support;
use quermass::geometry::{random_subspace, SubspaceSpec};
use quermass::inequalities::corpus::{self, SuiteResult};
use quermass::inequalities::{self as ineq, FunctionalId, HalfLine, HalfLineH};
use quermass::qcfun::{project_fn, supconv};
use quermass::quermass::{self as qm, QuadratureSpec};
use quermass::report::CSV_HEADER;
use quermass::{ConvexBody, Error, Ext, QCFunction, Report, Weights};
use serde::de::DeserializeOwned;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Input, parameter and I/O failures; all map to exit code 2.
#[derive(Debug)]
pub enum CliError {
    Input { path: PathBuf, msg: String },
    Param(String),
    Lib(Error),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input { path, msg } => write!(f, "{}: {msg}", path.display()),
            CliError::Param(m) => write!(f, "bad parameter: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type Res<T> = std::result::Result<T, CliError>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Res<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input { path: path.into(), msg: e.to_string() })?;
    // serde_json reports "… at line L column C"
    serde_json::from_str(&text).map_err(|e| CliError::Input { path: path.into(), msg: e.to_string() })
}

fn inputs<T: DeserializeOwned>(paths: &[PathBuf], want: usize) -> Res<Vec<T>> {
    if paths.len() != want {
        return Err(CliError::Param(format!("expected {want} --input file(s), got {}", paths.len())));
    }
    paths.iter().map(|p| read_json(p)).collect()
}

enum Output {
    Reports(Vec<Report>),
    Table { header: Vec<&'static str>, rows: Vec<Vec<String>> },
    Json(serde_json::Value),
}

fn quad(c: &Common) -> Res<QuadratureSpec> {
    let mut q = QuadratureSpec { seed: c.seed, ..QuadratureSpec::default() };
    if let Some(t) = c.tol {
        if !(t > 0.0) {
            return Err(CliError::Param(format!("--tol must be positive, got {t}")));
        }
        q.tol = t;
    }
    if let Some(s) = c.samples {
        q.mc_samples = s;
    }
    q.validate()?;
    Ok(q)
}

fn weights(p: &Params) -> Res<Weights> {
    match (p.s, p.t, p.lambda) {
        (Some(s), Some(t), None) => Ok(Weights::new(s, t)?),
        (None, None, Some(l)) => Ok(Weights::lambda(l)?),
        (None, None, None) => Ok(Weights::lambda(0.5)?),
        _ => Err(CliError::Param("give either --s and --t, or --lambda".into())),
    }
}

fn lambda(p: &Params) -> f64 {
    p.lambda.unwrap_or(0.5)
}

fn st(p: &Params) -> (f64, f64) {
    match (p.s, p.t) {
        (Some(s), Some(t)) => (s, t),
        _ => {
            let l = lambda(p);
            (1.0 - l, l)
        }
    }
}

fn functional(p: &Params, default: FunctionalId) -> FunctionalId {
    match p.i {
        Some(i) => FunctionalId::W { i },
        None => default,
    }
}

fn fmt_f(x: f64) -> String {
    Ext::Finite(x).to_string()
}

pub fn run(cli: &Cli) -> Res<u8> {
    let c = &cli.common;
    let q = quad(c)?;
    let out = match &cli.cmd {
        Command::Body(i) => {
            let [k]: [ConvexBody; 1] = inputs(&i.input, 1)?.try_into().expect("one input");
            let w = k.quermass();
            let rows = (0..=k.dim()).map(|i| vec![i.to_string(), fmt_f(w.w(i))]).collect();
            Output::Table { header: vec!["i", "W_i"], rows }
        }
        Command::Quermass(i) => {
            let [f]: [QCFunction; 1] = inputs(&i.input, 1)?.try_into().expect("one input");
            let mut rows: Vec<Vec<String>> = qm::quermass_vector(&f, &q)?
                .into_iter()
                .enumerate()
                .map(|(i, v)| vec![format!("W_{i}"), v.to_string()])
                .collect();
            rows.push(vec!["Per".into(), qm::perimeter(&f, &q)?.to_string()]);
            rows.push(vec!["M".into(), qm::mean_width_f(&f, &q)?.to_string()]);
            rows.push(vec!["chi".into(), qm::euler(&f).to_string()]);
            Output::Table { header: vec!["quantity", "value"], rows }
        }
        Command::Steiner(i) => {
            let [f]: [QCFunction; 1] = inputs(&i.input, 1)?.try_into().expect("one input");
            let rhos = if c.rho.is_empty() { (1..=20).map(|k| 0.25 * k as f64).collect() } else { c.rho.clone() };
            let poly = qm::steiner_poly(&f, &q)?;
            eprintln!("steiner coefficients C(n,i)W_i: {:?}", poly.coeffs);
            let mut reports = qm::steiner_check(&f, &rhos, &q)?;
            if f.as_layered().is_some() {
                reports.push(qm::per_limit_check(&f, &q)?);
                reports.push(qm::mwidth_limit_check(&f, &q)?);
            }
            Output::Reports(reports)
        }
        Command::DualSteiner(i) => {
            let [f]: [QCFunction; 1] = inputs(&i.input, 1)?.try_into().expect("one input");
            let rhos = if c.rho.is_empty() { vec![1.0, 0.5, 0.1, 1e-2, 1e-3, 1e-4] } else { c.rho.clone() };
            let mut rows = Vec::new();
            for &r in &rhos {
                rows.push(vec![fmt_f(r), qm::dual_psi(&f, r, &q)?.to_string()]);
            }
            if f.is_log_concave() {
                rows.push(vec!["mtilde".into(), qm::dual_mwidth(&f)?.to_string()]);
            }
            Output::Table { header: vec!["rho", "psi"], rows }
        }
        Command::Supconv { inputs: i, p } => {
            let [f, g]: [QCFunction; 2] = inputs(&i.input, 2)?.try_into().expect("two inputs");
            let alpha = p.alpha.unwrap_or(Ext::Finite(0.0));
            let h = supconv(alpha, weights(p)?, &f, &g)?;
            Output::Json(serde_json::to_value(&h).map_err(|e| CliError::Io(e.to_string()))?)
        }
        Command::Project { inputs: i, k, coordinate } => {
            let [f]: [QCFunction; 1] = inputs(&i.input, 1)?.try_into().expect("one input");
            let l = if *coordinate { SubspaceSpec::coordinate(f.dim(), *k) } else { random_subspace(f.dim(), *k, c.seed)? };
            let pf = project_fn(&f, &l)?;
            Output::Json(serde_json::json!({"subspace": l, "function": pf}))
        }
        Command::Counterexample { n, p } => {
            let rows = sweep(*n, *p, &default_phis(), &q)?;
            if *p > 1.0 {
                match find_violation(*n, *p, &q) {
                    Ok(v) => {
                        let r = monotonicity_report(&v);
                        eprintln!(
                            "violation: phi={} l={} F_p(cap)={} > F_p(ball)={} ({})",
                            v.phi, v.l, v.f_p_cap, v.f_p_ball, r.check
                        );
                    }
                    Err(e) => eprintln!("no violation located: {e}"),
                }
            }
            let rows = rows
                .iter()
                .map(|r| vec![fmt_f(r.phi), fmt_f(r.l), r.f_p_cap.to_string(), fmt_f(r.f_p_ball), r.ratio.to_string()])
                .collect();
            Output::Table { header: vec!["phi", "l", "F_p_cap", "F_p_ball", "ratio"], rows }
        }
        Command::Kubota { inputs: i, i: idx, k } => {
            let [f]: [QCFunction; 1] = inputs(&i.input, 1)?.try_into().expect("one input");
            let m = c.samples.unwrap_or(10_000);
            Output::Reports(vec![ineq::check_cauchy_kubota(&f, *idx, *k, m, c.seed, &q)?])
        }
        Command::Check { suite, inputs: i, p, cases, h } => check(*suite, &i.input, p, *cases, h.as_deref(), c, &q)?,
    };
    emit(out, c)
}

fn suite_rows(r: SuiteResult) -> Vec<Report> {
    let mut out = r.reports;
    for mut ctl in r.controls {
        ctl.check = format!("{}-control", ctl.check);
        out.push(ctl);
    }
    out
}

fn grid(c: &Common, default: usize) -> usize {
    c.grid.map(|g| g as usize).unwrap_or(default)
}

fn check(
    suite: Suite,
    paths: &[PathBuf],
    p: &Params,
    cases: usize,
    h: Option<&Path>,
    c: &Common,
    q: &QuadratureSpec,
) -> Res<Output> {
    let seed = c.seed;
    let alpha = p.alpha.unwrap_or(Ext::Finite(0.0));
    let corpus_mode = paths.is_empty();
    let h_fn: Option<QCFunction> = h.map(read_json).transpose()?;
    let pair = || -> Res<(QCFunction, QCFunction)> {
        let [f, g]: [QCFunction; 2] = inputs(paths, 2)?.try_into().expect("two inputs");
        Ok((f, g))
    };
    let one = || -> Res<QCFunction> {
        let [f]: [QCFunction; 1] = inputs(paths, 1)?.try_into().expect("one input");
        Ok(f)
    };
    let reports = match suite {
        Suite::Pl1d if corpus_mode => suite_rows(corpus::suite_pl_1d(seed, cases)?),
        Suite::Pl1d => {
            let [f, g]: [HalfLine; 2] = inputs(paths, 2)?.try_into().expect("two inputs");
            let gamma = p.gamma.unwrap_or(Ext::Finite(0.0));
            vec![ineq::check_pl_1d(gamma, alpha, lambda(p), &f, &g, HalfLineH::Minimal, grid(c, 64))?]
        }
        Suite::GeneralizedPl if corpus_mode => suite_rows(corpus::suite_generalized_pl(seed, cases, q)?),
        Suite::GeneralizedPl => {
            let (f, g) = pair()?;
            let phi = functional(p, FunctionalId::W { i: 0 });
            vec![ineq::check_generalized_pl(phi, alpha, lambda(p), &f, &g, h_fn.as_ref(), q)?]
        }
        Suite::Hyperbolic if corpus_mode => suite_rows(corpus::suite_hyperbolic(seed, cases, q)?),
        Suite::Hyperbolic => {
            let (f, g) = pair()?;
            let (s, t) = st(p);
            let phi = functional(p, FunctionalId::Integral);
            vec![ineq::check_hyperbolic(phi, alpha, s, t, &f, &g, h_fn.as_ref(), q)?]
        }
        Suite::QuermassPl if corpus_mode => suite_rows(corpus::suite_quermass_pl(seed, cases, q)?),
        Suite::QuermassPl => {
            let (f, g) = pair()?;
            let (s, t) = st(p);
            vec![ineq::check_quermass_pl(p.i.unwrap_or(0), alpha, s, t, &f, &g, h_fn.as_ref(), q)?]
        }
        Suite::BrascampLieb => {
            let (f, g) = pair()?;
            vec![ineq::check_brascamp_lieb(alpha, lambda(p), &f, &g, q)?]
        }
        Suite::GradientPl if corpus_mode => suite_rows(corpus::suite_gradient_pl(seed, cases)?),
        Suite::GradientPl => {
            let (f, g) = pair()?;
            vec![ineq::check_gradient_pl(alpha, lambda(p), &f, &g, None, grid(c, 64))?]
        }
        Suite::Valuation if corpus_mode => corpus::suite_valuation(seed, cases, q)?,
        Suite::Valuation => {
            let (f, g) = pair()?;
            vec![ineq::check_valuation(&f, &g, p.i.unwrap_or(0), q)?]
        }
        Suite::Kubota if corpus_mode => corpus::suite_kubota(seed, cases, c.samples.unwrap_or(10_000), q)?,
        Suite::Kubota => {
            let f = one()?;
            vec![ineq::check_cauchy_kubota(&f, p.i.unwrap_or(1), p.k.unwrap_or(1), c.samples.unwrap_or(10_000), seed, q)?]
        }
        Suite::Isoperimetric if corpus_mode => corpus::suite_section6(seed, cases, q)?,
        Suite::Isoperimetric => corpus::section6_reports(&one()?, q)?,
        Suite::Entropy => vec![ineq::check_entropy(&one()?, q)?],
        Suite::WkWi => {
            let (i, k) = (p.i.unwrap_or(0), p.k.unwrap_or(1));
            vec![ineq::check_wk_wi(&one()?, i, k, q)?]
        }
        Suite::WkNorm => vec![ineq::check_wk_norm(&one()?, p.k.unwrap_or(1), q)?],
        Suite::Urysohn => vec![ineq::check_urysohn(&one()?, q)?],
        Suite::Rearrangement if corpus_mode => corpus::suite_rearrangement(seed, cases, q)?,
        Suite::Rearrangement => {
            let f = one()?;
            match p.k {
                Some(k) => vec![ineq::check_rearrangement(&f, k, q)?],
                None => corpus::rearrangement_reports(&f, q)?,
            }
        }
        Suite::SupconvSupport => {
            let t = p.t.unwrap_or(0.5);
            let g = SupGrid { step: c.grid.unwrap_or(1e-2), ..SupGrid::default() };
            if corpus_mode {
                corpus::suite_supconv_support(seed, cases, t, g)?
            } else {
                let [k0, k1]: [ConvexBody; 2] = inputs(paths, 2)?.try_into().expect("two inputs");
                vec![check_supconv_support(&k0, &k1, t, g)?]
            }
        }
    };
    Ok(Output::Reports(reports))
}

/// Control rows pass when they are flagged, primary rows when satisfied.
fn exit_code(reports: &[Report]) -> u8 {
    let bad = reports.iter().any(|r| if r.check.ends_with("-control") { r.satisfied() } else { !r.satisfied() });
    u8::from(bad)
}

fn emit(out: Output, c: &Common) -> Res<u8> {
    let mut buf: Vec<u8> = Vec::new();
    let io = |e: &dyn fmt::Display| CliError::Io(e.to_string());
    let code = match out {
        Output::Reports(reports) => {
            match c.format {
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut buf);
                    w.write_record(CSV_HEADER).map_err(|e| io(&e))?;
                    for r in &reports {
                        w.write_record(r.csv_row()).map_err(|e| io(&e))?;
                    }
                    w.flush().map_err(|e| io(&e))?;
                }
                Format::Json => {
                    serde_json::to_writer_pretty(&mut buf, &reports).map_err(|e| io(&e))?;
                    buf.push(b'\n');
                }
            }
            let code = exit_code(&reports);
            for r in reports.iter().filter(|r| !r.satisfied() && !r.check.ends_with("-control")) {
                if let Some(w) = &r.witness {
                    eprintln!("witness ({}): {w}", r.check);
                }
            }
            code
        }
        Output::Table { header, rows } => {
            match c.format {
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut buf);
                    w.write_record(&header).map_err(|e| io(&e))?;
                    for r in &rows {
                        w.write_record(r).map_err(|e| io(&e))?;
                    }
                    w.flush().map_err(|e| io(&e))?;
                }
                Format::Json => {
                    let objs: Vec<serde_json::Map<String, serde_json::Value>> = rows
                        .iter()
                        .map(|r| header.iter().map(|h| h.to_string()).zip(r.iter().map(|v| v.clone().into())).collect())
                        .collect();
                    serde_json::to_writer_pretty(&mut buf, &objs).map_err(|e| io(&e))?;
                    buf.push(b'\n');
                }
            }
            0
        }
        Output::Json(v) => {
            serde_json::to_writer_pretty(&mut buf, &v).map_err(|e| io(&e))?;
            buf.push(b'\n');
            0
        }
    };
    match &c.out {
        Some(p) => std::fs::write(p, &buf).map_err(|e| io(&e))?,
        None => std::io::stdout().write_all(&buf).map_err(|e| io(&e))?,
    }
    Ok(code)
}
