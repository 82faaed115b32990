use criterion::{black_box, criterion_group, criterion_main, Criterion};
use quermass::counterexample::{cap_profiles, check_supconv_support, f_p, CapBody, SupGrid};
use quermass::qcfun::supconv;
use quermass::quermass::{dual_psi, quermass_vector, steiner_poly, QuadratureSpec};
use quermass::{ConvexBody, Ext, QCFunction, Weights};
use quermass_bench::{layered, polygon};

fn quermass_kernels(c: &mut Criterion) {
    let q = QuadratureSpec::default();
    let fs = layered(8, 5);
    c.bench_function("quermass_vector/8x5 levels", |b| {
        b.iter(|| fs.iter().map(|f| quermass_vector(black_box(f), &q).unwrap()).collect::<Vec<_>>())
    });
    c.bench_function("steiner_poly/8x5 levels", |b| {
        b.iter(|| fs.iter().map(|f| steiner_poly(black_box(f), &q).unwrap()).collect::<Vec<_>>())
    });
    let g = QCFunction::char_scaled(2.0, ConvexBody::centered_ball(2, 1.0)).unwrap();
    c.bench_function("dual_psi/char ball", |b| b.iter(|| dual_psi(black_box(&g), 1e-4, &q).unwrap()));
}

fn supconv_kernels(c: &mut Criterion) {
    let fs = layered(2, 6);
    let w = Weights::lambda(0.5).unwrap();
    c.bench_function("supconv/alpha=0, 6x6 levels", |b| {
        b.iter(|| supconv(Ext::Finite(0.0), w, black_box(&fs[0]), black_box(&fs[1])).unwrap())
    });
    let (k0, k1) = (polygon(0, 8), polygon(1, 8));
    c.bench_function("supconv_support/step 0.05", |b| {
        b.iter(|| check_supconv_support(&k0, &k1, 0.4, SupGrid { half: 0.5, step: 0.05 }).unwrap())
    });
}

fn counterexample_kernels(c: &mut Criterion) {
    let q = QuadratureSpec::default();
    let o = cap_profiles(CapBody::from_phi(3, 0.3).unwrap());
    c.bench_function("f_p/cap n=3 p=2", |b| b.iter(|| f_p(black_box(&o), 3, 2.0, &q).unwrap()));
}

criterion_group!(benches, quermass_kernels, supconv_kernels, counterexample_kernels);
criterion_main!(benches);
