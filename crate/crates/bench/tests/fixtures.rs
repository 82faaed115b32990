use quermass::quermass::{w, QuadratureSpec};
use quermass_bench::{layered, polygon};

#[test]
fn fixtures_are_reproducible() {
    let q = QuadratureSpec::default();
    let (a, b) = (layered(3, 4), layered(3, 4));
    for (f, g) in a.iter().zip(&b) {
        assert_eq!(w(f, 0, &q).unwrap(), w(g, 0, &q).unwrap());
    }
    assert_eq!(polygon(5, 7), polygon(5, 7));
}

#[test]
fn polygons_contain_the_origin() {
    for c in 0..20 {
        assert!(polygon(c, 8).origin_interior(), "case {c}");
    }
}
