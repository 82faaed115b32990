//! Exact convex bodies in dimensions 1–3 (and balls in any dimension),
//! their quermassintegrals, Minkowski structure, projections and random
//! subspaces.

mod interval;
mod polygon;
mod polytope;
mod subspace;

pub use interval::Interval;
pub use polygon::{convex_hull, random_convex_polygon, Polygon, P2};
pub use polytope::{Polytope3, P3};
pub use subspace::{random_subspace, random_subspace_with, SubspaceSpec};

pub use crate::numeric::kappa;
use crate::error::{Error, Result};
use crate::numeric::binomial;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// The quermassintegrals `[W_0, …, W_n]` of a body in `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuermassVector {
    pub dim: usize,
    pub values: Vec<f64>,
}

impl QuermassVector {
    pub fn ball(n: usize, r: f64) -> QuermassVector {
        QuermassVector { dim: n, values: (0..=n).map(|i| kappa(n) * r.powi((n - i) as i32)).collect() }
    }

    pub fn w(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Quermassintegrals of the parallel body `K + ρB`.
    pub fn parallel(&self, rho: f64) -> QuermassVector {
        let n = self.dim;
        let values = (0..=n)
            .map(|i| (0..=n - i).map(|j| binomial(n - i, j) * self.values[i + j] * rho.powi(j as i32)).sum())
            .collect();
        QuermassVector { dim: n, values }
    }

    pub fn scale(&self, c: f64) -> QuermassVector {
        QuermassVector { dim: self.dim, values: self.values.iter().map(|v| v * c).collect() }
    }
}

/// A Euclidean ball `B_r(c)` in `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn dim(&self) -> usize {
        self.center.len()
    }
}

/// A non-empty compact convex set.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexBody {
    Interval(Interval),
    Polygon(Polygon),
    Polytope3(Polytope3),
    Ball(Ball),
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

impl ConvexBody {
    pub fn interval(a: f64, b: f64) -> Result<ConvexBody> {
        Interval::new(a, b).map(ConvexBody::Interval)
    }

    pub fn polygon(vertices: Vec<P2>) -> Result<ConvexBody> {
        Polygon::new(vertices).map(ConvexBody::Polygon)
    }

    pub fn polytope3(vertices: &[P3]) -> Result<ConvexBody> {
        Polytope3::hull(vertices).map(ConvexBody::Polytope3)
    }

    /// A ball; one-dimensional balls are stored as intervals.
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<ConvexBody> {
        if center.is_empty() {
            return Err(Error::InvalidBody("ball dimension must be positive".into()));
        }
        if !(radius >= 0.0 && radius.is_finite()) || center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidBody(format!("ball radius must be finite and ≥ 0, got {radius}")));
        }
        if center.len() == 1 {
            return Interval::new(center[0] - radius, center[0] + radius).map(ConvexBody::Interval);
        }
        Ok(ConvexBody::Ball(Ball { center, radius }))
    }

    /// Origin-centred ball of radius `r` in `R^n`.
    pub fn centered_ball(n: usize, r: f64) -> ConvexBody {
        ConvexBody::ball(vec![0.0; n], r).expect("valid ball")
    }

    pub fn unit_square() -> ConvexBody {
        ConvexBody::Polygon(Polygon::from_box(0.0, 0.0, 1.0, 1.0))
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Interval(_) => 1,
            ConvexBody::Polygon(_) => 2,
            ConvexBody::Polytope3(_) => 3,
            ConvexBody::Ball(b) => b.dim(),
        }
    }

    /// Closed-form quermassintegrals.
    pub fn quermass(&self) -> QuermassVector {
        let values = match self {
            ConvexBody::Interval(i) => vec![i.length(), 2.0],
            ConvexBody::Polygon(p) => vec![p.area(), p.perimeter() / 2.0, PI],
            ConvexBody::Polytope3(p) => {
                let [v, s, m] = p.measures();
                vec![v, s / 3.0, m / 3.0, 4.0 * PI / 3.0]
            }
            ConvexBody::Ball(b) => return QuermassVector::ball(b.dim(), b.radius),
        };
        QuermassVector { dim: self.dim(), values }
    }

    pub fn volume(&self) -> f64 {
        self.quermass().values[0]
    }

    pub fn mean_width(&self) -> f64 {
        let n = self.dim();
        2.0 / kappa(n) * self.quermass().values[n - 1]
    }

    /// Support function `h_K(u)`.
    pub fn support(&self, u: &[f64]) -> f64 {
        match self {
            ConvexBody::Interval(i) => i.support(u[0]),
            ConvexBody::Polygon(p) => p.support([u[0], u[1]]),
            ConvexBody::Polytope3(p) => p.support([u[0], u[1], u[2]]),
            ConvexBody::Ball(b) => dot(&b.center, u) + b.radius * norm(u),
        }
    }

    pub fn distance(&self, x: &[f64]) -> f64 {
        match self {
            ConvexBody::Interval(i) => i.distance(x[0]),
            ConvexBody::Polygon(p) => p.distance([x[0], x[1]]),
            ConvexBody::Polytope3(p) => p.distance([x[0], x[1], x[2]]),
            ConvexBody::Ball(b) => {
                let d: Vec<f64> = x.iter().zip(&b.center).map(|(a, c)| a - c).collect();
                (norm(&d) - b.radius).max(0.0)
            }
        }
    }

    /// Distance outside, minus the depth inside.
    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        match self {
            ConvexBody::Interval(i) => (i.a - x[0]).max(x[0] - i.b),
            ConvexBody::Polygon(p) => p.signed_distance([x[0], x[1]]),
            ConvexBody::Polytope3(p) => p.signed_distance([x[0], x[1], x[2]]),
            ConvexBody::Ball(b) => {
                let d: Vec<f64> = x.iter().zip(&b.center).map(|(a, c)| a - c).collect();
                norm(&d) - b.radius
            }
        }
    }

    /// Points whose hull, thickened by the returned radius, is the body.
    pub fn generators(&self) -> (Vec<Vec<f64>>, f64) {
        match self {
            ConvexBody::Ball(b) => (vec![b.center.clone()], b.radius),
            _ => (self.points(), 0.0),
        }
    }

    /// Splits off a ball summand: the body equals `core + r·B`.
    pub fn split_ball(&self) -> (ConvexBody, f64) {
        match self {
            ConvexBody::Ball(b) => {
                let core = match b.dim() {
                    2 => ConvexBody::Polygon(Polygon::point([b.center[0], b.center[1]])),
                    3 => ConvexBody::Polytope3(
                        Polytope3::hull(&[[b.center[0], b.center[1], b.center[2]]]).expect("finite point"),
                    ),
                    _ => ConvexBody::Ball(Ball { center: b.center.clone(), radius: 0.0 }),
                };
                (core, b.radius)
            }
            other => (other.clone(), 0.0),
        }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        match self {
            ConvexBody::Interval(i) => i.contains(x[0], tol),
            ConvexBody::Polytope3(p) => p.contains([x[0], x[1], x[2]], tol),
            _ => self.distance(x) <= tol,
        }
    }

    /// `max_{x ∈ K} |x|`.
    pub fn max_norm(&self) -> f64 {
        match self {
            ConvexBody::Interval(i) => i.a.abs().max(i.b.abs()),
            ConvexBody::Polygon(p) => p.max_norm(),
            ConvexBody::Polytope3(p) => p.max_norm(),
            ConvexBody::Ball(b) => norm(&b.center) + b.radius,
        }
    }

    /// Vertices as dense coordinate vectors (the centre for a ball).
    pub fn points(&self) -> Vec<Vec<f64>> {
        match self {
            ConvexBody::Interval(i) => vec![vec![i.a], vec![i.b]],
            ConvexBody::Polygon(p) => p.vertices().iter().map(|v| v.to_vec()).collect(),
            ConvexBody::Polytope3(p) => p.vertices().iter().map(|v| v.to_vec()).collect(),
            ConvexBody::Ball(b) => vec![b.center.clone()],
        }
    }

    pub fn minkowski_sum(&self, other: &ConvexBody) -> Result<ConvexBody> {
        check_dim(self.dim(), other.dim())?;
        Ok(match (self, other) {
            (ConvexBody::Interval(a), ConvexBody::Interval(b)) => ConvexBody::Interval(a.minkowski(b)),
            (ConvexBody::Polygon(a), ConvexBody::Polygon(b)) => ConvexBody::Polygon(a.minkowski(b)),
            (ConvexBody::Polytope3(a), ConvexBody::Polytope3(b)) => ConvexBody::Polytope3(a.minkowski(b)),
            (ConvexBody::Ball(a), ConvexBody::Ball(b)) => ConvexBody::Ball(Ball {
                center: a.center.iter().zip(&b.center).map(|(x, y)| x + y).collect(),
                radius: a.radius + b.radius,
            }),
            _ => {
                return Err(Error::Unsupported(
                    "Minkowski sum of a ball and a polytope is not materialized; use parallel quermassintegrals".into(),
                ))
            }
        })
    }

    /// Dilation `λK` for `λ ≥ 0`.
    pub fn scale(&self, l: f64) -> ConvexBody {
        assert!(l >= 0.0, "dilation factor must be nonnegative");
        match self {
            ConvexBody::Interval(i) => ConvexBody::Interval(i.scale(l)),
            ConvexBody::Polygon(p) => ConvexBody::Polygon(p.scale(l)),
            ConvexBody::Polytope3(p) => ConvexBody::Polytope3(p.scale(l)),
            ConvexBody::Ball(b) => {
                ConvexBody::Ball(Ball { center: b.center.iter().map(|c| c * l).collect(), radius: b.radius * l })
            }
        }
    }

    pub fn translate(&self, d: &[f64]) -> ConvexBody {
        match self {
            ConvexBody::Interval(i) => ConvexBody::Interval(i.translate(d[0])),
            ConvexBody::Polygon(p) => ConvexBody::Polygon(p.translate([d[0], d[1]])),
            ConvexBody::Polytope3(p) => ConvexBody::Polytope3(p.translate([d[0], d[1], d[2]])),
            ConvexBody::Ball(b) => ConvexBody::Ball(Ball {
                center: b.center.iter().zip(d).map(|(c, x)| c + x).collect(),
                radius: b.radius,
            }),
        }
    }

    /// Orthogonal projection onto a subspace of dimension 1 or 2, expressed in
    /// the subspace's own orthonormal coordinates.
    pub fn project(&self, l: &SubspaceSpec) -> Result<ConvexBody> {
        check_dim(self.dim(), l.ambient_dim)?;
        if l.dim == 0 || l.dim > 2 || l.dim >= l.ambient_dim {
            return Err(Error::UnsupportedDimension(l.dim));
        }
        if let ConvexBody::Ball(b) = self {
            let c = l.coords(&b.center);
            return ConvexBody::ball(c, b.radius);
        }
        let pts: Vec<Vec<f64>> = self.points().iter().map(|p| l.coords(p)).collect();
        if l.dim == 1 {
            let lo = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            ConvexBody::interval(lo, hi)
        } else {
            let p2: Vec<P2> = pts.iter().map(|p| [p[0], p[1]]).collect();
            Polygon::hull(&p2).map(ConvexBody::Polygon)
        }
    }

    /// Convex intersection; an empty result is `Error::EmptyIntersection`.
    pub fn intersect(&self, other: &ConvexBody) -> Result<ConvexBody> {
        check_dim(self.dim(), other.dim())?;
        match (self, other) {
            (ConvexBody::Interval(a), ConvexBody::Interval(b)) => {
                a.intersect(b).map(ConvexBody::Interval).ok_or(Error::EmptyIntersection)
            }
            (ConvexBody::Polygon(a), ConvexBody::Polygon(b)) => {
                a.intersect(b).map(ConvexBody::Polygon).ok_or(Error::EmptyIntersection)
            }
            _ => Err(Error::Unsupported("intersection is implemented for intervals and polygons".into())),
        }
    }

    /// `K ∪ L` when it is convex, decided by inclusion–exclusion of `W_0`
    /// (and of `W_1`, so that lower-dimensional bodies are covered too).
    pub fn union_if_convex(&self, other: &ConvexBody) -> Result<ConvexBody> {
        check_dim(self.dim(), other.dim())?;
        let cap = match self.intersect(other) {
            Ok(c) => c,
            Err(Error::EmptyIntersection) => return Err(Error::NonConvexUnion { excess: f64::INFINITY }),
            Err(e) => return Err(e),
        };
        let hull = match (self, other) {
            (ConvexBody::Interval(a), ConvexBody::Interval(b)) => ConvexBody::Interval(a.hull(b)),
            (ConvexBody::Polygon(a), ConvexBody::Polygon(b)) => ConvexBody::Polygon(a.hull_with(b)),
            _ => unreachable!("intersect restricts the variants"),
        };
        let (wh, wk, wl, wc) = (hull.quermass(), self.quermass(), other.quermass(), cap.quermass());
        let mut excess = 0.0f64;
        for i in 0..self.dim() {
            let e = wh.values[i] - (wk.values[i] + wl.values[i] - wc.values[i]);
            let scale = wh.values[i].abs().max(1e-300);
            excess = excess.max(e / scale);
        }
        if excess > 1e-9 {
            return Err(Error::NonConvexUnion { excess });
        }
        Ok(hull)
    }

    /// Polar body; the origin must be interior.
    pub fn polar(&self) -> Result<ConvexBody> {
        match self {
            ConvexBody::Interval(i) => {
                if !(i.a < 0.0 && i.b > 0.0) {
                    return Err(Error::InvalidBody("origin is not interior; polar is unbounded".into()));
                }
                ConvexBody::interval(1.0 / i.a, 1.0 / i.b)
            }
            ConvexBody::Polygon(p) => p.polar().map(ConvexBody::Polygon),
            ConvexBody::Ball(b) if norm(&b.center) == 0.0 && b.radius > 0.0 => {
                ConvexBody::ball(b.center.clone(), 1.0 / b.radius)
            }
            _ => Err(Error::Unsupported("polar bodies are implemented for intervals, polygons and centred balls".into())),
        }
    }

    /// True when the origin is an interior point.
    pub fn origin_interior(&self) -> bool {
        match self {
            ConvexBody::Interval(i) => i.a < 0.0 && i.b > 0.0,
            ConvexBody::Polygon(p) => p.origin_interior(),
            ConvexBody::Polytope3(p) => {
                p.is_solid() && p.contains([0.0; 3], 0.0) && p.distance([0.0; 3]) == 0.0 && {
                    // strict interior: every face at positive distance
                    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
                        .iter()
                        .all(|u| p.support(*u) > 0.0 && p.support([-u[0], -u[1], -u[2]]) > 0.0)
                }
            }
            ConvexBody::Ball(b) => norm(&b.center) < b.radius,
        }
    }

    /// `h_K(x)` evaluated on a point of `R^n`; the support function is
    /// positively homogeneous so `x` need not be a unit vector.
    pub fn support_at(&self, x: &[f64]) -> f64 {
        self.support(x)
    }

    /// Ball of equal mean width centred at the origin.
    pub fn mean_width_ball(&self) -> ConvexBody {
        let n = self.dim();
        let r = self.quermass().values[n - 1] / kappa(n);
        ConvexBody::centered_ball(n, r)
    }
}

/// The outer parallel body `K + ρB`, kept implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct ParallelBody {
    pub base: ConvexBody,
    pub radius: f64,
}

impl ParallelBody {
    pub fn new(base: ConvexBody, radius: f64) -> Result<ParallelBody> {
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::Range(format!("parallel radius must be finite and ≥ 0, got {radius}")));
        }
        Ok(ParallelBody { base, radius })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn quermass(&self) -> QuermassVector {
        parallel_quermass(&self.base, self.radius)
    }

    pub fn distance(&self, x: &[f64]) -> f64 {
        (self.base.distance(x) - self.radius).max(0.0)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.base.distance(x) <= self.radius + tol
    }

    pub fn support(&self, u: &[f64]) -> f64 {
        self.base.support(u) + self.radius * norm(u)
    }

    pub fn max_norm(&self) -> f64 {
        self.base.max_norm() + self.radius
    }

    /// Materializes the body when it is representable exactly.
    /// `self ⊆ other`, decided exactly through generators and signed distances.
    pub fn is_subset_of(&self, other: &ParallelBody, tol: f64) -> bool {
        let (gens, extra) = self.base.generators();
        let r = self.radius + extra;
        gens.iter().all(|g| other.base.signed_distance(g) + r <= other.radius + tol)
    }

    pub fn scale(&self, l: f64) -> ParallelBody {
        ParallelBody { base: self.base.scale(l), radius: self.radius * l }
    }

    /// Minkowski sum `sA + tB` of two parallel bodies, when representable.
    pub fn weighted_sum(&self, s: f64, other: &ParallelBody, t: f64) -> Result<ParallelBody> {
        let (ca, ra) = self.base.split_ball();
        let (cb, rb) = other.base.split_ball();
        let core = ca.scale(s).minkowski_sum(&cb.scale(t))?;
        ParallelBody::new(core, s * (self.radius + ra) + t * (other.radius + rb))
    }

    pub fn materialize(&self) -> Option<ConvexBody> {
        if self.radius == 0.0 {
            return Some(self.base.clone());
        }
        match &self.base {
            ConvexBody::Interval(i) => Some(ConvexBody::Interval(Interval { a: i.a - self.radius, b: i.b + self.radius })),
            ConvexBody::Ball(b) => Some(ConvexBody::Ball(Ball { center: b.center.clone(), radius: b.radius + self.radius })),
            _ => None,
        }
    }
}

/// `W_i(K + ρB) = Σ_j C(n−i, j) W_{i+j}(K) ρ^j`.
pub fn parallel_quermass(k: &ConvexBody, rho: f64) -> QuermassVector {
    k.quermass().parallel(rho)
}

pub fn quermassintegrals(k: &ConvexBody) -> QuermassVector {
    k.quermass()
}

pub fn support(k: &ConvexBody, u: &[f64]) -> f64 {
    k.support(u)
}

pub fn mean_width(k: &ConvexBody) -> f64 {
    k.mean_width()
}

/// JSON form of a body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodySpec {
    Interval { a: f64, b: f64 },
    Polygon { vertices: Vec<P2> },
    Polytope3 { vertices: Vec<P3> },
    Ball { dim: usize, center: Vec<f64>, radius: f64 },
}

impl TryFrom<BodySpec> for ConvexBody {
    type Error = Error;

    fn try_from(s: BodySpec) -> Result<ConvexBody> {
        match s {
            BodySpec::Interval { a, b } => ConvexBody::interval(a, b),
            BodySpec::Polygon { vertices } => ConvexBody::polygon(vertices),
            BodySpec::Polytope3 { vertices } => ConvexBody::polytope3(&vertices),
            BodySpec::Ball { dim, center, radius } => {
                if center.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: center.len() });
                }
                ConvexBody::ball(center, radius)
            }
        }
    }
}

impl From<&ConvexBody> for BodySpec {
    fn from(k: &ConvexBody) -> BodySpec {
        match k {
            ConvexBody::Interval(i) => BodySpec::Interval { a: i.a, b: i.b },
            ConvexBody::Polygon(p) => BodySpec::Polygon { vertices: p.vertices().to_vec() },
            ConvexBody::Polytope3(p) => BodySpec::Polytope3 { vertices: p.vertices().to_vec() },
            ConvexBody::Ball(b) => BodySpec::Ball { dim: b.dim(), center: b.center.clone(), radius: b.radius },
        }
    }
}

impl Serialize for ConvexBody {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BodySpec::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConvexBody {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<ConvexBody, D::Error> {
        let spec = BodySpec::deserialize(d)?;
        ConvexBody::try_from(spec).map_err(serde::de::Error::custom)
    }
}
