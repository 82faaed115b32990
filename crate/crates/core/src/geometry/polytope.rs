use super::polygon::{Polygon, P2};
use crate::error::{Error, Result};
use std::collections::HashMap;

pub type P3 = [f64; 3];

#[inline]
pub fn sub3(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}
#[inline]
pub fn dot3(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
#[inline]
pub fn cross3(a: P3, b: P3) -> P3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}
#[inline]
pub fn norm3(a: P3) -> f64 {
    dot3(a, a).sqrt()
}
#[inline]
fn scale3(a: P3, l: f64) -> P3 {
    [a[0] * l, a[1] * l, a[2] * l]
}
#[inline]
fn add3(a: P3, b: P3) -> P3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn unit(a: P3) -> P3 {
    scale3(a, 1.0 / norm3(a))
}

/// Some unit vector orthogonal to `u`.
fn orthogonal(u: P3) -> P3 {
    let pick = if u[0].abs() < 0.6 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    unit(cross3(u, pick))
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    /// Closed triangulated boundary with outward normals.
    Solid { faces: Vec<[usize; 3]>, normals: Vec<P3>, offsets: Vec<f64> },
    /// Affine hull of dimension ≤ 2: an orthonormal frame and a planar body.
    Flat { origin: P3, e1: P3, e2: P3, normal: P3, shape: Polygon },
}

/// A convex polytope in `R^3`, stored as the hull of its vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope3 {
    vertices: Vec<P3>,
    shape: Shape,
}

impl Polytope3 {
    pub fn hull(points: &[P3]) -> Result<Polytope3> {
        if points.is_empty() {
            return Err(Error::InvalidBody("polytope needs at least one vertex".into()));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidBody("polytope vertices must be finite".into()));
        }
        let scale = points.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
        let tol = 1e-10 * scale;
        let p0 = points[0];
        let far = |pts: &[P3], f: &dyn Fn(P3) -> f64| -> (usize, f64) {
            pts.iter().enumerate().map(|(j, p)| (j, f(*p))).fold((0, -1.0), |b, x| if x.1 > b.1 { x } else { b })
        };
        let (i1, d1) = far(points, &|p| norm3(sub3(p, p0)));
        if d1 <= tol {
            return Ok(flat(points, p0, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]));
        }
        let e1 = unit(sub3(points[i1], p0));
        let (i2, d2) = far(points, &|p| {
            let d = sub3(p, p0);
            norm3(sub3(d, scale3(e1, dot3(d, e1))))
        });
        if d2 <= tol {
            let e2 = orthogonal(e1);
            return Ok(flat(points, p0, e1, e2));
        }
        let nrm = unit(cross3(e1, sub3(points[i2], p0)));
        let (i3, d3) = far(points, &|p| dot3(sub3(p, p0), nrm).abs());
        if d3 <= tol {
            let e2 = cross3(nrm, e1);
            return Ok(flat(points, p0, e1, e2));
        }
        solid(points, [0, i1, i2, i3], tol)
    }

    pub fn cube(side: f64) -> Polytope3 {
        let mut pts = Vec::new();
        for x in [0.0, side] {
            for y in [0.0, side] {
                for z in [0.0, side] {
                    pts.push([x, y, z]);
                }
            }
        }
        Polytope3::hull(&pts).expect("cube is valid")
    }

    pub fn vertices(&self) -> &[P3] {
        &self.vertices
    }

    pub fn is_solid(&self) -> bool {
        matches!(self.shape, Shape::Solid { .. })
    }

    pub fn face_count(&self) -> usize {
        match &self.shape {
            Shape::Solid { faces, .. } => faces.len(),
            Shape::Flat { .. } => 0,
        }
    }

    /// `[volume, surface area, total mean curvature M]`, where
    /// `M = ½ Σ_edges length · exterior dihedral angle`; for flat bodies
    /// the surface counts both sides and `M = π/2 · perimeter`.
    pub fn measures(&self) -> [f64; 3] {
        match &self.shape {
            Shape::Flat { shape, .. } => {
                [0.0, 2.0 * shape.area(), std::f64::consts::FRAC_PI_2 * shape.perimeter()]
            }
            Shape::Solid { faces, normals, .. } => {
                let v = &self.vertices;
                let mut vol = 0.0;
                let mut surf = 0.0;
                let c = v[faces[0][0]];
                let mut edges: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
                for (fi, f) in faces.iter().enumerate() {
                    let (a, b, cc) = (v[f[0]], v[f[1]], v[f[2]]);
                    vol += dot3(sub3(a, c), cross3(sub3(b, c), sub3(cc, c))) / 6.0;
                    surf += 0.5 * norm3(cross3(sub3(b, a), sub3(cc, a)));
                    for k in 0..3 {
                        let (p, q) = (f[k], f[(k + 1) % 3]);
                        edges.entry((p.min(q), p.max(q))).or_default().push(fi);
                    }
                }
                let mut m = 0.0;
                for ((p, q), fs) in &edges {
                    debug_assert_eq!(fs.len(), 2, "closed triangulation");
                    let cosang = dot3(normals[fs[0]], normals[fs[1]]).clamp(-1.0, 1.0);
                    m += 0.5 * norm3(sub3(v[*q], v[*p])) * cosang.acos();
                }
                [vol, surf, m]
            }
        }
    }

    pub fn support(&self, u: P3) -> f64 {
        self.vertices.iter().map(|p| dot3(*p, u)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_norm(&self) -> f64 {
        self.vertices.iter().map(|p| norm3(*p)).fold(0.0, f64::max)
    }

    pub fn distance(&self, x: P3) -> f64 {
        match &self.shape {
            Shape::Flat { origin, e1, e2, normal, shape } => {
                let d = sub3(x, *origin);
                let h = dot3(d, *normal);
                let q: P2 = [dot3(d, *e1), dot3(d, *e2)];
                h.hypot(shape.distance(q))
            }
            Shape::Solid { faces, normals, offsets } => {
                let outside = normals.iter().zip(offsets).any(|(n, o)| dot3(*n, x) > *o);
                if !outside {
                    return 0.0;
                }
                let v = &self.vertices;
                faces
                    .iter()
                    .map(|f| norm3(sub3(x, closest_on_triangle(x, v[f[0]], v[f[1]], v[f[2]]))))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Distance outside, minus the depth inside (zero depth when flat).
    pub fn signed_distance(&self, x: P3) -> f64 {
        match &self.shape {
            Shape::Solid { normals, offsets, .. } => {
                let depth = normals.iter().zip(offsets).map(|(n, o)| o - dot3(*n, x)).fold(f64::INFINITY, f64::min);
                if depth >= 0.0 {
                    -depth
                } else {
                    self.distance(x)
                }
            }
            Shape::Flat { .. } => self.distance(x),
        }
    }

    pub fn contains(&self, x: P3, tol: f64) -> bool {
        match &self.shape {
            Shape::Solid { normals, offsets, .. } => normals.iter().zip(offsets).all(|(n, o)| dot3(*n, x) <= o + tol),
            Shape::Flat { .. } => self.distance(x) <= tol,
        }
    }

    pub fn translate(&self, d: P3) -> Polytope3 {
        let pts: Vec<P3> = self.vertices.iter().map(|p| add3(*p, d)).collect();
        Polytope3::hull(&pts).expect("translate preserves validity")
    }

    pub fn scale(&self, l: f64) -> Polytope3 {
        let pts: Vec<P3> = self.vertices.iter().map(|p| scale3(*p, l)).collect();
        Polytope3::hull(&pts).expect("scaling preserves validity")
    }

    pub fn minkowski(&self, o: &Polytope3) -> Polytope3 {
        let mut pts = Vec::with_capacity(self.vertices.len() * o.vertices.len());
        for p in &self.vertices {
            for q in &o.vertices {
                pts.push(add3(*p, *q));
            }
        }
        Polytope3::hull(&pts).expect("sum of valid polytopes")
    }
}

fn flat(points: &[P3], origin: P3, e1: P3, e2: P3) -> Polytope3 {
    let local: Vec<P2> = points
        .iter()
        .map(|p| {
            let d = sub3(*p, origin);
            [dot3(d, e1), dot3(d, e2)]
        })
        .collect();
    let shape = Polygon::hull(&local).expect("finite points");
    let vertices =
        shape.vertices().iter().map(|q| add3(origin, add3(scale3(e1, q[0]), scale3(e2, q[1])))).collect();
    Polytope3 { vertices, shape: Shape::Flat { origin, e1, e2, normal: cross3(e1, e2), shape } }
}

struct Face {
    v: [usize; 3],
    n: P3,
    off: f64,
    alive: bool,
}

fn make_face(pts: &[P3], a: usize, b: usize, c: usize) -> Face {
    let n = unit(cross3(sub3(pts[b], pts[a]), sub3(pts[c], pts[a])));
    Face { v: [a, b, c], n, off: dot3(n, pts[a]), alive: true }
}

/// Incremental (beneath–beyond) hull for full-rank point sets.
fn solid(points: &[P3], seed: [usize; 4], eps: f64) -> Result<Polytope3> {
    let pts = points;
    let [a, b, c, d] = seed;
    let centroid = scale3(add3(add3(pts[a], pts[b]), add3(pts[c], pts[d])), 0.25);
    let mut faces: Vec<Face> = Vec::new();
    for [p, q, r] in [[a, b, c], [a, b, d], [a, c, d], [b, c, d]] {
        let mut f = make_face(pts, p, q, r);
        if dot3(f.n, centroid) > f.off {
            f = make_face(pts, p, r, q);
        }
        faces.push(f);
    }
    let mut edge_owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            edge_owner.insert((f.v[k], f.v[(k + 1) % 3]), fi);
        }
    }
    for (pi, p) in pts.iter().enumerate() {
        if seed.contains(&pi) {
            continue;
        }
        let visible: Vec<usize> =
            (0..faces.len()).filter(|&fi| faces[fi].alive && dot3(faces[fi].n, *p) - faces[fi].off > eps).collect();
        if visible.is_empty() {
            continue;
        }
        let mut horizon = Vec::new();
        for &fi in &visible {
            let v = faces[fi].v;
            for k in 0..3 {
                let (x, y) = (v[k], v[(k + 1) % 3]);
                let twin = edge_owner[&(y, x)];
                if !visible.contains(&twin) {
                    horizon.push((x, y));
                }
            }
        }
        for &fi in &visible {
            faces[fi].alive = false;
            let v = faces[fi].v;
            for k in 0..3 {
                edge_owner.remove(&(v[k], v[(k + 1) % 3]));
            }
        }
        for (x, y) in horizon {
            let f = make_face(pts, x, y, pi);
            let fi = faces.len();
            for k in 0..3 {
                edge_owner.insert((f.v[k], f.v[(k + 1) % 3]), fi);
            }
            faces.push(f);
        }
    }
    let alive: Vec<&Face> = faces.iter().filter(|f| f.alive).collect();
    let mut remap: HashMap<usize, usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut tri = Vec::with_capacity(alive.len());
    for f in &alive {
        let mut t = [0usize; 3];
        for k in 0..3 {
            let idx = *remap.entry(f.v[k]).or_insert_with(|| {
                vertices.push(pts[f.v[k]]);
                vertices.len() - 1
            });
            t[k] = idx;
        }
        tri.push(t);
    }
    let normals = alive.iter().map(|f| f.n).collect();
    let offsets = alive.iter().map(|f| f.off).collect();
    // edge consistency: every directed edge has its reverse
    let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
    for t in &tri {
        for k in 0..3 {
            *directed.entry((t[k], t[(k + 1) % 3])).or_default() += 1;
        }
    }
    for ((x, y), cnt) in &directed {
        if *cnt != 1 || directed.get(&(*y, *x)) != Some(&1) {
            return Err(Error::InvalidBody("hull construction produced an inconsistent edge set".into()));
        }
    }
    Ok(Polytope3 { vertices, shape: Shape::Solid { faces: tri, normals, offsets } })
}

/// Closest point of the triangle `abc` to `p` (Ericson, Real-Time Collision Detection).
fn closest_on_triangle(p: P3, a: P3, b: P3, c: P3) -> P3 {
    let ab = sub3(b, a);
    let ac = sub3(c, a);
    let ap = sub3(p, a);
    let d1 = dot3(ab, ap);
    let d2 = dot3(ac, ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return a;
    }
    let bp = sub3(p, b);
    let d3 = dot3(ab, bp);
    let d4 = dot3(ac, bp);
    if d3 >= 0.0 && d4 <= d3 {
        return b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return add3(a, scale3(ab, d1 / (d1 - d3)));
    }
    let cp = sub3(p, c);
    let d5 = dot3(ab, cp);
    let d6 = dot3(ac, cp);
    if d6 >= 0.0 && d5 <= d6 {
        return c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return add3(a, scale3(ac, d2 / (d2 - d6)));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        return add3(b, scale3(sub3(c, b), (d4 - d3) / ((d4 - d3) + (d5 - d6))));
    }
    let denom = 1.0 / (va + vb + vc);
    add3(a, add3(scale3(ab, vb * denom), scale3(ac, vc * denom)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cube_measures() {
        let c = Polytope3::cube(1.0);
        assert_eq!(c.vertices().len(), 8);
        let [v, s, m] = c.measures();
        assert!((v - 1.0).abs() < 1e-14);
        assert!((s - 6.0).abs() < 1e-14);
        assert!((m - 3.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn interior_and_coplanar_points_are_absorbed() {
        let mut pts = Polytope3::cube(2.0).vertices().to_vec();
        pts.push([1.0, 1.0, 1.0]);
        pts.push([1.0, 1.0, 0.0]);
        pts.push([1.0, 0.0, 0.0]);
        let p = Polytope3::hull(&pts).unwrap();
        let [v, s, m] = p.measures();
        assert!((v - 8.0).abs() < 1e-12);
        assert!((s - 24.0).abs() < 1e-12);
        assert!((m - 6.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn flat_bodies() {
        let sq = Polytope3::hull(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
        assert!(!sq.is_solid());
        let [v, s, m] = sq.measures();
        assert_eq!(v, 0.0);
        assert!((s - 2.0).abs() < 1e-14);
        assert!((m - 2.0 * PI).abs() < 1e-14);
        assert!((sq.distance([0.5, 0.5, 2.0]) - 2.0).abs() < 1e-14);
        let pt = Polytope3::hull(&[[1.0, 2.0, 3.0]]).unwrap();
        assert_eq!(pt.measures(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn distance_to_cube() {
        let c = Polytope3::cube(1.0);
        assert_eq!(c.distance([0.5, 0.5, 0.5]), 0.0);
        assert!((c.distance([2.0, 0.5, 0.5]) - 1.0).abs() < 1e-14);
        assert!((c.distance([2.0, 2.0, 2.0]) - 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn octahedron_mean_curvature() {
        let pts = [
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ];
        let o = Polytope3::hull(&pts).unwrap();
        let [v, s, m] = o.measures();
        assert!((v - 4.0 / 3.0).abs() < 1e-14);
        assert!((s - 4.0 * 3f64.sqrt()).abs() < 1e-13);
        // 12 edges of length √2, exterior angle π − arccos(−1/3)
        let theta = PI - (-1.0f64 / 3.0).acos();
        assert!((m - 6.0 * 2f64.sqrt() * theta).abs() < 1e-13);
    }
}
