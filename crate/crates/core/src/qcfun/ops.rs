use super::layered::{Layered, Level};
use super::sampled::Sampled;
use super::{QCFunction, Radial};
use crate::error::{Error, Result};
use crate::ext::{Alpha, Ext};
use crate::geometry::{convex_hull, ConvexBody, Interval, ParallelBody, Polygon, Polytope3, SubspaceSpec, P2, P3};
use crate::means::{m_alpha_f, Weights};

fn merged_values(a: &Layered, b: &Layered, cap: f64) -> Vec<f64> {
    let mut v: Vec<f64> = a.levels().iter().chain(b.levels()).map(|l| l.t).filter(|t| *t <= cap).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Hull of a family of equal-dimensional polytopal bodies.
fn hull_of(bodies: &[ConvexBody]) -> Result<ConvexBody> {
    let dim = bodies[0].dim();
    let pts: Vec<Vec<f64>> = bodies.iter().flat_map(|b| b.points()).collect();
    Ok(match dim {
        1 => {
            let lo = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            ConvexBody::Interval(Interval { a: lo, b: hi })
        }
        2 => {
            let p2: Vec<P2> = pts.iter().map(|p| [p[0], p[1]]).collect();
            ConvexBody::Polygon(Polygon::hull(&convex_hull(&p2))?)
        }
        3 => {
            let p3: Vec<P3> = pts.iter().map(|p| [p[0], p[1], p[2]]).collect();
            ConvexBody::Polytope3(Polytope3::hull(&p3)?)
        }
        d => return Err(Error::UnsupportedDimension(d)),
    })
}

/// Exact `α = −∞` sup-convolution: `{h ≥ r} = s{f ≥ r} + t{g ≥ r}`.
fn supconv_min(w: Weights, f: &Layered, g: &Layered) -> Result<Layered> {
    let cap = f.max_value().min(g.max_value());
    let mut levels = Vec::new();
    for r in merged_values(f, g, cap) {
        let a = f.superlevel(r).expect("r ≤ max f");
        let b = g.superlevel(r).expect("r ≤ max g");
        levels.push(Level { t: r, body: a.weighted_sum(w.s, b, w.t)? });
    }
    Ok(Layered::new_unchecked(levels))
}

/// Smallest quasi-concave function above `sup{M_α(f(x), g(y)) : z = sx + ty}`:
/// its level set at `v` is the hull of every `sK_k + tL_l` with
/// `M_α(a_k, b_l) ≥ v`. For `α = −∞` this coincides with the exact rule.
fn supconv_envelope(alpha: Alpha, w: Weights, f: &Layered, g: &Layered) -> Result<Layered> {
    let (rf, rg) = match (f.common_offset(), g.common_offset()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Unsupported("general-α sup-convolution needs a common level offset".into())),
    };
    let polytopal = |l: &Layered| l.levels().iter().all(|lv| !matches!(lv.body.base, ConvexBody::Ball(_)));
    if !polytopal(f) || !polytopal(g) {
        return Err(Error::Unsupported(
            "general-α sup-convolution of layered functions needs polytopal level bodies".into(),
        ));
    }
    let mut pairs: Vec<(f64, ConvexBody)> = Vec::new();
    for a in f.levels() {
        for b in g.levels() {
            let v = m_alpha_f(alpha, w, a.t, b.t);
            if v > 0.0 {
                let body = a.body.base.scale(w.s).minkowski_sum(&b.body.base.scale(w.t))?;
                pairs.push((v, body));
            }
        }
    }
    if pairs.is_empty() {
        return Err(Error::InvalidFunction("sup-convolution vanishes identically".into()));
    }
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let radius = w.s * rf + w.t * rg;
    let mut levels = Vec::new();
    let mut acc: Option<ConvexBody> = None;
    let mut idx = 0;
    while idx < pairs.len() {
        let v = pairs[idx].0;
        let mut group: Vec<ConvexBody> = acc.iter().cloned().collect();
        while idx < pairs.len() && pairs[idx].0 == v {
            group.push(pairs[idx].1.clone());
            idx += 1;
        }
        let h = hull_of(&group)?;
        levels.push(Level { t: v, body: ParallelBody { base: h.clone(), radius } });
        acc = Some(h);
    }
    levels.reverse();
    Ok(Layered::new_unchecked(levels))
}

/// `s·f ⊕ t·g` in the α-algebra.
pub fn supconv(alpha: Alpha, w: Weights, f: &QCFunction, g: &QCFunction) -> Result<QCFunction> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: g.dim() });
    }
    match (f, g) {
        (QCFunction::CharScaled { height: c, body: k }, QCFunction::CharScaled { height: d, body: l }) => {
            let height = m_alpha_f(alpha, w, *c, *d);
            let sum = ParallelBody { base: k.clone(), radius: 0.0 }.weighted_sum(
                w.s,
                &ParallelBody { base: l.clone(), radius: 0.0 },
                w.t,
            )?;
            match sum.materialize() {
                Some(body) if sum.radius == 0.0 => Ok(QCFunction::CharScaled { height, body }),
                _ => Ok(QCFunction::Layered(Layered::new_unchecked(vec![Level { t: height, body: sum }]))),
            }
        }
        (QCFunction::ExpNegSupport { body: k0 }, QCFunction::ExpNegSupport { body: k1 }) => {
            if !(alpha.is_zero() && w.is_normalized()) {
                return Err(Error::Unsupported("e^{-h_K} sup-convolution is closed-form only for α = 0, s + t = 1".into()));
            }
            let cap = k0.intersect(k1)?;
            QCFunction::exp_neg_support(cap)
        }
        (QCFunction::Sampled(a), QCFunction::Sampled(b)) => Sampled::supconv(alpha, w, a, b).map(QCFunction::Sampled),
        _ => {
            let (Some(a), Some(b)) = (f.as_layered(), g.as_layered()) else {
                return Err(Error::Unsupported(format!(
                    "sup-convolution of {} and {} at α = {alpha}",
                    variant_name(f),
                    variant_name(g)
                )));
            };
            let h = if alpha == Ext::NegInf { supconv_min(w, &a, &b)? } else { supconv_envelope(alpha, w, &a, &b)? };
            Ok(QCFunction::Layered(h))
        }
    }
}

pub(crate) fn variant_name(f: &QCFunction) -> &'static str {
    match f {
        QCFunction::Layered(_) => "layered",
        QCFunction::Radial(_) => "radial",
        QCFunction::CharScaled { .. } => "char",
        QCFunction::ExpNegSupport { .. } => "exp-neg-support",
        QCFunction::Sampled(_) => "sampled",
    }
}

/// Projection `(P_L f)(y) = sup{f(x) : P_L x = y}` onto `L`, in `L`'s coordinates.
pub fn project_fn(f: &QCFunction, l: &SubspaceSpec) -> Result<QCFunction> {
    if f.dim() != l.ambient_dim {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: l.ambient_dim });
    }
    if l.dim == 0 || l.dim >= l.ambient_dim {
        return Err(Error::UnsupportedDimension(l.dim));
    }
    match f {
        QCFunction::Radial(r) => {
            let mut out: Radial = r.clone();
            out.dim = l.dim;
            Ok(QCFunction::Radial(out))
        }
        QCFunction::CharScaled { height, body } => Ok(QCFunction::CharScaled { height: *height, body: body.project(l)? }),
        QCFunction::ExpNegSupport { .. } => {
            Err(Error::Unsupported("projection is implemented for layered and radial functions".into()))
        }
        _ => {
            let lay = f.as_layered().expect("piecewise constant");
            let levels = lay
                .levels()
                .iter()
                .map(|lv| Ok(Level { t: lv.t, body: ParallelBody { base: lv.body.base.project(l)?, radius: lv.body.radius } }))
                .collect::<Result<Vec<_>>>()?;
            Ok(QCFunction::Layered(Layered::new_unchecked(levels)))
        }
    }
}

fn plain_levels(f: &QCFunction) -> Result<Layered> {
    let l = f
        .as_layered()
        .ok_or_else(|| Error::Unsupported(format!("lattice operations need layered input, got {}", variant_name(f))))?;
    if l.levels().iter().any(|lv| lv.body.radius != 0.0) {
        return Err(Error::Unsupported("lattice operations need level bodies without offsets".into()));
    }
    Ok(l)
}

/// `f ∧ g`: levels `{f ≥ r} ∩ {g ≥ r}`.
pub fn lattice_min(f: &QCFunction, g: &QCFunction) -> Result<QCFunction> {
    let (a, b) = (plain_levels(f)?, plain_levels(g)?);
    let cap = a.max_value().min(b.max_value());
    let mut levels = Vec::new();
    for r in merged_values(&a, &b, cap) {
        let ka = &a.superlevel(r).expect("below max").base;
        let kb = &b.superlevel(r).expect("below max").base;
        match ka.intersect(kb) {
            Ok(k) => levels.push(Level { t: r, body: ParallelBody { base: k, radius: 0.0 } }),
            Err(Error::EmptyIntersection) => break,
            Err(e) => return Err(e),
        }
    }
    if levels.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    Ok(QCFunction::Layered(Layered::new_unchecked(levels)))
}

/// `f ∨ g`: levels `{f ≥ r} ∪ {g ≥ r}`, which must be convex.
pub fn lattice_max(f: &QCFunction, g: &QCFunction) -> Result<QCFunction> {
    let (a, b) = (plain_levels(f)?, plain_levels(g)?);
    let cap = a.max_value().max(b.max_value());
    let mut levels = Vec::new();
    for r in merged_values(&a, &b, cap) {
        let body = match (a.superlevel(r), b.superlevel(r)) {
            (Some(x), Some(y)) => x.base.union_if_convex(&y.base)?,
            (Some(x), None) | (None, Some(x)) => x.base.clone(),
            (None, None) => unreachable!("r ≤ max of the two maxima"),
        };
        levels.push(Level { t: r, body: ParallelBody { base: body, radius: 0.0 } });
    }
    Ok(QCFunction::Layered(Layered::new_unchecked(levels)))
}

/// `μ_f(r) = max_{|x| ≥ r} f(x)`.
pub fn mu_envelope(f: &QCFunction, r: f64) -> f64 {
    match f {
        QCFunction::Radial(rad) => rad.profile.value((r - rad.shift).max(0.0)),
        QCFunction::ExpNegSupport { body } => {
            let depth = -body.signed_distance(&vec![0.0; body.dim()]);
            (-r * depth).exp()
        }
        _ => {
            let l = f.as_layered().expect("piecewise constant");
            l.levels().iter().rev().find(|lv| lv.body.max_norm() >= r).map_or(0.0, |lv| lv.t)
        }
    }
}
