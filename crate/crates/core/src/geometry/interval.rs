use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A compact interval `[a, b]` of the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Interval> {
        if !(a.is_finite() && b.is_finite()) || a > b {
            return Err(Error::InvalidBody(format!("interval needs finite a ≤ b, got [{a}, {b}]")));
        }
        Ok(Interval { a, b })
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn support(&self, u: f64) -> f64 {
        (self.a * u).max(self.b * u)
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.a - tol && x <= self.b + tol
    }

    pub fn distance(&self, x: f64) -> f64 {
        (self.a - x).max(x - self.b).max(0.0)
    }

    pub fn minkowski(&self, o: &Interval) -> Interval {
        Interval { a: self.a + o.a, b: self.b + o.b }
    }

    pub fn scale(&self, l: f64) -> Interval {
        let (p, q) = (self.a * l, self.b * l);
        Interval { a: p.min(q), b: p.max(q) }
    }

    pub fn translate(&self, d: f64) -> Interval {
        Interval { a: self.a + d, b: self.b + d }
    }

    pub fn intersect(&self, o: &Interval) -> Option<Interval> {
        let a = self.a.max(o.a);
        let b = self.b.min(o.b);
        (a <= b).then_some(Interval { a, b })
    }

    pub fn hull(&self, o: &Interval) -> Interval {
        Interval { a: self.a.min(o.a), b: self.b.max(o.b) }
    }
}
