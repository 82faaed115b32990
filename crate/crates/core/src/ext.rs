//! Extended reals `[−∞, +∞]` with explicit infinities.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

/// An extended real number. Infinities are symbolic, never saturated floats.
#[derive(Debug, Clone, Copy)]
pub enum Ext {
    NegInf,
    Finite(f64),
    PosInf,
}

/// Concavity parameters (α, γ, β) live on the extended line.
pub type Alpha = Ext;

impl Ext {
    pub const ZERO: Ext = Ext::Finite(0.0);

    /// Maps float infinities to the symbolic variants. NaN is rejected.
    pub fn from_f64(x: f64) -> Ext {
        assert!(!x.is_nan(), "NaN is not an extended real");
        if x == f64::INFINITY {
            Ext::PosInf
        } else if x == f64::NEG_INFINITY {
            Ext::NegInf
        } else {
            Ext::Finite(x)
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Ext::NegInf => f64::NEG_INFINITY,
            Ext::Finite(x) => x,
            Ext::PosInf => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Ext::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Ext::Finite(_))
    }

    pub fn is_zero(self) -> bool {
        matches!(self, Ext::Finite(x) if x == 0.0)
    }

    /// `self − other` with `∞ − ∞ := 0` (both sides agree symbolically).
    pub fn sub(self, other: Ext) -> Ext {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => Ext::Finite(a - b),
            (Ext::PosInf, Ext::PosInf) | (Ext::NegInf, Ext::NegInf) => Ext::ZERO,
            (Ext::PosInf, _) | (_, Ext::NegInf) => Ext::PosInf,
            (Ext::NegInf, _) | (_, Ext::PosInf) => Ext::NegInf,
        }
    }

    /// Sum with the convention `(+∞) + (−∞) = 0`; callers that care treat it specially.
    pub fn add(self, other: Ext) -> Ext {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => Ext::Finite(a + b),
            (Ext::PosInf, Ext::NegInf) | (Ext::NegInf, Ext::PosInf) => Ext::ZERO,
            (Ext::PosInf, _) | (_, Ext::PosInf) => Ext::PosInf,
            _ => Ext::NegInf,
        }
    }

    /// Reciprocal with `1/±∞ = 0`; `1/0` is rejected by the caller.
    pub fn recip(self) -> Option<Ext> {
        match self {
            Ext::Finite(x) if x == 0.0 => None,
            Ext::Finite(x) => Some(Ext::Finite(1.0 / x)),
            _ => Some(Ext::ZERO),
        }
    }

    /// Approximate equality: identical infinities, or finite values within `tol`.
    pub fn approx_eq(self, other: Ext, tol: f64) -> bool {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs())),
            (Ext::PosInf, Ext::PosInf) | (Ext::NegInf, Ext::NegInf) => true,
            _ => false,
        }
    }
}

impl From<f64> for Ext {
    fn from(x: f64) -> Ext {
        Ext::from_f64(x)
    }
}

impl PartialEq for Ext {
    fn eq(&self, other: &Ext) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ext {}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Ext) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ext {
    fn cmp(&self, other: &Ext) -> Ordering {
        fn rank(e: &Ext) -> u8 {
            match e {
                Ext::NegInf => 0,
                Ext::Finite(_) => 1,
                Ext::PosInf => 2,
            }
        }
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => a.partial_cmp(b).unwrap_or(Ordering::Equal),
            _ => rank(self).cmp(&rank(other)),
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::PosInf => write!(f, "inf"),
            Ext::Finite(x) => write!(f, "{x}"),
        }
    }
}

impl std::str::FromStr for Ext {
    type Err = String;

    fn from_str(s: &str) -> Result<Ext, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" | "+infinity" => Ok(Ext::PosInf),
            "-inf" | "-infinity" => Ok(Ext::NegInf),
            other => {
                if let Some((p, q)) = other.split_once('/') {
                    let p: f64 = p.trim().parse().map_err(|e| format!("bad numerator in {s:?}: {e}"))?;
                    let q: f64 = q.trim().parse().map_err(|e| format!("bad denominator in {s:?}: {e}"))?;
                    return Ok(Ext::Finite(p / q));
                }
                let x: f64 = other.parse().map_err(|e| format!("bad extended real {s:?}: {e}"))?;
                if x.is_nan() {
                    return Err("NaN is not an extended real".into());
                }
                Ok(Ext::from_f64(x))
            }
        }
    }
}

impl Serialize for Ext {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Ext::Finite(x) => s.serialize_f64(*x),
            Ext::PosInf => s.serialize_str("inf"),
            Ext::NegInf => s.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Ext {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Ext, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Ext::Finite(x)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_order() {
        assert!(Ext::NegInf < Ext::Finite(-1e300));
        assert!(Ext::Finite(1e300) < Ext::PosInf);
        assert_eq!(Ext::Finite(2.0).max(Ext::NegInf), Ext::Finite(2.0));
    }

    #[test]
    fn parse_and_serde_round_trip() {
        for s in ["inf", "-inf", "0.25", "1/3"] {
            let e: Ext = s.parse().unwrap();
            let j = serde_json::to_string(&e).unwrap();
            let back: Ext = serde_json::from_str(&j).unwrap();
            assert_eq!(e, back);
        }
    }

    #[test]
    fn infinite_arithmetic() {
        assert_eq!(Ext::PosInf.sub(Ext::PosInf), Ext::ZERO);
        assert_eq!(Ext::Finite(1.0).sub(Ext::PosInf), Ext::NegInf);
        assert_eq!(Ext::PosInf.recip(), Some(Ext::ZERO));
    }
}
