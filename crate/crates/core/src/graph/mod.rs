//! Finite windows of infinite bounded-degree graphs, subgraphs with ambient
//! boundaries, the max-gradient operators and the norms used to compare them.

mod ops;
mod subgraph;
mod window;

pub use ops::{
    coarea_integral, cut_boundary_size, gradient, level_set, p_norm, rayleigh_quotient, thick_gradient, GradientKind,
    GradientOperator, VertexFunction,
};
pub use subgraph::Subgraph;
pub use window::{AmbientWindow, UNREACHED};

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Dense vertex id of a window, `0..window.len()`.
pub type VertexId = usize;

/// Norm index `p ∈ [1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Lp {
    Finite(f64),
    Infinity,
}

impl Lp {
    pub const ONE: Lp = Lp::Finite(1.0);
    pub const TWO: Lp = Lp::Finite(2.0);

    pub fn finite(p: f64) -> Lp {
        assert!(p >= 1.0 && p.is_finite(), "norm index must lie in [1, ∞)");
        Lp::Finite(p)
    }

    pub fn is_one(self) -> bool {
        matches!(self, Lp::Finite(p) if p == 1.0)
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Lp::Infinity)
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Lp::Finite(p) => 1.0 / p,
            Lp::Infinity => 0.0,
        }
    }
}

impl fmt::Display for Lp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lp::Finite(p) => write!(f, "{p}"),
            Lp::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Lp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Lp::Infinity),
            other => {
                let p: f64 = other.parse().map_err(|_| format!("bad norm index `{s}`"))?;
                if p.is_infinite() && p > 0.0 {
                    Ok(Lp::Infinity)
                } else if p >= 1.0 {
                    Ok(Lp::Finite(p))
                } else {
                    Err(format!("norm index must be at least 1, got {s}"))
                }
            }
        }
    }
}

impl Serialize for Lp {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Lp::Finite(p) => serializer.serialize_f64(*p),
            Lp::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Lp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(deserializer)? {
            serde_json::Value::Number(n) => {
                n.as_f64().map(Lp::Finite).ok_or_else(|| serde::de::Error::custom("bad norm index"))
            }
            serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            _ => Err(serde::de::Error::custom("norm index must be a number or \"inf\"")),
        }
    }
}

/// A nonnegative real or `+∞`. Infinity is a distinguished variant, never a
/// large float.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value {
    Finite(f64),
    Infinite,
}

impl Value {
    pub fn is_finite(self) -> bool {
        matches!(self, Value::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Value::Finite(v) => Some(v),
            Value::Infinite => None,
        }
    }

    /// Multiplies by a nonnegative scalar; `0 · ∞` is taken to be `∞`.
    pub fn scale(self, c: f64) -> Value {
        match self {
            Value::Finite(v) => Value::Finite(v * c),
            Value::Infinite => Value::Infinite,
        }
    }

    pub fn min(self, other: Value) -> Value {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Value::Finite(a), Value::Finite(b)) => a.partial_cmp(b),
            (Value::Finite(_), Value::Infinite) => Some(Ordering::Less),
            (Value::Infinite, Value::Finite(_)) => Some(Ordering::Greater),
            (Value::Infinite, Value::Infinite) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(v) => write!(f, "{v}"),
            Value::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Finite(v) => serializer.serialize_f64(*v),
            Value::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(deserializer)? {
            serde_json::Value::Number(n) => {
                n.as_f64().map(Value::Finite).ok_or_else(|| serde::de::Error::custom("bad value"))
            }
            serde_json::Value::String(s) if s == "inf" => Ok(Value::Infinite),
            _ => Err(serde::de::Error::custom("value must be a number or \"inf\"")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lp_parses_and_prints() {
        assert_eq!("inf".parse::<Lp>().unwrap(), Lp::Infinity);
        assert_eq!("2".parse::<Lp>().unwrap(), Lp::Finite(2.0));
        assert!("0.5".parse::<Lp>().is_err());
        assert_eq!(Lp::Infinity.to_string(), "inf");
        assert_eq!(serde_json::to_string(&Lp::Infinity).unwrap(), "\"inf\"");
    }

    #[test]
    fn infinity_orders_above_finite_values() {
        assert!(Value::Infinite > Value::Finite(1e300));
        assert_eq!(Value::Finite(2.0).min(Value::Infinite), Value::Finite(2.0));
        let json = serde_json::to_string(&[Value::Finite(0.5), Value::Infinite]).unwrap();
        assert_eq!(json, "[0.5,\"inf\"]");
        let back: Vec<Value> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![Value::Finite(0.5), Value::Infinite]);
    }
}
