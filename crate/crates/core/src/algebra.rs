//! Weight algebras: totally ordered carriers with a combining operation.
//!
//! Every problem instance fixes one algebra. The carrier is a 64-bit
//! integer plus a distinguished `Error` element which is absorbing for
//! `combine` and maximum under the algebra's order. Overflow in
//! `combine` saturates to `Error`.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// A weight value: a finite integer or the absorbing `Error` element.
///
/// `Error` plays the role of the order's infinity: `+inf` for
/// minimization algebras, `-inf` for maximization ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weight {
    Value(i64),
    Error,
}

impl Weight {
    pub fn is_error(self) -> bool {
        matches!(self, Weight::Error)
    }

    pub fn value(self) -> Option<i64> {
        match self {
            Weight::Value(x) => Some(x),
            Weight::Error => None,
        }
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Weight::Value(x) => s.serialize_i64(*x),
            Weight::Error => s.serialize_str("ERROR"),
        }
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(Weight::Value)
                .ok_or_else(|| serde::de::Error::custom("weight out of range")),
            serde_json::Value::String(s) if s == "ERROR" => Ok(Weight::Error),
            _ => Err(serde::de::Error::custom("expected integer or \"ERROR\"")),
        }
    }
}

/// The built-in weight algebras.
///
/// * `MinPlus`: naturals with `+`, minimized; `Error` acts as `+inf`.
/// * `MaxPlus`: naturals with `+`, maximized; `Error` acts as `-inf`.
/// * `MinMax`: naturals with `max`, minimized; `Error` acts as `+inf`.
/// * `Feasibility`: two-point algebra `{Ok, Error}` with `Ok = Value(0)`.
///
/// The additive algebras tolerate negative values; `MinMax` assumes the
/// nonnegative carrier (0 is the neutral element of `max` only there).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightAlgebra {
    MinPlus,
    MaxPlus,
    MinMax,
    Feasibility,
}

impl WeightAlgebra {
    pub fn name(self) -> &'static str {
        match self {
            WeightAlgebra::MinPlus => "min-plus",
            WeightAlgebra::MaxPlus => "max-plus",
            WeightAlgebra::MinMax => "min-max",
            WeightAlgebra::Feasibility => "feasibility",
        }
    }

    pub fn by_name(name: &str) -> Option<WeightAlgebra> {
        match name {
            "min-plus" => Some(WeightAlgebra::MinPlus),
            "max-plus" => Some(WeightAlgebra::MaxPlus),
            "min-max" => Some(WeightAlgebra::MinMax),
            "feasibility" => Some(WeightAlgebra::Feasibility),
            _ => None,
        }
    }

    /// The total order of the algebra. `Error` is the unique maximum.
    pub fn compare(self, a: Weight, b: Weight) -> Ordering {
        match (a, b) {
            (Weight::Error, Weight::Error) => Ordering::Equal,
            (Weight::Error, _) => Ordering::Greater,
            (_, Weight::Error) => Ordering::Less,
            (Weight::Value(x), Weight::Value(y)) => match self {
                // MaxPlus orders by >=, so numerically larger is "smaller".
                WeightAlgebra::MaxPlus => y.cmp(&x),
                _ => x.cmp(&y),
            },
        }
    }

    /// The combining operation. Commutative, associative, `Error`-absorbing,
    /// monotone with respect to `compare`. Integer overflow saturates to
    /// `Error`.
    pub fn combine(self, a: Weight, b: Weight) -> Weight {
        let (x, y) = match (a, b) {
            (Weight::Value(x), Weight::Value(y)) => (x, y),
            _ => return Weight::Error,
        };
        match self {
            WeightAlgebra::MinPlus => x.checked_add(y).map_or(Weight::Error, Weight::Value),
            WeightAlgebra::MaxPlus => match x.checked_add(y) {
                Some(v) => Weight::Value(v),
                // In the >= order, -inf is the maximum, i.e. Error; positive
                // saturation has no finite representative either, so both
                // overflow directions collapse to Error.
                None => Weight::Error,
            },
            WeightAlgebra::MinMax => Weight::Value(x.max(y)),
            WeightAlgebra::Feasibility => Weight::Value(0),
        }
    }

    /// Neutral element of `combine`.
    pub fn neutral(self) -> Weight {
        Weight::Value(0)
    }

    /// Minimum under the algebra's order.
    pub fn min(self, a: Weight, b: Weight) -> Weight {
        if self.compare(a, b) == Ordering::Greater {
            b
        } else {
            a
        }
    }

    /// Fold of `combine` over an iterator, starting from the neutral element.
    pub fn fold<I: IntoIterator<Item = Weight>>(self, it: I) -> Weight {
        it.into_iter().fold(self.neutral(), |a, b| self.combine(a, b))
    }

    /// Minimum of an iterator, `Error` when empty.
    pub fn min_all<I: IntoIterator<Item = Weight>>(self, it: I) -> Weight {
        it.into_iter().fold(Weight::Error, |a, b| self.min(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALGEBRAS: [WeightAlgebra; 4] = [
        WeightAlgebra::MinPlus,
        WeightAlgebra::MaxPlus,
        WeightAlgebra::MinMax,
        WeightAlgebra::Feasibility,
    ];

    fn samples(alg: WeightAlgebra) -> Vec<Weight> {
        // MinMax carries the naturals; max has no neutral over all of Z
        let lo = if alg == WeightAlgebra::MinMax { 0 } else { -3 };
        let mut v: Vec<Weight> = (lo..=5).map(Weight::Value).collect();
        v.push(Weight::Error);
        v
    }

    #[test]
    fn compare_is_total_order() {
        for alg in ALGEBRAS {
            let s = samples(alg);
            for &a in &s {
                assert_eq!(alg.compare(a, a), Ordering::Equal);
                for &b in &s {
                    let ab = alg.compare(a, b);
                    assert_eq!(ab, alg.compare(b, a).reverse());
                    if ab == Ordering::Equal {
                        assert_eq!(a, b);
                    }
                    for &c in &s {
                        if ab != Ordering::Greater && alg.compare(b, c) != Ordering::Greater {
                            assert_ne!(alg.compare(a, c), Ordering::Greater);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn combine_laws() {
        for alg in ALGEBRAS {
            let s = samples(alg);
            for &a in &s {
                assert_eq!(alg.combine(alg.neutral(), a), alg.combine(a, alg.neutral()));
                if alg != WeightAlgebra::Feasibility {
                    assert_eq!(alg.combine(alg.neutral(), a), a);
                }
                assert_eq!(alg.combine(Weight::Error, a), Weight::Error);
                for &b in &s {
                    assert_eq!(alg.combine(a, b), alg.combine(b, a));
                    for &c in &s {
                        assert_eq!(
                            alg.combine(alg.combine(a, b), c),
                            alg.combine(a, alg.combine(b, c))
                        );
                        // monotonicity: a <= b implies a (+) c <= b (+) c
                        if alg.compare(a, b) != Ordering::Greater {
                            assert_ne!(
                                alg.compare(alg.combine(a, c), alg.combine(b, c)),
                                Ordering::Greater
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn error_is_maximum() {
        for alg in ALGEBRAS {
            for &a in &samples(alg) {
                assert_ne!(alg.compare(a, Weight::Error), Ordering::Greater);
            }
        }
    }

    #[test]
    fn max_plus_order_is_reversed() {
        let alg = WeightAlgebra::MaxPlus;
        assert_eq!(alg.compare(Weight::Value(5), Weight::Value(2)), Ordering::Less);
        assert_eq!(alg.min(Weight::Value(5), Weight::Value(2)), Weight::Value(5));
    }

    #[test]
    fn overflow_saturates_to_error() {
        assert_eq!(
            WeightAlgebra::MinPlus.combine(Weight::Value(i64::MAX), Weight::Value(1)),
            Weight::Error
        );
        assert_eq!(
            WeightAlgebra::MaxPlus.combine(Weight::Value(i64::MAX), Weight::Value(1)),
            Weight::Error
        );
    }

    #[test]
    fn weight_json_round_trip() {
        let w: Weight = serde_json::from_str("7").unwrap();
        assert_eq!(w, Weight::Value(7));
        let e: Weight = serde_json::from_str("\"ERROR\"").unwrap();
        assert_eq!(e, Weight::Error);
        assert_eq!(serde_json::to_string(&Weight::Value(3)).unwrap(), "3");
        assert_eq!(serde_json::to_string(&Weight::Error).unwrap(), "\"ERROR\"");
    }

    #[test]
    fn min_all_of_empty_is_error() {
        assert_eq!(WeightAlgebra::MinPlus.min_all([]), Weight::Error);
    }
}
