//! Finite unions of half-open intervals with exact rational endpoints.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p"`, `"p/q"` or a finite decimal; accepts `−` for minus.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim().replace('\u{2212}', "-");
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let v = Q::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Unit in which endpoints are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    /// Endpoints are multiples of π.
    Pi,
    /// Endpoints are plain real numbers.
    Plain,
}

impl Units {
    pub fn factor(self) -> f64 {
        match self {
            Units::Pi => std::f64::consts::PI,
            Units::Plain => 1.0,
        }
    }
}

/// A normalized finite union of intervals `[a,b)`: sorted, disjoint,
/// non-adjacent, nonempty pieces.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntervalUnion {
    pieces: Vec<(Q, Q)>,
    units: Units,
}

impl fmt::Debug for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pieces
            .iter()
            .map(|(a, b)| format!("[{}, {})", format_q(a), format_q(b)))
            .collect();
        let u = if self.units == Units::Pi { "π" } else { "" };
        write!(f, "{{{}}}{u}", parts.join(" ∪ "))
    }
}

fn normalize(mut pieces: Vec<(Q, Q)>) -> Vec<(Q, Q)> {
    pieces.retain(|(a, b)| a < b);
    pieces.sort();
    let mut out: Vec<(Q, Q)> = Vec::with_capacity(pieces.len());
    for (a, b) in pieces {
        match out.last_mut() {
            Some(last) if a <= last.1 => {
                if b > last.1 {
                    last.1 = b;
                }
            }
            _ => out.push((a, b)),
        }
    }
    out
}

impl IntervalUnion {
    pub fn new(pieces: Vec<(Q, Q)>, units: Units) -> Self {
        IntervalUnion { pieces: normalize(pieces), units }
    }

    pub fn empty(units: Units) -> Self {
        IntervalUnion { pieces: Vec::new(), units }
    }

    /// `[a, b)` from integers over a common denominator.
    pub fn interval(a: Q, b: Q, units: Units) -> Self {
        Self::new(vec![(a, b)], units)
    }

    /// Builds from `(numerator, denominator)` pairs for each endpoint.
    pub fn from_fracs(pieces: &[((i64, i64), (i64, i64))], units: Units) -> Self {
        Self::new(
            pieces.iter().map(|&((an, ad), (bn, bd))| (qf(an, ad), qf(bn, bd))).collect(),
            units,
        )
    }

    pub fn pieces(&self) -> &[(Q, Q)] {
        &self.pieces
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Exact measure in the set's units.
    pub fn measure(&self) -> Q {
        self.pieces.iter().fold(Q::zero(), |acc, (a, b)| acc + (b - a))
    }

    pub fn measure_f64(&self) -> f64 {
        q_to_f64(&self.measure()) * self.units.factor()
    }

    pub fn inf(&self) -> Option<&Q> {
        self.pieces.first().map(|p| &p.0)
    }

    pub fn sup(&self) -> Option<&Q> {
        self.pieces.last().map(|p| &p.1)
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.pieces.iter().any(|(a, b)| a <= x && x < b)
    }

    fn same_units(&self, other: &Self) -> Result<()> {
        if self.units != other.units {
            return Err(Error::InvalidInput("sets use different units".into()));
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.same_units(other)?;
        let mut all = self.pieces.clone();
        all.extend(other.pieces.iter().cloned());
        Ok(Self::new(all, self.units))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.same_units(other)?;
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.pieces.len() && j < other.pieces.len() {
            let (a0, a1) = &self.pieces[i];
            let (b0, b1) = &other.pieces[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Ok(Self::new(out, self.units))
    }

    pub fn subtract(&self, other: &Self) -> Result<Self> {
        self.same_units(other)?;
        let mut out = Vec::new();
        for (a, b) in &self.pieces {
            let mut cur = a.clone();
            for (c, d) in &other.pieces {
                if d <= &cur || c >= b {
                    continue;
                }
                if c > &cur {
                    out.push((cur.clone(), c.clone()));
                }
                if d > &cur {
                    cur = d.clone();
                }
                if &cur >= b {
                    break;
                }
            }
            if &cur < b {
                out.push((cur, b.clone()));
            }
        }
        Ok(Self::new(out, self.units))
    }

    /// `x ↦ x + t`.
    pub fn translate(&self, t: &Q) -> Self {
        Self::new(self.pieces.iter().map(|(a, b)| (a + t, b + t)).collect(), self.units)
    }

    /// `x ↦ c·x`; a negative factor flips pieces, which changes them only on a
    /// null set.
    pub fn scale(&self, c: &Q) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|(a, b)| {
                let (x, y) = (a * c, b * c);
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        Self::new(pieces, self.units)
    }

    /// `x ↦ c·(x − center) + center`.
    pub fn dilate_about(&self, c: &Q, center: &Q) -> Self {
        self.translate(&-center).scale(c).translate(center)
    }

    /// Reflection `x ↦ 2p − x`.
    pub fn reflect_about(&self, p: &Q) -> Self {
        self.scale(&q(-1)).translate(&(p * q(2)))
    }

    /// `self` is contained in `other` up to null sets.
    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        Ok(self.subtract(other)?.is_empty())
    }

    pub fn to_json(&self) -> SetJson {
        SetJson {
            space: 1,
            units: Some(self.units),
            intervals: Some(self.pieces.iter().map(|(a, b)| [format_q(a), format_q(b)]).collect()),
            polygons: None,
            holes: None,
        }
    }

    pub fn from_json(j: &SetJson) -> Result<Self> {
        if j.space != 1 {
            return Err(Error::InvalidInput("expected a one-dimensional set".into()));
        }
        let intervals = j
            .intervals
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("missing \"intervals\"".into()))?;
        let mut pieces = Vec::with_capacity(intervals.len());
        for [a, b] in intervals {
            let (a, b) = (parse_q(a)?, parse_q(b)?);
            if a >= b {
                return Err(Error::InvalidInput(format!("empty interval [{a}, {b})")));
            }
            pieces.push((a, b));
        }
        Ok(Self::new(pieces, j.units.unwrap_or(Units::Pi)))
    }

    /// Largest absolute endpoint.
    pub fn radius(&self) -> Q {
        self.pieces
            .iter()
            .flat_map(|(a, b)| [a.abs(), b.abs()])
            .max()
            .unwrap_or_else(Q::zero)
    }
}

/// JSON form shared by one- and two-dimensional sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetJson {
    pub space: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<Units>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intervals: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polygons: Option<Vec<Vec<[f64; 2]>>>,
    /// Rings removed from the union of `polygons`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holes: Option<Vec<Vec<[f64; 2]>>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: i64, b: i64) -> IntervalUnion {
        IntervalUnion::interval(q(a), q(b), Units::Pi)
    }

    #[test]
    fn boolean_examples() {
        assert_eq!(iv(0, 2).subtract(&iv(1, 2)).unwrap(), iv(0, 1));
        let a = iv(-3, 1).union(&iv(2, 5)).unwrap();
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert_eq!(iv(0, 1).union(&iv(1, 2)).unwrap(), iv(0, 2));
        assert!(iv(0, 1).intersect(&iv(1, 2)).unwrap().is_empty());
        let holes = iv(0, 10).subtract(&iv(1, 2).union(&iv(4, 5)).unwrap()).unwrap();
        assert_eq!(holes.pieces().len(), 3);
        assert_eq!(holes.measure(), q(8));
    }

    #[test]
    fn shannon_measure() {
        let es = iv(-2, -1).union(&iv(1, 2)).unwrap();
        assert_eq!(es.measure(), q(2));
        assert!((es.measure_f64() - 2.0 * std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("−4").unwrap(), q(-4));
        assert_eq!(parse_q("-32/7").unwrap(), qf(-32, 7));
        assert_eq!(parse_q("0.25").unwrap(), qf(1, 4));
        assert_eq!(parse_q("-0.5").unwrap(), qf(-1, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("pi").is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = IntervalUnion::from_fracs(&[((-32, 7), (-4, 1)), ((4, 7), (1, 1))], Units::Pi);
        let text = serde_json::to_string(&s.to_json()).unwrap();
        let back = IntervalUnion::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, s);
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text);
    }

    #[test]
    fn affine_images() {
        assert_eq!(iv(1, 2).scale(&q(-2)), iv(-4, -2));
        assert_eq!(iv(0, 1).reflect_about(&q(1)), iv(1, 2));
        let d = IntervalUnion::interval(qf(1, 2), q(1), Units::Plain).dilate_about(&q(2), &qf(1, 2));
        assert_eq!(d, IntervalUnion::interval(qf(1, 2), qf(3, 2), Units::Plain));
    }
}
