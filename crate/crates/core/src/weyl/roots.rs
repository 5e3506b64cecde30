//! Reflections, root systems, Cartan integers and positive/simple roots.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ifs::AffineMap;

/// Deviation allowed when snapping a Cartan pairing to an integer.
pub const INTEGRALITY_TOL: f64 = 1e-9;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_nonzero(alpha: &[f64]) -> Result<f64> {
    let nn = dot(alpha, alpha);
    if !(nn > 0.0) || !nn.is_finite() {
        return Err(Error::InvalidInput("root must be a nonzero finite vector".into()));
    }
    Ok(nn)
}

/// `x − 2⟨x,α⟩/⟨α,α⟩·α`.
pub fn reflect(alpha: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    let nn = check_nonzero(alpha)?;
    let c = 2.0 * dot(x, alpha) / nn;
    Ok(x.iter().zip(alpha).map(|(xi, ai)| xi - c * ai).collect())
}

/// `2α/⟨α,α⟩`.
pub fn coroot(alpha: &[f64]) -> Result<Vec<f64>> {
    let nn = check_nonzero(alpha)?;
    Ok(alpha.iter().map(|a| 2.0 * a / nn).collect())
}

/// Matrix of the linear reflection `r_α`.
pub fn reflection_matrix(alpha: &[f64]) -> Result<DMatrix<f64>> {
    let nn = check_nonzero(alpha)?;
    let n = alpha.len();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id - 2.0 * alpha[i] * alpha[j] / nn
    }))
}

/// Reflection in the affine hyperplane `⟨x,α⟩ = k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffineReflectionSpec {
    pub alpha: Vec<f64>,
    pub k: i64,
}

impl AffineReflectionSpec {
    pub fn new(alpha: Vec<f64>, k: i64) -> Result<Self> {
        check_nonzero(&alpha)?;
        Ok(AffineReflectionSpec { alpha, k })
    }

    pub fn as_map(&self) -> AffineMap {
        let m = reflection_matrix(&self.alpha).expect("alpha checked nonzero");
        let cv = coroot(&self.alpha).expect("alpha checked nonzero");
        let offset: Vec<f64> = cv.iter().map(|c| c * self.k as f64).collect();
        AffineMap::new(m, nalgebra::DVector::from_vec(offset)).expect("finite reflection")
    }
}

/// `x − 2(⟨x,α⟩−k)/⟨α,α⟩·α`, computed as `r_α(x) + k·α∨`.
pub fn affine_reflect(spec: &AffineReflectionSpec, x: &[f64]) -> Result<Vec<f64>> {
    let r = reflect(&spec.alpha, x)?;
    let cv = coroot(&spec.alpha)?;
    Ok(r.iter().zip(&cv).map(|(ri, ci)| ri + spec.k as f64 * ci).collect())
}

/// One row of the table of admissible root pairings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleClass {
    /// 1-based row in the table, `None` for colinear pairs.
    pub row: Option<usize>,
    pub theta: f64,
    /// Ratio of the longer to the shorter root; `None` when unconstrained.
    pub length_ratio: Option<f64>,
}

const ANGLE_TABLE: [(i64, i64, f64, Option<f64>); 7] = [
    (0, 0, 0.5, None),
    (1, 1, 1.0 / 3.0, Some(1.0)),
    (-1, -1, 2.0 / 3.0, Some(1.0)),
    (1, 2, 0.25, Some(std::f64::consts::SQRT_2)),
    (-1, -2, 0.75, Some(std::f64::consts::SQRT_2)),
    (1, 3, 1.0 / 6.0, Some(1.732_050_807_568_877_2)),
    (-1, -3, 5.0 / 6.0, Some(1.732_050_807_568_877_2)),
];

fn snap(v: f64) -> Result<i64> {
    let r = v.round();
    if (v - r).abs() > INTEGRALITY_TOL {
        return Err(Error::NotCrystallographic(v));
    }
    Ok(r as i64)
}

/// `n(β,α) = 2⟨β,α⟩/⟨α,α⟩` snapped to an integer, with its table row.
pub fn cartan_integer(beta: &[f64], alpha: &[f64]) -> Result<(i64, AngleClass)> {
    let aa = check_nonzero(alpha)?;
    let bb = check_nonzero(beta)?;
    let ab = dot(alpha, beta);
    let n_ba = snap(2.0 * ab / aa)?;
    let n_ab = snap(2.0 * ab / bb)?;
    let theta = (ab / (aa * bb).sqrt()).clamp(-1.0, 1.0).acos();
    if n_ba * n_ab == 4 {
        return Ok((n_ba, AngleClass { row: None, theta, length_ratio: None }));
    }
    // The table fixes the unordered pair of pairings.
    let (lo, hi) = if n_ba.abs() <= n_ab.abs() { (n_ba, n_ab) } else { (n_ab, n_ba) };
    for (i, &(p, q, t, ratio)) in ANGLE_TABLE.iter().enumerate() {
        if p == lo && q == hi {
            let theta_row = t * std::f64::consts::PI;
            if (theta - theta_row).abs() > 1e-9 {
                break;
            }
            if let Some(want) = ratio {
                let got = (aa.max(bb) / aa.min(bb)).sqrt();
                if (got - want).abs() > 1e-9 {
                    break;
                }
            }
            return Ok((n_ba, AngleClass { row: Some(i + 1), theta: theta_row, length_ratio: ratio }));
        }
    }
    Err(Error::NotCrystallographic(2.0 * ab / aa))
}

/// A finite set of roots in ℝⁿ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootSystemData {
    pub roots: Vec<Vec<f64>>,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootSystemReport {
    pub spans: bool,
    pub reduced: bool,
    pub closed_under_reflections: bool,
    pub integral: bool,
    pub max_integrality_deviation: f64,
}

impl RootSystemReport {
    pub fn passes(&self) -> bool {
        self.spans && self.reduced && self.closed_under_reflections && self.integral
    }
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

impl RootSystemData {
    pub fn new(roots: Vec<Vec<f64>>) -> Result<Self> {
        let rank = roots
            .first()
            .ok_or_else(|| Error::InvalidInput("empty root set".into()))?
            .len();
        if roots.iter().any(|r| r.len() != rank) {
            return Err(Error::InvalidInput("roots of different dimensions".into()));
        }
        for r in &roots {
            check_nonzero(r)?;
        }
        Ok(RootSystemData { roots, rank })
    }

    pub fn coroots(&self) -> Vec<Vec<f64>> {
        self.roots.iter().map(|r| coroot(r).expect("validated")).collect()
    }

    pub fn contains(&self, v: &[f64]) -> bool {
        self.roots.iter().any(|r| close(r, v, 1e-9))
    }

    /// Checks the four root-system axioms.
    pub fn validate(&self) -> RootSystemReport {
        let m = DMatrix::from_fn(self.rank, self.roots.len(), |i, j| self.roots[j][i]);
        let spans = m.rank(1e-9) == self.rank;

        let mut reduced = true;
        for (i, a) in self.roots.iter().enumerate() {
            for b in &self.roots[i + 1..] {
                let (aa, bb, ab) = (dot(a, a), dot(b, b), dot(a, b));
                let colinear = (ab * ab - aa * bb).abs() <= 1e-9 * aa * bb;
                if colinear && !close(a, &b.iter().map(|x| -x).collect::<Vec<_>>(), 1e-9) {
                    reduced = false;
                }
            }
        }

        let closed = self.roots.iter().all(|a| {
            self.roots
                .iter()
                .all(|b| self.contains(&reflect(a, b).expect("nonzero root")))
        });

        let mut dev: f64 = 0.0;
        for a in &self.roots {
            let aa = dot(a, a);
            for b in &self.roots {
                let v = 2.0 * dot(a, b) / aa;
                dev = dev.max((v - v.round()).abs());
            }
        }
        RootSystemReport {
            spans,
            reduced,
            closed_under_reflections: closed,
            integral: dev <= INTEGRALITY_TOL,
            max_integrality_deviation: dev,
        }
    }

    /// Positive roots with respect to a generic `v`, and the simple roots
    /// among them (positives that are not a sum of two positives).
    pub fn positive_and_simple(&self, v: &[f64]) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        if v.len() != self.rank {
            return Err(Error::InvalidInput("vector dimension mismatch".into()));
        }
        let scale = dot(v, v).sqrt();
        let mut positives = Vec::new();
        for r in &self.roots {
            let p = dot(v, r);
            if p.abs() <= 1e-12 * scale * dot(r, r).sqrt() {
                return Err(Error::NonGenericVector(r.clone()));
            }
            if p > 0.0 {
                positives.push(r.clone());
            }
        }
        let simples = positives
            .iter()
            .filter(|r| {
                !positives.iter().enumerate().any(|(i, a)| {
                    positives[i..].iter().any(|b| {
                        let s: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        close(&s, r, 1e-9)
                    })
                })
            })
            .cloned()
            .collect();
        Ok((positives, simples))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const S3: f64 = 1.732_050_807_568_877_2;

    #[test]
    fn reflect_examples() {
        let a = [1.0, 2.0];
        assert_eq!(reflect(&a, &a).unwrap(), vec![-1.0, -2.0]);
        assert_eq!(reflect(&a, &[2.0, -1.0]).unwrap(), vec![2.0, -1.0]);
        let got = reflect(&[1.0, 0.0], &[-0.5, S3 / 2.0]).unwrap();
        assert!((got[0] - 0.5).abs() < 1e-15 && (got[1] - S3 / 2.0).abs() < 1e-15);
        assert!(reflect(&[0.0, 0.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn affine_reflect_examples() {
        let k0 = AffineReflectionSpec::new(vec![1.0, 0.0], 0).unwrap();
        assert_eq!(affine_reflect(&k0, &[0.3, 0.7]).unwrap(), reflect(&[1.0, 0.0], &[0.3, 0.7]).unwrap());
        let k1 = AffineReflectionSpec::new(vec![1.0, 0.0], 1).unwrap();
        assert_eq!(affine_reflect(&k1, &[0.3, 0.7]).unwrap(), vec![1.7, 0.7]);
        let back = affine_reflect(&k1, &affine_reflect(&k1, &[0.3, 0.7]).unwrap()).unwrap();
        assert!((back[0] - 0.3).abs() < 1e-15 && back[1] == 0.7);
    }

    #[test]
    fn cartan_table_rows() {
        let (n, c) = cartan_integer(&[0.0, 1.0], &[1.0, 0.0]).unwrap();
        assert_eq!((n, c.row), (0, Some(1)));
        let (n, c) = cartan_integer(&[-0.5, S3 / 2.0], &[1.0, 0.0]).unwrap();
        assert_eq!((n, c.row, c.length_ratio), (-1, Some(3), Some(1.0)));
        assert!((c.theta - 2.0 * std::f64::consts::FRAC_PI_3).abs() < 1e-12);
        let (n, c) = cartan_integer(&[1.0, -1.0], &[0.0, 1.0]).unwrap();
        assert_eq!((n, c.row), (-2, Some(5)));
        let (n, _) = cartan_integer(&[0.0, 1.0], &[1.0, -1.0]).unwrap();
        assert_eq!(n, -1);
        assert!(matches!(
            cartan_integer(&[1.0, 0.3], &[1.0, 0.0]),
            Err(Error::NotCrystallographic(_))
        ));
    }

    #[test]
    fn a1_positive_and_simple() {
        let sys = RootSystemData::new(vec![vec![1.0], vec![-1.0]]).unwrap();
        let (p, s) = sys.positive_and_simple(&[1.0]).unwrap();
        assert_eq!(p, vec![vec![1.0]]);
        assert_eq!(s, vec![vec![1.0]]);
    }

    #[test]
    fn non_generic_vector_rejected() {
        let sys = RootSystemData::new(vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]])
            .unwrap();
        assert!(matches!(sys.positive_and_simple(&[0.0, 1.0]), Err(Error::NonGenericVector(_))));
    }

    #[test]
    fn doubled_root_breaks_reducedness() {
        let sys = RootSystemData::new(vec![vec![1.0], vec![-1.0], vec![2.0], vec![-2.0]]).unwrap();
        let rep = sys.validate();
        assert!(!rep.reduced);
        assert!(!rep.passes());
    }
}
