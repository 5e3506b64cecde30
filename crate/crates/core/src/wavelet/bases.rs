//! Dilated and reflected copies of an orthonormal fractal basis on the alcove:
//! `κ^{kn/2}·𝔟(r⁻¹(κᵏx))` for words `r` of the affine Weyl group.

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fractal::OrthonormalBasis;
use crate::fractal::FractalFunction;
use crate::ifs::AffineMap;
use crate::weyl::{AffineWeylAction, WeylWord};

/// `(k, word, index)` of one family member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BasisLabel {
    pub k: i32,
    pub word: Vec<usize>,
    /// Column of the orthonormal coefficient matrix.
    pub index: usize,
}

/// Labeled family with evaluation and quadrature inner products.
#[derive(Debug, Clone)]
pub struct DilatedBasis {
    pub labels: Vec<BasisLabel>,
    kappa: f64,
    weyl: AffineWeylAction,
    functions: Vec<FractalFunction>,
    coefficients: Vec<Vec<f64>>,
    words: Vec<WeylWord>,
    inverses: Vec<AffineMap>,
    /// Index into `words` for each label.
    word_of: Vec<usize>,
}

const ALCOVE_TOL: f64 = 1e-12;

fn same_vertices(a: &[Vec<f64>], b: &[Vec<f64>]) -> bool {
    a.len() == b.len()
        && a.iter().all(|p| b.iter().any(|q| p.iter().zip(q).all(|(x, y)| (x - y).abs() < 1e-9)))
}

/// Enumerates `D_{κI}^k 𝔅_r` for `k` in `k_range` and all words up to
/// `max_word_len`. The basis functions must live on the alcove of `weyl`.
pub fn basis_enumerator(
    weyl: &AffineWeylAction,
    kappa: f64,
    functions: Vec<FractalFunction>,
    onb: &OrthonormalBasis,
    k_range: RangeInclusive<i32>,
    max_word_len: usize,
) -> Result<DilatedBasis> {
    if !(kappa > 1.0) || !kappa.is_finite() {
        return Err(Error::InvalidInput("kappa must exceed 1".into()));
    }
    let first = functions.first().ok_or_else(|| Error::InvalidInput("empty basis".into()))?;
    if !same_vertices(first.ctx().scheme.parent.vertices(), &weyl.alcove.vertices) {
        return Err(Error::InvalidInput("basis domain is not the alcove".into()));
    }
    if onb.coefficients.len() != functions.len() {
        return Err(Error::InvalidInput("coefficient matrix does not match the basis".into()));
    }
    let words = weyl.words_up_to(max_word_len);
    let inverses = words.iter().map(|w| w.map().inverse()).collect::<Result<Vec<_>>>()?;
    let mut labels = Vec::new();
    let mut word_of = Vec::new();
    for k in k_range {
        for (wi, w) in words.iter().enumerate() {
            for index in 0..onb.basis_size {
                labels.push(BasisLabel { k, word: w.letters.clone(), index });
                word_of.push(wi);
            }
        }
    }
    Ok(DilatedBasis {
        labels,
        kappa,
        weyl: weyl.clone(),
        functions,
        coefficients: onb.coefficients.clone(),
        words,
        inverses,
        word_of,
    })
}

impl DilatedBasis {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn position(&self, label: &BasisLabel) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn dim(&self) -> usize {
        self.weyl.dim()
    }

    /// Orthonormal function `index` at a point of the alcove.
    fn on_alcove(&self, index: usize, z: &[f64]) -> Result<f64> {
        let mut v = 0.0;
        for (i, f) in self.functions.iter().enumerate() {
            let c = self.coefficients[i][index];
            if c != 0.0 {
                v += c * f.evaluate_to(z, 1e-13)?.value;
            }
        }
        Ok(v)
    }

    /// Value of family member `i` at `x`; zero off its support.
    pub fn eval(&self, i: usize, x: &[f64]) -> Result<f64> {
        let label = &self.labels[i];
        let s = self.kappa.powi(label.k);
        let y: Vec<f64> = x.iter().map(|v| v * s).collect();
        let z = self.inverses[self.word_of[i]].apply(&y);
        if !self.weyl.alcove.contains(&z, ALCOVE_TOL) {
            return Ok(0.0);
        }
        let n = self.dim() as f64;
        Ok(self.kappa.powf(label.k as f64 * n / 2.0) * self.on_alcove(label.index, &z)?)
    }

    /// `⟨f_i, f_j⟩` by centroid quadrature on the depth-`depth` cells of the
    /// smaller support. Members with the same `k` on different alcoves have
    /// disjoint supports and return exactly zero.
    pub fn inner(&self, i: usize, j: usize, depth: usize) -> Result<f64> {
        let (a, b) = (&self.labels[i], &self.labels[j]);
        if a.k == b.k && self.word_of[i] != self.word_of[j] {
            return Ok(0.0);
        }
        let (small, other) = if a.k >= b.k { (i, j) } else { (j, i) };
        let k = self.labels[small].k;
        let scheme = &self.functions[0].ctx().scheme;
        let n = self.dim();
        if (scheme.n_cells() as f64).powi(depth as i32) > 5e7 {
            return Err(Error::ResourceLimit(format!("quadrature depth {depth} is too fine")));
        }
        let mut points = vec![scheme.parent.centroid()];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(points.len() * scheme.n_cells());
            for u in &scheme.sims {
                for p in &points {
                    next.push(u.apply(p));
                }
            }
            points = next;
        }
        let s = self.kappa.powi(-k);
        let w = &self.words[self.word_of[small]];
        let cell = scheme.parent.volume() * scheme.ratio.powi((n * depth) as i32) * s.powi(n as i32);
        let mut total = 0.0;
        for z in &points {
            let x: Vec<f64> = w.apply(z).iter().map(|v| v * s).collect();
            let fa = self.eval(small, &x)?;
            if fa == 0.0 {
                continue;
            }
            total += fa * self.eval(other, &x)?;
        }
        Ok(total * cell)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::{fractal_basis, orthonormalize};
    use crate::fractal::{FixPointConfig, ScaleVector, SchemeContext};
    use crate::partition::fixtures::interval_halves;
    use crate::weyl::rank2_catalog;

    fn a1_family() -> DilatedBasis {
        let ctx = SchemeContext::new(interval_halves()).unwrap();
        let scales = ScaleVector::uniform(2, 0.3);
        let funcs = fractal_basis(&ctx, &scales, &FixPointConfig::default()).unwrap();
        let onb = orthonormalize(&funcs, 10).unwrap();
        let a1 = rank2_catalog("A1").unwrap();
        basis_enumerator(&a1, 2.0, funcs, &onb, 0..=1, 2).unwrap()
    }

    #[test]
    fn norms_and_disjoint_cells() {
        let fam = a1_family();
        for i in 0..fam.len() {
            let n = fam.inner(i, i, 10).unwrap();
            assert!((n - 1.0).abs() < 1e-4, "{:?}: {n}", fam.labels[i]);
        }
        let a = fam.position(&BasisLabel { k: 0, word: vec![], index: 0 }).unwrap();
        let b = fam.labels.iter().position(|l| l.k == 0 && !l.word.is_empty()).unwrap();
        assert_eq!(fam.inner(a, b, 10).unwrap(), 0.0);
    }

    #[test]
    fn eval_outside_support_is_zero() {
        let fam = a1_family();
        let a = fam.position(&BasisLabel { k: 1, word: vec![], index: 1 }).unwrap();
        assert_eq!(fam.eval(a, &[0.75]).unwrap(), 0.0);
        assert!(fam.eval(a, &[0.2]).unwrap().abs() > 0.0);
    }
}
