//! Small dense linear algebra and tolerance-keyed point lookup.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Spectral norm (largest singular value) of a square matrix.
///
/// For dimension up to 3 the largest eigenvalue of `MᵀM` is taken from the
/// closed-form roots of its characteristic polynomial; above that a symmetric
/// eigen-decomposition is used.
pub fn spectral_norm(m: &DMatrix<f64>) -> Result<f64> {
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let g = m.transpose() * m;
    let lam = match g.nrows() {
        0 => 0.0,
        1 => g[(0, 0)],
        2 => sym2_max_eigen(g[(0, 0)], g[(0, 1)], g[(1, 1)]),
        3 => sym3_max_eigen(&g),
        _ => g.symmetric_eigenvalues().iter().cloned().fold(0.0, f64::max),
    };
    Ok(lam.max(0.0).sqrt())
}

fn sym2_max_eigen(a: f64, b: f64, c: f64) -> f64 {
    let mean = 0.5 * (a + c);
    let half = 0.5 * (a - c);
    mean + half.hypot(b)
}

fn sym3_max_eigen(g: &DMatrix<f64>) -> f64 {
    let p1 = g[(0, 1)].powi(2) + g[(0, 2)].powi(2) + g[(1, 2)].powi(2);
    let diag = [g[(0, 0)], g[(1, 1)], g[(2, 2)]];
    if p1 == 0.0 {
        return diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    }
    let q = (diag[0] + diag[1] + diag[2]) / 3.0;
    let p2 = diag.iter().map(|d| (d - q).powi(2)).sum::<f64>() + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut b = g.clone();
    for i in 0..3 {
        b[(i, i)] -= q;
    }
    b /= p;
    let r = (b.determinant() / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    q + 2.0 * p * phi.cos()
}

/// Solves `a x = b`, failing when `a` is numerically singular.
pub fn solve(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    let scale = a.amax().max(1e-300);
    let lu = a.clone().lu();
    let det = lu.determinant();
    if det.abs() <= 1e-12 * scale.powi(a.nrows() as i32) {
        return None;
    }
    lu.solve(b)
}

/// Lexicographic ordering on coordinate slices.
pub fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

type CellKey = [i64; 4];

/// Hash-grid index that identifies points closer than a tolerance.
///
/// Only the first four coordinates are hashed; higher coordinates are still
/// compared exactly when probing.
#[derive(Debug, Clone)]
pub struct SnapIndex {
    tol: f64,
    dim: usize,
    cells: HashMap<CellKey, Vec<usize>>,
    points: Vec<f64>,
}

impl SnapIndex {
    pub fn new(dim: usize, tol: f64) -> Self {
        SnapIndex { tol, dim, cells: HashMap::new(), points: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    fn key(&self, p: &[f64]) -> CellKey {
        let mut k = [0i64; 4];
        for (slot, x) in k.iter_mut().zip(p) {
            *slot = (x / self.tol).floor() as i64;
        }
        k
    }

    /// Index of a stored point within `tol` of `p`, if any.
    pub fn find(&self, p: &[f64]) -> Option<usize> {
        let base = self.key(p);
        let hashed = self.dim.min(4);
        let probes = 3usize.pow(hashed as u32);
        let mut best: Option<(usize, f64)> = None;
        for code in 0..probes {
            let mut k = base;
            let mut c = code;
            for slot in k.iter_mut().take(hashed) {
                *slot += (c % 3) as i64 - 1;
                c /= 3;
            }
            if let Some(ids) = self.cells.get(&k) {
                for &i in ids {
                    let d = dist(self.point(i), p);
                    if d <= self.tol && best.is_none_or(|(_, bd)| d < bd) {
                        best = Some((i, d));
                    }
                }
            }
        }
        best.map(|(i, _)| i)
    }

    /// Inserts `p` unless a point within `tol` exists; returns its index and
    /// whether it was newly added.
    pub fn insert(&mut self, p: &[f64]) -> (usize, bool) {
        if let Some(i) = self.find(p) {
            return (i, false);
        }
        let i = self.len();
        self.points.extend_from_slice(p);
        let k = self.key(p);
        self.cells.entry(k).or_default().push(i);
        (i, true)
    }

    pub fn into_points(self) -> Vec<f64> {
        self.points
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_norm_small_cases() {
        let id = DMatrix::<f64>::identity(2, 2);
        assert_eq!(spectral_norm(&id).unwrap(), 1.0);
        let half = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]);
        assert_eq!(spectral_norm(&half).unwrap(), 0.5);
        let refl = DMatrix::from_row_slice(2, 2, &[-0.5, 0.0, 0.0, 0.5]);
        assert_eq!(spectral_norm(&refl).unwrap(), 0.5);
    }

    #[test]
    fn spectral_norm_matches_svd() {
        let m3 = DMatrix::from_row_slice(3, 3, &[0.3, -0.2, 0.1, 0.05, 0.4, -0.3, 0.2, 0.1, 0.25]);
        let m4 = DMatrix::from_row_slice(
            4,
            4,
            &[0.3, -0.2, 0.1, 0.0, 0.05, 0.4, -0.3, 0.1, 0.2, 0.1, 0.25, -0.1, 0.0, 0.3, 0.1, 0.2],
        );
        for m in [m3, m4] {
            let svd = m.clone().svd(false, false);
            let want = svd.singular_values.max();
            let got = spectral_norm(&m).unwrap();
            assert!((got - want).abs() <= 1e-12 * want, "{got} vs {want}");
        }
    }

    #[test]
    fn spectral_norm_rejects_nan() {
        let m = DMatrix::from_row_slice(1, 1, &[f64::NAN]);
        assert!(matches!(spectral_norm(&m), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn snap_index_merges_close_points() {
        let mut idx = SnapIndex::new(2, 1e-9);
        let (a, new_a) = idx.insert(&[0.5, 0.25]);
        let (b, new_b) = idx.insert(&[0.5 + 1e-12, 0.25 - 1e-12]);
        assert!(new_a && !new_b);
        assert_eq!(a, b);
        let (c, new_c) = idx.insert(&[0.5, 0.26]);
        assert!(new_c);
        assert_ne!(a, c);
        assert_eq!(idx.find(&[0.00048828125, 0.0]), None);
    }
}
