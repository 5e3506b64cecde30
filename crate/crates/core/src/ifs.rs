//! Iterated function systems of affine maps, the Hausdorff metric on finite
//! point clouds and certified attractor iteration.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, SnapIndex};

/// Default cap on the number of points an iterate may hold.
pub const DEFAULT_MAX_POINTS: usize = 2_000_000;

/// `x ↦ matrix·x + offset` together with an upper bound on its Lipschitz
/// constant.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    matrix: DMatrix<f64>,
    offset: DVector<f64>,
    lip: f64,
}

/// Plain-data form used for JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineMapSpec {
    pub matrix: Vec<Vec<f64>>,
    pub offset: Vec<f64>,
}

impl AffineMap {
    pub fn new(matrix: DMatrix<f64>, offset: DVector<f64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() != offset.len() {
            return Err(Error::InvalidInput(format!(
                "affine map shape mismatch: {}x{} matrix, offset of length {}",
                matrix.nrows(),
                matrix.ncols(),
                offset.len()
            )));
        }
        if offset.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("offset has non-finite entries".into()));
        }
        let lip = linalg::spectral_norm(&matrix)?;
        Ok(AffineMap { matrix, offset, lip })
    }

    /// Builds a map from row-major rows.
    pub fn from_rows(rows: &[&[f64]], offset: &[f64]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix rows must be square".into()));
        }
        let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().cloned()).collect();
        Self::new(DMatrix::from_row_slice(n, n, &flat), DVector::from_row_slice(offset))
    }

    pub fn from_spec(spec: &AffineMapSpec) -> Result<Self> {
        let rows: Vec<&[f64]> = spec.matrix.iter().map(|r| r.as_slice()).collect();
        Self::from_rows(&rows, &spec.offset)
    }

    pub fn to_spec(&self) -> AffineMapSpec {
        AffineMapSpec {
            matrix: self.matrix.row_iter().map(|r| r.iter().cloned().collect()).collect(),
            offset: self.offset.iter().cloned().collect(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        AffineMap {
            matrix: DMatrix::identity(dim, dim),
            offset: DVector::zeros(dim),
            lip: 1.0,
        }
    }

    /// `x ↦ scale·x`.
    pub fn scaling(dim: usize, scale: f64) -> Self {
        AffineMap {
            matrix: DMatrix::identity(dim, dim) * scale,
            offset: DVector::zeros(dim),
            lip: scale.abs(),
        }
    }

    pub fn translation(offset: &[f64]) -> Self {
        AffineMap {
            matrix: DMatrix::identity(offset.len(), offset.len()),
            offset: DVector::from_row_slice(offset),
            lip: 1.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn offset(&self) -> &DVector<f64> {
        &self.offset
    }

    /// Certified upper bound on the operator 2-norm of the linear part.
    pub fn lip(&self) -> f64 {
        self.lip
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.apply_into(x, &mut out);
        out
    }

    pub fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        let n = self.dim();
        for (i, o) in out.iter_mut().enumerate().take(n) {
            let mut acc = self.offset[i];
            for (j, xj) in x.iter().enumerate().take(n) {
                acc += self.matrix[(i, j)] * xj;
            }
            *o = acc;
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let matrix = &self.matrix * &other.matrix;
        let offset = &self.matrix * &other.offset + &self.offset;
        let lip = linalg::spectral_norm(&matrix).unwrap_or(self.lip * other.lip);
        AffineMap { matrix, offset, lip }
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidInput("affine map is not invertible".into()))?;
        let offset = -(&inv * &self.offset);
        AffineMap::new(inv, offset)
    }

    /// Largest absolute entry difference against another map of the same
    /// dimension.
    pub fn max_abs_diff(&self, other: &AffineMap) -> f64 {
        let dm = (&self.matrix - &other.matrix).amax();
        let dt = (&self.offset - &other.offset).amax();
        dm.max(dt)
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }
}

/// Upper bound on the Lipschitz constant (spectral norm) of an affine map.
pub fn lipschitz_bound(map: &AffineMap) -> f64 {
    map.lip()
}

/// A finite family of affine maps on ℝⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct IteratedSystem {
    maps: Vec<AffineMap>,
    dim: usize,
    contraction: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IteratedSystemSpec {
    pub maps: Vec<AffineMapSpec>,
}

impl IteratedSystem {
    pub fn new(maps: Vec<AffineMap>) -> Result<Self> {
        let dim = maps
            .first()
            .ok_or_else(|| Error::InvalidInput("an iterated system needs at least one map".into()))?
            .dim();
        if maps.iter().any(|m| m.dim() != dim) {
            return Err(Error::InvalidInput("maps have different dimensions".into()));
        }
        let contraction = maps.iter().map(AffineMap::lip).fold(0.0, f64::max);
        Ok(IteratedSystem { maps, dim, contraction })
    }

    pub fn from_spec(spec: &IteratedSystemSpec) -> Result<Self> {
        Self::new(spec.maps.iter().map(AffineMap::from_spec).collect::<Result<_>>()?)
    }

    pub fn to_spec(&self) -> IteratedSystemSpec {
        IteratedSystemSpec { maps: self.maps.iter().map(AffineMap::to_spec).collect() }
    }

    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `max` of the member Lipschitz bounds.
    pub fn contraction(&self) -> f64 {
        self.contraction
    }

    pub fn is_contractive(&self) -> bool {
        self.contraction < 1.0
    }
}

/// A finite set of points, kept sorted lexicographically with no two points
/// closer than `dedup_tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
    dedup_tol: f64,
}

impl PointCloud {
    pub fn new(dim: usize, points: &[Vec<f64>], dedup_tol: f64) -> Result<Self> {
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::InvalidInput("point dimension mismatch".into()));
        }
        let flat: Vec<f64> = points.iter().flat_map(|p| p.iter().cloned()).collect();
        Self::from_flat(dim, flat, dedup_tol)
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>, dedup_tol: f64) -> Result<Self> {
        if dim == 0 || coords.is_empty() || !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidInput("point cloud must be nonempty".into()));
        }
        if !(dedup_tol > 0.0) {
            return Err(Error::InvalidInput("dedup tolerance must be positive".into()));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
        Ok(Self::normalize(dim, coords, dedup_tol))
    }

    fn normalize(dim: usize, coords: Vec<f64>, dedup_tol: f64) -> Self {
        let mut order: Vec<usize> = (0..coords.len() / dim).collect();
        order.par_sort_unstable_by(|&a, &b| {
            linalg::lex_cmp(&coords[a * dim..(a + 1) * dim], &coords[b * dim..(b + 1) * dim])
                .then(a.cmp(&b))
        });
        let mut index = SnapIndex::new(dim, dedup_tol);
        for i in order {
            index.insert(&coords[i * dim..(i + 1) * dim]);
        }
        PointCloud { dim, coords: index.into_points(), dedup_tol }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dedup_tol(&self) -> f64 {
        self.dedup_tol
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    /// One point per row, comma separated, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        for p in self.points() {
            let row: Vec<String> = p.iter().map(|x| format!("{x:.16e}")).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Largest distance from a point of `a` to its nearest neighbour in `b`.
/// `b` must be sorted lexicographically, which every `PointCloud` is.
fn directed_distance(a: &PointCloud, b: &PointCloud) -> f64 {
    let firsts: Vec<f64> = b.points().map(|p| p[0]).collect();
    a.coords
        .par_chunks_exact(a.dim)
        .map(|p| {
            let start = firsts.partition_point(|&x| x < p[0]);
            let mut best = f64::INFINITY;
            let mut hi = start;
            let mut lo = start;
            loop {
                let mut moved = false;
                if hi < firsts.len() && firsts[hi] - p[0] < best {
                    best = best.min(linalg::dist(p, b.point(hi)));
                    hi += 1;
                    moved = true;
                }
                if lo > 0 && p[0] - firsts[lo - 1] < best {
                    lo -= 1;
                    best = best.min(linalg::dist(p, b.point(lo)));
                    moved = true;
                }
                if !moved {
                    break;
                }
            }
            best
        })
        .reduce(|| 0.0, f64::max)
}

/// Hausdorff distance between two point clouds.
pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::InvalidInput(format!(
            "dimension mismatch: {} vs {}",
            a.dim, b.dim
        )));
    }
    Ok(directed_distance(a, b).max(directed_distance(b, a)))
}

/// `⋃ f(s)` over the maps of the system, deduplicated at `s`'s tolerance.
pub fn hutchinson_apply(sys: &IteratedSystem, s: &PointCloud) -> Result<PointCloud> {
    if sys.dim != s.dim {
        return Err(Error::InvalidInput(format!(
            "system acts on dimension {}, cloud has dimension {}",
            sys.dim, s.dim
        )));
    }
    let dim = s.dim;
    let images: Vec<Vec<f64>> = sys
        .maps
        .par_iter()
        .map(|m| {
            let mut out = vec![0.0; s.coords.len()];
            for (p, o) in s.coords.chunks_exact(dim).zip(out.chunks_exact_mut(dim)) {
                m.apply_into(p, o);
            }
            out
        })
        .collect();
    Ok(PointCloud::normalize(dim, images.concat(), s.dedup_tol))
}

#[derive(Debug, Clone, Copy)]
pub struct AttractorConfig {
    pub max_points: usize,
    pub max_iterations: usize,
}

impl Default for AttractorConfig {
    fn default() -> Self {
        AttractorConfig { max_points: DEFAULT_MAX_POINTS, max_iterations: 10_000 }
    }
}

#[derive(Debug, Clone)]
pub struct AttractorApprox {
    pub cloud: PointCloud,
    /// `cᵐ·d_H(K₁,K₀)/(1−c)`; bounds the distance of `cloud` to the attractor
    /// when no points were merged.
    pub certified_bound: f64,
    pub iterations: usize,
    /// Extra slack `dedup_tol/(1−c)` accounting for merged points.
    pub dedup_slack: f64,
}

/// Iterates the Hutchinson operator from `seed` until the Banach bound drops
/// to `target_tol`.
pub fn attractor_iterate(
    sys: &IteratedSystem,
    seed: &PointCloud,
    target_tol: f64,
    config: AttractorConfig,
) -> Result<AttractorApprox> {
    let c = sys.contraction;
    if c >= 1.0 {
        return Err(Error::NotContractive(c));
    }
    if !(target_tol > 0.0) {
        return Err(Error::InvalidInput("target tolerance must be positive".into()));
    }
    let mut current = seed.clone();
    let next = hutchinson_apply(sys, &current)?;
    let first_gap = hausdorff_distance(&next, &current)?;
    let dedup_slack = seed.dedup_tol / (1.0 - c);
    let mut m = 0usize;
    loop {
        let bound = c.powi(m as i32) * first_gap / (1.0 - c);
        if bound <= target_tol {
            return Ok(AttractorApprox { cloud: current, certified_bound: bound, iterations: m, dedup_slack });
        }
        if m >= config.max_iterations {
            return Err(Error::ResourceLimit(format!(
                "no convergence within {} iterations",
                config.max_iterations
            )));
        }
        current = if m == 0 { next.clone() } else { hutchinson_apply(sys, &current)? };
        m += 1;
        if current.len() > config.max_points {
            return Err(Error::ResourceLimit(format!(
                "iterate {m} holds {} points (cap {}); raise the dedup tolerance",
                current.len(),
                config.max_points
            )));
        }
    }
}

/// Built-in systems.
pub mod fixtures {
    use super::*;

    /// `{x/3, x/3 + 2/3}`.
    pub fn cantor() -> IteratedSystem {
        IteratedSystem::new(vec![
            AffineMap::from_rows(&[&[1.0 / 3.0]], &[0.0]).unwrap(),
            AffineMap::from_rows(&[&[1.0 / 3.0]], &[2.0 / 3.0]).unwrap(),
        ])
        .unwrap()
    }

    /// Three half-scale maps onto the corners of the unit right triangle.
    pub fn sierpinski() -> IteratedSystem {
        let h: &[&[f64]] = &[&[0.5, 0.0], &[0.0, 0.5]];
        IteratedSystem::new(vec![
            AffineMap::from_rows(h, &[0.0, 0.0]).unwrap(),
            AffineMap::from_rows(h, &[0.5, 0.0]).unwrap(),
            AffineMap::from_rows(h, &[0.0, 0.5]).unwrap(),
        ])
        .unwrap()
    }

    /// The four similitudes of the planar four-cell triangle scheme.
    pub fn four_cell_triangle() -> IteratedSystem {
        IteratedSystem::new(crate::partition::fixtures::four_cell_triangle_maps()).unwrap()
    }

    pub fn by_name(name: &str) -> Result<IteratedSystem> {
        match name {
            "cantor" => Ok(cantor()),
            "sierpinski" => Ok(sierpinski()),
            "example2" | "four-cell" => Ok(four_cell_triangle()),
            _ => Err(Error::UnknownName(name.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud1(xs: &[f64]) -> PointCloud {
        PointCloud::new(1, &xs.iter().map(|&x| vec![x]).collect::<Vec<_>>(), 1e-12).unwrap()
    }

    #[test]
    fn lipschitz_examples() {
        assert_eq!(lipschitz_bound(&AffineMap::identity(3)), 1.0);
        let m = AffineMap::from_rows(&[&[0.5, 0.0], &[0.0, 0.5]], &[0.0, 0.0]).unwrap();
        assert_eq!(lipschitz_bound(&m), 0.5);
        let m = AffineMap::from_rows(&[&[-0.5, 0.0], &[0.0, 0.5]], &[0.5, 0.0]).unwrap();
        assert_eq!(lipschitz_bound(&m), 0.5);
        assert!(AffineMap::from_rows(&[&[f64::INFINITY]], &[0.0]).is_err());
    }

    #[test]
    fn hausdorff_examples() {
        assert_eq!(hausdorff_distance(&cloud1(&[0.0]), &cloud1(&[0.0])).unwrap(), 0.0);
        assert_eq!(hausdorff_distance(&cloud1(&[0.0]), &cloud1(&[1.0])).unwrap(), 1.0);
        assert_eq!(hausdorff_distance(&cloud1(&[0.0, 1.0]), &cloud1(&[0.0])).unwrap(), 1.0);
        let two = PointCloud::new(2, &[vec![0.0, 0.0]], 1e-12).unwrap();
        assert!(hausdorff_distance(&cloud1(&[0.0]), &two).is_err());
    }

    #[test]
    fn hutchinson_examples() {
        let halves = IteratedSystem::new(vec![
            AffineMap::from_rows(&[&[0.5]], &[0.0]).unwrap(),
            AffineMap::from_rows(&[&[0.5]], &[0.5]).unwrap(),
        ])
        .unwrap();
        let out = hutchinson_apply(&halves, &cloud1(&[0.0, 1.0])).unwrap();
        let xs: Vec<f64> = out.points().map(|p| p[0]).collect();
        assert_eq!(xs, vec![0.0, 0.5, 1.0]);

        let out = hutchinson_apply(&fixtures::cantor(), &cloud1(&[0.0, 1.0])).unwrap();
        let xs: Vec<f64> = out.points().map(|p| p[0]).collect();
        let want = [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0];
        assert_eq!(xs.len(), 4);
        for (x, w) in xs.iter().zip(want) {
            assert!((x - w).abs() < 1e-15);
        }

        let single = IteratedSystem::new(vec![AffineMap::from_rows(&[&[0.5]], &[1.0]).unwrap()]).unwrap();
        let out = hutchinson_apply(&single, &cloud1(&[2.0])).unwrap();
        assert_eq!(out, cloud1(&[2.0]));
    }

    #[test]
    fn single_map_bound_is_geometric() {
        let sys = IteratedSystem::new(vec![AffineMap::from_rows(&[&[0.5]], &[0.0]).unwrap()]).unwrap();
        let res = attractor_iterate(&sys, &cloud1(&[1.0]), 1e-6, AttractorConfig::default()).unwrap();
        let m = res.iterations as i32;
        assert_eq!(res.certified_bound, 0.5f64.powi(m));
        let x = res.cloud.point(0)[0];
        assert!(x <= res.certified_bound);
    }

    #[test]
    fn not_contractive_rejected() {
        let sys = IteratedSystem::new(vec![AffineMap::from_rows(&[&[1.5]], &[0.0]).unwrap()]).unwrap();
        let err = attractor_iterate(&sys, &cloud1(&[1.0]), 1e-3, AttractorConfig::default());
        assert!(matches!(err, Err(Error::NotContractive(_))));
    }

    #[test]
    fn point_cap_is_enforced() {
        let cfg = AttractorConfig { max_points: 100, max_iterations: 100 };
        let err = attractor_iterate(&fixtures::cantor(), &cloud1(&[0.0]), 1e-9, cfg);
        assert!(matches!(err, Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn csv_has_seventeen_digits() {
        let mut buf = Vec::new();
        cloud1(&[1.0 / 3.0]).write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "3.3333333333333331e-1\n");
    }
}
