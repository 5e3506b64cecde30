//! `(D_A, T)`-wavelet sets: planar sets with polygon algebra, higher
//! dimensions by grid sampling.

use nalgebra::DMatrix;
use serde::Serialize;

use super::exchange::plan_2d;
use super::pair::PairMode2;
use super::{CheckDetail, Cutoffs, WaveletSetReport};
use crate::error::{Error, Result};
use crate::ifs::AffineMap;
use crate::sets::plane::cube;
use crate::sets::{dilation_generator_2d, translation_congruent_2d, PolyUnion, Verdict};

/// A real square matrix with its expansivity certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansiveMatrix {
    pub entries: DMatrix<f64>,
    /// Every eigenvalue has modulus above `1 + 1e-9`.
    pub certified: bool,
}

impl ExpansiveMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::InvalidInput("dilation matrix must be square".into()));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite dilation matrix".into()));
        }
        if entries.determinant().abs() < 1e-12 {
            return Err(Error::InvalidInput("dilation matrix is singular".into()));
        }
        let certified = entries.complex_eigenvalues().iter().all(|z| z.norm() > 1.0 + 1e-9);
        Ok(ExpansiveMatrix { entries, certified })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("dilation matrix must be square".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// `κ·I`.
    pub fn scalar(dim: usize, kappa: f64) -> Result<Self> {
        Self::new(DMatrix::identity(dim, dim) * kappa)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn det(&self) -> f64 {
        self.entries.determinant()
    }

    /// `x ↦ A(x − θ) + θ`.
    pub fn about(&self, theta: &[f64]) -> Result<AffineMap> {
        let n = self.dim();
        if theta.len() != n {
            return Err(Error::InvalidInput("center dimension mismatch".into()));
        }
        let t = nalgebra::DVector::from_column_slice(theta);
        AffineMap::new(self.entries.clone(), &t - &self.entries * &t)
    }

    fn require_certified(&self) -> Result<()> {
        if self.certified {
            Ok(())
        } else {
            Err(Error::InvalidInput("dilation matrix is not expansive".into()))
        }
    }
}

/// Search limits for planar checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NdCutoffs {
    /// Dilation exponents `|k| ≤ window`.
    pub window: u32,
    /// Radius of the region on which the dilation tiling is checked.
    pub region_radius: f64,
    /// Cap on exponents tried by the pair search.
    pub max_exponent: u32,
    /// Relative defect tolerance.
    pub tol: f64,
}

impl Default for NdCutoffs {
    fn default() -> Self {
        NdCutoffs { window: 10, region_radius: 10.0, max_exponent: 16, tol: 1e-6 }
    }
}

impl NdCutoffs {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !(self.region_radius > 0.0) || self.window == 0 {
            return Err(Error::InvalidInput("cutoffs must be positive".into()));
        }
        Ok(())
    }

    fn record(&self) -> Cutoffs {
        Cutoffs {
            dilation_window: self.window,
            max_word_len: None,
            region_radius: Some(self.region_radius),
            tol: self.tol,
        }
    }
}

/// Vertex count of the polygons standing in for disks.
pub const DISK_SIDES: usize = 512;

/// Regular polygon approximating the disk of radius `r` about `center`.
pub fn disk(center: [f64; 2], r: f64) -> Result<PolyUnion> {
    PolyUnion::regular(center, r, DISK_SIDES)
}

/// Translation congruence to the cube `[−π, π)²` and generation of a
/// partition under `x ↦ Ax` on a disk of the given radius.
pub fn verify_nd(e: &PolyUnion, a: &ExpansiveMatrix, cutoffs: &NdCutoffs) -> Result<WaveletSetReport> {
    cutoffs.validate()?;
    a.require_certified()?;
    if a.dim() != 2 {
        return Err(Error::InvalidInput("polygon sets are planar; use verify_sampled in higher dimensions".into()));
    }
    let t = translation_congruent_2d(e, &cube());
    let region = disk([0.0, 0.0], cutoffs.region_radius)?;
    let d = dilation_generator_2d(e, &a.about(&[0.0, 0.0])?, cutoffs.window, &region)?;
    Ok(WaveletSetReport {
        verdict: t.verdict(cutoffs.tol).and(d.verdict(cutoffs.tol)),
        translation_defect: t.relative_defect(),
        dilation_defect: d.relative_defect(),
        translation_check: CheckDetail::PlaneCongruence(t),
        dilation_check: CheckDetail::PlaneGenerator(d),
        cutoffs: cutoffs.record(),
    })
}

#[derive(Debug, Clone)]
pub struct ConstructionNd {
    pub set: PolyUnion,
    pub rounds: usize,
    /// Relative dilation defect after each round.
    pub defects: Vec<f64>,
    pub report: WaveletSetReport,
}

/// Exchange construction starting from the cube and the dilation
/// fundamental domain `A(P) ∖ P`, with `P` the unit disk polygon.
pub fn construct_nd(a: &ExpansiveMatrix, epsilon: f64, cutoffs: &NdCutoffs, max_rounds: usize) -> Result<ConstructionNd> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    cutoffs.validate()?;
    a.require_certified()?;
    if a.dim() != 2 {
        return Err(Error::InvalidInput("construction is planar".into()));
    }
    let d = a.about(&[0.0, 0.0])?;
    let p = disk([0.0, 0.0], 1.0)?;
    let ap = p.map(&d)?;
    if p.subtract(&ap).area() > 1e-12 * p.area() {
        return Err(Error::InvalidInput("the unit disk is not inside its image under A".into()));
    }
    let f = ap.subtract(&p);
    let e = cube();
    let plan = plan_2d(e, &f, &d, PairMode2::Lattice, cutoffs.max_exponent, 1e-12)?;
    let (set, rounds, defects) = plan.run(epsilon, cutoffs.tol, max_rounds, |g| {
        let r = verify_nd(g, a, cutoffs)?;
        Ok((r.translation_defect, r.dilation_defect))
    })?;
    let report = verify_nd(&set, a, cutoffs)?;
    Ok(ConstructionNd { set, rounds, defects, report })
}

/// Limits for the sampled check in any dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleCutoffs {
    /// Grid points per axis.
    pub per_axis: usize,
    pub window: u32,
    /// Lattice shifts `|k_i| ≤ lattice_reach`.
    pub lattice_reach: i64,
    pub region_radius: f64,
}

/// Grid estimates of the two tiling defects. The verdict is always
/// inconclusive: sampling cannot certify a null-set statement.
#[derive(Debug, Clone, Serialize)]
pub struct SampledReport {
    pub verdict: Verdict,
    /// Mean `|#{k : x + 2πk ∈ E} − 1|` times the cube volume.
    pub translation_defect: f64,
    /// Mean `|#{n : A⁻ⁿx ∈ E} − 1|` over the shell, times its volume.
    pub dilation_defect: f64,
    pub samples: usize,
}

fn grid_points(dim: usize, per_axis: usize, lo: f64, hi: f64) -> impl Iterator<Item = Vec<f64>> {
    let total = per_axis.pow(dim as u32);
    let h = (hi - lo) / per_axis as f64;
    (0..total).map(move |mut idx| {
        (0..dim)
            .map(|_| {
                let i = idx % per_axis;
                idx /= per_axis;
                lo + (i as f64 + 0.5) * h
            })
            .collect()
    })
}

/// Midpoint-grid estimates for a set given by its indicator, in any
/// dimension. The dilation defect is sampled on the cube of half-width
/// `region_radius` with the ball reached only by exponents beyond the window
/// removed.
pub fn verify_sampled(
    indicator: impl Fn(&[f64]) -> bool,
    a: &ExpansiveMatrix,
    cutoffs: &SampleCutoffs,
) -> Result<SampledReport> {
    a.require_certified()?;
    let n = a.dim();
    if cutoffs.per_axis == 0 || cutoffs.per_axis.checked_pow(n as u32).is_none_or(|t| t > 50_000_000) {
        return Err(Error::ResourceLimit("sampling grid too large".into()));
    }
    let pi = std::f64::consts::PI;
    let reach = cutoffs.lattice_reach;
    let mut shifts: Vec<Vec<f64>> = vec![Vec::new()];
    for _ in 0..n {
        shifts = shifts
            .into_iter()
            .flat_map(|s| {
                (-reach..=reach).map(move |k| {
                    let mut t = s.clone();
                    t.push(2.0 * pi * k as f64);
                    t
                })
            })
            .collect();
    }
    let mut t_sum = 0.0;
    let mut count = 0usize;
    for x in grid_points(n, cutoffs.per_axis, -pi, pi) {
        let hits = shifts
            .iter()
            .filter(|s| indicator(&x.iter().zip(s.iter()).map(|(a, b)| a + b).collect::<Vec<_>>()))
            .count();
        t_sum += (hits as f64 - 1.0).abs();
        count += 1;
    }
    let translation_defect = t_sum / count as f64 * (2.0 * pi).powi(n as i32);

    let inv = a.entries.clone().try_inverse().ok_or_else(|| Error::InvalidInput("singular".into()))?;
    let norm_inv_w = crate::linalg::spectral_norm(&inv.pow(cutoffs.window))?;
    let r = cutoffs.region_radius;
    let mut inner = 0.0f64;
    for x in grid_points(n, cutoffs.per_axis, -r, r) {
        if indicator(&x) {
            inner = inner.max(x.iter().map(|v| v * v).sum::<f64>().sqrt());
        }
    }
    let skip = norm_inv_w * inner;
    let mut d_sum = 0.0;
    let mut d_count = 0usize;
    for x in grid_points(n, cutoffs.per_axis, -r, r) {
        d_count += 1;
        if x.iter().map(|v| v * v).sum::<f64>().sqrt() <= skip {
            continue;
        }
        let mut hits = 0i64;
        let xv = nalgebra::DVector::from_vec(x);
        let mut y = xv.clone();
        for _ in 0..=cutoffs.window {
            if indicator(y.as_slice()) {
                hits += 1;
            }
            y = &inv * y;
        }
        let mut y = &a.entries * xv;
        for _ in 0..cutoffs.window {
            if indicator(y.as_slice()) {
                hits += 1;
            }
            y = &a.entries * y;
        }
        d_sum += (hits as f64 - 1.0).abs();
    }
    let dilation_defect = d_sum / d_count as f64 * (2.0 * r).powi(n as i32);
    Ok(SampledReport { verdict: Verdict::Inconclusive, translation_defect, dilation_defect, samples: count + d_count })
}
