//! Lagrange-type fractal bases, Gram matrices by cell-centroid quadrature and
//! Gram–Schmidt orthonormalization.

use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    fix_point_on, lambdas_from_interpolation, FixPointConfig, FractalFunction, InterpolationSet, RbOperator,
    ScaleVector, SchemeContext,
};
use crate::error::{Error, Result};

/// One function `𝔟_v` per vertex `v`, interpolating `δ_{vv′}`.
pub fn fractal_basis(
    ctx: &Arc<SchemeContext>,
    scales: &ScaleVector,
    config: &FixPointConfig,
) -> Result<Vec<FractalFunction>> {
    let grid = ctx.grid(config.grid_depth)?;
    let n = ctx.labelling.n_vertices();
    (0..n)
        .into_par_iter()
        .map(|v| {
            let mut z = vec![0.0; n];
            z[v] = 1.0;
            let z = InterpolationSet::new(&ctx.labelling, z)?;
            let lambdas = lambdas_from_interpolation(ctx, &z, scales)?;
            let op = RbOperator::new(ctx.clone(), lambdas, scales.clone())?;
            fix_point_on(op, grid.clone(), config)
        })
        .collect()
}

/// Values of every function at the centroids of the depth-`m` cells, by the
/// forward recursion `f(u_i y) = λ_i(y) + s_i(y)·f(y)` from the parent
/// centroid. Returns (cell volume, per-function values).
fn centroid_values(basis: &[FractalFunction], depth: usize) -> Result<(f64, Vec<Vec<f64>>)> {
    let ctx = basis[0].ctx();
    let c0 = ctx.scheme.parent.centroid();
    let mut points = vec![c0.clone()];
    let mut values: Vec<Vec<f64>> = basis
        .iter()
        .map(|f| f.evaluate_to(&c0, 1e-15).map(|e| vec![e.value]))
        .collect::<Result<_>>()?;
    for _ in 0..depth {
        let mut next_points = Vec::with_capacity(points.len() * ctx.n_cells());
        for u in &ctx.scheme.sims {
            for p in &points {
                next_points.push(u.apply(p));
            }
        }
        values = basis
            .par_iter()
            .zip(values.par_iter())
            .map(|(f, vals)| {
                let mut out = Vec::with_capacity(next_points.len());
                for i in 0..ctx.n_cells() {
                    let lam = &f.op.lambdas.lambdas[i];
                    for (p, v) in points.iter().zip(vals) {
                        out.push(lam.eval(p) + f.op.scales.value(i, p) * v);
                    }
                }
                out
            })
            .collect();
        points = next_points;
    }
    let vol = ctx.scheme.parent.volume() * ctx.scheme.ratio.powi((ctx.dim() * depth) as i32);
    Ok((vol, values))
}

#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    pub matrix: Vec<Vec<f64>>,
    pub depth: usize,
    /// `C·(m+1)·max(a,|s|)ᵐ` bound on each entry's quadrature error.
    pub error_bound: f64,
}

/// `⟨𝔟_u, 𝔟_v⟩` over the parent by centroid quadrature on depth-`m` cells.
pub fn gram_matrix(basis: &[FractalFunction], depth: usize) -> Result<GramReport> {
    if basis.is_empty() {
        return Err(Error::InvalidInput("empty basis".into()));
    }
    let ctx = basis[0].ctx();
    if basis.iter().any(|f| !std::ptr::eq(f.ctx(), ctx)) {
        return Err(Error::InvalidInput("basis functions come from different schemes".into()));
    }
    let (vol, vals) = centroid_values(basis, depth)?;
    let k = basis.len();
    let mut g = vec![vec![0.0; k]; k];
    for a in 0..k {
        for b in a..k {
            let s: f64 = vals[a].iter().zip(&vals[b]).map(|(x, y)| x * y).sum::<f64>() * vol;
            g[a][b] = s;
            g[b][a] = s;
        }
    }

    // Oscillation of f on a depth-m cell is at most
    // (m+1)·max(a,s)ᵐ·(L·diam + 2R), with L the largest λ gradient norm.
    let a = ctx.scheme.ratio;
    let s = basis.iter().map(|f| f.op.scales.sup_bound()).fold(0.0, f64::max);
    let diam = ctx.scheme.parent.diameter();
    let mut c_f: f64 = 0.0;
    let mut r_max: f64 = 0.0;
    for f in basis {
        let lip = f
            .op
            .lambdas
            .lambdas
            .iter()
            .map(|l| l.as_affine().map(|(g, _)| g.iter().map(|x| x * x).sum::<f64>().sqrt()).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max);
        c_f = c_f.max(lip * diam + 2.0 * f.range_bound);
        r_max = r_max.max(f.range_bound);
    }
    let parent_vol = ctx.scheme.parent.volume();
    let q = a.max(s);
    let error_bound = 2.0 * parent_vol * r_max * c_f * (depth as f64 + 1.0) * q.powi(depth as i32);
    Ok(GramReport { matrix: g, depth, error_bound })
}

#[derive(Debug, Clone, Serialize)]
pub struct OrthonormalBasis {
    /// Upper-triangular `C` with `CᵀGC = I`; column `j` gives the coefficients
    /// of the `j`-th orthonormal function.
    pub coefficients: Vec<Vec<f64>>,
    pub gram: GramReport,
    /// `max |CᵀGC − I|`.
    pub deviation: f64,
    pub basis_size: usize,
    /// `(n+1)·N − card(∪V_i)`.
    pub dimension_count: i64,
}

/// Gram–Schmidt in the quadrature inner product, with one re-orthogonalization
/// pass.
pub fn orthonormalize(basis: &[FractalFunction], depth: usize) -> Result<OrthonormalBasis> {
    let gram = gram_matrix(basis, depth)?;
    let k = basis.len();
    let g = DMatrix::from_fn(k, k, |r, c| gram.matrix[r][c]);
    let mut c = DMatrix::<f64>::zeros(k, k);
    for j in 0..k {
        let mut v = nalgebra::DVector::<f64>::zeros(k);
        v[j] = 1.0;
        for _ in 0..2 {
            for i in 0..j {
                let ci = c.column(i).clone_owned();
                let proj = (ci.transpose() * &g * &v)[(0, 0)];
                v -= ci * proj;
            }
        }
        let nn = (v.transpose() * &g * &v)[(0, 0)];
        if !(nn > 1e-12 * g[(j, j)].abs().max(f64::MIN_POSITIVE)) {
            return Err(Error::RankDeficient(j));
        }
        c.set_column(j, &(v / nn.sqrt()));
    }
    let check = c.transpose() * &g * &c - DMatrix::<f64>::identity(k, k);
    let ctx = basis[0].ctx();
    Ok(OrthonormalBasis {
        coefficients: (0..k).map(|r| c.row(r).iter().cloned().collect()).collect(),
        gram,
        deviation: check.amax(),
        basis_size: k,
        dimension_count: ((ctx.dim() + 1) * ctx.n_cells()) as i64 - ctx.labelling.n_vertices() as i64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::SchemeContext;
    use crate::partition::fixtures as pf;

    #[test]
    fn interval_basis_is_lagrange() {
        let ctx = SchemeContext::new(pf::interval_halves()).unwrap();
        let cfg = FixPointConfig::default().with_grid_depth(4);
        let basis = fractal_basis(&ctx, &ScaleVector::uniform(2, 0.25), &cfg).unwrap();
        assert_eq!(basis.len(), 3);
        for (v, b) in basis.iter().enumerate() {
            for w in 0..3 {
                let want = if v == w { 1.0 } else { 0.0 };
                assert!((b.vertex_value(w) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn single_function_coefficient() {
        let ctx = SchemeContext::new(pf::interval_halves()).unwrap();
        let cfg = FixPointConfig::default().with_grid_depth(3);
        let basis = fractal_basis(&ctx, &ScaleVector::uniform(2, 0.25), &cfg).unwrap();
        let one = &basis[1..2];
        let o = orthonormalize(one, 10).unwrap();
        let g = o.gram.matrix[0][0];
        assert!((o.coefficients[0][0] - 1.0 / g.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn duplicate_function_is_rank_deficient() {
        let ctx = SchemeContext::new(pf::interval_halves()).unwrap();
        let cfg = FixPointConfig::default().with_grid_depth(3);
        let basis = fractal_basis(&ctx, &ScaleVector::uniform(2, 0.25), &cfg).unwrap();
        let dup = vec![basis[0].clone(), basis[0].clone()];
        assert!(matches!(orthonormalize(&dup, 8), Err(Error::RankDeficient(1))));
    }
}
