//! Fractal functions as fixed points of Read–Bajraktarević operators
//! `f∘u_i = λ_i + s_i·f` over a similitude partition.

mod basis;
mod export;
mod grid;

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

pub use basis::{fractal_basis, gram_matrix, orthonormalize, GramReport, OrthonormalBasis};
pub use export::{write_csv, write_obj};
pub use grid::AddressGrid;

use crate::error::{Error, Result};
use crate::linalg::{self, SnapIndex};
use crate::partition::{build_labelling, CellLocator, LabellingMap, PartitionScheme};

/// Default depth of the address grid used by [`fix_point`].
pub const DEFAULT_GRID_DEPTH: usize = 10;
/// Recursion cap for [`FractalFunction::evaluate_to`].
pub const MAX_EVAL_DEPTH: usize = 400;

pub type Field = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// One map `λ_i : ℝⁿ → ℝ`.
#[derive(Clone)]
pub enum Lambda {
    Affine { grad: Vec<f64>, constant: f64 },
    /// A bounded field with a certified bound on its sup-norm over the parent.
    Field { f: Field, sup: f64 },
}

impl fmt::Debug for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lambda::Affine { grad, constant } => {
                f.debug_struct("Affine").field("grad", grad).field("constant", constant).finish()
            }
            Lambda::Field { sup, .. } => f.debug_struct("Field").field("sup", sup).finish(),
        }
    }
}

impl Lambda {
    pub fn affine(grad: Vec<f64>, constant: f64) -> Self {
        Lambda::Affine { grad, constant }
    }

    pub fn zero(dim: usize) -> Self {
        Lambda::Affine { grad: vec![0.0; dim], constant: 0.0 }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Lambda::Affine { grad, constant } => constant + linalg_dot(grad, x),
            Lambda::Field { f, .. } => f(x),
        }
    }

    pub fn as_affine(&self) -> Option<(&[f64], f64)> {
        match self {
            Lambda::Affine { grad, constant } => Some((grad, *constant)),
            Lambda::Field { .. } => None,
        }
    }
}

fn linalg_dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The family `(λ_1, …, λ_N)`.
#[derive(Debug, Clone)]
pub struct LambdaVector {
    pub lambdas: Vec<Lambda>,
}

impl LambdaVector {
    pub fn zero(n_cells: usize, dim: usize) -> Self {
        LambdaVector { lambdas: vec![Lambda::zero(dim); n_cells] }
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn is_affine(&self) -> bool {
        self.lambdas.iter().all(|l| l.as_affine().is_some())
    }

    /// `α·self + β·other` for affine families.
    pub fn combine(&self, alpha: f64, other: &LambdaVector, beta: f64) -> Result<LambdaVector> {
        let lambdas = self
            .lambdas
            .iter()
            .zip(&other.lambdas)
            .map(|(a, b)| match (a.as_affine(), b.as_affine()) {
                (Some((ga, ca)), Some((gb, cb))) => Ok(Lambda::affine(
                    ga.iter().zip(gb).map(|(x, y)| alpha * x + beta * y).collect(),
                    alpha * ca + beta * cb,
                )),
                _ => Err(Error::InvalidInput("only affine families can be combined".into())),
            })
            .collect::<Result<_>>()?;
        Ok(LambdaVector { lambdas })
    }

    /// Largest coefficient difference between two affine families.
    pub fn max_abs_diff(&self, other: &LambdaVector) -> Option<f64> {
        let mut d: f64 = 0.0;
        for (a, b) in self.lambdas.iter().zip(&other.lambdas) {
            let ((ga, ca), (gb, cb)) = (a.as_affine()?, b.as_affine()?);
            d = d.max((ca - cb).abs());
            for (x, y) in ga.iter().zip(gb) {
                d = d.max((x - y).abs());
            }
        }
        Some(d)
    }
}

/// The scale factors `s_i`, constant or bounded fields.
#[derive(Clone)]
pub enum ScaleVector {
    Constant(Vec<f64>),
    Field { fields: Vec<Field>, sup_bound: f64 },
}

impl fmt::Debug for ScaleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleVector::Constant(s) => f.debug_tuple("Constant").field(s).finish(),
            ScaleVector::Field { sup_bound, .. } => {
                f.debug_struct("Field").field("sup_bound", sup_bound).finish()
            }
        }
    }
}

impl ScaleVector {
    pub fn uniform(n_cells: usize, s: f64) -> Self {
        ScaleVector::Constant(vec![s; n_cells])
    }

    pub fn sup_bound(&self) -> f64 {
        match self {
            ScaleVector::Constant(s) => s.iter().map(|x| x.abs()).fold(0.0, f64::max),
            ScaleVector::Field { sup_bound, .. } => *sup_bound,
        }
    }

    pub fn value(&self, i: usize, x: &[f64]) -> f64 {
        match self {
            ScaleVector::Constant(s) => s[i],
            ScaleVector::Field { fields, .. } => fields[i](x),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ScaleVector::Constant(s) => s.len(),
            ScaleVector::Field { fields, .. } => fields.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, ScaleVector::Constant(_))
    }
}

/// Values `z_v` on the shared vertex table of a labelling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterpolationSet {
    pub values: Vec<f64>,
}

impl InterpolationSet {
    pub fn new(labelling: &LabellingMap, values: Vec<f64>) -> Result<Self> {
        if values.len() != labelling.n_vertices() {
            return Err(Error::InvalidInput(format!(
                "expected {} vertex values, got {}",
                labelling.n_vertices(),
                values.len()
            )));
        }
        Ok(InterpolationSet { values })
    }

    /// Values assigned by point; vertices not listed get zero.
    pub fn from_points(labelling: &LabellingMap, entries: &[(Vec<f64>, f64)], tol: f64) -> Result<Self> {
        let mut values = vec![0.0; labelling.n_vertices()];
        for (p, z) in entries {
            let i = labelling
                .vertex_index(p, tol)
                .ok_or_else(|| Error::InvalidInput(format!("{p:?} is not a partition vertex")))?;
            values[i] = *z;
        }
        Ok(InterpolationSet { values })
    }
}

/// A scheme together with its labelling and point-location data, shared by
/// every function built on it.
#[derive(Debug)]
pub struct SchemeContext {
    pub scheme: PartitionScheme,
    pub labelling: LabellingMap,
    pub locator: CellLocator,
    vertex_index: SnapIndex,
}

impl SchemeContext {
    pub fn new(scheme: PartitionScheme) -> Result<Arc<Self>> {
        let labelling = build_labelling(&scheme)?;
        let locator = CellLocator::new(&scheme)?;
        let mut vertex_index = SnapIndex::new(scheme.dim(), scheme.tol());
        for v in &labelling.vertices {
            vertex_index.insert(v);
        }
        Ok(Arc::new(SchemeContext { scheme, labelling, locator, vertex_index }))
    }

    pub fn dim(&self) -> usize {
        self.scheme.dim()
    }

    pub fn n_cells(&self) -> usize {
        self.scheme.n_cells()
    }

    /// Vertex table index of `x`, if it is a vertex.
    pub fn vertex_at(&self, x: &[f64]) -> Option<usize> {
        self.vertex_index.find(x)
    }

    /// Builds the address grid of the given depth.
    pub fn grid(&self, depth: usize) -> Result<Arc<AddressGrid>> {
        AddressGrid::new(&self.scheme, &self.locator, depth).map(Arc::new)
    }
}

/// Parameters of the operator `(Φg)(u_i x) = λ_i(x) + s_i(x)·g(x)`.
#[derive(Debug, Clone)]
pub struct RbOperator {
    pub ctx: Arc<SchemeContext>,
    pub lambdas: LambdaVector,
    pub scales: ScaleVector,
}

impl RbOperator {
    pub fn new(ctx: Arc<SchemeContext>, lambdas: LambdaVector, scales: ScaleVector) -> Result<Self> {
        let n = ctx.n_cells();
        if lambdas.len() != n || scales.len() != n {
            return Err(Error::InvalidInput(format!(
                "scheme has {n} cells, got {} lambdas and {} scales",
                lambdas.len(),
                scales.len()
            )));
        }
        Ok(RbOperator { ctx, lambdas, scales })
    }

    /// `sup |λ_i|` over the parent.
    fn lambda_sup(&self) -> f64 {
        let verts = self.ctx.scheme.parent.vertices();
        self.lambdas
            .lambdas
            .iter()
            .map(|l| match l {
                Lambda::Affine { .. } => verts.iter().map(|v| l.eval(v).abs()).fold(0.0, f64::max),
                Lambda::Field { sup, .. } => *sup,
            })
            .fold(0.0, f64::max)
    }
}

/// One application of the operator to values sampled on an address grid.
pub fn rb_apply(op: &RbOperator, grid: &AddressGrid, g: &[f64]) -> Result<Vec<f64>> {
    if g.len() != grid.len() || grid.dim() != op.ctx.dim() {
        return Err(Error::InvalidInput("sampled function does not match the grid".into()));
    }
    Ok((0..grid.len())
        .into_par_iter()
        .map(|p| {
            let i = grid.owner(p);
            let q = grid.preimage(p);
            let y = grid.point(q);
            op.lambdas.lambdas[i].eval(y) + op.scales.value(i, y) * g[q]
        })
        .collect())
}

#[derive(Debug, Clone, Copy)]
pub struct FixPointConfig {
    /// Stop once the sup-grid residual is below `tol·(1−s)`.
    pub tol: f64,
    pub grid_depth: usize,
    pub eval_depth: usize,
    pub max_iterations: usize,
}

impl Default for FixPointConfig {
    fn default() -> Self {
        FixPointConfig { tol: 1e-12, grid_depth: DEFAULT_GRID_DEPTH, eval_depth: 40, max_iterations: 10_000 }
    }
}

impl FixPointConfig {
    pub fn with_grid_depth(mut self, depth: usize) -> Self {
        self.grid_depth = depth;
        self
    }
}

/// A value with a certified error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub value: f64,
    pub bound: f64,
}

/// The fixed point of an RB operator.
#[derive(Debug, Clone)]
pub struct FractalFunction {
    pub op: RbOperator,
    /// Values on the labelling's vertex table.
    pub vertex_values: Vec<f64>,
    /// Certified bound on `sup |f|`.
    pub range_bound: f64,
    pub eval_depth: usize,
    pub grid: Arc<AddressGrid>,
    pub grid_values: Vec<f64>,
    /// Sup-norm of `Φg − g` for the returned grid values.
    pub grid_residual: f64,
    pub iterations: usize,
}

/// Exact vertex values: parent vertices from the linear relations among
/// themselves, the other vertices from one application of the operator.
fn vertex_values(op: &RbOperator) -> Result<Vec<f64>> {
    let ctx = &op.ctx;
    let pv = ctx.scheme.parent.vertices();
    let k = pv.len();
    let slot_of = |y: &[f64]| pv.iter().position(|p| linalg::dist(p, y) <= ctx.scheme.tol());
    let mut a = DMatrix::<f64>::identity(k, k);
    let mut b = DVector::<f64>::zeros(k);
    for (r, p) in pv.iter().enumerate() {
        let (i, y) = ctx.locator.locate(p);
        let slot = slot_of(&y)
            .ok_or_else(|| Error::InvalidInput("parent vertex pulls back off the parent vertices".into()))?;
        b[r] = op.lambdas.lambdas[i].eval(&y);
        a[(r, slot)] -= op.scales.value(i, &y);
    }
    let parent_vals = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::InvalidInput("singular vertex relations".into()))?;
    let mut out = Vec::with_capacity(ctx.labelling.n_vertices());
    for v in &ctx.labelling.vertices {
        if let Some(r) = slot_of(v) {
            out.push(parent_vals[r]);
            continue;
        }
        let (i, y) = ctx.locator.locate(v);
        let slot = slot_of(&y)
            .ok_or_else(|| Error::InvalidInput(format!("vertex {v:?} pulls back off the parent vertices")))?;
        out.push(op.lambdas.lambdas[i].eval(&y) + op.scales.value(i, &y) * parent_vals[slot]);
    }
    Ok(out)
}

/// Iterates the operator from `g₀ ≡ 0` on the address grid until the residual
/// certifies `tol`.
pub fn fix_point(op: RbOperator, config: &FixPointConfig) -> Result<FractalFunction> {
    let grid = op.ctx.grid(config.grid_depth)?;
    fix_point_on(op, grid, config)
}

/// As [`fix_point`], reusing an existing grid.
pub fn fix_point_on(op: RbOperator, grid: Arc<AddressGrid>, config: &FixPointConfig) -> Result<FractalFunction> {
    let s = op.scales.sup_bound();
    if !(s < 1.0) {
        return Err(Error::NotContractive(s));
    }
    if !(config.tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let vv = vertex_values(&op)?;
    let range_bound = op.lambda_sup() / (1.0 - s);
    let mut g = vec![0.0; grid.len()];
    let mut iterations = 0;
    let residual = loop {
        let next = rb_apply(&op, &grid, &g)?;
        let r = next.iter().zip(&g).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        g = next;
        iterations += 1;
        if r <= config.tol * (1.0 - s) {
            let after = rb_apply(&op, &grid, &g)?;
            break after.iter().zip(&g).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        }
        if iterations >= config.max_iterations {
            return Err(Error::ResourceLimit(format!("no convergence in {iterations} iterations")));
        }
    };
    Ok(FractalFunction {
        op,
        vertex_values: vv,
        range_bound,
        eval_depth: config.eval_depth,
        grid,
        grid_values: g,
        grid_residual: residual,
        iterations,
    })
}

impl FractalFunction {
    pub fn ctx(&self) -> &SchemeContext {
        &self.op.ctx
    }

    /// Descends the cell address of `x` for up to `depth` levels; exact when
    /// the orbit meets a vertex, otherwise bounded by `|Π s|·range_bound`.
    pub fn evaluate(&self, x: &[f64], depth: usize) -> Result<Evaluation> {
        let ctx = &self.op.ctx;
        if x.len() != ctx.dim() || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("point dimension mismatch".into()));
        }
        if ctx.locator.parent_margin(x) < -crate::partition::SNAP_TOL {
            return Err(Error::OutOfDomain(x.to_vec()));
        }
        let mut acc = 0.0;
        let mut prod = 1.0;
        let mut cur = x.to_vec();
        for _ in 0..depth {
            if let Some(v) = ctx.vertex_at(&cur) {
                return Ok(Evaluation { value: acc + prod * self.vertex_values[v], bound: 0.0 });
            }
            let (i, y) = ctx.locator.locate(&cur);
            acc += prod * self.op.lambdas.lambdas[i].eval(&y);
            prod *= self.op.scales.value(i, &y);
            cur = y;
        }
        if let Some(v) = ctx.vertex_at(&cur) {
            return Ok(Evaluation { value: acc + prod * self.vertex_values[v], bound: 0.0 });
        }
        Ok(Evaluation { value: acc, bound: prod.abs() * self.range_bound })
    }

    /// Evaluates with the smallest depth whose bound is at most `tol`.
    pub fn evaluate_to(&self, x: &[f64], tol: f64) -> Result<Evaluation> {
        let s = self.op.scales.sup_bound();
        let depth = if s == 0.0 || self.range_bound == 0.0 {
            1
        } else {
            ((tol / self.range_bound).ln() / s.ln()).ceil().max(1.0) as usize
        };
        self.evaluate(x, depth.min(MAX_EVAL_DEPTH))
    }

    /// Value at a vertex of the labelling's table.
    pub fn vertex_value(&self, v: usize) -> f64 {
        self.vertex_values[v]
    }

    /// `f(u_i(y)) = λ_i(y) + s_i(y)·f(y)` evaluated from the right-hand side.
    pub fn evaluate_in_cell(&self, cell: usize, y: &[f64], tol: f64) -> Result<Evaluation> {
        let inner = self.evaluate_to(y, tol)?;
        let s = self.op.scales.value(cell, y);
        Ok(Evaluation {
            value: self.op.lambdas.lambdas[cell].eval(y) + s * inner.value,
            bound: s.abs() * inner.bound,
        })
    }
}

/// Affine `λ_i` from the conditions `λ_i(ℓ_i(v)) + s_i·z_{ℓ_i(v)} = z_v`.
pub fn lambdas_from_interpolation(
    ctx: &SchemeContext,
    z: &InterpolationSet,
    scales: &ScaleVector,
) -> Result<LambdaVector> {
    let s = scales.sup_bound();
    if !(s < 1.0) {
        return Err(Error::NotContractive(s));
    }
    if z.values.len() != ctx.labelling.n_vertices() {
        return Err(Error::InvalidInput("interpolation set does not match the vertex table".into()));
    }
    let pv = ctx.scheme.parent.vertices();
    let n = ctx.dim();
    let mut lambdas = Vec::with_capacity(ctx.n_cells());
    for (i, slots) in ctx.labelling.cell_vertices.iter().enumerate() {
        let a = DMatrix::from_fn(n + 1, n + 1, |r, c| if c < n { pv[r][c] } else { 1.0 });
        let b = DVector::from_fn(n + 1, |r, _| {
            let zp = z.values[ctx.labelling.parent_vertices[r]];
            z.values[slots[r]] - scales.value(i, &pv[r]) * zp
        });
        let sol = linalg::solve(&a, &b)
            .ok_or_else(|| Error::DegenerateInterpolation(format!("cell {i}: singular vertex system")))?;
        lambdas.push(Lambda::affine(sol.iter().take(n).cloned().collect(), sol[n]));
    }
    Ok(LambdaVector { lambdas })
}

/// Interior sample nodes `c + (p_k − c)/2` of the parent.
fn interior_nodes(ctx: &SchemeContext) -> Vec<Vec<f64>> {
    let c = ctx.scheme.parent.centroid();
    ctx.scheme
        .parent
        .vertices()
        .iter()
        .map(|p| p.iter().zip(&c).map(|(pi, ci)| ci + 0.5 * (pi - ci)).collect())
        .collect()
}

/// `λ_i := g∘u_i − s_i·g`, fitted as affine maps from interior nodes.
///
/// Exact for affine `g` and for fixed points of affine families.
pub fn lambdas_of<G>(ctx: &SchemeContext, scales: &ScaleVector, g: G) -> Result<LambdaVector>
where
    G: Fn(&[f64]) -> Result<f64>,
{
    let n = ctx.dim();
    let nodes = interior_nodes(ctx);
    let a = DMatrix::from_fn(n + 1, n + 1, |r, c| if c < n { nodes[r][c] } else { 1.0 });
    let mut lambdas = Vec::with_capacity(ctx.n_cells());
    for (i, u) in ctx.scheme.sims.iter().enumerate() {
        let mut b = DVector::zeros(n + 1);
        for (r, y) in nodes.iter().enumerate() {
            b[r] = g(&u.apply(y))? - scales.value(i, y) * g(y)?;
        }
        let sol = linalg::solve(&a, &b)
            .ok_or_else(|| Error::DegenerateInterpolation("singular sample nodes".into()))?;
        lambdas.push(Lambda::affine(sol.iter().take(n).cloned().collect(), sol[n]));
    }
    Ok(LambdaVector { lambdas })
}

/// Per-facet outcome of the continuity check.
#[derive(Debug, Clone, Serialize)]
pub struct FacetCheck {
    pub cells: (usize, usize),
    /// The λ-terms agree on the facet and both sides pull back to the same
    /// parent facet with the same orientation and scale.
    pub structural: bool,
    /// Largest two-sided difference over the facet samples.
    pub max_deviation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct JoinupReport {
    /// False when λ is not affine or s is not constant.
    pub applicable: bool,
    pub facets: Vec<FacetCheck>,
    /// Vertices whose value differs between the cells sharing them.
    pub vertex_mismatches: Vec<usize>,
    pub pass: bool,
}

/// Barycentric lattice points of a facet with `k` vertices at resolution `m`.
fn facet_samples(verts: &[Vec<f64>], m: usize) -> Vec<Vec<f64>> {
    let k = verts.len();
    let mut out = Vec::new();
    let mut comp = vec![0usize; k];
    fn rec(pos: usize, left: usize, comp: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos + 1 == comp.len() {
            comp[pos] = left;
            out.push(comp.clone());
            return;
        }
        for c in 0..=left {
            comp[pos] = c;
            rec(pos + 1, left - c, comp, out);
        }
    }
    let mut all = Vec::new();
    rec(0, m, &mut comp, &mut all);
    let dim = verts[0].len();
    for c in all {
        let mut p = vec![0.0; dim];
        for (w, v) in c.iter().zip(verts) {
            for (pi, vi) in p.iter_mut().zip(v) {
                *pi += (*w as f64 / m as f64) * vi;
            }
        }
        out.push(p);
    }
    out
}

/// Continuity of the fixed point across shared facets.
pub fn check_joinup(f: &FractalFunction, samples: usize) -> Result<JoinupReport> {
    let op = &f.op;
    let ctx = &op.ctx;
    let applicable = op.lambdas.is_affine() && op.scales.is_constant();
    let n = ctx.dim();
    let lab = &ctx.labelling;

    let mut vertex_mismatches = Vec::new();
    for v in 0..lab.n_vertices() {
        let mut vals = Vec::new();
        for (i, slots) in lab.cell_vertices.iter().enumerate() {
            if let Some(k) = slots.iter().position(|&g| g == v) {
                let p = &ctx.scheme.parent.vertices()[k];
                let pk = f.vertex_values[lab.parent_vertices[k]];
                vals.push(op.lambdas.lambdas[i].eval(p) + op.scales.value(i, p) * pk);
            }
        }
        if vals.iter().any(|x| (x - vals[0]).abs() > 1e-9 * (1.0 + vals[0].abs())) {
            vertex_mismatches.push(v);
        }
    }

    let mut facets = Vec::new();
    for ((i, j), shared) in lab.shared_facets(n) {
        let verts: Vec<Vec<f64>> = shared.iter().map(|&v| lab.vertices[v].clone()).collect();
        let (ui, uj) = (ctx.locator.inverse(i), ctx.locator.inverse(j));
        let same_pullback = shared.iter().all(|&v| lab.label(i, v) == lab.label(j, v));
        let lambda_terms_agree = verts.iter().all(|x| {
            let li = op.lambdas.lambdas[i].eval(&ui.apply(x));
            let lj = op.lambdas.lambdas[j].eval(&uj.apply(x));
            (li - lj).abs() <= 1e-9 * (1.0 + li.abs())
        });
        let scales_agree = (op.scales.value(i, &verts[0]) - op.scales.value(j, &verts[0])).abs() <= 1e-15;
        let structural = applicable && same_pullback && lambda_terms_agree && scales_agree;

        let pts = facet_samples(&verts, samples.max(1));
        let devs = pts
            .par_iter()
            .map(|x| -> Result<f64> {
                let a = f.evaluate_in_cell(i, &ui.apply(x), 1e-12)?;
                let b = f.evaluate_in_cell(j, &uj.apply(x), 1e-12)?;
                Ok(((a.value - b.value).abs() - a.bound - b.bound).max(0.0))
            })
            .collect::<Result<Vec<_>>>()?;
        let max_deviation = devs.into_iter().fold(0.0, f64::max);
        facets.push(FacetCheck {
            cells: (i, j),
            structural,
            max_deviation,
            pass: max_deviation <= 1e-9 && lambda_terms_agree,
        });
    }
    let pass = applicable && vertex_mismatches.is_empty() && facets.iter().all(|c| c.pass);
    Ok(JoinupReport { applicable, facets, vertex_mismatches, pass })
}

/// Built-in fractal data.
pub mod fixtures {
    use super::*;
    use crate::partition::fixtures as pf;

    /// `z(0)=0, z(1/2)=1, z(1)=0` on the halved interval with `s = 1/2`.
    pub fn tent_interval() -> Result<FractalFunction> {
        let ctx = SchemeContext::new(pf::interval_halves())?;
        let z = InterpolationSet::new(&ctx.labelling, vec![0.0, 1.0, 0.0])?;
        let scales = ScaleVector::uniform(2, 0.5);
        let lambdas = lambdas_from_interpolation(&ctx, &z, &scales)?;
        fix_point(RbOperator::new(ctx, lambdas, scales)?, &FixPointConfig::default())
    }

    /// Four-cell triangle with zero corners and `(z₁, z₂, z₃)` at
    /// `(1/2,0)`, `(1/2,1/2)`, `(0,1/2)`.
    pub fn four_cell_values(ctx: &SchemeContext, z: [f64; 3]) -> Result<InterpolationSet> {
        let tol = ctx.scheme.tol();
        InterpolationSet::from_points(
            &ctx.labelling,
            &[(vec![0.5, 0.0], z[0]), (vec![0.5, 0.5], z[1]), (vec![0.0, 0.5], z[2])],
            tol,
        )
    }
}
