//! Simplicial domains, similitude partitions, labelling maps and the
//! dilated-alcove subdivision.

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry;
use crate::ifs::{AffineMap, AffineMapSpec};
use crate::linalg::{self, SnapIndex};
use crate::weyl::{AffineWeylAction, WeylWord};

/// Snap tolerance for coordinates normalized to parent diameter 1.
pub const SNAP_TOL: f64 = 1e-10;

/// `n+1` affinely independent points in ℝⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: Vec<Vec<f64>>,
}

impl Simplex {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let n = vertices.len().checked_sub(1).filter(|&n| n >= 1).ok_or_else(|| {
            Error::InvalidInput("a simplex needs at least two vertices".into())
        })?;
        if vertices.iter().any(|v| v.len() != n || v.iter().any(|x| !x.is_finite())) {
            return Err(Error::InvalidInput(format!("a {n}-simplex needs {} points in R^{n}", n + 1)));
        }
        let s = Simplex { vertices };
        let d = s.diameter();
        if !(s.volume() > SNAP_TOL * d.powi(n as i32)) {
            return Err(Error::InvalidInput("degenerate simplex".into()));
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn volume(&self) -> f64 {
        geometry::simplex_volume(&self.vertices)
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(linalg::dist(a, b));
            }
        }
        d
    }

    pub fn centroid(&self) -> Vec<f64> {
        let k = self.vertices.len() as f64;
        (0..self.dim())
            .map(|i| self.vertices.iter().map(|v| v[i]).sum::<f64>() / k)
            .collect()
    }

    /// Barycentric coordinates of `x`.
    pub fn barycentric(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let v0 = &self.vertices[0];
        let m = DMatrix::from_fn(n, n, |r, c| self.vertices[c + 1][r] - v0[r]);
        let rhs = nalgebra::DVector::from_fn(n, |r, _| x[r] - v0[r]);
        let lam = m.lu().solve(&rhs).unwrap_or_else(|| nalgebra::DVector::from_element(n, f64::NAN));
        let mut out = Vec::with_capacity(n + 1);
        out.push(1.0 - lam.sum());
        out.extend(lam.iter());
        out
    }

    /// Membership of `x`, allowing barycentric coordinates down to `-tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.barycentric(x).iter().all(|b| *b >= -tol)
    }

    pub fn map(&self, u: &AffineMap) -> Simplex {
        Simplex { vertices: self.vertices.iter().map(|v| u.apply(v)).collect() }
    }

    /// Convex ring of a planar simplex.
    fn ring(&self) -> Vec<[f64; 2]> {
        geometry::ccw(self.vertices.iter().map(|v| [v[0], v[1]]).collect())
    }

    /// `κ·self`.
    pub fn scaled(&self, k: f64) -> Simplex {
        Simplex { vertices: self.vertices.iter().map(|v| v.iter().map(|x| x * k).collect()).collect() }
    }
}

/// A parent simplex with cells and similitudes `u_i` mapping it onto them.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionScheme {
    pub parent: Simplex,
    pub cells: Vec<Simplex>,
    pub sims: Vec<AffineMap>,
    pub ratio: f64,
}

/// JSON layout: a shared vertex table, cells as index lists, and maps.
/// `parent` lists the parent vertex indices; it defaults to the first `n+1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionSchemeJson {
    pub vertices: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<Vec<usize>>,
    pub cells: Vec<Vec<usize>>,
    pub sims: Vec<AffineMapSpec>,
}

fn similarity_ratio(u: &AffineMap) -> f64 {
    let n = u.dim() as f64;
    u.determinant().abs().powf(1.0 / n)
}

impl PartitionScheme {
    pub fn new(parent: Simplex, cells: Vec<Simplex>, sims: Vec<AffineMap>) -> Result<Self> {
        if cells.is_empty() || cells.len() != sims.len() {
            return Err(Error::InvalidInput("need one similitude per cell".into()));
        }
        let n = parent.dim();
        if cells.iter().any(|c| c.dim() != n) || sims.iter().any(|u| u.dim() != n) {
            return Err(Error::InvalidInput("dimension mismatch in scheme".into()));
        }
        let ratio = similarity_ratio(&sims[0]);
        Ok(PartitionScheme { parent, cells, sims, ratio })
    }

    /// Cells taken as the images `u_i(parent)`.
    pub fn from_sims(parent: Simplex, sims: Vec<AffineMap>) -> Result<Self> {
        let cells = sims.iter().map(|u| parent.map(u)).collect();
        Self::new(parent, cells, sims)
    }

    pub fn dim(&self) -> usize {
        self.parent.dim()
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    /// Absolute snap tolerance at this scheme's scale.
    pub fn tol(&self) -> f64 {
        SNAP_TOL * self.parent.diameter()
    }

    /// First cell containing `x` within the snap tolerance.
    pub fn locate(&self, x: &[f64]) -> Option<usize> {
        self.cells.iter().position(|c| c.contains(x, SNAP_TOL))
    }

    pub fn to_json(&self) -> PartitionSchemeJson {
        let mut index = SnapIndex::new(self.dim(), self.tol());
        let parent: Vec<usize> = self.parent.vertices().iter().map(|v| index.insert(v).0).collect();
        let cells = self
            .cells
            .iter()
            .map(|c| c.vertices().iter().map(|v| index.insert(v).0).collect())
            .collect();
        let vertices = (0..index.len()).map(|i| index.point(i).to_vec()).collect();
        let default_parent = (0..=self.dim()).collect::<Vec<_>>();
        PartitionSchemeJson {
            vertices,
            parent: (parent != default_parent).then_some(parent),
            cells,
            sims: self.sims.iter().map(AffineMap::to_spec).collect(),
        }
    }

    pub fn from_json(j: &PartitionSchemeJson) -> Result<Self> {
        let n = j
            .vertices
            .first()
            .ok_or_else(|| Error::InvalidInput("empty vertex table".into()))?
            .len();
        let pick = |ids: &[usize]| -> Result<Simplex> {
            let pts = ids
                .iter()
                .map(|&i| {
                    j.vertices
                        .get(i)
                        .cloned()
                        .ok_or_else(|| Error::InvalidInput(format!("vertex index {i} out of range")))
                })
                .collect::<Result<Vec<_>>>()?;
            Simplex::new(pts)
        };
        let parent_ids = j.parent.clone().unwrap_or_else(|| (0..=n).collect());
        let parent = pick(&parent_ids)?;
        let cells = j.cells.iter().map(|c| pick(c)).collect::<Result<Vec<_>>>()?;
        let sims = j.sims.iter().map(AffineMap::from_spec).collect::<Result<Vec<_>>>()?;
        Self::new(parent, cells, sims)
    }
}

/// Point location over a scheme's cells via the inverse similitudes.
#[derive(Debug, Clone)]
pub struct CellLocator {
    origin: Vec<f64>,
    to_bary: DMatrix<f64>,
    inverses: Vec<AffineMap>,
}

impl CellLocator {
    pub fn new(p: &PartitionScheme) -> Result<Self> {
        let n = p.dim();
        let v = p.parent.vertices();
        let m = DMatrix::from_fn(n, n, |r, c| v[c + 1][r] - v[0][r]);
        let to_bary = m
            .try_inverse()
            .ok_or_else(|| Error::InvalidInput("degenerate parent".into()))?;
        let inverses = p.sims.iter().map(AffineMap::inverse).collect::<Result<Vec<_>>>()?;
        Ok(CellLocator { origin: v[0].clone(), to_bary, inverses })
    }

    /// Smallest barycentric coordinate of `x` in the parent.
    pub fn parent_margin(&self, x: &[f64]) -> f64 {
        let n = self.origin.len();
        let mut sum = 0.0;
        let mut min = f64::INFINITY;
        for r in 0..n {
            let mut acc = 0.0;
            for c in 0..n {
                acc += self.to_bary[(r, c)] * (x[c] - self.origin[c]);
            }
            sum += acc;
            min = min.min(acc);
        }
        min.min(1.0 - sum)
    }

    /// First cell containing `x` within the snap tolerance, falling back to the
    /// cell in which `x` lies deepest; returns the cell and `u_i⁻¹(x)`.
    pub fn locate(&self, x: &[f64]) -> (usize, Vec<f64>) {
        let mut best = (0usize, f64::NEG_INFINITY, Vec::new());
        for (i, inv) in self.inverses.iter().enumerate() {
            let y = inv.apply(x);
            let m = self.parent_margin(&y);
            if m >= -SNAP_TOL {
                return (i, y);
            }
            if m > best.1 {
                best = (i, m, y);
            }
        }
        (best.0, best.2)
    }

    pub fn inverse(&self, i: usize) -> &AffineMap {
        &self.inverses[i]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub pass: bool,
    /// Offending cell pairs; `(i, i)` flags a single cell.
    pub offending: Vec<(usize, usize)>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionReport {
    /// Covering with disjoint interiors.
    pub covering: PropertyCheck,
    /// Each `u_i` is a similitude carrying the parent onto cell `i`.
    pub similar: PropertyCheck,
    /// All cells share one ratio.
    pub congruent: PropertyCheck,
}

impl PartitionReport {
    pub fn passes(&self) -> bool {
        self.covering.pass && self.similar.pass && self.congruent.pass
    }
}

fn same_vertex_set(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
    a.len() == b.len() && a.iter().all(|p| b.iter().any(|q| linalg::dist(p, q) <= tol))
}

/// Interior-intersection measure of two simplices (exact in dimensions 1
/// and 2); in higher dimension a separating facet proves zero and its absence
/// is reported as `None`.
fn simplex_overlap(a: &Simplex, b: &Simplex, tol: f64) -> Option<f64> {
    match a.dim() {
        1 => {
            let span = |s: &Simplex| {
                let (x, y) = (s.vertices[0][0], s.vertices[1][0]);
                (x.min(y), x.max(y))
            };
            Some(geometry::interval_overlap(span(a), span(b)))
        }
        2 => Some(geometry::convex_intersection_area(&a.ring(), &b.ring())),
        _ => {
            let separated = |s: &Simplex, t: &Simplex| {
                (0..=s.dim()).any(|k| {
                    t.vertices.iter().all(|v| s.barycentric(v)[k] <= tol)
                })
            };
            (separated(a, b) || separated(b, a)).then_some(0.0)
        }
    }
}

/// Checks the covering, similarity and congruence properties of a scheme.
pub fn validate_partition(p: &PartitionScheme) -> Result<PartitionReport> {
    let pv = p.parent.volume();
    let diam = p.parent.diameter();
    let tol = SNAP_TOL * diam;
    for c in &p.cells {
        if !(c.volume() > SNAP_TOL * diam.powi(p.dim() as i32)) {
            return Err(Error::InvalidInput("degenerate cell".into()));
        }
    }

    let mut offending = Vec::new();
    let mut notes = Vec::new();
    let total: f64 = p.cells.iter().map(Simplex::volume).sum();
    let vol_ok = (total - pv).abs() <= 1e-9 * pv;
    if !vol_ok {
        notes.push(format!("cell volumes sum to {total}, parent volume {pv}"));
    }
    for (i, c) in p.cells.iter().enumerate() {
        if !c.vertices().iter().all(|v| p.parent.contains(v, SNAP_TOL)) {
            offending.push((i, i));
            notes.push(format!("cell {i} leaves the parent"));
        }
    }
    for i in 0..p.n_cells() {
        for j in i + 1..p.n_cells() {
            match simplex_overlap(&p.cells[i], &p.cells[j], SNAP_TOL) {
                Some(o) if o <= 1e-9 * pv => {}
                Some(o) => {
                    offending.push((i, j));
                    notes.push(format!("cells {i} and {j} overlap in measure {o}"));
                }
                None => {
                    offending.push((i, j));
                    notes.push(format!("cells {i} and {j}: no separating facet found"));
                }
            }
        }
    }
    let covering = PropertyCheck { pass: vol_ok && offending.is_empty(), offending, detail: notes.join("; ") };

    let mut offending = Vec::new();
    let mut notes = Vec::new();
    let ratios: Vec<f64> = p.sims.iter().map(similarity_ratio).collect();
    for (i, u) in p.sims.iter().enumerate() {
        let m = u.matrix();
        let a = ratios[i];
        let gram = m.transpose() * m;
        let dev = (&gram - DMatrix::identity(p.dim(), p.dim()) * (a * a)).amax();
        let maps_onto = same_vertex_set(p.parent.map(u).vertices(), p.cells[i].vertices(), tol);
        if dev > 1e-10 || !(a > 0.0 && a < 1.0) || !maps_onto {
            offending.push((i, i));
            notes.push(format!(
                "map {i}: ratio {a}, orthogonality defect {dev:.3e}, maps parent onto cell: {maps_onto}"
            ));
        }
    }
    let similar = PropertyCheck { pass: offending.is_empty(), offending, detail: notes.join("; ") };

    let mut offending = Vec::new();
    for (i, r) in ratios.iter().enumerate().skip(1) {
        if (r - ratios[0]).abs() > 1e-10 {
            offending.push((0, i));
        }
    }
    let congruent = PropertyCheck {
        pass: offending.is_empty(),
        detail: if offending.is_empty() { String::new() } else { format!("ratios {ratios:?}") },
        offending,
    };
    Ok(PartitionReport { covering, similar, congruent })
}

/// Per-cell labels `ℓ_i(v) = u_i⁻¹(v)` for every cell vertex, over the shared
/// vertex table `∪V_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabellingMap {
    /// `∪V_i`, sorted lexicographically.
    pub vertices: Vec<Vec<f64>>,
    /// For each cell, the table index of its vertex `u_i(p_k)` at slot `k`.
    pub cell_vertices: Vec<Vec<usize>>,
    /// Table index of each parent vertex.
    pub parent_vertices: Vec<usize>,
    /// Vertices whose label differs between the cells sharing them.
    pub conflicts: Vec<usize>,
}

impl LabellingMap {
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Table index of a point, if it is a vertex.
    pub fn vertex_index(&self, x: &[f64], tol: f64) -> Option<usize> {
        self.vertices.iter().position(|v| linalg::dist(v, x) <= tol)
    }

    /// `ℓ_i(v)` as a parent-vertex slot, if `v` is a vertex of cell `i`.
    pub fn label(&self, cell: usize, vertex: usize) -> Option<usize> {
        self.cell_vertices[cell].iter().position(|&g| g == vertex)
    }

    /// The common label of `v` when every cell containing it agrees.
    pub fn global_label(&self, vertex: usize) -> Option<usize> {
        let mut seen = None;
        for c in 0..self.cell_vertices.len() {
            if let Some(k) = self.label(c, vertex) {
                match seen {
                    None => seen = Some(k),
                    Some(s) if s != k => return None,
                    _ => {}
                }
            }
        }
        seen
    }

    /// Cell pairs sharing a full facet, with the shared vertex indices.
    pub fn shared_facets(&self, dim: usize) -> Vec<((usize, usize), Vec<usize>)> {
        let mut out = Vec::new();
        for i in 0..self.cell_vertices.len() {
            for j in i + 1..self.cell_vertices.len() {
                let shared: Vec<usize> = self.cell_vertices[i]
                    .iter()
                    .filter(|v| self.cell_vertices[j].contains(v))
                    .cloned()
                    .collect();
                if shared.len() == dim {
                    out.push(((i, j), shared));
                }
            }
        }
        out
    }
}

/// Computes `ℓ_i(v) = u_i⁻¹(v)` for every cell vertex and checks it is a
/// parent vertex.
pub fn build_labelling(p: &PartitionScheme) -> Result<LabellingMap> {
    let tol = p.tol();
    let mut all: Vec<Vec<f64>> = p
        .parent
        .vertices()
        .iter()
        .chain(p.cells.iter().flat_map(|c| c.vertices().iter()))
        .cloned()
        .collect();
    all.sort_by(|a, b| linalg::lex_cmp(a, b));
    let mut index = SnapIndex::new(p.dim(), tol);
    for v in &all {
        index.insert(v);
    }
    let vertices: Vec<Vec<f64>> = (0..index.len()).map(|i| index.point(i).to_vec()).collect();
    let parent_vertices: Vec<usize> = p
        .parent
        .vertices()
        .iter()
        .map(|v| index.find(v).expect("inserted"))
        .collect();

    let mut cell_vertices = Vec::with_capacity(p.n_cells());
    for (i, (cell, u)) in p.cells.iter().zip(&p.sims).enumerate() {
        let inv = u.inverse()?;
        let mut slots = vec![usize::MAX; p.dim() + 1];
        for v in cell.vertices() {
            let q = inv.apply(v);
            let k = p
                .parent
                .vertices()
                .iter()
                .position(|pv| linalg::dist(pv, &q) <= tol)
                .ok_or_else(|| {
                    Error::LabellingInconsistent(format!(
                        "cell {i}: preimage {q:?} of vertex {v:?} is not a parent vertex"
                    ))
                })?;
            if slots[k] != usize::MAX {
                return Err(Error::LabellingInconsistent(format!(
                    "cell {i}: two vertices pull back to parent vertex {k}"
                )));
            }
            slots[k] = index.find(v).expect("inserted");
        }
        cell_vertices.push(slots);
    }

    let mut labels: HashMap<usize, usize> = HashMap::new();
    let mut conflicts = Vec::new();
    for slots in &cell_vertices {
        for (k, &g) in slots.iter().enumerate() {
            match labels.get(&g) {
                Some(&prev) if prev != k
                    && !conflicts.contains(&g) => {
                        conflicts.push(g);
                    }
                None => {
                    labels.insert(g, k);
                }
                _ => {}
            }
        }
    }
    conflicts.sort_unstable();
    Ok(LabellingMap { vertices, cell_vertices, parent_vertices, conflicts })
}

/// The `κⁿ`-cell scheme on `κ·fig`: `u₁ = x/κ` and `u_j = w_j∘u₁` for the Weyl
/// words `w_j` whose alcoves tile `κ·fig`.
pub fn kappa_subdivision(fig: &Simplex, weyl: &AffineWeylAction, kappa: usize) -> Result<PartitionScheme> {
    kappa_subdivision_with_words(fig, weyl, kappa).map(|(s, _)| s)
}

/// As [`kappa_subdivision`], also returning the word of each cell.
pub fn kappa_subdivision_with_words(
    fig: &Simplex,
    weyl: &AffineWeylAction,
    kappa: usize,
) -> Result<(PartitionScheme, Vec<WeylWord>)> {
    if kappa < 2 {
        return Err(Error::InvalidInput("the dilation factor must be at least 2".into()));
    }
    let tol = SNAP_TOL * fig.diameter();
    if fig.dim() != weyl.dim() || !same_vertex_set(fig.vertices(), &weyl.alcove.vertices, tol) {
        return Err(Error::InvalidInput("figure is not the alcove of the given action".into()));
    }
    if !fig.vertices().iter().any(|v| v.iter().all(|x| x.abs() <= tol)) {
        return Err(Error::InvalidInput("figure has no vertex at the origin".into()));
    }
    let k = kappa as f64;
    let big = weyl.dilated(kappa as i64)?;
    let inside = |w: &WeylWord| {
        fig.vertices()
            .iter()
            .all(|v| big.alcove.contains(&w.apply(v), tol * k))
    };
    let centroid = fig.centroid();
    let key = |w: &WeylWord| -> Vec<i64> {
        w.apply(&centroid).iter().map(|x| (x / tol).round() as i64).collect()
    };
    let mut seen = HashMap::new();
    let id = WeylWord::identity(fig.dim());
    seen.insert(key(&id), ());
    let mut words = vec![id.clone()];
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for j in 0..weyl.generators.len() {
                let v = w.then_right(weyl, j);
                if inside(&v) && seen.insert(key(&v), ()).is_none() {
                    next.push(v);
                }
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let expected = kappa.pow(fig.dim() as u32);
    if words.len() != expected {
        return Err(Error::InvalidGeometry(format!(
            "found {} alcoves inside the dilated figure, expected {expected}",
            words.len()
        )));
    }
    let u1 = AffineMap::scaling(fig.dim(), 1.0 / k);
    let sims: Vec<AffineMap> = words.iter().map(|w| w.map().compose(&u1)).collect();
    let parent = fig.scaled(k);
    let mut scheme = PartitionScheme::from_sims(parent, sims)?;
    scheme.ratio = 1.0 / k;
    Ok((scheme, words))
}

/// Built-in schemes.
pub mod fixtures {
    use super::*;

    /// The four maps of the midpoint subdivision of the unit right triangle
    /// with vertices (0,0), (1,0), (0,1).
    pub fn four_cell_triangle_maps() -> Vec<AffineMap> {
        let m = |a: f64, d: f64, tx: f64, ty: f64| {
            AffineMap::from_rows(&[&[a, 0.0], &[0.0, d]], &[tx, ty]).expect("finite")
        };
        vec![
            m(0.5, 0.5, 0.5, 0.0),
            m(-0.5, 0.5, 0.5, 0.0),
            m(0.5, -0.5, 0.0, 0.5),
            m(0.5, 0.5, 0.0, 0.5),
        ]
    }

    pub fn unit_right_triangle() -> Simplex {
        Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).expect("valid")
    }

    pub fn four_cell_triangle() -> PartitionScheme {
        PartitionScheme::from_sims(unit_right_triangle(), four_cell_triangle_maps()).expect("valid")
    }

    /// `[0,1]` split at `1/2` by `x/2` and `x/2 + 1/2`.
    pub fn interval_halves() -> PartitionScheme {
        let parent = Simplex::new(vec![vec![0.0], vec![1.0]]).expect("valid");
        let sims = vec![
            AffineMap::from_rows(&[&[0.5]], &[0.0]).expect("finite"),
            AffineMap::from_rows(&[&[0.5]], &[0.5]).expect("finite"),
        ];
        PartitionScheme::from_sims(parent, sims).expect("valid")
    }

    /// Looks up a scheme by name.
    pub fn by_name(name: &str) -> Result<PartitionScheme> {
        match name {
            "example2" | "four-cell" => Ok(four_cell_triangle()),
            "interval" => Ok(interval_halves()),
            _ => Err(Error::UnknownName(name.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::weyl::rank2_catalog;

    #[test]
    fn four_cell_scheme_validates() {
        let rep = validate_partition(&four_cell_triangle()).unwrap();
        assert!(rep.passes(), "{rep:?}");
        assert_eq!(four_cell_triangle().ratio, 0.5);
    }

    #[test]
    fn overlapping_copies_fail_covering() {
        let p = unit_right_triangle();
        let half = AffineMap::scaling(2, 0.5);
        let s = PartitionScheme::from_sims(p, vec![half.clone(), half]).unwrap();
        let rep = validate_partition(&s).unwrap();
        assert!(!rep.covering.pass);
        assert!(rep.covering.offending.contains(&(0, 1)));
    }

    #[test]
    fn unequal_ratios_fail_congruence() {
        let parent = Simplex::new(vec![vec![0.0], vec![1.0]]).unwrap();
        let sims = vec![
            AffineMap::from_rows(&[&[0.25]], &[0.0]).unwrap(),
            AffineMap::from_rows(&[&[0.75]], &[0.25]).unwrap(),
        ];
        let rep = validate_partition(&PartitionScheme::from_sims(parent, sims).unwrap()).unwrap();
        assert!(rep.covering.pass);
        assert!(!rep.congruent.pass);
    }

    #[test]
    fn interval_labels() {
        let l = build_labelling(&interval_halves()).unwrap();
        assert_eq!(l.vertices, vec![vec![0.0], vec![0.5], vec![1.0]]);
        assert_eq!(l.label(0, 0), Some(0));
        assert_eq!(l.label(0, 1), Some(1));
        assert_eq!(l.label(1, 1), Some(0));
        assert_eq!(l.label(1, 2), Some(1));
        assert_eq!(l.conflicts, vec![1]);
    }

    #[test]
    fn incompatible_map_is_rejected() {
        let mut s = interval_halves();
        s.sims[1] = AffineMap::from_rows(&[&[0.5]], &[0.3]).unwrap();
        assert!(matches!(build_labelling(&s), Err(Error::LabellingInconsistent(_))));
    }

    #[test]
    fn four_cell_labelling() {
        let l = build_labelling(&four_cell_triangle()).unwrap();
        assert_eq!(l.n_vertices(), 6);
        // (0,0) pulls back to different parent corners through cells 2 and 3.
        let origin = l.vertex_index(&[0.0, 0.0], 1e-12).unwrap();
        assert!(l.conflicts.contains(&origin));
        assert_eq!(l.shared_facets(2).len(), 3);
    }

    #[test]
    fn a1_kappa_two() {
        let a1 = rank2_catalog("A1").unwrap();
        let fig = a1.alcove.as_simplex().unwrap();
        let (s, words) = kappa_subdivision_with_words(&fig, &a1, 2).unwrap();
        assert_eq!(s.n_cells(), 2);
        assert_eq!(s.ratio, 0.5);
        assert_eq!(s.cells[0].vertices(), fig.vertices());
        let c1: Vec<f64> = s.cells[1].vertices().iter().map(|v| v[0]).collect();
        assert!((c1[0] - 2.0).abs() < 1e-12 && (c1[1] - 1.0).abs() < 1e-12);
        assert_eq!(words[1].letters, vec![1]);
        assert!(validate_partition(&s).unwrap().passes());
        assert!(build_labelling(&s).unwrap().conflicts.is_empty());
    }

    #[test]
    fn kappa_rejects_foreign_figure() {
        let a2 = rank2_catalog("A2").unwrap();
        assert!(kappa_subdivision(&unit_right_triangle(), &a2, 2).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = four_cell_triangle();
        let j = s.to_json();
        assert_eq!(j.vertices.len(), 6);
        let back = PartitionScheme::from_json(&j).unwrap();
        assert_eq!(back, s);
    }
}
