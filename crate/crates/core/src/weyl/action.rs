//! Affine Weyl groups acting on ℝⁿ: alcoves, words, group closure and folding.

use std::collections::{HashMap, VecDeque};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::roots::{dot, reflection_matrix, AffineReflectionSpec, RootSystemData};
use crate::error::{Error, Result};
use crate::ifs::AffineMap;
use crate::partition::Simplex;

/// Default cap on fold reflections.
pub const FOLD_CAP: usize = 10_000;

/// Tolerance below which a point counts as inside a wall.
const WALL_TOL: f64 = 1e-12;

/// Half-space `⟨x, normal⟩ ≤ offset` bounding an alcove.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Wall {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Wall {
    pub fn violation(&self, x: &[f64]) -> f64 {
        dot(x, &self.normal) - self.offset
    }
}

/// A compact convex polytope cut out by walls, whose wall reflections
/// generate a tessellation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldableFigure {
    pub vertices: Vec<Vec<f64>>,
    pub walls: Vec<Wall>,
}

impl FoldableFigure {
    /// Builds the polytope `⋂ walls`, computing vertices from intersections
    /// of `n` walls.
    pub fn from_walls(walls: Vec<Wall>) -> Result<Self> {
        let n = walls
            .first()
            .ok_or_else(|| Error::InvalidInput("no walls".into()))?
            .normal
            .len();
        let mut vertices: Vec<Vec<f64>> = Vec::new();
        let mut pick = vec![0usize; n];
        fn combos(k: usize, start: usize, m: usize, pick: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k == pick.len() {
                out.push(pick.clone());
                return;
            }
            for i in start..m {
                pick[k] = i;
                combos(k + 1, i + 1, m, pick, out);
            }
        }
        let mut all = Vec::new();
        combos(0, 0, walls.len(), &mut pick, &mut all);
        for c in all {
            let a = DMatrix::from_fn(n, n, |r, col| walls[c[r]].normal[col]);
            let b = DVector::from_fn(n, |r, _| walls[c[r]].offset);
            let Some(x) = crate::linalg::solve(&a, &b) else { continue };
            let x: Vec<f64> = x.iter().map(|v| if v.abs() < 1e-15 { 0.0 } else { *v }).collect();
            if walls.iter().all(|w| w.violation(&x) <= 1e-10)
                && !vertices.iter().any(|v| crate::linalg::dist(v, &x) < 1e-10)
            {
                vertices.push(x);
            }
        }
        if vertices.len() < n + 1 {
            return Err(Error::InvalidGeometry("walls do not bound a compact polytope".into()));
        }
        vertices.sort_by(|a, b| crate::linalg::lex_cmp(a, b));
        Ok(FoldableFigure { vertices, walls })
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.walls.iter().all(|w| w.violation(x) <= tol)
    }

    pub fn is_simplex(&self) -> bool {
        self.vertices.len() == self.dim() + 1
    }

    pub fn as_simplex(&self) -> Option<Simplex> {
        if self.is_simplex() {
            Simplex::new(self.vertices.clone()).ok()
        } else {
            None
        }
    }

    pub fn centroid(&self) -> Vec<f64> {
        let n = self.vertices.len() as f64;
        (0..self.dim())
            .map(|i| self.vertices.iter().map(|v| v[i]).sum::<f64>() / n)
            .collect()
    }

    /// Vertices in counter-clockwise order (two dimensions only).
    pub fn ring(&self) -> Vec<[f64; 2]> {
        let pts: Vec<[f64; 2]> = self.vertices.iter().map(|v| [v[0], v[1]]).collect();
        crate::geometry::ccw(crate::geometry::convex_ring(&pts))
    }

    /// Lebesgue measure of the figure (dimensions one and two).
    pub fn volume(&self) -> f64 {
        match self.dim() {
            1 => self.vertices[1][0] - self.vertices[0][0],
            2 => crate::geometry::polygon_area(&self.ring()),
            _ => crate::geometry::simplex_volume(&self.vertices),
        }
    }

    /// Interior angles at each vertex, in the order of `ring()`.
    pub fn angles(&self) -> Vec<f64> {
        let r = self.ring();
        let n = r.len();
        (0..n)
            .map(|i| {
                let p = r[i];
                let a = r[(i + n - 1) % n];
                let b = r[(i + 1) % n];
                let u = [a[0] - p[0], a[1] - p[1]];
                let v = [b[0] - p[0], b[1] - p[1]];
                let cross = u[0] * v[1] - u[1] * v[0];
                cross.abs().atan2(u[0] * v[0] + u[1] * v[1])
            })
            .collect()
    }
}

/// A word `g_{l₁}∘…∘g_{l_k}` in the generators, with its composed map.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylWord {
    pub letters: Vec<usize>,
    map: AffineMap,
}

impl WeylWord {
    pub fn identity(dim: usize) -> Self {
        WeylWord { letters: Vec::new(), map: AffineMap::identity(dim) }
    }

    pub fn map(&self) -> &AffineMap {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.map.apply(x)
    }

    /// `self ∘ g_letter`.
    pub fn then_right(&self, action: &AffineWeylAction, letter: usize) -> WeylWord {
        let mut letters = self.letters.clone();
        letters.push(letter);
        WeylWord { letters, map: self.map.compose(&action.gen_maps[letter]) }
    }

    /// `g_letter ∘ self`.
    pub fn then_left(&self, action: &AffineWeylAction, letter: usize) -> WeylWord {
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&self.letters);
        WeylWord { letters, map: action.gen_maps[letter].compose(&self.map) }
    }

    /// Recomputes the map from the letters.
    pub fn from_letters(action: &AffineWeylAction, letters: &[usize]) -> Result<WeylWord> {
        let mut w = WeylWord::identity(action.dim());
        for &l in letters {
            if l >= action.generators.len() {
                return Err(Error::InvalidInput(format!("no generator {l}")));
            }
            w = w.then_right(action, l);
        }
        Ok(w)
    }
}

/// Key identifying an affine map up to 1e-10.
pub fn map_key(m: &AffineMap) -> Vec<i64> {
    m.matrix()
        .iter()
        .chain(m.offset().iter())
        .map(|x| (x * 1e10).round() as i64)
        .collect()
}

/// An affine Weyl group given by the wall reflections of its alcove.
#[derive(Debug, Clone)]
pub struct AffineWeylAction {
    pub name: String,
    pub system: RootSystemData,
    pub simples: Vec<Vec<f64>>,
    pub generators: Vec<AffineReflectionSpec>,
    pub alcove: FoldableFigure,
    gen_maps: Vec<AffineMap>,
}

impl AffineWeylAction {
    /// Alcove `{⟨x,δ⟩ ≥ 0 for simple δ, ⟨x,α̃⟩ ≤ scale for each highest α̃}`.
    pub fn new(
        name: &str,
        system: RootSystemData,
        simples: Vec<Vec<f64>>,
        highest: Vec<Vec<f64>>,
        scale: i64,
    ) -> Result<Self> {
        let mut generators = Vec::new();
        let mut walls = Vec::new();
        for d in &simples {
            generators.push(AffineReflectionSpec::new(d.clone(), 0)?);
            walls.push(Wall { normal: d.iter().map(|x| -x).collect(), offset: 0.0 });
        }
        for h in &highest {
            generators.push(AffineReflectionSpec::new(h.clone(), scale)?);
            walls.push(Wall { normal: h.clone(), offset: scale as f64 });
        }
        let alcove = FoldableFigure::from_walls(walls)?;
        let gen_maps = generators.iter().map(AffineReflectionSpec::as_map).collect();
        Ok(AffineWeylAction { name: name.to_string(), system, simples, generators, alcove, gen_maps })
    }

    pub fn dim(&self) -> usize {
        self.system.rank
    }

    pub fn generator_maps(&self) -> &[AffineMap] {
        &self.gen_maps
    }

    /// Linear reflections in the simple roots.
    pub fn finite_generators(&self) -> Vec<DMatrix<f64>> {
        self.simples.iter().map(|s| reflection_matrix(s).expect("nonzero")).collect()
    }

    /// The same group type acting on the `kappa`-dilated alcove.
    pub fn dilated(&self, kappa: i64) -> Result<Self> {
        if kappa < 1 {
            return Err(Error::InvalidInput("dilation factor must be positive".into()));
        }
        let highest: Vec<Vec<f64>> = self
            .generators
            .iter()
            .filter(|g| g.k != 0)
            .map(|g| g.alpha.clone())
            .collect();
        let scale = self.generators.iter().map(|g| g.k).max().unwrap_or(1) * kappa;
        AffineWeylAction::new(
            &format!("{}x{kappa}", self.name),
            self.system.clone(),
            self.simples.clone(),
            highest,
            scale,
        )
    }

    /// Reflects `x` across the most violated wall until it lies in the closed
    /// alcove; returns the representative and the word carrying `x` to it.
    pub fn fold(&self, x: &[f64]) -> Result<(Vec<f64>, WeylWord)> {
        self.fold_with_cap(x, FOLD_CAP)
    }

    pub fn fold_with_cap(&self, x: &[f64], cap: usize) -> Result<(Vec<f64>, WeylWord)> {
        if x.len() != self.dim() {
            return Err(Error::InvalidInput("point dimension mismatch".into()));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite point".into()));
        }
        let mut cur = x.to_vec();
        let mut letters = Vec::new();
        for _ in 0..=cap {
            let scale = 1.0 + cur.iter().map(|v| v.abs()).fold(0.0, f64::max);
            let (j, viol) = self
                .alcove
                .walls
                .iter()
                .enumerate()
                .map(|(j, w)| (j, w.violation(&cur)))
                .fold((0, f64::NEG_INFINITY), |acc, (j, v)| if v > acc.1 { (j, v) } else { acc });
            if viol <= WALL_TOL * scale {
                letters.reverse();
                let word = WeylWord::from_letters(self, &letters)?;
                return Ok((cur, word));
            }
            cur = self.gen_maps[j].apply(&cur);
            letters.push(j);
        }
        Err(Error::FoldDiverged(cap))
    }

    /// Words of length up to `max_len`, deduplicated by their affine map, in
    /// breadth-first order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<WeylWord> {
        let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
        let id = WeylWord::identity(self.dim());
        seen.insert(map_key(id.map()), ());
        let mut out = vec![id.clone()];
        let mut frontier = vec![id];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for j in 0..self.generators.len() {
                    let v = w.then_right(self, j);
                    let key = map_key(v.map());
                    if seen.insert(key, ()).is_none() {
                        next.push(v);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

/// Breadth-first closure of a set of matrices under multiplication.
pub fn group_closure(generators: &[DMatrix<f64>], cap: usize) -> Result<Vec<DMatrix<f64>>> {
    let n = generators
        .first()
        .ok_or_else(|| Error::InvalidInput("no generators".into()))?
        .nrows();
    let key = |m: &DMatrix<f64>| -> Vec<i64> { m.iter().map(|x| (x * 1e10).round() as i64).collect() };
    let id = DMatrix::<f64>::identity(n, n);
    let mut seen = HashMap::new();
    seen.insert(key(&id), ());
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in generators {
            let h = &g * s;
            if seen.insert(key(&h), ()).is_none() {
                if elements.len() >= cap {
                    return Err(Error::NotClosedWithinCap(cap));
                }
                elements.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(elements)
}

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Root system, simple roots and highest roots of a named rank ≤ 2 type.
fn catalog_data(name: &str) -> Result<(RootSystemData, Vec<f64>, Vec<Vec<f64>>)> {
    let h = SQRT3 / 2.0;
    let (roots, generic, highest): (Vec<Vec<f64>>, Vec<f64>, Vec<Vec<f64>>) = match name {
        "A1" => (vec![vec![1.0], vec![-1.0]], vec![1.0], vec![vec![1.0]]),
        "A1xA1" => (
            vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]],
            vec![1.0, 1.0],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        ),
        "A2" => (
            vec![
                vec![1.0, 0.0],
                vec![-1.0, 0.0],
                vec![-0.5, h],
                vec![0.5, -h],
                vec![0.5, h],
                vec![-0.5, -h],
            ],
            vec![1.0, 1.0],
            vec![vec![0.5, h]],
        ),
        "B2" => (
            vec![
                vec![1.0, 0.0],
                vec![-1.0, 0.0],
                vec![0.0, 1.0],
                vec![0.0, -1.0],
                vec![1.0, 1.0],
                vec![-1.0, -1.0],
                vec![1.0, -1.0],
                vec![-1.0, 1.0],
            ],
            vec![2.0, 1.0],
            vec![vec![1.0, 1.0]],
        ),
        "G2" => {
            let mut roots = Vec::new();
            for &(x, y) in &[(1.0, 0.0), (0.5, h), (-0.5, h), (0.0, SQRT3), (1.5, h), (-1.5, h)] {
                roots.push(vec![x, y]);
                roots.push(vec![-x, -y]);
            }
            (roots, vec![1.0, 10.0], vec![vec![0.0, SQRT3]])
        }
        _ => return Err(Error::UnknownName(name.to_string())),
    };
    Ok((RootSystemData::new(roots)?, generic, highest))
}

pub const CATALOG_NAMES: [&str; 5] = ["A1", "A1xA1", "A2", "B2", "G2"];

/// Catalog entry: validated root system with its affine Weyl action.
pub fn rank2_catalog(name: &str) -> Result<AffineWeylAction> {
    let (system, generic, highest) = catalog_data(name)?;
    let report = system.validate();
    if !report.passes() {
        return Err(Error::InvalidInput(format!("catalog entry {name} fails validation")));
    }
    let (_, simples) = system.positive_and_simple(&generic)?;
    AffineWeylAction::new(name, system, simples, highest, 1)
}

/// Plain-data dump of a catalog entry.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogDump {
    pub name: String,
    pub roots: Vec<Vec<f64>>,
    pub coroots: Vec<Vec<f64>>,
    pub simple_roots: Vec<Vec<f64>>,
    pub alcove_vertices: Vec<Vec<f64>>,
    pub generator_matrices: Vec<Vec<Vec<f64>>>,
    pub generator_offsets: Vec<Vec<f64>>,
    pub finite_weyl_order: usize,
    pub alcove_angles: Vec<f64>,
}

impl CatalogDump {
    pub fn new(action: &AffineWeylAction) -> Result<Self> {
        let order = group_closure(&action.finite_generators(), 1000)?.len();
        Ok(CatalogDump {
            name: action.name.clone(),
            roots: action.system.roots.clone(),
            coroots: action.system.coroots(),
            simple_roots: action.simples.clone(),
            alcove_vertices: action.alcove.vertices.clone(),
            generator_matrices: action.gen_maps.iter().map(|m| m.to_spec().matrix).collect(),
            generator_offsets: action.gen_maps.iter().map(|m| m.to_spec().offset).collect(),
            finite_weyl_order: order,
            alcove_angles: if action.dim() == 2 { action.alcove.angles() } else { Vec::new() },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_fold_example() {
        let a1 = rank2_catalog("A1").unwrap();
        let (rep, word) = a1.fold(&[2.3]).unwrap();
        assert!((rep[0] - 0.3).abs() < 1e-12);
        assert!((word.apply(&[2.3])[0] - rep[0]).abs() < 1e-12);
        let (_, again) = a1.fold(&rep).unwrap();
        assert!(again.is_empty());
        let (rep, word) = a1.fold(&[0.4]).unwrap();
        assert_eq!(rep, vec![0.4]);
        assert!(word.is_empty());
    }

    #[test]
    fn finite_orders() {
        for (name, order) in [("A1", 2), ("A1xA1", 4), ("A2", 6), ("B2", 8), ("G2", 12)] {
            let w = rank2_catalog(name).unwrap();
            assert_eq!(group_closure(&w.finite_generators(), 100).unwrap().len(), order, "{name}");
        }
        let w = rank2_catalog("G2").unwrap();
        assert!(matches!(group_closure(&w.finite_generators(), 5), Err(Error::NotClosedWithinCap(5))));
    }

    #[test]
    fn alcove_vertices() {
        let b2 = rank2_catalog("B2").unwrap();
        assert_eq!(b2.alcove.vertices, vec![vec![0.0, 0.0], vec![0.5, 0.5], vec![1.0, 0.0]]);
        let sq = rank2_catalog("A1xA1").unwrap();
        assert_eq!(sq.alcove.vertices.len(), 4);
        assert!(sq.alcove.as_simplex().is_none());
        assert!((sq.alcove.volume() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unknown_catalog_name() {
        assert!(matches!(rank2_catalog("E8"), Err(Error::UnknownName(_))));
    }
}
