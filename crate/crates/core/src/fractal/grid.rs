//! Address grids: all vertices of the depth-`m` cells of a scheme.

use crate::error::{Error, Result};
use crate::linalg::SnapIndex;
use crate::partition::{CellLocator, PartitionScheme};

/// Vertices of the depth-`m` cells `u_{i₁}∘…∘u_{i_m}(△)`, the cells as vertex
/// index lists, and for each point its owning top cell and preimage.
#[derive(Debug, Clone)]
pub struct AddressGrid {
    pub depth: usize,
    dim: usize,
    points: Vec<f64>,
    cells: Vec<Vec<u32>>,
    owner: Vec<u32>,
    pre: Vec<u32>,
}

impl AddressGrid {
    pub fn new(scheme: &PartitionScheme, locator: &CellLocator, depth: usize) -> Result<Self> {
        let dim = scheme.dim();
        let tol = scheme.tol();
        let mut index = SnapIndex::new(dim, tol);
        for v in scheme.parent.vertices() {
            index.insert(v);
        }
        let mut cells: Vec<Vec<u32>> = vec![(0..=dim as u32).collect()];
        let mut buf = vec![0.0; dim];
        for _ in 0..depth {
            let prev = index;
            index = SnapIndex::new(dim, tol);
            let mut new_cells = Vec::with_capacity(cells.len() * scheme.n_cells());
            for u in &scheme.sims {
                let map: Vec<u32> = (0..prev.len())
                    .map(|i| {
                        u.apply_into(prev.point(i), &mut buf);
                        index.insert(&buf).0 as u32
                    })
                    .collect();
                for c in &cells {
                    new_cells.push(c.iter().map(|&v| map[v as usize]).collect());
                }
            }
            cells = new_cells;
        }
        if index.len() > u32::MAX as usize / 2 {
            return Err(Error::ResourceLimit("grid too large".into()));
        }
        let n = index.len();
        let mut owner = Vec::with_capacity(n);
        let mut pre = Vec::with_capacity(n);
        for i in 0..n {
            let (cell, y) = locator.locate(index.point(i));
            let j = index.find(&y).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "grid point {:?} has preimage {y:?} outside the grid; the partition is not conforming",
                    index.point(i)
                ))
            })?;
            owner.push(cell as u32);
            pre.push(j as u32);
        }
        Ok(AddressGrid { depth, dim, points: index.into_points(), cells, owner, pre })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.dim)
    }

    /// Depth-`m` cells as vertex index lists.
    pub fn cells(&self) -> &[Vec<u32>] {
        &self.cells
    }

    /// Top-level cell owning point `i`.
    pub fn owner(&self, i: usize) -> usize {
        self.owner[i] as usize
    }

    /// Grid index of `u_owner⁻¹(point i)`.
    pub fn preimage(&self, i: usize) -> usize {
        self.pre[i] as usize
    }
}
