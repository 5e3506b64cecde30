//! Regional tessellation by alcoves.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::action::{AffineWeylAction, WeylWord};
use crate::error::{Error, Result};
use crate::geometry;

/// A bounded region of ℝ¹ or ℝ².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Region {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
}

impl Region {
    pub fn ball(dim: usize, radius: f64) -> Region {
        Region::Ball { center: vec![0.0; dim], radius }
    }

    pub fn dim(&self) -> usize {
        match self {
            Region::Box { lo, .. } => lo.len(),
            Region::Ball { center, .. } => center.len(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Region::Box { lo, hi } => {
                if lo.len() != hi.len() || lo.iter().zip(hi).any(|(a, b)| !(a < b)) {
                    return Err(Error::InvalidInput("malformed box".into()));
                }
            }
            Region::Ball { radius, center } => {
                if !(*radius > 0.0) || center.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidInput("malformed ball".into()));
                }
            }
        }
        if !(1..=2).contains(&self.dim()) {
            return Err(Error::InvalidInput("regions are supported in dimensions 1 and 2".into()));
        }
        Ok(())
    }

    pub fn volume(&self) -> f64 {
        match self {
            Region::Box { lo, hi } => lo.iter().zip(hi).map(|(a, b)| b - a).product(),
            Region::Ball { radius, .. } => match self.dim() {
                1 => 2.0 * radius,
                _ => std::f64::consts::PI * radius * radius,
            },
        }
    }

    fn as_interval(&self) -> (f64, f64) {
        match self {
            Region::Box { lo, hi } => (lo[0], hi[0]),
            Region::Ball { center, radius } => (center[0] - radius, center[0] + radius),
        }
    }

    /// Measure of a convex cell (given by its vertices) inside the region.
    pub fn cell_measure(&self, cell: &[Vec<f64>]) -> f64 {
        if self.dim() == 1 {
            let a = cell.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
            let b = cell.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
            return geometry::interval_overlap((a, b), self.as_interval());
        }
        let pts: Vec<[f64; 2]> = cell.iter().map(|v| [v[0], v[1]]).collect();
        let ring = geometry::ccw(geometry::convex_ring(&pts));
        match self {
            Region::Box { lo, hi } => {
                let b = [[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]];
                geometry::convex_intersection_area(&ring, &b)
            }
            Region::Ball { center, radius } => {
                geometry::polygon_disk_area(&ring, [center[0], center[1]], *radius)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct TessellationCell {
    pub word: WeylWord,
    pub vertices: Vec<Vec<f64>>,
    pub measure_in_region: f64,
}

#[derive(Debug, Clone)]
pub struct Tessellation {
    pub cells: Vec<TessellationCell>,
    pub region_volume: f64,
    /// Region measure not covered by any returned cell.
    pub uncovered: f64,
    pub words_enumerated: usize,
}

/// Enumerates alcoves `w(C)` for words of length up to `max_len` and keeps
/// those meeting `region`.
pub fn tessellate(weyl: &AffineWeylAction, region: &Region, max_len: usize) -> Result<Tessellation> {
    region.validate()?;
    if region.dim() != weyl.dim() {
        return Err(Error::InvalidInput("region dimension differs from the action".into()));
    }
    let words = weyl.words_up_to(max_len);
    let cell_vol = weyl.alcove.volume();
    let cells: Vec<TessellationCell> = words
        .par_iter()
        .filter_map(|w| {
            let vertices: Vec<Vec<f64>> = weyl.alcove.vertices.iter().map(|v| w.apply(v)).collect();
            let m = region.cell_measure(&vertices);
            (m > 1e-12 * cell_vol).then(|| TessellationCell { word: w.clone(), vertices, measure_in_region: m })
        })
        .collect();
    let covered: f64 = cells.iter().map(|c| c.measure_in_region).sum();
    let region_volume = region.volume();
    Ok(Tessellation {
        cells,
        region_volume,
        uncovered: (region_volume - covered).max(0.0),
        words_enumerated: words.len(),
    })
}

impl Tessellation {
    /// Largest pairwise overlap measure divided by the cell measure.
    pub fn max_relative_overlap(&self, cell_volume: f64) -> f64 {
        let n = self.cells.len();
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut worst: f64 = 0.0;
                for j in i + 1..n {
                    let o = overlap(&self.cells[i].vertices, &self.cells[j].vertices);
                    worst = worst.max(o / cell_volume);
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }

    /// CSV rows: word letters separated by spaces, then cell vertex
    /// coordinates.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "word,vertices")?;
        for c in &self.cells {
            let letters: Vec<String> = c.word.letters.iter().map(|l| l.to_string()).collect();
            let coords: Vec<String> = c
                .vertices
                .iter()
                .flat_map(|v| v.iter().map(|x| format!("{x:.16e}")))
                .collect();
            writeln!(w, "{},{}", letters.join(" "), coords.join(","))?;
        }
        Ok(())
    }
}

fn overlap(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    if a[0].len() == 1 {
        let span = |c: &[Vec<f64>]| {
            (
                c.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min),
                c.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max),
            )
        };
        return geometry::interval_overlap(span(a), span(b));
    }
    let ring = |c: &[Vec<f64>]| {
        let pts: Vec<[f64; 2]> = c.iter().map(|v| [v[0], v[1]]).collect();
        geometry::ccw(geometry::convex_ring(&pts))
    };
    geometry::convex_intersection_area(&ring(a), &ring(b))
}
