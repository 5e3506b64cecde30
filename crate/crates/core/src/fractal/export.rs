//! Surface export as OBJ meshes and CSV samples.

use std::io::Write;

use super::FractalFunction;
use crate::error::{Error, Result};

/// OBJ mesh over the address grid: one vertex per grid point with the function
/// value as last coordinate, one face per depth-`m` cell. Planar domains only.
pub fn write_obj<W: Write>(f: &FractalFunction, mut w: W) -> Result<()> {
    if f.grid.dim() != 2 {
        return Err(Error::InvalidInput("OBJ export needs a planar domain".into()));
    }
    for (p, v) in f.grid.points().zip(&f.grid_values) {
        writeln!(w, "v {:.16e} {:.16e} {:.16e}", p[0], p[1], v)?;
    }
    for c in f.grid.cells() {
        let ids: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
        writeln!(w, "f {}", ids.join(" "))?;
    }
    Ok(())
}

/// CSV rows `x₁,…,xₙ,value` over the address grid.
pub fn write_csv<W: Write>(f: &FractalFunction, mut w: W) -> Result<()> {
    for (p, v) in f.grid.points().zip(&f.grid_values) {
        let mut row: Vec<String> = p.iter().map(|x| format!("{x:.16e}")).collect();
        row.push(format!("{v:.16e}"));
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}
