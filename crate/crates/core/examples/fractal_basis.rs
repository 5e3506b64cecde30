//! Lagrange fractal basis on the four-cell triangle and its orthonormalization.

use fracweyl::fractal::{fractal_basis, orthonormalize, FixPointConfig, ScaleVector, SchemeContext};
use fracweyl::partition::fixtures::four_cell_triangle;

fn main() -> fracweyl::Result<()> {
    let ctx = SchemeContext::new(four_cell_triangle())?;
    let basis = fractal_basis(&ctx, &ScaleVector::uniform(4, 0.3), &FixPointConfig::default())?;
    println!("{} basis functions", basis.len());
    for (v, p) in ctx.labelling.vertices.iter().enumerate() {
        let row: Vec<String> = basis.iter().map(|b| format!("{:.0}", b.evaluate(p, 64).unwrap().value)).collect();
        println!("vertex {v} {:?}: [{}]", p, row.join(" "));
    }
    let onb = orthonormalize(&basis, 8)?;
    println!("Gram diagonal: {:?}", (0..basis.len()).map(|i| onb.gram.matrix[i][i]).collect::<Vec<_>>());
    println!("orthonormalized deviation {:.2e}, quadrature bound {:.2e}", onb.deviation, onb.gram.error_bound);
    Ok(())
}
