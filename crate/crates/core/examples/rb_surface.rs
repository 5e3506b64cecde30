//! A fractal interpolation surface over the four-cell triangle, exported as OBJ.

use std::fs::File;

use fracweyl::fractal::fixtures::four_cell_values;
use fracweyl::fractal::{
    check_joinup, fix_point, lambdas_from_interpolation, write_obj, FixPointConfig, RbOperator, ScaleVector,
    SchemeContext,
};
use fracweyl::partition::fixtures::four_cell_triangle;

fn main() -> fracweyl::Result<()> {
    let ctx = SchemeContext::new(four_cell_triangle())?;
    let z = four_cell_values(&ctx, [1.0, 0.5, -0.25])?;
    let scales = ScaleVector::uniform(4, 0.3);
    let lambdas = lambdas_from_interpolation(&ctx, &z, &scales)?;
    let f = fix_point(RbOperator::new(ctx, lambdas, scales)?, &FixPointConfig::default().with_grid_depth(5))?;
    println!("{} iterations, grid residual {:.2e}", f.iterations, f.grid_residual);
    for x in [[0.25, 0.25], [0.1, 0.7], [0.6, 0.2]] {
        let v = f.evaluate_to(&x, 1e-10)?;
        println!("f({:?}) = {:.12} ± {:.1e}", x, v.value, v.bound);
    }
    println!("continuous across cells: {}", check_joinup(&f, 16)?.pass);
    let path = std::env::temp_dir().join("fracweyl_surface.obj");
    write_obj(&f, File::create(&path)?)?;
    println!("mesh written to {}", path.display());
    Ok(())
}
