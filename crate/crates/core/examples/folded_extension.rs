//! A fractal function on the A1 alcove extended to the line by folding.

use fracweyl::fractal::fixtures::tent_interval;
use fracweyl::weyl::{rank2_catalog, ExtendedFunction};

fn main() -> fracweyl::Result<()> {
    let f = tent_interval()?;
    let a1 = rank2_catalog("A1")?;
    let ext = ExtendedFunction::new(&f, &a1)?;
    for i in -8..=8 {
        let x = i as f64 * 0.375;
        println!("x = {x:6.3}  f = {:.6}", ext.eval(&[x], 1e-9)?.value);
    }
    Ok(())
}
