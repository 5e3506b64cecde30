//! Dilated and reflected copies of an orthonormal fractal basis on the A1 alcove.

use fracweyl::fractal::{fractal_basis, orthonormalize, FixPointConfig, ScaleVector, SchemeContext};
use fracweyl::partition::fixtures::interval_halves;
use fracweyl::wavelet::basis_enumerator;
use fracweyl::weyl::rank2_catalog;

fn main() -> fracweyl::Result<()> {
    let ctx = SchemeContext::new(interval_halves())?;
    let funcs = fractal_basis(&ctx, &ScaleVector::uniform(2, 0.3), &FixPointConfig::default())?;
    let onb = orthonormalize(&funcs, 10)?;
    let fam = basis_enumerator(&rank2_catalog("A1")?, 2.0, funcs, &onb, 0..=1, 1)?;
    println!("{} family members", fam.len());
    for i in 0..fam.len() {
        let row: Vec<String> = (0..fam.len()).map(|j| format!("{:7.4}", fam.inner(i, j, 10).unwrap())).collect();
        let l = &fam.labels[i];
        println!("k={} word={:?} #{}: {}", l.k, l.word, l.index, row.join(" "));
    }
    Ok(())
}
