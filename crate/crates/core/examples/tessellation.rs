//! Alcoves meeting a disk, and folding points back into the alcove.

use fracweyl::weyl::{rank2_catalog, tessellate, Region};

fn main() -> fracweyl::Result<()> {
    for name in ["A2", "B2", "G2"] {
        let w = rank2_catalog(name)?;
        let t = tessellate(&w, &Region::ball(2, 2.0), 10)?;
        println!(
            "{name}: {} alcoves from {} words, uncovered {:.2e} of {:.3}",
            t.cells.len(),
            t.words_enumerated,
            t.uncovered,
            t.region_volume
        );
        let x = [1.7, -0.9];
        let (rep, word) = w.fold(&x)?;
        println!("  fold {:?} -> [{:.4}, {:.4}] by a word of length {}", x, rep[0], rep[1], word.len());
    }
    Ok(())
}
