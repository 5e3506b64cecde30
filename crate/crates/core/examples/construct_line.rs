//! Exchange construction of an approximate wavelet set from [0, 2π).

use fracweyl::sets::{format_q, q, IntervalUnion, Units};
use fracweyl::wavelet::{construct_1d, verify_1d, ConstructConfig};

fn main() -> fracweyl::Result<()> {
    let seed = IntervalUnion::interval(q(0), q(2), Units::Pi);
    let c = construct_1d(1e-4, &seed, &ConstructConfig::default())?;
    println!("{} rounds, defects {:?}", c.rounds, c.defects);
    let r = verify_1d(&c.set, 64)?;
    println!("translation defect {}, dilation defect {:.3e}", r.translation_defect, r.dilation_defect);
    println!("{} pieces; first few (units of π):", c.set.pieces().len());
    for (a, b) in c.set.pieces().iter().take(6) {
        println!("  [{}, {})", format_q(a), format_q(b));
    }
    Ok(())
}
