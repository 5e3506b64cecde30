//! Exact checks of classical wavelet sets on the line.

use fracweyl::sets::{exponential_gram, q, IntervalUnion, Units};
use fracweyl::wavelet::{journe_set, shannon_set, equivalence_fixtures, verify_1d, verify_1d_generators};

fn main() -> fracweyl::Result<()> {
    let unit = IntervalUnion::interval(q(0), q(2), Units::Pi);
    for (name, e) in [("shannon", shannon_set()), ("journe", journe_set()), ("[0,2pi)", unit)] {
        let r = verify_1d(&e, 32)?;
        let g = exponential_gram(&e, 8)?;
        println!(
            "{name:8} {:?}: translation defect {}, dilation defect {:.4}, exponential Gram deviation {:.1e}",
            r.verdict, r.translation_defect, r.dilation_defect, g.deviation
        );
    }
    println!("generator form against congruence form:");
    for (name, e, _) in equivalence_fixtures() {
        let a = verify_1d_generators(&e, 32)?.verdict;
        let b = verify_1d(&e, 32)?.verdict;
        println!("  {name:24} {a:?} / {b:?}");
    }
    Ok(())
}
