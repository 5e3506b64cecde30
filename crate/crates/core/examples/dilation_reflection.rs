//! A wavelet set for reflections in the A1 affine Weyl group and dilation by 2
//! about the alcove midpoint.

use fracweyl::sets::format_q;
use fracweyl::wavelet::{
    construct_dilation_reflection, verify_dilation_reflection, DilationReflectionSpec, DrCutoffs, DrSet,
    ExpansiveMatrix,
};
use fracweyl::weyl::rank2_catalog;

fn main() -> fracweyl::Result<()> {
    let spec = DilationReflectionSpec::new(rank2_catalog("A1")?, None, ExpansiveMatrix::scalar(1, 2.0)?)?;
    let cutoffs = DrCutoffs::default();
    let c = construct_dilation_reflection(&spec, 1e-3, None, &cutoffs, 64)?;
    let r = verify_dilation_reflection(&c.set, &spec, &cutoffs)?;
    println!("theta = {:?}, {} rounds, verdict {:?}, defect {:.3e}", spec.theta, c.rounds, r.verdict, r.dilation_defect);
    if let DrSet::Interval(s) = &c.set {
        let pieces: Vec<String> = s.pieces().iter().map(|(a, b)| format!("[{}, {})", format_q(a), format_q(b))).collect();
        println!("set: {}", pieces.join(" ∪ "));
    }
    Ok(())
}
