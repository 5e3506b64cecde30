//! Attractors of the Cantor and Sierpinski systems with certified bounds.

use fracweyl::ifs::{attractor_iterate, fixtures, hausdorff_distance, hutchinson_apply, AttractorConfig, PointCloud};

fn main() -> fracweyl::Result<()> {
    for (name, sys, tol) in [("cantor", fixtures::cantor(), 1e-6), ("sierpinski", fixtures::sierpinski(), 1e-3)] {
        let dedup = tol * (1.0 - sys.contraction()) / 4.0;
        let seed = PointCloud::new(sys.dim(), &[vec![0.0; sys.dim()]], dedup)?;
        let a = attractor_iterate(&sys, &seed, tol, AttractorConfig::default())?;
        let residual = hausdorff_distance(&hutchinson_apply(&sys, &a.cloud)?, &a.cloud)?;
        println!(
            "{name}: {} points after {} iterations, bound {:.3e} (+{:.1e} dedup), residual {:.3e}",
            a.cloud.len(),
            a.iterations,
            a.certified_bound,
            a.dedup_slack,
            residual
        );
    }
    Ok(())
}
