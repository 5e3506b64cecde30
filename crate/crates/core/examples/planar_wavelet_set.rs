//! Planar wavelet sets for the dilation 2I: checks and a construction.

use fracweyl::ifs::AffineMap;
use fracweyl::sets::dilation_generator_2d;
use fracweyl::wavelet::nd::disk;
use fracweyl::wavelet::{construct_nd, ExpansiveMatrix, NdCutoffs};

fn main() -> fracweyl::Result<()> {
    let ball = disk([0.0, 0.0], 1.0)?;
    let d = AffineMap::scaling(2, 2.0);
    let annulus = ball.map(&d)?.subtract(&ball);
    let g = dilation_generator_2d(&annulus, &d, 10, &disk([0.0, 0.0], 10.0)?)?;
    println!("annulus generates a dilation partition: defect {:.2e}", g.relative_defect());

    let a = ExpansiveMatrix::scalar(2, 2.0)?;
    let cutoffs = NdCutoffs { region_radius: 6.0, ..NdCutoffs::default() };
    let c = construct_nd(&a, 1e-2, &cutoffs, 32)?;
    println!(
        "construction: {} rounds, area {:.6} (4π² = {:.6}), translation defect {:.1e}, dilation defect {:.2e}",
        c.rounds,
        c.set.area(),
        4.0 * std::f64::consts::PI.powi(2),
        c.report.translation_defect,
        c.report.dilation_defect
    );
    Ok(())
}
