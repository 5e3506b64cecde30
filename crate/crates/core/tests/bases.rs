use fracweyl::fractal::{fractal_basis, orthonormalize, FixPointConfig, ScaleVector, SchemeContext};
use fracweyl::partition::fixtures::interval_halves;
use fracweyl::wavelet::{basis_enumerator, DilatedBasis};
use fracweyl::weyl::rank2_catalog;

fn family() -> DilatedBasis {
    let ctx = SchemeContext::new(interval_halves()).unwrap();
    let funcs = fractal_basis(&ctx, &ScaleVector::uniform(2, 0.3), &FixPointConfig::default()).unwrap();
    let onb = orthonormalize(&funcs, 10).unwrap();
    basis_enumerator(&rank2_catalog("A1").unwrap(), 2.0, funcs, &onb, 0..=1, 2).unwrap()
}

#[test]
fn each_scale_is_orthonormal() {
    let fam = family();
    for i in 0..fam.len() {
        for j in 0..fam.len() {
            if fam.labels[i].k != fam.labels[j].k {
                continue;
            }
            let v = fam.inner(i, j, 10).unwrap();
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-4, "{:?} {:?}: {v}", fam.labels[i], fam.labels[j]);
        }
    }
}

#[test]
fn adjacent_scales_are_not_orthogonal() {
    let fam = family();
    let mut largest: f64 = 0.0;
    for i in 0..fam.len() {
        for j in 0..fam.len() {
            if fam.labels[i].k == 0 && fam.labels[j].k == 1 {
                largest = largest.max(fam.inner(i, j, 10).unwrap().abs());
            }
        }
    }
    assert!(largest > 1e-2, "largest cross-scale product {largest}");
}
