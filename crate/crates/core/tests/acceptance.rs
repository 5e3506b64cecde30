//! Acceptance criteria, one test each. Every test prints a single
//! `PASS`/`FAIL` line; run with `--nocapture` to see them.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fracweyl::fractal::{
    self, fix_point, fractal_basis, lambdas_from_interpolation, lambdas_of, orthonormalize, FixPointConfig,
    FractalFunction, LambdaVector, RbOperator, ScaleVector, SchemeContext,
};
use fracweyl::ifs::{self, attractor_iterate, hausdorff_distance, hutchinson_apply, AttractorConfig, PointCloud};
use fracweyl::partition::fixtures as pf;
use fracweyl::sets::{exponential_gram, q, qf, translation_congruent_2d, IntervalUnion, PolyUnion, Units, Verdict};
use fracweyl::sets::plane::cube;
use fracweyl::sets::dilation_generator_2d;
use fracweyl::wavelet::nd::disk;
use fracweyl::wavelet::{
    construct_1d, construct_dilation_reflection, journe_set, shannon_set, equivalence_fixtures, verify_1d,
    verify_1d_generators, verify_dilation_reflection, ConstructConfig, DilationReflectionSpec, DrCutoffs,
    ExpansiveMatrix,
};
use fracweyl::ifs::AffineMap;
use fracweyl::weyl::{rank2_catalog, tessellate, CatalogDump, Region, CATALOG_NAMES};

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn run_criterion(id: u32, name: &str, budget: Duration, body: impl FnOnce() -> Outcome) {
    let start = Instant::now();
    let outcome = body().and_then(|detail| {
        let t = start.elapsed();
        if t > budget {
            Err(format!("{detail}; took {:.1}s, budget {}s", t.as_secs_f64(), budget.as_secs()))
        } else {
            Ok(format!("{detail} ({:.2}s)", t.as_secs_f64()))
        }
    });
    match outcome {
        Ok(detail) => println!("PASS {id:>2} {name}: {detail}"),
        Err(why) => {
            println!("FAIL {id:>2} {name}: {why}");
            panic!("criterion {id} failed: {why}");
        }
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

#[test]
fn criterion_01_ifs_convergence() {
    run_criterion(1, "IFS convergence", secs(5), || {
        let sys = ifs::fixtures::cantor();
        let tiny = 1e-15;
        let mut k = PointCloud::new(1, &[vec![0.0]], tiny).map_err(|e| e.to_string())?;
        let mut gaps = Vec::new();
        for _ in 0..12 {
            let next = hutchinson_apply(&sys, &k).map_err(|e| e.to_string())?;
            gaps.push(hausdorff_distance(&next, &k).map_err(|e| e.to_string())?);
            k = next;
        }
        for m in 3..gaps.len() - 1 {
            let ratio = gaps[m + 1] / gaps[m];
            ensure(
                (ratio - 1.0 / 3.0).abs() <= 0.05 / 3.0,
                format!("gap ratio {ratio} at m={m}"),
            )?;
        }
        let seed = PointCloud::new(1, &[vec![0.0]], 1e-12).map_err(|e| e.to_string())?;
        let a = attractor_iterate(&sys, &seed, 1e-6, AttractorConfig::default()).map_err(|e| e.to_string())?;
        let image = hutchinson_apply(&sys, &a.cloud).map_err(|e| e.to_string())?;
        let residual = hausdorff_distance(&image, &a.cloud).map_err(|e| e.to_string())?;
        ensure(a.certified_bound <= 1e-6, format!("bound {}", a.certified_bound))?;
        ensure(residual <= 2.0 * a.certified_bound, format!("residual {residual} vs bound {}", a.certified_bound))?;
        Ok(format!("residual {residual:.3e}, bound {:.3e}, {} iterations", a.certified_bound, a.iterations))
    });
}

fn tent(depth: usize) -> fracweyl::Result<FractalFunction> {
    let ctx = SchemeContext::new(pf::interval_halves())?;
    let z = fractal::InterpolationSet::new(&ctx.labelling, vec![0.0, 1.0, 0.0])?;
    let scales = ScaleVector::uniform(2, 0.5);
    let lambdas = lambdas_from_interpolation(&ctx, &z, &scales)?;
    fix_point(RbOperator::new(ctx, lambdas, scales)?, &FixPointConfig::default().with_grid_depth(depth))
}

#[test]
fn criterion_02_rb_fixed_point() {
    run_criterion(2, "RB fixed point", secs(5), || {
        let f = tent(10).map_err(|e| e.to_string())?;
        for x in [0.25, 0.75] {
            let v = f.evaluate(&[x], 64).map_err(|e| e.to_string())?;
            ensure(v.value == 1.0 && v.bound == 0.0, format!("f({x}) = {v:?}"))?;
        }
        // f(u_i(y)) = λ_i(y) + s·f(y) on the dyadic grid of depth 10.
        let n = 1 << 10;
        let mut sup: f64 = 0.0;
        for i in 0..2 {
            let u = &f.ctx().scheme.sims[i];
            for j in 0..=n {
                let y = [j as f64 / n as f64];
                let lhs = f.evaluate(&u.apply(&y), 64).map_err(|e| e.to_string())?;
                let rhs = f.evaluate(&y, 64).map_err(|e| e.to_string())?;
                let lam = f.op.lambdas.lambdas[i].eval(&y);
                sup = sup.max((lhs.value - lam - 0.5 * rhs.value).abs() + lhs.bound + 0.5 * rhs.bound);
            }
        }
        ensure(sup <= 1e-9, format!("sup residual {sup}"))?;
        ensure(f.grid_residual <= 1e-9, format!("grid residual {}", f.grid_residual))?;
        Ok(format!("f(1/4)=f(3/4)=1, sup residual {sup:.1e}"))
    });
}

fn example2_function(
    ctx: &std::sync::Arc<SchemeContext>,
    lambdas: LambdaVector,
    s: f64,
) -> fracweyl::Result<FractalFunction> {
    fix_point(RbOperator::new(ctx.clone(), lambdas, ScaleVector::uniform(4, s))?, &FixPointConfig::default())
}

fn triangle_samples(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            let (a, b): (f64, f64) = (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0));
            if a + b > 1.0 {
                vec![1.0 - a, 1.0 - b]
            } else {
                vec![a, b]
            }
        })
        .collect()
}

#[test]
fn criterion_03_linear_isomorphism() {
    run_criterion(3, "lambda-to-function isomorphism", secs(120), || {
        let ctx = SchemeContext::new(pf::four_cell_triangle()).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut worst_lin: f64 = 0.0;
        let mut worst_trip: f64 = 0.0;
        for _ in 0..20 {
            let s = rng.random_range(-0.5..0.5);
            let scales = ScaleVector::uniform(4, s);
            let mut draw = || {
                let z = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
                let z = fractal::fixtures::four_cell_values(&ctx, z)?;
                lambdas_from_interpolation(&ctx, &z, &scales)
            };
            let lam = draw().map_err(|e| e.to_string())?;
            let mu = draw().map_err(|e| e.to_string())?;
            let (alpha, beta) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let f_l = example2_function(&ctx, lam.clone(), s).map_err(|e| e.to_string())?;
            let f_m = example2_function(&ctx, mu.clone(), s).map_err(|e| e.to_string())?;
            let f_c = example2_function(&ctx, lam.combine(alpha, &mu, beta).map_err(|e| e.to_string())?, s).map_err(|e| e.to_string())?;
            for x in triangle_samples(&mut rng, 50) {
                let ev = |f: &FractalFunction| f.evaluate_to(&x, 1e-12).map(|e| e.value);
                let (a, b, c) = (ev(&f_l), ev(&f_m), ev(&f_c));
                let d = (c.map_err(|e| e.to_string())?
                    - alpha * a.map_err(|e| e.to_string())?
                    - beta * b.map_err(|e| e.to_string())?)
                .abs();
                worst_lin = worst_lin.max(d);
            }
            let back = lambdas_of(&ctx, &scales, |x| Ok(f_l.evaluate_to(x, 1e-13)?.value)).map_err(|e| e.to_string())?;
            worst_trip = worst_trip.max(back.max_abs_diff(&lam).ok_or("non-affine lambdas")?);
        }
        ensure(worst_lin <= 1e-8, format!("linearity defect {worst_lin}"))?;
        ensure(worst_trip <= 1e-8, format!("round trip defect {worst_trip}"))?;
        Ok(format!("linearity {worst_lin:.1e}, round trip {worst_trip:.1e}"))
    });
}

#[test]
fn criterion_04_fractal_basis() {
    run_criterion(4, "fractal basis", secs(60), || {
        let ctx = SchemeContext::new(pf::four_cell_triangle()).map_err(|e| e.to_string())?;
        let s = 0.3;
        let scales = ScaleVector::uniform(4, s);
        let basis = fractal_basis(&ctx, &scales, &FixPointConfig::default()).map_err(|e| e.to_string())?;
        let verts = &ctx.labelling.vertices;
        let mut delta: f64 = 0.0;
        for (v, b) in basis.iter().enumerate() {
            for (w, p) in verts.iter().enumerate() {
                let val = b.evaluate(p, 64).map_err(|e| e.to_string())?.value;
                delta = delta.max((val - if v == w { 1.0 } else { 0.0 }).abs());
            }
        }
        ensure(delta <= 1e-12, format!("Lagrange defect {delta}"))?;

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let z: Vec<f64> = (0..verts.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let zi = fractal::InterpolationSet::new(&ctx.labelling, z.clone()).map_err(|e| e.to_string())?;
        let f = example2_function(&ctx, lambdas_from_interpolation(&ctx, &zi, &scales).map_err(|e| e.to_string())?, s)
            .map_err(|e| e.to_string())?;
        let mut recon: f64 = 0.0;
        for x in triangle_samples(&mut rng, 200) {
            let direct = f.evaluate_to(&x, 1e-13).map_err(|e| e.to_string())?.value;
            let mut sum = 0.0;
            for (zv, b) in z.iter().zip(&basis) {
                sum += zv * b.evaluate_to(&x, 1e-13).map_err(|e| e.to_string())?.value;
            }
            recon = recon.max((direct - sum).abs());
        }
        ensure(recon <= 1e-8, format!("reconstruction defect {recon}"))?;

        let onb = orthonormalize(&basis, 8).map_err(|e| e.to_string())?;
        ensure(onb.deviation <= 1e-6, format!("Gram deviation {}", onb.deviation))?;
        Ok(format!("delta {delta:.1e}, reconstruction {recon:.1e}, Gram deviation {:.1e}", onb.deviation))
    });
}

/// Orbit of the identity under matrix products, compared with a tolerance.
fn closure_order(gens: &[DMatrix<f64>]) -> usize {
    let n = gens[0].nrows();
    let mut seen = vec![DMatrix::<f64>::identity(n, n)];
    let mut frontier = seen.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for m in &frontier {
            for g in gens {
                let p = g * m;
                if !seen.iter().any(|s| (s - &p).abs().max() < 1e-9) {
                    seen.push(p.clone());
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    seen.len()
}

#[test]
fn criterion_05_root_systems() {
    run_criterion(5, "root systems", secs(5), || {
        let want_order = [2, 4, 6, 8, 12];
        let want_angles: [&[f64]; 5] = [
            &[],
            &[PI / 2.0; 4],
            &[PI / 3.0; 3],
            &[PI / 4.0, PI / 4.0, PI / 2.0],
            &[PI / 6.0, PI / 3.0, PI / 2.0],
        ];
        for (i, name) in CATALOG_NAMES.iter().enumerate() {
            let w = rank2_catalog(name).map_err(|e| e.to_string())?;
            let r = w.system.validate();
            ensure(r.passes(), format!("{name}: {r:?}"))?;
            ensure(r.max_integrality_deviation <= 1e-9, format!("{name}: integrality {}", r.max_integrality_deviation))?;
            let order = closure_order(&w.finite_generators());
            ensure(order == want_order[i], format!("{name}: order {order}"))?;
            let dump = CatalogDump::new(&w).map_err(|e| e.to_string())?;
            ensure(dump.finite_weyl_order == order, format!("{name}: catalog order {}", dump.finite_weyl_order))?;
            let mut angles = dump.alcove_angles.clone();
            angles.sort_by(f64::total_cmp);
            ensure(angles.len() == want_angles[i].len(), format!("{name}: {} angles", angles.len()))?;
            for (a, b) in angles.iter().zip(want_angles[i]) {
                ensure((a - b).abs() <= 1e-9, format!("{name}: angle {a} vs {b}"))?;
            }
        }
        Ok("A1, A1xA1, A2, B2, G2 valid; orders 2/4/6/8/12; alcove angles match".into())
    });
}

#[test]
fn criterion_06_tessellation_and_fold() {
    run_criterion(6, "tessellation and fold", secs(120), || {
        let mut details = Vec::new();
        let mut failures = Vec::new();
        for name in ["A1", "B2"] {
            let w = rank2_catalog(name).map_err(|e| e.to_string())?;
            let t = tessellate(&w, &Region::ball(w.dim(), 3.0), 8).map_err(|e| e.to_string())?;
            let rel = t.uncovered / t.region_volume;
            let overlap = t.max_relative_overlap(w.alcove.volume());
            let mut rng = ChaCha8Rng::seed_from_u64(6);
            let mut fold_defect: f64 = 0.0;
            for _ in 0..1000 {
                let x: Vec<f64> = (0..w.dim()).map(|_| rng.random_range(-3.0..3.0)).collect();
                let (y, _) = w.fold(&x).map_err(|e| e.to_string())?;
                let (z, word) = w.fold(&y).map_err(|e| e.to_string())?;
                ensure(word.is_empty(), format!("{name}: fold moved a folded point"))?;
                fold_defect = fold_defect.max(y.iter().zip(&z).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
            }
            details.push(format!("{name} uncovered {rel:.3e}, overlap {overlap:.1e}, fold {fold_defect:.1e}"));
            if rel > 1e-6 {
                failures.push(format!("{name}: relative uncovered {rel:.4} over {} words", t.words_enumerated));
            }
            if overlap > 1e-9 {
                failures.push(format!("{name}: overlap {overlap}"));
            }
            if fold_defect > 0.0 {
                failures.push(format!("{name}: fold defect {fold_defect}"));
            }
        }
        if failures.is_empty() {
            Ok(details.join("; "))
        } else {
            Err(format!("{} [{}]", failures.join("; "), details.join("; ")))
        }
    });
}

#[test]
fn criterion_07_wavelet_set_exactness() {
    run_criterion(7, "wavelet set exactness", secs(10), || {
        let window = 32;
        let s = verify_1d(&shannon_set(), window).map_err(|e| e.to_string())?;
        ensure(s.verdict == Verdict::Pass, "Shannon set does not pass")?;
        ensure(s.translation_defect == 0.0 && s.dilation_defect == 0.0, "Shannon set has a defect")?;
        let unit = IntervalUnion::interval(q(0), q(2), Units::Pi);
        let u = verify_1d(&unit, window).map_err(|e| e.to_string())?;
        ensure(u.verdict == Verdict::Fail && u.dilation_defect > 0.0, format!("[0,2π): {:?}", u.verdict))?;
        let j = verify_1d(&journe_set(), window).map_err(|e| e.to_string())?;
        ensure(j.verdict == Verdict::Pass, "Journé set does not pass")?;
        let mut worst: f64 = 0.0;
        for (name, e, _) in equivalence_fixtures() {
            let r = verify_1d(&e, window).map_err(|e| e.to_string())?;
            if r.translation_defect == 0.0 {
                let g = exponential_gram(&e, 8).map_err(|e| e.to_string())?;
                ensure(g.deviation <= 1e-10, format!("{name}: Gram deviation {}", g.deviation))?;
                worst = worst.max(g.deviation);
            }
        }
        let half = IntervalUnion::interval(q(0), q(1), Units::Pi);
        let h = exponential_gram(&half, 8).map_err(|e| e.to_string())?;
        ensure(h.deviation > 1e-2, format!("[0,π) Gram deviation {}", h.deviation))?;
        Ok(format!("Gram deviation {worst:.1e} on congruent sets, {:.3} on [0,π)", h.deviation))
    });
}

#[test]
fn criterion_08_equivalent_conditions() {
    run_criterion(8, "generator and congruence checks agree", secs(30), || {
        let fixtures = equivalence_fixtures();
        let wavelets = fixtures.iter().filter(|f| f.2).count();
        ensure(wavelets >= 5 && fixtures.len() - wavelets >= 5, "fixture family too small")?;
        for (name, e, is_wavelet) in &fixtures {
            let gen = verify_1d_generators(e, 32).map_err(|e| e.to_string())?;
            let con = verify_1d(e, 32).map_err(|e| e.to_string())?;
            ensure(gen.verdict == con.verdict, format!("{name}: {:?} vs {:?}", gen.verdict, con.verdict))?;
            let want = if *is_wavelet { Verdict::Pass } else { Verdict::Fail };
            ensure(con.verdict == want, format!("{name}: expected {want:?}"))?;
        }
        Ok(format!("{} sets, {wavelets} wavelet sets", fixtures.len()))
    });
}

#[test]
fn criterion_09_constructions() {
    run_criterion(9, "constructions", secs(240), || {
        let t0 = Instant::now();
        let seed = IntervalUnion::interval(q(0), q(2), Units::Pi);
        let c = construct_1d(1e-4, &seed, &ConstructConfig::default()).map_err(|e| e.to_string())?;
        let r = verify_1d(&c.set, 64).map_err(|e| e.to_string())?;
        ensure(r.translation_defect == 0.0, format!("translation defect {}", r.translation_defect))?;
        ensure(r.dilation_defect < 1e-4 * 2.0 * PI, format!("dilation defect {}", r.dilation_defect))?;
        let t1 = t0.elapsed();
        ensure(t1 < secs(120), format!("line construction took {t1:?}"))?;

        let a1 = rank2_catalog("A1").map_err(|e| e.to_string())?;
        let a = ExpansiveMatrix::scalar(1, 2.0).map_err(|e| e.to_string())?;
        let spec = DilationReflectionSpec::new(a1, Some(vec![0.5]), a).map_err(|e| e.to_string())?;
        let cutoffs = DrCutoffs { window: 12, max_word_len: 12, region_radius: 20.0, tol: 1e-3 };
        let dr = construct_dilation_reflection(&spec, 1e-3, None, &cutoffs, 64).map_err(|e| e.to_string())?;
        let v = verify_dilation_reflection(&dr.set, &spec, &cutoffs).map_err(|e| e.to_string())?;
        ensure(v.verdict == Verdict::Pass, format!("reflection set verdict {:?}", v.verdict))?;
        ensure(v.dilation_defect < 1e-3, format!("reflection set defect {}", v.dilation_defect))?;
        let t2 = t0.elapsed() - t1;
        ensure(t2 < secs(120), format!("reflection construction took {t2:?}"))?;
        Ok(format!("line defect {:.3e}, reflection defect {:.3e}", r.dilation_defect, v.dilation_defect))
    });
}

#[test]
fn criterion_10_higher_dimensions() {
    run_criterion(10, "planar generator and cube checks", secs(120), || {
        let ball = disk([0.0, 0.0], 1.0).map_err(|e| e.to_string())?;
        let d = AffineMap::scaling(2, 2.0);
        let f = ball.map(&d).map_err(|e| e.to_string())?.subtract(&ball);
        let region = disk([0.0, 0.0], 10.0).map_err(|e| e.to_string())?;
        let g = dilation_generator_2d(&f, &d, 10, &region).map_err(|e| e.to_string())?;
        ensure(g.relative_defect() <= 1e-6, format!("annulus defect {}", g.relative_defect()))?;
        let c = cube();
        let t = translation_congruent_2d(&c, &c);
        ensure(t.verdict(1e-9) == Verdict::Pass, format!("cube translation defect {}", t.relative_defect()))?;
        let left = PolyUnion::rect([-PI, -PI], [0.0, PI]).map_err(|e| e.to_string())?;
        let right = PolyUnion::rect([2.0 * PI, -PI], [3.0 * PI, PI]).map_err(|e| e.to_string())?;
        let shifted = left.union(&right);
        let s = translation_congruent_2d(&shifted, &c);
        ensure(s.verdict(1e-9) == Verdict::Pass, format!("rearranged cube defect {}", s.relative_defect()))?;
        Ok(format!("annulus defect {:.1e}, cube defect {:.1e}", g.relative_defect(), t.relative_defect()))
    });
}

fn bin(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_fracweyl")).args(args).output().expect("binary runs");
    (out.status.code(), out.stdout)
}

#[test]
fn criterion_11_determinism() {
    run_criterion(11, "CLI determinism", secs(300), || {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let path = |n: &str| dir.path().join(n).to_string_lossy().into_owned();
        let journe = path("journe.json");
        std::fs::write(&journe, serde_json::to_string(&journe_set().to_json()).unwrap()).map_err(|e| e.to_string())?;
        let alcove = path("alcove.json");
        let a1 = IntervalUnion::new(vec![(qf(0, 1), qf(1, 4)), (qf(3, 4), q(1))], Units::Plain);
        std::fs::write(&alcove, serde_json::to_string(&a1.to_json()).unwrap()).map_err(|e| e.to_string())?;
        let (cloud, mesh) = (path("cloud.csv"), path("mesh.obj"));
        let commands: Vec<Vec<&str>> = vec![
            vec!["attractor", "cantor", "--out", &cloud],
            vec!["--tol", "1e-3", "attractor", "sierpinski"],
            vec!["surface", "example2", "--z", "1,0.5,-0.25", "--s", "0.3", "--out", &mesh],
            vec!["surface", "interval", "--z", "0,1,0", "--s", "0.5"],
            vec!["basis", "example2", "--s", "0.3"],
            vec!["rootsys", "G2"],
            vec!["tessellate", "A2", "--samples", "200"],
            vec!["waveletset", "shannon", "--samples", "21"],
            vec!["waveletset", "verify", &journe],
            vec!["waveletset", "construct", "--epsilon", "1e-3"],
            vec!["waveletset", "construct", "--epsilon", "1e-2", "--dim", "2", "--radius", "6"],
            vec!["waveletset", "verify-dr", &alcove, "--theta", "0.5"],
            vec!["waveletset", "construct-dr", "--epsilon", "1e-3", "--theta", "0.5"],
        ];
        for args in &commands {
            let first = bin(args);
            let file = |a: &Vec<&str>| a.iter().position(|x| *x == "--out").map(|i| std::fs::read(a[i + 1]));
            let f1 = file(args).transpose().map_err(|e| e.to_string())?;
            let second = bin(args);
            let f2 = file(args).transpose().map_err(|e| e.to_string())?;
            ensure(first.0.is_some() && first.0 == second.0, format!("{args:?}: exit codes {:?} / {:?}", first.0, second.0))?;
            ensure(!first.1.is_empty(), format!("{args:?}: no output"))?;
            ensure(first.1 == second.1, format!("{args:?}: stdout differs"))?;
            ensure(f1 == f2, format!("{args:?}: output file differs"))?;
        }
        Ok(format!("{} commands byte-identical on rerun", commands.len()))
    });
}
