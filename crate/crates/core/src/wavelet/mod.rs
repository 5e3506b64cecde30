//! Wavelet sets on the line and in the plane, and dilation-reflection
//! wavelet sets for affine Weyl groups.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sets::{
    congruent, generator_check, q, q_to_f64, Action1D, CongruenceWitness, GeneratorReport, IntervalUnion,
    PlaneCongruence, PlaneGenerator, Units, Verdict, Q,
};

pub mod bases;
mod exchange;
pub mod nd;
pub mod pair;
pub mod reflection;

pub use bases::{basis_enumerator, BasisLabel, DilatedBasis};
pub use nd::{construct_nd, verify_nd, ConstructionNd, ExpansiveMatrix, NdCutoffs};
pub use pair::{check_pair_1d, check_pair_2d, shrink_exponent_1d, shrink_exponent_2d, PairMode2, PairWitness1D, PairWitness2D};
pub use reflection::{
    construct_dilation_reflection, verify_dilation_reflection, DilationReflectionSpec, DrCutoffs, DrSet,
};

/// `sin(πt)/(πt)` with `sinc(0) = 1`.
pub fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        (PI * t).sin() / (PI * t)
    }
}

/// `E_S = [−2π, −π) ∪ [π, 2π)`.
pub fn shannon_set() -> IntervalUnion {
    IntervalUnion::new(vec![(q(-2), q(-1)), (q(1), q(2))], Units::Pi)
}

/// `ψ_S(t) = 2 sinc(2t − 1) − sinc(t)`.
pub fn shannon_psi(t: f64) -> f64 {
    2.0 * sinc(2.0 * t - 1.0) - sinc(t)
}

/// Search limits recorded in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cutoffs {
    /// Dilation exponents `|k| ≤ dilation_window`.
    pub dilation_window: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_word_len: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region_radius: Option<f64>,
    /// Defect tolerance used for the verdict.
    pub tol: f64,
}

/// One of the two checks behind a verdict.
#[derive(Debug, Clone)]
pub enum CheckDetail {
    Congruence(CongruenceWitness),
    Generator(GeneratorReport),
    PlaneCongruence(PlaneCongruence),
    PlaneGenerator(PlaneGenerator),
}

impl CheckDetail {
    pub fn summary(&self) -> serde_json::Value {
        match self {
            CheckDetail::Congruence(w) => serde_json::to_value(w.summary()),
            CheckDetail::Generator(g) => serde_json::to_value(g),
            CheckDetail::PlaneCongruence(c) => Ok(serde_json::json!({
                "pieces": c.pieces.len(),
                "overlap_a": c.overlap_a,
                "overlap_b": c.overlap_b,
                "mismatch": c.mismatch,
                "unresolved_a": c.unresolved_a,
                "unresolved_b": c.unresolved_b,
                "reference_area": c.reference_area,
            })),
            CheckDetail::PlaneGenerator(g) => serde_json::to_value(g),
        }
        .expect("plain data serializes")
    }
}

/// Verdict with the two defects behind it.
#[derive(Debug, Clone)]
pub struct WaveletSetReport {
    pub verdict: Verdict,
    pub translation_check: CheckDetail,
    pub dilation_check: CheckDetail,
    pub translation_defect: f64,
    pub dilation_defect: f64,
    pub cutoffs: Cutoffs,
}

/// JSON form of a [`WaveletSetReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub verdict: Verdict,
    pub translation_defect: f64,
    pub dilation_defect: f64,
    pub cutoffs: Cutoffs,
    pub witness_summary: serde_json::Value,
}

impl WaveletSetReport {
    pub fn to_json(&self) -> ReportJson {
        ReportJson {
            verdict: self.verdict,
            translation_defect: self.translation_defect,
            dilation_defect: self.dilation_defect,
            cutoffs: self.cutoffs.clone(),
            witness_summary: serde_json::json!({
                "translation": self.translation_check.summary(),
                "dilation": self.dilation_check.summary(),
            }),
        }
    }

    /// Exact dilation defect in π units, when the check was exact.
    pub fn exact_dilation_defect(&self) -> Option<Q> {
        match &self.dilation_check {
            CheckDetail::Congruence(w) => Some(w.defect()),
            CheckDetail::Generator(g) => Some(g.defect()),
            _ => None,
        }
    }

    pub fn exact_translation_defect(&self) -> Option<Q> {
        match &self.translation_check {
            CheckDetail::Congruence(w) => Some(w.defect()),
            CheckDetail::Generator(g) => Some(g.defect()),
            _ => None,
        }
    }
}

fn require_pi(e: &IntervalUnion) -> Result<()> {
    if e.units() != Units::Pi {
        return Err(Error::InvalidInput("wavelet sets on the line are given in π units".into()));
    }
    Ok(())
}

/// Translation congruence to `[0, 2π)` and dilation congruence to `E_S`,
/// both exact.
pub fn verify_1d(e: &IntervalUnion, window: u32) -> Result<WaveletSetReport> {
    require_pi(e)?;
    let t = congruent(e, &IntervalUnion::interval(q(0), q(2), Units::Pi), &Action1D::translation_2pi())?;
    let d = congruent(e, &shannon_set(), &Action1D::dyadic(window))?;
    Ok(WaveletSetReport {
        verdict: t.verdict.and(d.verdict),
        translation_defect: t.defect_f64(),
        dilation_defect: d.defect_f64(),
        translation_check: CheckDetail::Congruence(t),
        dilation_check: CheckDetail::Congruence(d),
        cutoffs: Cutoffs { dilation_window: window, max_word_len: None, region_radius: None, tol: 0.0 },
    })
}

/// The generator form of the same test: `{E + 2πk}` and `{2ⁿE}` both tile
/// the line modulo null sets.
pub fn verify_1d_generators(e: &IntervalUnion, window: u32) -> Result<WaveletSetReport> {
    require_pi(e)?;
    let t = generator_check(e, &Action1D::translation_2pi())?;
    let d = generator_check(e, &Action1D::dyadic(window))?;
    let zero = Q::from_integer(0.into());
    Ok(WaveletSetReport {
        verdict: t.verdict(&zero).and(d.verdict(&zero)),
        translation_defect: q_to_f64(&t.defect()) * PI,
        dilation_defect: q_to_f64(&d.defect()) * PI,
        translation_check: CheckDetail::Generator(t),
        dilation_check: CheckDetail::Generator(d),
        cutoffs: Cutoffs { dilation_window: window, max_word_len: None, region_radius: None, tol: 0.0 },
    })
}

/// Limits for the exchange constructions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstructConfig {
    pub max_rounds: usize,
    pub window: u32,
}

impl Default for ConstructConfig {
    fn default() -> Self {
        ConstructConfig { max_rounds: 64, window: crate::sets::action1d::DEFAULT_WINDOW }
    }
}

/// Output of [`construct_1d`].
#[derive(Debug, Clone)]
pub struct Construction1D {
    pub set: IntervalUnion,
    pub rounds: usize,
    /// Dilation defect (radians) after each round.
    pub defects: Vec<f64>,
    pub report: WaveletSetReport,
}

/// Builds a set translation congruent to `[0, 2π)` whose dilation defect
/// against `E_S` is below `ε·2π`. The seed must itself be translation
/// congruent to `[0, 2π)`; a seed that already passes is returned unchanged.
pub fn construct_1d(epsilon: f64, seed: &IntervalUnion, config: &ConstructConfig) -> Result<Construction1D> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    require_pi(seed)?;
    let unit = IntervalUnion::interval(q(0), q(2), Units::Pi);
    let t = Action1D::translation_2pi();
    if congruent(seed, &unit, &t)?.verdict != Verdict::Pass {
        return Err(Error::InvalidInput("seed is not translation congruent to [0, 2π)".into()));
    }
    let first = verify_1d(seed, config.window)?;
    if first.verdict == Verdict::Pass {
        return Ok(Construction1D { set: seed.clone(), rounds: 0, defects: vec![0.0], report: first });
    }
    let target = Q::from_float(2.0 * epsilon).ok_or_else(|| Error::InvalidInput("epsilon".into()))?;
    let window = config.window;
    let plan = exchange::classical_plan(seed)?;
    let (set, rounds, defects) = plan.run(&target, config.max_rounds, |g| {
        let r = verify_1d(g, window)?;
        Ok((r.exact_translation_defect().unwrap_or_default(), r.exact_dilation_defect().unwrap_or_default()))
    })?;
    let report = verify_1d(&set, window)?;
    Ok(Construction1D { set, rounds, defects: defects.iter().map(|d| q_to_f64(d) * PI).collect(), report })
}

/// Fixture family for the two equivalent wavelet-set tests: five wavelet
/// sets followed by six sets that are not.
pub fn equivalence_fixtures() -> Vec<(&'static str, IntervalUnion, bool)> {
    let f = |p: &[((i64, i64), (i64, i64))]| IntervalUnion::from_fracs(p, Units::Pi);
    // [−2a, −a) ∪ [2 − a, 4 − 2a)
    let family = |n: i64, d: i64| f(&[((-2 * n, d), (-n, d)), ((2 * d - n, d), (4 * d - 2 * n, d))]);
    vec![
        ("shannon", shannon_set(), true),
        ("journe", journe_set(), true),
        ("shifted-half", family(1, 2), true),
        ("shifted-third", family(1, 3), true),
        ("shifted-three-quarters", family(3, 4), true),
        ("unit-period", f(&[((0, 1), (2, 1))]), false),
        ("offset-period", f(&[((1, 1), (3, 1))]), false),
        ("centered-period", f(&[((-1, 1), (1, 1))]), false),
        ("split-band", f(&[((1, 1), (2, 1)), ((4, 1), (5, 1))]), false),
        ("shannon-plus", f(&[((-2, 1), (-1, 1)), ((1, 1), (2, 1)), ((4, 1), (5, 1))]), false),
        ("double-cover", f(&[((0, 1), (1, 1)), ((2, 1), (3, 1))]), false),
    ]
}

/// `[−32π/7, −4π) ∪ [−π, −4π/7) ∪ [4π/7, π) ∪ [4π, 32π/7)`.
pub fn journe_set() -> IntervalUnion {
    IntervalUnion::from_fracs(
        &[((-32, 7), (-4, 1)), ((-1, 1), (-4, 7)), ((4, 7), (1, 1)), ((4, 1), (32, 7))],
        Units::Pi,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shannon_passes() {
        let r = verify_1d(&shannon_set(), 32).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.translation_defect, 0.0);
        assert_eq!(r.dilation_defect, 0.0);
        assert_eq!(shannon_set().measure(), q(2));
    }

    #[test]
    fn psi_at_half() {
        assert!((shannon_psi(0.5) - (2.0 - sinc(0.5))).abs() < 1e-15);
        assert_eq!(shannon_psi(0.0), 2.0 * sinc(-1.0) - 1.0);
    }

    #[test]
    fn unit_period_fails_dilation() {
        let r = verify_1d(&IntervalUnion::interval(q(0), q(2), Units::Pi), 32).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.translation_defect, 0.0);
        assert!(r.dilation_defect > 0.0);
    }

    #[test]
    fn journe_passes() {
        assert_eq!(verify_1d(&journe_set(), 32).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn both_forms_agree_on_fixtures() {
        for (name, e, expect) in equivalence_fixtures() {
            let a = verify_1d(&e, 32).unwrap().verdict;
            let b = verify_1d_generators(&e, 32).unwrap().verdict;
            assert_eq!(a, b, "{name}");
            assert_eq!(a == Verdict::Pass, expect, "{name}");
        }
    }

    #[test]
    fn construct_from_unit_period() {
        let seed = IntervalUnion::interval(q(0), q(2), Units::Pi);
        let c = construct_1d(1e-4, &seed, &ConstructConfig::default()).unwrap();
        assert_eq!(c.report.translation_defect, 0.0);
        assert!(c.report.dilation_defect < 1e-4 * 2.0 * PI);
        for w in c.defects.windows(2) {
            assert!(w[1] < w[0]);
        }
    }

    #[test]
    fn construct_keeps_passing_seed() {
        let c = construct_1d(1e-3, &journe_set(), &ConstructConfig::default()).unwrap();
        assert_eq!(c.set, journe_set());
        assert_eq!(c.rounds, 0);
    }
}
