//! Dilation-reflection wavelet sets: congruent to the alcove under the
//! affine Weyl group, and a partition generator under `D(x) = A(x − θ) + θ`.


use super::exchange::{plan_1d, plan_2d};
use super::nd::{disk, ExpansiveMatrix};
use super::pair::PairMode2;
use super::{CheckDetail, Cutoffs, WaveletSetReport};
use crate::error::{Error, Result};
use crate::ifs::AffineMap;
use crate::sets::plane::alcove_polygon;
use crate::sets::{
    congruent, dilation_generator_2d, generator_check, q_to_f64, weyl_congruent_2d, Action1D, IntervalUnion,
    PolyUnion, SetJson, Units, Verdict, Q,
};
use crate::weyl::AffineWeylAction;

/// Minimum distance from `θ` to every wall of the alcove.
pub const INTERIOR_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct DilationReflectionSpec {
    pub weyl: AffineWeylAction,
    pub theta: Vec<f64>,
    pub a: ExpansiveMatrix,
}

impl DilationReflectionSpec {
    /// `theta` defaults to the barycenter of the alcove.
    pub fn new(weyl: AffineWeylAction, theta: Option<Vec<f64>>, a: ExpansiveMatrix) -> Result<Self> {
        let n = weyl.dim();
        if a.dim() != n {
            return Err(Error::InvalidInput("dilation and Weyl group act in different dimensions".into()));
        }
        if !a.certified {
            return Err(Error::InvalidInput("dilation matrix is not expansive".into()));
        }
        if n > 2 {
            return Err(Error::InvalidInput("dilation-reflection sets are supported in dimensions 1 and 2".into()));
        }
        let theta = theta.unwrap_or_else(|| weyl.alcove.centroid());
        if theta.len() != n || theta.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("theta has the wrong dimension".into()));
        }
        let spec = DilationReflectionSpec { weyl, theta, a };
        if spec.wall_distance() <= INTERIOR_MARGIN {
            return Err(Error::InvalidInput(format!("theta {:?} is not interior to the alcove", spec.theta)));
        }
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        self.weyl.dim()
    }

    /// Distance from `θ` to the nearest wall.
    pub fn wall_distance(&self) -> f64 {
        self.weyl
            .alcove
            .walls
            .iter()
            .map(|w| -w.violation(&self.theta) / w.normal.iter().map(|v| v * v).sum::<f64>().sqrt())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn dilation(&self) -> Result<AffineMap> {
        self.a.about(&self.theta)
    }

    fn exact(&self, cutoffs: &DrCutoffs) -> Result<(Action1D, Action1D)> {
        let to_q = |x: f64| Q::from_float(x).ok_or_else(|| Error::InvalidInput("non-finite parameter".into()));
        let base = to_q(self.a.entries[(0, 0)])?;
        if base <= Q::from_integer(1.into()) {
            return Err(Error::InvalidInput("one-dimensional dilation factor must exceed 1".into()));
        }
        let weyl = Action1D::from_weyl(&self.weyl, cutoffs.max_word_len as u32)?;
        let dil = Action1D::Dilation { base, center: to_q(self.theta[0])?, window: cutoffs.window };
        Ok((weyl, dil))
    }
}

/// Limits for checks and constructions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrCutoffs {
    pub window: u32,
    pub max_word_len: usize,
    /// The set must lie in the ball of this radius about `θ`; in the plane
    /// the dilation tiling is checked on that ball.
    pub region_radius: f64,
    pub tol: f64,
}

impl Default for DrCutoffs {
    fn default() -> Self {
        DrCutoffs { window: 12, max_word_len: 12, region_radius: 20.0, tol: 1e-3 }
    }
}

impl DrCutoffs {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !(self.region_radius > 0.0) || self.window == 0 {
            return Err(Error::InvalidInput("cutoffs must be positive".into()));
        }
        Ok(())
    }

    fn record(&self) -> Cutoffs {
        Cutoffs {
            dilation_window: self.window,
            max_word_len: Some(self.max_word_len),
            region_radius: Some(self.region_radius),
            tol: self.tol,
        }
    }
}

/// A set on the line (exact, plain units) or in the plane.
#[derive(Debug, Clone, PartialEq)]
pub enum DrSet {
    Interval(IntervalUnion),
    Poly(PolyUnion),
}

impl DrSet {
    pub fn to_json(&self) -> SetJson {
        match self {
            DrSet::Interval(s) => s.to_json(),
            DrSet::Poly(p) => p.to_json(),
        }
    }

    pub fn from_json(j: &SetJson) -> Result<Self> {
        match j.space {
            1 => Ok(DrSet::Interval(IntervalUnion::from_json(j)?)),
            2 => Ok(DrSet::Poly(PolyUnion::from_json(j)?)),
            n => Err(Error::InvalidInput(format!("unsupported space dimension {n}"))),
        }
    }

    pub fn measure(&self) -> f64 {
        match self {
            DrSet::Interval(s) => s.measure_f64(),
            DrSet::Poly(p) => p.area(),
        }
    }
}

fn alcove_interval(weyl: &Action1D) -> IntervalUnion {
    weyl.fundamental_domain(Units::Plain)
}

fn outside_region(e: &DrSet, theta: &[f64], r: f64) -> bool {
    match e {
        DrSet::Interval(s) => match (s.inf(), s.sup()) {
            (Some(a), Some(b)) => (q_to_f64(a) - theta[0]).abs() > r || (q_to_f64(b) - theta[0]).abs() > r,
            _ => false,
        },
        DrSet::Poly(p) => p
            .rings()
            .iter()
            .flat_map(|(ext, _)| ext.clone())
            .any(|v| ((v[0] - theta[0]).powi(2) + (v[1] - theta[1]).powi(2)).sqrt() > r),
    }
}

/// Condition (1) is congruence to the alcove `C` under the affine Weyl
/// group; condition (2) is generation of a partition under `D`. On the line
/// both are exact and condition (2) passes when its defect is within `tol`.
pub fn verify_dilation_reflection(
    e: &DrSet,
    spec: &DilationReflectionSpec,
    cutoffs: &DrCutoffs,
) -> Result<WaveletSetReport> {
    cutoffs.validate()?;
    let escaped = outside_region(e, &spec.theta, cutoffs.region_radius);
    let capped = |v: Verdict| if escaped && v == Verdict::Pass { Verdict::Inconclusive } else { v };
    match (e, spec.dim()) {
        (DrSet::Interval(s), 1) => {
            if s.units() != Units::Plain {
                return Err(Error::InvalidInput("alcove coordinates are plain units".into()));
            }
            let (weyl, dil) = spec.exact(cutoffs)?;
            let t = congruent(s, &alcove_interval(&weyl), &weyl)?;
            let d = generator_check(s, &dil)?;
            let tol = Q::from_float(cutoffs.tol).expect("finite tolerance");
            Ok(WaveletSetReport {
                verdict: t.verdict.and(capped(d.verdict(&tol))),
                translation_defect: t.defect_f64(),
                dilation_defect: q_to_f64(&d.defect()),
                translation_check: CheckDetail::Congruence(t),
                dilation_check: CheckDetail::Generator(d),
                cutoffs: cutoffs.record(),
            })
        }
        (DrSet::Poly(p), 2) => {
            let c = alcove_polygon(&spec.weyl)?;
            let t = weyl_congruent_2d(p, &c, &spec.weyl, cutoffs.max_word_len)?;
            let region = disk([spec.theta[0], spec.theta[1]], cutoffs.region_radius)?;
            let d = dilation_generator_2d(p, &spec.dilation()?, cutoffs.window, &region)?;
            Ok(WaveletSetReport {
                verdict: t.verdict(cutoffs.tol).and(capped(d.verdict(cutoffs.tol))),
                translation_defect: t.relative_defect(),
                dilation_defect: d.relative_defect(),
                translation_check: CheckDetail::PlaneCongruence(t),
                dilation_check: CheckDetail::PlaneGenerator(d),
                cutoffs: cutoffs.record(),
            })
        }
        _ => Err(Error::InvalidInput("set and Weyl group have different dimensions".into())),
    }
}

#[derive(Debug, Clone)]
pub struct ConstructionDr {
    pub set: DrSet,
    pub rounds: usize,
    /// Dilation defect after each round.
    pub defects: Vec<f64>,
    pub report: WaveletSetReport,
}

/// Exchange construction. Pieces move only by Weyl group elements, so
/// congruence to `C` holds in every round. With a seed, the seed is first
/// rearranged to contain a neighborhood of `θ`; a passing seed is returned
/// unchanged. On the line the construction is exact.
pub fn construct_dilation_reflection(
    spec: &DilationReflectionSpec,
    epsilon: f64,
    seed: Option<&DrSet>,
    cutoffs: &DrCutoffs,
    max_rounds: usize,
) -> Result<ConstructionDr> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    cutoffs.validate()?;
    if let Some(s) = seed {
        let r = verify_dilation_reflection(s, spec, cutoffs)?;
        if r.verdict == Verdict::Pass && r.dilation_defect < epsilon {
            return Ok(ConstructionDr { set: s.clone(), rounds: 0, defects: vec![r.dilation_defect], report: r });
        }
        if r.translation_check_verdict() != Verdict::Pass {
            return Err(Error::InvalidInput("seed is not congruent to the alcove".into()));
        }
    }
    let cap = 64;
    match spec.dim() {
        1 => {
            let (weyl, dil) = spec.exact(cutoffs)?;
            let c = alcove_interval(&weyl);
            let (base, theta) = match &dil {
                Action1D::Dilation { base, center, .. } => (base.clone(), center.clone()),
                _ => unreachable!(),
            };
            let (o, hi) = (c.inf().cloned().expect("alcove"), c.sup().cloned().expect("alcove"));
            let near = (&theta - &o).min(&hi - &theta);
            let rho = near / &base;
            let f = IntervalUnion::new(
                vec![(&theta - &rho * &base, &theta - &rho), (&theta + &rho, &theta + &rho * &base)],
                Units::Plain,
            );
            let n = IntervalUnion::interval(&theta - &rho * &base, &theta + &rho * &base, Units::Plain);
            let e = match seed {
                Some(DrSet::Interval(s)) => {
                    let (moved, complete) = weyl.elements_meeting(&n, s);
                    if !complete {
                        return Err(Error::Inconclusive("seed extends past the alcove index cap".into()));
                    }
                    let mut orbit = IntervalUnion::empty(Units::Plain);
                    for (_, g) in moved {
                        orbit = orbit.union(&g.apply_set(&n))?;
                    }
                    s.subtract(&orbit)?.union(&n)?
                }
                Some(_) => return Err(Error::InvalidInput("seed dimension mismatch".into())),
                None => c.clone(),
            };
            let plan = plan_1d(e, &f, &dil, &weyl, cap)?;
            let target = Q::from_float(epsilon).expect("finite epsilon");
            let (set, rounds, defects) = plan.run(&target, max_rounds, |g| {
                let t = congruent(g, &c, &weyl)?;
                let d = generator_check(g, &dil)?;
                Ok((t.defect(), d.defect()))
            })?;
            let report = verify_dilation_reflection(&DrSet::Interval(set.clone()), spec, cutoffs)?;
            Ok(ConstructionDr {
                set: DrSet::Interval(set),
                rounds,
                defects: defects.iter().map(q_to_f64).collect(),
                report,
            })
        }
        2 => {
            let d = spec.dilation()?;
            let theta = [spec.theta[0], spec.theta[1]];
            let norm = crate::linalg::spectral_norm(&spec.a.entries)?;
            // the disk polygon of radius ρ·‖A‖ stays inside C
            let rho = spec.wall_distance() / norm * 0.999;
            let p = disk(theta, rho)?;
            let dp = p.map(&d)?;
            if p.subtract(&dp).area() > 1e-12 * p.area() {
                return Err(Error::InvalidInput("the disk about theta is not inside its image under D".into()));
            }
            let f = dp.subtract(&p);
            let c = alcove_polygon(&spec.weyl)?;
            let e = match seed {
                Some(DrSet::Poly(s)) => {
                    let (lo, hi) = s.bbox().ok_or_else(|| Error::InvalidInput("empty seed".into()))?;
                    let mut orbit = PolyUnion::empty();
                    for w in spec.weyl.words_up_to(cutoffs.max_word_len) {
                        let img = dp.map(w.map())?;
                        let (a, b) = img.bbox().expect("nonempty");
                        if a[0] > hi[0] || a[1] > hi[1] || b[0] < lo[0] || b[1] < lo[1] {
                            continue;
                        }
                        orbit = orbit.union(&img.intersect(s));
                    }
                    s.subtract(&orbit).union(&dp)
                }
                Some(_) => return Err(Error::InvalidInput("seed dimension mismatch".into())),
                None => c.clone(),
            };
            let mode = PairMode2::Weyl { weyl: &spec.weyl, max_len: cutoffs.max_word_len };
            let plan = plan_2d(e, &f, &d, mode, cap, 1e-12)?;
            let (set, rounds, defects) = plan.run(epsilon, cutoffs.tol, max_rounds, |g| {
                let r = verify_dilation_reflection(&DrSet::Poly(g.clone()), spec, cutoffs)?;
                Ok((r.translation_defect, r.dilation_defect))
            })?;
            let report = verify_dilation_reflection(&DrSet::Poly(set.clone()), spec, cutoffs)?;
            Ok(ConstructionDr { set: DrSet::Poly(set), rounds, defects, report })
        }
        _ => Err(Error::InvalidInput("unsupported dimension".into())),
    }
}

impl WaveletSetReport {
    /// Verdict of the first check alone.
    pub fn translation_check_verdict(&self) -> Verdict {
        match &self.translation_check {
            CheckDetail::Congruence(w) => w.verdict,
            CheckDetail::Generator(g) => g.verdict(&Q::from_float(self.cutoffs.tol).expect("finite")),
            CheckDetail::PlaneCongruence(c) => c.verdict(self.cutoffs.tol),
            CheckDetail::PlaneGenerator(g) => g.verdict(self.cutoffs.tol),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::{q, qf};
    use crate::weyl::rank2_catalog;

    fn a1_spec() -> DilationReflectionSpec {
        let a1 = rank2_catalog("A1").unwrap();
        DilationReflectionSpec::new(a1, None, ExpansiveMatrix::scalar(1, 2.0).unwrap()).unwrap()
    }

    #[test]
    fn barycenter_default() {
        let s = a1_spec();
        assert_eq!(s.theta, vec![0.5]);
        assert!((s.wall_distance() - 0.5).abs() < 1e-12);
        let a1 = rank2_catalog("A1").unwrap();
        let bad = DilationReflectionSpec::new(a1, Some(vec![0.0]), ExpansiveMatrix::scalar(1, 2.0).unwrap());
        assert!(bad.is_err());
    }

    #[test]
    fn alcove_fails_second_condition() {
        let s = a1_spec();
        let c = DrSet::Interval(IntervalUnion::interval(q(0), q(1), Units::Plain));
        let r = verify_dilation_reflection(&c, &s, &DrCutoffs::default()).unwrap();
        assert_eq!(r.translation_check_verdict(), Verdict::Pass);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn wrong_measure_fails_first_condition() {
        let s = a1_spec();
        let e = DrSet::Interval(IntervalUnion::interval(q(0), qf(1, 2), Units::Plain));
        let r = verify_dilation_reflection(&e, &s, &DrCutoffs::default()).unwrap();
        assert_eq!(r.translation_check_verdict(), Verdict::Fail);
        assert_eq!(r.translation_defect, 0.5);
    }

    #[test]
    fn a1_construction_passes() {
        let s = a1_spec();
        let cut = DrCutoffs::default();
        let c = construct_dilation_reflection(&s, 1e-3, None, &cut, 32).unwrap();
        assert_eq!(c.report.translation_defect, 0.0);
        assert!(c.report.dilation_defect < 1e-3);
        let again = verify_dilation_reflection(&c.set, &s, &cut).unwrap();
        assert_eq!(again.verdict, Verdict::Pass);
        let kept = construct_dilation_reflection(&s, 1e-3, Some(&c.set), &cut, 32).unwrap();
        assert_eq!(kept.set, c.set);
        assert_eq!(kept.rounds, 0);
    }
}
