//! Exchange iteration for common fundamental domains.
//!
//! Given a fundamental domain `E` of the translation-like group `T` that
//! contains a neighborhood of the dilation center, a fundamental domain `F` of
//! the dilation group `D` bounded away from it, an exponent `m` with
//! `D^{−m}F ⊆ E`, and an element `g ∈ T` with `g(E) ⊆ D^ℓ F` and
//! `g(E) ∩ E = ∅`, set `φ = D^{−m−ℓ}∘g`, `C₀ = E ∖ D^{−m}F` and
//! `C = ⋃ φʲ(C₀)`. Then `g(C) ∪ (E ∖ C)` is a fundamental domain of both
//! groups. Round `J` uses the partial union over `j < J`.

use super::pair::{check_pair_1d, check_pair_2d, shrink_exponent_2d, PairMode2};
use super::shannon_set;
use crate::error::{Error, Result};
use crate::ifs::AffineMap;
use crate::sets::{q, qf, Action1D, Affine1, IntervalUnion, PolyUnion, Units, Q};

pub(crate) struct Plan1D {
    pub e: IntervalUnion,
    pub c0: IntervalUnion,
    pub transport: Affine1,
    pub phi: Affine1,
}

impl Plan1D {
    /// Runs rounds until `measure(G)` reports a dilation defect below
    /// `target`. `measure` returns `(translation defect, dilation defect)`;
    /// the translation defect must stay zero and the dilation defect must
    /// strictly decrease.
    pub fn run(
        &self,
        target: &Q,
        max_rounds: usize,
        mut measure: impl FnMut(&IntervalUnion) -> Result<(Q, Q)>,
    ) -> Result<(IntervalUnion, usize, Vec<Q>)> {
        let units = self.e.units();
        let mut acc = IntervalUnion::empty(units);
        let mut cur = self.c0.clone();
        let (_, d0) = measure(&self.e)?;
        let mut defects = vec![d0];
        for round in 1..=max_rounds {
            acc = acc.union(&cur)?;
            cur = self.phi.apply_set(&cur);
            let g = self.transport.apply_set(&acc).union(&self.e.subtract(&acc)?)?;
            let (t, d) = measure(&g)?;
            if t != Q::from_integer(0.into()) {
                return Err(Error::InvalidInput(format!("exchange round {round} broke translation congruence")));
            }
            let last = defects.last().expect("nonempty");
            if &d >= last {
                return Err(Error::ConstructionStalled { rounds: round, defect: crate::sets::q_to_f64(&d) });
            }
            let done = &d < target;
            defects.push(d);
            if done {
                return Ok((g, round, defects));
            }
        }
        Err(Error::ConstructionStalled {
            rounds: max_rounds,
            defect: crate::sets::q_to_f64(defects.last().expect("nonempty")),
        })
    }
}

/// Sets up the exchange for `e` (fundamental domain of `t`) and `f`
/// (fundamental domain of `dil`).
pub(crate) fn plan_1d(e: IntervalUnion, f: &IntervalUnion, dil: &Action1D, t: &Action1D, cap: u32) -> Result<Plan1D> {
    let m = (0..=cap as i64)
        .find(|&m| dil.element_map(-m).apply_set(f).is_subset(&e).unwrap_or(false))
        .ok_or_else(|| Error::Inconclusive("no dilate of F fits inside E".into()))?;
    let small = dil.element_map(-m).apply_set(f);
    let pair = check_pair_1d(dil, t, &e, f, cap, true)?;
    let phi = dil.element_map(-m - pair.exponent).compose(&pair.map);
    let c0 = e.subtract(&small)?;
    Ok(Plan1D { e, c0, transport: pair.map, phi })
}

/// Classical case: the seed is rearranged so that it contains `[−π/2, π/2)`,
/// then exchanged against `E_S`.
pub(crate) fn classical_plan(seed: &IntervalUnion) -> Result<Plan1D> {
    let n = IntervalUnion::interval(qf(-1, 2), qf(1, 2), Units::Pi);
    let (lo, hi) = (seed.inf().cloned().unwrap_or_default(), seed.sup().cloned().unwrap_or_default());
    let k0 = ((lo - q(1)) / q(2)).floor().to_integer();
    let k1 = ((hi + q(1)) / q(2)).ceil().to_integer();
    let mut removed = IntervalUnion::empty(Units::Pi);
    let mut k = k0;
    while k <= k1 {
        removed = removed.union(&n.translate(&(Q::from_integer(k.clone()) * q(2))))?;
        k += 1;
    }
    let e = seed.subtract(&removed)?.union(&n)?;
    plan_1d(e, &shannon_set(), &Action1D::dyadic(64), &Action1D::translation_2pi(), 64)
}

/// `Dⁿ` for any integer `n`.
pub(crate) fn dpow(d: &AffineMap, n: i64) -> Result<AffineMap> {
    let step = if n < 0 { d.inverse()? } else { d.clone() };
    let mut out = AffineMap::identity(d.dim());
    for _ in 0..n.unsigned_abs() {
        out = step.compose(&out);
    }
    Ok(out)
}

pub(crate) struct Plan2D {
    pub e: PolyUnion,
    pub c0: PolyUnion,
    pub transport: AffineMap,
    pub phi: AffineMap,
}

impl Plan2D {
    /// Planar rounds. `measure` returns relative `(translation, dilation)`
    /// defects; the first must stay within `t_tol`.
    pub fn run(
        &self,
        target: f64,
        t_tol: f64,
        max_rounds: usize,
        mut measure: impl FnMut(&PolyUnion) -> Result<(f64, f64)>,
    ) -> Result<(PolyUnion, usize, Vec<f64>)> {
        let mut acc = PolyUnion::empty();
        let mut cur = self.c0.clone();
        let (_, d0) = measure(&self.e)?;
        let mut defects = vec![d0];
        for round in 1..=max_rounds {
            acc = acc.union(&cur);
            cur = cur.map(&self.phi)?;
            let g = acc.map(&self.transport)?.union(&self.e.subtract(&acc));
            let (t, d) = measure(&g)?;
            if t > t_tol {
                return Err(Error::InvalidInput(format!("exchange round {round} broke the first congruence ({t})")));
            }
            let last = *defects.last().expect("nonempty");
            if d >= last {
                return Err(Error::ConstructionStalled { rounds: round, defect: d });
            }
            defects.push(d);
            if d < target {
                return Ok((g, round, defects));
            }
        }
        Err(Error::ConstructionStalled { rounds: max_rounds, defect: *defects.last().expect("nonempty") })
    }
}

pub(crate) fn plan_2d(
    e: PolyUnion,
    f: &PolyUnion,
    d: &AffineMap,
    mode: PairMode2<'_>,
    cap: u32,
    tol: f64,
) -> Result<Plan2D> {
    let m = shrink_exponent_2d(d, f, &e, cap, tol)?;
    let small = f.map(&dpow(d, -m)?)?;
    let pair = check_pair_2d(d, mode, &e, f, cap, tol, true)?;
    let phi = dpow(d, -m - pair.exponent)?.compose(&pair.map);
    let c0 = e.subtract(&small);
    Ok(Plan2D { e, c0, transport: pair.map, phi })
}
