//! Group actions on the line: reduction to a fundamental domain, congruence
//! by multiplicity matching and generator-of-partition checks.

use std::collections::{BTreeSet, HashMap};

use num_traits::{Inv, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::interval::{format_q, q, IntervalUnion, Units, Q};
use super::{Affine1, CongruenceWitness, GroupElement, Verdict, WitnessPiece};
use crate::error::{Error, Result};
use crate::weyl::AffineWeylAction;

/// Default exponent window for dilation reductions.
pub const DEFAULT_WINDOW: u32 = 64;

fn floor_i64(x: &Q) -> i64 {
    x.floor().to_integer().to_i64().expect("exponent out of range")
}

fn ceil_i64(x: &Q) -> i64 {
    x.ceil().to_integer().to_i64().expect("exponent out of range")
}

pub fn qpow(b: &Q, n: i64) -> Q {
    let p = num_traits::pow(b.clone(), n.unsigned_abs() as usize);
    if n < 0 {
        p.inv()
    } else {
        p
    }
}

/// A discrete group acting on ℝ with a chosen fundamental domain.
#[derive(Debug, Clone, PartialEq)]
pub enum Action1D {
    /// `x ↦ x + k·period`, fundamental domain `[0, period)`.
    Translation { period: Q },
    /// `x ↦ base^n (x − center) + center`, fundamental domain
    /// `center + ([−base, −1) ∪ [1, base))`; exponents beyond `|n| ≤ window`
    /// are left unresolved.
    Dilation { base: Q, center: Q, window: u32 },
    /// Affine Weyl group of type A₁ with alcove `[origin, origin + width]`;
    /// alcoves with index above `max_index` are left unresolved.
    WeylA1 { origin: Q, width: Q, max_index: u32 },
}

/// One reduced piece: `source = g_label(image)` with `image` in the
/// fundamental domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduced {
    pub source: (Q, Q),
    pub image: (Q, Q),
    pub label: i64,
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub pieces: Vec<Reduced>,
    pub unresolved: IntervalUnion,
}

impl Action1D {
    /// Translation by 2π on sets measured in π units.
    pub fn translation_2pi() -> Self {
        Action1D::Translation { period: q(2) }
    }

    /// Dyadic dilation about the origin.
    pub fn dyadic(window: u32) -> Self {
        Action1D::Dilation { base: q(2), center: q(0), window }
    }

    /// The A₁ action of a one-dimensional catalog entry, with exact rational
    /// alcove endpoints.
    pub fn from_weyl(weyl: &AffineWeylAction, max_index: u32) -> Result<Self> {
        if weyl.dim() != 1 {
            return Err(Error::InvalidInput("expected a rank-one action".into()));
        }
        let xs: Vec<f64> = weyl.alcove.vertices.iter().map(|v| v[0]).collect();
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let to_q = |x: f64| Q::from_float(x).ok_or_else(|| Error::InvalidInput("non-finite alcove".into()));
        let origin = to_q(lo)?;
        let width = to_q(hi)? - &origin;
        Ok(Action1D::WeylA1 { origin, width, max_index })
    }

    pub fn is_isometric(&self) -> bool {
        !matches!(self, Action1D::Dilation { .. })
    }

    pub fn fundamental_domain(&self, units: Units) -> IntervalUnion {
        match self {
            Action1D::Translation { period } => IntervalUnion::interval(q(0), period.clone(), units),
            Action1D::Dilation { base, center, .. } => IntervalUnion::new(
                vec![(center - base, center - q(1)), (center + q(1), center + base)],
                units,
            ),
            Action1D::WeylA1 { origin, width, .. } => {
                IntervalUnion::interval(origin.clone(), origin + width, units)
            }
        }
    }

    /// `g_n`, carrying the fundamental domain onto its `n`-th copy.
    pub fn element_map(&self, n: i64) -> Affine1 {
        match self {
            Action1D::Translation { period } => Affine1 { scale: q(1), shift: period * q(n) },
            Action1D::Dilation { base, center, .. } => {
                let s = qpow(base, n);
                Affine1 { shift: center * (q(1) - &s), scale: s }
            }
            Action1D::WeylA1 { origin, width, .. } => {
                if n.rem_euclid(2) == 0 {
                    Affine1 { scale: q(1), shift: width * q(n) }
                } else {
                    Affine1 { scale: q(-1), shift: origin * q(2) + width * q(n + 1) }
                }
            }
        }
    }

    fn element(&self, from: i64, to: i64) -> GroupElement {
        match self {
            Action1D::Translation { .. } => GroupElement::Translation(to - from),
            Action1D::Dilation { .. } => GroupElement::Dilation(to - from),
            Action1D::WeylA1 { .. } => GroupElement::Weyl { from, to },
        }
    }

    /// Splits `s` along the copies of the fundamental domain and pulls each
    /// piece back into it.
    pub fn reduce(&self, s: &IntervalUnion) -> Reduction {
        let units = s.units();
        let mut pieces = Vec::new();
        let mut unresolved = Vec::new();
        match self {
            Action1D::Translation { period } => {
                for (a, b) in s.pieces() {
                    for n in floor_i64(&(a / period))..ceil_i64(&(b / period)) {
                        let lo = period * q(n);
                        let hi = &lo + period;
                        let x = a.max(&lo).clone();
                        let y = b.min(&hi).clone();
                        if x < y {
                            pieces.push(Reduced { image: (&x - &lo, &y - &lo), source: (x, y), label: n });
                        }
                    }
                }
            }
            Action1D::Dilation { base, center, window } => {
                let w = *window as i64;
                let pows: Vec<Q> = (-w..=w + 1).map(|n| qpow(base, n)).collect();
                let inner = &pows[0];
                let outer = &pows[pows.len() - 1];
                for (a, b) in s.pieces() {
                    let (p, r) = (a - center, b - center);
                    // positive side
                    if r > Q::zero() {
                        let p0 = p.clone().max(Q::zero());
                        for (k, n) in (-w..=w).enumerate() {
                            let (lo, hi) = (&pows[k], &pows[k + 1]);
                            let x = p0.clone().max(lo.clone());
                            let y = r.clone().min(hi.clone());
                            if x < y {
                                pieces.push(Reduced {
                                    source: (center + &x, center + &y),
                                    image: (center + &x / lo, center + &y / lo),
                                    label: n,
                                });
                            }
                        }
                        if &p0 < inner {
                            unresolved.push((center + &p0, center + inner.clone().min(r.clone())));
                        }
                        if &r > outer {
                            unresolved.push((center + outer.clone().max(p0.clone()), center + &r));
                        }
                    }
                    // negative side, mirrored
                    if p < Q::zero() {
                        let r0 = r.clone().min(Q::zero());
                        for (k, n) in (-w..=w).enumerate() {
                            let (lo, hi) = (-&pows[k + 1], -&pows[k]);
                            let x = p.clone().max(lo.clone());
                            let y = r0.clone().min(hi.clone());
                            if x < y {
                                let s = &pows[k];
                                pieces.push(Reduced {
                                    source: (center + &x, center + &y),
                                    image: (center + &x / s, center + &y / s),
                                    label: n,
                                });
                            }
                        }
                        let ninner = -inner;
                        let nouter = -outer;
                        if r0 > ninner {
                            unresolved.push((center + ninner.max(p.clone()), center + &r0));
                        }
                        if p < nouter {
                            unresolved.push((center + &p, center + nouter.min(r0.clone())));
                        }
                    }
                }
            }
            Action1D::WeylA1 { origin, width, max_index } => {
                for (a, b) in s.pieces() {
                    for n in floor_i64(&((a - origin) / width))..ceil_i64(&((b - origin) / width)) {
                        let lo = origin + width * q(n);
                        let hi = &lo + width;
                        let x = a.max(&lo).clone();
                        let y = b.min(&hi).clone();
                        if x >= y {
                            continue;
                        }
                        if n.unsigned_abs() > *max_index as u64 {
                            unresolved.push((x, y));
                            continue;
                        }
                        let g = self.element_map(n).inverse();
                        pieces.push(Reduced { image: g.apply_interval(&(x.clone(), y.clone())), source: (x, y), label: n });
                    }
                }
            }
        }
        Reduction { pieces, unresolved: IntervalUnion::new(unresolved, units) }
    }

    /// Every group element `g` (as an affine map with a label) for which
    /// `g(s)` can meet `target`, both bounded.
    pub(crate) fn elements_meeting(&self, s: &IntervalUnion, target: &IntervalUnion) -> (Vec<(i64, Affine1)>, bool) {
        let (Some(lo), Some(hi)) = (s.inf(), s.sup()) else {
            return (Vec::new(), true);
        };
        let (Some(tlo), Some(thi)) = (target.inf(), target.sup()) else {
            return (Vec::new(), true);
        };
        match self {
            Action1D::Translation { period } => {
                // lo + kP < thi and hi + kP > tlo
                let k0 = floor_i64(&((tlo - hi) / period));
                let k1 = ceil_i64(&((thi - lo) / period));
                ((k0..=k1).map(|k| (k, self.element_map_translation(k))).collect(), true)
            }
            Action1D::Dilation { .. } => unreachable!("dilation elements are enumerated by window"),
            Action1D::WeylA1 { origin, width, max_index } => {
                let mut out = Vec::new();
                let mut complete = true;
                let two_w = width * q(2);
                // translations x + 2jw, alcove index 2j
                for j in floor_i64(&((tlo - hi) / &two_w))..=ceil_i64(&((thi - lo) / &two_w)) {
                    let idx = 2 * j;
                    if idx.unsigned_abs() > *max_index as u64 {
                        complete = false;
                        continue;
                    }
                    out.push((idx, Affine1 { scale: q(1), shift: &two_w * q(j) }));
                }
                // reflections about origin + jw, alcove index 2j − 1;
                // 2p − hi < thi and 2p − lo > tlo
                let jlo = floor_i64(&(((tlo + lo) / q(2) - origin) / width));
                let jhi = ceil_i64(&(((thi + hi) / q(2) - origin) / width));
                for j in jlo..=jhi {
                    let idx = 2 * j - 1;
                    if idx.unsigned_abs() > *max_index as u64 {
                        complete = false;
                        continue;
                    }
                    let p = origin + width * q(j);
                    out.push((idx, Affine1 { scale: q(-1), shift: p * q(2) }));
                }
                (out, complete)
            }
        }
    }

    fn element_map_translation(&self, k: i64) -> Affine1 {
        self.element_map(k)
    }
}

/// Exact congruence of `a` and `b` under `action`: reduce both to the
/// fundamental domain, compare multiplicities, and pair covering pieces in
/// label order.
pub fn congruent(a: &IntervalUnion, b: &IntervalUnion, action: &Action1D) -> Result<CongruenceWitness> {
    if a.units() != b.units() {
        return Err(Error::InvalidInput("sets use different units".into()));
    }
    let units = a.units();
    if action.is_isometric() && a.measure() != b.measure() {
        let d = (a.measure() - b.measure()).abs();
        let (excess, deficit) = if a.measure() > b.measure() { (d, Q::zero()) } else { (Q::zero(), d) };
        return Ok(CongruenceWitness {
            pieces: Vec::new(),
            excess,
            deficit,
            unresolved_a: IntervalUnion::empty(units),
            unresolved_b: IntervalUnion::empty(units),
            verdict: Verdict::Fail,
            units,
        });
    }
    let ra = action.reduce(a);
    let rb = action.reduce(b);

    // Sweep over the common refinement of all reduced images.
    let mut events: Vec<(Q, bool, u8, usize)> = Vec::new();
    for (side, red) in [(0u8, &ra), (1u8, &rb)] {
        for (i, p) in red.pieces.iter().enumerate() {
            events.push((p.image.0.clone(), true, side, i));
            events.push((p.image.1.clone(), false, side, i));
        }
    }
    events.sort_by(|x, y| x.0.cmp(&y.0));
    let mut active: [BTreeSet<(i64, usize)>; 2] = [BTreeSet::new(), BTreeSet::new()];
    let mut excess = Q::zero();
    let mut deficit = Q::zero();
    // (a-piece, b-piece, lo, hi) runs in fundamental-domain coordinates
    let mut runs: Vec<(usize, usize, Q, Q)> = Vec::new();
    let mut open: HashMap<(usize, usize), usize> = HashMap::new();
    let mut prev: Option<Q> = None;
    let mut i = 0;
    while i < events.len() {
        let x = events[i].0.clone();
        if let Some(p) = &prev {
            if &x > p {
                let len = &x - p;
                let (ma, mb) = (active[0].len(), active[1].len());
                if ma > mb {
                    excess += &len * q((ma - mb) as i64);
                } else if mb > ma {
                    deficit += &len * q((mb - ma) as i64);
                }
                for (&(_, ia), &(_, ib)) in active[0].iter().zip(active[1].iter()) {
                    match open.get(&(ia, ib)) {
                        Some(&r) if &runs[r].3 == p => runs[r].3 = x.clone(),
                        _ => {
                            open.insert((ia, ib), runs.len());
                            runs.push((ia, ib, p.clone(), x.clone()));
                        }
                    }
                }
            }
        }
        while i < events.len() && events[i].0 == x {
            let (_, start, side, idx) = &events[i];
            let red = if *side == 0 { &ra } else { &rb };
            let key = (red.pieces[*idx].label, *idx);
            if *start {
                active[*side as usize].insert(key);
            } else {
                active[*side as usize].remove(&key);
            }
            i += 1;
        }
        prev = Some(x);
    }

    let pieces = runs
        .into_iter()
        .map(|(ia, ib, lo, hi)| {
            let la = ra.pieces[ia].label;
            let lb = rb.pieces[ib].label;
            let ga = action.element_map(la);
            let gb = action.element_map(lb);
            let seg = (lo, hi);
            WitnessPiece {
                from: ga.apply_interval(&seg),
                to: gb.apply_interval(&seg),
                element: action.element(la, lb),
                map: gb.compose(&ga.inverse()),
            }
        })
        .collect();

    let ua = ra.unresolved;
    let ub = rb.unresolved;
    let verdict = match (ua.is_empty(), ub.is_empty()) {
        (true, true) => {
            if excess.is_zero() && deficit.is_zero() {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
        // b is exact, a can only gain multiplicity
        (false, true) if excess > Q::zero() => Verdict::Fail,
        (true, false) if deficit > Q::zero() => Verdict::Fail,
        _ => Verdict::Inconclusive,
    };
    Ok(CongruenceWitness { pieces, excess, deficit, unresolved_a: ua, unresolved_b: ub, verdict, units })
}

/// Outcome of checking that the images `{g(E)}` tile the space.
#[derive(Debug, Clone, Serialize)]
pub struct GeneratorReport {
    /// Total measure of `E ∩ g(E)` over the checked non-identity elements.
    #[serde(serialize_with = "ser_q")]
    pub overlap: Q,
    /// Measure of the fundamental domain not reached by any image.
    #[serde(serialize_with = "ser_q")]
    pub uncovered: Q,
    /// Whether every element that could matter was examined.
    pub complete: bool,
    pub elements_checked: usize,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_q(x))
}

impl GeneratorReport {
    pub fn defect(&self) -> Q {
        &self.overlap + &self.uncovered
    }

    /// Pass when the defect is at most `tol` and the search was complete;
    /// an overlap above `tol` fails regardless of completeness.
    pub fn verdict(&self, tol: &Q) -> Verdict {
        if &self.overlap > tol {
            Verdict::Fail
        } else if !self.complete {
            Verdict::Inconclusive
        } else if &self.defect() > tol {
            Verdict::Fail
        } else {
            Verdict::Pass
        }
    }
}

/// Checks that the images of `e` under `action` are pairwise disjoint and
/// cover the space, both modulo null sets. Works directly with images of
/// `e`, independently of the reduction used by [`congruent`].
pub fn generator_check(e: &IntervalUnion, action: &Action1D) -> Result<GeneratorReport> {
    let units = e.units();
    let fd = action.fundamental_domain(units);
    if e.is_empty() {
        return Ok(GeneratorReport { overlap: Q::zero(), uncovered: fd.measure(), complete: true, elements_checked: 0 });
    }
    match action {
        Action1D::Dilation { base, center, window } => {
            let w = *window as i64;
            let mut r_in: Option<Q> = None;
            let mut r_out = Q::zero();
            for (a, b) in e.pieces() {
                let (x, y) = (a - center, b - center);
                let near = if x <= Q::zero() && y > Q::zero() {
                    Q::zero()
                } else if x >= Q::zero() {
                    x.clone()
                } else {
                    -y.clone()
                };
                r_in = Some(match r_in {
                    Some(r) if r <= near => r,
                    _ => near,
                });
                r_out = r_out.max(x.abs()).max(y.abs());
            }
            let r_in = r_in.unwrap_or_else(Q::zero);
            let one = Q::one();
            let dil = |n: i64| Affine1 { scale: qpow(base, n), shift: center * (&one - qpow(base, n)) };
            let mut overlap = Q::zero();
            for n in 1..=w {
                overlap += e.intersect(&dil(n).apply_set(e))?.measure();
            }
            let mut cover = IntervalUnion::empty(units);
            for n in -w..=w {
                cover = cover.union(&dil(n).apply_set(e).intersect(&fd)?)?;
            }
            let disjoint_done = r_in > Q::zero() && qpow(base, w + 1) * &r_in >= r_out;
            let cover_done = qpow(base, -w - 1) * &r_out <= one && qpow(base, w + 1) * &r_in >= *base;
            Ok(GeneratorReport {
                overlap,
                uncovered: fd.subtract(&cover)?.measure(),
                complete: disjoint_done && cover_done,
                elements_checked: (2 * w + 1) as usize,
            })
        }
        _ => {
            // isometric actions: finitely many elements can move e onto itself
            // or onto the fundamental domain
            let (self_hits, c1) = action.elements_meeting(e, e);
            let mut overlap = Q::zero();
            let mut checked = 0;
            for (idx, g) in &self_hits {
                let identity = g == &Affine1::identity();
                // translations: one of each ± pair; reflections: all
                let counted = match action {
                    Action1D::Translation { .. } => *idx > 0,
                    _ => !identity && (g.scale < Q::zero() || *idx > 0),
                };
                if counted {
                    overlap += e.intersect(&g.apply_set(e))?.measure();
                    checked += 1;
                }
            }
            let (fd_hits, c2) = action.elements_meeting(e, &fd);
            let mut cover = IntervalUnion::empty(units);
            for (_, g) in &fd_hits {
                cover = cover.union(&g.apply_set(e).intersect(&fd)?)?;
                checked += 1;
            }
            Ok(GeneratorReport {
                overlap,
                uncovered: fd.subtract(&cover)?.measure(),
                complete: c1 && c2,
                elements_checked: checked,
            })
        }
    }
}

/// Fundamental-domain test by images: alias of [`generator_check`] with the
/// exact zero-defect verdict.
pub fn is_fundamental_domain(e: &IntervalUnion, action: &Action1D) -> Result<(Verdict, GeneratorReport)> {
    let r = generator_check(e, action)?;
    Ok((r.verdict(&Q::zero()), r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::interval::qf;

    fn pi(p: &[(i64, i64)]) -> IntervalUnion {
        IntervalUnion::new(p.iter().map(|&(a, b)| (q(a), q(b))).collect(), Units::Pi)
    }

    fn es() -> IntervalUnion {
        pi(&[(-2, -1), (1, 2)])
    }

    #[test]
    fn translation_examples() {
        let t = Action1D::translation_2pi();
        let w = congruent(&pi(&[(0, 2)]), &es(), &t).unwrap();
        assert_eq!(w.verdict, Verdict::Pass);
        for p in &w.pieces {
            assert_eq!(p.map.apply_interval(&p.from), p.to);
        }
        let half = congruent(&pi(&[(0, 1)]), &pi(&[(0, 2)]), &t).unwrap();
        assert_eq!(half.verdict, Verdict::Fail);
        assert_eq!(half.defect(), q(1));
    }

    #[test]
    fn dilation_examples() {
        let d = Action1D::dyadic(16);
        let id = congruent(&es(), &es(), &d).unwrap();
        assert_eq!(id.verdict, Verdict::Pass);
        assert!(id.pieces.iter().all(|p| p.element == GroupElement::Dilation(0)));
        let shifted = congruent(&pi(&[(1, 2)]), &pi(&[(2, 4)]), &d).unwrap();
        assert_eq!(shifted.verdict, Verdict::Pass);
        assert_eq!(shifted.pieces[0].element, GroupElement::Dilation(1));
        let collide = congruent(&pi(&[(1, 3)]), &es(), &d).unwrap();
        assert_eq!(collide.verdict, Verdict::Fail);
        assert_eq!(collide.excess, qf(1, 2));
    }

    #[test]
    fn set_touching_center_fails_with_window() {
        let d = Action1D::dyadic(8);
        let w = congruent(&pi(&[(0, 2)]), &es(), &d).unwrap();
        assert_eq!(w.verdict, Verdict::Fail);
        assert!(!w.unresolved_a.is_empty());
    }

    #[test]
    fn generators() {
        let t = Action1D::translation_2pi();
        let d = Action1D::dyadic(16);
        assert_eq!(is_fundamental_domain(&pi(&[(0, 2)]), &t).unwrap().0, Verdict::Pass);
        assert_eq!(is_fundamental_domain(&es(), &d).unwrap().0, Verdict::Pass);
        assert_eq!(is_fundamental_domain(&es(), &t).unwrap().0, Verdict::Pass);
        assert_eq!(is_fundamental_domain(&pi(&[(0, 2)]), &d).unwrap().0, Verdict::Fail);
        assert_eq!(is_fundamental_domain(&pi(&[(0, 3)]), &t).unwrap().0, Verdict::Fail);
    }

    #[test]
    fn weyl_a1() {
        let w = Action1D::WeylA1 { origin: q(0), width: q(1), max_index: 12 };
        let unit = IntervalUnion::interval(q(0), q(1), Units::Plain);
        let next = IntervalUnion::interval(q(1), q(2), Units::Plain);
        let c = congruent(&unit, &next, &w).unwrap();
        assert_eq!(c.verdict, Verdict::Pass);
        assert_eq!(c.pieces[0].element, GroupElement::Weyl { from: 0, to: 1 });
        assert_eq!(c.pieces[0].map, Affine1 { scale: q(-1), shift: q(2) });
        assert_eq!(is_fundamental_domain(&unit, &w).unwrap().0, Verdict::Pass);
        assert_eq!(is_fundamental_domain(&next, &w).unwrap().0, Verdict::Pass);
        let long = IntervalUnion::interval(q(0), qf(3, 2), Units::Plain);
        assert_eq!(is_fundamental_domain(&long, &w).unwrap().0, Verdict::Fail);
    }
}
