//! Searches witnessing that a dilation group and a translation or Weyl group
//! form a dilation-translation pair.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ifs::AffineMap;
use crate::sets::plane::powers;
use crate::sets::{Action1D, Affine1, IntervalUnion, PolyUnion};
use crate::sets::plane::PlaneLabel;
use crate::weyl::AffineWeylAction;

/// `g(E) ⊆ D^exponent(F)` with `g = map`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairWitness1D {
    pub exponent: i64,
    /// Translation count or alcove index of `g`.
    pub label: i64,
    pub map: Affine1,
}

/// Smallest `ℓ ≥ 0`, then the element of smallest label, with
/// `g(e) ⊆ D^ℓ(f)`; with `disjoint`, also `g(e) ∩ e = ∅`.
pub fn check_pair_1d(
    dil: &Action1D,
    group: &Action1D,
    e: &IntervalUnion,
    f: &IntervalUnion,
    cap: u32,
    disjoint: bool,
) -> Result<PairWitness1D> {
    if !matches!(dil, Action1D::Dilation { .. }) {
        return Err(Error::InvalidInput("first action must be a dilation".into()));
    }
    if matches!(group, Action1D::Dilation { .. }) {
        return Err(Error::InvalidInput("second action must be a translation or Weyl group".into()));
    }
    if e.is_empty() || f.is_empty() {
        return Err(Error::InvalidInput("both sets must be nonempty".into()));
    }
    for l in 0..=cap as i64 {
        let target = dil.element_map(l).apply_set(f);
        let (mut cands, _) = group.elements_meeting(e, &target);
        cands.sort_by_key(|(label, _)| (label.unsigned_abs(), *label));
        for (label, g) in cands {
            let moved = g.apply_set(e);
            if !moved.is_subset(&target)? {
                continue;
            }
            if disjoint && !moved.intersect(e)?.is_empty() {
                continue;
            }
            return Ok(PairWitness1D { exponent: l, label, map: g });
        }
    }
    Err(Error::Inconclusive(format!("no pair element found with exponent up to {cap}")))
}

/// Smallest `ℓ ≥ 0` with `D^{−ℓ}(e) ⊆ n`.
pub fn shrink_exponent_1d(dil: &Action1D, e: &IntervalUnion, n: &IntervalUnion, cap: u32) -> Result<i64> {
    for l in 0..=cap as i64 {
        if dil.element_map(-l).apply_set(e).is_subset(n)? {
            return Ok(l);
        }
    }
    Err(Error::Inconclusive(format!("no shrinking exponent up to {cap}")))
}

/// Group used by the planar pair search.
#[derive(Debug, Clone, Copy)]
pub enum PairMode2<'a> {
    /// Translations by `2πℤ²`.
    Lattice,
    /// Words of bounded length in an affine Weyl group.
    Weyl { weyl: &'a AffineWeylAction, max_len: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct PairWitness2D {
    pub exponent: i64,
    pub label: PlaneLabel,
    #[serde(skip)]
    pub map: AffineMap,
}

fn box_inside(inner: ([f64; 2], [f64; 2]), outer: ([f64; 2], [f64; 2]), slack: f64) -> bool {
    (0..2).all(|i| inner.0[i] >= outer.0[i] - slack && inner.1[i] <= outer.1[i] + slack)
}

/// Planar version of [`check_pair_1d`]; containment is up to `tol·area(e)`.
pub fn check_pair_2d(
    d: &AffineMap,
    mode: PairMode2<'_>,
    e: &PolyUnion,
    f: &PolyUnion,
    cap: u32,
    tol: f64,
    disjoint: bool,
) -> Result<PairWitness2D> {
    let (Some(ebox), Some(_)) = (e.bbox(), f.bbox()) else {
        return Err(Error::InvalidInput("both sets must be nonempty".into()));
    };
    let slack_area = tol * e.area();
    let pows = powers(d, cap)?;
    let words = match mode {
        PairMode2::Weyl { weyl, max_len } => weyl.words_up_to(max_len),
        PairMode2::Lattice => Vec::new(),
    };
    for l in 0..=cap as usize {
        let target = f.map(&pows[cap as usize + l])?;
        let tbox = target.bbox().expect("nonempty");
        let slack = 1e-9 * (tbox.1[0] - tbox.0[0]).max(tbox.1[1] - tbox.0[1]).max(1.0);
        let mut cands: Vec<(PlaneLabel, AffineMap)> = Vec::new();
        match mode {
            PairMode2::Lattice => {
                let tp = 2.0 * PI;
                let lo: Vec<i64> = (0..2).map(|i| ((tbox.0[i] - ebox.0[i]) / tp).ceil() as i64).collect();
                let hi: Vec<i64> = (0..2).map(|i| ((tbox.1[i] - ebox.1[i]) / tp).floor() as i64).collect();
                let mut ks = Vec::new();
                for kx in lo[0]..=hi[0] {
                    for ky in lo[1]..=hi[1] {
                        ks.push([kx, ky]);
                    }
                }
                ks.sort_by_key(|k| (k[0] * k[0] + k[1] * k[1], *k));
                for k in ks {
                    cands.push((PlaneLabel::Lattice(k), AffineMap::translation(&[tp * k[0] as f64, tp * k[1] as f64])));
                }
            }
            PairMode2::Weyl { .. } => {
                for w in &words {
                    cands.push((PlaneLabel::Word(w.letters.clone()), w.map().clone()));
                }
            }
        }
        for (label, g) in cands {
            let moved = e.map(&g)?;
            let mbox = moved.bbox().expect("nonempty");
            if !box_inside(mbox, tbox, slack) {
                continue;
            }
            if moved.subtract(&target).area() > slack_area {
                continue;
            }
            if disjoint && moved.intersect(e).area() > slack_area {
                continue;
            }
            return Ok(PairWitness2D { exponent: l as i64, label, map: g });
        }
    }
    Err(Error::Inconclusive(format!("no pair element found with exponent up to {cap}")))
}

/// Smallest `ℓ ≥ 0` with `D^{−ℓ}(e) ⊆ n` up to `tol·area(e)`.
pub fn shrink_exponent_2d(d: &AffineMap, e: &PolyUnion, n: &PolyUnion, cap: u32, tol: f64) -> Result<i64> {
    let pows = powers(d, cap)?;
    for l in 0..=cap as usize {
        let img = e.map(&pows[cap as usize - l])?;
        if img.subtract(n).area() <= tol * e.area() {
            return Ok(l as i64);
        }
    }
    Err(Error::Inconclusive(format!("no shrinking exponent up to {cap}")))
}
