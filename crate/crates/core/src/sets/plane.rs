//! Congruence and tiling checks for polygon unions under lattice
//! translations, linear dilations and planar affine Weyl groups.

use std::f64::consts::PI;

use serde::Serialize;

use super::poly::PolyUnion;
use super::Verdict;
use crate::error::{Error, Result};
use crate::ifs::AffineMap;
use crate::linalg;
use crate::weyl::AffineWeylAction;

/// Group element attached to a reduced piece.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaneLabel {
    /// Translation by `2π·k`.
    Lattice([i64; 2]),
    /// The `n`-th power of the dilation.
    Power(i64),
    /// A Weyl word, as generator indices.
    Word(Vec<usize>),
}

struct Reduced2 {
    label: PlaneLabel,
    /// Carries the reference domain back onto the piece's position.
    to_orig: AffineMap,
    image: PolyUnion,
    source_area: f64,
}

/// Matched pair of pieces: `map(from) = to`.
#[derive(Debug, Clone)]
pub struct PlaneWitnessPiece {
    pub from: PolyUnion,
    pub to: PolyUnion,
    pub from_label: PlaneLabel,
    pub to_label: PlaneLabel,
    pub map: AffineMap,
}

/// Polygon-algebra congruence report. All areas are in reference-domain
/// coordinates except the unresolved ones, which are in original coordinates.
#[derive(Debug, Clone)]
pub struct PlaneCongruence {
    pub pieces: Vec<PlaneWitnessPiece>,
    pub overlap_a: f64,
    pub overlap_b: f64,
    /// Area of the symmetric difference of the reduced unions.
    pub mismatch: f64,
    pub unresolved_a: f64,
    pub unresolved_b: f64,
    pub reference_area: f64,
}

impl PlaneCongruence {
    pub fn defect(&self) -> f64 {
        self.overlap_a + self.overlap_b + self.mismatch + self.unresolved_a + self.unresolved_b
    }

    pub fn relative_defect(&self) -> f64 {
        self.defect() / self.reference_area
    }

    /// Overlaps cannot be repaired by unresolved parts; a mismatch can.
    pub fn verdict(&self, tol: f64) -> Verdict {
        let r = self.reference_area;
        if self.relative_defect() <= tol {
            Verdict::Pass
        } else if (self.overlap_a + self.overlap_b) / r > tol {
            Verdict::Fail
        } else if (self.unresolved_a + self.unresolved_b) / r > tol {
            Verdict::Inconclusive
        } else {
            Verdict::Fail
        }
    }
}

fn match_reductions(ra: Vec<Reduced2>, rb: Vec<Reduced2>, area_a: f64, area_b: f64, reference_area: f64) -> PlaneCongruence {
    let ua = PolyUnion::union_all(ra.iter().map(|r| &r.image));
    let ub = PolyUnion::union_all(rb.iter().map(|r| &r.image));
    let sum = |v: &[Reduced2]| v.iter().map(|r| r.image.area()).sum::<f64>();
    let src = |v: &[Reduced2]| v.iter().map(|r| r.source_area).sum::<f64>();
    let overlap_a = (sum(&ra) - ua.area()).max(0.0);
    let overlap_b = (sum(&rb) - ub.area()).max(0.0);
    let mismatch = ua.subtract(&ub).area() + ub.subtract(&ua).area();
    let tiny = 1e-12 * reference_area;
    let mut pieces = Vec::new();
    for a in &ra {
        for b in &rb {
            let common = a.image.intersect(&b.image);
            if common.area() <= tiny {
                continue;
            }
            let back = a.to_orig.inverse().expect("group elements are invertible");
            let map = b.to_orig.compose(&back);
            pieces.push(PlaneWitnessPiece {
                from: common.map(&a.to_orig).expect("planar map"),
                to: common.map(&b.to_orig).expect("planar map"),
                from_label: a.label.clone(),
                to_label: b.label.clone(),
                map,
            });
        }
    }
    PlaneCongruence {
        pieces,
        overlap_a,
        overlap_b,
        mismatch,
        unresolved_a: (area_a - src(&ra)).max(0.0),
        unresolved_b: (area_b - src(&rb)).max(0.0),
        reference_area,
    }
}

fn identity_reduction(s: &PolyUnion, label: PlaneLabel) -> Vec<Reduced2> {
    vec![Reduced2 { label, to_orig: AffineMap::identity(2), image: s.clone(), source_area: s.area() }]
}

/// The cube `[−π, π)²`.
pub fn cube() -> PolyUnion {
    PolyUnion::rect([-PI, -PI], [PI, PI]).expect("cube")
}

fn reduce_lattice(s: &PolyUnion) -> Vec<Reduced2> {
    let Some((lo, hi)) = s.bbox() else {
        return Vec::new();
    };
    let tp = 2.0 * PI;
    let k0: Vec<i64> = (0..2).map(|i| ((lo[i] + PI) / tp).floor() as i64).collect();
    let k1: Vec<i64> = (0..2).map(|i| ((hi[i] + PI) / tp).floor() as i64).collect();
    let mut out = Vec::new();
    for kx in k0[0]..=k1[0] {
        for ky in k0[1]..=k1[1] {
            let c = [tp * kx as f64, tp * ky as f64];
            let piece = s.clip_box([c[0] - PI, c[1] - PI], [c[0] + PI, c[1] + PI]);
            if piece.is_empty() {
                continue;
            }
            let to_orig = AffineMap::translation(&c);
            out.push(Reduced2 {
                label: PlaneLabel::Lattice([kx, ky]),
                image: piece.translate([-c[0], -c[1]]),
                source_area: piece.area(),
                to_orig,
            });
        }
    }
    out
}

/// `2π`-translation congruence of `a` and `b`, by reducing both into the
/// cube `[−π, π)²`.
pub fn translation_congruent_2d(a: &PolyUnion, b: &PolyUnion) -> PlaneCongruence {
    match_reductions(reduce_lattice(a), reduce_lattice(b), a.area(), b.area(), 4.0 * PI * PI)
}

/// Integer powers `D^n` for `n ∈ [−window, window]`, index `n + window`.
pub fn powers(d: &AffineMap, window: u32) -> Result<Vec<AffineMap>> {
    let inv = d.inverse()?;
    let w = window as usize;
    let mut out = vec![AffineMap::identity(d.dim()); 2 * w + 1];
    for k in 1..=w {
        out[w + k] = d.compose(&out[w + k - 1]);
        out[w - k] = inv.compose(&out[w - k + 1]);
    }
    Ok(out)
}

/// Dilation congruence of `g` to a reference fundamental domain `h` of the
/// dilation group: the pieces `g ∩ Dⁿ(h)` are pulled back into `h`.
pub fn dilation_congruent_2d(g: &PolyUnion, h: &PolyUnion, d: &AffineMap, window: u32) -> Result<PlaneCongruence> {
    let pows = powers(d, window)?;
    let w = window as i64;
    let mut ra = Vec::new();
    for (i, p) in pows.iter().enumerate() {
        let cell = h.map(p)?;
        let piece = g.intersect(&cell);
        if piece.is_empty() {
            continue;
        }
        ra.push(Reduced2 {
            label: PlaneLabel::Power(i as i64 - w),
            image: piece.map(&p.inverse()?)?,
            source_area: piece.area(),
            to_orig: p.clone(),
        });
    }
    Ok(match_reductions(ra, identity_reduction(h, PlaneLabel::Power(0)), g.area(), h.area(), h.area()))
}

/// The alcove of a planar action as a polygon.
pub fn alcove_polygon(weyl: &AffineWeylAction) -> Result<PolyUnion> {
    if weyl.dim() != 2 {
        return Err(Error::InvalidInput("expected a planar action".into()));
    }
    PolyUnion::polygon(&weyl.alcove.ring())
}

fn reduce_weyl(s: &PolyUnion, weyl: &AffineWeylAction, max_len: usize) -> Result<Vec<Reduced2>> {
    let c = alcove_polygon(weyl)?;
    let mut out = Vec::new();
    for w in weyl.words_up_to(max_len) {
        let cell = c.map(w.map())?;
        let piece = s.intersect(&cell);
        if piece.is_empty() {
            continue;
        }
        out.push(Reduced2 {
            label: PlaneLabel::Word(w.letters.clone()),
            image: piece.map(&w.map().inverse()?)?,
            source_area: piece.area(),
            to_orig: w.map().clone(),
        });
    }
    Ok(out)
}

/// Congruence under a planar affine Weyl group, reducing into the alcove
/// through words of length at most `max_len`.
pub fn weyl_congruent_2d(a: &PolyUnion, b: &PolyUnion, weyl: &AffineWeylAction, max_len: usize) -> Result<PlaneCongruence> {
    let ra = reduce_weyl(a, weyl, max_len)?;
    let rb = reduce_weyl(b, weyl, max_len)?;
    Ok(match_reductions(ra, rb, a.area(), b.area(), weyl.alcove.volume()))
}

/// Tiling report for `{Dⁿ(E) : |n| ≤ window}` inside a region.
#[derive(Debug, Clone, Serialize)]
pub struct PlaneGenerator {
    /// `Σ area(Dⁿ E ∩ R) − area(∪ Dⁿ E ∩ R)`.
    pub overlap: f64,
    /// `area(R ∖ ∪ Dⁿ E)`.
    pub uncovered: f64,
    /// Uncovered area outside the ball that images beyond the window can
    /// still reach.
    pub uncovered_reachable: f64,
    pub region_area: f64,
    pub window: u32,
    /// `D^{±(window+1)}(E)` misses the region away from the fixed point.
    pub outer_clear: bool,
}

impl PlaneGenerator {
    pub fn relative_defect(&self) -> f64 {
        (self.overlap + self.uncovered) / self.region_area
    }

    pub fn verdict(&self, tol: f64) -> Verdict {
        if self.overlap / self.region_area > tol {
            Verdict::Fail
        } else if self.relative_defect() <= tol {
            Verdict::Pass
        } else if self.outer_clear && self.uncovered_reachable / self.region_area > tol {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        }
    }
}

/// Fixed point of an affine map, `(I − M)θ = t`.
pub fn fixed_point(d: &AffineMap) -> Result<Vec<f64>> {
    let n = d.dim();
    let a = nalgebra::DMatrix::<f64>::identity(n, n) - d.matrix();
    linalg::solve(&a, d.offset())
        .map(|v| v.iter().cloned().collect())
        .ok_or_else(|| Error::InvalidInput("dilation has no unique fixed point".into()))
}

/// Checks that the `D`-images of `e` are disjoint and cover `region`.
pub fn dilation_generator_2d(e: &PolyUnion, d: &AffineMap, window: u32, region: &PolyUnion) -> Result<PlaneGenerator> {
    let Some((rlo, rhi)) = region.bbox() else {
        return Err(Error::InvalidInput("empty region".into()));
    };
    let pows = powers(d, window + 1)?;
    let last = pows.len() - 1;
    let clipped = |p: &AffineMap| -> Result<PolyUnion> {
        Ok(e.map(p)?.clip_box(rlo, rhi).intersect(region))
    };
    let images: Vec<PolyUnion> = pows[1..last].iter().map(clipped).collect::<Result<_>>()?;
    let total: f64 = images.iter().map(|s| s.area()).sum();
    let cover = PolyUnion::union_all(images.iter());
    let region_area = region.area();
    let tiny = 1e-12 * region_area;

    // Images beyond the window: outer ones must miss the region, inner ones
    // stay inside a ball around the fixed point.
    let theta = fixed_point(d)?;
    let outer_clear = clipped(&pows[last])?.area() <= tiny;
    let r_e = e
        .rings()
        .iter()
        .flat_map(|(ext, _)| ext.iter().map(|p| linalg::dist(p, &theta)).collect::<Vec<_>>())
        .fold(0.0, f64::max);
    let inner = linalg::spectral_norm(pows[0].matrix())? * r_e;
    let gap = region.subtract(&cover);
    let n = 256;
    let ball = PolyUnion::regular([theta[0], theta[1]], inner / (PI / n as f64).cos(), n)?;
    Ok(PlaneGenerator {
        overlap: (total - cover.area()).max(0.0),
        uncovered: gap.area(),
        uncovered_reachable: gap.subtract(&ball).area(),
        region_area,
        window,
        outer_clear,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_tiles_by_lattice() {
        let c = translation_congruent_2d(&cube(), &cube());
        assert!(c.defect() < 1e-9);
        let shifted = cube().translate([3.0, 0.0]);
        let s = translation_congruent_2d(&shifted, &cube());
        assert!(s.relative_defect() < 1e-9, "{}", s.relative_defect());
        assert!(s.pieces.len() >= 2);
        for p in &s.pieces {
            let img = p.from.map(&p.map).unwrap();
            let d = img.subtract(&p.to).area() + p.to.subtract(&img).area();
            assert!(d < 1e-9);
        }
    }

    #[test]
    fn annulus_generates_under_doubling() {
        let disk = PolyUnion::regular([0.0, 0.0], 1.0, 128).unwrap();
        let d = AffineMap::scaling(2, 2.0);
        let f = disk.map(&d).unwrap().subtract(&disk);
        let region = PolyUnion::regular([0.0, 0.0], 10.0, 256).unwrap();
        let g = dilation_generator_2d(&f, &d, 10, &region).unwrap();
        assert!(g.relative_defect() < 1e-6, "{g:?}");
        assert_eq!(g.verdict(1e-6), Verdict::Pass);
        let bad = dilation_generator_2d(&cube(), &d, 4, &region).unwrap();
        assert_eq!(bad.verdict(1e-6), Verdict::Fail);
    }
}
