//! Finite unions of polygons in the plane, backed by `geo` boolean operations.

use geo::orient::{Direction, Orient};
use geo::{unary_union, Area, BooleanOps, BoundingRect, Coord, LineString, MultiPolygon, Polygon};

use super::interval::SetJson;
use crate::error::{Error, Result};
use crate::geometry::{clip_halfplane, signed_area};
use crate::ifs::AffineMap;

/// Relative snap tolerance for polygon coordinates.
pub const SNAP_TOL: f64 = 1e-9;

/// A normalized polygon union: components have disjoint interiors,
/// exteriors counter-clockwise, holes clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyUnion {
    mp: MultiPolygon<f64>,
}

fn ring_of(points: &[[f64; 2]]) -> LineString<f64> {
    LineString::from(points.iter().map(|p| Coord { x: p[0], y: p[1] }).collect::<Vec<_>>())
}

fn points_of(ring: &LineString<f64>) -> Vec<[f64; 2]> {
    let mut v: Vec<[f64; 2]> = ring.coords().map(|c| [c.x, c.y]).collect();
    if v.len() > 1 && v.first() == v.last() {
        v.pop();
    }
    v
}

fn check_ring(points: &[[f64; 2]]) -> Result<()> {
    if points.len() < 3 {
        return Err(Error::InvalidGeometry("a ring needs at least three vertices".into()));
    }
    if points.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
        return Err(Error::InvalidGeometry("non-finite polygon coordinate".into()));
    }
    if signed_area(points) == 0.0 {
        return Err(Error::InvalidGeometry("degenerate ring with zero area".into()));
    }
    Ok(())
}

impl PolyUnion {
    pub fn empty() -> Self {
        PolyUnion { mp: MultiPolygon::new(Vec::new()) }
    }

    fn normalized(mp: MultiPolygon<f64>) -> Self {
        let mp = mp.orient(Direction::Default);
        let scale = mp
            .bounding_rect()
            .map(|r| r.width().max(r.height()))
            .unwrap_or(0.0)
            .max(1.0);
        let min_area = (SNAP_TOL * scale).powi(2);
        let kept: Vec<Polygon<f64>> = mp.0.into_iter().filter(|p| p.unsigned_area() > min_area).collect();
        PolyUnion { mp: MultiPolygon::new(kept) }
    }

    /// Union of the `exteriors` minus the union of the `holes`; ring
    /// orientation is ignored.
    pub fn from_rings(exteriors: &[Vec<[f64; 2]>], holes: &[Vec<[f64; 2]>]) -> Result<Self> {
        let build = |rings: &[Vec<[f64; 2]>]| -> Result<MultiPolygon<f64>> {
            let mut polys = Vec::with_capacity(rings.len());
            for r in rings {
                check_ring(r)?;
                polys.push(Polygon::new(ring_of(r), Vec::new()).orient(Direction::Default));
            }
            Ok(unary_union(&polys))
        };
        let mut mp = build(exteriors)?;
        if !holes.is_empty() {
            mp = mp.difference(&build(holes)?);
        }
        Ok(Self::normalized(mp))
    }

    /// A single polygon.
    pub fn polygon(ring: &[[f64; 2]]) -> Result<Self> {
        Self::from_rings(&[ring.to_vec()], &[])
    }

    /// Axis-parallel rectangle `[lo, hi)`.
    pub fn rect(lo: [f64; 2], hi: [f64; 2]) -> Result<Self> {
        Self::polygon(&[[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]])
    }

    /// Regular `n`-gon inscribed in the circle of the given radius.
    pub fn regular(center: [f64; 2], radius: f64, n: usize) -> Result<Self> {
        if !(radius > 0.0) || n < 3 {
            return Err(Error::InvalidGeometry("regular polygon needs radius > 0 and n ≥ 3".into()));
        }
        let ring: Vec<[f64; 2]> = (0..n)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                [center[0] + radius * t.cos(), center[1] + radius * t.sin()]
            })
            .collect();
        Self::polygon(&ring)
    }

    pub fn is_empty(&self) -> bool {
        self.mp.0.is_empty()
    }

    pub fn area(&self) -> f64 {
        self.mp.unsigned_area()
    }

    pub fn components(&self) -> usize {
        self.mp.0.len()
    }

    /// `(exterior, holes)` rings of each component.
    pub fn rings(&self) -> Vec<(Vec<[f64; 2]>, Vec<Vec<[f64; 2]>>)> {
        self.mp
            .0
            .iter()
            .map(|p| (points_of(p.exterior()), p.interiors().iter().map(points_of).collect()))
            .collect()
    }

    pub fn bbox(&self) -> Option<([f64; 2], [f64; 2])> {
        self.mp.bounding_rect().map(|r| ([r.min().x, r.min().y], [r.max().x, r.max().y]))
    }

    pub fn union(&self, other: &Self) -> Self {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        Self::normalized(self.mp.union(&other.mp))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        if self.is_empty() || other.is_empty() || !bboxes_meet(self, other) {
            return Self::empty();
        }
        Self::normalized(self.mp.intersection(&other.mp))
    }

    pub fn subtract(&self, other: &Self) -> Self {
        if self.is_empty() || other.is_empty() || !bboxes_meet(self, other) {
            return self.clone();
        }
        Self::normalized(self.mp.difference(&other.mp))
    }

    /// Union of many sets in one sweep.
    pub fn union_all<'a>(sets: impl IntoIterator<Item = &'a PolyUnion>) -> Self {
        let polys: Vec<Polygon<f64>> = sets.into_iter().flat_map(|s| s.mp.0.iter().cloned()).collect();
        if polys.is_empty() {
            return Self::empty();
        }
        Self::normalized(unary_union(&polys))
    }

    /// Image under an affine map of the plane.
    pub fn map(&self, f: &AffineMap) -> Result<Self> {
        if f.dim() != 2 {
            return Err(Error::InvalidInput("polygon sets live in the plane".into()));
        }
        let m = f.matrix();
        let t = f.offset();
        let g = |c: &Coord<f64>| Coord {
            x: m[(0, 0)] * c.x + m[(0, 1)] * c.y + t[0],
            y: m[(1, 0)] * c.x + m[(1, 1)] * c.y + t[1],
        };
        let map_ring = |r: &LineString<f64>| LineString::from(r.coords().map(g).collect::<Vec<_>>());
        let polys = self
            .mp
            .0
            .iter()
            .map(|p| Polygon::new(map_ring(p.exterior()), p.interiors().iter().map(map_ring).collect()))
            .collect();
        // an orientation-reversing map only flips ring order
        Ok(PolyUnion { mp: MultiPolygon::new(polys).orient(Direction::Default) })
    }

    pub fn translate(&self, t: [f64; 2]) -> Self {
        self.map(&AffineMap::translation(&t)).expect("planar translation")
    }

    /// Clips each ring against the box `[lo, hi]` before any boolean
    /// operation, so later overlays work at the precision of the box.
    pub fn clip_box(&self, lo: [f64; 2], hi: [f64; 2]) -> Self {
        let clip = |ring: &[[f64; 2]]| -> Vec<[f64; 2]> {
            let mut r = ring.to_vec();
            for (n, c) in [([1.0, 0.0], hi[0]), ([-1.0, 0.0], -lo[0]), ([0.0, 1.0], hi[1]), ([0.0, -1.0], -lo[1])] {
                if r.len() < 3 {
                    break;
                }
                r = clip_halfplane(&r, n, c);
            }
            r
        };
        let mut polys = Vec::new();
        for (ext, holes) in self.rings() {
            let e = clip(&ext);
            if e.len() < 3 || signed_area(&e).abs() == 0.0 {
                continue;
            }
            let hs: Vec<LineString<f64>> = holes
                .iter()
                .map(|h| clip(h))
                .filter(|h| h.len() >= 3 && signed_area(h) != 0.0)
                .map(|h| ring_of(&h))
                .collect();
            polys.push(Polygon::new(ring_of(&e), hs).orient(Direction::Default));
        }
        if polys.is_empty() {
            return Self::empty();
        }
        // winding-number union drops the degenerate slivers left by clipping
        Self::normalized(unary_union(&polys))
    }

    /// `area(self ∖ other) ≤ tol`.
    pub fn is_subset(&self, other: &Self, tol: f64) -> bool {
        self.subtract(other).area() <= tol
    }

    pub fn to_json(&self) -> SetJson {
        let mut polygons = Vec::new();
        let mut holes = Vec::new();
        for (e, hs) in self.rings() {
            polygons.push(e);
            holes.extend(hs);
        }
        SetJson {
            space: 2,
            units: None,
            intervals: None,
            polygons: Some(polygons),
            holes: if holes.is_empty() { None } else { Some(holes) },
        }
    }

    pub fn from_json(j: &SetJson) -> Result<Self> {
        if j.space != 2 {
            return Err(Error::InvalidInput("expected a two-dimensional set".into()));
        }
        let polys = j.polygons.as_ref().ok_or_else(|| Error::InvalidInput("missing \"polygons\"".into()))?;
        Self::from_rings(polys, j.holes.as_deref().unwrap_or(&[]))
    }
}

fn bboxes_meet(a: &PolyUnion, b: &PolyUnion) -> bool {
    match (a.bbox(), b.bbox()) {
        (Some((alo, ahi)), Some((blo, bhi))) => {
            alo[0] <= bhi[0] && blo[0] <= ahi[0] && alo[1] <= bhi[1] && blo[1] <= ahi[1]
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangle_algebra() {
        let a = PolyUnion::rect([0.0, 0.0], [2.0, 2.0]).unwrap();
        let b = PolyUnion::rect([1.0, 1.0], [3.0, 3.0]).unwrap();
        assert!((a.union(&b).area() - 7.0).abs() < 1e-12);
        assert!((a.intersect(&b).area() - 1.0).abs() < 1e-12);
        assert!((a.subtract(&b).area() - 3.0).abs() < 1e-12);
        assert!((a.intersect(&a).area() - a.area()).abs() < 1e-12);
    }

    #[test]
    fn holes_and_json() {
        let outer = vec![[0.0, 0.0], [4.0, 0.0], [4.0, 4.0], [0.0, 4.0]];
        let hole = vec![[1.0, 1.0], [1.0, 2.0], [2.0, 2.0], [2.0, 1.0]];
        let s = PolyUnion::from_rings(&[outer], &[hole]).unwrap();
        assert!((s.area() - 15.0).abs() < 1e-12);
        let back = PolyUnion::from_json(&s.to_json()).unwrap();
        assert!((back.area() - 15.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_ring_rejected() {
        let line = vec![[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]];
        assert!(matches!(PolyUnion::polygon(&line), Err(Error::InvalidGeometry(_))));
    }

    #[test]
    fn reflection_keeps_area() {
        let a = PolyUnion::rect([0.0, 0.0], [2.0, 1.0]).unwrap();
        let r = AffineMap::from_rows(&[&[-1.0, 0.0], &[0.0, 1.0]], &[0.0, 0.0]).unwrap();
        let img = a.map(&r).unwrap();
        assert!((img.area() - 2.0).abs() < 1e-12);
        assert!((img.union(&a).area() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn clip_to_box() {
        let ring = PolyUnion::regular([0.0, 0.0], 10.0, 64)
            .unwrap()
            .subtract(&PolyUnion::regular([0.0, 0.0], 5.0, 64).unwrap());
        let c = ring.clip_box([0.0, 0.0], [20.0, 20.0]);
        assert!((c.area() - ring.area() / 4.0).abs() < 1e-9);
    }
}
