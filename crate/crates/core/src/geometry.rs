//! Convex polytope helpers in one and two dimensions: clipping, areas and
//! disk intersections.

use nalgebra::DMatrix;

/// Signed area of a polygon given as a vertex ring.
pub fn signed_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    let mut acc = 0.0;
    for i in 0..n {
        let [x0, y0] = poly[i];
        let [x1, y1] = poly[(i + 1) % n];
        acc += x0 * y1 - x1 * y0;
    }
    0.5 * acc
}

pub fn polygon_area(poly: &[[f64; 2]]) -> f64 {
    signed_area(poly).abs()
}

/// Keeps the part of a convex polygon where `⟨p, normal⟩ ≤ offset`.
pub fn clip_halfplane(poly: &[[f64; 2]], normal: [f64; 2], offset: f64) -> Vec<[f64; 2]> {
    let side = |p: &[f64; 2]| p[0] * normal[0] + p[1] * normal[1] - offset;
    let mut out = Vec::with_capacity(poly.len() + 1);
    let n = poly.len();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let (sa, sb) = (side(&a), side(&b));
        if sa <= 0.0 {
            out.push(a);
        }
        if (sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0) {
            let t = sa / (sa - sb);
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    out
}

/// Counter-clockwise ordering of a convex polygon's vertices.
pub fn ccw(mut poly: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    if signed_area(&poly) < 0.0 {
        poly.reverse();
    }
    poly
}

/// Sorts the vertices of a convex polygon by angle around their centroid.
pub fn convex_ring(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let n = points.len() as f64;
    let cx = points.iter().map(|p| p[0]).sum::<f64>() / n;
    let cy = points.iter().map(|p| p[1]).sum::<f64>() / n;
    let mut ring = points.to_vec();
    ring.sort_by(|a, b| {
        let ta = (a[1] - cy).atan2(a[0] - cx);
        let tb = (b[1] - cy).atan2(b[0] - cx);
        ta.total_cmp(&tb)
    });
    ring
}

/// Area of the intersection of two convex polygons.
pub fn convex_intersection_area(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    let b = ccw(b.to_vec());
    let mut cur = a.to_vec();
    let n = b.len();
    for i in 0..n {
        if cur.len() < 3 {
            return 0.0;
        }
        let p = b[i];
        let q = b[(i + 1) % n];
        // Interior of a ccw polygon lies to the left of each edge.
        let normal = [q[1] - p[1], p[0] - q[0]];
        let offset = normal[0] * p[0] + normal[1] * p[1];
        cur = clip_halfplane(&cur, normal, offset);
    }
    if cur.len() < 3 {
        0.0
    } else {
        polygon_area(&cur)
    }
}

/// Length of the overlap of two closed intervals.
pub fn interval_overlap(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.1.min(b.1) - a.0.max(b.0)).max(0.0)
}

/// Area of the intersection of the disk of radius `r` at the origin with the
/// triangle `(0, a, b)`, signed by the orientation of the triangle.
fn disk_triangle_area(a: [f64; 2], b: [f64; 2], r: f64) -> f64 {
    let cross = |p: [f64; 2], q: [f64; 2]| p[0] * q[1] - p[1] * q[0];
    let dot = |p: [f64; 2], q: [f64; 2]| p[0] * q[0] + p[1] * q[1];
    let sector = |p: [f64; 2], q: [f64; 2]| 0.5 * r * r * cross(p, q).atan2(dot(p, q));
    let tri = |p: [f64; 2], q: [f64; 2]| 0.5 * cross(p, q);

    let d = [b[0] - a[0], b[1] - a[1]];
    let qa = dot(d, d);
    if qa == 0.0 {
        return 0.0;
    }
    let qb = 2.0 * dot(a, d);
    let qc = dot(a, a) - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    let a_in = qc <= 0.0;
    let b_in = dot(b, b) <= r * r;
    if disc <= 0.0 {
        return sector(a, b);
    }
    let sq = disc.sqrt();
    let t1 = ((-qb - sq) / (2.0 * qa)).clamp(0.0, 1.0);
    let t2 = ((-qb + sq) / (2.0 * qa)).clamp(0.0, 1.0);
    let at = |t: f64| [a[0] + t * d[0], a[1] + t * d[1]];
    match (a_in, b_in) {
        (true, true) => tri(a, b),
        (true, false) => {
            let p = at(t2);
            tri(a, p) + sector(p, b)
        }
        (false, true) => {
            let p = at(t1);
            sector(a, p) + tri(p, b)
        }
        (false, false) => {
            if t1 >= t2 {
                sector(a, b)
            } else {
                let p = at(t1);
                let q = at(t2);
                sector(a, p) + tri(p, q) + sector(q, b)
            }
        }
    }
}

/// Area of a polygon intersected with the disk of radius `r` at `center`.
pub fn polygon_disk_area(poly: &[[f64; 2]], center: [f64; 2], r: f64) -> f64 {
    let n = poly.len();
    let mut acc = 0.0;
    for i in 0..n {
        let a = [poly[i][0] - center[0], poly[i][1] - center[1]];
        let b = [poly[(i + 1) % n][0] - center[0], poly[(i + 1) % n][1] - center[1]];
        acc += disk_triangle_area(a, b, r);
    }
    acc.abs()
}

/// Euclidean distance from `p` to a convex polygon (zero inside).
pub fn point_polygon_distance(poly: &[[f64; 2]], p: [f64; 2]) -> f64 {
    let ring = ccw(poly.to_vec());
    let n = ring.len();
    let mut inside = true;
    let mut best = f64::INFINITY;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        let e = [b[0] - a[0], b[1] - a[1]];
        let w = [p[0] - a[0], p[1] - a[1]];
        if e[0] * w[1] - e[1] * w[0] < 0.0 {
            inside = false;
        }
        let len2 = e[0] * e[0] + e[1] * e[1];
        let t = if len2 > 0.0 { ((w[0] * e[0] + w[1] * e[1]) / len2).clamp(0.0, 1.0) } else { 0.0 };
        let q = [a[0] + t * e[0] - p[0], a[1] + t * e[1] - p[1]];
        best = best.min(q[0].hypot(q[1]));
    }
    if inside {
        0.0
    } else {
        best
    }
}

/// `|det(v₁−v₀, …, vₙ−v₀)| / n!`.
pub fn simplex_volume(vertices: &[Vec<f64>]) -> f64 {
    let n = vertices.len() - 1;
    if n == 0 {
        return 0.0;
    }
    let m = DMatrix::from_fn(n, n, |r, c| vertices[c + 1][r] - vertices[0][r]);
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    m.determinant().abs() / fact
}
