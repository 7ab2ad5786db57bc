//! Convex polygon helpers: validation, half-plane clipping, exact areas.

use crate::error::{Error, Result};
use crate::vec2::Vec2;

/// Checks strict convexity, counterclockwise order and that the origin is
/// strictly interior.
pub fn validate(vertices: &[Vec2]) -> Result<()> {
    let m = vertices.len();
    if m < 3 {
        return Err(Error::InvalidInput(format!(
            "polygon needs at least 3 vertices, got {m}"
        )));
    }
    if vertices.iter().any(|v| !v.x.is_finite() || !v.y.is_finite()) {
        return Err(Error::InvalidInput("polygon vertex is not finite".into()));
    }
    for i in 0..m {
        let a = vertices[i];
        let b = vertices[(i + 1) % m];
        let c = vertices[(i + 2) % m];
        if (b - a).cross(c - b) <= 0.0 {
            return Err(Error::Domain(format!(
                "polygon is not strictly convex and counterclockwise at vertex {}",
                (i + 1) % m
            )));
        }
        if a.cross(b) <= 0.0 {
            return Err(Error::Domain(format!(
                "origin is not strictly inside the polygon (edge {i})"
            )));
        }
    }
    // a strictly convex ccw polygon can still wind twice
    let turning: f64 = (0..m)
        .map(|i| {
            let e0 = vertices[(i + 1) % m] - vertices[i];
            let e1 = vertices[(i + 2) % m] - vertices[(i + 1) % m];
            e0.cross(e1).atan2(e0.dot(e1))
        })
        .sum();
    if (turning - 2.0 * std::f64::consts::PI).abs() > 1e-6 {
        return Err(Error::Domain("polygon winds more than once".into()));
    }
    Ok(())
}

/// Outward unit normal and offset `c = <n, v_i>` of edge `v_i -> v_{i+1}`.
pub fn edge_normal(vertices: &[Vec2], i: usize) -> (Vec2, f64) {
    let a = vertices[i];
    let b = vertices[(i + 1) % vertices.len()];
    let e = b - a;
    let n = Vec2::new(e.y, -e.x).normalized();
    (n, n.dot(a))
}

/// Signed shoelace area (positive for counterclockwise order).
pub fn signed_area(vertices: &[Vec2]) -> f64 {
    let m = vertices.len();
    if m < 3 {
        return 0.0;
    }
    0.5 * (0..m)
        .map(|i| vertices[i].cross(vertices[(i + 1) % m]))
        .sum::<f64>()
}

pub fn centroid(vertices: &[Vec2]) -> Vec2 {
    let m = vertices.len();
    let mut cx = 0.0;
    let mut cy = 0.0;
    let mut a2 = 0.0;
    for i in 0..m {
        let p = vertices[i];
        let q = vertices[(i + 1) % m];
        let w = p.cross(q);
        a2 += w;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    Vec2::new(cx / (3.0 * a2), cy / (3.0 * a2))
}

/// Sutherland-Hodgman clip of a convex polygon against `<normal, p> >= offset`.
pub fn clip_halfplane(poly: &[Vec2], normal: Vec2, offset: f64) -> Vec<Vec2> {
    let m = poly.len();
    let mut out = Vec::with_capacity(m + 1);
    for i in 0..m {
        let p = poly[i];
        let q = poly[(i + 1) % m];
        let dp = normal.dot(p) - offset;
        let dq = normal.dot(q) - offset;
        if dp >= 0.0 {
            out.push(p);
        }
        if (dp >= 0.0) != (dq >= 0.0) {
            let s = dp / (dp - dq);
            out.push(p + (q - p) * s);
        }
    }
    out
}
