use alloc::vec::Vec;

use super::Polytope;
use crate::linalg::{self, dot};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    /// d-dimensional volume (length, area, volume for d = 1, 2, 3).
    Volume,
    /// Planar area; only for d = 2.
    Area,
    /// Boundary length; only for d = 2.
    Perimeter,
}

/// Sorts planar points counter-clockwise around their centroid.
pub(crate) fn sort_ccw(pts: &mut [Vec<f64>]) {
    if pts.len() < 3 {
        return;
    }
    let c = linalg::centroid(pts);
    pts.sort_by(|a, b| {
        let ta = libm::atan2(a[1] - c[1], a[0] - c[0]);
        let tb = libm::atan2(b[1] - c[1], b[0] - c[0]);
        ta.total_cmp(&tb)
    });
}

fn shoelace(pts: &[Vec<f64>]) -> f64 {
    let n = pts.len();
    let mut s = 0.0;
    for i in 0..n {
        let (a, b) = (&pts[i], &pts[(i + 1) % n]);
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s.abs()
}

fn polygon_perimeter(pts: &[Vec<f64>]) -> f64 {
    let n = pts.len();
    (0..n).map(|i| linalg::dist(&pts[i], &pts[(i + 1) % n])).sum()
}

/// Area of a planar convex polygon embedded in R³ with the given unit normal.
fn facet_area(pts: &[Vec<f64>], normal: &[f64]) -> f64 {
    if pts.len() < 3 {
        return 0.0;
    }
    // Orthonormal frame of the facet plane.
    let axes = [alloc::vec![1.0, 0.0, 0.0], alloc::vec![0.0, 1.0, 0.0], alloc::vec![0.0, 0.0, 1.0]];
    let frame = linalg::gram_schmidt(&[normal.to_vec(), axes[0].clone(), axes[1].clone(), axes[2].clone()], 1e-9);
    let (e1, e2) = (&frame[1], &frame[2]);
    let mut flat: Vec<Vec<f64>> = pts.iter().map(|p| alloc::vec![dot(p, e1), dot(p, e2)]).collect();
    sort_ccw(&mut flat);
    shoelace(&flat)
}

pub fn measure(p: &Polytope, kind: MeasureKind) -> Result<f64> {
    let d = p.dim();
    match (kind, d) {
        (MeasureKind::Volume, 1) => Ok(p.width(&[1.0])),
        (MeasureKind::Volume | MeasureKind::Area, 2) => Ok(shoelace(p.vertices())),
        (MeasureKind::Perimeter, 2) => Ok(polygon_perimeter(p.vertices())),
        (MeasureKind::Volume, 3) => {
            let c = p.vertex_centroid();
            let inc = p.facet_vertex_incidence();
            let mut vol = 0.0;
            for (f, idx) in p.facets().iter().zip(&inc) {
                let pts: Vec<Vec<f64>> = idx.iter().map(|&j| p.vertices()[j].clone()).collect();
                vol += facet_area(&pts, &f.normal) * (f.offset - dot(&f.normal, &c));
            }
            Ok(vol / 3.0)
        }
        (MeasureKind::Area | MeasureKind::Perimeter, _) => Err(Error::Unsupported(alloc::format!("{kind:?} requires d = 2"))),
        _ => Err(Error::Unsupported(alloc::format!("volume in dimension {d}"))),
    }
}
