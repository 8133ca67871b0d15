//! Conversions between the facet and vertex descriptions.

use alloc::vec;
use alloc::vec::Vec;

use super::{Facet, Polytope};
use crate::linalg::{self, dot, norm, Matrix};
use crate::lp::{solve_lp, LinearProgram, LpStatus, Relation};
use crate::{Error, Result, ToleranceContext};

/// Above this many candidate hyperplanes, non-extreme points are dropped by LP first.
const PREFILTER_THRESHOLD: u128 = 200_000;

fn scale_of(points: &[Vec<f64>]) -> f64 {
    points.iter().map(|p| norm(p)).fold(0.0, f64::max)
}

fn dedup_points(points: Vec<Vec<f64>>, eps: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|q| linalg::max_abs_diff(&p, q) <= eps) {
            out.push(p);
        }
    }
    out
}

fn dedup_facets(facets: Vec<Facet>, eps: f64) -> Vec<Facet> {
    let mut out: Vec<Facet> = Vec::with_capacity(facets.len());
    for f in facets {
        let dup = out
            .iter()
            .any(|g| linalg::max_abs_diff(&f.normal, &g.normal) <= 1e-9 && (f.offset - g.offset).abs() <= eps);
        if !dup {
            out.push(f);
        }
    }
    out
}

/// Checks that `{x : Ax ≤ b}` is bounded with nonempty interior.
fn check_proper(dim: usize, facets: &[Facet], tol: &ToleranceContext) -> Result<()> {
    // Chebyshev-style interior test: maximize s with ⟨aᵢ, x⟩ + s ≤ bᵢ, s ≤ 1.
    let mut lp = LinearProgram::new(dim + 1).maximize({
        let mut c = vec![0.0; dim + 1];
        c[dim] = 1.0;
        c
    });
    for f in facets {
        let mut row = f.normal.clone();
        row.push(1.0);
        lp.constrain(row, Relation::Le, f.offset);
    }
    let mut cap = vec![0.0; dim + 1];
    cap[dim] = 1.0;
    lp.constrain(cap, Relation::Le, 1.0);
    let sol = solve_lp(&lp, tol)?;
    match sol.status {
        LpStatus::Optimal if sol.value > tol.geom => {}
        _ => return Err(Error::NotFullDimensional),
    }
    // Bounded iff every coordinate direction has a finite maximum.
    for j in 0..dim {
        for s in [1.0, -1.0] {
            let mut c = vec![0.0; dim];
            c[j] = s;
            let mut lp = LinearProgram::new(dim).maximize(c);
            for f in facets {
                lp.constrain(f.normal.clone(), Relation::Le, f.offset);
            }
            if solve_lp(&lp, tol)?.status == LpStatus::Unbounded {
                return Err(Error::Unbounded);
            }
        }
    }
    Ok(())
}

/// Vertex enumeration by intersecting every d-subset of facet hyperplanes,
/// followed by removal of redundant inequalities.
pub fn vertices_from_facets(dim: usize, facets: Vec<Facet>, tol: &ToleranceContext) -> Result<Polytope> {
    if dim == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    if let Some(f) = facets.iter().find(|f| f.normal.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: f.normal.len() });
    }
    let facets: Vec<Facet> = facets.into_iter().map(|f| Facet::new(f.normal, f.offset)).collect::<Result<_>>()?;
    if facets.len() <= dim {
        return Err(Error::Unbounded);
    }
    check_proper(dim, &facets, tol)?;

    let off_scale = facets.iter().map(|f| f.offset.abs()).fold(0.0, f64::max);
    let eps = tol.geom * (1.0 + off_scale);
    let mut verts: Vec<Vec<f64>> = Vec::new();
    linalg::for_each_combination(facets.len(), dim, |idx| {
        let rows: Vec<Vec<f64>> = idx.iter().map(|&i| facets[i].normal.clone()).collect();
        let rhs: Vec<f64> = idx.iter().map(|&i| facets[i].offset).collect();
        if let Some(x) = Matrix::from_rows(&rows).solve(&rhs, 1e-10) {
            if facets.iter().all(|f| f.eval(&x) <= eps) && !verts.iter().any(|v| linalg::max_abs_diff(v, &x) <= eps) {
                verts.push(x);
            }
        }
        true
    });
    let eps = tol.geom * (1.0 + scale_of(&verts));
    let mut kept = Vec::new();
    for f in facets {
        let tight: Vec<Vec<f64>> = verts.iter().filter(|v| f.eval(v).abs() <= eps).cloned().collect();
        if tight.len() >= dim && linalg::affine_rank(&tight, 1e-9) >= dim - 1 {
            kept.push(f);
        }
    }
    let kept = dedup_facets(kept, eps);
    Ok(Polytope::from_parts_unchecked(dim, kept, verts, tol.geom))
}

/// Whether `p` is a vertex of `conv(points)`: no convex combination of the
/// other points reproduces it.
fn is_extreme(points: &[Vec<f64>], k: usize, tol: &ToleranceContext) -> Result<bool> {
    let others: Vec<&Vec<f64>> = points.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, p)| p).collect();
    let d = points[k].len();
    let mut lp = LinearProgram::new(others.len()).all_nonnegative();
    for j in 0..d {
        lp.constrain(others.iter().map(|p| p[j]).collect(), Relation::Eq, points[k][j]);
    }
    lp.constrain(vec![1.0; others.len()], Relation::Eq, 1.0);
    Ok(solve_lp(&lp, tol)?.status != LpStatus::Optimal)
}

/// Convex hull of a finite point set.
pub fn facets_from_vertices(points: Vec<Vec<f64>>, tol: &ToleranceContext) -> Result<Polytope> {
    let dim = points.first().map(Vec::len).ok_or_else(|| Error::invalid("empty point set"))?;
    if dim == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
    }
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::invalid("non-finite coordinate"));
    }
    let eps = tol.geom * (1.0 + scale_of(&points));
    let mut points = dedup_points(points, eps);
    if linalg::affine_rank(&points, 1e-9) < dim {
        return Err(Error::NotFullDimensional);
    }
    match dim {
        1 => {
            let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            let facets = vec![Facet { normal: vec![1.0], offset: hi }, Facet { normal: vec![-1.0], offset: -lo }];
            Ok(Polytope::from_parts_unchecked(1, facets, vec![vec![lo], vec![hi]], tol.geom))
        }
        2 => Ok(planar_hull(points, eps, tol.geom)),
        _ => {
            if linalg::binomial(points.len(), dim) > PREFILTER_THRESHOLD {
                let mut k = 0;
                while k < points.len() {
                    if is_extreme(&points, k, tol)? {
                        k += 1;
                    } else {
                        points.swap_remove(k);
                    }
                }
            }
            Ok(brute_hull(dim, points, eps, tol.geom))
        }
    }
}

fn cross(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain; collinear boundary points are dropped.
fn planar_hull(mut pts: Vec<Vec<f64>>, eps: f64, tol: f64) -> Polytope {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut hull: Vec<Vec<f64>> = Vec::with_capacity(pts.len() + 1);
    let left = |h: &Vec<Vec<f64>>, p: &Vec<f64>| {
        let n = h.len();
        let (o, a) = (&h[n - 2], &h[n - 1]);
        let len = linalg::dist(o, p).max(1e-300);
        cross(o, a, p) / len > eps
    };
    for p in &pts {
        while hull.len() >= 2 && !left(&hull, p) {
            hull.pop();
        }
        hull.push(p.clone());
    }
    let lower = hull.len() + 1;
    for p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && !left(&hull, p) {
            hull.pop();
        }
        hull.push(p.clone());
    }
    hull.pop();
    let n = hull.len();
    let facets = (0..n)
        .map(|i| {
            let (a, b) = (&hull[i], &hull[(i + 1) % n]);
            let normal = [b[1] - a[1], a[0] - b[0]];
            let l = libm::hypot(normal[0], normal[1]);
            let normal = vec![normal[0] / l, normal[1] / l];
            let offset = dot(&normal, a);
            Facet { normal, offset }
        })
        .collect();
    Polytope::from_parts_unchecked(2, facets, hull, tol)
}

/// Supporting hyperplanes through every affinely independent d-subset.
fn brute_hull(dim: usize, points: Vec<Vec<f64>>, eps: f64, tol: f64) -> Polytope {
    let mut facets: Vec<Facet> = Vec::new();
    linalg::for_each_combination(points.len(), dim, |idx| {
        let sub: Vec<Vec<f64>> = idx.iter().map(|&i| points[i].clone()).collect();
        let Some(n) = linalg::hyperplane_normal(&sub, 1e-10) else { return true };
        let b = dot(&n, &sub[0]);
        let (mut above, mut below) = (false, false);
        for p in &points {
            let s = dot(&n, p) - b;
            above |= s > eps;
            below |= s < -eps;
            if above && below {
                return true;
            }
        }
        let f = if above { Facet { normal: linalg::scale(&n, -1.0), offset: -b } } else { Facet { normal: n, offset: b } };
        if !facets
            .iter()
            .any(|g| linalg::max_abs_diff(&f.normal, &g.normal) <= 1e-7 && (f.offset - g.offset).abs() <= eps * 10.0)
        {
            facets.push(f);
        }
        true
    });
    // Keep only facets whose tight set spans a (d-1)-flat, then vertices tight on d independent facets.
    let facets: Vec<Facet> = facets
        .into_iter()
        .filter(|f| {
            let tight: Vec<Vec<f64>> = points.iter().filter(|p| f.eval(p).abs() <= eps).cloned().collect();
            linalg::affine_rank(&tight, 1e-9) >= dim - 1
        })
        .collect();
    let vertices: Vec<Vec<f64>> = points
        .into_iter()
        .filter(|p| {
            let normals: Vec<Vec<f64>> = facets.iter().filter(|f| f.eval(p).abs() <= eps).map(|f| f.normal.clone()).collect();
            linalg::rank(&normals, 1e-9) == dim
        })
        .collect();
    Polytope::from_parts_unchecked(dim, facets, vertices, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tc() -> ToleranceContext {
        ToleranceContext::default()
    }

    #[test]
    fn square_from_facets() {
        let fs = vec![
            Facet { normal: vec![1.0, 0.0], offset: 1.0 },
            Facet { normal: vec![-1.0, 0.0], offset: 1.0 },
            Facet { normal: vec![0.0, 1.0], offset: 1.0 },
            Facet { normal: vec![0.0, -1.0], offset: 1.0 },
            Facet { normal: vec![1.0, 1.0], offset: 5.0 },
        ];
        let p = Polytope::from_facets(2, fs, &tc()).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.facets().len(), 4);
    }

    #[test]
    fn unbounded_and_degenerate_inputs() {
        let half = vec![
            Facet { normal: vec![1.0, 0.0], offset: 1.0 },
            Facet { normal: vec![0.0, 1.0], offset: 1.0 },
            Facet { normal: vec![0.0, -1.0], offset: 1.0 },
        ];
        assert_eq!(Polytope::from_facets(2, half, &tc()), Err(Error::Unbounded));
        let flat = vec![
            Facet { normal: vec![1.0, 0.0], offset: 0.0 },
            Facet { normal: vec![-1.0, 0.0], offset: 0.0 },
            Facet { normal: vec![0.0, 1.0], offset: 1.0 },
            Facet { normal: vec![0.0, -1.0], offset: 1.0 },
        ];
        assert_eq!(Polytope::from_facets(2, flat, &tc()), Err(Error::NotFullDimensional));
        let line = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        assert_eq!(Polytope::from_vertices(line, &tc()), Err(Error::NotFullDimensional));
    }

    #[test]
    fn interior_points_removed() {
        let pts = vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![2.0, 2.0], vec![0.0, 2.0], vec![1.0, 1.0], vec![1.0, 0.0]];
        let p = Polytope::from_vertices(pts, &tc()).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.facets().len(), 4);
        p.check_invariants().unwrap();
    }

    #[test]
    fn cube_hull_in_3d() {
        let mut pts = Polytope::cube(3, 1.0).vertices().to_vec();
        pts.push(vec![0.0, 0.0, 0.0]);
        pts.push(vec![1.0, 0.0, 0.0]);
        let p = Polytope::from_vertices(pts, &tc()).unwrap();
        assert_eq!(p.vertices().len(), 8);
        assert_eq!(p.facets().len(), 6);
    }

    #[test]
    fn round_trip_cross_polytope() {
        let c = Polytope::cross_polytope(3, 1.0);
        let p = Polytope::from_facets(3, c.facets().to_vec(), &tc()).unwrap();
        assert_eq!(p.vertices().len(), 6);
        let q = Polytope::from_vertices(c.vertices().to_vec(), &tc()).unwrap();
        assert_eq!(q.facets().len(), 8);
    }
}
