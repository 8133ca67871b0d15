//! Generic polytopes (every d facet normals independent), perturbation into
//! generic position, and circumscribed simplices.

use alloc::vec::Vec;

use rand::Rng;

use super::{Facet, Polytope};
use crate::linalg::{self, dot};
use crate::random::unit_vector;
use crate::{Error, Result, ToleranceContext};

const MAX_ATTEMPTS: usize = 1000;

/// Whether every d-subset of facet normals has rank d.
pub fn is_generic(p: &Polytope, tol: &ToleranceContext) -> bool {
    let d = p.dim();
    let normals: Vec<Vec<f64>> = p.facets().iter().map(|f| f.normal.clone()).collect();
    let mut ok = true;
    linalg::for_each_combination(normals.len(), d, |idx| {
        let m = linalg::Matrix::from_rows(&idx.iter().map(|&i| normals[i].clone()).collect::<Vec<_>>());
        ok = m.det().abs() > tol.geom.max(1e-12) * 10.0;
        ok
    });
    ok
}

/// Output of [`genericize`].
#[derive(Debug, Clone, PartialEq)]
pub struct Genericized {
    pub polytope: Polytope,
    /// Empirical constant with `P ⊆ P′ ⊆ (1 + c·eps) P`.
    pub c: f64,
    /// Largest angle between an original and a perturbed normal.
    pub max_angle: f64,
    pub attempts: usize,
}

/// Rotates every facet normal by at most `eps` radians and refits offsets so
/// the result contains `p`, retrying until the perturbed polytope is generic
/// and keeps all facets.
pub fn genericize<R: Rng + ?Sized>(p: &Polytope, eps: f64, rng: &mut R, tol: &ToleranceContext) -> Result<Genericized> {
    if !(eps > 0.0 && eps < 0.1) {
        return Err(Error::invalid("genericize requires 0 < eps < 0.1"));
    }
    if !p.origin_is_interior() {
        return Err(Error::OriginNotInterior);
    }
    let d = p.dim();
    let scale = p.facets().iter().map(|f| f.offset).fold(f64::INFINITY, f64::min);
    for attempt in 1..=MAX_ATTEMPTS {
        let mut facets = Vec::with_capacity(p.facets().len());
        let mut max_angle: f64 = 0.0;
        for f in p.facets() {
            // Random unit direction perpendicular to the normal.
            let w = loop {
                let r = unit_vector(rng, d);
                let w = linalg::axpy(&r, -dot(&r, &f.normal), &f.normal);
                if let Some(w) = linalg::normalized(&w) {
                    break w;
                }
            };
            let theta = eps * rng.random_range(0.1..1.0);
            max_angle = max_angle.max(theta);
            let n = linalg::add(&linalg::scale(&f.normal, libm::cos(theta)), &linalg::scale(&w, libm::sin(theta)));
            let offset = p.h(&n) + eps * scale;
            facets.push(Facet::new(n, offset)?);
        }
        let q = match Polytope::from_facets(d, facets, tol) {
            Ok(q) => q,
            Err(_) => continue,
        };
        if q.facets().len() != p.facets().len() || !is_generic(&q, tol) {
            continue;
        }
        let lambda = q.vertices().iter().map(|v| p.gauge_unchecked(v)).fold(1.0, f64::max);
        return Ok(Genericized { polytope: q, c: (lambda - 1.0) / eps, max_angle, attempts: attempt });
    }
    Err(Error::GenericizationFailed(MAX_ATTEMPTS))
}

/// All circumscribed simplices cut out by d + 1 facet halfspaces of a
/// generic polytope.
///
/// For generic normals the d + 1 chosen normals have a one-dimensional
/// linear dependence; the intersection of the halfspaces is bounded exactly
/// when that dependence has all coefficients of one strict sign.
pub fn circumscribed_simplices(p: &Polytope, tol: &ToleranceContext) -> Result<Vec<Polytope>> {
    if !is_generic(p, tol) {
        return Err(Error::NotGeneric);
    }
    let d = p.dim();
    let facets = p.facets();
    let mut out = Vec::new();
    let mut err = None;
    linalg::for_each_combination(facets.len(), d + 1, |idx| {
        // Rows of the d × (d+1) matrix whose columns are the chosen normals.
        let rows: Vec<Vec<f64>> = (0..d).map(|j| idx.iter().map(|&i| facets[i].normal[j]).collect()).collect();
        let Some(c) = linalg::nullspace_vector(&rows, d + 1, 1e-12) else { return true };
        let thr = 1e-9;
        if c.iter().all(|&x| x > thr) || c.iter().all(|&x| x < -thr) {
            match Polytope::from_facets(d, idx.iter().map(|&i| facets[i].clone()).collect(), tol) {
                Ok(s) => out.push(s),
                Err(e) => {
                    err = Some(e);
                    return false;
                }
            }
        }
        true
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::rng_from_seed;

    #[test]
    fn generic_examples() {
        let tc = ToleranceContext::default();
        assert!(!is_generic(&Polytope::cube(2, 1.0), &tc));
        assert!(is_generic(&Polytope::standard_simplex(2), &tc));
        assert!(!is_generic(&Polytope::regular_polygon(6, 1.0, 0.0).unwrap(), &tc));
        assert!(is_generic(&Polytope::regular_polygon(5, 1.0, 0.0).unwrap(), &tc));
    }

    #[test]
    fn genericized_square() {
        let tc = ToleranceContext::default();
        let sq = Polytope::cube(2, 1.0);
        let g = genericize(&sq, 0.01, &mut rng_from_seed(7), &tc).unwrap();
        assert!(is_generic(&g.polytope, &tc));
        assert_eq!(g.polytope.facets().len(), 4);
        assert!(g.max_angle <= 0.01);
        for f in g.polytope.facets() {
            let best = sq.facets().iter().map(|h| dot(&h.normal, &f.normal)).fold(-1.0, f64::max);
            assert!(libm::acos(best.min(1.0)) <= 0.01 + 1e-12);
        }
        assert!(sq.vertices().iter().all(|v| g.polytope.contains_point(v, 1e-9)));
        assert!(g.c.is_finite() && g.c >= 0.0);
    }

    #[test]
    fn genericized_cube_contains_cube() {
        let tc = ToleranceContext::default();
        let cube = Polytope::cube(3, 1.0);
        let g = genericize(&cube, 0.02, &mut rng_from_seed(3), &tc).unwrap();
        assert_eq!(g.polytope.facets().len(), 6);
        assert!(is_generic(&g.polytope, &tc));
        assert!(crate::polytope::contains_translate(&g.polytope, &cube, &tc).unwrap().is_some());
    }

    #[test]
    fn simplex_counts() {
        let tc = ToleranceContext::default();
        let tri = Polytope::standard_simplex(2);
        assert_eq!(circumscribed_simplices(&tri, &tc).unwrap().len(), 1);
        let tet = Polytope::standard_simplex(3);
        assert_eq!(circumscribed_simplices(&tet, &tc).unwrap().len(), 1);
        assert_eq!(circumscribed_simplices(&Polytope::cube(2, 1.0), &tc), Err(Error::NotGeneric));
    }

    #[test]
    fn quadrilateral_simplices_match_brute_force() {
        let tc = ToleranceContext::default();
        let g = genericize(&Polytope::cube(2, 1.0), 0.05, &mut rng_from_seed(11), &tc).unwrap().polytope;
        let simplices = circumscribed_simplices(&g, &tc).unwrap();
        // Oracle: a 3-subset is bounded iff maximizing ±x, ±y stays finite.
        let mut bounded = 0;
        linalg::for_each_combination(4, 3, |idx| {
            let fs: Vec<Facet> = idx.iter().map(|&i| g.facets()[i].clone()).collect();
            if Polytope::from_facets(2, fs, &tc).is_ok() {
                bounded += 1;
            }
            true
        });
        assert_eq!(simplices.len(), bounded);
        for s in &simplices {
            assert!(g.vertices().iter().all(|v| s.contains_point(v, 1e-9)));
        }
    }
}
