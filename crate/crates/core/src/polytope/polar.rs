use alloc::vec::Vec;

use super::{Facet, Polytope};
use crate::linalg::{self, norm};
use crate::{Error, Result, ToleranceContext};

/// Polar body `P° = {x : ⟨x, y⟩ ≤ 1 ∀ y ∈ P}`.
///
/// Facet `⟨a, x⟩ ≤ b` of `P` becomes the vertex `a / b`; vertex `v` becomes
/// the facet `⟨v, x⟩ ≤ 1`.
pub fn polar(p: &Polytope, tol: &ToleranceContext) -> Result<Polytope> {
    if !p.origin_is_interior() {
        return Err(Error::OriginNotInterior);
    }
    let vertices: Vec<Vec<f64>> = p.facets().iter().map(|f| linalg::scale(&f.normal, 1.0 / f.offset)).collect();
    let facets: Vec<Facet> = p
        .vertices()
        .iter()
        .map(|v| {
            let n = norm(v);
            Facet { normal: linalg::scale(v, 1.0 / n), offset: 1.0 / n }
        })
        .collect();
    let q = Polytope::from_parts_unchecked(p.dim(), facets, vertices, tol.geom);
    match q.check_invariants() {
        Ok(()) => Ok(q),
        // Degenerate incidences (e.g. near-duplicate facets) fall back to a hull.
        Err(_) => Polytope::from_vertices(q.vertices().to_vec(), tol),
    }
}
