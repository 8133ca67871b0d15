use alloc::vec::Vec;

use super::Polytope;
use crate::lp::{solve_lp, LinearProgram, LpStatus, Relation};
use crate::{Error, Result, ToleranceContext};

/// Finds `t` with `t + B ⊆ A`, i.e. `⟨aᵢ, t⟩ ≤ bᵢ − h_B(aᵢ)` for every facet of `A`.
///
/// Returns `None` when no such translate exists.
pub fn contains_translate(a: &Polytope, b: &Polytope, tol: &ToleranceContext) -> Result<Option<Vec<f64>>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    let d = a.dim();
    // Maximize the uniform slack s so the witness is as central as possible.
    let mut obj = alloc::vec![0.0; d + 1];
    obj[d] = 1.0;
    let mut lp = LinearProgram::new(d + 1).maximize(obj);
    for f in a.facets() {
        let mut row = f.normal.clone();
        row.push(1.0);
        lp.constrain(row, Relation::Le, f.offset - b.h(&f.normal));
    }
    let mut cap = alloc::vec![0.0; d + 1];
    cap[d] = 1.0;
    lp.constrain(cap, Relation::Le, 1.0);
    let sol = solve_lp(&lp, tol)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Lp(alloc::format!("containment LP returned {:?}", sol.status)));
    }
    let r = a.vertices().iter().map(|v| crate::linalg::norm(v)).fold(0.0, f64::max);
    let slack_tol = tol.geom * (1.0 + r);
    if sol.value >= -slack_tol {
        Ok(Some(sol.x[..d].to_vec()))
    } else {
        Ok(None)
    }
}
