//! Minkowski measure of asymmetry `σ(P) = min { μ : P − q ⊆ −μ (P − q) }`.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{self, dot};
use crate::lp::{solve_lp, LinearProgram, LpStatus, Relation};
use crate::polytope::{polar, Polytope};
use crate::{Error, Result, ToleranceContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Lp,
    Bisection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymmetryResult {
    pub sigma: f64,
    /// A Minkowski center `q`.
    pub center: Vec<f64>,
    pub method: Method,
}

/// `h_P(−a)` for every facet normal, after translating by `-c`.
fn low_support(p: &Polytope, c: &[f64]) -> Vec<f64> {
    p.facets()
        .iter()
        .map(|f| {
            let neg: Vec<f64> = f.normal.iter().map(|x| -x).collect();
            p.h(&neg) + dot(&f.normal, c)
        })
        .collect()
}

/// Single LP: minimize μ subject to `⟨aᵢ, r⟩ − μ bᵢ ≤ min_v ⟨aᵢ, v⟩`, with
/// the center recovered as `q = r / (1 + μ)`.
pub fn sigma_lp(p: &Polytope, tol: &ToleranceContext) -> Result<AsymmetryResult> {
    let d = p.dim();
    let c = p.vertex_centroid();
    let low = low_support(p, &c);
    let mut obj = vec![0.0; d + 1];
    obj[d] = 1.0;
    let mut lp = LinearProgram::new(d + 1).minimize(obj).nonnegative(d);
    for (f, l) in p.facets().iter().zip(&low) {
        let b = f.offset - dot(&f.normal, &c);
        let mut row = f.normal.clone();
        row.push(-b);
        lp.constrain(row, Relation::Le, -l);
    }
    let sol = solve_lp(&lp, tol)?;
    if !sol.is_optimal() {
        return Err(Error::Lp(alloc::format!("asymmetry LP returned {:?}", sol.status)));
    }
    let mu = sol.value;
    let q = linalg::axpy(&c, 1.0 / (1.0 + mu), &sol.x[..d]);
    Ok(AsymmetryResult { sigma: mu.max(1.0), center: q, method: Method::Lp })
}

/// Feasibility of `P − q ⊆ −μ (P − q)` for fixed μ; returns a center.
fn feasible_center(p: &Polytope, c: &[f64], low: &[f64], mu: f64, tol: &ToleranceContext) -> Result<Option<Vec<f64>>> {
    let d = p.dim();
    let mut obj = vec![0.0; d + 1];
    obj[d] = 1.0;
    let mut lp = LinearProgram::new(d + 1).maximize(obj);
    for (f, l) in p.facets().iter().zip(low) {
        let b = f.offset - dot(&f.normal, c);
        let mut row = linalg::scale(&f.normal, 1.0 + mu);
        row.push(1.0);
        lp.constrain(row, Relation::Le, mu * b - l);
    }
    let mut cap = vec![0.0; d + 1];
    cap[d] = 1.0;
    lp.constrain(cap, Relation::Le, 1.0);
    let sol = solve_lp(&lp, tol)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Lp(alloc::format!("feasibility LP returned {:?}", sol.status)));
    }
    Ok((sol.value >= -tol.lp).then(|| linalg::add(&sol.x[..d], c)))
}

/// Bisection on μ ∈ [1, d] with one feasibility LP per step; independent of
/// the linearization used by [`sigma_lp`].
pub fn sigma_bisection(p: &Polytope, tol: &ToleranceContext) -> Result<AsymmetryResult> {
    let d = p.dim() as f64;
    let c = p.vertex_centroid();
    let low = low_support(p, &c);
    if let Some(q) = feasible_center(p, &c, &low, 1.0, tol)? {
        return Ok(AsymmetryResult { sigma: 1.0, center: q, method: Method::Bisection });
    }
    let (mut lo, mut hi) = (1.0, d * (1.0 + 1e-9));
    let mut best = feasible_center(p, &c, &low, hi, tol)?.ok_or_else(|| Error::Lp("σ exceeds d".into()))?;
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        match feasible_center(p, &c, &low, mid, tol)? {
            Some(q) => {
                hi = mid;
                best = q;
            }
            None => lo = mid,
        }
    }
    Ok(AsymmetryResult { sigma: hi, center: best, method: Method::Bisection })
}

/// Smallest μ with `P − q ⊆ −μ (P − q)` for the given center.
pub fn asymmetry_at(p: &Polytope, q: &[f64]) -> Result<f64> {
    let k = p.translate(&linalg::scale(q, -1.0));
    if !k.origin_is_interior() {
        return Err(Error::OriginNotInterior);
    }
    Ok(k.vertices().iter().map(|v| k.gauge_unchecked(&linalg::scale(v, -1.0))).fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarCheck {
    pub passed: bool,
    /// Smallest μ with `(P − q)° ⊆ −μ (P − q)°`.
    pub polar_sigma: f64,
    pub sigma: f64,
}

/// Recomputes σ through the polar body at the LP's Minkowski center.
pub fn polar_sigma_check(p: &Polytope, tol: &ToleranceContext) -> Result<PolarCheck> {
    let res = sigma_lp(p, tol)?;
    let k = p.translate(&linalg::scale(&res.center, -1.0));
    let kp = polar(&k, tol)?;
    let polar_sigma = kp.vertices().iter().map(|w| kp.gauge_unchecked(&linalg::scale(w, -1.0))).fold(0.0, f64::max);
    let contained = kp.vertices().iter().all(|w| kp.gauge_unchecked(&linalg::scale(w, -1.0)) <= res.sigma * (1.0 + 1e-7));
    Ok(PolarCheck { passed: contained && (polar_sigma - res.sigma).abs() <= 1e-6, polar_sigma, sigma: res.sigma })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BmReport {
    pub sigma: f64,
    /// `d − σ`, clamped at 0.
    pub eps: f64,
    /// `1 + 8(d+1)·eps` when `eps < 1/(8(d+1))`.
    pub bound: Option<f64>,
}

/// Banach–Mazur distance bound to a simplex implied by near-maximal asymmetry.
pub fn bm_bound_report(p: &Polytope, tol: &ToleranceContext) -> Result<BmReport> {
    let d = p.dim() as f64;
    let sigma = sigma_lp(p, tol)?.sigma;
    let eps = (d - sigma).max(0.0);
    let bound = (eps < 1.0 / (8.0 * (1.0 + d))).then(|| 1.0 + 8.0 * (d + 1.0) * eps);
    Ok(BmReport { sigma, eps, bound })
}
