//! Covering a family `⋃ (xᵢ + τᵢ P)` by a single homothet `t + λ (Σ τᵢ) P`,
//! plus the edge-face summand test.

use alloc::vec;
use alloc::vec::Vec;

use crate::asymmetry::AsymmetryResult;
use crate::linalg::{self, dot, norm};
use crate::lp::{solve_lp, LinearProgram, LpStatus, Relation};
use crate::polytope::{circumscribed_simplices, contains_translate, is_generic, Polytope};
use crate::separability::{largest_gap, HomotheticFamily, Interval};
use crate::{Error, Result, ToleranceContext};

/// Known lower bound `2/3 + 2/(3√3)` for the planar simplex covering ratio;
/// kept for report context only.
pub const LAMBDA_SIMPLEX_PLANAR_LOWER: f64 = 1.051_566_846_126_417_2;

#[derive(Debug, Clone, PartialEq)]
pub struct CoverResult {
    pub t: Vec<f64>,
    pub lambda: f64,
    /// Every member was verified to lie in `t + λ T P`.
    pub certified: bool,
}

/// Cover of a connected union of intervals `[xᵢ − τᵢ, xᵢ + τᵢ]` by the
/// interval of half-width `Σ τᵢ` around the weighted center.
pub fn cover_intervals(intervals: &[(f64, f64)], tol: &ToleranceContext) -> Result<(f64, f64)> {
    if intervals.is_empty() {
        return Err(Error::invalid("no intervals"));
    }
    if intervals.iter().any(|&(x, t)| !(t > 0.0) || !x.is_finite() || !t.is_finite()) {
        return Err(Error::invalid("intervals need finite centers and positive half-widths"));
    }
    let mut ivs: Vec<Interval> = intervals.iter().map(|&(x, t)| Interval { lo: x - t, hi: x + t }).collect();
    let span = ivs.iter().map(|i| i.hi.abs().max(i.lo.abs())).fold(1.0, f64::max);
    if largest_gap(&mut ivs).0 > tol.gap * span {
        return Err(Error::NotNonSeparable);
    }
    let total: f64 = intervals.iter().map(|p| p.1).sum();
    let center = intervals.iter().map(|&(x, t)| t * x).sum::<f64>() / total;
    Ok((center, total))
}

/// Whether every member lies in `t + λ T P` (support comparison on the
/// facet normals of the base).
pub fn covers(f: &HomotheticFamily, t: &[f64], lambda: f64, tol: &ToleranceContext) -> bool {
    let big = lambda * f.total_ratio();
    let scale = 1.0 + norm(t) + big * f.base().vertices().iter().map(|v| norm(v)).fold(0.0, f64::max);
    let eps = tol.lp.max(tol.geom) * scale;
    f.base().facets().iter().all(|fc| {
        let outer = dot(&fc.normal, t) + big * fc.offset;
        f.members().iter().all(|m| dot(&fc.normal, &m.x) + m.tau * fc.offset <= outer + eps)
    })
}

fn weighted_center(f: &HomotheticFamily) -> Vec<f64> {
    let total = f.total_ratio();
    let mut c = vec![0.0; f.dim()];
    for m in f.members() {
        c = linalg::axpy(&c, m.tau / total, &m.x);
    }
    c
}

/// `t = Σ τᵢxᵢ / Σ τᵢ`, `λ = 1` for an origin-symmetric base.
pub fn weighted_cover(f: &HomotheticFamily, tol: &ToleranceContext) -> Result<CoverResult> {
    if !f.base().is_origin_symmetric() {
        return Err(Error::RequiresSymmetricBase);
    }
    if !f.is_wns(tol) {
        return Err(Error::NotNonSeparable);
    }
    let t = weighted_center(f);
    let certified = covers(f, &t, 1.0, tol);
    Ok(CoverResult { t, lambda: 1.0, certified })
}

/// Exact `Λ(𝒫)` by the LP `min λ` s.t. `⟨aᵢ, t⟩ + λ T bᵢ ≥ max_k (⟨aᵢ, xₖ⟩ + τₖ bᵢ)`,
/// solved with the base recentered at its vertex centroid.
pub fn lambda_min(f: &HomotheticFamily, tol: &ToleranceContext) -> Result<CoverResult> {
    let d = f.dim();
    let c = f.base().vertex_centroid();
    let g = f.recentered(&c);
    let total = g.total_ratio();
    let mut obj = vec![0.0; d + 1];
    obj[d] = 1.0;
    let mut lp = LinearProgram::new(d + 1).minimize(obj);
    for fc in g.base().facets() {
        let need = g
            .members()
            .iter()
            .map(|m| dot(&fc.normal, &m.x) + m.tau * fc.offset)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut row = fc.normal.clone();
        row.push(total * fc.offset);
        lp.constrain(row, Relation::Ge, need);
    }
    let sol = solve_lp(&lp, tol)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Lp(alloc::format!("covering LP returned {:?}", sol.status)));
    }
    let lambda = sol.value;
    let t = linalg::axpy(&sol.x[..d], -lambda * total, &c);
    let certified = covers(f, &t, lambda, tol);
    Ok(CoverResult { t, lambda, certified })
}

/// Cover with ratio `(σ + 1)/2` centered at the weighted center of the family
/// rewritten over `P − q`, `q` a Minkowski center of the base.
pub fn sigma_cover(f: &HomotheticFamily, asym: &AsymmetryResult, tol: &ToleranceContext) -> Result<CoverResult> {
    if asym.center.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: asym.center.len() });
    }
    if !f.is_wns(tol) {
        return Err(Error::NotNonSeparable);
    }
    let q = &asym.center;
    let g = f.recentered(q);
    let lambda = 0.5 * (asym.sigma + 1.0);
    let t = linalg::axpy(&weighted_center(&g), -lambda * g.total_ratio(), q);
    let certified = covers(f, &t, lambda, tol);
    Ok(CoverResult { t, lambda, certified })
}

/// Whether `seg = [p, q]` has a translate inside `conv(face)`.
fn face_contains_segment(face: &[Vec<f64>], p: &[f64], q: &[f64], tol: &ToleranceContext) -> Result<bool> {
    let n = face.len();
    let d = p.len();
    let delta = linalg::sub(q, p);
    // Σ βⱼ wⱼ − Σ αⱼ wⱼ = q − p with α, β convex weights.
    let mut lp = LinearProgram::new(2 * n).all_nonnegative();
    for k in 0..d {
        let mut row = vec![0.0; 2 * n];
        for (j, w) in face.iter().enumerate() {
            row[j] = -w[k];
            row[n + j] = w[k];
        }
        lp.constrain(row, Relation::Eq, delta[k]);
    }
    let mut sa = vec![0.0; 2 * n];
    sa[..n].iter_mut().for_each(|x| *x = 1.0);
    lp.constrain(sa, Relation::Eq, 1.0);
    let mut sb = vec![0.0; 2 * n];
    sb[n..].iter_mut().for_each(|x| *x = 1.0);
    lp.constrain(sb, Relation::Eq, 1.0);
    Ok(solve_lp(&lp, tol)?.status == LpStatus::Optimal)
}

/// Edge test for `Q` being a summand of `K`: for each edge `E` of `Q` and `u`
/// in the relative interior of its normal cone, `F(K, u)` must contain a
/// translate of `E`. Returns the first failing `u`.
pub fn summand_failure(q: &Polytope, k: &Polytope, tol: &ToleranceContext) -> Result<Option<Vec<f64>>> {
    if q.dim() != k.dim() {
        return Err(Error::DimensionMismatch { expected: q.dim(), got: k.dim() });
    }
    if q.dim() < 2 {
        return Err(Error::invalid("summand test needs d >= 2"));
    }
    for (i, j) in q.edges() {
        let (a, b) = (&q.vertices()[i], &q.vertices()[j]);
        let through = q.facets_through(&[a, b]);
        let mut u = vec![0.0; q.dim()];
        for &fi in &through {
            u = linalg::add(&u, &q.facets()[fi].normal);
        }
        let u = linalg::normalized(&u).ok_or(Error::NotFullDimensional)?;
        let face = k.face(&u);
        if !face_contains_segment(&face, a, b, tol)? {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

pub fn is_summand(q: &Polytope, k: &Polytope, tol: &ToleranceContext) -> Result<bool> {
    Ok(summand_failure(q, k, tol)?.is_none())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummandReport {
    /// `conv(⋃F)` slides freely in `T·P`.
    pub summand: bool,
    pub failing_direction: Option<Vec<f64>>,
    pub cover: CoverResult,
}

/// Checks that the hull of the family is a summand of `(Σ τᵢ) P` and reports
/// `Λ(𝒫)`. The caller is responsible for the sampled (d−2)-WIP and edge-cover
/// preconditions.
pub fn wip_summand_check(f: &HomotheticFamily, tol: &ToleranceContext) -> Result<SummandReport> {
    let hull = f.hull(tol)?;
    let big = f.base().scale(f.total_ratio());
    let failing_direction = summand_failure(&hull, &big, tol)?;
    Ok(SummandReport { summand: failing_direction.is_none(), failing_direction, cover: lambda_min(f, tol)? })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LutwakReport {
    /// `P` contains a translate of `K`.
    pub contains: bool,
    /// Every circumscribed simplex of `P` contains a translate of `K`.
    pub all_simplices: bool,
    pub simplices: usize,
}

impl LutwakReport {
    pub fn consistent(&self) -> bool {
        self.contains == self.all_simplices
    }
}

/// Evaluates both sides of "P contains a translate of K iff every
/// circumscribed simplex of P does".
pub fn lutwak_check(p: &Polytope, k: &Polytope, tol: &ToleranceContext) -> Result<LutwakReport> {
    if !is_generic(p, tol) {
        return Err(Error::NotGeneric);
    }
    if !p.origin_is_interior() {
        return Err(Error::OriginNotInterior);
    }
    let simplices = circumscribed_simplices(p, tol)?;
    let mut all = true;
    for s in &simplices {
        if contains_translate(s, k, tol)?.is_none() {
            all = false;
            break;
        }
    }
    let contains = contains_translate(p, k, tol)?.is_some();
    Ok(LutwakReport { contains, all_simplices: all, simplices: simplices.len() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityBound {
    pub lambda: f64,
    /// `(d+1)/2 − Λ`, clamped at 0.
    pub eps: f64,
    /// `1 + 16(d+1)·eps` when `eps < 1/(16(d+1))`.
    pub bound: Option<f64>,
}

/// Banach–Mazur bound to a simplex for a WNS family whose covering ratio is
/// close to `(d+1)/2`.
pub fn wns_stability_report(f: &HomotheticFamily, tol: &ToleranceContext) -> Result<StabilityBound> {
    if !f.is_wns(tol) {
        return Err(Error::NotNonSeparable);
    }
    let d = f.dim() as f64;
    let lambda = lambda_min(f, tol)?.lambda;
    let eps = (0.5 * (d + 1.0) - lambda).max(0.0);
    let bound = (eps < 1.0 / (16.0 * (d + 1.0))).then(|| 1.0 + 16.0 * (d + 1.0) * eps);
    Ok(StabilityBound { lambda, eps, bound })
}
