//! Non-separability deciders for finite families of positive homothets.
//!
//! Touching members are never separable: a separator needs an open gap wider
//! than the interval-gap tolerance.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::linalg::{self, dot, norm};
use crate::lp::{solve_lp, LinearProgram, LpStatus, Relation};
use crate::polytope::Polytope;
use crate::random;
use crate::{Error, Result, ToleranceContext};

/// Largest family accepted by the exact bipartition scan.
pub const MAX_NS_MEMBERS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) {
            return Err(Error::invalid("interval requires lo <= hi"));
        }
        Ok(Self { lo, hi })
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, other: &Interval, tol: f64) -> bool {
        self.lo <= other.lo + tol && other.hi <= self.hi + tol
    }
}

/// Largest uncovered gap inside the hull of a set of intervals, with its
/// midpoint; `(0, NaN)` when the union is connected.
pub fn largest_gap(intervals: &mut [Interval]) -> (f64, f64) {
    intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut reach = f64::NEG_INFINITY;
    let (mut best, mut mid) = (0.0, f64::NAN);
    for iv in intervals.iter() {
        if reach > f64::NEG_INFINITY && iv.lo - reach > best {
            best = iv.lo - reach;
            mid = 0.5 * (iv.lo + reach);
        }
        reach = reach.max(iv.hi);
    }
    (best, mid)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub x: Vec<f64>,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomotheticFamily {
    base: Polytope,
    members: Vec<Member>,
}

/// A facet-parallel hyperplane direction together with the open gap it finds.
#[derive(Debug, Clone, PartialEq)]
pub struct GapWitness {
    pub direction: Vec<f64>,
    pub gap: f64,
    /// Value of `⟨direction, ·⟩` in the middle of the gap.
    pub level: f64,
}

/// Two nonempty index sets whose member hulls are disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// The affine flat `point + span(basis)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Flat {
    pub point: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KwipReport {
    /// A facet-parallel k-flat through the hull that misses every member.
    pub witness: Option<Flat>,
    pub samples: usize,
    /// Whether the verdict came from the exact WNS test (k = d − 1).
    pub exact: bool,
}

impl KwipReport {
    pub fn falsified(&self) -> bool {
        self.witness.is_some()
    }
}

impl HomotheticFamily {
    pub fn new(base: Polytope, members: Vec<Member>) -> Result<Self> {
        if members.len() < 2 {
            return Err(Error::invalid("a family needs at least two members"));
        }
        let d = base.dim();
        for m in &members {
            if m.x.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: m.x.len() });
            }
            if !(m.tau > 0.0) || !m.tau.is_finite() || m.x.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid("members need finite translations and positive ratios"));
            }
        }
        Ok(Self { base, members })
    }

    /// Family of translates (all ratios 1).
    pub fn translates(base: Polytope, xs: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(base, xs.into_iter().map(|x| Member { x, tau: 1.0 }).collect())
    }

    pub fn base(&self) -> &Polytope {
        &self.base
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// `T = Σ τᵢ`.
    pub fn total_ratio(&self) -> f64 {
        self.members.iter().map(|m| m.tau).sum()
    }

    /// `xᵢ + τᵢ P`.
    pub fn member(&self, i: usize) -> Result<Polytope> {
        let m = self.members.get(i).ok_or(Error::IndexOutOfRange { index: i, len: self.len() })?;
        Ok(self.base.homothet(&m.x, m.tau))
    }

    pub fn member_vertices(&self, i: usize) -> Vec<Vec<f64>> {
        let m = &self.members[i];
        self.base.vertices().iter().map(|v| linalg::axpy(&m.x, m.tau, v)).collect()
    }

    pub fn all_vertices(&self) -> Vec<Vec<f64>> {
        (0..self.len()).flat_map(|i| self.member_vertices(i)).collect()
    }

    /// `conv(⋃ F)`.
    pub fn hull(&self, tol: &ToleranceContext) -> Result<Polytope> {
        Polytope::from_vertices(self.all_vertices(), tol)
    }

    /// The same sets described over the base `P − c`.
    pub fn recentered(&self, c: &[f64]) -> Self {
        let base = self.base.translate(&linalg::scale(c, -1.0));
        let members = self.members.iter().map(|m| Member { x: linalg::axpy(&m.x, m.tau, c), tau: m.tau }).collect();
        Self { base, members }
    }

    /// Applies `y ↦ s·y + t` to every member.
    pub fn transformed(&self, s: f64, t: &[f64]) -> Self {
        let members = self
            .members
            .iter()
            .map(|m| Member { x: linalg::add(&linalg::scale(&m.x, s), t), tau: m.tau * s })
            .collect();
        Self { base: self.base.clone(), members }
    }

    pub fn with_base(&self, base: Polytope) -> Result<Self> {
        Self::new(base, self.members.clone())
    }

    /// Bounding scale used to make gap thresholds relative.
    fn scale(&self) -> f64 {
        let r = self.base.vertices().iter().map(|v| norm(v)).fold(0.0, f64::max);
        self.members.iter().map(|m| norm(&m.x) + m.tau * r).fold(1.0, f64::max)
    }

    /// Projection of member `i` onto the line spanned by unit `u`.
    pub fn project_member(&self, i: usize, u: &[f64]) -> Result<Interval> {
        let m = self.members.get(i).ok_or(Error::IndexOutOfRange { index: i, len: self.len() })?;
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: u.len() });
        }
        Ok(self.project_unchecked(m, u))
    }

    fn project_unchecked(&self, m: &Member, u: &[f64]) -> Interval {
        let c = dot(u, &m.x);
        let neg: Vec<f64> = u.iter().map(|v| -v).collect();
        Interval { lo: c - m.tau * self.base.h(&neg), hi: c + m.tau * self.base.h(u) }
    }

    pub fn projections(&self, u: &[f64]) -> Vec<Interval> {
        self.members.iter().map(|m| self.project_unchecked(m, u)).collect()
    }

    /// Largest gap in the union of the projections onto `u`.
    pub fn projection_gap(&self, u: &[f64]) -> (f64, f64) {
        largest_gap(&mut self.projections(u))
    }

    /// One representative per pair of opposite facet normals.
    pub fn facet_directions(&self) -> Vec<Vec<f64>> {
        let mut dirs: Vec<Vec<f64>> = Vec::new();
        for f in self.base.facets() {
            let dup = dirs.iter().any(|u| {
                let c = dot(u, &f.normal);
                (c.abs() - 1.0).abs() <= 1e-12
            });
            if !dup {
                dirs.push(f.normal.clone());
            }
        }
        dirs
    }

    /// A facet-parallel separating gap, or `None` if the family is WNS.
    pub fn wns_witness(&self, tol: &ToleranceContext) -> Option<GapWitness> {
        let thr = tol.gap * self.scale();
        self.facet_directions().into_iter().find_map(|u| {
            let (gap, level) = self.projection_gap(&u);
            (gap > thr).then_some(GapWitness { direction: u, gap, level })
        })
    }

    pub fn is_wns(&self, tol: &ToleranceContext) -> bool {
        self.wns_witness(tol).is_none()
    }

    /// Exact NS decision by scanning bipartitions; `Some` returns a strictly
    /// separable split.
    pub fn ns_witness(&self, tol: &ToleranceContext) -> Result<Option<Bipartition>> {
        let n = self.len();
        if n > MAX_NS_MEMBERS {
            return Err(Error::FamilyTooLarge(n));
        }
        let verts: Vec<Vec<Vec<f64>>> = (0..n).map(|i| self.member_vertices(i)).collect();
        let thr = tol.gap * self.scale();
        // Member 0 always sits on the left; masks select the right side.
        for mask in 1u32..(1u32 << (n - 1)) {
            let right: Vec<usize> = (1..n).filter(|&i| mask >> (i - 1) & 1 == 1).collect();
            let left: Vec<usize> = (0..n).filter(|&i| i == 0 || mask >> (i - 1) & 1 == 0).collect();
            let a: Vec<&Vec<f64>> = left.iter().flat_map(|&i| verts[i].iter()).collect();
            let b: Vec<&Vec<f64>> = right.iter().flat_map(|&i| verts[i].iter()).collect();
            if hull_distance(&a, &b, tol)? > thr {
                return Ok(Some(Bipartition { left, right }));
            }
        }
        Ok(None)
    }

    pub fn is_ns(&self, tol: &ToleranceContext) -> Result<bool> {
        Ok(self.ns_witness(tol)?.is_none())
    }

    /// Monte-Carlo search for a facet-parallel `k`-flat meeting the hull but
    /// no member. For `k = d − 1` the exact WNS test is used instead.
    pub fn kwip_sampled<R: Rng + ?Sized>(&self, k: usize, samples: usize, rng: &mut R, tol: &ToleranceContext) -> Result<KwipReport> {
        let d = self.dim();
        if k >= d {
            return Err(Error::invalid("k must satisfy 0 <= k <= d - 1"));
        }
        if samples == 0 {
            return Err(Error::invalid("at least one sample is required"));
        }
        if k + 1 == d {
            let witness = self.wns_witness(tol).map(|w| Flat {
                point: linalg::scale(&w.direction, w.level),
                basis: complement(&w.direction),
            });
            return Ok(KwipReport { witness, samples: 0, exact: true });
        }
        let hull = self.hull(tol)?;
        let members: Vec<Polytope> = (0..self.len()).map(|i| self.member(i)).collect::<Result<_>>()?;
        let eps = tol.geom * self.scale();
        let facets = self.base.facets();
        for _ in 0..samples {
            let a = &facets[rng.random_range(0..facets.len())].normal;
            let basis = random::random_frame(rng, &complement(a), k);
            let point = random::point_in(rng, &hull);
            let mut hit = false;
            for m in &members {
                if flat_meets(m, &point, &basis, eps, tol)? {
                    hit = true;
                    break;
                }
            }
            if !hit {
                return Ok(KwipReport { witness: Some(Flat { point, basis }), samples, exact: false });
            }
        }
        Ok(KwipReport { witness: None, samples, exact: false })
    }

    /// Checks that every edge of `conv(⋃F)` is covered by the union; returns
    /// the midpoint of the first uncovered piece.
    pub fn edges_covered(&self, tol: &ToleranceContext) -> Result<Option<Vec<f64>>> {
        if self.dim() < 2 {
            return Err(Error::invalid("edge cover needs d >= 2"));
        }
        let hull = self.hull(tol)?;
        let members: Vec<Polytope> = (0..self.len()).map(|i| self.member(i)).collect::<Result<_>>()?;
        let eps = tol.geom * self.scale();
        for (i, j) in hull.edges() {
            let (p, q) = (&hull.vertices()[i], &hull.vertices()[j]);
            let dir = linalg::sub(q, p);
            let len = norm(&dir);
            let mut pieces: Vec<Interval> = members.iter().filter_map(|m| clip_line(m, p, &dir, eps)).collect();
            pieces.push(Interval { lo: f64::NEG_INFINITY, hi: 0.0 });
            pieces.push(Interval { lo: 1.0, hi: f64::INFINITY });
            let (gap, mid) = largest_gap(&mut pieces);
            if gap * len > tol.gap * self.scale() {
                return Ok(Some(linalg::axpy(p, mid, &dir)));
            }
        }
        Ok(None)
    }
}

/// Orthonormal basis of the hyperplane `u^⊥`.
pub fn complement(u: &[f64]) -> Vec<Vec<f64>> {
    let d = u.len();
    let mut vs = vec![u.to_vec()];
    for j in 0..d {
        let mut e = vec![0.0; d];
        e[j] = 1.0;
        vs.push(e);
    }
    let mut b = linalg::gram_schmidt(&vs, 1e-9);
    b.remove(0);
    b
}

/// Parameter range `{t : p + t·dir ∈ P}` (within `eps`), if nonempty.
fn clip_line(p: &Polytope, x: &[f64], dir: &[f64], eps: f64) -> Option<Interval> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for f in p.facets() {
        let a = dot(&f.normal, dir);
        let s = f.offset + eps - dot(&f.normal, x);
        if a.abs() <= 1e-15 {
            if s < 0.0 {
                return None;
            }
        } else if a > 0.0 {
            hi = hi.min(s / a);
        } else {
            lo = lo.max(s / a);
        }
    }
    (lo <= hi).then_some(Interval { lo, hi })
}

/// Whether `point + span(basis)` meets `p` (within `eps`).
pub fn flat_meets(p: &Polytope, point: &[f64], basis: &[Vec<f64>], eps: f64, tol: &ToleranceContext) -> Result<bool> {
    match basis.len() {
        0 => Ok(p.contains_point(point, eps)),
        1 => Ok(clip_line(p, point, &basis[0], eps).is_some()),
        k => {
            let mut lp = LinearProgram::new(k);
            for f in p.facets() {
                let row = basis.iter().map(|b| dot(&f.normal, b)).collect();
                lp.constrain(row, Relation::Le, f.offset + eps - dot(&f.normal, point));
            }
            Ok(solve_lp(&lp, tol)?.status == LpStatus::Optimal)
        }
    }
}

/// ∞-norm distance between `conv(a)` and `conv(b)`.
pub fn hull_distance(a: &[&Vec<f64>], b: &[&Vec<f64>], tol: &ToleranceContext) -> Result<f64> {
    let d = a[0].len();
    let (na, nb) = (a.len(), b.len());
    let nv = na + nb + 1;
    let r = nv - 1;
    let mut obj = vec![0.0; nv];
    obj[r] = 1.0;
    let mut lp = LinearProgram::new(nv).all_nonnegative().minimize(obj);
    for j in 0..d {
        let mut row = vec![0.0; nv];
        for (k, v) in a.iter().enumerate() {
            row[k] = v[j];
        }
        for (k, w) in b.iter().enumerate() {
            row[na + k] = -w[j];
        }
        let mut up = row.clone();
        up[r] = -1.0;
        lp.constrain(up, Relation::Le, 0.0);
        row[r] = 1.0;
        lp.constrain(row, Relation::Ge, 0.0);
    }
    let mut sa = vec![0.0; nv];
    sa[..na].iter_mut().for_each(|c| *c = 1.0);
    lp.constrain(sa, Relation::Eq, 1.0);
    let mut sb = vec![0.0; nv];
    sb[na..na + nb].iter_mut().for_each(|c| *c = 1.0);
    lp.constrain(sb, Relation::Eq, 1.0);
    let sol = solve_lp(&lp, tol)?;
    if !sol.is_optimal() {
        return Err(Error::Lp(alloc::format!("hull distance LP returned {:?}", sol.status)));
    }
    Ok(sol.value)
}

/// Random WNS family: a chain in which each new member meets an earlier one,
/// followed by random moves that are kept only while the family stays WNS.
pub fn random_wns_family<R: Rng + ?Sized>(base: &Polytope, n: usize, rng: &mut R, tol: &ToleranceContext) -> Result<HomotheticFamily> {
    if n < 2 {
        return Err(Error::invalid("a family needs at least two members"));
    }
    let d = base.dim();
    let mut members = vec![Member { x: vec![0.0; d], tau: rng.random_range(0.5..1.5) }];
    while members.len() < n {
        let k = rng.random_range(0..members.len());
        let tau = rng.random_range(0.5..1.5);
        let p1 = random::point_in(rng, base);
        let p2 = random::point_in(rng, base);
        let x = linalg::sub(&linalg::axpy(&members[k].x, members[k].tau, &p1), &linalg::scale(&p2, tau));
        members.push(Member { x, tau });
    }
    let mut fam = HomotheticFamily::new(base.clone(), members)?;
    let step = base.width(&random::unit_vector(rng, d));
    for _ in 0..2 * n {
        let i = rng.random_range(0..n);
        let mut trial = fam.clone();
        let delta = linalg::scale(&random::unit_vector(rng, d), step * rng.random_range(0.0..1.0));
        trial.members[i].x = linalg::add(&trial.members[i].x, &delta);
        if trial.is_wns(tol) {
            fam = trial;
        }
    }
    Ok(fam)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tc() -> ToleranceContext {
        ToleranceContext::default()
    }

    fn unit_squares(xs: &[[f64; 2]]) -> HomotheticFamily {
        HomotheticFamily::translates(Polytope::unit_cube(2), xs.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    #[test]
    fn projection_examples() {
        let f = HomotheticFamily::new(
            Polytope::cube(2, 0.5),
            vec![Member { x: vec![2.0, 0.0], tau: 1.0 }, Member { x: vec![2.0, 0.0], tau: 2.0 }],
        )
        .unwrap();
        assert_eq!(f.project_member(0, &[1.0, 0.0]).unwrap(), Interval { lo: 1.5, hi: 2.5 });
        assert_eq!(f.project_member(1, &[1.0, 0.0]).unwrap(), Interval { lo: 1.0, hi: 3.0 });
        assert_eq!(f.project_member(0, &[0.0, 1.0]).unwrap(), Interval { lo: -0.5, hi: 0.5 });
        assert_eq!(f.project_member(2, &[0.0, 1.0]), Err(Error::IndexOutOfRange { index: 2, len: 2 }));
    }

    #[test]
    fn wns_examples() {
        let f5 = unit_squares(&[[1.0, 0.0], [4.0, 1.0], [3.0, 4.0], [0.0, 3.0], [2.0, 2.0]]);
        assert!(f5.is_wns(&tc()));
        let far = unit_squares(&[[0.0, 0.0], [5.0, 0.0]]);
        let w = far.wns_witness(&tc()).unwrap();
        assert_eq!(w.direction, vec![1.0, 0.0]);
        assert!((w.gap - 4.0).abs() < 1e-12);
        assert!(unit_squares(&[[0.0, 0.0], [1.0, 0.0]]).is_wns(&tc()));
    }

    #[test]
    fn ns_examples() {
        assert!(unit_squares(&[[0.0, 0.0], [1.0, 0.0]]).is_ns(&tc()).unwrap());
        let split = unit_squares(&[[0.0, 0.0], [2.0, 0.0]]).ns_witness(&tc()).unwrap().unwrap();
        assert_eq!(split, Bipartition { left: vec![0], right: vec![1] });
        assert!(unit_squares(&[[0.0, 0.0], [1.0, 1.0]]).is_ns(&tc()).unwrap());
        // axis projections are gapless, but x + y = 2.2 isolates the second square
        let tilted = unit_squares(&[[0.0, 0.0], [1.2, 1.2], [0.5, -1.0], [-1.0, 0.5]]);
        assert!(tilted.is_wns(&tc()));
        let split = tilted.ns_witness(&tc()).unwrap().unwrap();
        assert_eq!(split, Bipartition { left: vec![0, 2, 3], right: vec![1] });
    }

    #[test]
    fn kwip_examples() {
        let mut rng = random::rng_from_seed(1);
        let f5 = unit_squares(&[[1.0, 0.0], [4.0, 1.0], [3.0, 4.0], [0.0, 3.0], [2.0, 2.0]]);
        assert!(!f5.kwip_sampled(1, 10_000, &mut rng, &tc()).unwrap().falsified());
        let diag = unit_squares(&[[0.0, 0.0], [1.0, 1.0]]);
        let r = diag.kwip_sampled(0, 10_000, &mut rng, &tc()).unwrap();
        let w = r.witness.unwrap();
        assert!(!(0..2).any(|i| diag.member(i).unwrap().contains_point(&w.point, 1e-9)));
        let far = unit_squares(&[[0.0, 0.0], [3.0, 0.0]]);
        let exact = far.kwip_sampled(1, 1, &mut rng, &tc()).unwrap();
        assert!(exact.exact && exact.falsified());
        assert!(f5.kwip_sampled(2, 1, &mut rng, &tc()).is_err());
    }

    #[test]
    fn edge_cover_examples() {
        assert_eq!(unit_squares(&[[0.0, 0.0], [1.0, 0.0]]).edges_covered(&tc()).unwrap(), None);
        let w = unit_squares(&[[0.0, 0.0], [2.0, 0.0]]).edges_covered(&tc()).unwrap().unwrap();
        assert!((w[0] - 1.5).abs() < 1e-12 && (w[1].abs() < 1e-12 || (w[1] - 1.0).abs() < 1e-12));
        // The hull edge from (1,0) to (0,3) leaves the union between the corners.
        let f5 = unit_squares(&[[1.0, 0.0], [4.0, 1.0], [3.0, 4.0], [0.0, 3.0], [2.0, 2.0]]);
        let w = f5.edges_covered(&tc()).unwrap().unwrap();
        assert!(!(0..5).any(|i| f5.member(i).unwrap().contains_point(&w, 1e-9)));
        let row = unit_squares(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]);
        assert_eq!(row.edges_covered(&tc()).unwrap(), None);
    }

    #[test]
    fn random_families_are_wns() {
        let mut rng = random::rng_from_seed(4);
        let base = Polytope::regular_polygon(6, 1.0, 0.2).unwrap();
        for _ in 0..10 {
            let f = random_wns_family(&base, 5, &mut rng, &tc()).unwrap();
            assert!(f.is_wns(&tc()));
        }
    }

    #[test]
    fn recentering_keeps_members() {
        let f = unit_squares(&[[0.0, 0.0], [1.0, 0.5]]);
        let g = f.recentered(&[0.5, 0.5]);
        for i in 0..2 {
            let a = f.member(i).unwrap();
            let b = g.member(i).unwrap();
            assert!(a.vertices().iter().all(|v| b.vertices().iter().any(|w| linalg::max_abs_diff(v, w) < 1e-12)));
        }
    }
}
