//! Lattice arrangements `K + L`: covering radius, tightness, the dual-lattice
//! non-separability criterion and weak covering minima.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::linalg::{self, dot, norm, Matrix};
use crate::polytope::{measure, polar, MeasureKind, Polytope};
use crate::random;
use crate::separability::{complement, flat_meets, largest_gap, Flat, Interval};
use crate::{Error, Result, ToleranceContext};

/// Hard cap on enumerated lattice vectors.
pub const MAX_ENUMERATION: usize = 10_000_000;
/// Function evaluations allowed in the covering-radius branch and bound.
const MAX_EVALUATIONS: usize = 20_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    basis: Matrix,
    inverse: Matrix,
    det: f64,
}

impl Lattice {
    /// Lattice generated by the columns of `basis`.
    pub fn new(basis: Matrix) -> Result<Self> {
        if basis.rows() != basis.cols() || basis.rows() == 0 {
            return Err(Error::invalid("lattice basis must be square"));
        }
        let det = basis.det().abs();
        let scale = (0..basis.cols()).map(|j| norm(&basis.col(j))).product::<f64>();
        if !(det > 1e-12 * scale) {
            return Err(Error::SingularBasis);
        }
        let inverse = basis.inverse(1e-14).ok_or(Error::SingularBasis)?;
        Ok(Self { basis, inverse, det })
    }

    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Self> {
        let d = cols.len();
        if cols.iter().any(|c| c.len() != d) {
            return Err(Error::invalid("lattice basis must be square"));
        }
        Self::new(Matrix::from_cols(cols))
    }

    /// `ℤᵈ`.
    pub fn integer(d: usize) -> Self {
        Self::new(Matrix::identity(d)).expect("identity is invertible")
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|j| self.basis.col(j)).collect()
    }

    /// `|det B|`.
    pub fn det(&self) -> f64 {
        self.det
    }

    /// `L* = B^{-T} ℤᵈ`.
    pub fn dual(&self) -> Self {
        Self::new(self.inverse.transpose()).expect("inverse of a basis is a basis")
    }

    pub fn point(&self, z: &[i64]) -> Vec<f64> {
        let zf: Vec<f64> = z.iter().map(|&v| v as f64).collect();
        self.basis.mul_vec(&zf)
    }

    /// Coefficients of `x` in the basis.
    pub fn coords(&self, x: &[f64]) -> Vec<f64> {
        self.inverse.mul_vec(x)
    }

    /// Every lattice point with `‖p − center‖ ≤ radius`.
    pub fn points_within(&self, center: &[f64], radius: f64) -> Result<Vec<Vec<f64>>> {
        let d = self.dim();
        let s = self.coords(center);
        let mut lo = Vec::with_capacity(d);
        let mut hi = Vec::with_capacity(d);
        let mut count: f64 = 1.0;
        for j in 0..d {
            let w = radius * norm(self.inverse.row(j));
            let (a, b) = (libm::ceil(s[j] - w) as i64, libm::floor(s[j] + w) as i64);
            count *= (b - a + 1).max(0) as f64;
            lo.push(a);
            hi.push(b);
        }
        if count > MAX_ENUMERATION as f64 {
            return Err(Error::EnumerationOverflow(count as usize));
        }
        let mut out = Vec::new();
        let mut z = lo.clone();
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Ok(out);
        }
        loop {
            let p = self.point(&z);
            if linalg::dist(&p, center) <= radius {
                out.push(p);
            }
            let mut j = 0;
            loop {
                if j == d {
                    return Ok(out);
                }
                if z[j] < hi[j] {
                    z[j] += 1;
                    break;
                }
                z[j] = lo[j];
                j += 1;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeArrangement {
    pub body: Polytope,
    pub lattice: Lattice,
}

/// A two-sided estimate `lower ≤ value ≤ upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }

    fn shift(self, by: f64) -> Self {
        Self { lower: self.lower + by, upper: self.upper + by }
    }
}

/// `‖x‖_K = max_i max(⟨aᵢ, x⟩ / bᵢ, 0)`.
pub fn knorm(k: &Polytope, x: &[f64]) -> Result<f64> {
    if x.len() != k.dim() {
        return Err(Error::DimensionMismatch { expected: k.dim(), got: x.len() });
    }
    k.gauge(x)
}

impl LatticeArrangement {
    pub fn new(body: Polytope, lattice: Lattice) -> Result<Self> {
        if body.dim() != lattice.dim() {
            return Err(Error::DimensionMismatch { expected: lattice.dim(), got: body.dim() });
        }
        Ok(Self { body, lattice })
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    /// `vol(K) / det(L)`.
    pub fn density(&self) -> Result<f64> {
        Ok(measure(&self.body, MeasureKind::Volume)? / self.lattice.det())
    }

    /// Brackets `μ(L, K) = max_x min_{z ∈ L} ‖x − z‖_K` to within `width` by
    /// Lipschitz branch and bound over the fundamental cell.
    ///
    /// The gauge is Lipschitz with constant `max_i 1/bᵢ`, so a sub-box whose
    /// center value plus `Lip · radius` cannot beat the incumbent by more than
    /// `width` is discarded.
    pub fn covering_radius(&self, width: f64) -> Result<Bracket> {
        if !(width > 0.0) {
            return Err(Error::invalid("bracket width must be positive"));
        }
        let d = self.dim();
        if d > 3 {
            return Err(Error::Unsupported(alloc::format!("covering radius in dimension {d}")));
        }
        let k = &self.body;
        if !k.origin_is_interior() {
            return Err(Error::OriginNotInterior);
        }
        let lip = k.facets().iter().map(|f| 1.0 / f.offset).fold(0.0, f64::max);
        let r_k = k.vertices().iter().map(|v| norm(v)).fold(0.0, f64::max);
        let cols = self.lattice.basis_vectors();
        let half_diag_sum = 0.5 * cols.iter().map(|c| norm(c)).sum::<f64>();
        // Largest ‖B σ‖ over sign vectors: Euclidean radius of a unit coefficient box.
        let mut hmax: f64 = 0.0;
        for mask in 0..(1usize << d) {
            let s: Vec<f64> = (0..d).map(|j| if mask >> j & 1 == 1 { 1.0 } else { -1.0 }).collect();
            hmax = hmax.max(norm(&self.lattice.basis.mul_vec(&s)));
        }
        let c0 = self.lattice.basis.mul_vec(&vec![0.5; d]);
        let m_bound = lip * half_diag_sum;
        let cands = self.lattice.points_within(&c0, 0.5 * hmax + r_k * m_bound + 1e-9)?;
        let f = |s: &[f64]| -> f64 {
            let x = self.lattice.basis.mul_vec(s);
            cands.iter().map(|z| k.gauge_unchecked(&linalg::sub(&x, z))).fold(f64::INFINITY, f64::min)
        };

        let g = 8usize;
        let mut stack: Vec<(Vec<f64>, f64)> = Vec::new();
        let r0 = 0.5 / g as f64;
        let mut idx = vec![0usize; d];
        loop {
            stack.push((idx.iter().map(|&i| (i as f64 + 0.5) / g as f64).collect(), r0));
            let mut j = 0;
            while j < d && idx[j] + 1 == g {
                idx[j] = 0;
                j += 1;
            }
            if j == d {
                break;
            }
            idx[j] += 1;
        }
        let mut lower = stack.iter().map(|(s, _)| f(s)).fold(0.0, f64::max);
        let mut upper = lower;
        let mut evals = 0usize;
        while let Some((s, r)) = stack.pop() {
            let fc = f(&s);
            evals += 1;
            lower = lower.max(fc);
            let ub = fc + lip * r * hmax;
            if ub <= lower + width {
                upper = upper.max(ub);
                continue;
            }
            if evals > MAX_EVALUATIONS {
                let rest = stack.iter().map(|(s, r)| f(s) + lip * r * hmax).fold(ub, f64::max);
                return Err(Error::BracketTooWide { lower, upper: upper.max(rest), requested: width });
            }
            let h = 0.5 * r;
            for mask in 0..(1usize << d) {
                let child = (0..d).map(|j| if mask >> j & 1 == 1 { s[j] + h } else { s[j] - h }).collect();
                stack.push((child, h));
            }
        }
        // outward rounding so float error never excludes the true value
        let pad = 4.0 * f64::EPSILON * (1.0 + upper.abs());
        Ok(Bracket { lower: lower - pad, upper: upper.max(lower) + pad })
    }

    /// Tightness of the arrangement, `μ(L, K) − 1` for origin-symmetric `K`.
    pub fn tightness(&self, width: f64) -> Result<Bracket> {
        if !self.body.is_origin_symmetric() {
            return Err(Error::RequiresSymmetricBase);
        }
        Ok(self.covering_radius(width)?.shift(-1.0))
    }

    /// `λ₁(L*, K°) = min_{z ∈ L* \ 0} h_K(z)`; the arrangement is NS iff it is ≥ ½.
    pub fn dual_minimum(&self) -> Result<f64> {
        let k = &self.body;
        if !k.origin_is_interior() {
            return Err(Error::OriginNotInterior);
        }
        let dual = self.lattice.dual();
        // Any dual basis vector bounds λ₁ from above; h_K(z) ≥ r ‖z‖ with r the
        // inradius about the origin bounds the search ball.
        let upper = dual.basis_vectors().iter().map(|b| k.h(b)).fold(f64::INFINITY, f64::min);
        let r = k.facets().iter().map(|f| f.offset).fold(f64::INFINITY, f64::min);
        let pts = dual.points_within(&vec![0.0; self.dim()], upper / r * (1.0 + 1e-9))?;
        Ok(pts.iter().filter(|z| norm(z) > 0.0).map(|z| k.h(z)).fold(upper, f64::min))
    }

    pub fn is_ns(&self, tol: &ToleranceContext) -> Result<(bool, f64)> {
        let l1 = self.dual_minimum()?;
        Ok((l1 >= 0.5 - tol.gap, l1))
    }

    /// `(density, vol(K)·vol(K°)/16)`: NS arrangements satisfy `density ≥ bound`.
    pub fn density_bound(&self, tol: &ToleranceContext) -> Result<(f64, f64)> {
        let kp = polar(&self.body, tol)?;
        let vk = measure(&self.body, MeasureKind::Volume)?;
        let vp = measure(&kp, MeasureKind::Volume)?;
        Ok((self.density()?, vk * vp / 16.0))
    }

    /// Finite-patch separability probe independent of the dual lattice: in the
    /// plane, a separating line of `K + L` must be parallel to a lattice
    /// vector `v` with `‖v‖ ≤ det L / (2 r_K)` (`r_K` the inradius about the
    /// origin), so those directions plus `extra` random ones are tested for a
    /// gap in the projected patch. Returns a separating normal if found.
    pub fn patch_separation<R: Rng + ?Sized>(&self, window: i64, extra: usize, rng: &mut R, tol: &ToleranceContext) -> Result<Option<Vec<f64>>> {
        if self.dim() != 2 {
            return Err(Error::Unsupported("patch probe is planar".into()));
        }
        let k = &self.body;
        let r_k = k.facets().iter().map(|f| f.offset).fold(f64::INFINITY, f64::min);
        let reach = self.lattice.det() / (2.0 * r_k) * 1.05 + 1e-9;
        let mut dirs: Vec<Vec<f64>> = Vec::new();
        for v in self.lattice.points_within(&[0.0, 0.0], reach)? {
            if norm(&v) > 0.0 {
                dirs.push(linalg::normalized(&[-v[1], v[0]]).unwrap());
            }
        }
        for _ in 0..extra {
            dirs.push(random::unit_vector(rng, 2));
        }
        let mut patch = Vec::new();
        for a in -window..=window {
            for b in -window..=window {
                patch.push(self.lattice.point(&[a, b]));
            }
        }
        let cols = self.lattice.basis_vectors();
        // Projections of the patch are complete only near the origin.
        let central = 0.25 * window as f64 * cols.iter().map(|c| norm(c)).fold(f64::INFINITY, f64::min);
        for u in dirs {
            let neg = [-u[0], -u[1]];
            let (lo, hi) = (-k.h(&neg), k.h(&u));
            let mut ivs: Vec<Interval> = patch
                .iter()
                .map(|z| dot(&u, z))
                .filter(|c| c.abs() <= central)
                .map(|c| Interval { lo: c + lo, hi: c + hi })
                .collect();
            if ivs.len() < 2 {
                continue;
            }
            ivs.push(Interval { lo: f64::NEG_INFINITY, hi: -0.5 * central });
            ivs.push(Interval { lo: 0.5 * central, hi: f64::INFINITY });
            let (gap, _) = largest_gap(&mut ivs);
            if gap > tol.gap * (1.0 + central) {
                return Ok(Some(u));
            }
        }
        Ok(None)
    }

    /// Samples facet-parallel `k`-flats through random points and reports one
    /// that misses every translate `z + K` near it.
    pub fn weak_impassability_probe<R: Rng + ?Sized>(&self, k: usize, samples: usize, rng: &mut R, tol: &ToleranceContext) -> Result<Option<Flat>> {
        let d = self.dim();
        if k >= d {
            return Err(Error::invalid("k must satisfy k < d"));
        }
        let body = &self.body;
        let r_k = body.vertices().iter().map(|v| norm(v)).fold(0.0, f64::max);
        let cell_radius = self.lattice.basis_vectors().iter().map(|c| norm(c)).sum::<f64>();
        let radius = 3.0 * (cell_radius + r_k);
        let eps = tol.geom * (1.0 + radius);
        for _ in 0..samples {
            let a = &body.facets()[rng.random_range(0..body.facets().len())].normal;
            let basis = random::random_frame(rng, &complement(a), k);
            let s: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
            let point = self.lattice.basis.mul_vec(&s);
            let mut hit = false;
            for z in self.lattice.points_within(&point, radius)? {
                // distance from z to the flat
                let mut off = linalg::sub(&z, &point);
                for b in &basis {
                    off = linalg::axpy(&off, -dot(&off, b), b);
                }
                if norm(&off) > r_k + eps {
                    continue;
                }
                if flat_meets(&body.translate(&z), &point, &basis, eps, tol)? {
                    hit = true;
                    break;
                }
            }
            if !hit {
                return Ok(Some(Flat { point, basis }));
            }
        }
        Ok(None)
    }
}

/// Largest circular gap of `{⟨u, z⟩ mod 1 : z ∈ ℤᵈ ∩ [−R, R]ᵈ}`; 1 when all
/// values coincide.
pub fn kronecker_gap(u: &[f64], radius: u32) -> f64 {
    let d = u.len();
    let r = radius as i64;
    let side = (2 * r + 1) as usize;
    let total = side.pow(d as u32);
    let mut vals = Vec::with_capacity(total);
    let mut z = vec![-r; d];
    for _ in 0..total {
        let v: f64 = u.iter().zip(&z).map(|(a, &b)| a * b as f64).sum();
        vals.push(v - libm::floor(v));
        for zj in z.iter_mut() {
            if *zj < r {
                *zj += 1;
                break;
            }
            *zj = -r;
        }
    }
    vals.sort_by(f64::total_cmp);
    let mut gap = 1.0 - vals[vals.len() - 1] + vals[0];
    for w in vals.windows(2) {
        gap = f64::max(gap, w[1] - w[0]);
    }
    gap
}

/// One row of a weak-covering-minimum curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mu1wRow {
    pub t: f64,
    /// Fraction of sampled facet-parallel hyperplanes meeting `L + tP`.
    pub hit_fraction: f64,
    /// Largest distance from a missed hyperplane level to the covered set.
    pub miss_margin: f64,
}

/// Smallest positive value of `|⟨a, z⟩|` over window lattice points: every
/// gap of the group `⟨a, L⟩` is at most this.
pub fn group_gap(a: &[f64], lattice: &Lattice, window: i64) -> f64 {
    let d = lattice.dim();
    let mut z = vec![-window; d];
    let mut best = f64::INFINITY;
    let scale = lattice.basis_vectors().iter().map(|c| norm(c)).fold(0.0, f64::max);
    loop {
        let v = dot(a, &lattice.point(&z)).abs();
        if v > 1e-12 * scale * (1.0 + window as f64) && v < best {
            best = v;
        }
        let mut j = 0;
        loop {
            if j == d {
                return best;
            }
            if z[j] < window {
                z[j] += 1;
                break;
            }
            z[j] = -window;
            j += 1;
        }
    }
}

/// Upper estimate of `μ₁ʷ(P, L)`: `max_a g(a) / width_P(a)` over facet normals.
pub fn mu1w_estimate(p: &Polytope, lattice: &Lattice, window: i64) -> f64 {
    facet_pairs(p).iter().map(|a| group_gap(a, lattice, window) / p.width(a)).fold(0.0, f64::max)
}

fn facet_pairs(p: &Polytope) -> Vec<Vec<f64>> {
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for f in p.facets() {
        if !dirs.iter().any(|u| (dot(u, &f.normal).abs() - 1.0).abs() <= 1e-12) {
            dirs.push(f.normal.clone());
        }
    }
    dirs
}

/// For each `t`, samples hyperplanes `{⟨a, x⟩ = c}` parallel to facets of `P`
/// and tests them against `L + tP` restricted to the coefficient window.
pub fn weak_covering_minimum_1<R: Rng + ?Sized>(
    p: &Polytope,
    lattice: &Lattice,
    t_grid: &[f64],
    window: i64,
    samples: usize,
    rng: &mut R,
) -> Result<Vec<Mu1wRow>> {
    if p.dim() != lattice.dim() {
        return Err(Error::DimensionMismatch { expected: lattice.dim(), got: p.dim() });
    }
    if window < 1 || samples == 0 {
        return Err(Error::invalid("window and samples must be positive"));
    }
    let d = lattice.dim();
    let dirs = facet_pairs(p);
    let span = lattice.basis_vectors().iter().map(|c| norm(c)).fold(0.0, f64::max);
    // sorted window projections per direction
    let mut proj: Vec<Vec<f64>> = Vec::with_capacity(dirs.len());
    for a in &dirs {
        let mut vals = Vec::new();
        let mut z = vec![-window; d];
        'outer: loop {
            vals.push(dot(a, &lattice.point(&z)));
            let mut j = 0;
            loop {
                if j == d {
                    break 'outer;
                }
                if z[j] < window {
                    z[j] += 1;
                    break;
                }
                z[j] = -window;
                j += 1;
            }
        }
        vals.sort_by(f64::total_cmp);
        proj.push(vals);
    }
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let (mut hits, mut margin) = (0usize, 0.0f64);
        for _ in 0..samples {
            let i = rng.random_range(0..dirs.len());
            let a = &dirs[i];
            let neg: Vec<f64> = a.iter().map(|x| -x).collect();
            let (lo, hi) = (-t * p.h(&neg), t * p.h(a));
            let c = span * rng.random_range(-1.0..1.0);
            // c is covered iff some value v has v + lo ≤ c ≤ v + hi.
            let vals = &proj[i];
            let k = vals.partition_point(|&v| v < c - hi);
            let dist = if k < vals.len() && vals[k] <= c - lo {
                0.0
            } else {
                let above = if k < vals.len() { vals[k] + lo - c } else { f64::INFINITY };
                let below = if k > 0 { c - (vals[k - 1] + hi) } else { f64::INFINITY };
                above.min(below)
            };
            if dist <= 0.0 {
                hits += 1;
            } else {
                margin = margin.max(dist);
            }
        }
        rows.push(Mu1wRow { t, hit_fraction: hits as f64 / samples as f64, miss_margin: margin });
    }
    Ok(rows)
}
