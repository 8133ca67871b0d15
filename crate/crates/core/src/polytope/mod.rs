//! Dual-representation convex polytopes.
//!
//! A [`Polytope`] always carries both its facet inequalities
//! `⟨aᵢ, x⟩ ≤ bᵢ` (with unit normals) and its vertex list; whichever side is
//! missing at construction is completed by [`hull`].

mod containment;
mod generic;
pub mod hull;
mod measure;
mod polar;

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{self, dot, norm};
use crate::{Error, Result, ToleranceContext};

pub use containment::contains_translate;
pub use generic::{circumscribed_simplices, genericize, is_generic, Genericized};
pub use measure::{measure, MeasureKind};
pub use polar::polar;

/// Half-space `{x : ⟨normal, x⟩ ≤ offset}` with a unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Facet {
    /// Normalizes `normal` to unit length, rescaling `offset` accordingly.
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        let n = norm(&normal);
        if !(n > 0.0) || !n.is_finite() || !offset.is_finite() {
            return Err(Error::invalid("facet normal must be finite and nonzero"));
        }
        Ok(Self { normal: linalg::scale(&normal, 1.0 / n), offset: offset / n })
    }

    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    dim: usize,
    facets: Vec<Facet>,
    vertices: Vec<Vec<f64>>,
    tol: f64,
}

impl Polytope {
    /// Completes the vertex list from facet inequalities.
    pub fn from_facets(dim: usize, facets: Vec<Facet>, tol: &ToleranceContext) -> Result<Self> {
        hull::vertices_from_facets(dim, facets, tol)
    }

    /// Convex hull of a point set; completes the facet list.
    pub fn from_vertices(points: Vec<Vec<f64>>, tol: &ToleranceContext) -> Result<Self> {
        hull::facets_from_vertices(points, tol)
    }

    /// Builds from both representations and checks they agree: every vertex
    /// satisfies every inequality and every facet is tight at ≥ d vertices.
    pub fn from_parts(dim: usize, facets: Vec<Facet>, vertices: Vec<Vec<f64>>, tol: &ToleranceContext) -> Result<Self> {
        let p = Self::from_parts_unchecked(dim, facets, vertices, tol.geom);
        p.check_invariants()?;
        Ok(p)
    }

    pub(crate) fn from_parts_unchecked(dim: usize, facets: Vec<Facet>, mut vertices: Vec<Vec<f64>>, tol: f64) -> Self {
        if dim == 2 {
            measure::sort_ccw(&mut vertices);
        }
        Self { dim, facets, vertices, tol }
    }

    pub fn check_invariants(&self) -> Result<()> {
        let d = self.dim;
        if self.vertices.iter().any(|v| v.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: self.vertices.iter().map(Vec::len).find(|&l| l != d).unwrap() });
        }
        if let Some(f) = self.facets.iter().find(|f| f.normal.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: f.normal.len() });
        }
        let eps = self.eps();
        for f in &self.facets {
            if (norm(&f.normal) - 1.0).abs() > 1e-9 {
                return Err(Error::invalid("facet normals must have unit length"));
            }
            if self.vertices.iter().any(|v| f.eval(v) > eps) {
                return Err(Error::invalid("vertex violates a facet inequality"));
            }
            let tight = self.vertices.iter().filter(|v| f.eval(v).abs() <= eps).count();
            if tight < d {
                return Err(Error::invalid("facet tight at fewer than d vertices"));
            }
        }
        if linalg::affine_rank(&self.vertices, 1e-9) < d {
            return Err(Error::NotFullDimensional);
        }
        Ok(())
    }

    /// Axis-parallel box `∏ [lo_j, hi_j]`.
    pub fn axis_box(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let d = lo.len();
        if hi.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: hi.len() });
        }
        if lo.iter().zip(hi).any(|(a, b)| !(a < b)) {
            return Err(Error::NotFullDimensional);
        }
        let mut facets = Vec::with_capacity(2 * d);
        for j in 0..d {
            let mut e = vec![0.0; d];
            e[j] = 1.0;
            facets.push(Facet { normal: e.clone(), offset: hi[j] });
            e[j] = -1.0;
            facets.push(Facet { normal: e, offset: -lo[j] });
        }
        let mut vertices = Vec::with_capacity(1 << d);
        for mask in 0..(1usize << d) {
            vertices.push((0..d).map(|j| if mask >> j & 1 == 1 { hi[j] } else { lo[j] }).collect());
        }
        Ok(Self::from_parts_unchecked(d, facets, vertices, ToleranceContext::default().geom))
    }

    /// `[-h, h]ᵈ`.
    pub fn cube(d: usize, half: f64) -> Self {
        Self::axis_box(&vec![-half; d], &vec![half; d]).expect("positive half-width")
    }

    /// `[0, 1]ᵈ`.
    pub fn unit_cube(d: usize) -> Self {
        Self::axis_box(&vec![0.0; d], &vec![1.0; d]).expect("unit cube")
    }

    /// `r · conv{±eᵢ}`.
    pub fn cross_polytope(d: usize, r: f64) -> Self {
        let mut vertices = Vec::with_capacity(2 * d);
        for j in 0..d {
            let mut e = vec![0.0; d];
            e[j] = r;
            vertices.push(e.clone());
            e[j] = -r;
            vertices.push(e);
        }
        let s = 1.0 / libm::sqrt(d as f64);
        let mut facets = Vec::with_capacity(1 << d);
        for mask in 0..(1usize << d) {
            let normal = (0..d).map(|j| if mask >> j & 1 == 1 { -s } else { s }).collect();
            facets.push(Facet { normal, offset: r * s });
        }
        Self::from_parts_unchecked(d, facets, vertices, ToleranceContext::default().geom)
    }

    /// Standard simplex `conv{0, e₁, …, e_d}`.
    pub fn standard_simplex(d: usize) -> Self {
        let mut pts = vec![vec![0.0; d]];
        for j in 0..d {
            let mut e = vec![0.0; d];
            e[j] = 1.0;
            pts.push(e);
        }
        Self::from_vertices(pts, &ToleranceContext::default()).expect("simplex is full-dimensional")
    }

    /// Regular `k`-gon with circumradius `r`, first vertex at angle `phase`.
    pub fn regular_polygon(k: usize, r: f64, phase: f64) -> Result<Self> {
        if k < 3 {
            return Err(Error::invalid("a polygon needs at least 3 vertices"));
        }
        let pts = (0..k)
            .map(|i| {
                let t = phase + 2.0 * core::f64::consts::PI * i as f64 / k as f64;
                vec![r * libm::cos(t), r * libm::sin(t)]
            })
            .collect();
        Self::from_vertices(pts, &ToleranceContext::default())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Incidence threshold scaled to the polytope's size.
    pub fn eps(&self) -> f64 {
        let r = self.vertices.iter().map(|v| norm(v)).fold(0.0, f64::max);
        self.tol * (1.0 + r)
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Support function `h_P(u) = max_v ⟨u, v⟩`.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        if u.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: u.len() });
        }
        if u.iter().all(|&x| x == 0.0) {
            return Err(Error::invalid("zero direction"));
        }
        Ok(self.h(u))
    }

    /// Support function without input checks.
    #[inline]
    pub fn h(&self, u: &[f64]) -> f64 {
        self.vertices.iter().map(|v| dot(u, v)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Width `h(u) + h(-u)`.
    pub fn width(&self, u: &[f64]) -> f64 {
        let (lo, hi) = self
            .vertices
            .iter()
            .map(|v| dot(u, v))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
        hi - lo
    }

    pub fn contains_point(&self, x: &[f64], tol: f64) -> bool {
        self.facets.iter().all(|f| f.eval(x) <= tol)
    }

    /// Largest facet violation at `x` (≤ 0 inside).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.facets.iter().map(|f| f.eval(x)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn vertex_centroid(&self) -> Vec<f64> {
        linalg::centroid(&self.vertices)
    }

    /// Whether `-P = P` (vertex sets agree within tolerance).
    pub fn is_origin_symmetric(&self) -> bool {
        let eps = self.eps();
        self.vertices.iter().all(|v| {
            self.vertices.iter().any(|w| v.iter().zip(w).all(|(a, b)| (a + b).abs() <= eps))
        })
    }

    /// Whether `P` is centrally symmetric about its vertex centroid.
    pub fn is_centrally_symmetric(&self) -> bool {
        let c = self.vertex_centroid();
        self.translate(&linalg::scale(&c, -1.0)).is_origin_symmetric()
    }

    pub fn origin_is_interior(&self) -> bool {
        self.facets.iter().all(|f| f.offset > self.tol)
    }

    pub fn translate(&self, t: &[f64]) -> Self {
        let facets = self
            .facets
            .iter()
            .map(|f| Facet { normal: f.normal.clone(), offset: f.offset + dot(&f.normal, t) })
            .collect();
        let vertices = self.vertices.iter().map(|v| linalg::add(v, t)).collect();
        Self::from_parts_unchecked(self.dim, facets, vertices, self.tol)
    }

    /// `s · P` for `s > 0`.
    pub fn scale(&self, s: f64) -> Self {
        assert!(s > 0.0, "scale factor must be positive");
        let facets = self.facets.iter().map(|f| Facet { normal: f.normal.clone(), offset: f.offset * s }).collect();
        let vertices = self.vertices.iter().map(|v| linalg::scale(v, s)).collect();
        Self::from_parts_unchecked(self.dim, facets, vertices, self.tol)
    }

    /// `x + τ·P`.
    pub fn homothet(&self, x: &[f64], tau: f64) -> Self {
        self.scale(tau).translate(x)
    }

    /// `-P`.
    pub fn reflect(&self) -> Self {
        let facets = self.facets.iter().map(|f| Facet { normal: linalg::scale(&f.normal, -1.0), offset: f.offset }).collect();
        let vertices = self.vertices.iter().map(|v| linalg::scale(v, -1.0)).collect();
        Self::from_parts_unchecked(self.dim, facets, vertices, self.tol)
    }

    /// Image under `x ↦ A x + b` for invertible `A`.
    pub fn affine_image(&self, a: &linalg::Matrix, b: &[f64], tol: &ToleranceContext) -> Result<Self> {
        if a.rows() != self.dim || a.cols() != self.dim || b.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: a.rows() });
        }
        let pts = self.vertices.iter().map(|v| linalg::add(&a.mul_vec(v), b)).collect();
        Self::from_vertices(pts, tol)
    }

    /// Indices of vertices with `|⟨a, v⟩ - b| ≤ eps` for each facet.
    pub fn facet_vertex_incidence(&self) -> Vec<Vec<usize>> {
        let eps = self.eps();
        self.facets
            .iter()
            .map(|f| (0..self.vertices.len()).filter(|&j| f.eval(&self.vertices[j]).abs() <= eps).collect())
            .collect()
    }

    /// Edges as vertex index pairs: two vertices span an edge iff the facets
    /// tight at both have normals of rank d − 1.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let d = self.dim;
        let eps = self.eps();
        let tight: Vec<Vec<usize>> = self
            .vertices
            .iter()
            .map(|v| (0..self.facets.len()).filter(|&i| self.facets[i].eval(v).abs() <= eps).collect())
            .collect();
        let mut edges = Vec::new();
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                let common: Vec<Vec<f64>> = tight[i]
                    .iter()
                    .filter(|f| tight[j].contains(f))
                    .map(|&f| self.facets[f].normal.clone())
                    .collect();
                if common.len() + 1 >= d && linalg::rank(&common, 1e-9) == d - 1 {
                    edges.push((i, j));
                }
            }
        }
        edges
    }

    /// Indices of facets containing both endpoints of an edge.
    pub fn facets_through(&self, points: &[&[f64]]) -> Vec<usize> {
        let eps = self.eps();
        (0..self.facets.len())
            .filter(|&i| points.iter().all(|p| self.facets[i].eval(p).abs() <= eps))
            .collect()
    }

    /// Vertices `v` with `⟨u, v⟩ ≥ h(u) − eps`: the exposed face `F(P, u)`.
    pub fn face(&self, u: &[f64]) -> Vec<Vec<f64>> {
        let h = self.h(u);
        let eps = self.eps() * norm(u).max(1.0);
        self.vertices.iter().filter(|v| dot(u, v) >= h - eps).cloned().collect()
    }

    /// Axis-aligned bounding box of the vertex set.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let d = self.dim;
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for v in &self.vertices {
            for j in 0..d {
                lo[j] = lo[j].min(v[j]);
                hi[j] = hi[j].max(v[j]);
            }
        }
        (lo, hi)
    }

    /// Gauge `‖x‖_P = max_i max(⟨aᵢ, x⟩ / bᵢ, 0)`; needs the origin in the interior.
    pub fn gauge(&self, x: &[f64]) -> Result<f64> {
        if !self.origin_is_interior() {
            return Err(Error::OriginNotInterior);
        }
        Ok(self.gauge_unchecked(x))
    }

    #[inline]
    pub(crate) fn gauge_unchecked(&self, x: &[f64]) -> f64 {
        self.facets.iter().map(|f| dot(&f.normal, x) / f.offset).fold(0.0, f64::max)
    }
}
