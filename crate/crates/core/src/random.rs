//! Seeded generators for test instances and Monte-Carlo probes.

use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, Matrix};
use crate::polytope::Polytope;
use crate::ToleranceContext;

pub type DetRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> DetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.sample(StandardNormal)).collect()
}

/// Uniform point on the unit sphere `S^{d-1}`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        if let Some(u) = linalg::normalized(&gaussian_vector(rng, d)) {
            return u;
        }
    }
}

/// Haar-random orthonormal `k`-frame inside the span of the orthonormal
/// vectors `span`.
pub fn random_frame<R: Rng + ?Sized>(rng: &mut R, span: &[Vec<f64>], k: usize) -> Vec<Vec<f64>> {
    assert!(k <= span.len());
    loop {
        let raw: Vec<Vec<f64>> = (0..k)
            .map(|_| {
                let c = gaussian_vector(rng, span.len());
                let mut v = alloc::vec![0.0; span[0].len()];
                for (ci, s) in c.iter().zip(span) {
                    v = linalg::axpy(&v, *ci, s);
                }
                v
            })
            .collect();
        let frame = linalg::gram_schmidt(&raw, 1e-9);
        if frame.len() == k {
            return frame;
        }
    }
}

/// Hull of `n` random points with radii in `[0.5, 1]`; retries on degenerate draws.
pub fn random_polytope<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize, tol: &ToleranceContext) -> Polytope {
    assert!(n > d);
    loop {
        let pts: Vec<Vec<f64>> = (0..n).map(|_| linalg::scale(&unit_vector(rng, d), rng.random_range(0.5..1.0))).collect();
        if let Ok(p) = Polytope::from_vertices(pts, tol) {
            if p.origin_is_interior() {
                return p;
            }
        }
    }
}

/// Origin-symmetric hull of `±pᵢ` for `n` random points.
pub fn random_symmetric_polytope<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize, tol: &ToleranceContext) -> Polytope {
    loop {
        let mut pts = Vec::with_capacity(2 * n);
        for _ in 0..n {
            let p = linalg::scale(&unit_vector(rng, d), rng.random_range(0.5..1.0));
            pts.push(linalg::scale(&p, -1.0));
            pts.push(p);
        }
        if let Ok(p) = Polytope::from_vertices(pts, tol) {
            return p;
        }
    }
}

/// Random simplex with the origin in its interior.
pub fn random_simplex<R: Rng + ?Sized>(rng: &mut R, d: usize, tol: &ToleranceContext) -> Polytope {
    random_polytope(rng, d, d + 1, tol)
}

/// Uniform point of `p` by rejection from its bounding box.
pub fn point_in<R: Rng + ?Sized>(rng: &mut R, p: &Polytope) -> Vec<f64> {
    let (lo, hi) = p.bounding_box();
    loop {
        let x: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| a + (b - a) * rng.random::<f64>()).collect();
        if p.contains_point(&x, 0.0) {
            return x;
        }
    }
}

/// Random matrix with condition number kept moderate (smallest singular
/// direction bounded away from zero via `|det| ≥ 0.1`).
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Matrix {
    loop {
        let rows: Vec<Vec<f64>> = (0..d).map(|_| gaussian_vector(rng, d)).collect();
        let m = Matrix::from_rows(&rows);
        if m.det().abs() >= 0.1 && m.max_abs() <= 3.0 {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_streams_repeat() {
        let a = gaussian_vector(&mut rng_from_seed(5), 4);
        let b = gaussian_vector(&mut rng_from_seed(5), 4);
        assert_eq!(a, b);
    }

    #[test]
    fn frames_are_orthonormal_and_in_span() {
        let mut rng = rng_from_seed(1);
        let span = alloc::vec![alloc::vec![1.0, 0.0, 0.0, 0.0], alloc::vec![0.0, 0.0, 1.0, 0.0], alloc::vec![0.0, 0.0, 0.0, 1.0]];
        let f = random_frame(&mut rng, &span, 2);
        assert!((linalg::dot(&f[0], &f[1])).abs() < 1e-12);
        assert!(f.iter().all(|v| (linalg::norm(v) - 1.0).abs() < 1e-12 && v[1].abs() < 1e-15));
    }

    #[test]
    fn generated_polytopes_are_valid() {
        let tc = ToleranceContext::default();
        let mut rng = rng_from_seed(9);
        for d in 2..=3 {
            random_polytope(&mut rng, d, 8, &tc).check_invariants().unwrap();
            assert!(random_symmetric_polytope(&mut rng, d, 4, &tc).is_origin_symmetric());
            let p = random_simplex(&mut rng, d, &tc);
            assert_eq!(p.vertices().len(), d + 1);
            let x = point_in(&mut rng, &p);
            assert!(p.contains_point(&x, 0.0));
        }
    }
}
