//! Euclidean-ball families: circumradius, the bent-chain construction and the
//! square-root stability experiment, plus the cube family showing that
//! smoothness of the body is needed.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::covering::lambda_min;
use crate::linalg::{self, dot, norm, sub, Matrix};
use crate::lp::{solve_lp, LinearProgram, LpStatus, Relation};
use crate::polytope::Polytope;
use crate::separability::HomotheticFamily;
use crate::{Error, Result, ToleranceContext};

/// Balls `pᵢ + τᵢB`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallFamily {
    centers: Vec<Vec<f64>>,
    radii: Vec<f64>,
}

impl BallFamily {
    pub fn new(centers: Vec<Vec<f64>>, radii: Vec<f64>) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::invalid("ball family needs at least one ball"));
        }
        if centers.len() != radii.len() {
            return Err(Error::DimensionMismatch { expected: centers.len(), got: radii.len() });
        }
        let d = centers[0].len();
        if d == 0 {
            return Err(Error::invalid("zero-dimensional centers"));
        }
        for c in &centers {
            if c.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: c.len() });
            }
            if c.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid("non-finite center"));
            }
        }
        if radii.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
            return Err(Error::invalid("radii must be positive and finite"));
        }
        Ok(Self { centers, radii })
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.centers[0].len()
    }

    pub fn total_radius(&self) -> f64 {
        self.radii.iter().sum()
    }

    /// `max_i ‖c − pᵢ‖ + τᵢ`.
    pub fn enclosing_radius(&self, c: &[f64]) -> f64 {
        self.centers
            .iter()
            .zip(&self.radii)
            .map(|(p, r)| linalg::dist(c, p) + r)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Two distinct balls are strictly separable iff they are disjoint, so a
    /// chain of pairwise touching consecutive balls is non-separable.
    pub fn consecutive_touching(&self, tol: f64) -> bool {
        (1..self.len()).all(|i| {
            let gap = linalg::dist(&self.centers[i], &self.centers[i - 1]) - self.radii[i] - self.radii[i - 1];
            gap <= tol * (1.0 + self.radii[i] + self.radii[i - 1])
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circumball {
    pub center: Vec<f64>,
    pub radius: f64,
}

/// Smallest ball containing every ball of the family.
///
/// Every support set of the optimum has at most `d + 1` balls, all tight, with
/// the center in their affine hull. For each such subset the tight system is
/// linear in `(c, R)` apart from one quadratic, so all candidates are
/// enumerated and the smallest enclosing one is kept. Optimality is then
/// certified by an LP showing `0` lies in the hull of the outward directions
/// of the tight balls (no improving direction).
pub fn ball_circumradius(f: &BallFamily, tol: &ToleranceContext) -> Result<Circumball> {
    let n = f.len();
    let d = f.dim();
    let scale = 1.0
        + f.total_radius()
        + f.centers.iter().map(|p| norm(p)).fold(0.0, f64::max);
    let slack = 1e-10 * scale;
    let mut best: Option<Circumball> = None;
    for k in 1..=(d + 1).min(n) {
        linalg::for_each_combination(n, k, |idx| {
            for cand in tight_candidates(f, idx) {
                if f.enclosing_radius(&cand.center) <= cand.radius + slack
                    && best.as_ref().map_or(true, |b| cand.radius < b.radius)
                {
                    best = Some(cand);
                }
            }
            true
        });
    }
    let (lower, upper) = radius_bounds(f);
    let Some(mut best) = best else {
        return Err(Error::NoConvergence { iterations: 0, lower, upper });
    };
    best.radius = f.enclosing_radius(&best.center);
    if !no_improving_direction(f, &best, tol, 1e-9 * scale)? {
        return Err(Error::NoConvergence { iterations: 0, lower, upper: best.radius.min(upper) });
    }
    Ok(best)
}

/// Cheap bracket for the circumradius: the largest pairwise bound below, the
/// weighted center above.
fn radius_bounds(f: &BallFamily) -> (f64, f64) {
    let mut lower = f.radii.iter().cloned().fold(0.0, f64::max);
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            let r = 0.5 * (linalg::dist(&f.centers[i], &f.centers[j]) + f.radii[i] + f.radii[j]);
            lower = lower.max(r);
        }
    }
    let total = f.total_radius();
    let mut c = vec![0.0; f.dim()];
    for (p, r) in f.centers.iter().zip(&f.radii) {
        c = linalg::axpy(&c, r / total, p);
    }
    (lower, f.enclosing_radius(&c))
}

/// Balls in `idx` all internally tangent to `B(c, R)`, `c ∈ aff(centers)`.
fn tight_candidates(f: &BallFamily, idx: &[usize]) -> Vec<Circumball> {
    let p0 = &f.centers[idx[0]];
    let t0 = f.radii[idx[0]];
    if idx.len() == 1 {
        return vec![Circumball { center: p0.clone(), radius: t0 }];
    }
    // c = p0 + E λ, with E the edge vectors. Row i of the linear part:
    // 2⟨E λ, eᵢ⟩ − 2R(τᵢ − τ₀) = ‖eᵢ‖² − τᵢ² + τ₀²,   eᵢ = pᵢ − p₀.
    let k = idx.len() - 1;
    let edges: Vec<Vec<f64>> = idx[1..].iter().map(|&i| sub(&f.centers[i], p0)).collect();
    let mut gram = Matrix::zeros(k, k);
    for r in 0..k {
        for s in 0..k {
            gram[(r, s)] = 2.0 * dot(&edges[r], &edges[s]);
        }
    }
    let rhs0: Vec<f64> = idx[1..]
        .iter()
        .zip(&edges)
        .map(|(&i, e)| dot(e, e) - f.radii[i] * f.radii[i] + t0 * t0)
        .collect();
    let rhs1: Vec<f64> = idx[1..].iter().map(|&i| 2.0 * (f.radii[i] - t0)).collect();
    let gtol = 1e-12 * (1.0 + gram.max_abs());
    let (Some(l0), Some(l1)) = (gram.solve(&rhs0, gtol), gram.solve(&rhs1, gtol)) else {
        return Vec::new();
    };
    // c − p₀ = u + R v; ‖u + R v‖² = (R − τ₀)².
    let combine = |l: &[f64]| {
        let mut out = vec![0.0; p0.len()];
        for (e, &w) in edges.iter().zip(l) {
            out = linalg::axpy(&out, w, e);
        }
        out
    };
    let u = combine(&l0);
    let v = combine(&l1);
    let a = dot(&v, &v) - 1.0;
    let b = 2.0 * (dot(&u, &v) + t0);
    let c = dot(&u, &u) - t0 * t0;
    let mut roots = Vec::new();
    if a.abs() < 1e-14 {
        if b.abs() > 1e-14 {
            roots.push(-c / b);
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc >= 0.0 {
            let sq = libm::sqrt(disc);
            // stable quadratic formula
            let q = -0.5 * (b + if b >= 0.0 { sq } else { -sq });
            if q != 0.0 {
                roots.push(c / q);
            }
            roots.push(q / a);
        }
    }
    let tmax = idx.iter().map(|&i| f.radii[i]).fold(0.0, f64::max);
    roots
        .into_iter()
        .filter(|r| r.is_finite() && *r >= tmax - 1e-12 * (1.0 + tmax))
        .map(|r| Circumball { center: linalg::axpy(&linalg::axpy(p0, 1.0, &u), r, &v), radius: r })
        .collect()
}

fn no_improving_direction(f: &BallFamily, ball: &Circumball, tol: &ToleranceContext, slack: f64) -> Result<bool> {
    let mut dirs = Vec::new();
    for (p, r) in f.centers.iter().zip(&f.radii) {
        let dd = linalg::dist(&ball.center, p);
        if dd + r < ball.radius - slack {
            continue;
        }
        if dd <= slack {
            // a single ball is the enclosing ball
            return Ok(true);
        }
        dirs.push(linalg::scale(&sub(&ball.center, p), 1.0 / dd));
    }
    if dirs.is_empty() {
        return Ok(false);
    }
    let d = f.dim();
    let m = dirs.len();
    let mut lp = LinearProgram::new(m).all_nonnegative();
    lp.constrain(vec![1.0; m], Relation::Eq, 1.0);
    for j in 0..d {
        let row: Vec<f64> = dirs.iter().map(|u| u[j]).collect();
        lp.constrain(row.clone(), Relation::Le, 1e-7);
        lp.constrain(row, Relation::Ge, -1e-7);
    }
    Ok(solve_lp(&lp, tol)?.status == LpStatus::Optimal)
}

/// The bent chain: `p₂` at height `δ` above the line through `p₁` and `pₙ`,
/// `p₁` touching `p₂`, and `p₂, …, pₙ` collinear with consecutive balls
/// touching. `δ = 0` gives the straight chain.
pub fn stability_construction(taus: &[f64], delta: f64) -> Result<BallFamily> {
    let n = taus.len();
    if n < 3 {
        return Err(Error::invalid("bent chain needs at least three balls"));
    }
    if taus.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::invalid("radii must be positive and finite"));
    }
    if !(delta >= 0.0 && delta < taus[1]) {
        return Err(Error::invalid(format!("delta must lie in [0, tau_2), got {delta}")));
    }
    let a = taus[0] + taus[1];
    let b: f64 = (1..n - 1).map(|i| taus[i] + taus[i + 1]).sum();
    let p1 = vec![-libm::sqrt(a * a - delta * delta), 0.0];
    let p2 = vec![0.0, delta];
    let pn = vec![libm::sqrt(b * b - delta * delta), 0.0];
    let step = linalg::scale(&sub(&pn, &p2), 1.0 / b);
    let mut centers = vec![p1, p2.clone()];
    let mut s = 0.0;
    for i in 1..n - 2 {
        s += taus[i] + taus[i + 1];
        centers.push(linalg::axpy(&p2, s, &step));
    }
    centers.push(pn);
    BallFamily::new(centers, taus.to_vec())
}

/// `Στᵢ − circumradius`.
pub fn epsilon(f: &BallFamily, tol: &ToleranceContext) -> Result<f64> {
    Ok(f.total_radius() - ball_circumradius(f, tol)?.radius)
}

/// Total-least-squares line through the points: centroid and unit direction.
pub fn tls_line(points: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<f64>)> {
    if points.is_empty() {
        return Err(Error::invalid("no points"));
    }
    let m = linalg::centroid(points);
    let d = m.len();
    let mut cov = Matrix::zeros(d, d);
    for p in points {
        let q = sub(p, &m);
        for r in 0..d {
            for s in 0..d {
                cov[(r, s)] += q[r] * q[s];
            }
        }
    }
    Ok((m, principal_eigenvector(cov)))
}

/// Largest distance of the points from their total-least-squares line.
pub fn line_deviation(points: &[Vec<f64>]) -> Result<f64> {
    let (m, u) = tls_line(points)?;
    Ok(points
        .iter()
        .map(|p| {
            let q = sub(p, &m);
            norm(&linalg::axpy(&q, -dot(&q, &u), &u))
        })
        .fold(0.0, f64::max))
}

/// Cyclic Jacobi on a small symmetric matrix.
fn principal_eigenvector(mut a: Matrix) -> Vec<f64> {
    let d = a.rows();
    let mut v = Matrix::identity(d);
    for _ in 0..100 {
        let mut off = 0.0;
        for r in 0..d {
            for s in r + 1..d {
                off += a[(r, s)] * a[(r, s)];
            }
        }
        if off <= 1e-30 * (1.0 + a.max_abs() * a.max_abs()) {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                if a[(p, q)].abs() < 1e-300 {
                    continue;
                }
                let theta = 0.5 * libm::atan2(2.0 * a[(p, q)], a[(q, q)] - a[(p, p)]);
                let (sn, cs) = (libm::sin(theta), libm::cos(theta));
                for k in 0..d {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = cs * akp - sn * akq;
                    a[(k, q)] = sn * akp + cs * akq;
                }
                for k in 0..d {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = cs * apk - sn * aqk;
                    a[(q, k)] = sn * apk + cs * aqk;
                }
                for k in 0..d {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = cs * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + cs * vkq;
                }
            }
        }
    }
    let top = (0..d).max_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)])).unwrap_or(0);
    v.col(top)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityRow {
    pub delta: f64,
    pub epsilon: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityFit {
    /// Slope of `log(deviation)` against `log(ε)`.
    pub slope: f64,
    /// Slope of `log(ε)` against `log(δ)`.
    pub epsilon_slope: f64,
    /// Every evaluated row, including dropped ones.
    pub rows: Vec<StabilityRow>,
    /// Number of rows used in the fits.
    pub used: usize,
}

/// Evaluates the bent chain on every `δ` and fits the two log-log slopes.
/// Rows with `ε < 1e-12` are dropped from the fits.
pub fn stability_exponent(taus: &[f64], deltas: &[f64], tol: &ToleranceContext) -> Result<StabilityFit> {
    let positive: Vec<f64> = deltas.iter().cloned().filter(|&d| d > 0.0).collect();
    if deltas.len() < 5 {
        return Err(Error::invalid("need at least five delta values"));
    }
    let (lo, hi) = positive
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &d| (lo.min(d), hi.max(d)));
    if positive.is_empty() || hi / lo < 100.0 * (1.0 - 1e-12) {
        return Err(Error::invalid("delta values must span at least two decades"));
    }
    let mut rows = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let f = stability_construction(taus, delta)?;
        rows.push(StabilityRow { delta, epsilon: epsilon(&f, tol)?, deviation: line_deviation(f.centers())? });
    }
    let kept: Vec<&StabilityRow> = rows.iter().filter(|r| r.epsilon >= 1e-12 && r.deviation > 0.0).collect();
    if kept.len() < 3 {
        return Err(Error::invalid(format!("only {} rows with epsilon >= 1e-12", kept.len())));
    }
    let le: Vec<f64> = kept.iter().map(|r| libm::log(r.epsilon)).collect();
    let ld: Vec<f64> = kept.iter().map(|r| libm::log(r.deviation)).collect();
    let lt: Vec<f64> = kept.iter().map(|r| libm::log(r.delta)).collect();
    Ok(StabilityFit { slope: ls_slope(&le, &ld), epsilon_slope: ls_slope(&lt, &le), used: kept.len(), rows })
}

/// Least-squares slope of `y` on `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubeCounterexample {
    pub family: HomotheticFamily,
    /// Edge length of the smallest cube containing the union.
    pub circumradius: f64,
    pub epsilon: f64,
    pub deviation: f64,
    pub ns: bool,
}

/// `n` unit cubes at `(k, k mod 2, 0, …)`: the containing cube has edge `n`
/// (so `ε = 0`) yet the centers zigzag off every line.
pub fn cube_counterexample(n: usize, d: usize, tol: &ToleranceContext) -> Result<CubeCounterexample> {
    if n < 3 || d < 2 {
        return Err(Error::invalid("cube counterexample needs n >= 3 and d >= 2"));
    }
    let xs: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let mut x = vec![0.0; d];
            x[0] = k as f64;
            x[1] = (k % 2) as f64;
            x
        })
        .collect();
    let family = HomotheticFamily::translates(Polytope::cube(d, 0.5), xs.clone())?;
    let cover = lambda_min(&family, tol)?;
    let circumradius = cover.lambda * family.total_ratio();
    let ns = family.is_ns(tol)?;
    Ok(CubeCounterexample {
        epsilon: family.total_ratio() - circumradius,
        deviation: line_deviation(&xs)?,
        circumradius,
        ns,
        family,
    })
}
