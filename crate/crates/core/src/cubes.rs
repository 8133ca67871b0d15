//! Integer families of unit cubes `offset + [0,1]ᵈ`.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg;
use crate::polytope::{measure, MeasureKind, Polytope};
use crate::{Error, Result, ToleranceContext};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerCubeFamily {
    dim: usize,
    offsets: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Area,
    Perimeter,
    Volume,
}

impl IntegerCubeFamily {
    pub fn new(dim: usize, offsets: Vec<Vec<i64>>) -> Result<Self> {
        if dim == 0 || offsets.is_empty() {
            return Err(Error::invalid("need a positive dimension and at least one cube"));
        }
        if let Some(o) = offsets.iter().find(|o| o.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: o.len() });
        }
        let mut sorted = offsets.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("cube offsets must be distinct"));
        }
        Ok(Self { dim, offsets })
    }

    pub fn planar(offsets: &[[i64; 2]]) -> Result<Self> {
        Self::new(2, offsets.iter().map(|o| o.to_vec()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn offsets(&self) -> &[Vec<i64>] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    /// Occupied slab indices along every axis must be consecutive.
    pub fn is_wns(&self) -> bool {
        (0..self.dim).all(|j| {
            let mut s: Vec<i64> = self.offsets.iter().map(|o| o[j]).collect();
            s.sort_unstable();
            s.dedup();
            s.windows(2).all(|w| w[1] == w[0] + 1)
        })
    }

    /// `(lo, hi)` with the union inside `∏ [loⱼ, hiⱼ]`.
    pub fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = vec![i64::MAX; self.dim];
        let mut hi = vec![i64::MIN; self.dim];
        for o in &self.offsets {
            for j in 0..self.dim {
                lo[j] = lo[j].min(o[j]);
                hi[j] = hi[j].max(o[j] + 1);
            }
        }
        (lo, hi)
    }

    pub fn extents(&self) -> Vec<i64> {
        let (lo, hi) = self.bounding_box();
        lo.iter().zip(&hi).map(|(a, b)| b - a).collect()
    }

    /// Translate so the bounding box starts at the origin; offsets sorted.
    pub fn normalized(&self) -> Self {
        let (lo, _) = self.bounding_box();
        let mut offsets: Vec<Vec<i64>> = self.offsets.iter().map(|o| o.iter().zip(&lo).map(|(a, b)| a - b).collect()).collect();
        offsets.sort();
        Self { dim: self.dim, offsets }
    }

    fn corners(&self) -> Vec<Vec<i64>> {
        let mut pts = Vec::with_capacity(self.len() << self.dim);
        for o in &self.offsets {
            for mask in 0..(1usize << self.dim) {
                pts.push((0..self.dim).map(|j| o[j] + (mask >> j & 1) as i64).collect());
            }
        }
        pts
    }

    /// Twice the hull area, exact (d = 2).
    pub fn hull_area_doubled(&self) -> Result<i64> {
        let hull = planar_hull(&self.planar_corners()?);
        Ok(doubled_area(&hull))
    }

    fn planar_corners(&self) -> Result<Vec<[i64; 2]>> {
        if self.dim != 2 {
            return Err(Error::Unsupported(alloc::format!("planar hull metrics in dimension {}", self.dim)));
        }
        Ok(self.corners().into_iter().map(|p| [p[0], p[1]]).collect())
    }

    /// `(area, perimeter)` of the convex hull of the union (d = 2).
    pub fn hull_metrics(&self) -> Result<(f64, f64)> {
        let hull = planar_hull(&self.planar_corners()?);
        Ok((doubled_area(&hull) as f64 / 2.0, perimeter(&hull)))
    }

    pub fn objective(&self, objective: Objective) -> Result<f64> {
        match (objective, self.dim) {
            (Objective::Area, 2) => Ok(self.hull_metrics()?.0),
            (Objective::Perimeter, 2) => Ok(self.hull_metrics()?.1),
            (Objective::Volume, 2) => Ok(self.hull_metrics()?.0),
            (Objective::Volume, 3) => {
                let pts = self.corners().into_iter().map(|p| p.into_iter().map(|v| v as f64).collect()).collect();
                measure(&Polytope::from_vertices(pts, &ToleranceContext::default())?, MeasureKind::Volume)
            }
            _ => Err(Error::Unsupported(alloc::format!("{objective:?} in dimension {}", self.dim))),
        }
    }
}

fn cross(o: [i64; 2], a: [i64; 2], b: [i64; 2]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Exact monotone-chain hull, counter-clockwise, without collinear points.
fn planar_hull(points: &[[i64; 2]]) -> Vec<[i64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<[i64; 2]> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

fn doubled_area(h: &[[i64; 2]]) -> i64 {
    let n = h.len();
    (0..n).map(|i| h[i][0] * h[(i + 1) % n][1] - h[i][1] * h[(i + 1) % n][0]).sum::<i64>().abs()
}

fn perimeter(h: &[[i64; 2]]) -> f64 {
    let n = h.len();
    (0..n)
        .map(|i| {
            let (dx, dy) = (h[(i + 1) % n][0] - h[i][0], h[(i + 1) % n][1] - h[i][1]);
            libm::sqrt((dx * dx + dy * dy) as f64)
        })
        .sum()
}

/// Closed-form maxima for n ≥ 4: area `n² − 2n + 4`, perimeter `4 + 4√(n² − 4n + 5)`.
pub fn extremal_values(n: u64) -> (u64, f64) {
    let n2 = n * n;
    (n2 - 2 * n + 4, 4.0 + 4.0 * libm::sqrt((n2 - 4 * n + 5) as f64))
}

/// The extremal planar family: corners `(1,0), (n−1,1), (n−2,n−1), (0,n−2)`
/// and diagonal cells `(k,k)` for `k = 2..=n−3`.
pub fn construct_extremal(n: usize) -> Result<IntegerCubeFamily> {
    if n < 4 {
        return Err(Error::invalid("the extremal construction needs n >= 4"));
    }
    let m = n as i64;
    let mut offsets = vec![vec![1, 0], vec![m - 1, 1], vec![m - 2, m - 1], vec![0, m - 2]];
    for k in 2..=m - 3 {
        offsets.push(vec![k, k]);
    }
    IntegerCubeFamily::new(2, offsets)
}

/// One greedy shadow-system step per iteration until every extent equals `n`.
///
/// A cube sharing its slab along a short axis is moved to just below or
/// just above the current range along that axis; the better end is kept.
/// Along the segment joining the two ends the hull measure is convex, so the
/// chosen end never does worse than the current position.
pub fn shadow_normalize(f: &IntegerCubeFamily, objective: Objective) -> Result<ShadowTrace> {
    if !f.is_wns() {
        return Err(Error::NotNonSeparable);
    }
    let n = f.len() as i64;
    let mut cur = f.normalized();
    let mut values = vec![cur.objective(objective)?];
    loop {
        let ext = cur.extents();
        let Some(axis) = (0..cur.dim).find(|&j| ext[j] < n) else { break };
        let (lo, hi) = cur.bounding_box();
        let mut best: Option<(f64, IntegerCubeFamily)> = None;
        for k in 0..cur.len() {
            let s = cur.offsets[k][axis];
            if cur.offsets.iter().filter(|o| o[axis] == s).count() < 2 {
                continue;
            }
            for target in [lo[axis] - 1, hi[axis]] {
                let mut offsets = cur.offsets.clone();
                offsets[k][axis] = target;
                let cand = IntegerCubeFamily { dim: cur.dim, offsets }.normalized();
                let v = cand.objective(objective)?;
                let better = match &best {
                    None => true,
                    Some((bv, bf)) => v > *bv + 1e-12 || ((v - bv).abs() <= 1e-12 && cand.offsets < bf.offsets),
                };
                if better {
                    best = Some((v, cand));
                }
            }
        }
        let (v, next) = best.expect("a short WNS axis always has a shared slab");
        debug_assert!(next.is_wns());
        values.push(v);
        cur = next;
    }
    Ok(ShadowTrace { family: cur, values })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShadowTrace {
    pub family: IntegerCubeFamily,
    /// Objective before the first and after every move.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub family: IntegerCubeFamily,
    pub value: f64,
    /// WNS placements (up to symmetry) whose objective was evaluated.
    pub evaluated: u64,
}

/// The eight symmetries of the `side × side` grid applied to a cell.
fn dihedral(cell: [i64; 2], g: usize, side: i64) -> [i64; 2] {
    let m = side - 1;
    let [x, y] = cell;
    match g {
        0 => [x, y],
        1 => [m - y, x],
        2 => [m - x, m - y],
        3 => [y, m - x],
        4 => [m - x, y],
        5 => [x, m - y],
        6 => [y, x],
        _ => [m - y, m - x],
    }
}

fn is_canonical(cells: &[[i64; 2]], side: i64) -> bool {
    let mut orig = cells.to_vec();
    orig.sort_unstable();
    (1..8).all(|g| {
        let mut img: Vec<[i64; 2]> = cells.iter().map(|&c| dihedral(c, g, side)).collect();
        img.sort_unstable();
        orig <= img
    })
}

/// Exhaustive maximum over WNS placements of `n` cells in the `n × n` grid.
pub fn exhaustive_max(n: usize, objective: Objective) -> Result<SearchResult> {
    if !(4..=6).contains(&n) {
        return Err(Error::invalid("exhaustive search supports 4 <= n <= 6"));
    }
    exhaustive_max_in_box(n, n, objective)
}

/// Exhaustive maximum over WNS placements of `n` cells in a `side × side` grid,
/// reduced by the dihedral group; ties go to the lexicographically first placement.
pub fn exhaustive_max_in_box(n: usize, side: usize, objective: Objective) -> Result<SearchResult> {
    if objective == Objective::Volume {
        return Err(Error::Unsupported("planar search maximizes area or perimeter".into()));
    }
    if n == 0 || side == 0 || linalg::binomial(side * side, n) > 50_000_000 {
        return Err(Error::invalid("search space out of range"));
    }
    let s = side as i64;
    let cells: Vec<[i64; 2]> = (0..s).flat_map(|y| (0..s).map(move |x| [x, y])).collect();
    let mut best: Option<(f64, i64, Vec<[i64; 2]>)> = None;
    let mut evaluated = 0u64;
    let mut chosen: Vec<[i64; 2]> = Vec::with_capacity(n);
    let mut xs = vec![0u8; side];
    let mut ys = vec![0u8; side];
    linalg::for_each_combination(cells.len(), n, |idx| {
        xs.iter_mut().for_each(|v| *v = 0);
        ys.iter_mut().for_each(|v| *v = 0);
        for &i in idx {
            xs[cells[i][0] as usize] = 1;
            ys[cells[i][1] as usize] = 1;
        }
        if !contiguous(&xs) || !contiguous(&ys) {
            return true;
        }
        chosen.clear();
        chosen.extend(idx.iter().map(|&i| cells[i]));
        if !is_canonical(&chosen, s) {
            return true;
        }
        evaluated += 1;
        let corners: Vec<[i64; 2]> = chosen
            .iter()
            .flat_map(|c| [[c[0], c[1]], [c[0] + 1, c[1]], [c[0], c[1] + 1], [c[0] + 1, c[1] + 1]])
            .collect();
        let hull = planar_hull(&corners);
        let (value, key) = match objective {
            Objective::Area => {
                let a2 = doubled_area(&hull);
                (a2 as f64 / 2.0, a2)
            }
            _ => (perimeter(&hull), 0),
        };
        let better = match &best {
            None => true,
            Some((bv, bk, _)) => match objective {
                Objective::Area => key > *bk,
                _ => value > *bv + 1e-12,
            },
        };
        if better {
            best = Some((value, key, chosen.clone()));
        }
        true
    });
    let (value, _, cells) = best.ok_or_else(|| Error::invalid("no WNS placement exists"))?;
    let family = IntegerCubeFamily::planar(&cells)?;
    Ok(SearchResult { family, value, evaluated })
}

fn contiguous(occ: &[u8]) -> bool {
    let first = occ.iter().position(|&v| v == 1);
    let last = occ.iter().rposition(|&v| v == 1);
    match (first, last) {
        (Some(a), Some(b)) => occ[a..=b].iter().all(|&v| v == 1),
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> IntegerCubeFamily {
        IntegerCubeFamily::planar(&[[1, 0], [4, 1], [3, 4], [0, 3], [2, 2]]).unwrap()
    }

    #[test]
    fn wns_examples() {
        assert!(f5().is_wns());
        assert!(!IntegerCubeFamily::planar(&[[0, 0], [2, 2]]).unwrap().is_wns());
        assert!(IntegerCubeFamily::planar(&[[0, 0], [1, 1]]).unwrap().is_wns());
        assert!(IntegerCubeFamily::planar(&[[0, 0], [0, 0]]).is_err());
    }

    #[test]
    fn bounding_box_examples() {
        assert_eq!(f5().bounding_box(), (vec![0, 0], vec![5, 5]));
        assert_eq!(IntegerCubeFamily::planar(&[[3, -2]]).unwrap().bounding_box(), (vec![3, -2], vec![4, -1]));
        assert_eq!(IntegerCubeFamily::planar(&[[0, 0], [1, 0]]).unwrap().bounding_box(), (vec![0, 0], vec![2, 1]));
    }

    #[test]
    fn extremal_construction() {
        let f4 = construct_extremal(4).unwrap();
        let mut o = f4.offsets().to_vec();
        o.sort();
        assert_eq!(o, vec![vec![0, 2], vec![1, 0], vec![2, 3], vec![3, 1]]);
        let mut a = construct_extremal(5).unwrap().offsets().to_vec();
        let mut b = f5().offsets().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        for n in 4..=12u64 {
            let f = construct_extremal(n as usize).unwrap();
            assert!(f.is_wns());
            assert_eq!(f.bounding_box(), (vec![0, 0], vec![n as i64, n as i64]));
            let (area, perim) = extremal_values(n);
            assert_eq!(f.hull_area_doubled().unwrap(), 2 * area as i64);
            assert!((f.hull_metrics().unwrap().1 - perim).abs() < 1e-9);
        }
        assert!(construct_extremal(3).is_err());
    }

    #[test]
    fn hull_metric_examples() {
        let (a, p) = construct_extremal(4).unwrap().hull_metrics().unwrap();
        assert_eq!(a, 12.0);
        assert!((p - (4.0 + 4.0 * libm::sqrt(5.0))).abs() < 1e-12);
        let row = IntegerCubeFamily::planar(&[[0, 0], [1, 0], [2, 0], [3, 0]]).unwrap();
        assert_eq!(row.hull_metrics().unwrap(), (4.0, 10.0));
        let (a, p) = f5().hull_metrics().unwrap();
        assert_eq!(a, 19.0);
        assert!((p - (4.0 + 4.0 * libm::sqrt(10.0))).abs() < 1e-12);
    }

    #[test]
    fn shadow_examples() {
        let col = IntegerCubeFamily::planar(&[[0, 0], [0, 1], [0, 2], [0, 3], [0, 4]]).unwrap();
        let t = shadow_normalize(&col, Objective::Area).unwrap();
        assert!(t.values.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        assert_eq!(t.family.extents(), vec![5, 5]);
        assert!(t.family.is_wns() && t.values.last().unwrap() > &t.values[0]);
        let fixed = shadow_normalize(&construct_extremal(6).unwrap(), Objective::Perimeter).unwrap();
        assert_eq!(fixed.values.len(), 1);
        let pair = shadow_normalize(&IntegerCubeFamily::planar(&[[0, 0], [0, 1]]).unwrap(), Objective::Area).unwrap();
        assert_eq!(pair.family.extents(), vec![2, 2]);
        let cubes = IntegerCubeFamily::new(3, vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 0, 2]]).unwrap();
        let t = shadow_normalize(&cubes, Objective::Volume).unwrap();
        assert_eq!(t.family.extents(), vec![3, 3, 3]);
        assert!(t.values.windows(2).all(|w| w[1] >= w[0] - 1e-9));
        assert!(shadow_normalize(&cubes, Objective::Area).is_err());
    }

    #[test]
    fn exhaustive_small_cases() {
        let r = exhaustive_max(4, Objective::Area).unwrap();
        assert_eq!(r.value, 12.0);
        assert_eq!(r.family.extents(), vec![4, 4]);
        // perimeter optimum beats the staircase value; witness {(0,0),(3,1),(2,2),(1,3)}
        let r = exhaustive_max(4, Objective::Perimeter).unwrap();
        let best = 4.0 + 2.0 * libm::sqrt(10.0) + 2.0 * libm::sqrt(2.0);
        assert!((r.value - best).abs() < 1e-9, "{}", r.value);
        assert!(r.value > extremal_values(4).1 + 0.2);
        let w = IntegerCubeFamily::planar(&[[0, 0], [3, 1], [2, 2], [1, 3]]).unwrap();
        assert!(w.is_wns());
        assert!((w.objective(Objective::Perimeter).unwrap() - best).abs() < 1e-9);
        assert!(exhaustive_max(3, Objective::Area).is_err());
    }

    #[test]
    fn canonical_orbits_cover_the_grid() {
        // every WNS placement is in the orbit of exactly one canonical one
        let s = 3i64;
        let mut total = 0;
        let mut canon = 0;
        let cells: Vec<[i64; 2]> = (0..s).flat_map(|y| (0..s).map(move |x| [x, y])).collect();
        linalg::for_each_combination(9, 3, |idx| {
            let c: Vec<[i64; 2]> = idx.iter().map(|&i| cells[i]).collect();
            total += 1;
            if is_canonical(&c, s) {
                canon += 1;
            }
            true
        });
        // Burnside: 84 three-subsets of a 3×3 grid fall into 16 orbits.
        assert_eq!(total, 84);
        assert_eq!(canon, 16);
    }
}
