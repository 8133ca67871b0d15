/// Thresholds used by every floating point predicate in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceContext {
    /// Geometric tolerance: vertex/facet incidence, rank, containment.
    pub geom: f64,
    /// Feasibility tolerance of the simplex solver.
    pub lp: f64,
    /// Minimum width of a 1-D gap that certifies strict separation.
    pub gap: f64,
}

impl Default for ToleranceContext {
    fn default() -> Self {
        Self { geom: 1e-9, lp: 1e-8, gap: 1e-9 }
    }
}

impl ToleranceContext {
    /// Returns `None` unless all three tolerances are strictly positive and finite.
    pub fn new(geom: f64, lp: f64, gap: f64) -> Option<Self> {
        let ok = |t: f64| t.is_finite() && t > 0.0;
        (ok(geom) && ok(lp) && ok(gap)).then_some(Self { geom, lp, gap })
    }

    /// All three thresholds set to `t`.
    pub fn uniform(t: f64) -> Option<Self> {
        Self::new(t, t, t)
    }
}
