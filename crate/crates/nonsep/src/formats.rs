//! JSON wire formats and their conversions to and from the core types.

use nonsep_core::covering::CoverResult;
use nonsep_core::separability::{Bipartition, Flat, GapWitness, Member};
use nonsep_core::{Facet, HomotheticFamily, IntegerCubeFamily, Lattice, Polytope, ToleranceContext};
use serde::{Deserialize, Serialize};

use crate::Error;

/// `{"dim", "facets": [{"a", "b"}], "vertices"}`; either list may be omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<FacetJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacetJson {
    pub a: Vec<f64>,
    pub b: f64,
}

impl PolytopeJson {
    pub fn to_polytope(&self, tol: &ToleranceContext) -> Result<Polytope, Error> {
        let facets = self
            .facets
            .as_ref()
            .map(|fs| fs.iter().map(|f| Facet::new(f.a.clone(), f.b)).collect::<Result<Vec<_>, _>>())
            .transpose()?;
        let p = match (facets, &self.vertices) {
            (Some(fs), Some(vs)) => Polytope::from_parts(self.dim, fs, vs.clone(), tol)?,
            (Some(fs), None) => Polytope::from_facets(self.dim, fs, tol)?,
            (None, Some(vs)) => {
                if let Some(v) = vs.iter().find(|v| v.len() != self.dim) {
                    return Err(Error::Input(format!("vertex {v:?} is not {}-dimensional", self.dim)));
                }
                Polytope::from_vertices(vs.clone(), tol)?
            }
            (None, None) => return Err(Error::Input("polytope needs facets or vertices".into())),
        };
        if p.dim() != self.dim {
            return Err(Error::Input(format!("declared dim {} but data is {}-dimensional", self.dim, p.dim())));
        }
        Ok(p)
    }

    pub fn from_polytope(p: &Polytope) -> Self {
        Self {
            dim: p.dim(),
            facets: Some(p.facets().iter().map(|f| FacetJson { a: f.normal.clone(), b: f.offset }).collect()),
            vertices: Some(p.vertices().to_vec()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberJson {
    pub x: Vec<f64>,
    pub tau: f64,
}

/// `{"base": <polytope>, "members": [{"x", "tau"}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub base: PolytopeJson,
    pub members: Vec<MemberJson>,
}

impl FamilyJson {
    pub fn to_family(&self, tol: &ToleranceContext) -> Result<HomotheticFamily, Error> {
        let base = self.base.to_polytope(tol)?;
        let members = self.members.iter().map(|m| Member { x: m.x.clone(), tau: m.tau }).collect();
        Ok(HomotheticFamily::new(base, members)?)
    }

    pub fn from_family(f: &HomotheticFamily) -> Self {
        Self {
            base: PolytopeJson::from_polytope(f.base()),
            members: f.members().iter().map(|m| MemberJson { x: m.x.clone(), tau: m.tau }).collect(),
        }
    }
}

/// `{"basis": [[...], ...]}`, one inner list per basis vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeJson {
    pub basis: Vec<Vec<f64>>,
}

impl LatticeJson {
    pub fn to_lattice(&self) -> Result<Lattice, Error> {
        let d = self.basis.len();
        if d == 0 || self.basis.iter().any(|b| b.len() != d) {
            return Err(Error::Input("lattice basis must be d vectors of length d".into()));
        }
        Ok(Lattice::from_columns(&self.basis)?)
    }

    pub fn from_lattice(l: &Lattice) -> Self {
        Self { basis: l.basis_vectors() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverJson {
    pub t: Vec<f64>,
    pub lambda: f64,
    pub certified: bool,
}

impl From<&CoverResult> for CoverJson {
    fn from(c: &CoverResult) -> Self {
        Self { t: c.t.clone(), lambda: c.lambda, certified: c.certified }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatJson {
    pub point: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
}

/// `{"direction", "gap"}` or `{"flat": {"point", "basis"}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessJson {
    Gap { direction: Vec<f64>, gap: f64 },
    Flat { flat: FlatJson },
}

impl From<&GapWitness> for WitnessJson {
    fn from(w: &GapWitness) -> Self {
        WitnessJson::Gap { direction: w.direction.clone(), gap: w.gap }
    }
}

impl From<&Flat> for WitnessJson {
    fn from(f: &Flat) -> Self {
        WitnessJson::Flat { flat: FlatJson { point: f.point.clone(), basis: f.basis.clone() } }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitJson {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl From<&Bipartition> for SplitJson {
    fn from(b: &Bipartition) -> Self {
        Self { left: b.left.clone(), right: b.right.clone() }
    }
}

/// `{"d": 2, "offsets": [[...]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubeFamilyJson {
    pub d: usize,
    pub offsets: Vec<Vec<i64>>,
}

impl CubeFamilyJson {
    pub fn to_family(&self) -> Result<IntegerCubeFamily, Error> {
        Ok(IntegerCubeFamily::new(self.d, self.offsets.clone())?)
    }

    pub fn from_family(f: &IntegerCubeFamily) -> Self {
        let mut offsets = f.offsets().to_vec();
        offsets.sort();
        Self { d: f.dim(), offsets }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaJson {
    pub sigma: f64,
    pub q: Vec<f64>,
}
