use nonsep::formats::{CubeFamilyJson, FamilyJson, LatticeJson, PolytopeJson};
use nonsep_core::linalg;
use nonsep_core::random::{random_invertible, random_polytope, rng_from_seed};
use nonsep_core::separability::random_wns_family;
use nonsep_core::{Lattice, ToleranceContext};
use proptest::prelude::*;

fn tc() -> ToleranceContext {
    ToleranceContext::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn polytope_survives_json(seed in any::<u64>(), d in 2usize..=3, facets_only in any::<bool>()) {
        let mut rng = rng_from_seed(seed);
        let p = random_polytope(&mut rng, d, 8, &tc());
        let mut j = PolytopeJson::from_polytope(&p);
        if facets_only {
            j.vertices = None;
        } else {
            j.facets = None;
        }
        let text = serde_json::to_string(&j).unwrap();
        let q = serde_json::from_str::<PolytopeJson>(&text).unwrap().to_polytope(&tc()).unwrap();
        prop_assert_eq!(p.vertices().len(), q.vertices().len());
        for v in p.vertices() {
            prop_assert!(q.vertices().iter().any(|w| linalg::max_abs_diff(v, w) < 1e-9));
        }
    }

    #[test]
    fn family_and_lattice_survive_json(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = rng_from_seed(seed);
        let base = random_polytope(&mut rng, 2, 6, &tc());
        let f = random_wns_family(&base, n, &mut rng, &tc()).unwrap();
        let text = serde_json::to_string(&FamilyJson::from_family(&f)).unwrap();
        let g = serde_json::from_str::<FamilyJson>(&text).unwrap().to_family(&tc()).unwrap();
        prop_assert_eq!(f.members(), g.members());
        prop_assert_eq!(f.is_wns(&tc()), g.is_wns(&tc()));

        let l = Lattice::new(random_invertible(&mut rng, 3)).unwrap();
        let text = serde_json::to_string(&LatticeJson::from_lattice(&l)).unwrap();
        let m = serde_json::from_str::<LatticeJson>(&text).unwrap().to_lattice().unwrap();
        prop_assert_eq!(l.basis_vectors(), m.basis_vectors());
    }

    #[test]
    fn cube_family_survives_json(cells in prop::collection::btree_set((0i64..6, 0i64..6), 1..8)) {
        let offsets: Vec<Vec<i64>> = cells.iter().map(|&(x, y)| vec![x, y]).collect();
        let j = CubeFamilyJson { d: 2, offsets };
        let text = serde_json::to_string(&j).unwrap();
        let f = serde_json::from_str::<CubeFamilyJson>(&text).unwrap().to_family().unwrap();
        prop_assert_eq!(CubeFamilyJson::from_family(&f), j);
    }
}
