//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

use std::process::ExitCode;
use std::time::Instant;

use nonsep_core::asymmetry::{sigma_bisection, sigma_lp};
use nonsep_core::covering::{is_summand, lambda_min, lutwak_check, sigma_cover, weighted_cover, wip_summand_check};
use nonsep_core::cubes::{construct_extremal, exhaustive_max, extremal_values, Objective};
use nonsep_core::lattice::kronecker_gap;
use nonsep_core::linalg::{self, Matrix};
use nonsep_core::polytope::genericize;
use nonsep_core::random::{random_invertible, random_polytope, random_simplex, random_symmetric_polytope, rng_from_seed, DetRng};
use nonsep_core::separability::{random_wns_family, Member};
use nonsep_core::stability::{cube_counterexample, stability_exponent};
use nonsep_core::{HomotheticFamily, Lattice, LatticeArrangement, Polytope, ToleranceContext};
use rand::Rng;

type Outcome = Result<String, String>;

fn tc() -> ToleranceContext {
    ToleranceContext::default()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn symmetric_base(rng: &mut DetRng, d: usize) -> (Polytope, &'static str) {
    match (d, rng.random_range(0..3)) {
        (2, 2) => (Polytope::regular_polygon(6, rng.random_range(0.5..1.5), rng.random_range(0.0..1.0)).unwrap(), "hexagon"),
        (_, 1) => (Polytope::cross_polytope(d, rng.random_range(0.5..1.5)), "cross-polytope"),
        _ => {
            let h: Vec<f64> = (0..d).map(|_| rng.random_range(0.3..1.5)).collect();
            let lo: Vec<f64> = h.iter().map(|x| -x).collect();
            (Polytope::axis_box(&lo, &h).unwrap(), "box")
        }
    }
}

fn symmetric_covering() -> Outcome {
    let mut rng = rng_from_seed(101);
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let d = 2 + i % 2;
        let (base, kind) = symmetric_base(&mut rng, d);
        let n = rng.random_range(2..=8);
        let f = random_wns_family(&base, n, &mut rng, &tc()).map_err(|e| e.to_string())?;
        let r = lambda_min(&f, &tc()).map_err(|e| e.to_string())?;
        ensure(r.lambda <= 1.0 + 1e-7, || format!("family {i} ({kind}, d={d}): lambda {}", r.lambda))?;
        let w = weighted_cover(&f, &tc()).map_err(|e| e.to_string())?;
        ensure(w.certified, || format!("family {i} ({kind}, d={d}): weighted cover not certified"))?;
        worst = worst.max(r.lambda);
    }
    Ok(format!("200 families, max lambda {worst:.9}"))
}

fn simplex_bound() -> Outcome {
    let mut rng = rng_from_seed(202);
    let mut worst = [0.0f64; 5];
    for i in 0..200 {
        let d = 2 + i % 3;
        let base = random_simplex(&mut rng, d, &tc());
        let n = rng.random_range(2..=8);
        let f = random_wns_family(&base, n, &mut rng, &tc()).map_err(|e| e.to_string())?;
        let r = lambda_min(&f, &tc()).map_err(|e| e.to_string())?;
        let bound = 0.5 * (d as f64 + 1.0);
        ensure(r.lambda <= bound + 1e-7, || format!("family {i} (d={d}): lambda {} > {bound}", r.lambda))?;
        worst[d] = worst[d].max(r.lambda);
    }
    Ok(format!("max lambda d=2 {:.6}, d=3 {:.6}, d=4 {:.6}", worst[2], worst[3], worst[4]))
}

fn sigma_covering() -> Outcome {
    let mut rng = rng_from_seed(303);
    for i in 0..100 {
        let d = 2 + i % 2;
        let nv = 4 + d + rng.random_range(0..4);
        let base = random_polytope(&mut rng, d, nv, &tc());
        let n = rng.random_range(2..=7);
        let f = random_wns_family(&base, n, &mut rng, &tc()).map_err(|e| e.to_string())?;
        let asym = sigma_lp(&base, &tc()).map_err(|e| e.to_string())?;
        let c = sigma_cover(&f, &asym, &tc()).map_err(|e| e.to_string())?;
        ensure(c.certified, || format!("family {i} (d={d}, sigma {}): cover not certified", asym.sigma))?;
    }
    Ok("100 families certified".into())
}

fn asymmetry_values() -> Outcome {
    let mut out = Vec::new();
    for d in 2..=4 {
        let p = Polytope::standard_simplex(d);
        let a = sigma_lp(&p, &tc()).map_err(|e| e.to_string())?.sigma;
        let b = sigma_bisection(&p, &tc()).map_err(|e| e.to_string())?.sigma;
        ensure((a - d as f64).abs() <= 1e-6 && (b - d as f64).abs() <= 1e-6, || format!("simplex d={d}: lp {a}, bisection {b}"))?;
        out.push(format!("d={d} {a:.9}"));
    }
    for p in [Polytope::cube(3, 1.0), Polytope::cross_polytope(3, 1.0), Polytope::regular_polygon(6, 1.0, 0.2).unwrap()] {
        let a = sigma_lp(&p, &tc()).map_err(|e| e.to_string())?.sigma;
        let b = sigma_bisection(&p, &tc()).map_err(|e| e.to_string())?.sigma;
        ensure((a - 1.0).abs() <= 1e-6 && (b - 1.0).abs() <= 1e-6, || format!("symmetric body: lp {a}, bisection {b}"))?;
    }
    Ok(format!("simplices {}; symmetric bodies 1", out.join(", ")))
}

fn cube_extremals() -> Outcome {
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    for n in 4..=6usize {
        let (area, perim) = extremal_values(n as u64);
        let a = exhaustive_max(n, Objective::Area).map_err(|e| e.to_string())?;
        if a.value != area as f64 {
            failures.push(format!("n={n} area {} != {area}", a.value));
        }
        let p = exhaustive_max(n, Objective::Perimeter).map_err(|e| e.to_string())?;
        if (p.value - perim).abs() > 1e-9 {
            let mut cells = p.family.offsets().to_vec();
            cells.sort();
            failures.push(format!("n={n} perimeter {:.12} != {perim:.12} (attained by {cells:?})", p.value));
        }
        let f = construct_extremal(n).map_err(|e| e.to_string())?;
        let (ca, cp) = f.hull_metrics().map_err(|e| e.to_string())?;
        if ca != area as f64 || (cp - perim).abs() > 1e-9 {
            failures.push(format!("n={n} construction gives ({ca}, {cp})"));
        }
        lines.push(format!("n={n} area {} perimeter {:.9}", a.value, p.value));
    }
    if failures.is_empty() {
        Ok(lines.join("; "))
    } else {
        Err(failures.join("; "))
    }
}

fn lattice_tightness() -> Outcome {
    let chess = LatticeArrangement::new(
        Polytope::cube(2, 0.5),
        Lattice::from_columns(&[vec![1.0, 1.0], vec![1.0, -1.0]]).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let b = chess.tightness(0.02).map_err(|e| e.to_string())?;
    ensure(b.contains(1.0) && b.width() <= 0.02, || format!("chessboard bracket {b:?}"))?;
    let mut out = vec![format!("chessboard [{:.4}, {:.4}]", b.lower, b.upper)];
    for d in 2..=3 {
        let arr = LatticeArrangement::new(Polytope::cross_polytope(d, 0.5), Lattice::integer(d)).map_err(|e| e.to_string())?;
        let b = arr.tightness(0.02).map_err(|e| e.to_string())?;
        let target = d as f64 - 1.0;
        ensure(b.contains(target) && b.width() <= 0.02, || format!("cross-polytope d={d} bracket {b:?}"))?;
        out.push(format!("cross d={d} [{:.4}, {:.4}]", b.lower, b.upper));
    }
    let tri = Polytope::from_vertices(vec![vec![0.0, 0.0], vec![1.0, 0.5], vec![0.5, 1.0]], &tc()).map_err(|e| e.to_string())?;
    let dens = LatticeArrangement::new(tri, Lattice::integer(2)).map_err(|e| e.to_string())?.density().map_err(|e| e.to_string())?;
    ensure((dens - 0.375).abs() <= 1e-9, || format!("triangle density {dens}"))?;
    out.push(format!("triangle density {dens}"));
    Ok(out.join("; "))
}

fn makai_consistency() -> Outcome {
    let mut rng = rng_from_seed(707);
    let (mut done, mut ns_count, mut skipped) = (0, 0, 0);
    while done < 20 {
        let k = random_symmetric_polytope(&mut rng, 2, 3, &tc());
        let b = random_invertible(&mut rng, 2);
        let l1 = LatticeArrangement::new(k.clone(), Lattice::new(b.clone()).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?
            .dual_minimum()
            .map_err(|e| e.to_string())?;
        // rescale the lattice so λ₁ lands on either side of ½
        let target = rng.random_range(0.3..0.7);
        let s = l1 / target;
        let scaled = Matrix::from_cols(&Lattice::new(b).map_err(|e| e.to_string())?.basis_vectors().iter().map(|c| linalg::scale(c, s)).collect::<Vec<_>>());
        let arr = LatticeArrangement::new(k, Lattice::new(scaled).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let (ns, lam) = arr.is_ns(&tc()).map_err(|e| e.to_string())?;
        if (lam - 0.5).abs() < 1e-3 {
            skipped += 1;
            continue;
        }
        let sep = arr.patch_separation(30, 200, &mut rng, &tc()).map_err(|e| e.to_string())?;
        ensure(ns == sep.is_none(), || format!("instance {done}: dual criterion {ns} (lambda1 {lam}), patch probe separator {sep:?}"))?;
        ns_count += ns as usize;
        done += 1;
    }
    Ok(format!("20 instances ({ns_count} NS), 0 disagreements, {skipped} near ties skipped"))
}

fn stability_slopes() -> Outcome {
    let deltas: Vec<f64> = (0..9).map(|i| 10f64.powf(-1.0 - 0.25 * i as f64)).collect();
    let mut out = Vec::new();
    for n in [3usize, 4] {
        let fit = stability_exponent(&vec![1.0; n], &deltas, &tc()).map_err(|e| e.to_string())?;
        ensure((0.4..=0.6).contains(&fit.slope), || format!("n={n}: deviation slope {}", fit.slope))?;
        ensure((1.9..=2.1).contains(&fit.epsilon_slope), || format!("n={n}: epsilon slope {}", fit.epsilon_slope))?;
        out.push(format!("n={n} slope {:.4} eps-slope {:.4}", fit.slope, fit.epsilon_slope));
    }
    Ok(out.join("; "))
}

fn kronecker() -> Outcome {
    let s2 = 2f64.sqrt();
    let s3 = 3f64.sqrt();
    // facet normals of the parallelotope with edges (1,√2) and (√3,1)
    let normals = [linalg::normalized(&[s2, -1.0]).unwrap(), linalg::normalized(&[1.0, -s3]).unwrap()];
    let radii = [5u32, 10, 20, 50, 100];
    let mut out = Vec::new();
    for u in &normals {
        let gaps: Vec<f64> = radii.iter().map(|&r| kronecker_gap(u, r)).collect();
        ensure(gaps.windows(2).all(|w| w[1] < w[0]), || format!("gaps {gaps:?} not decreasing"))?;
        ensure(gaps[3] < 0.01, || format!("gap at R=50 is {}", gaps[3]))?;
        out.push(format!("R=50 gap {:.3e}", gaps[3]));
    }
    let control = (1..=100).map(|r| kronecker_gap(&[0.6, 0.8], r)).fold(f64::INFINITY, f64::min);
    ensure(control >= 0.2 - 1e-9, || format!("rational control gap {control}"))?;
    out.push(format!("rational control min {control:.6}"));
    Ok(out.join("; "))
}

fn lutwak() -> Outcome {
    let mut rng = rng_from_seed(1010);
    let (mut yes, mut no) = (0, 0);
    for i in 0..100 {
        let d = 2 + i % 2;
        let nv = 4 + d + rng.random_range(0..3);
        let raw = random_polytope(&mut rng, d, nv, &tc());
        let p = genericize(&raw, 0.01, &mut rng, &tc()).map_err(|e| e.to_string())?.polytope;
        let s = rng.random_range(0.3..1.1);
        let k = random_polytope(&mut rng, d, d + 3, &tc()).scale(s);
        let r = lutwak_check(&p, &k, &tc()).map_err(|e| e.to_string())?;
        ensure(r.consistent(), || format!("pair {i} (d={d}): contains {} but all simplices {}", r.contains, r.all_simplices))?;
        if r.contains {
            yes += 1;
        } else {
            no += 1;
        }
    }
    Ok(format!("100 pairs ({yes} contained, {no} not), 0 inconsistencies"))
}

/// d = 3 families whose hull is a summand of `(Σ τᵢ)P` by construction.
fn wip_families(rng: &mut DetRng) -> Vec<(String, HomotheticFamily)> {
    let mut out = Vec::new();
    // full grids of unit cubes filling a box
    for i in 0..17 {
        let dims = [1 + i % 3, 1 + (i / 3) % 3, 2 + i % 2];
        let mut xs = Vec::new();
        for a in 0..dims[0] {
            for b in 0..dims[1] {
                for c in 0..dims[2] {
                    xs.push(vec![a as f64, b as f64, c as f64]);
                }
            }
        }
        out.push((format!("grid {dims:?}"), HomotheticFamily::translates(Polytope::unit_cube(3), xs).unwrap()));
    }
    // one large member containing smaller ones
    for _ in 0..17 {
        let base = random_polytope(rng, 3, 7, &tc());
        let mut members = vec![Member { x: vec![0.0; 3], tau: 2.0 }];
        for _ in 0..rng.random_range(1..4) {
            // x + τP ⊆ 2P when x ∈ (2 − τ)P, since 0 ∈ P
            let tau = rng.random_range(0.2..0.8);
            let p = nonsep_core::random::point_in(rng, &base);
            members.push(Member { x: linalg::scale(&p, 2.0 - tau), tau });
        }
        out.push(("nested".into(), HomotheticFamily::new(base, members).unwrap()));
    }
    // stacked prisms over a random triangle
    for _ in 0..16 {
        let tri = random_simplex(rng, 2, &tc());
        let mut verts = Vec::new();
        for v in tri.vertices() {
            verts.push(vec![v[0], v[1], 0.0]);
            verts.push(vec![v[0], v[1], 1.0]);
        }
        let prism = Polytope::from_vertices(verts, &tc()).unwrap();
        let k = rng.random_range(2..=5);
        let xs = (0..k).map(|j| vec![0.0, 0.0, j as f64]).collect();
        out.push((format!("prism stack {k}"), HomotheticFamily::translates(prism, xs).unwrap()));
    }
    out
}

fn summand_wip() -> Outcome {
    let mut rng = rng_from_seed(1111);
    let fams = wip_families(&mut rng);
    let mut passed = 0;
    for (i, (name, f)) in fams.iter().enumerate() {
        let probe = f.kwip_sampled(1, 100_000, &mut rng, &tc()).map_err(|e| e.to_string())?;
        ensure(!probe.falsified(), || format!("family {i} ({name}) failed the sampled WIP probe"))?;
        let edge = f.edges_covered(&tc()).map_err(|e| e.to_string())?;
        ensure(edge.is_none(), || format!("family {i} ({name}) has an uncovered hull edge at {edge:?}"))?;
        let r = wip_summand_check(f, &tc()).map_err(|e| e.to_string())?;
        ensure(r.summand, || format!("family {i} ({name}): hull not a summand, direction {:?}", r.failing_direction))?;
        ensure(r.cover.lambda <= 1.0 + 1e-7, || format!("family {i} ({name}): lambda {}", r.cover.lambda))?;
        let big = f.base().scale(f.total_ratio());
        ensure(is_summand(&f.hull(&tc()).map_err(|e| e.to_string())?, &big, &tc()).map_err(|e| e.to_string())?, || format!("family {i} ({name}): summand recheck"))?;
        passed += 1;
    }
    let cube = cube_counterexample(5, 3, &tc()).map_err(|e| e.to_string())?;
    ensure(cube.ns && cube.epsilon.abs() < 1e-7 && cube.deviation > 0.3, || {
        format!("cube run: ns {} eps {} deviation {}", cube.ns, cube.epsilon, cube.deviation)
    })?;
    Ok(format!(
        "{passed} families summand with lambda <= 1; cube run eps {:.1e} deviation {:.3}",
        cube.epsilon, cube.deviation
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("symmetric covering", symmetric_covering),
        ("simplex bound", simplex_bound),
        ("sigma covering", sigma_covering),
        ("asymmetry values", asymmetry_values),
        ("cube extremals", cube_extremals),
        ("lattice tightness", lattice_tightness),
        ("dual-lattice criterion", makai_consistency),
        ("stability exponent", stability_slopes),
        ("kronecker gaps", kronecker),
        ("circumscribed simplex containment", lutwak),
        ("summand and wip", summand_wip),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
