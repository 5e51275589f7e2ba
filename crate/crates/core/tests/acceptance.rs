//! Acceptance criteria. Runs without the libtest harness so that each
//! criterion prints exactly one line; exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use gkm::cohomology::{
    check_betti, compute_eta, gkm_cohomology_basis, gkm_cohomology_dims, restriction_surjectivity,
    thom_class, verify_face_ring_quotient, verify_thom_relations,
};
use gkm::faces::{enumerate_faces, span_face, Face};
use gkm::model::{ensure_connection, independence_level};
use gkm::structure::{
    balanced_coloring, build_dual_simplicial_poset, facets_from_coloring, has_facets,
    two_face_monodromy, two_faces, ColoringOutcome,
};
use gkm::topology::{
    order_complex, realizability_screen, reduced_betti, ExplicitPoset, SimplicialComplexAbstract,
};
use gkm::{fixtures, GkmGraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const HOMOLOGY_CASES: usize = 60;
const HOMOLOGY_MAX_SIMPLICES: usize = 200;
const HOMOLOGY_LIMIT: Duration = Duration::from_secs(60);
const SCREEN_LIMIT: Duration = Duration::from_secs(120);
const MONODROMY_LIMIT: Duration = Duration::from_secs(5);
const QUOTIENT_SMALL_LIMIT: Duration = Duration::from_secs(30);
const QUOTIENT_LARGE_LIMIT: Duration = Duration::from_secs(600);
const RESTRICTION_LIMIT: Duration = Duration::from_secs(60);

type Verdict = Result<String, String>;

fn conn(name: &str) -> GkmGraph {
    ensure_connection(&fixtures::load(name).expect("bundled fixture parses")).expect("connection")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn homology_oracle() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut largest = 0;
    for case in 0..HOMOLOGY_CASES {
        let (nv, closed) = if case % 2 == 0 {
            common::random_complex(&mut rng, HOMOLOGY_MAX_SIMPLICES)
        } else {
            // order complex of a random sub-poset
            loop {
                let size = 4 + case % 6;
                let rel = common::random_relations(&mut rng, size, 0.45);
                let chains = common::brute_force_chains(size, &rel);
                if chains.len() <= HOMOLOGY_MAX_SIMPLICES {
                    let ours = order_complex(&ExplicitPoset::new(size, &rel));
                    let flat: Vec<Vec<usize>> = (0..=ours.dim())
                        .flat_map(|d| ours.simplices(d as usize).to_vec())
                        .collect();
                    ensure(flat.len() == chains.len(), || format!("case {case}: chain count differs"))?;
                    break (size, chains);
                }
            }
        };
        largest = largest.max(closed.len());
        let simplices: Vec<Vec<usize>> = closed.iter().cloned().collect();
        let ours = reduced_betti(&SimplicialComplexAbstract::from_simplices(nv, &simplices)).0;
        let oracle = common::oracle_reduced_betti(&closed);
        ensure(ours == oracle, || format!("case {case}: {ours:?} vs oracle {oracle:?}"))?;
    }
    within(start, HOMOLOGY_LIMIT)?;
    Ok(format!("{HOMOLOGY_CASES} complexes up to {largest} simplices agree exactly"))
}

fn screen_on_geometric_fixtures() -> Verdict {
    let names = [
        "octahedron",
        "cube3-projected",
        "cube4-projected",
        "cube5-projected",
        "sphere",
        "cp2",
        "cp3",
        "cp4",
        "cube2",
        "cube3",
        "cube4",
        "cube5",
    ];
    let start = Instant::now();
    let mut total = 0;
    for name in names {
        let r = realizability_screen(&fixtures::load(name).unwrap()).map_err(|e| format!("{name}: {e}"))?;
        let failed: Vec<&str> = r.checks.iter().filter(|c| !c.pass).map(|c| c.object.as_str()).collect();
        ensure(r.pass, || format!("{name}: failing checks {failed:?}"))?;
        total += r.checks.len();
    }
    within(start, SCREEN_LIMIT)?;
    Ok(format!("{} graphs, {total} checks green", names.len()))
}

fn monodromy() -> Verdict {
    let start = Instant::now();
    let g = conn("octahedron");
    let triangles: Vec<Face> = two_faces(&g).unwrap().into_iter().filter(|f| f.vertices().len() == 3).collect();
    ensure(triangles.len() == 8, || format!("{} triangles", triangles.len()))?;
    for f in &triangles {
        for &p in f.vertices() {
            let m = two_face_monodromy(&g, f, p).unwrap();
            let t = f.transversal_at(&g, p);
            ensure(t.len() == 2 && m.image(t[0]) == t[1] && m.image(t[1]) == t[0], || {
                format!("triangle {:?} at {}", f.vertex_names(&g), g.vertex_name(p))
            })?;
        }
    }
    let g = conn("cube5-projected");
    let faces = two_faces(&g).unwrap();
    for f in &faces {
        for &p in f.vertices() {
            let m = two_face_monodromy(&g, f, p).unwrap();
            ensure(f.transversal_at(&g, p).iter().all(|d| m.image(*d) == *d), || {
                format!("2-face {:?} moves a transversal at {}", f.vertex_names(&g), g.vertex_name(p))
            })?;
        }
    }
    within(start, MONODROMY_LIMIT)?;
    Ok(format!("8 octahedron triangles transpose, {} projected 5-cube 2-faces fix transversals", faces.len()))
}

fn facet_dichotomy() -> Verdict {
    ensure(!has_facets(&conn("octahedron")).unwrap(), || "octahedron has facets".into())?;
    let mut counts = Vec::new();
    for n in 3..=5 {
        let g = conn(&format!("cube{n}-projected"));
        let ColoringOutcome::Balanced(c) = balanced_coloring(&g).unwrap() else {
            return Err(format!("projected {n}-cube not balanced"));
        };
        let facets = facets_from_coloring(&g, &c).map_err(|e| e.to_string())?;
        ensure(facets.len() == 2 * n, || format!("projected {n}-cube: {} facets", facets.len()))?;
        ensure(facets.iter().all(|f| f.is_totally_geodesic(&g)), || "facet not geodesic".into())?;
        counts.push(facets.len());
    }
    Ok(format!("octahedron has no facets; projected cubes have {counts:?} facets"))
}

fn face_ring_quotient() -> Verdict {
    let start = Instant::now();
    let r = verify_face_ring_quotient(&fixtures::load("cube3-projected").unwrap(), Some(10));
    let dims: Vec<usize> = r.degrees.iter().map(|c| c.gkm).collect();
    ensure(dims == [1, 5, 12, 20, 28, 36], || format!("dims {dims:?}"))?;
    ensure(r.degrees.iter().all(|c| c.equal), || format!("{:?}", r.degrees))?;
    let b = r.betti.clone().ok_or("no Betti check")?;
    ensure(b.betti == [1, 3, 3, 1] && b.symmetric && b.total == 8 && b.total_matches_vertices, || {
        format!("{b:?}")
    })?;
    ensure(r.pass, || format!("{r:?}"))?;
    within(start, QUOTIENT_SMALL_LIMIT)?;

    let start = Instant::now();
    let r = verify_face_ring_quotient(&fixtures::load("cube5-projected").unwrap(), None);
    let b = r.betti.clone().ok_or("no Betti check")?;
    ensure(r.degrees.iter().all(|c| c.equal), || format!("{:?}", r.degrees))?;
    ensure(b.betti == [1, 5, 10, 10, 5, 1] && b.symmetric && b.total == 32, || format!("{b:?}"))?;
    ensure(r.pass, || format!("{r:?}"))?;
    within(start, QUOTIENT_LARGE_LIMIT)?;
    Ok(format!(
        "projected 3-cube degrees 0..10 and projected 5-cube degrees 0..{} match",
        r.max_degree
    ))
}

fn restriction() -> Verdict {
    let start = Instant::now();
    let g = conn("octahedron");
    let p = g.vertex_index("+1").unwrap();
    let seed = [g.dart_index("+1_+2+").unwrap(), g.dart_index("+1_-2+").unwrap()];
    let square = span_face(&g, p, &seed).unwrap();
    ensure(square.vertices().len() == 4, || "not a square".into())?;
    let r = restriction_surjectivity(&g, &square, 10);
    let two = &r[1];
    ensure((two.source, two.target, two.image) == (4, 5, 4) && !two.surjective_on_generators, || {
        format!("degree 2: {two:?}")
    })?;
    for x in &r[2..] {
        ensure(x.surjective_on_generators, || format!("degree {}: {x:?}", x.degree))?;
    }
    let cokernel: Vec<usize> = r.iter().map(|x| x.target - x.image).collect();
    within(start, RESTRICTION_LIMIT)?;
    Ok(format!(
        "degree 2 rank 4 into 5; degrees 4..10 hit every generator (literal cokernel dims {cokernel:?})"
    ))
}

fn invariants() -> Verdict {
    let mut checked = 0usize;
    for name in fixtures::names() {
        let raw = fixtures::load(name).unwrap();
        // twin involution and weight antisymmetry
        for (d, dart) in raw.darts().iter().enumerate() {
            let t = raw.dart(dart.twin);
            ensure(t.twin == d && t.source == dart.target && *raw.weight(dart.twin) == raw.weight(d).negated(), || {
                format!("{name}: dart {}", dart.name)
            })?;
        }
        // free-module deconvolution
        let dims = gkm_cohomology_dims(&raw, 2 * raw.dimension() + 4);
        let b = check_betti(&raw, &dims);
        ensure(b.nonnegative, || format!("{name}: Betti {:?}", b.betti))?;
        for c in gkm_cohomology_basis(&raw, 2) {
            ensure(c.satisfies_congruences(&raw), || format!("{name}: solver class fails a congruence"))?;
        }
        checked += 1;
        let Ok(g) = ensure_connection(&raw) else { continue };

        // chain complexes of face posets
        let poset = enumerate_faces(&g, g.dimension(), true).unwrap().poset;
        let chain = order_complex(&poset).chain_complex();
        ensure(chain.is_square_zero(), || format!("{name}: boundary does not square to zero"))?;
        // Thom classes lie in the GKM ring
        for f in poset.faces() {
            ensure(thom_class(&g, f).satisfies_congruences(&g), || {
                format!("{name}: Thom class of {:?}", f.vertex_names(&g))
            })?;
        }
        // face rank equals dimension below the independence level
        let j = independence_level(&g);
        if j >= 3 {
            for f in poset.faces().iter().filter(|f| f.dim() < j) {
                ensure(f.rank() == f.dim(), || format!("{name}: rank differs from dimension"))?;
            }
        }
        let ColoringOutcome::Balanced(c) = balanced_coloring(&g).unwrap() else { continue };
        ensure(c.is_valid(&g), || format!("{name}: coloring axioms"))?;
        let facets = facets_from_coloring(&g, &c).map_err(|e| format!("{name}: {e}"))?;
        let dual = build_dual_simplicial_poset(&g, &facets).map_err(|e| format!("{name}: {e}"))?;
        let thom = verify_thom_relations(&g, dual.faces().faces()).map_err(|e| format!("{name}: {e}"))?;
        ensure(thom.pass, || format!("{name}: Thom relations {:?}", thom.failures))?;
        if g.torus_rank() + 1 == g.dimension() && g.dimension() >= 3 {
            let eta = compute_eta(&g, &facets).map_err(|e| format!("{name}: {e}"))?;
            ensure(eta.class(&g).values.iter().all(|v| v.is_zero()), || format!("{name}: η does not vanish"))?;
        }
    }
    Ok(format!("all module invariants hold on {checked} fixtures"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 7] = [
        ("homology oracle equivalence", homology_oracle),
        ("acyclicity screen on geometric fixtures", screen_on_geometric_fixtures),
        ("monodromy reproduction", monodromy),
        ("facet dichotomy", facet_dichotomy),
        ("face ring quotient, degreewise", face_ring_quotient),
        ("restriction to the equatorial square", restriction),
        ("invariant suite", invariants),
    ];
    let mut ok = true;
    for (i, (label, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (status, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                ok = false;
                ("FAIL", d)
            }
        };
        println!("criterion {}: {status} {label} ({:.2?}): {detail}", i + 1, start.elapsed());
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
