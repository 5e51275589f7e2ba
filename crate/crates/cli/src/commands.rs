use std::fs;

use gkm::cohomology::{
    check_betti, compute_eta, default_max_degree, face_ring_hilbert, gkm_cohomology_dims,
    restriction_surjectivity, verify_face_ring_quotient,
};
use gkm::faces::{enumerate_faces, span_face, Face};
use gkm::model::{ensure_connection, independence_level};
use gkm::structure::{
    analyze_structure, balanced_coloring, build_dual_simplicial_poset, facets_from_coloring,
    ColoringOutcome,
};
use gkm::topology::realizability_screen;
use gkm::{fixtures, parse_graph, rational, GkmGraph};
use serde_json::{json, Value};

use crate::{Cli, Command};

pub struct Outcome {
    pub value: Value,
    pub pass: bool,
}

impl Outcome {
    fn new(value: Value, pass: bool) -> Self {
        Outcome { value, pass }
    }

    fn failed(command: &str, error: impl ToString) -> Self {
        Outcome::new(json!({ "command": command, "pass": false, "error": error.to_string() }), false)
    }
}

fn load(cli: &Cli, path: Option<&std::path::Path>) -> Result<GkmGraph, String> {
    let (label, text) = match (path, &cli.fixture) {
        (Some(_), Some(_)) => return Err("give either an input file or --fixture, not both".into()),
        (None, None) => return Err("no input: give a file or --fixture <name>".into()),
        (Some(p), None) => {
            let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            (p.display().to_string(), text)
        }
        (None, Some(name)) => {
            let text = fixtures::source(name).ok_or_else(|| {
                let known: Vec<&str> = fixtures::names().collect();
                format!("unknown fixture `{name}`; bundled: {}", known.join(", "))
            })?;
            (name.clone(), text.to_string())
        }
    };
    parse_graph(&text).map_err(|e| format!("{label}: {e}"))
}

fn summary(g: &GkmGraph) -> Value {
    json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "dimension": g.dimension(),
        "torus_rank": g.torus_rank(),
        "independence": independence_level(g),
    })
}

fn parse_face(g: &GkmGraph, seed: Option<&str>, whole: bool) -> Result<Face, String> {
    if whole {
        return Ok(Face::whole(g));
    }
    let seed = seed.ok_or("restrict needs --seed VERTEX:DART,... or --whole")?;
    let (vertex, darts) = seed.split_once(':').ok_or("seed must look like VERTEX:DART,DART")?;
    let p = g.vertex_index(vertex).ok_or_else(|| format!("unknown vertex `{vertex}`"))?;
    let darts: Vec<usize> = darts
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|name| g.dart_index(name).ok_or_else(|| format!("unknown dart `{name}`")))
        .collect::<Result<_, _>>()?;
    span_face(g, p, &darts).map_err(|e| e.to_string())
}

pub fn run(cli: &Cli) -> Result<Outcome, String> {
    Ok(match &cli.command {
        Command::Validate(i) => validate(&load(cli, i.path.as_deref())?),
        Command::Structure(i) => structure(&load(cli, i.path.as_deref())?),
        Command::Faces(i) => faces(&load(cli, i.path.as_deref())?, cli.max_face_dim),
        Command::Screen(i) => screen(&load(cli, i.path.as_deref())?),
        Command::Cohomology(i) => cohomology(&load(cli, i.path.as_deref())?, cli.max_degree),
        Command::Eta(i) => eta(&load(cli, i.path.as_deref())?),
        Command::Hilbert(i) => hilbert(&load(cli, i.path.as_deref())?, cli.max_degree),
        Command::VerifyB(i) => verify_b(&load(cli, i.path.as_deref())?, cli.max_degree),
        Command::Restrict(a) => {
            let g = load(cli, a.path.as_deref())?;
            let g = match ensure_connection(&g) {
                Ok(g) => g,
                Err(e) => return Ok(Outcome::failed("restrict", e)),
            };
            let face = parse_face(&g, a.seed.as_deref(), a.whole)?;
            restrict(&g, &face, cli.max_degree)
        }
        Command::Report(i) => report(&load(cli, i.path.as_deref())?, cli.max_degree),
    })
}

fn validate(g: &GkmGraph) -> Outcome {
    let (connection, error) = match (g.connection(), ensure_connection(g)) {
        (Some(_), _) => (Some("stored"), None),
        (None, Ok(_)) => (Some("canonical"), None),
        (None, Err(e)) => (None, Some(e.to_string())),
    };
    let mut value = json!({ "command": "validate", "valid": true, "graph": summary(g), "connection": connection });
    if let Some(e) = error {
        value["connection_error"] = json!(e);
    }
    Outcome::new(value, true)
}

fn structure(g: &GkmGraph) -> Outcome {
    match analyze_structure(g) {
        Ok(r) => Outcome::new(json!({ "command": "structure", "structure": r }), true),
        Err(e) => Outcome::failed("structure", e),
    }
}

fn faces(g: &GkmGraph, max_face_dim: Option<usize>) -> Outcome {
    let g = match ensure_connection(g) {
        Ok(g) => g,
        Err(e) => return Outcome::failed("faces", e),
    };
    let max = max_face_dim.unwrap_or(g.dimension()).min(g.dimension());
    match enumerate_faces(&g, max, max == g.dimension()) {
        Ok(e) => {
            let counts: serde_json::Map<String, Value> =
                e.poset.count_by_dim().into_iter().map(|(d, c)| (d.to_string(), json!(c))).collect();
            Outcome::new(
                json!({
                    "command": "faces",
                    "max_face_dim": max,
                    "counts": counts,
                    "faces": e.poset.export(&g),
                    "skipped_seeds": e.skipped,
                }),
                true,
            )
        }
        Err(e) => Outcome::failed("faces", e),
    }
}

fn screen(g: &GkmGraph) -> Outcome {
    match realizability_screen(g) {
        Ok(r) => {
            let pass = r.pass;
            Outcome::new(json!({ "command": "screen", "screen": r }), pass)
        }
        Err(e) => Outcome::failed("screen", e),
    }
}

fn cohomology_value(g: &GkmGraph, max_degree: Option<usize>) -> (Value, bool) {
    let d = max_degree.unwrap_or_else(|| default_max_degree(g));
    let dims = gkm_cohomology_dims(g, d);
    let betti = check_betti(g, &dims);
    let degrees: Vec<Value> = dims
        .dims
        .iter()
        .enumerate()
        .map(|(m, x)| json!({ "degree": 2 * m, "dim": x }))
        .collect();
    let pass = betti.nonnegative;
    (
        json!({
            "max_degree": d,
            "gkm_condition": independence_level(g) >= 2,
            "dims": degrees,
            "betti": betti,
            "free_module_consistent": pass,
        }),
        pass,
    )
}

fn cohomology(g: &GkmGraph, max_degree: Option<usize>) -> Outcome {
    let (value, pass) = cohomology_value(g, max_degree);
    Outcome::new(json!({ "command": "cohomology", "cohomology": value }), pass)
}

/// Connection, balanced coloring and facets, or the reason they are missing.
fn facets(g: &GkmGraph) -> Result<(GkmGraph, Vec<Face>), String> {
    let g = ensure_connection(g).map_err(|e| format!("no connection: {e}"))?;
    match balanced_coloring(&g).map_err(|e| e.to_string())? {
        ColoringOutcome::Balanced(c) => {
            let f = facets_from_coloring(&g, &c).map_err(|e| e.to_string())?;
            Ok((g, f))
        }
        ColoringOutcome::Obstructed(_) => Err("graph is not balanced, so it has no facets".into()),
    }
}

fn eta(g: &GkmGraph) -> Outcome {
    let (g, facets) = match facets(g) {
        Ok(x) => x,
        Err(e) => return Outcome::failed("eta", e),
    };
    match compute_eta(&g, &facets) {
        Ok(eta) => {
            let terms: Vec<Value> = eta
                .facets
                .iter()
                .zip(eta.coefficient_strings())
                .map(|(f, c)| json!({ "facet": f.vertex_names(&g), "coefficient": c }))
                .collect();
            Outcome::new(json!({ "command": "eta", "pass": true, "terms": terms, "vanishes_at_every_vertex": true }), true)
        }
        Err(e) => Outcome::failed("eta", e),
    }
}

fn hilbert(g: &GkmGraph, max_degree: Option<usize>) -> Outcome {
    let (g, facets) = match facets(g) {
        Ok(x) => x,
        Err(e) => return Outcome::failed("hilbert", e),
    };
    let dual = match build_dual_simplicial_poset(&g, &facets) {
        Ok(d) => d,
        Err(e) => return Outcome::failed("hilbert", e),
    };
    let d = max_degree.unwrap_or_else(|| default_max_degree(&g));
    let h = face_ring_hilbert(&dual, d);
    let series: Vec<Value> = h
        .coefficients
        .iter()
        .enumerate()
        .map(|(m, c)| json!({ "degree": 2 * m, "coefficient": rational::format(c) }))
        .collect();
    let quotient: Vec<String> = h.times_one_minus_s().iter().map(rational::format).collect();
    let numerator: Vec<String> =
        h.numerator.iter().flatten().map(|c| c.to_string()).collect();
    Outcome::new(
        json!({
            "command": "hilbert",
            "max_degree": d,
            "rank_counts": dual.rank_counts(),
            "series": series,
            "numerator": numerator,
            "denominator_power": h.denominator_power,
            "times_one_minus_t2": quotient,
        }),
        true,
    )
}

fn verify_b(g: &GkmGraph, max_degree: Option<usize>) -> Outcome {
    let r = verify_face_ring_quotient(g, max_degree);
    let pass = r.pass;
    Outcome::new(json!({ "command": "verify-b", "result": r }), pass)
}

fn restrict(g: &GkmGraph, face: &Face, max_degree: Option<usize>) -> Outcome {
    let d = max_degree.unwrap_or_else(|| default_max_degree(g));
    let degrees = restriction_surjectivity(g, face, d);
    Outcome::new(
        json!({
            "command": "restrict",
            "face": face.vertex_names(g),
            "face_dim": face.dim(),
            "max_degree": d,
            "degrees": degrees,
        }),
        true,
    )
}

fn report(g: &GkmGraph, max_degree: Option<usize>) -> Outcome {
    let structure = match analyze_structure(g) {
        Ok(r) => json!(r),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let (screen, screen_ok) = match realizability_screen(g) {
        Ok(r) => {
            let ok = r.pass;
            let failed: Vec<&str> = r.checks.iter().filter(|c| !c.pass).map(|c| c.object.as_str()).collect();
            (json!({ "pass": r.pass, "checks": r.checks.len(), "failed": failed }), ok)
        }
        Err(e) => (json!({ "applicable": false, "reason": e.to_string() }), true),
    };
    let (cohomology, cohomology_ok) = cohomology_value(g, max_degree);
    let b = verify_face_ring_quotient(g, max_degree);
    let b_ok = !b.applicable || b.pass;
    let pass = screen_ok && cohomology_ok && b_ok;
    Outcome::new(
        json!({
            "command": "report",
            "version": env!("CARGO_PKG_VERSION"),
            "graph": summary(g),
            "structure": structure,
            "screen": screen,
            "cohomology": cohomology,
            "verify_b": b,
            "pass": pass,
        }),
        pass,
    )
}
