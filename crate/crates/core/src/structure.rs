//! Monodromy of 2-faces, parity, balanced colorings, facets and the dual
//! simplicial poset.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::faces::{enumerate_faces, span_face, Face, FacePoset, SpanError};
use crate::model::{ensure_connection, independence_level, GkmGraph};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("graph carries no connection")]
    NoConnection,
    #[error("`{0}` is not a 2-face through the base vertex")]
    NotATwoFace(String),
    #[error("component of color class {color} through `{vertex}` is not totally geodesic")]
    FacetNotGeodesic { color: usize, vertex: String },
    #[error("graph has no facets")]
    NoFacets,
    #[error("upper interval above face with vertices {face:?} is not boolean: {reason}")]
    BooleanIntervalViolation { face: Vec<String>, reason: String },
    #[error(transparent)]
    Span(#[from] SpanError),
}

fn require_connection(g: &GkmGraph) -> Result<(), StructureError> {
    g.connection().map(|_| ()).ok_or(StructureError::NoConnection)
}

/// The composite of transports around a 2-face, as a permutation of
/// `star(base)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyResult {
    pub face: Face,
    pub base: usize,
    /// `(dart, image)` for every dart of `star(base)`, in dart order.
    pub permutation: Vec<(usize, usize)>,
}

impl MonodromyResult {
    pub fn image(&self, d: usize) -> usize {
        self.permutation.iter().find(|(x, _)| *x == d).map(|(_, y)| *y).expect("dart in star")
    }

    pub fn is_identity(&self) -> bool {
        self.permutation.iter().all(|(x, y)| x == y)
    }

    pub fn cycle_length(&self) -> usize {
        self.face.vertices().len()
    }
}

/// Walks the cycle of `face` from `base`, leaving along `first`, and composes
/// the transports.
fn monodromy_along(g: &GkmGraph, face: &Face, base: usize, first: usize) -> MonodromyResult {
    let star = g.star(base).to_vec();
    let mut current = star.clone();
    let mut along = first;
    for _ in 0..face.vertices().len() {
        for x in current.iter_mut() {
            *x = g.transport(along, *x);
        }
        let arrived = g.dart(along);
        let w = arrived.target;
        along = face
            .star_at(g, w)
            .into_iter()
            .find(|d| *d != arrived.twin)
            .unwrap_or(arrived.twin);
    }
    MonodromyResult { face: face.clone(), base, permutation: star.into_iter().zip(current).collect() }
}

/// Monodromy around `face` starting at `base`, leaving along the first face
/// dart at `base` in dart order.
pub fn two_face_monodromy(
    g: &GkmGraph,
    face: &Face,
    base: usize,
) -> Result<MonodromyResult, StructureError> {
    require_connection(g)?;
    let at_base = face.star_at(g, base);
    if face.dim() != 2 || at_base.len() != 2 {
        return Err(StructureError::NotATwoFace(format!("{:?}", face.vertex_names(g))));
    }
    Ok(monodromy_along(g, face, base, at_base[0]))
}

/// The same cycle traversed the other way round.
pub fn reverse_monodromy(
    g: &GkmGraph,
    face: &Face,
    base: usize,
) -> Result<MonodromyResult, StructureError> {
    require_connection(g)?;
    let at_base = face.star_at(g, base);
    if face.dim() != 2 || at_base.len() != 2 {
        return Err(StructureError::NotATwoFace(format!("{:?}", face.vertex_names(g))));
    }
    Ok(monodromy_along(g, face, base, at_base[1]))
}

/// All 2-faces spanned by pairs of darts at a common vertex.
pub fn two_faces(g: &GkmGraph) -> Result<Vec<Face>, StructureError> {
    require_connection(g)?;
    if g.dimension() < 2 {
        return Ok(Vec::new());
    }
    let poset = enumerate_faces(g, 2, false)?.poset;
    Ok(poset.of_dim(2).map(|(_, f)| f.clone()).collect())
}

/// Every 2-face is a cycle of even length.
pub fn is_even(g: &GkmGraph) -> Result<bool, StructureError> {
    let even = two_faces(g)?.iter().all(|f| f.vertices().len() % 2 == 0);
    debug_assert!(!is_bipartite(g) || even, "bipartite graphs are even");
    Ok(even)
}

/// The underlying multigraph admits a proper 2-coloring of its vertices.
pub fn is_bipartite(g: &GkmGraph) -> bool {
    let mut side: Vec<Option<bool>> = vec![None; g.vertex_count()];
    for start in 0..g.vertex_count() {
        if side[start].is_some() {
            continue;
        }
        side[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let s = side[v].expect("assigned");
            for &d in g.star(v) {
                let w = g.dart(d).target;
                match side[w] {
                    None => {
                        side[w] = Some(!s);
                        queue.push_back(w);
                    }
                    Some(t) if t == s => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

/// Edge coloring by `1..=n`, proper at every vertex and preserved by the
/// connection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedColoring {
    dart_color: Vec<usize>,
}

impl BalancedColoring {
    pub fn color(&self, d: usize) -> usize {
        self.dart_color[d]
    }

    /// Edge id to color.
    pub fn edge_colors(&self, g: &GkmGraph) -> BTreeMap<String, usize> {
        g.edges().iter().map(|d| (g.dart(*d).edge.clone(), self.dart_color[*d])).collect()
    }

    /// Both defining conditions, checked at every vertex and dart.
    pub fn is_valid(&self, g: &GkmGraph) -> bool {
        let n = g.dimension();
        for v in 0..g.vertex_count() {
            let mut colors: Vec<usize> = g.star(v).iter().map(|d| self.dart_color[*d]).collect();
            colors.sort_unstable();
            if colors != (1..=n).collect::<Vec<_>>() {
                return false;
            }
        }
        for (d, dart) in g.darts().iter().enumerate() {
            if self.dart_color[d] != self.dart_color[dart.twin] {
                return false;
            }
            for &e in g.star(dart.source) {
                if self.dart_color[g.transport(d, e)] != self.dart_color[e] {
                    return false;
                }
            }
        }
        true
    }
}

/// Transport of the root coloring disagrees with the color already present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColoringObstruction {
    pub along: String,
    pub dart: String,
    pub image: String,
    pub expected_color: usize,
    pub found_color: usize,
    /// Closed vertex path through the offending dart: tree path to its
    /// source, the dart, tree path back from its target.
    pub cycle: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColoringOutcome {
    Balanced(BalancedColoring),
    Obstructed(ColoringObstruction),
}

/// Colors `star(root)` by dart order, transports the colors along a BFS tree
/// and verifies every transport. The root is the first vertex.
pub fn balanced_coloring(g: &GkmGraph) -> Result<ColoringOutcome, StructureError> {
    require_connection(g)?;
    let root = 0;
    let mut color = vec![0usize; g.darts().len()];
    let mut parent: Vec<Option<usize>> = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    for (i, d) in g.star(root).iter().enumerate() {
        color[*d] = i + 1;
    }
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &d in g.star(v) {
            let w = g.dart(d).target;
            if seen[w] {
                continue;
            }
            for &e in g.star(v) {
                color[g.transport(d, e)] = color[e];
            }
            seen[w] = true;
            parent[w] = Some(d);
            queue.push_back(w);
        }
    }
    let path_to_root = |mut v: usize| {
        let mut path = vec![v];
        while let Some(d) = parent[v] {
            v = g.dart(d).source;
            path.push(v);
        }
        path
    };
    for (d, dart) in g.darts().iter().enumerate() {
        for &e in g.star(dart.source) {
            let img = g.transport(d, e);
            if color[img] != color[e] {
                let mut cycle: Vec<usize> = path_to_root(dart.source);
                cycle.reverse();
                cycle.extend(path_to_root(dart.target));
                return Ok(ColoringOutcome::Obstructed(ColoringObstruction {
                    along: dart.name.clone(),
                    dart: g.dart(e).name.clone(),
                    image: g.dart(img).name.clone(),
                    expected_color: color[e],
                    found_color: color[img],
                    cycle: cycle.into_iter().map(|v| g.vertex_name(v).to_string()).collect(),
                }));
            }
        }
    }
    let coloring = BalancedColoring { dart_color: color };
    debug_assert!(coloring.is_valid(g));
    Ok(ColoringOutcome::Balanced(coloring))
}

/// Connected components of each color-deleted subgraph, each checked to be a
/// totally geodesic `(n-1)`-face. Sorted canonically.
pub fn facets_from_coloring(
    g: &GkmGraph,
    coloring: &BalancedColoring,
) -> Result<Vec<Face>, StructureError> {
    require_connection(g)?;
    let n = g.dimension();
    let mut facets = Vec::new();
    for deleted in 1..=n {
        let mut seen = vec![false; g.vertex_count()];
        for start in 0..g.vertex_count() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut vertices = vec![start];
            let mut darts = Vec::new();
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &d in g.star(v) {
                    if coloring.color(d) == deleted {
                        continue;
                    }
                    darts.push(d);
                    let w = g.dart(d).target;
                    if !seen[w] {
                        seen[w] = true;
                        vertices.push(w);
                        queue.push_back(w);
                    }
                }
            }
            let face = Face::from_parts(g, vertices, darts, n - 1);
            if !face.is_totally_geodesic(g) {
                return Err(StructureError::FacetNotGeodesic {
                    color: deleted,
                    vertex: g.vertex_name(start).to_string(),
                });
            }
            facets.push(face);
        }
    }
    facets.sort();
    Ok(facets)
}

/// For every vertex `p` and dart `e` at `p`, the darts `star(p) \ {e}` span
/// a face.
pub fn has_facets(g: &GkmGraph) -> Result<bool, StructureError> {
    require_connection(g)?;
    for p in 0..g.vertex_count() {
        let star = g.star(p);
        for skip in 0..star.len() {
            let seed: Vec<usize> =
                star.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, d)| *d).collect();
            match span_face(g, p, &seed) {
                Ok(_) => {}
                Err(SpanError::ClosureInconsistent(_)) => return Ok(false),
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(true)
}

/// Faces of a graph with facets under reverse inclusion, graded by
/// codimension. Every lower interval is a boolean lattice.
#[derive(Clone, Debug)]
pub struct DualSimplicialPoset {
    dimension: usize,
    /// The underlying faces ordered by inclusion.
    faces: FacePoset,
}

impl DualSimplicialPoset {
    pub fn faces(&self) -> &FacePoset {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Codimension of element `i`.
    pub fn rank(&self, i: usize) -> usize {
        self.dimension - self.faces.face(i).dim()
    }

    /// Number of elements of each rank `0..=n`.
    pub fn rank_counts(&self) -> Vec<usize> {
        let mut out = vec![0; self.dimension + 1];
        for i in 0..self.len() {
            out[self.rank(i)] += 1;
        }
        out
    }

    /// `a <= b` in the dual order, i.e. face `b` is contained in face `a`.
    pub fn dual_le(&self, a: usize, b: usize) -> bool {
        a == b || self.faces.less(b, a)
    }
}

/// Faces of dimension `<= n - 2`, the supplied facets and the whole graph.
/// Verifies that the faces containing any given face form a boolean lattice
/// whose atoms are the facets through it.
pub fn build_dual_simplicial_poset(
    g: &GkmGraph,
    facets: &[Face],
) -> Result<DualSimplicialPoset, StructureError> {
    require_connection(g)?;
    let n = g.dimension();
    let mut all: Vec<Face> = if n >= 2 {
        enumerate_faces(g, n - 2, false)?.poset.faces().to_vec()
    } else {
        Vec::new()
    };
    all.extend(facets.iter().cloned());
    all.push(Face::whole(g));
    let faces = FacePoset::from_faces(all);
    let dual = DualSimplicialPoset { dimension: n, faces };
    check_boolean_intervals(g, &dual)?;
    Ok(dual)
}

fn check_boolean_intervals(g: &GkmGraph, dual: &DualSimplicialPoset) -> Result<(), StructureError> {
    let poset = &dual.faces;
    let n = dual.dimension;
    for s in 0..poset.len() {
        let fail = |reason: String| StructureError::BooleanIntervalViolation {
            face: poset.face(s).vertex_names(g),
            reason,
        };
        let interval: Vec<usize> = (0..poset.len()).filter(|t| *t == s || poset.less(s, *t)).collect();
        let atoms: Vec<usize> =
            interval.iter().copied().filter(|t| poset.face(*t).dim() + 1 == n).collect();
        let codim = dual.rank(s);
        if atoms.len() != codim {
            return Err(fail(format!("{} facets through a face of codimension {codim}", atoms.len())));
        }
        let mask = |t: usize| -> u64 {
            atoms
                .iter()
                .enumerate()
                .filter(|(_, a)| **a == t || poset.less(t, **a))
                .fold(0u64, |m, (i, _)| m | (1 << i))
        };
        let masks: Vec<u64> = interval.iter().map(|t| mask(*t)).collect();
        let mut sorted = masks.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != interval.len() || interval.len() != 1usize << codim {
            return Err(fail(format!("{} elements, expected {}", interval.len(), 1u64 << codim)));
        }
        for (a, ma) in interval.iter().zip(&masks) {
            if ma.count_ones() as usize != dual.rank(*a) {
                return Err(fail("rank differs from the number of facets above".into()));
            }
            for (b, mb) in interval.iter().zip(&masks) {
                let included = a == b || poset.less(*a, *b);
                let mask_order = ma & mb == *mb;
                if included != mask_order {
                    return Err(fail("inclusion does not match facet sets".into()));
                }
            }
        }
    }
    Ok(())
}

/// Output of the `structure` command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub independence: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub connection_error: Option<String>,
    pub even: Option<bool>,
    pub bipartite: bool,
    pub balanced: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coloring: Option<BTreeMap<String, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<Vec<String>>>,
    pub has_facets: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ColoringObstruction>,
}

pub fn analyze_structure(g: &GkmGraph) -> Result<StructureReport, StructureError> {
    let independence = independence_level(g);
    let bipartite = is_bipartite(g);
    let g = match ensure_connection(g) {
        Ok(g) => g,
        Err(e) => {
            return Ok(StructureReport {
                independence,
                connection_error: Some(e.to_string()),
                even: None,
                bipartite,
                balanced: false,
                coloring: None,
                facets: None,
                has_facets: None,
                obstruction: None,
            })
        }
    };
    let even = is_even(&g)?;
    let has = has_facets(&g)?;
    let (balanced, coloring, facets, obstruction) = match balanced_coloring(&g)? {
        ColoringOutcome::Balanced(c) => {
            let facets = facets_from_coloring(&g, &c)?;
            (
                true,
                Some(c.edge_colors(&g)),
                Some(facets.iter().map(|f| f.vertex_names(&g)).collect()),
                None,
            )
        }
        ColoringOutcome::Obstructed(o) => (false, None, None, Some(o)),
    };
    Ok(StructureReport {
        independence,
        connection_error: None,
        even: Some(even),
        bipartite,
        balanced,
        coloring,
        facets,
        has_facets: Some(has),
        obstruction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::Connection;

    fn conn(name: &str) -> GkmGraph {
        ensure_connection(&fixtures::load(name).unwrap()).unwrap()
    }

    fn coloring(g: &GkmGraph) -> BalancedColoring {
        match balanced_coloring(g).unwrap() {
            ColoringOutcome::Balanced(c) => c,
            ColoringOutcome::Obstructed(o) => panic!("{o:?}"),
        }
    }

    #[test]
    fn octahedron_triangle_swaps_transversals() {
        let g = conn("octahedron");
        let base = g.vertex_index("+1").unwrap();
        let seed: Vec<usize> = ["+1_+2+", "+1_+3+"].iter().map(|n| g.dart_index(n).unwrap()).collect();
        let tri = span_face(&g, base, &seed).unwrap();
        let m = two_face_monodromy(&g, &tri, base).unwrap();
        let t1 = g.dart_index("+1_-2+").unwrap();
        let t2 = g.dart_index("+1_-3+").unwrap();
        assert_eq!(m.image(t1), t2);
        assert_eq!(m.image(t2), t1);
        // odd cycle: the face darts are swapped too
        assert_eq!(m.image(seed[0]), seed[1]);
    }

    #[test]
    fn cube_squares_have_trivial_monodromy() {
        let g = conn("cube3");
        for f in two_faces(&g).unwrap() {
            for &v in f.vertices() {
                assert!(two_face_monodromy(&g, &f, v).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn reverse_traversal_inverts() {
        for name in ["octahedron", "cp3", "cube4-projected"] {
            let g = conn(name);
            for f in two_faces(&g).unwrap() {
                let v = f.vertices()[0];
                let fwd = two_face_monodromy(&g, &f, v).unwrap();
                let back = reverse_monodromy(&g, &f, v).unwrap();
                for (x, y) in &fwd.permutation {
                    assert_eq!(back.image(*y), *x);
                }
            }
        }
    }

    #[test]
    fn parity() {
        let cube = conn("cube4");
        assert!(is_bipartite(&cube) && is_even(&cube).unwrap());
        let oct = conn("octahedron");
        assert!(!is_bipartite(&oct));
        assert!(!is_even(&oct).unwrap());
    }

    /// HP^2's weights admit no connection under the signed convention; the
    /// combinatorial connection (biangles and triangles) is supplied by hand.
    #[test]
    fn hp2_combinatorics_is_not_even() {
        let g = fixtures::load("hp2-shell").unwrap();
        let pair = |a: &str, b: &str| -> (usize, usize) { (g.dart_index(a).unwrap(), g.dart_index(b).unwrap()) };
        let mut maps = vec![Vec::new(); g.darts().len()];
        // edges ij- and ij+ between lines i<j; transport along ij± fixes the
        // biangle and moves ik± to jk± (same sign)
        let mut set = |along: &str, pairs: &[(&str, &str)]| {
            let d = g.dart_index(along).unwrap();
            let mut image = vec![usize::MAX; g.dimension()];
            for (a, b) in pairs {
                let (a, b) = pair(a, b);
                image[g.star_position(a)] = b;
            }
            maps[d] = image;
        };
        for s in ["-", "+"] {
            let o = if s == "-" { "+" } else { "-" };
            set(&format!("12{s}+"), &[(&format!("12{s}+"), &format!("12{s}-")), (&format!("12{o}+"), &format!("12{o}-")), ("13-+", "23-+"), ("13++", "23++")]);
            set(&format!("12{s}-"), &[(&format!("12{s}-"), &format!("12{s}+")), (&format!("12{o}-"), &format!("12{o}+")), ("23-+", "13-+"), ("23++", "13++")]);
            set(&format!("13{s}+"), &[(&format!("13{s}+"), &format!("13{s}-")), (&format!("13{o}+"), &format!("13{o}-")), ("12-+", "23--"), ("12++", "23+-")]);
            set(&format!("13{s}-"), &[(&format!("13{s}-"), &format!("13{s}+")), (&format!("13{o}-"), &format!("13{o}+")), ("23--", "12-+"), ("23+-", "12++")]);
            set(&format!("23{s}+"), &[(&format!("23{s}+"), &format!("23{s}-")), (&format!("23{o}+"), &format!("23{o}-")), ("12--", "13--"), ("12+-", "13+-")]);
            set(&format!("23{s}-"), &[(&format!("23{s}-"), &format!("23{s}+")), (&format!("23{o}-"), &format!("23{o}+")), ("13--", "12--"), ("13+-", "12+-")]);
        }
        // the weights violate collinearity on biangles
        let raw = g.with_combinatorial_connection(Connection::from_maps(maps)).unwrap();
        let faces = two_faces(&raw).unwrap();
        let lengths: Vec<usize> = faces.iter().map(|f| f.vertices().len()).collect();
        assert!(lengths.contains(&2) && lengths.contains(&3), "{lengths:?}");
        assert!(!is_even(&raw).unwrap());
    }

    #[test]
    fn projected_cube_colors_by_direction() {
        let g = conn("cube3-projected");
        let c = coloring(&g);
        assert!(c.is_valid(&g));
        for d in g.edges() {
            let dir = g.dart(*d).edge.as_bytes()[1] - b'0';
            assert_eq!(c.color(*d), dir as usize);
        }
        let facets = facets_from_coloring(&g, &c).unwrap();
        assert_eq!(facets.len(), 6);
        assert!(facets.iter().all(|f| f.vertices().len() == 4 && f.is_totally_geodesic(&g)));
    }

    #[test]
    fn obstructions() {
        for name in ["octahedron", "cp3"] {
            let g = conn(name);
            match balanced_coloring(&g).unwrap() {
                ColoringOutcome::Obstructed(o) => {
                    assert_ne!(o.expected_color, o.found_color);
                    assert_eq!(o.cycle.first(), o.cycle.last());
                }
                ColoringOutcome::Balanced(_) => panic!("{name} should not be balanced"),
            }
        }
    }

    #[test]
    fn facet_detection() {
        assert!(!has_facets(&conn("octahedron")).unwrap());
        assert!(has_facets(&conn("cube3-projected")).unwrap());
        assert!(has_facets(&conn("sphere")).unwrap());
        let g = conn("cube5-projected");
        assert_eq!(facets_from_coloring(&g, &coloring(&g)).unwrap().len(), 10);
    }

    #[test]
    fn dual_posets() {
        let g = conn("cube3-projected");
        let facets = facets_from_coloring(&g, &coloring(&g)).unwrap();
        let dual = build_dual_simplicial_poset(&g, &facets).unwrap();
        assert_eq!(dual.rank_counts(), [1, 6, 12, 8]);

        let g = conn("sphere");
        let facets = facets_from_coloring(&g, &coloring(&g)).unwrap();
        assert_eq!(facets.len(), 2);
        let dual = build_dual_simplicial_poset(&g, &facets).unwrap();
        assert_eq!(dual.rank_counts(), [1, 2]);

        let g = conn("cube4");
        let facets = facets_from_coloring(&g, &coloring(&g)).unwrap();
        let dual = build_dual_simplicial_poset(&g, &facets).unwrap();
        assert_eq!(dual.rank_counts(), [1, 8, 24, 32, 16]);
    }

    #[test]
    fn missing_facet_breaks_boolean_intervals() {
        let g = conn("cube3");
        let mut facets = facets_from_coloring(&g, &coloring(&g)).unwrap();
        facets.pop();
        assert!(matches!(
            build_dual_simplicial_poset(&g, &facets),
            Err(StructureError::BooleanIntervalViolation { .. })
        ));
    }
}
