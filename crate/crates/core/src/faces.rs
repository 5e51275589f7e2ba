//! Totally geodesic faces and the graded face poset.
//!
//! A face is found by closing a seed of darts at one vertex under transport:
//! every accepted dart carries the accepted dart set at its source to a dart
//! set at its target. The closure either stabilises with the same number of
//! darts everywhere (a face) or two transports disagree at some vertex.

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::rank_of_int_vectors;
use crate::model::{subsets, GkmGraph};

/// A connected regular subgraph closed under transport.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    dim: usize,
    vertices: Vec<usize>,
    darts: Vec<usize>,
    rank: usize,
}

impl Face {
    /// Assembles a face from its parts; nothing is checked, see
    /// [`Face::is_totally_geodesic`].
    pub fn from_parts(g: &GkmGraph, vertices: Vec<usize>, darts: Vec<usize>, dim: usize) -> Face {
        Face::new(g, vertices, darts, dim)
    }

    fn new(g: &GkmGraph, mut vertices: Vec<usize>, mut darts: Vec<usize>, dim: usize) -> Face {
        vertices.sort_unstable();
        darts.sort_unstable();
        let weights: Vec<Vec<i64>> = darts.iter().map(|d| g.weight(*d).0.clone()).collect();
        let rank = rank_of_int_vectors(&weights);
        Face { dim, vertices, darts, rank }
    }

    /// The single-vertex face `{p}`.
    pub fn vertex(g: &GkmGraph, p: usize) -> Face {
        Face::new(g, vec![p], Vec::new(), 0)
    }

    /// The whole graph as a face of dimension `n`.
    pub fn whole(g: &GkmGraph) -> Face {
        Face::new(
            g,
            (0..g.vertex_count()).collect(),
            (0..g.darts().len()).collect(),
            g.dimension(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the rational span of the face's weights.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Sorted vertex indices.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Sorted dart indices; closed under twinning.
    pub fn darts(&self) -> &[usize] {
        &self.darts
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn contains_dart(&self, d: usize) -> bool {
        self.darts.binary_search(&d).is_ok()
    }

    /// Inclusion of subgraphs.
    pub fn is_subface_of(&self, other: &Face) -> bool {
        is_sorted_subset(&self.vertices, &other.vertices) && is_sorted_subset(&self.darts, &other.darts)
    }

    /// Darts of the face leaving `v`, in dart order.
    pub fn star_at(&self, g: &GkmGraph, v: usize) -> Vec<usize> {
        g.star(v).iter().copied().filter(|d| self.contains_dart(*d)).collect()
    }

    /// Darts at `v` not in the face.
    pub fn transversal_at(&self, g: &GkmGraph, v: usize) -> Vec<usize> {
        g.star(v).iter().copied().filter(|d| !self.contains_dart(*d)).collect()
    }

    /// Checks the defining conditions directly: `dim`-valent at every vertex,
    /// connected, twin-closed, and transport-invariant.
    pub fn is_totally_geodesic(&self, g: &GkmGraph) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        for &v in &self.vertices {
            if self.star_at(g, v).len() != self.dim {
                return false;
            }
        }
        for &d in &self.darts {
            let dart = g.dart(d);
            if !self.contains_vertex(dart.source) || !self.contains_vertex(dart.target) {
                return false;
            }
            if !self.contains_dart(dart.twin) {
                return false;
            }
            let mut image: Vec<usize> =
                self.star_at(g, dart.source).iter().map(|e| g.transport(d, *e)).collect();
            image.sort_unstable();
            if image != self.star_at(g, dart.target) {
                return false;
            }
        }
        // connectivity over face darts
        let mut seen = vec![false; g.vertex_count()];
        let mut queue = VecDeque::from([self.vertices[0]]);
        seen[self.vertices[0]] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for d in self.star_at(g, v) {
                let t = g.dart(d).target;
                if !seen[t] {
                    seen[t] = true;
                    count += 1;
                    queue.push_back(t);
                }
            }
        }
        count == self.vertices.len()
    }

    pub fn vertex_names(&self, g: &GkmGraph) -> Vec<String> {
        self.vertices.iter().map(|v| g.vertex_name(*v).to_string()).collect()
    }

    pub fn dart_names(&self, g: &GkmGraph) -> Vec<String> {
        self.darts.iter().map(|d| g.dart(*d).name.clone()).collect()
    }
}

fn is_sorted_subset(a: &[usize], b: &[usize]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

/// Where a closure stopped being a face: transports into `vertex` produced
/// two different dart sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureWitness {
    pub vertex: String,
    pub existing: Vec<String>,
    pub transported: Vec<String>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SpanError {
    #[error("graph carries no connection")]
    NoConnection,
    #[error("seed dart does not leave the base vertex")]
    SeedNotInStar,
    #[error("closure inconsistent at vertex `{}`", .0.vertex)]
    ClosureInconsistent(ClosureWitness),
}

/// The smallest face containing `seed` at `p`, or a witness that the closure
/// of `seed` is not a face. An empty seed spans the vertex `{p}`.
pub fn span_face(g: &GkmGraph, p: usize, seed: &[usize]) -> Result<Face, SpanError> {
    if g.connection().is_none() {
        return Err(SpanError::NoConnection);
    }
    if seed.iter().any(|d| g.dart(*d).source != p) {
        return Err(SpanError::SeedNotInStar);
    }
    let mut start: Vec<usize> = seed.to_vec();
    start.sort_unstable();
    start.dedup();
    let dim = start.len();
    let mut at: Vec<Option<Vec<usize>>> = vec![None; g.vertex_count()];
    at[p] = Some(start);
    let mut queue = VecDeque::from([p]);
    while let Some(v) = queue.pop_front() {
        let here = at[v].clone().expect("queued vertices are assigned");
        for &d in &here {
            let w = g.dart(d).target;
            let mut image: Vec<usize> = here.iter().map(|e| g.transport(d, *e)).collect();
            image.sort_unstable();
            match &at[w] {
                None => {
                    at[w] = Some(image);
                    queue.push_back(w);
                }
                Some(existing) if *existing == image => {}
                Some(existing) => {
                    let names = |ds: &[usize]| ds.iter().map(|x| g.dart(*x).name.clone()).collect();
                    return Err(SpanError::ClosureInconsistent(ClosureWitness {
                        vertex: g.vertex_name(w).to_string(),
                        existing: names(existing),
                        transported: names(&image),
                    }));
                }
            }
        }
    }
    let mut vertices = Vec::new();
    let mut darts = Vec::new();
    for (v, s) in at.into_iter().enumerate() {
        if let Some(s) = s {
            vertices.push(v);
            darts.extend(s);
        }
    }
    Ok(Face::new(g, vertices, darts, dim))
}

/// A finite set of faces ordered by inclusion, in canonical order
/// (dimension, then vertex list, then dart list). Index order is a linear
/// extension of the inclusion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacePoset {
    faces: Vec<Face>,
    below: Vec<Vec<usize>>,
}

impl FacePoset {
    /// Sorts, deduplicates and computes strict inclusions.
    pub fn from_faces(mut faces: Vec<Face>) -> FacePoset {
        faces.sort();
        faces.dedup_by(|a, b| a.vertices == b.vertices && a.darts == b.darts);
        let below = (0..faces.len())
            .map(|i| (0..i).filter(|&j| faces[j].is_subface_of(&faces[i])).collect())
            .collect();
        FacePoset { faces, below }
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> &Face {
        &self.faces[i]
    }

    /// Indices of faces strictly contained in face `i`.
    pub fn strictly_below(&self, i: usize) -> &[usize] {
        &self.below[i]
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.below[b].binary_search(&a).is_ok()
    }

    pub fn index_of(&self, face: &Face) -> Option<usize> {
        self.faces.iter().position(|f| f.vertices == face.vertices && f.darts == face.darts)
    }

    /// Faces of dimension `d`.
    pub fn of_dim(&self, d: usize) -> impl Iterator<Item = (usize, &Face)> {
        self.faces.iter().enumerate().filter(move |(_, f)| f.dim == d)
    }

    pub fn count_by_dim(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for f in &self.faces {
            *out.entry(f.dim).or_insert(0) += 1;
        }
        out
    }

    fn restrict(&self, keep: impl Fn(usize) -> bool) -> FacePoset {
        FacePoset::from_faces((0..self.len()).filter(|i| keep(*i)).map(|i| self.faces[i].clone()).collect())
    }

    /// Faces of rank at most `r`.
    pub fn skeleton(&self, r: usize) -> FacePoset {
        self.restrict(|i| self.faces[i].rank <= r)
    }

    /// Faces strictly below face `s`.
    pub fn lower_ideal(&self, s: usize) -> FacePoset {
        self.restrict(|i| self.less(i, s))
    }

    /// Pairs `(lower, upper)` where `upper` covers `lower`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for &j in &self.below[i] {
                let covered = !self.below[i].iter().any(|&m| m != j && self.less(j, m));
                if covered {
                    out.push((j, i));
                }
            }
        }
        out
    }

    /// Hasse diagram export.
    pub fn export(&self, g: &GkmGraph) -> Vec<FaceRecord> {
        let mut covered_by: Vec<Vec<String>> = vec![Vec::new(); self.len()];
        for (lo, hi) in self.covers() {
            covered_by[hi].push(face_id(lo));
        }
        self.faces
            .iter()
            .enumerate()
            .map(|(i, f)| FaceRecord {
                id: face_id(i),
                vertices: f.vertex_names(g),
                darts: f.dart_names(g),
                dim: f.dim,
                rank: f.rank,
                covers: std::mem::take(&mut covered_by[i]),
            })
            .collect()
    }
}

pub fn face_id(i: usize) -> String {
    format!("F{i}")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceRecord {
    pub id: String,
    pub vertices: Vec<String>,
    pub darts: Vec<String>,
    pub dim: usize,
    pub rank: usize,
    /// Ids of the faces this face covers.
    pub covers: Vec<String>,
}

/// A seed whose closure failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkippedSeed {
    pub vertex: String,
    pub seed: Vec<String>,
    pub witness: ClosureWitness,
}

#[derive(Clone, Debug)]
pub struct FaceEnumeration {
    pub poset: FacePoset,
    pub skipped: Vec<SkippedSeed>,
}

/// Spans every seed of at most `max_dim` darts at every vertex and collects
/// the distinct faces; the whole graph is added on request.
pub fn enumerate_faces(
    g: &GkmGraph,
    max_dim: usize,
    include_whole: bool,
) -> Result<FaceEnumeration, SpanError> {
    if g.connection().is_none() {
        return Err(SpanError::NoConnection);
    }
    let max_dim = max_dim.min(g.dimension());
    let per_vertex: Vec<(Vec<Face>, Vec<SkippedSeed>)> = (0..g.vertex_count())
        .into_par_iter()
        .map(|p| {
            let star = g.star(p);
            let mut faces = Vec::new();
            let mut skipped = Vec::new();
            for size in 0..=max_dim {
                for subset in subsets(star.len(), size) {
                    let seed: Vec<usize> = subset.iter().map(|i| star[*i]).collect();
                    match span_face(g, p, &seed) {
                        Ok(f) => faces.push(f),
                        Err(SpanError::ClosureInconsistent(witness)) => skipped.push(SkippedSeed {
                            vertex: g.vertex_name(p).to_string(),
                            seed: seed.iter().map(|d| g.dart(*d).name.clone()).collect(),
                            witness,
                        }),
                        Err(e) => unreachable!("{e}"),
                    }
                }
            }
            (faces, skipped)
        })
        .collect();
    let mut faces = Vec::new();
    let mut skipped = Vec::new();
    for (f, s) in per_vertex {
        faces.extend(f);
        skipped.extend(s);
    }
    if include_whole {
        faces.push(Face::whole(g));
    }
    Ok(FaceEnumeration { poset: FacePoset::from_faces(faces), skipped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{ensure_connection, independence_level};

    fn conn(name: &str) -> GkmGraph {
        ensure_connection(&fixtures::load(name).unwrap()).unwrap()
    }

    fn darts(g: &GkmGraph, names: &[&str]) -> Vec<usize> {
        names.iter().map(|n| g.dart_index(n).unwrap()).collect()
    }

    #[test]
    fn octahedron_triangle() {
        let g = conn("octahedron");
        let p = g.vertex_index("+1").unwrap();
        let f = span_face(&g, p, &darts(&g, &["+1_+2+", "+1_+3+"])).unwrap();
        assert_eq!(f.vertex_names(&g), ["+1", "+2", "+3"]);
        assert_eq!((f.dim(), f.rank()), (2, 2));
        assert!(f.is_totally_geodesic(&g));
    }

    #[test]
    fn single_dart_spans_its_edge() {
        let g = conn("cp3");
        for d in 0..g.darts().len() {
            let dart = g.dart(d);
            let f = span_face(&g, dart.source, &[d]).unwrap();
            assert_eq!(f.darts(), {
                let mut v = vec![d, dart.twin];
                v.sort();
                v
            });
        }
    }

    /// Brute force: all 2-valent twin-closed, transport-closed, connected
    /// subgraphs of the 3-cube, by enumerating edge subsets.
    #[test]
    fn cube_square_matches_brute_force() {
        let g = conn("cube3");
        let p = g.vertex_index("000").unwrap();
        let star = g.star(p).to_vec();
        let spanned = span_face(&g, p, &star[..2]).unwrap();
        assert_eq!(spanned.vertices().len(), 4);

        let edges = g.edges().to_vec();
        let mut brute = Vec::new();
        for mask in 0u32..(1 << edges.len()) {
            if mask.count_ones() != 4 {
                continue;
            }
            let mut ds = Vec::new();
            let mut vs = Vec::new();
            for (i, e) in edges.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    ds.push(*e);
                    ds.push(g.dart(*e).twin);
                    vs.push(g.dart(*e).source);
                    vs.push(g.dart(*e).target);
                }
            }
            vs.sort();
            vs.dedup();
            let f = Face::new(&g, vs, ds, 2);
            if f.is_totally_geodesic(&g) {
                brute.push(f);
            }
        }
        assert_eq!(brute.len(), 6);
        assert!(brute.contains(&spanned));
    }

    #[test]
    fn octahedron_two_faces() {
        let g = conn("octahedron");
        let en = enumerate_faces(&g, 2, false).unwrap();
        let counts = en.poset.count_by_dim();
        assert_eq!(counts[&0], 6);
        assert_eq!(counts[&1], 12);
        assert_eq!(counts[&2], 11);
        let squares = en.poset.of_dim(2).filter(|(_, f)| f.vertices().len() == 4).count();
        assert_eq!(squares, 3);
        assert!(en.skipped.is_empty());
    }

    #[test]
    fn cube_and_edge_counts() {
        let counts = enumerate_faces(&conn("cube3"), 2, false).unwrap().poset.count_by_dim();
        assert_eq!(counts.values().copied().collect::<Vec<_>>(), [8, 12, 6]);
        let counts = enumerate_faces(&conn("sphere"), 1, false).unwrap().poset.count_by_dim();
        assert_eq!(counts.values().copied().collect::<Vec<_>>(), [2, 1]);
    }

    #[test]
    fn skeleton_and_ideal() {
        let g = conn("octahedron");
        let sp = enumerate_faces(&g, 2, false).unwrap().poset;
        assert_eq!(sp.skeleton(1).len(), 18);
        let zero = sp.skeleton(0);
        assert_eq!(zero.len(), 6);
        assert!((0..6).all(|i| zero.strictly_below(i).is_empty()));
        let (tri, _) = sp.of_dim(2).find(|(_, f)| f.vertices().len() == 3).unwrap();
        let ideal = sp.lower_ideal(tri);
        assert_eq!(ideal.count_by_dim().values().copied().collect::<Vec<_>>(), [3, 3]);
    }

    #[test]
    fn seeds_biject_with_faces_below_independence() {
        for name in ["octahedron", "cube4", "cp4", "cube5-projected"] {
            let g = conn(name);
            let j = independence_level(&g);
            let sp = enumerate_faces(&g, j - 1, false).unwrap().poset;
            for p in 0..g.vertex_count() {
                for d in 0..j {
                    let through: Vec<&Face> =
                        sp.of_dim(d).filter(|(_, f)| f.contains_vertex(p)).map(|(_, f)| f).collect();
                    let mut stars: Vec<Vec<usize>> = through.iter().map(|f| f.star_at(&g, p)).collect();
                    stars.sort();
                    stars.dedup();
                    assert_eq!(stars.len(), through.len(), "{name}: two faces share a star");
                    assert_eq!(through.len(), subsets(g.dimension(), d).count(), "{name} d={d}");
                }
            }
            for f in sp.faces() {
                assert!(f.is_totally_geodesic(&g));
                assert_eq!(f.rank(), f.dim());
            }
        }
    }

    #[test]
    fn export_lists_covers() {
        let g = conn("sphere");
        let sp = enumerate_faces(&g, 1, true).unwrap().poset;
        let ex = sp.export(&g);
        // two vertices, one edge; the edge is the whole graph
        assert_eq!(ex.len(), 3);
        assert_eq!(ex[2].covers, ["F0", "F1"]);
    }
}
