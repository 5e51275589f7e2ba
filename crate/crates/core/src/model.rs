//! GKM graphs: ingestion, validation, independence and the canonical connection.
//!
//! A graph is stored with integer indices. Vertices are sorted by id, darts are
//! sorted by name, and `star(p)` lists the darts leaving `p` in dart order.
//! Every undirected edge `e` with endpoints `from -> to` yields the darts
//! `e+` (from `from`) and `e-` (from `to`); the weight of `e-` is the
//! negative of the weight of `e+`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::rank_of_int_vectors;

/// An element of the weight lattice `Z^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| *x == 0)
    }

    pub fn negated(&self) -> WeightVector {
        WeightVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn sub(&self, other: &WeightVector) -> WeightVector {
        WeightVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// The scalar `c` with `self = c * direction`, if one exists.
    /// `direction` must be nonzero.
    pub fn collinear_scalar(&self, direction: &WeightVector) -> Option<BigRational> {
        let (i, di) = direction
            .0
            .iter()
            .enumerate()
            .find(|(_, x)| **x != 0)
            .expect("direction must be nonzero");
        let c = BigRational::new(BigInt::from(self.0[i]), BigInt::from(*di));
        // u_a d_i == u_i d_a for all a
        let ok = self
            .0
            .iter()
            .zip(&direction.0)
            .all(|(u, d)| (*u as i128) * (*di as i128) == (self.0[i] as i128) * (*d as i128));
        ok.then_some(c)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A directed half of an edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dart {
    pub name: String,
    pub edge: String,
    pub source: usize,
    pub target: usize,
    pub twin: usize,
    pub weight: WeightVector,
}

/// For each dart `d = (p -> q)` a bijection `star(p) -> star(q)`.
///
/// `maps[d][i]` is the image of the `i`-th dart of `star(source(d))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    maps: Vec<Vec<usize>>,
}

impl Connection {
    /// Builds a connection from raw maps without checking any axiom.
    pub fn from_maps(maps: Vec<Vec<usize>>) -> Self {
        Connection { maps }
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }
}

/// JSON document describing a graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub torus_rank: i64,
    pub dimension: i64,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<Vec<ConnectionEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDocument {
    pub id: String,
    pub from: String,
    pub to: String,
    pub weight: Vec<i64>,
}

/// Transport along the `from -> to` dart of edge `along`. Each pair names an
/// edge at the source and its image edge at the target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionEntry {
    pub along: String,
    pub map: Vec<[String; 2]>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("torus rank must be positive, got {0}")]
    TorusRank(i64),
    #[error("dimension must be positive, got {0}")]
    Dimension(i64),
    #[error("graph has no vertices")]
    NoVertices,
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("edge `{edge}` references unknown vertex `{vertex}`")]
    UnknownVertex { edge: String, vertex: String },
    #[error("edge `{0}` is a loop")]
    Loop(String),
    #[error("edge `{edge}` has weight of length {len}, expected {expected}")]
    WeightLength { edge: String, len: usize, expected: usize },
    #[error("edge `{0}` has zero weight")]
    ZeroWeight(String),
    #[error("edge `{0}` is listed more than twice or twice in the same direction")]
    DuplicateEdge(String),
    #[error("edge `{edge}`: twin weight {twin} is not the negative of {weight}")]
    TwinWeight { edge: String, weight: WeightVector, twin: WeightVector },
    #[error("vertex `{vertex}` has valence {valence}, expected {expected}")]
    NonRegular { vertex: String, valence: usize, expected: usize },
    #[error("graph is disconnected: vertex `{0}` is unreachable")]
    Disconnected(String),
    #[error("weights span a subspace of rank {rank} < torus rank {torus_rank}")]
    Noneffective { rank: usize, torus_rank: usize },
    #[error("connection: {0}")]
    Connection(#[from] ConnectionError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConnectionError {
    #[error("entry references unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("edge `{0}` has more than one entry")]
    DuplicateEntry(String),
    #[error("edge `{0}` has no entry")]
    MissingEntry(String),
    #[error("along `{along}`: edge `{edge}` is not incident to vertex `{vertex}`")]
    NotIncident { along: String, edge: String, vertex: String },
    #[error("transport along dart `{0}` is not a bijection of stars")]
    NotBijective(String),
    #[error("transport along dart `{0}` does not send it to its twin")]
    TwinNotFixed(String),
    #[error("transport along `{0}` is not inverse to transport along its twin")]
    NotInvolutive(String),
    #[error("along `{along}`: image of `{dart}` differs by a weight not collinear to the edge")]
    NotCollinear { along: String, dart: String },
    #[error("along `{along}`: no dart at the target is collinear-compatible with `{dart}`")]
    NoCandidate { along: String, dart: String },
    #[error("along `{along}`: several darts are compatible with `{dart}`: {candidates:?}")]
    AmbiguousCandidate { along: String, dart: String, candidates: Vec<String> },
}

/// An abstract GKM graph with an optional connection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmGraph {
    torus_rank: usize,
    dimension: usize,
    vertices: Vec<String>,
    darts: Vec<Dart>,
    star: Vec<Vec<usize>>,
    star_pos: Vec<usize>,
    edges: Vec<usize>,
    connection: Option<Connection>,
}

/// Parses and validates a JSON document.
pub fn parse_graph(text: &str) -> Result<GkmGraph, GraphError> {
    let doc: GraphDocument =
        serde_json::from_str(text).map_err(|e| GraphError::Schema(e.to_string()))?;
    GkmGraph::from_document(&doc)
}

impl GkmGraph {
    pub fn from_document(doc: &GraphDocument) -> Result<GkmGraph, GraphError> {
        if doc.torus_rank < 1 {
            return Err(GraphError::TorusRank(doc.torus_rank));
        }
        if doc.dimension < 1 {
            return Err(GraphError::Dimension(doc.dimension));
        }
        let k = doc.torus_rank as usize;
        let n = doc.dimension as usize;
        if doc.vertices.is_empty() {
            return Err(GraphError::NoVertices);
        }
        let mut vertices = doc.vertices.clone();
        vertices.sort();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0].clone()));
        }
        let vindex: HashMap<&str, usize> =
            vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();

        // undirected edges keyed by id: (from, to, weight)
        let mut undirected: BTreeMap<&str, (usize, usize, WeightVector, bool)> = BTreeMap::new();
        for e in &doc.edges {
            if e.id.is_empty() {
                return Err(GraphError::Schema("edge id must be nonempty".into()));
            }
            let lookup = |v: &str| {
                vindex.get(v).copied().ok_or_else(|| GraphError::UnknownVertex {
                    edge: e.id.clone(),
                    vertex: v.to_string(),
                })
            };
            let from = lookup(&e.from)?;
            let to = lookup(&e.to)?;
            if from == to {
                return Err(GraphError::Loop(e.id.clone()));
            }
            if e.weight.len() != k {
                return Err(GraphError::WeightLength {
                    edge: e.id.clone(),
                    len: e.weight.len(),
                    expected: k,
                });
            }
            let w = WeightVector(e.weight.clone());
            if w.is_zero() {
                return Err(GraphError::ZeroWeight(e.id.clone()));
            }
            match undirected.get_mut(e.id.as_str()) {
                None => {
                    undirected.insert(&e.id, (from, to, w, false));
                }
                // a repeated id in the opposite direction specifies the twin dart
                Some((f0, t0, w0, seen_twin)) if !*seen_twin && *f0 == to && *t0 == from => {
                    if w != w0.negated() {
                        return Err(GraphError::TwinWeight {
                            edge: e.id.clone(),
                            weight: w0.clone(),
                            twin: w,
                        });
                    }
                    *seen_twin = true;
                }
                Some(_) => return Err(GraphError::DuplicateEdge(e.id.clone())),
            }
        }

        let mut raw: Vec<Dart> = Vec::with_capacity(2 * undirected.len());
        for (id, (from, to, w, _)) in &undirected {
            raw.push(Dart {
                name: format!("{id}+"),
                edge: id.to_string(),
                source: *from,
                target: *to,
                twin: usize::MAX,
                weight: w.clone(),
            });
            raw.push(Dart {
                name: format!("{id}-"),
                edge: id.to_string(),
                source: *to,
                target: *from,
                twin: usize::MAX,
                weight: w.negated(),
            });
        }
        raw.sort_by(|a, b| a.name.cmp(&b.name));
        let by_name: HashMap<String, usize> =
            raw.iter().enumerate().map(|(i, d)| (d.name.clone(), i)).collect();
        for d in raw.iter_mut() {
            let other = if d.name.ends_with('+') {
                format!("{}-", d.edge)
            } else {
                format!("{}+", d.edge)
            };
            d.twin = by_name[&other];
        }
        let darts = raw;

        let mut star = vec![Vec::new(); vertices.len()];
        for (i, d) in darts.iter().enumerate() {
            star[d.source].push(i);
        }
        for (v, s) in star.iter().enumerate() {
            if s.len() != n {
                return Err(GraphError::NonRegular {
                    vertex: vertices[v].clone(),
                    valence: s.len(),
                    expected: n,
                });
            }
        }
        let mut star_pos = vec![0; darts.len()];
        for s in &star {
            for (i, d) in s.iter().enumerate() {
                star_pos[*d] = i;
            }
        }

        // connectivity
        let mut seen = vec![false; vertices.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for d in &star[v] {
                let t = darts[*d].target;
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(GraphError::Disconnected(vertices[v].clone()));
        }

        let all: Vec<Vec<i64>> = darts.iter().map(|d| d.weight.0.clone()).collect();
        let rank = rank_of_int_vectors(&all);
        if rank != k {
            return Err(GraphError::Noneffective { rank, torus_rank: k });
        }

        let edges: Vec<usize> =
            (0..darts.len()).filter(|i| darts[*i].name.ends_with('+')).collect();

        let mut g = GkmGraph {
            torus_rank: k,
            dimension: n,
            vertices,
            darts,
            star,
            star_pos,
            edges,
            connection: None,
        };
        if let Some(entries) = &doc.connection {
            let conn = g.connection_from_entries(entries)?;
            g.validate_connection(&conn)?;
            g.connection = Some(conn);
        }
        Ok(g)
    }

    fn connection_from_entries(
        &self,
        entries: &[ConnectionEntry],
    ) -> Result<Connection, ConnectionError> {
        let edge_dart: HashMap<&str, usize> =
            self.edges.iter().map(|d| (self.darts[*d].edge.as_str(), *d)).collect();
        let mut maps: Vec<Option<Vec<usize>>> = vec![None; self.darts.len()];
        for entry in entries {
            let &d = edge_dart
                .get(entry.along.as_str())
                .ok_or_else(|| ConnectionError::UnknownEdge(entry.along.clone()))?;
            if maps[d].is_some() {
                return Err(ConnectionError::DuplicateEntry(entry.along.clone()));
            }
            let (p, q) = (self.darts[d].source, self.darts[d].target);
            let dart_at = |edge: &str, v: usize| -> Result<usize, ConnectionError> {
                let &f = edge_dart
                    .get(edge)
                    .ok_or_else(|| ConnectionError::UnknownEdge(edge.to_string()))?;
                if self.darts[f].source == v {
                    Ok(f)
                } else if self.darts[f].target == v {
                    Ok(self.darts[f].twin)
                } else {
                    Err(ConnectionError::NotIncident {
                        along: entry.along.clone(),
                        edge: edge.to_string(),
                        vertex: self.vertices[v].clone(),
                    })
                }
            };
            let mut image = vec![usize::MAX; self.dimension];
            for [a, b] in &entry.map {
                let ea = dart_at(a, p)?;
                let eb = dart_at(b, q)?;
                let slot = &mut image[self.star_pos[ea]];
                if *slot != usize::MAX {
                    return Err(ConnectionError::NotBijective(self.darts[d].name.clone()));
                }
                *slot = eb;
            }
            if image.contains(&usize::MAX) {
                return Err(ConnectionError::NotBijective(self.darts[d].name.clone()));
            }
            maps[d] = Some(image);
        }
        for &d in &self.edges {
            let Some(forward) = maps[d].clone() else {
                return Err(ConnectionError::MissingEntry(self.darts[d].edge.clone()));
            };
            let t = self.darts[d].twin;
            let mut inverse = vec![usize::MAX; self.dimension];
            for (i, img) in forward.iter().enumerate() {
                if self.darts[*img].source != self.darts[d].target
                    || inverse[self.star_pos[*img]] != usize::MAX
                {
                    return Err(ConnectionError::NotBijective(self.darts[d].name.clone()));
                }
                inverse[self.star_pos[*img]] = self.star[self.darts[d].source][i];
            }
            maps[t] = Some(inverse);
        }
        Ok(Connection { maps: maps.into_iter().map(|m| m.expect("all darts covered")).collect() })
    }

    /// Checks the connection axioms: bijectivity, `θ_d(d) = twin(d)`,
    /// `θ_twin(d) = θ_d^{-1}` and collinearity of weight differences.
    pub fn validate_connection(&self, conn: &Connection) -> Result<(), ConnectionError> {
        self.check_connection(conn, true)
    }

    fn check_connection(&self, conn: &Connection, collinear: bool) -> Result<(), ConnectionError> {
        if conn.maps.len() != self.darts.len() {
            return Err(ConnectionError::NotBijective("<size mismatch>".into()));
        }
        for (d, dart) in self.darts.iter().enumerate() {
            let map = &conn.maps[d];
            let name = || dart.name.clone();
            if map.len() != self.dimension {
                return Err(ConnectionError::NotBijective(name()));
            }
            let mut hit = vec![false; self.dimension];
            for img in map {
                if *img >= self.darts.len() || self.darts[*img].source != dart.target {
                    return Err(ConnectionError::NotBijective(name()));
                }
                let pos = self.star_pos[*img];
                if hit[pos] {
                    return Err(ConnectionError::NotBijective(name()));
                }
                hit[pos] = true;
            }
            if map[self.star_pos[d]] != dart.twin {
                return Err(ConnectionError::TwinNotFixed(name()));
            }
            let back = &conn.maps[dart.twin];
            for (i, img) in map.iter().enumerate() {
                if back.get(self.star_pos[*img]) != Some(&self.star[dart.source][i]) {
                    return Err(ConnectionError::NotInvolutive(name()));
                }
                let e = self.star[dart.source][i];
                let diff = self.darts[*img].weight.sub(&self.darts[e].weight);
                if collinear && diff.collinear_scalar(&dart.weight).is_none() {
                    return Err(ConnectionError::NotCollinear {
                        along: name(),
                        dart: self.darts[e].name.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.as_str().cmp(name)).ok()
    }

    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    pub fn dart(&self, d: usize) -> &Dart {
        &self.darts[d]
    }

    pub fn dart_index(&self, name: &str) -> Option<usize> {
        self.darts.binary_search_by(|d| d.name.as_str().cmp(name)).ok()
    }

    /// Darts leaving `v`, in dart order.
    pub fn star(&self, v: usize) -> &[usize] {
        &self.star[v]
    }

    /// Position of dart `d` inside `star(source(d))`.
    pub fn star_position(&self, d: usize) -> usize {
        self.star_pos[d]
    }

    /// Forward darts, one per undirected edge, sorted by edge id.
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, d: usize) -> &WeightVector {
        &self.darts[d].weight
    }

    pub fn connection(&self) -> Option<&Connection> {
        self.connection.as_ref()
    }

    /// Returns a copy carrying `conn`, after checking the connection axioms.
    pub fn with_connection(&self, conn: Connection) -> Result<GkmGraph, ConnectionError> {
        self.validate_connection(&conn)?;
        let mut g = self.clone();
        g.connection = Some(conn);
        Ok(g)
    }

    /// Like [`GkmGraph::with_connection`] but without the collinearity
    /// condition, for studying the combinatorics of graphs whose weights
    /// admit no compatible connection.
    pub fn with_combinatorial_connection(
        &self,
        conn: Connection,
    ) -> Result<GkmGraph, ConnectionError> {
        self.check_connection(&conn, false)?;
        let mut g = self.clone();
        g.connection = Some(conn);
        Ok(g)
    }

    /// Transport of dart `e` (leaving the source of `d`) along `d`.
    ///
    /// Panics if the graph carries no connection.
    pub fn transport(&self, d: usize, e: usize) -> usize {
        let conn = self.connection.as_ref().expect("graph carries no connection");
        debug_assert_eq!(self.darts[e].source, self.darts[d].source);
        conn.maps[d][self.star_pos[e]]
    }

    /// Applies an integer matrix (`torus_rank` rows, each of length
    /// `torus_rank`) to every weight; `w -> M w`.
    pub fn transform_weights(&self, matrix: &[Vec<i64>]) -> GkmGraph {
        let mut g = self.clone();
        for d in g.darts.iter_mut() {
            d.weight = WeightVector(
                matrix.iter().map(|row| row.iter().zip(&d.weight.0).map(|(a, b)| a * b).sum()).collect(),
            );
        }
        g
    }

    /// Serializes back into the input schema (forward darts only).
    pub fn to_document(&self) -> GraphDocument {
        let edges = self
            .edges
            .iter()
            .map(|d| {
                let dart = &self.darts[*d];
                EdgeDocument {
                    id: dart.edge.clone(),
                    from: self.vertices[dart.source].clone(),
                    to: self.vertices[dart.target].clone(),
                    weight: dart.weight.0.clone(),
                }
            })
            .collect();
        let connection = self.connection.as_ref().map(|conn| {
            self.edges
                .iter()
                .map(|d| ConnectionEntry {
                    along: self.darts[*d].edge.clone(),
                    map: self.star[self.darts[*d].source]
                        .iter()
                        .zip(&conn.maps[*d])
                        .map(|(a, b)| [self.darts[*a].edge.clone(), self.darts[*b].edge.clone()])
                        .collect(),
                })
                .collect()
        });
        GraphDocument {
            torus_rank: self.torus_rank as i64,
            dimension: self.dimension as i64,
            vertices: self.vertices.clone(),
            edges,
            connection,
        }
    }
}

/// Largest `j <= n` such that at every vertex every `<= j` weights of the
/// star are linearly independent over `Q`.
pub fn independence_level(g: &GkmGraph) -> usize {
    let n = g.dimension();
    (0..g.vertex_count())
        .map(|v| {
            let weights: Vec<Vec<i64>> =
                g.star(v).iter().map(|d| g.weight(*d).0.clone()).collect();
            vertex_independence(&weights, n)
        })
        .min()
        .unwrap_or(0)
}

fn vertex_independence(weights: &[Vec<i64>], n: usize) -> usize {
    let mut level = 0;
    for size in 1..=n {
        let all_independent = subsets(weights.len(), size).all(|subset| {
            let vs: Vec<Vec<i64>> = subset.iter().map(|i| weights[*i].clone()).collect();
            rank_of_int_vectors(&vs) == size
        });
        if !all_independent {
            break;
        }
        level = size;
    }
    level
}

/// All `size`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, size: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = if size <= n { Some((0..size).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = size;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < n - size + i {
                next[i] += 1;
                for j in i + 1..size {
                    next[j] = next[j - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// The unique connection whose transports shift weights by multiples of the
/// traversed weight. Fails if some dart has no candidate or several.
pub fn compute_canonical_connection(g: &GkmGraph) -> Result<Connection, ConnectionError> {
    let mut maps = Vec::with_capacity(g.darts().len());
    for (d, dart) in g.darts().iter().enumerate() {
        let targets = g.star(dart.target);
        let mut image = Vec::with_capacity(g.dimension());
        for &e in g.star(dart.source) {
            if e == d {
                image.push(dart.twin);
                continue;
            }
            let candidates: Vec<usize> = targets
                .iter()
                .copied()
                .filter(|&t| t != dart.twin)
                .filter(|&t| g.weight(t).sub(g.weight(e)).collinear_scalar(&dart.weight).is_some())
                .collect();
            match candidates.as_slice() {
                [one] => image.push(*one),
                [] => {
                    return Err(ConnectionError::NoCandidate {
                        along: dart.name.clone(),
                        dart: g.dart(e).name.clone(),
                    })
                }
                many => {
                    return Err(ConnectionError::AmbiguousCandidate {
                        along: dart.name.clone(),
                        dart: g.dart(e).name.clone(),
                        candidates: many.iter().map(|t| g.dart(*t).name.clone()).collect(),
                    })
                }
            }
        }
        maps.push(image);
    }
    let conn = Connection { maps };
    g.validate_connection(&conn)?;
    Ok(conn)
}

/// The graph's own connection if it has one, otherwise the canonical one.
pub fn ensure_connection(g: &GkmGraph) -> Result<GkmGraph, ConnectionError> {
    if g.connection().is_some() {
        return Ok(g.clone());
    }
    let conn = compute_canonical_connection(g)?;
    let mut out = g.clone();
    out.connection = Some(conn);
    Ok(out)
}
