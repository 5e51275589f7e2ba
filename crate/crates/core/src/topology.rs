//! Order complexes, reduced rational homology and the acyclicity screen.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::faces::{enumerate_faces, face_id, FacePoset, SpanError};
use crate::linalg::SparseMatrix;
use crate::model::{ensure_connection, independence_level, ConnectionError, GkmGraph};

/// A finite poset given by strict down-sets.
pub trait Poset {
    fn size(&self) -> usize;
    /// Elements strictly below `i`.
    fn strictly_below(&self, i: usize) -> &[usize];
}

impl Poset for FacePoset {
    fn size(&self) -> usize {
        self.len()
    }
    fn strictly_below(&self, i: usize) -> &[usize] {
        FacePoset::strictly_below(self, i)
    }
}

/// A poset from a list of relations `a < b`, transitively closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitPoset {
    below: Vec<Vec<usize>>,
}

impl ExplicitPoset {
    /// Panics if the relations contain a cycle.
    pub fn new(size: usize, relations: &[(usize, usize)]) -> Self {
        let mut reach = vec![vec![false; size]; size];
        for &(a, b) in relations {
            reach[b][a] = true;
        }
        for m in 0..size {
            for b in 0..size {
                if reach[b][m] {
                    for a in 0..size {
                        if reach[m][a] {
                            reach[b][a] = true;
                        }
                    }
                }
            }
        }
        assert!((0..size).all(|i| !reach[i][i]), "relations contain a cycle");
        let below = reach
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, r)| **r).map(|(a, _)| a).collect())
            .collect();
        ExplicitPoset { below }
    }

    pub fn antichain(size: usize) -> Self {
        ExplicitPoset::new(size, &[])
    }
}

impl Poset for ExplicitPoset {
    fn size(&self) -> usize {
        self.below.len()
    }
    fn strictly_below(&self, i: usize) -> &[usize] {
        &self.below[i]
    }
}

/// An abstract simplicial complex on vertices `0..vertex_count`, stored by
/// dimension. Each simplex is a vertex list in a fixed total order of the
/// vertices (increasing index, or a linear extension for order complexes);
/// boundary signs follow list position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplexAbstract {
    vertex_count: usize,
    simplices: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplexAbstract {
    /// The downward closure of the given simplices.
    pub fn from_simplices(vertex_count: usize, given: &[Vec<usize>]) -> Self {
        let mut all: std::collections::BTreeSet<Vec<usize>> = Default::default();
        for s in given {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            assert!(s.iter().all(|v| *v < vertex_count));
            let k = s.len();
            for mask in 1u64..(1u64 << k) {
                all.insert((0..k).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect());
            }
        }
        Self::from_closed(vertex_count, all.into_iter().collect())
    }

    fn from_closed(vertex_count: usize, list: Vec<Vec<usize>>) -> Self {
        let mut simplices: Vec<Vec<Vec<usize>>> = Vec::new();
        for s in list {
            let d = s.len() - 1;
            if simplices.len() <= d {
                simplices.resize(d + 1, Vec::new());
            }
            simplices[d].push(s);
        }
        for level in simplices.iter_mut() {
            level.sort();
        }
        SimplicialComplexAbstract { vertex_count, simplices }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Maximal simplex dimension; `-1` for the empty complex.
    pub fn dim(&self) -> i64 {
        self.simplices.len() as i64 - 1
    }

    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        self.simplices.get(d).map_or(&[], |v| v.as_slice())
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(|s| s.len()).collect()
    }

    pub fn simplex_count(&self) -> usize {
        self.f_vector().iter().sum()
    }

    /// Alternating simplex count, augmented: `sum_i (-1)^i f_i - 1`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        let chi: i64 = self
            .f_vector()
            .iter()
            .enumerate()
            .map(|(i, f)| if i % 2 == 0 { *f as i64 } else { -(*f as i64) })
            .sum();
        chi - 1
    }

    pub fn chain_complex(&self) -> ChainComplexQ {
        let index: Vec<HashMap<&[usize], usize>> = self
            .simplices
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect())
            .collect();
        let boundaries = (0..self.simplices.len())
            .map(|d| {
                if d == 0 {
                    let mut m = SparseMatrix::new(1);
                    for _ in &self.simplices[0] {
                        m.push_row([(0, BigInt::from(1))]);
                    }
                    return m;
                }
                let mut m = SparseMatrix::new(self.simplices[d - 1].len());
                for s in &self.simplices[d] {
                    let row = (0..s.len()).map(|t| {
                        let mut face = s.clone();
                        face.remove(t);
                        let col = index[d - 1][face.as_slice()];
                        (col, BigInt::from(if t % 2 == 0 { 1 } else { -1 }))
                    });
                    m.push_row(row.collect::<Vec<_>>());
                }
                m
            })
            .collect();
        ChainComplexQ { boundaries }
    }
}

/// Augmented simplicial chain complex over `Q`. `boundary(i)` has one row per
/// `i`-simplex, expressed in the `(i-1)`-simplices; `boundary(0)` is the
/// augmentation onto the empty simplex.
#[derive(Clone, Debug)]
pub struct ChainComplexQ {
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplexQ {
    pub fn boundary(&self, i: usize) -> &SparseMatrix {
        &self.boundaries[i]
    }

    pub fn top_dim(&self) -> usize {
        self.boundaries.len()
    }

    /// Exact check of `∂_{i-1} ∘ ∂_i = 0` in every degree.
    pub fn is_square_zero(&self) -> bool {
        for i in 1..self.boundaries.len() {
            let lower = &self.boundaries[i - 1];
            for row in self.boundaries[i].rows() {
                let mut acc: HashMap<usize, BigInt> = HashMap::new();
                for (c, v) in row {
                    for (c2, v2) in &lower.rows()[*c] {
                        *acc.entry(*c2).or_default() += v * v2;
                    }
                }
                if acc.values().any(|x| *x != BigInt::from(0)) {
                    return false;
                }
            }
        }
        true
    }

    /// Ranks of `∂_0, ..., ∂_top`, computed in parallel.
    pub fn ranks(&self) -> Vec<usize> {
        self.boundaries.par_iter().map(|m| m.rank()).collect()
    }
}

/// Reduced Betti numbers `b̃_0, ..., b̃_dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, b)| if i % 2 == 0 { *b as i64 } else { -(*b as i64) })
            .sum()
    }
}

/// The complex whose simplices are the nonempty chains of `poset`.
/// Simplex vertices are poset elements; chains are listed bottom-up.
pub fn order_complex<P: Poset + ?Sized>(poset: &P) -> SimplicialComplexAbstract {
    let n = poset.size();
    // linear extension by height
    let mut height = vec![usize::MAX; n];
    fn h<P: Poset + ?Sized>(p: &P, i: usize, memo: &mut [usize]) -> usize {
        if memo[i] != usize::MAX {
            return memo[i];
        }
        let v = p.strictly_below(i).iter().map(|j| h(p, *j, memo) + 1).max().unwrap_or(0);
        memo[i] = v;
        v
    }
    for i in 0..n {
        h(poset, i, &mut height);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|i| (height[*i], *i));
    let mut pos = vec![0; n];
    for (k, i) in order.iter().enumerate() {
        pos[*i] = k;
    }
    // above[x] in extension positions
    let mut above: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for &j in poset.strictly_below(i) {
            above[pos[j]].push(pos[i]);
        }
    }
    for a in above.iter_mut() {
        a.sort_unstable();
    }
    let mut chains: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|x| vec![x]).collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().expect("chains are nonempty");
        for &y in &above[last] {
            let mut next = chain.clone();
            next.push(y);
            stack.push(next);
        }
        chains.push(chain);
    }
    SimplicialComplexAbstract::from_closed(n, chains).relabel(&order)
}

impl SimplicialComplexAbstract {
    /// Simplices index vertices by extension position; `order[k]` is the
    /// element at position `k`. Vertex lists stay in extension order.
    fn relabel(mut self, order: &[usize]) -> Self {
        for level in self.simplices.iter_mut() {
            for s in level.iter_mut() {
                for v in s.iter_mut() {
                    *v = order[*v];
                }
            }
        }
        self
    }
}

/// Exact reduced rational Betti numbers.
pub fn reduced_betti(c: &SimplicialComplexAbstract) -> BettiVector {
    let f = c.f_vector();
    if f.is_empty() {
        return BettiVector(Vec::new());
    }
    let ranks = c.chain_complex().ranks();
    let top = f.len();
    BettiVector(
        (0..top)
            .map(|i| {
                let next = if i + 1 < top { ranks[i + 1] } else { 0 };
                f[i] - ranks[i] - next
            })
            .collect(),
    )
}

/// `b̃_i = 0` for all `0 <= i <= t`; vacuous for `t < 0`.
pub fn is_t_acyclic(b: &BettiVector, t: i64) -> bool {
    if t < 0 {
        return true;
    }
    (0..=t as usize).all(|i| b.0.get(i).copied().unwrap_or(0) == 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScreenCheck {
    pub object: String,
    pub target_t: i64,
    pub betti: BettiVector,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScreenReport {
    pub independence: usize,
    pub max_face_dim: usize,
    pub checks: Vec<ScreenCheck>,
    pub pass: bool,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ScreenError {
    #[error(transparent)]
    Connection(#[from] ConnectionError),
    #[error(transparent)]
    Faces(#[from] SpanError),
}

fn check<P: Poset>(object: String, poset: &P, j: usize) -> ScreenCheck {
    let complex = order_complex(poset);
    let target_t = (complex.dim() - 1).min(j as i64 + 1);
    let betti = reduced_betti(&complex);
    let pass = is_t_acyclic(&betti, target_t);
    ScreenCheck { object, target_t, betti, pass }
}

/// Acyclicity conditions on the face poset that every graph of an
/// equivariantly formal manifold satisfies. With `j` the independence level,
/// faces are enumerated up to dimension `j - 1`; each skeleton `S_r`
/// (`1 <= r <= j - 1`) must be `min(dim S_r - 1, j + 1)`-acyclic and each
/// lower ideal `S_{<s}` must be `min(dim S_{<s} - 1, j + 1)`-acyclic, with
/// `dim` the order-complex dimension.
pub fn realizability_screen(g: &GkmGraph) -> Result<ScreenReport, ScreenError> {
    let g = ensure_connection(g)?;
    let j = independence_level(&g);
    let max_face_dim = j.saturating_sub(1);
    let poset = enumerate_faces(&g, max_face_dim, false)?.poset;
    let mut checks: Vec<ScreenCheck> = (1..=max_face_dim)
        .into_par_iter()
        .map(|r| check(format!("skeleton:{r}"), &poset.skeleton(r), j))
        .collect();
    let ideals: Vec<ScreenCheck> = (0..poset.len())
        .into_par_iter()
        .map(|s| check(format!("ideal:{}", face_id(s)), &poset.lower_ideal(s), j))
        .collect();
    checks.extend(ideals);
    let pass = checks.iter().all(|c| c.pass);
    Ok(ScreenReport { independence: j, max_face_dim, checks, pass })
}
