//! Independent reference computations shared by the integration tests.
//! Nothing here calls into the crate's linear algebra.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use gkm::poly::{monomials_of_degree, Monomial};
use gkm::GkmGraph;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

pub fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Schoolbook Gaussian elimination over `Q`.
pub fn dense_rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &m[rank][c];
            for j in c..ncols {
                let delta = &f * &m[rank][j];
                m[r][j] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

/// Downward closure of a family of vertex sets.
pub fn close_downward(given: &[Vec<usize>]) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    for s in given {
        let mut s = s.clone();
        s.sort_unstable();
        s.dedup();
        let n = s.len();
        for mask in 1u32..(1 << n) {
            out.insert((0..n).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect());
        }
    }
    out
}

/// Reduced Betti numbers `b̃_0..b̃_top` of a downward-closed family, from
/// dense boundary matrices with the augmentation in degree 0.
pub fn oracle_reduced_betti(complex: &BTreeSet<Vec<usize>>) -> Vec<usize> {
    let top = match complex.iter().map(Vec::len).max() {
        Some(len) => len - 1,
        None => return Vec::new(),
    };
    let by_dim: Vec<Vec<&Vec<usize>>> =
        (0..=top).map(|d| complex.iter().filter(|s| s.len() == d + 1).collect()).collect();
    let index: Vec<HashMap<&Vec<usize>, usize>> = by_dim
        .iter()
        .map(|ss| ss.iter().enumerate().map(|(i, s)| (*s, i)).collect())
        .collect();
    // rank of ∂_i : C_i -> C_{i-1}; ∂_0 is the augmentation C_0 -> Q
    let rank = |i: usize| -> usize {
        if i > top {
            return 0;
        }
        let rows = if i == 0 { 1 } else { by_dim[i - 1].len() };
        let mut m = vec![vec![BigRational::zero(); by_dim[i].len()]; rows];
        for (col, s) in by_dim[i].iter().enumerate() {
            if i == 0 {
                m[0][col] = BigRational::one();
                continue;
            }
            for drop in 0..s.len() {
                let face: Vec<usize> =
                    s.iter().enumerate().filter(|(j, _)| *j != drop).map(|(_, v)| *v).collect();
                let sign = if drop % 2 == 0 { 1 } else { -1 };
                m[index[i - 1][&face]][col] = q(sign);
            }
        }
        dense_rank(m)
    };
    let ranks: Vec<usize> = (0..=top + 1).map(rank).collect();
    (0..=top).map(|i| by_dim[i].len() - ranks[i] - ranks[i + 1]).collect()
}

/// A random downward-closed complex with at most `max_simplices` simplices.
pub fn random_complex<R: Rng>(rng: &mut R, max_simplices: usize) -> (usize, BTreeSet<Vec<usize>>) {
    loop {
        let nv = rng.gen_range(2..=9);
        let count = rng.gen_range(1..=14);
        let given: Vec<Vec<usize>> = (0..count)
            .map(|_| {
                let size = rng.gen_range(1..=5.min(nv));
                let mut s: Vec<usize> = (0..nv).collect();
                for i in 0..size {
                    let j = rng.gen_range(i..nv);
                    s.swap(i, j);
                }
                s.truncate(size);
                s
            })
            .collect();
        let c = close_downward(&given);
        if c.len() <= max_simplices {
            return (nv, c);
        }
    }
}

/// Random strict order on `0..size` compatible with the natural order.
pub fn random_relations<R: Rng>(rng: &mut R, size: usize, density: f64) -> Vec<(usize, usize)> {
    let mut rel = Vec::new();
    for a in 0..size {
        for b in a + 1..size {
            if rng.gen_bool(density) {
                rel.push((a, b));
            }
        }
    }
    rel
}

/// Chains of the transitive closure of `relations`, by brute force over
/// subsets.
pub fn brute_force_chains(size: usize, relations: &[(usize, usize)]) -> BTreeSet<Vec<usize>> {
    let mut less = vec![vec![false; size]; size];
    for &(a, b) in relations {
        less[a][b] = true;
    }
    for k in 0..size {
        for i in 0..size {
            for j in 0..size {
                if less[i][k] && less[k][j] {
                    less[i][j] = true;
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << size) {
        let s: Vec<usize> = (0..size).filter(|i| mask & (1 << i) != 0).collect();
        let chain = s.iter().enumerate().all(|(x, a)| s[x + 1..].iter().all(|b| less[*a][*b] || less[*b][*a]));
        if chain {
            out.insert(s);
        }
    }
    out
}

/// Dimension of degree-`d` GKM classes from the full system: unknowns
/// `φ(p)` (degree `d`) and `g_e` (degree `d - 1`) with
/// `φ(p) - φ(q) - α(pq) g_e = 0` coefficientwise.
pub fn full_system_dim(g: &GkmGraph, d: u32) -> usize {
    let k = g.torus_rank();
    let top = monomials_of_degree(k, d);
    let low = if d == 0 { Vec::new() } else { monomials_of_degree(k, d - 1) };
    let top_index: HashMap<Monomial, usize> = top.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let nv = g.vertex_count();
    let edges = g.edges();
    let phi_cols = nv * top.len();
    let ncols = phi_cols + edges.len() * low.len();
    let mut rows = Vec::new();
    for (ei, &e) in edges.iter().enumerate() {
        let dart = g.dart(e);
        let w = g.weight(e).entries();
        let mut block = vec![vec![BigRational::zero(); ncols]; top.len()];
        for t in 0..top.len() {
            block[t][dart.source * top.len() + t] += q(1);
            block[t][dart.target * top.len() + t] -= q(1);
        }
        for (li, m) in low.iter().enumerate() {
            for (i, a) in w.iter().enumerate() {
                if *a == 0 {
                    continue;
                }
                let t = top_index[&m.times(&Monomial::var(k, i))];
                block[t][phi_cols + ei * low.len() + li] -= q(*a);
            }
        }
        rows.extend(block);
    }
    ncols - dense_rank(rows)
}
