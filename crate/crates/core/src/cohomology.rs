//! GKM cohomology by graded linear algebra, Thom classes, the linear form
//! `η`, face-ring Hilbert series and their comparison.
//!
//! Degrees in this module are cohomological: a polynomial of degree `d` sits
//! in degree `2d`. Only even degrees carry anything.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::faces::Face;
use crate::linalg::{kernel_basis, rref, SparseMatrix};
use crate::model::{ensure_connection, independence_level, GkmGraph};
use crate::poly::{monomials_of_degree, Monomial, PolynomialQ};
use crate::rational;
use crate::structure::{
    balanced_coloring, build_dual_simplicial_poset, facets_from_coloring, ColoringOutcome,
    DualSimplicialPoset,
};

fn big(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// The weight with its first nonzero entry made positive; divisibility does
/// not see the sign.
fn normalized(a: &[i64]) -> Vec<i64> {
    let neg = a.iter().find(|x| **x != 0).is_some_and(|x| *x < 0);
    a.iter().map(|x| if neg { -x } else { *x }).collect()
}

/// For each degree-`d` monomial, its restriction to the hyperplane `a = 0`
/// scaled by `a_i^d` (an integer polynomial), as `(target index, value)`.
fn hyperplane_images(
    a: &[i64],
    monomials: &[Monomial],
    index: &HashMap<Monomial, usize>,
    d: u32,
) -> Vec<Vec<(usize, BigInt)>> {
    let i = a.iter().position(|x| *x != 0).expect("nonzero weight");
    let scale = big(a[i]).pow(d as i32);
    monomials
        .iter()
        .map(|m| {
            let image = PolynomialQ::monomial(m.clone(), scale.clone()).restrict_to_hyperplane(a);
            image
                .integer_terms()
                .expect("scaled restriction is integral")
                .into_iter()
                .map(|(t, c)| (index[&t], c))
                .collect()
        })
        .collect()
}

/// Congruence system in polynomial degree `d` on the subgraph with the given
/// vertices and undirected edges (forward darts). Column `j * M + m` is the
/// coefficient of monomial `m` in `φ(vertices[j])`.
pub fn congruence_system(g: &GkmGraph, vertices: &[usize], edges: &[usize], d: u32) -> SparseMatrix {
    let k = g.torus_rank();
    let monomials = monomials_of_degree(k, d);
    let index: HashMap<Monomial, usize> =
        monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let local: HashMap<usize, usize> = vertices.iter().enumerate().map(|(j, v)| (*v, j)).collect();
    let m = monomials.len();
    let mut system = SparseMatrix::new(vertices.len() * m);
    let mut cache: HashMap<Vec<i64>, Vec<Vec<(usize, BigInt)>>> = HashMap::new();
    for &e in edges {
        let dart = g.dart(e);
        let key = normalized(g.weight(e).entries());
        let images = cache
            .entry(key.clone())
            .or_insert_with(|| hyperplane_images(&key, &monomials, &index, d));
        let (p, q) = (local[&dart.source], local[&dart.target]);
        let mut rows: BTreeMap<usize, Vec<(usize, BigInt)>> = BTreeMap::new();
        for (src, image) in images.iter().enumerate() {
            for (t, c) in image {
                let row = rows.entry(*t).or_default();
                row.push((p * m + src, c.clone()));
                row.push((q * m + src, -c.clone()));
            }
        }
        for (_, row) in rows {
            system.push_row(row);
        }
    }
    system
}

fn forward_edges_within(g: &GkmGraph, face: &Face) -> Vec<usize> {
    g.edges().iter().copied().filter(|d| face.contains_dart(*d)).collect()
}

/// Dimensions of `H^{2d}_T` for `2d <= max_degree`, indexed by `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedDims {
    pub max_degree: usize,
    pub dims: Vec<usize>,
}

impl GradedDims {
    /// Dimension in cohomological degree `degree`; zero in odd degrees.
    pub fn in_degree(&self, degree: usize) -> usize {
        if degree % 2 == 1 {
            0
        } else {
            self.dims[degree / 2]
        }
    }
}

fn solution_dim(g: &GkmGraph, vertices: &[usize], edges: &[usize], d: u32) -> usize {
    congruence_system(g, vertices, edges, d).nullity()
}

pub fn gkm_cohomology_dims(g: &GkmGraph, max_degree: usize) -> GradedDims {
    let vertices: Vec<usize> = (0..g.vertex_count()).collect();
    let dims = (0..=max_degree / 2)
        .into_par_iter()
        .map(|d| solution_dim(g, &vertices, g.edges(), d as u32))
        .collect();
    GradedDims { max_degree, dims }
}

/// A basis of `H^{2d}_T` as GKM classes of polynomial degree `d`.
pub fn gkm_cohomology_basis(g: &GkmGraph, d: u32) -> Vec<GkmClass> {
    let all: Vec<usize> = (0..g.vertex_count()).collect();
    let monomials = monomials_of_degree(g.torus_rank(), d);
    let m = monomials.len();
    solution_basis(g, &all, g.edges(), d)
        .into_iter()
        .map(|v| {
            let values = (0..g.vertex_count())
                .map(|p| {
                    let mut poly = PolynomialQ::zero(g.torus_rank());
                    for (i, mono) in monomials.iter().enumerate() {
                        poly.add_term(mono.clone(), v[p * m + i].clone());
                    }
                    poly
                })
                .collect();
            GkmClass { values }
        })
        .collect()
}

/// Coefficients of `dims · (1-s)^k`; the ordinary Betti numbers `b_{2d}` when
/// the module is free.
pub fn recover_betti(dims: &[usize], k: usize) -> Vec<i64> {
    let mut out: Vec<i64> = dims.iter().map(|x| *x as i64).collect();
    for _ in 0..k {
        for i in (1..out.len()).rev() {
            out[i] -= out[i - 1];
        }
    }
    out
}

/// Numerical shadows of freeness and Poincaré duality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiCheck {
    pub betti: Vec<i64>,
    pub nonnegative: bool,
    /// `b_d = 0` for `n < d`; only meaningful when the cutoff exceeds `2n`.
    pub vanishes_above_dimension: bool,
    pub symmetric: bool,
    pub total: i64,
    pub total_matches_vertices: bool,
    pub complete: bool,
}

impl BettiCheck {
    pub fn pass(&self) -> bool {
        self.nonnegative
            && self.vanishes_above_dimension
            && self.symmetric
            && self.total_matches_vertices
            && self.complete
    }
}

pub fn check_betti(g: &GkmGraph, dims: &GradedDims) -> BettiCheck {
    let n = g.dimension();
    let all = recover_betti(&dims.dims, g.torus_rank());
    let complete = all.len() > n;
    let nonnegative = all.iter().all(|b| *b >= 0);
    let vanishes_above_dimension = all.iter().skip(n + 1).all(|b| *b == 0);
    let betti: Vec<i64> = all.iter().take(n + 1).copied().collect();
    let symmetric = complete && (0..=n).all(|d| betti[d] == betti[n - d]);
    let total: i64 = betti.iter().sum();
    BettiCheck {
        betti,
        nonnegative,
        vanishes_above_dimension,
        symmetric,
        total,
        total_matches_vertices: complete && total == g.vertex_count() as i64,
        complete,
    }
}

/// A vertex-wise polynomial of common degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmClass {
    pub values: Vec<PolynomialQ>,
}

impl GkmClass {
    /// Edges (forward darts) whose weight fails to divide the difference of
    /// the endpoint values.
    pub fn failing_edges(&self, g: &GkmGraph) -> Vec<usize> {
        g.edges()
            .iter()
            .copied()
            .filter(|&e| {
                let dart = g.dart(e);
                let diff = self.values[dart.source].clone() - self.values[dart.target].clone();
                !diff.is_divisible_by_linear(g.weight(e).entries())
            })
            .collect()
    }

    pub fn satisfies_congruences(&self, g: &GkmGraph) -> bool {
        self.failing_edges(g).is_empty()
    }

    /// Common polynomial degree of the nonzero values.
    pub fn degree(&self) -> Option<u32> {
        let mut degs = self.values.iter().filter(|v| !v.is_zero()).map(|v| v.homogeneous_degree());
        let first = degs.next()??;
        degs.all(|d| d == Some(first)).then_some(first)
    }
}

/// Product of the transversal weights at face vertices, zero elsewhere.
pub fn thom_class(g: &GkmGraph, f: &Face) -> GkmClass {
    let k = g.torus_rank();
    let values = (0..g.vertex_count())
        .map(|p| {
            if !f.contains_vertex(p) {
                return PolynomialQ::zero(k);
            }
            f.transversal_at(g, p)
                .iter()
                .fold(PolynomialQ::one(k), |acc, d| &acc * &PolynomialQ::linear(g.weight(*d).entries()))
        })
        .collect();
    GkmClass { values }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ThomError {
    #[error("faces {0} and {1} meet but have no least common face in the family")]
    JoinUndefined(usize, usize),
    #[error("a component of the intersection of faces {0} and {1} is not in the family")]
    ComponentUndefined(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThomFailure {
    pub first: usize,
    pub second: usize,
    pub vertex: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThomReport {
    pub family_size: usize,
    pub pairs_checked: usize,
    /// Faces whose Thom class violates a congruence.
    pub not_in_ring: Vec<usize>,
    pub failures: Vec<ThomFailure>,
    pub pass: bool,
}

/// Checks `τ_F τ_H = τ_{F∨H} Σ_E τ_E` for every pair of faces in `faces`, with
/// `E` over the components of `F ∩ H`. Away from `F ∩ H` both sides vanish by
/// support, so only vertices of the intersection are evaluated.
pub fn verify_thom_relations(g: &GkmGraph, faces: &[Face]) -> Result<ThomReport, ThomError> {
    let classes: Vec<GkmClass> = faces.par_iter().map(|f| thom_class(g, f)).collect();
    let not_in_ring: Vec<usize> =
        (0..faces.len()).filter(|i| !classes[*i].satisfies_congruences(g)).collect();
    let by_vertices: HashMap<&[usize], usize> =
        faces.iter().enumerate().map(|(i, f)| (f.vertices(), i)).collect();
    let contains: Vec<Vec<bool>> = faces
        .iter()
        .map(|big| faces.iter().map(|small| small.is_subface_of(big)).collect())
        .collect();
    let pairs: Vec<(usize, usize)> =
        (0..faces.len()).flat_map(|a| (a..faces.len()).map(move |b| (a, b))).collect();
    let results: Vec<Result<Vec<ThomFailure>, ThomError>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let (f, h) = (&faces[a], &faces[b]);
            let meet: Vec<usize> = f.vertices().iter().copied().filter(|v| h.contains_vertex(*v)).collect();
            if meet.is_empty() {
                return Ok(Vec::new());
            }
            let above: Vec<usize> = (0..faces.len()).filter(|&c| contains[c][a] && contains[c][b]).collect();
            let join = above
                .iter()
                .copied()
                .find(|&c| above.iter().all(|&o| contains[o][c]))
                .ok_or(ThomError::JoinUndefined(a, b))?;
            let mut components = Vec::new();
            let mut seen: Vec<usize> = Vec::new();
            for &start in &meet {
                if seen.contains(&start) {
                    continue;
                }
                let mut comp = vec![start];
                seen.push(start);
                let mut queue = VecDeque::from([start]);
                while let Some(v) = queue.pop_front() {
                    for &d in g.star(v) {
                        if f.contains_dart(d) && h.contains_dart(d) {
                            let w = g.dart(d).target;
                            if !seen.contains(&w) {
                                seen.push(w);
                                comp.push(w);
                                queue.push_back(w);
                            }
                        }
                    }
                }
                comp.sort_unstable();
                let idx = *by_vertices
                    .get(comp.as_slice())
                    .ok_or(ThomError::ComponentUndefined(a, b))?;
                components.push(idx);
            }
            let mut failures = Vec::new();
            for &p in &meet {
                let lhs = &classes[a].values[p] * &classes[b].values[p];
                let sum = components
                    .iter()
                    .fold(PolynomialQ::zero(g.torus_rank()), |acc, e| acc + classes[*e].values[p].clone());
                let rhs = &classes[join].values[p] * &sum;
                if lhs != rhs {
                    failures.push(ThomFailure { first: a, second: b, vertex: g.vertex_name(p).to_string() });
                }
            }
            Ok(failures)
        })
        .collect();
    let mut failures = Vec::new();
    for r in results {
        failures.extend(r?);
    }
    let pass = failures.is_empty() && not_in_ring.is_empty();
    Ok(ThomReport { family_size: faces.len(), pairs_checked: pairs.len(), not_in_ring, failures, pass })
}

/// `η = Σ c_G τ_G` over the facets, normalized so the first facet has
/// coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaForm {
    pub facets: Vec<Face>,
    pub coefficients: Vec<BigRational>,
}

impl EtaForm {
    pub fn class(&self, g: &GkmGraph) -> GkmClass {
        let k = g.torus_rank();
        let mut values = vec![PolynomialQ::zero(k); g.vertex_count()];
        for (f, c) in self.facets.iter().zip(&self.coefficients) {
            for (v, t) in values.iter_mut().zip(thom_class(g, f).values) {
                *v = v.clone() + t.scale(c);
            }
        }
        GkmClass { values }
    }

    pub fn coefficient_strings(&self) -> Vec<String> {
        self.coefficients.iter().map(rational::format).collect()
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EtaError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("vertex `{vertex}` has {count} facets transversal to dart `{dart}`")]
    FacetIncidence { vertex: String, dart: String, count: usize },
    #[error("linear relation at `{vertex}` disagrees with the global one")]
    InconsistentEta { vertex: String },
    #[error("facet {facet} has coefficient zero")]
    ZeroCoefficient { facet: usize },
    #[error("η does not vanish at `{vertex}`")]
    NotVanishing { vertex: String },
}

/// Checks complexity one with `(n-1)`-independent weights, `n - 1 >= 2`.
pub fn complexity_one_precondition(g: &GkmGraph) -> Result<(), String> {
    let (n, k, j) = (g.dimension(), g.torus_rank(), independence_level(g));
    if n < 3 || k + 1 != n {
        return Err(format!("complexity one needs k = n - 1 >= 2, got n = {n}, k = {k}"));
    }
    if j < n - 1 {
        return Err(format!("weights are {j}-independent, need {}", n - 1));
    }
    Ok(())
}

pub fn compute_eta(g: &GkmGraph, facets: &[Face]) -> Result<EtaForm, EtaError> {
    complexity_one_precondition(g).map_err(EtaError::Precondition)?;
    if facets.is_empty() {
        return Err(EtaError::Precondition("no facets".into()));
    }
    let n = g.dimension();
    // facet transversal to each dart at its source
    let transversal = |p: usize, e: usize| -> Result<usize, EtaError> {
        let hits: Vec<usize> = (0..facets.len())
            .filter(|&i| facets[i].contains_vertex(p) && !facets[i].contains_dart(e))
            .collect();
        if hits.len() == 1 {
            Ok(hits[0])
        } else {
            Err(EtaError::FacetIncidence {
                vertex: g.vertex_name(p).to_string(),
                dart: g.dart(e).name.clone(),
                count: hits.len(),
            })
        }
    };
    let local_relation = |p: usize| -> Result<Vec<BigRational>, EtaError> {
        let star = g.star(p);
        let rows: Vec<Vec<BigRational>> = (0..g.torus_rank())
            .map(|r| star.iter().map(|d| big(g.weight(*d).entries()[r])).collect())
            .collect();
        let kernel = kernel_basis(&rows, n);
        if kernel.len() != 1 {
            return Err(EtaError::Precondition(format!(
                "weights at `{}` have a {}-dimensional relation space",
                g.vertex_name(p),
                kernel.len()
            )));
        }
        Ok(kernel.into_iter().next().expect("one vector"))
    };
    let mut coeff: Vec<Option<BigRational>> = vec![None; facets.len()];
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(p) = queue.pop_front() {
        let relation = local_relation(p)?;
        let star = g.star(p);
        let owners: Vec<usize> = star.iter().map(|e| transversal(p, *e)).collect::<Result<_, _>>()?;
        // scale the local relation to agree with any coefficient already fixed
        let scale = owners
            .iter()
            .zip(&relation)
            .find_map(|(f, r)| coeff[*f].as_ref().map(|c| c / r))
            .unwrap_or_else(BigRational::one);
        for (f, r) in owners.iter().zip(&relation) {
            let value = r * &scale;
            match &coeff[*f] {
                Some(c) if *c != value => {
                    return Err(EtaError::InconsistentEta { vertex: g.vertex_name(p).to_string() })
                }
                Some(_) => {}
                None => coeff[*f] = Some(value),
            }
        }
        for &d in star {
            let w = g.dart(d).target;
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    let mut coefficients = Vec::with_capacity(facets.len());
    for (i, c) in coeff.into_iter().enumerate() {
        match c {
            Some(c) if !c.is_zero() => coefficients.push(c),
            _ => return Err(EtaError::ZeroCoefficient { facet: i }),
        }
    }
    let norm = coefficients[0].clone();
    for c in coefficients.iter_mut() {
        *c = &*c / &norm;
    }
    let eta = EtaForm { facets: facets.to_vec(), coefficients };
    let class = eta.class(g);
    if let Some(p) = class.values.iter().position(|v| !v.is_zero()) {
        return Err(EtaError::NotVanishing { vertex: g.vertex_name(p).to_string() });
    }
    Ok(eta)
}

/// A power series in `s = t²` known up to `max_degree` (cohomological), with
/// an optional closed form `numerator / (1 - s)^denominator_power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    pub max_degree: usize,
    /// Coefficient of `s^m`, `0 <= 2m <= max_degree`.
    pub coefficients: Vec<BigRational>,
    pub numerator: Option<Vec<BigInt>>,
    pub denominator_power: Option<usize>,
}

impl HilbertSeries {
    /// Coefficients of `(1 - s) · H`, same truncation.
    pub fn times_one_minus_s(&self) -> Vec<BigRational> {
        (0..self.coefficients.len())
            .map(|m| {
                let prev = if m == 0 { BigRational::zero() } else { self.coefficients[m - 1].clone() };
                &self.coefficients[m] - prev
            })
            .collect()
    }

    pub fn coefficient_strings(&self) -> Vec<String> {
        self.coefficients.iter().map(rational::format).collect()
    }
}

fn binomial(n: i64, r: i64) -> BigInt {
    if r < 0 || n < r {
        return BigInt::zero();
    }
    (0..r).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `Σ_r f_r s^r / (1 - s)^r` where `counts[r]` elements have rank `r`; the
/// standard-monomial count for a face ring with generators in degree `2r`.
pub fn hilbert_from_rank_counts(counts: &[usize], max_degree: usize) -> HilbertSeries {
    let top = counts.len().saturating_sub(1);
    let coefficients = (0..=max_degree / 2)
        .map(|m| {
            let mut total = BigInt::zero();
            for (r, f) in counts.iter().enumerate() {
                let c = if r == 0 {
                    if m == 0 { BigInt::one() } else { BigInt::zero() }
                } else {
                    binomial(m as i64 - 1, r as i64 - 1)
                };
                total += c * BigInt::from(*f);
            }
            BigRational::from_integer(total)
        })
        .collect();
    // Σ_r f_r s^r (1-s)^{top-r}
    let mut numerator = vec![BigInt::zero(); top + 1];
    for (r, f) in counts.iter().enumerate() {
        for j in 0..=(top - r) {
            let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            numerator[r + j] += sign * binomial((top - r) as i64, j as i64) * BigInt::from(*f);
        }
    }
    while numerator.len() > 1 && numerator.last().is_some_and(Zero::is_zero) {
        numerator.pop();
    }
    HilbertSeries { max_degree, coefficients, numerator: Some(numerator), denominator_power: Some(top) }
}

pub fn face_ring_hilbert(dsp: &DualSimplicialPoset, max_degree: usize) -> HilbertSeries {
    hilbert_from_rank_counts(&dsp.rank_counts(), max_degree)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeComparison {
    pub degree: usize,
    pub face_ring_quotient: String,
    pub gkm: usize,
    pub equal: bool,
}

/// Degreewise comparison of `(1 - t²) · Hilb(face ring)` with GKM dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceRingReport {
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub max_degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub facet_count: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub degrees: Vec<DegreeComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thom_relations: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti: Option<BettiCheck>,
    pub pass: bool,
}

impl FaceRingReport {
    fn inapplicable(max_degree: usize, reason: String) -> Self {
        FaceRingReport {
            applicable: false,
            reason: Some(reason),
            max_degree,
            facet_count: None,
            degrees: Vec::new(),
            eta: None,
            eta_error: None,
            thom_relations: None,
            betti: None,
            pass: false,
        }
    }
}

/// Default cutoff `2n + 4`.
pub fn default_max_degree(g: &GkmGraph) -> usize {
    2 * g.dimension() + 4
}

/// Checks that equivariant cohomology has the Hilbert function of the face
/// ring modulo `η`, together with `η`, the Thom relations and the Betti
/// shadows of Poincaré duality.
pub fn verify_face_ring_quotient(g: &GkmGraph, max_degree: Option<usize>) -> FaceRingReport {
    let max_degree = max_degree.unwrap_or_else(|| default_max_degree(g));
    if let Err(reason) = complexity_one_precondition(g) {
        return FaceRingReport::inapplicable(max_degree, reason);
    }
    let g = match ensure_connection(g) {
        Ok(g) => g,
        Err(e) => return FaceRingReport::inapplicable(max_degree, format!("no connection: {e}")),
    };
    let coloring = match balanced_coloring(&g) {
        Ok(ColoringOutcome::Balanced(c)) => c,
        Ok(ColoringOutcome::Obstructed(_)) => {
            return FaceRingReport::inapplicable(max_degree, "graph is not balanced, so it has no facets".into())
        }
        Err(e) => return FaceRingReport::inapplicable(max_degree, e.to_string()),
    };
    let facets = match facets_from_coloring(&g, &coloring) {
        Ok(f) => f,
        Err(e) => return FaceRingReport::inapplicable(max_degree, e.to_string()),
    };
    let dual = match build_dual_simplicial_poset(&g, &facets) {
        Ok(d) => d,
        Err(e) => return FaceRingReport::inapplicable(max_degree, e.to_string()),
    };
    let quotient = face_ring_hilbert(&dual, max_degree).times_one_minus_s();
    let dims = gkm_cohomology_dims(&g, max_degree);
    let degrees: Vec<DegreeComparison> = quotient
        .iter()
        .zip(&dims.dims)
        .enumerate()
        .map(|(m, (h, d))| DegreeComparison {
            degree: 2 * m,
            face_ring_quotient: rational::format(h),
            gkm: *d,
            equal: *h == big(*d as i64),
        })
        .collect();
    let (eta, eta_error) = match compute_eta(&g, &facets) {
        Ok(e) => (Some(e.coefficient_strings()), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let thom = verify_thom_relations(&g, dual.faces().faces()).map(|r| r.pass).unwrap_or(false);
    let betti = check_betti(&g, &dims);
    let pass = degrees.iter().all(|c| c.equal) && eta.is_some() && thom && betti.pass();
    FaceRingReport {
        applicable: true,
        reason: None,
        max_degree,
        facet_count: Some(facets.len()),
        degrees,
        eta,
        eta_error,
        thom_relations: Some(thom),
        betti: Some(betti),
        pass,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictionDegree {
    pub degree: usize,
    pub source: usize,
    pub target: usize,
    pub image: usize,
    pub surjective: bool,
    /// The image together with `H^{>0}(BT) · H_T(f)` fills the target, i.e.
    /// every module generator of this degree is hit.
    pub surjective_on_generators: bool,
}

fn solution_basis(g: &GkmGraph, vertices: &[usize], edges: &[usize], d: u32) -> Vec<Vec<BigRational>> {
    let system = congruence_system(g, vertices, edges, d);
    kernel_basis(&system.to_dense(), system.ncols())
}

fn rank_of(vectors: &[Vec<BigRational>], ncols: usize) -> usize {
    rref(vectors, ncols).1.len()
}

/// Rank of restricting GKM classes of `g` to the subgraph `f`, per even
/// degree up to `max_degree`.
pub fn restriction_surjectivity(g: &GkmGraph, f: &Face, max_degree: usize) -> Vec<RestrictionDegree> {
    let k = g.torus_rank();
    let all: Vec<usize> = (0..g.vertex_count()).collect();
    let sub_edges = forward_edges_within(g, f);
    (0..=max_degree / 2)
        .into_par_iter()
        .map(|d| {
            let d = d as u32;
            let system = congruence_system(g, &all, g.edges(), d);
            let source = system.nullity();
            let m = monomials_of_degree(k, d).len();
            let mut pinned = system.clone();
            for &p in f.vertices() {
                for i in 0..m {
                    pinned.push_row([(p * m + i, BigInt::one())]);
                }
            }
            let image = source - pinned.nullity();
            let target = solution_dim(g, f.vertices(), &sub_edges, d);

            // restricted classes plus x_i times the target one degree lower
            let width = f.vertices().len() * m;
            let mut spanning: Vec<Vec<BigRational>> = solution_basis(g, &all, g.edges(), d)
                .into_iter()
                .map(|v| {
                    f.vertices().iter().flat_map(|p| v[p * m..(p + 1) * m].to_vec()).collect()
                })
                .collect();
            if d > 0 {
                let lower = monomials_of_degree(k, d - 1);
                let upper: HashMap<Monomial, usize> =
                    monomials_of_degree(k, d).into_iter().enumerate().map(|(i, x)| (x, i)).collect();
                let ml = lower.len();
                for v in solution_basis(g, f.vertices(), &sub_edges, d - 1) {
                    for var in 0..k {
                        let mut w = vec![BigRational::zero(); width];
                        for (j, c) in v.iter().enumerate() {
                            if !c.is_zero() {
                                let shifted = lower[j % ml].times(&Monomial::var(k, var));
                                w[(j / ml) * m + upper[&shifted]] = c.clone();
                            }
                        }
                        spanning.push(w);
                    }
                }
            }
            let generated = rank_of(&spanning, width);
            RestrictionDegree {
                degree: 2 * d as usize,
                source,
                target,
                image,
                surjective: image == target,
                surjective_on_generators: generated == target,
            }
        })
        .collect()
}
