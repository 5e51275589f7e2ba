//! Exact linear algebra over the rationals.
//!
//! Ranks are computed by fraction-free elimination on integer rows: every row
//! operation has the form `a * row - b * pivot` with integer multipliers, so no
//! denominators ever appear. Rows are kept primitive (content divided out) to
//! limit coefficient growth. The first pass runs on `i64` with checked
//! arithmetic and restarts on `BigInt` if anything overflows.
//!
//! Pivot choice is deterministic: rows are consumed in input order and each row
//! is reduced against the stored pivot whose leading column matches its own.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A sparse row: `(column, value)` pairs, strictly increasing in column, no zeros.
pub type SparseRow = Vec<(usize, BigInt)>;

/// Sparse integer matrix. Its rank is the rank over `Q`.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    ncols: usize,
    rows: Vec<SparseRow>,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix { ncols, rows: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    /// Appends a row given as arbitrary `(column, value)` pairs. Duplicate
    /// columns are summed and zeros dropped.
    pub fn push_row<I>(&mut self, entries: I)
    where
        I: IntoIterator<Item = (usize, BigInt)>,
    {
        let mut row: Vec<(usize, BigInt)> = entries.into_iter().collect();
        row.sort_by_key(|(c, _)| *c);
        let mut merged: SparseRow = Vec::with_capacity(row.len());
        for (c, v) in row {
            assert!(c < self.ncols, "column {c} out of range {}", self.ncols);
            match merged.last_mut() {
                Some((lc, lv)) if *lc == c => *lv += v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|(_, v)| !Zero::is_zero(v));
        self.rows.push(merged);
    }

    /// Appends all rows of `other`; column counts must agree.
    pub fn extend(&mut self, other: &SparseMatrix) {
        assert_eq!(self.ncols, other.ncols);
        self.rows.extend(other.rows.iter().cloned());
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(&self.rows)
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.rank()
    }

    /// Dense copy with rational entries (used by tests and small systems).
    pub fn to_dense(&self) -> Vec<Vec<BigRational>> {
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![BigRational::zero(); self.ncols];
                for (c, v) in row {
                    dense[*c] = BigRational::from_integer(v.clone());
                }
                dense
            })
            .collect()
    }
}

/// Rank over `Q` of a list of sparse integer rows.
pub fn rank_of_rows(rows: &[SparseRow]) -> usize {
    if let Some(small) = rows_to_i64(rows) {
        if let Some(r) = eliminate(&small) {
            return r;
        }
    }
    eliminate(rows).expect("big integer elimination cannot overflow")
}

/// Rank over `Q` of dense integer vectors.
pub fn rank_of_int_vectors(vectors: &[Vec<i64>]) -> usize {
    let rows: Vec<SparseRow> = vectors
        .iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .filter(|(_, x)| **x != 0)
                .map(|(c, x)| (c, BigInt::from(*x)))
                .collect()
        })
        .collect();
    rank_of_rows(&rows)
}

fn rows_to_i64(rows: &[SparseRow]) -> Option<Vec<Vec<(usize, i64)>>> {
    rows.iter()
        .map(|row| row.iter().map(|(c, v)| v.to_i64().map(|x| (*c, x))).collect())
        .collect()
}

trait Scalar: Clone + PartialEq {
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn negated(&self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    /// `a * x - b * y`
    fn cross(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    /// `x - b * y`
    fn sub_mul(x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn gcd(&self, other: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
}

impl Scalar for i64 {
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn negated(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn cross(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }
    fn sub_mul(x: &Self, b: &Self, y: &Self) -> Option<Self> {
        x.checked_sub(b.checked_mul(*y)?)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
}

impl Scalar for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn negated(&self) -> Option<Self> {
        Some(-self)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn cross(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
    fn sub_mul(x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(x - b * y)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
}

/// `alpha * row - beta * pivot`, merged sparsely.
fn combine<S: Scalar>(
    alpha: Option<&S>,
    row: &[(usize, S)],
    beta: &S,
    pivot: &[(usize, S)],
) -> Option<Vec<(usize, S)>> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            let v = match alpha {
                Some(a) => a.mul(&row[i].1)?,
                None => row[i].1.clone(),
            };
            out.push((row[i].0, v));
            i += 1;
        } else if take_piv {
            let v = beta.mul(&pivot[j].1)?.negated()?;
            out.push((pivot[j].0, v));
            j += 1;
        } else {
            let v = match alpha {
                Some(a) => S::cross(a, &row[i].1, beta, &pivot[j].1)?,
                None => S::sub_mul(&row[i].1, beta, &pivot[j].1)?,
            };
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

fn make_primitive<S: Scalar>(row: &mut [(usize, S)]) {
    let Some(first) = row.first() else { return };
    let mut g = first.1.clone();
    for (_, v) in row.iter().skip(1) {
        if g.is_unit() {
            break;
        }
        g = g.gcd(v);
    }
    if g.is_negative() {
        g = g.negated().unwrap_or(g);
    }
    if !g.is_unit() && !g.is_zero() {
        for (_, v) in row.iter_mut() {
            *v = v.div_exact(&g);
        }
    }
}

fn eliminate<S: Scalar>(rows: &[Vec<(usize, S)>]) -> Option<usize> {
    let mut pivot_of_col: std::collections::HashMap<usize, usize> = Default::default();
    let mut pivots: Vec<Vec<(usize, S)>> = Vec::new();
    for input in rows {
        let mut row = input.clone();
        loop {
            let Some((lead, lead_val)) = row.first().cloned() else { break };
            let Some(&pi) = pivot_of_col.get(&lead) else {
                pivot_of_col.insert(lead, pivots.len());
                pivots.push(row);
                break;
            };
            let piv = &pivots[pi];
            let p = &piv[0].1;
            row = if p.is_unit() {
                // p^{-1} = p
                let beta = lead_val.mul(p)?;
                combine(None, &row, &beta, piv)?
            } else {
                let mut r = combine(Some(p), &row, &lead_val, piv)?;
                make_primitive(&mut r);
                r
            };
        }
    }
    Some(pivots.len())
}

/// Basis of the right kernel of a dense rational matrix with `ncols` columns,
/// via reduced row echelon form. Basis vectors are indexed by free columns in
/// increasing order.
pub fn kernel_basis(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let (rref, pivot_cols) = rref(rows, ncols);
    let mut is_pivot = vec![None; ncols];
    for (r, &c) in pivot_cols.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (r, &c) in pivot_cols.iter().enumerate() {
            v[c] = -rref[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<BigRational>], ncols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(found) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, found);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> SparseMatrix {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = SparseMatrix::new(ncols);
        for r in rows {
            m.push_row(r.iter().enumerate().map(|(c, v)| (c, BigInt::from(*v))));
        }
        m
    }

    #[test]
    fn rank_small_cases() {
        assert_eq!(mat(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(mat(&[&[2, 3, 5], &[4, 1, 0], &[0, 5, 10]]).rank(), 2);
        assert_eq!(mat(&[&[0, 0], &[0, 0]]).rank(), 0);
        assert_eq!(mat(&[&[3, 0, 0], &[0, 7, 0], &[0, 0, 11]]).rank(), 3);
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX / 3;
        let m = mat(&[&[big, big - 1, 7], &[big - 5, big, 3], &[1, 1, 1]]);
        let dense = m.to_dense();
        let (_, piv) = rref(&dense, 3);
        assert_eq!(m.rank(), piv.len());
    }

    #[test]
    fn kernel_of_weights() {
        // (1,0), (0,1), (1,1) as columns: kernel spanned by (1,1,-1)
        let rows = vec![
            vec![1.into(), 0.into(), 1.into()],
            vec![0.into(), 1.into(), 1.into()],
        ]
        .into_iter()
        .map(|r: Vec<BigInt>| r.into_iter().map(BigRational::from_integer).collect())
        .collect::<Vec<Vec<BigRational>>>();
        let k = kernel_basis(&rows, 3);
        assert_eq!(k.len(), 1);
        let expect: Vec<BigRational> =
            [-1, -1, 1].iter().map(|x| BigRational::from_integer((*x).into())).collect();
        assert_eq!(k[0], expect);
    }

    #[test]
    fn duplicate_columns_are_summed() {
        let mut m = SparseMatrix::new(2);
        m.push_row(vec![(1, BigInt::from(2)), (1, BigInt::from(-2)), (0, BigInt::from(1))]);
        assert_eq!(m.rows()[0], vec![(0, BigInt::from(1))]);
    }
}
