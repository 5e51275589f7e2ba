//! Polynomials over `Q` in the torus variables `x_1..x_k`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(k: usize) -> Monomial {
        Monomial(vec![0; k])
    }

    pub fn var(k: usize, i: usize) -> Monomial {
        let mut e = vec![0; k];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of degree `d` in `k` variables, in increasing graded-lex
/// order. There are `C(d+k-1, k-1)` of them.
pub fn monomials_of_degree(k: usize, d: u32) -> Vec<Monomial> {
    fn rec(k: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == k {
            prefix.push(d);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in 0..=d {
            prefix.push(e);
            rec(k, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        if d == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(k, d, &mut Vec::new(), &mut out);
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialQ {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl PolynomialQ {
    pub fn zero(nvars: usize) -> Self {
        PolynomialQ { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    /// `Σ a_i x_i`.
    pub fn linear(coeffs: &[i64]) -> Self {
        let k = coeffs.len();
        let mut p = Self::zero(k);
        for (i, a) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(k, i), BigRational::from_integer(BigInt::from(*a)));
        }
        p
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero(m.0.len());
        p.add_term(m, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common degree of all terms; `None` for zero or inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        assert_eq!(m.0.len(), self.nvars, "monomial has wrong number of variables");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        PolynomialQ {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Replaces `x_i` by `value` everywhere.
    pub fn substitute(&self, i: usize, value: &PolynomialQ) -> Self {
        let mut powers = vec![Self::one(self.nvars)];
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i] as usize;
            while powers.len() <= e {
                let next = powers.last().expect("nonempty") * value;
                powers.push(next);
            }
            let mut rest = m.clone();
            rest.0[i] = 0;
            let term = Self::monomial(rest, c.clone());
            out = out + &term * &powers[e];
        }
        out
    }

    /// Restriction to the hyperplane `Σ a_j x_j = 0`: eliminates the first
    /// variable with `a_i != 0`. Zero exactly when the linear form divides
    /// `self`.
    pub fn restrict_to_hyperplane(&self, a: &[i64]) -> Self {
        let i = a.iter().position(|x| *x != 0).expect("nonzero linear form");
        let ai = BigRational::from_integer(BigInt::from(a[i]));
        let mut value = Self::zero(self.nvars);
        for (j, aj) in a.iter().enumerate() {
            if j != i {
                value.add_term(
                    Monomial::var(self.nvars, j),
                    -BigRational::from_integer(BigInt::from(*aj)) / &ai,
                );
            }
        }
        self.substitute(i, &value)
    }

    pub fn is_divisible_by_linear(&self, a: &[i64]) -> bool {
        self.restrict_to_hyperplane(a).is_zero()
    }

    /// Exact quotient by `Σ a_j x_j`, or `None` if it does not divide.
    pub fn div_linear(&self, a: &[i64]) -> Option<Self> {
        let i = a.iter().position(|x| *x != 0).expect("nonzero linear form");
        let divisor = Self::linear(a);
        let ai = BigRational::from_integer(BigInt::from(a[i]));
        // leading terms with respect to the order (exponent of x_i, grlex)
        let lead = |p: &Self| -> Option<(Monomial, BigRational)> {
            p.terms
                .iter()
                .max_by(|(m1, _), (m2, _)| m1.0[i].cmp(&m2.0[i]).then_with(|| m1.cmp(m2)))
                .map(|(m, c)| (m.clone(), c.clone()))
        };
        let mut rem = self.clone();
        let mut quotient = Self::zero(self.nvars);
        while let Some((mut m, c)) = lead(&rem) {
            if m.0[i] == 0 {
                return None;
            }
            m.0[i] -= 1;
            let q = Self::monomial(m, c / &ai);
            rem = rem - &q * &divisor;
            quotient = quotient + q;
        }
        Some(quotient)
    }

    /// Coefficients scaled to integers, if they already are integers.
    pub fn integer_terms(&self) -> Option<Vec<(Monomial, BigInt)>> {
        self.terms
            .iter()
            .map(|(m, c)| c.is_integer().then(|| (m.clone(), c.to_integer())))
            .collect()
    }
}

impl Add for PolynomialQ {
    type Output = PolynomialQ;
    fn add(mut self, rhs: PolynomialQ) -> PolynomialQ {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for PolynomialQ {
    type Output = PolynomialQ;
    fn sub(self, rhs: PolynomialQ) -> PolynomialQ {
        self + (-rhs)
    }
}

impl Neg for PolynomialQ {
    type Output = PolynomialQ;
    fn neg(self) -> PolynomialQ {
        PolynomialQ { nvars: self.nvars, terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Mul for &PolynomialQ {
    type Output = PolynomialQ;
    fn mul(self, rhs: &PolynomialQ) -> PolynomialQ {
        let mut out = PolynomialQ::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.times(m2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for PolynomialQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let abs = c.abs();
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
                .collect();
            if vars.is_empty() || !abs.is_one() {
                write!(f, "{abs}")?;
                if !vars.is_empty() {
                    write!(f, "*")?;
                }
            }
            write!(f, "{}", vars.join("*"))?;
        }
        Ok(())
    }
}
