//! Canonical text form for exact rationals: always `"p/q"` with `q > 0` and
//! `gcd(p, q) = 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

pub fn format(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse(text: &str) -> Option<BigRational> {
    let (p, q) = text.split_once('/')?;
    let p: BigInt = p.trim().parse().ok()?;
    let q: BigInt = q.trim().parse().ok()?;
    if q.is_zero() {
        return None;
    }
    Some(BigRational::new(p, q))
}

pub fn from_int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}
