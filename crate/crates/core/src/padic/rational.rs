//! Exact rationals, backed by `num-rational`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub use num_rational::BigRational;

use crate::error::{Error, Result};

fn vp_bigint(n: &BigInt, p: u32) -> i64 {
    let mut m = n.abs();
    let pb = BigInt::from(p);
    let mut k = 0;
    loop {
        if (&m % &pb).is_zero() {
            m /= &pb;
            k += 1;
        } else {
            return k;
        }
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn vp_rational(q: &BigRational, p: u32) -> Option<i64> {
    if q.numer().is_zero() {
        return None;
    }
    Some(vp_bigint(q.numer(), p) - vp_bigint(q.denom(), p))
}

/// `a/b`, or `a` when the denominator is one.
pub fn rational_to_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_from_str(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            s.trim().parse().map_err(|_| bad())?,
        )),
    }
}
