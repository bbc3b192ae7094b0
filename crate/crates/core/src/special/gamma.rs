//! Morita's p-adic gamma function from its limit definition
//! `Gamma_p(n) = (-1)^n * prod_{0<j<n, p !| j} j` on integers `0 <= n < p^M`.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::padic::{p_pow, PadicScalar, PrecisionPolicy};

/// Largest `p^M` the brute-force product may walk over.
pub const DEFAULT_COST_LIMIT: u64 = 10_000_000;

/// Default gamma digits: the largest `M` with `p^M <= 20000` (at least 1).
/// Gives `M = 6` for `p = 5` and `M = 5` for `p = 7`.
pub fn default_gamma_digits(p: u32) -> u32 {
    let mut m = 1;
    while (p as u64).pow(m + 1) <= 20_000 {
        m += 1;
    }
    m
}

/// `Gamma_p(x)` for `x` given as a residue modulo `p^M`, accurate to `M`
/// digits (`M` capped at the working precision).
pub fn morita_gamma(
    x: &BigUint,
    digits: u32,
    policy: &PrecisionPolicy,
    cost_limit: u64,
) -> Result<PadicScalar> {
    let p = policy.prime();
    if digits == 0 {
        return Err(Error::InvalidArgument("gamma digits must be >= 1".into()));
    }
    let m = digits.min(policy.working());
    let modulus = p_pow(p, m);
    let size = modulus
        .to_u64()
        .filter(|&s| s <= cost_limit)
        .ok_or_else(|| Error::CostBound(format!("{p}^{m} exceeds the limit {cost_limit}")))?;
    let n = (x % &*modulus).to_u64().unwrap();
    let md = size as u128;
    let mut prod: u128 = 1;
    for j in 1..n {
        if j % p as u64 != 0 {
            prod = prod * j as u128 % md;
        }
    }
    if n % 2 == 1 {
        prod = (md - prod) % md;
    }
    Ok(PadicScalar::from_residue(p, 0, BigUint::from(prod), m))
}

/// Residue of `num / den` modulo `p^digits`; `den` must be prime to `p`.
pub fn ratio_residue(num: i64, den: i64, p: u32, digits: u32) -> Result<BigUint> {
    if den.rem_euclid(p as i64) == 0 {
        return Err(Error::InvalidArgument(format!(
            "denominator {den} divisible by {p}"
        )));
    }
    let modulus = p_pow(p, digits);
    let m = num_bigint::BigInt::from((*modulus).clone());
    let n = num_bigint::BigInt::from(num).modpow(&1.into(), &m);
    let d = num_bigint::BigInt::from(den).modpow(&1.into(), &m);
    let inv = d.modinv(&m).expect("den prime to p");
    Ok(((n * inv) % &m).to_biguint().unwrap())
}

/// `Gamma_p(num / den)` to `digits` digits.
pub fn gamma_at_ratio(
    num: i64,
    den: i64,
    digits: u32,
    policy: &PrecisionPolicy,
    cost_limit: u64,
) -> Result<PadicScalar> {
    let x = ratio_residue(num, den, policy.prime(), digits)?;
    morita_gamma(&x, digits, policy, cost_limit)
}
