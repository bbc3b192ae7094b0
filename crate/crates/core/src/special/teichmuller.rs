use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::padic::{p_pow, PadicScalar, PrecisionPolicy};

/// `omega(u)`: the `(p-1)`-st root of unity congruent to `u` mod `p`,
/// obtained by iterating `x -> x^p` until it stabilizes modulo `p^W`.
pub fn teichmuller(u: i64, policy: &PrecisionPolicy) -> Result<PadicScalar> {
    let p = policy.prime();
    let r = u.rem_euclid(p as i64);
    if r == 0 {
        return Err(Error::InvalidArgument(format!(
            "Teichmuller lift of a multiple of {p}"
        )));
    }
    let w = policy.working();
    let modulus = p_pow(p, w);
    let exp = BigUint::from(p);
    let mut x = BigUint::from(r as u64);
    for _ in 0..=w {
        let next = x.modpow(&exp, &modulus);
        if next == x {
            return Ok(PadicScalar::from_residue(p, 0, x, w));
        }
        x = next;
    }
    Err(Error::NonConvergence(format!(
        "Teichmuller iteration for {u} mod {p}"
    )))
}

/// `<a> = a / omega(a)`, a principal unit.
pub fn principal_unit(a: i64, policy: &PrecisionPolicy) -> Result<PadicScalar> {
    let p = policy.prime();
    let omega = teichmuller(a, policy)?;
    PadicScalar::from_i64(p, a, policy.working()).checked_div(&omega)
}

/// Write-once table of `omega(1), ..., omega(p-1)`.
#[derive(Clone, Debug)]
pub struct TeichmullerTable {
    prime: u32,
    values: Vec<PadicScalar>,
}

impl TeichmullerTable {
    pub fn new(policy: &PrecisionPolicy) -> Result<Self> {
        let p = policy.prime();
        let values = (1..p as i64)
            .map(|u| teichmuller(u, policy))
            .collect::<Result<_>>()?;
        Ok(Self { prime: p, values })
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    /// `omega(u)` for `u` prime to `p`.
    pub fn omega(&self, u: i64) -> &PadicScalar {
        let r = u.rem_euclid(self.prime as i64);
        assert!(r != 0, "omega is undefined at multiples of p");
        &self.values[(r - 1) as usize]
    }

    /// `omega(u)^k` for any integer `k`, using `omega^(p-1) = 1`.
    pub fn omega_pow(&self, u: i64, k: i64) -> PadicScalar {
        let e = k.rem_euclid(self.prime as i64 - 1) as u64;
        self.omega(u).pow(e)
    }
}
