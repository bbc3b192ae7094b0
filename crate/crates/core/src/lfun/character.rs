use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{is_odd_prime, PadicScalar, PrecisionPolicy};
use crate::special::TeichmullerTable;

/// `chi = omega^k` modulo `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DirichletCharacter {
    pub prime: u32,
    pub exponent: u32,
}

impl DirichletCharacter {
    pub fn new(prime: u32, exponent: i64) -> Result<Self> {
        if !is_odd_prime(prime as u64) {
            return Err(Error::InvalidPrime(prime as u64));
        }
        let exponent = exponent.rem_euclid(prime as i64 - 1) as u32;
        Ok(Self { prime, exponent })
    }

    pub fn is_odd(&self) -> bool {
        self.exponent % 2 == 1
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == 0
    }

    /// `omega^(p-1-k)`.
    pub fn conjugate(&self) -> Self {
        Self {
            prime: self.prime,
            exponent: (self.prime - 1 - self.exponent) % (self.prime - 1),
        }
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "omega^{}", self.exponent)
    }
}

/// Odd exponents `1, 3, ..., p-2`.
pub fn enumerate_odd_nontrivial(p: u64) -> Result<Vec<DirichletCharacter>> {
    if p == 2 {
        return Err(Error::OutOfScope("p = 2 is not treated".into()));
    }
    if !is_odd_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    (1..p as i64 - 1)
        .step_by(2)
        .map(|k| DirichletCharacter::new(p as u32, k))
        .collect()
}

/// `chi(a) = omega(a)^k`, and `0` when `p | a`.
pub fn chi_value(chi: &DirichletCharacter, a: i64, teich: &TeichmullerTable) -> PadicScalar {
    if a.rem_euclid(chi.prime as i64) == 0 {
        return PadicScalar::exact_zero(chi.prime);
    }
    teich.omega_pow(a, chi.exponent as i64)
}

/// `L(0, chi) = -(1/p) sum_{a=1}^{p-1} a chi(a)`.
pub fn l_at_zero(
    chi: &DirichletCharacter,
    teich: &TeichmullerTable,
    _policy: &PrecisionPolicy,
) -> Result<PadicScalar> {
    if chi.is_trivial() {
        return Err(Error::InvalidArgument(
            "L(0, chi) needs a nontrivial character".into(),
        ));
    }
    let mut sum = PadicScalar::exact_zero(chi.prime);
    for a in 1..chi.prime as i64 {
        sum = sum.checked_add(&chi_value(chi, a, teich).mul_int(a))?;
    }
    Ok(-sum.shift(-1))
}
