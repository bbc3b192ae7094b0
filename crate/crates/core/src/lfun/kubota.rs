//! `L_p(s, theta)` from
//! `(1/(s-1)) (1/p) sum_{a=1}^{p-1} theta(a) <a>^(1-s) sum_j binom(1-s, j) B_j (p/a)^j`
//! evaluated in first-order jets.

use super::bernoulli::BernoulliCache;
use super::character::{chi_value, l_at_zero, DirichletCharacter};
use crate::error::{Error, Result};
use crate::padic::{Jet, PadicScalar, PrecisionPolicy};
use crate::special::{principal_unit, TeichmullerTable};

fn floor_log(p: u64, mut j: u64) -> i64 {
    let mut k = 0;
    while j >= p {
        j /= p;
        k += 1;
    }
    k
}

/// Smallest `J` such that the j-th term has valuation `>= target` for all
/// `j >= J`; term valuations are bounded below by `j - 2 - floor(log_p j)`.
pub fn truncation_index(p: u32, target: i64) -> usize {
    let bound = |j: u64| j as i64 - 2 - floor_log(p as u64, j);
    // bound(j+1) >= bound(j) except across powers of p, where it stays flat
    let mut j = 2u64;
    while bound(j) < target {
        j += 1;
    }
    j as usize
}

/// Bernoulli numbers needed for working precision `w`.
pub fn bernoulli_for(p: u32, w: u32) -> BernoulliCache {
    BernoulliCache::new(truncation_index(p, w as i64).max(w as usize + 40))
}

/// `L_p(s, chi omega)` as a jet at the expansion point carried by `s`.
/// `s` must have value in `Z_p`.
pub fn kubota_leopoldt_at(
    chi: &DirichletCharacter,
    s: &Jet,
    teich: &TeichmullerTable,
    bern: &BernoulliCache,
    policy: &PrecisionPolicy,
) -> Result<Jet> {
    let p = policy.prime();
    let w = policy.working();
    if chi.prime != p {
        return Err(Error::PrimeMismatch(chi.prime, p));
    }
    if s.value.valuation().is_some_and(|v| v < 0) {
        return Err(Error::Domain("expansion point must lie in Z_p".into()));
    }
    let big_j = truncation_index(p, w as i64);
    if bern.max_index() + 1 < big_j {
        return Err(Error::PrecisionExhausted(format!(
            "truncation needs B_0..B_{} but only {} are cached",
            big_j - 1,
            bern.max_index() + 1
        )));
    }
    let one = Jet::constant(PadicScalar::one(p, w));
    let one_minus_s = one.sub(s)?;
    let theta = crate::lfun::DirichletCharacter::new(p, chi.exponent as i64 + 1)?;

    // binom(1-s, j) for j < J, shared by every a
    let mut binoms = Vec::with_capacity(big_j);
    let mut b = one.clone();
    for j in 0..big_j {
        if j > 0 {
            let shift = Jet::constant(PadicScalar::from_i64(p, j as i64 - 1, w));
            b = b.mul(&one_minus_s.sub(&shift)?)?.div_int(j as i64)?;
        }
        binoms.push(b.clone());
    }
    let bj: Vec<PadicScalar> = (0..big_j)
        .map(|j| PadicScalar::from_rational(p, &bern.values()[j], w))
        .collect();

    let mut total = Jet::constant(PadicScalar::exact_zero(p));
    for a in 1..p as i64 {
        let p_over_a = PadicScalar::from_i64(p, p as i64, w).div_int(a)?;
        let mut inner = Jet::constant(PadicScalar::exact_zero(p));
        let mut pw = PadicScalar::one(p, w);
        for j in 0..big_j {
            if !bj[j].is_exact_zero() {
                inner = inner.add(&binoms[j].scale(&bj[j].checked_mul(&pw)?)?)?;
            }
            pw = pw.checked_mul(&p_over_a)?;
        }
        // dropped terms have valuation >= J - 1 - floor(log_p J) before the 1/p
        let cap = big_j as i64 - 1 - floor_log(p as u64, big_j as u64);
        let inner = Jet::new(inner.value.cap_abs(cap), inner.deriv.cap_abs(cap));
        let log_unit = principal_unit(a, policy)?.log_principal()?;
        let unit_pow = one_minus_s.scale(&log_unit)?.exp()?;
        let term = unit_pow.mul(&inner)?.scale(&chi_value(&theta, a, teich))?;
        total = total.add(&term)?;
    }
    let total = Jet::new(total.value.shift(-1), total.deriv.shift(-1));
    total.div(&s.sub(&one)?)
}

/// `(L_p(0, chi omega), L_p'(0, chi omega))` for odd nontrivial `chi`, with
/// the value cross-checked against `L(0, chi)`.
pub fn kubota_leopoldt(
    chi: &DirichletCharacter,
    teich: &TeichmullerTable,
    bern: &BernoulliCache,
    policy: &PrecisionPolicy,
) -> Result<Jet> {
    if !chi.is_odd() || chi.is_trivial() {
        return Err(Error::InvalidArgument(format!(
            "{chi} is not odd and nontrivial"
        )));
    }
    let p = policy.prime();
    let s = Jet::variable(PadicScalar::exact_zero(p), policy.working());
    let jet = kubota_leopoldt_at(chi, &s, teich, bern, policy)?;
    let l0 = l_at_zero(chi, teich, policy)?;
    let diff = jet.value.checked_sub(&l0)?;
    if !diff.is_zero() {
        return Err(Error::CrossOracle(format!(
            "L_p(0, {chi} omega) = {} but L(0, {chi}) = {}",
            jet.value, l0
        )));
    }
    Ok(jet)
}

/// `L_p'(0, chi omega)`.
pub fn lp_derivative_at_zero(
    chi: &DirichletCharacter,
    teich: &TeichmullerTable,
    bern: &BernoulliCache,
    policy: &PrecisionPolicy,
) -> Result<PadicScalar> {
    Ok(kubota_leopoldt(chi, teich, bern, policy)?.deriv)
}
