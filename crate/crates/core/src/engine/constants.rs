use serde::Serialize;

use crate::error::{Error, Result};
use crate::lfun::{chi_value, CharacterSummary, DirichletCharacter};
use crate::padic::{CycloElement, PadicScalar, ResidualFloor};
use crate::special::{LogTable, TeichmullerTable};

/// `Phi_p(chi) = sum_a chi(a) v(a)`.
pub fn phi(
    chi: &DirichletCharacter,
    table: &LogTable,
    teich: &TeichmullerTable,
) -> Result<PadicScalar> {
    let mut acc = PadicScalar::exact_zero(chi.prime);
    for a in 1..chi.prime {
        acc = acc.checked_add(&chi_value(chi, a as i64, teich).checked_mul(table.v(a))?)?;
    }
    Ok(acc)
}

/// `-sum_a chi(a) v(p-1-a)`: the same sum after the pairing substitution.
pub fn phi_paired(
    chi: &DirichletCharacter,
    table: &LogTable,
    teich: &TeichmullerTable,
) -> Result<PadicScalar> {
    let p = chi.prime;
    let mut acc = PadicScalar::exact_zero(p);
    for a in 1..p - 1 {
        acc = acc.checked_sub(&chi_value(chi, a as i64, teich).checked_mul(table.v(p - 1 - a))?)?;
    }
    acc.checked_add(&chi_value(chi, p as i64 - 1, teich).checked_mul(table.v(p - 1))?)
}

/// `sum_a chi(a) L_a`.
pub fn chi_log_sum(
    chi: &DirichletCharacter,
    table: &LogTable,
    teich: &TeichmullerTable,
) -> Result<CycloElement> {
    let mut acc = CycloElement::zero(chi.prime);
    for a in 1..chi.prime {
        acc = acc.checked_add(&table.L(a).scale(&chi_value(chi, a as i64, teich)))?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub u1: PadicScalar,
    pub u2: PadicScalar,
    pub pair: [u32; 2],
    /// Digits lost to the determinant.
    pub det_valuation: i64,
}

/// Cramer's rule for `Phi = U1 L' + U2 L0` on two characters.
pub fn solve_constants(s1: &CharacterSummary, s2: &CharacterSummary) -> Result<Solution> {
    if s1.character == s2.character {
        return Err(Error::SingularSystem(format!(
            "{} used twice",
            s1.character
        )));
    }
    let det = s1
        .lp_deriv
        .checked_mul(&s2.l0)?
        .checked_sub(&s2.lp_deriv.checked_mul(&s1.l0)?)?;
    let Some(det_valuation) = det.valuation().filter(|_| !det.is_zero()) else {
        return Err(Error::SingularSystem(format!(
            "determinant for ({}, {}) vanishes at precision",
            s1.character, s2.character
        )));
    };
    let u1 = s1
        .phi
        .checked_mul(&s2.l0)?
        .checked_sub(&s2.phi.checked_mul(&s1.l0)?)?
        .checked_div(&det)?;
    let u2 = s1
        .lp_deriv
        .checked_mul(&s2.phi)?
        .checked_sub(&s2.lp_deriv.checked_mul(&s1.phi)?)?
        .checked_div(&det)?;
    Ok(Solution {
        u1,
        u2,
        pair: [s1.character.exponent, s2.character.exponent],
        det_valuation,
    })
}

/// Pair with the smallest determinant valuation; ties go to the
/// lexicographically smallest exponent pair.
pub fn solve_constants_auto(summaries: &[CharacterSummary]) -> Result<Solution> {
    let mut best: Option<Solution> = None;
    for (i, s1) in summaries.iter().enumerate() {
        for s2 in &summaries[i + 1..] {
            let Ok(sol) = solve_constants(s1, s2) else {
                continue;
            };
            let better = match &best {
                None => true,
                Some(b) => (sol.det_valuation, sol.pair) < (b.det_valuation, b.pair),
            };
            if better {
                best = Some(sol);
            }
        }
    }
    best.ok_or_else(|| Error::SingularSystem("no character pair gives an invertible system".into()))
}

/// `Phi - U1 L' - U2 L0`.
pub fn fit_residual(
    s: &CharacterSummary,
    u1: &PadicScalar,
    u2: &PadicScalar,
) -> Result<PadicScalar> {
    s.phi
        .checked_sub(&u1.checked_mul(&s.lp_deriv)?)?
        .checked_sub(&u2.checked_mul(&s.l0)?)
}

/// `C_p(chi) = -const(sum_a chi(a) L_a) / L'`, with the floor of the
/// numerator's non-constant coordinates.
pub fn recover_cp(
    numerator: &CycloElement,
    lp_deriv: &PadicScalar,
) -> Result<(PadicScalar, ResidualFloor)> {
    if lp_deriv.is_zero() {
        return Err(Error::PrecisionExhausted(
            "L' vanishes at precision; C_p is undefined".into(),
        ));
    }
    let cp = -numerator.constant().checked_div(lp_deriv)?;
    Ok((cp, super::discrepancy::nonrational_floor(numerator)))
}

/// Smallest floor among pairwise differences.
pub fn independence_floor(values: &[PadicScalar]) -> Result<ResidualFloor> {
    let mut worst = ResidualFloor::exact_zero();
    for (i, x) in values.iter().enumerate() {
        for y in &values[i + 1..] {
            worst = worst.min(ResidualFloor::of_scalar(&x.checked_sub(y)?));
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RenormEntry {
    pub character: u32,
    pub phi_ren: PadicScalar,
    pub ratio: PadicScalar,
    /// `ratio - U1`
    pub u1_floor: ResidualFloor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RenormRecord {
    pub entries: Vec<RenormEntry>,
    pub constancy_floor: ResidualFloor,
}

/// Ratios `(Phi - U2 L0) / L'` and how constant they are in `chi`.
pub fn renorm_check(
    summaries: &[CharacterSummary],
    u1: &PadicScalar,
    u2: &PadicScalar,
) -> Result<RenormRecord> {
    let mut entries = Vec::with_capacity(summaries.len());
    for s in summaries {
        if s.lp_deriv.is_zero() {
            return Err(Error::PrecisionExhausted(format!(
                "L' for {} vanishes at precision",
                s.character
            )));
        }
        let phi_ren = s.phi.checked_sub(&u2.checked_mul(&s.l0)?)?;
        let ratio = phi_ren.checked_div(&s.lp_deriv)?;
        let u1_floor = ResidualFloor::of_scalar(&ratio.checked_sub(u1)?);
        entries.push(RenormEntry {
            character: s.character.exponent,
            phi_ren,
            ratio,
            u1_floor,
        });
    }
    let ratios: Vec<_> = entries.iter().map(|e| e.ratio.clone()).collect();
    Ok(RenormRecord {
        constancy_floor: independence_floor(&ratios)?,
        entries,
    })
}
