use serde::Serialize;

use super::dwork::DworkUniformizer;
use super::gamma::gamma_at_ratio;
use super::gauss::{gauss_sum, GaussConvention};
use super::log::iwasawa_log_scalar;
use super::teichmuller::TeichmullerTable;
use crate::error::{Error, Result};
use crate::padic::{CycloElement, PadicScalar, PrecisionPolicy, ResidualFloor};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrossKoblitzCheck {
    pub a: u32,
    pub digits: u32,
    pub gamma: PadicScalar,
    pub log_level: ResidualFloor,
    /// `None` for `a = p - 1`, outside the multiplicative range.
    pub multiplicative: Option<ResidualFloor>,
    pub passed: bool,
}

/// `v(a) - log Gamma_p(a/(p-1))`, both taken to `digits` digits.
pub fn log_level_residual(
    v_a: &PadicScalar,
    gamma: &PadicScalar,
    digits: u32,
) -> Result<ResidualFloor> {
    let log_gamma = iwasawa_log_scalar(gamma)?;
    let r = v_a
        .cap_abs(digits as i64)
        .checked_sub(&log_gamma.cap_abs(digits as i64))?;
    Ok(ResidualFloor::of_scalar(&r))
}

/// `tau(omega^-a) + pi^a Gamma_p(a/(p-1))` for `1 <= a <= p-2`.
pub fn multiplicative_residual(
    a: u32,
    tau: &CycloElement,
    dwork: &DworkUniformizer,
    gamma: &PadicScalar,
) -> Result<ResidualFloor> {
    let p = tau.prime();
    if a == 0 || a + 1 >= p {
        return Err(Error::OutOfScope(format!(
            "multiplicative Gross-Koblitz check needs 1 <= a <= {}, got {a}",
            p - 2
        )));
    }
    let rhs = dwork.pi.pow(a as u64)?.scale(gamma);
    Ok(ResidualFloor::of_cyclo(&tau.checked_add(&rhs)?))
}

/// Both Gross-Koblitz residuals for one index `a` at `digits` digits.
#[allow(clippy::too_many_arguments)]
pub fn gross_koblitz_check(
    a: u32,
    digits: u32,
    v_a: &PadicScalar,
    convention: GaussConvention,
    policy: &PrecisionPolicy,
    teich: &TeichmullerTable,
    dwork: &DworkUniformizer,
    cost_limit: u64,
) -> Result<GrossKoblitzCheck> {
    let p = policy.prime();
    let gamma = gamma_at_ratio(a as i64, p as i64 - 1, digits, policy, cost_limit)?;
    let m = gamma.trusted() as i64;
    let log_level = log_level_residual(v_a, &gamma, digits)?;
    let multiplicative = if a + 1 < p {
        let tau = gauss_sum(a, convention, teich)?;
        Some(multiplicative_residual(a, &tau, dwork, &gamma)?)
    } else {
        None
    };
    let passed = log_level.meets(m) && multiplicative.is_none_or(|f| f.meets(m));
    Ok(GrossKoblitzCheck {
        a,
        digits,
        gamma,
        log_level,
        multiplicative,
        passed,
    })
}

/// One convention tried against the multiplicative identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConventionAttempt {
    pub convention: GaussConvention,
    pub worst_floor: ResidualFloor,
    pub validated: bool,
}

/// Walks the retry order (or just `requested`) until some convention makes
/// every multiplicative residual vanish to `digits` digits.
pub fn select_convention(
    requested: Option<GaussConvention>,
    digits: u32,
    policy: &PrecisionPolicy,
    teich: &TeichmullerTable,
    dwork: &DworkUniformizer,
    cost_limit: u64,
) -> Result<(Option<GaussConvention>, Vec<ConventionAttempt>)> {
    let p = policy.prime();
    let order = match requested {
        Some(c) => vec![c],
        None => GaussConvention::retry_order(p),
    };
    let gammas = (1..p - 1)
        .map(|a| gamma_at_ratio(a as i64, p as i64 - 1, digits, policy, cost_limit))
        .collect::<Result<Vec<_>>>()?;
    let mut attempts = Vec::new();
    for convention in order {
        let mut worst = ResidualFloor::exact_zero();
        let mut validated = true;
        for (i, gamma) in gammas.iter().enumerate() {
            let a = i as u32 + 1;
            let tau = gauss_sum(a, convention, teich)?;
            let f = multiplicative_residual(a, &tau, dwork, gamma)?;
            validated &= f.meets(gamma.trusted() as i64);
            worst = worst.min(f);
        }
        attempts.push(ConventionAttempt {
            convention,
            worst_floor: worst,
            validated,
        });
        if validated {
            return Ok((Some(convention), attempts));
        }
    }
    Ok((None, attempts))
}
