//! Teichmuller lifts, the Iwasawa logarithm, Morita's gamma function, Gauss
//! sums, cyclotomic-unit logarithms and the Dwork uniformizer.

mod dwork;
mod gamma;
mod gauss;
mod gross_koblitz;
mod log;
mod teichmuller;

use rayon::prelude::*;
use serde::Serialize;

pub use dwork::{dwork_pi, DworkUniformizer};
pub use gamma::{
    default_gamma_digits, gamma_at_ratio, morita_gamma, ratio_residue, DEFAULT_COST_LIMIT,
};
pub use gauss::{gauss_sum, GaussConvention};
pub use gross_koblitz::{
    gross_koblitz_check, log_level_residual, multiplicative_residual, select_convention,
    ConventionAttempt, GrossKoblitzCheck,
};
pub use log::{iwasawa_log, iwasawa_log_scalar};
pub use teichmuller::{principal_unit, teichmuller, TeichmullerTable};

use crate::error::{Error, Result};
use crate::padic::{CycloElement, InfraCheck, PadicScalar, PrecisionPolicy, ResidualFloor};

/// `v(a) = log tau(omega^-a)`, projected to Q_p after checking that the
/// non-constant coordinates vanish.
pub fn v_of(
    a: u32,
    convention: GaussConvention,
    teich: &TeichmullerTable,
    policy: &PrecisionPolicy,
) -> Result<PadicScalar> {
    let l = iwasawa_log(&gauss_sum(a, convention, teich)?, policy)?;
    if !l.is_rational() {
        return Err(Error::NonRational(format!(
            "log tau(omega^-{a}) has non-constant coordinates down to {:?}",
            l.nonrational_floor()
        )));
    }
    Ok(l.constant().clone())
}

/// `L_a = log(1 - zeta^a)`.
pub fn cyclo_unit_log(a: u32, policy: &PrecisionPolicy) -> Result<CycloElement> {
    let p = policy.prime();
    if a == 0 || a >= p {
        return Err(Error::InvalidArgument(format!(
            "index {a} outside 1..{}",
            p - 1
        )));
    }
    let w = policy.working();
    let x = CycloElement::one(p, w).checked_sub(&CycloElement::zeta_pow(p, a as i64, w))?;
    iwasawa_log(&x, policy)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogTable {
    pub prime: u32,
    pub convention: GaussConvention,
    /// `v(1), ..., v(p-1)`
    pub v: Vec<PadicScalar>,
    /// `L_1, ..., L_(p-1)`
    #[serde(rename = "L")]
    pub l: Vec<CycloElement>,
}

impl LogTable {
    /// Entries are computed in parallel and collected in index order.
    pub fn build(
        policy: &PrecisionPolicy,
        teich: &TeichmullerTable,
        convention: GaussConvention,
    ) -> Result<Self> {
        let p = policy.prime();
        let v = (1..p)
            .into_par_iter()
            .map(|a| v_of(a, convention, teich, policy))
            .collect::<Result<Vec<_>>>()?;
        let l = (1..p)
            .into_par_iter()
            .map(|a| cyclo_unit_log(a, policy))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            prime: p,
            convention,
            v,
            l,
        })
    }

    pub fn v(&self, a: u32) -> &PadicScalar {
        &self.v[a as usize - 1]
    }

    #[allow(non_snake_case)]
    pub fn L(&self, a: u32) -> &CycloElement {
        &self.l[a as usize - 1]
    }

    /// `w(a) = -L_a`.
    pub fn w(&self, a: u32) -> CycloElement {
        self.L(a).neg()
    }

    /// The classical identities the table must satisfy, each as the worst
    /// floor over its instances.
    pub fn invariants(&self, threshold: i64) -> Result<Vec<InfraCheck>> {
        let p = self.prime;
        let mut out = Vec::new();
        out.push(InfraCheck::new(
            "v(p-1) = 0",
            ResidualFloor::of_scalar(self.v(p - 1)),
            threshold,
        ));
        out.push(InfraCheck::new(
            "v((p-1)/2) = 0",
            ResidualFloor::of_scalar(self.v((p - 1) / 2)),
            threshold,
        ));
        let mut pairing = ResidualFloor::exact_zero();
        for a in 1..p - 1 {
            let r = self.v(a).checked_add(self.v(p - 1 - a))?;
            pairing = pairing.min(ResidualFloor::of_scalar(&r));
        }
        out.push(InfraCheck::new("v(a) + v(p-1-a) = 0", pairing, threshold));
        let mut sym = ResidualFloor::exact_zero();
        for a in 1..p {
            sym = sym.min(ResidualFloor::of_cyclo(
                &self.L(p - a).checked_sub(self.L(a))?,
            ));
        }
        out.push(InfraCheck::new("L_(p-a) = L_a", sym, threshold));
        let mut sum = CycloElement::zero(p);
        for l in &self.l {
            sum = sum.checked_add(l)?;
        }
        out.push(InfraCheck::new(
            "sum_a L_a = 0",
            ResidualFloor::of_cyclo(&sum),
            threshold,
        ));
        Ok(out)
    }
}
