use super::log::iwasawa_log;
use crate::error::{Error, Result};
use crate::padic::{CycloElement, PadicScalar, PrecisionPolicy};

const MAX_NEWTON_STEPS: usize = 64;

/// The root `pi` of `x^(p-1) = -p` with `pi = zeta - 1 (mod pi^2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DworkUniformizer {
    pub pi: CycloElement,
}

/// Newton's method for `x^(p-1) + p` from `zeta - 1`, run on the unit `y`
/// with `x = (zeta - 1) y`: `g(y) = u y^(p-1) - 1`, `u = -(zeta - 1)^(p-1) / p`.
/// The iterates are the same, but every quantity stays integral.
pub fn dwork_pi(policy: &PrecisionPolicy) -> Result<DworkUniformizer> {
    let p = policy.prime();
    let w = policy.working();
    let one = CycloElement::one(p, w);
    let x0 = CycloElement::zeta_pow(p, 1, w).checked_sub(&one)?;
    let u = x0.pow(p as u64 - 1)?.shift(-1).neg();
    let mut y = one.clone();
    for _ in 0..MAX_NEWTON_STEPS {
        let y_pm2 = y.pow(p as u64 - 2)?;
        let g = u.checked_mul(&y_pm2.checked_mul(&y)?)?.checked_sub(&one)?;
        if g.is_zero() {
            let pi = x0.checked_mul(&y)?;
            return Ok(DworkUniformizer { pi });
        }
        let dg = u.checked_mul(&y_pm2)?.mul_int(p as i64 - 1);
        y = y.checked_sub(&g.checked_div(&dg)?)?;
    }
    Err(Error::NonConvergence(
        "Dwork uniformizer Newton iteration".into(),
    ))
}

impl DworkUniformizer {
    /// `pi^(p-1) + p`, which must vanish at precision.
    pub fn defect(&self) -> Result<CycloElement> {
        let p = self.pi.prime();
        let w = self.pi.abs_precision().unwrap_or(0).max(1) as u32;
        self.pi
            .pow(p as u64 - 1)?
            .checked_add(&CycloElement::from_scalar(&PadicScalar::from_i64(
                p, p as i64, w,
            )))
    }

    pub fn log(&self, policy: &PrecisionPolicy) -> Result<CycloElement> {
        iwasawa_log(&self.pi, policy)
    }
}

#[cfg(test)]
mod tests {
    use num_rational::Ratio;

    use super::*;

    #[test]
    fn uniformizer_invariants() {
        for p in [3, 5, 7, 11, 13] {
            let policy = PrecisionPolicy::new(p, 40).unwrap();
            let d = dwork_pi(&policy).unwrap();
            assert!(d.defect().unwrap().is_zero(), "p={p}");
            assert_eq!(d.pi.valuation().unwrap(), Ratio::new(1, p as i64 - 1));
            let w = policy.working();
            let x0 = CycloElement::zeta_pow(p, 1, w)
                .checked_sub(&CycloElement::one(p, w))
                .unwrap();
            // pi = zeta - 1 mod pi^2
            let diff = d.pi.checked_sub(&x0).unwrap();
            assert!(diff.floor().unwrap() >= Ratio::new(2, p as i64 - 1));
            assert!(d.log(&policy).unwrap().is_zero());
        }
    }
}
