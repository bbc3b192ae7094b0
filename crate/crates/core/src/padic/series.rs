//! Convergent power series on Q_p: `exp` on `pZ_p` and `log` on `1 + pZ_p`.
//! Truncation points come from term-valuation lower bounds, and the result
//! is capped at the input's absolute precision.

use super::scalar::PadicScalar;
use crate::error::{Error, Result};

fn floor_log(k: u64, p: u32) -> i64 {
    let mut m = 0;
    let mut q = k;
    while q >= p as u64 {
        q /= p as u64;
        m += 1;
    }
    m
}

impl PadicScalar {
    /// p-adic exponential. Requires valuation >= 1 (the domain `v > 1/(p-1)`
    /// for odd `p`).
    pub fn exp(&self) -> Result<PadicScalar> {
        let p = self.prime();
        let Some(abs) = self.abs_precision() else {
            return Err(Error::Domain(
                "exp of an exact zero carries no precision".into(),
            ));
        };
        let v = match self.valuation() {
            None => {
                return if abs >= 1 {
                    Ok(PadicScalar::one(p, abs as u32))
                } else {
                    Err(Error::Domain(format!(
                        "exp argument only known to {abs} digits"
                    )))
                };
            }
            Some(v) if v < 1 => {
                return Err(Error::Domain(format!("exp needs valuation >= 1, got {v}")));
            }
            Some(v) => v,
        };
        // v_p(x^n / n!) >= n v - (n - 1)/(p - 1)
        let bound = |n: i64| n * v - (n - 1) / (p as i64 - 1);
        let mut n_stop = 1;
        while bound(n_stop) < abs {
            n_stop += 1;
        }
        let mut sum = PadicScalar::one(p, abs as u32);
        let mut term = PadicScalar::one(p, abs as u32);
        for n in 1..n_stop {
            term = (&term * self).div_int(n)?;
            sum = &sum + &term;
        }
        Ok(sum.cap_abs(abs))
    }

    /// Logarithm on principal units `1 + pZ_p`.
    pub fn log_principal(&self) -> Result<PadicScalar> {
        let p = self.prime();
        let one = PadicScalar::one(p, self.trusted().max(1));
        let t = self.checked_sub(&one)?;
        let Some(abs) = t.abs_precision() else {
            return Ok(PadicScalar::exact_zero(p));
        };
        let v = match t.valuation() {
            None => return Ok(PadicScalar::zero_at(p, abs)),
            Some(v) if v < 1 => {
                return Err(Error::Domain(format!(
                    "log needs an argument in 1 + pZ_p, got x - 1 of valuation {v}"
                )));
            }
            Some(v) => v,
        };
        // v_p(t^k / k) >= k v - floor(log_p k), nondecreasing in k when v >= 1
        let mut k_stop: u64 = 1;
        while k_stop as i64 * v - floor_log(k_stop, p) < abs {
            k_stop += 1;
        }
        let mut sum = PadicScalar::exact_zero(p);
        let mut power = t.clone();
        for k in 1..k_stop {
            let term = power.div_int(k as i64)?;
            sum = if k % 2 == 1 {
                &sum + &term
            } else {
                &sum - &term
            };
            power = &power * &t;
        }
        Ok(sum.cap_abs(abs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_of_six() {
        // log(1 + 5) = 5 - 25/2 + 125/3 mod 5^4
        let p = 5;
        let x = PadicScalar::from_i64(p, 6, 20);
        let got = x.log_principal().unwrap().cap_abs(4);
        let mut expect = PadicScalar::from_i64(p, 5, 20);
        expect = &expect - &PadicScalar::from_i64(p, 25, 20).div_int(2).unwrap();
        expect = &expect + &PadicScalar::from_i64(p, 125, 20).div_int(3).unwrap();
        assert!(got.agrees_with(&expect.cap_abs(4)));
        assert_eq!(got.abs_precision(), Some(4));
    }

    #[test]
    fn exp_log_inverse() {
        for p in [3u32, 5, 7, 13] {
            let x = PadicScalar::from_i64(p, p as i64 * 4, 40);
            let back = x.exp().unwrap().log_principal().unwrap();
            assert!(back.agrees_with(&x), "p={p}");
            assert!(back.abs_precision().unwrap() >= 40);
        }
    }

    #[test]
    fn domain_errors() {
        let p = 7;
        assert!(PadicScalar::from_i64(p, 3, 10).exp().is_err());
        assert!(PadicScalar::from_i64(p, 3, 10).log_principal().is_err());
    }
}
