//! The Iwasawa logarithm: the extension of `log` with `log(p) = 0` and
//! `log(root of unity) = 0`.
//!
//! For `x` in Q_p(zeta_p) with `m = (p-1) v(x)`, the element
//! `z = (x^(p-1) / p^m)^(p-1)` is a principal unit and
//! `log x = log z / (p-1)^2`. Before summing the series, `z` is raised to
//! `p^k`, which pushes `z - 1` deeper into the maximal ideal at the cost of
//! `k` digits; `k` is picked to minimize the number of ring multiplications.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::padic::{CycloElement, PadicScalar, PrecisionPolicy};

const MAX_BOOST: u32 = 6;

/// Smallest `K` such that every term `t^j / j` with `j >= K` has all power-basis
/// coordinates of valuation `>= target`, given `v(t) >= mu` (in units with `v(p) = 1`).
fn series_length(mu: f64, p: u32, target: i64) -> u64 {
    let lp = (p as f64).ln();
    // coordinate valuation >= pi-valuation - (p-2)/(p-1)
    let slack = (p as f64 - 2.0) / (p as f64 - 1.0);
    let need = target as f64 + slack + 1e-9;
    let monotone_from = (1.0 / (mu * lp)).ceil().max(1.0) as u64;
    let mut k = monotone_from;
    while (k as f64) * mu - (k as f64).ln() / lp < need {
        k += 1;
    }
    k
}

fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn pow_cost(p: u32) -> u64 {
    (32 - p.leading_zeros() - 1 + p.count_ones() - 1) as u64
}

pub fn iwasawa_log(x: &CycloElement, policy: &PrecisionPolicy) -> Result<CycloElement> {
    let p = x.prime();
    if p != policy.prime() {
        return Err(Error::PrimeMismatch(p, policy.prime()));
    }
    let e = (p - 1) as u64;
    let val = x.valuation()?;
    let m = (val * e as i64).to_integer();
    let y = x.pow(e)?.shift(-m);
    let z = y.pow(e)?;
    let one = CycloElement::one(p, policy.working());
    let t0 = z.checked_sub(&one)?;
    if t0.is_zero() {
        return t0.div_int((e * e) as i64);
    }
    let Some(abs) = t0.abs_precision() else {
        return Ok(CycloElement::zero(p));
    };
    let mu0 = ratio_f64(t0.floor().expect("nonzero element has a floor"));
    if mu0 <= 0.0 {
        return Err(Error::Domain(
            "log argument did not reduce to a principal unit".into(),
        ));
    }

    let mut best = (u64::MAX, 0);
    let mut mu = mu0;
    for k in 0..=MAX_BOOST {
        let cost = k as u64 * pow_cost(p) + series_length(mu, p, abs);
        if cost < best.0 {
            best = (cost, k);
        }
        mu = (mu * p as f64).min(mu + 1.0);
    }
    let boost = best.1;

    let mut zk = z;
    for _ in 0..boost {
        zk = zk.pow(p as u64)?;
    }
    let t = zk.checked_sub(&one)?;
    if t.is_zero() {
        return t.shift(-(boost as i64)).div_int((e * e) as i64);
    }
    let target = t.abs_precision().unwrap_or(abs);
    let mu = ratio_f64(t.floor().expect("nonzero element has a floor"));
    let len = series_length(mu, p, target);

    let mut sum = CycloElement::zero(p);
    let mut power = t.clone();
    for j in 1..len {
        let term = power.div_int(j as i64)?;
        sum = if j % 2 == 1 {
            sum.checked_add(&term)?
        } else {
            sum.checked_sub(&term)?
        };
        if j + 1 < len {
            power = power.checked_mul(&t)?;
        }
    }
    sum.cap_abs(target)
        .shift(-(boost as i64))
        .div_int((e * e) as i64)
}

/// Iwasawa logarithm on Q_p^x.
pub fn iwasawa_log_scalar(x: &PadicScalar) -> Result<PadicScalar> {
    let p = x.prime();
    let Some(v) = x.valuation() else {
        return Err(Error::PrecisionExhausted(
            "log of a value that is zero at precision".into(),
        ));
    };
    let unit = x.shift(-v);
    unit.pow(p as u64 - 1)
        .log_principal()?
        .div_int(p as i64 - 1)
}
