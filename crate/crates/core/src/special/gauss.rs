use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::teichmuller::TeichmullerTable;
use crate::error::{Error, Result};
use crate::padic::{CycloElement, PadicScalar};

/// How `tau(omega^-a)` is written down. The harness tries these in order
/// until the multiplicative Gross-Koblitz check validates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GaussConvention {
    /// `sum_t omega(t)^(-a) zeta^t`
    Standard,
    /// `sum_t omega(t)^(a) zeta^t`
    ConjugateExponent,
    /// `sum_t omega(t)^(-a) zeta^(c t)`
    Reembed(u32),
}

impl GaussConvention {
    /// Retry order: standard, conjugate, then every re-embedding `c = 2..p-1`.
    pub fn retry_order(p: u32) -> Vec<Self> {
        let mut out = vec![Self::Standard, Self::ConjugateExponent];
        out.extend((2..p).map(Self::Reembed));
        out
    }
}

impl fmt::Display for GaussConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Standard => f.write_str("standard"),
            Self::ConjugateExponent => f.write_str("conjugate"),
            Self::Reembed(c) => write!(f, "reembed:{c}"),
        }
    }
}

impl FromStr for GaussConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Self::Standard),
            "conjugate" => Ok(Self::ConjugateExponent),
            _ => s
                .strip_prefix("reembed:")
                .and_then(|c| c.parse().ok())
                .filter(|&c: &u32| c >= 2)
                .map(Self::Reembed)
                .ok_or_else(|| Error::Parse(format!("unknown Gauss-sum convention {s:?}"))),
        }
    }
}

impl Serialize for GaussConvention {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The Gauss sum `tau(omega^-a)` under `convention`.
pub fn gauss_sum(
    a: u32,
    convention: GaussConvention,
    table: &TeichmullerTable,
) -> Result<CycloElement> {
    let p = table.prime();
    if a == 0 || a >= p {
        return Err(Error::InvalidArgument(format!(
            "Gauss-sum index {a} outside 1..{}",
            p - 1
        )));
    }
    let (exponent, c) = match convention {
        GaussConvention::Standard => (-(a as i64), 1),
        GaussConvention::ConjugateExponent => (a as i64, 1),
        GaussConvention::Reembed(c) => {
            if c % p == 0 {
                return Err(Error::InvalidArgument(format!(
                    "re-embedding by {c} is not a unit mod {p}"
                )));
            }
            (-(a as i64), c as u64)
        }
    };
    // coefficients on zeta^0 .. zeta^(p-1), then reduce zeta^(p-1)
    let mut ext = vec![PadicScalar::exact_zero(p); p as usize];
    for t in 1..p as u64 {
        let j = (c * t % p as u64) as usize;
        ext[j] = ext[j].checked_add(&table.omega_pow(t as i64, exponent))?;
    }
    let top = ext.pop().unwrap();
    let coords = ext
        .iter()
        .map(|x| x.checked_sub(&top))
        .collect::<Result<Vec<_>>>()?;
    CycloElement::from_coords(p, coords)
}

#[cfg(test)]
mod tests {
    use num_rational::Ratio;

    use super::*;
    use crate::padic::PrecisionPolicy;

    fn table(p: u32) -> TeichmullerTable {
        TeichmullerTable::new(&PrecisionPolicy::new(p, 30).unwrap()).unwrap()
    }

    #[test]
    fn trivial_character_sum() {
        for p in [5, 7, 11] {
            let t = table(p);
            let w = PrecisionPolicy::new(p, 30).unwrap().working();
            let g = gauss_sum(p - 1, GaussConvention::Standard, &t).unwrap();
            assert!(g.agrees_with(&CycloElement::from_scalar(&PadicScalar::from_i64(p, -1, w))));
        }
    }

    #[test]
    fn stickelberger() {
        for p in [5, 7, 11, 13] {
            let t = table(p);
            for a in 1..p - 1 {
                let g = gauss_sum(a, GaussConvention::Standard, &t).unwrap();
                assert_eq!(g.valuation().unwrap(), Ratio::new(a as i64, p as i64 - 1));
            }
        }
    }

    #[test]
    fn conventions_parse() {
        for c in GaussConvention::retry_order(7) {
            assert_eq!(c.to_string().parse::<GaussConvention>().unwrap(), c);
        }
        assert!("reembed:1".parse::<GaussConvention>().is_err());
        assert!("other".parse::<GaussConvention>().is_err());
    }
}
