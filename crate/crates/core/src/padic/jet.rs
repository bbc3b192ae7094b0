//! First-order jets `(f(s0), f'(s0))` over Q_p.

use std::fmt;

use super::scalar::PadicScalar;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet {
    pub value: PadicScalar,
    pub deriv: PadicScalar,
}

impl Jet {
    pub fn new(value: PadicScalar, deriv: PadicScalar) -> Self {
        Self { value, deriv }
    }

    /// A constant: derivative exactly zero.
    pub fn constant(value: PadicScalar) -> Self {
        let p = value.prime();
        Self {
            value,
            deriv: PadicScalar::exact_zero(p),
        }
    }

    /// The independent variable at `s0`.
    pub fn variable(s0: PadicScalar, prec: u32) -> Self {
        let p = s0.prime();
        Self {
            value: s0,
            deriv: PadicScalar::one(p, prec),
        }
    }

    pub fn prime(&self) -> u32 {
        self.value.prime()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            value: self.value.checked_add(&other.value)?,
            deriv: self.deriv.checked_add(&other.deriv)?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            value: self.value.checked_sub(&other.value)?,
            deriv: self.deriv.checked_sub(&other.deriv)?,
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            value: -&self.value,
            deriv: -&self.deriv,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let value = self.value.checked_mul(&other.value)?;
        let deriv = self
            .deriv
            .checked_mul(&other.value)?
            .checked_add(&self.value.checked_mul(&other.deriv)?)?;
        Ok(Self { value, deriv })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let value = self.value.checked_div(&other.value)?;
        // (f/g)' = (f' - (f/g) g') / g
        let deriv = self
            .deriv
            .checked_sub(&value.checked_mul(&other.deriv)?)?
            .checked_div(&other.value)?;
        Ok(Self { value, deriv })
    }

    pub fn scale(&self, k: &PadicScalar) -> Result<Self> {
        Ok(Self {
            value: self.value.checked_mul(k)?,
            deriv: self.deriv.checked_mul(k)?,
        })
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Self {
            value: self.value.mul_int(k),
            deriv: self.deriv.mul_int(k),
        }
    }

    pub fn div_int(&self, k: i64) -> Result<Self> {
        Ok(Self {
            value: self.value.div_int(k)?,
            deriv: self.deriv.div_int(k)?,
        })
    }

    /// `exp` of a jet; the value must have valuation >= 1.
    pub fn exp(&self) -> Result<Self> {
        let e = self.value.exp()?;
        let deriv = self.deriv.checked_mul(&e)?;
        Ok(Self { value: e, deriv })
    }

    /// `log` of a jet whose value lies in `1 + pZ_p`: `(log v, d / v)`.
    pub fn log(&self) -> Result<Self> {
        let value = self.value.log_principal()?;
        let deriv = self.deriv.checked_div(&self.value)?;
        Ok(Self { value, deriv })
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.value, self.deriv)
    }
}
