use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use super::{CycloElement, PadicScalar};

/// Valuation evidence for a residual: the floor of a zero-at-precision value,
/// or the exact valuation of a value that did not vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidualFloor {
    /// `None` for the exact zero.
    pub digits: Option<Ratio<i64>>,
    pub zero_at_precision: bool,
}

impl ResidualFloor {
    pub fn exact_zero() -> Self {
        Self {
            digits: None,
            zero_at_precision: true,
        }
    }

    pub fn of_scalar(x: &PadicScalar) -> Self {
        if x.is_exact_zero() {
            return Self::exact_zero();
        }
        Self {
            digits: x.floor().map(Ratio::from_integer),
            zero_at_precision: x.is_zero(),
        }
    }

    pub fn of_cyclo(x: &CycloElement) -> Self {
        if x.is_exact_zero() {
            return Self::exact_zero();
        }
        let digits = if x.is_zero() {
            x.floor()
        } else {
            x.valuation().ok().or_else(|| x.floor())
        };
        Self {
            digits,
            zero_at_precision: x.is_zero(),
        }
    }

    /// Integer lower bound on the digits (`i64::MAX` for the exact zero).
    pub fn whole_digits(&self) -> i64 {
        self.digits
            .map(|d| d.floor().to_integer())
            .unwrap_or(i64::MAX)
    }

    /// Vanishes at precision with at least `threshold` digits.
    pub fn meets(&self, threshold: i64) -> bool {
        self.zero_at_precision
            && self
                .digits
                .is_none_or(|d| d >= Ratio::from_integer(threshold))
    }

    pub fn min(self, other: Self) -> Self {
        match (self.digits, other.digits) {
            (None, _) => other,
            (_, None) => self,
            (Some(a), Some(b)) => {
                let digits = Some(a.min(b));
                Self {
                    digits,
                    zero_at_precision: self.zero_at_precision && other.zero_at_precision,
                }
            }
        }
    }

    pub fn digits_string(&self) -> String {
        match self.digits {
            None => "inf".to_string(),
            Some(d) if d.is_integer() => d.numer().to_string(),
            Some(d) => format!("{}/{}", d.numer(), d.denom()),
        }
    }
}

impl fmt::Display for ResidualFloor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero_at_precision {
            write!(f, ">= {}", self.digits_string())
        } else {
            write!(f, "= {} (nonzero)", self.digits_string())
        }
    }
}

impl Serialize for ResidualFloor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ResidualFloor", 2)?;
        st.serialize_field("digits", &self.digits_string())?;
        st.serialize_field("zero_at_precision", &self.zero_at_precision)?;
        st.end()
    }
}

/// A named pass/fail infrastructure identity with its measured floor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfraCheck {
    pub name: String,
    pub floor: ResidualFloor,
    pub threshold: i64,
    pub passed: bool,
}

impl InfraCheck {
    pub fn new(name: impl Into<String>, floor: ResidualFloor, threshold: i64) -> Self {
        Self {
            name: name.into(),
            floor,
            threshold,
            passed: floor.meets(threshold),
        }
    }

    /// A check that is a plain boolean (no residual to measure).
    pub fn flag(name: impl Into<String>, passed: bool) -> Self {
        let floor = if passed {
            ResidualFloor::exact_zero()
        } else {
            ResidualFloor {
                digits: Some(Ratio::from_integer(0)),
                zero_at_precision: false,
            }
        };
        Self {
            name: name.into(),
            floor,
            threshold: 0,
            passed,
        }
    }
}
