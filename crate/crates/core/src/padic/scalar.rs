//! Elements of Q_p with exact valuation and a tracked count of trusted digits.
//!
//! A nonzero value is `p^v * u` where `u` is a unit known modulo `p^t`.
//! Its absolute precision is `v + t`: the value is determined modulo
//! `p^(v+t)`. Precision only ever decreases; additions that cancel leading
//! digits give those digits up, and a sum whose whole trusted window vanishes
//! becomes "zero at precision" with the absolute precision as floor.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

thread_local! {
    static POWERS: RefCell<HashMap<u32, Vec<Rc<BigUint>>>> = RefCell::new(HashMap::new());
}

/// `p^k`, memoized per thread.
pub(crate) fn p_pow(p: u32, k: u32) -> Rc<BigUint> {
    POWERS.with(|cell| {
        let mut map = cell.borrow_mut();
        let table = map
            .entry(p)
            .or_insert_with(|| vec![Rc::new(BigUint::one())]);
        while table.len() <= k as usize {
            let next = &**table.last().unwrap() * p;
            table.push(Rc::new(next));
        }
        Rc::clone(&table[k as usize])
    })
}

/// Splits `n = p^k * m` with `p` not dividing `m`. `n` must be nonzero.
pub(crate) fn split_p(mut n: BigUint, p: u32) -> (u32, BigUint) {
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&BigUint::from(p));
        if !r.is_zero() {
            return (k, n);
        }
        n = q;
        k += 1;
    }
}

pub(crate) fn vp_u64(mut n: u64, p: u32) -> u32 {
    debug_assert!(n != 0);
    let p = p as u64;
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    ExactZero,
    ZeroAt {
        floor: i64,
    },
    Value {
        valuation: i64,
        unit: BigUint,
        trusted: u32,
    },
}

/// The four basic field operations, as accepted by [`PadicScalar::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicScalar {
    prime: u32,
    repr: Repr,
}

impl PadicScalar {
    pub fn exact_zero(prime: u32) -> Self {
        Self {
            prime,
            repr: Repr::ExactZero,
        }
    }

    /// Zero known only modulo `p^floor`.
    pub fn zero_at(prime: u32, floor: i64) -> Self {
        Self {
            prime,
            repr: Repr::ZeroAt { floor },
        }
    }

    /// Builds `p^valuation * unit :: trusted`, validating the unit invariant.
    pub fn from_parts(prime: u32, valuation: i64, unit: BigUint, trusted: u32) -> Result<Self> {
        if trusted == 0 {
            return Err(Error::PrecisionExhausted(
                "trusted digit count must be >= 1".into(),
            ));
        }
        let modulus = p_pow(prime, trusted);
        if unit >= *modulus {
            return Err(Error::InvalidArgument(format!(
                "unit digits exceed p^{trusted}"
            )));
        }
        if (&unit % prime).is_zero() {
            return Err(Error::InvalidArgument("unit digits divisible by p".into()));
        }
        Ok(Self {
            prime,
            repr: Repr::Value {
                valuation,
                unit,
                trusted,
            },
        })
    }

    /// The value `p^base * residue`, where `residue` is known modulo `p^rel`.
    pub fn from_residue(prime: u32, base: i64, residue: BigUint, rel: u32) -> Self {
        if rel == 0 {
            return Self::zero_at(prime, base);
        }
        let modulus = p_pow(prime, rel);
        let r = if residue >= *modulus {
            residue % &*modulus
        } else {
            residue
        };
        if r.is_zero() {
            return Self::zero_at(prime, base + rel as i64);
        }
        let (k, unit) = split_p(r, prime);
        Self {
            prime,
            repr: Repr::Value {
                valuation: base + k as i64,
                unit,
                trusted: rel - k,
            },
        }
    }

    /// Integer `n` with `prec` trusted digits. Zero is exact.
    pub fn from_i64(prime: u32, n: i64, prec: u32) -> Self {
        Self::from_bigint(prime, &BigInt::from(n), prec)
    }

    pub fn from_bigint(prime: u32, n: &BigInt, prec: u32) -> Self {
        assert!(prec >= 1, "precision must be >= 1");
        if n.is_zero() {
            return Self::exact_zero(prime);
        }
        let (k, m) = split_p(n.magnitude().clone(), prime);
        let modulus = p_pow(prime, prec);
        let mut unit = m % &*modulus;
        if n.sign() == Sign::Minus {
            unit = &*modulus - unit;
        }
        Self {
            prime,
            repr: Repr::Value {
                valuation: k as i64,
                unit,
                trusted: prec,
            },
        }
    }

    /// A rational number with `prec` trusted digits; the denominator may be
    /// divisible by `p`.
    pub fn from_rational(prime: u32, q: &BigRational, prec: u32) -> Self {
        if q.numer().is_zero() {
            return Self::exact_zero(prime);
        }
        let num = Self::from_bigint(prime, q.numer(), prec);
        let den = Self::from_bigint(prime, q.denom(), prec);
        num.checked_div(&den).expect("nonzero denominator")
    }

    pub fn one(prime: u32, prec: u32) -> Self {
        Self::from_i64(prime, 1, prec)
    }

    /// Uniform random value `p^v * u` with `v` drawn from `valuations` and a
    /// random unit with `prec` digits.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        prime: u32,
        valuations: std::ops::RangeInclusive<i64>,
        prec: u32,
    ) -> Self {
        let modulus = p_pow(prime, prec);
        let bits = modulus.bits();
        let unit = loop {
            let mut bytes = vec![0u8; (bits as usize).div_ceil(8) + 8];
            rng.fill(&mut bytes[..]);
            let u = BigUint::from_bytes_le(&bytes) % &*modulus;
            if !(&u % prime).is_zero() {
                break u;
            }
        };
        let valuation = rng.gen_range(valuations);
        Self {
            prime,
            repr: Repr::Value {
                valuation,
                unit,
                trusted: prec,
            },
        }
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    /// True for the exact zero and for zero at precision.
    pub fn is_zero(&self) -> bool {
        !matches!(self.repr, Repr::Value { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::ExactZero)
    }

    /// Valuation of a nonzero value.
    pub fn valuation(&self) -> Option<i64> {
        match self.repr {
            Repr::Value { valuation, .. } => Some(valuation),
            _ => None,
        }
    }

    /// Valuation for nonzero values, the floor for zero at precision, `None`
    /// for the exact zero.
    pub fn floor(&self) -> Option<i64> {
        match self.repr {
            Repr::ExactZero => None,
            Repr::ZeroAt { floor } => Some(floor),
            Repr::Value { valuation, .. } => Some(valuation),
        }
    }

    pub fn unit(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Value { unit, .. } => Some(unit),
            _ => None,
        }
    }

    /// Trusted relative digits; zero for both kinds of zero.
    pub fn trusted(&self) -> u32 {
        match self.repr {
            Repr::Value { trusted, .. } => trusted,
            _ => 0,
        }
    }

    /// The value is known modulo `p^abs_precision`; `None` means exact.
    pub fn abs_precision(&self) -> Option<i64> {
        match self.repr {
            Repr::ExactZero => None,
            Repr::ZeroAt { floor } => Some(floor),
            Repr::Value {
                valuation, trusted, ..
            } => Some(valuation + trusted as i64),
        }
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        Ok(())
    }

    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self> {
        match op {
            ArithOp::Add => self.checked_add(other),
            ArithOp::Sub => self.checked_sub(other),
            ArithOp::Mul => self.checked_mul(other),
            ArithOp::Div => self.checked_div(other),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let p = self.prime;
        Ok(match (&self.repr, &other.repr) {
            (Repr::ExactZero, _) => other.clone(),
            (_, Repr::ExactZero) => self.clone(),
            (Repr::ZeroAt { floor: f }, Repr::ZeroAt { floor: g }) => Self::zero_at(p, *f.min(g)),
            (Repr::ZeroAt { floor }, Repr::Value { .. }) => other.cap_abs(*floor),
            (Repr::Value { .. }, Repr::ZeroAt { floor }) => self.cap_abs(*floor),
            (
                Repr::Value {
                    valuation: va,
                    unit: ua,
                    trusted: ta,
                },
                Repr::Value {
                    valuation: vb,
                    unit: ub,
                    trusted: tb,
                },
            ) => {
                let abs = (va + *ta as i64).min(vb + *tb as i64);
                let low = *va.min(vb);
                let rel = (abs - low) as u32;
                let modulus = p_pow(p, rel);
                let lift = |v: i64, u: &BigUint| -> BigUint {
                    let shift = (v - low) as u32;
                    if shift >= rel {
                        BigUint::zero()
                    } else if shift == 0 {
                        u.clone()
                    } else {
                        u * &*p_pow(p, shift)
                    }
                };
                let sum = lift(*va, ua) + lift(*vb, ub);
                Self::from_residue(p, low, sum % &*modulus, rel)
            }
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let p = self.prime;
        Ok(match (&self.repr, &other.repr) {
            (Repr::ExactZero, _) | (_, Repr::ExactZero) => Self::exact_zero(p),
            (Repr::ZeroAt { floor: f }, Repr::ZeroAt { floor: g }) => Self::zero_at(p, f + g),
            (Repr::ZeroAt { floor }, Repr::Value { valuation, .. })
            | (Repr::Value { valuation, .. }, Repr::ZeroAt { floor }) => {
                Self::zero_at(p, floor + valuation)
            }
            (
                Repr::Value {
                    valuation: va,
                    unit: ua,
                    trusted: ta,
                },
                Repr::Value {
                    valuation: vb,
                    unit: ub,
                    trusted: tb,
                },
            ) => {
                let t = (*ta).min(*tb);
                let modulus = p_pow(p, t);
                let unit = (ua * ub) % &*modulus;
                Self {
                    prime: p,
                    repr: Repr::Value {
                        valuation: va + vb,
                        unit,
                        trusted: t,
                    },
                }
            }
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let p = self.prime;
        match (&self.repr, &other.repr) {
            (_, Repr::ExactZero) => Err(Error::DivisionByZero),
            (_, Repr::ZeroAt { floor }) => Err(Error::PrecisionExhausted(format!(
                "division by zero at precision {p}^{floor}"
            ))),
            (Repr::ExactZero, _) => Ok(Self::exact_zero(p)),
            (Repr::ZeroAt { floor }, Repr::Value { valuation, .. }) => {
                Ok(Self::zero_at(p, floor - valuation))
            }
            (
                Repr::Value {
                    valuation: va,
                    unit: ua,
                    trusted: ta,
                },
                Repr::Value {
                    valuation: vb,
                    unit: ub,
                    trusted: tb,
                },
            ) => {
                let t = (*ta).min(*tb);
                let modulus = p_pow(p, t);
                let inv = (ub % &*modulus)
                    .modinv(&modulus)
                    .expect("units are invertible");
                let unit = (ua * inv) % &*modulus;
                Ok(Self {
                    prime: p,
                    repr: Repr::Value {
                        valuation: va - vb,
                        unit,
                        trusted: t,
                    },
                })
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let one = match &self.repr {
            Repr::Value { trusted, .. } => Self::one(self.prime, *trusted),
            _ => return self.checked_div(self),
        };
        one.checked_div(self)
    }

    fn neg_ref(&self) -> Self {
        match &self.repr {
            Repr::Value {
                valuation,
                unit,
                trusted,
            } => {
                let modulus = p_pow(self.prime, *trusted);
                Self {
                    prime: self.prime,
                    repr: Repr::Value {
                        valuation: *valuation,
                        unit: &*modulus - unit,
                        trusted: *trusted,
                    },
                }
            }
            _ => self.clone(),
        }
    }

    /// `self^e`. For `e = 0` the result is `1` with this value's trusted count.
    pub fn pow(&self, e: u64) -> Self {
        let p = self.prime;
        if e == 0 {
            return Self::one(p, self.trusted().max(1));
        }
        match &self.repr {
            Repr::ExactZero => self.clone(),
            Repr::ZeroAt { floor } => Self::zero_at(p, floor * e as i64),
            Repr::Value {
                valuation,
                unit,
                trusted,
            } => {
                let modulus = p_pow(p, *trusted);
                Self {
                    prime: p,
                    repr: Repr::Value {
                        valuation: valuation * e as i64,
                        unit: unit.modpow(&BigUint::from(e), &modulus),
                        trusted: *trusted,
                    },
                }
            }
        }
    }

    /// Exact multiplication by the integer `k`.
    pub fn mul_int(&self, k: i64) -> Self {
        let p = self.prime;
        if k == 0 {
            return Self::exact_zero(p);
        }
        let vk = vp_u64(k.unsigned_abs(), p) as i64;
        match &self.repr {
            Repr::ExactZero => self.clone(),
            Repr::ZeroAt { floor } => Self::zero_at(p, floor + vk),
            Repr::Value {
                valuation,
                unit,
                trusted,
            } => {
                let modulus = p_pow(p, *trusted);
                let kunit = BigUint::from(k.unsigned_abs() / (p as u64).pow(vk as u32));
                let mut u = (unit * kunit) % &*modulus;
                if k < 0 {
                    u = &*modulus - u;
                }
                Self {
                    prime: p,
                    repr: Repr::Value {
                        valuation: valuation + vk,
                        unit: u,
                        trusted: *trusted,
                    },
                }
            }
        }
    }

    /// Exact multiplication by an arbitrary integer.
    pub fn mul_bigint(&self, k: &BigInt) -> Self {
        let p = self.prime;
        if k.is_zero() {
            return Self::exact_zero(p);
        }
        let (vk, kunit) = split_p(k.magnitude().clone(), p);
        match &self.repr {
            Repr::ExactZero => self.clone(),
            Repr::ZeroAt { floor } => Self::zero_at(p, floor + vk as i64),
            Repr::Value {
                valuation,
                unit,
                trusted,
            } => {
                let modulus = p_pow(p, *trusted);
                let mut u = (unit * kunit) % &*modulus;
                if k.is_negative() {
                    u = &*modulus - u;
                }
                Self {
                    prime: p,
                    repr: Repr::Value {
                        valuation: valuation + vk as i64,
                        unit: u,
                        trusted: *trusted,
                    },
                }
            }
        }
    }

    /// Exact division by the nonzero integer `k`.
    pub fn div_int(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Err(Error::DivisionByZero);
        }
        let p = self.prime;
        let vk = vp_u64(k.unsigned_abs(), p) as i64;
        Ok(match &self.repr {
            Repr::ExactZero => self.clone(),
            Repr::ZeroAt { floor } => Self::zero_at(p, floor - vk),
            Repr::Value {
                valuation,
                unit,
                trusted,
            } => {
                let modulus = p_pow(p, *trusted);
                let kunit = BigUint::from(k.unsigned_abs() / (p as u64).pow(vk as u32));
                let inv = (kunit % &*modulus).modinv(&modulus).expect("unit");
                let mut u = (unit * inv) % &*modulus;
                if k < 0 {
                    u = &*modulus - u;
                }
                Self {
                    prime: p,
                    repr: Repr::Value {
                        valuation: valuation - vk,
                        unit: u,
                        trusted: *trusted,
                    },
                }
            }
        })
    }

    /// Exact multiplication by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut out = self.clone();
        match &mut out.repr {
            Repr::ExactZero => {}
            Repr::ZeroAt { floor } => *floor += k,
            Repr::Value { valuation, .. } => *valuation += k,
        }
        out
    }

    /// Keeps at most `digits` relative digits (`digits >= 1`).
    pub fn truncate(&self, digits: u32) -> Self {
        assert!(digits >= 1);
        match &self.repr {
            Repr::Value {
                valuation,
                unit,
                trusted,
            } if *trusted > digits => Self {
                prime: self.prime,
                repr: Repr::Value {
                    valuation: *valuation,
                    unit: unit % &*p_pow(self.prime, digits),
                    trusted: digits,
                },
            },
            _ => self.clone(),
        }
    }

    /// Forgets everything at and beyond `p^abs`.
    pub fn cap_abs(&self, abs: i64) -> Self {
        let p = self.prime;
        match &self.repr {
            Repr::ExactZero => Self::zero_at(p, abs),
            Repr::ZeroAt { floor } => Self::zero_at(p, (*floor).min(abs)),
            Repr::Value {
                valuation,
                unit,
                trusted,
            } => {
                if *valuation >= abs {
                    Self::zero_at(p, abs)
                } else if valuation + *trusted as i64 <= abs {
                    self.clone()
                } else {
                    let t = (abs - valuation) as u32;
                    Self {
                        prime: p,
                        repr: Repr::Value {
                            valuation: *valuation,
                            unit: unit % &*p_pow(p, t),
                            trusted: t,
                        },
                    }
                }
            }
        }
    }

    /// The integral value reduced modulo `p^k`. Fails when the value is not
    /// integral or not known to `k` digits.
    pub fn residue_mod(&self, k: u32) -> Result<BigUint> {
        if let Some(abs) = self.abs_precision() {
            if abs < k as i64 {
                return Err(Error::PrecisionExhausted(format!(
                    "value known to {abs} digits, {k} requested"
                )));
            }
        }
        match &self.repr {
            Repr::Value {
                valuation, unit, ..
            } => {
                if *valuation < 0 {
                    return Err(Error::InvalidArgument("value is not integral".into()));
                }
                if *valuation >= k as i64 {
                    return Ok(BigUint::zero());
                }
                let modulus = p_pow(self.prime, k);
                Ok((unit * &*p_pow(self.prime, *valuation as u32)) % &*modulus)
            }
            _ => Ok(BigUint::zero()),
        }
    }

    /// Symmetric integer representative of an integral value modulo its
    /// absolute precision, mainly for readable output.
    pub fn signed_residue(&self) -> Option<BigInt> {
        let abs = self.abs_precision()?;
        if abs < 0 || self.valuation().is_some_and(|v| v < 0) {
            return None;
        }
        let r = BigInt::from(self.residue_mod(abs as u32).ok()?);
        let m = BigInt::from((*p_pow(self.prime, abs as u32)).clone());
        if &r * 2 > m {
            Some(r - m)
        } else {
            Some(r)
        }
    }

    /// True when `self - other` vanishes at the available precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.checked_sub(other)
            .map(|d| d.is_zero())
            .unwrap_or(false)
    }

    /// Parses the canonical text form for the given prime.
    pub fn parse(text: &str, prime: u32) -> Result<Self> {
        let text = text.trim();
        if text == "0" {
            return Ok(Self::exact_zero(prime));
        }
        let bad = || Error::Parse(format!("not a canonical p-adic scalar: {text:?}"));
        let (lhs, trusted) = text.split_once(" :: ").ok_or_else(bad)?;
        let (power, unit) = lhs.split_once(" * ").ok_or_else(bad)?;
        let (base, valuation) = power.split_once('^').ok_or_else(bad)?;
        let base: u32 = base.parse().map_err(|_| bad())?;
        if base != prime {
            return Err(Error::PrimeMismatch(base, prime));
        }
        let valuation: i64 = valuation.parse().map_err(|_| bad())?;
        let unit: BigUint = unit.parse().map_err(|_| bad())?;
        let trusted: u32 = trusted.parse().map_err(|_| bad())?;
        if unit.is_zero() {
            if trusted != 0 {
                return Err(bad());
            }
            return Ok(Self::zero_at(prime, valuation));
        }
        Self::from_parts(prime, valuation, unit, trusted)
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::ExactZero => write!(f, "0"),
            Repr::ZeroAt { floor } => write!(f, "{}^{} * 0 :: 0", self.prime, floor),
            Repr::Value {
                valuation,
                unit,
                trusted,
            } => {
                write!(f, "{}^{} * {} :: {}", self.prime, valuation, unit, trusted)
            }
        }
    }
}

impl Add for &PadicScalar {
    type Output = PadicScalar;
    fn add(self, rhs: Self) -> PadicScalar {
        self.checked_add(rhs).expect("prime mismatch")
    }
}

impl Sub for &PadicScalar {
    type Output = PadicScalar;
    fn sub(self, rhs: Self) -> PadicScalar {
        self.checked_sub(rhs).expect("prime mismatch")
    }
}

impl Mul for &PadicScalar {
    type Output = PadicScalar;
    fn mul(self, rhs: Self) -> PadicScalar {
        self.checked_mul(rhs).expect("prime mismatch")
    }
}

impl Neg for &PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        self.neg_ref()
    }
}

impl Neg for PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        self.neg_ref()
    }
}

/// Signed-digit helper used by tests and text output.
pub fn to_signed_string(x: &PadicScalar) -> String {
    match x.signed_residue() {
        Some(r) if r.abs() < BigInt::from(1_000_000_000_000i64) => r.to_string(),
        _ => x.to_string(),
    }
}
