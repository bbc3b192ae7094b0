//! Arithmetic in Q_p(zeta_p) = Q_p[x]/(1 + x + ... + x^(p-1)).
//!
//! Elements are stored as `p - 1` scalar coordinates over the power basis
//! `1, zeta, ..., zeta^(p-2)`. Valuations are measured in the uniformizer
//! `pi = zeta - 1`, normalized so that `v(p) = 1`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::Zero;
use rand::Rng;

use super::scalar::{p_pow, PadicScalar};
use crate::error::{Error, Result};

/// Operations accepted by [`CycloElement::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycloOp {
    Add,
    Mul,
    Inv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloElement {
    prime: u32,
    coords: Vec<PadicScalar>,
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

impl CycloElement {
    pub fn from_coords(prime: u32, coords: Vec<PadicScalar>) -> Result<Self> {
        if coords.len() != (prime - 1) as usize {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates, got {}",
                prime - 1,
                coords.len()
            )));
        }
        if let Some(c) = coords.iter().find(|c| c.prime() != prime) {
            return Err(Error::PrimeMismatch(c.prime(), prime));
        }
        Ok(Self { prime, coords })
    }

    pub fn zero(prime: u32) -> Self {
        Self {
            prime,
            coords: vec![PadicScalar::exact_zero(prime); (prime - 1) as usize],
        }
    }

    pub fn from_scalar(x: &PadicScalar) -> Self {
        let mut out = Self::zero(x.prime());
        out.coords[0] = x.clone();
        out
    }

    pub fn one(prime: u32, prec: u32) -> Self {
        Self::from_scalar(&PadicScalar::one(prime, prec))
    }

    /// `zeta^k` for any integer `k`, with `prec` digits on its nonzero coordinates.
    pub fn zeta_pow(prime: u32, k: i64, prec: u32) -> Self {
        let k = k.rem_euclid(prime as i64) as usize;
        let n = (prime - 1) as usize;
        if k < n {
            let mut out = Self::zero(prime);
            out.coords[k] = PadicScalar::one(prime, prec);
            out
        } else {
            Self {
                prime,
                coords: vec![PadicScalar::from_i64(prime, -1, prec); n],
            }
        }
    }

    /// Random element with unit-or-better coordinates carrying `prec` digits.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, prime: u32, prec: u32) -> Self {
        let coords = (0..prime - 1)
            .map(|_| PadicScalar::random(rng, prime, 0..=1, prec))
            .collect();
        Self { prime, coords }
    }

    /// Random unit of Z_p[zeta]: its residue modulo pi is nonzero.
    pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, prime: u32, prec: u32) -> Self {
        loop {
            let x = Self::random(rng, prime, prec);
            let residue: BigUint = x
                .coords
                .iter()
                .map(|c| c.residue_mod(1).unwrap_or_default())
                .sum();
            if !(residue % prime).is_zero() {
                return x;
            }
        }
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn coords(&self) -> &[PadicScalar] {
        &self.coords
    }

    /// Coordinate on `1`.
    pub fn constant(&self) -> &PadicScalar {
        &self.coords[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(PadicScalar::is_zero)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coords.iter().all(PadicScalar::is_exact_zero)
    }

    /// All non-constant coordinates vanish at precision.
    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(PadicScalar::is_zero)
    }

    /// Smallest floor among the non-constant coordinates.
    pub fn nonrational_floor(&self) -> Option<i64> {
        self.coords[1..].iter().filter_map(PadicScalar::floor).min()
    }

    pub fn abs_precision(&self) -> Option<i64> {
        self.coords
            .iter()
            .filter_map(PadicScalar::abs_precision)
            .min()
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        Ok(())
    }

    pub fn arith(&self, other: Option<&Self>, op: CycloOp) -> Result<Self> {
        match (op, other) {
            (CycloOp::Add, Some(b)) => self.checked_add(b),
            (CycloOp::Mul, Some(b)) => self.checked_mul(b),
            (CycloOp::Inv, _) => self.inv(),
            _ => Err(Error::InvalidArgument(
                "binary operation needs two operands".into(),
            )),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<_>>()?;
        Ok(Self {
            prime: self.prime,
            coords,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            prime: self.prime,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &PadicScalar) -> Self {
        Self {
            prime: self.prime,
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Self {
            prime: self.prime,
            coords: self.coords.iter().map(|c| c.mul_int(k)).collect(),
        }
    }

    pub fn div_int(&self, k: i64) -> Result<Self> {
        let coords = self
            .coords
            .iter()
            .map(|c| c.div_int(k))
            .collect::<Result<_>>()?;
        Ok(Self {
            prime: self.prime,
            coords,
        })
    }

    pub fn checked_div_scalar(&self, k: &PadicScalar) -> Result<Self> {
        let coords = self
            .coords
            .iter()
            .map(|c| c.checked_div(k))
            .collect::<Result<_>>()?;
        Ok(Self {
            prime: self.prime,
            coords,
        })
    }

    /// Exact multiplication by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            prime: self.prime,
            coords: self.coords.iter().map(|c| c.shift(k)).collect(),
        }
    }

    pub fn cap_abs(&self, abs: i64) -> Self {
        Self {
            prime: self.prime,
            coords: self.coords.iter().map(|c| c.cap_abs(abs)).collect(),
        }
    }

    pub fn truncate(&self, digits: u32) -> Self {
        Self {
            prime: self.prime,
            coords: self.coords.iter().map(|c| c.truncate(digits)).collect(),
        }
    }

    /// Common scaling used by multiplication: `(low, abs, integers)` with
    /// `self = p^low * sum(ints[i] zeta^i)` known modulo `p^abs`.
    fn integer_form(&self) -> Option<(i64, i64, Vec<BigUint>)> {
        let low = self.coords.iter().filter_map(PadicScalar::floor).min()?;
        let abs = self.abs_precision()?;
        let ints = self
            .coords
            .iter()
            .map(|c| match (c.valuation(), c.unit()) {
                (Some(v), Some(u)) => u * &*p_pow(self.prime, (v - low) as u32),
                _ => BigUint::zero(),
            })
            .collect();
        Some((low, abs, ints))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let p = self.prime;
        let (Some((ea, aa, xa)), Some((eb, ab, xb))) = (self.integer_form(), other.integer_form())
        else {
            return Ok(Self::zero(p));
        };
        let abs = (aa + eb).min(ab + ea);
        let base = ea + eb;
        let rel = (abs - base) as u32;
        let modulus = p_pow(p, rel);
        let n = p as usize;
        let xa: Vec<BigUint> = xa.into_iter().map(|x| x % &*modulus).collect();
        let xb: Vec<BigUint> = xb.into_iter().map(|x| x % &*modulus).collect();
        // product modulo x^p - 1, then fold the x^(p-1) coefficient away
        let mut acc = vec![BigUint::zero(); n];
        for (i, a) in xa.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in xb.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                acc[(i + j) % n] += a * b;
            }
        }
        let top = &acc[n - 1] % &*modulus;
        let coords = acc[..n - 1]
            .iter()
            .map(|c| {
                let r = (c % &*modulus + &*modulus - &top) % &*modulus;
                PadicScalar::from_residue(p, base, r, rel)
            })
            .collect();
        Ok(Self { prime: p, coords })
    }

    pub fn pow(&self, mut e: u64) -> Result<Self> {
        let prec = self
            .coords
            .iter()
            .map(PadicScalar::trusted)
            .max()
            .unwrap_or(1)
            .max(1);
        let mut result = Self::one(self.prime, prec);
        let mut base = self.clone();
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                result = if first {
                    base.clone()
                } else {
                    result.checked_mul(&base)?
                };
                first = false;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(result)
    }

    /// `self * zeta^j`, computed by rotating coordinates.
    pub fn mul_zeta_pow(&self, j: i64) -> Self {
        let p = self.prime as usize;
        let j = j.rem_euclid(p as i64) as usize;
        let mut ext = vec![PadicScalar::exact_zero(self.prime); p];
        for (i, c) in self.coords.iter().enumerate() {
            ext[(i + j) % p] = c.clone();
        }
        let top = ext[p - 1].clone();
        let coords = ext[..p - 1].iter().map(|c| c - &top).collect();
        Self {
            prime: self.prime,
            coords,
        }
    }

    /// Multiplicative inverse by solving `self * y = 1` over Q_p.
    pub fn inv(&self) -> Result<Self> {
        let p = self.prime;
        let n = (p - 1) as usize;
        let Some((low, abs, _)) = self.integer_form() else {
            return Err(Error::DivisionByZero);
        };
        if self.is_zero() {
            return Err(Error::PrecisionExhausted(
                "inverting an element that is zero at precision".into(),
            ));
        }
        // column j holds self * zeta^j
        let columns: Vec<Self> = (0..n).map(|j| self.mul_zeta_pow(j as i64)).collect();
        let mut m: Vec<Vec<PadicScalar>> = (0..n)
            .map(|r| (0..n).map(|c| columns[c].coords[r].clone()).collect())
            .collect();
        let rhs_prec = ((abs - low) + 1).max(1) as u32;
        let mut rhs: Vec<PadicScalar> = (0..n)
            .map(|r| {
                if r == 0 {
                    PadicScalar::one(p, rhs_prec)
                } else {
                    PadicScalar::exact_zero(p)
                }
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !m[r][col].is_zero())
                .min_by_key(|&r| (m[r][col].valuation().unwrap(), r))
                .ok_or_else(|| {
                    Error::PrecisionExhausted("multiplication matrix singular at precision".into())
                })?;
            m.swap(col, pivot);
            rhs.swap(col, pivot);
            for r in col + 1..n {
                if m[r][col].is_exact_zero() {
                    continue;
                }
                let factor = m[r][col].checked_div(&m[col][col])?;
                let (top, bottom) = m.split_at_mut(r);
                for (x, y) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                    *x = &*x - &(&factor * y);
                }
                let delta = &factor * &rhs[col];
                rhs[r] = &rhs[r] - &delta;
            }
        }
        let mut y = vec![PadicScalar::exact_zero(p); n];
        for r in (0..n).rev() {
            let mut acc = rhs[r].clone();
            for c in r + 1..n {
                acc = &acc - &(&m[r][c] * &y[c]);
            }
            y[r] = acc.checked_div(&m[r][r])?;
        }
        Ok(Self {
            prime: p,
            coords: y,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inv()?)
    }

    /// Coordinates over the basis `1, pi, ..., pi^(p-2)` with `pi = zeta - 1`.
    pub fn pi_basis(&self) -> Vec<PadicScalar> {
        let n = (self.prime - 1) as usize;
        (0..n)
            .map(|i| {
                let mut acc = PadicScalar::exact_zero(self.prime);
                for j in i..n {
                    if self.coords[j].is_exact_zero() {
                        continue;
                    }
                    let term = self.coords[j].mul_bigint(&binomial(j as u32, i as u32));
                    acc = &acc + &term;
                }
                acc
            })
            .collect()
    }

    /// Inverse of [`pi_basis`](Self::pi_basis).
    pub fn from_pi_basis(prime: u32, d: &[PadicScalar]) -> Result<Self> {
        let n = (prime - 1) as usize;
        if d.len() != n {
            return Err(Error::InvalidArgument(
                "wrong number of pi coordinates".into(),
            ));
        }
        let coords = (0..n)
            .map(|j| {
                let mut acc = PadicScalar::exact_zero(prime);
                for (i, di) in d.iter().enumerate().skip(j) {
                    if di.is_exact_zero() {
                        continue;
                    }
                    let sign = if (i - j) % 2 == 0 { 1 } else { -1 };
                    let term = di.mul_bigint(&(binomial(i as u32, j as u32) * sign));
                    acc = &acc + &term;
                }
                acc
            })
            .collect();
        Ok(Self { prime, coords })
    }

    /// Lower bound on the valuation: `min_i floor(d_i) + i/(p-1)` over the
    /// pi-basis coordinates. `None` for the exact zero.
    pub fn floor(&self) -> Option<Ratio<i64>> {
        let e = (self.prime - 1) as i64;
        self.pi_basis()
            .iter()
            .enumerate()
            .filter_map(|(i, d)| d.floor().map(|f| Ratio::new(f * e + i as i64, e)))
            .min()
    }

    /// Exact valuation, normalized so `v(p) = 1`. Fails when the minimum is
    /// not attained at a coordinate known to be nonzero.
    pub fn valuation(&self) -> Result<Ratio<i64>> {
        let e = (self.prime - 1) as i64;
        let best = self
            .pi_basis()
            .iter()
            .enumerate()
            .filter_map(|(i, d)| {
                d.floor()
                    .map(|f| (Ratio::new(f * e + i as i64, e), !d.is_zero()))
            })
            .min_by(|a, b| a.0.cmp(&b.0));
        match best {
            None => Err(Error::DivisionByZero),
            Some((v, true)) => Ok(v),
            Some((v, false)) => Err(Error::PrecisionExhausted(format!(
                "element is zero at precision (floor {v})"
            ))),
        }
    }

    /// True when `self - other` vanishes at precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.checked_sub(other)
            .map(|d| d.is_zero())
            .unwrap_or(false)
    }

    pub fn parse(text: &str, prime: u32) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("not a bracketed coordinate list: {text:?}")))?;
        let coords = inner
            .split(", ")
            .map(|c| PadicScalar::parse(c, prime))
            .collect::<Result<Vec<_>>>()?;
        Self::from_coords(prime, coords)
    }
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}
