use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Requested output digits `N`, guard digits `G` and working digits `W = N + G`.
///
/// Every computation runs at `W` digits; published values are cut back to
/// at most `N` relative digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    prime: u32,
    target: u32,
    guard: u32,
}

impl PrecisionPolicy {
    /// Smallest admissible guard for `(p, N)`: `10 + ceil(N / (p - 1))`.
    pub fn min_guard(prime: u32, target: u32) -> u32 {
        10 + target.div_ceil(prime - 1)
    }

    /// Policy with the minimal guard.
    pub fn new(prime: u32, target: u32) -> Result<Self> {
        Self::with_guard(prime, target, Self::min_guard(prime, target))
    }

    pub fn with_guard(prime: u32, target: u32, guard: u32) -> Result<Self> {
        if !super::is_odd_prime(prime as u64) {
            return Err(Error::InvalidPrime(prime as u64));
        }
        if target == 0 {
            return Err(Error::InvalidArgument("target digits must be >= 1".into()));
        }
        let min = Self::min_guard(prime, target);
        if guard < min {
            return Err(Error::InvalidArgument(format!(
                "guard {guard} below the minimum {min} for p={prime}, N={target}"
            )));
        }
        Ok(Self {
            prime,
            target,
            guard,
        })
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn target(&self) -> u32 {
        self.target
    }

    pub fn guard(&self) -> u32 {
        self.guard
    }

    pub fn working(&self) -> u32 {
        self.target + self.guard
    }

    /// Floor a measured claim residual must reach to count as vanishing: `N - G`.
    pub fn claim_threshold(&self) -> i64 {
        self.target as i64 - self.guard as i64
    }

    /// Same policy with the working precision raised by `extra` guard digits.
    pub fn widened(&self, extra: u32) -> Self {
        Self {
            guard: self.guard + extra,
            ..*self
        }
    }
}
