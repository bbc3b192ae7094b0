//! Tracked-precision arithmetic over Q_p and Q_p(zeta_p), first-order jets
//! and exact rationals.

mod cyclo;
mod floor;
mod jet;
mod precision;
mod rational;
mod scalar;
mod series;
mod text;

pub use cyclo::{CycloElement, CycloOp};
pub use floor::{InfraCheck, ResidualFloor};
pub use jet::Jet;
pub use precision::PrecisionPolicy;
pub use rational::{rational_from_str, rational_to_string, vp_rational, BigRational};
pub use scalar::{to_signed_string, ArithOp, PadicScalar};

pub(crate) use scalar::p_pow;

/// Deterministic primality test for the small moduli handled here.
pub fn is_odd_prime(n: u64) -> bool {
    if n < 3 || n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
