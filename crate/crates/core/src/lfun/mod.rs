//! Dirichlet characters modulo `p`, `L(0, chi)`, Bernoulli numbers and the
//! Kubota-Leopoldt evaluator.

mod bernoulli;
mod character;
mod kubota;

use serde::Serialize;

pub use bernoulli::{bernoulli, BernoulliCache};
pub use character::{chi_value, enumerate_odd_nontrivial, l_at_zero, DirichletCharacter};
pub use kubota::{
    bernoulli_for, kubota_leopoldt, kubota_leopoldt_at, lp_derivative_at_zero, truncation_index,
};

use crate::padic::PadicScalar;

/// Everything the protocol computes for one odd character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterSummary {
    pub character: DirichletCharacter,
    pub phi: PadicScalar,
    pub l0: PadicScalar,
    pub lp_deriv: PadicScalar,
    /// `phi - U2 L0`, filled in once `U2` is known.
    pub phi_ren: Option<PadicScalar>,
    pub cp: Option<PadicScalar>,
}
