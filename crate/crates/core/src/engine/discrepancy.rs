use serde::Serialize;

use crate::error::Result;
use crate::padic::{CycloElement, ResidualFloor};
use crate::special::LogTable;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscrepancyRecord {
    pub a: u32,
    /// `r(a) = v(a) - a v(1) - (1-p)(L_a - L_1)`
    pub residual: CycloElement,
    /// `delta(a) = a v(1) + (2-p) L_a + (p-1) L_1`
    pub delta: CycloElement,
    pub residual_floor: ResidualFloor,
    /// Floor of the coordinate on `1`.
    pub rational_floor: ResidualFloor,
    /// Worst floor over the coordinates on `zeta, ..., zeta^(p-2)`.
    pub nonrational_floor: ResidualFloor,
    /// `(delta(a) - (v(a) - w(a))) + r(a)`, an arithmetic identity.
    pub delta_consistency: ResidualFloor,
}

pub fn nonrational_floor(x: &CycloElement) -> ResidualFloor {
    x.coords()[1..]
        .iter()
        .map(ResidualFloor::of_scalar)
        .fold(ResidualFloor::exact_zero(), ResidualFloor::min)
}

pub fn discrepancy_scan(table: &LogTable) -> Result<Vec<DiscrepancyRecord>> {
    let p = table.prime;
    let v1 = table.v(1);
    let l1 = table.L(1);
    (1..p)
        .map(|a| {
            let la = table.L(a);
            let va = CycloElement::from_scalar(table.v(a));
            let av1 = CycloElement::from_scalar(&v1.mul_int(a as i64));
            let residual = va
                .checked_sub(&av1)?
                .checked_sub(&la.checked_sub(l1)?.mul_int(1 - p as i64))?;
            let delta = av1
                .checked_add(&la.mul_int(2 - p as i64))?
                .checked_add(&l1.mul_int(p as i64 - 1))?;
            let v_minus_w = va.checked_sub(&table.w(a))?;
            let consistency = delta.checked_sub(&v_minus_w)?.checked_add(&residual)?;
            Ok(DiscrepancyRecord {
                a,
                residual_floor: ResidualFloor::of_cyclo(&residual),
                rational_floor: ResidualFloor::of_scalar(residual.constant()),
                nonrational_floor: nonrational_floor(&residual),
                delta_consistency: ResidualFloor::of_cyclo(&consistency),
                residual,
                delta,
            })
        })
        .collect()
}
