use std::fmt::Write as _;

use serde::Serialize;

use super::constants::{RenormEntry, RenormRecord};
use super::discrepancy::DiscrepancyRecord;
use super::LP_DERIVATIVE_MEANING;
use crate::lfun::CharacterSummary;
use crate::padic::{CycloElement, InfraCheck, Jet, PadicScalar, ResidualFloor};
use crate::special::{ConventionAttempt, GaussConvention, GrossKoblitzCheck, LogTable};

pub const CSV_HEADER: &str =
    "p,precision,num_odd_chi,U1,U2,U2_check_floor,fit_floor,Cp_independence_floor";

fn publish(x: &PadicScalar, n: u32) -> PadicScalar {
    x.truncate(n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    pub p: u32,
    pub target_digits: u32,
    pub guard_digits: u32,
    pub working_digits: u32,
    pub gamma_digits: u32,
    pub strict: bool,
    pub convention: String,
    pub seed: u64,
    pub skip_gamma_check: bool,
    pub num_odd_chi: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conventions {
    pub gauss_sum: GaussConvention,
    pub gauss_sum_validated: bool,
    pub attempts: Vec<ConventionAttempt>,
    pub log_branch: &'static str,
    pub gamma_argument: &'static str,
    pub multiplicative_gross_koblitz_range: &'static str,
    pub lp_derivative: &'static str,
    pub rational_part: &'static str,
    pub residual_floors: &'static str,
}

impl Conventions {
    pub fn new(
        gauss_sum: GaussConvention,
        validated: bool,
        attempts: Vec<ConventionAttempt>,
    ) -> Self {
        Self {
            gauss_sum,
            gauss_sum_validated: validated,
            attempts,
            log_branch: "log_p(p) = 0, log_p(root of unity) = 0",
            gamma_argument: "a/(p-1) realized as a * (p-1)^-1 mod p^M",
            multiplicative_gross_koblitz_range: "1 <= a <= p-2; a = p-1 is checked at log level only",
            lp_derivative: LP_DERIVATIVE_MEANING,
            rational_part: "coordinate on 1 in the basis 1, zeta, ..., zeta^(p-2)",
            residual_floors: "digits are valuations (v(p) = 1); zero_at_precision = false means the residual is nonzero with that valuation",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexedScalar {
    pub a: u32,
    pub value: PadicScalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexedCyclo {
    pub a: u32,
    pub value: CycloElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogTableDigest {
    pub v: Vec<IndexedScalar>,
    #[serde(rename = "L")]
    pub l: Vec<IndexedCyclo>,
    pub gross_koblitz: Vec<GrossKoblitzCheck>,
}

impl LogTableDigest {
    pub fn publish(table: &LogTable, gross_koblitz: Vec<GrossKoblitzCheck>, n: u32) -> Self {
        Self {
            v: (1..table.prime)
                .map(|a| IndexedScalar {
                    a,
                    value: publish(table.v(a), n),
                })
                .collect(),
            l: (1..table.prime)
                .map(|a| IndexedCyclo {
                    a,
                    value: table.L(a).truncate(n),
                })
                .collect(),
            gross_koblitz,
        }
    }
}

pub(super) fn publish_record(mut r: DiscrepancyRecord, n: u32) -> DiscrepancyRecord {
    r.residual = r.residual.truncate(n);
    r.delta = r.delta.truncate(n);
    r
}

pub(super) fn publish_renorm(r: RenormRecord, n: u32) -> RenormRecord {
    RenormRecord {
        entries: r
            .entries
            .into_iter()
            .map(|e| RenormEntry {
                phi_ren: publish(&e.phi_ren, n),
                ratio: publish(&e.ratio, n),
                ..e
            })
            .collect(),
        constancy_floor: r.constancy_floor,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterEntry {
    pub exponent: u32,
    pub label: String,
    pub phi: PadicScalar,
    pub l0: PadicScalar,
    pub lp_value: PadicScalar,
    pub lp_deriv: PadicScalar,
    pub phi_ren: Option<PadicScalar>,
    pub cp: Option<PadicScalar>,
    pub chi_log_sum: CycloElement,
}

impl CharacterEntry {
    pub fn publish(s: &CharacterSummary, lp: &Jet, log_sum: &CycloElement, n: u32) -> Self {
        Self {
            exponent: s.character.exponent,
            label: s.character.to_string(),
            phi: publish(&s.phi, n),
            l0: publish(&s.l0, n),
            lp_value: publish(&lp.value, n),
            lp_deriv: publish(&s.lp_deriv, n),
            phi_ren: s.phi_ren.as_ref().map(|x| publish(x, n)),
            cp: s.cp.as_ref().map(|x| publish(x, n)),
            chi_log_sum: log_sum.truncate(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FitEntry {
    pub character: u32,
    pub held_out: bool,
    pub floor: ResidualFloor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CpEntry {
    pub character: u32,
    pub cp: PadicScalar,
    /// Floor of the non-constant coordinates of `sum_a chi(a) L_a`.
    pub nonrational_floor: ResidualFloor,
    /// `U1 + (1-p) C_p(chi)`
    pub u1_check_floor: ResidualFloor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantsRecord {
    pub u1: PadicScalar,
    pub u2: PadicScalar,
    pub source_characters: [u32; 2],
    pub det_valuation: i64,
    pub fit: Vec<FitEntry>,
    /// Worst fit over characters outside the source pair.
    pub fit_floor: Option<ResidualFloor>,
    pub u2_check_floor: ResidualFloor,
    pub cp: Vec<CpEntry>,
    pub cp_independence_floor: ResidualFloor,
    pub u1_check_floor: ResidualFloor,
}

impl ConstantsRecord {
    pub fn publish(mut self, n: u32) -> Self {
        self.u1 = publish(&self.u1, n);
        self.u2 = publish(&self.u2, n);
        for c in &mut self.cp {
            c.cp = publish(&c.cp, n);
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimEntry {
    pub name: String,
    pub floor: ResidualFloor,
    pub meets_threshold: bool,
}

impl ClaimEntry {
    pub fn new(name: impl Into<String>, floor: ResidualFloor, threshold: i64) -> Self {
        Self {
            name: name.into(),
            floor,
            meets_threshold: floor.meets(threshold),
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        let c = InfraCheck::flag("", ok);
        Self {
            name: name.into(),
            floor: c.floor,
            meets_threshold: ok,
        }
    }
}

/// Measured floors of the identities under test, against `N - G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimSummary {
    pub threshold: i64,
    pub entries: Vec<ClaimEntry>,
    pub all_meet_threshold: bool,
}

impl ClaimSummary {
    pub fn new(threshold: i64, entries: Vec<ClaimEntry>) -> Self {
        let all_meet_threshold = entries.iter().all(|e| e.meets_threshold);
        Self {
            threshold,
            entries,
            all_meet_threshold,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Phase {
    pub name: String,
    pub millis: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timings {
    pub recorded: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub phases: Vec<Phase>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub config: ConfigEcho,
    pub conventions: Conventions,
    pub log_table: LogTableDigest,
    pub discrepancy: Vec<DiscrepancyRecord>,
    pub characters: Vec<CharacterEntry>,
    pub constants: Option<ConstantsRecord>,
    pub renorm: Option<RenormRecord>,
    pub infra_checks: Vec<InfraCheck>,
    pub claims: ClaimSummary,
    pub timings: Timings,
}

fn csv_floor(f: Option<ResidualFloor>) -> String {
    match f {
        Some(f) if f.digits.is_some() => f.whole_digits().to_string(),
        _ => String::new(),
    }
}

impl VerificationReport {
    pub fn infra_passed(&self) -> bool {
        self.infra_checks.iter().all(|c| c.passed)
    }

    /// 0 ok, 2 infrastructure failure, 3 strict claim failure.
    pub fn exit_code(&self) -> i32 {
        if !self.infra_passed() {
            2
        } else if self.config.strict && !self.claims.all_meet_threshold {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// One row under [`CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        let c = self.constants.as_ref();
        [
            self.config.p.to_string(),
            self.config.target_digits.to_string(),
            self.config.num_odd_chi.to_string(),
            c.map_or(String::new(), |c| c.u1.to_string()),
            c.map_or(String::new(), |c| c.u2.to_string()),
            csv_floor(c.map(|c| c.u2_check_floor)),
            csv_floor(c.and_then(|c| c.fit_floor)),
            csv_floor(c.map(|c| c.cp_independence_floor)),
        ]
        .join(",")
    }

    pub fn to_csv(&self) -> String {
        format!("{CSV_HEADER}\n{}\n", self.csv_row())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(
            out,
            "p = {}, N = {}, G = {}, W = {}, M = {}",
            c.p, c.target_digits, c.guard_digits, c.working_digits, c.gamma_digits
        );
        let _ = writeln!(
            out,
            "Gauss-sum convention: {} (validated: {})",
            self.conventions.gauss_sum, self.conventions.gauss_sum_validated
        );
        let _ = writeln!(out, "{}", LP_DERIVATIVE_MEANING);
        let _ = writeln!(out, "\ninfrastructure checks:");
        for ch in &self.infra_checks {
            let _ = writeln!(
                out,
                "  [{}] {} ({})",
                if ch.passed { "ok" } else { "FAIL" },
                ch.name,
                ch.floor
            );
        }
        let _ = writeln!(out, "\ndiscrepancy r(a):");
        for r in &self.discrepancy {
            let _ = writeln!(
                out,
                "  a = {}: {} (rational {}, non-rational {})",
                r.a, r.residual_floor, r.rational_floor, r.nonrational_floor
            );
        }
        let _ = writeln!(out, "\ncharacters:");
        for ch in &self.characters {
            let _ = writeln!(
                out,
                "  {}: Phi = {}\n      L0 = {}\n      L' = {}",
                ch.label, ch.phi, ch.l0, ch.lp_deriv
            );
        }
        if let Some(k) = &self.constants {
            let _ = writeln!(
                out,
                "\nU1 = {}\nU2 = {}\nfrom omega^{} and omega^{}, det valuation {}",
                k.u1, k.u2, k.source_characters[0], k.source_characters[1], k.det_valuation
            );
        }
        let _ = writeln!(
            out,
            "\nmeasured claims (threshold {} digits):",
            self.claims.threshold
        );
        for e in &self.claims.entries {
            let _ = writeln!(
                out,
                "  [{}] {} ({})",
                if e.meets_threshold { "meets" } else { "below" },
                e.name,
                e.floor
            );
        }
        out
    }
}
