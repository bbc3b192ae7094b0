//! The verification protocol: log tables, discrepancy scan, per-character
//! summaries, the constants solve and the renormalized ratio.

mod constants;
mod discrepancy;
mod report;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use constants::{
    chi_log_sum, fit_residual, independence_floor, phi, phi_paired, recover_cp, renorm_check,
    solve_constants, solve_constants_auto, RenormEntry, RenormRecord, Solution,
};
pub use discrepancy::{discrepancy_scan, nonrational_floor, DiscrepancyRecord};
pub use report::{
    CharacterEntry, ClaimEntry, ClaimSummary, ConfigEcho, ConstantsRecord, Conventions, CpEntry,
    FitEntry, LogTableDigest, Phase, Timings, VerificationReport, CSV_HEADER,
};

use crate::error::{Error, Result};
use crate::lfun::{
    bernoulli_for, enumerate_odd_nontrivial, kubota_leopoldt_at, l_at_zero, CharacterSummary,
    DirichletCharacter,
};
use crate::padic::{
    is_odd_prime, CycloElement, InfraCheck, Jet, PadicScalar, PrecisionPolicy, ResidualFloor,
};
use crate::special::{
    default_gamma_digits, dwork_pi, gauss_sum, gross_koblitz_check, iwasawa_log, select_convention,
    GaussConvention, LogTable, TeichmullerTable, DEFAULT_COST_LIMIT,
};

pub const DEFAULT_DIGITS: u32 = 100;
pub const DEFAULT_SEED: u64 = 0x5eed;
/// Largest prime accepted without `skip_gamma_check`.
pub const MAX_CHECKED_PRIME: u32 = 97;

pub const LP_DERIVATIVE_MEANING: &str = "L'_p(0, chi) := d/ds L_p(s, chi*omega) at s = 0";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProtocolConfig {
    pub prime: u32,
    pub target_digits: u32,
    /// Defaults to the minimum guard.
    pub guard: Option<u32>,
    /// Defaults to [`default_gamma_digits`].
    pub gamma_digits: Option<u32>,
    pub strict: bool,
    /// `None` walks the retry order.
    pub convention: Option<GaussConvention>,
    pub seed: u64,
    pub skip_gamma_check: bool,
    pub record_timings: bool,
    pub cost_limit: u64,
}

impl ProtocolConfig {
    pub fn new(prime: u32, target_digits: u32) -> Self {
        Self {
            prime,
            target_digits,
            guard: None,
            gamma_digits: None,
            strict: false,
            convention: None,
            seed: DEFAULT_SEED,
            skip_gamma_check: false,
            record_timings: false,
            cost_limit: DEFAULT_COST_LIMIT,
        }
    }

    pub fn policy(&self) -> Result<PrecisionPolicy> {
        self.validate()?;
        match self.guard {
            Some(g) => PrecisionPolicy::with_guard(self.prime, self.target_digits, g),
            None => PrecisionPolicy::new(self.prime, self.target_digits),
        }
    }

    pub fn gamma_digits(&self) -> u32 {
        self.gamma_digits
            .unwrap_or_else(|| default_gamma_digits(self.prime))
    }

    pub fn validate(&self) -> Result<()> {
        if self.prime == 2 {
            return Err(Error::OutOfScope("p = 2 is not treated".into()));
        }
        if !is_odd_prime(self.prime as u64) {
            return Err(Error::InvalidPrime(self.prime as u64));
        }
        if self.prime > MAX_CHECKED_PRIME && !self.skip_gamma_check {
            return Err(Error::OutOfScope(format!(
                "p = {} exceeds {MAX_CHECKED_PRIME}; pass --skip-gamma-check to run without Gamma_p cross-checks",
                self.prime
            )));
        }
        if self.target_digits == 0 {
            return Err(Error::InvalidArgument("target digits must be >= 1".into()));
        }
        if self.gamma_digits == Some(0) {
            return Err(Error::InvalidArgument("gamma digits must be >= 1".into()));
        }
        if let Some(GaussConvention::Reembed(c)) = self.convention {
            if c % self.prime == 0 || c >= self.prime {
                return Err(Error::InvalidArgument(format!(
                    "re-embedding {c} must lie in 2..{}",
                    self.prime - 1
                )));
            }
        }
        Ok(())
    }
}

struct Clock {
    enabled: bool,
    last: Instant,
    phases: Vec<Phase>,
}

impl Clock {
    fn new(enabled: bool) -> Self {
        Self {
            enabled,
            last: Instant::now(),
            phases: Vec::new(),
        }
    }

    fn lap(&mut self, name: &str) {
        if self.enabled {
            let now = Instant::now();
            let millis = (now - self.last).as_secs_f64() * 1000.0;
            self.phases.push(Phase {
                name: name.to_string(),
                millis,
            });
            self.last = now;
        }
    }
}

fn worst<I: IntoIterator<Item = ResidualFloor>>(it: I) -> ResidualFloor {
    it.into_iter()
        .fold(ResidualFloor::exact_zero(), ResidualFloor::min)
}

fn teichmuller_checks(teich: &TeichmullerTable, policy: &PrecisionPolicy) -> Vec<InfraCheck> {
    let p = policy.prime() as i64;
    let w = policy.working();
    let one = PadicScalar::one(p as u32, w);
    let mut roots = true;
    let mut mult = true;
    for u in 1..p {
        let x = teich.omega(u);
        roots &= x.pow(p as u64 - 1).agrees_with(&one)
            && x.residue_mod(1).ok() == Some(num_bigint::BigUint::from(u as u64));
        for v in 1..p {
            mult &= (x * teich.omega(v)).agrees_with(teich.omega(u * v % p));
        }
    }
    vec![
        InfraCheck::flag("omega(u)^(p-1) = 1 and omega(u) = u mod p", roots),
        InfraCheck::flag("omega(u) omega(v) = omega(uv)", mult),
    ]
}

fn log_homomorphism_check(
    policy: &PrecisionPolicy,
    seed: u64,
    threshold: i64,
) -> Result<InfraCheck> {
    let p = policy.prime();
    let w = policy.working();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut floors = Vec::new();
    for _ in 0..8 {
        let x = CycloElement::random_unit(&mut rng, p, w);
        let y = CycloElement::random_unit(&mut rng, p, w);
        let lhs = iwasawa_log(&x.checked_mul(&y)?, policy)?;
        let rhs = iwasawa_log(&x, policy)?.checked_add(&iwasawa_log(&y, policy)?)?;
        floors.push(ResidualFloor::of_cyclo(&lhs.checked_sub(&rhs)?));
    }
    Ok(InfraCheck::new(
        "log(xy) = log x + log y on seeded random units",
        worst(floors),
        threshold,
    ))
}

struct CharacterWork {
    summary: CharacterSummary,
    lp: Jet,
    log_sum: CycloElement,
    cross_oracle: ResidualFloor,
    paired: ResidualFloor,
}

pub fn run_protocol(config: &ProtocolConfig) -> Result<VerificationReport> {
    let policy = config.policy()?;
    let p = policy.prime();
    let n = policy.target();
    let threshold = policy.claim_threshold();
    let m = config.gamma_digits();
    let mut clock = Clock::new(config.record_timings);
    let mut infra = Vec::new();

    // branch fixing: Teichmuller lifts and the Dwork uniformizer
    let teich = TeichmullerTable::new(&policy)?;
    infra.extend(teichmuller_checks(&teich, &policy));
    let dwork = dwork_pi(&policy)?;
    infra.push(InfraCheck::new(
        "pi^(p-1) + p = 0",
        ResidualFloor::of_cyclo(&dwork.defect()?),
        threshold,
    ));
    infra.push(InfraCheck::new(
        "log pi = 0",
        ResidualFloor::of_cyclo(&dwork.log(&policy)?),
        threshold,
    ));
    infra.push(log_homomorphism_check(&policy, config.seed, threshold)?);
    clock.lap("branch");

    let (selected, attempts) = if config.skip_gamma_check {
        (None, Vec::new())
    } else {
        select_convention(
            config.convention,
            m,
            &policy,
            &teich,
            &dwork,
            config.cost_limit,
        )?
    };
    if !config.skip_gamma_check {
        infra.push(InfraCheck::flag(
            "multiplicative Gross-Koblitz validates under some convention",
            selected.is_some(),
        ));
    }
    let convention = selected
        .or(config.convention)
        .unwrap_or(GaussConvention::Standard);
    let stickelberger = (1..p - 1).all(|a| {
        gauss_sum(a, convention, &teich)
            .and_then(|g| g.valuation())
            .is_ok_and(|v| v == num_rational::Ratio::new(a as i64, p as i64 - 1))
    });
    infra.push(InfraCheck::flag(
        "v(tau(omega^-a)) = a/(p-1) for a <= p-2",
        stickelberger,
    ));

    let table = LogTable::build(&policy, &teich, convention)?;
    infra.extend(table.invariants(threshold)?);
    let gross_koblitz = if config.skip_gamma_check {
        Vec::new()
    } else {
        (1..p)
            .into_par_iter()
            .map(|a| {
                gross_koblitz_check(
                    a,
                    m,
                    table.v(a),
                    convention,
                    &policy,
                    &teich,
                    &dwork,
                    config.cost_limit,
                )
            })
            .collect::<Result<Vec<_>>>()?
    };
    if !gross_koblitz.is_empty() {
        let gm = gross_koblitz[0].gamma.trusted() as i64;
        infra.push(InfraCheck::new(
            "v(a) = log Gamma_p(a/(p-1)) to M digits",
            worst(gross_koblitz.iter().map(|c| c.log_level)),
            gm,
        ));
        infra.push(InfraCheck::new(
            "tau(omega^-a) + pi^a Gamma_p(a/(p-1)) = 0 to M digits, a <= p-2",
            worst(gross_koblitz.iter().filter_map(|c| c.multiplicative)),
            gm,
        ));
    }
    clock.lap("log_table");

    let records = discrepancy_scan(&table)?;
    infra.push(InfraCheck::new(
        "r(1) = 0",
        records[0].residual_floor,
        threshold,
    ));
    infra.push(InfraCheck::new(
        "delta(a) - (v(a) - w(a)) + r(a) = 0",
        worst(records.iter().map(|r| r.delta_consistency)),
        threshold,
    ));
    clock.lap("discrepancy");

    let bern = bernoulli_for(p, policy.working());
    let characters = enumerate_odd_nontrivial(p as u64)?;
    let work = characters
        .par_iter()
        .map(|chi| character_work(chi, &table, &teich, &bern, &policy))
        .collect::<Result<Vec<_>>>()?;
    infra.push(InfraCheck::new(
        "L_p(0, chi omega) = L(0, chi)",
        worst(work.iter().map(|w| w.cross_oracle)),
        threshold,
    ));
    infra.push(InfraCheck::new(
        "Phi recomputed through v(a) = -v(p-1-a)",
        worst(work.iter().map(|w| w.paired)),
        threshold,
    ));
    clock.lap("characters");

    let mut summaries: Vec<CharacterSummary> = work.iter().map(|w| w.summary.clone()).collect();
    let mut claims = Vec::new();
    for r in &records[1..] {
        claims.push(ClaimEntry::new(
            format!("r({}) = 0", r.a),
            r.residual_floor,
            threshold,
        ));
    }
    let (constants, renorm) = if summaries.len() < 2 {
        (None, None)
    } else {
        match solve_constants_auto(&summaries) {
            Err(Error::SingularSystem(_)) => {
                claims.push(ClaimEntry::flag("2x2 system is solvable", false));
                (None, None)
            }
            Err(e) => return Err(e),
            Ok(sol) => {
                let record = constants_record(
                    &sol,
                    &summaries,
                    &work,
                    &table,
                    &policy,
                    &mut claims,
                    threshold,
                )?;
                let renorm = renorm_check(&summaries, &sol.u1, &sol.u2)?;
                claims.push(ClaimEntry::new(
                    "Phi^ren / L' constant in chi",
                    renorm.constancy_floor,
                    threshold,
                ));
                for (s, e) in summaries.iter_mut().zip(&renorm.entries) {
                    s.phi_ren = Some(e.phi_ren.clone());
                }
                (Some(record), Some(renorm))
            }
        }
    };
    for (s, w) in summaries.iter_mut().zip(&work) {
        if let Some(c) = &constants {
            s.cp =
                c.cp.iter()
                    .find(|e| e.character == w.summary.character.exponent)
                    .map(|e| e.cp.clone());
        }
    }
    clock.lap("constants");

    let character_entries = summaries
        .iter()
        .zip(&work)
        .map(|(s, w)| CharacterEntry::publish(s, &w.lp, &w.log_sum, n))
        .collect();

    Ok(VerificationReport {
        config: ConfigEcho {
            p,
            target_digits: n,
            guard_digits: policy.guard(),
            working_digits: policy.working(),
            gamma_digits: m,
            strict: config.strict,
            convention: config
                .convention
                .map_or("auto".to_string(), |c| c.to_string()),
            seed: config.seed,
            skip_gamma_check: config.skip_gamma_check,
            num_odd_chi: characters.len(),
        },
        conventions: Conventions::new(convention, selected.is_some(), attempts),
        log_table: LogTableDigest::publish(&table, gross_koblitz, n),
        discrepancy: records
            .into_iter()
            .map(|r| report::publish_record(r, n))
            .collect(),
        characters: character_entries,
        constants: constants.map(|c| c.publish(n)),
        renorm: renorm.map(|r| report::publish_renorm(r, n)),
        infra_checks: infra,
        claims: ClaimSummary::new(threshold, claims),
        timings: Timings {
            recorded: config.record_timings,
            phases: clock.phases,
        },
    })
}

fn character_work(
    chi: &DirichletCharacter,
    table: &LogTable,
    teich: &TeichmullerTable,
    bern: &crate::lfun::BernoulliCache,
    policy: &PrecisionPolicy,
) -> Result<CharacterWork> {
    let p = policy.prime();
    let phi_value = phi(chi, table, teich)?;
    let paired = ResidualFloor::of_scalar(&phi_value.checked_sub(&phi_paired(chi, table, teich)?)?);
    let l0 = l_at_zero(chi, teich, policy)?;
    let s = Jet::variable(PadicScalar::exact_zero(p), policy.working());
    let lp = kubota_leopoldt_at(chi, &s, teich, bern, policy)?;
    let cross_oracle = ResidualFloor::of_scalar(&lp.value.checked_sub(&l0)?);
    let log_sum = chi_log_sum(chi, table, teich)?;
    Ok(CharacterWork {
        summary: CharacterSummary {
            character: *chi,
            phi: phi_value,
            l0,
            lp_deriv: lp.deriv.clone(),
            phi_ren: None,
            cp: None,
        },
        lp,
        log_sum,
        cross_oracle,
        paired,
    })
}

fn constants_record(
    sol: &Solution,
    summaries: &[CharacterSummary],
    work: &[CharacterWork],
    table: &LogTable,
    policy: &PrecisionPolicy,
    claims: &mut Vec<ClaimEntry>,
    threshold: i64,
) -> Result<ConstantsRecord> {
    let p = policy.prime() as i64;
    let mut fit = Vec::new();
    for s in summaries {
        let held_out = !sol.pair.contains(&s.character.exponent);
        let floor = ResidualFloor::of_scalar(&fit_residual(s, &sol.u1, &sol.u2)?);
        if held_out {
            claims.push(ClaimEntry::new(
                format!("fit residual on {}", s.character),
                floor,
                threshold,
            ));
        }
        fit.push(FitEntry {
            character: s.character.exponent,
            held_out,
            floor,
        });
    }
    let held: Vec<_> = fit.iter().filter(|f| f.held_out).map(|f| f.floor).collect();
    let fit_floor = if held.is_empty() {
        None
    } else {
        Some(worst(held))
    };

    let u2_check = ResidualFloor::of_scalar(&sol.u2.checked_add(&table.v(1).mul_int(p))?);
    claims.push(ClaimEntry::new("U2 + p v(1) = 0", u2_check, threshold));

    let mut cp = Vec::new();
    for (s, w) in summaries.iter().zip(work) {
        let (value, nonrational) = recover_cp(&w.log_sum, &s.lp_deriv)?;
        let u1_check = ResidualFloor::of_scalar(&sol.u1.checked_add(&value.mul_int(1 - p))?);
        cp.push(CpEntry {
            character: s.character.exponent,
            cp: value,
            nonrational_floor: nonrational,
            u1_check_floor: u1_check,
        });
    }
    let values: Vec<_> = cp.iter().map(|c| c.cp.clone()).collect();
    let cp_independence = independence_floor(&values)?;
    claims.push(ClaimEntry::new(
        "C_p independent of chi",
        cp_independence,
        threshold,
    ));
    let cp_rational = worst(cp.iter().map(|c| c.nonrational_floor));
    claims.push(ClaimEntry::new(
        "sum_a chi(a) L_a lies in Q_p",
        cp_rational,
        threshold,
    ));
    let u1_check = worst(cp.iter().map(|c| c.u1_check_floor));
    claims.push(ClaimEntry::new("U1 + (1-p) C_p = 0", u1_check, threshold));

    Ok(ConstantsRecord {
        u1: sol.u1.clone(),
        u2: sol.u2.clone(),
        source_characters: sol.pair,
        det_valuation: sol.det_valuation,
        fit,
        fit_floor,
        u2_check_floor: u2_check,
        cp,
        cp_independence_floor: cp_independence,
        u1_check_floor: u1_check,
    })
}
