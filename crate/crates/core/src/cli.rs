//! Command-line front end. [`run`] returns the process exit code.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::engine::{
    run_protocol, ProtocolConfig, VerificationReport, CSV_HEADER, DEFAULT_DIGITS, DEFAULT_SEED,
};
use crate::error::{Error, Result};
use crate::lfun::{bernoulli_for, kubota_leopoldt, DirichletCharacter};
use crate::padic::{rational_to_string, to_signed_string, BigRational, PrecisionPolicy};
use crate::special::{
    gamma_at_ratio, gauss_sum, GaussConvention, TeichmullerTable, DEFAULT_COST_LIMIT,
};

#[derive(Parser, Debug)]
#[command(
    name = "padic-gk",
    version,
    about = "p-adic Gauss sums, Gamma_p and L-functions: residual reports"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Target p-adic digits N
    #[arg(short = 'N', long = "digits", global = true, env = "PADIC_GK_DIGITS", default_value_t = DEFAULT_DIGITS)]
    pub digits: u32,
    /// Digits M for the Gamma_p cross-checks
    #[arg(short = 'M', long = "gamma-digits", global = true)]
    pub gamma_digits: Option<u32>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write output here instead of stdout
    #[arg(short = 'o', long, global = true)]
    pub output: Option<PathBuf>,
    /// Exit 3 when a measured claim falls below N - G digits
    #[arg(long, global = true)]
    pub strict: bool,
    /// auto, standard, conjugate or reembed:<c>
    #[arg(long, global = true, default_value = "auto")]
    pub convention: String,
    #[arg(long, global = true, env = "PADIC_GK_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Allow p > 97 by skipping the Gamma_p cross-checks
    #[arg(long, global = true)]
    pub skip_gamma_check: bool,
    /// Record wall-clock phase timings in the report
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the full protocol for one prime
    Verify {
        #[arg(short = 'p')]
        p: u32,
    },
    /// Gauss sum tau(omega^-a) and its valuation
    Gauss {
        #[arg(short = 'p')]
        p: u32,
        #[arg(short = 'a')]
        a: u32,
    },
    /// Morita Gamma_p(num/den)
    Gamma {
        #[arg(short = 'p')]
        p: u32,
        #[arg(long, allow_negative_numbers = true)]
        num: i64,
        #[arg(long)]
        den: i64,
    },
    /// (L_p(0, chi omega), L_p'(0, chi omega)) for chi = omega^k
    Lfun {
        #[arg(short = 'p')]
        p: u32,
        #[arg(short = 'k')]
        k: u32,
    },
    /// Recovered constants for one prime
    Constants {
        #[arg(short = 'p')]
        p: u32,
    },
    /// One CSV row per prime
    Table {
        #[arg(short = 'p', value_delimiter = ',', required = true)]
        p: Vec<u32>,
    },
}

fn parse_convention(s: &str) -> Result<Option<GaussConvention>> {
    if s == "auto" {
        Ok(None)
    } else {
        s.parse().map(Some)
    }
}

fn protocol_config(p: u32, c: &Common) -> Result<ProtocolConfig> {
    let mut cfg = ProtocolConfig::new(p, c.digits);
    cfg.gamma_digits = c.gamma_digits;
    cfg.strict = c.strict;
    cfg.convention = parse_convention(&c.convention)?;
    cfg.seed = c.seed;
    cfg.skip_gamma_check = c.skip_gamma_check;
    cfg.record_timings = c.timings;
    cfg.validate()?;
    Ok(cfg)
}

fn check_prime(p: u32, c: &Common) -> Result<PrecisionPolicy> {
    protocol_config(p, c)?.policy()
}

fn json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("serializable") + "\n"
}

#[derive(Serialize)]
struct GaussOut {
    p: u32,
    a: u32,
    convention: GaussConvention,
    value: String,
    /// Small signed form when the sum lies in Q_p.
    rational_value: Option<String>,
    valuation: String,
}

#[derive(Serialize)]
struct GammaOut {
    p: u32,
    num: i64,
    den: i64,
    gamma_digits: u32,
    value: String,
}

#[derive(Serialize)]
struct LfunOut {
    p: u32,
    k: u32,
    meaning: &'static str,
    value: String,
    deriv: String,
}

#[derive(Serialize)]
struct TableRow {
    p: u32,
    precision: u32,
    num_odd_chi: usize,
    #[serde(rename = "U1")]
    u1: Option<String>,
    #[serde(rename = "U2")]
    u2: Option<String>,
    #[serde(rename = "U2_check_floor")]
    u2_check_floor: Option<String>,
    fit_floor: Option<String>,
    #[serde(rename = "Cp_independence_floor")]
    cp_independence_floor: Option<String>,
}

impl TableRow {
    fn from_report(r: &VerificationReport) -> Self {
        let c = r.constants.as_ref();
        let floor = |f: Option<crate::padic::ResidualFloor>| {
            f.filter(|f| f.digits.is_some())
                .map(|f| f.whole_digits().to_string())
        };
        Self {
            p: r.config.p,
            precision: r.config.target_digits,
            num_odd_chi: r.config.num_odd_chi,
            u1: c.map(|c| c.u1.to_string()),
            u2: c.map(|c| c.u2.to_string()),
            u2_check_floor: floor(c.map(|c| c.u2_check_floor)),
            fit_floor: floor(c.and_then(|c| c.fit_floor)),
            cp_independence_floor: floor(c.map(|c| c.cp_independence_floor)),
        }
    }
}

fn combine_exit(codes: impl Iterator<Item = i32>) -> i32 {
    codes.fold(0, |acc, c| match (acc, c) {
        (2, _) | (_, 2) => 2,
        (3, _) | (_, 3) => 3,
        _ => 0,
    })
}

/// Executes a parsed invocation; returns `(output, exit code)`.
pub fn execute(cli: &Cli) -> Result<(String, i32)> {
    let c = &cli.common;
    match &cli.command {
        Command::Verify { p } => {
            let report = run_protocol(&protocol_config(*p, c)?)?;
            let out = match c.format.unwrap_or(Format::Json) {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
                Format::Text => report.to_text(),
            };
            Ok((out, report.exit_code()))
        }
        Command::Constants { p } => {
            let report = run_protocol(&protocol_config(*p, c)?)?;
            let out = match c.format.unwrap_or(Format::Json) {
                Format::Json => json(&report.constants),
                Format::Csv => report.to_csv(),
                Format::Text => match &report.constants {
                    None => "no constants: fewer than two odd characters\n".to_string(),
                    Some(k) => format!(
                        "U1 = {}\nU2 = {}\nsource characters: omega^{}, omega^{}\ndeterminant valuation: {}\nU2 + p v(1): {}\nC_p independence: {}\nU1 + (1-p) C_p: {}\n",
                        k.u1, k.u2, k.source_characters[0], k.source_characters[1], k.det_valuation,
                        k.u2_check_floor, k.cp_independence_floor, k.u1_check_floor
                    ),
                },
            };
            Ok((out, report.exit_code()))
        }
        Command::Table { p } => {
            let reports = p
                .iter()
                .map(|&q| run_protocol(&protocol_config(q, c)?))
                .collect::<Result<Vec<_>>>()?;
            let code = combine_exit(reports.iter().map(VerificationReport::exit_code));
            let out = match c.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut s = format!("{CSV_HEADER}\n");
                    for r in &reports {
                        s.push_str(&r.csv_row());
                        s.push('\n');
                    }
                    s
                }
                Format::Json => json(
                    &reports
                        .iter()
                        .map(TableRow::from_report)
                        .collect::<Vec<_>>(),
                ),
                Format::Text => reports
                    .iter()
                    .map(|r| r.to_text())
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            Ok((out, code))
        }
        Command::Gauss { p, a } => {
            let policy = check_prime(*p, c)?;
            let convention = parse_convention(&c.convention)?.unwrap_or(GaussConvention::Standard);
            let teich = TeichmullerTable::new(&policy)?;
            let tau = gauss_sum(*a, convention, &teich)?.truncate(policy.target());
            let v = tau.valuation()?;
            let out = GaussOut {
                p: *p,
                a: *a,
                convention,
                value: tau.to_string(),
                rational_value: tau.is_rational().then(|| to_signed_string(tau.constant())),
                valuation: rational_to_string(&BigRational::new(
                    (*v.numer()).into(),
                    (*v.denom()).into(),
                )),
            };
            let text = match c.format.unwrap_or(Format::Text) {
                Format::Json => json(&out),
                Format::Csv => format!(
                    "p,a,convention,value,valuation\n{},{},{},{},{}\n",
                    out.p, out.a, out.convention, out.value, out.valuation
                ),
                Format::Text => match &out.rational_value {
                    Some(r) => format!(
                        "tau(omega^-{a}) = {r}\n  = {}\nvaluation = {}\n",
                        out.value, out.valuation
                    ),
                    None => format!(
                        "tau(omega^-{a}) = {}\nvaluation = {}\n",
                        out.value, out.valuation
                    ),
                },
            };
            Ok((text, 0))
        }
        Command::Gamma { p, num, den } => {
            let policy = check_prime(*p, c)?;
            let m = c
                .gamma_digits
                .unwrap_or_else(|| crate::special::default_gamma_digits(*p));
            let g = gamma_at_ratio(*num, *den, m, &policy, DEFAULT_COST_LIMIT)?;
            let out = GammaOut {
                p: *p,
                num: *num,
                den: *den,
                gamma_digits: m,
                value: g.to_string(),
            };
            let text = match c.format.unwrap_or(Format::Text) {
                Format::Json => json(&out),
                Format::Csv => format!(
                    "p,num,den,M,value\n{},{},{},{},{}\n",
                    p, num, den, m, out.value
                ),
                Format::Text => format!("Gamma_{p}({num}/{den}) = {}\n", out.value),
            };
            Ok((text, 0))
        }
        Command::Lfun { p, k } => {
            let policy = check_prime(*p, c)?;
            let chi = DirichletCharacter::new(*p, *k as i64)?;
            if *k as u64 >= *p as u64 - 1 || !chi.is_odd() {
                return Err(Error::InvalidArgument(format!(
                    "k = {k} must be odd with 1 <= k <= {}",
                    p - 2
                )));
            }
            let teich = TeichmullerTable::new(&policy)?;
            let bern = bernoulli_for(*p, policy.working());
            let jet = kubota_leopoldt(&chi, &teich, &bern, &policy)?;
            let n = policy.target();
            let out = LfunOut {
                p: *p,
                k: *k,
                meaning: crate::engine::LP_DERIVATIVE_MEANING,
                value: jet.value.truncate(n).to_string(),
                deriv: jet.deriv.truncate(n).to_string(),
            };
            let text = match c.format.unwrap_or(Format::Text) {
                Format::Json => json(&out),
                Format::Csv => {
                    format!("p,k,value,deriv\n{},{},{},{}\n", p, k, out.value, out.deriv)
                }
                Format::Text => format!(
                    "L_p(0, omega^{}) = {}\nL_p'(0, omega^{}) = {}\n",
                    k + 1,
                    out.value,
                    k + 1,
                    out.deriv
                ),
            };
            Ok((text, 0))
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.common.output {
        Some(path) => fs::write(path, text).map_err(Error::from),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush().map_err(Error::from)
        }
    }
}

/// Parses `args` (including the program name), runs, and reports errors on
/// stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.common.threads {
        Some(0) => Err(Error::InvalidArgument("--threads must be >= 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))
            .and_then(|pool| pool.install(|| execute(&cli))),
        None => execute(&cli),
    };
    match result.and_then(|(text, code)| emit(&cli, &text).map(|_| code)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
