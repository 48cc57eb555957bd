//! `nilgamma`: command-line front end to the gamma-factor explorer.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 internal consistency
//! failure, 4 chain disagreement in `counterexample --strict`.

use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use nilgamma::chars::{self, completeness_demo, AddChar, MultChar};
use nilgamma::explorer::{run_blocks, run_counterexample, BlocksConfig};
use nilgamma::{
    arith, ArtinAlg, CompareMode, CycField, Error, FqField, GammaContext, InertialSupport, Ring,
    RingElem, TameCharData,
};

const EXIT_INVALID: u8 = 2;
const EXIT_INTERNAL: u8 = 3;
const EXIT_CHAIN: u8 = 4;

#[derive(Parser)]
#[command(
    name = "nilgamma",
    version,
    about = "Exact l-modular gamma factors and gamma-factor blocks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    UpToMonomial,
}

impl From<Mode> for CompareMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exact => CompareMode::Exact,
            Mode::UpToMonomial => CompareMode::UpToMonomial,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// One Gauss sum tau(chi, psi) over F_Q, exactly in Z[zeta_M].
    Gauss {
        /// Field size Q = p^f.
        #[arg(long)]
        q: u64,
        /// Exponent of chi: generator -> zeta_{Q-1}^exponent.
        #[arg(long)]
        exponent: i64,
        /// Build psi as psi_sub o Tr to the subfield of this degree.
        #[arg(long)]
        subfield_degree: Option<u32>,
    },
    /// One gamma factor.
    Gamma {
        #[arg(long)]
        q: u64,
        /// Residue characteristic of the coefficients; omit for characteristic zero.
        #[arg(long)]
        ell: Option<u64>,
        /// Truncation depth N of F_{l^d}[Y]/(Y^N).
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// gl1 | cuspidal:E | principal:A,B | special:E
        #[arg(long)]
        support: String,
        /// k:E (Teichmuller character of exponent E) or lift:E:S (times 1+Y^S).
        #[arg(long, default_value = "k:0")]
        twist: String,
    },
    /// Block partition of level-zero supports by twisted gamma factors.
    Blocks {
        #[arg(long, default_value_t = 5)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        ell: u64,
        /// Maximal truncation depth of the twist menu.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Mode::UpToMonomial)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// The (q, l) = (5, 2) comparison of the cuspidal and special classes.
    Counterexample {
        /// Exit with status 4 if the squared-cuspidal / special / zeta^2 chain disagrees.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Character sums over a cyclic l-group, k-valued and nilpotent.
    DemoCompleteness {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        a: u32,
        #[arg(long = "N", short = 'N')]
        n: usize,
    },
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json(v: &serde_json::Value) -> anyhow::Result<()> {
    emit(&(serde_json::to_string_pretty(v)? + "\n"))
}

fn gauss(q: u64, exponent: i64, subfield_degree: Option<u32>) -> anyhow::Result<ExitCode> {
    let (p, f) = arith::prime_power(q)
        .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
    let field = FqField::new(p, f)?;
    let psi = match subfield_degree {
        Some(d) => AddChar::through_trace(&field, d)?,
        None => AddChar::canonical(&field)?,
    };
    let chi = MultChar::new(&field, exponent);
    let tau = chars::gauss_sum(&chi, &psi)?;
    let sq = tau.pow(2);
    print_json(&json!({
        "character": chi.to_json(),
        "tau": tau.to_json(),
        "tau_text": tau.to_text(),
        "tau_squared": sq.to_text(),
        "tau_squared_integer": sq.as_integer().map(|n| n.to_string()),
    }))?;
    Ok(ExitCode::SUCCESS)
}

fn parse_support(q: u64, text: &str) -> anyhow::Result<Option<InertialSupport>> {
    let bad = || Error::InvalidArgument(format!("cannot parse support {text:?}"));
    if text == "gl1" {
        return Ok(None);
    }
    let (kind, rest) = text.split_once(':').ok_or_else(bad)?;
    let nums: Vec<u64> = rest
        .split(',')
        .map(|s| s.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    Ok(Some(match (kind, nums.as_slice()) {
        ("cuspidal", [e]) => InertialSupport::cuspidal(q, *e)?,
        ("principal", [a, b]) => InertialSupport::principal(q, *a, *b),
        ("special", [e]) => InertialSupport::special(q, *e),
        _ => return Err(bad().into()),
    }))
}

enum TwistSpec {
    K(i64),
    Lift(i64, u64),
}

fn parse_twist(text: &str) -> anyhow::Result<TwistSpec> {
    let bad = || Error::InvalidArgument(format!("cannot parse twist {text:?}"));
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        ["k", e] => Ok(TwistSpec::K(e.parse().map_err(|_| bad())?)),
        ["lift", e, s] => Ok(TwistSpec::Lift(
            e.parse().map_err(|_| bad())?,
            s.parse().map_err(|_| bad())?,
        )),
        _ => Err(bad().into()),
    }
}

fn gamma_value<R: Ring>(
    ctx: &GammaContext<R>,
    support: Option<InertialSupport>,
    twist: &TameCharData<R::Elem>,
) -> anyhow::Result<serde_json::Value> {
    let g = match support {
        None => ctx.gamma_gl1(twist)?,
        Some(s) => ctx.gamma_support(&s, twist)?,
    };
    Ok(json!({
        "support": support.map(|s| s.to_json(ctx.q())),
        "twist": twist.to_json(),
        "context": ctx.info(),
        "convention": GammaContext::<R>::conventions(),
        "gamma": g.to_json(),
    }))
}

#[allow(clippy::too_many_arguments)]
fn gamma(
    q: u64,
    ell: Option<u64>,
    depth: usize,
    seed: u64,
    support: &str,
    twist: &str,
) -> anyhow::Result<ExitCode> {
    let support = parse_support(q, support)?;
    let twist = parse_twist(twist)?;
    let out = match ell {
        None => {
            let ctx: GammaContext<CycField> =
                GammaContext::characteristic_zero(q, CompareMode::Exact)?;
            let chi = match twist {
                TwistSpec::K(e) => ctx.k_char(e),
                TwistSpec::Lift(..) => {
                    bail!(Error::InvalidArgument("nilpotent lifts need --ell".into()))
                }
            };
            gamma_value(&ctx, support, &chi)?
        }
        Some(ell) => {
            let ctx: GammaContext<ArtinAlg> =
                GammaContext::modular(q, ell, depth, seed, CompareMode::Exact)?;
            let r = ctx.ring().clone();
            let chi = match twist {
                TwistSpec::K(e) => ctx.k_char(e),
                TwistSpec::Lift(e, s) => {
                    let u = r.one().add(&r.y().pow(s));
                    ctx.lift_char(e, &u, r.one())?
                }
            };
            gamma_value(&ctx, support, &chi)?
        }
    };
    print_json(&out)?;
    Ok(ExitCode::SUCCESS)
}

fn blocks(cfg: BlocksConfig, format: Format) -> anyhow::Result<ExitCode> {
    let report = run_blocks(&cfg)?;
    match format {
        Format::Json => print_json(&report.to_json())?,
        Format::Csv => emit(&report.to_csv())?,
        Format::Table => emit(&report.to_table())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn counterexample(strict: bool, seed: u64, format: Format) -> anyhow::Result<ExitCode> {
    let report = run_counterexample(seed)?;
    match format {
        Format::Json => print_json(&report.to_json())?,
        Format::Csv | Format::Table => emit(&report.to_text())?,
    }
    if !report.consistent() {
        eprintln!("internal consistency check failed");
        return Ok(ExitCode::from(EXIT_INTERNAL));
    }
    if strict && !report.chain.agrees() {
        eprintln!("the squared-cuspidal / special / zeta^2 chain does not hold");
        return Ok(ExitCode::from(EXIT_CHAIN));
    }
    Ok(ExitCode::SUCCESS)
}

fn demo(ell: u64, a: u32, n: usize) -> anyhow::Result<ExitCode> {
    let d = completeness_demo(ell, a, n)?;
    print_json(&json!({
        "ell": ell,
        "a": a,
        "N": n,
        "k_sum": d.k_sum.to_json(),
        "lift_sum": d.lift_sum.to_json(),
        "k_sum_is_zero": d.k_sum.is_zero(),
        "lift_sum_is_zero": d.lift_sum.is_zero(),
    }))?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Gauss {
            q,
            exponent,
            subfield_degree,
        } => gauss(q, exponent, subfield_degree),
        Command::Gamma {
            q,
            ell,
            depth,
            seed,
            support,
            twist,
        } => gamma(q, ell, depth, seed, &support, &twist),
        Command::Blocks {
            q,
            ell,
            depth,
            mode,
            seed,
            format,
        } => blocks(
            BlocksConfig {
                q,
                ell,
                depth,
                mode: mode.into(),
                seed,
            },
            format,
        )
        .context("block computation failed"),
        Command::Counterexample {
            strict,
            seed,
            format,
        } => counterexample(strict, seed, format),
        Command::DemoCompleteness { ell, a, n } => demo(ell, a, n),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::InvalidArgument(_) | Error::Domain(_) | Error::Size(_)) => EXIT_INVALID,
        Some(Error::ContractViolation(_) | Error::ConstructionFailure(_)) | None => EXIT_INTERNAL,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use anyhow::anyhow;

    #[test]
    fn parses_supports_and_twists() {
        assert_eq!(parse_support(5, "gl1").unwrap(), None);
        assert_eq!(
            parse_support(5, "principal:3,1").unwrap(),
            Some(InertialSupport::principal(5, 1, 3))
        );
        assert!(parse_support(5, "cuspidal:6").is_err());
        assert!(parse_support(5, "bogus").is_err());
        assert!(matches!(
            parse_twist("lift:0:1").unwrap(),
            TwistSpec::Lift(0, 1)
        ));
        assert!(parse_twist("lift:0").is_err());
    }

    #[test]
    fn error_classes_map_to_exit_codes() {
        let e: anyhow::Error = Error::InvalidArgument("x".into()).into();
        assert_eq!(exit_code(&e), EXIT_INVALID);
        let e: anyhow::Error = Error::ConstructionFailure("x".into()).into();
        assert_eq!(exit_code(&e.context("wrapped")), EXIT_INTERNAL);
        assert_eq!(exit_code(&anyhow!("other")), EXIT_INTERNAL);
    }
}
