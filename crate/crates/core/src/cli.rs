//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for usage, parse and domain errors, 1 for
//! anything else (I/O failures).

use std::ffi::OsString;
use std::io::{self, Write};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::beta::{self, BetaExpansion};
use crate::duel::{self, DuelParams};
use crate::error::Error;
use crate::numerics::rational::{format_rational, parse_rational, to_decimal_string, ExactRational};
use crate::sign::{render_word, Alphabet};
use crate::simulate::{run_sim, SimConfig};
use crate::thresholds;
use crate::thue_morse::{self, TMSequence};

const APPROX_PLACES: usize = 12;

#[derive(Debug, Parser)]
#[command(name = "galois-duel", version, about = "Greedy duel firing sequences in exact arithmetic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Aligned columns; decimals marked with ≈ are approximate.
    Table,
    Csv,
    Json,
}

/// The first symbol names Alice's letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlphabetArg {
    #[value(name = "AB")]
    Ab,
    #[value(name = "pm1")]
    Pm1,
    /// Alice 0, Bob 1.
    #[value(name = "01")]
    ZeroOne,
    /// Alice 1, Bob 0.
    #[value(name = "10")]
    OneZero,
}

impl From<AlphabetArg> for Alphabet {
    fn from(arg: AlphabetArg) -> Alphabet {
        match arg {
            AlphabetArg::Ab => Alphabet::Letters,
            AlphabetArg::Pm1 => Alphabet::PlusMinus,
            AlphabetArg::ZeroOne => Alphabet::BinaryAliceZero,
            AlphabetArg::OneZero => Alphabet::Binary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BetaMethod {
    Greedy,
    Duel,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("prob").required(true).args(["p", "q"])))]
pub struct ProbArgs {
    /// Hit probability, e.g. 1/3 or 0.1.
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    /// Miss probability q = 1 - p.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
}

impl ProbArgs {
    fn params(&self) -> Result<DuelParams, Error> {
        match (&self.p, &self.q) {
            (Some(p), _) => DuelParams::from_p(parse_rational(p)?),
            (None, Some(q)) => DuelParams::from_q(parse_rational(q)?),
            (None, None) => unreachable!("clap requires one of --p/--q"),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Firing sequence and win-probability table.
    Duel {
        #[command(flatten)]
        prob: ProbArgs,
        #[arg(long, default_value_t = 11)]
        rounds: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long, value_enum, default_value_t = AlphabetArg::Ab)]
        alphabet: AlphabetArg,
    },
    /// Longest agreement of the duel with Thue-Morse.
    Compare {
        #[command(flatten)]
        prob: ProbArgs,
        #[arg(long)]
        max_rounds: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Roots in (0, 1) of the Thue-Morse f_n and the scaled gaps.
    Thresholds {
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value = "1/2^40")]
        width: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Expansions in a fractional base.
    Beta {
        #[arg(long, value_enum, default_value_t = BetaMethod::Greedy)]
        method: BetaMethod,
        /// Number to expand (greedy).
        #[arg(long)]
        x: Option<String>,
        /// Base (greedy).
        #[arg(long)]
        beta: Option<String>,
        /// Duel expansion of n/2 in base 1 + 1/n.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        digits: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Seeded Monte Carlo check of the win probabilities.
    Simulate {
        #[command(flatten)]
        prob: ProbArgs,
        #[arg(long)]
        rounds: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Thue-Morse prefix.
    Tm {
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value_t = AlphabetArg::Ab)]
        alphabet: AlphabetArg,
    },
    /// Truncated |sum t_i q^i| for one or more q.
    Approx {
        #[arg(long, required = true, num_args = 1..)]
        q: Vec<String>,
        #[arg(long, default_value = "1/10^12")]
        tail: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Debug)]
enum Failure {
    Domain(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

/// Parses `args` (program name first) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Duel { prob, rounds, format, alphabet } => cmd_duel(prob, *rounds, *format, (*alphabet).into(), out),
        Command::Compare { prob, max_rounds, format } => cmd_compare(prob, *max_rounds, *format, out),
        Command::Thresholds { max_n, width, format } => cmd_thresholds(*max_n, width, *format, out),
        Command::Beta { method, x, beta, n, digits, format } => {
            cmd_beta(*method, x.as_deref(), beta.as_deref(), *n, *digits, *format, out)
        }
        Command::Simulate { prob, rounds, trials, seed, format } => {
            cmd_simulate(prob, *rounds, *trials, *seed, *format, out)
        }
        Command::Tm { length, alphabet } => {
            writeln!(out, "{}", render_word(TMSequence::new(*length).terms(), (*alphabet).into()))?;
            Ok(())
        }
        Command::Approx { q, tail, format } => cmd_approx(q, tail, *format, out),
    }
}

fn approx(value: &ExactRational) -> String {
    format!("≈{}", to_decimal_string(value, APPROX_PLACES))
}

fn cmd_duel(prob: &ProbArgs, rounds: usize, format: Format, alphabet: Alphabet, out: &mut dyn Write) -> Result<(), Failure> {
    let params = prob.params()?;
    let rows = duel::probability_table(params.clone(), rounds)?;
    let signs: Vec<_> = rows.iter().map(|r| r.shooter).collect();
    let word = render_word(&signs, alphabet);
    match format {
        Format::Csv => {
            writeln!(out, "round,pA,pB,shooter")?;
            for r in &rows {
                writeln!(out, "{},{},{},{}", r.round, format_rational(&r.p_a), format_rational(&r.p_b), r.shooter.letter())?;
            }
        }
        Format::Json => {
            let doc = json!({
                "p": format_rational(params.p()),
                "q": format_rational(params.q()),
                "sequence": word,
                "rows": rows,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Table => {
            writeln!(out, "p = {}, q = {}", format_rational(params.p()), format_rational(params.q()))?;
            writeln!(out, "sequence: {word}")?;
            writeln!(out, "{:>5}  {:<28} {:<28} shooter", "round", "P(A)", "P(B)")?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>5}  {:<28} {:<28} {}",
                    r.round,
                    format!("{} {}", format_rational(&r.p_a), approx(&r.p_a)),
                    format!("{} {}", format_rational(&r.p_b), approx(&r.p_b)),
                    r.shooter.letter()
                )?;
            }
        }
    }
    Ok(())
}

fn cmd_compare(prob: &ProbArgs, max_rounds: usize, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let params = prob.params()?;
    if max_rounds == 0 {
        return Err(Error::Domain("--max-rounds must be at least 1".into()).into());
    }
    let seq = duel::generate(params.clone(), max_rounds);
    let cmp = thue_morse::compare(params.clone(), max_rounds);
    let duel_word = render_word(seq.signs(), Alphabet::Letters);
    let tm_word = render_word(TMSequence::new(max_rounds).terms(), Alphabet::Letters);
    match format {
        Format::Json => {
            let doc = json!({
                "q": format_rational(params.q()),
                "window": cmp.window,
                "agreement_length": cmp.agreement_length,
                "first_mismatch": cmp.first_mismatch,
                "duel": duel_word,
                "thue_morse": tm_word,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Csv => {
            writeln!(out, "q,window,agreement_length,first_mismatch")?;
            let mismatch = cmp.first_mismatch.map(|m| m.to_string()).unwrap_or_default();
            writeln!(out, "{},{},{},{}", format_rational(params.q()), cmp.window, cmp.agreement_length, mismatch)?;
        }
        Format::Table => {
            writeln!(out, "duel:       {duel_word}")?;
            writeln!(out, "thue-morse: {tm_word}")?;
            writeln!(out, "agreement length: {}", cmp.agreement_length)?;
            match cmp.first_mismatch {
                Some(i) => writeln!(out, "mismatch at index {i}")?,
                None => writeln!(out, "no mismatch within window ({max_rounds} rounds)")?,
            }
        }
    }
    Ok(())
}

fn cmd_thresholds(max_n: usize, width: &str, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let width = parse_rational(width)?;
    let records = thresholds::alpha_sequence(max_n, &width)?;
    let report = thresholds::conjecture_report(&records);
    match format {
        Format::Csv => write!(out, "{}", thresholds::report_csv(&report))?,
        Format::Json => {
            let doc = json!({ "records": records, "report": report });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Table => {
            writeln!(out, "{:>4} {:>4}  {:<16} {:<14} flags", "k", "n", "alpha (mid)", "(1-a)sqrt(k)")?;
            for row in &report.rows {
                let mut flags = Vec::new();
                if row.non_monotone {
                    flags.push("non-monotone");
                }
                if !row.switching {
                    flags.push("non-switching root");
                }
                writeln!(
                    out,
                    "{:>4} {:>4}  ≈{:<15.12} ≈{:<13.9} {}",
                    row.k,
                    row.n,
                    row.alpha_mid,
                    row.scaled_gap,
                    flags.join(",")
                )?;
            }
            writeln!(out, "roots: {}", report.rows.len())?;
            if !report.monotonicity_violations.is_empty() {
                writeln!(out, "monotonicity violations at k = {:?}", report.monotonicity_violations)?;
            }
        }
    }
    Ok(())
}

fn cmd_beta(
    method: BetaMethod,
    x: Option<&str>,
    base: Option<&str>,
    n: Option<u64>,
    digits: usize,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let missing = |flag: &str| Error::Domain(format!("--method {method:?} needs {flag}").to_lowercase());
    let exp: BetaExpansion = match method {
        BetaMethod::Greedy => {
            let x = parse_rational(x.ok_or_else(|| missing("--x"))?)?;
            let base = parse_rational(base.ok_or_else(|| missing("--beta"))?)?;
            beta::greedy_expansion(&x, &base, digits)?
        }
        BetaMethod::Duel => beta::duel_expansion(n.ok_or_else(|| missing("--n"))?, digits)?,
    };
    let validity = beta::validate_expansion(&exp.x, &exp);
    match format {
        Format::Json => {
            let mut doc = serde_json::to_value(&exp)?;
            doc["valid"] = json!(validity.is_valid());
            doc["first_violation"] = json!(validity.first_violation);
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Csv => {
            writeln!(out, "base,x,digits,remainder,valid")?;
            writeln!(
                out,
                "{},{},{},{},{}",
                format_rational(&exp.base),
                format_rational(&exp.x),
                exp.render(),
                format_rational(&exp.remainder),
                validity.is_valid()
            )?;
        }
        Format::Table => {
            writeln!(out, "{}", exp.render())?;
            writeln!(
                out,
                "base {}, x = {}, remainder {} {}",
                format_rational(&exp.base),
                format_rational(&exp.x),
                format_rational(&exp.remainder),
                approx(&exp.remainder)
            )?;
            match validity.first_violation {
                None => writeln!(out, "valid through all {} digits", validity.checked)?,
                Some(m) => writeln!(out, "invalid at prefix length {m}")?,
            }
        }
    }
    Ok(())
}

fn cmd_simulate(prob: &ProbArgs, rounds: usize, trials: u64, seed: u64, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let config = SimConfig::new(prob.params()?, rounds, trials, seed)?;
    let result = run_sim(&config);
    let [za, zb, zn] = result.z_scores();
    match format {
        Format::Json => {
            let mut doc = serde_json::to_value(&result)?;
            doc["z_scores"] = json!({ "alice": za, "bob": zb, "no_decision": zn });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Csv => {
            writeln!(out, "trials,alice_wins,bob_wins,no_decision,analytic_pA,analytic_pB,z_alice,z_bob,z_no_decision")?;
            writeln!(
                out,
                "{},{},{},{},{},{},{za:.4},{zb:.4},{zn:.4}",
                result.trials,
                result.alice_wins,
                result.bob_wins,
                result.no_decision,
                format_rational(&result.analytic_pa),
                format_rational(&result.analytic_pb)
            )?;
        }
        Format::Table => {
            writeln!(out, "trials {} (seed {}), horizon {} rounds", result.trials, result.seed, result.max_rounds)?;
            writeln!(out, "alice wins  {:>10}  analytic {}  z = {za:+.3}", result.alice_wins, approx(&result.analytic_pa))?;
            writeln!(out, "bob wins    {:>10}  analytic {}  z = {zb:+.3}", result.bob_wins, approx(&result.analytic_pb))?;
            writeln!(out, "undecided   {:>10}  analytic {}  z = {zn:+.3}", result.no_decision, approx(&result.analytic_no_decision))?;
        }
    }
    Ok(())
}

fn cmd_approx(qs: &[String], tail: &str, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let tail = parse_rational(tail)?;
    let samples = qs
        .iter()
        .map(|q| thue_morse::tm_generating_magnitude(&parse_rational(q)?, &tail))
        .collect::<Result<Vec<_>, Error>>()?;
    let fit = thue_morse::fit_log_squared_decay(&samples);
    match format {
        Format::Json => {
            let doc = json!({ "tail": format_rational(&tail), "samples": samples, "fit": fit });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Csv => {
            writeln!(out, "q,terms,ln_magnitude")?;
            for m in &samples {
                writeln!(out, "{},{},{:.12}", format_rational(&m.q), m.terms, thue_morse::log_abs(&m.value))?;
            }
        }
        Format::Table => {
            writeln!(out, "{:<24} {:>8}  {:<20}", "q", "terms", "ln |G(q)|")?;
            for m in &samples {
                writeln!(out, "{:<24} {:>8}  ≈{:.12}", format_rational(&m.q), m.terms, thue_morse::log_abs(&m.value))?;
            }
            if let Some(fit) = fit {
                writeln!(out, "fit ln|G| ≈ {:.6} - {:.6} (ln p)^2 over {} points", fit.intercept, fit.c, fit.points)?;
            }
        }
    }
    Ok(())
}
