//! `polyknap`: generate, reduce, solve, verify and lemma-check instances
//! through JSON files or stdin/stdout.
//!
//! Exit codes: 0 = yes/pass, 1 = no/fail, 2 = usage or domain error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use polyknap::json::{self, ReductionEntry};
use polyknap::{
    full_pipeline, generate, lift_to_restricted, restricted_to_polycorr, solve, verify_solution, BoundMode,
    CheckReport, Error, GenSpec, Harness, Instance, Method, Mutation, ReportSummary, SolverConfig,
    SubsetSumInstance, TargetMutation, Verdict,
};

#[derive(Parser)]
#[command(name = "polyknap", version, about = "Reductions from subset sum to polynomially correlated knapsack")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded subset-sum instance.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long = "max-weight")]
        max_weight: String,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce a subset-sum instance; writes a JSON array of instance + trace.
    Reduce {
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum)]
        stage: Stage,
        /// Instance file; stdin when absent or "-".
        instance: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance (or every member of a reduction file).
    Solve {
        #[arg(long, value_enum)]
        method: MethodArg,
        instance: Option<PathBuf>,
        #[arg(long = "enum-cap", default_value_t = SolverConfig::default().enumeration_cap)]
        enum_cap: usize,
        #[arg(long = "dp-cap", default_value_t = SolverConfig::default().dp_capacity_cap)]
        dp_cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a solution file against an instance file.
    Verify { instance: PathBuf, solution: PathBuf },
    /// Run lemma checks; writes JSON lines ending with a summary object.
    Check {
        #[arg(long, value_enum)]
        lemma: LemmaArg,
        #[arg(long)]
        m: u32,
        instance: Option<PathBuf>,
        /// Restrict the lift lemmas to one family index.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long = "gen-seed", conflicts_with = "instance")]
        gen_seed: Option<u64>,
        #[arg(long = "gen-n", default_value_t = 8)]
        gen_n: usize,
        #[arg(long = "gen-max-weight", default_value = "50")]
        gen_max_weight: String,
        #[arg(long = "gen-mode", value_enum, default_value_t = Mode::SubsetAchievable)]
        gen_mode: Mode,
        /// Experimental fail-injection: replace G by a decimal value,
        /// `plus-linear` (G + m a_1^(m-1)) or `leading-power` (a_1^m).
        #[arg(long = "mutate-G")]
        mutate_g: Option<String>,
        /// Experimental fail-injection: replace the shift constant C.
        #[arg(long = "mutate-C")]
        mutate_c: Option<String>,
        #[arg(long = "enum-cap", default_value_t = SolverConfig::default().enumeration_cap)]
        enum_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    SubsetAchievable,
    Random,
    Boundary,
}

impl From<Mode> for BoundMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::SubsetAchievable => BoundMode::SubsetAchievable,
            Mode::Random => BoundMode::Random,
            Mode::Boundary => BoundMode::Boundary,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Stage {
    Lift,
    Polycorr,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Brute,
    Dp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LemmaArg {
    #[value(name = "2.2")]
    L2_2,
    #[value(name = "2.3")]
    L2_3,
    #[value(name = "3.4")]
    L3_4,
    #[value(name = "3.5")]
    L3_5,
    #[value(name = "t1.1")]
    T1_1,
    All,
}

fn read_input(path: Option<&PathBuf>) -> Result<String, Error> {
    let io_err = |e: io::Error| Error::InvalidArgument(e.to_string());
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).map_err(|e| Error::InvalidArgument(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(io_err)?;
            Ok(s)
        }
    }
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<(), Error> {
    let res = match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    res.map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn parse_big(s: &str) -> Result<BigUint, Error> {
    polyknap::num::parse_decimal(s)
}

fn subset_sum(instance: Instance) -> Result<SubsetSumInstance, Error> {
    match instance {
        Instance::SubsetSum(s) => Ok(s),
        other => Err(Error::InvalidArgument(format!("expected a subset_sum instance, got {}", other.kind()))),
    }
}

fn cmd_gen(seed: u64, n: usize, max_weight: &str, mode: Mode, out: Option<&PathBuf>) -> Result<u8, Error> {
    let spec = GenSpec { seed, n, weight_max: parse_big(max_weight)?, bound_mode: mode.into() };
    let instance = generate(&spec)?;
    write_output(out, &format!("{}\n", json::instance_to_json(&instance.into())))?;
    Ok(0)
}

fn cmd_reduce(m: u32, stage: Stage, input: Option<&PathBuf>, out: Option<&PathBuf>) -> Result<u8, Error> {
    let ss = subset_sum(json::parse_instance(&read_input(input)?)?)?;
    let entries: Vec<ReductionEntry> = match stage {
        Stage::Lift => {
            let family = lift_to_restricted(&ss, m)?;
            (0..family.members.len())
                .map(|r| ReductionEntry { instance: family.members[r].clone().into(), trace: family.trace(r) })
                .collect()
        }
        Stage::Polycorr => {
            let red = restricted_to_polycorr(&ss, m)?;
            vec![ReductionEntry { instance: red.instance.into(), trace: red.trace }]
        }
        Stage::Full => full_pipeline(&ss, m)?
            .into_iter()
            .map(|p| ReductionEntry { instance: p.instance.into(), trace: p.trace })
            .collect(),
    };
    write_output(out, &format!("{}\n", serde_json::to_string(&entries)?))?;
    Ok(0)
}

fn cmd_solve(method: MethodArg, input: Option<&PathBuf>, config: SolverConfig, out: Option<&PathBuf>) -> Result<u8, Error> {
    let method = match method {
        MethodArg::Brute => Method::Brute,
        MethodArg::Dp => Method::Dp,
    };
    let text = read_input(input)?;
    if text.trim_start().starts_with('[') {
        // A reduction file: yes iff some member is satisfiable.
        let entries = json::parse_reduction_file(&text)?;
        let reports = entries
            .iter()
            .map(|e| solve(&e.instance, method, &config))
            .collect::<Result<Vec<_>, _>>()?;
        write_output(out, &format!("{}\n", serde_json::to_string(&reports)?))?;
        return Ok(if reports.iter().any(|r| r.satisfiable) { 0 } else { 1 });
    }
    let instance = json::parse_instance(&text)?;
    let report = solve(&instance, method, &config)?;
    write_output(out, &format!("{}\n", serde_json::to_string(&report)?))?;
    Ok(if report.satisfiable { 0 } else { 1 })
}

fn cmd_verify(instance: &PathBuf, solution: &PathBuf) -> Result<u8, Error> {
    let instance = json::parse_instance(&read_input(Some(instance))?)?;
    let x = json::parse_solution(&read_input(Some(solution))?)?;
    Ok(if verify_solution(&instance, &x)? { 0 } else { 1 })
}

fn parse_target_mutation(s: &str) -> Result<TargetMutation, Error> {
    match s {
        "plus-linear" => Ok(TargetMutation::AddLinearTerm),
        "leading-power" => Ok(TargetMutation::LeadingPower),
        other => parse_big(other).map(TargetMutation::Set),
    }
}

struct CheckArgs<'a> {
    lemma: LemmaArg,
    m: u32,
    r: Option<usize>,
    ss: SubsetSumInstance,
    harness: Harness,
    out: Option<&'a PathBuf>,
}

fn cmd_check(args: CheckArgs<'_>) -> Result<u8, Error> {
    let started = Instant::now();
    let CheckArgs { lemma, m, r, ss, harness, out } = args;
    let rs: Vec<usize> = match r {
        Some(r) => vec![r],
        None => (0..harness.lift(&ss, m)?.members.len()).collect(),
    };
    let mut reports: Vec<CheckReport> = Vec::new();
    match lemma {
        LemmaArg::L2_2 => {
            for &r in &rs {
                reports.push(harness.check_lemma_2_2(&ss, m, r)?);
            }
        }
        LemmaArg::L2_3 => {
            for &r in &rs {
                reports.push(harness.check_lemma_2_3(&ss, m, r)?);
            }
        }
        LemmaArg::L3_4 => reports.push(harness.check_lemma_3_4(&ss, m)?),
        LemmaArg::L3_5 => reports.push(harness.check_lemma_3_5(&ss, m)?),
        LemmaArg::T1_1 => reports.push(harness.check_theorem_1_1(&ss, m)?),
        LemmaArg::All => reports = harness.check_all(&ss, m)?,
    }
    let summary = ReportSummary::tally(&reports, started);
    let mut text = String::new();
    for report in &reports {
        text.push_str(&serde_json::to_string(report)?);
        text.push('\n');
    }
    text.push_str(&summary.to_json_line());
    text.push('\n');
    write_output(out, &text)?;
    Ok(if reports.iter().any(|r| r.verdict == Verdict::Fail) { 1 } else { 0 })
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Gen { seed, n, max_weight, mode, out } => cmd_gen(seed, n, &max_weight, mode, out.as_ref()),
        Command::Reduce { m, stage, instance, out } => cmd_reduce(m, stage, instance.as_ref(), out.as_ref()),
        Command::Solve { method, instance, enum_cap, dp_cap, out } => {
            let config = SolverConfig { enumeration_cap: enum_cap, dp_capacity_cap: dp_cap };
            cmd_solve(method, instance.as_ref(), config, out.as_ref())
        }
        Command::Verify { instance, solution } => cmd_verify(&instance, &solution),
        Command::Check {
            lemma,
            m,
            instance,
            r,
            gen_seed,
            gen_n,
            gen_max_weight,
            gen_mode,
            mutate_g,
            mutate_c,
            enum_cap,
            out,
        } => {
            let ss = match gen_seed {
                Some(seed) => generate(&GenSpec {
                    seed,
                    n: gen_n,
                    weight_max: parse_big(&gen_max_weight)?,
                    bound_mode: gen_mode.into(),
                })?,
                None => subset_sum(json::parse_instance(&read_input(instance.as_ref())?)?)?,
            };
            let mutation = Mutation {
                shift_constant: mutate_c.as_deref().map(parse_big).transpose()?,
                polycorr_target: mutate_g.as_deref().map(parse_target_mutation).transpose()?,
            };
            let config = SolverConfig { enumeration_cap: enum_cap, ..SolverConfig::default() };
            let harness = Harness::new(config).with_mutation(mutation);
            cmd_check(CheckArgs { lemma, m, r, ss, harness, out: out.as_ref() })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
