//! Command-line surface for the polyinfo library: measure tables, information
//! diagrams, profiles, partial information decompositions, and distribution
//! generators. Identical command line + seed produces byte-identical output.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use polyinfo::builtins::{builtin, Builtin};
use polyinfo::camouflage::{camouflage_generate, diffuse, masked_parity, DiffusionMap};
use polyinfo::common::{
    exact_common_information, functional_common_information, gacs_korner,
    mss_common_information, singleton_groups, wyner_common_information,
};
use polyinfo::dist::{JointDistribution, VariableSet};
use polyinfo::io::{idiagram_csv, profile_csv, read_distribution, to_canonical_string};
use polyinfo::pid::{pid_broja, pid_imin, PidResult};
use polyinfo::profiles::{complexity_profile, connected_informations, marginal_utility};
use polyinfo::scalar::{
    disequilibrium, extropy, lmrp_complexity, perplexity, renyi_entropy, tsallis_entropy,
};
use polyinfo::secrecy::{intrinsic_mi, reduced_intrinsic_mi};
use polyinfo::shannon::{
    comutual_information, dual_total_correlation, caekl, entropy, idiagram,
    interaction_information, residual_entropy, total_correlation, tse_complexity,
};
use polyinfo::Error;

#[derive(Parser)]
#[command(name = "polyinfo", version, about = "Multivariate information measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the full measure suite for one distribution, or compare two.
    Table(TableArgs),
    /// Export the information-diagram atoms as CSV.
    Idiagram(SourceArgs),
    /// Export a complexity, connected-information, or marginal-utility profile.
    Profile(ProfileArgs),
    /// Partial information decomposition for two inputs and one output.
    Pid(PidArgs),
    /// Generate distributions: camouflage, parity, masked parity, diffusion.
    Generate(GenerateArgs),
}

#[derive(Args, Clone)]
struct SourceArgs {
    /// Named built-in distribution (dyadic, triadic, xor3, camouflage4,
    /// parity(n), giant_bit(n,k)).
    #[arg(long, conflicts_with = "input")]
    builtin: Option<String>,
    /// Path to a distribution in canonical JSON form.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Write output to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Compare two named built-ins side by side, flagging differing rows.
    #[arg(long, num_args = 2, value_names = ["A", "B"], conflicts_with_all = ["builtin", "input"])]
    compare: Option<Vec<String>>,
    /// Random restarts for the stochastic bound refinements (0 = deterministic).
    #[arg(long, default_value_t = 0)]
    restarts: usize,
    /// Seed for stochastic refinements; required when --restarts > 0.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ProfileKind {
    Complexity,
    Connected,
    Mui,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_enum)]
    kind: ProfileKind,
    /// Compare two named built-ins: emit both profiles back to back.
    #[arg(long, num_args = 2, value_names = ["A", "B"], conflicts_with_all = ["builtin", "input"])]
    compare: Option<Vec<String>>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum PidMethod {
    Broja,
    Imin,
}

#[derive(Args)]
struct PidArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// First input, second input, and output variable names.
    #[arg(value_names = ["INPUT0", "INPUT1", "OUTPUT"], num_args = 3)]
    variables: Vec<String>,
    #[arg(long, value_enum, default_value = "broja")]
    method: PidMethod,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct GenerateArgs {
    /// What to generate: camouflage, parity, masked_parity, or diffuse.
    kind: String,
    /// Number of variables (camouflage, parity, masked_parity).
    #[arg(long)]
    n: Option<usize>,
    /// Seed for randomized constructions; required for camouflage.
    #[arg(long)]
    seed: Option<u64>,
    /// Source distribution for diffuse.
    #[arg(long)]
    builtin: Option<String>,
    #[arg(long)]
    input: Option<PathBuf>,
    /// Parts each variable is diffused into (diffuse; only 2 is supported).
    #[arg(long, default_value_t = 2)]
    arity: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(source: &SourceArgs) -> Result<JointDistribution, Error> {
    match (&source.builtin, &source.input) {
        (Some(name), None) => builtin(Builtin::from_str(name)?),
        (None, Some(path)) => read_distribution(path),
        _ => Err(Error::Parse(
            "exactly one of --builtin or --input is required".into(),
        )),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// One measure row: point values print as `v`, brackets as `v [lo, hi]`.
enum Cell {
    Point(f64),
    Bracket(f64, f64),
}

impl Cell {
    fn value(&self) -> f64 {
        match self {
            Cell::Point(v) => *v,
            Cell::Bracket(lo, hi) => 0.5 * (lo + hi),
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Point(v) => format!("{v:.6}"),
            Cell::Bracket(lo, hi) => {
                format!("{:.6} [{lo:.6}, {hi:.6}]", 0.5 * (lo + hi))
            }
        }
    }
}

fn measure_rows(
    d: &JointDistribution,
    restarts: usize,
    seed: u64,
) -> Result<Vec<(&'static str, &'static str, Cell)>, Error> {
    let whole = d.variable_set();
    let groups = singleton_groups(d);
    let singles: Vec<VariableSet> = d
        .variables()
        .iter()
        .map(|v| VariableSet::of([v.as_str()]))
        .collect();
    let mut rows: Vec<(&'static str, &'static str, Cell)> = Vec::new();
    rows.push(("H", "joint entropy", Cell::Point(entropy(d, &whole)?)));
    rows.push(("H2", "Renyi entropy (order 2)", Cell::Point(renyi_entropy(d, 2.0)?)));
    rows.push(("S2", "Tsallis entropy (order 2)", Cell::Point(tsallis_entropy(d, 2.0)?)));
    rows.push((
        "I",
        "co-information",
        Cell::Point(comutual_information(d, &singles, &VariableSet::empty())?),
    ));
    rows.push(("T", "total correlation", Cell::Point(total_correlation(d, None)?)));
    rows.push(("B", "dual total correlation", Cell::Point(dual_total_correlation(d, None)?)));
    rows.push(("J", "CAEKL mutual information", Cell::Point(caekl(d, None)?)));
    rows.push(("II", "interaction information", Cell::Point(interaction_information(d, None)?)));
    rows.push(("K", "Gacs-Korner common information", Cell::Point(gacs_korner(d, &groups)?)));
    let c = wyner_common_information(d, &groups, None, restarts, seed)?;
    rows.push(("C", "Wyner common information", Cell::Bracket(c.lower, c.upper)));
    let g = exact_common_information(d, &groups, None, restarts, seed)?;
    rows.push(("G", "exact common information", Cell::Bracket(g.lower, g.upper)));
    rows.push(("F", "functional common information", Cell::Point(functional_common_information(d, &groups)?)));
    rows.push(("M", "MSS common information", Cell::Point(mss_common_information(d, &groups)?)));
    if d.variables().len() == 3 {
        let (x, y, z) = (&singles[0], &singles[1], &singles[2]);
        let down = intrinsic_mi(d, x, y, z, restarts, seed)?;
        rows.push(("Idown", "intrinsic mutual information", Cell::Point(down)));
        let dd = reduced_intrinsic_mi(d, x, y, z, 1, restarts, seed)?;
        rows.push(("Iddown", "reduced intrinsic mutual information", Cell::Bracket(dd.lower, dd.upper)));
    } else {
        rows.push(("Idown", "intrinsic mutual information", Cell::Point(f64::NAN)));
        rows.push(("Iddown", "reduced intrinsic mutual information", Cell::Point(f64::NAN)));
    }
    rows.push(("X", "extropy", Cell::Point(extropy(d))));
    rows.push(("R", "residual entropy", Cell::Point(residual_entropy(d)?)));
    rows.push(("P", "perplexity", Cell::Point(perplexity(d)?)));
    rows.push(("D", "disequilibrium", Cell::Point(disequilibrium(d))));
    rows.push(("LMRP", "LMRP complexity", Cell::Point(lmrp_complexity(d)?)));
    rows.push(("TSE", "TSE complexity", Cell::Point(tse_complexity(d)?)));
    Ok(rows)
}

fn cmd_table(args: &TableArgs) -> Result<(), Error> {
    if args.restarts > 0 && args.seed.is_none() {
        return Err(Error::Parse("--seed is required when --restarts > 0".into()));
    }
    let seed = args.seed.unwrap_or(0);
    let mut text = String::new();
    if let Some(pair) = &args.compare {
        let a = builtin(Builtin::from_str(&pair[0])?)?;
        let b = builtin(Builtin::from_str(&pair[1])?)?;
        let rows_a = measure_rows(&a, args.restarts, seed)?;
        let rows_b = measure_rows(&b, args.restarts, seed)?;
        if args.format == Format::Csv {
            let _ = writeln!(text, "measure,{},{},differs", pair[0], pair[1]);
        } else {
            let _ = writeln!(
                text,
                "{:<8} {:<36} {:>24} {:>24}  flag",
                "measure", "description", &pair[0], &pair[1]
            );
        }
        for ((name, desc, ca), (_, _, cb)) in rows_a.iter().zip(rows_b.iter()) {
            let differs = (ca.value() - cb.value()).abs() > 1e-6;
            match args.format {
                Format::Csv => {
                    let _ = writeln!(
                        text,
                        "{name},{:.6},{:.6},{}",
                        ca.value(),
                        cb.value(),
                        if differs { "yes" } else { "no" }
                    );
                }
                Format::Text => {
                    let _ = writeln!(
                        text,
                        "{name:<8} {desc:<36} {:>24} {:>24}  {}",
                        ca.render(),
                        cb.render(),
                        if differs { "*" } else { "" }
                    );
                }
            }
        }
    } else {
        let d = load(&args.source)?;
        let rows = measure_rows(&d, args.restarts, seed)?;
        if args.format == Format::Csv {
            let _ = writeln!(text, "measure,value");
        } else {
            let _ = writeln!(text, "{:<8} {:<36} {:>24}", "measure", "description", "value");
        }
        for (name, desc, cell) in &rows {
            match args.format {
                Format::Csv => {
                    let _ = writeln!(text, "{name},{:.6}", cell.value());
                }
                Format::Text => {
                    let _ = writeln!(text, "{name:<8} {desc:<36} {:>24}", cell.render());
                }
            }
        }
    }
    emit(&args.source.out, &text)
}

fn cmd_idiagram(args: &SourceArgs) -> Result<(), Error> {
    let d = load(args)?;
    let diagram = idiagram(&d)?;
    emit(&args.out, &idiagram_csv(&diagram))
}

fn profile_for(d: &JointDistribution, kind: ProfileKind) -> Result<String, Error> {
    let profile = match kind {
        ProfileKind::Complexity => complexity_profile(d)?,
        ProfileKind::Connected => connected_informations(d)?,
        ProfileKind::Mui => marginal_utility(d, 64)?,
    };
    Ok(profile_csv(&profile))
}

fn cmd_profile(args: &ProfileArgs) -> Result<(), Error> {
    let text = if let Some(pair) = &args.compare {
        let a = builtin(Builtin::from_str(&pair[0])?)?;
        let b = builtin(Builtin::from_str(&pair[1])?)?;
        format!(
            "# {}\n{}# {}\n{}",
            pair[0],
            profile_for(&a, args.kind)?,
            pair[1],
            profile_for(&b, args.kind)?
        )
    } else {
        profile_for(&load(&args.source)?, args.kind)?
    };
    emit(&args.source.out, &text)
}

fn render_pid(r: &PidResult, method: &str, format: Format) -> String {
    let mut text = String::new();
    match format {
        Format::Csv => {
            let _ = writeln!(text, "part,value,method");
            let _ = writeln!(text, "redundancy,{:.6},{method}", r.redundancy);
            let _ = writeln!(text, "unique0,{:.6},{method}", r.unique[0]);
            let _ = writeln!(text, "unique1,{:.6},{method}", r.unique[1]);
            let _ = writeln!(text, "synergy,{:.6},{method}", r.synergy);
        }
        Format::Text => {
            let _ = writeln!(text, "method: {method}  total: {:.6}", r.total);
            let _ = writeln!(text, "{:<12} {:>12.6}", "redundancy", r.redundancy);
            let _ = writeln!(text, "{:<12} {:>12.6}", "unique0", r.unique[0]);
            let _ = writeln!(text, "{:<12} {:>12.6}", "unique1", r.unique[1]);
            let _ = writeln!(text, "{:<12} {:>12.6}", "synergy", r.synergy);
        }
    }
    text
}

fn cmd_pid(args: &PidArgs) -> Result<(), Error> {
    let d = load(&args.source)?;
    let inputs = [
        VariableSet::of([args.variables[0].as_str()]),
        VariableSet::of([args.variables[1].as_str()]),
    ];
    let output = VariableSet::of([args.variables[2].as_str()]);
    for name in &args.variables {
        if !d.variables().iter().any(|v| v == name) {
            return Err(Error::UnknownVariable(name.clone()));
        }
    }
    let (result, tag) = match args.method {
        PidMethod::Broja => (pid_broja(&d, &inputs, &output)?, "broja"),
        PidMethod::Imin => (pid_imin(&d, &inputs, &output)?, "imin"),
    };
    emit(&args.source.out, &render_pid(&result, tag, args.format))
}

fn cmd_generate(args: &GenerateArgs) -> Result<(), Error> {
    let d = match args.kind.as_str() {
        "camouflage" => {
            let n = args.n.ok_or_else(|| Error::Parse("--n is required".into()))?;
            let seed = args
                .seed
                .ok_or_else(|| Error::Parse("--seed is required for camouflage".into()))?;
            camouflage_generate(n, seed)?
        }
        "parity" => {
            let n = args.n.ok_or_else(|| Error::Parse("--n is required".into()))?;
            builtin(Builtin::Parity { n })?
        }
        "masked_parity" => {
            let n = args.n.ok_or_else(|| Error::Parse("--n is required".into()))?;
            masked_parity(n)?
        }
        "diffuse" => {
            if args.arity != 2 {
                return Err(Error::Parse("only --arity 2 is supported".into()));
            }
            let source = SourceArgs {
                builtin: args.builtin.clone(),
                input: args.input.clone(),
                out: None,
            };
            let d = load(&source)?;
            diffuse(&d, &DiffusionMap::parity_pairs(&d))?
        }
        other => {
            return Err(Error::Parse(format!(
                "unknown generate kind '{other}' (expected camouflage, parity, masked_parity, diffuse)"
            )))
        }
    };
    emit(&args.out, &to_canonical_string(&d))
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) => 4,
        Error::NotConverged(_)
        | Error::OptimizationDiverged(_)
        | Error::SearchBudgetExceeded(_)
        | Error::SearchExhausted
        | Error::LpInfeasible => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Table(args) => cmd_table(args),
        Command::Idiagram(args) => cmd_idiagram(args),
        Command::Profile(args) => cmd_profile(args),
        Command::Pid(args) => cmd_pid(args),
        Command::Generate(args) => cmd_generate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
