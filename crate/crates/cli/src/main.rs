//! `ybe` — verify, analyze, enumerate and search finite Yang-Baxter
//! solutions and binary-operation algebras stored as JSON table files.
//!
//! Exit codes are uniform across subcommands: 0 for success (or a check that
//! came out true), 1 for a check that came out false, 2 for unusable input,
//! 3 for a resource bound (carrier too large, monoid cap exceeded).

mod reports;

use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ybe_core::enumeration::{self, SearchPredicate};
use ybe_core::error::Error;
use ybe_core::files::{
    to_json_string, AlgebraFile, InputFile, SolutionFile,
};
use ybe_core::partition::Partition;
use ybe_core::permutational::{
    is_k_permutational_with, monoid_closure, sigma_generators, KPermOptions, DEFAULT_MONOID_CAP,
};
use ybe_core::retraction::{max_congruence_below_sim, multipermutation_level, retract_tower, sim};
use ybe_core::solution::Solution;

use reports::*;

#[derive(Parser)]
#[command(name = "ybe", version, about = "Finite Yang-Baxter solution toolkit")]
struct Cli {
    /// Emit reports as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Size of the worker thread pool (default: one per core).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the braid relation, the three componentwise identities, and
    /// classification flags of a solution file.
    Verify { file: PathBuf },
    /// Summarize a solution or algebra file.
    Info { file: PathBuf },
    /// Compute the coinciding-maps equivalence, its maximal congruence, the
    /// retract tower and the multipermutation level.
    Retract {
        file: PathBuf,
        /// Also print every intermediate refinement step.
        #[arg(long)]
        trace: bool,
    },
    /// Report just the retract tower sizes and the multipermutation level.
    Mpl { file: PathBuf },
    /// Decide k-permutability; prints a replayable witness on failure.
    Kperm {
        file: PathBuf,
        #[arg(short, long)]
        k: usize,
        /// Pin every word to the identity (the plain variant).
        #[arg(long)]
        no_words: bool,
        /// Cap on the word-monoid closure (default 10^6; the YBE_MONOID_CAP
        /// environment variable overrides the default).
        #[arg(long, value_name = "N")]
        monoid_cap: Option<usize>,
    },
    /// Enumerate all solutions on a small carrier (or sample larger ones).
    Enumerate(EnumerateArgs),
    /// Search the enumeration stream for solutions with a property.
    Search {
        #[arg(long)]
        n: usize,
        /// One of: is_solution, degenerate, nondegenerate, involutive,
        /// irretractable, sim_not_congruence, mpl_equals(k), mpl_at_most(k).
        #[arg(long)]
        property: String,
        #[arg(long, default_value_t = 10)]
        limit: usize,
        /// Write the hits as a solution-list file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quotient by a congruence (default: the maximal congruence below the
    /// coinciding-maps equivalence).
    Quotient {
        file: PathBuf,
        /// Partition as classes of elements, e.g. "a,e|b|c|d" or "0,4|1|2|3".
        #[arg(long, value_name = "CLASSES")]
        classes: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generators and closure size of the monoid of curried maps.
    Monoid {
        file: PathBuf,
        #[arg(long, value_name = "N")]
        monoid_cap: Option<usize>,
    },
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    /// Count only; do not materialize the solutions.
    #[arg(long)]
    count_only: bool,
    /// Keep one canonical representative per isomorphism class.
    #[arg(long)]
    up_to_iso: bool,
    /// Keep only solutions satisfying this predicate.
    #[arg(long, value_name = "PRED")]
    filter: Option<String>,
    /// Write the solutions as a solution-list file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the full census (all vocabulary predicates).
    #[arg(long)]
    census: bool,
    /// Sample this many solutions by seeded randomized backtracking instead
    /// of enumerating exhaustively (the only mode for carriers above the
    /// exhaustive limit).
    #[arg(long, value_name = "COUNT")]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Failure that ends the process with a specific exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CarrierTooLarge { .. } | Error::CapExceeded { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // ignore failure: the pool may already be initialized in tests
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Verify { file } => cmd_verify(cli, file),
        Command::Info { file } => cmd_info(cli, file),
        Command::Retract { file, trace } => cmd_retract(cli, file, *trace),
        Command::Mpl { file } => cmd_mpl(cli, file),
        Command::Kperm {
            file,
            k,
            no_words,
            monoid_cap,
        } => cmd_kperm(cli, file, *k, *no_words, *monoid_cap),
        Command::Enumerate(args) => cmd_enumerate(cli, args),
        Command::Search {
            n,
            property,
            limit,
            out,
        } => cmd_search(cli, *n, property, *limit, out.as_deref()),
        Command::Quotient {
            file,
            classes,
            out,
        } => cmd_quotient(cli, file, classes.as_deref(), out.as_deref()),
        Command::Monoid { file, monoid_cap } => cmd_monoid(cli, file, *monoid_cap),
    }
}

fn read_input(path: &Path) -> Result<InputFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    InputFile::parse(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_solution(path: &Path) -> Result<Solution, Failure> {
    match read_input(path)? {
        InputFile::Solution(f) => Ok(f.to_solution()?),
        InputFile::Algebra(_) => Err(Failure::input(format!(
            "{}: expected a solution file with sigma/tau tables",
            path.display()
        ))),
    }
}

fn monoid_cap_setting(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("YBE_MONOID_CAP")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_MONOID_CAP)
}

fn emit<T: serde::Serialize>(cli: &Cli, report: &T, human: impl FnOnce() -> String) {
    if cli.json {
        print!("{}", to_json_string(report));
    } else {
        println!("{}", human());
    }
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_verify(cli: &Cli, file: &Path) -> Result<u8, Failure> {
    let s = read_solution(file)?;
    let braid = s.check_braid();
    let identities = s.check_braid_identities();
    let classification = s.classify();
    let report = VerifyReport {
        n: s.n(),
        braid,
        identities,
        classification,
    };
    emit(cli, &report, || {
        format!(
            "n = {}\nbraid relation: {}\nsigma law: {}\ncross law: {}\ntau law: {}\n\
             left non-degenerate: {}\nright non-degenerate: {}\nbijective: {}\n\
             involutive: {}\ndegenerate: {}",
            s.n(),
            yesno(braid),
            yesno(identities.sigma_law),
            yesno(identities.cross_law),
            yesno(identities.tau_law),
            yesno(classification.left_nondegenerate),
            yesno(classification.right_nondegenerate),
            yesno(classification.bijective),
            yesno(classification.involutive),
            yesno(classification.degenerate),
        )
    });
    Ok(if braid { 0 } else { 1 })
}

fn cmd_info(cli: &Cli, file: &Path) -> Result<u8, Failure> {
    let input = read_input(file)?;
    let algebra = input.to_algebra()?;
    let solution = input.as_solution().transpose()?;
    let labels = input.labels().map(|l| l.to_vec());
    let sim_p = sim(&algebra);
    let (approx, _) = max_congruence_below_sim(&algebra)?;
    let mpl = multipermutation_level(&algebra)?;
    let report = InfoReport {
        n: algebra.n(),
        kind: if solution.is_some() { "solution" } else { "algebra" },
        ops: algebra.ops().iter().map(|o| o.name().to_string()).collect(),
        braid: solution.as_ref().map(|s| s.check_braid()),
        classification: solution.as_ref().map(|s| s.classify()),
        sim_classes: sim_p.class_count(),
        approx_classes: approx.class_count(),
        mpl: mpl.into(),
    };
    emit(cli, &report, || {
        let mut lines = vec![
            format!("n = {} ({})", report.n, report.kind),
            format!("ops: {}", report.ops.join(", ")),
        ];
        if let Some(braid) = report.braid {
            lines.push(format!("braid relation: {}", yesno(braid)));
        }
        if let Some(c) = &report.classification {
            lines.push(format!(
                "degenerate: {}, bijective: {}, involutive: {}",
                yesno(c.degenerate),
                yesno(c.bijective),
                yesno(c.involutive)
            ));
        }
        lines.push(format!(
            "~ classes: {}  (displayed: {})",
            report.sim_classes,
            partition_display(&sim_p, labels.as_deref())
        ));
        lines.push(format!("max congruence classes: {}", report.approx_classes));
        lines.push(mpl_display(mpl));
        lines.join("\n")
    });
    Ok(0)
}

fn cmd_retract(cli: &Cli, file: &Path, trace_flag: bool) -> Result<u8, Failure> {
    let input = read_input(file)?;
    let algebra = input.to_algebra()?;
    let labels = input.labels().map(|l| l.to_vec());
    let sim_p = sim(&algebra);
    let (approx, trace) = max_congruence_below_sim(&algebra)?;
    let tower = retract_tower(&algebra, None)?;
    let mpl = multipermutation_level(&algebra)?;
    let report = RetractReport {
        n: algebra.n(),
        sim: partition_classes(&sim_p),
        trace: trace_flag.then(|| trace.steps().iter().map(partition_classes).collect()),
        approx: partition_classes(&approx),
        rounds: trace.rounds(),
        tower_sizes: tower.sizes(),
        mpl: mpl.into(),
    };
    emit(cli, &report, || {
        let mut lines = vec![
            format!("n = {}", report.n),
            format!("~ : {}", partition_display(&sim_p, labels.as_deref())),
        ];
        if trace_flag {
            for (i, step) in trace.steps().iter().enumerate() {
                lines.push(format!(
                    "~_{i}: {}",
                    partition_display(step, labels.as_deref())
                ));
            }
        }
        lines.push(format!(
            "max congruence: {}",
            partition_display(&approx, labels.as_deref())
        ));
        lines.push(format!("refinement rounds: {}", report.rounds));
        lines.push(format!("tower sizes: {:?}", report.tower_sizes));
        lines.push(mpl_display(mpl));
        lines.join("\n")
    });
    Ok(0)
}

fn cmd_mpl(cli: &Cli, file: &Path) -> Result<u8, Failure> {
    let algebra = read_input(file)?.to_algebra()?;
    let tower = retract_tower(&algebra, None)?;
    let mpl = multipermutation_level(&algebra)?;
    let report = MplCommandReport {
        n: algebra.n(),
        tower_sizes: tower.sizes(),
        mpl: mpl.into(),
    };
    emit(cli, &report, || {
        format!(
            "n = {}\ntower sizes: {:?}\n{}",
            report.n,
            report.tower_sizes,
            mpl_display(mpl)
        )
    });
    Ok(0)
}

fn cmd_kperm(
    cli: &Cli,
    file: &Path,
    k: usize,
    no_words: bool,
    cap_flag: Option<usize>,
) -> Result<u8, Failure> {
    let algebra = read_input(file)?.to_algebra()?;
    let cap = monoid_cap_setting(cap_flag);
    let monoid_size = if no_words {
        1
    } else {
        monoid_closure(algebra.n(), &sigma_generators(&algebra), cap)?.len()
    };
    let outcome = is_k_permutational_with(
        &algebra,
        k,
        cap,
        KPermOptions {
            words: !no_words,
            quantify_outer_word: false,
        },
    )?;
    let op_names: Vec<String> = algebra.ops().iter().map(|o| o.name().to_string()).collect();
    let report = KPermReport {
        n: algebra.n(),
        k,
        words: !no_words,
        monoid_size,
        holds: outcome.holds(),
        witness: outcome.witness().map(|w| WitnessReport::new(w, &op_names)),
    };
    emit(cli, &report, || {
        let mut lines = vec![format!(
            "n = {}, k = {k}, words: {}",
            report.n,
            if no_words { "off" } else { "on" }
        )];
        lines.push(format!("{k}-permutational: {}", yesno(report.holds)));
        if let Some(w) = &report.witness {
            lines.push("witness:".into());
            for (i, level) in w.levels.iter().enumerate() {
                lines.push(format!(
                    "  level {}: op {}, word {:?}",
                    i + 1,
                    level.op,
                    level.word
                ));
            }
            lines.push(format!("  args: {:?}", w.args));
            lines.push(format!(
                "  start {} gives {}, start {} gives {}",
                w.y, w.omega_y, w.z, w.omega_z
            ));
        }
        lines.join("\n")
    });
    Ok(if report.holds { 0 } else { 1 })
}

fn cmd_enumerate(cli: &Cli, args: &EnumerateArgs) -> Result<u8, Failure> {
    let filter: Option<SearchPredicate> = args
        .filter
        .as_deref()
        .map(|f| f.parse())
        .transpose()
        .map_err(|e: Error| Failure::input(e.to_string()))?;

    if args.census {
        let report = enumeration::census(args.n)?;
        emit(cli, &report, || {
            let mut lines = vec![
                format!("n = {}", report.n),
                format!("pair space: {}", report.total_pairs_examined),
                format!("solutions: {}", report.solutions_found),
                format!("up to isomorphism: {}", report.solutions_up_to_iso),
            ];
            for (name, count) in &report.predicate_counts {
                lines.push(format!("  {name}: {count}"));
            }
            lines.join("\n")
        });
        return Ok(0);
    }

    let mut solutions: Vec<Solution> = Vec::new();
    let mut count: u64 = 0;
    let mode;
    if let Some(sample_count) = args.sample {
        mode = "sample";
        for s in enumeration::sample_solutions(args.n, sample_count, args.seed)? {
            if filter.as_ref().is_none_or(|p| p.evaluate(&s)) {
                count += 1;
                if !args.count_only {
                    solutions.push(s);
                }
            }
        }
    } else {
        mode = "exhaustive";
        enumeration::enumerate_with(args.n, args.up_to_iso, None, &mut |s| {
            if filter.as_ref().is_none_or(|p| p.evaluate(s)) {
                count += 1;
                if !args.count_only {
                    solutions.push(s.clone());
                }
            }
            ControlFlow::Continue(())
        })?;
    }

    let written = match (&args.out, args.count_only) {
        (Some(path), false) => {
            std::fs::write(path, ybe_core::files::write_solution_list(&solutions))
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            Some(path.display().to_string())
        }
        _ => None,
    };
    let report = EnumerateReport {
        n: args.n,
        mode,
        filter: args.filter.clone(),
        count,
        written,
    };
    emit(cli, &report, || {
        let mut line = format!("n = {}: {} solutions ({})", report.n, report.count, mode);
        if let Some(f) = &report.filter {
            line.push_str(&format!(" matching {f}"));
        }
        if let Some(w) = &report.written {
            line.push_str(&format!(", written to {w}"));
        }
        line
    });
    Ok(0)
}

fn cmd_search(
    cli: &Cli,
    n: usize,
    property: &str,
    limit: usize,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let pred: SearchPredicate = property
        .parse()
        .map_err(|e: Error| Failure::input(e.to_string()))?;
    let hits = enumeration::search(n, pred, limit)?;
    let written = match out {
        Some(path) => {
            std::fs::write(path, ybe_core::files::write_solution_list(&hits))
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            Some(path.display().to_string())
        }
        None => None,
    };
    let report = SearchReport {
        n,
        property: property.to_string(),
        limit,
        found: hits.len(),
        solutions: written
            .is_none()
            .then(|| hits.iter().map(SolutionFile::from_solution).collect()),
        written,
    };
    emit(cli, &report, || {
        let mut lines = vec![format!(
            "n = {n}, property {property}: {} of at most {limit}",
            report.found
        )];
        if let Some(w) = &report.written {
            lines.push(format!("written to {w}"));
        } else {
            for s in &hits {
                lines.push(format!(
                    "sigma = {:?}, tau = {:?}",
                    s.sigma_rows(),
                    s.tau_rows()
                ));
            }
        }
        lines.join("\n")
    });
    Ok(0)
}

fn parse_classes(spec: &str, n: usize, labels: Option<&[String]>) -> Result<Partition, Failure> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for class_text in spec.split('|') {
        let mut class = Vec::new();
        for token in class_text.split(',') {
            let token = token.trim();
            if token.is_empty() {
                return Err(Failure::input("empty element in class spec"));
            }
            let index = labels
                .and_then(|l| l.iter().position(|x| x == token))
                .or_else(|| token.parse::<usize>().ok().filter(|&i| i < n))
                .ok_or_else(|| Failure::input(format!("unknown element `{token}`")))?;
            class.push(index);
        }
        classes.push(class);
    }
    Ok(Partition::from_classes(n, &classes)?)
}

fn cmd_quotient(
    cli: &Cli,
    file: &Path,
    classes: Option<&str>,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let input = read_input(file)?;
    let algebra = input.to_algebra()?;
    let partition = match classes {
        Some(spec) => parse_classes(spec, algebra.n(), input.labels())?,
        None => max_congruence_below_sim(&algebra)?.0,
    };
    let quotient = match algebra.quotient(&partition) {
        Ok(q) => q,
        Err(e @ Error::NotACongruence { .. }) => {
            // a well-formed partition that fails the congruence test is a
            // checked-false result, not an input error
            if cli.json {
                print!(
                    "{}",
                    to_json_string(&serde_json::json!({
                        "congruence": false,
                        "reason": e.to_string(),
                    }))
                );
            } else {
                println!("not a congruence: {e}");
            }
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    let payload = match &input {
        InputFile::Solution(_) => {
            let sigma = quotient.op(0).rows();
            let tau = quotient.op(1).rows();
            QuotientPayload::Solution(SolutionFile {
                n: quotient.n(),
                labels: None,
                sigma,
                tau,
            })
        }
        InputFile::Algebra(_) => QuotientPayload::Algebra(AlgebraFile::from_algebra(&quotient)),
    };
    let written = match out {
        Some(path) => {
            let text = match &payload {
                QuotientPayload::Solution(f) => to_json_string(f),
                QuotientPayload::Algebra(f) => to_json_string(f),
            };
            std::fs::write(path, text)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            Some(path.display().to_string())
        }
        None => None,
    };
    let report = QuotientReport {
        n: algebra.n(),
        classes: partition_classes(&partition),
        quotient_size: quotient.n(),
        quotient: payload,
        written,
    };
    emit(cli, &report, || {
        let mut lines = vec![
            format!(
                "classes: {}",
                partition_display(&partition, input.labels())
            ),
            format!("quotient size: {}", report.quotient_size),
        ];
        if let Some(w) = &report.written {
            lines.push(format!("written to {w}"));
        }
        lines.join("\n")
    });
    Ok(0)
}

fn cmd_monoid(cli: &Cli, file: &Path, cap_flag: Option<usize>) -> Result<u8, Failure> {
    let algebra = read_input(file)?.to_algebra()?;
    let cap = monoid_cap_setting(cap_flag);
    let gens = sigma_generators(&algebra);
    let monoid = monoid_closure(algebra.n(), &gens, cap)?;
    let report = MonoidReport::new(algebra.n(), &gens, monoid.elements());
    emit(cli, &report, || {
        format!(
            "n = {}\ngenerators: {}\nmonoid size: {}\nconstant maps onto: {:?}",
            report.n, report.generator_count, report.monoid_size, report.contains_constants
        )
    });
    Ok(0)
}
