//! `evalogic`: logical consistency checks for ensembles of binary classifiers.
//!
//! Exit status: 0 success, 1 usage or I/O error, 2 alarm triggered, 3
//! verification found violations.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand};
use evalogic::alarm::{restrict_qa_range, run_alarm, AlarmMode, AlarmTrace};
use evalogic::axioms::{pspace_stats, sketch_delta};
use evalogic::independent::{majority_vote_prevalence, solve_sketch};
use evalogic::io::ingest::{ingest, IngestFormat, LabelMap};
use evalogic::io::sketch_file::{load_sketch, sketch_to_json};
use evalogic::io::svg::render_traces;
use evalogic::io::synthetic::{decisions_to_csv, generate_synthetic, GeneratorParams};
use evalogic::io::trace::{emit_trace, TraceFormat};
use evalogic::io::write_atomic;
use evalogic::model::{sketch_from_decisions, EvaluationSketch, FlipMode, SafetySpec};
use evalogic::oracle::{check_summary, enumerate_evaluations, evaluation_count, Claims, DEFAULT_BUDGET};
use evalogic::rational::{format_rational, parse_rational};

const EXIT_USAGE: u8 = 1;
const EXIT_TRIGGERED: u8 = 2;
const EXIT_VIOLATIONS: u8 = 3;

#[derive(Parser)]
#[command(name = "evalogic", version, about = "Logical consistency checks for ensembles of binary classifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce per-item decisions (CSV or JSON Lines) to a sketch file
    Ingest(IngestArgs),
    /// Print marginals, pair counts and, with a truth split, label statistics
    Sketch {
        sketch: PathBuf,
        /// Print JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Scan every assumed prevalence and report whether the spec can hold
    Alarm(AlarmArgs),
    /// Count or list the evaluations of one classifier on a test of size Q
    Enumerate {
        #[arg(long)]
        q: i64,
        #[arg(long)]
        count_only: bool,
    },
    /// Check a sketch's consistency and, optionally, claimed statistics
    Verify {
        sketch: PathBuf,
        #[arg(long)]
        claims: Option<PathBuf>,
        /// Largest number of split combinations to enumerate
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Solve for prevalence and accuracies assuming three error-independent classifiers
    SolveIndependent { sketch: PathBuf },
    /// Sample a decision table from error-independent classifiers
    Generate {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        q: usize,
        /// Write a sketch file instead of per-item decisions
        #[arg(long)]
        sketch: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Swap one classifier's labels, globally or on one true label's items
    Flip {
        sketch: PathBuf,
        #[arg(long)]
        classifier: String,
        #[arg(long, default_value = "global")]
        mode: FlipMode,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct IngestArgs {
    input: PathBuf,
    /// csv or jsonl; guessed from the extension when omitted
    #[arg(long)]
    format: Option<IngestFormat>,
    /// Source label mapping, e.g. `--map incorrect=a --map correct=b`;
    /// without any, `a`/`b` map to themselves
    #[arg(long = "map", value_name = "SOURCE=LABEL")]
    maps: Vec<String>,
    /// Classifier roster and order, comma separated
    #[arg(long, value_delimiter = ',')]
    classifiers: Option<Vec<String>>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("threshold").args(["spec_per_label", "spec_overall"])))]
#[command(group(ArgGroup::new("mode").args(["pair", "ensemble"])))]
struct AlarmArgs {
    sketch: PathBuf,
    /// Least accuracy on each label (default 1/2)
    #[arg(long, value_name = "T")]
    spec_per_label: Option<String>,
    /// Least overall accuracy
    #[arg(long, value_name = "T")]
    spec_overall: Option<String>,
    /// Require accuracy above the threshold (default)
    #[arg(long, overrides_with = "no_strict")]
    strict: bool,
    /// Accept accuracy equal to the threshold
    #[arg(long)]
    no_strict: bool,
    /// Check a pair of classifiers; repeat for several pairs
    #[arg(long, num_args = 2, value_names = ["I", "J"], action = clap::ArgAction::Append)]
    pair: Vec<String>,
    /// Check all classifiers together (default)
    #[arg(long)]
    ensemble: bool,
    /// Also apply the pair axiom within each slice
    #[arg(long)]
    refine_pairs: bool,
    /// Only consider prevalence counts in [LO, HI]
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    qa_range: Option<Vec<i64>>,
    /// Write the trace (.csv, .json or .svg)
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write an SVG of all traces
    #[arg(long)]
    plot: Option<PathBuf>,
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, text.as_bytes()).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<EvaluationSketch> {
    load_sketch(path).with_context(|| format!("reading sketch {}", path.display()))
}

fn cmd_ingest(args: IngestArgs) -> Result<u8> {
    let format = match args.format {
        Some(f) => f,
        None => IngestFormat::from_path(&args.input)
            .context("cannot tell the input format from its extension; pass --format")?,
    };
    let labels = if args.maps.is_empty() {
        LabelMap::identity()
    } else {
        let mut m = LabelMap::new();
        for entry in &args.maps {
            let (src, label) = LabelMap::parse_entry(entry)?;
            m.insert(src, label);
        }
        m
    };
    let report = ingest(&args.input, format, &labels, args.classifiers.as_deref())
        .with_context(|| format!("ingesting {}", args.input.display()))?;
    for d in &report.dropped {
        eprintln!("dropped row {} (item {}): {}", d.row, d.item_id, d.reason);
    }
    let sketch = sketch_from_decisions(&report.table)?;
    eprintln!(
        "{} items kept, {} dropped, {} classifiers",
        report.table.rows.len(),
        report.dropped.len(),
        sketch.n()
    );
    write_output(args.out.as_deref(), &sketch_to_json(&sketch))?;
    Ok(0)
}

fn cmd_sketch(path: &Path, json: bool) -> Result<u8> {
    let s = load(path)?;
    s.ensure_valid()?;
    let stats = if s.has_truth() { Some(pspace_stats(&s)?) } else { None };
    if json {
        let mut doc = serde_json::json!({
            "q": s.q(),
            "marginals": s.marginal_summary().classifiers.iter()
                .map(|(id, m)| (id.clone(), serde_json::json!([m.r_a, m.r_b])))
                .collect::<serde_json::Map<_, _>>(),
        });
        if let Some(stats) = &stats {
            doc["label_statistics"] = serde_json::to_value(stats)?;
        }
        println!("{}", serde_json::to_string_pretty(&doc)?);
        return Ok(0);
    }
    println!("Q = {}", s.q());
    println!("{:<16} {:>8} {:>8}", "classifier", "R_a", "R_b");
    for (id, m) in s.marginal_summary().classifiers {
        println!("{id:<16} {:>8} {:>8}", m.r_a, m.r_b);
    }
    let ids = s.classifier_ids();
    if s.n() >= 2 {
        println!();
        println!("{:<24} {:>6} {:>6} {:>6} {:>6}  delta", "pair", "aa", "ab", "ba", "bb");
        for i in 0..s.n() {
            for j in i + 1..s.n() {
                let c = s.pair_counts_at(i, j);
                let d = sketch_delta(&s, &ids[i], &ids[j])?;
                let name = format!("{} + {}", ids[i], ids[j]);
                println!(
                    "{name:<24} {:>6} {:>6} {:>6} {:>6}  {}",
                    c.aa,
                    c.ab,
                    c.ba,
                    c.bb,
                    format_rational(&d)
                );
            }
        }
    }
    if let Some(stats) = stats {
        let show = |x: &Option<evalogic::Rational>| x.as_ref().map(format_rational).unwrap_or_else(|| "undefined".into());
        println!();
        println!("true Q_a = {} (P_a = {})", s.true_q_a().unwrap_or(0), format_rational(&stats.p_a));
        for c in &stats.classifiers {
            println!("{:<16} pi_a = {:<12} pi_b = {}", c.id, show(&c.pi_a), show(&c.pi_b));
        }
        for p in &stats.pairs {
            println!(
                "{:<24} gamma_a = {:<12} gamma_b = {}",
                format!("{} + {}", p.i, p.j),
                show(&p.gamma_a),
                show(&p.gamma_b)
            );
        }
    }
    Ok(0)
}

fn safety_spec(args: &AlarmArgs) -> Result<SafetySpec> {
    let strict = !args.no_strict;
    let spec = match (&args.spec_per_label, &args.spec_overall) {
        (_, Some(t)) => SafetySpec::overall(parse_rational(t)?, strict)?,
        (Some(t), None) => SafetySpec::per_label(parse_rational(t)?, strict)?,
        (None, None) => SafetySpec::per_label(evalogic::rational::ratio(1, 2), strict)?,
    };
    Ok(spec)
}

fn numbered(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{suffix}"),
    };
    path.with_file_name(name)
}

fn cmd_alarm(args: AlarmArgs) -> Result<u8> {
    let s = load(&args.sketch)?;
    let spec = safety_spec(&args)?;
    let modes: Vec<AlarmMode> = if args.pair.is_empty() {
        vec![AlarmMode::Ensemble]
    } else {
        args.pair
            .chunks(2)
            .map(|p| AlarmMode::Pair(p[0].clone(), p[1].clone()))
            .collect()
    };
    let mut traces: Vec<AlarmTrace> = Vec::with_capacity(modes.len());
    for mode in &modes {
        let mut t = run_alarm(&s, &spec, mode, args.refine_pairs)?;
        if let Some(r) = &args.qa_range {
            t = restrict_qa_range(&t, r[0], r[1])?;
        }
        traces.push(t);
    }
    for t in &traces {
        let safe: Vec<i64> = t.slices.iter().filter(|x| x.safe_exists).map(|x| x.q_a).collect();
        let span = match (safe.first(), safe.last()) {
            (Some(lo), Some(hi)) => format!(", safe Q_a in [{lo}, {hi}]"),
            _ => String::new(),
        };
        println!(
            "{}: {} ({} of {} slices safe{span})",
            t.series_name(),
            if t.is_triggered() { "TRIGGERED" } else { "not triggered" },
            safe.len(),
            t.slices.len()
        );
    }
    if let Some(path) = &args.trace {
        let format = TraceFormat::from_path(path);
        for t in &traces {
            let target = if traces.len() == 1 {
                path.clone()
            } else {
                numbered(path, &t.classifiers.join("-"))
            };
            emit_trace(t, format, &target).with_context(|| format!("writing {}", target.display()))?;
        }
    }
    if let Some(path) = &args.plot {
        write_atomic(path, render_traces(&traces).as_bytes())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if traces.iter().any(AlarmTrace::is_triggered) {
        EXIT_TRIGGERED
    } else {
        0
    })
}

fn cmd_enumerate(q: i64, count_only: bool) -> Result<u8> {
    if q < 0 {
        bail!("Q must be non-negative");
    }
    if count_only {
        println!("{}", evaluation_count(q));
        return Ok(0);
    }
    let mut out = std::io::BufWriter::new(std::io::stdout().lock());
    writeln!(out, "q_a,r_aia,r_bib")?;
    for (r_aia, r_bib, q_a) in enumerate_evaluations(q) {
        writeln!(out, "{q_a},{r_aia},{r_bib}")?;
    }
    out.flush()?;
    Ok(0)
}

fn cmd_verify(path: &Path, claims: Option<&Path>, budget: u128) -> Result<u8> {
    let s = load(path)?;
    let violations = s.validate();
    if !violations.is_empty() {
        for v in &violations {
            println!("violation: {v}");
        }
        return Ok(EXIT_VIOLATIONS);
    }
    let Some(claims_path) = claims else {
        println!("sketch is consistent");
        return Ok(0);
    };
    let text = std::fs::read_to_string(claims_path)
        .with_context(|| format!("reading claims {}", claims_path.display()))?;
    let claims: Claims = serde_json::from_str(&text).context("parsing claims")?;
    let report = check_summary(&s, &claims, budget);
    for v in &report.violations {
        println!("violation: {v}");
    }
    match report.variety_empty {
        Some(true) => println!("no ground truth is consistent with the claims"),
        Some(false) => println!("claims are consistent with at least one ground truth"),
        None => println!("enumeration skipped (budget exceeded); checked the axioms only"),
    }
    Ok(if report.is_clean() { 0 } else { EXIT_VIOLATIONS })
}

fn cmd_solve(path: &Path) -> Result<u8> {
    let s = load(path)?;
    let solution = solve_sketch(&s)?;
    let mut doc = serde_json::to_value(&solution)?;
    doc["majority_vote_prevalence"] = format_rational(&majority_vote_prevalence(&s)?).into();
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(0)
}

fn cmd_generate(seed: u64, params: &Path, q: usize, sketch: bool, out: Option<&Path>) -> Result<u8> {
    let text = std::fs::read_to_string(params).with_context(|| format!("reading {}", params.display()))?;
    let params: GeneratorParams = serde_json::from_str(&text).context("parsing generator parameters")?;
    let table = generate_synthetic(&params, q, seed)?;
    let text = if sketch {
        sketch_to_json(&sketch_from_decisions(&table)?)
    } else {
        decisions_to_csv(&table)
    };
    write_output(out, &text)?;
    Ok(0)
}

fn cmd_flip(path: &Path, classifier: &str, mode: FlipMode, out: Option<&Path>) -> Result<u8> {
    let s = load(path)?;
    write_output(out, &sketch_to_json(&s.flip_labels(classifier, mode)?))?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Ingest(args) => cmd_ingest(args),
        Command::Sketch { sketch, json } => cmd_sketch(&sketch, json),
        Command::Alarm(args) => cmd_alarm(args),
        Command::Enumerate { q, count_only } => cmd_enumerate(q, count_only),
        Command::Verify { sketch, claims, budget } => cmd_verify(&sketch, claims.as_deref(), budget),
        Command::SolveIndependent { sketch } => cmd_solve(&sketch),
        Command::Generate {
            seed,
            params,
            q,
            sketch,
            out,
        } => cmd_generate(seed, &params, q, sketch, out.as_deref()),
        Command::Flip {
            sketch,
            classifier,
            mode,
            out,
        } => cmd_flip(&sketch, &classifier, mode, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
