use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nker::catalog::{self, Analyzed};
use nker::nker::{cross_check_fields, Definitional, KernelReport, Match, NkerError, Prediction};
use nker::schur::Field;
use nker::verify::{self, Suite};

const OK: u8 = 0;
const USAGE: u8 = 1;
const MISMATCH: u8 = 2;

#[derive(Parser)]
#[command(name = "nker", version, about = "Nonideal kernels of finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse one group, e.g. `nker analyze "Q8 x C7"`.
    Analyze {
        group: String,
        /// Comma separated fields among C, R, Q, Q_p.
        #[arg(long, default_value = "C,R,Q")]
        fields: String,
        #[arg(long)]
        json: bool,
        /// Plain text output (the default).
        #[arg(long, conflicts_with = "json")]
        text: bool,
    },
    /// Build the curated catalog as JSON lines.
    Catalog {
        #[arg(long)]
        out: Option<String>,
        #[arg(long, default_value_t = catalog::DEFAULT_MAX_ORDER)]
        max_order: usize,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
    },
    /// Run an invariant suite with TAP output.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
    },
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    let code = match cli.command {
        Command::Analyze { group, fields, json, .. } => analyze(&group, &fields, json),
        Command::Catalog { out, max_order, jobs } => run_catalog(out.as_deref(), max_order, jobs.max(1)),
        Command::Verify { suite, jobs } => {
            let mut out = io::stdout().lock();
            match verify::run(suite, jobs.max(1), &mut out) {
                Ok(true) => OK,
                Ok(false) => MISMATCH,
                Err(e) => {
                    eprintln!("error: {e}");
                    USAGE
                }
            }
        }
    };
    ExitCode::from(code)
}

fn parse_fields(s: &str) -> Result<Vec<Field>, String> {
    s.split(',')
        .map(|f| f.trim().parse::<Field>().map_err(|e| e.to_string()))
        .collect()
}

fn describe_def(d: &Definitional) -> String {
    match d {
        Definitional::Exact(s) => format!("order {}", s.order()),
        Definitional::Partial { lower, upper } => {
            format!("between orders {} and {}", upper.order(), lower.order())
        }
    }
}

fn print_report(r: &KernelReport, order: usize) {
    let whole = |n: usize| if n == order { " (G)" } else { "" };
    let def_order = r.definitional.exact().map(|s| s.order()).unwrap_or(0);
    println!("NKer_{}: {}{}", r.field, describe_def(&r.definitional), whole(def_order));
    match &r.classifier {
        Some(c) => {
            let pred = match &c.prediction {
                Prediction::Exact(s) => format!("order {}", s.order()),
                Prediction::Nontrivial { lower } => format!("nontrivial, containing order {}", lower.order()),
            };
            let cases = if c.cases.is_empty() { "-".to_string() } else { c.cases.join(",") };
            let m = match r.matches {
                Match::Yes => "match",
                Match::No => "MISMATCH",
                Match::NotComparable => "not comparable",
            };
            println!("  classifier [{cases}]: {pred}  {m}");
        }
        None => println!("  classifier: none for this field"),
    }
    for n in &r.notes {
        println!("  note: {n}");
    }
}

fn analyze(text: &str, fields: &str, as_json: bool) -> u8 {
    let fields = match parse_fields(fields) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return USAGE;
        }
    };
    let a = match Analyzed::new(text) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return USAGE;
        }
    };
    let (reports, mismatch) = match cross_check_fields(&a.analysis, &fields) {
        Ok(r) => (r, false),
        Err(NkerError::MismatchDetected(r)) => (*r, true),
        Err(e) => {
            eprintln!("error: {e}");
            return USAGE;
        }
    };
    if as_json {
        let v = serde_json::json!({
            "group": a.group.name(),
            "order": a.group.order(),
            "r_of_g": nker::nker::subgroup_json(&a.analysis.r_of_g),
            "reports": reports.iter().map(KernelReport::to_json).collect::<Vec<_>>(),
            "verdicts": a.analysis.verdicts.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
        });
        println!("{v}");
    } else {
        let g = &a.group;
        println!("{}  order {}  R(G) order {}", g.name(), g.order(), a.analysis.r_of_g.order());
        for r in &reports {
            print_report(r, g.order());
        }
        println!();
        print!("{:>4} {:>4} {:>3} {:>6}", "chi", "deg", "FS", "m_Q");
        for f in &fields {
            print!(" {:>7}", f.to_string());
        }
        println!();
        for v in &a.analysis.verdicts {
            let fs = a.analysis.table.fs_indicator(v.char_id).unwrap_or(0);
            let mq = match v.m_rational.known() {
                Some(m) => m.to_string(),
                None => format!("{}..{}", v.m_rational.lower(), v.m_rational.upper()),
            };
            print!("{:>4} {:>4} {:>3} {:>6}", v.char_id, v.degree, fs, mq);
            for &f in &fields {
                print!(" {:>7}", format!("{:?}", v.verdict(f)));
            }
            println!();
        }
    }
    if mismatch {
        MISMATCH
    } else {
        OK
    }
}

fn run_catalog(out: Option<&str>, max_order: usize, jobs: usize) -> u8 {
    let mut sink: Box<dyn Write> = match out {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot write {path}: {e}");
                return USAGE;
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let specs = catalog::curated_up_to(max_order);
    let results = catalog::analyze_all(&specs, jobs);
    let (mut ok, mut mismatches, mut errors, mut unresolved) = (0usize, 0usize, 0usize, 0usize);
    for (spec, res) in specs.iter().zip(&results) {
        let line = match res {
            Ok(a) => {
                let rec = catalog::record(a);
                if rec.mismatch {
                    mismatches += 1;
                    eprintln!("mismatch: {spec}");
                } else {
                    ok += 1;
                }
                unresolved += rec.unresolved_rational;
                rec.json
            }
            Err(e) => {
                errors += 1;
                eprintln!("error: {spec}: {e}");
                catalog::error_record(spec, e)
            }
        };
        if let Err(e) = writeln!(sink, "{line}") {
            eprintln!("error: {e}");
            return USAGE;
        }
    }
    if let Err(e) = sink.flush() {
        eprintln!("error: {e}");
        return USAGE;
    }
    eprintln!(
        "entries {}  ok {ok}  mismatches {mismatches}  errors {errors}  unresolved Q-verdicts {unresolved}",
        specs.len()
    );
    if mismatches > 0 || errors > 0 {
        MISMATCH
    } else {
        OK
    }
}
