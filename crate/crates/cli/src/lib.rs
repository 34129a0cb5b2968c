//! Command-line front end: verification, identity-chain audit, searches and
//! catalog export.
//!
//! Exit codes: 0 on success, 1 on domain errors (for example a non-Hadamard
//! row given to `audit`), 2 on usage errors. JSON goes to stdout; logs and
//! run metadata go to stderr.

use std::io::Write;
use std::path::PathBuf;

use circhad::audit::{full_audit, AuditMode, AuditReport};
use circhad::hadamard::{
    build_s, catalog, is_doubly_stochastic, is_hadamard, normalize_sign, regular_profile,
};
use circhad::search::{
    pacf, search_barker, search_circulant_hadamard, theoretical_filter, SearchOptions, SearchReport,
};
use circhad::{Error, SignVector};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "circhad",
    version,
    about = "Circulant Hadamard verification, audit and search"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value = "human", global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hadamard test, regular profile and the stochastic matrix S of a row.
    Verify {
        /// `1,-1,-1,-1` or `+---`.
        #[arg(long, allow_hyphen_values = true)]
        row: String,
    },
    /// Replay the identity chain on a circulant Hadamard row.
    Audit {
        #[arg(long, allow_hyphen_values = true)]
        row: String,
        #[arg(long, value_enum, default_value = "strict")]
        mode: ModeArg,
    },
    /// Exhaustive circulant Hadamard search at one order.
    Search {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Enumerate orders the theoretical filter excludes as well.
        #[arg(long)]
        confirm_excluded: bool,
        /// State file to resume from and write progress to.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        node_budget: Option<u64>,
        #[arg(long)]
        progress_every: Option<u64>,
        #[arg(long, default_value_t = 256)]
        shards: usize,
        /// Plain enumeration without autocorrelation pruning.
        #[arg(long)]
        no_pruning: bool,
    },
    /// Exhaustive Barker sequence search at one length.
    Barker {
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        node_budget: Option<u64>,
        #[arg(long)]
        no_pruning: bool,
    },
    /// The ten known circulant Hadamard matrices.
    Catalog,
    /// Classify an order before any search.
    Filter {
        #[arg(long)]
        order: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Extended,
}

impl From<ModeArg> for AuditMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => AuditMode::Strict,
            ModeArg::Extended => AuditMode::Extended,
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter("CHL_LOG"))
        .target(env_logger::Target::Stderr)
        .try_init();

    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return 2;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

type CmdResult = Result<(), Error>;

fn emit_json(out: &mut dyn Write, value: &impl serde::Serialize) -> CmdResult {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match &cli.command {
        Command::Verify { row } => verify(cli.format, &SignVector::parse(row)?, out),
        Command::Audit { row, mode } => {
            let report = full_audit(&SignVector::parse(row)?, (*mode).into())?;
            print_audit(cli.format, &report, out)
        }
        Command::Search {
            order,
            workers,
            confirm_excluded,
            checkpoint,
            node_budget,
            progress_every,
            shards,
            no_pruning,
        } => {
            let options = SearchOptions {
                worker_count: *workers,
                node_budget: *node_budget,
                confirm_excluded_orders: *confirm_excluded,
                emit_progress_every: *progress_every,
                pruning: !no_pruning,
                checkpoint: checkpoint.clone(),
                shard_count: *shards,
            };
            let report = search_circulant_hadamard(*order, &options).map_err(|e| match e {
                Error::Partial { reason, state } => {
                    let where_ = checkpoint
                        .as_ref()
                        .map(|p| format!("; state saved to {}", p.display()))
                        .unwrap_or_default();
                    Error::Partial {
                        reason: format!("{reason}{where_}"),
                        state,
                    }
                }
                other => other,
            })?;
            print_search(cli.format, &report, out, err)
        }
        Command::Barker {
            length,
            workers,
            node_budget,
            no_pruning,
        } => {
            let options = SearchOptions {
                worker_count: *workers,
                node_budget: *node_budget,
                pruning: !no_pruning,
                ..SearchOptions::default()
            };
            let report = search_barker(*length, &options)?;
            print_search(cli.format, &report, out, err)
        }
        Command::Catalog => {
            let entries = catalog();
            match cli.format {
                Format::Json => emit_json(out, &entries),
                Format::Csv => {
                    writeln!(out, "name,order,first_row")?;
                    for e in &entries {
                        writeln!(out, "{},{},{}", e.name, e.order, e.first_row.compact())?;
                    }
                    Ok(())
                }
                Format::Human => {
                    for e in &entries {
                        writeln!(
                            out,
                            "{:<4} order {}  circ({})",
                            e.name, e.order, e.first_row
                        )?;
                    }
                    Ok(())
                }
            }
        }
        Command::Filter { order } => {
            let verdict = theoretical_filter(*order)?;
            match cli.format {
                Format::Json => emit_json(out, &verdict),
                Format::Csv => {
                    writeln!(out, "order,status,reason")?;
                    writeln!(
                        out,
                        "{},{},{}",
                        verdict.order,
                        verdict.status.as_str(),
                        csv_field(&verdict.reason)
                    )?;
                    Ok(())
                }
                Format::Human => {
                    writeln!(
                        out,
                        "order {}: {} ({})",
                        verdict.order,
                        verdict.status.as_str(),
                        verdict.reason
                    )?;
                    Ok(())
                }
            }
        }
    }
}

fn verify(format: Format, row: &SignVector, out: &mut dyn Write) -> CmdResult {
    let hadamard = is_hadamard(row);
    let profile = regular_profile(row);
    let spectrum = pacf(row);
    // S is only defined for rows with a regular profile, or order 1.
    let s = normalize_sign(row).ok().and_then(|r| build_s(&r).ok());
    let stochastic = s.as_ref().map(is_doubly_stochastic);

    match format {
        Format::Json => emit_json(
            out,
            &json!({
                "row": row,
                "order": row.len(),
                "is_hadamard": hadamard,
                "pacf": spectrum.values,
                "profile": profile,
                "s": s,
                "s_doubly_stochastic": stochastic,
            }),
        ),
        Format::Csv => {
            writeln!(out, "field,value")?;
            writeln!(out, "row,{}", row.compact())?;
            writeln!(out, "order,{}", row.len())?;
            writeln!(out, "is_hadamard,{hadamard}")?;
            if let Some(p) = profile {
                writeln!(out, "h,{}", p.h)?;
                writeln!(out, "sum_sign,{}", p.sum_sign)?;
                writeln!(out, "positive_count,{}", p.positive_count)?;
                writeln!(out, "negative_count,{}", p.negative_count)?;
            }
            if let Some(s) = &s {
                writeln!(out, "s,{}", csv_field(&s.to_string()))?;
                writeln!(out, "s_doubly_stochastic,{}", stochastic.unwrap_or(false))?;
            }
            Ok(())
        }
        Format::Human => {
            writeln!(out, "row:        ({row}), order {}", row.len())?;
            writeln!(out, "hadamard:   {hadamard}")?;
            let lags: Vec<String> = spectrum.values.iter().map(i64::to_string).collect();
            writeln!(out, "pacf:       {}", lags.join(" "))?;
            match profile {
                Some(p) => writeln!(
                    out,
                    "profile:    h={} sum={}{} positive={} negative={}",
                    p.h,
                    p.sum_sign,
                    2 * p.h,
                    p.positive_count,
                    p.negative_count
                )?,
                None => writeln!(out, "profile:    none")?,
            }
            if let Some(s) = &s {
                writeln!(out, "S:          circ{s}")?;
                writeln!(out, "doubly stochastic: {}", stochastic.unwrap_or(false))?;
            }
            Ok(())
        }
    }
}

fn print_audit(format: Format, report: &AuditReport, out: &mut dyn Write) -> CmdResult {
    match format {
        Format::Json => emit_json(out, report),
        Format::Csv => {
            writeln!(out, "step_id,verdict,entry,lhs,rhs,detail")?;
            for step in &report.steps {
                let (entry, lhs, rhs, detail) = match &step.witness {
                    Some(w) => (
                        w.entry.map(|(i, j)| format!("{i}:{j}")).unwrap_or_default(),
                        w.lhs.clone(),
                        w.rhs.clone(),
                        w.detail.clone(),
                    ),
                    None => Default::default(),
                };
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    step.step_id,
                    step.verdict,
                    entry,
                    csv_field(&lhs),
                    csv_field(&rhs),
                    csv_field(&detail)
                )?;
            }
            Ok(())
        }
        Format::Human => {
            writeln!(
                out,
                "audit of ({}) h={} mode={:?}",
                report.input_row, report.h, report.mode
            )?;
            for step in &report.steps {
                write!(out, "  {:<15} {}", step.step_id.as_str(), step.verdict)?;
                if let Some(w) = &step.witness {
                    write!(out, "  [{}: {} vs {}]", w.detail, w.lhs, w.rhs)?;
                }
                writeln!(out)?;
            }
            writeln!(out, "{}", report.conclusion)?;
            Ok(())
        }
    }
}

fn print_search(
    format: Format,
    report: &SearchReport,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    match format {
        Format::Json => {
            emit_json(out, &report.certificate(false))?;
            writeln!(
                err,
                "{}",
                json!({ "metadata": { "duration_ms": report.duration_ms } })
            )?;
            Ok(())
        }
        Format::Csv => {
            writeln!(out, "order,mode,survivor,raw_count")?;
            for s in &report.survivors {
                writeln!(
                    out,
                    "{},{},{},{}",
                    report.order,
                    report.mode.as_str(),
                    s.compact(),
                    report.raw_count
                )?;
            }
            Ok(())
        }
        Format::Human => {
            writeln!(
                out,
                "{} search, order {}",
                report.mode.as_str(),
                report.order
            )?;
            if let Some(f) = &report.filter {
                writeln!(out, "filter:     {} ({})", f.status.as_str(), f.reason)?;
            }
            if report.confirmed_empirically {
                writeln!(
                    out,
                    "enumerated anyway, weight classes 0..={}",
                    report.order / 2
                )?;
            }
            writeln!(out, "raw_count:  {}", report.raw_count)?;
            writeln!(
                out,
                "survivors:  {} ({})",
                report.survivors.len(),
                report.equivalence_group.as_str()
            )?;
            for s in &report.survivors {
                writeln!(out, "  {}", s.compact())?;
            }
            let c = report.counters;
            writeln!(
                out,
                "nodes {}  pruned by weight {}  pruned by partial correlation {}  {} ms",
                c.nodes_visited, c.pruned_by_weight, c.pruned_by_partial_pacf, report.duration_ms
            )?;
            Ok(())
        }
    }
}
