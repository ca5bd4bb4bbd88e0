//! `collatz` — CLI surface for the stopping-time toolkit.
//!
//! Exit codes: 0 success, 1 usage or runtime error, 2 a formula violation
//! (or non-terminating trajectory) was found, so CI can alarm on a
//! counterexample.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use collatz_core::alpha::{alpha_curve, classify_range};
use collatz_core::emit;
use collatz_core::formula::{check_formula, residue};
use collatz_core::histogram::HistogramConfig;
use collatz_core::sieve::{allowed_stopping_times, propagate_prohibited};
use collatz_core::trajectory::{default_max_iterations, trajectory_stats_only};
use collatz_core::verifier::{verify_random, verify_range, Finding, VerificationReport, VerifyOptions};
use collatz_core::{parse_natural, Error, Natural};

#[derive(Parser)]
#[command(name = "collatz", version, about = "Collatz stopping-time toolkit")]
struct Cli {
    /// Divergence guard: cap on map applications per trajectory
    /// (default: 10 * bitlen(n)^2 + 10^6).
    #[arg(long, global = true)]
    max_iterations: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetFormat {
    Csv,
    Jsonl,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Stopping profile of one number: S, alpha, even steps, residue,
    /// formula verdict.
    Profile { n: String },

    /// Verify the formula for every n in [start, end].
    VerifyRange {
        #[arg(long)]
        start: String,
        #[arg(long)]
        end: String,
        #[command(flatten)]
        campaign: CampaignArgs,
    },

    /// Verify the formula for random integers (bit length uniform in
    /// [1, max-bits], then uniform bits with the top bit forced).
    VerifyRandom {
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 16_384)]
        max_bits: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        campaign: CampaignArgs,
    },

    /// Emit the S(N) scatter dataset plus one constant-alpha curve file
    /// per alpha.
    Scatter {
        #[arg(long)]
        n_max: u64,
        #[arg(long, default_value_t = 20)]
        alpha_max: u64,
        /// Directory for scatter.csv and curve_alpha_<a>.csv.
        #[arg(long)]
        out_dir: PathBuf,
    },

    /// Emit the trajectory of n as (step, term, S, alpha) rows.
    Trajectory {
        n: String,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Allowed and prohibited stopping times for n within [ceil_log2(n), bound].
    Prohibited {
        n: String,
        #[arg(long)]
        bound: u64,
        #[arg(long, value_enum, default_value_t = SetFormat::Csv)]
        format: SetFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Propagate prohibited stopping times from seeds through the step
    /// relations.
    Sieve {
        /// Seed as n:bound, repeatable.
        #[arg(long = "seed", required = true)]
        seeds: Vec<String>,
        #[arg(long, default_value_t = 1)]
        depth: u64,
        #[arg(long, value_enum, default_value_t = SetFormat::Csv)]
        format: SetFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Constant-alpha class table for n in [1, limit].
    AlphaTable {
        #[arg(long)]
        limit: u64,
        #[arg(long, default_value_t = 19)]
        alpha_max: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct CampaignArgs {
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long, default_value_t = 65_536)]
    chunk: u64,
    /// Residue histogram bins over [0, 0.326) plus one overflow bin.
    #[arg(long, default_value_t = 652)]
    bins: u32,
    /// Checkpoint file to append to / resume from.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Stop at the first batch containing a finding.
    #[arg(long)]
    fail_fast: bool,
    /// Write the residue histogram CSV here.
    #[arg(long)]
    histogram_out: Option<PathBuf>,
    /// Decimal places for histogram bin bounds.
    #[arg(long, default_value_t = 12)]
    precision: usize,
}

impl CampaignArgs {
    fn to_options(&self, max_iterations: Option<u64>) -> VerifyOptions {
        VerifyOptions {
            workers: self.workers,
            chunk: self.chunk,
            histogram: HistogramConfig {
                bins: self.bins,
                ..Default::default()
            },
            max_iterations,
            fail_fast: self.fail_fast,
            checkpoint: self.checkpoint.clone(),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}

fn out_writer(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<i32, Error> {
    let cap = cli.max_iterations;
    match cli.command {
        Command::Profile { n } => {
            let n = parse_natural(&n)?;
            let max_iter = cap.unwrap_or_else(|| default_max_iterations(&n));
            let stats = trajectory_stats_only(&n, max_iter)?;
            let verdict = check_formula(&stats)?;
            let eps = residue(&stats);
            println!("n = {n}");
            println!("S = {}", stats.s);
            println!("alpha = {}", stats.alpha);
            println!("even_steps = {}", stats.even_steps);
            println!("eps = {eps:.12}");
            if verdict.holds() {
                println!("verdict = holds");
                Ok(0)
            } else {
                println!("verdict = violated ({verdict:?})");
                Ok(2)
            }
        }

        Command::VerifyRange { start, end, campaign } => {
            let start = parse_natural(&start)?;
            let end = parse_natural(&end)?;
            let report = verify_range(&start, &end, &campaign.to_options(cap))?;
            finish_campaign(&report, &campaign)
        }

        Command::VerifyRandom {
            samples,
            max_bits,
            seed,
            campaign,
        } => {
            let report = verify_random(samples, max_bits, seed, &campaign.to_options(cap))?;
            finish_campaign(&report, &campaign)
        }

        Command::Scatter {
            n_max,
            alpha_max,
            out_dir,
        } => {
            std::fs::create_dir_all(&out_dir)?;
            let mut points = Vec::with_capacity(n_max as usize);
            for n in 1..=n_max {
                let big = Natural::from(n);
                let max_iter = cap.unwrap_or_else(|| default_max_iterations(&big));
                let stats = trajectory_stats_only(&big, max_iter)?;
                points.push((n, stats.s));
            }
            let mut w = BufWriter::new(File::create(out_dir.join("scatter.csv"))?);
            emit::write_scatter_csv(&points, &mut w)?;
            for alpha in 0..=alpha_max {
                let curve = alpha_curve(alpha, n_max)?;
                let mut w =
                    BufWriter::new(File::create(out_dir.join(format!("curve_alpha_{alpha}.csv")))?);
                emit::write_curve_csv(alpha, &curve, &mut w)?;
            }
            Ok(0)
        }

        Command::Trajectory { n, out } => {
            let n = parse_natural(&n)?;
            let max_iter = cap.unwrap_or_else(|| default_max_iterations(&n));
            let path = emit::trajectory_path(&n, max_iter)?;
            let mut w = out_writer(&out)?;
            emit::write_trajectory_csv(&path, &mut w)?;
            Ok(0)
        }

        Command::Prohibited { n, bound, format, out } => {
            let n = parse_natural(&n)?;
            let sets = allowed_stopping_times(&n, bound)?;
            let mut w = out_writer(&out)?;
            match format {
                SetFormat::Csv => {
                    emit::write_sieve_csv_header(&mut w)?;
                    emit::write_sieve_csv_row(
                        &sets.n,
                        sets.window_lo,
                        sets.bound,
                        &sets.allowed,
                        &sets.prohibited,
                        &mut w,
                    )?;
                }
                SetFormat::Jsonl => {
                    emit::write_sieve_jsonl_row(
                        &sets.n,
                        sets.window_lo,
                        sets.bound,
                        &sets.allowed,
                        &sets.prohibited,
                        &mut w,
                    )?;
                }
            }
            Ok(0)
        }

        Command::Sieve {
            seeds,
            depth,
            format,
            out,
        } => {
            let seeds = seeds
                .iter()
                .map(|s| parse_seed(s))
                .collect::<Result<Vec<_>, Error>>()?;
            let entries = propagate_prohibited(&seeds, depth)?;
            let mut w = out_writer(&out)?;
            if matches!(format, SetFormat::Csv) {
                emit::write_sieve_csv_header(&mut w)?;
            }
            for entry in entries.values() {
                // Allowed = the directly expressible values not ruled out
                // by inherited knowledge.
                let direct = allowed_stopping_times(&entry.n, entry.bound)?;
                let allowed = direct
                    .allowed
                    .difference(&entry.prohibited)
                    .copied()
                    .collect();
                match format {
                    SetFormat::Csv => emit::write_sieve_csv_row(
                        &entry.n,
                        entry.window_lo,
                        entry.bound,
                        &allowed,
                        &entry.prohibited,
                        &mut w,
                    )?,
                    SetFormat::Jsonl => emit::write_sieve_jsonl_row(
                        &entry.n,
                        entry.window_lo,
                        entry.bound,
                        &allowed,
                        &entry.prohibited,
                        &mut w,
                    )?,
                }
            }
            Ok(0)
        }

        Command::AlphaTable {
            limit,
            alpha_max,
            format,
            out,
        } => {
            let classification = classify_range(limit, alpha_max, cap)?;
            let mut w = out_writer(&out)?;
            match format {
                TableFormat::Text => emit::write_alpha_table_text(&classification.classes, &mut w)?,
                TableFormat::Csv => emit::write_alpha_table_csv(&classification.classes, &mut w)?,
            }
            if classification.findings.is_empty() {
                Ok(0)
            } else {
                for f in &classification.findings {
                    eprintln!("finding: {f:?}");
                }
                Ok(2)
            }
        }
    }
}

fn parse_seed(s: &str) -> Result<(Natural, u64), Error> {
    let (n, bound) = s
        .split_once(':')
        .ok_or_else(|| Error::InvalidNatural(format!("seed {s:?}, expected n:bound")))?;
    let n = parse_natural(n)?;
    let bound = bound
        .parse()
        .map_err(|_| Error::InvalidNatural(format!("bound in seed {s:?}")))?;
    Ok((n, bound))
}

fn finish_campaign(report: &VerificationReport, args: &CampaignArgs) -> Result<i32, Error> {
    if let Some(path) = &args.histogram_out {
        let mut w = BufWriter::new(File::create(path)?);
        emit::write_histogram_csv(&report.histogram, args.precision, &mut w)?;
    }
    println!("campaign: {:?}", report.campaign);
    println!("checked: {}", report.checked);
    println!("findings: {}", report.findings.len());
    for f in report.findings.iter().take(20) {
        println!("  {f:?}");
    }
    if let Some(min) = &report.histogram.min {
        println!("min_eps: {:.6} at n = {}", min.eps, min.n);
    }
    if let Some(max) = &report.histogram.max {
        println!("max_eps: {:.6} at n = {}", max.eps, max.n);
    }
    println!("overflow_bin: {}", report.histogram.overflow_count());
    println!(
        "wall_time: {:.3}s ({:.0} n/s)",
        report.wall_time,
        report.checked as f64 / report.wall_time.max(1e-9)
    );
    let violation = report.findings.iter().any(|f| {
        matches!(
            f,
            Finding::FormulaViolation { .. } | Finding::NonTermination { .. }
        )
    });
    Ok(if violation { 2 } else { 0 })
}
