//! `braidhash` command-line front end.

mod gate;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use braidhash::compiler::{Compiler, HashParams};
use braidhash::icosa::IcosaGroup;
use braidhash::pseudo::{level_file_name, resolve_table_dir, table_file_name, PseudoGroupTable};
use braidhash::search::{
    brute_force_family, build_table, TableMethod, WordFamily, MAX_EXHAUSTIVE_LENGTH, TABLE_FAMILY,
};
use braidhash::stats::{decay_experiment, fit_wd, run_suite, SampleSet, MIN_FIT_SAMPLES};
use braidhash::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

use report::*;

#[derive(Parser)]
#[command(name = "braidhash", version, about = "Compile single-qubit gates into Fibonacci-anyon braids")]
struct Cli {
    /// Table directory (default: $BRAIDHASH_TABLES, then ./tables).
    #[arg(long, global = true)]
    table_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build, inspect and bootstrap group tables.
    #[command(subcommand)]
    Tables(TablesCmd),
    /// Compile one gate.
    Compile(CompileArgs),
    /// Exhaustive search benchmarks.
    #[command(subcommand)]
    Bench(BenchCmd),
    /// Random-target suites.
    #[command(subcommand)]
    Suite(SuiteCmd),
    /// Statistics on saved samples.
    #[command(subcommand)]
    Stats(StatsCmd),
}

#[derive(Subcommand)]
enum TablesCmd {
    /// Best braid of length ≤ N for every group element.
    Build {
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long, default_value_t = TABLE_FAMILY)]
        family: WordFamily,
        /// Output file (default: <table-dir>/icosa-N<length>.tbl).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a table file.
    Check { file: PathBuf },
    /// Build the refinement table for `level` by compiling the group with
    /// the levels below it.
    Bootstrap {
        #[arg(long, default_value_t = 2)]
        level: usize,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Exhaustive when the word count allows it, otherwise meet-in-the-middle.
    Auto,
    Exhaustive,
    Mitm,
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    /// Coarse table length l.
    #[arg(short = 'l', long, default_value_t = 8)]
    coarse_length: usize,
    /// Coarse factors m.
    #[arg(short = 'm', long, default_value_t = 3)]
    coarse_factors: usize,
    /// Fine table length L.
    #[arg(short = 'L', long, default_value_t = 24)]
    fine_length: usize,
    /// Fine factors n.
    #[arg(short = 'n', long, default_value_t = 3)]
    fine_factors: usize,
    /// Refinement passes q.
    #[arg(short = 'q', long, default_value_t = 1)]
    iterations: usize,
}

impl From<ParamArgs> for HashParams {
    fn from(a: ParamArgs) -> Self {
        HashParams {
            coarse_length: a.coarse_length,
            coarse_factors: a.coarse_factors,
            fine_length: a.fine_length,
            fine_factors: a.fine_factors,
            iterations: a.iterations,
        }
    }
}

#[derive(Args)]
struct CompileArgs {
    /// Gate name, matrix:<8 reals> or axis:nx,ny,nz:theta.
    #[arg(long, allow_hyphen_values = true)]
    gate: String,
    #[command(flatten)]
    params: ParamArgs,
    /// Include wall times in the output.
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum BenchCmd {
    /// Exhaustive best word up to a length.
    Brute {
        #[arg(long, allow_hyphen_values = true)]
        gate: String,
        #[arg(long)]
        max_length: usize,
        #[arg(long, default_value_t = WordFamily::All)]
        family: WordFamily,
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Subcommand)]
enum SuiteCmd {
    /// Compile Haar-random targets and export their final distances.
    Random {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        params: ParamArgs,
        /// Raw samples CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Histogram CSV.
        #[arg(long)]
        histogram: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum StatsCmd {
    /// Fit the unitary Wigner-Dyson surmise to a samples CSV.
    Wd {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Decay of the exhaustive-search distance with word length.
    Decay {
        #[arg(long, default_value_t = 6)]
        lmin: usize,
        #[arg(long, default_value_t = 14)]
        lmax: usize,
        #[arg(long, default_value_t = 2)]
        step: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = WordFamily::All)]
        family: WordFamily,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn table(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CorruptTable { .. } | Error::Config(_) => 2,
            Error::ResourceLimit { .. } | Error::Refused(_) => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn load_table(path: &Path, group: &IcosaGroup, hint: &str) -> std::result::Result<PseudoGroupTable, Failure> {
    if !path.exists() {
        return Err(Failure::table(format!(
            "missing table {}; {hint}",
            path.display()
        )));
    }
    PseudoGroupTable::load(path, group).map_err(|e| Failure::table(format!("{}: {e}", path.display())))
}

/// Coarse table and the refinement tables for passes `1..=passes`.
fn load_pipeline(
    dir: &Path,
    group: &IcosaGroup,
    params: &HashParams,
    passes: usize,
) -> std::result::Result<(PseudoGroupTable, Vec<PseudoGroupTable>), Failure> {
    let build = |n: usize| format!("build it with `braidhash tables build --length {n}`");
    let coarse = load_table(
        &dir.join(table_file_name(params.coarse_length)),
        group,
        &build(params.coarse_length),
    )?;
    let mut levels = vec![load_table(
        &dir.join(table_file_name(params.fine_length)),
        group,
        &build(params.fine_length),
    )?];
    for k in 2..=passes {
        levels.push(load_table(
            &dir.join(level_file_name(k)),
            group,
            &format!("build it with `braidhash tables bootstrap --level {k}`"),
        )?);
    }
    Ok((coarse, levels))
}

fn write_file(path: &Path, text: &str) -> Outcome {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn no_csv(format: Format) -> Outcome {
    if format == Format::Csv {
        return Err(Failure::usage("csv output is only available for compile and suite"));
    }
    Ok(())
}

fn table_summary(file: &Path, t: &PseudoGroupTable) -> TableOut {
    let errs = t.entries()[1..].iter().map(|e| e.dist);
    TableOut {
        schema: SCHEMA,
        file: file.display().to_string(),
        nominal_length: t.nominal_length(),
        metric: t.metric_id().to_string(),
        mean_error: t.mean_error(),
        min_error: errs.clone().fold(f64::INFINITY, f64::min),
        max_error: t.max_error(),
        max_word_length: t.max_word_length(),
    }
}

fn print_table(format: Format, s: &TableOut) {
    match format {
        Format::Json => print!("{}", json(s)),
        _ => println!(
            "{}: N={} mean={:.4e} min={:.4e} max={:.4e} longest={}",
            s.file, s.nominal_length, s.mean_error, s.min_error, s.max_error, s.max_word_length
        ),
    }
}

fn run(cli: Cli) -> Outcome {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    let dir = resolve_table_dir(cli.table_dir.as_deref());
    let format = cli.format;
    let group = IcosaGroup::build();

    match cli.cmd {
        Cmd::Tables(TablesCmd::Build {
            length,
            method,
            family,
            out,
        }) => {
            no_csv(format)?;
            let method = match method {
                Method::Exhaustive => TableMethod::Exhaustive,
                Method::Mitm => TableMethod::Mitm,
                Method::Auto => {
                    if family.count_upto(length) <= WordFamily::All.count_upto(MAX_EXHAUSTIVE_LENGTH) {
                        TableMethod::Exhaustive
                    } else {
                        TableMethod::Mitm
                    }
                }
            };
            let table = build_table(&group, length, method, family)?;
            let path = out.unwrap_or_else(|| dir.join(table_file_name(length)));
            table.save(&path)?;
            print_table(format, &table_summary(&path, &table));
        }
        Cmd::Tables(TablesCmd::Check { file }) => {
            no_csv(format)?;
            let table = load_table(&file, &group, "nothing to check")?;
            print_table(format, &table_summary(&file, &table));
        }
        Cmd::Tables(TablesCmd::Bootstrap { level, params, out }) => {
            no_csv(format)?;
            if level < 2 {
                return Err(Failure::usage("--level must be at least 2"));
            }
            let mut params: HashParams = params.into();
            params.iterations = level - 1;
            params.validate()?;
            let (coarse, levels) = load_pipeline(&dir, &group, &params, level - 1)?;
            let refs: Vec<&PseudoGroupTable> = levels.iter().collect();
            let compiler = Compiler::new(&group, params, &coarse, &refs)?;
            let table = compiler.bootstrap_table()?;
            let path = out.unwrap_or_else(|| dir.join(level_file_name(level)));
            table.save(&path)?;
            print_table(format, &table_summary(&path, &table));
        }
        Cmd::Compile(args) => {
            let target = gate::parse_gate(&args.gate)?;
            let params: HashParams = args.params.into();
            params.validate()?;
            let (coarse, levels) = load_pipeline(&dir, &group, &params, params.iterations)?;
            let refs: Vec<&PseudoGroupTable> = levels.iter().collect();
            let compiler = Compiler::new(&group, params, &coarse, &refs)?;
            let result = compiler.compile(&target);
            let out = CompileOut::new(&args.gate, &params, &result, args.timing);
            match format {
                Format::Text => print!("{}", out.text()),
                Format::Json => print!("{}", json(&out)),
                Format::Csv => print!("{}", out.csv()),
            }
        }
        Cmd::Bench(BenchCmd::Brute {
            gate,
            max_length,
            family,
            timing,
        }) => {
            no_csv(format)?;
            let target = gate::parse_gate(&gate)?;
            let start = Instant::now();
            let r = brute_force_family(&[target], max_length, family)?
                .pop()
                .expect("one target");
            let out = BruteOut {
                schema: SCHEMA,
                gate,
                max_length,
                family: family.name(),
                length: r.word.length(),
                word: r.word.to_string(),
                distance: r.dist,
                nodes_visited: r.nodes_visited,
                wall_time_ms: timing.then(|| start.elapsed().as_secs_f64() * 1e3),
            };
            match format {
                Format::Json => print!("{}", json(&out)),
                _ => {
                    println!(
                        "{} (≤{}, {}): {} len={} d={:.6e} nodes={}",
                        out.gate, max_length, out.family, out.word, out.length, out.distance, out.nodes_visited
                    );
                    if let Some(t) = out.wall_time_ms {
                        println!("time {t:.1} ms");
                    }
                }
            }
        }
        Cmd::Suite(SuiteCmd::Random {
            count,
            seed,
            params,
            out,
            histogram,
        }) => {
            if count == 0 {
                return Err(Failure::usage("--count must be at least 1"));
            }
            let params: HashParams = params.into();
            params.validate()?;
            let (coarse, levels) = load_pipeline(&dir, &group, &params, params.iterations)?;
            let refs: Vec<&PseudoGroupTable> = levels.iter().collect();
            let compiler = Compiler::new(&group, params, &coarse, &refs)?;
            let report = run_suite(&compiler, count, seed);
            let samples = report.final_samples();
            if let Some(path) = &out {
                write_file(path, &samples.to_csv())?;
            }
            if let Some(path) = &histogram {
                write_file(path, &samples.histogram_csv())?;
            }
            let fit = (samples.len() >= MIN_FIT_SAMPLES).then(|| fit_wd(&samples)).transpose()?;
            let summary = SuiteOut {
                schema: SCHEMA,
                count,
                seed,
                params: (&params).into(),
                preprocessed_mean: report.stage_samples(0).mean(),
                final_mean: samples.mean(),
                final_max: samples.max(),
                d_l: fit.map(|f| f.d_l),
                ks_stat: fit.map(|f| f.ks_stat),
            };
            match format {
                Format::Json => print!("{}", json(&summary)),
                Format::Csv => print!("{}", samples.to_csv()),
                Format::Text => {
                    println!(
                        "{count} targets, seed {seed}: preprocessed mean {:.4e}, final mean {:.4e}, max {:.4e}",
                        summary.preprocessed_mean, summary.final_mean, summary.final_max
                    );
                    match fit {
                        Some(f) => println!("Wigner-Dyson fit: d_L={:.4e} KS={:.4}", f.d_l, f.ks_stat),
                        None => println!("fewer than {MIN_FIT_SAMPLES} samples; no fit"),
                    }
                }
            }
        }
        Cmd::Stats(StatsCmd::Wd { input }) => {
            no_csv(format)?;
            let text = fs::read_to_string(&input)
                .map_err(|e| Failure::usage(format!("{}: {e}", input.display())))?;
            let samples = SampleSet::from_csv(&text)?;
            let fit = fit_wd(&samples)?;
            let out = FitOut {
                schema: SCHEMA,
                count: fit.sample_count,
                d_l: fit.d_l,
                ks_stat: fit.ks_stat,
            };
            match format {
                Format::Json => print!("{}", json(&out)),
                _ => println!("n={} d_L={:.6e} KS={:.6}", out.count, out.d_l, out.ks_stat),
            }
        }
        Cmd::Stats(StatsCmd::Decay {
            lmin,
            lmax,
            step,
            count,
            seed,
            family,
        }) => {
            no_csv(format)?;
            if step == 0 || lmin > lmax || count == 0 {
                return Err(Failure::usage("need step ≥ 1, lmin ≤ lmax and count ≥ 1"));
            }
            let lengths: Vec<usize> = (lmin..=lmax).step_by(step).collect();
            let e = decay_experiment(&lengths, count, seed, family)?;
            let out = DecayOut {
                schema: SCHEMA,
                family: family.name(),
                count,
                seed,
                lengths: e.lengths,
                mean_distances: e.mean_dists,
                xi: e.xi,
            };
            match format {
                Format::Json => print!("{}", json(&out)),
                _ => {
                    for (l, d) in out.lengths.iter().zip(&out.mean_distances) {
                        println!("L={l:<3} mean d={d:.6e}");
                    }
                    println!("xi={:.4}", out.xi);
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
