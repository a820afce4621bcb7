//! Command-line front end. Exit codes: 0 success, 1 verification failure,
//! 2 usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::depth2::{
    chi13_multiplicity, d12_characters, dims_row, f_seq, soule_depth2_span, D12Class, DimsRow,
};
use crate::error::{Error, Result};
use crate::freealg::{check_weight, poly_to_terms, Alphabet, DEFAULT_WEIGHT_CAP};
use crate::grt::grt_solve;
use crate::verify::{run_suite, Suite, VerifyConfig, DEFAULT_SEED, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "kvdepth",
    version,
    about = "Exact Lie-algebraic computations in low depth"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Largest weight any computation may reach.
    #[arg(long, global = true, default_value_t = DEFAULT_WEIGHT_CAP)]
    pub max_weight: usize,
    /// Orders of the root of unity, comma separated.
    #[arg(long = "l", global = true, value_delimiter = ',')]
    pub orders: Option<Vec<u32>>,
    #[arg(long, global = true)]
    pub n_min: Option<usize>,
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite and print its report.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        /// Highest weight solved by the grt suite.
        #[arg(long, default_value_t = 9)]
        grt_weight: usize,
        /// Random pairs per order in the cocycle suite.
        #[arg(long, default_value_t = 50)]
        pairs: usize,
    },
    /// Table of depth-two kernel dimensions.
    Dims,
    /// Solutions of the defining relations of grt.
    Grt {
        #[command(subcommand)]
        action: GrtAction,
    },
    /// Characters of the dihedral action on binary forms.
    Char,
    /// Depth-two parts of brackets of Soulé generators.
    SouleBracket {
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Total weight of the brackets.
        #[arg(long, default_value_t = 8)]
        weight: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum GrtAction {
    Solve {
        #[arg(long)]
        weight: usize,
    },
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse::<Suite>().map_err(|e| e.to_string())
}

/// Parses `args` (including the program name) and runs the command,
/// writing to `stdout` unless `--out` is given.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                eprint!("{rendered}");
            }
            return code;
        }
    };
    if let Some(j) = cli.global.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return EXIT_USAGE;
        }
        // Fails harmlessly when a pool already exists in this process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global();
    }
    let mut file;
    let out: &mut dyn Write = match &cli.global.out {
        Some(path) => match File::create(path) {
            Ok(f) => {
                file = BufWriter::new(f);
                &mut file
            }
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", path.display());
                return EXIT_USAGE;
            }
        },
        None => stdout,
    };
    let result = dispatch(&cli, out).and_then(|code| {
        out.flush()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn io_err(e: io::Error) -> Error {
    Error::InvalidArgument(format!("write failed: {e}"))
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let g = &cli.global;
    match &cli.command {
        Command::Verify {
            suite,
            grt_weight,
            pairs,
        } => {
            let defaults = VerifyConfig::default();
            let cfg = VerifyConfig {
                seed: g.seed,
                max_weight: g.max_weight,
                n_min: g.n_min.unwrap_or(defaults.n_min),
                n_max: g.n_max.unwrap_or(defaults.n_max),
                orders: g.orders.clone().unwrap_or(defaults.orders),
                pairs: *pairs,
                grt_weight: *grt_weight,
            };
            validate_orders(&cfg.orders)?;
            check_weight(cfg.grt_weight, cfg.max_weight)?;
            let report = run_suite(*suite, &cfg);
            match g.format.unwrap_or(Format::Json) {
                Format::Text => out.write_all(report.text().as_bytes()).map_err(io_err)?,
                Format::Json => {
                    write_json(out, &serde_json::to_value(&report).expect("serializable"))?
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["check", "status"]).map_err(csv_err)?;
                    for c in &report.checks {
                        w.write_record([c.name.as_str(), if c.passed { "PASS" } else { "FAIL" }])
                            .map_err(csv_err)?;
                    }
                    w.flush().map_err(io_err)?;
                }
            }
            Ok(if report.passed { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Dims => {
            let orders = g.orders.clone().unwrap_or_else(|| vec![1]);
            validate_orders(&orders)?;
            let n_min = g.n_min.unwrap_or(0);
            let n_max = g.n_max.unwrap_or(30);
            if n_min > n_max {
                return Err(Error::InvalidArgument("--n-min exceeds --n-max".into()));
            }
            write_dims(
                out,
                g.format.unwrap_or(Format::Csv),
                n_min,
                n_max,
                &orders,
                g.jobs,
            )?;
            Ok(EXIT_OK)
        }
        Command::Grt {
            action: GrtAction::Solve { weight },
        } => {
            let sol = grt_solve(*weight, g.max_weight)?;
            match g.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let mut v = serde_json::to_value(sol.to_json()).expect("serializable");
                    v.as_object_mut()
                        .expect("object")
                        .insert("schema".into(), json!(SCHEMA_VERSION));
                    write_json(out, &v)?;
                }
                Format::Text | Format::Csv => {
                    let ab = Alphabet::xy();
                    writeln!(out, "weight {} dimension {}", sol.weight, sol.dimension())
                        .map_err(io_err)?;
                    for e in &sol.basis {
                        writeln!(out, "{}", e.body().display_with(&ab)).map_err(io_err)?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Char => {
            let n_max = g.n_max.unwrap_or(40);
            write_characters(
                out,
                g.format.unwrap_or(Format::Csv),
                g.n_min.unwrap_or(0),
                n_max,
            )?;
            Ok(EXIT_OK)
        }
        Command::SouleBracket { depth, weight } => {
            if *depth != 2 {
                return Err(Error::InvalidArgument("only --depth 2 is supported".into()));
            }
            let span = soule_depth2_span(*weight, g.max_weight)?;
            let ab = Alphabet::xy();
            match g.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let v = json!({
                        "schema": SCHEMA_VERSION,
                        "weight": span.weight,
                        "brackets": span.brackets.iter().map(|b| json!({
                            "i": b.i,
                            "j": b.j,
                            "depth2": poly_to_terms(b.depth2.body(), &ab),
                            "coordinates": b.coordinates.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        })).collect::<Vec<_>>(),
                        "rank": span.rank,
                        "expected_rank": span.expected_rank,
                        "relations": span.relation_count(),
                        "expected_relations": span.expected_relations,
                    });
                    write_json(out, &v)?;
                }
                Format::Text | Format::Csv => {
                    for b in &span.brackets {
                        let coords: Vec<String> =
                            b.coordinates.iter().map(|c| c.to_string()).collect();
                        writeln!(
                            out,
                            "{{s{}, s{}}} depth 2: [{}]",
                            b.i,
                            b.j,
                            coords.join(", ")
                        )
                        .map_err(io_err)?;
                    }
                    writeln!(
                        out,
                        "rank {} (expected {}), relations {} (expected {})",
                        span.rank,
                        span.expected_rank,
                        span.relation_count(),
                        span.expected_relations
                    )
                    .map_err(io_err)?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidArgument(format!("csv: {e}"))
}

fn validate_orders(orders: &[u32]) -> Result<()> {
    if orders.is_empty() || orders.contains(&0) {
        return Err(Error::ZeroOrder);
    }
    Ok(())
}

fn write_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    writeln!(out).map_err(io_err)
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "n/a".to_string(), T::to_string)
}

const DIMS_HEADER: [&str; 7] = [
    "n",
    "l",
    "weight",
    "kernel_dim",
    "poly_dim",
    "multiplicity",
    "agree",
];

fn dims_fields(r: &DimsRow) -> [String; 7] {
    [
        r.n.to_string(),
        r.l.to_string(),
        r.weight.to_string(),
        opt(&r.kernel_dim),
        opt(&r.poly_dim),
        opt(&r.multiplicity),
        opt(&r.agree),
    ]
}

/// Streams the table in `(n, l)` order; cells are computed in parallel
/// batches.
fn write_dims(
    out: &mut dyn Write,
    format: Format,
    n_min: usize,
    n_max: usize,
    orders: &[u32],
    jobs: Option<usize>,
) -> Result<()> {
    let mut cells: Vec<(usize, u32)> = Vec::new();
    let mut sorted = orders.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for n in n_min..=n_max {
        for &l in &sorted {
            cells.push((n, l));
        }
    }
    let batch = jobs.unwrap_or_else(rayon::current_num_threads).max(1);
    let mut first = true;
    match format {
        Format::Csv => writeln!(out, "{}", DIMS_HEADER.join(",")).map_err(io_err)?,
        Format::Json => {
            write!(out, "{{\n  \"schema\": {SCHEMA_VERSION},\n  \"rows\": [").map_err(io_err)?
        }
        Format::Text => writeln!(
            out,
            "{:>4} {:>4} {:>6} {:>10} {:>8} {:>12} {:>6}",
            DIMS_HEADER[0],
            DIMS_HEADER[1],
            DIMS_HEADER[2],
            DIMS_HEADER[3],
            DIMS_HEADER[4],
            DIMS_HEADER[5],
            DIMS_HEADER[6]
        )
        .map_err(io_err)?,
    }
    for chunk in cells.chunks(batch) {
        let rows: Vec<Result<DimsRow>> = chunk.par_iter().map(|&(n, l)| dims_row(n, l)).collect();
        for r in rows {
            let r = r?;
            let f = dims_fields(&r);
            match format {
                Format::Csv => writeln!(out, "{}", f.join(",")).map_err(io_err)?,
                Format::Json => {
                    let sep = if first { "" } else { "," };
                    let line = serde_json::to_string(&r).expect("serializable");
                    write!(out, "{sep}\n    {line}").map_err(io_err)?;
                }
                Format::Text => writeln!(
                    out,
                    "{:>4} {:>4} {:>6} {:>10} {:>8} {:>12} {:>6}",
                    f[0], f[1], f[2], f[3], f[4], f[5], f[6]
                )
                .map_err(io_err)?,
            }
            first = false;
        }
    }
    if format == Format::Json {
        writeln!(out, "\n  ]\n}}").map_err(io_err)?;
    }
    Ok(())
}

fn write_characters(out: &mut dyn Write, format: Format, n_min: usize, n_max: usize) -> Result<()> {
    if n_min > n_max {
        return Err(Error::InvalidArgument("--n-min exceeds --n-max".into()));
    }
    let f = f_seq(n_max);
    let mut rows = Vec::new();
    for (n, f_n) in (n_min..=n_max).zip(&f[n_min..]) {
        let chi = d12_characters(n)?;
        let mult = chi13_multiplicity(n)?;
        rows.push((n, chi, f_n.clone(), mult));
    }
    let classes: Vec<String> = D12Class::ALL
        .iter()
        .map(|c| format!("chi_{}", c.name()))
        .collect();
    match format {
        Format::Json => {
            let v = json!({
                "schema": SCHEMA_VERSION,
                "rows": rows.iter().map(|(n, chi, fv, m)| {
                    let mut o = serde_json::Map::new();
                    o.insert("n".into(), json!(n));
                    for (c, x) in classes.iter().zip(chi) {
                        o.insert(c.clone(), json!(x));
                    }
                    o.insert("f".into(), json!(fv.to_string()));
                    o.insert("chi13_multiplicity".into(), json!(m));
                    Value::Object(o)
                }).collect::<Vec<_>>(),
            });
            write_json(out, &v)
        }
        Format::Csv | Format::Text => {
            let sep = if format == Format::Csv { "," } else { " " };
            let mut header = vec!["n".to_string()];
            header.extend(classes.iter().cloned());
            header.push("f".into());
            header.push("chi13_multiplicity".into());
            writeln!(out, "{}", header.join(sep)).map_err(io_err)?;
            for (n, chi, fv, m) in rows {
                let mut fields = vec![n.to_string()];
                fields.extend(chi.iter().map(|x| x.to_string()));
                fields.push(fv.to_string());
                fields.push(m.to_string());
                writeln!(out, "{}", fields.join(sep)).map_err(io_err)?;
            }
            Ok(())
        }
    }
}
