//! Command-line front end: `compute` runs the full pipeline on one dessin,
//! `verify` re-checks stored results or the builtin catalog, and
//! `enumerate` lists the dessins realizing a passport.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 numeric stage failure,
//! 3 recognition failure, 4 verification failure.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use belyi::catalog::{self, CatalogEntry};
use belyi::dessin::{Dessin, Passport};
use belyi::enumerate::{realizations_of_passport, Filters};
use belyi::error::{Error, Result};
use belyi::group::{group_order, is_primitive};
use belyi::pipeline::{exit_code, run_compute, run_verify_entry, PipelineConfig};
use belyi::verify::run_catalog;

#[derive(Parser)]
#[command(name = "belyi", about = "Exact Belyi functions of (2,3)-type genus-0 dessins")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the exact Belyi function of the dessin in FILE
    Compute {
        /// dessin file (permutation-pair text format)
        dessin: PathBuf,
        /// seed precision in decimal digits
        #[arg(long, default_value_t = 60)]
        precision: u32,
        /// Newton target precision in decimal digits
        #[arg(long, default_value_t = 240)]
        target: u32,
        /// sample points per boundary arc in the series solve
        #[arg(long, default_value_t = 3)]
        points: usize,
        /// starting series truncation order (default 4n)
        #[arg(long = "series-n")]
        series_n: Option<usize>,
        /// largest number-field degree tried during recognition
        #[arg(long = "max-degree", default_value_t = 8)]
        max_degree: usize,
        /// series cache directory (env BELYI_CACHE_DIR is the fallback)
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Re-verify a stored result file, or the whole builtin catalog
    Verify {
        /// result file written by `compute`
        result: Option<PathBuf>,
        /// verify all builtin catalog entries instead
        #[arg(long)]
        catalog: bool,
    },
    /// Write canonical dessin files for every realization of a passport
    Enumerate {
        /// passport, e.g. "(3^2|2^2 1^2|5 1)"
        passport: String,
        /// keep only dessins with primitive edge rotation group
        #[arg(long)]
        primitive: bool,
        /// keep only dessins whose edge rotation group has this order
        #[arg(long)]
        order: Option<u64>,
    },
}

fn cmd_compute(dessin_path: &Path, cfg: &PipelineConfig) -> Result<()> {
    let text = std::fs::read_to_string(dessin_path)?;
    let d = Dessin::parse(&text)?;
    let res = run_compute(&d, cfg)?;

    let stem = dessin_path.with_extension("");
    let out = |ext: &str| -> PathBuf {
        let mut p = stem.clone().into_os_string();
        p.push(ext);
        PathBuf::from(p)
    };
    let entry_path = out(".belyi");
    let report_path = out(".report");
    let log_path = out(".log");
    std::fs::write(&entry_path, res.entry_text())?;
    std::fs::write(&report_path, res.report_text())?;
    std::fs::write(&log_path, res.log_text())?;

    println!("dessin n={} passport={}", d.n(), d.passport());
    if res.series_cache_hit {
        println!("series: cache hit");
    } else if let Some((n, agree)) = res.series_history.last() {
        println!("series: order {} (agreement {:.1e})", n, agree);
    }
    println!(
        "newton: {} steps to {} digits",
        res.iteration_log.len(),
        cfg.target_digits
    );
    let mp = res
        .entry
        .field
        .minpoly
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",");
    println!(
        "field: degree {} minpoly={}",
        res.entry.field.degree(),
        mp
    );
    println!("identity check: pass");
    match &res.matched_orbit {
        Some((orbit, _)) => println!("catalog match: {}", orbit),
        None => println!("catalog match: none"),
    }
    println!(
        "wrote {} {} {}",
        entry_path.display(),
        report_path.display(),
        log_path.display()
    );
    Ok(())
}

fn cmd_verify(result: Option<&Path>, catalog_sweep: bool) -> Result<()> {
    if catalog_sweep {
        let entries = catalog::builtin()?;
        for line in run_catalog(&entries)? {
            println!("{}", line);
        }
        println!("{} entries verified", entries.len());
        return Ok(());
    }
    let path = result.ok_or_else(|| {
        Error::Parse("verify needs a result file or --catalog".into())
    })?;
    let text = std::fs::read_to_string(path)?;
    let entry = CatalogEntry::parse(&text)?;
    run_verify_entry(&entry)?;
    println!("{}: pass (identity and passport)", entry.orbit);
    Ok(())
}

fn cmd_enumerate(passport: &str, primitive: bool, order: Option<u64>) -> Result<()> {
    let p = Passport::parse(passport)?;
    let filters = Filters {
        genus: None,
        primitive: if primitive { Some(true) } else { None },
        group_order: order,
    };
    let found = realizations_of_passport(&p, &filters)?;
    let tag: String = passport
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    for (i, d) in found.iter().enumerate() {
        let path = PathBuf::from(format!("{}-{}.dessin", tag, i + 1));
        std::fs::write(&path, d.to_text())?;
        println!(
            "{} order={} primitive={}",
            path.display(),
            group_order(d),
            is_primitive(d)
        );
    }
    println!("{} dessins", found.len());
    Ok(())
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
    let result = match cli.cmd {
        Cmd::Compute {
            dessin,
            precision,
            target,
            points,
            series_n,
            max_degree,
            cache,
        } => {
            let cache_dir = cache.or_else(|| std::env::var_os("BELYI_CACHE_DIR").map(PathBuf::from));
            let cfg = PipelineConfig {
                seed_digits: precision,
                target_digits: target,
                points_per_arc: points,
                series_n_start: series_n,
                max_field_degree: max_degree,
                cache_dir,
            };
            cmd_compute(&dessin, &cfg)
        }
        Cmd::Verify { result, catalog } => cmd_verify(result.as_deref(), catalog),
        Cmd::Enumerate {
            passport,
            primitive,
            order,
        } => cmd_enumerate(&passport, primitive, order),
    };
    if let Err(e) = result {
        eprintln!("error: {}", e);
        std::process::exit(exit_code(&e));
    }
}
