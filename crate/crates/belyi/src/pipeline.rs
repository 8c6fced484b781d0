//! End-to-end orchestration: parse a dessin, expand the hauptmodul series,
//! refine the polynomial ansatz with Newton, recognize exact coefficients,
//! and certify the resulting Belyi function.
//!
//! The pipeline is deterministic: the same input and configuration produce
//! byte-identical result bundles.  The expensive series stage can be cached
//! on disk, keyed by a hash of the dessin and the series configuration; a
//! cache hit never changes the exact output.

use std::fmt::Write as _;
use std::path::PathBuf;

use rug::{Complex, Float};
use sha2::{Digest, Sha256};

use crate::ansatz::{newton_solve, seed, AnsatzShape, IterationRecord};
use crate::bigc::Digits;
use crate::catalog::{self, CatalogEntry};
use crate::dessin::Dessin;
use crate::error::{Error, Result};
use crate::recognize::{exactify, CoefficientReport, Recognition};
use crate::series::{
    compute_series, corner_classes, vertex_estimates, SeriesConfig, SeriesResult, TruncatedSeries,
};
use crate::verify::{affine_match, identity_check, symbolic_passport, AffineMatch, ExactBelyi};

/// Knobs for the whole computation.  The invariants are enforced by
/// [`PipelineConfig::validate`]: the refinement target must leave headroom
/// over the seed precision, and the recognition search needs at least
/// degree one.
#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub seed_digits: u32,
    pub target_digits: u32,
    pub points_per_arc: usize,
    /// starting series truncation order; defaults to 4n
    pub series_n_start: Option<usize>,
    pub max_field_degree: usize,
    pub cache_dir: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed_digits: 60,
            target_digits: 240,
            points_per_arc: 3,
            series_n_start: None,
            max_field_degree: 8,
            cache_dir: None,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.target_digits < 2 * self.seed_digits {
            return Err(Error::Parse(format!(
                "target precision {} must be at least twice the seed precision {}",
                self.target_digits, self.seed_digits
            )));
        }
        if self.max_field_degree == 0 {
            return Err(Error::Parse("max field degree must be at least 1".into()));
        }
        if self.points_per_arc == 0 {
            return Err(Error::Parse("points per arc must be at least 1".into()));
        }
        Ok(())
    }

    fn series_config(&self) -> SeriesConfig {
        SeriesConfig {
            digits: Digits(self.seed_digits),
            n_start: self.series_n_start,
            points_per_arc: self.points_per_arc,
            ..SeriesConfig::default()
        }
    }

    /// Stable key for the series cache: hash of the rebased dessin text and
    /// every knob the series stage depends on.
    fn series_cache_key(&self, d: &Dessin) -> String {
        let mut h = Sha256::new();
        h.update(d.to_text().as_bytes());
        h.update(
            format!(
                "|digits={}|points={}|n_start={:?}",
                self.seed_digits, self.points_per_arc, self.series_n_start
            )
            .as_bytes(),
        );
        let digest = h.finalize();
        digest.iter().map(|b| format!("{:02x}", b)).collect()
    }
}

/// Map an error to the process exit code of the stage it belongs to:
/// 1 usage, 2 numeric, 3 recognition, 4 verification.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::InvalidDessin(_)
        | Error::Unrealizable(_)
        | Error::UnsupportedShape(_)
        | Error::Io(_) => 1,
        Error::Numeric(_)
        | Error::Singular(_)
        | Error::SeedRejected(_)
        | Error::NewtonFailed(_)
        | Error::LimitExceeded(_) => 2,
        Error::Recognition(_) => 3,
        Error::Verification(_) => 4,
    }
}

/// Everything a compute run produces: the exact function in catalog-entry
/// format, the per-coefficient recognition report, the Newton iteration
/// log, and the certification record.
pub struct ComputeResult {
    pub entry: CatalogEntry,
    pub iteration_log: Vec<IterationRecord>,
    pub reports: Vec<CoefficientReport>,
    /// series truncation history: (order, vertex-estimate agreement)
    pub series_history: Vec<(usize, f64)>,
    pub series_cache_hit: bool,
    /// builtin catalog orbit this result affine-matches, if any
    pub matched_orbit: Option<(String, AffineMatch)>,
}

impl ComputeResult {
    /// The machine-readable result file (catalog-entry format).
    pub fn entry_text(&self) -> String {
        self.entry.serialize()
    }

    /// The recognition report, one line per free coefficient.
    pub fn report_text(&self) -> String {
        let mut s = String::new();
        let mp = self
            .entry
            .field
            .minpoly
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(s, "field minpoly={}", mp);
        for r in &self.reports {
            let _ = writeln!(s, "{}", r);
        }
        s
    }

    /// The Newton iteration log, one line per step, preceded by the series
    /// truncation history.
    pub fn log_text(&self) -> String {
        let mut s = String::new();
        for (n, agree) in &self.series_history {
            let _ = writeln!(s, "series order={} agreement={:.3e}", n, agree);
        }
        for rec in &self.iteration_log {
            let _ = writeln!(s, "{}", rec);
        }
        s
    }
}

fn load_cached_series(path: &std::path::Path) -> Option<TruncatedSeries> {
    let text = std::fs::read_to_string(path).ok()?;
    let mut lines = text.lines();
    if lines.next()? != "belyi-series-cache v1" {
        return None;
    }
    let m: usize = lines.next()?.strip_prefix("m=")?.parse().ok()?;
    let prec: u32 = lines.next()?.strip_prefix("prec=")?.parse().ok()?;
    let mut coeffs = Vec::new();
    for line in lines {
        let body = line.strip_prefix("coeff=")?;
        let (re, im) = body.split_once(' ')?;
        let re = Float::with_val(prec, Float::parse_radix(re, 16).ok()?);
        let im = Float::with_val(prec, Float::parse_radix(im, 16).ok()?);
        coeffs.push(Complex::with_val(prec, (re, im)));
    }
    if coeffs.len() < 2 {
        return None;
    }
    Some(TruncatedSeries { m, coeffs })
}

fn store_cached_series(path: &std::path::Path, s: &TruncatedSeries) -> Result<()> {
    let prec = s.coeffs[0].prec().0;
    let mut text = String::new();
    let _ = writeln!(text, "belyi-series-cache v1");
    let _ = writeln!(text, "m={}", s.m);
    let _ = writeln!(text, "prec={}", prec);
    for c in &s.coeffs {
        let _ = writeln!(
            text,
            "coeff={} {}",
            c.real().to_string_radix(16, None),
            c.imag().to_string_radix(16, None)
        );
    }
    // atomic write: temp file then rename, so a parallel run never reads a
    // half-written entry
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Series stage with optional disk cache.  On a hit the corner classes and
/// vertex estimates are recomputed from the cached coefficients (cheap);
/// the truncation history is then empty.
fn series_stage(d: &Dessin, cfg: &PipelineConfig) -> Result<(SeriesResult, bool)> {
    let rebased = d.rebased_at_max_face();
    let cache_path = cfg.cache_dir.as_ref().map(|dir| {
        dir.join(format!("series-{}.txt", cfg.series_cache_key(&rebased)))
    });
    if let Some(path) = &cache_path {
        if let Some(series) = load_cached_series(path) {
            let dom = crate::modular::coset_domain(&rebased)?;
            let work = Digits((2 * cfg.seed_digits).max(50));
            let classes = corner_classes(&dom, &rebased, work);
            let estimates = vertex_estimates(&series, &classes)?;
            return Ok((
                SeriesResult {
                    dessin: rebased,
                    dom,
                    series,
                    estimates,
                    classes,
                    history: Vec::new(),
                },
                true,
            ));
        }
    }
    let res = compute_series(d, &cfg.series_config())?;
    if let Some(path) = &cache_path {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        store_cached_series(path, &res.series)?;
    }
    Ok((res, false))
}

fn recognition_to_entry(d: &Dessin, rec: &Recognition) -> CatalogEntry {
    let a = &rec.ansatz;
    CatalogEntry {
        orbit: d.label.clone().unwrap_or_else(|| "computed".into()),
        passport: d.passport(),
        field: a.field.clone(),
        p3: a.p3.clone(),
        p1: a.p1.clone(),
        q2: a.q2.clone(),
        q1: a.q1.clone(),
        rr: a.rr.clone(),
        c: a.c.clone(),
    }
}

/// Run the whole chain on one dessin: series seeding, Newton refinement,
/// recognition, exact identity check, passport cross-check, and an
/// affine-match sweep against the builtin catalog.
pub fn run_compute(d: &Dessin, cfg: &PipelineConfig) -> Result<ComputeResult> {
    cfg.validate()?;
    if !d.is_23_type() {
        return Err(Error::UnsupportedShape(format!(
            "not of (2,3) type: passport {}",
            d.passport()
        )));
    }
    if d.genus()? != 0 {
        return Err(Error::UnsupportedShape(format!(
            "genus {} dessin; only genus 0 is supported",
            d.genus()?
        )));
    }
    let (sres, cache_hit) = series_stage(d, cfg)?;
    let passport = sres.dessin.passport();
    let shape = AnsatzShape::from_passport(&passport)?;
    let state0 = seed(&shape, &sres.estimates, Digits(cfg.seed_digits))?;
    let (state, iteration_log) = newton_solve(
        &shape,
        &state0,
        Digits(cfg.seed_digits),
        Digits(cfg.target_digits),
    )?;
    let rec = exactify(&shape, &state, Digits(cfg.target_digits), cfg.max_field_degree)?;

    let exact: ExactBelyi = (&rec.ansatz).into();
    identity_check(&exact).map_err(Error::Verification)?;
    let sym = symbolic_passport(&exact)?;
    if sym != passport {
        return Err(Error::Verification(format!(
            "symbolic passport {} does not match the dessin's passport {}",
            sym, passport
        )));
    }

    let mut matched_orbit = None;
    for entry in catalog::builtin()? {
        if let Some(m) = affine_match(&exact, &rec.ansatz.embedding, &entry, cfg.target_digits)? {
            matched_orbit = Some((entry.orbit.clone(), m));
            break;
        }
    }

    Ok(ComputeResult {
        entry: recognition_to_entry(&sres.dessin, &rec),
        iteration_log,
        reports: rec.reports,
        series_history: sres.history,
        series_cache_hit: cache_hit,
        matched_orbit,
    })
}

/// Re-check a stored result file: exact identity and symbolic passport.
pub fn run_verify_entry(entry: &CatalogEntry) -> Result<()> {
    let exact: ExactBelyi = entry.into();
    identity_check(&exact).map_err(Error::Verification)?;
    let sym = symbolic_passport(&exact)?;
    if sym != entry.passport {
        return Err(Error::Verification(format!(
            "symbolic passport {} does not match the stored passport {}",
            sym, entry.passport
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dessin::Passport;
    use crate::enumerate::{realizations_of_passport, Filters};

    fn orbit_6_1_dessin() -> Dessin {
        let p = Passport::parse("(3^2|2^2 1^2|5 1)").unwrap();
        let filters = Filters {
            genus: Some(0),
            primitive: Some(true),
            group_order: None,
        };
        let mut found = realizations_of_passport(&p, &filters).unwrap();
        assert_eq!(found.len(), 1);
        found.pop().unwrap()
    }

    #[test]
    fn end_to_end_orbit_6_1_matches_catalog() {
        let d = orbit_6_1_dessin();
        let cfg = PipelineConfig::default();
        let res = run_compute(&d, &cfg).unwrap();
        // the recognized function lives over Q and matches the published
        // degree-6 formula up to an affine substitution
        assert_eq!(res.entry.field.degree(), 1);
        let (orbit, _) = res.matched_orbit.as_ref().expect("catalog match");
        assert_eq!(orbit, "6.1");
        // its own result file verifies and round-trips
        run_verify_entry(&res.entry).unwrap();
        let back = CatalogEntry::parse(&res.entry_text()).unwrap();
        assert_eq!(back.serialize(), res.entry_text());
    }

    #[test]
    fn series_cache_round_trip_is_byte_identical() {
        let d = orbit_6_1_dessin();
        let dir = std::env::temp_dir().join("belyi-cache-test");
        let _ = std::fs::remove_dir_all(&dir);
        let cfg = PipelineConfig {
            cache_dir: Some(dir.clone()),
            ..PipelineConfig::default()
        };
        let cold = run_compute(&d, &cfg).unwrap();
        assert!(!cold.series_cache_hit);
        let warm = run_compute(&d, &cfg).unwrap();
        assert!(warm.series_cache_hit);
        assert_eq!(cold.entry_text(), warm.entry_text());
        assert_eq!(cold.report_text(), warm.report_text());
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn config_invariants_are_enforced() {
        let bad = PipelineConfig {
            seed_digits: 100,
            target_digits: 150,
            ..PipelineConfig::default()
        };
        assert!(bad.validate().is_err());
        assert_eq!(exit_code(&bad.validate().unwrap_err()), 1);
    }
}
