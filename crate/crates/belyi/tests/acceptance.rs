//! Acceptance gate: one test per criterion, each printing a pass/fail line.
//!
//! 1. builtin catalog self-verifies exactly in under 5 seconds
//! 2. end-to-end reproduction of the rational orbits
//! 3. end-to-end reproduction of the quadratic orbits
//! 4. higher-degree stretch orbits (report-only, never fails the suite)
//! 5. the trivial dessin's series is j/1728
//! 6. Newton converges quadratically on orbit 6.1
//! 7. recognition round-trips random integer polynomials
//! 8. combinatorial invariants of every fixture

use std::path::PathBuf;
use std::time::Instant;

use rug::{Complex, Float, Integer};

use belyi::ansatz::{newton_solve, seed, AnsatzShape};
use belyi::bigc::Digits;
use belyi::catalog;
use belyi::dessin::Dessin;
use belyi::group::{group_order, is_primitive};
use belyi::modular::cusp_widths;
use belyi::pipeline::{run_compute, PipelineConfig};
use belyi::recognize::recognize_value;
use belyi::series::{compute_series, SeriesConfig};
use belyi::verify::run_catalog;

fn fixture(orbit: &str) -> Dessin {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{}.dessin", orbit.replace('.', "_")));
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("fixture {}: {}", path.display(), e));
    Dessin::parse(&text).unwrap()
}

fn report(criterion: &str, item: &str, ok: bool) {
    println!(
        "criterion {} ({}): {}",
        criterion,
        item,
        if ok { "pass" } else { "fail" }
    );
    assert!(ok, "criterion {} failed on {}", criterion, item);
}

/// Run the pipeline on a fixture and check the certified result matches the
/// named catalog orbit over a field of the expected degree.
fn reproduce(criterion: &str, orbit: &str, field_degree: usize, cfg: &PipelineConfig) {
    let d = fixture(orbit);
    let res = match run_compute(&d, cfg) {
        Ok(r) => r,
        Err(e) => {
            report(criterion, orbit, false);
            panic!("{}: {}", orbit, e);
        }
    };
    let ok = res.entry.field.degree() == field_degree
        && res
            .matched_orbit
            .as_ref()
            .is_some_and(|(label, _)| label == orbit);
    report(criterion, orbit, ok);
}

#[test]
fn criterion_1_catalog_self_verification() {
    let t = Instant::now();
    let entries = catalog::builtin().unwrap();
    let lines = run_catalog(&entries).unwrap();
    let elapsed = t.elapsed();
    let ok = entries.len() == 20 && lines.len() == 20 && elapsed.as_secs_f64() < 5.0;
    report("1", &format!("20 orbits, {:.2?}", elapsed), ok);
}

#[test]
fn criterion_2_rational_orbit_6_1() {
    reproduce("2", "6.1", 1, &PipelineConfig::default());
}

#[test]
fn criterion_2_rational_orbit_8_8() {
    reproduce("2", "8.8", 1, &PipelineConfig::default());
}

#[test]
fn criterion_2_rational_orbit_9_4() {
    reproduce("2", "9.4", 1, &PipelineConfig::default());
}

#[test]
fn criterion_2_rational_orbit_10_1() {
    reproduce("2", "10.1", 1, &PipelineConfig::default());
}

#[test]
fn criterion_2_rational_orbit_14_1() {
    reproduce("2", "14.1", 1, &PipelineConfig::default());
}

#[test]
fn criterion_3_quadratic_orbit_7_1() {
    reproduce("3", "7.1", 2, &PipelineConfig::default());
}

#[test]
fn criterion_3_quadratic_orbit_7_2() {
    reproduce("3", "7.2", 2, &PipelineConfig::default());
}

#[test]
fn criterion_3_quadratic_orbit_9_2() {
    reproduce("3", "9.2", 2, &PipelineConfig::default());
}

#[test]
fn criterion_3_quadratic_orbit_8_15() {
    reproduce("3", "8.15", 2, &PipelineConfig::default());
}

#[test]
fn criterion_3_quadratic_orbit_11_1() {
    reproduce("3", "11.1", 2, &PipelineConfig::default());
}

#[test]
fn criterion_3_quadratic_orbit_12_5() {
    reproduce("3", "12.5", 2, &PipelineConfig::default());
}

#[test]
fn criterion_3_quadratic_orbit_14_2() {
    reproduce("3", "14.2", 2, &PipelineConfig::default());
}

#[test]
fn criterion_4_stretch_orbits_report_only() {
    // not required for acceptance: attempt the degree-4 field orbit and
    // report the outcome without failing the suite
    let cfg = PipelineConfig {
        target_digits: 320,
        ..PipelineConfig::default()
    };
    let d = fixture("13.1");
    match run_compute(&d, &cfg) {
        Ok(res) => {
            let matched = res
                .matched_orbit
                .as_ref()
                .map(|(label, _)| label.as_str())
                .unwrap_or("none");
            println!(
                "criterion 4 (13.1): success — field degree {}, catalog match {}",
                res.entry.field.degree(),
                matched
            );
        }
        Err(e) => println!("criterion 4 (13.1): failure — {}", e),
    }
    println!("criterion 4 (17.1, 20.1, 24.1, 24.2): not attempted at desk scale");
}

#[test]
fn criterion_5_trivial_dessin_series_is_j_over_1728() {
    let d = Dessin::parse("n=1\na=()\nb=()").unwrap();
    // a tighter stabilization tolerance than the pipeline default: this
    // oracle compares individual series coefficients, not vertex estimates
    let cfg = SeriesConfig {
        n_start: Some(16),
        agree_tol: 1e-12,
        ..SeriesConfig::default()
    };
    let res = compute_series(&d, &cfg).unwrap();
    // c_{-1}, c_0, c_1 of j/1728: 1/1728, 744/1728, 196884/1728
    let want = [1.0, 744.0, 196884.0].map(|x| x / 1728.0);
    let mut ok = res.series.m == 1;
    for (c, w) in res.series.coeffs.iter().zip(want) {
        ok &= (c.real().to_f64() - w).abs() < 1e-10 && c.imag().to_f64().abs() < 1e-10;
    }
    // j(2i) = 66^3 = 287496
    let prec = res.series.coeffs[0].prec().0;
    let tau = Complex::with_val(prec, (0, 2));
    let v = res.series.evaluate(&tau).unwrap();
    ok &= (v.real().to_f64() - 287496.0 / 1728.0).abs() < 1e-8;
    report("5", "j/1728 coefficients and j(2i)", ok);
}

#[test]
fn criterion_6_newton_quadratic_convergence_on_6_1() {
    let d = fixture("6.1");
    let scfg = SeriesConfig {
        digits: Digits(30),
        ..SeriesConfig::default()
    };
    let sres = compute_series(&d, &scfg).unwrap();
    let shape = AnsatzShape::from_passport(&sres.dessin.passport()).unwrap();
    let s0 = seed(&shape, &sres.estimates, Digits(30)).unwrap();
    let (_, log) = newton_solve(&shape, &s0, Digits(30), Digits(400)).unwrap();
    // count consecutive undamped steps whose residual exponent grows by at
    // least 1.8x
    let mut best = 0usize;
    let mut run = 0usize;
    for w in log.windows(2) {
        let undamped = w[0].damping == 1.0 && w[1].damping == 1.0;
        let e0 = -w[0].residual_norm.log10();
        let e1 = -w[1].residual_norm.log10();
        if undamped && e0 > 0.0 && e1 >= 1.8 * e0 {
            run += 1;
            best = best.max(run + 1);
        } else {
            run = 0;
        }
    }
    report("6", &format!("{} consecutive quadratic steps", best), best >= 3);
}

#[test]
fn criterion_7_recognition_round_trips() {
    // z^2 - z + 6 from (1 + sqrt(-23))/2
    let prec = Digits(100).bits();
    let x = Complex::with_val(
        prec,
        (
            Float::with_val(prec, 0.5),
            Float::with_val(prec, 23).sqrt() / 2,
        ),
    );
    let rec = recognize_value(&x, 8, 100).unwrap();
    let mut ok = rec.minpoly == vec![Integer::from(6), Integer::from(-1), Integer::from(1)];

    // round-trip 100 random integer polynomials of degree <= 6, height <= 10
    let mut state = 0x1d2e3f4a5b6c7d8eu64;
    let mut rng = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut done = 0;
    while done < 100 {
        let deg = 1 + (rng() % 6) as usize;
        let mut coeffs: Vec<Integer> = (0..=deg)
            .map(|_| Integer::from((rng() % 21) as i64 - 10))
            .collect();
        if coeffs[deg] == 0 {
            coeffs[deg] = Integer::from(1 + (rng() % 10) as i64);
        }
        let roots = belyi::recognize::complex_roots(&coeffs, prec);
        let root = &roots[(rng() as usize) % roots.len()];
        let rec = match recognize_value(root, 6, 100) {
            Ok(r) => r,
            Err(_) => {
                ok = false;
                break;
            }
        };
        // the recognized minimal polynomial must divide the sampled one
        let g: Vec<rug::Rational> = coeffs.iter().map(|c| rug::Rational::from(c)).collect();
        let m: Vec<rug::Rational> = rec.minpoly.iter().map(|c| rug::Rational::from(c)).collect();
        let mut rem = g.clone();
        while rem.len() >= m.len() {
            let k = rem.len() - m.len();
            let q = rug::Rational::from(&rem[rem.len() - 1] / &m[m.len() - 1]);
            for i in 0..m.len() {
                let t = rug::Rational::from(&m[i] * &q);
                rem[k + i] -= t;
            }
            while rem.last().is_some_and(|c| *c == 0) {
                rem.pop();
            }
            if rem.is_empty() {
                break;
            }
        }
        if !rem.is_empty() {
            ok = false;
            break;
        }
        done += 1;
    }
    report("7", "100 random polynomials and z^2-z+6", ok);
}

#[test]
fn criterion_8_combinatorial_invariants() {
    let expected_orders: &[(&str, u64)] = &[
        ("6.1", 60),      // PSL(2,5)
        ("7.1", 42),      // AGL(1,7)
        ("7.2", 168),     // PSL(3,2)
        ("8.8", 168),     // PSL(2,7)
        ("8.15", 336),    // PGL(2,7)
        ("9.2", 432),     // AGL(2,3)
        ("9.4", 504),     // PSL(2,8)
        ("10.1", 720),    // PGL(2,9)
        ("11.1", 660),    // PSL(2,11)
        ("12.5", 95040),  // M12
        ("13.1", 5616),   // PSL(3,3)
        ("14.1", 1092),   // PSL(2,13)
        ("14.2", 2184),   // PGL(2,13)
    ];
    for (orbit, order) in expected_orders {
        let d = fixture(orbit);
        let p = d.passport();
        let mut ok = d.genus().unwrap() == 0;
        // cusp widths are the face-degree partition
        let mut widths = cusp_widths(&d).unwrap();
        widths.sort_unstable_by(|a, b| b.cmp(a));
        ok &= widths == p.lambda2;
        ok &= group_order(&d) == *order;
        ok &= is_primitive(&d);
        // Euler count: vertices + faces = n + 2 at genus 0
        ok &= p.p3() + p.p1() + p.q2() + p.q1() + p.lambda2.len() == d.n() + 2;
        report("8", orbit, ok);
    }
}
