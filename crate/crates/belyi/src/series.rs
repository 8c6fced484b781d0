//! Truncated Fourier expansion of the dessin's hauptmodul.
//!
//! The hauptmodul t of the index-n subgroup is expanded as a series in
//! zeta = exp(2 pi i tau / m) with a simple pole, where m = n - r is the
//! width of the cusp at infinity. The truncated series is pinned down by
//! least squares on the boundary pasting conditions t(x) = t(Mx) plus two
//! normalization rows fixing the affine coordinate: the degree-3 black
//! vertex values sum to 0, the degree-2 white vertex values sum to 1.

use crate::bigc::{abs_f64, Digits};
use crate::dessin::Dessin;
use crate::error::{Error, Result};
use crate::linalg::solve_least_squares;
use crate::modular::{coset_domain, FundamentalDomain, Side};
use rug::{Complex, Float};

/// Series sum_{k=-1}^{N} c_k zeta^k with zeta = exp(2 pi i tau / m).
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    pub m: usize,
    /// c_{-1}, c_0, ..., c_N
    pub coeffs: Vec<Complex>,
}

impl TruncatedSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 2
    }

    pub fn evaluate(&self, tau: &Complex) -> Result<Complex> {
        let z = zeta(tau, self.m);
        if abs_f64(&z) >= 1.0 {
            return Err(Error::Numeric(format!(
                "series evaluated outside the convergence disk (|zeta| = {})",
                abs_f64(&z)
            )));
        }
        let bits = tau.prec().0;
        let mut acc = Complex::new(bits);
        for c in self.coeffs.iter().skip(1).rev() {
            acc *= &z;
            acc += c;
        }
        let pole = Complex::with_val(bits, &self.coeffs[0] / &z);
        Ok(acc + pole)
    }
}

/// zeta = exp(2 pi i tau / m) at tau's precision.
pub fn zeta(tau: &Complex, m: usize) -> Complex {
    let bits = tau.prec().0;
    let two_pi = Float::with_val(bits, rug::float::Constant::Pi) * 2u32;
    let itau = Complex::with_val(bits, tau * &Complex::with_val(bits, (0.0, 1.0)));
    let arg = Complex::with_val(bits, itau * &two_pi) / Float::with_val(bits, m as f64);
    arg.exp()
}

/// A point of the standard cell on the given side, parametrized by
/// p in (0,1). Vertical walls climb exponentially from the corner.
fn side_point(side: Side, p: f64, digits: Digits) -> Complex {
    let bits = Digits(digits.0).bits();
    let sqrt3_2 = Float::with_val(bits, 3.0f64).sqrt() / 2u32;
    match side {
        Side::Left | Side::Right => {
            let y = sqrt3_2 * Float::with_val(bits, (2.2 * p).exp());
            let re = if side == Side::Left { -0.5 } else { 0.5 };
            Complex::with_val(bits, (Float::with_val(bits, re), y))
        }
        Side::ArcLeftHalf | Side::ArcRightHalf => {
            let pi = Float::with_val(bits, rug::float::Constant::Pi);
            let sign = if side == Side::ArcLeftHalf { 1.0 } else { -1.0 };
            let theta = Float::with_val(bits, &pi / &Float::with_val(bits, 2.0))
                + Float::with_val(bits, &pi * &Float::with_val(bits, sign * p / 6.0));
            let re = theta.clone().cos();
            let im = theta.sin();
            Complex::with_val(bits, (re, im))
        }
    }
}

/// Candidate vertex locations in the domain, one list per vertex class.
/// Black classes are the cycles of a (order-3 corner points), white classes
/// the cycles of b (order-2 points); lists are ordered by least edge.
pub struct CornerClasses {
    pub black3: Vec<Vec<Complex>>,
    pub black1: Vec<Vec<Complex>>,
    pub white2: Vec<Vec<Complex>>,
    pub white1: Vec<Vec<Complex>>,
}

pub fn corner_classes(dom: &FundamentalDomain, d: &Dessin, digits: Digits) -> CornerClasses {
    let bits = digits.bits();
    let sqrt3_2 = Float::with_val(bits, 3.0f64).sqrt() / 2u32;
    let rho0 = Complex::with_val(bits, (Float::with_val(bits, -0.5), sqrt3_2.clone()));
    let rho1 = Complex::with_val(bits, (Float::with_val(bits, 0.5), sqrt3_2));
    let ii = Complex::with_val(bits, (0.0, 1.0));

    let mut black3 = Vec::new();
    let mut black1 = Vec::new();
    for cyc in d.a().cycles() {
        let mut pts: Vec<Complex> = cyc.iter().map(|&e| dom.reps[e].apply_c(&rho0)).collect();
        // the right corner of cell f meets the black vertex of sigma_T(f)
        for f in 0..dom.n {
            if cyc.contains(&dom.sigma_t.apply(f)) {
                pts.push(dom.reps[f].apply_c(&rho1));
            }
        }
        if cyc.len() == 3 {
            black3.push(pts);
        } else {
            black1.push(pts);
        }
    }
    let mut white2 = Vec::new();
    let mut white1 = Vec::new();
    for cyc in d.b().cycles() {
        let pts: Vec<Complex> = cyc.iter().map(|&e| dom.reps[e].apply_c(&ii)).collect();
        if cyc.len() == 2 {
            white2.push(pts);
        } else {
            white1.push(pts);
        }
    }
    CornerClasses {
        black3,
        black1,
        white2,
        white1,
    }
}

/// The best-converging candidate of a class: maximal imaginary part,
/// i.e. minimal |zeta|.
fn best_point(pts: &[Complex]) -> &Complex {
    pts.iter()
        .max_by(|x, y| x.imag().to_f64().total_cmp(&y.imag().to_f64()))
        .unwrap()
}

/// Width of the cusp containing edge 1; errors unless it is maximal,
/// which `Dessin::rebased_at_max_face` guarantees.
fn period(dom: &FundamentalDomain) -> Result<usize> {
    let w0 = dom
        .cusp_classes
        .iter()
        .find(|(c, _)| c.contains(&0))
        .map(|(_, w)| *w)
        .unwrap();
    let wmax = dom.cusp_classes.iter().map(|(_, w)| *w).max().unwrap();
    if w0 != wmax {
        return Err(Error::UnsupportedShape(
            "edge 1 must lie in a face of maximal degree (rebase the dessin first)".into(),
        ));
    }
    Ok(w0)
}

/// Sample the boundary pastings: for each arc, scan candidate positions,
/// drop positions whose zeta lies outside |zeta| <= 0.995, drop positions
/// where the pasting condition is trivial, and keep k well-spread survivors.
fn arc_samples(
    dom: &FundamentalDomain,
    m: usize,
    k: usize,
    digits: Digits,
) -> Vec<(Complex, Complex)> {
    let dup_tol = 10f64.powi(-(digits.0 as i32) / 2);
    let mut out = Vec::new();
    for arc in &dom.arcs {
        let ncand = (4 * k + 8).max(16);
        let mut kept = Vec::new();
        for i in 0..ncand {
            let p = (i + 1) as f64 / (ncand + 1) as f64;
            let x = dom.reps[arc.src_cell].apply_c(&side_point(arc.src_side, p, digits));
            let mx = arc.pairing.apply_c(&x);
            let zx = zeta(&x, m);
            let zmx = zeta(&mx, m);
            if abs_f64(&zx) > 0.995 || abs_f64(&zmx) > 0.995 {
                continue;
            }
            let diff = Complex::with_val(zx.prec().0, &zx - &zmx);
            if abs_f64(&diff) < dup_tol * (1.0 + abs_f64(&zx)) {
                // pasting acts as a translation by the period here; the row
                // would vanish identically
                continue;
            }
            kept.push((zx, zmx));
        }
        if kept.len() <= k {
            out.extend(kept);
        } else {
            let len = kept.len();
            let mut picked = std::collections::BTreeSet::new();
            for j in 0..k {
                picked.insert(((2 * j + 1) * len) / (2 * k));
            }
            for (i, s) in kept.into_iter().enumerate() {
                if picked.contains(&i) {
                    out.push(s);
                }
            }
        }
    }
    out
}

fn powers_row(z: &Complex, ncoeff: usize) -> Vec<Complex> {
    let bits = z.prec().0;
    let mut row = Vec::with_capacity(ncoeff);
    row.push(Complex::with_val(bits, 1.0 / z.clone()));
    let mut p = Complex::with_val(bits, (1.0, 0.0));
    for _ in 0..ncoeff - 1 {
        row.push(p.clone());
        p *= z;
    }
    row
}

/// Solve for the truncated series of order n_trunc.
pub fn solve_series(
    dom: &FundamentalDomain,
    classes: &CornerClasses,
    n_trunc: usize,
    points_per_arc: usize,
    digits: Digits,
) -> Result<TruncatedSeries> {
    let m = period(dom)?;
    let ncoeff = n_trunc + 2;
    let bits = digits.bits();

    // enough points per arc that the system is overdetermined from the start
    let mut k = points_per_arc
        .max(1)
        .max(ncoeff.div_ceil(dom.arcs.len().max(1)));
    let mut samples = Vec::new();
    for attempt in 0..8 {
        samples = arc_samples(dom, m, k, digits);
        if samples.len() >= ncoeff {
            break;
        }
        if attempt == 7 {
            return Err(Error::Numeric(
                "not enough usable boundary sample points".into(),
            ));
        }
        k *= 2;
    }

    let mut rows: Vec<Vec<Complex>> = Vec::with_capacity(samples.len() + 2);
    let mut rhs: Vec<Complex> = Vec::with_capacity(samples.len() + 2);
    for (zx, zmx) in &samples {
        let rx = powers_row(zx, ncoeff);
        let rmx = powers_row(zmx, ncoeff);
        let row: Vec<Complex> = rx
            .into_iter()
            .zip(rmx)
            .map(|(u, v)| Complex::with_val(bits, u - v))
            .collect();
        rows.push(row);
        rhs.push(Complex::new(bits));
    }

    // normalization rows: values at the black degree-3 vertices sum to 0,
    // values at the white degree-2 vertices sum to 1; when a class set is
    // empty the corresponding sum runs over all vertices of that color
    let black: Vec<&Vec<Complex>> = if classes.black3.is_empty() {
        classes.black3.iter().chain(classes.black1.iter()).collect()
    } else {
        classes.black3.iter().collect()
    };
    let white: Vec<&Vec<Complex>> = if classes.white2.is_empty() {
        classes.white2.iter().chain(classes.white1.iter()).collect()
    } else {
        classes.white2.iter().collect()
    };
    for (group, val) in [(black, 0.0), (white, 1.0)] {
        let mut row = vec![Complex::new(bits); ncoeff];
        for pts in group {
            let z = zeta(best_point(pts), m);
            for (j, p) in powers_row(&z, ncoeff).into_iter().enumerate() {
                row[j] += p;
            }
        }
        rows.push(row);
        rhs.push(Complex::with_val(bits, (val, 0.0)));
    }

    let sol = solve_least_squares(&rows, &rhs, digits)?;
    Ok(TruncatedSeries { m, coeffs: sol.x })
}

/// One location estimate per vertex class, with the in-class disagreement
/// as a convergence diagnostic.
#[derive(Clone, Debug)]
pub struct VertexEstimates {
    pub black3: Vec<Complex>,
    pub black1: Vec<Complex>,
    pub white2: Vec<Complex>,
    pub white1: Vec<Complex>,
    pub max_spread: f64,
}

impl VertexEstimates {
    pub fn all(&self) -> Vec<&Complex> {
        self.black3
            .iter()
            .chain(&self.black1)
            .chain(&self.white2)
            .chain(&self.white1)
            .collect()
    }
}

pub fn vertex_estimates(
    series: &TruncatedSeries,
    classes: &CornerClasses,
) -> Result<VertexEstimates> {
    let mut max_spread = 0.0f64;
    let mut estimate_group = |group: &[Vec<Complex>]| -> Result<Vec<Complex>> {
        let mut out = Vec::new();
        for pts in group {
            // average over the candidates that converge well; fall back to
            // the single best point for deeply buried classes
            let good: Vec<&Complex> = pts
                .iter()
                .filter(|p| abs_f64(&zeta(p, series.m)) <= 0.9)
                .collect();
            let use_pts: Vec<&Complex> = if good.is_empty() {
                vec![best_point(pts)]
            } else {
                good
            };
            let bits = use_pts[0].prec().0;
            let mut vals = Vec::new();
            for p in &use_pts {
                vals.push(series.evaluate(p)?);
            }
            let mut mean = Complex::new(bits);
            for v in &vals {
                mean += v;
            }
            mean /= Float::with_val(bits, vals.len() as f64);
            for v in &vals {
                let dev = Complex::with_val(bits, v - &mean);
                max_spread = max_spread.max(abs_f64(&dev));
            }
            out.push(mean);
        }
        Ok(out)
    };
    let black3 = estimate_group(&classes.black3)?;
    let black1 = estimate_group(&classes.black1)?;
    let white2 = estimate_group(&classes.white2)?;
    let white1 = estimate_group(&classes.white1)?;
    Ok(VertexEstimates {
        black3,
        black1,
        white2,
        white1,
        max_spread,
    })
}

#[derive(Clone, Debug)]
pub struct SeriesConfig {
    pub digits: Digits,
    /// starting truncation order; defaults to 4n
    pub n_start: Option<usize>,
    pub n_max: usize,
    pub points_per_arc: usize,
    /// successive truncation orders must agree on the vertex estimates to
    /// this tolerance
    pub agree_tol: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            digits: Digits(60),
            n_start: None,
            n_max: 4096,
            points_per_arc: 3,
            agree_tol: 1e-6,
        }
    }
}

pub struct SeriesResult {
    /// the dessin actually expanded (rebased at a maximal face)
    pub dessin: Dessin,
    pub dom: FundamentalDomain,
    pub series: TruncatedSeries,
    pub estimates: VertexEstimates,
    pub classes: CornerClasses,
    /// (truncation order, agreement with the previous order)
    pub history: Vec<(usize, f64)>,
}

/// Full seeding stage: expand the hauptmodul, doubling the truncation order
/// until the vertex estimates stabilize.
pub fn compute_series(d: &Dessin, cfg: &SeriesConfig) -> Result<SeriesResult> {
    let d = d.rebased_at_max_face();
    let dom = coset_domain(&d)?;
    // working precision: twice the seed target, so the linear solve has
    // headroom over its conditioning
    let work = Digits((2 * cfg.digits.0).max(50));
    let classes = corner_classes(&dom, &d, work);
    let mut n_trunc = cfg.n_start.unwrap_or(4 * d.n()).max(4);
    let mut prev: Option<(TruncatedSeries, VertexEstimates)> = None;
    let mut history = Vec::new();
    loop {
        let series = solve_series(&dom, &classes, n_trunc, cfg.points_per_arc, work)?;
        let est = vertex_estimates(&series, &classes)?;
        if let Some((_, prev_est)) = &prev {
            let agreement = est
                .all()
                .iter()
                .zip(prev_est.all())
                .map(|(u, v)| abs_f64(&Complex::with_val(u.prec().0, *u - v)))
                .fold(0.0f64, f64::max);
            history.push((n_trunc, agreement));
            if agreement < cfg.agree_tol {
                return Ok(SeriesResult {
                    dessin: d,
                    dom,
                    series,
                    estimates: est,
                    classes,
                    history,
                });
            }
        } else {
            history.push((n_trunc, f64::INFINITY));
        }
        prev = Some((series, est));
        n_trunc *= 2;
        if n_trunc > cfg.n_max {
            return Err(Error::Numeric(format!(
                "series did not stabilize by truncation order {}",
                cfg.n_max
            )));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;
    use rug::{Integer, Rational};

    /// Independent oracle: integer q-expansion of the elliptic j function
    /// via E4^3 / Delta, coefficients c_{-1}..c_{nmax}.
    fn j_coeffs(nmax: usize) -> Vec<Integer> {
        let len = nmax + 2;
        // E4 = 1 + 240 sum sigma_3(k) q^k
        let mut e4 = vec![Integer::from(0); len];
        e4[0] = Integer::from(1);
        for k in 1..len {
            let mut s3 = Integer::from(0);
            for d in 1..=k {
                if k % d == 0 {
                    s3 += Integer::from(d).pow(3);
                }
            }
            e4[k] = s3 * 240;
        }
        let mul = |a: &[Integer], b: &[Integer]| {
            let mut out = vec![Integer::from(0); len];
            for i in 0..len {
                for j in 0..len - i {
                    out[i + j] += Integer::from(&a[i] * &b[j]);
                }
            }
            out
        };
        let e4_3 = mul(&mul(&e4, &e4), &e4);
        // Delta / q = prod (1 - q^n)^24
        let mut dq = vec![Integer::from(0); len];
        dq[0] = Integer::from(1);
        for n in 1..len {
            for _ in 0..24 {
                let mut next = dq.clone();
                for i in 0..len.saturating_sub(n) {
                    let t = Integer::from(&dq[i]);
                    next[i + n] -= t;
                }
                dq = next;
            }
        }
        // inverse of Delta/q (leading coefficient 1, so integral)
        let mut inv = vec![Integer::from(0); len];
        inv[0] = Integer::from(1);
        for k in 1..len {
            let mut acc = Integer::from(0);
            for i in 1..=k {
                acc += Integer::from(&dq[i] * &inv[k - i]);
            }
            inv[k] = -acc;
        }
        // j = q^{-1} * E4^3 * inv
        mul(&e4_3, &inv)
    }

    #[test]
    fn j_oracle_known_coefficients() {
        let j = j_coeffs(2);
        assert_eq!(j[0], 1);
        assert_eq!(j[1], 744);
        assert_eq!(j[2], 196884);
        assert_eq!(j[3], 21493760);
    }

    #[test]
    fn trivial_dessin_series_is_j_over_1728() {
        let d = Dessin::parse("n=1\na=()\nb=()").unwrap();
        let cfg = SeriesConfig {
            n_start: Some(16),
            ..SeriesConfig::default()
        };
        let res = compute_series(&d, &cfg).unwrap();
        assert_eq!(res.series.m, 1);
        let j = j_coeffs(res.series.order());
        for (k, c) in res.series.coeffs.iter().enumerate().take(12) {
            let want = Rational::from((j[k].clone(), Integer::from(1728))).to_f64();
            let re = c.real().to_f64();
            let im = c.imag().to_f64().abs();
            assert!(
                (re - want).abs() < 1e-10 * (1.0 + want.abs()) && im < 1e-10,
                "coefficient {k}: got {re}+{im}i, want {want}"
            );
        }
    }

    #[test]
    fn trivial_dessin_value_at_2i() {
        // j(2i) = 66^3 = 287496
        let d = Dessin::parse("n=1\na=()\nb=()").unwrap();
        let cfg = SeriesConfig {
            n_start: Some(16),
            ..SeriesConfig::default()
        };
        let res = compute_series(&d, &cfg).unwrap();
        let tau = cfg.digits.c(0.0, 2.0);
        let v = res.series.evaluate(&tau).unwrap();
        let got = v.real().to_f64() * 1728.0;
        assert!((got - 287496.0).abs() < 1e-6, "got {got}");
        // vertex normalization: single black vertex at 0, single white at 1
        assert_eq!(res.estimates.black1.len(), 1);
        assert!(abs_f64(&res.estimates.black1[0]) < 1e-9);
        let w = Complex::with_val(
            res.estimates.white1[0].prec().0,
            &res.estimates.white1[0] - &cfg.digits.c(1.0, 0.0),
        );
        assert!(abs_f64(&w) < 1e-9);
    }

    #[test]
    fn orbit_6_1_estimates_are_consistent() {
        let p = crate::dessin::Passport::parse("(3^2|2^2 1^2|5 1)").unwrap();
        let f = crate::enumerate::Filters {
            genus: Some(0),
            primitive: Some(true),
            group_order: Some(60),
        };
        let d = crate::enumerate::realizations_of_passport(&p, &f)
            .unwrap()
            .remove(0);
        let res = compute_series(&d, &SeriesConfig::default()).unwrap();
        assert_eq!(res.series.m, 5);
        let e = &res.estimates;
        assert_eq!(
            (e.black3.len(), e.black1.len(), e.white2.len(), e.white1.len()),
            (2, 0, 2, 2)
        );
        // normalization sums
        let bits = e.black3[0].prec().0;
        let mut sb = Complex::new(bits);
        for v in &e.black3 {
            sb += v;
        }
        assert!(abs_f64(&sb) < 1e-8, "black sum {}", abs_f64(&sb));
        let mut sw = Complex::new(bits);
        for v in &e.white2 {
            sw += v;
        }
        sw -= Float::with_val(bits, 1.0);
        assert!(abs_f64(&sw) < 1e-8, "white sum off by {}", abs_f64(&sw));
        assert!(e.max_spread < 1e-6, "spread {}", e.max_spread);
    }
}
