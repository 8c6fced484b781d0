//! Polynomial ansatz for the Belyi map and its Newton refinement.
//!
//! The map is beta = P3^3 P1 / (c R) with beta - 1 = Q2^2 Q1 / (c R); all
//! five polynomials are monic and the defining identity is
//! P3^3 P1 - Q2^2 Q1 = c R. Two coefficients are pinned exactly by the
//! affine normalization (black degree-3 roots sum to 0, white degree-2
//! roots sum to 1), leaving exactly n unknowns including c.

use crate::bigc::{abs_f64, Digits};
use crate::dessin::Passport;
use crate::error::{Error, Result};
use crate::linalg::solve_square;
use crate::series::VertexEstimates;
use rug::{Complex, Float};

// ---- small helpers for dense complex polynomials (ascending coefficients)

pub fn poly_mul(a: &[Complex], b: &[Complex]) -> Vec<Complex> {
    let bits = a[0].prec().0;
    let mut out = vec![Complex::new(bits); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let t = Complex::with_val(bits, x * y);
            out[i + j] += t;
        }
    }
    out
}

pub fn poly_from_roots(roots: &[Complex], bits: u32) -> Vec<Complex> {
    let mut out = vec![Complex::with_val(bits, (1.0, 0.0))];
    for r in roots {
        let factor = vec![Complex::with_val(bits, -r.clone()), Complex::with_val(bits, (1.0, 0.0))];
        out = poly_mul(&out, &factor);
    }
    out
}

pub fn poly_eval(p: &[Complex], x: &Complex) -> Complex {
    let bits = x.prec().0;
    let mut acc = Complex::new(bits);
    for c in p.iter().rev() {
        acc *= x;
        acc += c;
    }
    acc
}

fn to_bits(p: &[Complex], bits: u32) -> Vec<Complex> {
    p.iter().map(|c| Complex::with_val(bits, c)).collect()
}

// ---- ansatz shape and state

/// Where the two pinned coefficients live. The black pin (value 0) sits in
/// P3, or in P1 when there are no degree-3 black vertices; the white pin
/// (value -1) sits in Q2, or in Q1 when there are no degree-2 white vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PinHost {
    P3,
    P1,
    Q2,
    Q1,
}

#[derive(Clone, Debug)]
pub struct AnsatzShape {
    pub n: usize,
    pub p3: usize,
    pub p1: usize,
    pub q2: usize,
    pub q1: usize,
    pub r: usize,
    pub black_pin: PinHost,
    pub white_pin: PinHost,
}

impl AnsatzShape {
    pub fn from_passport(p: &Passport) -> Result<Self> {
        if !p.is_23_weighted_tree_shape() {
            return Err(Error::UnsupportedShape(format!(
                "passport {p} is not a genus-0 (2,3)-type weighted tree shape"
            )));
        }
        let (p3, p1, q2, q1, r) = (p.p3(), p.p1(), p.q2(), p.q1(), p.r());
        let black_pin = if p3 > 0 { PinHost::P3 } else { PinHost::P1 };
        let white_pin = if q2 > 0 { PinHost::Q2 } else { PinHost::Q1 };
        if (black_pin == PinHost::P1 && p1 == 0) || (white_pin == PinHost::Q1 && q1 == 0) {
            return Err(Error::UnsupportedShape(format!(
                "passport {p} leaves no coefficient to pin"
            )));
        }
        Ok(AnsatzShape {
            n: p.n(),
            p3,
            p1,
            q2,
            q1,
            r,
            black_pin,
            white_pin,
        })
    }

    /// Number of free unknowns; always n.
    pub fn unknowns(&self) -> usize {
        self.p3 + self.p1 + self.q2 + self.q1 + self.r - 1
    }

    fn pinned_index(&self, host: PinHost) -> (PinHost, usize) {
        let deg = match host {
            PinHost::P3 => self.p3,
            PinHost::P1 => self.p1,
            PinHost::Q2 => self.q2,
            PinHost::Q1 => self.q1,
        };
        (host, deg - 1)
    }
}

/// Current values of the five monic polynomials and the constant c.
#[derive(Clone, Debug)]
pub struct AnsatzState {
    pub p3: Vec<Complex>,
    pub p1: Vec<Complex>,
    pub q2: Vec<Complex>,
    pub q1: Vec<Complex>,
    pub rr: Vec<Complex>,
    pub c: Complex,
}

impl AnsatzState {
    pub fn bits(&self) -> u32 {
        self.c.prec().0
    }

    pub fn with_bits(&self, bits: u32) -> AnsatzState {
        AnsatzState {
            p3: to_bits(&self.p3, bits),
            p1: to_bits(&self.p1, bits),
            q2: to_bits(&self.q2, bits),
            q1: to_bits(&self.q1, bits),
            rr: to_bits(&self.rr, bits),
            c: Complex::with_val(bits, &self.c),
        }
    }

    /// The free unknowns in a fixed order: non-leading coefficients of
    /// P3, P1, Q2, Q1, R (ascending, pinned entries skipped), then c.
    pub fn pack(&self, shape: &AnsatzShape) -> Vec<Complex> {
        let mut v = Vec::with_capacity(shape.unknowns());
        for (host, poly) in [
            (PinHost::P3, &self.p3),
            (PinHost::P1, &self.p1),
            (PinHost::Q2, &self.q2),
            (PinHost::Q1, &self.q1),
        ] {
            let pin = if shape.black_pin == host {
                Some(shape.pinned_index(host).1)
            } else if shape.white_pin == host {
                Some(shape.pinned_index(host).1)
            } else {
                None
            };
            for (i, c) in poly.iter().enumerate().take(poly.len() - 1) {
                if pin != Some(i) {
                    v.push(c.clone());
                }
            }
        }
        for c in self.rr.iter().take(self.rr.len() - 1) {
            v.push(c.clone());
        }
        v.push(self.c.clone());
        debug_assert_eq!(v.len(), shape.unknowns());
        v
    }

    pub fn unpack(shape: &AnsatzShape, v: &[Complex], bits: u32) -> AnsatzState {
        let one = Complex::with_val(bits, (1.0, 0.0));
        let mut it = v.iter();
        let mut build = |host: PinHost, deg: usize, pin_val: Option<f64>| -> Vec<Complex> {
            let pin = match host {
                h if shape.black_pin == h => Some((deg - 1, 0.0)),
                h if shape.white_pin == h => Some((deg - 1, -1.0)),
                _ => None,
            };
            let _ = pin_val;
            let mut poly = Vec::with_capacity(deg + 1);
            for i in 0..deg {
                match pin {
                    Some((pi, pv)) if pi == i => poly.push(Complex::with_val(bits, (pv, 0.0))),
                    _ => poly.push(Complex::with_val(bits, it.next().unwrap())),
                }
            }
            poly.push(one.clone());
            poly
        };
        let p3 = build(PinHost::P3, shape.p3, None);
        let p1 = build(PinHost::P1, shape.p1, None);
        let q2 = build(PinHost::Q2, shape.q2, None);
        let q1 = build(PinHost::Q1, shape.q1, None);
        let mut rr = Vec::with_capacity(shape.r + 1);
        for _ in 0..shape.r {
            rr.push(Complex::with_val(bits, it.next().unwrap()));
        }
        rr.push(one);
        let c = Complex::with_val(bits, it.next().unwrap());
        debug_assert!(it.next().is_none());
        AnsatzState {
            p3,
            p1,
            q2,
            q1,
            rr,
            c,
        }
    }

    /// Coefficients z^0..z^{n-1} of P3^3 P1 - Q2^2 Q1 - c R. The z^n term
    /// cancels exactly since both products are monic of degree n.
    pub fn residual(&self, shape: &AnsatzShape) -> Vec<Complex> {
        let bits = self.bits();
        let num = poly_mul(&poly_mul(&poly_mul(&self.p3, &self.p3), &self.p3), &self.p1);
        let den = poly_mul(&poly_mul(&self.q2, &self.q2), &self.q1);
        let mut out = Vec::with_capacity(shape.n);
        for k in 0..shape.n {
            let mut v = num[k].clone();
            v -= &den[k];
            if k < self.rr.len() {
                let t = Complex::with_val(bits, &self.c * &self.rr[k]);
                v -= t;
            }
            out.push(v);
        }
        out
    }

    /// Analytic Jacobian d residual / d unknowns, same unknown order as pack.
    pub fn jacobian(&self, shape: &AnsatzShape) -> Vec<Vec<Complex>> {
        let bits = self.bits();
        let n = shape.n;
        let p3sq = poly_mul(&self.p3, &self.p3);
        let p3cube = poly_mul(&p3sq, &self.p3);
        // d/d p3_j: 3 P3^2 P1 z^j ; d/d p1_j: P3^3 z^j
        let dp3 = {
            let mut base = poly_mul(&p3sq, &self.p1);
            for c in &mut base {
                *c *= &Float::with_val(bits, 3.0);
            }
            base
        };
        let dq2 = {
            let mut base = poly_mul(&self.q2, &self.q1);
            for c in &mut base {
                *c *= &Float::with_val(bits, -2.0);
            }
            base
        };
        let dq1 = {
            let mut base = poly_mul(&self.q2, &self.q2);
            for c in &mut base {
                *c = Complex::with_val(bits, -c.clone());
            }
            base
        };

        let mut cols: Vec<Vec<Complex>> = Vec::with_capacity(shape.unknowns());
        let shifted_col = |base: &[Complex], j: usize| -> Vec<Complex> {
            let mut col = vec![Complex::new(bits); n];
            for (i, v) in base.iter().enumerate() {
                if i + j < n {
                    col[i + j] = v.clone();
                }
            }
            col
        };
        for (host, deg, base) in [
            (PinHost::P3, shape.p3, &dp3),
            (PinHost::P1, shape.p1, &p3cube),
            (PinHost::Q2, shape.q2, &dq2),
            (PinHost::Q1, shape.q1, &dq1),
        ] {
            let pin = if shape.black_pin == host || shape.white_pin == host {
                Some(deg - 1)
            } else {
                None
            };
            for j in 0..deg {
                if pin == Some(j) {
                    continue;
                }
                cols.push(shifted_col(base, j));
            }
        }
        // d/d r_j = -c z^j
        for j in 0..shape.r {
            let mut col = vec![Complex::new(bits); n];
            col[j] = Complex::with_val(bits, -self.c.clone());
            cols.push(col);
        }
        // d/d c = -R
        {
            let mut col = vec![Complex::new(bits); n];
            for (j, v) in self.rr.iter().enumerate() {
                if j < n {
                    col[j] = Complex::with_val(bits, -v.clone());
                }
            }
            cols.push(col);
        }
        // transpose columns into rows
        let ncols = cols.len();
        let mut jac = vec![Vec::with_capacity(ncols); n];
        for col in cols {
            for (i, v) in col.into_iter().enumerate() {
                jac[i].push(v);
            }
        }
        jac
    }
}

/// Build the seed state from the vertex estimates: an exact affine change of
/// coordinate makes the two pinned coefficients exact, then c and R are read
/// off the coefficients of D = P3^3 P1 - Q2^2 Q1.
pub fn seed(shape: &AnsatzShape, est: &VertexEstimates, digits: Digits) -> Result<AnsatzState> {
    let bits = digits.bits();
    let grab = |v: &[Complex]| -> Vec<Complex> { v.iter().map(|c| Complex::with_val(bits, c)).collect() };
    let mut black3 = grab(&est.black3);
    let mut black1 = grab(&est.black1);
    let mut white2 = grab(&est.white2);
    let mut white1 = grab(&est.white1);
    if black3.len() != shape.p3
        || black1.len() != shape.p1
        || white2.len() != shape.q2
        || white1.len() != shape.q1
    {
        return Err(Error::SeedRejected(
            "vertex estimate class counts do not match the passport".into(),
        ));
    }

    // shift so the black-pin class sums to 0, scale so the white-pin class
    // sums to 1
    let pin_class: &[Complex] = if shape.black_pin == PinHost::P3 {
        &black3
    } else {
        &black1
    };
    let mut mu = Complex::new(bits);
    for v in pin_class {
        mu += v;
    }
    mu /= Float::with_val(bits, pin_class.len() as f64);
    for group in [&mut black3, &mut black1, &mut white2, &mut white1] {
        for v in group.iter_mut() {
            *v -= &mu;
        }
    }
    let white_class: &[Complex] = if shape.white_pin == PinHost::Q2 {
        &white2
    } else {
        &white1
    };
    let mut lambda = Complex::new(bits);
    for v in white_class {
        lambda += v;
    }
    if abs_f64(&lambda) < 1e-12 {
        return Err(Error::SeedRejected(
            "white vertex sum vanishes; affine normalization impossible".into(),
        ));
    }
    for group in [&mut black3, &mut black1, &mut white2, &mut white1] {
        for v in group.iter_mut() {
            *v /= &lambda;
        }
    }

    let mut p3 = poly_from_roots(&black3, bits);
    let mut p1 = poly_from_roots(&black1, bits);
    let mut q2 = poly_from_roots(&white2, bits);
    let mut q1 = poly_from_roots(&white1, bits);
    // force the pins exactly (they are already correct to rounding)
    let (bh, bi) = shape.pinned_index(shape.black_pin);
    match bh {
        PinHost::P3 => p3[bi] = Complex::new(bits),
        _ => p1[bi] = Complex::new(bits),
    }
    let (wh, wi) = shape.pinned_index(shape.white_pin);
    match wh {
        PinHost::Q2 => q2[wi] = Complex::with_val(bits, (-1.0, 0.0)),
        _ => q1[wi] = Complex::with_val(bits, (-1.0, 0.0)),
    }

    // D = P3^3 P1 - Q2^2 Q1 should be c R with deg R = r
    let num = poly_mul(&poly_mul(&poly_mul(&p3, &p3), &p3), &p1);
    let den = poly_mul(&poly_mul(&q2, &q2), &q1);
    let mut d: Vec<Complex> = num
        .iter()
        .zip(den.iter())
        .map(|(u, v)| Complex::with_val(bits, u - v))
        .collect();
    d.truncate(shape.n); // degree-n terms cancel
    let dmax = d.iter().map(abs_f64).fold(0.0f64, f64::max);
    let tail = d
        .iter()
        .skip(shape.r + 1)
        .map(abs_f64)
        .fold(0.0f64, f64::max);
    if tail > 1e-3 * dmax {
        return Err(Error::SeedRejected(format!(
            "coefficients above degree r do not vanish (tail {tail:.2e} vs scale {dmax:.2e})"
        )));
    }
    let c = d[shape.r].clone();
    if abs_f64(&c) < 1e-12 * dmax.max(1e-300) {
        return Err(Error::SeedRejected("leading face coefficient c is zero".into()));
    }
    let mut rr: Vec<Complex> = d
        .iter()
        .take(shape.r + 1)
        .map(|v| Complex::with_val(bits, v / &c))
        .collect();
    rr[shape.r] = Complex::with_val(bits, (1.0, 0.0));

    Ok(AnsatzState {
        p3,
        p1,
        q2,
        q1,
        rr,
        c,
    })
}

#[derive(Clone, Debug)]
pub struct IterationRecord {
    pub step: usize,
    pub digits: u32,
    pub residual_norm: f64,
    pub step_norm: f64,
    pub damping: f64,
}

impl std::fmt::Display for IterationRecord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "step={} digits={} residual={:.3e} step={:.3e} damping={}",
            self.step, self.digits, self.residual_norm, self.step_norm, self.damping
        )
    }
}

fn norm_inf(v: &[Complex]) -> f64 {
    v.iter().map(abs_f64).fold(0.0f64, f64::max)
}

/// Damped Newton iteration with precision escalation: the working precision
/// tracks roughly twice the attained accuracy, so each refinement step has
/// headroom for the quadratic contraction.
pub fn newton_solve(
    shape: &AnsatzShape,
    seed_state: &AnsatzState,
    seed_digits: Digits,
    target_digits: Digits,
) -> Result<(AnsatzState, Vec<IterationRecord>)> {
    let target = target_digits.0;
    let mut digits = seed_digits.0.max(30);
    let mut state = seed_state.with_bits(Digits(digits).bits());
    let mut log = Vec::new();
    let mut res = state.residual(shape);
    let mut res_norm = norm_inf(&res);

    // basin check: the seed must already be close
    let c_scale = abs_f64(&state.c).max(1.0);
    if res_norm >= 1e-4 * c_scale {
        return Err(Error::SeedRejected(format!(
            "seed residual {res_norm:.3e} outside the Newton basin (scale {c_scale:.3e})"
        )));
    }

    for step in 1..=200 {
        // precision escalation: double the digits once the residual reaches
        // the half-precision mark, so each quadratic step has headroom
        while digits < target + 20 && res_norm < 10f64.powi(-(digits as i32) / 2) {
            digits = (2 * digits).min(target + 20);
            state = state.with_bits(Digits(digits).bits());
            res = state.residual(shape);
            res_norm = norm_inf(&res);
        }

        let mut jac = state.jacobian(shape);
        let mut rhs: Vec<Complex> = res
            .iter()
            .map(|v| Complex::with_val(state.bits(), -v.clone()))
            .collect();
        let sol = solve_square(&mut jac, &mut rhs, Digits(digits))?;
        let delta = sol.x;
        let step_norm = norm_inf(&delta);

        let x = state.pack(shape);
        let mut damping = 1.0f64;
        let mut accepted = None;
        for _ in 0..12 {
            let trial: Vec<Complex> = x
                .iter()
                .zip(delta.iter())
                .map(|(xv, dv)| {
                    let t = Complex::with_val(state.bits(), dv * &Float::with_val(state.bits(), damping));
                    Complex::with_val(state.bits(), xv + &t)
                })
                .collect();
            let trial_state = AnsatzState::unpack(shape, &trial, state.bits());
            let trial_res = trial_state.residual(shape);
            let trial_norm = norm_inf(&trial_res);
            if trial_norm < res_norm || res_norm == 0.0 {
                accepted = Some((trial_state, trial_res, trial_norm));
                break;
            }
            damping /= 2.0;
        }
        let (new_state, new_res, new_norm) = accepted.ok_or_else(|| {
            Error::NewtonFailed(format!(
                "no descent at step {step} (residual {res_norm:.3e})"
            ))
        })?;
        state = new_state;
        res = new_res;
        res_norm = new_norm;
        log.push(IterationRecord {
            step,
            digits,
            residual_norm: res_norm,
            step_norm: step_norm * damping,
            damping,
        });

        if digits >= target && res_norm < 10f64.powi(-(target as i32)) {
            // f64 underflows around 1e-308; compare in log space via norm_inf
            // of exact residual at full precision
            let final_res = exact_residual_norm_log10(&state, shape);
            if final_res < -(target as f64) {
                return Ok((state, log));
            }
        }
        if res_norm == 0.0 {
            return Ok((state, log));
        }
    }
    Err(Error::NewtonFailed(format!(
        "no convergence to 1e-{target} within 200 steps"
    )))
}

/// log10 of the residual norm, computed in extended range (f64 alone
/// underflows below 1e-308).
pub fn exact_residual_norm_log10(state: &AnsatzState, shape: &AnsatzShape) -> f64 {
    let res = state.residual(shape);
    let mut best = f64::NEG_INFINITY;
    for v in &res {
        let a = crate::bigc::abs(v);
        if a.is_zero() {
            continue;
        }
        let l = a.log10().to_f64();
        best = best.max(l);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dessin::{Dessin, Passport};
    use crate::series::{compute_series, SeriesConfig};

    fn shape_of(s: &str) -> AnsatzShape {
        AnsatzShape::from_passport(&Passport::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn unknown_counts_match_edge_counts() {
        assert_eq!(shape_of("(3^2|2^2 1^2|5 1)").unknowns(), 6);
        assert_eq!(shape_of("(3^4 1^2|2^6 1^2|13 1)").unknowns(), 14);
        assert_eq!(shape_of("(1|1|1)").unknowns(), 1);
        assert_eq!(shape_of("(3 1|2^2|3 1)").unknowns(), 4);
    }

    #[test]
    fn degenerate_pins_fall_back() {
        let s = shape_of("(1|1|1)");
        assert_eq!(s.black_pin, PinHost::P1);
        assert_eq!(s.white_pin, PinHost::Q1);
        let s = shape_of("(3^2|2^2 1^2|5 1)");
        assert_eq!(s.black_pin, PinHost::P3);
        assert_eq!(s.white_pin, PinHost::Q2);
    }

    fn random_state(shape: &AnsatzShape, bits: u32, seed: u64) -> AnsatzState {
        // tiny deterministic LCG; adequate for test data
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        let v: Vec<Complex> = (0..shape.unknowns())
            .map(|_| Complex::with_val(bits, (next(), next())))
            .collect();
        AnsatzState::unpack(shape, &v, bits)
    }

    #[test]
    fn residual_matches_pointwise_evaluation() {
        let shape = shape_of("(3^2|2^2 1^2|5 1)");
        let bits = Digits(40).bits();
        let state = random_state(&shape, bits, 7);
        let res = state.residual(&shape);
        // independent check: evaluate the defining combination at points
        for i in 0..4 {
            let x = Complex::with_val(bits, (0.3 + i as f64, 0.7 - 0.2 * i as f64));
            let p3v = poly_eval(&state.p3, &x);
            let p1v = poly_eval(&state.p1, &x);
            let q2v = poly_eval(&state.q2, &x);
            let q1v = poly_eval(&state.q1, &x);
            let rv = poly_eval(&state.rr, &x);
            let num = Complex::with_val(bits, &p3v * &p3v) * &p3v * &p1v;
            let den = Complex::with_val(bits, &q2v * &q2v) * &q1v;
            let cr = Complex::with_val(bits, &state.c * &rv);
            let lhs = Complex::with_val(bits, &num - &den) - &cr;
            let scale = 1.0 + abs_f64(&num) + abs_f64(&den) + abs_f64(&cr);
            let series = poly_eval(&res, &x);
            let diff = Complex::with_val(bits, &lhs - &series);
            assert!(
                abs_f64(&diff) < 1e-20 * scale,
                "mismatch at point {i}: {}",
                abs_f64(&diff)
            );
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let shape = shape_of("(3^2|2^2 1^2|5 1)");
        let d = Digits(60);
        let bits = d.bits();
        let state = random_state(&shape, bits, 42);
        let jac = state.jacobian(&shape);
        let x = state.pack(&shape);
        let h = 1e-20;
        for j in 0..x.len() {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += &Complex::with_val(bits, (h, 0.0));
            xm[j] -= &Complex::with_val(bits, (h, 0.0));
            let rp = AnsatzState::unpack(&shape, &xp, bits).residual(&shape);
            let rm = AnsatzState::unpack(&shape, &xm, bits).residual(&shape);
            for i in 0..rp.len() {
                let fd = Complex::with_val(bits, &rp[i] - &rm[i])
                    / Float::with_val(bits, 2.0 * h);
                let diff = Complex::with_val(bits, &fd - &jac[i][j]);
                assert!(
                    abs_f64(&diff) < 1e-10 * (1.0 + abs_f64(&jac[i][j])),
                    "J[{i}][{j}] off by {}",
                    abs_f64(&diff)
                );
            }
        }
    }

    #[test]
    fn newton_converges_quadratically_on_small_orbit() {
        let p = Passport::parse("(3^2|2^2 1^2|5 1)").unwrap();
        let f = crate::enumerate::Filters {
            genus: Some(0),
            primitive: Some(true),
            group_order: Some(60),
        };
        let d: Dessin = crate::enumerate::realizations_of_passport(&p, &f)
            .unwrap()
            .remove(0);
        let sr = compute_series(&d, &SeriesConfig::default()).unwrap();
        let shape = AnsatzShape::from_passport(&p).unwrap();
        let st = seed(&shape, &sr.estimates, Digits(60)).unwrap();
        let (refined, log) = newton_solve(&shape, &st, Digits(60), Digits(240)).unwrap();
        assert!(exact_residual_norm_log10(&refined, &shape) < -240.0);
        // quadratic contraction: log-residual at least ~1.8x per undamped step
        let mut quad = 0;
        for w in log.windows(2) {
            if w[1].damping == 1.0
                && w[0].residual_norm > 1e-200
                && w[1].residual_norm > 0.0
                && w[1].residual_norm.log10() / w[0].residual_norm.log10() > 1.8
            {
                quad += 1;
            }
        }
        assert!(quad >= 2, "expected quadratic steps, log: {log:?}");
        for rec in &log {
            let line = rec.to_string();
            assert!(line.contains("digits=") && line.contains("residual="));
        }
    }
}
