//! Recognition of high-precision complex numbers as algebraic numbers, and
//! unification of a batch of recognized values into a single number field
//! with a chosen complex embedding.

use crate::ansatz::{AnsatzShape, AnsatzState};
use crate::bigc::{abs, abs_f64, Digits};
use crate::error::{Error, Result};
use crate::lll::{lll_reduce, Basis};
use crate::numfield::{rational_to_string, FieldElement, NumberField};
use rug::ops::Pow;
use rug::{Complete, Complex, Float, Integer, Rational};

/// An integer minimal-polynomial candidate for a numeric value, together
/// with the confidence residual |g(x)| (relative, log10).
#[derive(Clone, Debug)]
pub struct Recognized {
    /// Integer coefficients low-to-high, content 1, positive leader.
    pub minpoly: Vec<Integer>,
    /// log10 of the relative residual |g(x)| / (||g||_1 max(1,|x|)^d).
    pub residual_log10: f64,
}

impl Recognized {
    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn height(&self) -> Integer {
        self.minpoly
            .iter()
            .map(|c| c.clone().abs())
            .max()
            .unwrap_or_default()
    }
}

fn scaled_round(f: &Float, bits: u32) -> Integer {
    let mut t = f.clone();
    t <<= bits;
    t.round().to_integer().unwrap_or_default()
}

fn poly_eval_int(coeffs: &[Integer], x: &Complex) -> Complex {
    let bits = x.prec().0;
    let mut acc = Complex::new(bits);
    for c in coeffs.iter().rev() {
        acc *= x;
        acc += Float::with_val(bits, c);
    }
    acc
}

/// log10 of |g(x)|.
fn residual_log10(coeffs: &[Integer], x: &Complex) -> f64 {
    let val = abs(&poly_eval_int(coeffs, x));
    if val.is_zero() {
        return f64::NEG_INFINITY;
    }
    val.get_exp().unwrap() as f64 * std::f64::consts::LOG10_2
}

/// Coefficient-size guard against spurious relations. A lattice row that
/// merely approximates a non-algebraic value balances its coefficients at
/// about 10^((P-10)/(d+1)); capping candidate heights at the square root of
/// that rejects such rows while leaving honest relations (whose heights the
/// precision policy keeps far smaller) untouched.
fn height_cap_log10(digits: u32, d: usize) -> f64 {
    (digits as f64 - 10.0) / (2.0 * (d as f64 + 1.0))
}

fn height_log10(coeffs: &[Integer]) -> f64 {
    coeffs
        .iter()
        .map(|c| c.significant_bits() as f64 * std::f64::consts::LOG10_2)
        .fold(0.0, f64::max)
}

fn normalize_content_sign(mut g: Vec<Integer>) -> Vec<Integer> {
    while g.len() > 1 && g.last().unwrap().is_zero() {
        g.pop();
    }
    let mut content = Integer::new();
    for c in &g {
        content = content.gcd(c);
    }
    if !content.is_zero() && content != 1 {
        for c in &mut g {
            *c /= &content;
        }
    }
    if g.last().map(|c| c.is_negative()).unwrap_or(false) {
        for c in &mut g {
            *c = (-&*c).complete();
        }
    }
    g
}

/// Rational roots p/q of an integer polynomial, searched only when the
/// constant and leading coefficients are small enough to enumerate divisors.
fn rational_roots(g: &[Integer]) -> Vec<Rational> {
    let limit = Integer::from(1_000_000u32);
    let d = g.len() - 1;
    if g[0].is_zero() {
        // z = 0 is a root; recurse on the deflation
        let mut roots = vec![Rational::new()];
        let rest: Vec<Integer> = g[1..].to_vec();
        if rest.len() > 1 {
            roots.extend(rational_roots(&rest));
        }
        return roots;
    }
    if g[0].clone().abs() > limit || g[d].clone().abs() > limit {
        return vec![];
    }
    let divisors = |n: &Integer| -> Vec<Integer> {
        let n = n.clone().abs();
        let mut out = vec![];
        let nu = n.to_u64().unwrap();
        let mut k = 1u64;
        while k * k <= nu {
            if nu % k == 0 {
                out.push(Integer::from(k));
                out.push(Integer::from(nu / k));
            }
            k += 1;
        }
        out
    };
    let mut roots = vec![];
    for p in divisors(&g[0]) {
        for q in divisors(&g[d]) {
            for sign in [1i32, -1] {
                let cand = Rational::from((p.clone() * sign, q.clone()));
                if roots.contains(&cand) {
                    continue;
                }
                // evaluate exactly
                let mut acc = Rational::new();
                for c in g.iter().rev() {
                    acc *= &cand;
                    acc += Rational::from(c.clone());
                }
                if acc.is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    roots
}

/// Deflate g by the linear factor (q z - p) for root p/q; g must vanish at
/// p/q exactly.
fn deflate(g: &[Integer], root: &Rational) -> Vec<Integer> {
    // synthetic division in rationals, then clear denominators
    let mut quo = vec![Rational::new(); g.len() - 1];
    let mut carry = Rational::new();
    for k in (1..g.len()).rev() {
        carry *= root;
        carry += Rational::from(g[k].clone());
        quo[k - 1] = carry.clone();
    }
    let mut den = Integer::from(1);
    for c in &quo {
        den = den.lcm(c.denom());
    }
    normalize_content_sign(
        quo.into_iter()
            .map(|c| {
                let scaled = c * Rational::from(den.clone());
                scaled.numer().clone()
            })
            .collect(),
    )
}

/// Find an integer polynomial of degree at most `d` vanishing at `x`,
/// detected by lattice reduction on the two-column real/imaginary lattice
/// with scaling 2^B, B = floor(3.32 (P - 10)). Errors when no candidate
/// reaches relative residual 10^(-P/2).
pub fn algdep(x: &Complex, d: usize, digits: u32) -> Result<Recognized> {
    if digits < 22 {
        return Err(Error::Recognition(format!(
            "precision {digits} too small for recognition"
        )));
    }
    let bits = (3.32 * (digits as f64 - 10.0)).floor() as u32;
    let mut rows: Basis = Vec::with_capacity(d + 1);
    let prec = x.prec().0;
    let mut xp = Complex::with_val(prec, (1, 0));
    for k in 0..=d {
        let mut row = vec![Integer::new(); d + 3];
        row[k] = Integer::from(1);
        row[d + 1] = scaled_round(xp.real(), bits);
        row[d + 2] = scaled_round(xp.imag(), bits);
        rows.push(row);
        xp *= x;
    }
    let reduced = lll_reduce(rows, &Rational::from((99, 100)));
    let cap = height_cap_log10(digits, d);
    let mut best: Option<(Vec<Integer>, f64)> = None;
    for row in &reduced {
        let g = normalize_content_sign(row[..=d].to_vec());
        if g.len() < 2 || height_log10(&g) > cap {
            continue;
        }
        let r = residual_log10(&g, x);
        if best.as_ref().is_none_or(|(_, b)| r < *b) {
            best = Some((g, r));
        }
    }
    let (mut g, mut res) = best
        .ok_or_else(|| Error::Recognition("lattice reduction produced no relation".into()))?;
    let threshold = -(digits as f64) / 2.0;
    if res > threshold {
        return Err(Error::Recognition(format!(
            "no degree-{d} relation at 10^{threshold}: best residual 10^{res:.0}"
        )));
    }
    // strip rational-root factors, keeping whichever part vanishes at x
    loop {
        if g.len() <= 2 {
            break;
        }
        let roots = rational_roots(&g);
        let mut improved = false;
        for root in roots {
            let lin = normalize_content_sign(vec![
                (-root.numer()).complete(),
                root.denom().clone(),
            ]);
            let lin_res = residual_log10(&lin, x);
            if lin_res <= threshold {
                g = lin;
                res = lin_res;
                improved = false;
                break;
            }
            let quo = deflate(&g, &root);
            if quo.len() >= 2 {
                let quo_res = residual_log10(&quo, x);
                if quo_res <= threshold {
                    g = quo;
                    res = quo_res;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(Recognized {
        minpoly: g,
        residual_log10: res,
    })
}

/// Minimal polynomial of a numeric value: tries degrees 1..=maxdeg in
/// ascending order and returns the first accepted candidate, which is
/// therefore of minimal degree (and irreducible, since any factor vanishing
/// at x would have been found earlier).
pub fn recognize_value(x: &Complex, maxdeg: usize, digits: u32) -> Result<Recognized> {
    let mut last = None;
    for d in 1..=maxdeg {
        match algdep(x, d, digits) {
            Ok(r) => {
                if r.degree() <= d {
                    return Ok(r);
                }
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| {
        Error::Recognition(format!("value not algebraic of degree <= {maxdeg}"))
    }))
}

/// A batch of values expressed in one number field.
#[derive(Clone, Debug)]
pub struct UnifiedField {
    pub field: NumberField,
    /// The chosen complex root of the field polynomial (the numeric value
    /// of the primitive element itself).
    pub embedding: Complex,
    pub coords: Vec<FieldElement>,
}

/// Express a value in the power basis of `field` at `root` by finding an
/// integer relation among 1, a, ..., a^(d-1), x.
pub fn coords_in_field(
    field: &NumberField,
    root: &Complex,
    x: &Complex,
    digits: u32,
) -> Result<(FieldElement, f64)> {
    let d = field.degree();
    let bits = (3.32 * (digits as f64 - 10.0)).floor() as u32;
    let prec = root.prec().0;
    let mut rows: Basis = Vec::with_capacity(d + 1);
    let mut ap = Complex::with_val(prec, (1, 0));
    for k in 0..d {
        let mut row = vec![Integer::new(); d + 3];
        row[k] = Integer::from(1);
        row[d + 1] = scaled_round(ap.real(), bits);
        row[d + 2] = scaled_round(ap.imag(), bits);
        rows.push(row);
        ap *= root;
    }
    let mut row = vec![Integer::new(); d + 3];
    row[d] = Integer::from(1);
    row[d + 1] = scaled_round(x.real(), bits);
    row[d + 2] = scaled_round(x.imag(), bits);
    rows.push(row);
    let reduced = lll_reduce(rows, &Rational::from((99, 100)));
    let threshold = -(digits as f64) / 2.0;
    let cap = height_cap_log10(digits, d);
    let mut best: Option<(FieldElement, f64)> = None;
    for v in &reduced {
        if v[d].is_zero() || height_log10(&v[..=d]) > cap {
            continue;
        }
        let coords: Vec<Rational> = (0..d)
            .map(|k| Rational::from((-v[k].clone(), v[d].clone())))
            .collect();
        let el = field.from_coords(coords)?;
        // residual: |embed(el) - x| relative to max(1, |x|)
        let img = field.embed(&el, root);
        let diff = Complex::with_val(prec, &img - x);
        let scale = abs(x).max(&Float::with_val(prec, 1));
        let rel = abs(&diff) / scale;
        let r = if rel.is_zero() {
            f64::NEG_INFINITY
        } else {
            rel.get_exp().unwrap() as f64 * std::f64::consts::LOG10_2
        };
        if best.as_ref().is_none_or(|(_, b)| r < *b) {
            best = Some((el, r));
        }
    }
    match best {
        Some((el, r)) if r <= threshold => Ok((el, r)),
        Some((_, r)) => Err(Error::Recognition(format!(
            "value does not lie in the candidate field: residual 10^{r:.0}"
        ))),
        None => Err(Error::Recognition(
            "no relation row involves the target value".into(),
        )),
    }
}

/// Recognize every value, select a primitive element (largest minimal
/// polynomial degree, ties by smallest height), and express all values in
/// its power basis. All-rational inputs yield the degree-1 field with
/// defining polynomial z and embedding 0.
pub fn unify_field(values: &[Complex], maxdeg: usize, digits: u32) -> Result<UnifiedField> {
    let recs: Vec<Recognized> = values
        .iter()
        .map(|x| recognize_value(x, maxdeg, digits))
        .collect::<Result<_>>()?;
    let max_deg = recs.iter().map(|r| r.degree()).max().unwrap_or(1);
    if max_deg <= 1 {
        let field = NumberField::rationals();
        let prec = values.first().map(|v| v.prec().0).unwrap_or(64);
        let coords = recs
            .iter()
            .map(|r| {
                let q = Rational::from((
                    -r.minpoly[0].clone(),
                    r.minpoly[1].clone(),
                ));
                field.from_rational(q)
            })
            .collect();
        return Ok(UnifiedField {
            field,
            embedding: Complex::new(prec),
            coords,
        });
    }
    let prim = recs
        .iter()
        .enumerate()
        .filter(|(_, r)| r.degree() == max_deg)
        .min_by_key(|(_, r)| r.height())
        .map(|(i, _)| i)
        .unwrap();
    let field = NumberField::new(recs[prim].minpoly.clone())?;
    let embedding = values[prim].clone();
    let mut coords = Vec::with_capacity(values.len());
    for (x, rec) in values.iter().zip(&recs) {
        if rec.degree() == 1 {
            let q = Rational::from((
                -rec.minpoly[0].clone(),
                rec.minpoly[1].clone(),
            ));
            coords.push(field.from_rational(q));
        } else {
            let (el, _) = coords_in_field(&field, &embedding, x, digits)?;
            coords.push(el);
        }
    }
    Ok(UnifiedField {
        field,
        embedding,
        coords,
    })
}

/// The exact, number-field version of a numeric ansatz.
#[derive(Clone, Debug)]
pub struct ExactAnsatz {
    pub field: NumberField,
    pub embedding: Complex,
    /// Monic coefficient vectors, low-to-high, leader included.
    pub p3: Vec<FieldElement>,
    pub p1: Vec<FieldElement>,
    pub q2: Vec<FieldElement>,
    pub q1: Vec<FieldElement>,
    pub rr: Vec<FieldElement>,
    pub c: FieldElement,
}

/// One line of the recognition report.
#[derive(Clone, Debug)]
pub struct CoefficientReport {
    pub name: String,
    pub degree: usize,
    pub minpoly: Vec<Integer>,
    pub residual_log10: f64,
    pub coords: Vec<Rational>,
}

impl std::fmt::Display for CoefficientReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mp: Vec<String> = self.minpoly.iter().map(|c| c.to_string()).collect();
        let cs: Vec<String> = self.coords.iter().map(rational_to_string).collect();
        let res = if self.residual_log10 == f64::NEG_INFINITY {
            "0".to_string()
        } else {
            format!("1e{}", self.residual_log10.round() as i64)
        };
        write!(
            f,
            "coefficient={} degree={} minpoly={} residual={} coords={}",
            self.name,
            self.degree,
            mp.join(","),
            res,
            cs.join(",")
        )
    }
}

#[derive(Clone, Debug)]
pub struct Recognition {
    pub ansatz: ExactAnsatz,
    pub reports: Vec<CoefficientReport>,
}

/// Recognize all free coefficients of a converged numeric ansatz in one
/// number field and re-check the embeddings.
pub fn exactify(
    shape: &AnsatzShape,
    state: &AnsatzState,
    digits: Digits,
    max_degree: usize,
) -> Result<Recognition> {
    let mut names = Vec::new();
    let mut values = Vec::new();
    let mut collect = |label: &str, poly: &[Complex]| {
        for (k, v) in poly.iter().enumerate().take(poly.len().saturating_sub(1)) {
            names.push(format!("{label}[{k}]"));
            values.push(v.clone());
        }
    };
    collect("P3", &state.p3);
    collect("P1", &state.p1);
    collect("Q2", &state.q2);
    collect("Q1", &state.q1);
    collect("R", &state.rr);
    names.push("c".to_string());
    values.push(state.c.clone());
    let unified = unify_field(&values, max_degree, digits.0)?;
    // re-embed and verify
    let prec = Digits(digits.0).bits();
    for ((name, x), el) in names.iter().zip(&values).zip(&unified.coords) {
        let img = unified.field.embed(el, &unified.embedding);
        let diff = Complex::with_val(prec, &img - x);
        let scale = abs_f64(x).max(1.0);
        if abs_f64(&diff) / scale > 10f64.powf(-(digits.0 as f64) / 2.0) {
            return Err(Error::Recognition(format!(
                "re-embedding of {name} disagrees with the numeric value"
            )));
        }
    }
    let field = unified.field.clone();
    let one = field.one();
    let mut iter = unified.coords.into_iter();
    let mut take_poly = |len: usize| -> Vec<FieldElement> {
        let mut out: Vec<FieldElement> = (&mut iter).take(len.saturating_sub(1)).collect();
        if len > 0 {
            out.push(one.clone());
        }
        out
    };
    let p3 = take_poly(state.p3.len());
    let p1 = take_poly(state.p1.len());
    let q2 = take_poly(state.q2.len());
    let q1 = take_poly(state.q1.len());
    let rr = take_poly(state.rr.len());
    let c = iter.next().expect("constant coordinate present");
    let all: Vec<(&str, &Vec<FieldElement>)> = vec![
        ("P3", &p3),
        ("P1", &p1),
        ("Q2", &q2),
        ("Q1", &q1),
        ("R", &rr),
    ];
    let mut reports = Vec::new();
    let mut per_value = |name: String, el: &FieldElement, x: &Complex| -> Result<()> {
        let rec = recognize_value(x, max_degree, digits.0)?;
        reports.push(CoefficientReport {
            name,
            degree: rec.degree(),
            minpoly: rec.minpoly,
            residual_log10: rec.residual_log10,
            coords: el.coords.clone(),
        });
        Ok(())
    };
    let mut vi = 0usize;
    for (label, poly) in &all {
        for (k, el) in poly.iter().enumerate().take(poly.len().saturating_sub(1)) {
            per_value(format!("{label}[{k}]"), el, &values[vi])?;
            vi += 1;
        }
    }
    per_value("c".to_string(), &c, &values[vi])?;
    let _ = shape;
    Ok(Recognition {
        ansatz: ExactAnsatz {
            field,
            embedding: unified.embedding,
            p3,
            p1,
            q2,
            q1,
            rr,
            c,
        },
        reports,
    })
}

/// All complex roots of an integer polynomial by the Durand-Kerner
/// iteration at the given binary precision.
pub fn complex_roots(coeffs: &[Integer], bits: u32) -> Vec<Complex> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().is_zero() {
        c.pop();
    }
    let d = c.len() - 1;
    if d == 0 {
        return vec![];
    }
    // monic rational coefficients as floats
    let lead = Float::with_val(bits, &c[d]);
    let monic: Vec<Complex> = c[..d]
        .iter()
        .map(|k| Complex::with_val(bits, Float::with_val(bits, k) / &lead))
        .collect();
    let eval = |z: &Complex| -> Complex {
        let mut acc = Complex::with_val(bits, (1, 0));
        for coeff in monic.iter().rev() {
            acc *= z;
            acc += coeff;
        }
        acc
    };
    // distinct seeds on a slightly irrational spiral
    let mut roots: Vec<Complex> = (0..d)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (d as f64) + 0.4;
            let r = 0.5 + 1.3f64.powi(k as i32 % 7);
            Complex::with_val(bits, (r * theta.cos(), r * theta.sin()))
        })
        .collect();
    let eps = Float::with_val(bits, 2f64).pow(-(bits as i32) + 8);
    for _ in 0..bits as usize * 4 {
        let mut moved = Float::with_val(bits, 0);
        for i in 0..d {
            let num = eval(&roots[i]);
            let mut den = Complex::with_val(bits, (1, 0));
            for j in 0..d {
                if j != i {
                    den *= Complex::with_val(bits, &roots[i] - &roots[j]);
                }
            }
            if abs_f64(&den) == 0.0 {
                // nudge coincident estimates apart
                roots[i] += Complex::with_val(bits, (1e-3, 2e-3));
                continue;
            }
            let delta = num / den;
            let step = abs(&delta);
            if step > moved {
                moved = step;
            }
            roots[i] -= delta;
        }
        if moved < eps {
            break;
        }
    }
    roots
}

/// Horner evaluation wrapper shared with the eval above, exported for the
/// verification stage.
pub fn eval_int_poly(coeffs: &[Integer], x: &Complex) -> Complex {
    poly_eval_int(coeffs, x)
}
