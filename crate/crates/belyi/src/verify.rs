//! Exact certification of Belyi functions over their number field: the
//! defining identity, the symbolic passport, affine matching against the
//! built-in catalog, and the catalog self-check.

use crate::bigc::Digits;
use crate::catalog::CatalogEntry;
use crate::dessin::Passport;
use crate::error::{Error, Result};
use crate::numfield::{FieldElement, FieldPolynomial, NumberField};
use crate::recognize::{complex_roots, coords_in_field, ExactAnsatz};
use rug::Complex;

/// The exact data of one Belyi function: five polynomials (P3, P1, Q2, Q1
/// monic; R monic for pipeline output, possibly non-monic as published) and
/// the constant c, over one number field.
#[derive(Clone, Debug)]
pub struct ExactBelyi {
    pub field: NumberField,
    pub p3: Vec<FieldElement>,
    pub p1: Vec<FieldElement>,
    pub q2: Vec<FieldElement>,
    pub q1: Vec<FieldElement>,
    pub rr: Vec<FieldElement>,
    pub c: FieldElement,
}

impl From<&ExactAnsatz> for ExactBelyi {
    fn from(x: &ExactAnsatz) -> Self {
        ExactBelyi {
            field: x.field.clone(),
            p3: x.p3.clone(),
            p1: x.p1.clone(),
            q2: x.q2.clone(),
            q1: x.q1.clone(),
            rr: x.rr.clone(),
            c: x.c.clone(),
        }
    }
}

impl From<&CatalogEntry> for ExactBelyi {
    fn from(e: &CatalogEntry) -> Self {
        ExactBelyi {
            field: e.field.clone(),
            p3: e.p3.clone(),
            p1: e.p1.clone(),
            q2: e.q2.clone(),
            q1: e.q1.clone(),
            rr: e.rr.clone(),
            c: e.c.clone(),
        }
    }
}

fn fp(field: &NumberField, coeffs: &[FieldElement]) -> FieldPolynomial {
    FieldPolynomial::new(field, coeffs.to_vec())
}

impl ExactBelyi {
    /// Total degree n = 3 deg P3 + deg P1.
    pub fn n(&self) -> usize {
        3 * (self.p3.len() - 1) + (self.p1.len() - 1)
    }
}

/// Certify the defining identity P3^3 P1 - Q2^2 Q1 = c R exactly, together
/// with the structural conditions: P3, P1, Q2, Q1 monic, all five
/// polynomials squarefree, and the coprimality the passport demands. On
/// failure, describes the first violated condition.
pub fn identity_check(x: &ExactBelyi) -> std::result::Result<(), String> {
    let f = &x.field;
    let one = f.one();
    for (name, poly) in [("P3", &x.p3), ("P1", &x.p1), ("Q2", &x.q2), ("Q1", &x.q1)] {
        if poly.last() != Some(&one) {
            return Err(format!("{name} is not monic"));
        }
    }
    if f.is_zero(&x.c) {
        return Err("constant c is zero".into());
    }
    if f.is_zero(x.rr.last().expect("R nonempty")) {
        return Err("R has zero leading coefficient".into());
    }
    let p3 = fp(f, &x.p3);
    let p1 = fp(f, &x.p1);
    let q2 = fp(f, &x.q2);
    let q1 = fp(f, &x.q1);
    let rr = fp(f, &x.rr);
    let lhs = p3.mul(f, &p3).mul(f, &p3).mul(f, &p1);
    let rhs = q2.mul(f, &q2).mul(f, &q1);
    let crr = rr.scale(f, &x.c);
    let diff = lhs.sub(f, &rhs).sub(f, &crr);
    if !diff.is_zero() {
        let k = diff
            .coeffs
            .iter()
            .position(|c| !f.is_zero(c))
            .unwrap_or(0);
        return Err(format!(
            "identity P3^3 P1 - Q2^2 Q1 - cR != 0: first nonzero at z^{k}"
        ));
    }
    let named = [
        ("P3", &p3),
        ("P1", &p1),
        ("Q2", &q2),
        ("Q1", &q1),
        ("R", &rr),
    ];
    for (name, poly) in &named {
        match poly.is_squarefree(f) {
            Ok(true) => {}
            Ok(false) => return Err(format!("{name} has a multiple root")),
            Err(e) => return Err(format!("squarefree check of {name}: {e}")),
        }
    }
    let num = p3.mul(f, &p1);
    let den = q2.mul(f, &q1);
    let pairs = [
        ("P3", &p3, "P1", &p1),
        ("Q2", &q2, "Q1", &q1),
        ("P3 P1", &num, "R", &rr),
        ("Q2 Q1", &den, "R", &rr),
        ("P3 P1", &num, "Q2 Q1", &den),
    ];
    for (an, a, bn, b) in pairs {
        match a.is_coprime_with(f, b) {
            Ok(true) => {}
            Ok(false) => return Err(format!("{an} and {bn} share a root")),
            Err(e) => return Err(format!("coprimality of {an}, {bn}: {e}")),
        }
    }
    Ok(())
}

/// Recompute the passport from the exact polynomial structure: black
/// multiplicities from P3^3 P1, white from Q2^2 Q1, faces from R and the
/// pole at infinity of order n - deg R.
pub fn symbolic_passport(x: &ExactBelyi) -> Result<Passport> {
    let n = x.n();
    let d3 = x.p3.len() - 1;
    let d1 = x.p1.len() - 1;
    let e2 = x.q2.len() - 1;
    let e1 = x.q1.len() - 1;
    let r = x.rr.len() - 1;
    if 2 * e2 + e1 != n {
        return Err(Error::Verification(format!(
            "degree mismatch: 3*{d3}+{d1} = {n} but 2*{e2}+{e1} = {}",
            2 * e2 + e1
        )));
    }
    if r >= n {
        return Err(Error::Verification(format!(
            "R degree {r} not smaller than n = {n}"
        )));
    }
    let mut l0 = vec![3; d3];
    l0.extend(std::iter::repeat_n(1, d1));
    let mut l1 = vec![2; e2];
    l1.extend(std::iter::repeat_n(1, e1));
    let mut l2 = vec![n - r];
    l2.extend(std::iter::repeat_n(1, r));
    Passport::new(l0, l1, l2)
}

/// Apply a field embedding (generator image alpha) to an element of the
/// source field, landing in alpha's field.
pub fn map_element(el: &FieldElement, field: &NumberField, alpha: &FieldElement) -> FieldElement {
    let mut acc = field.zero();
    for q in el.coords.iter().rev() {
        acc = field.mul(&acc, alpha);
        acc = field.add(&acc, &field.from_rational(q.clone()));
    }
    acc
}

/// All embeddings of `from` into `field`, as images of the generator of
/// `from`. Candidates come from numeric roots plus an integer-relation
/// solve; each is certified exactly before being returned.
pub fn field_embeddings(
    from: &NumberField,
    field: &NumberField,
    field_root: &Complex,
    digits: u32,
) -> Vec<FieldElement> {
    if from.degree() == 1 {
        // minpoly a z + b has the rational root -b/a, present in any field
        let q = rug::Rational::from((-from.minpoly[0].clone(), from.minpoly[1].clone()));
        return vec![field.from_rational(q)];
    }
    if from.degree() > field.degree() {
        return vec![];
    }
    let bits = Digits(digits).bits().max(field_root.prec().0);
    let mut out: Vec<FieldElement> = Vec::new();
    for root in complex_roots(&from.minpoly, bits) {
        let Ok((alpha, _)) = coords_in_field(field, field_root, &root, digits) else {
            continue;
        };
        // exact certification: the minimal polynomial must vanish at alpha
        let mut val = field.zero();
        for c in from.minpoly.iter().rev() {
            val = field.mul(&val, &alpha);
            val = field.add(&val, &field.from_rational(rug::Rational::from(c.clone())));
        }
        if field.is_zero(&val) && !out.contains(&alpha) {
            out.push(alpha);
        }
    }
    out
}

/// A certified affine equivalence x(z) = y(Az + B), possibly through a
/// Galois conjugate of y's field.
#[derive(Clone, Debug)]
pub struct AffineMatch {
    pub a: FieldElement,
    pub b: FieldElement,
    /// Index of the accepted embedding among the certified embeddings of
    /// the catalog field; 0 is the principal one.
    pub embedding: usize,
}

/// Root sum of a (possibly non-monic) polynomial: -coeff[d-1] / lead.
fn root_sum(field: &NumberField, poly: &[FieldElement]) -> Result<FieldElement> {
    let d = poly.len() - 1;
    let lead_inv = field.inv(&poly[d])?;
    Ok(field.neg(&field.mul(&poly[d - 1], &lead_inv)))
}

/// Substitute z -> Az + B into `poly` (coefficients already in x's field),
/// and normalize to monic; returns None when the result does not match
/// `target` exactly.
fn transformed_matches(
    field: &NumberField,
    poly: &[FieldElement],
    a: &FieldElement,
    b: &FieldElement,
    target: &[FieldElement],
) -> Result<bool> {
    let t = fp(field, poly).compose_affine(field, a, b);
    if t.coeffs.len() != target.len() {
        return Ok(false);
    }
    let lead_inv = field.inv(t.coeffs.last().expect("nonzero poly"))?;
    // target is monic except possibly R; normalize both sides by leaders
    let target_lead_inv = field.inv(target.last().expect("nonzero target"))?;
    for (tc, xc) in t.coeffs.iter().zip(target) {
        let lhs = field.mul(tc, &lead_inv);
        let rhs = field.mul(xc, &target_lead_inv);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Search for A, B with x(z) = y(Az + B) over x's field, trying every
/// certified embedding of y's field (Galois conjugates accepted). The
/// candidate (A, B) is derived from root sums of two polynomials with an
/// invertible 2x2 system, then certified exactly on all five polynomials
/// and the constant.
pub fn affine_match(
    x: &ExactBelyi,
    x_root: &Complex,
    y: &CatalogEntry,
    digits: u32,
) -> Result<Option<AffineMatch>> {
    let yb: ExactBelyi = y.into();
    let xp = symbolic_passport(x)?;
    let yp = symbolic_passport(&yb)?;
    if xp != yp {
        return Ok(None);
    }
    let f = &x.field;
    let embeddings = field_embeddings(&y.field, f, x_root, digits);
    let n = x.n();
    for (ei, alpha) in embeddings.iter().enumerate() {
        let map_poly = |p: &[FieldElement]| -> Vec<FieldElement> {
            p.iter().map(|c| map_element(c, f, alpha)).collect()
        };
        let yp3 = map_poly(&y.p3);
        let yp1 = map_poly(&y.p1);
        let yq2 = map_poly(&y.q2);
        let yq1 = map_poly(&y.q1);
        let yrr = map_poly(&y.rr);
        let yc = map_element(&y.c, f, alpha);
        let xpolys = [&x.p3, &x.p1, &x.q2, &x.q1, &x.rr];
        let ypolys = [&yp3, &yp1, &yq2, &yq1, &yrr];
        // root-sum data (degree, sum_x, sum_y) for every degree >= 1 poly
        let mut data = Vec::new();
        for (xp, yp) in xpolys.iter().zip(&ypolys) {
            let d = xp.len() - 1;
            if d >= 1 {
                data.push((d, root_sum(f, xp)?, root_sum(f, yp)?));
            }
        }
        // sum_x = (sum_y - d B)/A: solve u = 1/A, v = B/A from a pair
        let mut candidate: Option<(FieldElement, FieldElement)> = None;
        'pairs: for i in 0..data.len() {
            for j in i + 1..data.len() {
                let (di, sxi, syi) = &data[i];
                let (dj, sxj, syj) = &data[j];
                let di_f = f.from_rational(rug::Rational::from(*di as u32));
                let dj_f = f.from_rational(rug::Rational::from(*dj as u32));
                // det = dj*syi - di*syj
                let det = f.sub(&f.mul(&dj_f, syi), &f.mul(&di_f, syj));
                if f.is_zero(&det) {
                    continue;
                }
                // u = (dj*sxi - di*sxj) / det
                let u_num = f.sub(&f.mul(&dj_f, sxi), &f.mul(&di_f, sxj));
                let u = f.div(&u_num, &det)?;
                if f.is_zero(&u) {
                    continue;
                }
                // v = (syi*u - sxi) / di
                let v = f.div(&f.sub(&f.mul(syi, &u), sxi), &di_f)?;
                let a = f.inv(&u)?;
                let b = f.mul(&v, &a);
                candidate = Some((a, b));
                break 'pairs;
            }
        }
        let Some((a, b)) = candidate else { continue };
        let mut ok = true;
        for (xp, yp) in xpolys.iter().zip(&ypolys) {
            if !transformed_matches(f, yp, &a, &b, xp)? {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        // the invariant is c*R: c_x R_x(z) must equal c_y A^(-n) R_y(Az+B)
        let lhs = fp(f, &x.rr).scale(f, &x.c);
        let scale = f.mul(&yc, &f.pow(&f.inv(&a)?, n as u32));
        let rhs = fp(f, &yrr).compose_affine(f, &a, &b).scale(f, &scale);
        if lhs != rhs {
            continue;
        }
        return Ok(Some(AffineMatch {
            a,
            b,
            embedding: ei,
        }));
    }
    Ok(None)
}

/// Run the full catalog self-check: every entry must pass the identity
/// check and reproduce its declared passport. Returns the report lines;
/// errors out at the first failing entry.
pub fn run_catalog(entries: &[CatalogEntry]) -> Result<Vec<String>> {
    let mut report = Vec::new();
    for e in entries {
        let xb: ExactBelyi = e.into();
        if let Err(msg) = identity_check(&xb) {
            return Err(Error::Verification(format!("orbit {}: {msg}", e.orbit)));
        }
        let p = symbolic_passport(&xb)?;
        if p != e.passport {
            return Err(Error::Verification(format!(
                "orbit {}: symbolic passport {p} != declared {}",
                e.orbit, e.passport
            )));
        }
        report.push(format!("orbit {}: identity ok, passport {p}", e.orbit));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;
    use rug::Rational;

    fn entry(orbit: &str) -> CatalogEntry {
        builtin()
            .unwrap()
            .into_iter()
            .find(|e| e.orbit == orbit)
            .unwrap()
    }

    fn any_root(field: &NumberField, bits: u32) -> Complex {
        if field.degree() == 1 {
            let mut roots = complex_roots(&field.minpoly, bits);
            return roots.pop().unwrap();
        }
        complex_roots(&field.minpoly, bits)
            .into_iter()
            .max_by(|a, b| a.imag().partial_cmp(b.imag()).unwrap())
            .unwrap()
    }

    #[test]
    fn full_catalog_self_verifies() {
        let cat = builtin().unwrap();
        let report = run_catalog(&cat).unwrap();
        assert_eq!(report.len(), 20);
    }

    #[test]
    fn symbolic_passports_match_declared_headers() {
        let e = entry("6.1");
        let p = symbolic_passport(&(&e).into()).unwrap();
        assert_eq!(p, Passport::parse("(3^2|2^2 1^2|5 1)").unwrap());
        let e = entry("9.4");
        let p = symbolic_passport(&(&e).into()).unwrap();
        assert_eq!(p, Passport::parse("(3^3|2^4 1|7 1^2)").unwrap());
    }

    #[test]
    fn doubled_constant_fails_identity() {
        let e = entry("6.1");
        let mut xb: ExactBelyi = (&e).into();
        xb.c = xb.field.add(&xb.c, &xb.c);
        assert!(identity_check(&xb).is_err());
    }

    #[test]
    fn affine_match_is_reflexive() {
        for orbit in ["6.1", "7.1", "13.1"] {
            let e = entry(orbit);
            let xb: ExactBelyi = (&e).into();
            let root = any_root(&e.field, Digits(80).bits());
            let m = affine_match(&xb, &root, &e, 80).unwrap().unwrap();
            assert_eq!(m.a, e.field.one(), "A for {orbit}");
            assert!(e.field.is_zero(&m.b), "B for {orbit}");
        }
    }

    #[test]
    fn affine_match_recovers_constructed_substitution() {
        // pre-apply z -> 2z - 1 to catalog 6.1 and recover (A,B) = (2,-1)
        let e = entry("6.1");
        let f = e.field.clone();
        let two = f.from_rational(Rational::from(2));
        let minus_one = f.from_rational(Rational::from(-1));
        let sub = |p: &[FieldElement]| -> Vec<FieldElement> {
            let t = fp(&f, p).compose_affine(&f, &two, &minus_one);
            let inv = f.inv(t.coeffs.last().unwrap()).unwrap();
            t.coeffs.iter().map(|c| f.mul(c, &inv)).collect()
        };
        let n = 6;
        let r = e.rr.len() - 1;
        // c_x = c_y * lead(R_y) * A^(r - n); R is monic here
        let a_pow = f.pow(&f.inv(&two).unwrap(), (n - r) as u32);
        let xb = ExactBelyi {
            field: f.clone(),
            p3: sub(&e.p3),
            p1: sub(&e.p1),
            q2: sub(&e.q2),
            q1: sub(&e.q1),
            rr: sub(&e.rr),
            c: f.mul(&e.c, &a_pow),
        };
        identity_check(&xb).unwrap();
        let root = any_root(&f, Digits(80).bits());
        let m = affine_match(&xb, &root, &e, 80).unwrap().unwrap();
        assert_eq!(m.a, two);
        assert_eq!(m.b, minus_one);
    }

    #[test]
    fn mismatched_passports_do_not_match() {
        let x = entry("6.1");
        let y = entry("8.8");
        let xb: ExactBelyi = (&x).into();
        let root = any_root(&x.field, Digits(80).bits());
        assert!(affine_match(&xb, &root, &y, 80).unwrap().is_none());
    }
}
