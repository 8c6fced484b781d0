//! Exact arithmetic in a number field Q(a), elements represented as rational
//! coordinate vectors in the power basis 1, a, ..., a^{d-1}.

use crate::error::{Error, Result};
use rug::{Complete, Complex, Float, Integer, Rational};

/// Q(a) presented by the minimal polynomial of a: integer coefficients
/// low-to-high, content 1, positive leader. The leader need not be 1; the
/// reduction divides by it exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberField {
    pub minpoly: Vec<Integer>,
}

/// An element of the field: rational coordinates in the power basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    pub coords: Vec<Rational>,
}

impl NumberField {
    pub fn new(minpoly: Vec<Integer>) -> Result<Self> {
        if minpoly.len() < 2 || minpoly.last().unwrap().is_zero() {
            return Err(Error::Recognition(
                "field polynomial must have degree >= 1".into(),
            ));
        }
        Ok(NumberField { minpoly })
    }

    /// The rationals, presented with minpoly z.
    pub fn rationals() -> Self {
        NumberField {
            minpoly: vec![Integer::from(0), Integer::from(1)],
        }
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coords: vec![Rational::new(); self.degree()],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_rational(Rational::from(1))
    }

    pub fn from_rational(&self, q: Rational) -> FieldElement {
        let mut coords = vec![Rational::new(); self.degree()];
        coords[0] = q;
        FieldElement { coords }
    }

    pub fn from_coords(&self, coords: Vec<Rational>) -> Result<FieldElement> {
        if coords.len() != self.degree() {
            return Err(Error::Recognition(format!(
                "coordinate vector length {} does not match field degree {}",
                coords.len(),
                self.degree()
            )));
        }
        Ok(FieldElement { coords })
    }

    pub fn is_zero(&self, x: &FieldElement) -> bool {
        x.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement {
            coords: x
                .coords
                .iter()
                .zip(&y.coords)
                .map(|(a, b)| (a + b).complete())
                .collect(),
        }
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement {
            coords: x
                .coords
                .iter()
                .zip(&y.coords)
                .map(|(a, b)| (a - b).complete())
                .collect(),
        }
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        FieldElement {
            coords: x.coords.iter().map(|a| (-a).complete()).collect(),
        }
    }

    pub fn scale(&self, x: &FieldElement, q: &Rational) -> FieldElement {
        FieldElement {
            coords: x.coords.iter().map(|a| (a * q).complete()).collect(),
        }
    }

    /// Reduce a rational polynomial (any length) modulo the minimal
    /// polynomial into power-basis coordinates.
    pub fn reduce(&self, mut poly: Vec<Rational>) -> FieldElement {
        let d = self.degree();
        let lead = Rational::from(self.minpoly[d].clone());
        while poly.len() > d {
            let k = poly.len() - 1;
            let t = (&poly[k] / &lead).complete();
            if !t.is_zero() {
                for j in 0..d {
                    let sub = (&t * &Rational::from(self.minpoly[j].clone())).complete();
                    poly[k - d + j] -= sub;
                }
            }
            poly.truncate(k);
        }
        poly.resize(d, Rational::new());
        FieldElement { coords: poly }
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let d = self.degree();
        let mut prod = vec![Rational::new(); 2 * d - 1];
        for (i, a) in x.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += (a * b).complete();
                }
            }
        }
        self.reduce(prod)
    }

    /// Inverse via the extended Euclidean algorithm in Q[z] modulo the
    /// minimal polynomial.
    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement> {
        if self.is_zero(x) {
            return Err(Error::Recognition("division by zero field element".into()));
        }
        // (r0, u0) = (minpoly, 0), (r1, u1) = (x, 1); invariant u*x = r mod minpoly
        let mut r0: Vec<Rational> = self
            .minpoly
            .iter()
            .map(|c| Rational::from(c.clone()))
            .collect();
        let mut r1 = trim(x.coords.clone());
        let mut u0: Vec<Rational> = vec![];
        let mut u1: Vec<Rational> = vec![Rational::from(1)];
        while r1.len() > 1 || (r1.len() == 1 && !r1[0].is_zero()) {
            let (q, rem) = poly_divrem(&r0, &r1);
            let u2 = poly_sub(&u0, &poly_mul_q(&q, &u1));
            r0 = r1;
            r1 = rem;
            u0 = u1;
            u1 = u2;
        }
        // r0 is the gcd; it must be a nonzero constant since minpoly is
        // irreducible and x is nonzero
        if r0.len() != 1 || r0[0].is_zero() {
            return Err(Error::Recognition(
                "field polynomial is reducible: gcd with element is non-constant".into(),
            ));
        }
        let g = r0[0].clone();
        let mut inv = u0;
        for c in &mut inv {
            *c /= &g;
        }
        Ok(self.reduce(inv))
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &FieldElement, mut e: u32) -> FieldElement {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Numerical image of an element under the embedding a -> root.
    pub fn embed(&self, x: &FieldElement, root: &Complex) -> Complex {
        let bits = root.prec().0;
        let mut acc = Complex::new(bits);
        for c in x.coords.iter().rev() {
            acc *= root;
            let num = Float::with_val(bits, c.numer());
            let den = Float::with_val(bits, c.denom());
            acc += Complex::with_val(bits, num / den);
        }
        acc
    }
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.len() > 1 && v.last().unwrap().is_zero() {
        v.pop();
    }
    v
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::new(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(out)
}

fn poly_mul_q(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += (x * y).complete();
        }
    }
    trim(out)
}

/// Division with remainder in Q[z]; divisor must be nonzero.
fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let mut rem = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() <= db && !(rem.len() == 1 && db == 0) {
        return (vec![], rem);
    }
    let mut quot = vec![Rational::new(); rem.len().saturating_sub(db)];
    while rem.len() > db || (db == 0 && !(rem.len() == 1 && rem[0].is_zero())) {
        if db == 0 {
            // dividing by a constant
            let mut q = rem.clone();
            for c in &mut q {
                *c /= &lead;
            }
            return (q, vec![Rational::new()]);
        }
        let k = rem.len() - 1;
        let t = (&rem[k] / &lead).complete();
        quot[k - db] = t.clone();
        for j in 0..=db {
            let sub = (&t * &b[j]).complete();
            rem[k - db + j] -= sub;
        }
        rem = trim(rem[..k].to_vec());
        if rem.len() <= db {
            break;
        }
    }
    (quot, rem)
}

// ---- polynomials over the field

/// Dense polynomial with field coefficients, low-to-high, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldPolynomial {
    pub coeffs: Vec<FieldElement>,
}

impl FieldPolynomial {
    pub fn new(field: &NumberField, coeffs: Vec<FieldElement>) -> Self {
        let mut p = FieldPolynomial { coeffs };
        p.trim(field);
        p
    }

    pub fn zero() -> Self {
        FieldPolynomial { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    fn trim(&mut self, field: &NumberField) {
        while let Some(last) = self.coeffs.last() {
            if field.is_zero(last) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn add(&self, field: &NumberField, other: &Self) -> Self {
        let mut coeffs = vec![field.zero(); self.coeffs.len().max(other.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] = field.add(&coeffs[i], c);
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] = field.add(&coeffs[i], c);
        }
        Self::new(field, coeffs)
    }

    pub fn sub(&self, field: &NumberField, other: &Self) -> Self {
        let mut coeffs = vec![field.zero(); self.coeffs.len().max(other.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] = field.add(&coeffs[i], c);
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] = field.sub(&coeffs[i], c);
        }
        Self::new(field, coeffs)
    }

    pub fn mul(&self, field: &NumberField, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in other.coeffs.iter().enumerate() {
                let t = field.mul(x, y);
                coeffs[i + j] = field.add(&coeffs[i + j], &t);
            }
        }
        Self::new(field, coeffs)
    }

    pub fn scale(&self, field: &NumberField, s: &FieldElement) -> Self {
        Self::new(
            field,
            self.coeffs.iter().map(|c| field.mul(c, s)).collect(),
        )
    }

    pub fn derivative(&self, field: &NumberField) -> Self {
        let mut coeffs = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            coeffs.push(field.scale(c, &Rational::from(i as u32)));
        }
        Self::new(field, coeffs)
    }

    pub fn divrem(&self, field: &NumberField, other: &Self) -> Result<(Self, Self)> {
        if other.is_zero() {
            return Err(Error::Recognition("polynomial division by zero".into()));
        }
        let db = other.coeffs.len() - 1;
        let lead_inv = field.inv(other.coeffs.last().unwrap())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![field.zero(); rem.len().saturating_sub(db)];
        while rem.len() > db {
            let k = rem.len() - 1;
            if field.is_zero(&rem[k]) {
                rem.pop();
                continue;
            }
            let t = field.mul(&rem[k], &lead_inv);
            quot[k - db] = t.clone();
            for j in 0..=db {
                let s = field.mul(&t, &other.coeffs[j]);
                rem[k - db + j] = field.sub(&rem[k - db + j], &s);
            }
            rem.pop();
        }
        Ok((
            Self::new(field, quot),
            Self::new(field, rem),
        ))
    }

    /// Monic gcd.
    pub fn gcd(&self, field: &NumberField, other: &Self) -> Result<Self> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(field, &b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return Ok(a);
        }
        let lead_inv = field.inv(a.coeffs.last().unwrap())?;
        Ok(a.scale(field, &lead_inv))
    }

    pub fn is_squarefree(&self, field: &NumberField) -> Result<bool> {
        if self.coeffs.len() <= 2 {
            return Ok(true);
        }
        let g = self.gcd(field, &self.derivative(field))?;
        Ok(g.degree() == Some(0))
    }

    pub fn is_coprime_with(&self, field: &NumberField, other: &Self) -> Result<bool> {
        if self.is_zero() || other.is_zero() {
            return Ok(false);
        }
        let g = self.gcd(field, other)?;
        Ok(g.degree() == Some(0))
    }

    /// Substitute z -> A z + B.
    pub fn compose_affine(&self, field: &NumberField, a: &FieldElement, b: &FieldElement) -> Self {
        // Horner: p(Az+B) = (...((c_d (Az+B) + c_{d-1})(Az+B) + ...)
        let lin = FieldPolynomial::new(field, vec![b.clone(), a.clone()]);
        let mut acc = FieldPolynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(field, &lin);
            acc = acc.add(field, &FieldPolynomial::new(field, vec![c.clone()]));
        }
        acc
    }
}

/// Scale a rational so elements print as `num/den` (den omitted when 1).
pub fn rational_to_string(q: &Rational) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_from_string(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map(|q| q.into())
        .map_err(|_| Error::Parse(format!("bad rational: {s}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad_field() -> NumberField {
        // z^2 - z + 1, root (1+sqrt(-3))/2
        NumberField::new(vec![Integer::from(1), Integer::from(-1), Integer::from(1)]).unwrap()
    }

    fn el(f: &NumberField, a: i64, b: i64) -> FieldElement {
        f.from_coords(vec![Rational::from(a), Rational::from(b)]).unwrap()
    }

    #[test]
    fn field_axioms_hold_on_samples() {
        let f = quad_field();
        let x = el(&f, 2, -3);
        let y = el(&f, -1, 5);
        let z = el(&f, 7, 1);
        let lhs = f.mul(&f.mul(&x, &y), &z);
        let rhs = f.mul(&x, &f.mul(&y, &z));
        assert_eq!(lhs, rhs);
        // omega^2 = omega - 1
        let omega = el(&f, 0, 1);
        assert_eq!(f.mul(&omega, &omega), el(&f, -1, 1));
        // inverses
        for v in [x, y, z, omega] {
            let inv = f.inv(&v).unwrap();
            assert_eq!(f.mul(&v, &inv), f.one());
        }
    }

    #[test]
    fn inverse_in_quartic_field() {
        // z^4 + 13 z^2 + 13
        let f = NumberField::new(vec![
            Integer::from(13),
            Integer::from(0),
            Integer::from(13),
            Integer::from(0),
            Integer::from(1),
        ])
        .unwrap();
        let a = f
            .from_coords(vec![
                Rational::from(3),
                Rational::from((1, 2)),
                Rational::from(0),
                Rational::from(-2),
            ])
            .unwrap();
        let inv = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), f.one());
    }

    #[test]
    fn rationals_as_degree_one_field() {
        let f = NumberField::rationals();
        let x = f.from_rational(Rational::from((3, 4)));
        let y = f.from_rational(Rational::from((-2, 5)));
        assert_eq!(
            f.mul(&x, &y),
            f.from_rational(Rational::from((-3, 10)))
        );
        assert_eq!(f.inv(&x).unwrap(), f.from_rational(Rational::from((4, 3))));
    }

    #[test]
    fn polynomial_gcd_and_squarefree() {
        let f = NumberField::rationals();
        let q = |v: i64| f.from_rational(Rational::from(v));
        // (z-1)^2 (z+2)
        let p = FieldPolynomial::new(
            &f,
            vec![q(2), q(-3), q(0), q(1)],
        );
        assert!(!p.is_squarefree(&f).unwrap());
        // z^2 - 1 vs z - 1: gcd z - 1
        let a = FieldPolynomial::new(&f, vec![q(-1), q(0), q(1)]);
        let b = FieldPolynomial::new(&f, vec![q(-1), q(1)]);
        let g = a.gcd(&f, &b).unwrap();
        assert_eq!(g, b);
        assert!(a.is_squarefree(&f).unwrap());
        // coprime test
        let c = FieldPolynomial::new(&f, vec![q(2), q(1)]);
        assert!(a.is_coprime_with(&f, &c).unwrap());
        assert!(!a.is_coprime_with(&f, &b).unwrap());
    }

    #[test]
    fn affine_composition() {
        let f = NumberField::rationals();
        let q = |v: i64| f.from_rational(Rational::from(v));
        // p(z) = z^2 + 1; p(2z - 1) = 4z^2 - 4z + 2
        let p = FieldPolynomial::new(&f, vec![q(1), q(0), q(1)]);
        let got = p.compose_affine(&f, &q(2), &q(-1));
        assert_eq!(got, FieldPolynomial::new(&f, vec![q(2), q(-4), q(4)]));
    }

    #[test]
    fn embedding_matches_numerics() {
        let f = quad_field();
        let omega = el(&f, 0, 1);
        let root = Complex::with_val(200, (0.5, 0.75f64.sqrt()));
        let img = f.embed(&f.mul(&omega, &omega), &root);
        // omega^2 = omega - 1
        let want = Complex::with_val(200, (-0.5, 0.75f64.sqrt()));
        let diff = Complex::with_val(200, &img - &want);
        assert!(crate::bigc::abs_f64(&diff) < 1e-12);
    }
}
