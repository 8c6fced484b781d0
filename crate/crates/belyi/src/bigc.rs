//! Arbitrary-precision complex helpers on top of rug (MPFR/MPC).
//!
//! Precision is tracked in decimal digits and converted to bits with a guard
//! margin; every value is created at an explicit precision so arithmetic
//! never silently downgrades.

use rug::{Complex, Float, Integer};

const LOG2_10: f64 = 3.321928094887362;

/// Working precision in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Digits(pub u32);

impl Digits {
    pub fn bits(self) -> u32 {
        (self.0 as f64 * LOG2_10).ceil() as u32 + 32
    }

    pub fn zero(self) -> Complex {
        Complex::new(self.bits())
    }

    pub fn c(self, re: f64, im: f64) -> Complex {
        Complex::with_val(self.bits(), (re, im))
    }

    pub fn real(self, x: f64) -> Float {
        Float::with_val(self.bits(), x)
    }

    pub fn from_int(self, x: &Integer) -> Float {
        Float::with_val(self.bits(), x)
    }

    pub fn pi(self) -> Float {
        Float::with_val(self.bits(), rug::float::Constant::Pi)
    }

    /// 10^-digits, the nominal resolution at this precision.
    pub fn eps(self) -> f64 {
        10f64.powi(-(self.0 as i32))
    }
}

/// |z| as a Float at z's own precision.
pub fn abs(z: &Complex) -> Float {
    let p = z.prec().0;
    let re2 = Float::with_val(p, z.real() * z.real());
    let im2 = Float::with_val(p, z.imag() * z.imag());
    Float::with_val(p, re2 + im2).sqrt()
}

/// |z| rounded to f64 (saturates on overflow, which is fine for diagnostics).
pub fn abs_f64(z: &Complex) -> f64 {
    abs(z).to_f64()
}

/// Exact round-trip serialization of a complex value (hex mantissa).
pub fn complex_to_hex(z: &Complex) -> String {
    format!(
        "{} {}",
        z.real().to_string_radix(16, None),
        z.imag().to_string_radix(16, None)
    )
}

pub fn complex_from_hex(s: &str, bits: u32) -> Option<Complex> {
    let mut it = s.split_whitespace();
    let re = Float::with_val(bits, Float::parse_radix(it.next()?, 16).ok()?);
    let im = Float::with_val(bits, Float::parse_radix(it.next()?, 16).ok()?);
    if it.next().is_some() {
        return None;
    }
    Some(Complex::with_val(bits, (re, im)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_round_trip() {
        let d = Digits(60);
        assert!(d.bits() > 200);
        let z = d.c(1.25, -0.5);
        let s = complex_to_hex(&z);
        let z2 = complex_from_hex(&s, d.bits()).unwrap();
        assert_eq!(z, z2);
    }

    #[test]
    fn abs_matches_hand_value() {
        let z = Digits(40).c(3.0, 4.0);
        assert!((abs_f64(&z) - 5.0).abs() < 1e-15);
    }
}
