//! Dense complex linear algebra at arbitrary precision: Gaussian elimination
//! with partial pivoting, and least squares through column-scaled normal
//! equations.

use crate::bigc::{abs_f64, Digits};
use crate::error::{Error, Result};
use rug::Complex;

pub struct Solution {
    pub x: Vec<Complex>,
    /// max/min pivot magnitude ratio; a crude condition estimate
    pub cond_estimate: f64,
}

/// Solve the square system a x = b in place. A pivot below
/// 10^-(digits-5) * max|a| is reported as singular.
pub fn solve_square(a: &mut [Vec<Complex>], b: &mut [Complex], digits: Digits) -> Result<Solution> {
    let n = a.len();
    if n == 0 || b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::Numeric("solve_square: bad dimensions".into()));
    }
    let bits = a[0][0].prec().0;
    let max_entry = a
        .iter()
        .flat_map(|row| row.iter())
        .map(abs_f64)
        .fold(0.0f64, f64::max);
    let threshold = max_entry * 10f64.powi(-(digits.0 as i32 - 5));
    let mut max_piv = 0.0f64;
    let mut min_piv = f64::INFINITY;

    for col in 0..n {
        let (pr, pv) = (col..n)
            .map(|r| (r, abs_f64(&a[r][col])))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pv <= threshold || pv == 0.0 {
            return Err(Error::Singular(format!(
                "pivot {pv:.3e} below threshold {threshold:.3e} in column {col}"
            )));
        }
        a.swap(col, pr);
        b.swap(col, pr);
        max_piv = max_piv.max(pv);
        min_piv = min_piv.min(pv);
        let inv_piv = Complex::with_val(bits, 1.0 / a[col][col].clone());
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = Complex::with_val(bits, &a[r][col] * &inv_piv);
            for c in col..n {
                let t = Complex::with_val(bits, &factor * &a[col][c]);
                a[r][c] -= t;
            }
            let t = Complex::with_val(bits, &factor * &b[col]);
            b[r] -= t;
        }
    }

    let mut x = vec![Complex::new(bits); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for c in row + 1..n {
            let t = Complex::with_val(bits, &a[row][c] * &x[c]);
            acc -= t;
        }
        x[row] = Complex::with_val(bits, &acc / &a[row][row]);
    }

    Ok(Solution {
        x,
        cond_estimate: max_piv / min_piv,
    })
}

/// Least squares min |a x - b| for a tall matrix, via normal equations after
/// scaling each column to unit max magnitude.
pub fn solve_least_squares(a: &[Vec<Complex>], b: &[Complex], digits: Digits) -> Result<Solution> {
    let m = a.len();
    if m == 0 {
        return Err(Error::Numeric("least squares: empty system".into()));
    }
    let n = a[0].len();
    if m < n || b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::Numeric(format!(
            "least squares: bad dimensions ({m} rows, {n} cols)"
        )));
    }
    let bits = a[0][0].prec().0;

    let mut col_scale = vec![0.0f64; n];
    for row in a {
        for (j, v) in row.iter().enumerate() {
            col_scale[j] = col_scale[j].max(abs_f64(v));
        }
    }
    if col_scale.iter().any(|&s| s == 0.0) {
        return Err(Error::Singular("least squares: zero column".into()));
    }

    // scaled copy; B = A D with D = diag(1/col_scale)
    let scaled: Vec<Vec<Complex>> = a
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, v)| Complex::with_val(bits, v / &Complex::with_val(bits, (col_scale[j], 0.0))))
                .collect()
        })
        .collect();

    // G = B^H B, rhs = B^H b
    let mut g = vec![vec![Complex::new(bits); n]; n];
    let mut rhs = vec![Complex::new(bits); n];
    for (row, bv) in scaled.iter().zip(b.iter()) {
        for i in 0..n {
            let ci = row[i].clone().conj();
            for j in i..n {
                let t = Complex::with_val(bits, &ci * &row[j]);
                g[i][j] += t;
            }
            let t = Complex::with_val(bits, &ci * bv);
            rhs[i] += t;
        }
    }
    for i in 0..n {
        for j in 0..i {
            g[i][j] = g[j][i].clone().conj();
        }
    }

    // Tiny ridge term: directions the data barely constrains (singular values
    // below ~10^-(digits-10)/2) are damped instead of blowing up. Since the
    // shift is quadratically below the working precision it does not disturb
    // well-determined components.
    let mut trace = 0.0f64;
    for i in 0..n {
        trace += abs_f64(&g[i][i]);
    }
    let ridge = (trace / n as f64) * 10f64.powi(-(digits.0 as i32 - 10));
    for (i, row) in g.iter_mut().enumerate() {
        row[i] += Complex::with_val(bits, (ridge, 0.0));
    }

    let sol = solve_square(&mut g, &mut rhs, digits)?;
    let x = sol
        .x
        .into_iter()
        .enumerate()
        .map(|(j, v)| Complex::with_val(bits, &v / &Complex::with_val(bits, (col_scale[j], 0.0))))
        .collect();
    Ok(Solution {
        x,
        cond_estimate: sol.cond_estimate,
    })
}
