//! Lattice basis reduction with exact rational arithmetic.
//!
//! The input basis has integer entries; all Gram-Schmidt data is kept as
//! exact rationals, so the reduction is deterministic and never suffers
//! floating-point drift. The implementation follows the classic
//! integral-lattice LLL loop: size-reduce, test the Lovász condition with a
//! rational parameter delta, swap and patch the Gram-Schmidt data
//! incrementally on failure.

use rug::{Complete, Integer, Rational};

/// Row-major integer matrix whose rows are the basis vectors.
pub type Basis = Vec<Vec<Integer>>;

fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    let mut s = Integer::new();
    for (x, y) in a.iter().zip(b) {
        s += (x * y).complete();
    }
    s
}

/// State for the incremental Gram-Schmidt data: `mu[i][j]` for j < i, and
/// `b_star[i]` = squared length of the i-th orthogonalized vector.
struct Gso {
    mu: Vec<Vec<Rational>>,
    b_star: Vec<Rational>,
    /// c[i][j] = <b_i, b*_j> as exact rationals, needed for updates.
    c: Vec<Vec<Rational>>,
}

/// Compute the full Gram-Schmidt data from the Gram matrix of `basis`.
fn gso(basis: &Basis) -> Gso {
    let n = basis.len();
    let mut mu = vec![vec![Rational::new(); n]; n];
    let mut b_star = vec![Rational::new(); n];
    let mut c = vec![vec![Rational::new(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            // c[i][j] = <b_i, b_j> - sum_{k<j} mu[j][k] * c[i][k]
            let mut v = Rational::from(dot(&basis[i], &basis[j]));
            for k in 0..j {
                v -= (&mu[j][k] * &c[i][k]).complete();
            }
            c[i][j] = v;
        }
        for j in 0..i {
            mu[i][j] = (&c[i][j] / &b_star[j]).complete();
        }
        b_star[i] = c[i][i].clone();
        for k in 0..i {
            b_star[i] -= (&mu[i][k] * &c[i][k]).complete();
        }
    }
    Gso { mu, b_star, c }
}

/// Size-reduce row k against row l: b_k -= round(mu[k][l]) * b_l.
fn red(basis: &mut Basis, g: &mut Gso, k: usize, l: usize) {
    let q = g.mu[k][l].clone().round();
    let q = q.numer().clone();
    if q.is_zero() {
        return;
    }
    for t in 0..basis[k].len() {
        let s = (&q * &basis[l][t]).complete();
        basis[k][t] -= s;
    }
    let qr = Rational::from(q);
    g.mu[k][l] -= &qr;
    for j in 0..l {
        let s = (&qr * &g.mu[l][j]).complete();
        g.mu[k][j] -= s;
    }
}

/// Swap rows k-1 and k and patch the Gram-Schmidt data in place.
fn swap_step(basis: &mut Basis, g: &mut Gso, k: usize, n: usize) {
    let mu_kk1 = g.mu[k][k - 1].clone();
    basis.swap(k - 1, k);
    // mu entries against rows below k-1 travel with the swapped rows
    for j in 0..k - 1 {
        let t = g.mu[k - 1][j].clone();
        g.mu[k - 1][j] = g.mu[k][j].clone();
        g.mu[k][j] = t;
    }
    let mut b_new = (&mu_kk1 * &mu_kk1).complete();
    b_new *= &g.b_star[k - 1];
    b_new += &g.b_star[k];
    let mut mu_new = (&mu_kk1 * &g.b_star[k - 1]).complete();
    mu_new /= &b_new;
    let mut bk = (&g.b_star[k - 1] * &g.b_star[k]).complete();
    bk /= &b_new;
    g.b_star[k] = bk;
    g.b_star[k - 1] = b_new;
    for i in k + 1..n {
        let t = g.mu[i][k].clone();
        let mut nk = g.mu[i][k - 1].clone();
        nk -= (&mu_kk1 * &t).complete();
        let mut nk1 = t;
        nk1 += (&mu_new * &nk).complete();
        g.mu[i][k] = nk;
        g.mu[i][k - 1] = nk1;
    }
    g.mu[k][k - 1] = mu_new;
}

/// LLL-reduce `basis` in place with the given reduction parameter, e.g.
/// delta = 99/100. Returns the reduced basis.
pub fn lll_reduce(mut basis: Basis, delta: &Rational) -> Basis {
    let n = basis.len();
    if n <= 1 {
        return basis;
    }
    // Fix mu rows after swaps by recomputing from scratch when the patch
    // formulas above would be incomplete: the incremental update handles
    // mu[i][k], mu[i][k-1] for i > k and mu[k][k-1]; mu rows below k-1 are
    // unchanged by a swap, and mu[k-1][j], mu[k][j] for j < k-1 swap with
    // the rows, which the row swap already performed.
    let mut g = gso(&basis);
    let mut k = 1;
    while k < n {
        red(&mut basis, &mut g, k, k - 1);
        let lhs = g.b_star[k].clone();
        let mut factor = delta.clone();
        factor -= (&g.mu[k][k - 1] * &g.mu[k][k - 1]).complete();
        let rhs = factor * &g.b_star[k - 1];
        if lhs < rhs {
            swap_step(&mut basis, &mut g, k, n);
            k = k.max(2) - 1;
        } else {
            for l in (0..k - 1).rev() {
                red(&mut basis, &mut g, k, l);
            }
            k += 1;
        }
    }
    // the c matrix is only needed during initialization
    let _ = g.c;
    basis
}

/// Squared Euclidean length of an integer vector.
pub fn norm_sq(v: &[Integer]) -> Integer {
    dot(v, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: u64) -> Rational {
        Rational::from((n, d as i64))
    }

    fn iv(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn identity_basis_is_fixed() {
        let basis = vec![iv(&[1, 0, 0]), iv(&[0, 1, 0]), iv(&[0, 0, 1])];
        let out = lll_reduce(basis.clone(), &q(99, 100));
        assert_eq!(out, basis);
    }

    #[test]
    fn textbook_two_dimensional_example() {
        // rows (1,0) and (4,1) with delta = 3/4 reduce so that the first
        // row has squared length at most 2
        let basis = vec![iv(&[1, 0]), iv(&[4, 1])];
        let out = lll_reduce(basis, &q(3, 4));
        assert!(norm_sq(&out[0]) <= 2);
    }

    #[test]
    fn gram_determinant_is_preserved() {
        let basis = vec![iv(&[12, 7, -3]), iv(&[4, -9, 11]), iv(&[1, 16, 5])];
        let gram_det = |b: &Basis| {
            // 3x3 determinant of the Gram matrix
            let g: Vec<Vec<Integer>> = (0..3)
                .map(|i| (0..3).map(|j| dot(&b[i], &b[j])).collect())
                .collect();
            let m = |i: usize, j: usize| g[i][j].clone();
            m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
        };
        let before = gram_det(&basis);
        let out = lll_reduce(basis, &q(99, 100));
        assert_eq!(gram_det(&out), before);
    }

    #[test]
    fn first_vector_is_short_in_two_dimensions() {
        // brute-force the shortest nonzero vector and check the LLL bound
        // |b1|^2 <= (1/(delta - 1/4)) * |shortest|^2 with delta = 99/100
        let basis = vec![iv(&[201, 37]), iv(&[1648, 297])];
        let out = lll_reduce(basis.clone(), &q(99, 100));
        let mut best: Option<Integer> = None;
        for s in -60i64..=60 {
            for t in -60i64..=60 {
                if s == 0 && t == 0 {
                    continue;
                }
                let v: Vec<Integer> = (0..2)
                    .map(|j| {
                        Integer::from(s) * &basis[0][j] + Integer::from(t) * &basis[1][j]
                    })
                    .collect();
                let n = norm_sq(&v);
                if best.as_ref().is_none_or(|b| n < *b) {
                    best = Some(n);
                }
            }
        }
        let best = best.unwrap();
        // ratio bound: 1/(99/100 - 1/4) = 100/74 < 2
        assert!(norm_sq(&out[0]) <= Integer::from(2) * best);
    }

    #[test]
    fn output_satisfies_lovasz_and_size_reduction() {
        let basis = vec![
            iv(&[105, -3, 17, 2]),
            iv(&[44, 91, -60, 5]),
            iv(&[7, 7, 7, 120]),
            iv(&[-31, 54, 208, -9]),
        ];
        let delta = q(99, 100);
        let out = lll_reduce(basis, &delta);
        let g = gso(&out);
        let half = q(1, 2);
        for i in 0..4 {
            for j in 0..i {
                assert!(g.mu[i][j].clone().abs() <= half, "size reduction at ({i},{j})");
            }
            if i > 0 {
                let lhs = g.b_star[i].clone();
                let mut factor = delta.clone();
                factor -= (&g.mu[i][i - 1] * &g.mu[i][i - 1]).complete();
                let rhs = factor * &g.b_star[i - 1];
                assert!(lhs >= rhs, "Lovasz condition at row {i}");
            }
        }
    }
}
