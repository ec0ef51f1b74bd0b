//! Small dense solvers for least-squares fits.

use alloc::vec;
use alloc::vec::Vec;

/// Minimizes `‖Aθ − t‖² + λ‖θ‖²` where `A` is given column-wise.
///
/// Uses Householder QR on `[A; √λ I]`, falling back to the normal
/// equations when `R` is singular (only possible with `λ = 0`). Returns
/// `None` when an entry is non-finite or no solution can be computed.
pub fn ridge_least_squares(columns: &[&[f64]], target: &[f64], lambda: f64) -> Option<Vec<f64>> {
    if columns.iter().flat_map(|c| c.iter()).chain(target).any(|v| !v.is_finite()) || !lambda.is_finite() {
        return None;
    }
    let theta = qr_ridge(columns, target, lambda).or_else(|| normal_equations(columns, target, lambda))?;
    theta.iter().all(|v| v.is_finite()).then_some(theta)
}

fn qr_ridge(columns: &[&[f64]], target: &[f64], lambda: f64) -> Option<Vec<f64>> {
    let p = columns.len();
    let n = target.len();
    let m = n + p;
    let root = libm::sqrt(lambda.max(0.0));
    let mut a: Vec<Vec<f64>> = columns
        .iter()
        .enumerate()
        .map(|(j, c)| {
            debug_assert_eq!(c.len(), n);
            let mut col = vec![0.0; m];
            col[..n].copy_from_slice(c);
            col[n + j] = root;
            col
        })
        .collect();
    let mut b = vec![0.0; m];
    b[..n].copy_from_slice(target);
    for j in 0..p {
        let norm = libm::sqrt(a[j][j..].iter().map(|v| v * v).sum());
        if norm == 0.0 {
            return None;
        }
        let alpha = if a[j][j] > 0.0 { -norm } else { norm };
        let mut v = a[j][j..].to_vec();
        v[0] -= alpha;
        let vv = dot(&v, &v);
        if vv > 0.0 {
            for col in a.iter_mut().skip(j + 1) {
                let f = 2.0 * dot(&v, &col[j..]) / vv;
                col[j..].iter_mut().zip(&v).for_each(|(c, vi)| *c -= f * vi);
            }
            let f = 2.0 * dot(&v, &b[j..]) / vv;
            b[j..].iter_mut().zip(&v).for_each(|(c, vi)| *c -= f * vi);
        }
        a[j][j] = alpha;
    }
    let mut x = vec![0.0; p];
    for i in (0..p).rev() {
        let mut s = b[i];
        for k in i + 1..p {
            s -= a[k][i] * x[k];
        }
        x[i] = s / a[i][i];
    }
    Some(x)
}

fn normal_equations(columns: &[&[f64]], target: &[f64], lambda: f64) -> Option<Vec<f64>> {
    let p = columns.len();
    let mut gram = vec![0.0; p * p];
    let mut rhs = vec![0.0; p];
    for i in 0..p {
        let ci = columns[i];
        rhs[i] = dot(ci, target);
        for j in 0..=i {
            let g = dot(ci, columns[j]);
            gram[i * p + j] = g;
            gram[j * p + i] = g;
        }
        gram[i * p + i] += lambda;
    }
    cholesky_solve(&gram, &rhs, p).or_else(|| gauss_solve(gram, rhs, p))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves an SPD system given as a row-major `n×n` matrix.
pub fn cholesky_solve(a: &[f64], b: &[f64], n: usize) -> Option<Vec<f64>> {
    cholesky_factor(a, n).map(|l| cholesky_substitute(&l, b, n))
}

/// Lower factor `L` with `a = L Lᵀ`; `None` unless `a` is numerically SPD.
fn cholesky_factor(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i * n + i] = libm::sqrt(s);
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Some(l)
}

fn cholesky_substitute(l: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    x
}

/// Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut a: Vec<f64>, mut b: Vec<f64>, n: usize) -> Option<Vec<f64>> {
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| libm::fabs(a[i * n + col]).total_cmp(&libm::fabs(a[j * n + col])))?;
        if a[pivot * n + col] == 0.0 {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            b.swap(col, pivot);
        }
        for row in col + 1..n {
            let f = a[row * n + col] / a[col * n + col];
            for k in col..n {
                a[row * n + k] -= f * a[col * n + k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= a[i * n + k] * x[k];
        }
        x[i] = s / a[i * n + i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_single_column_fit() {
        let a = [1.0, 2.0, 3.0];
        let t = [2.0, 4.0, 6.0];
        let theta = ridge_least_squares(&[&a], &t, 0.0).unwrap();
        assert!((theta[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_column_with_jitter_is_finite() {
        let a = [0.0; 4];
        let t = [1.0, -1.0, 1.0, 1.0];
        let theta = ridge_least_squares(&[&a], &t, 1e-9).unwrap();
        assert_eq!(theta[0], 0.0);
    }

    #[test]
    fn gauss_and_cholesky_agree() {
        let a = vec![4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0];
        let b = vec![1.0, 2.0, 3.0];
        let x1 = cholesky_solve(&a, &b, 3).unwrap();
        let x2 = gauss_solve(a, b, 3).unwrap();
        for (u, v) in x1.iter().zip(&x2) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let a = [1.0, f64::INFINITY];
        assert!(ridge_least_squares(&[&a], &[1.0, 1.0], 1e-9).is_none());
    }
}
