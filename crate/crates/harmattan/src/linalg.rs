#![allow(clippy::needless_range_loop)] // index loops mirror the matrix algebra

//! Small dense linear algebra used internally. Systems here are tiny
//! (state covariances up to 6x6, vectorized Lyapunov up to 36x36, ADF
//! design matrices with at most ~16 columns), so plain Gaussian
//! elimination with partial pivoting is all that is needed.

use crate::error::{Error, Result};

/// Solves `a * x = b` in place with partial pivoting. `a` is row-major,
/// `n` x `n`.
pub(crate) fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|row| row.len() == n));
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot = a[col][col].abs();
        for row in col + 1..n {
            let v = a[row][col].abs();
            if v > pivot {
                pivot = v;
                pivot_row = row;
            }
        }
        if pivot < 1e-12 {
            return Err(Error::RankDeficient {
                context: "singular linear system",
            });
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        for j in i + 1..n {
            acc -= a[i][j] * x[j];
        }
        x[i] = acc / a[i][i];
    }
    Ok(x)
}

/// Ordinary least squares fit of `y` on the columns of `x`.
pub(crate) struct OlsFit {
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub residual_sum_of_squares: f64,
    pub n_obs: usize,
}

impl OlsFit {
    pub fn t_ratio(&self, i: usize) -> f64 {
        self.coefficients[i] / self.standard_errors[i]
    }

    /// Gaussian log-likelihood at the ML variance estimate (divisor n).
    pub fn log_likelihood(&self) -> f64 {
        let n = self.n_obs as f64;
        let sigma2 = self.residual_sum_of_squares / n;
        -0.5 * n * ((2.0 * std::f64::consts::PI * sigma2).ln() + 1.0)
    }
}

/// Solves the normal equations `(X'X) beta = X'y` and derives classical
/// standard errors from `s^2 (X'X)^{-1}`.
pub(crate) fn ols(x: &[Vec<f64>], y: &[f64]) -> Result<OlsFit> {
    let n = y.len();
    let k = x.first().map_or(0, |row| row.len());
    debug_assert!(x.len() == n && k > 0);
    if n <= k {
        return Err(Error::TooShort {
            operation: "least squares",
            required: k + 1,
            actual: n,
        });
    }

    let mut xtx = vec![vec![0.0; k]; k];
    let mut xty = vec![0.0; k];
    for (row, &yi) in x.iter().zip(y) {
        for i in 0..k {
            xty[i] += row[i] * yi;
            for j in i..k {
                xtx[i][j] += row[i] * row[j];
            }
        }
    }
    for i in 0..k {
        for j in 0..i {
            xtx[i][j] = xtx[j][i];
        }
    }

    let coefficients = solve(xtx.clone(), xty).map_err(|_| Error::RankDeficient {
        context: "regression design matrix",
    })?;

    let mut rss = 0.0;
    for (row, &yi) in x.iter().zip(y) {
        let fitted: f64 = row.iter().zip(&coefficients).map(|(a, b)| a * b).sum();
        let e = yi - fitted;
        rss += e * e;
    }

    // (X'X)^{-1} column by column for the diagonal entries.
    let sigma2 = rss / (n - k) as f64;
    let mut standard_errors = vec![0.0; k];
    for i in 0..k {
        let mut e_i = vec![0.0; k];
        e_i[i] = 1.0;
        let col = solve(xtx.clone(), e_i).map_err(|_| Error::RankDeficient {
            context: "regression design matrix",
        })?;
        let var = sigma2 * col[i];
        if var < 0.0 || !var.is_finite() {
            return Err(Error::RankDeficient {
                context: "non-positive coefficient variance",
            });
        }
        standard_errors[i] = var.sqrt();
    }

    Ok(OlsFit {
        coefficients,
        standard_errors,
        residual_sum_of_squares: rss,
        n_obs: n,
    })
}
