//! ARMA(p,q) in state-space companion form.
//!
//! ```text
//! x[t+1] = T x[t] + R e[t]      e[t] ~ N(0, sigma2)
//! y[t]   = x[t][0]
//! ```
//!
//! with state dimension `r = max(p, q + 1)`, transition matrix `T`
//! holding the AR coefficients in its first column and ones on the
//! superdiagonal, and noise loading `R = [1, theta_1, .., theta_q, 0..]`.

#[derive(Debug, Clone)]
pub(crate) struct StateSpace {
    pub r: usize,
    /// Transition matrix, row-major `r x r`.
    pub t: Vec<Vec<f64>>,
    /// `R R'`, row-major `r x r`.
    pub rrt: Vec<Vec<f64>>,
}

impl StateSpace {
    pub fn new(ar: &[f64], ma: &[f64]) -> Self {
        let p = ar.len();
        let q = ma.len();
        let r = p.max(q + 1).max(1);

        let mut t = vec![vec![0.0; r]; r];
        for (i, &phi) in ar.iter().enumerate() {
            t[i][0] = phi;
        }
        for i in 0..r.saturating_sub(1) {
            t[i][i + 1] = 1.0;
        }

        let mut loading = vec![0.0; r];
        loading[0] = 1.0;
        for (j, &theta) in ma.iter().enumerate() {
            loading[j + 1] = theta;
        }
        let mut rrt = vec![vec![0.0; r]; r];
        for i in 0..r {
            for j in 0..r {
                rrt[i][j] = loading[i] * loading[j];
            }
        }

        Self { r, t, rrt }
    }
}
