//! Nelder-Mead simplex minimization.
//!
//! Derivative-free, which matters here: the ARMA likelihood has flat
//! ridges near AR/MA cancellation where gradient methods stall.

pub(crate) struct NelderMead {
    pub max_iterations: usize,
    /// Relative spread of simplex function values at which to stop.
    pub tolerance: f64,
    /// Initial per-coordinate displacement.
    pub initial_step: f64,
}

pub(crate) struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl NelderMead {
    pub fn minimize<F>(&self, start: &[f64], mut objective: F) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        let dim = start.len();
        if dim == 0 {
            let value = objective(start);
            return Minimum {
                point: Vec::new(),
                value,
                iterations: 0,
                converged: true,
            };
        }

        const ALPHA: f64 = 1.0; // reflection
        const GAMMA: f64 = 2.0; // expansion
        const RHO: f64 = 0.5; // contraction
        const SIGMA: f64 = 0.5; // shrink

        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
        simplex.push(start.to_vec());
        for i in 0..dim {
            let mut vertex = start.to_vec();
            vertex[i] += if vertex[i].abs() > 1e-8 {
                vertex[i].abs() * self.initial_step
            } else {
                self.initial_step
            };
            simplex.push(vertex);
        }
        let mut values: Vec<f64> = simplex.iter().map(|v| objective(v)).collect();

        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.max_iterations {
            iterations += 1;

            let mut order: Vec<usize> = (0..=dim).collect();
            order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal));
            let best = order[0];
            let worst = order[dim];
            let second_worst = order[dim - 1];

            let spread = (values[worst] - values[best]).abs();
            let scale = values[best].abs().max(1.0);
            if values[best].is_finite() && spread <= self.tolerance * scale {
                converged = true;
                break;
            }

            let mut centroid = vec![0.0; dim];
            for &idx in order.iter().take(dim) {
                for (c, x) in centroid.iter_mut().zip(&simplex[idx]) {
                    *c += x;
                }
            }
            for c in centroid.iter_mut() {
                *c /= dim as f64;
            }

            let reflect: Vec<f64> = centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + ALPHA * (c - w))
                .collect();
            let reflect_value = objective(&reflect);

            if reflect_value < values[best] {
                let expand: Vec<f64> = centroid
                    .iter()
                    .zip(&reflect)
                    .map(|(c, r)| c + GAMMA * (r - c))
                    .collect();
                let expand_value = objective(&expand);
                if expand_value < reflect_value {
                    simplex[worst] = expand;
                    values[worst] = expand_value;
                } else {
                    simplex[worst] = reflect;
                    values[worst] = reflect_value;
                }
                continue;
            }
            if reflect_value < values[second_worst] {
                simplex[worst] = reflect;
                values[worst] = reflect_value;
                continue;
            }

            let contract: Vec<f64> = centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + RHO * (w - c))
                .collect();
            let contract_value = objective(&contract);
            if contract_value < values[worst] {
                simplex[worst] = contract;
                values[worst] = contract_value;
                continue;
            }

            for &idx in order.iter().skip(1) {
                let shrunk: Vec<f64> = simplex[best]
                    .iter()
                    .zip(&simplex[idx])
                    .map(|(b, x)| b + SIGMA * (x - b))
                    .collect();
                simplex[idx] = shrunk;
                values[idx] = objective(&simplex[idx]);
            }
        }

        let best = (0..=dim)
            .min_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap();
        Minimum {
            point: simplex[best].clone(),
            value: values[best],
            iterations,
            converged,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_quadratic_bowl() {
        let nm = NelderMead {
            max_iterations: 1000,
            tolerance: 1e-10,
            initial_step: 0.5,
        };
        let min = nm.minimize(&[3.0, -2.0], |x| {
            (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 0.5).powi(2)
        });
        assert!(min.converged);
        assert!((min.point[0] - 1.0).abs() < 1e-4, "{:?}", min.point);
        assert!((min.point[1] + 0.5).abs() < 1e-4, "{:?}", min.point);
    }

    #[test]
    fn minimizes_rosenbrock() {
        let nm = NelderMead {
            max_iterations: 5000,
            tolerance: 1e-12,
            initial_step: 0.1,
        };
        let min = nm.minimize(&[-1.2, 1.0], |x| {
            100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2)
        });
        assert!((min.point[0] - 1.0).abs() < 1e-3, "{:?}", min.point);
        assert!((min.point[1] - 1.0).abs() < 1e-3, "{:?}", min.point);
    }

    #[test]
    fn zero_dimensional_input() {
        let nm = NelderMead {
            max_iterations: 10,
            tolerance: 1e-8,
            initial_step: 0.1,
        };
        let min = nm.minimize(&[], |_| 7.0);
        assert!(min.converged);
        assert_eq!(min.value, 7.0);
    }

    #[test]
    fn skips_infinite_regions() {
        let nm = NelderMead {
            max_iterations: 2000,
            tolerance: 1e-10,
            initial_step: 0.5,
        };
        let min = nm.minimize(&[0.2], |x| {
            if x[0].abs() >= 1.0 {
                f64::INFINITY
            } else {
                (x[0] - 0.8).powi(2)
            }
        });
        assert!((min.point[0] - 0.8).abs() < 1e-4);
    }
}
