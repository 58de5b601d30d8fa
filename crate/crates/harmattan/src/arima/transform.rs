//! Unconstrained parameterization of stationary/invertible ARMA
//! coefficients.
//!
//! The optimizer works on raw reals. Each raw value maps through
//! `z -> z / sqrt(1 + z^2)` (Monahan's transform) to a partial
//! autocorrelation in the open unit interval, and the Levinson-Durbin
//! recursion turns the partial autocorrelations into AR coefficients
//! whose polynomial has all roots outside the unit circle. MA
//! coefficients use the same map through the sign flip
//! `1 + theta(B) = 1 - (-theta)(B)`.

/// Keeps fitted roots strictly outside the unit circle.
const PACF_MARGIN: f64 = 1.0 - 1e-4;

/// Monahan map: R -> (-margin, margin).
fn to_pacf(z: f64) -> f64 {
    PACF_MARGIN * z / (1.0 + z * z).sqrt()
}

/// Inverse of [`to_pacf`].
fn from_pacf(r: f64) -> f64 {
    let r = (r / PACF_MARGIN).clamp(-0.9999999, 0.9999999);
    r / (1.0 - r * r).sqrt()
}

/// Levinson-Durbin: partial autocorrelations -> AR coefficients.
fn pacf_to_ar(pacf: &[f64]) -> Vec<f64> {
    let p = pacf.len();
    let mut phi = vec![0.0; p];
    let mut prev = vec![0.0; p];
    for (k, &r) in pacf.iter().enumerate() {
        prev[..k].copy_from_slice(&phi[..k]);
        phi[k] = r;
        for i in 0..k {
            phi[i] = prev[i] - r * prev[k - 1 - i];
        }
    }
    phi
}

/// Inverse Levinson-Durbin. Returns `None` when the coefficients are not
/// strictly stationary (some reflection coefficient reaches 1).
fn ar_to_pacf(phi: &[f64]) -> Option<Vec<f64>> {
    let p = phi.len();
    let mut work = phi.to_vec();
    let mut pacf = vec![0.0; p];
    for k in (0..p).rev() {
        let r = work[k];
        if r.abs() >= 1.0 {
            return None;
        }
        pacf[k] = r;
        let denom = 1.0 - r * r;
        let prev = work.clone();
        for i in 0..k {
            work[i] = (prev[i] + r * prev[k - 1 - i]) / denom;
        }
    }
    Some(pacf)
}

/// Smallest root modulus any fitted polynomial is allowed to have.
const ROOT_MARGIN: f64 = 1.0 + 1e-6;

/// Pulls roots away from the unit circle when the partial-autocorrelation
/// box lets them sneak inside the margin (possible for orders >= 2:
/// every reflection coefficient can be interior while one root sits
/// within 1e-6 of the circle). Scaling `c_i` by `s^i` multiplies every
/// root modulus by `1/s`.
fn enforce_root_margin(mut coeffs: Vec<f64>) -> Vec<f64> {
    let shrink = 1.0_f64 / (1.0 + 1e-5);
    for _ in 0..100 {
        if roots_outside(&coeffs, ROOT_MARGIN) {
            return coeffs;
        }
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c *= shrink.powi(i as i32 + 1);
        }
    }
    coeffs
}

/// Raw optimizer coordinates -> stationary AR coefficients.
pub(crate) fn unconstrained_to_ar(z: &[f64]) -> Vec<f64> {
    let pacf: Vec<f64> = z.iter().map(|&v| to_pacf(v)).collect();
    enforce_root_margin(pacf_to_ar(&pacf))
}

/// Raw optimizer coordinates -> invertible MA coefficients.
pub(crate) fn unconstrained_to_ma(z: &[f64]) -> Vec<f64> {
    unconstrained_to_ar(z).iter().map(|&v| -v).collect()
}

/// Stationary AR coefficients -> raw coordinates; partial
/// autocorrelations are clamped toward the interior when the input sits
/// outside the stationary region (start values may).
pub(crate) fn ar_to_unconstrained(phi: &[f64]) -> Vec<f64> {
    match ar_to_pacf(phi) {
        Some(pacf) => pacf.iter().map(|&r| from_pacf(r)).collect(),
        None => {
            // Shrink toward zero until stationary, then map.
            let mut scale = 0.95;
            loop {
                let shrunk: Vec<f64> = phi.iter().map(|&v| v * scale).collect();
                if let Some(pacf) = ar_to_pacf(&shrunk) {
                    return pacf.iter().map(|&r| from_pacf(r)).collect();
                }
                scale *= 0.5;
                if scale < 1e-6 {
                    return vec![0.0; phi.len()];
                }
            }
        }
    }
}

/// Invertible MA coefficients -> raw coordinates.
pub(crate) fn ma_to_unconstrained(theta: &[f64]) -> Vec<f64> {
    let flipped: Vec<f64> = theta.iter().map(|&v| -v).collect();
    ar_to_unconstrained(&flipped)
}

/// True when every root of `1 - c_1 z - ... - c_k z^k` has modulus
/// greater than `radius`. Uses the Schur-Cohn criterion on the
/// radius-scaled coefficients, so no eigensolver is needed.
pub fn roots_outside(coeffs: &[f64], radius: f64) -> bool {
    let scaled: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| c * radius.powi(i as i32 + 1))
        .collect();
    ar_to_pacf(&scaled).is_some()
}

/// Invertibility check in the MA sign convention (`1 + theta(B)`).
pub fn ma_roots_outside(theta: &[f64], radius: f64) -> bool {
    let flipped: Vec<f64> = theta.iter().map(|&v| -v).collect();
    roots_outside(&flipped, radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::SplitMix64;

    #[test]
    fn round_trip_through_pacf() {
        let phi = vec![0.5, -0.3, 0.1];
        let z = ar_to_unconstrained(&phi);
        let back = unconstrained_to_ar(&z);
        for (a, b) in phi.iter().zip(&back) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn arbitrary_coordinates_give_stationary_ar() {
        let mut rng = SplitMix64::new(8);
        for _ in 0..200 {
            let dim = 1 + (rng.next_u64() % 5) as usize;
            let z: Vec<f64> = (0..dim).map(|_| rng.uniform(-20.0, 20.0)).collect();
            let phi = unconstrained_to_ar(&z);
            assert!(roots_outside(&phi, 1.0 + 1e-6), "phi = {phi:?}");
        }
    }

    #[test]
    fn arbitrary_coordinates_give_invertible_ma() {
        let mut rng = SplitMix64::new(9);
        for _ in 0..200 {
            let dim = 1 + (rng.next_u64() % 5) as usize;
            let z: Vec<f64> = (0..dim).map(|_| rng.uniform(-20.0, 20.0)).collect();
            let theta = unconstrained_to_ma(&z);
            assert!(ma_roots_outside(&theta, 1.0 + 1e-6), "theta = {theta:?}");
        }
    }

    #[test]
    fn explosive_start_values_are_shrunk() {
        let z = ar_to_unconstrained(&[1.4]);
        let phi = unconstrained_to_ar(&z);
        assert!(phi[0].abs() < 1.0);
    }

    #[test]
    fn unit_root_detected() {
        assert!(!roots_outside(&[1.0], 1.0 + 1e-6));
        assert!(roots_outside(&[0.5], 1.0 + 1e-6));
        // AR(2) with a root just inside the margin.
        assert!(!roots_outside(&[1.9998, -0.99990], 1.01));
    }
}
