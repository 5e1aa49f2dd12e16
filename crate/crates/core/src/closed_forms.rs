//! Closed-form expressions used as independent oracles for the transforms.
//!
//! The Morse forms are exact. The Ginocchio forms are the commonly quoted
//! expressions for the second transform and the superpartner, transcribed
//! verbatim; the test suite measures how far they sit from the transforms
//! actually computed, it does not assume they agree.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::potentials::{ginocchio_mu, morse_a_n, morse_eigenvalue, GinocchioParams, MorseParams};

/// `u^C[n](x) = 2[A^2 - A_{n-1} A_n sech^2(alpha x)]`.
pub fn morse_crum_potential(p: MorseParams, n: usize, x: f64) -> f64 {
    // A_{-1} = A + alpha/sqrt2 recovers the base potential at n = 0
    let a_prev = p.a - (n as f64 - 1.0) * p.alpha / SQRT_2;
    let s = 1.0 / (p.alpha * x).cosh();
    2.0 * (p.a * p.a - a_prev * morse_a_n(p, n) * s * s)
}

/// Transformed Morse eigenfunctions up to normalization:
/// `(1, 2)`: `alpha cosh psi_1`, `(1, 3)`: `4 sqrt2 A_1 sinh cosh psi_1`,
/// `(2, 3)`: `lambda_3 cosh^2 psi_1`.
pub fn morse_crum_wavefunction(p: MorseParams, n: usize, s: usize, x: f64) -> Result<f64> {
    let (sh, ch) = ((p.alpha * x).sinh(), (p.alpha * x).cosh());
    let psi1 = (1.0 / ch).powf(SQRT_2 * p.a / p.alpha);
    match (n, s) {
        (1, 2) => Ok(p.alpha * ch * psi1),
        (1, 3) => Ok(4.0 * SQRT_2 * morse_a_n(p, 1) * sh * ch * psi1),
        (2, 3) => Ok(morse_eigenvalue(p, 3) * ch * ch * psi1),
        _ => Err(Error::Unsupported(format!("no Morse closed form for n = {n}, s = {s}"))),
    }
}

fn ginocchio_v(p: GinocchioParams, y: f64) -> f64 {
    let b2 = p.beta * p.beta;
    let k = 1.0 - b2;
    let y2 = y * y;
    (-b2 * p.upsilon * (p.upsilon + 1.0) + 0.25 * k * (5.0 * k * y2 * y2 - (7.0 - b2) * y2 + 2.0)) * (1.0 - y2)
}

/// Quoted second-transform potential
/// `V - 2[{-2 + k(5y^2 - 3)} + 10 k y^2](1 - y^2) g(y)`, `k = 1 - beta^2`.
pub fn ginocchio_quoted_second_potential(p: GinocchioParams, y: f64) -> f64 {
    let k = 1.0 - p.beta * p.beta;
    let y2 = y * y;
    let g = 1.0 - k * y2;
    let bracket = (-2.0 + k * (5.0 * y2 - 3.0)) + 10.0 * y2 * k;
    ginocchio_v(p, y) - 2.0 * bracket * (1.0 - y2) * g
}

/// Quoted superpartner `V + 4k(1 - 3y^2)^m (1 - y^2) g(y)`; `m` is the power
/// on the middle factor (quoted as 2).
pub fn ginocchio_quoted_superpartner(p: GinocchioParams, y: f64, m: i32) -> f64 {
    let k = 1.0 - p.beta * p.beta;
    let y2 = y * y;
    ginocchio_v(p, y) + 4.0 * k * (1.0 - 3.0 * y2).powi(m) * (1.0 - y2) * (1.0 - k * y2)
}

/// Quoted second-transform eigenfunction of the third level:
/// `k^{mu/2} (mu + 1/2)(2mu + 3) g^{-(2mu+1)/4}
///  {(e2 - e0)(f^2 - 1/(2mu + 3)) - 2(e1 - e0) f^2}` with `mu = mu_2`.
pub fn ginocchio_quoted_second_wavefunction(p: GinocchioParams, y: f64) -> f64 {
    let b2 = p.beta * p.beta;
    let k = 1.0 - b2;
    let g = 1.0 - k * y * y;
    let f2 = b2 * y * y / g;
    let eps = |n: usize| -ginocchio_mu(p, n).powi(2) * b2 * b2;
    let mu = ginocchio_mu(p, 2);
    k.powf(mu / 2.0)
        * (mu + 0.5)
        * (2.0 * mu + 3.0)
        * g.powf(-(2.0 * mu + 1.0) / 4.0)
        * ((eps(2) - eps(0)) * (f2 - 1.0 / (2.0 * mu + 3.0)) - (eps(1) - eps(0)) * 2.0 * f2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn morse_level_zero_is_base_potential() {
        let p = MorseParams { a: 2.0 * SQRT_2, alpha: 1.0 };
        // at x = 0: 2[A^2 - A(A + 1/sqrt2)] = -2A/sqrt2 = -4
        assert!((morse_crum_potential(p, 0, 0.0) + 4.0).abs() < 1e-14);
        // A_1 A_2 = (3/sqrt2) sqrt2
        assert!((morse_crum_potential(p, 2, 0.0) - 2.0 * (8.0 - 3.0)).abs() < 1e-13);
    }

    #[test]
    fn morse_unsupported_pair() {
        let p = MorseParams { a: 3.0, alpha: 1.0 };
        assert!(morse_crum_wavefunction(p, 3, 4, 0.0).is_err());
    }

    #[test]
    fn quoted_superpartner_powers_differ_only_off_origin() {
        let p = GinocchioParams { beta: 0.8, upsilon: 4.0 };
        assert_eq!(ginocchio_quoted_superpartner(p, 0.0, 1), ginocchio_quoted_superpartner(p, 0.0, 2));
        assert!(ginocchio_quoted_superpartner(p, 0.4, 1) != ginocchio_quoted_superpartner(p, 0.4, 2));
    }
}
