//! Ginocchio potential on the implicit coordinate `y(x)`,
//! `dy/dx = (1 - y^2)(1 - (1 - beta^2) y^2)`.
//!
//! Eigenfunctions:
//! `psi_n = (1 - y^2)^(mu_n/2) g^-(2 mu_n + 1)/4 C_n^(mu_n + 1/2)(f)` with
//! `g = 1 - (1 - beta^2) y^2` and `f = beta y / sqrt(g)`, eigenvalues
//! `eps_n = -mu_n^2 beta^4`.

use serde::{Deserialize, Serialize};

use super::{jet_fn, EigenPair, FamilyParams, JetFn, PotentialFamily};
use crate::error::{Error, Result};
use crate::jets::{jet_ode_propagate, Jet, PolyOde};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GinocchioParams {
    pub beta: f64,
    pub upsilon: f64,
}

impl GinocchioParams {
    fn k(&self) -> f64 {
        1.0 - self.beta * self.beta
    }

    fn ode(&self, y0: f64) -> PolyOde {
        let k = self.k();
        PolyOde { coeffs: vec![1.0, 0.0, -(1.0 + k), 0.0, k], y0 }
    }
}

pub fn ginocchio_mu(p: GinocchioParams, n: usize) -> f64 {
    let b2 = p.beta * p.beta;
    let half = n as f64 + 0.5;
    let u = p.upsilon + 0.5;
    ((b2 * u * u + p.k() * half * half).sqrt() - half) / b2
}

/// Closed-form antiderivative `x(y) = int_0^y dy / P(y)`,
/// `(atanh y - sqrt(k) atanh(sqrt(k) y)) / beta^2`.
pub fn ginocchio_x_of_y(p: GinocchioParams, y: f64) -> f64 {
    let rk = p.k().sqrt();
    (y.atanh() - rk * (rk * y).atanh()) / (p.beta * p.beta)
}

// x as a function of t = atanh(y); dx/dt = 1 / (1 - k y^2) lies in [1, 1/beta^2].
fn x_of_t(p: GinocchioParams, t: f64) -> f64 {
    let rk = p.k().sqrt();
    (t - rk * (rk * t.tanh()).atanh()) / (p.beta * p.beta)
}

/// Solves `x(y) = x` for `y` in (-1, 1): bisection on `t = atanh y`, then Newton polish.
fn invert_coordinate(p: GinocchioParams, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let b2 = p.beta * p.beta;
    let (mut lo, mut hi) = if x > 0.0 { (b2 * x, x) } else { (x, b2 * x) };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if x_of_t(p, mid) < x {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi.abs().max(1.0) {
            break;
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..3 {
        let y = t.tanh();
        let slope = 1.0 / (1.0 - p.k() * y * y);
        let step = (x_of_t(p, t) - x) / slope;
        if !step.is_finite() {
            break;
        }
        t -= step;
    }
    t.tanh()
}

/// Jet of `y(x)`. The value comes from inverting the closed-form
/// antiderivative; higher coefficients from the ODE recurrence.
pub fn ginocchio_coordinate(p: GinocchioParams, x: f64, order: usize) -> Jet {
    let y0 = invert_coordinate(p, x);
    jet_ode_propagate(&p.ode(y0), x, order)
}

/// Explicit Gegenbauer polynomials `C_n^(a)(z)` for `n <= 3`.
pub fn gegenbauer(n: usize, a: f64, z: &Jet) -> Result<Jet> {
    let p = match n {
        0 => vec![1.0],
        1 => vec![0.0, 2.0 * a],
        2 => vec![-a, 0.0, 2.0 * a * (a + 1.0)],
        3 => vec![
            0.0,
            -2.0 * a * (a + 1.0),
            0.0,
            4.0 / 3.0 * a * (a + 1.0) * (a + 2.0),
        ],
        _ => {
            return Err(Error::Unsupported(format!(
                "Gegenbauer polynomials are tabulated up to n = 3, asked for {n}"
            )))
        }
    };
    Ok(z.poly(&p))
}

fn potential_jet(p: GinocchioParams, x: f64, order: usize) -> Jet {
    let y = ginocchio_coordinate(p, x, order);
    let k = p.k();
    let b2 = p.beta * p.beta;
    let inner = y.poly(&[
        -b2 * p.upsilon * (p.upsilon + 1.0) + 0.5 * k,
        0.0,
        -0.25 * k * (7.0 - b2),
        0.0,
        1.25 * k * k,
    ]);
    &inner * &y.poly(&[1.0, 0.0, -1.0])
}

fn wavefunction_jet(p: GinocchioParams, n: usize, mu: f64, x: f64, order: usize) -> Result<Jet> {
    let y = ginocchio_coordinate(p, x, order);
    let one_minus_y2 = y.poly(&[1.0, 0.0, -1.0]);
    let g = y.poly(&[1.0, 0.0, -p.k()]);
    let f = &y.scale_by(p.beta) * &g.powf(-0.5)?;
    let envelope = &one_minus_y2.powf(0.5 * mu)? * &g.powf(-(2.0 * mu + 1.0) / 4.0)?;
    Ok(&envelope * &gegenbauer(n, mu + 0.5, &f)?)
}

pub fn ginocchio_potential(p: GinocchioParams) -> JetFn {
    jet_fn(move |x, k| Ok(potential_jet(p, x, k)))
}

pub fn ginocchio_family(p: GinocchioParams, levels: usize) -> Result<PotentialFamily> {
    if !(p.beta > 0.0 && p.beta <= 1.0 && p.upsilon > 0.0 && p.upsilon.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "Ginocchio needs 0 < beta <= 1 and upsilon > 0, got beta = {}, upsilon = {}",
            p.beta, p.upsilon
        )));
    }
    if levels == 0 || levels > 4 {
        return Err(Error::Unsupported(format!(
            "Ginocchio family provides 1..=4 closed-form levels, asked for {levels}"
        )));
    }
    let mut eigenpairs = Vec::with_capacity(levels);
    for n in 0..levels {
        let mu = ginocchio_mu(p, n);
        if !(mu > 0.0) {
            return Err(Error::UnboundLevel { level: n, reason: format!("mu_{n} = {mu} <= 0") });
        }
        let b2 = p.beta * p.beta;
        eigenpairs.push(EigenPair {
            index: n,
            eigenvalue: -mu * mu * b2 * b2,
            wavefunction: jet_fn(move |x, k| wavefunction_jet(p, n, mu, x, k)),
        });
    }
    Ok(PotentialFamily {
        name: "ginocchio",
        params: FamilyParams::Ginocchio(p),
        potential: ginocchio_potential(p),
        eigenpairs,
        flow: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::log_derivative;

    const P: GinocchioParams = GinocchioParams { beta: 0.8, upsilon: 4.0 };

    #[test]
    fn mu_collapses_at_unit_beta() {
        let p = GinocchioParams { beta: 1.0, upsilon: 3.7 };
        for n in 0..4 {
            assert!((ginocchio_mu(p, n) - (3.7 - n as f64)).abs() < 1e-14);
        }
    }

    #[test]
    fn mu_reference_value() {
        // sqrt(0.64 * 20.25 + 0.36 * 0.25) = sqrt(13.05)
        let expected = (13.05_f64.sqrt() - 0.5) / 0.64;
        assert!((ginocchio_mu(P, 0) - expected).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_are_minus_mu_squared_beta4() {
        let fam = ginocchio_family(P, 4).unwrap();
        for (n, e) in fam.eigenpairs.iter().enumerate() {
            let mu = ginocchio_mu(P, n);
            assert!((e.eigenvalue + mu * mu * 0.8f64.powi(4)).abs() < 1e-14);
            assert_eq!(e.index, n);
        }
        let ev = fam.eigenvalues();
        assert!(ev.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn unbound_levels_rejected() {
        let p = GinocchioParams { beta: 1.0, upsilon: 1.5 };
        assert!(ginocchio_family(p, 2).is_ok());
        assert!(matches!(ginocchio_family(p, 3), Err(Error::UnboundLevel { level: 2, .. })));
    }

    #[test]
    fn gegenbauer_table() {
        let z0 = Jet::variable(0.0, 2);
        let mu2 = ginocchio_mu(P, 2);
        assert_eq!(gegenbauer(0, 1.7, &z0).unwrap().coeffs(), &[1.0, 0.0, 0.0]);
        assert_eq!(gegenbauer(1, ginocchio_mu(P, 1) + 0.5, &z0).unwrap().value(), 0.0);
        assert_eq!(gegenbauer(2, mu2 + 0.5, &z0).unwrap().value(), -(mu2 + 0.5));
        assert!(matches!(gegenbauer(4, 1.0, &z0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn gegenbauer_three_term_recurrence() {
        // n C_n = 2 (n - 1 + a) z C_{n-1} - (n - 2 + 2a) C_{n-2}
        let a = 1.3;
        for &z in &[-0.9, -0.2, 0.35, 0.8] {
            let zj = Jet::constant(0.0, 0, z);
            let c: Vec<f64> = (0..4).map(|n| gegenbauer(n, a, &zj).unwrap().value()).collect();
            for n in 2..4 {
                let nf = n as f64;
                let rhs = 2.0 * (nf - 1.0 + a) * z * c[n - 1] - (nf - 2.0 + 2.0 * a) * c[n - 2];
                assert!((nf * c[n] - rhs).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn antiderivative_differentiates_back() {
        for &p in &[P, GinocchioParams { beta: 0.3, upsilon: 2.0 }, GinocchioParams { beta: 1.0, upsilon: 1.0 }] {
            for &y in &[-0.95, -0.5, 0.0, 0.2, 0.7, 0.97] {
                let h = 1e-6;
                let fd = (ginocchio_x_of_y(p, y + h) - ginocchio_x_of_y(p, y - h)) / (2.0 * h);
                let expected = 1.0 / p.ode(0.0).rhs(y);
                assert!((fd - expected).abs() < 1e-7 * expected.abs(), "{fd} vs {expected}");
            }
        }
    }

    #[test]
    fn coordinate_at_origin_and_unit_beta() {
        let y = ginocchio_coordinate(P, 0.0, 3);
        assert_eq!(y.value(), 0.0);
        assert_eq!(y.coeffs()[1], 1.0);
        let p1 = GinocchioParams { beta: 1.0, upsilon: 2.0 };
        assert!((ginocchio_coordinate(p1, 1.0, 0).value() - 1.0_f64.tanh()).abs() < 1e-14);
    }

    fn rk4_oracle(p: GinocchioParams, x_end: f64, steps: usize) -> f64 {
        let ode = p.ode(0.0);
        let h = x_end / steps as f64;
        let mut y = 0.0;
        for _ in 0..steps {
            let k1 = ode.rhs(y);
            let k2 = ode.rhs(y + 0.5 * h * k1);
            let k3 = ode.rhs(y + 0.5 * h * k2);
            let k4 = ode.rhs(y + h * k3);
            y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        y
    }

    #[test]
    fn coordinate_matches_integrated_ode() {
        let y = ginocchio_coordinate(P, 0.7, 1);
        let oracle = rk4_oracle(P, 0.7, 20_000);
        assert!((y.value() - oracle).abs() < 1e-12, "{} vs {oracle}", y.value());
        let residual = (y.coeffs()[1] - P.ode(0.0).rhs(y.value())).abs();
        assert!(residual < 1e-10);
        for &x in &[-2.5, -1.1, 0.05, 1.9, 2.5] {
            let y = ginocchio_coordinate(P, x, 0).value();
            assert!((ginocchio_x_of_y(P, y) - x).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenfunctions_solve_the_schrodinger_equation() {
        let fam = ginocchio_family(P, 4).unwrap();
        for &x in &[-2.0, -0.6, 0.3, 1.4] {
            let u = (fam.potential)(x, 0).unwrap().value();
            for e in &fam.eigenpairs {
                let psi = (e.wavefunction)(x, 2).unwrap();
                let d2 = psi.derivative(2).unwrap();
                let r = -d2 + (u - e.eigenvalue) * psi.value();
                assert!(r.abs() < 1e-10 * (1.0 + psi.value().abs() * u.abs()), "n={} x={x} r={r}", e.index);
            }
        }
    }

    #[test]
    fn log_ratio_of_f_is_coordinate_identity() {
        // (f'/f) = (1 - y^2)/y for f = beta y / sqrt(g)
        for &x in &[-2.0, -0.5, 0.2, 0.9, 2.2] {
            let y = ginocchio_coordinate(P, x, 2);
            let g = y.poly(&[1.0, 0.0, -P.k()]);
            let f = &y.scale_by(P.beta) * &g.powf(-0.5).unwrap();
            let ratio = f.shift().unwrap().div(&f.truncate(1).unwrap()).unwrap();
            let yv = y.value();
            assert!((ratio.value() - (1.0 - yv * yv) / yv).abs() < 1e-9);
        }
    }

    #[test]
    fn ground_state_log_derivative_closed_form() {
        let fam = ginocchio_family(P, 1).unwrap();
        let mu = ginocchio_mu(P, 0);
        for &x in &[-1.5, 0.4, 2.0] {
            let y = ginocchio_coordinate(P, x, 0).value();
            let g = 1.0 - P.k() * y * y;
            let expected = -mu * y * g + 0.5 * (2.0 * mu + 1.0) * P.k() * y * (1.0 - y * y);
            let h = log_derivative(&fam.eigenpairs[0], x, 0).unwrap();
            assert!((h.value() - expected).abs() < 1e-12);
        }
    }
}
