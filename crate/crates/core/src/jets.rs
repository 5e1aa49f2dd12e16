//! Truncated Taylor series ("jets") in one real variable.
//!
//! Convention: `coeffs[j] = f^(j)(x0) / j!`. A jet of order `K` carries
//! `K + 1` coefficients. Binary operations require both operands to share
//! the expansion point and the order; a mismatch is a contract violation.
//! The checked methods (`try_add`, `div`, ...) report it as an error and the
//! operator impls panic on it.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Relative threshold below which a denominator's constant term counts as zero.
pub const DIV_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    x0: f64,
    coeffs: Vec<f64>,
}

/// Binary jet operation selector for [`jet_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Elementary function selector for [`jet_elementary`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Elementary {
    Exp,
    Ln,
    Sinh,
    Cosh,
    Tanh,
    Sech,
    Pow(f64),
}

impl Jet {
    /// The identity function `x` expanded at `x0`.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = x0;
        if order >= 1 {
            coeffs[1] = 1.0;
        }
        Jet { x0, coeffs }
    }

    pub fn constant(x0: f64, order: usize, value: f64) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Jet { x0, coeffs }
    }

    /// Builds a jet from normalized coefficients. Rejects empty or non-finite input.
    pub fn from_coeffs(x0: f64, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("jet needs at least one coefficient".into()));
        }
        if !x0.is_finite() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite jet coefficient at x = {x0}")));
        }
        Ok(Jet { x0, coeffs })
    }

    /// Builds a jet from derivative values `f(x0), f'(x0), ..., f^(K)(x0)`.
    pub fn from_derivatives(x0: f64, derivs: &[f64]) -> Result<Self> {
        let mut fact = 1.0;
        let coeffs = derivs
            .iter()
            .enumerate()
            .map(|(j, d)| {
                if j > 0 {
                    fact *= j as f64;
                }
                d / fact
            })
            .collect();
        Self::from_coeffs(x0, coeffs)
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// `f^(m)(x0) = m! c_m`. Returns `None` above the jet order.
    pub fn derivative(&self, m: usize) -> Option<f64> {
        let c = *self.coeffs.get(m)?;
        Some(c * factorial(m))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Largest absolute coefficient.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn truncate(&self, order: usize) -> Result<Jet> {
        if order > self.order() {
            return Err(Error::OrderExhausted { have: self.order(), need: order });
        }
        Ok(Jet { x0: self.x0, coeffs: self.coeffs[..=order].to_vec() })
    }

    /// Jet of `f'` (one order lower).
    pub fn shift(&self) -> Result<Jet> {
        if self.order() == 0 {
            return Err(Error::OrderExhausted { have: 0, need: 1 });
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(j, c)| (j + 1) as f64 * c)
            .collect();
        Ok(Jet { x0: self.x0, coeffs })
    }

    /// Jet of `f^(m)`, order `K - m`.
    pub fn shift_n(&self, m: usize) -> Result<Jet> {
        if m > self.order() {
            return Err(Error::OrderExhausted { have: self.order(), need: m });
        }
        let mut out = self.clone();
        for _ in 0..m {
            out = out.shift()?;
        }
        Ok(out)
    }

    pub fn zero_like(&self) -> Jet {
        Jet::constant(self.x0, self.order(), 0.0)
    }

    pub fn one_like(&self) -> Jet {
        Jet::constant(self.x0, self.order(), 1.0)
    }

    fn check_compatible(&self, other: &Jet) -> Result<()> {
        if self.x0.to_bits() != other.x0.to_bits() || self.order() != other.order() {
            return Err(Error::JetMismatch {
                x0_a: self.x0,
                order_a: self.order(),
                x0_b: other.x0,
                order_b: other.order(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    /// Truncated Cauchy product.
    pub fn try_mul(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        let (a, b) = (&self.coeffs, &other.coeffs);
        // Pairs a_j b_{k-j} with a_{k-j} b_j so that a*b and b*a agree bitwise.
        let coeffs = (0..a.len())
            .map(|k| {
                let mut s = 0.0;
                for j in 0..k.div_ceil(2) {
                    s += a[j] * b[k - j] + a[k - j] * b[j];
                }
                if k % 2 == 0 {
                    s += a[k / 2] * b[k / 2];
                }
                s
            })
            .collect();
        Ok(Jet { x0: self.x0, coeffs })
    }

    /// Series long division. Fails with `SingularDivision` when the
    /// denominator's constant term is below `DIV_EPS` times its own scale.
    pub fn div(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other)?;
        let b0 = other.coeffs[0];
        if b0 == 0.0 || b0.abs() < DIV_EPS * other.scale() {
            return Err(Error::SingularDivision { x0: self.x0, value: b0 });
        }
        let n = self.coeffs.len();
        let mut c = vec![0.0; n];
        for k in 0..n {
            let mut s = self.coeffs[k];
            for j in 1..=k {
                s -= other.coeffs[j] * c[k - j];
            }
            c[k] = s / b0;
        }
        Ok(Jet { x0: self.x0, coeffs: c })
    }

    pub fn recip(&self) -> Result<Jet> {
        self.one_like().div(self)
    }

    pub fn scale_by(&self, s: f64) -> Jet {
        self.map(|c| c * s)
    }

    pub fn add_scalar(&self, s: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    pub fn exp(&self) -> Jet {
        let a = &self.coeffs;
        let n = a.len();
        let mut c = vec![0.0; n];
        c[0] = a[0].exp();
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| j as f64 * a[j] * c[k - j]).sum();
            c[k] = s / k as f64;
        }
        Jet { x0: self.x0, coeffs: c }
    }

    pub fn ln(&self) -> Result<Jet> {
        let a = &self.coeffs;
        if !(a[0] > 0.0) {
            return Err(Error::Domain { op: "ln", x0: self.x0, value: a[0] });
        }
        let n = a.len();
        let mut c = vec![0.0; n];
        c[0] = a[0].ln();
        for k in 1..n {
            let s: f64 = (1..k).map(|j| j as f64 * c[j] * a[k - j]).sum();
            c[k] = (a[k] - s / k as f64) / a[0];
        }
        Ok(Jet { x0: self.x0, coeffs: c })
    }

    /// `(sinh a, cosh a)` via the coupled recurrence.
    pub fn sinh_cosh(&self) -> (Jet, Jet) {
        let a = &self.coeffs;
        let n = a.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = a[0].sinh();
        c[0] = a[0].cosh();
        for k in 1..n {
            let mut ss = 0.0;
            let mut cc = 0.0;
            for j in 1..=k {
                let ja = j as f64 * a[j];
                ss += ja * c[k - j];
                cc += ja * s[k - j];
            }
            s[k] = ss / k as f64;
            c[k] = cc / k as f64;
        }
        (Jet { x0: self.x0, coeffs: s }, Jet { x0: self.x0, coeffs: c })
    }

    pub fn sinh(&self) -> Jet {
        self.sinh_cosh().0
    }

    pub fn cosh(&self) -> Jet {
        self.sinh_cosh().1
    }

    pub fn tanh(&self) -> Jet {
        let (s, c) = self.sinh_cosh();
        // cosh >= 1, never singular
        s.div(&c).expect("cosh is bounded away from zero")
    }

    pub fn sech(&self) -> Jet {
        self.cosh().recip().expect("cosh is bounded away from zero")
    }

    /// `a^r`. Any real `r` for a positive base; integer `r` for other bases
    /// (negative integers additionally need a nonzero base).
    pub fn powf(&self, r: f64) -> Result<Jet> {
        let a0 = self.coeffs[0];
        let integer = r.fract() == 0.0 && r.abs() < 1e9;
        if a0 > 0.0 || (integer && a0 != 0.0) {
            return Ok(self.pow_recurrence(r));
        }
        if integer && r >= 0.0 {
            return Ok(self.powi(r as u64));
        }
        Err(Error::Domain { op: "pow", x0: self.x0, value: a0 })
    }

    // c_k = 1/(k a0) * sum_{j=1..k} ((r + 1) j - k) a_j c_{k-j}
    fn pow_recurrence(&self, r: f64) -> Jet {
        let a = &self.coeffs;
        let n = a.len();
        let mut c = vec![0.0; n];
        c[0] = a[0].powf(r);
        for k in 1..n {
            let s: f64 = (1..=k)
                .map(|j| ((r + 1.0) * j as f64 - k as f64) * a[j] * c[k - j])
                .sum();
            c[k] = s / (k as f64 * a[0]);
        }
        Jet { x0: self.x0, coeffs: c }
    }

    fn powi(&self, mut e: u64) -> Jet {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Evaluates the polynomial `sum_i p[i] a^i` (Horner).
    pub fn poly(&self, p: &[f64]) -> Jet {
        let mut acc = self.zero_like();
        for &c in p.iter().rev() {
            acc = (&acc * self).add_scalar(c);
        }
        acc
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Jet {
        Jet { x0: self.x0, coeffs: self.coeffs.iter().map(|&c| f(c)).collect() }
    }

    fn zip(&self, other: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect();
        Jet { x0: self.x0, coeffs }
    }
}

pub fn factorial(m: usize) -> f64 {
    (1..=m).fold(1.0, |acc, k| acc * k as f64)
}

pub fn jet_variable(x0: f64, order: usize) -> Jet {
    Jet::variable(x0, order)
}

pub fn jet_arith(op: ArithOp, a: &Jet, b: &Jet) -> Result<Jet> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
        ArithOp::Div => a.div(b),
    }
}

pub fn jet_elementary(kind: Elementary, a: &Jet) -> Result<Jet> {
    if !a.is_finite() {
        return Err(Error::InvalidInput("non-finite jet argument".into()));
    }
    Ok(match kind {
        Elementary::Exp => a.exp(),
        Elementary::Ln => a.ln()?,
        Elementary::Sinh => a.sinh(),
        Elementary::Cosh => a.cosh(),
        Elementary::Tanh => a.tanh(),
        Elementary::Sech => a.sech(),
        Elementary::Pow(r) => a.powf(r)?,
    })
}

/// Autonomous ODE `y' = P(y)` with polynomial right-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyOde {
    /// `P(y) = sum_i coeffs[i] y^i`
    pub coeffs: Vec<f64>,
    pub y0: f64,
}

impl PolyOde {
    pub fn rhs(&self, y: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * y + c)
    }
}

/// Taylor jet of the solution through `(x0, ode.y0)`, built order by order
/// from `c_{j+1} = [P(y)]_j / (j + 1)`.
pub fn jet_ode_propagate(ode: &PolyOde, x0: f64, order: usize) -> Jet {
    let mut coeffs = vec![ode.y0];
    for j in 0..order {
        let partial = Jet { x0, coeffs: coeffs.clone() };
        let p = partial.poly(&ode.coeffs);
        coeffs.push(p.coeffs[j] / (j + 1) as f64);
    }
    Jet { x0, coeffs }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale_by(rhs)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.map(|c| -c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + y.abs()))
    }

    #[test]
    fn variable_jets() {
        assert_eq!(Jet::variable(2.0, 3).coeffs(), &[2.0, 1.0, 0.0, 0.0]);
        assert_eq!(Jet::variable(0.0, 0).coeffs(), &[0.0]);
        assert_eq!(Jet::variable(-1.5, 5).coeffs(), &[-1.5, 1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn arithmetic_examples() {
        let a = Jet::from_coeffs(0.0, vec![1.0, 1.0]).unwrap();
        assert_eq!(jet_arith(ArithOp::Mul, &a, &a).unwrap().coeffs(), &[1.0, 2.0]);
        let one = Jet::from_coeffs(0.0, vec![1.0, 0.0, 0.0]).unwrap();
        let den = Jet::from_coeffs(0.0, vec![1.0, 1.0, 0.0]).unwrap();
        assert_eq!(jet_arith(ArithOp::Div, &one, &den).unwrap().coeffs(), &[1.0, -1.0, 1.0]);
        let e = Jet::variable(0.0, 4).exp();
        let e2 = &e * &e;
        // 2^j / j!
        assert!(close(e2.coeffs(), &[1.0, 2.0, 2.0, 4.0 / 3.0, 2.0 / 3.0], 1e-15));
    }

    #[test]
    fn singular_division_reports_point() {
        let num = Jet::variable(0.25, 2);
        let den = Jet::from_coeffs(0.25, vec![0.0, 1.0, 0.0]).unwrap();
        match num.div(&den) {
            Err(Error::SingularDivision { x0, .. }) => assert_eq!(x0, 0.25),
            other => panic!("expected SingularDivision, got {other:?}"),
        }
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = Jet::variable(0.0, 2);
        let b = Jet::variable(0.0, 3);
        let c = Jet::variable(1.0, 2);
        assert!(matches!(a.try_add(&b), Err(Error::JetMismatch { .. })));
        assert!(matches!(a.try_mul(&c), Err(Error::JetMismatch { .. })));
    }

    #[test]
    fn elementary_examples() {
        let x = Jet::variable(0.0, 3);
        assert!(close(x.exp().coeffs(), &[1.0, 1.0, 0.5, 1.0 / 6.0], 1e-15));
        let x2 = Jet::variable(0.0, 2);
        assert!(close(x2.sech().coeffs(), &[1.0, 0.0, -0.5], 1e-15));

        // sech(x)^4 at x = 1: value and first derivative by hand
        let x = Jet::variable(1.0, 2);
        let p = jet_elementary(Elementary::Pow(4.0), &x.sech()).unwrap();
        let s = 1.0 / 1.0_f64.cosh();
        assert!((p.value() - s.powi(4)).abs() < 1e-15);
        assert!((p.derivative(1).unwrap() + 4.0 * s.powi(4) * 1.0_f64.tanh()).abs() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        let neg = Jet::constant(0.0, 2, -1.0);
        assert!(matches!(jet_elementary(Elementary::Ln, &neg), Err(Error::Domain { .. })));
        assert!(matches!(neg.powf(0.5), Err(Error::Domain { .. })));
        // integer powers of a negative base are fine
        let cube = neg.powf(3.0).unwrap();
        assert_eq!(cube.value(), -1.0);
    }

    #[test]
    fn powf_zero_base_integer() {
        let x = Jet::variable(0.0, 4);
        assert_eq!(x.powf(2.0).unwrap().coeffs(), &[0.0, 0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn shift_and_truncate() {
        // x^3 at 2: [8, 12, 6, 1]
        let x = Jet::variable(2.0, 3);
        let c = x.powf(3.0).unwrap();
        assert!(close(c.coeffs(), &[8.0, 12.0, 6.0, 1.0], 1e-15));
        let d = c.shift().unwrap();
        assert!(close(d.coeffs(), &[12.0, 12.0, 3.0], 1e-15));
        assert_eq!(c.derivative(3), Some(6.0));
        assert!(c.truncate(4).is_err());
        assert!(Jet::variable(0.0, 0).shift().is_err());
    }

    #[test]
    fn ode_constant_rhs() {
        let ode = PolyOde { coeffs: vec![1.0], y0: 0.0 };
        assert_eq!(jet_ode_propagate(&ode, 0.0, 3).coeffs(), &[0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn ode_tanh_case() {
        let ode = PolyOde { coeffs: vec![1.0, 0.0, -1.0], y0: 0.0 };
        let y = jet_ode_propagate(&ode, 0.0, 5);
        assert!(close(y.coeffs(), &[0.0, 1.0, 0.0, -1.0 / 3.0, 0.0, 2.0 / 15.0], 1e-15));
    }

    #[test]
    fn ode_quartic_third_coefficient() {
        // y' = (1 - y^2)(1 - k y^2); at y = 0 hand differentiation gives
        // y''' = -2 (1 + k), y'''' = 0.
        let beta: f64 = 0.8;
        let k = 1.0 - beta * beta;
        let ode = PolyOde { coeffs: vec![1.0, 0.0, -(1.0 + k), 0.0, k], y0: 0.0 };
        let y = jet_ode_propagate(&ode, 0.0, 4);
        let expected = [0.0, 1.0, 0.0, -(2.0 - beta * beta) / 3.0, 0.0];
        assert!(close(y.coeffs(), &expected, 1e-15));
    }

    #[test]
    fn ode_matches_tanh_jet_up_to_order_ten() {
        let ode_coeffs = vec![1.0, 0.0, -1.0];
        for &x0 in &[-1.3_f64, 0.0, 0.4, 2.0] {
            let ode = PolyOde { coeffs: ode_coeffs.clone(), y0: x0.tanh() };
            let via_ode = jet_ode_propagate(&ode, x0, 10);
            let direct = Jet::variable(x0, 10).tanh();
            for (a, b) in via_ode.coeffs().iter().zip(direct.coeffs()) {
                assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "{a} vs {b} at {x0}");
            }
        }
    }
}
