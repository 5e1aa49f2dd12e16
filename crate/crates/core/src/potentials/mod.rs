//! Exactly solvable potential families exposed as jet-producing evaluators.

mod ginocchio;
mod morse;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::Jet;

pub use ginocchio::{
    gegenbauer, ginocchio_coordinate, ginocchio_family, ginocchio_mu, ginocchio_potential,
    ginocchio_x_of_y,
    GinocchioParams,
};
pub use morse::{morse_a_n, morse_eigenvalue, morse_family, morse_flow, morse_potential, MorseParams};

/// A function of `x` that can hand back its Taylor jet to any order.
pub type JetFn = Arc<dyn Fn(f64, usize) -> Result<Jet> + Send + Sync>;

/// Wraps a closure as a [`JetFn`].
pub fn jet_fn<F>(f: F) -> JetFn
where
    F: Fn(f64, usize) -> Result<Jet> + Send + Sync + 'static,
{
    Arc::new(f)
}

#[derive(Clone)]
pub struct EigenPair {
    /// Label in the family's own numbering (Morse starts at 1, Ginocchio at 0).
    pub index: usize,
    pub eigenvalue: f64,
    pub wavefunction: JetFn,
}

impl fmt::Debug for EigenPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EigenPair")
            .field("index", &self.index)
            .field("eigenvalue", &self.eigenvalue)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum FamilyParams {
    Morse(MorseParams),
    Ginocchio(GinocchioParams),
}

impl FamilyParams {
    pub fn family_name(&self) -> &'static str {
        match self {
            FamilyParams::Morse(_) => "morse",
            FamilyParams::Ginocchio(_) => "ginocchio",
        }
    }

    /// Potential evaluator at these parameters, without level validation.
    pub fn potential(&self) -> JetFn {
        match *self {
            FamilyParams::Morse(p) => morse_potential(p),
            FamilyParams::Ginocchio(p) => ginocchio_potential(p),
        }
    }

    /// Named scalar view, in a fixed order.
    pub fn named(&self) -> Vec<(&'static str, f64)> {
        match self {
            FamilyParams::Morse(p) => vec![("A", p.a), ("alpha", p.alpha)],
            FamilyParams::Ginocchio(p) => vec![("beta", p.beta), ("upsilon", p.upsilon)],
        }
    }
}

/// Shape-invariance map `a -> f(a)` with remainder `R(a_prev, a_next)`.
#[derive(Clone, Copy)]
pub struct ParameterFlow {
    pub map_f: fn(&FamilyParams) -> FamilyParams,
    pub remainder_r: fn(&FamilyParams, &FamilyParams) -> f64,
    /// Whether flowed parameters still carry a bound ground state.
    pub admissible: fn(&FamilyParams) -> bool,
}

impl fmt::Debug for ParameterFlow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ParameterFlow")
    }
}

impl ParameterFlow {
    /// `a_m = f^m(a)`
    pub fn iterate(&self, a: &FamilyParams, m: usize) -> FamilyParams {
        (0..m).fold(*a, |p, _| (self.map_f)(&p))
    }

    /// `R(a_{m-1}, a_m)` for the step ending at `a_m`.
    pub fn remainder_at(&self, a: &FamilyParams, m: usize) -> f64 {
        assert!(m >= 1);
        let prev = self.iterate(a, m - 1);
        (self.remainder_r)(&prev, &(self.map_f)(&prev))
    }

    /// `sum_{k=1..s} R(a_k)`
    pub fn accumulated_remainder(&self, a: &FamilyParams, s: usize) -> f64 {
        let mut total = 0.0;
        let mut prev = *a;
        for _ in 0..s {
            let next = (self.map_f)(&prev);
            total += (self.remainder_r)(&prev, &next);
            prev = next;
        }
        total
    }
}

#[derive(Clone)]
pub struct PotentialFamily {
    pub name: &'static str,
    pub params: FamilyParams,
    pub potential: JetFn,
    pub eigenpairs: Vec<EigenPair>,
    pub flow: Option<ParameterFlow>,
}

impl fmt::Debug for PotentialFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialFamily")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("eigenpairs", &self.eigenpairs)
            .field("flow", &self.flow.is_some())
            .finish()
    }
}

impl PotentialFamily {
    /// Builds the family for `params` with the lowest `levels` eigenpairs.
    pub fn build(params: FamilyParams, levels: usize) -> Result<Self> {
        match params {
            FamilyParams::Morse(p) => morse_family(p, levels),
            FamilyParams::Ginocchio(p) => ginocchio_family(p, levels),
        }
    }

    /// Same family at other parameters (e.g. `f(a)`).
    pub fn with_params(&self, params: FamilyParams, levels: usize) -> Result<Self> {
        if params.family_name() != self.name {
            return Err(Error::InvalidInput(format!(
                "cannot rebuild {} with {} parameters",
                self.name,
                params.family_name()
            )));
        }
        Self::build(params, levels)
    }

    pub fn levels(&self) -> usize {
        self.eigenpairs.len()
    }

    pub fn base_index(&self) -> usize {
        self.eigenpairs[0].index
    }

    /// Eigenpair by the family's own label.
    pub fn eigenpair(&self, index: usize) -> Result<&EigenPair> {
        index
            .checked_sub(self.base_index())
            .and_then(|i| self.eigenpairs.get(i))
            .ok_or_else(|| {
                Error::Index(format!(
                    "{} has labels {}..{}, asked for {index}",
                    self.name,
                    self.base_index(),
                    self.base_index() + self.levels() - 1
                ))
            })
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigenpairs.iter().map(|e| e.eigenvalue).collect()
    }

    pub fn flow(&self) -> Result<&ParameterFlow> {
        self.flow.as_ref().ok_or_else(|| Error::MissingFlow(self.name.to_string()))
    }
}

/// Jet of `h = psi'/psi` at `x`, order `order`.
pub fn log_derivative(e: &EigenPair, x: f64, order: usize) -> Result<Jet> {
    let psi = (e.wavefunction)(x, order + 1)?;
    psi.shift()?.div(&psi.truncate(order)?)
}
