//! Crum transforms (Wronskian ratios) and the iterated Darboux recursion.
//!
//! The two routes share code only at order one: `crum_potential(n = 1)` and
//! `crum_wavefunction(n = 1, s)` call the same single-step formulas the
//! Darboux chain uses, so the first-order comparison is exact. From order two
//! on the Crum side is a single determinant and the Darboux side is a stack
//! of nested closures, one derivative order consumed per level.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::potentials::{jet_fn, log_derivative, JetFn, PotentialFamily};
use crate::verify::{
    grid_gap, proportionality, proportionality_residuals, sample_values, GapReport, Grid, ProportionalityReport,
};
use crate::wronskian::{required_seed_order, wronskian_of_jets, FunctionList};

/// `u - 2 (phi'/phi)'` with `u` at order `K` and `phi` at order `K + 2`.
fn darboux_potential(u: &Jet, phi: &Jet) -> Result<Jet> {
    let k = u.order();
    let log_d = phi.shift()?.div(&phi.truncate(k + 1)?)?;
    Ok(u - &log_d.shift()?.scale_by(2.0))
}

/// `psi' - (phi'/phi) psi` with both jets at order `K + 1`.
fn darboux_wavefunction(phi: &Jet, psi: &Jet) -> Result<Jet> {
    let k = psi.order() - 1;
    let h = phi.shift()?.div(&phi.truncate(k)?)?;
    Ok(&psi.shift()? - &(&h * &psi.truncate(k)?))
}

fn seeds(fam: &PotentialFamily, n: usize) -> Result<FunctionList> {
    if n > fam.levels() {
        return Err(Error::Index(format!(
            "order {n} transform needs {n} seed eigenfunctions, {} has {}",
            fam.name,
            fam.levels()
        )));
    }
    FunctionList::new(fam.eigenpairs[..n].iter().map(|e| e.wavefunction.clone()).collect())
}

/// Jet of `u^C[n] = u - 2 (ln W_n)''` at order `order`.
pub fn crum_potential(fam: &PotentialFamily, n: usize, x: f64, order: usize) -> Result<Jet> {
    let u = (fam.potential)(x, order)?;
    if n == 0 {
        return Ok(u);
    }
    let fs = seeds(fam, n)?;
    let jets = fs.jets(x, required_seed_order(n, order + 2))?;
    let w = wronskian_of_jets(&jets, order + 2)?;
    darboux_potential(&u, &w)
}

/// Jet of `psi^C[n]_s = W_{n,s} / W_n`; `s` is a family label above the seeds.
pub fn crum_wavefunction(fam: &PotentialFamily, n: usize, s: usize, x: f64, order: usize) -> Result<Jet> {
    let target = fam.eigenpair(s)?;
    if n == 0 {
        return (target.wavefunction)(x, order);
    }
    if s < fam.base_index() + n {
        return Err(Error::Index(format!(
            "psi^C[{n}]_{s} is undefined: s must exceed the {n} seed labels"
        )));
    }
    let fs = seeds(fam, n)?;
    if n == 1 {
        let phi = (fs.fs[0])(x, order + 1)?;
        let psi = (target.wavefunction)(x, order + 1)?;
        return darboux_wavefunction(&phi, &psi);
    }
    let mut jets = fs.jets(x, required_seed_order(n + 1, order))?;
    jets.push((target.wavefunction)(x, required_seed_order(n + 1, order))?);
    let w_ns = wronskian_of_jets(&jets, order)?;
    let w_n = wronskian_of_jets(&jets[..n], order)?;
    w_ns.div(&w_n)
}

/// Level-`k` state of the iterated Darboux recursion.
#[derive(Clone)]
pub struct TransformChain {
    pub base: PotentialFamily,
    pub level: usize,
    pub potential: JetFn,
    /// `psi^D[level]_s` keyed by family label, for every `s` above the removed levels.
    pub transformed: BTreeMap<usize, JetFn>,
}

impl TransformChain {
    pub fn new(base: &PotentialFamily) -> Self {
        TransformChain {
            base: base.clone(),
            level: 0,
            potential: base.potential.clone(),
            transformed: base.eigenpairs.iter().map(|e| (e.index, e.wavefunction.clone())).collect(),
        }
    }

    /// Chain after `n` Darboux steps.
    pub fn at_level(base: &PotentialFamily, n: usize) -> Result<Self> {
        (0..n).try_fold(Self::new(base), |c, _| c.darboux_step())
    }

    pub fn darboux_step(&self) -> Result<TransformChain> {
        let seed_label = self.base.base_index() + self.level;
        let phi = self
            .transformed
            .get(&seed_label)
            .cloned()
            .ok_or_else(|| Error::Index(format!("no eigenfunction left to remove at level {}", self.level)))?;

        let prev_u = self.potential.clone();
        let phi_u = phi.clone();
        let potential = jet_fn(move |x, k| darboux_potential(&prev_u(x, k)?, &phi_u(x, k + 2)?));

        let transformed = self
            .transformed
            .iter()
            .filter(|(&s, _)| s > seed_label)
            .map(|(&s, psi)| {
                let (phi, psi) = (phi.clone(), psi.clone());
                let f = jet_fn(move |x, k| darboux_wavefunction(&phi(x, k + 1)?, &psi(x, k + 1)?));
                (s, f)
            })
            .collect();

        Ok(TransformChain { base: self.base.clone(), level: self.level + 1, potential, transformed })
    }

    pub fn wavefunction(&self, s: usize) -> Result<&JetFn> {
        self.transformed
            .get(&s)
            .ok_or_else(|| Error::Index(format!("psi^D[{}]_{s} is not available", self.level)))
    }
}

/// Fast path for the second transform of the third level through the
/// log-derivatives `h_i = psi_i'/psi_i`:
/// `[e0 (h2 - h1) - e1 (h2 - h0) + e2 (h1 - h0)] / (h1 - h0) * psi_2`,
/// with the three lowest levels of the family in place of `0, 1, 2`.
pub fn h_ratio_psi23(fam: &PotentialFamily, x: f64) -> Result<f64> {
    if fam.levels() < 3 {
        return Err(Error::Index(format!("{} needs three levels for the h-ratio form", fam.name)));
    }
    let e = &fam.eigenpairs;
    let h: Vec<f64> = e[..3].iter().map(|p| log_derivative(p, x, 0).map(|j| j.value())).collect::<Result<_>>()?;
    let eps: Vec<f64> = e[..3].iter().map(|p| p.eigenvalue).collect();
    h_ratio_formula(&h, &eps, (e[2].wavefunction)(x, 0)?.value(), x)
}

/// Scalar h-ratio expression for given `h_0..h_2`, eigenvalues and `psi_2`.
pub fn h_ratio_formula(h: &[f64], eps: &[f64], psi2: f64, x: f64) -> Result<f64> {
    let den = h[1] - h[0];
    if den == 0.0 || !den.is_finite() {
        return Err(Error::SingularDivision { x0: x, value: den });
    }
    let num = eps[0] * (h[2] - h[1]) - eps[1] * (h[2] - h[0]) + eps[2] * (h[1] - h[0]);
    Ok(num / den * psi2)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WavefunctionComparison {
    pub s: usize,
    pub report: ProportionalityReport,
    pub per_point: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub n: usize,
    pub potential: GapReport,
    pub wavefunctions: Vec<WavefunctionComparison>,
    pub max_wavefunction_deviation: f64,
}

pub fn crum_potential_fn(fam: &PotentialFamily, n: usize) -> JetFn {
    let fam = fam.clone();
    jet_fn(move |x, k| crum_potential(&fam, n, x, k))
}

pub fn crum_wavefunction_fn(fam: &PotentialFamily, n: usize, s: usize) -> JetFn {
    let fam = fam.clone();
    jet_fn(move |x, k| crum_wavefunction(&fam, n, s, x, k))
}

/// Crum versus `n` Darboux steps on `grid`: potential gap and, for every
/// label above the seeds, the proportionality deviation of the wavefunctions.
pub fn equivalence_report(fam: &PotentialFamily, n: usize, grid: &Grid) -> Result<EquivalenceReport> {
    let chain = TransformChain::at_level(fam, n)?;
    let crum_u = sample_values(&crum_potential_fn(fam, n), grid)?;
    let dar_u = sample_values(&chain.potential, grid)?;
    let potential = grid_gap(grid, &crum_u, &dar_u);

    let mut wavefunctions = Vec::new();
    for (&s, psi_d) in &chain.transformed {
        let c = sample_values(&crum_wavefunction_fn(fam, n, s), grid)?;
        let d = sample_values(psi_d, grid)?;
        let report = proportionality(&c, &d)?;
        let per_point = proportionality_residuals(&c, &d, &report);
        wavefunctions.push(WavefunctionComparison { s, report, per_point });
    }
    let max_wavefunction_deviation = wavefunctions.iter().fold(0.0_f64, |m, w| m.max(w.report.deviation));
    Ok(EquivalenceReport { n, potential, wavefunctions, max_wavefunction_deviation })
}
