//! Shape-invariance checks: the base condition, eigenvalue and eigenfunction
//! ladders, pairwise invariance of neighbouring transforms, and the
//! Hamiltonian assembled from the parameter flow.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::potentials::{jet_fn, FamilyParams, JetFn, PotentialFamily};
use crate::transforms::{crum_potential_fn, TransformChain};
use crate::verify::{grid_gap, proportionality, proportionality_residuals, sample_values, Grid};
use crate::wronskian::relative_gap;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SIReport {
    pub identity: String,
    pub points: Vec<f64>,
    pub per_point: Vec<f64>,
    pub max_gap: f64,
    /// Fitted multiplicative constant for wavefunction checks.
    pub constant: Option<f64>,
}

impl SIReport {
    fn additive(identity: String, grid: &Grid, a: &[f64], b: &[f64]) -> Self {
        let g = grid_gap(grid, a, b);
        SIReport { identity, points: grid.points.clone(), per_point: g.per_point, max_gap: g.max_gap, constant: None }
    }

    fn proportional(identity: String, grid: &Grid, f: &[f64], g: &[f64]) -> Result<Self> {
        let r = proportionality(f, g)?;
        let per_point = proportionality_residuals(f, g, &r);
        Ok(SIReport {
            identity,
            points: grid.points.clone(),
            per_point,
            max_gap: r.deviation,
            constant: Some(r.constant),
        })
    }
}

fn shifted(fam: &PotentialFamily, m: usize, levels: usize) -> Result<PotentialFamily> {
    let a_m = fam.flow()?.iterate(&fam.params, m);
    fam.with_params(a_m, levels)
}

/// `u[k](x; a)` from the Darboux chain, or the bare potential at `k = 0`
/// (which then needs no bound level at the given parameters).
fn darboux_potential_at(params: FamilyParams, k: usize) -> Result<JetFn> {
    if k == 0 {
        return Ok(params.potential());
    }
    let fam = PotentialFamily::build(params, k)?;
    Ok(TransformChain::at_level(&fam, k)?.potential)
}

fn plus_constant(f: JetFn, c: f64) -> JetFn {
    jet_fn(move |x, k| Ok(f(x, k)?.add_scalar(c)))
}

/// `u[1](x; a)` against `u(x; f(a)) + R`.
pub fn check_si_condition(fam: &PotentialFamily, grid: &Grid) -> Result<SIReport> {
    check_pairwise_si(fam, 1, grid)
}

/// `lambda_s(f(a)) + R = lambda_{s+1}(a)` from the closed-form eigenvalues.
pub fn check_eigenvalue_ladder(fam: &PotentialFamily, s: usize) -> Result<SIReport> {
    let flow = fam.flow()?;
    fam.eigenpair(s)?;
    let next = fam.eigenpair(s + 1)?.eigenvalue;
    let levels = s + 1 - fam.base_index();
    let lower = shifted(fam, 1, levels)?.eigenpair(s)?.eigenvalue;
    let lhs = lower + flow.remainder_at(&fam.params, 1);
    let gap = relative_gap(lhs, next);
    Ok(SIReport {
        identity: format!("eigenvalue-ladder s={s}"),
        points: vec![],
        per_point: vec![gap],
        max_gap: gap,
        constant: None,
    })
}

/// `psi[k]_{s+1}(x; a)` against `psi[k-1]_s(x; f(a))`, up to a constant.
pub fn check_wavefunction_si(fam: &PotentialFamily, k: usize, s: usize, grid: &Grid) -> Result<SIReport> {
    if k == 0 {
        return Err(Error::InvalidInput("wavefunction shape invariance starts at k = 1".into()));
    }
    fam.flow()?;
    let upper = TransformChain::at_level(fam, k)?;
    let lhs = upper.wavefunction(s + 1)?.clone();
    let levels = s + 1 - fam.base_index();
    let lower = TransformChain::at_level(&shifted(fam, 1, levels)?, k - 1)?;
    let rhs = lower.wavefunction(s)?.clone();
    SIReport::proportional(
        format!("wavefunction-si k={k} s={s}"),
        grid,
        &sample_values(&lhs, grid)?,
        &sample_values(&rhs, grid)?,
    )
}

/// `u[k](x; a)` against `u[k-1](x; f(a)) + R`.
pub fn check_pairwise_si(fam: &PotentialFamily, k: usize, grid: &Grid) -> Result<SIReport> {
    if k == 0 {
        return Err(Error::InvalidInput("pairwise shape invariance starts at k = 1".into()));
    }
    let flow = fam.flow()?;
    let lhs = darboux_potential_at(fam.params, k)?;
    let a1 = flow.iterate(&fam.params, 1);
    let rhs = plus_constant(darboux_potential_at(a1, k - 1)?, flow.remainder_at(&fam.params, 1));
    Ok(SIReport::additive(
        format!("pairwise-si k={k}"),
        grid,
        &sample_values(&lhs, grid)?,
        &sample_values(&rhs, grid)?,
    ))
}

/// Evaluator for `u(x; a_s) + sum_{k=1..s} R(a_k)`. Flowed parameters
/// without a bound ground state are refused unless `allow_unbound`.
pub fn si_hamiltonian_fn(fam: &PotentialFamily, s: usize, allow_unbound: bool) -> Result<JetFn> {
    let flow = fam.flow()?;
    let a_s = flow.iterate(&fam.params, s);
    if !allow_unbound {
        if let Some(m) = (1..=s).find(|&m| !(flow.admissible)(&flow.iterate(&fam.params, m))) {
            return Err(Error::UnboundLevel {
                level: m,
                reason: format!("flowed parameters {:?} leave no bound state", flow.iterate(&fam.params, m)),
            });
        }
    }
    Ok(plus_constant(a_s.potential(), flow.accumulated_remainder(&fam.params, s)))
}

pub fn si_hamiltonian_potential(fam: &PotentialFamily, s: usize, x: f64, order: usize) -> Result<Jet> {
    si_hamiltonian_fn(fam, s, false)?(x, order)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorollaryReport {
    pub s: usize,
    pub si_vs_darboux: SIReport,
    pub si_vs_crum: SIReport,
    pub darboux_vs_crum: SIReport,
    pub max_gap: f64,
}

/// Pairwise gaps among the flowed Hamiltonian, the `s`-step Darboux chain
/// and the order-`s` Crum transform.
pub fn corollary_check(fam: &PotentialFamily, s: usize, grid: &Grid) -> Result<CorollaryReport> {
    let si = sample_values(&si_hamiltonian_fn(fam, s, false)?, grid)?;
    let dar = sample_values(&TransformChain::at_level(fam, s)?.potential, grid)?;
    let crum = sample_values(&crum_potential_fn(fam, s), grid)?;
    let si_vs_darboux = SIReport::additive(format!("si-vs-darboux s={s}"), grid, &si, &dar);
    let si_vs_crum = SIReport::additive(format!("si-vs-crum s={s}"), grid, &si, &crum);
    let darboux_vs_crum = SIReport::additive(format!("darboux-vs-crum s={s}"), grid, &dar, &crum);
    let max_gap = si_vs_darboux.max_gap.max(si_vs_crum.max_gap).max(darboux_vs_crum.max_gap);
    Ok(CorollaryReport { s, si_vs_darboux, si_vs_crum, darboux_vs_crum, max_gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::morse_crum_potential;
    use crate::potentials::{ginocchio_family, morse_family, GinocchioParams, MorseParams};
    use std::f64::consts::SQRT_2;

    const P: MorseParams = MorseParams { a: 2.0 * SQRT_2, alpha: 1.0 };

    fn grid() -> Grid {
        Grid::uniform(-3.0, 3.0, 121).unwrap()
    }

    #[test]
    fn base_condition_holds_at_two_parameter_points() {
        for p in [P, MorseParams { a: 3.0, alpha: 0.5 }] {
            let fam = morse_family(p, 3).unwrap();
            assert!(check_si_condition(&fam, &grid()).unwrap().max_gap <= 1e-9);
        }
    }

    #[test]
    fn ginocchio_has_no_flow() {
        let fam = ginocchio_family(GinocchioParams { beta: 0.8, upsilon: 4.0 }, 3).unwrap();
        assert!(matches!(check_si_condition(&fam, &grid()), Err(Error::MissingFlow(_))));
        assert!(matches!(check_eigenvalue_ladder(&fam, 0), Err(Error::MissingFlow(_))));
        assert!(matches!(si_hamiltonian_potential(&fam, 1, 0.0, 0), Err(Error::MissingFlow(_))));
    }

    #[test]
    fn ladder_values_and_top_level() {
        let fam = morse_family(P, 3).unwrap();
        assert!(check_eigenvalue_ladder(&fam, 1).unwrap().max_gap <= 1e-12);
        assert!(check_eigenvalue_ladder(&fam, 2).unwrap().max_gap <= 1e-12);
        assert!(matches!(check_eigenvalue_ladder(&fam, 3), Err(Error::Index(_))));
    }

    #[test]
    fn ladder_telescopes_to_accumulated_remainder() {
        let fam = morse_family(P, 3).unwrap();
        let flow = fam.flow().unwrap();
        for m in 1..=2 {
            let lam = fam.eigenpair(m + 1).unwrap().eigenvalue;
            assert!((lam - flow.accumulated_remainder(&fam.params, m)).abs() < 1e-12);
        }
    }

    #[test]
    fn si_hamiltonian_at_zero_and_one() {
        let fam = morse_family(P, 3).unwrap();
        for &x in &[-1.0, 0.2, 2.0] {
            assert_eq!(si_hamiltonian_potential(&fam, 0, x, 2).unwrap(), (fam.potential)(x, 2).unwrap());
            let v = si_hamiltonian_potential(&fam, 1, x, 0).unwrap().value();
            assert!((v - morse_crum_potential(P, 1, x)).abs() < 1e-12);
        }
    }

    #[test]
    fn si_hamiltonian_minus_crum_is_zero() {
        let fam = morse_family(P, 3).unwrap();
        let si = sample_values(&si_hamiltonian_fn(&fam, 2, false).unwrap(), &grid()).unwrap();
        let cr = sample_values(&crum_potential_fn(&fam, 2), &grid()).unwrap();
        let scale = cr.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!(si.iter().zip(&cr).all(|(a, b)| (a - b).abs() <= 1e-9 * scale));
    }

    #[test]
    fn cap_refuses_unbound_flow() {
        // A_4 < 0 at the reference point
        let fam = morse_family(P, 3).unwrap();
        assert!(matches!(si_hamiltonian_fn(&fam, 4, false), Err(Error::UnboundLevel { level: 4, .. })));
        assert!(si_hamiltonian_fn(&fam, 4, true).is_ok());
    }

    #[test]
    fn pairwise_and_wavefunction_ladder() {
        let fam = morse_family(P, 3).unwrap();
        assert!(check_pairwise_si(&fam, 2, &grid()).unwrap().max_gap <= 1e-8);
        for (k, s) in [(1, 1), (1, 2), (2, 2)] {
            let r = check_wavefunction_si(&fam, k, s, &grid()).unwrap();
            assert!(r.max_gap <= 1e-8, "k={k} s={s}: {}", r.max_gap);
            assert!(r.constant.unwrap().is_finite());
        }
    }

    #[test]
    fn corollary_first_order_darboux_equals_crum_exactly() {
        let fam = morse_family(P, 3).unwrap();
        let r = corollary_check(&fam, 1, &grid()).unwrap();
        assert_eq!(r.darboux_vs_crum.max_gap, 0.0);
        assert!(r.si_vs_crum.max_gap <= 1e-9);
    }
}
