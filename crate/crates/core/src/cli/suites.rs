//! Verification suites run by `verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::Resolved;
use super::report::Record;
use crate::closed_forms::{
    ginocchio_quoted_second_potential, ginocchio_quoted_second_wavefunction, ginocchio_quoted_superpartner,
    morse_crum_potential, morse_crum_wavefunction,
};
use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::potentials::{ginocchio_coordinate, jet_fn, FamilyParams, JetFn, PotentialFamily};
use crate::shape_invariance::{
    check_eigenvalue_ladder, check_pairwise_si, check_si_condition, check_wavefunction_si, corollary_check,
    si_hamiltonian_fn, SIReport,
};
use crate::transforms::{
    crum_potential_fn, crum_wavefunction_fn, equivalence_report, h_ratio_psi23, TransformChain,
};
use crate::verify::{
    grid_gap, proportionality, proportionality_residuals, sample_values, schrodinger_residual, Grid,
};
use crate::wronskian::{
    jacobi_check, two_wronskian_identity_check, wronskian_derivative_check, FunctionList, MinorSelection,
};

pub const ANCHOR_EQUIVALENCE: &str = "crum-darboux-equivalence";
pub const ANCHOR_MORSE_CLOSED: &str = "morse-closed-form";
pub const ANCHOR_H_RATIO: &str = "h-ratio-second-transform";
pub const ANCHOR_GINOCCHIO_QUOTED: &str = "ginocchio-quoted-form";
pub const ANCHOR_SI_CONDITION: &str = "shape-invariance-condition";
pub const ANCHOR_LADDER: &str = "eigenvalue-ladder";
pub const ANCHOR_PAIRWISE: &str = "pairwise-shape-invariance";
pub const ANCHOR_WAVE_SI: &str = "wavefunction-shape-invariance";
pub const ANCHOR_COROLLARY: &str = "three-hamiltonians-coincide";
pub const ANCHOR_BUMPED_ROW: &str = "wronskian-derivative-bumped-row";
pub const ANCHOR_TWO_WRONSKIAN: &str = "two-wronskian-identity";
pub const ANCHOR_JACOBI: &str = "jacobi-complementary-minor";
pub const ANCHOR_RESIDUAL: &str = "isospectral-residual";

/// Number of random integer matrices per size in the Jacobi fixture.
pub const JACOBI_SAMPLES: usize = 20;
const JACOBI_SEED: u64 = 0x5eed_0001;

fn family_tol(cfg: &Resolved) -> f64 {
    match cfg.params {
        FamilyParams::Morse(_) => cfg.tolerances.morse,
        FamilyParams::Ginocchio(_) => cfg.tolerances.ginocchio,
    }
}

fn proportional_record(identity: String, anchor: &'static str, tol: f64, grid: &Grid, f: &[f64], g: &[f64]) -> Result<Record> {
    let r = proportionality(f, g)?;
    let per = proportionality_residuals(f, g, &r);
    Ok(Record::with_points(identity, anchor, tol, &grid.points, &per, r.deviation))
}

fn additive_record(identity: String, anchor: &'static str, tol: f64, grid: &Grid, a: &[f64], b: &[f64]) -> Record {
    let g = grid_gap(grid, a, b);
    Record::with_points(identity, anchor, tol, &grid.points, &g.per_point, g.max_gap)
}

fn si_record(r: SIReport, anchor: &'static str, tol: f64) -> Record {
    if r.points.is_empty() {
        Record::scalar(r.identity, anchor, tol, r.max_gap, None)
    } else {
        Record::with_points(r.identity, anchor, tol, &r.points, &r.per_point, r.max_gap)
    }
}

fn scalar_fn(f: impl Fn(f64) -> Result<f64>, grid: &Grid) -> Result<Vec<f64>> {
    grid.points.iter().map(|&x| f(x)).collect()
}

/// Crum against the Darboux chain for orders `1..=order`, plus closed forms.
pub fn crum_darboux(fam: &PotentialFamily, cfg: &Resolved, grid: &Grid) -> Result<Vec<Record>> {
    let tol = family_tol(cfg);
    let top = cfg.order.clamp(1, fam.levels());
    let mut out = Vec::new();
    for n in 1..=top {
        let eq = equivalence_report(fam, n, grid)?;
        let id = format!("crum vs darboux potential n={n}");
        out.push(if n == 1 {
            Record::exact(id, ANCHOR_EQUIVALENCE, &grid.points, &eq.potential.per_point)
        } else {
            Record::with_points(id, ANCHOR_EQUIVALENCE, tol, &grid.points, &eq.potential.per_point, eq.potential.max_gap)
        });
        for w in &eq.wavefunctions {
            let id = format!("crum vs darboux wavefunction n={n} s={}", w.s);
            out.push(if n == 1 {
                Record::exact(id, ANCHOR_EQUIVALENCE, &grid.points, &w.per_point)
            } else {
                Record::with_points(id, ANCHOR_EQUIVALENCE, tol, &grid.points, &w.per_point, w.report.deviation)
            });
        }
    }

    match cfg.params {
        FamilyParams::Morse(p) => {
            for n in 1..=top {
                let closed = scalar_fn(|x| Ok(morse_crum_potential(p, n, x)), grid)?;
                let crum = sample_values(&crum_potential_fn(fam, n), grid)?;
                let dar = sample_values(&TransformChain::at_level(fam, n)?.potential, grid)?;
                out.push(additive_record(format!("crum potential vs closed form n={n}"), ANCHOR_MORSE_CLOSED, tol, grid, &crum, &closed));
                out.push(additive_record(format!("darboux potential vs closed form n={n}"), ANCHOR_MORSE_CLOSED, tol, grid, &dar, &closed));
                let chain = TransformChain::at_level(fam, n)?;
                for s in (n + 1)..=fam.levels() {
                    let Ok(closed) = scalar_fn(|x| morse_crum_wavefunction(p, n, s, x), grid) else { continue };
                    let crum = sample_values(&crum_wavefunction_fn(fam, n, s), grid)?;
                    let dar = sample_values(chain.wavefunction(s)?, grid)?;
                    out.push(proportional_record(format!("crum wavefunction vs closed form n={n} s={s}"), ANCHOR_MORSE_CLOSED, tol, grid, &crum, &closed)?);
                    out.push(proportional_record(format!("darboux wavefunction vs closed form n={n} s={s}"), ANCHOR_MORSE_CLOSED, tol, grid, &dar, &closed)?);
                }
            }
        }
        FamilyParams::Ginocchio(p) => {
            let y_of = |x: f64| ginocchio_coordinate(p, x, 0).value();
            let crum1 = sample_values(&crum_potential_fn(fam, 1), grid)?;
            for m in [2, 1] {
                let quoted = scalar_fn(|x| Ok(ginocchio_quoted_superpartner(p, y_of(x), m)), grid)?;
                let id = format!("superpartner vs quoted form (middle power {m})");
                out.push(additive_record(id, ANCHOR_GINOCCHIO_QUOTED, tol, grid, &crum1, &quoted));
            }
            if top >= 2 && fam.levels() >= 3 {
                let chain = TransformChain::at_level(fam, 2)?;
                let label = fam.base_index() + 2;
                let dar = sample_values(chain.wavefunction(label)?, grid)?;
                let h = scalar_fn(|x| h_ratio_psi23(fam, x), grid)?;
                out.push(proportional_record(format!("darboux wavefunction n=2 s={label} vs h-ratio form"), ANCHOR_H_RATIO, tol, grid, &dar, &h)?);
                let quoted = scalar_fn(|x| Ok(ginocchio_quoted_second_wavefunction(p, y_of(x))), grid)?;
                out.push(proportional_record(format!("darboux wavefunction n=2 s={label} vs quoted form"), ANCHOR_GINOCCHIO_QUOTED, tol, grid, &dar, &quoted)?);
                let crum2 = sample_values(&crum_potential_fn(fam, 2), grid)?;
                let quoted = scalar_fn(|x| Ok(ginocchio_quoted_second_potential(p, y_of(x))), grid)?;
                out.push(additive_record("crum potential n=2 vs quoted form".into(), ANCHOR_GINOCCHIO_QUOTED, tol, grid, &crum2, &quoted));
            }
        }
    }
    Ok(out)
}

/// Shape-invariance checks along the parameter flow.
pub fn shape_invariance(fam: &PotentialFamily, cfg: &Resolved, grid: &Grid) -> Result<Vec<Record>> {
    fam.flow()?;
    let t = &cfg.tolerances;
    let base = fam.base_index();
    let top = base + fam.levels() - 1;
    let mut out = vec![si_record(check_si_condition(fam, grid)?, ANCHOR_SI_CONDITION, t.si_condition)];
    for s in base..top {
        out.push(si_record(check_eigenvalue_ladder(fam, s)?, ANCHOR_LADDER, t.ladder));
    }
    for k in 2..=fam.levels() {
        let tol = if k == 2 { t.morse } else { t.corollary };
        out.push(si_record(check_pairwise_si(fam, k, grid)?, ANCHOR_PAIRWISE, tol));
    }
    for k in 1..fam.levels() {
        for s in (base + k - 1)..top {
            out.push(si_record(check_wavefunction_si(fam, k, s, grid)?, ANCHOR_WAVE_SI, t.morse));
        }
    }
    for s in 1..=fam.levels() {
        if !cfg.allow_unbound_flow && si_hamiltonian_fn(fam, s, false).is_err() {
            break;
        }
        let c = corollary_check(fam, s, grid)?;
        for r in [c.si_vs_darboux, c.si_vs_crum, c.darboux_vs_crum] {
            out.push(si_record(r, ANCHOR_COROLLARY, t.corollary));
        }
    }
    Ok(out)
}

fn monomials(n: usize) -> FunctionList {
    let fs: Vec<JetFn> = (0..n)
        .map(|p| {
            let mut c = vec![0.0; p + 1];
            c[p] = 1.0;
            jet_fn(move |x, k| Ok(Jet::variable(x, k).poly(&c)))
        })
        .collect();
    FunctionList::new(fs).expect("nonempty")
}

/// Random integer matrices with a random `r = 2` selection, reproducible.
pub fn jacobi_fixtures(samples: usize, seed: u64) -> Vec<(Vec<Vec<f64>>, MinorSelection)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = |rng: &mut ChaCha8Rng, n: usize| {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        vec![a.min(b), a.max(b)]
    };
    let mut out = Vec::new();
    for n in [4usize, 5] {
        for _ in 0..samples {
            let m: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-9..=9) as f64).collect()).collect();
            let rows = pick(&mut rng, n);
            let cols = pick(&mut rng, n);
            out.push((m, MinorSelection::new(rows, cols).expect("valid selection")));
        }
    }
    out
}

/// Determinant identities on the family seeds, polynomial fixtures and
/// random integer matrices.
pub fn wronskian_identities(fam: &PotentialFamily, cfg: &Resolved, grid: &Grid) -> Result<Vec<Record>> {
    let tol = match cfg.params {
        FamilyParams::Morse(_) => cfg.tolerances.wronskian,
        FamilyParams::Ginocchio(_) => cfg.tolerances.wronskian_ginocchio,
    };
    let mut out = Vec::new();
    let seeds: Vec<JetFn> = fam.eigenpairs.iter().take(3).map(|e| e.wavefunction.clone()).collect();

    let fs = FunctionList::new(seeds.clone())?;
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    for &x in &grid.points {
        let r = wronskian_derivative_check(&fs, x)?;
        lhs.push(r.lhs);
        rhs.push(r.rhs);
    }
    out.push(additive_record(format!("bumped-row derivative, {} seeds", fs.len()), ANCHOR_BUMPED_ROW, tol, grid, &lhs, &rhs));

    for n in [3, 4] {
        let fs = monomials(n);
        let pts = [-1.5, -0.25, 0.5, 2.0];
        let gaps = pts.iter().map(|&x| wronskian_derivative_check(&fs, x).map(|r| r.gap)).collect::<Result<Vec<_>>>()?;
        out.push(Record::exact(format!("bumped-row derivative, monomials up to degree {}", n - 1), ANCHOR_BUMPED_ROW, &pts, &gaps));
    }

    if seeds.len() >= 3 {
        let pair = FunctionList::new(seeds[..2].to_vec())?;
        let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
        for &x in &grid.points {
            let r = two_wronskian_identity_check(&pair, &seeds[2], x)?;
            lhs.push(r.lhs);
            rhs.push(r.rhs);
        }
        out.push(additive_record("two-Wronskian identity n=2".into(), ANCHOR_TWO_WRONSKIAN, tol, grid, &lhs, &rhs));
    }

    let fixtures = jacobi_fixtures(JACOBI_SAMPLES, JACOBI_SEED);
    for n in [4, 5] {
        let gaps = fixtures
            .iter()
            .filter(|(m, _)| m.len() == n)
            .map(|(m, sel)| jacobi_check(m, sel).map(|r| (r.cofactor_minor - r.rhs).abs()))
            .collect::<Result<Vec<_>>>()?;
        let idx: Vec<f64> = (0..gaps.len()).map(|i| i as f64).collect();
        out.push(Record::exact(format!("Jacobi minors, {JACOBI_SAMPLES} integer {n}x{n} matrices, r=2"), ANCHOR_JACOBI, &idx, &gaps));
    }
    Ok(out)
}

/// Schrödinger residuals of every transformed pair up to the configured order,
/// along both the Crum and the Darboux route.
pub fn residuals(fam: &PotentialFamily, cfg: &Resolved, grid: &Grid) -> Result<Vec<Record>> {
    let tol = cfg.tolerances.residual;
    let mut out = Vec::new();
    for n in 0..=cfg.order.min(fam.levels() - 1) {
        let chain = TransformChain::at_level(fam, n)?;
        let u_c = crum_potential_fn(fam, n);
        for e in fam.eigenpairs.iter().skip(n) {
            let s = e.index;
            let r = schrodinger_residual(&u_c, &crum_wavefunction_fn(fam, n, s), e.eigenvalue, grid)?;
            out.push(Record::scalar(format!("crum residual n={n} s={s}"), ANCHOR_RESIDUAL, tol, r.max_residual, Some(r.worst_x)));
            if n > 0 {
                let r = schrodinger_residual(&chain.potential, chain.wavefunction(s)?, e.eigenvalue, grid)?;
                out.push(Record::scalar(format!("darboux residual n={n} s={s}"), ANCHOR_RESIDUAL, tol, r.max_residual, Some(r.worst_x)));
            }
        }
    }
    Ok(out)
}

pub fn require_levels(fam: &PotentialFamily, order: usize) -> Result<()> {
    if order > fam.levels() {
        return Err(Error::Index(format!(
            "order {order} needs at least {order} levels, {} has {}",
            fam.name,
            fam.levels()
        )));
    }
    Ok(())
}
