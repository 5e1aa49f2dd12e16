//! Grids, Schrödinger residuals and proportionality-up-to-a-constant.
//!
//! All reductions run in grid order so repeated runs are bitwise identical.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::potentials::{JetFn, PotentialFamily};
use crate::wronskian::{wronskian, FunctionList};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    pub points: Vec<f64>,
    /// Removed open intervals `(lo, hi)`.
    pub exclusions: Vec<(f64, f64)>,
}

impl Grid {
    pub fn uniform(min: f64, max: f64, count: usize) -> Result<Grid> {
        if count < 2 {
            return Err(Error::InvalidInput(format!("grid needs at least 2 points, got {count}")));
        }
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::InvalidInput(format!("bad grid range [{min}, {max}]")));
        }
        let step = (max - min) / (count - 1) as f64;
        let mut points: Vec<f64> = (0..count).map(|i| min + step * i as f64).collect();
        points[count - 1] = max;
        Ok(Grid { points, exclusions: Vec::new() })
    }

    /// Drops every point inside one of `intervals`.
    pub fn exclude(mut self, intervals: &[(f64, f64)]) -> Result<Grid> {
        self.exclusions.extend_from_slice(intervals);
        let excl = self.exclusions.clone();
        self.points.retain(|&x| !excl.iter().any(|&(lo, hi)| x > lo && x < hi));
        if self.points.is_empty() {
            return Err(Error::EmptyGrid);
        }
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Evaluates `f` on every grid point, collecting all singular points
/// instead of stopping at the first.
pub fn sample_jets(f: &JetFn, grid: &Grid, order: usize) -> Result<Vec<Jet>> {
    let mut out = Vec::with_capacity(grid.len());
    let mut bad = Vec::new();
    for &x in &grid.points {
        match f(x, order) {
            Ok(j) => out.push(j),
            Err(e) if e.is_singularity() => bad.push(x),
            Err(e) => return Err(e),
        }
    }
    if bad.is_empty() {
        Ok(out)
    } else {
        Err(Error::Singularities { count: bad.len(), first: bad[0], points: bad })
    }
}

pub fn sample_values(f: &JetFn, grid: &Grid) -> Result<Vec<f64>> {
    Ok(sample_jets(f, grid, 0)?.iter().map(Jet::value).collect())
}

/// Grid-global comparison of two sampled functions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    /// `max |a - b| / max(max|a|, max|b|, 1e-300)`
    pub max_gap: f64,
    pub max_abs: f64,
    pub worst_x: f64,
    pub per_point: Vec<f64>,
}

pub fn grid_gap(grid: &Grid, a: &[f64], b: &[f64]) -> GapReport {
    assert_eq!(a.len(), b.len());
    assert_eq!(a.len(), grid.len());
    let norm = a
        .iter()
        .chain(b)
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(1e-300);
    let per_point: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - y).abs() / norm).collect();
    let (mut worst, mut max_gap) = (0, 0.0);
    for (i, &g) in per_point.iter().enumerate() {
        if g > max_gap {
            max_gap = g;
            worst = i;
        }
    }
    GapReport { max_gap, max_abs: max_gap * norm, worst_x: grid.points[worst], per_point }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProportionalityReport {
    /// Least-squares `c` in `f ~ c g`.
    pub constant: f64,
    /// `max |f - c g| / max |f|`
    pub deviation: f64,
    pub normalizer: f64,
}

pub fn proportionality(f: &[f64], g: &[f64]) -> Result<ProportionalityReport> {
    if f.is_empty() || f.len() != g.len() {
        return Err(Error::InvalidInput(format!(
            "proportionality needs equal nonempty samples, got {} and {}",
            f.len(),
            g.len()
        )));
    }
    let gmax = g.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if gmax < 1e-300 {
        return Err(Error::DegenerateComparand(gmax));
    }
    let (mut fg, mut gg) = (0.0, 0.0);
    for (a, b) in f.iter().zip(g) {
        fg += a * b;
        gg += b * b;
    }
    let c = fg / gg;
    let fmax = f.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-300);
    let dev = f.iter().zip(g).fold(0.0_f64, |m, (a, b)| m.max((a - c * b).abs()));
    Ok(ProportionalityReport { constant: c, deviation: dev / fmax, normalizer: fmax })
}

/// Per-sample `|f - c g| / normalizer` for a fitted report.
pub fn proportionality_residuals(f: &[f64], g: &[f64], r: &ProportionalityReport) -> Vec<f64> {
    f.iter().zip(g).map(|(a, b)| (a - r.constant * b).abs() / r.normalizer).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    /// `max |-psi'' + u psi - lambda psi| / max(max|lambda psi|, max|u psi|, 1e-300)`
    pub max_residual: f64,
    pub normalizer: f64,
    pub worst_x: f64,
}

pub fn schrodinger_residual(u: &JetFn, psi: &JetFn, lambda: f64, grid: &Grid) -> Result<ResidualReport> {
    let us = sample_values(u, grid)?;
    let ps = sample_jets(psi, grid, 2)?;
    let (mut lam_max, mut u_max) = (0.0_f64, 0.0_f64);
    let mut raw = Vec::with_capacity(grid.len());
    for (uv, p) in us.iter().zip(&ps) {
        let v = p.value();
        lam_max = lam_max.max((lambda * v).abs());
        u_max = u_max.max((uv * v).abs());
        raw.push((-p.derivative(2).expect("order-2 jet") + uv * v - lambda * v).abs());
    }
    let norm = lam_max.max(u_max).max(1e-300);
    let (mut worst, mut max_r) = (0, 0.0);
    for (i, &r) in raw.iter().enumerate() {
        if r > max_r {
            max_r = r;
            worst = i;
        }
    }
    Ok(ResidualReport { max_residual: max_r / norm, normalizer: norm, worst_x: grid.points[worst] })
}

/// Requested grid: uniform points plus optional node scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub node_scan: bool,
}

/// Half-width of the Ginocchio band around `y = 0` (pole of `h_1`).
pub const GINOCCHIO_BAND: f64 = 0.05;

/// Builds a grid for transforms of order up to `n`. The Ginocchio band
/// `|y| < band` is always removed; with `node_scan`, sign changes or
/// singular evaluations of `W_1..W_n` found at ten times the resolution are
/// carved out with a half-width of two grid spacings.
pub fn build_grid(fam: &PotentialFamily, n: usize, spec: GridSpec, band: f64) -> Result<Grid> {
    let mut grid = Grid::uniform(spec.min, spec.max, spec.count)?;
    let spacing = (spec.max - spec.min) / (spec.count - 1) as f64;
    let mut exclusions = Vec::new();

    if let crate::potentials::FamilyParams::Ginocchio(p) = fam.params {
        if band > 0.0 {
            let half = crate::potentials::ginocchio_x_of_y(p, band);
            exclusions.push((-half, half));
        }
    }

    if spec.node_scan && n > 0 {
        let fine = Grid::uniform(spec.min, spec.max, 10 * (spec.count - 1) + 1)?;
        let seeds = fam.eigenpairs.iter().map(|e| e.wavefunction.clone()).collect::<Vec<_>>();
        for k in 1..=n.min(seeds.len()) {
            let fs = FunctionList::new(seeds[..k].to_vec())?;
            let mut prev: Option<(f64, f64)> = None;
            for &x in &fine.points {
                match wronskian(&fs, x, 0) {
                    Ok(w) => {
                        let v = w.value();
                        if let Some((px, pv)) = prev {
                            if v == 0.0 || pv.signum() != v.signum() {
                                let mid = 0.5 * (px + x);
                                exclusions.push((mid - 2.0 * spacing, mid + 2.0 * spacing));
                            }
                        }
                        prev = Some((x, v));
                    }
                    Err(e) if e.is_singularity() => {
                        exclusions.push((x - 2.0 * spacing, x + 2.0 * spacing));
                        prev = None;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    if !exclusions.is_empty() {
        grid = grid.exclude(&exclusions)?;
    }
    Ok(grid)
}
