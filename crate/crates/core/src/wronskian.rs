//! Wronskian determinants over the jet ring, plus the determinant identities
//! they rest on (derivative of a Wronskian, the two-Wronskian identity, and
//! Jacobi's complementary-minor theorem).
//!
//! A Wronskian of `k` functions requested at output order `m` needs every
//! seed jet to order `(k - 1) + m`: row `i` of the matrix is the `i`-fold
//! derivative, which costs `i` orders.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::potentials::JetFn;

/// Minimal commutative-ring surface needed by the division-free determinant.
pub trait DetRing: Clone {
    fn zero_like(&self) -> Self;
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_sub(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
}

impl DetRing for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl DetRing for Jet {
    fn zero_like(&self) -> Self {
        Jet::zero_like(self)
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
}

fn check_square<T>(m: &[Vec<T>]) -> Result<usize> {
    let n = m.len();
    if n == 0 || m.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput("determinant needs a nonempty square matrix".into()));
    }
    Ok(n)
}

/// Laplace expansion along the first row. Division-free.
pub fn det_expansion<R: DetRing>(m: &[Vec<R>]) -> Result<R> {
    check_square(m)?;
    Ok(expand(m))
}

fn expand<R: DetRing>(m: &[Vec<R>]) -> R {
    let n = m.len();
    match n {
        1 => m[0][0].clone(),
        2 => m[0][0].ring_mul(&m[1][1]).ring_sub(&m[0][1].ring_mul(&m[1][0])),
        _ => {
            let mut acc = m[0][0].zero_like();
            for j in 0..n {
                let term = m[0][j].ring_mul(&expand(&minor(m, 0, j)));
                acc = if j % 2 == 0 { acc.ring_add(&term) } else { acc.ring_sub(&term) };
            }
            acc
        }
    }
}

/// Matrix with row `r` and column `c` removed.
pub fn minor<T: Clone>(m: &[Vec<T>], r: usize, c: usize) -> Vec<Vec<T>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != r)
        .map(|(_, row)| {
            row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect()
        })
        .collect()
}

/// Gaussian elimination over jets with pivoting on the constant-term magnitude.
pub fn det_lu_jets(m: &[Vec<Jet>]) -> Result<Jet> {
    let n = check_square(m)?;
    let mut a: Vec<Vec<Jet>> = m.to_vec();
    let mut det = a[0][0].one_like();
    let mut negate = false;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].value().abs().total_cmp(&a[j][col].value().abs()))
            .expect("nonempty range");
        if pivot != col {
            a.swap(pivot, col);
            negate = !negate;
        }
        let p = a[col][col].clone();
        for row in col + 1..n {
            let factor = a[row][col].div(&p)?;
            for k in col..n {
                let t = &factor * &a[col][k];
                a[row][k] = &a[row][k] - &t;
            }
        }
        det = &det * &p;
    }
    Ok(if negate { -&det } else { det })
}

/// Determinant of a jet matrix: expansion for `k <= 4`, elimination above.
pub fn det_jets(m: &[Vec<Jet>]) -> Result<Jet> {
    if check_square(m)? <= 4 {
        det_expansion(m)
    } else {
        det_lu_jets(m)
    }
}

pub fn required_seed_order(k: usize, out_order: usize) -> usize {
    k - 1 + out_order
}

/// `A_ij = d^i psi_j / dx^i` as jets of order `out_order`.
pub fn wronskian_matrix(seeds: &[Jet], out_order: usize) -> Result<Vec<Vec<Jet>>> {
    let k = seeds.len();
    if k == 0 {
        return Err(Error::InvalidInput("Wronskian of an empty function list".into()));
    }
    let need = required_seed_order(k, out_order);
    let mut cols = Vec::with_capacity(k);
    for s in seeds {
        if s.order() < need {
            return Err(Error::OrderExhausted { have: s.order(), need });
        }
        let mut col = Vec::with_capacity(k);
        let mut d = s.clone();
        for i in 0..k {
            if i > 0 {
                d = d.shift()?;
            }
            col.push(d.truncate(out_order)?);
        }
        cols.push(col);
    }
    Ok((0..k).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect())
}

/// Jet of `W(psi_1, ..., psi_k)` at order `out_order` from precomputed seed jets.
pub fn wronskian_of_jets(seeds: &[Jet], out_order: usize) -> Result<Jet> {
    det_jets(&wronskian_matrix(seeds, out_order)?)
}

/// Ordered list of jet-producing functions.
#[derive(Clone)]
pub struct FunctionList {
    pub fs: Vec<JetFn>,
}

impl FunctionList {
    pub fn new(fs: Vec<JetFn>) -> Result<Self> {
        if fs.is_empty() {
            return Err(Error::InvalidInput("function list must be nonempty".into()));
        }
        Ok(FunctionList { fs })
    }

    pub fn len(&self) -> usize {
        self.fs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fs.is_empty()
    }

    pub fn jets(&self, x: f64, order: usize) -> Result<Vec<Jet>> {
        self.fs.iter().map(|f| f(x, order)).collect()
    }
}

pub fn wronskian(fs: &FunctionList, x: f64, out_order: usize) -> Result<Jet> {
    let seeds = fs.jets(x, required_seed_order(fs.len(), out_order))?;
    wronskian_of_jets(&seeds, out_order)
}

/// Both sides of an identity and their relative gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

impl IdentityReport {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        IdentityReport { lhs, rhs, gap: relative_gap(lhs, rhs) }
    }
}

/// `|l - r| / max(|l|, |r|, 1e-300)`
pub fn relative_gap(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1e-300)
}

/// `W_n'` against the determinant whose last row holds `n`-th derivatives.
pub fn wronskian_derivative_check(fs: &FunctionList, x: f64) -> Result<IdentityReport> {
    let n = fs.len();
    let seeds = fs.jets(x, n)?;
    let w = wronskian_of_jets(&seeds, 1)?;
    let lhs = w.derivative(1).expect("order-1 jet");

    let mut bumped: Vec<Vec<f64>> = (0..n)
        .map(|i| seeds.iter().map(|s| s.derivative(i).expect("seed order n")).collect())
        .collect();
    bumped[n - 1] = seeds.iter().map(|s| s.derivative(n).expect("seed order n")).collect();
    let rhs = det_expansion(&bumped)?;
    Ok(IdentityReport::new(lhs, rhs))
}

/// `W(W_n, W_{n-1,s}) = W_{n,s} W_{n-1}` for seeds `psi_1..psi_n` and extra `psi_s`.
pub fn two_wronskian_identity_check(seeds: &FunctionList, s: &JetFn, x: f64) -> Result<IdentityReport> {
    let n = seeds.len();
    if n < 2 {
        return Err(Error::InvalidInput("two-Wronskian identity needs n >= 2".into()));
    }
    // W_{n,s} at order 0 needs seed order n; W_n at order 1 needs n as well.
    let mut jets = seeds.jets(x, n)?;
    jets.push(s(x, n)?);

    let w_n = wronskian_of_jets(&jets[..n], 1)?;
    let mut lower_s: Vec<Jet> = jets[..n - 1].to_vec();
    lower_s.push(jets[n].clone());
    let w_lower_s = wronskian_of_jets(&lower_s, 1)?;
    let lhs = wronskian_of_jets(&[w_n, w_lower_s], 0)?.value();

    let w_ns = wronskian_of_jets(&jets, 0)?.value();
    let w_lower = wronskian_of_jets(&jets[..n - 1], 0)?.value();
    Ok(IdentityReport::new(lhs, w_ns * w_lower))
}

/// Retained rows and columns of a minor, 0-based and strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorSelection {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorSelection {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        let increasing = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        if rows.len() != cols.len() || rows.is_empty() || !increasing(&rows) || !increasing(&cols) {
            return Err(Error::InvalidInput(
                "minor selection needs equal-length, nonempty, strictly increasing indices".into(),
            ));
        }
        Ok(MinorSelection { rows, cols })
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    fn check_bounds(&self, n: usize) -> Result<()> {
        if self.rows.iter().chain(&self.cols).any(|&i| i >= n) || self.order() >= n {
            return Err(Error::InvalidInput(format!(
                "selection {:?}/{:?} does not fit a proper minor of a {n}x{n} matrix",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    /// Parity of the 1-based index sum (same as the 0-based one, since the
    /// shift adds `2r`).
    pub fn sign(&self) -> f64 {
        let s: usize = self.rows.iter().chain(&self.cols).sum();
        if s.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

fn submatrix<T: Clone>(m: &[Vec<T>], rows: &[usize], cols: &[usize]) -> Vec<Vec<T>> {
    rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect()).collect()
}

fn complement(n: usize, idx: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !idx.contains(i)).collect()
}

/// `Delta_ij = (-1)^(i+j) det(minor(A, i, j))`
pub fn cofactor_matrix(a: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = check_square(a)?;
    if n == 1 {
        return Ok(vec![vec![1.0]]);
    }
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = expand(&minor(a, i, j));
                    if (i + j) % 2 == 0 {
                        d
                    } else {
                        -d
                    }
                })
                .collect()
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiReport {
    /// Minor of the cofactor matrix at the selection.
    pub cofactor_minor: f64,
    /// `|A|^(r-1) (-1)^(sum i + sum k) M_r^c`
    pub rhs: f64,
    pub gap: f64,
}

/// Jacobi's theorem: minor of the cofactor matrix versus the signed
/// complementary minor of `A` scaled by `|A|^(r-1)`.
pub fn jacobi_check(a: &[Vec<f64>], sel: &MinorSelection) -> Result<JacobiReport> {
    let n = check_square(a)?;
    sel.check_bounds(n)?;
    let delta = cofactor_matrix(a)?;
    let lhs = expand(&submatrix(&delta, &sel.rows, &sel.cols));
    let comp = submatrix(a, &complement(n, &sel.rows), &complement(n, &sel.cols));
    let det_a = expand(a);
    let rhs = det_a.powi(sel.order() as i32 - 1) * sel.sign() * expand(&comp);
    Ok(JacobiReport { cofactor_minor: lhs, rhs, gap: relative_gap(lhs, rhs) })
}
