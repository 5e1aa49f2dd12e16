use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use super::{jet_fn, EigenPair, FamilyParams, JetFn, ParameterFlow, PotentialFamily};
use crate::error::{Error, Result};
use crate::jets::Jet;

/// `u(x; A) = 2[A^2 - A(A + alpha/sqrt2) sech^2(alpha x)]`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorseParams {
    #[serde(rename = "A")]
    pub a: f64,
    pub alpha: f64,
}

/// `A_n = A - n alpha / sqrt2`
pub fn morse_a_n(p: MorseParams, n: usize) -> f64 {
    p.a - n as f64 * p.alpha / SQRT_2
}

/// `lambda_n = 2(A^2 - A_{n-1}^2)`, labels starting at 1.
pub fn morse_eigenvalue(p: MorseParams, n: usize) -> f64 {
    assert!(n >= 1, "Morse labels start at 1");
    let an = morse_a_n(p, n - 1);
    2.0 * (p.a * p.a - an * an)
}

fn is_bound(p: MorseParams, level_label: usize) -> bool {
    morse_a_n(p, level_label - 1) > 1e-12 * p.a.abs().max(p.alpha.abs())
}

fn sech_alpha(alpha: f64, x: f64, order: usize) -> Jet {
    Jet::variable(x, order).scale_by(alpha).sech()
}

fn ground_state(p: MorseParams, x: f64, order: usize) -> Result<Jet> {
    sech_alpha(p.alpha, x, order).powf(SQRT_2 * p.a / p.alpha)
}

/// Potential evaluator alone, with no check that any level is bound.
pub fn morse_potential(p: MorseParams) -> JetFn {
    jet_fn(move |x, k| {
        let s = sech_alpha(p.alpha, x, k);
        let s2 = &s * &s;
        let coupling = p.a * (p.a + p.alpha / SQRT_2);
        Ok(s2.scale_by(-2.0 * coupling).add_scalar(2.0 * p.a * p.a))
    })
}

pub fn morse_family(p: MorseParams, levels: usize) -> Result<PotentialFamily> {
    if !(p.a > 0.0 && p.alpha > 0.0 && p.a.is_finite() && p.alpha.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "Morse needs A > 0 and alpha > 0, got A = {}, alpha = {}",
            p.a, p.alpha
        )));
    }
    if levels == 0 || levels > 3 {
        return Err(Error::Unsupported(format!(
            "Morse family provides 1..=3 closed-form levels, asked for {levels}"
        )));
    }
    if !is_bound(p, levels) {
        return Err(Error::UnboundLevel {
            level: levels,
            reason: format!("A_{} = {} <= 0", levels - 1, morse_a_n(p, levels - 1)),
        });
    }

    let potential = morse_potential(p);

    let psi1 = jet_fn(move |x, k| ground_state(p, x, k));
    let psi2 = jet_fn(move |x, k| {
        let sh = Jet::variable(x, k).scale_by(p.alpha).sinh();
        Ok(&sh * &ground_state(p, x, k)?)
    });
    let psi3 = jet_fn(move |x, k| {
        let (sh, ch) = Jet::variable(x, k).scale_by(p.alpha).sinh_cosh();
        let ratio = (2.0 * SQRT_2 * p.a - p.alpha) / p.alpha;
        let shape = &(&sh * &sh).scale_by(ratio) - &(&ch * &ch);
        Ok(&shape * &ground_state(p, x, k)?)
    });

    let eigenpairs = [psi1, psi2, psi3]
        .into_iter()
        .take(levels)
        .enumerate()
        .map(|(i, wavefunction)| EigenPair {
            index: i + 1,
            eigenvalue: morse_eigenvalue(p, i + 1),
            wavefunction,
        })
        .collect();

    Ok(PotentialFamily {
        name: "morse",
        params: FamilyParams::Morse(p),
        potential,
        eigenpairs,
        flow: Some(morse_flow(p)),
    })
}

fn as_morse(a: &FamilyParams) -> MorseParams {
    match a {
        FamilyParams::Morse(p) => *p,
        other => panic!("Morse flow applied to {} parameters", other.family_name()),
    }
}

/// `A -> A - alpha/sqrt2` with `alpha` held fixed; `R = 2(A_prev^2 - A_next^2)`.
pub fn morse_flow(_p: MorseParams) -> ParameterFlow {
    ParameterFlow {
        map_f: |a| {
            let p = as_morse(a);
            FamilyParams::Morse(MorseParams { a: morse_a_n(p, 1), alpha: p.alpha })
        },
        remainder_r: |prev, next| {
            let (p, n) = (as_morse(prev), as_morse(next));
            2.0 * (p.a * p.a - n.a * n.a)
        },
        admissible: |a| {
            let p = as_morse(a);
            p.a > 1e-12 * p.alpha.abs()
        },
    }
}
