//! Growth-behavior classification from the distance-2 node types and the
//! small-weight expansion of G(alpha), including closed-form approximations
//! of the critical exponent ratio.

use serde::Serialize;
use thiserror::Error;

use crate::ensemble::Ensemble;
use crate::gf2codes::EnumeratorKind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SmallAlphaError {
    #[error("the alpha log alpha coefficient vanishes (T = 0): expansion unavailable")]
    TZero,
    #[error("shortcut approximation {name} = {shortcut} disagrees with the general form {general}")]
    ShortcutMismatch {
        name: &'static str,
        shortcut: f64,
        general: f64,
    },
}

/// Growth behavior of the spectrum near zero weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthClass {
    /// The critical exponent ratio is positive.
    Good,
    /// The spectral shape is positive arbitrarily close to zero.
    Bad,
    /// The deciding product equals 1 within tolerance; not resolved.
    Boundary,
}

/// Classification result with the distance-2 parameters that decide it.
#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub class: GrowthClass,
    /// Check-side distance-2 parameter (smallest-distance types).
    pub c: f64,
    /// Variable-side distance-2 parameter; None without distance-2 types.
    pub v: Option<f64>,
    pub has_distance2_cns: bool,
    pub has_distance2_vns: bool,
    /// Marks classification of stopping-set enumerators, which extends the
    /// weight-spectrum criterion beyond its stated scope.
    pub extension: bool,
}

fn min_cn_distance(e: &Ensemble) -> usize {
    e.cn_types
        .iter()
        .map(|t| t.enumerator.min_weight().unwrap_or(usize::MAX))
        .min()
        .unwrap()
}

fn min_vn_distance(e: &Ensemble) -> usize {
    e.vn_types
        .iter()
        .map(|t| t.enumerator.min_output_weight().unwrap_or(usize::MAX))
        .min()
        .unwrap()
}

/// The check-side parameter C = r * sum of rho A_r / s over the types
/// achieving the smallest minimum distance r.
fn c_parameter(e: &Ensemble) -> f64 {
    let r = min_cn_distance(e);
    r as f64
        * e.cn_types
            .iter()
            .filter(|t| t.enumerator.min_weight() == Some(r))
            .map(|t| t.rho * t.enumerator.coeff(r) as f64 / t.s as f64)
            .sum::<f64>()
}

/// The variable-side parameter V = 2 * sum of lambda B_2 / q over the
/// distance-2 types, with B_2 the total mass at output weight 2.
fn v_parameter(e: &Ensemble) -> Option<f64> {
    let types: Vec<_> = e
        .vn_types
        .iter()
        .filter(|t| t.enumerator.min_output_weight() == Some(2))
        .collect();
    if types.is_empty() {
        return None;
    }
    Some(
        2.0 * types
            .iter()
            .map(|t| {
                let b2: u64 = t.enumerator.coeffs().iter().map(|row| row[2]).sum();
                t.lambda * b2 as f64 / t.q as f64
            })
            .sum::<f64>(),
    )
}

/// Decides the growth behavior: good when either side lacks distance-2
/// types, otherwise by comparing C times V against 1.
pub fn classify_growth(e: &Ensemble) -> Classification {
    let has2cn = min_cn_distance(e) == 2;
    let has2vn = min_vn_distance(e) == 2;
    let c = c_parameter(e);
    let v = v_parameter(e);
    let class = if !has2cn || !has2vn {
        GrowthClass::Good
    } else {
        let product = c * v.unwrap();
        if (product - 1.0).abs() <= 1e-12 {
            GrowthClass::Boundary
        } else if product < 1.0 {
            GrowthClass::Good
        } else {
            GrowthClass::Bad
        }
    };
    Classification {
        class,
        c,
        v,
        has_distance2_cns: has2cn,
        has_distance2_vns: has2vn,
        extension: e.kind != EnumeratorKind::Weight,
    }
}

/// Small-weight expansion data of the spectral shape.
#[derive(Debug, Clone, Serialize)]
pub struct SmallAlphaData {
    /// Smallest check minimum distance r and its exponent psi = r/(r-1).
    pub r: usize,
    pub psi: f64,
    /// Smallest variable minimum distance.
    pub p: usize,
    pub c: f64,
    /// Coefficient of the alpha log alpha term, min over the variable
    /// support of (j - psi)/i; zero means the expansion is unavailable.
    pub t_exponent: f64,
    /// Indices of variable types achieving the minimum, with their
    /// achieving (input weight, output weight) pairs.
    pub achieving: Vec<(usize, Vec<(usize, usize)>)>,
    /// Power-series coefficients (exponent i, coefficient) of the two
    /// expansion polynomials.
    pub q1: Vec<(usize, f64)>,
    pub q2: Vec<(usize, f64)>,
    /// The unique positive root of Q1(x) = 1.
    pub q1_inv_1: f64,
    pub int_lambda: f64,
}

fn eval_poly(terms: &[(usize, f64)], x: f64) -> f64 {
    terms
        .iter()
        .map(|&(i, c)| c * x.powi(i as i32))
        .sum::<f64>()
}

/// Computes the expansion data. The polynomial pieces are defined only when
/// the alpha log alpha coefficient is positive.
pub fn small_alpha_data(e: &Ensemble) -> Result<SmallAlphaData, SmallAlphaError> {
    let r = min_cn_distance(e);
    let p = min_vn_distance(e);
    let psi = r as f64 / (r as f64 - 1.0);
    let c = c_parameter(e);

    // T = min over all nonzero support pairs (i, j) of (j - psi)/i.
    let mut t_exponent = f64::INFINITY;
    for t in &e.vn_types {
        for (i, j) in t.enumerator.support() {
            if (i, j) == (0, 0) {
                continue;
            }
            t_exponent = t_exponent.min((j as f64 - psi) / i as f64);
        }
    }
    let mut achieving = Vec::new();
    for (idx, t) in e.vn_types.iter().enumerate() {
        let pairs: Vec<(usize, usize)> = t
            .enumerator
            .support()
            .into_iter()
            .filter(|&(i, j)| {
                (i, j) != (0, 0) && ((j as f64 - psi) / i as f64 - t_exponent).abs() < 1e-12
            })
            .collect();
        if !pairs.is_empty() {
            achieving.push((idx, pairs));
        }
    }
    if t_exponent <= 0.0 {
        return Ok(SmallAlphaData {
            r,
            psi,
            p,
            c,
            t_exponent,
            achieving,
            q1: Vec::new(),
            q2: Vec::new(),
            q1_inv_1: f64::NAN,
            int_lambda: e.int_lambda,
        });
    }

    let scale_base = e.int_lambda / std::f64::consts::E;
    let mut q1: Vec<(usize, f64)> = Vec::new();
    let mut q2: Vec<(usize, f64)> = Vec::new();
    for &(idx, ref pairs) in &achieving {
        let t = &e.vn_types[idx];
        for &(i, j) in pairs {
            let b = t.enumerator.coeff(i, j) as f64;
            let coeff = (t.lambda / t.q as f64)
                * b
                * c.powf(j as f64 / r as f64)
                * scale_base.powf(i as f64 * t_exponent / psi);
            push_term(&mut q1, i, j as f64 * coeff);
            push_term(&mut q2, i, i as f64 * coeff);
        }
    }
    q1.sort_by_key(|&(i, _)| i);
    q2.sort_by_key(|&(i, _)| i);

    // Q1 is increasing from Q1(0) = 0, so the root of Q1 = 1 brackets.
    let mut hi = 1.0;
    while eval_poly(&q1, hi) < 1.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if eval_poly(&q1, mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q1_inv_1 = 0.5 * (lo + hi);

    Ok(SmallAlphaData {
        r,
        psi,
        p,
        c,
        t_exponent,
        achieving,
        q1,
        q2,
        q1_inv_1,
        int_lambda: e.int_lambda,
    })
}

fn push_term(terms: &mut Vec<(usize, f64)>, i: usize, coeff: f64) {
    if let Some(slot) = terms.iter_mut().find(|(e, _)| *e == i) {
        slot.1 += coeff;
    } else {
        terms.push((i, coeff));
    }
}

/// Two-term small-weight expansion of the spectral shape (drops o(alpha)).
pub fn small_alpha_growth(d: &SmallAlphaData, alpha: f64) -> Result<f64, SmallAlphaError> {
    if d.t_exponent <= 0.0 {
        return Err(SmallAlphaError::TZero);
    }
    let tp = d.t_exponent / d.psi;
    let x1 = d.q1_inv_1;
    Ok(tp * alpha * alpha.ln() + alpha * ((1.0 / x1).ln() + tp * (1.0 / eval_poly(&d.q2, x1)).ln()))
}

/// Closed-form approximations of the critical exponent ratio.
#[derive(Debug, Clone, Serialize)]
pub struct AlphaStarApprox {
    /// The general root-based approximation.
    pub general: f64,
    /// Specialization when every variable node is a repetition code.
    pub gldpc: Option<f64>,
    /// Specialization when additionally all repetition lengths agree.
    pub variable_regular: Option<f64>,
    /// Specialization for regular LDPC ensembles of variable degree >= 3.
    pub regular_ldpc: Option<f64>,
}

/// Evaluates the general approximation and every matching specialization,
/// verifying that each reduction agrees with the general form.
pub fn alpha_star_approx(
    e: &Ensemble,
    d: &SmallAlphaData,
) -> Result<AlphaStarApprox, SmallAlphaError> {
    if d.t_exponent <= 0.0 {
        return Err(SmallAlphaError::TZero);
    }
    let x1 = d.q1_inv_1;
    let general = x1.powf(d.psi / d.t_exponent) * eval_poly(&d.q2, x1);

    let all_repetition = e.vn_types.iter().all(|t| t.k == 1 && t.p == t.q);
    let (p, r, c) = (d.p as f64, d.r as f64, d.c);
    let denom = p * r - p - r;

    let mut gldpc = None;
    let mut variable_regular = None;
    let mut regular_ldpc = None;
    if all_repetition && denom > 0.0 {
        let lambda_p: f64 = e
            .vn_types
            .iter()
            .filter(|t| t.q == d.p)
            .map(|t| t.lambda)
            .sum();
        let value = lambda_p.powf(-r / denom) * c.powf(-p / denom) * std::f64::consts::E
            / (p * e.int_lambda);
        check_shortcut("repetition-variable", value, general)?;
        gldpc = Some(value);

        if e.vn_types.iter().all(|t| t.q == e.vn_types[0].q) {
            let value = c.powf(-p / denom) * std::f64::consts::E;
            check_shortcut("variable-regular", value, general)?;
            variable_regular = Some(value);

            let single_spc_cn = e.cn_types.len() == 1
                && e.cn_types[0].h + 1 == e.cn_types[0].s
                && e.cn_types[0].enumerator.min_weight() == Some(2);
            if single_spc_cn && d.p >= 3 {
                let dc = e.cn_types[0].s as f64;
                let value = std::f64::consts::E / (dc - 1.0).powf(1.0 / (1.0 - 2.0 / p));
                check_shortcut("regular-ldpc", value, general)?;
                regular_ldpc = Some(value);
            }
        }
    }

    Ok(AlphaStarApprox {
        general,
        gldpc,
        variable_regular,
        regular_ldpc,
    })
}

fn check_shortcut(name: &'static str, shortcut: f64, general: f64) -> Result<(), SmallAlphaError> {
    if (shortcut - general).abs() > 1e-12 * general.abs().max(1.0) {
        return Err(SmallAlphaError::ShortcutMismatch {
            name,
            shortcut,
            general,
        });
    }
    Ok(())
}
