//! Exact finite-length validation oracle: the ensemble-average enumerator
//! E[A_w] at a concrete block length, by big-integer polynomial convolution
//! and exact rational accumulation.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::ensemble::Ensemble;

/// Largest supported edge count; the oracle is a validation path, not a
/// production one.
pub const MAX_EDGES: u64 = 512;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("n = {n} is inadmissible: {what} = {value} is not an integer (minimal admissible n: {hint})")]
    Integrality {
        n: u64,
        what: String,
        value: f64,
        hint: String,
    },
    #[error("edge count {edges} exceeds the oracle bound {MAX_EDGES}")]
    TooLarge { edges: u64 },
    #[error("weight {w} outside 0..={max}")]
    WeightOutOfRange { w: usize, max: usize },
}

/// A concrete instantiation of the ensemble at block length n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteInstance {
    /// Variable node count.
    pub n: u64,
    /// Check node count.
    pub m: u64,
    /// Edge count.
    pub edges: u64,
    /// Codeword length.
    pub block_length: u64,
    /// Variable nodes per type.
    pub vn_counts: Vec<u64>,
    /// Check nodes per type.
    pub cn_counts: Vec<u64>,
}

fn round_integral(value: f64) -> Option<u64> {
    let r = value.round();
    ((value - r).abs() <= 1e-9 * value.abs().max(1.0) && r >= 0.0).then_some(r as u64)
}

impl FiniteInstance {
    /// Validates that every type count is integral at block length n.
    pub fn new(e: &Ensemble, n: u64) -> Result<Self, OracleError> {
        let hint = || {
            e.minimal_admissible_n(100_000)
                .map(|n| n.to_string())
                .unwrap_or_else(|_| "none below 100000".into())
        };
        let err = |what: String, value: f64| OracleError::Integrality {
            n,
            what,
            value,
            hint: hint(),
        };
        let nf = n as f64;
        let m = round_integral(e.cn_ratio * nf)
            .ok_or_else(|| err("check node count".into(), e.cn_ratio * nf))?;
        let edges_f = nf * e.edge_ratio;
        let mut vn_counts = Vec::with_capacity(e.vn_types.len());
        for t in &e.vn_types {
            let c = round_integral(t.delta * nf)
                .ok_or_else(|| err(format!("count of variable type '{}'", t.name), t.delta * nf))?;
            vn_counts.push(c);
        }
        let mut cn_counts = Vec::with_capacity(e.cn_types.len());
        for t in &e.cn_types {
            let c = round_integral(t.gamma * m as f64)
                .ok_or_else(|| err(format!("count of check type '{}'", t.name), t.gamma * m as f64))?;
            cn_counts.push(c);
        }
        let edges: u64 = vn_counts
            .iter()
            .zip(&e.vn_types)
            .map(|(c, t)| c * t.q as u64)
            .sum();
        let edges_cn: u64 = cn_counts
            .iter()
            .zip(&e.cn_types)
            .map(|(c, t)| c * t.s as u64)
            .sum();
        if edges != edges_cn || round_integral(edges_f) != Some(edges) {
            return Err(err("edge count".into(), edges_f));
        }
        if edges > MAX_EDGES {
            return Err(OracleError::TooLarge { edges });
        }
        let block_length: u64 = vn_counts
            .iter()
            .zip(&e.vn_types)
            .map(|(c, t)| c * t.k as u64)
            .sum();
        Ok(Self {
            n,
            m,
            edges,
            block_length,
            vn_counts,
            cn_counts,
        })
    }
}

fn big_binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Multiplies a dense univariate accumulator by small factor coefficients.
fn mul_univariate(acc: &[BigUint], factor: &[u64]) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); acc.len() + factor.len() - 1];
    for (i, a) in acc.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, &f) in factor.iter().enumerate() {
            if f != 0 {
                out[i + j] += a * f;
            }
        }
    }
    out
}

/// Multiplies a dense bivariate accumulator by small factor coefficients.
fn mul_bivariate(acc: &[Vec<BigUint>], factor: &[Vec<u64>]) -> Vec<Vec<BigUint>> {
    let rows = acc.len() + factor.len() - 1;
    let cols = acc[0].len() + factor[0].len() - 1;
    let mut out = vec![vec![BigUint::zero(); cols]; rows];
    for (i, row) in acc.iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (fi, frow) in factor.iter().enumerate() {
                for (fj, &f) in frow.iter().enumerate() {
                    if f != 0 {
                        out[i + fi][j + fj] += a * f;
                    }
                }
            }
        }
    }
    out
}

/// The exact full weight profile E[A_w] for w = 0..=N.
///
/// E[A_w] is the sum over edge weights v of the check-valid assignment
/// count at weight v times the number of variable-side splits generating
/// (w, v), divided by the ways to place v ones on the edges.
pub fn expected_profile(e: &Ensemble, inst: &FiniteInstance) -> Vec<BigRational> {
    // Check side: coefficient v of the product of check enumerators.
    let mut check_poly = vec![BigUint::one()];
    for (t, &count) in e.cn_types.iter().zip(&inst.cn_counts) {
        for _ in 0..count {
            check_poly = mul_univariate(&check_poly, t.enumerator.coeffs());
        }
    }
    // Variable side: full bivariate product over all variable nodes.
    let mut var_poly = vec![vec![BigUint::one()]];
    for (t, &count) in e.vn_types.iter().zip(&inst.vn_counts) {
        let factor: Vec<Vec<u64>> = t.enumerator.coeffs().to_vec();
        for _ in 0..count {
            var_poly = mul_bivariate(&var_poly, &factor);
        }
    }

    let denoms: Vec<BigUint> = (0..var_poly[0].len())
        .map(|v| big_binomial(inst.edges, v as u64))
        .collect();
    var_poly
        .iter()
        .map(|row| {
            let mut acc = BigRational::zero();
            for (v, b) in row.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let nc = check_poly.get(v).cloned().unwrap_or_else(BigUint::zero);
                if nc.is_zero() {
                    continue;
                }
                acc += BigRational::new((nc * b).into(), denoms[v].clone().into());
            }
            acc
        })
        .collect()
}

/// The exact expected number of codewords of one weight.
pub fn exact_expected_enumerator(
    e: &Ensemble,
    inst: &FiniteInstance,
    w: usize,
) -> Result<BigRational, OracleError> {
    let profile = expected_profile(e, inst);
    profile
        .get(w)
        .cloned()
        .ok_or(OracleError::WeightOutOfRange {
            w,
            max: inst.block_length as usize,
        })
    // The full profile is recomputed per call; batch callers should use
    // expected_profile directly.
}

/// Expected total codeword count, accumulated independently of the
/// per-weight profile (marginalizes the variable side before convolving).
pub fn expected_total(e: &Ensemble, inst: &FiniteInstance) -> BigRational {
    let mut check_poly = vec![BigUint::one()];
    for (t, &count) in e.cn_types.iter().zip(&inst.cn_counts) {
        for _ in 0..count {
            check_poly = mul_univariate(&check_poly, t.enumerator.coeffs());
        }
    }
    let mut var_marginal = vec![BigUint::one()];
    for (t, &count) in e.vn_types.iter().zip(&inst.vn_counts) {
        let factor = t.enumerator.output_marginal();
        for _ in 0..count {
            var_marginal = mul_univariate(&var_marginal, factor.coeffs());
        }
    }
    let mut acc = BigRational::zero();
    for (v, b) in var_marginal.iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        let nc = check_poly.get(v).cloned().unwrap_or_else(BigUint::zero);
        if nc.is_zero() {
            continue;
        }
        acc += BigRational::new(
            (nc * b).into(),
            big_binomial(inst.edges, v as u64).into(),
        );
    }
    acc
}

/// Natural log of a positive big rational without overflowing f64.
pub fn ln_rational(x: &BigRational) -> f64 {
    ln_biguint(x.numer().magnitude()) - ln_biguint(x.denom().magnitude())
}

fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// One row of the empirical convergence table.
#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalPoint {
    pub n: u64,
    /// The weight round(alpha n) requested.
    pub requested_w: usize,
    /// The admissible weight actually used, when one exists.
    pub used_w: Option<usize>,
    /// (1/n) log E[A_w], when the expectation is positive.
    pub value: Option<f64>,
}

/// Finite-length growth exponents (1/n) log E[A_w] at w closest to
/// alpha n, for each instance.
///
/// When the requested weight has zero expectation the nearest weight with
/// positive expectation is substituted (ties toward the smaller weight) and
/// reported; when none exists the row is marked excluded.
pub fn empirical_growth(
    e: &Ensemble,
    instances: &[FiniteInstance],
    alpha: f64,
) -> Vec<EmpiricalPoint> {
    instances
        .iter()
        .map(|inst| {
            let profile = expected_profile(e, inst);
            let requested = (alpha * inst.n as f64).round() as usize;
            let requested = requested.min(profile.len() - 1);
            let used = nearest_positive(&profile, requested);
            let value = used.map(|w| ln_rational(&profile[w]) / inst.n as f64);
            EmpiricalPoint {
                n: inst.n,
                requested_w: requested,
                used_w: used,
                value,
            }
        })
        .collect()
}

fn nearest_positive(profile: &[BigRational], w: usize) -> Option<usize> {
    if !profile[w].is_zero() {
        return Some(w);
    }
    for d in 1..profile.len() {
        if w >= d && !profile[w - d].is_zero() {
            return Some(w - d);
        }
        if w + d < profile.len() && !profile[w + d].is_zero() {
            return Some(w + d);
        }
    }
    None
}
