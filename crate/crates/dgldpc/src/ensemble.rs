//! The D-GLDPC ensemble model: variable-node and check-node types with edge
//! fractions, standing-assumption validation, and all derived scalar
//! parameters of the asymptotic analysis.

use serde::Serialize;
use thiserror::Error;

use crate::gf2codes::{
    BinaryMatrix, CodeError, EnumeratorKind, IoWeightEnumerator, WeightEnumerator,
};

/// Tolerance on the edge-fraction sums at build time.
pub const FRACTION_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnsembleError {
    #[error("{side} fractions sum to {sum}, expected 1")]
    FractionSum { side: &'static str, sum: f64 },
    #[error("{side} type {index}: edge fraction {value} outside (0, 1]")]
    FractionRange {
        side: &'static str,
        index: usize,
        value: f64,
    },
    #[error("{side} type {index}: no code given (need a generator matrix or coefficients)")]
    MissingCode { side: &'static str, index: usize },
    #[error("{side} type {index}: matrix-derived enumerator disagrees with explicit coefficients")]
    EnumeratorMismatch { side: &'static str, index: usize },
    #[error("{side} type {index}: minimum {what} weight {got} is below 2")]
    MinDistance {
        side: &'static str,
        index: usize,
        what: &'static str,
        got: usize,
    },
    #[error("check type {index}: coefficient total {total} is not a power of two, so the code dimension is undefined")]
    BadMass { index: usize, total: u64 },
    #[error("{side} type {index}: {kind} enumerator requires a generator matrix")]
    KindNeedsMatrix {
        side: &'static str,
        index: usize,
        kind: EnumeratorKind,
    },
    #[error("{side} type {index}: {source}")]
    Code {
        side: &'static str,
        index: usize,
        source: CodeError,
    },
    #[error("design rate {0} outside (0, 1)")]
    RateOutOfRange(f64),
    #[error("no admissible block length at most {limit} (type counts never all integral)")]
    NoAdmissibleLength { limit: u64 },
}

/// Input description of one variable-node type.
#[derive(Debug, Clone)]
pub struct VnSpec {
    pub name: String,
    /// Fraction of edges attached to this type.
    pub lambda: f64,
    /// Generator matrix of the local code, when available.
    pub matrix: Option<BinaryMatrix>,
    /// Explicit input-output weight coefficients `B[u][v]`, when given.
    pub io_coeffs: Option<Vec<Vec<u64>>>,
}

/// Input description of one check-node type.
#[derive(Debug, Clone)]
pub struct CnSpec {
    pub name: String,
    /// Fraction of edges attached to this type.
    pub rho: f64,
    pub matrix: Option<BinaryMatrix>,
    /// Explicit weight coefficients `A[u]`, when given.
    pub wef_coeffs: Option<Vec<u64>>,
}

/// A resolved variable-node type.
#[derive(Debug, Clone)]
pub struct VnType {
    pub name: String,
    pub lambda: f64,
    /// Fraction of variable nodes of this type.
    pub delta: f64,
    /// Local code dimension k and length q.
    pub k: usize,
    pub q: usize,
    /// Smallest nonzero codeword weight p of the local code.
    pub p: usize,
    /// Enumerator of the ensemble's kind, used by the solver.
    pub enumerator: IoWeightEnumerator,
    /// Plain weight-kind enumerator (kept for classification).
    pub weight_enumerator: IoWeightEnumerator,
    pub matrix: Option<BinaryMatrix>,
}

/// A resolved check-node type.
#[derive(Debug, Clone)]
pub struct CnType {
    pub name: String,
    pub rho: f64,
    /// Fraction of check nodes of this type.
    pub gamma: f64,
    /// Local code dimension h and length s.
    pub h: usize,
    pub s: usize,
    /// Smallest nonzero codeword weight r of the local code.
    pub r: usize,
    pub enumerator: WeightEnumerator,
    pub weight_enumerator: WeightEnumerator,
    pub matrix: Option<BinaryMatrix>,
}

/// An immutable D-GLDPC ensemble with every derived scalar of the analysis.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub kind: EnumeratorKind,
    pub vn_types: Vec<VnType>,
    pub cn_types: Vec<CnType>,
    /// Integral of the VN edge distribution: sum of lambda_t / q_t.
    pub int_lambda: f64,
    /// Integral of the CN edge distribution: sum of rho_t / s_t.
    pub int_rho: f64,
    /// Design rate R.
    pub design_rate: f64,
    /// Block-length ratio K_s = N/n.
    pub k_s: f64,
    /// Maximum normalized edge weight supportable by the check side.
    pub m_bar: f64,
    /// Supremum of the solvable weight-per-variable-node domain.
    pub alpha_max: f64,
    /// Edges per variable node, E/n = 1 / int_lambda.
    pub edge_ratio: f64,
    /// Check nodes per variable node, m/n = int_rho / int_lambda.
    pub cn_ratio: f64,
}

/// Builds an ensemble carrying enumerators of the requested kind.
///
/// Weight-kind enumerators are always computed (they define the standing
/// assumptions and the design rate); stopping kinds additionally attach the
/// requested stopping-set enumerators, which on the variable side and for
/// MAP check decoding require generator matrices.
pub fn build_ensemble(
    vns: &[VnSpec],
    cns: &[CnSpec],
    kind: EnumeratorKind,
) -> Result<Ensemble, EnsembleError> {
    let lam_sum: f64 = vns.iter().map(|v| v.lambda).sum();
    if (lam_sum - 1.0).abs() > FRACTION_SUM_TOL {
        return Err(EnsembleError::FractionSum {
            side: "variable",
            sum: lam_sum,
        });
    }
    let rho_sum: f64 = cns.iter().map(|c| c.rho).sum();
    if (rho_sum - 1.0).abs() > FRACTION_SUM_TOL {
        return Err(EnsembleError::FractionSum {
            side: "check",
            sum: rho_sum,
        });
    }

    let mut vn_types = Vec::with_capacity(vns.len());
    for (index, spec) in vns.iter().enumerate() {
        vn_types.push(resolve_vn(spec, index, kind)?);
    }
    let mut cn_types = Vec::with_capacity(cns.len());
    for (index, spec) in cns.iter().enumerate() {
        cn_types.push(resolve_cn(spec, index, kind)?);
    }

    let int_lambda: f64 = vn_types.iter().map(|t| t.lambda / t.q as f64).sum();
    let int_rho: f64 = cn_types.iter().map(|t| t.rho / t.s as f64).sum();
    for t in &mut vn_types {
        t.delta = t.lambda / (t.q as f64 * int_lambda);
    }
    for t in &mut cn_types {
        t.gamma = t.rho / (t.s as f64 * int_rho);
    }

    let k_s = vn_types
        .iter()
        .map(|t| t.lambda * t.k as f64 / t.q as f64)
        .sum::<f64>()
        / int_lambda;
    let design_rate = 1.0
        - cn_types
            .iter()
            .map(|t| t.rho * (1.0 - t.h as f64 / t.s as f64))
            .sum::<f64>()
            / vn_types
                .iter()
                .map(|t| t.lambda * t.k as f64 / t.q as f64)
                .sum::<f64>();
    if !(0.0 < design_rate && design_rate < 1.0) {
        return Err(EnsembleError::RateOutOfRange(design_rate));
    }

    let m_bar = int_rho
        * cn_types
            .iter()
            .map(|t| t.gamma * t.enumerator.max_weight() as f64)
            .sum::<f64>();
    let alpha_max = alpha_max_lp(&vn_types, m_bar / int_lambda);

    Ok(Ensemble {
        kind,
        vn_types,
        cn_types,
        int_lambda,
        int_rho,
        design_rate,
        k_s,
        m_bar,
        alpha_max,
        edge_ratio: 1.0 / int_lambda,
        cn_ratio: int_rho / int_lambda,
    })
}

fn resolve_vn(spec: &VnSpec, index: usize, kind: EnumeratorKind) -> Result<VnType, EnsembleError> {
    let side = "variable";
    if !(spec.lambda > 0.0 && spec.lambda <= 1.0) {
        return Err(EnsembleError::FractionRange {
            side,
            index,
            value: spec.lambda,
        });
    }
    let code_err = |source| EnsembleError::Code { side, index, source };

    let weight_enumerator = match (&spec.matrix, &spec.io_coeffs) {
        (Some(m), explicit) => {
            let computed = m.io_weight_enumerator().map_err(code_err)?;
            if let Some(coeffs) = explicit {
                let given = IoWeightEnumerator::from_coeffs(coeffs.clone(), EnumeratorKind::Weight)
                    .map_err(code_err)?;
                if given != computed {
                    return Err(EnsembleError::EnumeratorMismatch { side, index });
                }
            }
            computed
        }
        (None, Some(coeffs)) => {
            IoWeightEnumerator::from_coeffs(coeffs.clone(), EnumeratorKind::Weight)
                .map_err(code_err)?
        }
        (None, None) => return Err(EnsembleError::MissingCode { side, index }),
    };
    let p = weight_enumerator
        .min_output_weight()
        .ok_or(EnsembleError::MinDistance {
            side,
            index,
            what: "codeword",
            got: 0,
        })?;
    if p < 2 {
        return Err(EnsembleError::MinDistance {
            side,
            index,
            what: "codeword",
            got: p,
        });
    }

    let enumerator = match kind {
        EnumeratorKind::Weight => weight_enumerator.clone(),
        // The variable side of stopping-set analysis always uses MAP
        // erasure semantics.
        EnumeratorKind::StoppingBd | EnumeratorKind::StoppingMap => match &spec.matrix {
            Some(m) => m.io_map_ssef().map_err(code_err)?,
            None => {
                return Err(EnsembleError::KindNeedsMatrix {
                    side,
                    index,
                    kind: EnumeratorKind::StoppingMap,
                })
            }
        },
    };

    Ok(VnType {
        name: spec.name.clone(),
        lambda: spec.lambda,
        delta: 0.0,
        k: weight_enumerator.in_length(),
        q: weight_enumerator.out_length(),
        p,
        enumerator,
        weight_enumerator,
        matrix: spec.matrix.clone(),
    })
}

fn resolve_cn(spec: &CnSpec, index: usize, kind: EnumeratorKind) -> Result<CnType, EnsembleError> {
    let side = "check";
    if !(spec.rho > 0.0 && spec.rho <= 1.0) {
        return Err(EnsembleError::FractionRange {
            side,
            index,
            value: spec.rho,
        });
    }
    let code_err = |source| EnsembleError::Code { side, index, source };

    let (weight_enumerator, h) = match (&spec.matrix, &spec.wef_coeffs) {
        (Some(m), explicit) => {
            let computed = m.weight_enumerator();
            if let Some(coeffs) = explicit {
                let given = WeightEnumerator::from_coeffs(coeffs.clone(), EnumeratorKind::Weight)
                    .map_err(code_err)?;
                if given != computed {
                    return Err(EnsembleError::EnumeratorMismatch { side, index });
                }
            }
            (computed, m.k())
        }
        (None, Some(coeffs)) => {
            let given = WeightEnumerator::from_coeffs(coeffs.clone(), EnumeratorKind::Weight)
                .map_err(code_err)?;
            let h = given.dimension().ok_or(EnsembleError::BadMass {
                index,
                total: given.total(),
            })? as usize;
            (given, h)
        }
        (None, None) => return Err(EnsembleError::MissingCode { side, index }),
    };
    let r = weight_enumerator
        .min_weight()
        .ok_or(EnsembleError::MinDistance {
            side,
            index,
            what: "codeword",
            got: 0,
        })?;
    if r < 2 {
        return Err(EnsembleError::MinDistance {
            side,
            index,
            what: "codeword",
            got: r,
        });
    }

    let enumerator = match kind {
        EnumeratorKind::Weight => weight_enumerator.clone(),
        EnumeratorKind::StoppingBd => weight_enumerator.bd_ssef().map_err(code_err)?,
        EnumeratorKind::StoppingMap => match &spec.matrix {
            Some(m) => m.map_ssef(),
            None => {
                return Err(EnsembleError::KindNeedsMatrix {
                    side,
                    index,
                    kind: EnumeratorKind::StoppingMap,
                })
            }
        },
    };

    Ok(CnType {
        name: spec.name.clone(),
        rho: spec.rho,
        gamma: 0.0,
        h,
        s: weight_enumerator.length(),
        r,
        enumerator,
        weight_enumerator,
        matrix: spec.matrix.clone(),
    })
}

/// Supremum of sum-of-type normalized weights subject to the check side's
/// edge-weight capacity: a fractional knapsack over the upper concave hull
/// of each type's (output weight, input weight) support.
fn alpha_max_lp(vn_types: &[VnType], edge_weight_cap: f64) -> f64 {
    let mut total_u = 0.0;
    let mut total_v = 0.0;
    // Reduction segments: (input weight lost per unit of output weight
    // freed, freeable output weight).
    let mut segments: Vec<(f64, f64)> = Vec::new();
    for t in vn_types {
        let pts: Vec<(f64, f64)> = upper_hull(
            t.enumerator
                .support()
                .into_iter()
                .map(|(u, v)| (v as f64, u as f64))
                .collect(),
        );
        // Start every type at its maximum input weight, cheapest in output
        // weight on ties.
        let peak = (0..pts.len())
            .max_by(|&a, &b| {
                (pts[a].1, -pts[a].0)
                    .partial_cmp(&(pts[b].1, -pts[b].0))
                    .unwrap()
            })
            .unwrap();
        total_u += t.delta * pts[peak].1;
        total_v += t.delta * pts[peak].0;
        for i in (1..=peak).rev() {
            let (v1, u1) = pts[i - 1];
            let (v2, u2) = pts[i];
            segments.push(((u2 - u1) / (v2 - v1), t.delta * (v2 - v1)));
        }
    }
    let mut excess = total_v - edge_weight_cap;
    if excess <= 1e-15 {
        return total_u;
    }
    // One binding linear constraint: walking the concave hulls in slope
    // order is exact, with at most one fractional segment.
    segments.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for (slope, dv) in segments {
        let take = dv.min(excess);
        total_u -= slope * take;
        excess -= take;
        if excess <= 1e-15 {
            break;
        }
    }
    total_u
}

/// Upper concave envelope of points (x ascending).
fn upper_hull(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            if (y2 - y1) * (p.0 - x1) <= (p.1 - y1) * (x2 - x1) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

impl Ensemble {
    /// Block-length ratio K_s = N/n.
    pub fn block_length_ratio(&self) -> f64 {
        self.k_s
    }

    /// Checks the standing assumptions and reports every derived flag the
    /// asymptotic theorems condition on.
    pub fn validate_assumptions(&self) -> ValidationReport {
        let mut messages = Vec::new();
        let mut vn_dual_ok = true;
        for t in &self.vn_types {
            // Dual distance > 1 at a variable node means no output position
            // is identically zero: the mean output weight over all 2^k
            // inputs must be exactly q/2.
            let mass_weight: u128 = t
                .weight_enumerator
                .coeffs()
                .iter()
                .flat_map(|row| row.iter().enumerate())
                .map(|(v, &c)| v as u128 * c as u128)
                .sum();
            let ok = mass_weight * 2 == (t.q as u128) << t.k;
            if !ok {
                vn_dual_ok = false;
                messages.push(format!(
                    "variable type '{}' has a zero output position (dual distance 1)",
                    t.name
                ));
            }
        }
        let mut cn_dual_ok = true;
        for t in &self.cn_types {
            let mass_weight: u128 = t
                .weight_enumerator
                .coeffs()
                .iter()
                .enumerate()
                .map(|(u, &c)| u as u128 * c as u128)
                .sum();
            let ok = mass_weight * 2 == (t.s as u128) << t.h;
            if !ok {
                cn_dual_ok = false;
                messages.push(format!(
                    "check type '{}' has a zero code position (dual distance 1)",
                    t.name
                ));
            }
        }
        let has_distance2_cns = self.cn_types.iter().any(|t| t.r == 2);
        let has_distance2_vns = self.vn_types.iter().any(|t| t.p == 2);
        let all_cn_symmetric = self
            .cn_types
            .iter()
            .all(|t| t.weight_enumerator.is_symmetric());
        ValidationReport {
            vn_dual_distance_ok: vn_dual_ok,
            cn_dual_distance_ok: cn_dual_ok,
            stationary_identity_applicable: vn_dual_ok && cn_dual_ok,
            has_distance2_cns,
            has_distance2_vns,
            all_cn_wefs_symmetric: all_cn_symmetric,
            // Parity-check equations per variable node; distinct from the
            // maximum normalized weight, which shares the letter M in the
            // usual notation.
            parity_ratio: self.k_s * (1.0 - self.design_rate),
            messages,
        }
    }

    /// True iff every variable node is a repetition code of one common
    /// length (the check-hybrid closed form's precondition).
    pub fn is_check_hybrid(&self) -> bool {
        let q0 = self.vn_types[0].q;
        self.vn_types.iter().all(|t| t.k == 1 && t.q == q0)
            && self.vn_types.iter().all(|t| {
                (0..=t.q).all(|v| t.enumerator.coeff(1, v) == u64::from(v == t.q))
            })
    }

    /// Smallest block length for which every type count is a nonnegative
    /// integer, searched up to `limit`.
    pub fn minimal_admissible_n(&self, limit: u64) -> Result<u64, EnsembleError> {
        'n: for n in 1..=limit {
            let nf = n as f64;
            let m = self.cn_ratio * nf;
            if (m - m.round()).abs() > 1e-6 {
                continue;
            }
            for t in &self.vn_types {
                let c = t.delta * nf;
                if (c - c.round()).abs() > 1e-6 {
                    continue 'n;
                }
            }
            for t in &self.cn_types {
                let c = t.gamma * m.round();
                if (c - c.round()).abs() > 1e-6 {
                    continue 'n;
                }
            }
            return Ok(n);
        }
        Err(EnsembleError::NoAdmissibleLength { limit })
    }
}

/// Report of `validate_assumptions`.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub vn_dual_distance_ok: bool,
    pub cn_dual_distance_ok: bool,
    /// Whether the midpoint stationary identity is guaranteed to hold.
    pub stationary_identity_applicable: bool,
    pub has_distance2_cns: bool,
    pub has_distance2_vns: bool,
    pub all_cn_wefs_symmetric: bool,
    /// Parity-check equations per variable node, K_s (1 - R).
    pub parity_ratio: f64,
    pub messages: Vec<String>,
}
