//! Growth rate G(alpha) of the ensemble-average enumerator: Newton
//! continuation on the saddle-point system, derivatives and critical
//! exponents, the per-bit reparameterization, closed forms for check-hybrid
//! and Tanner ensembles, and symmetry verification.

use serde::Serialize;
use thiserror::Error;

use crate::ensemble::Ensemble;
use crate::gf2codes::{EnumeratorKind, WeightEnumerator};

/// Default acceptance threshold on the solved system residual.
pub const RESIDUAL_TOL: f64 = 1e-11;
/// The solver refuses evaluation closer than this to a domain endpoint.
pub const ENDPOINT_MARGIN: f64 = 1e-9;

const NEWTON_TOL: f64 = 1e-13;
const NEWTON_ITERS: usize = 60;
const ARMIJO_HALVINGS: usize = 40;
const STEP_FLOOR: f64 = 1e-8;

/// Residual tolerance, overridable through the SPECTRAL_TOL variable.
pub fn residual_tolerance() -> f64 {
    std::env::var("SPECTRAL_TOL")
        .ok()
        .and_then(|v| v.parse::<f64>().ok())
        .unwrap_or(RESIDUAL_TOL)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("alpha = {alpha} outside the open solvable domain (0, {max})")]
    OutOfDomain { alpha: f64, max: f64 },
    #[error("no convergence at alpha = {alpha}: residual {residual:.3e} at (x,y,z) = ({x:.6e}, {y:.6e}, {z:.6e})")]
    NoConvergence {
        alpha: f64,
        x: f64,
        y: f64,
        z: f64,
        residual: f64,
    },
    #[error("ensemble is not check-hybrid (variable nodes must all be repetition codes of one length)")]
    NotCheckHybrid,
    #[error("alpha = {alpha} is at or above the maximum normalized check weight {m_bar}")]
    AlphaAtOrAboveMax { alpha: f64, m_bar: f64 },
    #[error("cubic discriminant {disc} is nonnegative at alpha = {alpha}; no real bracketed root")]
    DiscriminantNonnegative { alpha: f64, disc: f64 },
    #[error("growth classification is inconclusive (distance-2 product within tolerance of 1)")]
    ClassifierInconclusive,
    #[error("no sign change found while bracketing the critical exponent")]
    BracketNotFound,
}

/// One solved point of the saddle-point system.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectralPoint {
    pub alpha: f64,
    pub x0: f64,
    pub y0: f64,
    pub z0: f64,
    pub beta: f64,
    /// Growth rate in nats per variable node.
    pub g: f64,
    /// Largest absolute system residual at the returned iterate.
    pub residual: f64,
}

/// A solved curve over an ascending alpha grid.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralCurve {
    pub kind: EnumeratorKind,
    pub points: Vec<SpectralPoint>,
    /// Critical exponent ratio; 0 when the growth behavior is bad.
    pub alpha_star: f64,
    /// Roots of G'(alpha) located between grid points.
    pub stationary_alphas: Vec<f64>,
    /// The stationary point of largest G, when one exists on the curve.
    pub peak: Option<(f64, f64)>,
}

/// First derivative of the growth rate at a solved point.
pub fn growth_derivative(p: &SpectralPoint) -> f64 {
    -p.x0.ln()
}

/// Binary entropy in nats with guarded endpoints.
pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.ln() - (1.0 - x) * (1.0 - x).ln()
    }
}

/// Per-evaluation state of the reduced three-equation system in
/// (log x, log y, log z); the edge-activity parameter is eliminated through
/// its closed-form relation to y z.
struct SystemEval {
    f: [f64; 3],
    jac: [[f64; 3]; 3],
    g: f64,
    beta: f64,
}

fn eval_system(e: &Ensemble, alpha: f64, l: [f64; 3]) -> SystemEval {
    let (x, y, z) = (l[0].exp(), l[1].exp(), l[2].exp());
    let t = y * z;
    let beta = t / ((1.0 + t) * e.int_lambda);
    let dbeta = t / ((1.0 + t) * (1.0 + t) * e.int_lambda);
    let ratio = e.int_rho / e.int_lambda;

    // Check side: sums of z A'/A and its log-z derivative.
    let mut ca = 0.0;
    let mut czz = 0.0;
    let mut clog = 0.0;
    for tn in &e.cn_types {
        let a = &tn.enumerator;
        let (mut a0, mut a1, mut a2) = (0.0, 0.0, 0.0);
        for (u, &c) in a.coeffs().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let w = c as f64 * z.powi(u as i32);
            a0 += w;
            a1 += u as f64 * w;
            a2 += (u * u) as f64 * w;
        }
        let phi = a1 / a0;
        ca += tn.gamma * phi;
        czz += tn.gamma * (a2 / a0 - phi * phi);
        clog += tn.gamma * a0.ln();
    }

    // Variable side: sums of the log-x and log-y derivatives of log B.
    let (mut sx, mut sy) = (0.0, 0.0);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    let mut vlog = 0.0;
    for tn in &e.vn_types {
        let b = &tn.enumerator;
        let (mut b0, mut bx, mut by) = (0.0, 0.0, 0.0);
        let (mut bxx, mut bxy, mut byy) = (0.0, 0.0, 0.0);
        for (u, row) in b.coeffs().iter().enumerate() {
            let xu = x.powi(u as i32);
            for (v, &c) in row.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let w = c as f64 * xu * y.powi(v as i32);
                let (uf, vf) = (u as f64, v as f64);
                b0 += w;
                bx += uf * w;
                by += vf * w;
                bxx += uf * uf * w;
                bxy += uf * vf * w;
                byy += vf * vf * w;
            }
        }
        let d = tn.delta;
        sx += d * bx / b0;
        sy += d * by / b0;
        sxx += d * (bxx / b0 - (bx / b0) * (bx / b0));
        sxy += d * (bxy / b0 - bx * by / (b0 * b0));
        syy += d * (byy / b0 - (by / b0) * (by / b0));
        vlog += d * b0.ln();
    }

    let f = [ratio * ca - beta, sx - alpha, sy - beta];
    let jac = [
        [0.0, -dbeta, ratio * czz - dbeta],
        [sxx, sxy, 0.0],
        [sxy, syy - dbeta, -dbeta],
    ];
    // log(1 - beta int_lambda) = -log(1 + t).
    let g = vlog - alpha * l[0] + ratio * clog - (1.0 + t).ln() / e.int_lambda;
    SystemEval { f, jac, g, beta }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Solves a small dense linear system in place by Gaussian elimination with
/// partial pivoting. Returns None if singular to working precision.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let pivot_row = a[col].clone();
        for row in col + 1..n {
            let m = a[row][col] / pivot_row[col];
            if m == 0.0 {
                continue;
            }
            for (entry, p) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *entry -= m * p;
            }
            b[row] -= m * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for j in row + 1..n {
            acc -= a[row][j] * x[j];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Damped Newton iteration on the reduced system at fixed alpha.
fn newton(e: &Ensemble, alpha: f64, mut l: [f64; 3]) -> Result<([f64; 3], f64), SpectralError> {
    let mut ev = eval_system(e, alpha, l);
    let mut fnorm = max_abs(&ev.f);
    for _ in 0..NEWTON_ITERS {
        if fnorm < NEWTON_TOL {
            return Ok((l, fnorm));
        }
        let step = solve_linear(
            ev.jac.iter().map(|r| r.to_vec()).collect(),
            ev.f.to_vec(),
        )
        .ok_or(SpectralError::NoConvergence {
            alpha,
            x: l[0].exp(),
            y: l[1].exp(),
            z: l[2].exp(),
            residual: fnorm,
        })?;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..ARMIJO_HALVINGS {
            let trial = [
                l[0] - lambda * step[0],
                l[1] - lambda * step[1],
                l[2] - lambda * step[2],
            ];
            let tev = eval_system(e, alpha, trial);
            let tnorm = max_abs(&tev.f);
            if tnorm.is_finite() && tnorm < (1.0 - 0.25 * lambda) * fnorm {
                l = trial;
                ev = tev;
                fnorm = tnorm;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    // The iteration aims below NEWTON_TOL; accept anything within the
    // (possibly env-relaxed) residual tolerance.
    if fnorm < NEWTON_TOL.max(residual_tolerance()) {
        Ok((l, fnorm))
    } else {
        Err(SpectralError::NoConvergence {
            alpha,
            x: l[0].exp(),
            y: l[1].exp(),
            z: l[2].exp(),
            residual: fnorm,
        })
    }
}

fn point_from(e: &Ensemble, alpha: f64, l: [f64; 3], residual: f64) -> SpectralPoint {
    let ev = eval_system(e, alpha, l);
    SpectralPoint {
        alpha,
        x0: l[0].exp(),
        y0: l[1].exp(),
        z0: l[2].exp(),
        beta: ev.beta,
        g: ev.g,
        residual,
    }
}

/// The continuation seed: the exact interior solution for the weight kind
/// (all variables 1 at the midpoint), the domain midpoint otherwise.
fn seed_alpha(e: &Ensemble) -> f64 {
    match e.kind {
        EnumeratorKind::Weight => e.k_s / 2.0,
        _ => e.alpha_max / 2.0,
    }
}

/// Converges the seed iterate. For the weight kind the all-ones point is
/// already the exact solution; otherwise damped Newton from the all-ones
/// point, with a coarse scan over the check-side variable as fallback.
fn seed_solution(e: &Ensemble) -> Result<(f64, [f64; 3]), SpectralError> {
    let alpha = seed_alpha(e);
    let mut last = None;
    for lz in [0.0f64, -0.5, 0.5, -1.0, 1.0, -2.0, 2.0, -3.0, 3.0] {
        match newton(e, alpha, [0.0, 0.0, lz]) {
            Ok((l, _)) => return Ok((alpha, l)),
            Err(err) => last = Some(err),
        }
    }
    Err(last.unwrap())
}

/// Marches the solution from (alpha_from, l) to alpha_to with adaptive step
/// halving, returning the converged iterate at alpha_to.
fn march(
    e: &Ensemble,
    mut alpha_from: f64,
    mut l: [f64; 3],
    alpha_to: f64,
) -> Result<[f64; 3], SpectralError> {
    let mut step = alpha_to - alpha_from;
    while (alpha_from - alpha_to).abs() > 0.0 {
        if step.abs() > (alpha_to - alpha_from).abs() {
            step = alpha_to - alpha_from;
        }
        let target = alpha_from + step;
        match newton(e, target, l) {
            Ok((sol, _)) => {
                l = sol;
                alpha_from = target;
                // Grow the step back after successes.
                step *= 1.9;
            }
            Err(err) => {
                step *= 0.5;
                if step.abs() < STEP_FLOOR {
                    return Err(err);
                }
            }
        }
    }
    Ok(l)
}

/// Checks the domain and solves the system at one alpha, continuing from
/// the ensemble's seed point.
pub fn solve_point(e: &Ensemble, alpha: f64) -> Result<SpectralPoint, SpectralError> {
    let max = e.alpha_max;
    if !(alpha > ENDPOINT_MARGIN && alpha < max - ENDPOINT_MARGIN) {
        return Err(SpectralError::OutOfDomain { alpha, max });
    }
    let (seed, l) = seed_solution(e)?;
    let l = march(e, seed, l, alpha)?;
    let (l, residual) = newton(e, alpha, l)?;
    Ok(point_from(e, alpha, l, residual))
}

/// The default evaluation grid: `points` uniform alphas on the inner
/// (0.005, 0.995) fraction of the solvable domain.
pub fn default_grid(e: &Ensemble, points: usize) -> Vec<f64> {
    let lo = 0.005 * e.alpha_max;
    let hi = 0.995 * e.alpha_max;
    if points == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

/// Solves the system over a grid by warm-started continuation from the seed
/// outward in both directions, then locates the critical exponent and the
/// stationary points.
pub fn growth_curve(e: &Ensemble, grid: &[f64]) -> Result<SpectralCurve, SpectralError> {
    let mut alphas: Vec<f64> = grid.to_vec();
    alphas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let max = e.alpha_max;
    if let Some(&a) = alphas.first() {
        if a <= ENDPOINT_MARGIN {
            return Err(SpectralError::OutOfDomain { alpha: a, max });
        }
    }
    if let Some(&a) = alphas.last() {
        if a >= max - ENDPOINT_MARGIN {
            return Err(SpectralError::OutOfDomain { alpha: a, max });
        }
    }

    let (seed, seed_l) = seed_solution(e)?;
    let split = alphas.partition_point(|&a| a < seed);
    let mut points: Vec<SpectralPoint> = Vec::with_capacity(alphas.len());

    // Downward sweep (solved in descending order, reversed afterwards).
    let mut down: Vec<SpectralPoint> = Vec::with_capacity(split);
    let mut from = seed;
    let mut l = seed_l;
    for &a in alphas[..split].iter().rev() {
        l = march(e, from, l, a)?;
        let (sol, residual) = newton(e, a, l)?;
        l = sol;
        from = a;
        down.push(point_from(e, a, l, residual));
    }
    points.extend(down.into_iter().rev());

    // Upward sweep.
    let mut from = seed;
    let mut l = seed_l;
    for &a in &alphas[split..] {
        l = march(e, from, l, a)?;
        let (sol, residual) = newton(e, a, l)?;
        l = sol;
        from = a;
        points.push(point_from(e, a, l, residual));
    }

    let stationary_alphas = locate_stationary(e, &points)?;
    let peak = stationary_peak(e, &stationary_alphas)?;
    let alpha_star = critical_exponent(e)?;
    Ok(SpectralCurve {
        kind: e.kind,
        points,
        alpha_star,
        stationary_alphas,
        peak,
    })
}

/// Finds roots of G' (sign changes of log x0) between consecutive grid
/// points by bisection.
fn locate_stationary(e: &Ensemble, points: &[SpectralPoint]) -> Result<Vec<f64>, SpectralError> {
    let near_zero = 1e-13;
    let mut out = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let d = p.x0.ln();
        if d.abs() < near_zero {
            out.push(p.alpha);
            continue;
        }
        if i + 1 == points.len() {
            break;
        }
        let d_next = points[i + 1].x0.ln();
        if d_next.abs() < near_zero || d * d_next >= 0.0 {
            continue;
        }
        let (mut lo, mut hi) = (p.alpha, points[i + 1].alpha);
        let sign_lo = d.signum();
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            let dm = solve_point(e, mid)?.x0.ln();
            if dm.signum() == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-13 * e.alpha_max.max(1.0) {
                break;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-11);
    Ok(out)
}

fn stationary_peak(
    e: &Ensemble,
    stationary: &[f64],
) -> Result<Option<(f64, f64)>, SpectralError> {
    let mut best: Option<(f64, f64)> = None;
    for &a in stationary {
        let p = solve_point(e, a)?;
        if best.is_none_or(|(_, g)| p.g > g) {
            best = Some((a, p.g));
        }
    }
    Ok(best)
}

/// Critical exponent ratio: infimum positive alpha with G(alpha) >= 0.
///
/// Returns 0 when the small-weight classifier reports bad growth, and
/// refuses to decide the boundary case.
pub fn critical_exponent(e: &Ensemble) -> Result<f64, SpectralError> {
    use crate::smallalpha::{classify_growth, GrowthClass};
    match classify_growth(e).class {
        GrowthClass::Bad => return Ok(0.0),
        GrowthClass::Boundary => return Err(SpectralError::ClassifierInconclusive),
        GrowthClass::Good => {}
    }

    // Geometric march from the seed to the first sign change of G. The
    // previous march point closes the bracket, keeping it tight so the
    // bisection never leaves the solution branch.
    let (seed, seed_l) = seed_solution(e)?;
    let mut at = seed;
    let mut l = seed_l;
    let mut prev;
    let going_down = eval_system(e, seed, seed_l).g > 0.0;
    loop {
        let next = at * if going_down { 0.6 } else { 1.3 };
        if next < ENDPOINT_MARGIN || next >= e.alpha_max - ENDPOINT_MARGIN {
            return Err(SpectralError::BracketNotFound);
        }
        l = march(e, at, l, next)?;
        prev = at;
        at = next;
        let g = eval_system(e, at, l).g;
        if (g <= 0.0) == going_down {
            break;
        }
    }
    let (mut lo, mut hi) = if going_down { (at, prev) } else { (prev, at) };

    // Bisection on G, warm-starting each solve from the last one.
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        l = march(e, at, l, mid)?;
        at = mid;
        if eval_system(e, mid, l).g < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }

    refine_alpha_star(e, at, l)
}

/// Final polish: Newton on the system augmented with G = 0, treating alpha
/// as a fourth unknown.
fn refine_alpha_star(
    e: &Ensemble,
    mut alpha: f64,
    mut l: [f64; 3],
) -> Result<f64, SpectralError> {
    for _ in 0..50 {
        let ev = eval_system(e, alpha, l);
        let res = max_abs(&ev.f).max(ev.g.abs());
        if res < 1e-12 {
            return Ok(alpha);
        }
        // Gradient of G in the log coordinates equals the system residuals,
        // so the bordered Jacobian closes with the plain derivative -log x.
        let a = vec![
            vec![ev.jac[0][0], ev.jac[0][1], ev.jac[0][2], 0.0],
            vec![ev.jac[1][0], ev.jac[1][1], ev.jac[1][2], -1.0],
            vec![ev.jac[2][0], ev.jac[2][1], ev.jac[2][2], 0.0],
            vec![ev.f[1], ev.f[2], ev.f[0], -l[0]],
        ];
        let b = vec![ev.f[0], ev.f[1], ev.f[2], ev.g];
        let step = solve_linear(a, b).ok_or(SpectralError::NoConvergence {
            alpha,
            x: l[0].exp(),
            y: l[1].exp(),
            z: l[2].exp(),
            residual: res,
        })?;
        let mut lambda = 1.0;
        let mut moved = false;
        for _ in 0..30 {
            let trial_alpha = alpha - lambda * step[3];
            let trial = [
                l[0] - lambda * step[0],
                l[1] - lambda * step[1],
                l[2] - lambda * step[2],
            ];
            if trial_alpha > ENDPOINT_MARGIN && trial_alpha < e.alpha_max - ENDPOINT_MARGIN {
                let tev = eval_system(e, trial_alpha, trial);
                let tres = max_abs(&tev.f).max(tev.g.abs());
                if tres.is_finite() && tres < res {
                    alpha = trial_alpha;
                    l = trial;
                    moved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !moved {
            break;
        }
    }
    Ok(alpha)
}

/// The per-bit reparameterization of a weight-kind curve: omega = alpha/K_s
/// and value G/K_s.
pub fn h_curve(c: &SpectralCurve, k_s: f64) -> Vec<(f64, f64)> {
    c.points
        .iter()
        .map(|p| (p.alpha / k_s, p.g / k_s))
        .collect()
}

fn common_repetition_length(e: &Ensemble) -> Result<usize, SpectralError> {
    if e.is_check_hybrid() {
        Ok(e.vn_types[0].q)
    } else {
        Err(SpectralError::NotCheckHybrid)
    }
}

/// The check-side mixture mean weight function, strictly increasing from 0
/// to the maximum normalized check weight.
pub fn f_eval(e: &Ensemble, z: f64) -> Result<f64, SpectralError> {
    common_repetition_length(e)?;
    Ok(f_eval_raw(e, z))
}

fn f_eval_raw(e: &Ensemble, z: f64) -> f64 {
    e.int_rho
        * e.cn_types
            .iter()
            .map(|t| {
                let a = &t.enumerator;
                t.gamma * z * a.eval_derivative(z) / a.eval(z)
            })
            .sum::<f64>()
}

/// Inverse of the mixture mean weight function on [0, m_bar).
pub fn f_inverse(e: &Ensemble, alpha: f64) -> Result<f64, SpectralError> {
    common_repetition_length(e)?;
    f_inverse_raw(e, alpha)
}

fn f_inverse_raw(e: &Ensemble, alpha: f64) -> Result<f64, SpectralError> {
    if alpha < 0.0 || alpha >= e.m_bar {
        return Err(SpectralError::AlphaAtOrAboveMax {
            alpha,
            m_bar: e.m_bar,
        });
    }
    if alpha == 0.0 {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while f_eval_raw(e, hi) < alpha {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(SpectralError::AlphaAtOrAboveMax {
                alpha,
                m_bar: e.m_bar,
            });
        }
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f_eval_raw(e, mid) < alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Newton polish on the monotone function.
    let mut z = 0.5 * (lo + hi);
    for _ in 0..8 {
        let fv = f_eval_raw(e, z) - alpha;
        if fv.abs() < 1e-15 {
            break;
        }
        let h = (z * 1e-7).max(1e-12);
        let d = (f_eval_raw(e, z + h) - f_eval_raw(e, z - h)) / (2.0 * h);
        if d <= 0.0 || d.is_nan() {
            break;
        }
        let next = z - fv / d;
        if next > lo && next < hi {
            z = next;
        } else {
            break;
        }
    }
    Ok(z)
}

/// Closed-form growth rate for check-hybrid ensembles (all variable nodes
/// repetition codes of one length q).
pub fn checkhybrid_growth_rate(e: &Ensemble, alpha: f64) -> Result<f64, SpectralError> {
    let q = common_repetition_length(e)? as f64;
    if alpha <= 0.0 || alpha >= e.m_bar {
        return Err(SpectralError::AlphaAtOrAboveMax {
            alpha,
            m_bar: e.m_bar,
        });
    }
    let z = f_inverse_raw(e, alpha)?;
    let cn_log: f64 = e
        .cn_types
        .iter()
        .map(|t| t.gamma * t.enumerator.eval(z).ln())
        .sum();
    Ok((1.0 - q) * binary_entropy(alpha) - q * alpha * z.ln() + q * e.int_rho * cn_log)
}

/// Closed-form growth rate for a Tanner ensemble: repetition variable nodes
/// of length q and one check enumerator.
pub fn tanner_growth_rate(
    q: usize,
    cn: &WeightEnumerator,
    alpha: f64,
) -> Result<f64, SpectralError> {
    let s = cn.length() as f64;
    let m_bar = cn.max_weight() as f64 / s;
    if alpha <= 0.0 || alpha >= m_bar {
        return Err(SpectralError::AlphaAtOrAboveMax { alpha, m_bar });
    }
    // Bracketed inverse of z A'(z) / (s A(z)).
    let f = |z: f64| z * cn.eval_derivative(z) / (s * cn.eval(z));
    let mut hi = 1.0;
    while f(hi) < alpha {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(SpectralError::AlphaAtOrAboveMax { alpha, m_bar });
        }
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let z = 0.5 * (lo + hi);
    let qf = q as f64;
    Ok((1.0 - qf) * binary_entropy(alpha) - qf * alpha * z.ln() + qf / s * cn.eval(z).ln())
}

/// Cardano closed form of the mixture inverse for the rate-1/2 regular
/// ensemble with degree-3 repetition variable nodes and length-6 checks.
pub fn cardano_f_inverse_36(alpha: f64) -> Result<f64, SpectralError> {
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(SpectralError::AlphaAtOrAboveMax { alpha, m_bar: 1.0 });
    }
    let a = alpha - 1.0;
    let b = 15.0 * alpha - 10.0;
    let c = 15.0 * alpha - 5.0;
    let d = alpha;
    let rho = (3.0 * a * c - b * b) / (9.0 * a * a);
    let mu = (9.0 * a * b * c - 27.0 * a * a * d - 2.0 * b * b * b) / (54.0 * a * a * a);
    let disc = rho * rho * rho + mu * mu;
    if disc >= 0.0 {
        return Err(SpectralError::DiscriminantNonnegative { alpha, disc });
    }
    let theta = (-disc).sqrt().atan2(mu);
    let x = 2.0 * (-rho).sqrt() * (theta / 3.0).cos() - b / (3.0 * a);
    Ok(x.sqrt())
}

/// Symmetry diagnosis of a check-hybrid curve: the largest deviation of G
/// from its reflection about the domain midpoint.
#[derive(Debug, Clone, Serialize)]
pub struct SymmetryReport {
    pub all_cn_wefs_symmetric: bool,
    pub max_deviation: f64,
    pub points_compared: usize,
}

/// Compares every curve point against the closed-form value at the
/// reflected weight m_bar - alpha.
pub fn symmetry_report(c: &SpectralCurve, e: &Ensemble) -> Result<SymmetryReport, SpectralError> {
    common_repetition_length(e)?;
    let all_sym = e.cn_types.iter().all(|t| t.enumerator.is_symmetric());
    let mut max_dev = 0.0f64;
    let mut compared = 0usize;
    for p in &c.points {
        let reflected = e.m_bar - p.alpha;
        if reflected <= 0.0 || reflected >= e.m_bar {
            continue;
        }
        let g_ref = checkhybrid_growth_rate(e, reflected)?;
        max_dev = max_dev.max((g_ref - p.g).abs());
        compared += 1;
    }
    Ok(SymmetryReport {
        all_cn_wefs_symmetric: all_sym,
        max_deviation: max_dev,
        points_compared: compared,
    })
}
