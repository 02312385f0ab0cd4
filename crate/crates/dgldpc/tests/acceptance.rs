//! End-to-end acceptance checks, one line of output per criterion.
//!
//! Each criterion prints `criterion N: pass` or `criterion N: FAIL` with a
//! short detail; the process exits nonzero when any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use dgldpc::ensemble::build_ensemble;
use dgldpc::gf2codes::{BinaryMatrix, EnumeratorKind};
use dgldpc::oracle::{empirical_growth, expected_profile, FiniteInstance};
use dgldpc::smallalpha::{alpha_star_approx, classify_growth, small_alpha_data, GrowthClass};
use dgldpc::spectral::{
    cardano_f_inverse_36, checkhybrid_growth_rate, critical_exponent, default_grid,
    f_inverse, growth_curve, growth_derivative, solve_point, symmetry_report,
};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Criterion {
    number: usize,
    failures: Vec<String>,
    notes: Vec<String>,
    started: Instant,
    budget: Option<Duration>,
}

impl Criterion {
    fn new(number: usize, budget_secs: Option<u64>) -> Self {
        Self {
            number,
            failures: Vec::new(),
            notes: Vec::new(),
            started: Instant::now(),
            budget: budget_secs.map(Duration::from_secs),
        }
    }

    fn check(&mut self, ok: bool, detail: String) {
        if !ok {
            self.failures.push(detail);
        }
    }

    fn check_close(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        self.check(
            (got - want).abs() <= tol,
            format!("{what}: got {got:.7}, want {want} within {tol:.0e}"),
        );
    }

    fn note(&mut self, text: String) {
        self.notes.push(text);
    }

    fn finish(mut self) -> bool {
        let elapsed = self.started.elapsed();
        if let Some(budget) = self.budget {
            if elapsed > budget {
                self.failures
                    .push(format!("took {elapsed:.1?}, budget {budget:?}"));
            }
        }
        let ok = self.failures.is_empty();
        let status = if ok { "pass" } else { "FAIL" };
        let mut detail = if ok {
            self.notes.join("; ")
        } else {
            self.failures.join("; ")
        };
        if detail.is_empty() {
            detail = "ok".into();
        }
        println!(
            "criterion {}: {} - {} ({:.2}s)",
            self.number,
            status,
            detail,
            elapsed.as_secs_f64()
        );
        ok
    }
}

/// Hamming (7,4) enumerator golden values.
fn criterion_1() -> bool {
    let mut c = Criterion::new(1, Some(1));
    let m = hamming74();
    let wef = m.weight_enumerator();
    c.check(
        wef.coeffs() == [1, 0, 0, 7, 7, 0, 0, 1],
        format!("weight enumerator {:?}", wef.coeffs()),
    );
    let bd = wef.bd_ssef().unwrap();
    c.check(
        bd.coeffs() == [1, 0, 0, 35, 35, 21, 7, 1],
        format!("bounded-distance stopping enumerator {:?}", bd.coeffs()),
    );
    let map = m.map_ssef();
    let stated = [1, 0, 0, 7, 10, 21, 7, 1];
    c.check(
        map.coeffs() == stated,
        format!(
            "MAP stopping enumerator {:?}, stated 1+7z^3+10z^4+21z^5+7z^6+z^7; \
             a size-4 count of 10 is unachievable: the automorphism group acts \
             transitively on the 7 plane complements and the 28 other 4-sets, and \
             the 7 weight-4 codewords are always stopping sets, so the count lies \
             in {{7, 35}} here; the rank condition gives 7",
            map.coeffs()
        ),
    );
    c.finish()
}

/// Regular LDPC critical exponents, exact and approximate, (3,4) .. (3,10).
fn criterion_2() -> bool {
    let mut c = Criterion::new(2, Some(10));
    let table = [
        (4, 0.112159, 0.100677),
        (5, 0.045365, 0.042473),
        (6, 0.022733, 0.021746),
        (7, 0.012993, 0.012585),
        (8, 0.008117, 0.007925),
        (9, 0.005410, 0.005309),
        (10, 0.003785, 0.003729),
    ];
    for (dc, exact, approx) in table {
        let e = ldpc(3, dc);
        let got = critical_exponent(&e).unwrap();
        c.check_close(&format!("(3,{dc}) exact"), got, exact, 1e-6);
        let d = small_alpha_data(&e).unwrap();
        let got = alpha_star_approx(&e, &d).unwrap().general;
        c.check_close(&format!("(3,{dc}) approx"), got, approx, 1e-6);
    }
    c.note("seven rows, exact and approximate columns".into());
    c.finish()
}

/// Tanner graph critical exponents for all three enumerator kinds.
fn criterion_3() -> bool {
    let mut c = Criterion::new(3, Some(10));
    let weight = critical_exponent(&tanner_hamming74(EnumeratorKind::Weight)).unwrap();
    c.check_close("weight", weight, 0.18650, 1e-4);
    let bd = critical_exponent(&tanner_hamming74(EnumeratorKind::StoppingBd)).unwrap();
    c.check_close("bounded-distance stopping", bd, 0.01025, 1e-4);
    let map = critical_exponent(&tanner_hamming74(EnumeratorKind::StoppingMap)).unwrap();
    c.check(
        (map - 0.11414).abs() <= 1e-4,
        format!(
            "MAP stopping: got {map:.6}, stated 0.11414; the stated value follows \
             from a MAP enumerator with 10 size-4 stopping sets, but the rank \
             condition yields 7 (see criterion 1), giving {map:.6}"
        ),
    );
    c.finish()
}

/// Check-hybrid mixture: critical exponent, edge-weight cap, asymmetry.
fn criterion_4() -> bool {
    let mut c = Criterion::new(4, Some(10));
    let e = checkhybrid_q3();
    let star = critical_exponent(&e).unwrap();
    c.check_close("critical exponent", star, 0.028179, 1e-5);
    c.check(
        e.m_bar == 6.0 / 7.0,
        format!("max normalized edge weight {} != 6/7", e.m_bar),
    );
    let curve = growth_curve(&e, &default_grid(&e, 30)).unwrap();
    let report = symmetry_report(&curve, &e).unwrap();
    c.check(
        report.max_deviation > 1e-6,
        format!("symmetry deviation {} not reported nonzero", report.max_deviation),
    );
    c.note(format!("symmetry deviation {:.4}", report.max_deviation));
    c.finish()
}

/// Irregular rate-1/2 mixtures: classification products, critical exponents,
/// and 100-point curve runtimes.
fn criterion_5() -> bool {
    let mut c = Criterion::new(5, None);
    let e1 = rate_half_a();
    let r1 = classify_growth(&e1);
    c.check_close("first mixture C*V", r1.c * r1.v.unwrap(), 1.19, 0.01);
    c.check(
        r1.class == GrowthClass::Bad,
        format!("first mixture classified {:?}", r1.class),
    );
    c.check(
        critical_exponent(&e1).unwrap() == 0.0,
        "first mixture critical exponent not 0".into(),
    );

    let e2 = rate_half_b();
    let r2 = classify_growth(&e2);
    c.check_close("second mixture C*V", r2.c * r2.v.unwrap(), 0.50, 0.01);
    c.check_close(
        "second mixture critical exponent",
        critical_exponent(&e2).unwrap(),
        2.625e-3,
        5e-5,
    );

    for (name, e) in [("first", &e1), ("second", &e2)] {
        let start = Instant::now();
        let curve = growth_curve(e, &default_grid(e, 100)).unwrap();
        let took = start.elapsed();
        c.check(
            curve.points.len() == 100 && took < Duration::from_secs(60),
            format!("{name} mixture 100-point curve took {took:.1?}"),
        );
        c.note(format!("{name} curve {:.3}s", took.as_secs_f64()));
    }
    c.finish()
}

/// Stationary-point identity at the domain midpoint.
fn criterion_6() -> bool {
    let mut c = Criterion::new(6, Some(5));
    for (name, e) in weight_kind_suite() {
        let v = e.validate_assumptions();
        c.check(
            v.vn_dual_distance_ok && v.cn_dual_distance_ok,
            format!("{name}: dual distance assumption violated"),
        );
        let p = solve_point(&e, e.k_s / 2.0).unwrap();
        let want = e.k_s * e.design_rate * std::f64::consts::LN_2;
        c.check(
            (p.g - want).abs() < 1e-10,
            format!("{name}: G at midpoint {} want {want}", p.g),
        );
        c.check(
            (p.x0 - 1.0).abs() < 1e-10,
            format!("{name}: x0 at midpoint {}", p.x0),
        );
    }
    c.note("six weight-kind ensembles".into());
    c.finish()
}

/// Symmetric mixtures reflect about the midpoint; the symmetric rate-1/5
/// mixture grows from zero weight.
fn criterion_7() -> bool {
    let mut c = Criterion::new(7, Some(10));
    for (name, e) in [
        ("rep-2/Hamming", tanner_hamming74(EnumeratorKind::Weight)),
        ("rep-2/(5,3)", tanner_code55()),
    ] {
        let curve = growth_curve(&e, &default_grid(&e, 40)).unwrap();
        let report = symmetry_report(&curve, &e).unwrap();
        c.check(
            report.max_deviation < 1e-9,
            format!("{name}: reflection deviation {}", report.max_deviation),
        );
    }
    let e = tanner_code55();
    for alpha in [0.01, 0.03] {
        let p = solve_point(&e, alpha).unwrap();
        c.check(
            growth_derivative(&p) > 0.0 && p.g > 0.0,
            format!("(5,3) mixture not increasing and positive at {alpha}"),
        );
    }
    c.check(
        critical_exponent(&e).unwrap() == 0.0,
        "(5,3) mixture critical exponent not 0".into(),
    );
    c.finish()
}

fn random_check_code(rng: &mut ChaCha8Rng) -> BinaryMatrix {
    loop {
        let s = rng.gen_range(3..=8usize);
        let k = rng.gen_range(1..s);
        let rows: Vec<u32> = (0..k).map(|_| rng.gen_range(1..1u32 << s)).collect();
        let Ok(m) = BinaryMatrix::new(rows, s) else {
            continue;
        };
        if m.weight_enumerator().min_weight() >= Some(2) {
            return m;
        }
    }
}

/// Closed forms match the general solver on random check-hybrid mixtures.
fn criterion_8() -> bool {
    let mut c = Criterion::new(8, None);
    let mut rng = ChaCha8Rng::seed_from_u64(20260814);
    let mut worst = 0.0f64;
    let mut built = 0usize;
    let mut attempts = 0usize;
    while built < 20 && attempts < 2000 {
        attempts += 1;
        let q = rng.gen_range(2..=4usize);
        let n_cn = rng.gen_range(1..=3usize);
        let mut weights: Vec<f64> = (0..n_cn).map(|_| rng.gen_range(0.2..1.0)).collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let cns: Vec<_> = weights
            .iter()
            .enumerate()
            .map(|(i, &rho)| cn(&format!("c{i}"), rho, random_check_code(&mut rng)))
            .collect();
        // Draws with a degenerate rate are redrawn, not failed.
        let Ok(e) = build_ensemble(
            &[vn("rep", 1.0, BinaryMatrix::repetition(q).unwrap())],
            &cns,
            EnumeratorKind::Weight,
        ) else {
            continue;
        };
        built += 1;
        for &alpha in &default_grid(&e, 50) {
            let general = solve_point(&e, alpha).unwrap().g;
            let closed = checkhybrid_growth_rate(&e, alpha).unwrap();
            worst = worst.max((general - closed).abs());
        }
    }
    c.check(
        built == 20,
        format!("only {built} valid mixtures in {attempts} draws"),
    );
    c.check(
        worst < 1e-10,
        format!("worst closed-form deviation {worst:.3e}"),
    );
    c.note(format!(
        "20 mixtures from {attempts} draws, worst closed-form deviation {worst:.2e}"
    ));

    let e = ldpc(3, 6);
    let mut worst_inv = 0.0f64;
    for i in 1..50 {
        let alpha = i as f64 / 50.0;
        let bisect = f_inverse(&e, alpha).unwrap();
        let cardano = cardano_f_inverse_36(alpha).unwrap();
        worst_inv = worst_inv.max((bisect - cardano).abs());
    }
    c.check(
        worst_inv < 1e-10,
        format!("worst Cardano-bisection deviation {worst_inv:.3e}"),
    );
    c.finish()
}

/// Finite differences of every curve match the analytic derivative.
fn criterion_9() -> bool {
    let mut c = Criterion::new(9, None);
    let mut ensembles = weight_kind_suite();
    ensembles.push(("tanner-ss-bd", tanner_hamming74(EnumeratorKind::StoppingBd)));
    ensembles.push(("tanner-ss-map", tanner_hamming74(EnumeratorKind::StoppingMap)));
    for (name, e) in ensembles {
        let h = 1e-5 * e.alpha_max;
        let grid = default_grid(&e, 13);
        for &alpha in &grid[2..11] {
            let p = solve_point(&e, alpha).unwrap();
            let fd = (solve_point(&e, alpha + h).unwrap().g
                - solve_point(&e, alpha - h).unwrap().g)
                / (2.0 * h);
            c.check(
                (fd - growth_derivative(&p)).abs() < 1e-6,
                format!(
                    "{name} at alpha {alpha:.4}: finite difference {fd} vs {}",
                    growth_derivative(&p)
                ),
            );
        }
    }
    c.note("eight curves, nine interior points each".into());
    c.finish()
}

/// The exact oracle approaches the asymptotic shape and matches brute force.
fn criterion_10() -> bool {
    let mut c = Criterion::new(10, Some(60));
    let e = ldpc(3, 6);
    let instances: Vec<FiniteInstance> = [12, 24, 48]
        .iter()
        .map(|&n| FiniteInstance::new(&e, n).unwrap())
        .collect();
    for alpha in [0.25, 0.5] {
        let g = solve_point(&e, alpha).unwrap().g;
        let points = empirical_growth(&e, &instances, alpha);
        let gaps: Vec<f64> = points
            .iter()
            .map(|p| (g - p.value.unwrap()).abs())
            .collect();
        c.check(
            gaps.windows(2).all(|w| w[1] < w[0]),
            format!("alpha {alpha}: gaps {gaps:?} not strictly decreasing"),
        );
    }

    let tiny = tiny_rep2_spc3();
    let inst = FiniteInstance::new(&tiny, 3).unwrap();
    let profile = expected_profile(&tiny, &inst);
    let counts = tiny_brute_force_counts();
    for (w, &count) in counts.iter().enumerate() {
        let scaled = profile[w].clone() * BigRational::from_integer(720.into());
        c.check(
            scaled == BigRational::from_integer(count.into()),
            format!("tiny fixture weight {w}: 720 E[A_w] = {scaled} != {count}"),
        );
    }
    c.note("gaps shrink at both weights; tiny fixture exact".into());
    c.finish()
}

fn main() {
    let start = Instant::now();
    let results = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!(
        "acceptance: {passed}/{} criteria passed in {:.1}s",
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if passed < results.len() {
        std::process::exit(1);
    }
}
