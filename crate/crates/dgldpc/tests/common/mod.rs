#![allow(dead_code)]

use dgldpc::ensemble::{build_ensemble, CnSpec, Ensemble, VnSpec};
use dgldpc::gf2codes::{BinaryMatrix, EnumeratorKind};

pub fn hamming74() -> BinaryMatrix {
    BinaryMatrix::from_strings(&["1000110", "0100101", "0010011", "0001111"]).unwrap()
}

pub fn vn(name: &str, lambda: f64, matrix: BinaryMatrix) -> VnSpec {
    VnSpec {
        name: name.into(),
        lambda,
        matrix: Some(matrix),
        io_coeffs: None,
    }
}

pub fn cn(name: &str, rho: f64, matrix: BinaryMatrix) -> CnSpec {
    CnSpec {
        name: name.into(),
        rho,
        matrix: Some(matrix),
        wef_coeffs: None,
    }
}

pub fn cn_wef(name: &str, rho: f64, coeffs: Vec<u64>) -> CnSpec {
    CnSpec {
        name: name.into(),
        rho,
        matrix: None,
        wef_coeffs: Some(coeffs),
    }
}

/// Regular LDPC: repetition variables of degree dv, single-parity checks of
/// degree dc.
pub fn ldpc(dv: usize, dc: usize) -> Ensemble {
    build_ensemble(
        &[vn("rep", 1.0, BinaryMatrix::repetition(dv).unwrap())],
        &[cn("spc", 1.0, BinaryMatrix::spc_cyclic(dc).unwrap())],
        EnumeratorKind::Weight,
    )
    .unwrap()
}

/// Tanner graph with rep-2 variables and Hamming (7,4) checks.
pub fn tanner_hamming74(kind: EnumeratorKind) -> Ensemble {
    build_ensemble(
        &[vn("rep2", 1.0, BinaryMatrix::repetition(2).unwrap())],
        &[cn("hamming74", 1.0, hamming74())],
        kind,
    )
    .unwrap()
}

/// Check-hybrid mixture: rep-3 variables, SPC-7 plus an asymmetric (7,4)
/// check code, check fractions 13/18 and 5/18.
pub fn checkhybrid_q3() -> Ensemble {
    build_ensemble(
        &[vn("rep3", 1.0, BinaryMatrix::repetition(3).unwrap())],
        &[
            cn("spc7", 13.0 / 18.0, BinaryMatrix::spc_cyclic(7).unwrap()),
            cn_wef("code74", 5.0 / 18.0, vec![1, 0, 5, 0, 7, 0, 3, 0]),
        ],
        EnumeratorKind::Weight,
    )
    .unwrap()
}

/// Tanner graph with rep-2 variables and a symmetric (5,3) check code.
pub fn tanner_code55() -> Ensemble {
    build_ensemble(
        &[vn("rep2", 1.0, BinaryMatrix::repetition(2).unwrap())],
        &[cn_wef("code53", 1.0, vec![1, 0, 3, 3, 0, 1])],
        EnumeratorKind::Weight,
    )
    .unwrap()
}

/// Irregular rate-1/2 mixture whose growth behavior is bad.
pub fn rate_half_a() -> Ensemble {
    build_ensemble(
        &[
            vn("rep2", 0.055646, BinaryMatrix::repetition(2).unwrap()),
            vn("spc7", 0.944354, BinaryMatrix::spc_cyclic(7).unwrap()),
        ],
        &[
            cn("hamming74", 0.965221, hamming74()),
            cn("spc7", 0.034779, BinaryMatrix::spc_cyclic(7).unwrap()),
        ],
        EnumeratorKind::Weight,
    )
    .unwrap()
}

/// Irregular rate-1/2 mixture whose growth behavior is good.
pub fn rate_half_b() -> Ensemble {
    let printed = [0.022647, 0.100000, 0.539920, 0.337432];
    let sum: f64 = printed.iter().sum();
    let lam: Vec<f64> = printed.iter().map(|l| l / sum).collect();
    let rho2 = 5.0 * lam[0] / 8.0;
    build_ensemble(
        &[
            vn("rep2", lam[0], BinaryMatrix::repetition(2).unwrap()),
            vn("spc7c", lam[1], BinaryMatrix::spc_cyclic(7).unwrap()),
            vn("spc7a", lam[2], BinaryMatrix::spc_antisystematic(7).unwrap()),
            vn("spc7s", lam[3], BinaryMatrix::spc_systematic(7).unwrap()),
        ],
        &[
            cn("hamming74", 1.0 - rho2, hamming74()),
            cn("spc7", rho2, BinaryMatrix::spc_cyclic(7).unwrap()),
        ],
        EnumeratorKind::Weight,
    )
    .unwrap()
}

/// Smallest interesting mixture: rep-2 variables on single-parity triples.
pub fn tiny_rep2_spc3() -> Ensemble {
    build_ensemble(
        &[vn("rep2", 1.0, BinaryMatrix::repetition(2).unwrap())],
        &[cn("spc3", 1.0, BinaryMatrix::spc_cyclic(3).unwrap())],
        EnumeratorKind::Weight,
    )
    .unwrap()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(k - 1) {
        for slot in 0..k {
            let mut p = rest.clone();
            p.insert(slot, k - 1);
            out.push(p);
        }
    }
    out
}

/// Codeword counts of the 3-variable tiny mixture summed over all 720 edge
/// permutations, by direct check of every permutation and bit pattern.
/// Variable i drives edge slots {2i, 2i+1}; check j reads slots {3j..3j+3}.
pub fn tiny_brute_force_counts() -> Vec<u64> {
    let mut totals = vec![0u64; 4];
    for p in permutations(6) {
        for bits in 0u32..8 {
            let vn_side: Vec<u32> = (0..6).map(|slot| (bits >> (slot / 2)) & 1).collect();
            let valid = (0..2).all(|j| {
                (0..3).map(|t| vn_side[p[3 * j + t]]).sum::<u32>() % 2 == 0
            });
            if valid {
                totals[bits.count_ones() as usize] += 1;
            }
        }
    }
    totals
}

/// All six reference ensembles of the weight kind, with names.
pub fn weight_kind_suite() -> Vec<(&'static str, Ensemble)> {
    vec![
        ("tanner-hamming74", tanner_hamming74(EnumeratorKind::Weight)),
        ("ldpc-3-6", ldpc(3, 6)),
        ("checkhybrid-q3", checkhybrid_q3()),
        ("tanner-code53", tanner_code55()),
        ("rate-half-a", rate_half_a()),
        ("rate-half-b", rate_half_b()),
    ]
}
