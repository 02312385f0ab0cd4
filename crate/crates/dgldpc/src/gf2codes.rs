//! Exact GF(2) linear-code algebra: generator matrices, rank computations,
//! and exhaustive weight / input-output weight / stopping-set enumerators
//! for local codes.
//!
//! All enumerator coefficients are exact integers; every operation here is a
//! pure function of immutable inputs.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported code dimension/length (exhaustive 2^k loops stay fast).
pub const MAX_DIM: usize = 24;

/// Largest supported total size k+q for the input-output MAP stopping-set
/// enumerator, whose exhaustive loop runs over 2^(k+q) erasure patterns.
pub const MAX_IO_STOPPING_DIM: usize = 26;

/// Errors from matrix construction and enumerator computation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("matrix must have at least one row and k <= q (got k={k}, q={q})")]
    BadShape { k: usize, q: usize },
    #[error("dimension too large: {what} = {got} exceeds the enumeration bound {limit}")]
    DimensionTooLarge {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("matrix is not full row rank (rank {rank} < k = {k})")]
    RankDeficient { rank: usize, k: usize },
    #[error("column {col} is all zeros (dual distance would be 1)")]
    ZeroColumn { col: usize },
    #[error("minimum {what} weight is {got}, need at least 2")]
    MinDistanceTooSmall { what: &'static str, got: usize },
    #[error("antisystematic single-parity-check generators require odd length (got {len})")]
    EvenAntisystematic { len: usize },
    #[error("row string contains a character other than '0' or '1'")]
    BadRowString,
    #[error("enumerator coefficients invalid: {0}")]
    BadCoefficients(String),
}

/// Which erasure/weight semantics an enumerator counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnumeratorKind {
    /// Codeword Hamming weights.
    Weight,
    /// Stopping sets under bounded-distance erasure decoding (check side only).
    StoppingBd,
    /// Stopping sets under MAP erasure decoding.
    StoppingMap,
}

impl fmt::Display for EnumeratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EnumeratorKind::Weight => "weight",
            EnumeratorKind::StoppingBd => "ss-bd",
            EnumeratorKind::StoppingMap => "ss-map",
        };
        f.write_str(s)
    }
}

/// A full-row-rank generator matrix over GF(2) with no all-zero column.
///
/// Rows are stored as bit masks; bit `j` of a row is the entry in column `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    k: usize,
    q: usize,
    rows: Vec<u32>,
}

impl BinaryMatrix {
    /// Builds a k x q matrix from row bit masks (bit j = column j).
    ///
    /// Requires 1 <= k <= q <= [`MAX_DIM`], full row rank, and no all-zero
    /// column.
    pub fn new(rows: Vec<u32>, q: usize) -> Result<Self, CodeError> {
        let k = rows.len();
        if k == 0 || k > q {
            return Err(CodeError::BadShape { k, q });
        }
        if q > MAX_DIM {
            return Err(CodeError::DimensionTooLarge {
                what: "q",
                got: q,
                limit: MAX_DIM,
            });
        }
        let mask = (1u32 << q) - 1;
        for &r in &rows {
            if r & !mask != 0 {
                return Err(CodeError::BadShape { k, q });
            }
        }
        let rank = gf2_rank(&rows);
        if rank < k {
            return Err(CodeError::RankDeficient { rank, k });
        }
        let col_cover = rows.iter().fold(0u32, |acc, r| acc | r);
        if col_cover != mask {
            let col = (!col_cover & mask).trailing_zeros() as usize;
            return Err(CodeError::ZeroColumn { col });
        }
        Ok(Self { k, q, rows })
    }

    /// Builds a matrix from strings of '0'/'1' characters, one per row.
    /// The leftmost character is column 0.
    pub fn from_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self, CodeError> {
        let q = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut bits = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row.as_ref();
            if row.len() != q {
                return Err(CodeError::BadShape {
                    k: rows.len(),
                    q: row.len(),
                });
            }
            let mut r = 0u32;
            for (j, c) in row.chars().enumerate() {
                match c {
                    '1' => r |= 1 << j,
                    '0' => {}
                    _ => return Err(CodeError::BadRowString),
                }
            }
            bits.push(r);
        }
        Self::new(bits, q)
    }

    /// The 1 x q all-ones generator of the length-q repetition code.
    pub fn repetition(q: usize) -> Result<Self, CodeError> {
        if q < 2 {
            return Err(CodeError::MinDistanceTooSmall {
                what: "codeword",
                got: q,
            });
        }
        if q > MAX_DIM {
            return Err(CodeError::DimensionTooLarge {
                what: "q",
                got: q,
                limit: MAX_DIM,
            });
        }
        Self::new(vec![(1u32 << q) - 1], q)
    }

    /// Cyclic generator of the length-s single-parity-check code: row i has
    /// ones in columns i and i+1.
    pub fn spc_cyclic(s: usize) -> Result<Self, CodeError> {
        check_spc_length(s)?;
        let rows = (0..s - 1).map(|i| 0b11u32 << i).collect();
        Self::new(rows, s)
    }

    /// Systematic generator [I | 1] of the length-s single-parity-check code.
    pub fn spc_systematic(s: usize) -> Result<Self, CodeError> {
        check_spc_length(s)?;
        let parity = 1u32 << (s - 1);
        let rows = (0..s - 1).map(|i| (1u32 << i) | parity).collect();
        Self::new(rows, s)
    }

    /// Antisystematic generator of the length-s single-parity-check code:
    /// the systematic form with every bit of the first k columns
    /// complemented. Only odd s yields minimum distance 2.
    pub fn spc_antisystematic(s: usize) -> Result<Self, CodeError> {
        check_spc_length(s)?;
        if s.is_multiple_of(2) {
            return Err(CodeError::EvenAntisystematic { len: s });
        }
        let k = s - 1;
        let info_mask = (1u32 << k) - 1;
        let parity = 1u32 << k;
        let rows = (0..k).map(|i| (info_mask ^ (1u32 << i)) | parity).collect();
        Self::new(rows, s)
    }

    /// Number of rows (code dimension).
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of columns (code length).
    pub fn q(&self) -> usize {
        self.q
    }

    /// Row bit masks (bit j = column j).
    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    /// Encodes an input bit mask: XOR of the rows selected by `input`.
    pub fn encode(&self, input: u32) -> u32 {
        let mut cw = 0u32;
        let mut rest = input;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            cw ^= self.rows[i];
            rest &= rest - 1;
        }
        cw
    }

    /// Columns as bit masks over the row index (bit i = row i).
    pub fn columns(&self) -> Vec<u32> {
        (0..self.q)
            .map(|j| {
                self.rows
                    .iter()
                    .enumerate()
                    .fold(0u32, |acc, (i, r)| acc | (((r >> j) & 1) << i))
            })
            .collect()
    }

    /// True iff the all-ones word belongs to the row space.
    pub fn has_all_ones_codeword(&self) -> bool {
        let mask = (1u32 << self.q) - 1;
        let mut rows = self.rows.clone();
        let rank = gf2_rank(&rows);
        rows.push(mask);
        gf2_rank(&rows) == rank
    }

    /// Weight enumerator A(z): the number of codewords of each Hamming
    /// weight, by exhaustive enumeration of all 2^k inputs.
    pub fn weight_enumerator(&self) -> WeightEnumerator {
        let mut coeffs = vec![0u64; self.q + 1];
        // Gray-code order: each step toggles one input bit, so the codeword
        // updates with a single XOR.
        let mut cw = 0u32;
        coeffs[0] += 1;
        for u in 1u32..(1u32 << self.k) {
            let bit = (u ^ (u >> 1)) ^ ((u - 1) ^ ((u - 1) >> 1));
            cw ^= self.rows[bit.trailing_zeros() as usize];
            coeffs[cw.count_ones() as usize] += 1;
        }
        WeightEnumerator {
            coeffs,
            kind: EnumeratorKind::Weight,
        }
    }

    /// Input-output weight enumerator B(x,y): `B[u][v]` counts inputs of
    /// weight u whose codeword has weight v.
    ///
    /// Rejects codes of minimum distance below 2.
    pub fn io_weight_enumerator(&self) -> Result<IoWeightEnumerator, CodeError> {
        let mut coeffs = vec![vec![0u64; self.q + 1]; self.k + 1];
        let mut cw = 0u32;
        coeffs[0][0] += 1;
        for u in 1u32..(1u32 << self.k) {
            let gray = u ^ (u >> 1);
            let bit = gray ^ ((u - 1) ^ ((u - 1) >> 1));
            cw ^= self.rows[bit.trailing_zeros() as usize];
            coeffs[gray.count_ones() as usize][cw.count_ones() as usize] += 1;
        }
        let e = IoWeightEnumerator {
            coeffs,
            kind: EnumeratorKind::Weight,
        };
        match e.min_output_weight() {
            Some(p) if p >= 2 => Ok(e),
            Some(p) => Err(CodeError::MinDistanceTooSmall {
                what: "codeword",
                got: p,
            }),
            None => Err(CodeError::BadShape { k: self.k, q: self.q }),
        }
    }

    /// MAP erasure stopping-set enumerator: coefficient u counts erasure
    /// sets V of size u such that every column indexed by V lies outside the
    /// GF(2) span of the columns outside V.
    pub fn map_ssef(&self) -> WeightEnumerator {
        let cols = self.columns();
        let mut coeffs = vec![0u64; self.q + 1];
        for erased in 0u32..(1u32 << self.q) {
            if stalls(&cols, erased) {
                coeffs[erased.count_ones() as usize] += 1;
            }
        }
        WeightEnumerator {
            coeffs,
            kind: EnumeratorKind::StoppingMap,
        }
    }

    /// Input-output MAP stopping-set enumerator: `B[u][v]` counts pairs
    /// (U, V) of erased info positions (|U| = u) and erased code positions
    /// (|V| = v) such that no unit vector indexed by U and no generator
    /// column indexed by V lies in the span of the known columns of the
    /// extended matrix [I | G].
    pub fn io_map_ssef(&self) -> Result<IoWeightEnumerator, CodeError> {
        if self.k + self.q > MAX_IO_STOPPING_DIM {
            return Err(CodeError::DimensionTooLarge {
                what: "k+q",
                got: self.k + self.q,
                limit: MAX_IO_STOPPING_DIM,
            });
        }
        // Erasure patterns of [I | G] split into an info part and a code
        // part; the stall condition is the plain rank condition on the
        // extended matrix's columns.
        let mut cols: Vec<u32> = (0..self.k as u32).map(|i| 1 << i).collect();
        cols.extend(self.columns());
        let info_mask = (1u32 << self.k) - 1;
        let mut coeffs = vec![vec![0u64; self.q + 1]; self.k + 1];
        for erased in 0u32..(1u32 << (self.k + self.q)) {
            if stalls(&cols, erased) {
                let u = (erased & info_mask).count_ones() as usize;
                let v = (erased >> self.k).count_ones() as usize;
                coeffs[u][v] += 1;
            }
        }
        Ok(IoWeightEnumerator {
            coeffs,
            kind: EnumeratorKind::StoppingMap,
        })
    }
}

fn check_spc_length(s: usize) -> Result<(), CodeError> {
    if s < 2 {
        return Err(CodeError::MinDistanceTooSmall {
            what: "codeword",
            got: s,
        });
    }
    if s > MAX_DIM {
        return Err(CodeError::DimensionTooLarge {
            what: "s",
            got: s,
            limit: MAX_DIM,
        });
    }
    Ok(())
}

/// True iff every erased column lies outside the span of the known ones.
fn stalls(cols: &[u32], erased: u32) -> bool {
    if erased == 0 {
        return true;
    }
    let mut basis = [0u32; 32];
    let mut rank = 0usize;
    for (j, &c) in cols.iter().enumerate() {
        if erased & (1 << j) == 0 {
            let mut v = c;
            for &b in &basis[..rank] {
                v = v.min(v ^ b);
            }
            if v != 0 {
                basis[rank] = v;
                rank += 1;
            }
        }
    }
    for (j, &c) in cols.iter().enumerate() {
        if erased & (1 << j) != 0 {
            let mut v = c;
            for &b in &basis[..rank] {
                v = v.min(v ^ b);
            }
            if v == 0 {
                return false;
            }
        }
    }
    true
}

/// Rank over GF(2) of a set of row bit masks (destroys order, not content).
fn gf2_rank(rows: &[u32]) -> usize {
    let mut basis: Vec<u32> = Vec::with_capacity(rows.len());
    for &row in rows {
        let mut v = row;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
        }
    }
    basis.len()
}

/// Univariate enumerator: coefficient `u` counts objects of weight `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightEnumerator {
    coeffs: Vec<u64>,
    kind: EnumeratorKind,
}

impl WeightEnumerator {
    /// Wraps explicit coefficients. The constant term must be 1.
    pub fn from_coeffs(coeffs: Vec<u64>, kind: EnumeratorKind) -> Result<Self, CodeError> {
        if coeffs.first() != Some(&1) {
            return Err(CodeError::BadCoefficients(
                "constant coefficient must be 1".into(),
            ));
        }
        Ok(Self { coeffs, kind })
    }

    pub fn kind(&self) -> EnumeratorKind {
        self.kind
    }

    /// Code length s (largest representable weight).
    pub fn length(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, u: usize) -> u64 {
        self.coeffs.get(u).copied().unwrap_or(0)
    }

    /// Smallest u > 0 with a nonzero coefficient, if any.
    pub fn min_weight(&self) -> Option<usize> {
        (1..self.coeffs.len()).find(|&u| self.coeffs[u] != 0)
    }

    /// Largest u with a nonzero coefficient.
    pub fn max_weight(&self) -> usize {
        (0..self.coeffs.len())
            .rev()
            .find(|&u| self.coeffs[u] != 0)
            .unwrap_or(0)
    }

    /// Total mass. For a weight enumerator this is 2^h with h the code
    /// dimension.
    pub fn total(&self) -> u64 {
        self.coeffs.iter().sum()
    }

    /// The code dimension h when the total mass is an exact power of two.
    pub fn dimension(&self) -> Option<u32> {
        let t = self.total();
        t.is_power_of_two().then(|| t.trailing_zeros())
    }

    /// True iff the coefficients satisfy A[max-u] = A[u] for all u.
    pub fn is_symmetric(&self) -> bool {
        let ubar = self.max_weight();
        (0..=ubar).all(|u| self.coeff(u) == self.coeff(ubar - u))
    }

    /// Bounded-distance erasure stopping-set enumerator of the code this
    /// weight enumerator describes: 1 plus every erasure set of size at
    /// least the minimum distance.
    pub fn bd_ssef(&self) -> Result<WeightEnumerator, CodeError> {
        if self.kind != EnumeratorKind::Weight {
            return Err(CodeError::BadCoefficients(
                "bounded-distance stopping sets are derived from a weight enumerator".into(),
            ));
        }
        let s = self.length();
        let r = self.min_weight().ok_or_else(|| {
            CodeError::BadCoefficients("weight enumerator has no nonzero weight".into())
        })?;
        let mut coeffs = vec![0u64; s + 1];
        coeffs[0] = 1;
        for (u, c) in coeffs.iter_mut().enumerate().skip(r) {
            *c = binomial(s, u);
        }
        Ok(WeightEnumerator {
            coeffs,
            kind: EnumeratorKind::StoppingBd,
        })
    }

    /// Evaluates A(z).
    pub fn eval(&self, z: f64) -> f64 {
        // Horner from the top keeps the evaluation stable for z >= 0.
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * z + c as f64)
    }

    /// Evaluates the derivative A'(z).
    pub fn eval_derivative(&self, z: f64) -> f64 {
        let mut acc = 0.0;
        for u in (1..self.coeffs.len()).rev() {
            acc = acc * z + u as f64 * self.coeffs[u] as f64;
        }
        acc
    }
}

impl fmt::Display for WeightEnumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (u, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (u, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "z")?,
                (1, c) => write!(f, "{c}z")?,
                (u, 1) => write!(f, "z^{u}")?,
                (u, c) => write!(f, "{c}z^{u}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Bivariate enumerator: `coeffs[u][v]` counts pairs of input weight u and
/// output weight v.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IoWeightEnumerator {
    coeffs: Vec<Vec<u64>>,
    kind: EnumeratorKind,
}

impl IoWeightEnumerator {
    /// Wraps explicit coefficients. Requires `B[0][0] = 1` and `B[0][v] = 0`
    /// for v > 0, and a rectangular array.
    pub fn from_coeffs(coeffs: Vec<Vec<u64>>, kind: EnumeratorKind) -> Result<Self, CodeError> {
        let q = match coeffs.first() {
            Some(row) if !row.is_empty() => row.len() - 1,
            _ => {
                return Err(CodeError::BadCoefficients(
                    "coefficient array must be non-empty".into(),
                ))
            }
        };
        if coeffs.iter().any(|row| row.len() != q + 1) {
            return Err(CodeError::BadCoefficients(
                "coefficient rows must have equal length".into(),
            ));
        }
        if coeffs[0][0] != 1 || coeffs[0][1..].iter().any(|&c| c != 0) {
            return Err(CodeError::BadCoefficients(
                "input weight 0 must contribute exactly the zero output".into(),
            ));
        }
        Ok(Self { coeffs, kind })
    }

    pub fn kind(&self) -> EnumeratorKind {
        self.kind
    }

    /// Input length k.
    pub fn in_length(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Output length q.
    pub fn out_length(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    pub fn coeffs(&self) -> &[Vec<u64>] {
        &self.coeffs
    }

    pub fn coeff(&self, u: usize, v: usize) -> u64 {
        self.coeffs
            .get(u)
            .and_then(|row| row.get(v))
            .copied()
            .unwrap_or(0)
    }

    /// Total mass. For a weight enumerator this is 2^k.
    pub fn total(&self) -> u64 {
        self.coeffs.iter().flatten().sum()
    }

    /// Smallest output weight v > 0 carrying any mass (the parameter p).
    pub fn min_output_weight(&self) -> Option<usize> {
        (1..=self.out_length()).find(|&v| self.coeffs.iter().any(|row| row[v] != 0))
    }

    /// Largest output weight carrying any mass.
    pub fn max_output_weight(&self) -> usize {
        (0..=self.out_length())
            .rev()
            .find(|&v| self.coeffs.iter().any(|row| row[v] != 0))
            .unwrap_or(0)
    }

    /// Marginal over input weights: coefficient v is the column sum
    /// `sum_u B[u][v]`. For the weight kind this equals the code's weight
    /// enumerator.
    pub fn output_marginal(&self) -> WeightEnumerator {
        let q = self.out_length();
        let coeffs = (0..=q)
            .map(|v| self.coeffs.iter().map(|row| row[v]).sum())
            .collect();
        WeightEnumerator {
            coeffs,
            kind: self.kind,
        }
    }

    /// Support pairs (u, v) with a nonzero coefficient.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, row) in self.coeffs.iter().enumerate() {
            for (v, &c) in row.iter().enumerate() {
                if c != 0 {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Evaluates B(x, y).
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for row in self.coeffs.iter().rev() {
            let inner = row.iter().rev().fold(0.0, |a, &c| a * y + c as f64);
            acc = acc * x + inner;
        }
        acc
    }
}

/// Exact binomial coefficient; n is at most [`MAX_DIM`] here so u64 never
/// overflows.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}
