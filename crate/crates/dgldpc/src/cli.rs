//! Command-line interface: JSON ensemble descriptions in, CSV curves and
//! JSON reports out.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;
use thiserror::Error;

use crate::ensemble::{build_ensemble, CnSpec, Ensemble, EnsembleError, VnSpec};
use crate::gf2codes::{
    BinaryMatrix, CodeError, EnumeratorKind, IoWeightEnumerator, WeightEnumerator,
    MAX_IO_STOPPING_DIM,
};
use crate::oracle::{self, FiniteInstance, OracleError};
use crate::smallalpha::{self, SmallAlphaError};
use crate::spectral::{self, SpectralError};

/// Exit code for malformed or inconsistent input.
pub const EXIT_SCHEMA: i32 = 2;
/// Exit code for numerical failure on well-formed input.
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => EXIT_SCHEMA,
            CliError::Solver(_) => EXIT_SOLVER,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Schema(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Schema(e.to_string())
    }
}

impl From<EnsembleError> for CliError {
    fn from(e: EnsembleError) -> Self {
        CliError::Schema(e.to_string())
    }
}

impl From<CodeError> for CliError {
    fn from(e: CodeError) -> Self {
        CliError::Schema(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Schema(e.to_string())
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::OutOfDomain { .. } | SpectralError::AlphaAtOrAboveMax { .. } => {
                CliError::Schema(e.to_string())
            }
            other => CliError::Solver(other.to_string()),
        }
    }
}

impl From<SmallAlphaError> for CliError {
    fn from(e: SmallAlphaError) -> Self {
        CliError::Solver(e.to_string())
    }
}

/// JSON description of an ensemble.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleFile {
    #[serde(default)]
    pub metadata: Option<Metadata>,
    pub variable_nodes: Vec<VariableEntry>,
    pub check_nodes: Vec<CheckEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableEntry {
    #[serde(default)]
    pub name: Option<String>,
    pub lambda: f64,
    pub code: CodeSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckEntry {
    #[serde(default)]
    pub name: Option<String>,
    pub rho: f64,
    pub code: CodeSpec,
}

/// JSON description of one local code.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    /// One of repetition, spc_cyclic, spc_systematic, spc_antisystematic,
    /// generator, wef.
    pub kind: String,
    #[serde(default)]
    pub length: Option<usize>,
    #[serde(default)]
    pub dimension: Option<usize>,
    /// Generator rows as 0/1 strings, leftmost character = first column.
    #[serde(default)]
    pub rows: Option<Vec<String>>,
    /// Weight enumerator coefficients (check side).
    #[serde(default)]
    pub coeffs: Option<Vec<u64>>,
    /// Input-output weight coefficients `B[u][v]` (variable side).
    #[serde(default)]
    pub io_coeffs: Option<Vec<Vec<u64>>>,
}

fn reject_field<T>(kind: &str, field: &str, value: &Option<T>) -> Result<(), CliError> {
    if value.is_some() {
        return Err(CliError::Schema(format!(
            "code kind \"{kind}\" does not take the field \"{field}\""
        )));
    }
    Ok(())
}

fn required<T: Clone>(kind: &str, field: &str, value: &Option<T>) -> Result<T, CliError> {
    value
        .clone()
        .ok_or_else(|| CliError::Schema(format!("code kind \"{kind}\" requires \"{field}\"")))
}

impl CodeSpec {
    /// Builds the generator matrix for the matrix-backed kinds; None for
    /// coefficient-only descriptions.
    pub fn matrix(&self) -> Result<Option<BinaryMatrix>, CliError> {
        let m = match self.kind.as_str() {
            "repetition" | "spc_cyclic" | "spc_systematic" | "spc_antisystematic" => {
                reject_field(&self.kind, "rows", &self.rows)?;
                reject_field(&self.kind, "coeffs", &self.coeffs)?;
                reject_field(&self.kind, "io_coeffs", &self.io_coeffs)?;
                reject_field(&self.kind, "dimension", &self.dimension)?;
                let length = required(&self.kind, "length", &self.length)?;
                match self.kind.as_str() {
                    "repetition" => BinaryMatrix::repetition(length)?,
                    "spc_cyclic" => BinaryMatrix::spc_cyclic(length)?,
                    "spc_systematic" => BinaryMatrix::spc_systematic(length)?,
                    _ => BinaryMatrix::spc_antisystematic(length)?,
                }
            }
            "generator" => {
                reject_field("generator", "coeffs", &self.coeffs)?;
                reject_field("generator", "io_coeffs", &self.io_coeffs)?;
                let rows = required("generator", "rows", &self.rows)?;
                let m = BinaryMatrix::from_strings(&rows)?;
                if let Some(q) = self.length {
                    if q != m.q() {
                        return Err(CliError::Schema(format!(
                            "generator length {} does not match row width {}",
                            q,
                            m.q()
                        )));
                    }
                }
                if let Some(k) = self.dimension {
                    if k != m.k() {
                        return Err(CliError::Schema(format!(
                            "generator dimension {} does not match row count {}",
                            k,
                            m.k()
                        )));
                    }
                }
                m
            }
            "wef" => {
                reject_field("wef", "rows", &self.rows)?;
                return Ok(None);
            }
            other => {
                return Err(CliError::Schema(format!("unknown code kind \"{other}\"")));
            }
        };
        Ok(Some(m))
    }

    fn check_wef_shape(&self, coeffs: &[u64]) -> Result<(), CliError> {
        if let Some(q) = self.length {
            if q + 1 != coeffs.len() {
                return Err(CliError::Schema(format!(
                    "wef length {} does not match {} coefficients",
                    q,
                    coeffs.len()
                )));
            }
        }
        if let Some(h) = self.dimension {
            let total: u64 = coeffs.iter().sum();
            if total != 1u64 << h {
                return Err(CliError::Schema(format!(
                    "wef dimension {h} does not match coefficient total {total}"
                )));
            }
        }
        Ok(())
    }

    pub fn to_vn_spec(&self, name: String, lambda: f64) -> Result<VnSpec, CliError> {
        let matrix = self.matrix()?;
        let io_coeffs = if matrix.is_none() {
            reject_field("wef", "coeffs", &self.coeffs)
                .map_err(|_| CliError::Schema(
                    "variable codes of kind \"wef\" take io_coeffs, not coeffs".into(),
                ))?;
            let io = required("wef", "io_coeffs", &self.io_coeffs)?;
            if let Some(q) = self.length {
                if io.first().map(|r| r.len()) != Some(q + 1) {
                    return Err(CliError::Schema(format!(
                        "wef length {q} does not match io_coeffs row width"
                    )));
                }
            }
            if let Some(k) = self.dimension {
                if io.len() != k + 1 {
                    return Err(CliError::Schema(format!(
                        "wef dimension {k} does not match io_coeffs row count"
                    )));
                }
            }
            Some(io)
        } else {
            None
        };
        Ok(VnSpec {
            name,
            lambda,
            matrix,
            io_coeffs,
        })
    }

    pub fn to_cn_spec(&self, name: String, rho: f64) -> Result<CnSpec, CliError> {
        let matrix = self.matrix()?;
        let wef_coeffs = if matrix.is_none() {
            reject_field("wef", "io_coeffs", &self.io_coeffs).map_err(|_| {
                CliError::Schema("check codes of kind \"wef\" take coeffs, not io_coeffs".into())
            })?;
            let coeffs = required("wef", "coeffs", &self.coeffs)?;
            self.check_wef_shape(&coeffs)?;
            Some(coeffs)
        } else {
            None
        };
        Ok(CnSpec {
            name,
            rho,
            matrix,
            wef_coeffs,
        })
    }
}

/// Normalizes fractions whose sum drifts from 1 by no more than `tol`.
fn renormalize(values: &mut [f64], side: &str, tol: f64) -> Result<(), CliError> {
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > tol {
        return Err(CliError::Schema(format!(
            "{side} fractions sum to {sum}, expected 1 within {tol}"
        )));
    }
    for v in values.iter_mut() {
        *v /= sum;
    }
    Ok(())
}

/// Parses an ensemble description and builds the ensemble for `kind`.
pub fn load_ensemble(text: &str, kind: EnumeratorKind) -> Result<(Ensemble, Option<String>), CliError> {
    let file: EnsembleFile = serde_json::from_str(text)?;
    if file.variable_nodes.is_empty() || file.check_nodes.is_empty() {
        return Err(CliError::Schema(
            "at least one variable and one check type are required".into(),
        ));
    }
    let mut lambdas: Vec<f64> = file.variable_nodes.iter().map(|v| v.lambda).collect();
    let mut rhos: Vec<f64> = file.check_nodes.iter().map(|c| c.rho).collect();
    renormalize(&mut lambdas, "variable", 1e-9)?;
    renormalize(&mut rhos, "check", 1e-9)?;

    let mut vns = Vec::with_capacity(file.variable_nodes.len());
    for (i, entry) in file.variable_nodes.iter().enumerate() {
        let name = entry.name.clone().unwrap_or_else(|| format!("v{i}"));
        vns.push(entry.code.to_vn_spec(name, lambdas[i])?);
    }
    let mut cns = Vec::with_capacity(file.check_nodes.len());
    for (i, entry) in file.check_nodes.iter().enumerate() {
        let name = entry.name.clone().unwrap_or_else(|| format!("c{i}"));
        cns.push(entry.code.to_cn_spec(name, rhos[i])?);
    }
    let label = file.metadata.and_then(|m| m.label);
    Ok((build_ensemble(&vns, &cns, kind)?, label))
}

fn read_ensemble(
    path: &PathBuf,
    kind: EnumeratorKind,
) -> Result<(Ensemble, Option<String>), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    load_ensemble(&text, kind)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    /// Codeword weight spectrum.
    Weight,
    /// Stopping sets under bounded-distance check decoding.
    SsBd,
    /// Stopping sets under maximum a posteriori check decoding.
    SsMap,
}

impl From<KindArg> for EnumeratorKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Weight => EnumeratorKind::Weight,
            KindArg::SsBd => EnumeratorKind::StoppingBd,
            KindArg::SsMap => EnumeratorKind::StoppingMap,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "dgldpc",
    version,
    about = "Asymptotic weight and stopping-set spectra of D-GLDPC ensembles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the growth rate over an alpha grid and emit CSV plus a summary.
    Curve(CurveArgs),
    /// Compute the critical exponent ratio, optionally with closed-form
    /// small-weight approximations.
    AlphaStar(AlphaStarArgs),
    /// Print weight and stopping-set enumerators of the local codes.
    Enumerate(EnumerateArgs),
    /// Exact finite-length expected enumerators and their growth exponents.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Ensemble description file.
    #[arg(long)]
    pub ensemble: PathBuf,
    #[arg(long, value_enum, default_value_t = KindArg::Weight)]
    pub kind: KindArg,
    /// Number of uniform grid points over the solvable domain.
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    /// Explicit comma-separated alpha values (overrides --points).
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Summary JSON path; stdout when --output is set, suppressed otherwise.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AlphaStarArgs {
    #[arg(long)]
    pub ensemble: PathBuf,
    #[arg(long, value_enum, default_value_t = KindArg::Weight)]
    pub kind: KindArg,
    /// Also evaluate the closed-form small-weight approximations.
    #[arg(long)]
    pub approx: bool,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// Ensemble description file; every local code is enumerated.
    #[arg(long, conflicts_with = "code")]
    pub ensemble: Option<PathBuf>,
    /// Inline JSON code description (same schema as the "code" field).
    #[arg(long)]
    pub code: Option<String>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub ensemble: PathBuf,
    #[arg(long, value_enum, default_value_t = KindArg::Weight)]
    pub kind: KindArg,
    /// Block lengths, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    /// Normalized weight whose finite-length exponent is tabulated.
    #[arg(long)]
    pub alpha: f64,
    /// Also print the exact expectations as rationals.
    #[arg(long)]
    pub exact: bool,
}

/// Formats one curve as CSV with 17 significant digits.
pub fn curve_csv(points: &[spectral::SpectralPoint]) -> String {
    let mut out = String::from("alpha,G,x0,y0,z0,beta,residual\n");
    for p in points {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            p.alpha, p.g, p.x0, p.y0, p.z0, p.beta, p.residual
        ));
    }
    out
}

fn write_or_print(path: &Option<PathBuf>, text: &str, to_stdout: bool) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Schema(format!("{}: {e}", p.display()))),
        None if to_stdout => {
            print!("{text}");
            Ok(())
        }
        None => Ok(()),
    }
}

fn run_curve(args: &CurveArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let kind: EnumeratorKind = args.kind.into();
    let (e, label) = read_ensemble(&args.ensemble, kind)?;
    let grid = match &args.alphas {
        Some(list) if !list.is_empty() => list.clone(),
        _ => spectral::default_grid(&e, args.points),
    };
    let curve = spectral::growth_curve(&e, &grid)?;
    let csv = curve_csv(&curve.points);

    let symmetry = if e.is_check_hybrid() && kind == EnumeratorKind::Weight {
        spectral::symmetry_report(&curve, &e).ok()
    } else {
        None
    };
    let classification = smallalpha::classify_growth(&e);
    let summary = json!({
        "label": label,
        "kind": kind,
        "design_rate": e.design_rate,
        "block_length_ratio": e.k_s,
        "max_normalized_edge_weight": e.m_bar,
        "alpha_max": e.alpha_max,
        "points": curve.points.len(),
        "alpha_star": curve.alpha_star,
        "stationary_alphas": curve.stationary_alphas,
        "peak": curve.peak.map(|(alpha, g)| json!({"alpha": alpha, "g": g})),
        "classification": classification,
        "validation": e.validate_assumptions(),
        "symmetry": symmetry,
        "runtime_seconds": start.elapsed().as_secs_f64(),
    });
    let summary_text = format!("{}\n", serde_json::to_string_pretty(&summary)?);

    write_or_print(&args.output, &csv, true)?;
    write_or_print(&args.summary, &summary_text, args.output.is_some())?;
    Ok(())
}

fn run_alpha_star(args: &AlphaStarArgs) -> Result<(), CliError> {
    let kind: EnumeratorKind = args.kind.into();
    let (e, label) = read_ensemble(&args.ensemble, kind)?;
    let classification = smallalpha::classify_growth(&e);
    let alpha_star = spectral::critical_exponent(&e)?;

    let mut approximations = serde_json::Value::Null;
    let mut note = serde_json::Value::Null;
    if args.approx {
        let data = smallalpha::small_alpha_data(&e)?;
        if data.t_exponent <= 0.0 {
            note = json!(
                "small-weight expansion unavailable: the alpha log alpha \
                 coefficient is not positive"
            );
        } else {
            let approx = smallalpha::alpha_star_approx(&e, &data)?;
            let rel = |v: f64| {
                (alpha_star > 0.0).then(|| (v - alpha_star).abs() / alpha_star)
            };
            approximations = json!({
                "general": approx.general,
                "general_relative_error": rel(approx.general),
                "gldpc": approx.gldpc,
                "variable_regular": approx.variable_regular,
                "regular_ldpc": approx.regular_ldpc,
                "expansion": {
                    "r": data.r,
                    "psi": data.psi,
                    "c": data.c,
                    "t_exponent": data.t_exponent,
                    "q1_root": data.q1_inv_1,
                },
            });
        }
    }

    let report = json!({
        "label": label,
        "kind": kind,
        "alpha_max": e.alpha_max,
        "classification": classification,
        "alpha_star": alpha_star,
        "approximations": approximations,
        "note": note,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn enumerator_json(w: &WeightEnumerator) -> serde_json::Value {
    json!({
        "coeffs": w.coeffs(),
        "min_weight": w.min_weight(),
        "polynomial": w.to_string(),
    })
}

fn io_json(io: &IoWeightEnumerator) -> serde_json::Value {
    json!({
        "coeffs": io.coeffs(),
        "min_output_weight": io.min_output_weight(),
    })
}

/// Enumerates one matrix-backed code: weight spectrum plus both stopping-set
/// spectra, with input-output refinements where the dimensions permit.
fn matrix_report(m: &BinaryMatrix) -> Result<serde_json::Value, CliError> {
    let io_weight = m.io_weight_enumerator()?;
    let io_stopping = if m.k() + m.q() <= MAX_IO_STOPPING_DIM {
        Some(io_json(&m.io_map_ssef()?))
    } else {
        None
    };
    let wef = m.weight_enumerator();
    Ok(json!({
        "length": m.q(),
        "dimension": m.k(),
        "all_ones_codeword": m.has_all_ones_codeword(),
        "weight": enumerator_json(&wef),
        "stopping_bd": enumerator_json(&wef.bd_ssef()?),
        "stopping_map": enumerator_json(&m.map_ssef()),
        "io_weight": io_json(&io_weight),
        "io_stopping_map": io_stopping,
    }))
}

fn run_enumerate(args: &EnumerateArgs) -> Result<(), CliError> {
    let report = if let Some(code_text) = &args.code {
        let code: CodeSpec = serde_json::from_str(code_text)?;
        match code.matrix()? {
            Some(m) => matrix_report(&m)?,
            None => {
                let coeffs = required("wef", "coeffs", &code.coeffs)?;
                code.check_wef_shape(&coeffs)?;
                let wef = WeightEnumerator::from_coeffs(coeffs, EnumeratorKind::Weight)?;
                json!({
                    "length": wef.length(),
                    "dimension": wef.dimension(),
                    "weight": enumerator_json(&wef),
                    "stopping_bd": enumerator_json(&wef.bd_ssef()?),
                })
            }
        }
    } else if let Some(path) = &args.ensemble {
        let (e, label) = read_ensemble(path, EnumeratorKind::Weight)?;
        let mut types = Vec::new();
        for t in &e.vn_types {
            let body = match &t.matrix {
                Some(m) => matrix_report(m)?,
                None => json!({
                    "length": t.q,
                    "dimension": t.k,
                    "io_weight": io_json(&t.weight_enumerator),
                }),
            };
            types.push(json!({"side": "variable", "name": t.name, "report": body}));
        }
        for t in &e.cn_types {
            let body = match &t.matrix {
                Some(m) => matrix_report(m)?,
                None => json!({
                    "length": t.s,
                    "dimension": t.h,
                    "weight": enumerator_json(&t.weight_enumerator),
                    "stopping_bd": enumerator_json(&t.weight_enumerator.bd_ssef()?),
                }),
            };
            types.push(json!({"side": "check", "name": t.name, "report": body}));
        }
        json!({"label": label, "types": types})
    } else {
        return Err(CliError::Schema(
            "enumerate requires --ensemble or --code".into(),
        ));
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn run_oracle(args: &OracleArgs) -> Result<(), CliError> {
    let kind: EnumeratorKind = args.kind.into();
    let (e, label) = read_ensemble(&args.ensemble, kind)?;
    if args.alpha <= 0.0 || args.alpha.is_nan() {
        return Err(CliError::Schema(format!(
            "alpha must be positive, got {}",
            args.alpha
        )));
    }
    let mut instances = Vec::with_capacity(args.n.len());
    for &n in &args.n {
        instances.push(FiniteInstance::new(&e, n)?);
    }
    let asymptotic = spectral::solve_point(&e, args.alpha).ok().map(|p| p.g);

    let rows = oracle::empirical_growth(&e, &instances, args.alpha);
    let mut row_values = Vec::with_capacity(rows.len());
    for (row, inst) in rows.iter().zip(&instances) {
        let exact = if args.exact {
            row.used_w.map(|w| {
                let profile = oracle::expected_profile(&e, inst);
                json!(profile[w].to_string())
            })
        } else {
            None
        };
        row_values.push(json!({
            "n": row.n,
            "block_length": inst.block_length,
            "edges": inst.edges,
            "requested_w": row.requested_w,
            "used_w": row.used_w,
            "value": row.value,
            "gap": match (row.value, asymptotic) {
                (Some(v), Some(a)) => json!(a - v),
                _ => serde_json::Value::Null,
            },
            "exact": exact,
        }));
    }
    let report = json!({
        "label": label,
        "kind": kind,
        "alpha": args.alpha,
        "asymptotic": asymptotic,
        "rows": row_values,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

/// Dispatches one parsed invocation.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Curve(args) => run_curve(args),
        Command::AlphaStar(args) => run_alpha_star(args),
        Command::Enumerate(args) => run_enumerate(args),
        Command::Oracle(args) => run_oracle(args),
    }
}
