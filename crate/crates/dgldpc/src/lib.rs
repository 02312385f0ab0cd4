//! Asymptotic weight and stopping-set size spectra of irregular
//! doubly-generalized LDPC (D-GLDPC) code ensembles.
//!
//! The library computes, for an ensemble described by variable-node and
//! check-node local codes with edge fractions:
//!
//! - exact GF(2) enumerators of the local codes ([`gf2codes`]): weight,
//!   input-output weight, and erasure stopping-set enumerators under
//!   bounded-distance and MAP decoding;
//! - the growth rate `G(alpha)` of the ensemble-average spectrum by Newton
//!   continuation on the saddle-point system ([`spectral`]), together with
//!   closed forms for check-hybrid and Tanner ensembles;
//! - growth-behavior classification and small-weight expansions of `G`
//!   including closed-form approximations of the critical exponent ratio
//!   ([`smallalpha`]);
//! - an exact finite-length big-integer oracle for the expected enumerator
//!   ([`oracle`]), used to validate the asymptotics empirically.
//!
//! The `dgldpc` binary exposes these as batch commands over JSON ensemble
//! specifications ([`cli`]).

pub mod cli;
pub mod ensemble;
pub mod gf2codes;
pub mod oracle;
pub mod smallalpha;
pub mod spectral;
