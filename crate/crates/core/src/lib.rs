//! Linearized (p^s-) polynomials over finite fields and their complete
//! decomposition through the skew-polynomial ring `F_q[Y; σ]`, together with
//! Dembowski-Ostrom polynomials, a toy HFE cryptosystem, and a GCLDF-based
//! key-recovery attack on it.
//!
//! Everything is sized for desk-scale fields (`q <= 2^20`) so that each
//! algorithm can be checked against exhaustive enumeration.

pub mod decompose;
pub mod error;
pub mod field;
pub mod fp_linalg;
pub mod fp_poly;
pub mod harness;
pub mod hfe;
pub mod linops;
pub mod serial;
pub mod skew;

pub use decompose::{
    decompose_complete, decompose_linpoly, find_zero_divisor, oracle_decompose, split_once,
    Decomposition, EigenRing, Split, ZeroDivisor, ZeroDivisorSearch,
};
pub use error::{Error, Result};
pub use field::{FieldCtx, FqElem};
pub use fp_linalg::FpMatrix;
pub use fp_poly::FpPoly;
pub use harness::{estimate_split_success, SplitStats};
pub use hfe::{
    attack_gcldf, do_check, hfe_decrypt, hfe_encrypt, hfe_keygen, is_left_factor,
    to_multivariate, DOPoly, DeltaResult, HfeKeyPair, MultivariateKey, PublicKey, Recovered,
    SecretKey, SparsePoly,
};
pub use linops::{LinMatrix, LinPoly};
pub use skew::{gcldf_lin, phi_inv, phi_map, Gcldf, Side, SkewPoly};
