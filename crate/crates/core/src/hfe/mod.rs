//! Dembowski-Ostrom polynomials, a toy HFE cryptosystem, and a key-recovery
//! attack on it.

pub mod attack;
pub mod do_poly;
pub mod scenario;
pub mod scheme;

pub use attack::{attack_gcldf, decrypt_with, is_left_factor, Recovered};
pub use do_poly::{do_check, DOPoly, DeltaResult, DoCheck, SparsePoly};
pub use scenario::{run_scenario, InstanceReport, Outcome, ScenarioReport};
pub use scheme::{
    default_bound, hfe_decrypt, hfe_encrypt, hfe_keygen, random_permutation, to_multivariate, HfeKeyPair,
    MultivariateKey, PublicKey, QuadForm, SecretKey,
};
