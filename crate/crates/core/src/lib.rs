//! Symbol loops in `SL_n` over polynomial rings, their translation to and
//! from Steinberg-group words, and brute-force oracles for `K_2` and `H_2`.

pub mod acceptance;
pub mod arith;
pub mod chevalley;
pub mod error;
pub mod exec;
pub mod factorization;
pub mod json;
pub mod loops;
pub mod oracles;
pub mod simplicial;
pub mod steinberg;

pub use error::{Error, Result};
pub use exec::Exec;
