//! Binomial coefficient sums `S(a, d, r) = sum_b C(a, b d + r)` modulo prime
//! powers, the Galois ring arithmetic behind them, and mechanical checks of
//! the Glaisher and Carlitz congruences.

pub mod arith;
pub mod bernoulli;
pub mod cli;
pub mod congruences;
pub mod exact_eval;
pub mod galois_ring;

pub use congruences::{CheckReport, Claim};
pub use exact_eval::{sum_brute, sum_mod_multisection, sum_mod_polypow, sum_mod_reduced, SumSpec};
pub use galois_ring::{GrContext, GrElement};
