//! Exact coefficient arithmetic: rationals, real quadratic field elements,
//! biquadratic towers, prime splitting and p-adic valuations, and rational
//! recognition from high-precision values.

mod padic;
mod primes;
mod quad;
mod rational;
mod reconstruct;
mod tower;

pub use padic::{ord_frkp, prime_split, PrimeIdealSpec, Splitting, ORD_INFINITY};
pub use primes::{factorize, is_prime, is_squarefree, squarefree_kernel};
pub use quad::{parse_quad, QuadFieldElem};
pub use rational::{format_rat, parse_rat, BigRat};
pub use reconstruct::rational_reconstruct;
pub use tower::TowerElem;
