//! Exact scalars: rationals, cyclotomic fields, truncated Puiseux series and
//! matrices over them.

mod cyclotomic;
pub mod linalg;
mod matrix;
pub mod parse;
pub mod poly;
mod puiseux;
mod rational;

pub use cyclotomic::{cyclotomic_polynomial, Cyclotomic};
pub use matrix::LoopMatrix;
pub use puiseux::{Precision, PuiseuxSeries};
pub use rational::{ceil_i64, floor_i64, frac, gcd_i64, is_integer, lcm_i64, q, qi, to_i64, Q};
