//! Exact rationals, integer and ±1 polynomials, and real-root isolation.

pub mod isolate;
pub mod poly;
pub mod rational;

pub use isolate::{isolate_roots, isolate_sign_poly_roots, IsolationInterval};
pub use poly::{eval_sign, exact_divide, IntPoly, Sign, SignEvaluator, SignPolynomial};
pub use rational::{format_rational, parse_rational, ExactRational};
