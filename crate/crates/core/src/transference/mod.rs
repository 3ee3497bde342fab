//! Inhomogeneous bounds from homogeneous data: exact constants, the dual
//! parallelepipeds and their successive minima, a constructive solver and a
//! verifier over sampled targets.

mod constants;
mod minima;
mod solve;

pub use constants::{constants, cover_scale, cube_section_constant, omega, product_bound, TransferenceConstants};
pub use minima::{successive_minima, BoxKind, Parallelepiped, SuccessiveMinima};
pub use solve::{choose_nu, solve_inhom, verify_theorem1, AlphaCheck, InhomSolution, Theorem1Report, VerifyOptions};
