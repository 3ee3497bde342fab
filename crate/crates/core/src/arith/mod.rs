//! Certified real arithmetic: dyadic enclosures, exact values, and
//! evaluation of linear-form residuals.

mod dyadic;
mod enclosure;
pub mod forms;
mod real;
mod sym;

pub use dyadic::Dyadic;
pub use enclosure::{int_root, Enclosure};
pub use forms::{dist_nearest_int, eval_residuals, FormSystem, MatrixFile, Residuals};
pub use real::{parse_rational, rational_string, ExactReal};
pub use sym::Sym;
