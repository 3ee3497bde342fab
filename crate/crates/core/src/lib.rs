//! Best approximations, irrationality functions and inhomogeneous
//! transference bounds for systems of linear forms.
//!
//! All quantities are certified: reals carry exact symbolic values next to
//! dyadic enclosures, and every comparison either is decided exactly or
//! fails loudly with [`Error::PrecisionCap`].

pub mod approx;
pub mod arith;
pub mod error;
pub mod eta;
pub mod spectrum;
pub mod transference;

pub use approx::{best_approximations, psi, verify_minkowski_chain, BestApproxChain, BestApproxRecord, PsiSample};
pub use arith::{Dyadic, Enclosure, ExactReal, FormSystem, Sym};
pub use error::{Error, ErrorClass, Result};
pub use eta::{eta_margin, eta_search, EtaCandidate};
pub use spectrum::{product_min, regularity_profile, ProductEstimate, RegularityProfile};
pub use transference::{
    choose_nu, constants, omega, solve_inhom, successive_minima, verify_theorem1, BoxKind, InhomSolution,
    Parallelepiped, SuccessiveMinima, Theorem1Report, TransferenceConstants, VerifyOptions,
};

/// Precision and resource limits shared by all operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    /// Width of reported enclosures is at most `2^-precision_bits`.
    pub precision_bits: u32,
    /// Refinement stops with an error beyond this many bits.
    pub cap_bits: u32,
    /// Cap on the number of lattice points any single enumeration visits.
    pub budget: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            precision_bits: 256,
            cap_bits: 4096,
            budget: 50_000_000,
        }
    }
}

impl Settings {
    pub(crate) fn check_budget(&self, needed: u128) -> Result<()> {
        if needed > self.budget as u128 {
            Err(Error::BudgetExceeded {
                needed: needed.to_string(),
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }
}
