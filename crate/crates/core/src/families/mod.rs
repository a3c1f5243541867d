//! Closed-form parameter families: the planar two-term system, its
//! three-term extensions, and the second-order logarithmic family.
//!
//! Each constructor returns the system together with an integral that has
//! already been checked by the symbolic verifier.

mod extend;
mod log;
mod planar;

pub use extend::{extend_case1, extend_case2, Extension, ExtensionParams};
pub use log::{log_family, LogFamily, LogFamilyParams};
pub use planar::{planar_algebraic, planar_branch, planar_log, PlanarBranch, PlanarTheta};

use crate::derivative::Verification;
use crate::error::{Error, Result};

fn require_verified(proof: Verification, what: &str) -> Result<Verification> {
    if proof.holds {
        Ok(proof)
    } else {
        Err(Error::Contradiction(format!("{what} does not verify")))
    }
}
