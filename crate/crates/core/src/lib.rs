//! Asymmetry properties of pure states under symmetric (G-covariant) dynamics.
//!
//! A pure state `ψ` carrying a unitary representation `U` of a group `G` is
//! classified by its characteristic function `χ_ψ(g) = ⟨ψ|U(g)|ψ⟩`, or dually
//! by its reduction onto irreps `{ρ^(μ)}`. This crate computes both
//! descriptions, converts between them with the group Fourier transform, and
//! decides three interconversion questions:
//!
//! - unitary G-equivalence (equal reductions, equal `χ`),
//! - G-equivalence (`χ_φ = Θ · χ_ψ` for a one-dimensional representation `Θ`),
//! - one-way convertibility (`χ_ψ = χ_φ · f` for a positive definite `f`),
//!
//! together with the necessary conditions for reversible asymptotic
//! conversion built from covariance matrices of Lie-algebra generators.
//!
//! Supported groups are finite groups with supplied irrep tables (a small
//! built-in catalog is provided), `U(1)` and `SU(2)`.

pub mod asymptotic;
pub mod charfn;
pub mod cli;
pub mod deciders;
pub mod error;
pub mod group;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod rep;

pub use charfn::{CharFn, IrrepReduction, PureState, SymmetrySubgroup};
pub use error::{Error, Result};
pub use group::{FiniteGroup, Group, GroupElement, Quaternion};
pub use linalg::{CMat, CVec};
pub use rep::{IrrepId, IrrepTable, IsotypicDecomposition, UnitaryRep};

/// Numerical thresholds shared by the deciders.
///
/// Every value must lie in `(0, 1e-2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    /// Threshold for every tested equality (reductions, `χ` values, witnesses).
    pub equality: f64,
    /// `|χ(g)|` below this counts as a zero.
    pub zero: f64,
    /// Smallest admissible eigenvalue is `-psd`.
    pub psd: f64,
    /// `|χ(g)| ≥ 1 - sym` marks a stabilizer element.
    pub sym: f64,
    /// Maximum relative residual of the covariance rate fit.
    pub rate: f64,
    /// Convergence threshold of the alternating-projection search.
    pub feasibility: f64,
    /// Rank threshold for kernels and multiplicity extraction.
    pub kernel: f64,
    /// Unitarity and homomorphism checks on representations.
    pub representation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            equality: 1e-8,
            zero: 1e-10,
            psd: 1e-9,
            sym: 1e-8,
            rate: 1e-6,
            feasibility: 1e-7,
            kernel: 1e-9,
            representation: 1e-10,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 8] = [
        "equality",
        "zero",
        "psd",
        "sym",
        "rate",
        "feasibility",
        "kernel",
        "representation",
    ];

    /// Overrides one named tolerance.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = match name {
            "equality" => &mut self.equality,
            "zero" => &mut self.zero,
            "psd" => &mut self.psd,
            "sym" => &mut self.sym,
            "rate" => &mut self.rate,
            "feasibility" => &mut self.feasibility,
            "kernel" => &mut self.kernel,
            "representation" => &mut self.representation,
            other => {
                return Err(Error::Validation(format!(
                    "unknown tolerance `{other}` (known: {})",
                    Self::NAMES.join(", ")
                )))
            }
        };
        if !(value > 0.0 && value < 1e-2) {
            return Err(Error::Validation(format!(
                "tolerance {name}={value} outside (0, 1e-2)"
            )));
        }
        *slot = value;
        Ok(())
    }
}
