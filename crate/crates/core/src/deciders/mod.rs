//! Decision procedures for unitary G-equivalence, G-equivalence and one-way
//! convertibility of pure states.

mod convert;
mod equiv;
mod pd;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

pub use convert::{convertible, convertible_chars, MAX_ITERATIONS};
pub use equiv::{g_equiv, max_invariant_fidelity, one_dim_reps, unitary_g_equiv, OneDimRep};
pub use pd::{positive_definite_check, PdCheck, PdFunction};

use crate::error::Result;
use crate::group::{Group, GroupElement};
use crate::linalg::{CMat, CVec};
use crate::rep::{decompose, IrrepTable, IsotypicDecomposition, UnitaryRep};
use crate::Tolerances;

/// A representation with its irrep table, decomposition and the matrices
/// `U(g)` on the Haar nodes, shared by every decision on that representation.
#[derive(Clone, Debug)]
pub struct RepContext {
    pub rep: UnitaryRep,
    pub table: IrrepTable,
    pub decomp: IsotypicDecomposition,
    pub tol: Tolerances,
    nodes: Vec<(GroupElement, f64, CMat)>,
}

impl RepContext {
    pub fn new(rep: UnitaryRep, table: IrrepTable, tol: Tolerances) -> Result<Self> {
        rep.validate(tol.representation)?;
        let decomp = decompose(&rep, &table)?;
        let nodes = rep
            .group()
            .haar_nodes()
            .into_iter()
            .map(|(g, w)| Ok((g, w, rep.matrix(&g)?)))
            .collect::<Result<_>>()?;
        Ok(RepContext {
            rep,
            table,
            decomp,
            tol,
            nodes,
        })
    }

    /// Lie groups use their canonical irrep table.
    pub fn lie(rep: UnitaryRep, tol: Tolerances) -> Result<Self> {
        let table = IrrepTable::for_lie(rep.group().clone())?;
        Self::new(rep, table, tol)
    }

    pub fn group(&self) -> &Arc<Group> {
        self.rep.group()
    }

    /// `(g, weight, U(g))` on the Haar nodes (all elements of a finite group).
    pub fn nodes(&self) -> &[(GroupElement, f64, CMat)] {
        &self.nodes
    }

    /// Direct values `⟨ψ|U(g)|ψ⟩` on the Haar nodes.
    pub fn node_values(&self, psi: &CVec) -> Vec<Complex64> {
        self.nodes.iter().map(|(_, _, u)| psi.dotc(&(u * psi))).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Yes,
    No,
    Undecided,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Yes => "yes",
            Outcome::No => "no",
            Outcome::Undecided => "undecided",
        }
    }

    /// Exit code of the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Yes => 0,
            Outcome::No => 1,
            Outcome::Undecided => 4,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Witness {
    /// `V` with `Vψ = φ` commuting with every `U(g)`.
    InvariantUnitary(CMat),
    /// `Θ` with `χ_φ = Θ·χ_ψ`.
    OneDimRep(OneDimRep),
    /// `f` with `χ_ψ = χ_φ·f`.
    PdFunction(PdFunction),
}

#[derive(Clone, Debug)]
pub enum Certificate {
    /// Entry of `ρ^(μ)` where the two reductions differ.
    ReductionEntry {
        irrep: String,
        row: usize,
        col: usize,
        psi: Complex64,
        phi: Complex64,
    },
    /// Group element at which compared values differ.
    Element {
        element: GroupElement,
        label: String,
        psi: Complex64,
        phi: Complex64,
        detail: String,
    },
    /// `χ_ψ(g)/χ_φ(g)` exceeds the bound `|f(g)| ≤ f(e) = 1`.
    PdBound {
        element: GroupElement,
        label: String,
        modulus: f64,
    },
    /// Negative eigenvalue of a Gram matrix or Fourier block.
    NegativeDirection {
        block: String,
        eigenvalue: f64,
        vector: CVec,
    },
    /// The linear constraints on `f` have no solution at all.
    Infeasible { residual: f64, detail: String },
}

/// Outcome of a decision with its evidence. `Yes` carries a witness, `No`
/// a certificate and `Undecided` a reason.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    pub certificate: Option<Certificate>,
    pub residuals: BTreeMap<String, f64>,
    pub reason: Option<String>,
}

impl Verdict {
    pub fn yes(witness: Witness) -> Self {
        Verdict {
            outcome: Outcome::Yes,
            witness: Some(witness),
            certificate: None,
            residuals: BTreeMap::new(),
            reason: None,
        }
    }

    pub fn no(certificate: Certificate) -> Self {
        Verdict {
            outcome: Outcome::No,
            witness: None,
            certificate: Some(certificate),
            residuals: BTreeMap::new(),
            reason: None,
        }
    }

    pub fn undecided(reason: impl Into<String>) -> Self {
        Verdict {
            outcome: Outcome::Undecided,
            witness: None,
            certificate: None,
            residuals: BTreeMap::new(),
            reason: Some(reason.into()),
        }
    }

    pub fn with_residual(mut self, name: &str, value: f64) -> Self {
        self.residuals.insert(name.to_string(), value);
        self
    }

    pub fn with_residuals(mut self, residuals: &BTreeMap<String, f64>) -> Self {
        self.residuals.extend(residuals.iter().map(|(k, v)| (k.clone(), *v)));
        self
    }
}

/// Human-readable name of a group element.
pub fn element_label(group: &Group, g: &GroupElement) -> String {
    match (group, g) {
        (Group::Finite(fg), GroupElement::Finite(i)) if *i < fg.order() => fg.label(*i).to_string(),
        _ => g.to_string(),
    }
}
