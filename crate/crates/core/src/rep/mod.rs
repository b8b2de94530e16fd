//! Unitary representations, irrep tables and isotypic decompositions.

mod decompose;
mod irreps;

use std::sync::Arc;

pub use decompose::{decompose, invariant_unitary, isotypic_projector, IsotypicBlock, IsotypicDecomposition};
pub use irreps::{spin_generators, wigner_d, Irrep, IrrepId, IrrepTable};

use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::linalg::{
    block_diag, c, cis, commutator, exp_minus_i, hermitian_eigen, hermiticity_defect, identity,
    kron, max_abs_diff, unitarity_defect, CMat,
};

#[derive(Clone, Debug)]
enum RepData {
    Matrices(Vec<CMat>),
    Charges(Vec<i64>),
    Generators { j: [CMat; 3], max_two_j: u32 },
}

/// A unitary representation `g ↦ U(g)` on `C^dim`.
#[derive(Clone, Debug)]
pub struct UnitaryRep {
    group: Arc<Group>,
    dim: usize,
    data: RepData,
}

/// Outcome of [`check_representation`].
#[derive(Clone, Debug, PartialEq)]
pub struct RepCheck {
    pub ok: bool,
    pub max_violation: f64,
    /// Where the worst violation occurred.
    pub location: Option<String>,
}

impl UnitaryRep {
    /// Finite-group representation from one matrix per element (shape-checked
    /// only; see [`check_representation`]).
    pub fn finite(group: Arc<Group>, matrices: Vec<CMat>) -> Result<Self> {
        let g = group
            .as_finite()
            .ok_or_else(|| Error::Type("matrix representation needs a finite group".into()))?;
        if matrices.len() != g.order() {
            return Err(Error::Format(format!(
                "{} matrices for a group of order {}",
                matrices.len(),
                g.order()
            )));
        }
        let dim = matrices.first().map_or(0, |m| m.nrows());
        if matrices.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::Format("representation matrices differ in shape".into()));
        }
        Ok(UnitaryRep {
            group,
            dim,
            data: RepData::Matrices(matrices),
        })
    }

    /// `U(θ) = diag(e^{i n_k θ})`.
    pub fn charges(group: Arc<Group>, charges: Vec<i64>) -> Result<Self> {
        let Group::U1 { band_limit } = group.as_ref() else {
            return Err(Error::Type("charge representation needs U(1)".into()));
        };
        if let Some(n) = charges.iter().find(|n| n.unsigned_abs() > *band_limit as u64) {
            return Err(Error::Validation(format!(
                "charge {n} exceeds band limit {band_limit}"
            )));
        }
        Ok(UnitaryRep {
            dim: charges.len(),
            group,
            data: RepData::Charges(charges),
        })
    }

    /// SU(2) representation `U(q) = exp(−iθ n·J)` from Hermitian generators;
    /// validates commutation relations and the spin range.
    pub fn generators(group: Arc<Group>, jx: CMat, jy: CMat, jz: CMat) -> Result<Self> {
        let Group::Su2 { max_two_j: cap } = group.as_ref() else {
            return Err(Error::Type("generator representation needs SU(2)".into()));
        };
        let dim = jx.nrows();
        for (name, m) in [("Jx", &jx), ("Jy", &jy), ("Jz", &jz)] {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::Format(format!("generator {name} has wrong shape")));
            }
        }
        let check = check_su2_generators(&jx, &jy, &jz, 1e-10);
        if !check.ok {
            return Err(Error::Validation(format!(
                "su(2) generators invalid: {} (violation {:.3e})",
                check.location.unwrap_or_default(),
                check.max_violation
            )));
        }
        let (vals, _) = hermitian_eigen(&jz);
        let max_two_j = vals
            .iter()
            .map(|v| (2.0 * v.abs()).round() as u32)
            .max()
            .unwrap_or(0);
        if max_two_j > *cap {
            return Err(Error::Validation(format!(
                "representation contains 2j = {max_two_j} but the group is configured for 2j ≤ {cap}"
            )));
        }
        Ok(UnitaryRep {
            group,
            dim,
            data: RepData::Generators {
                j: [jx, jy, jz],
                max_two_j,
            },
        })
    }

    /// Regular representation of a finite group, `U(g) e_h = e_{gh}`.
    pub fn regular(group: Arc<Group>) -> Result<Self> {
        let g = group
            .as_finite()
            .ok_or_else(|| Error::Type("regular representation needs a finite group".into()))?;
        let n = g.order();
        let mats = (0..n)
            .map(|a| {
                let mut m = CMat::zeros(n, n);
                for h in 0..n {
                    m[(g.multiply(a, h), h)] = c(1.0, 0.0);
                }
                m
            })
            .collect();
        UnitaryRep::finite(group, mats)
    }

    /// Direct sum of irreps from a table with the given multiplicities.
    pub fn from_irreps(table: &IrrepTable, content: &[(IrrepId, usize)]) -> Result<Self> {
        let group = table.group().clone();
        let mut parts: Vec<UnitaryRep> = Vec::new();
        for (id, mult) in content {
            let irrep = table.get(*id)?;
            for _ in 0..*mult {
                let rep = match (group.as_ref(), id) {
                    (Group::Finite(g), _) => {
                        let mats = (0..g.order())
                            .map(|e| irrep.matrix(&GroupElement::Finite(e)))
                            .collect::<Result<Vec<_>>>()?;
                        UnitaryRep::finite(group.clone(), mats)?
                    }
                    (Group::U1 { .. }, IrrepId::Charge(n)) => UnitaryRep::charges(group.clone(), vec![*n])?,
                    (Group::Su2 { .. }, IrrepId::Spin(tj)) => {
                        let [jx, jy, jz] = spin_generators(*tj);
                        UnitaryRep::generators(group.clone(), jx, jy, jz)?
                    }
                    _ => return Err(Error::Type(format!("irrep {id} does not match the group"))),
                };
                parts.push(rep);
            }
        }
        let mut iter = parts.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::Format("empty irrep content".into()))?;
        iter.try_fold(first, |acc, r| direct_sum_rep(&acc, &r))
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn charge_list(&self) -> Option<&[i64]> {
        match &self.data {
            RepData::Charges(c) => Some(c),
            _ => None
        }
    }

    pub fn matrices(&self) -> Option<&[CMat]> {
        match &self.data {
            RepData::Matrices(m) => Some(m),
            _ => None,
        }
    }

    /// `(J_x, J_y, J_z)` of an SU(2) representation.
    pub fn su2_generators(&self) -> Option<&[CMat; 3]> {
        match &self.data {
            RepData::Generators { j, .. } => Some(j),
            _ => None,
        }
    }

    /// Largest `|n|` (U(1)) or `2j` (SU(2)) present; 0 for finite groups.
    pub fn band(&self) -> u32 {
        match &self.data {
            RepData::Matrices(_) => 0,
            RepData::Charges(ch) => ch.iter().map(|n| n.unsigned_abs() as u32).max().unwrap_or(0),
            RepData::Generators { max_two_j, .. } => *max_two_j,
        }
    }

    /// Hermitian generators of the Lie-algebra action: `diag(n)` for U(1)
    /// (so `U(θ) = exp(iθN)`), `(J_x, J_y, J_z)` for SU(2).
    pub fn lie_generators(&self) -> Option<Vec<CMat>> {
        match &self.data {
            RepData::Matrices(_) => None,
            RepData::Charges(ch) => Some(vec![CMat::from_diagonal(&crate::CVec::from_iterator(
                ch.len(),
                ch.iter().map(|n| c(*n as f64, 0.0)),
            ))]),
            RepData::Generators { j, .. } => Some(j.to_vec()),
        }
    }

    /// `U(g)`.
    pub fn matrix(&self, g: &GroupElement) -> Result<CMat> {
        match (&self.data, g) {
            (RepData::Matrices(m), GroupElement::Finite(i)) => m
                .get(*i)
                .cloned()
                .ok_or_else(|| Error::Type(format!("element #{i} out of range"))),
            (RepData::Charges(ch), GroupElement::U1(t)) => Ok(CMat::from_diagonal(
                &crate::CVec::from_iterator(ch.len(), ch.iter().map(|n| cis(*n as f64 * t))),
            )),
            (RepData::Generators { j, .. }, GroupElement::Su2(q)) => {
                let (axis, angle) = q.axis_angle();
                let h = &j[0] * c(axis[0], 0.0) + &j[1] * c(axis[1], 0.0) + &j[2] * c(axis[2], 0.0);
                Ok(exp_minus_i(&h, angle))
            }
            _ => Err(Error::Type(format!(
                "element {g} does not act through a {} representation",
                self.group.kind_name()
            ))),
        }
    }

    /// `W U(g) W†` for a fixed unitary `W`.
    pub fn conjugated(&self, w: &CMat) -> Result<Self> {
        if w.nrows() != self.dim || unitarity_defect(w) > 1e-10 {
            return Err(Error::Validation("conjugating matrix must be a unitary of rep dimension".into()));
        }
        let conj = |m: &CMat| w * m * w.adjoint();
        match &self.data {
            RepData::Matrices(ms) => UnitaryRep::finite(self.group.clone(), ms.iter().map(conj).collect()),
            RepData::Generators { j, .. } => {
                UnitaryRep::generators(self.group.clone(), conj(&j[0]), conj(&j[1]), conj(&j[2]))
            }
            RepData::Charges(_) => Err(Error::Unsupported(
                "U(1) representations are stored diagonally by charge".into(),
            )),
        }
    }

    /// `Err(Validation)` unless [`check_representation`] passes.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let check = check_representation(self, tol)?;
        if check.ok {
            Ok(())
        } else {
            Err(Error::Validation(format!(
                "not a unitary representation: {} (violation {:.3e})",
                check.location.unwrap_or_default(),
                check.max_violation
            )))
        }
    }
}

fn check_su2_generators(jx: &CMat, jy: &CMat, jz: &CMat, tol: f64) -> RepCheck {
    let mut worst = (0.0, None);
    let mut note = |v: f64, what: String| {
        if v > worst.0 {
            worst = (v, Some(what));
        }
    };
    for (name, m) in [("Jx", jx), ("Jy", jy), ("Jz", jz)] {
        note(hermiticity_defect(m), format!("{name} not Hermitian"));
    }
    let i = c(0.0, 1.0);
    note(max_abs_diff(&commutator(jx, jy), &(jz * i)), "[Jx,Jy] ≠ iJz".into());
    note(max_abs_diff(&commutator(jy, jz), &(jx * i)), "[Jy,Jz] ≠ iJx".into());
    note(max_abs_diff(&commutator(jz, jx), &(jy * i)), "[Jz,Jx] ≠ iJy".into());
    let (vals, _) = hermitian_eigen(jz);
    for v in vals {
        note((2.0 * v - (2.0 * v).round()).abs(), format!("Jz eigenvalue {v} not a half-integer"));
    }
    RepCheck {
        ok: worst.0 <= tol,
        max_violation: worst.0,
        location: worst.1,
    }
}

/// Verifies the representation invariants: for finite groups `U(e) = I`,
/// unitarity and `U(g)U(h) = U(gh)` on all pairs; for SU(2) Hermiticity,
/// the commutation relations and half-integer `J_z` spectrum. Charge
/// representations are valid by construction.
pub fn check_representation(rep: &UnitaryRep, tol: f64) -> Result<RepCheck> {
    match (&rep.data, rep.group.as_ref()) {
        (RepData::Matrices(ms), Group::Finite(g)) => {
            let mut worst = (0.0, None);
            let mut note = |v: f64, what: String| {
                if v > worst.0 {
                    worst = (v, Some(what));
                }
            };
            note(
                max_abs_diff(&ms[g.identity()], &identity(rep.dim)),
                "U(e) ≠ I".to_string(),
            );
            for a in 0..g.order() {
                note(unitarity_defect(&ms[a]), format!("U({}) not unitary", g.label(a)));
                for b in 0..g.order() {
                    note(
                        max_abs_diff(&(&ms[a] * &ms[b]), &ms[g.multiply(a, b)]),
                        format!("U({})U({}) ≠ U({}·{})", g.label(a), g.label(b), g.label(a), g.label(b)),
                    );
                }
            }
            Ok(RepCheck {
                ok: worst.0 <= tol,
                max_violation: worst.0,
                location: worst.1,
            })
        }
        (RepData::Charges(_), Group::U1 { .. }) => Ok(RepCheck {
            ok: true,
            max_violation: 0.0,
            location: None,
        }),
        (RepData::Generators { j, .. }, Group::Su2 { .. }) => Ok(check_su2_generators(&j[0], &j[1], &j[2], tol)),
        _ => Err(Error::Format("representation data does not match its group".into())),
    }
}

fn merged_group(a: &UnitaryRep, b: &UnitaryRep, band: u32) -> Result<Arc<Group>> {
    if !a.group.same_group(&b.group) {
        return Err(Error::Type("representations are over different groups".into()));
    }
    let need = band.max(a.group.band()).max(b.group.band());
    if need == a.group.band() {
        Ok(a.group.clone())
    } else {
        Ok(Arc::new(a.group.with_capacity(need)))
    }
}

/// `U_1 ⊗ U_2`. For Lie groups the quadrature configuration grows to cover
/// the combined band.
pub fn tensor_rep(a: &UnitaryRep, b: &UnitaryRep) -> Result<UnitaryRep> {
    let group = merged_group(a, b, a.band() + b.band())?;
    match (&a.data, &b.data) {
        (RepData::Matrices(x), RepData::Matrices(y)) => {
            UnitaryRep::finite(group, x.iter().zip(y).map(|(p, q)| kron(p, q)).collect())
        }
        (RepData::Charges(x), RepData::Charges(y)) => {
            UnitaryRep::charges(group, x.iter().flat_map(|p| y.iter().map(move |q| p + q)).collect())
        }
        (RepData::Generators { j: x, .. }, RepData::Generators { j: y, .. }) => {
            let (ia, ib) = (identity(a.dim), identity(b.dim));
            let s = |k: usize| kron(&x[k], &ib) + kron(&ia, &y[k]);
            UnitaryRep::generators(group, s(0), s(1), s(2))
        }
        _ => Err(Error::Type("cannot tensor representations of different kinds".into())),
    }
}

/// `U_in ⊕ U_out` on the direct-sum space.
pub fn direct_sum_rep(a: &UnitaryRep, b: &UnitaryRep) -> Result<UnitaryRep> {
    let group = merged_group(a, b, a.band().max(b.band()))?;
    match (&a.data, &b.data) {
        (RepData::Matrices(x), RepData::Matrices(y)) => {
            UnitaryRep::finite(group, x.iter().zip(y).map(|(p, q)| block_diag(p, q)).collect())
        }
        (RepData::Charges(x), RepData::Charges(y)) => {
            UnitaryRep::charges(group, x.iter().chain(y).copied().collect())
        }
        (RepData::Generators { j: x, .. }, RepData::Generators { j: y, .. }) => {
            let s = |k: usize| block_diag(&x[k], &y[k]);
            UnitaryRep::generators(group, s(0), s(1), s(2))
        }
        _ => Err(Error::Type("cannot add representations of different kinds".into())),
    }
}
