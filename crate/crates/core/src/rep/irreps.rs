use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{Builtin, Group, GroupElement};
use crate::linalg::{c, cis, exp_minus_i, max_abs_diff, unitarity_defect, CMat};

/// Identifies an irrep: table index (finite groups), charge (U(1)) or `2j`
/// (SU(2)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IrrepId {
    Finite(usize),
    Charge(i64),
    Spin(u32),
}

impl fmt::Display for IrrepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrepId::Finite(i) => write!(f, "#{i}"),
            IrrepId::Charge(n) => write!(f, "n={n}"),
            IrrepId::Spin(tj) if tj % 2 == 0 => write!(f, "j={}", tj / 2),
            IrrepId::Spin(tj) => write!(f, "j={tj}/2"),
        }
    }
}

#[derive(Clone, Debug)]
enum IrrepKind {
    Matrices(Vec<CMat>),
    Charge(i64),
    Spin(u32),
}

#[derive(Clone, Debug)]
pub struct Irrep {
    pub id: IrrepId,
    pub label: String,
    pub dim: usize,
    kind: IrrepKind,
}

impl Irrep {
    /// `U_μ(g)`.
    pub fn matrix(&self, g: &GroupElement) -> Result<CMat> {
        match (&self.kind, g) {
            (IrrepKind::Matrices(m), GroupElement::Finite(i)) => m
                .get(*i)
                .cloned()
                .ok_or_else(|| Error::Type(format!("element #{i} out of range"))),
            (IrrepKind::Charge(n), GroupElement::U1(t)) => {
                Ok(CMat::from_element(1, 1, cis(*n as f64 * t)))
            }
            (IrrepKind::Spin(tj), GroupElement::Su2(q)) => Ok(wigner_d(*tj, q)),
            _ => Err(Error::Type(format!("element {g} does not match irrep {}", self.label))),
        }
    }

    pub fn character(&self, g: &GroupElement) -> Result<Complex64> {
        Ok(self.matrix(g)?.trace())
    }
}

/// Standard spin-`j` generators `(J_x, J_y, J_z)` in the basis
/// `m = j, j−1, …, −j`.
pub fn spin_generators(two_j: u32) -> [CMat; 3] {
    let d = two_j as usize + 1;
    let j = two_j as f64 / 2.0;
    let mut jz = CMat::zeros(d, d);
    let mut jp = CMat::zeros(d, d);
    for i in 0..d {
        let m = j - i as f64;
        jz[(i, i)] = c(m, 0.0);
        if i > 0 {
            // J+ |m⟩ = sqrt(j(j+1) − m(m+1)) |m+1⟩
            jp[(i - 1, i)] = c((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * c(0.5, 0.0);
    let jy = (&jp - &jm) * c(0.0, -0.5);
    [jx, jy, jz]
}

/// Wigner matrix `D^j(q) = exp(−iθ n·J)` for the rotation `q`.
pub fn wigner_d(two_j: u32, q: &crate::group::Quaternion) -> CMat {
    let (axis, angle) = q.axis_angle();
    let [jx, jy, jz] = spin_generators(two_j);
    let h = jx * c(axis[0], 0.0) + jy * c(axis[1], 0.0) + jz * c(axis[2], 0.0);
    exp_minus_i(&h, angle)
}

/// Complete list of irreps used to decompose representations of one group.
#[derive(Clone, Debug)]
pub struct IrrepTable {
    group: Arc<Group>,
    irreps: Vec<Irrep>,
}

impl IrrepTable {
    /// Table for a finite group from `(label, matrices)` entries; validates
    /// the homomorphism property, unitarity, irreducibility and pairwise
    /// inequivalence.
    pub fn finite(group: Arc<Group>, entries: Vec<(String, Vec<CMat>)>) -> Result<Self> {
        let g = group
            .as_finite()
            .ok_or_else(|| Error::Type("finite irrep table over a Lie group".into()))?;
        let n = g.order();
        let mut irreps = Vec::with_capacity(entries.len());
        for (idx, (label, mats)) in entries.into_iter().enumerate() {
            if mats.len() != n {
                return Err(Error::Format(format!(
                    "irrep {label}: {} matrices for a group of order {n}",
                    mats.len()
                )));
            }
            let dim = mats[0].nrows();
            if dim == 0 || mats.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
                return Err(Error::Format(format!("irrep {label}: inconsistent matrix shapes")));
            }
            for a in 0..n {
                if unitarity_defect(&mats[a]) > 1e-10 {
                    return Err(Error::Validation(format!(
                        "irrep {label}: matrix of {} is not unitary",
                        g.label(a)
                    )));
                }
                for b in 0..n {
                    if max_abs_diff(&(&mats[a] * &mats[b]), &mats[g.multiply(a, b)]) > 1e-10 {
                        return Err(Error::Validation(format!(
                            "irrep {label}: U({})U({}) ≠ U({}·{})",
                            g.label(a),
                            g.label(b),
                            g.label(a),
                            g.label(b)
                        )));
                    }
                }
            }
            irreps.push(Irrep {
                id: IrrepId::Finite(idx),
                label,
                dim,
                kind: IrrepKind::Matrices(mats),
            });
        }
        let table = IrrepTable { group, irreps };
        table.check_characters()?;
        Ok(table)
    }

    pub fn builtin(b: Builtin) -> (Arc<Group>, Self) {
        let group = Arc::new(Group::builtin(b));
        let table = IrrepTable::finite(group.clone(), b.irreps()).expect("catalog irreps are valid");
        (group, table)
    }

    /// Canonical table of a Lie group configuration: charges `−B..=B`
    /// (U(1)) or spins `0..=max_two_j/2` (SU(2)).
    pub fn for_lie(group: Arc<Group>) -> Result<Self> {
        let irreps = match group.as_ref() {
            Group::U1 { band_limit } => {
                let b = *band_limit as i64;
                (-b..=b)
                    .map(|n| Irrep {
                        id: IrrepId::Charge(n),
                        label: IrrepId::Charge(n).to_string(),
                        dim: 1,
                        kind: IrrepKind::Charge(n),
                    })
                    .collect()
            }
            Group::Su2 { max_two_j } => (0..=*max_two_j)
                .map(|tj| Irrep {
                    id: IrrepId::Spin(tj),
                    label: IrrepId::Spin(tj).to_string(),
                    dim: tj as usize + 1,
                    kind: IrrepKind::Spin(tj),
                })
                .collect(),
            Group::Finite(_) => {
                return Err(Error::Unsupported(
                    "finite groups need a supplied irrep table".into(),
                ))
            }
        };
        Ok(IrrepTable { group, irreps })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn get(&self, id: IrrepId) -> Result<&Irrep> {
        self.irreps
            .iter()
            .find(|i| i.id == id)
            .ok_or_else(|| Error::UnknownIrrep(id.to_string()))
    }

    pub fn by_label(&self, label: &str) -> Option<&Irrep> {
        self.irreps.iter().find(|i| i.label == label)
    }

    /// `⟨χ_μ, χ_ν⟩` (finite groups).
    pub fn character_inner_product(&self, a: &Irrep, b: &Irrep) -> Result<Complex64> {
        let g = self
            .group
            .as_finite()
            .ok_or_else(|| Error::Unsupported("character inner products on Lie groups".into()))?;
        let mut acc = c(0.0, 0.0);
        for e in 0..g.order() {
            let el = GroupElement::Finite(e);
            acc += a.character(&el)?.conj() * b.character(&el)?;
        }
        Ok(acc / g.order() as f64)
    }

    /// Irreducibility (`⟨χ,χ⟩ = 1`, equal to the commutant dimension) and
    /// pairwise inequivalence, tolerance 1e-9.
    fn check_characters(&self) -> Result<()> {
        for (i, a) in self.irreps.iter().enumerate() {
            for b in &self.irreps[i..] {
                let ip = self.character_inner_product(a, b)?;
                let expect = if a.id == b.id { 1.0 } else { 0.0 };
                if (ip - c(expect, 0.0)).norm() > 1e-9 {
                    return Err(Error::Validation(if a.id == b.id {
                        format!("irrep {} is reducible (⟨χ,χ⟩ = {})", a.label, ip.re)
                    } else {
                        format!("irreps {} and {} are equivalent", a.label, b.label)
                    }));
                }
            }
        }
        Ok(())
    }

    /// The one-dimensional entries.
    pub fn one_dimensional(&self) -> impl Iterator<Item = &Irrep> {
        self.irreps.iter().filter(|i| i.dim == 1)
    }
}
