use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::group::{average_over, Group, GroupElement};
use crate::linalg::{c, canonical_basis, hermitian_eigen, identity, kron, null_space, unitarity_defect, CMat, CVec};
use crate::rep::{IrrepId, IrrepTable, UnitaryRep};

/// Eigenvalues of `J_z` closer than this to a half-integer are grouped.
const WEIGHT_TOL: f64 = 1e-6;
const KERNEL_TOL: f64 = 1e-9;

/// The copies of one irrep inside a representation.
///
/// Column `i·m + a` of `isometry` is basis vector `i` of `M_μ` in copy `a`,
/// so `B† U(g) B = U_μ(g) ⊗ I_m`.
#[derive(Clone, Debug)]
pub struct IsotypicBlock {
    pub irrep: IrrepId,
    pub label: String,
    pub irrep_dim: usize,
    pub multiplicity: usize,
    pub isometry: CMat,
}

impl IsotypicBlock {
    /// `Π_μ = B B†`.
    pub fn projector(&self) -> CMat {
        &self.isometry * self.isometry.adjoint()
    }

    /// Coefficients of `ψ` in this block as a `d_μ × m_μ` matrix.
    pub fn components(&self, psi: &CVec) -> CMat {
        let coeffs = self.isometry.adjoint() * psi;
        let m = self.multiplicity;
        CMat::from_fn(self.irrep_dim, m, |i, a| coeffs[i * m + a])
    }
}

/// `H = ⊕_μ M_μ ⊗ N_μ` with explicit isometries; irreps with zero
/// multiplicity are omitted.
#[derive(Clone, Debug)]
pub struct IsotypicDecomposition {
    dim: usize,
    blocks: Vec<IsotypicBlock>,
}

impl IsotypicDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[IsotypicBlock] {
        &self.blocks
    }

    pub fn block(&self, id: IrrepId) -> Option<&IsotypicBlock> {
        self.blocks.iter().find(|b| b.irrep == id)
    }

    pub fn multiplicities(&self) -> BTreeMap<IrrepId, usize> {
        self.blocks.iter().map(|b| (b.irrep, b.multiplicity)).collect()
    }

    /// Same decomposition with the multiplicity basis of `id` rotated by the
    /// unitary `w` (`B ↦ B (I ⊗ w)`).
    pub fn regauged(&self, id: IrrepId, w: &CMat) -> Result<Self> {
        let mut out = self.clone();
        let block = out
            .blocks
            .iter_mut()
            .find(|b| b.irrep == id)
            .ok_or_else(|| Error::UnknownIrrep(id.to_string()))?;
        if w.nrows() != block.multiplicity || unitarity_defect(w) > 1e-10 {
            return Err(Error::Validation("gauge matrix must be an m×m unitary".into()));
        }
        block.isometry = &block.isometry * kron(&identity(block.irrep_dim), w);
        Ok(out)
    }

    /// `max ‖Σ Π_μ − I‖` and `max ‖B_μ† B_ν − δ I‖`.
    pub fn orthogonality_defect(&self) -> f64 {
        let mut total = CMat::zeros(self.dim, self.dim);
        let mut worst: f64 = 0.0;
        for (i, a) in self.blocks.iter().enumerate() {
            total += a.projector();
            for (j, b) in self.blocks.iter().enumerate() {
                let gram = a.isometry.adjoint() * &b.isometry;
                let target = if i == j {
                    identity(gram.nrows())
                } else {
                    CMat::zeros(gram.nrows(), gram.ncols())
                };
                worst = worst.max(crate::linalg::max_abs_diff(&gram, &target));
            }
        }
        worst.max(crate::linalg::max_abs_diff(&total, &identity(self.dim)))
    }
}

fn check_same_group(rep: &UnitaryRep, table: &IrrepTable) -> Result<()> {
    if rep.group().same_group(table.group()) {
        Ok(())
    } else {
        Err(Error::Type("representation and irrep table are over different groups".into()))
    }
}

/// Nodes able to integrate products of `rep` matrix elements with spin
/// `two_j` Wigner elements.
fn nodes_covering(rep: &UnitaryRep, extra: u32) -> Vec<(GroupElement, f64)> {
    rep.group().with_capacity(rep.band().max(extra)).haar_nodes()
}

/// `Π_μ = d_μ ∫ dg conj(χ_μ(g)) U(g)`.
pub fn isotypic_projector(rep: &UnitaryRep, table: &IrrepTable, id: IrrepId) -> Result<CMat> {
    check_same_group(rep, table)?;
    let irrep = table.get(id)?;
    if let (Some(charges), IrrepId::Charge(n)) = (rep.charge_list(), id) {
        let diag = CVec::from_iterator(
            charges.len(),
            charges.iter().map(|k| c(if *k == n { 1.0 } else { 0.0 }, 0.0)),
        );
        return Ok(CMat::from_diagonal(&diag));
    }
    let extra = match id {
        IrrepId::Spin(tj) => tj,
        _ => 0,
    };
    let d = irrep.dim as f64;
    average_over(&nodes_covering(rep, extra), |g| {
        Ok(rep.matrix(g)? * (irrep.character(g)?.conj() * d))
    })
}

/// Isotypic decomposition of `rep` over the irreps in `table`.
///
/// Finite groups use matrix units `E_ij = d_μ ∫ conj(U_μ(g)_ij) U(g)`;
/// U(1) groups charges; SU(2) extracts highest-weight vectors from the
/// kernel of `J_+` on each `J_z` eigenspace and applies `J_−`.
pub fn decompose(rep: &UnitaryRep, table: &IrrepTable) -> Result<IsotypicDecomposition> {
    check_same_group(rep, table)?;
    let blocks = match rep.group().as_ref() {
        Group::Finite(_) => decompose_finite(rep, table)?,
        Group::U1 { .. } => decompose_charges(rep, table)?,
        Group::Su2 { .. } => decompose_spins(rep, table)?,
    };
    let covered: usize = blocks.iter().map(|b| b.irrep_dim * b.multiplicity).sum();
    if covered != rep.dim() {
        return Err(Error::Decomposition {
            message: format!(
                "irreps in the table cover {covered} of {} dimensions",
                rep.dim()
            ),
            residual_dim: rep.dim() - covered.min(rep.dim()),
        });
    }
    Ok(IsotypicDecomposition {
        dim: rep.dim(),
        blocks,
    })
}

fn decompose_finite(rep: &UnitaryRep, table: &IrrepTable) -> Result<Vec<IsotypicBlock>> {
    let nodes = rep.group().haar_nodes();
    let mats: Vec<CMat> = nodes
        .iter()
        .map(|(g, _)| rep.matrix(g))
        .collect::<Result<_>>()?;
    let mut blocks = Vec::new();
    for irrep in table.irreps() {
        let d = irrep.dim;
        let ir: Vec<CMat> = nodes
            .iter()
            .map(|(g, _)| irrep.matrix(g))
            .collect::<Result<_>>()?;
        let unit = |i: usize, j: usize| -> CMat {
            let mut acc = CMat::zeros(rep.dim(), rep.dim());
            for ((u, m), (_, w)) in mats.iter().zip(&ir).zip(&nodes) {
                acc += u * (m[(i, j)].conj() * (*w * d as f64));
            }
            acc
        };
        let e11 = unit(0, 0);
        let trace = e11.trace().re;
        let mult = trace.round();
        if (trace - mult).abs() > 1e-6 || mult < 0.0 {
            return Err(Error::Consistency(format!(
                "matrix unit of {} has non-integral trace {trace}",
                irrep.label
            )));
        }
        let mult = mult as usize;
        if mult == 0 {
            continue;
        }
        let seeds = canonical_basis(&e11, mult);
        let mut iso = CMat::zeros(rep.dim(), d * mult);
        for i in 0..d {
            let ei1 = if i == 0 { e11.clone() } else { unit(i, 0) };
            let col = &ei1 * &seeds;
            for a in 0..mult {
                iso.set_column(i * mult + a, &col.column(a));
            }
        }
        blocks.push(IsotypicBlock {
            irrep: irrep.id,
            label: irrep.label.clone(),
            irrep_dim: d,
            multiplicity: mult,
            isometry: iso,
        });
    }
    Ok(blocks)
}

fn decompose_charges(rep: &UnitaryRep, table: &IrrepTable) -> Result<Vec<IsotypicBlock>> {
    let charges = rep.charge_list().expect("U(1) reps carry charges");
    let distinct: std::collections::BTreeSet<i64> = charges.iter().copied().collect();
    let mut blocks = Vec::new();
    for n in distinct {
        let irrep = table.get(IrrepId::Charge(n))?;
        let cols: Vec<usize> = (0..charges.len()).filter(|k| charges[*k] == n).collect();
        let mut iso = CMat::zeros(rep.dim(), cols.len());
        for (a, k) in cols.iter().enumerate() {
            iso[(*k, a)] = c(1.0, 0.0);
        }
        blocks.push(IsotypicBlock {
            irrep: irrep.id,
            label: irrep.label.clone(),
            irrep_dim: 1,
            multiplicity: cols.len(),
            isometry: iso,
        });
    }
    Ok(blocks)
}

fn decompose_spins(rep: &UnitaryRep, table: &IrrepTable) -> Result<Vec<IsotypicBlock>> {
    let [jx, jy, jz] = rep.su2_generators().expect("SU(2) reps carry generators");
    let jp = jx + jy * c(0.0, 1.0);
    let jm = jp.adjoint();
    let (vals, vecs) = hermitian_eigen(jz);
    let mut blocks = Vec::new();
    for tj in (0..=rep.band()).rev() {
        let j = tj as f64 / 2.0;
        let cols: Vec<usize> = (0..vals.len())
            .filter(|&k| (vals[k] - j).abs() < WEIGHT_TOL)
            .collect();
        if cols.is_empty() {
            continue;
        }
        let mut space = CMat::zeros(rep.dim(), cols.len());
        for (a, k) in cols.iter().enumerate() {
            space.set_column(a, &vecs.column(*k));
        }
        let kernel = null_space(&(&jp * &space), KERNEL_TOL);
        let mult = kernel.ncols();
        if mult == 0 {
            continue;
        }
        let top = &space * &kernel;
        let top = canonical_basis(&(&top * top.adjoint()), mult);
        let irrep = table.get(IrrepId::Spin(tj))?;
        let d = tj as usize + 1;
        let mut iso = CMat::zeros(rep.dim(), d * mult);
        let mut current = top;
        for i in 0..d {
            for a in 0..mult {
                iso.set_column(i * mult + a, &current.column(a));
            }
            let m = j - i as f64;
            let norm = (j * (j + 1.0) - m * (m - 1.0)).sqrt();
            if i + 1 < d {
                current = (&jm * &current) / c(norm, 0.0);
            }
        }
        blocks.push(IsotypicBlock {
            irrep: irrep.id,
            label: irrep.label.clone(),
            irrep_dim: d,
            multiplicity: mult,
            isometry: iso,
        });
    }
    blocks.sort_by_key(|b| b.irrep);
    Ok(blocks)
}

/// `V = Σ_μ B_μ (I_{d_μ} ⊗ V_μ) B_μ†` from one `m_μ × m_μ` unitary per
/// occurring irrep.
pub fn invariant_unitary(decomp: &IsotypicDecomposition, blocks: &BTreeMap<IrrepId, CMat>) -> Result<CMat> {
    let mut v = CMat::zeros(decomp.dim, decomp.dim);
    for b in &decomp.blocks {
        let w = blocks
            .get(&b.irrep)
            .ok_or_else(|| Error::Validation(format!("no block given for irrep {}", b.label)))?;
        if w.nrows() != b.multiplicity || w.ncols() != b.multiplicity {
            return Err(Error::Validation(format!(
                "block for {} must be {0}×{0}",
                b.multiplicity
            )));
        }
        if unitarity_defect(w) > 1e-10 {
            return Err(Error::Validation(format!("block for {} is not unitary", b.label)));
        }
        v += &b.isometry * kron(&identity(b.irrep_dim), w) * b.isometry.adjoint();
    }
    if let Some(extra) = blocks.keys().find(|k| decomp.block(**k).is_none()) {
        return Err(Error::Validation(format!("irrep {extra} does not occur")));
    }
    Ok(v)
}
