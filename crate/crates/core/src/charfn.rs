//! Characteristic functions, reductions onto irreps and the Fourier pair
//! relating them.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{average_over, Group, GroupElement, Quaternion};
use crate::linalg::{c, cis, kron_vec, max_abs_diff, min_eigenvalue, CMat, CVec};
use crate::rep::{decompose, wigner_d, IrrepId, IrrepTable, IsotypicDecomposition, UnitaryRep};

const NORM_TOL: f64 = 1e-10;

/// Unit vector in a representation space.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: CVec,
}

impl PureState {
    /// Rejects vectors whose norm differs from 1 by more than 1e-10.
    pub fn new(amps: CVec) -> Result<Self> {
        let n = amps.norm();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::Validation(format!("state norm is {n}, expected 1")));
        }
        Ok(PureState { amps })
    }

    pub fn normalized(amps: CVec) -> Result<Self> {
        let n = amps.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Validation("cannot normalize a zero vector".into()));
        }
        Ok(PureState { amps: amps / c(n, 0.0) })
    }

    pub fn from_slice(amps: &[Complex64]) -> Result<Self> {
        Self::new(CVec::from_column_slice(amps))
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// Zero-padded embedding at `offset` inside a space of dimension `total`
    /// (direct-sum sectors).
    pub fn embed(&self, offset: usize, total: usize) -> Result<Self> {
        if offset + self.dim() > total {
            return Err(Error::Validation(format!(
                "sector [{offset}, {}) exceeds dimension {total}",
                offset + self.dim()
            )));
        }
        let mut v = CVec::zeros(total);
        v.rows_mut(offset, self.dim()).copy_from(&self.amps);
        Ok(PureState { amps: v })
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        PureState {
            amps: kron_vec(&self.amps, &other.amps),
        }
    }

    pub fn apply(&self, m: &CMat) -> Result<PureState> {
        PureState::new(m * &self.amps)
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amps.dotc(&other.amps)
    }
}

fn check_dim(psi: &PureState, dim: usize) -> Result<()> {
    if psi.dim() != dim {
        return Err(Error::Validation(format!(
            "state has dimension {} but the representation has {dim}",
            psi.dim()
        )));
    }
    Ok(())
}

/// `{ρ^(μ)}`: one `d_μ × d_μ` operator per irrep.
#[derive(Clone, Debug, PartialEq)]
pub struct IrrepReduction {
    pub blocks: BTreeMap<IrrepId, CMat>,
    pub labels: BTreeMap<IrrepId, String>,
}

impl IrrepReduction {
    pub fn total_trace(&self) -> f64 {
        self.blocks.values().map(|m| m.trace().re).sum()
    }

    /// Largest entrywise difference; irreps missing on one side count as 0.
    pub fn max_diff(&self, other: &IrrepReduction) -> f64 {
        let mut worst: f64 = 0.0;
        for id in self.blocks.keys().chain(other.blocks.keys()) {
            let d = match (self.blocks.get(id), other.blocks.get(id)) {
                (Some(a), Some(b)) if a.shape() == b.shape() => max_abs_diff(a, b),
                (Some(_), Some(_)) => f64::INFINITY,
                (Some(a), None) | (None, Some(a)) => crate::linalg::max_abs(a),
                (None, None) => 0.0,
            };
            worst = worst.max(d);
        }
        worst
    }

    /// Irrep and entry where `max_diff` is attained.
    pub fn first_difference(&self, other: &IrrepReduction, tol: f64) -> Option<(IrrepId, usize, usize, f64)> {
        let zero = |m: &CMat| CMat::zeros(m.nrows(), m.ncols());
        for id in self.blocks.keys().chain(other.blocks.keys()) {
            let a = self.blocks.get(id).cloned();
            let b = other.blocks.get(id).cloned();
            let (a, b) = match (a, b) {
                (Some(a), Some(b)) => (a, b),
                (Some(a), None) => (a.clone(), zero(&a)),
                (None, Some(b)) => (zero(&b), b),
                (None, None) => continue,
            };
            for i in 0..a.nrows() {
                for j in 0..a.ncols() {
                    let d = (a[(i, j)] - b[(i, j)]).norm();
                    if d > tol {
                        return Some((*id, i, j, d));
                    }
                }
            }
        }
        None
    }

    /// Smallest eigenvalue over all blocks.
    pub fn min_eigenvalue(&self) -> f64 {
        self.blocks.values().map(min_eigenvalue).fold(f64::INFINITY, f64::min)
    }

    /// Largest charge or `2j` with nonzero weight (above `tol`).
    pub fn band(&self, tol: f64) -> u32 {
        self.blocks
            .iter()
            .filter(|(_, m)| crate::linalg::max_abs(m) > tol)
            .map(|(id, _)| match id {
                IrrepId::Charge(n) => n.unsigned_abs() as u32,
                IrrepId::Spin(tj) => *tj,
                IrrepId::Finite(_) => 0,
            })
            .max()
            .unwrap_or(0)
    }
}

/// Matrix of a U(1) or SU(2) irrep at `g`.
pub(crate) fn lie_irrep_matrix(id: IrrepId, g: &GroupElement) -> Result<CMat> {
    match (id, g) {
        (IrrepId::Charge(n), GroupElement::U1(t)) => Ok(CMat::from_element(1, 1, cis(n as f64 * t))),
        (IrrepId::Spin(tj), GroupElement::Su2(q)) => Ok(wigner_d(tj, q)),
        _ => Err(Error::Type(format!("irrep {id} cannot be evaluated at {g}"))),
    }
}

/// `χ(g)`: a value table on a finite group, or the exact reduction on a Lie
/// group (values derived on demand).
#[derive(Clone, Debug)]
pub enum CharFn {
    Finite {
        group: Arc<Group>,
        values: Vec<Complex64>,
    },
    Lie {
        group: Arc<Group>,
        reduction: IrrepReduction,
    },
}

impl CharFn {
    pub fn group(&self) -> &Arc<Group> {
        match self {
            CharFn::Finite { group, .. } | CharFn::Lie { group, .. } => group,
        }
    }

    pub fn eval(&self, g: &GroupElement) -> Result<Complex64> {
        match (self, g) {
            (CharFn::Finite { values, .. }, GroupElement::Finite(i)) => values
                .get(*i)
                .copied()
                .ok_or_else(|| Error::Type(format!("element #{i} out of range"))),
            (CharFn::Lie { reduction, .. }, _) => {
                let mut acc = c(0.0, 0.0);
                for (id, rho) in &reduction.blocks {
                    acc += (rho * lie_irrep_matrix(*id, g)?).trace();
                }
                Ok(acc)
            }
            _ => Err(Error::Type(format!("element {g} does not belong to χ's group"))),
        }
    }

    /// Values on the deterministic sample grid of the group (every element
    /// for finite groups).
    pub fn grid_values(&self) -> Result<Vec<(GroupElement, Complex64)>> {
        self.group()
            .sample_grid()
            .into_iter()
            .map(|g| Ok((g, self.eval(&g)?)))
            .collect()
    }

    /// Value table (finite groups only).
    pub fn values(&self) -> Option<&[Complex64]> {
        match self {
            CharFn::Finite { values, .. } => Some(values),
            CharFn::Lie { .. } => None,
        }
    }

    pub fn reduction(&self) -> Option<&IrrepReduction> {
        match self {
            CharFn::Lie { reduction, .. } => Some(reduction),
            CharFn::Finite { .. } => None,
        }
    }

    /// Largest charge or `2j` in the support (0 for finite groups).
    pub fn band(&self) -> u32 {
        self.reduction().map_or(0, |r| r.band(0.0))
    }
}

/// `⟨ψ|U(g)|ψ⟩` by direct matrix evaluation.
pub fn char_value(psi: &PureState, rep: &UnitaryRep, g: &GroupElement) -> Result<Complex64> {
    check_dim(psi, rep.dim())?;
    let u = rep.matrix(g)?;
    Ok(psi.amps.dotc(&(u * &psi.amps)))
}

/// Characteristic function of `ψ`. Lie groups go through the isotypic
/// decomposition over the canonical irrep table.
pub fn char_fn(psi: &PureState, rep: &UnitaryRep) -> Result<CharFn> {
    check_dim(psi, rep.dim())?;
    match rep.group().as_ref() {
        Group::Finite(g) => {
            let values = (0..g.order())
                .map(|i| char_value(psi, rep, &GroupElement::Finite(i)))
                .collect::<Result<_>>()?;
            Ok(CharFn::Finite {
                group: rep.group().clone(),
                values,
            })
        }
        _ => {
            let table = IrrepTable::for_lie(rep.group().clone())?;
            let dec = decompose(rep, &table)?;
            char_fn_with(psi, rep, &dec)
        }
    }
}

/// As [`char_fn`] with a precomputed decomposition (used for Lie groups).
pub fn char_fn_with(psi: &PureState, rep: &UnitaryRep, decomp: &IsotypicDecomposition) -> Result<CharFn> {
    if !rep.group().is_lie() {
        return char_fn(psi, rep);
    }
    Ok(CharFn::Lie {
        group: rep.group().clone(),
        reduction: reduction(psi, decomp)?,
    })
}

/// `ρ^(μ) = tr_{N_μ}(Π_μ|ψ⟩⟨ψ|Π_μ)` in the basis of the decomposition.
pub fn reduction(psi: &PureState, decomp: &IsotypicDecomposition) -> Result<IrrepReduction> {
    check_dim(psi, decomp.dim())?;
    let mut blocks = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for b in decomp.blocks() {
        let comp = b.components(&psi.amps);
        blocks.insert(b.irrep, &comp * comp.adjoint());
        labels.insert(b.irrep, b.label.clone());
    }
    Ok(IrrepReduction { blocks, labels })
}

/// `χ(g) = Σ_μ tr(ρ^(μ) U_μ(g))`.
pub fn charfn_from_reduction(red: &IrrepReduction, table: &IrrepTable) -> Result<CharFn> {
    for (id, rho) in &red.blocks {
        let irrep = table.get(*id)?;
        if rho.nrows() != irrep.dim || rho.ncols() != irrep.dim {
            return Err(Error::Validation(format!(
                "reduction block {} has shape {}×{}, irrep dimension is {}",
                irrep.label,
                rho.nrows(),
                rho.ncols(),
                irrep.dim
            )));
        }
    }
    let group = table.group().clone();
    match group.as_ref() {
        Group::Finite(g) => {
            let mut values = vec![c(0.0, 0.0); g.order()];
            for (id, rho) in &red.blocks {
                let irrep = table.get(*id)?;
                for (e, v) in values.iter_mut().enumerate() {
                    *v += (rho * irrep.matrix(&GroupElement::Finite(e))?).trace();
                }
            }
            Ok(CharFn::Finite { group, values })
        }
        _ => Ok(CharFn::Lie {
            group,
            reduction: red.clone(),
        }),
    }
}

/// `ρ^(μ) = d_μ ∫ dg χ(g⁻¹) U_μ(g)` (finite groups and U(1)).
pub fn reduction_from_charfn(chi: &CharFn, table: &IrrepTable) -> Result<IrrepReduction> {
    if !chi.group().same_group(table.group()) {
        return Err(Error::Type("χ and irrep table are over different groups".into()));
    }
    let group = match chi.group().as_ref() {
        Group::Su2 { .. } => {
            return Err(Error::Unsupported(
                "SU(2) reductions are computed from the state via the decomposition (reduction)".into(),
            ))
        }
        Group::U1 { .. } => chi.group().with_capacity(chi.band().max(table.group().band())),
        Group::Finite(_) => chi.group().as_ref().clone(),
    };
    let nodes = group.haar_nodes();
    let mut blocks = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for irrep in table.irreps() {
        let d = irrep.dim as f64;
        let rho = average_over(&nodes, |g| {
            let inv = group.inverse(g)?;
            Ok(irrep.matrix(g)? * (chi.eval(&inv)? * d))
        })?;
        blocks.insert(irrep.id, rho);
        labels.insert(irrep.id, irrep.label.clone());
    }
    Ok(IrrepReduction { blocks, labels })
}

/// Stabilizer of `U(1)`: everything, `Z_k = {2πj/k}`, or the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum U1Stabilizer {
    Full,
    Cyclic(u64),
    Trivial,
}

/// `Sym_G(ψ)`, the elements under which `ψ` is invariant up to phase.
#[derive(Clone, Debug, PartialEq)]
pub enum SymmetrySubgroup {
    /// Sorted element indices.
    Finite(Vec<usize>),
    U1(U1Stabilizer),
    Su2Full,
    /// Rotations about `axis` (unit vector, sign-normalized).
    Su2Axial { axis: [f64; 3] },
    /// No continuous symmetry; the stabilizer is reported by sampled
    /// membership on the SU(2) grid plus the element `−1`.
    Su2Discrete { grid_members: Vec<usize>, minus_one: bool },
}

impl SymmetrySubgroup {
    /// Descriptor equality; axes are compared up to `tol`.
    pub fn same_as(&self, other: &SymmetrySubgroup, tol: f64) -> bool {
        match (self, other) {
            (SymmetrySubgroup::Su2Axial { axis: a }, SymmetrySubgroup::Su2Axial { axis: b }) => {
                a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
            }
            _ => self == other,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SymmetrySubgroup::Finite(e) => format!("{} elements", e.len()),
            SymmetrySubgroup::U1(U1Stabilizer::Full) => "U(1)".into(),
            SymmetrySubgroup::U1(U1Stabilizer::Cyclic(k)) => format!("Z_{k}"),
            SymmetrySubgroup::U1(U1Stabilizer::Trivial) => "trivial".into(),
            SymmetrySubgroup::Su2Full => "SU(2)".into(),
            SymmetrySubgroup::Su2Axial { axis } => {
                format!("U(1) about ({:.6}, {:.6}, {:.6})", axis[0], axis[1], axis[2])
            }
            SymmetrySubgroup::Su2Discrete { grid_members, minus_one } => format!(
                "discrete ({} sampled grid elements{})",
                grid_members.len(),
                if *minus_one { ", contains −1" } else { "" }
            ),
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Real covariance `Re⟨J_k J_l⟩ − ⟨J_k⟩⟨J_l⟩` of a generator triple.
pub(crate) fn generator_covariance(psi: &CVec, gens: &[CMat]) -> (Vec<f64>, CMat) {
    let applied: Vec<CVec> = gens.iter().map(|l| l * psi).collect();
    let means: Vec<f64> = applied.iter().map(|v| psi.dotc(v).re).collect();
    let k = gens.len();
    let mut cov = CMat::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            // ⟨L_a L_b⟩ = (L_a ψ)†(L_b ψ) for Hermitian L_a
            let second = applied[a].dotc(&applied[b]).re;
            cov[(a, b)] = c(second - means[a] * means[b], 0.0);
        }
    }
    (means, cov)
}

/// `Sym_G(ψ)` with stabilizer threshold `|χ(g)| ≥ 1 − tol` (finite groups),
/// charge-support weights above `tol` (U(1)) and generator variances below
/// `tol` (SU(2)).
pub fn sym_group(psi: &PureState, rep: &UnitaryRep, tol: f64) -> Result<SymmetrySubgroup> {
    check_dim(psi, rep.dim())?;
    match rep.group().as_ref() {
        Group::Finite(g) => {
            let chi = char_fn(psi, rep)?;
            let values = chi.values().expect("finite");
            let members: Vec<usize> = (0..g.order()).filter(|&i| values[i].norm() >= 1.0 - tol).collect();
            if g.is_subgroup(&members) {
                return Ok(SymmetrySubgroup::Finite(members));
            }
            let inset = |x: usize| members.contains(&x);
            let mut boundary = Vec::new();
            for &a in &members {
                if !inset(g.inverse(a)) {
                    boundary.push(format!("{}⁻¹ (|χ| = {:.3e})", g.label(a), values[g.inverse(a)].norm()));
                }
                for &b in &members {
                    let ab = g.multiply(a, b);
                    if !inset(ab) {
                        boundary.push(format!(
                            "{}·{} = {} (|χ| = {:.12})",
                            g.label(a),
                            g.label(b),
                            g.label(ab),
                            values[ab].norm()
                        ));
                    }
                }
            }
            boundary.sort();
            boundary.dedup();
            Err(Error::SymClosure { tol, boundary })
        }
        Group::U1 { .. } => {
            let charges = rep.charge_list().expect("U(1) reps carry charges");
            let mut weights: BTreeMap<i64, f64> = BTreeMap::new();
            for (k, n) in charges.iter().enumerate() {
                *weights.entry(*n).or_default() += psi.amps[k].norm_sqr();
            }
            let support: Vec<i64> = weights.iter().filter(|(_, w)| **w > tol).map(|(n, _)| *n).collect();
            let k = support
                .windows(2)
                .fold(0u64, |acc, w| gcd(acc, (w[1] - w[0]).unsigned_abs()));
            Ok(SymmetrySubgroup::U1(match k {
                0 => U1Stabilizer::Full,
                1 => U1Stabilizer::Trivial,
                k => U1Stabilizer::Cyclic(k),
            }))
        }
        Group::Su2 { .. } => {
            let gens = rep.su2_generators().expect("SU(2) reps carry generators");
            let (_, cov) = generator_covariance(&psi.amps, gens);
            let (vals, vecs) = crate::linalg::hermitian_eigen(&cov);
            let null = vals.iter().filter(|v| **v <= tol).count();
            match null {
                3 => Ok(SymmetrySubgroup::Su2Full),
                1 | 2 => {
                    let mut axis = [vecs[(0, 0)].re, vecs[(1, 0)].re, vecs[(2, 0)].re];
                    let n = (axis[0].powi(2) + axis[1].powi(2) + axis[2].powi(2)).sqrt();
                    axis.iter_mut().for_each(|x| *x /= n);
                    // Sign convention: first non-negligible component positive.
                    if let Some(first) = axis.iter().find(|x| x.abs() > 1e-9) {
                        if *first < 0.0 {
                            axis.iter_mut().for_each(|x| *x = -*x);
                        }
                    }
                    Ok(SymmetrySubgroup::Su2Axial { axis })
                }
                _ => {
                    let grid = rep.group().sample_grid();
                    let mut grid_members = Vec::new();
                    for (i, g) in grid.iter().enumerate() {
                        if char_value(psi, rep, g)?.norm() >= 1.0 - tol {
                            grid_members.push(i);
                        }
                    }
                    let minus = GroupElement::Su2(Quaternion::new(-1.0, 0.0, 0.0, 0.0));
                    let minus_one = char_value(psi, rep, &minus)?.norm() >= 1.0 - tol;
                    Ok(SymmetrySubgroup::Su2Discrete {
                        grid_members,
                        minus_one,
                    })
                }
            }
        }
    }
}
