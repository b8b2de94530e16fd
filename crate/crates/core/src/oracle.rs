//! Brute-force and constructive verifiers giving a second computational path
//! for every decider.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::charfn::{CharFn, PureState};
use crate::deciders::PdFunction;
use crate::error::Result;
use crate::group::GroupElement;
use crate::linalg::{haar_unitary, identity, max_abs_diff, min_eigenvalue, svd_square, vec_max_abs, CMat};
use crate::rep::{invariant_unitary, IsotypicDecomposition, UnitaryRep};

/// Points used by the oracles: all elements of a finite group, the fixed
/// 64-point grid of a Lie group.
pub fn oracle_points(rep: &UnitaryRep) -> Vec<GroupElement> {
    rep.group().sample_grid()
}

/// `G_ψ[i][j] = ⟨ψ|U(g_i)† U(g_j)|ψ⟩` on [`oracle_points`].
pub fn orbit_gram(psi: &PureState, rep: &UnitaryRep) -> Result<CMat> {
    let points = oracle_points(rep);
    let mut orbit = CMat::zeros(rep.dim(), points.len());
    for (j, g) in points.iter().enumerate() {
        orbit.set_column(j, &(rep.matrix(g)? * psi.amplitudes()));
    }
    Ok(orbit.adjoint() * orbit)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GramComparison {
    pub equal: bool,
    pub max_deviation: f64,
    /// `(i, j)` of the largest deviation.
    pub location: (usize, usize),
}

/// Entrywise comparison of the two orbit Gram matrices; never touches the
/// isotypic decomposition.
pub fn gram_orbit_equality(psi: &PureState, phi: &PureState, rep: &UnitaryRep, tol: f64) -> Result<GramComparison> {
    let (a, b) = (orbit_gram(psi, rep)?, orbit_gram(phi, rep)?);
    let mut worst = (0.0, (0, 0));
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let d = (a[(i, j)] - b[(i, j)]).norm();
            if d > worst.0 {
                worst = (d, (i, j));
            }
        }
    }
    Ok(GramComparison {
        equal: worst.0 <= tol,
        max_deviation: worst.0,
        location: worst.1,
    })
}

/// `max_g ‖V U(g) − U(g) V‖` over [`oracle_points`].
pub fn commutation_residual(v: &CMat, rep: &UnitaryRep) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for g in oracle_points(rep) {
        let u = rep.matrix(&g)?;
        worst = worst.max(max_abs_diff(&(v * &u), &(&u * v)));
    }
    Ok(worst)
}

/// Cross operator `M_μ = C_ψᵀ conj(C_φ)` on `N_μ`, with
/// `⟨φ|V|ψ⟩ = Σ_μ tr(V_μ M_μ)` for invariant `V`.
pub(crate) fn cross_operators(psi: &PureState, phi: &PureState, decomp: &IsotypicDecomposition) -> Vec<CMat> {
    decomp
        .blocks()
        .iter()
        .map(|b| {
            let cp = b.components(psi.amplitudes());
            let cf = b.components(phi.amplitudes());
            cp.transpose() * cf.conjugate()
        })
        .collect()
}

/// An invariant unitary mapping `ψ` to `φ`, or `None` when no such unitary
/// exists within `tol`.
///
/// Per block the polar factor of the cross operator is taken, `V_μ = Q P†`
/// for `M_μ = P Σ Q†`; the SVD completion fixes the gauge on the part of `N_μ`
/// not reached by the states.
pub fn construct_invariant_unitary_witness(
    psi: &PureState,
    phi: &PureState,
    decomp: &IsotypicDecomposition,
    tol: f64,
) -> Option<CMat> {
    let mut blocks = BTreeMap::new();
    for (b, m) in decomp.blocks().iter().zip(cross_operators(psi, phi, decomp)) {
        let w = if m.iter().all(|z| z.norm() == 0.0) {
            identity(b.multiplicity)
        } else {
            let (p, _, q) = svd_square(&m);
            &q * p.adjoint()
        };
        blocks.insert(b.irrep, w);
    }
    let v = invariant_unitary(decomp, &blocks).ok()?;
    let mapped = &v * psi.amplitudes();
    let residual = vec_max_abs(&(mapped - phi.amplitudes()));
    (residual <= tol).then_some(v)
}

/// Haar-random invariant unitary, deterministic in `seed`.
pub fn random_invariant_unitary(decomp: &IsotypicDecomposition, seed: u64) -> CMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks: BTreeMap<_, _> = decomp
        .blocks()
        .iter()
        .map(|b| (b.irrep, haar_unitary(b.multiplicity, &mut rng)))
        .collect();
    invariant_unitary(decomp, &blocks).expect("blocks are unitary and complete")
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessCheck {
    pub ok: bool,
    /// `max_g |χ_ψ(g) − χ_φ(g) f(g)|`, or `‖Vψ − φ‖_∞`.
    pub equality_residual: f64,
    pub location: Option<GroupElement>,
    /// Smallest Gram eigenvalue of `f`, or the commutation residual of `V`.
    pub structure_residual: f64,
}

/// Checks an invariant-unitary witness: `Vψ = φ` and `[V, U(g)] = 0`.
pub fn verify_unitary_witness(
    v: &CMat,
    psi: &PureState,
    phi: &PureState,
    rep: &UnitaryRep,
    tol: f64,
) -> Result<WitnessCheck> {
    if v.nrows() != rep.dim() || v.ncols() != rep.dim() {
        return Ok(WitnessCheck {
            ok: false,
            equality_residual: f64::INFINITY,
            location: None,
            structure_residual: f64::INFINITY,
        });
    }
    let eq = vec_max_abs(&(v * psi.amplitudes() - phi.amplitudes()));
    let comm = commutation_residual(v, rep)?.max(crate::linalg::unitarity_defect(v));
    Ok(WitnessCheck {
        ok: eq <= tol && comm <= tol,
        equality_residual: eq,
        location: None,
        structure_residual: comm,
    })
}

/// Checks `χ_ψ = χ_φ · f` pointwise and the Gram matrix `F[g,h] = f(g⁻¹h)`,
/// both on [`oracle_points`] of the group; independent of how `f` was found.
pub fn verify_pd_witness(f: &PdFunction, chi_psi: &CharFn, chi_phi: &CharFn, eq_tol: f64, psd_tol: f64) -> Result<WitnessCheck> {
    let group = chi_psi.group().clone();
    let points = group.sample_grid();
    let mut worst = (0.0, None);
    for g in &points {
        let d = (chi_psi.eval(g)? - chi_phi.eval(g)? * f.eval(g)?).norm();
        if d > worst.0 {
            worst = (d, Some(*g));
        }
    }
    let n = points.len();
    let mut gram = CMat::zeros(n, n);
    for (i, a) in points.iter().enumerate() {
        let ai = group.inverse(a)?;
        for (j, b) in points.iter().enumerate() {
            gram[(i, j)] = f.eval(&group.multiply(&ai, b)?)?;
        }
    }
    let herm = crate::linalg::hermiticity_defect(&gram);
    let min_eig = min_eigenvalue(&gram) - herm;
    Ok(WitnessCheck {
        ok: worst.0 <= eq_tol && min_eig >= -psd_tol,
        equality_residual: worst.0,
        location: worst.1,
        structure_residual: min_eig,
    })
}
