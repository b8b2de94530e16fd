//! Covariance matrices of Lie-algebra generators and the necessary conditions
//! for reversible asymptotic G-covariant conversion.

use nalgebra::{DMatrix, DVector};

use crate::charfn::{generator_covariance, sym_group, PureState, SymmetrySubgroup};
use crate::error::{Error, Result};
use crate::linalg::{c, commutator, exp_minus_i, hermiticity_defect, CMat};
use crate::rep::UnitaryRep;
use crate::Tolerances;

const HERMITIAN_TOL: f64 = 1e-10;
const CLOSURE_TOL: f64 = 1e-9;

/// Hilbert–Schmidt inner product `Re tr(A† B)`.
fn hs(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Hermitian generators `L_k` of a represented Lie algebra, with derived
/// structure constants `−i[L_k, L_l] = Σ_m c_klm L_m` and an orthonormal basis
/// of the commutator subalgebra.
#[derive(Clone, Debug)]
pub struct LieAlgebraBasis {
    generators: Vec<CMat>,
    structure: Vec<f64>,
    commutator: Vec<CMat>,
}

impl LieAlgebraBasis {
    pub fn new(generators: Vec<CMat>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::Validation("empty generator list".into()));
        };
        let dim = first.nrows();
        for (k, l) in generators.iter().enumerate() {
            if l.nrows() != dim || l.ncols() != dim {
                return Err(Error::Format(format!("generator L_{k} is not {dim}×{dim}")));
            }
            let d = hermiticity_defect(l);
            if d > HERMITIAN_TOL {
                return Err(Error::Validation(format!("generator L_{k} is not Hermitian (defect {d:.3e})")));
            }
        }
        let k = generators.len();
        let gram = DMatrix::from_fn(k, k, |a, b| hs(&generators[a], &generators[b]));
        let gram_inv = gram
            .clone()
            .try_inverse()
            .filter(|_| gram.determinant().abs() > 1e-12 * gram.amax().powi(k as i32))
            .ok_or_else(|| Error::Validation("generators are linearly dependent".into()))?;

        let mut structure = vec![0.0; k * k * k];
        let mut brackets = Vec::with_capacity(k * k);
        for a in 0..k {
            for b in 0..k {
                let br = commutator(&generators[a], &generators[b]) * c(0.0, -1.0);
                let rhs = DVector::from_fn(k, |m, _| hs(&generators[m], &br));
                let coef = &gram_inv * rhs;
                let mut fit = CMat::zeros(dim, dim);
                for (m, cm) in coef.iter().enumerate() {
                    fit += &generators[m] * c(*cm, 0.0);
                    structure[(a * k + b) * k + m] = *cm;
                }
                let scale = 1.0_f64.max(br.norm());
                let miss = (&br - fit).norm() / scale;
                if miss > CLOSURE_TOL {
                    return Err(Error::Validation(format!(
                        "−i[L_{a}, L_{b}] is not in the span of the generators (residual {miss:.3e})"
                    )));
                }
                brackets.push(br);
            }
        }

        // Gram–Schmidt on the brackets.
        let scale = generators.iter().map(|l| l.norm()).fold(0.0, f64::max).max(1.0);
        let mut commutator_basis: Vec<CMat> = Vec::new();
        for mut v in brackets {
            for u in &commutator_basis {
                let p = hs(u, &v);
                v -= u * c(p, 0.0);
            }
            let n = v.norm();
            if n > CLOSURE_TOL * scale {
                commutator_basis.push(v / c(n, 0.0));
            }
        }
        Ok(LieAlgebraBasis {
            generators,
            structure,
            commutator: commutator_basis,
        })
    }

    /// The generators of a U(1) (`diag(n)`) or SU(2) (`J_x, J_y, J_z`)
    /// representation.
    pub fn from_rep(rep: &UnitaryRep) -> Result<Self> {
        let gens = rep
            .lie_generators()
            .ok_or_else(|| Error::Unsupported("finite groups have no Lie algebra".into()))?;
        Self::new(gens)
    }

    /// Basis `L'_k = Σ_l A_kl L_l`.
    pub fn recombined(&self, a: &DMatrix<f64>) -> Result<Self> {
        let k = self.generators.len();
        if a.nrows() != k || a.ncols() != k {
            return Err(Error::Validation(format!("recombination must be {k}×{k}")));
        }
        let dim = self.dim();
        let gens = (0..k)
            .map(|i| {
                let mut m = CMat::zeros(dim, dim);
                for (j, l) in self.generators.iter().enumerate() {
                    m += l * c(a[(i, j)], 0.0);
                }
                m
            })
            .collect();
        Self::new(gens)
    }

    pub fn generators(&self) -> &[CMat] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.generators[0].nrows()
    }

    /// `c_klm` with `−i[L_k, L_l] = Σ_m c_klm L_m`.
    pub fn structure_constant(&self, k: usize, l: usize, m: usize) -> f64 {
        let n = self.len();
        self.structure[(k * n + l) * n + m]
    }

    /// Orthonormal (Hilbert–Schmidt) basis of `span{−i[L_k, L_l]}`.
    pub fn commutator_subalgebra(&self) -> &[CMat] {
        &self.commutator
    }

    fn check_state(&self, psi: &PureState) -> Result<()> {
        if psi.dim() != self.dim() {
            return Err(Error::Validation(format!(
                "state has dimension {} but the generators act on {}",
                psi.dim(),
                self.dim()
            )));
        }
        Ok(())
    }
}

/// `C_kl = ½⟨{L_k, L_l}⟩ − ⟨L_k⟩⟨L_l⟩`.
pub fn covariance(psi: &PureState, basis: &LieAlgebraBasis) -> Result<DMatrix<f64>> {
    basis.check_state(psi)?;
    let (_, cov) = generator_covariance(psi.amplitudes(), basis.generators());
    let k = basis.len();
    let cov = DMatrix::from_fn(k, k, |a, b| cov[(a, b)].re);
    Ok((&cov + cov.transpose()) * 0.5)
}

/// `⟨ψ|L_k|ψ⟩`.
pub fn generator_expectations(psi: &PureState, basis: &LieAlgebraBasis) -> Result<DVector<f64>> {
    basis.check_state(psi)?;
    Ok(expectations(psi, basis.generators()))
}

fn expectations(psi: &PureState, ops: &[CMat]) -> DVector<f64> {
    let v = psi.amplitudes();
    DVector::from_iterator(ops.len(), ops.iter().map(|l| v.dotc(&(l * v)).re))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentumCondition {
    /// No commutator subalgebra (abelian group): nothing to check.
    pub vacuous: bool,
    pub holds: bool,
    /// `‖⟨L⟩_ψ − R⟨L⟩_φ‖₂` over the orthonormal commutator basis.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AsymptoticOverall {
    /// Conditions (i)–(iii) hold; they are necessary, sufficiency is only
    /// conjectured.
    NecessaryConditionsHold { rate: Option<f64> },
    Fails { condition: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticReport {
    pub sym_equal: bool,
    pub sym_psi: SymmetrySubgroup,
    pub sym_phi: SymmetrySubgroup,
    /// `R` with `C(ψ) = R·C(φ)`; `None` when undetermined or inconsistent.
    pub rate: Option<f64>,
    /// Largest entrywise residual of the fit relative to the largest entry.
    pub covariance_residual: f64,
    pub covariance_holds: bool,
    pub rate_note: Option<String>,
    pub momentum: MomentumCondition,
    pub overall: AsymptoticOverall,
    pub note: String,
}

/// Necessary conditions for reversible asymptotic conversion `ψ → φ` at rate
/// `R`: (i) equal stabilizers, (ii) `C(ψ) = R·C(φ)` and (iii)
/// `⟨L⟩_ψ = R⟨L⟩_φ` on the commutator subalgebra.
pub fn check_reversible_asymptotic(
    psi: &PureState,
    phi: &PureState,
    rep: &UnitaryRep,
    basis: &LieAlgebraBasis,
    tol: &Tolerances,
) -> Result<AsymptoticReport> {
    if !rep.group().is_lie() {
        return Err(Error::Unsupported(
            "reversible asymptotic conditions are defined for compact Lie groups".into(),
        ));
    }
    basis.check_state(psi)?;
    basis.check_state(phi)?;
    if basis.dim() != rep.dim() {
        return Err(Error::Validation("generators and representation act on different spaces".into()));
    }

    let sym_psi = sym_group(psi, rep, tol.sym)?;
    let sym_phi = sym_group(phi, rep, tol.sym)?;
    let sym_equal = sym_psi.same_as(&sym_phi, tol.sym.sqrt());

    let (ca, cb) = (covariance(psi, basis)?, covariance(phi, basis)?);
    let (na, nb) = (ca.amax(), cb.amax());
    let (rate, covariance_residual, covariance_holds, rate_note) = if na <= tol.zero && nb <= tol.zero {
        (
            None,
            0.0,
            true,
            Some("both covariance matrices vanish; the rate is not constrained by this condition".to_string()),
        )
    } else if nb <= tol.zero {
        (
            None,
            1.0,
            false,
            Some("C(φ) vanishes while C(ψ) does not".to_string()),
        )
    } else {
        let r = ca.dot(&cb) / cb.dot(&cb);
        let res = (&ca - &cb * r).amax() / na.max(r.abs() * nb);
        let ok = res <= tol.rate && r > 0.0;
        let note = (!ok).then(|| {
            if r <= 0.0 {
                format!("fitted rate {r:e} is not positive")
            } else {
                format!("C(ψ) is not proportional to C(φ) (relative residual {res:.3e})")
            }
        });
        (ok.then_some(r), res, ok, note)
    };

    let comm = basis.commutator_subalgebra();
    let momentum = if comm.is_empty() {
        MomentumCondition {
            vacuous: true,
            holds: true,
            residual: 0.0,
        }
    } else {
        let (ea, eb) = (expectations(psi, comm), expectations(phi, comm));
        let r = match rate {
            Some(r) => r,
            // Without a rate from (ii), test proportionality with the best R.
            None if eb.norm() > tol.zero => ea.dot(&eb) / eb.dot(&eb),
            None => 0.0,
        };
        let residual = (&ea - &eb * r).norm();
        MomentumCondition {
            vacuous: false,
            holds: residual <= tol.equality,
            residual,
        }
    };

    let overall = if !sym_equal {
        AsymptoticOverall::Fails {
            condition: format!(
                "(i) stabilizers differ: {} vs {}",
                sym_psi.describe(),
                sym_phi.describe()
            ),
        }
    } else if !covariance_holds {
        AsymptoticOverall::Fails {
            condition: format!(
                "(ii) covariance matrices are not proportional: {}",
                rate_note.clone().unwrap_or_default()
            ),
        }
    } else if !momentum.holds {
        AsymptoticOverall::Fails {
            condition: format!(
                "(iii) angular-momentum conservation violated on the commutator subalgebra (residual {:.3e})",
                momentum.residual
            ),
        }
    } else {
        AsymptoticOverall::NecessaryConditionsHold { rate }
    };
    Ok(AsymptoticReport {
        sym_equal,
        sym_psi,
        sym_phi,
        rate,
        covariance_residual,
        covariance_holds,
        rate_note,
        momentum,
        overall,
        note: "conditions (i)-(iii) are necessary; their sufficiency is conjectural".into(),
    })
}

/// Largest entrywise deviation between the central-difference Hessian of
/// `−log|χ_ψ(exp(−i Σ t_k L_k))|` at `t = 0` and the covariance matrix.
pub fn charfn_hessian_check(psi: &PureState, basis: &LieAlgebraBasis, step: f64) -> Result<f64> {
    if !(step > 0.0 && step <= 1e-2) {
        return Err(Error::Validation(format!("step {step} outside (0, 1e-2]")));
    }
    basis.check_state(psi)?;
    let k = basis.len();
    let v = psi.amplitudes();
    let h = |t: &[f64]| -> Result<f64> {
        let mut gen = CMat::zeros(basis.dim(), basis.dim());
        for (l, tk) in basis.generators().iter().zip(t) {
            gen += l * c(*tk, 0.0);
        }
        let chi = v.dotc(&(exp_minus_i(&gen, 1.0) * v)).norm();
        if chi <= 1e-10 {
            return Err(Error::StepTooLarge);
        }
        Ok(-chi.ln())
    };
    let at = |pairs: &[(usize, f64)]| {
        let mut t = vec![0.0; k];
        for (i, s) in pairs {
            t[*i] += s;
        }
        t
    };
    let s = step;
    let h0 = h(&vec![0.0; k])?;
    let mut hess = DMatrix::zeros(k, k);
    for a in 0..k {
        hess[(a, a)] = (h(&at(&[(a, s)]))? - 2.0 * h0 + h(&at(&[(a, -s)]))?) / (s * s);
        for b in (a + 1)..k {
            let val = (h(&at(&[(a, s), (b, s)]))? - h(&at(&[(a, s), (b, -s)]))? - h(&at(&[(a, -s), (b, s)]))?
                + h(&at(&[(a, -s), (b, -s)]))?)
                / (4.0 * s * s);
            hess[(a, b)] = val;
            hess[(b, a)] = val;
        }
    }
    Ok((hess - covariance(psi, basis)?).amax())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;
    use crate::linalg::{block_diag, identity, random_unit_vector};
    use crate::rep::{spin_generators, tensor_rep};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;
    use std::sync::Arc;

    fn spin_rep(tj: u32) -> UnitaryRep {
        let [x, y, z] = spin_generators(tj);
        UnitaryRep::generators(Arc::new(Group::su2(4)), x, y, z).unwrap()
    }

    fn bit() -> PureState {
        PureState::from_slice(&[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]).unwrap()
    }

    #[test]
    fn fair_bit_variance() {
        let rep = UnitaryRep::charges(Arc::new(Group::u1(1)), vec![0, 1]).unwrap();
        let basis = LieAlgebraBasis::from_rep(&rep).unwrap();
        let cov = covariance(&bit(), &basis).unwrap();
        assert!((cov[(0, 0)] - 0.25).abs() < 1e-15);
        assert!(basis.commutator_subalgebra().is_empty());
        let e = PureState::from_slice(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(covariance(&e, &basis).unwrap()[(0, 0)].abs() < 1e-15);
    }

    #[test]
    fn su2_is_perfect_and_u2_center_excluded() {
        let [x, y, z] = spin_generators(1);
        let su2 = LieAlgebraBasis::new(vec![x.clone(), y.clone(), z.clone()]).unwrap();
        assert_eq!(su2.commutator_subalgebra().len(), 3);
        // [J_x, J_y] = i J_z.
        assert!((su2.structure_constant(0, 1, 2) - 1.0).abs() < 1e-12);
        let u2 = LieAlgebraBasis::new(vec![x, y, z, identity(2)]).unwrap();
        assert_eq!(u2.commutator_subalgebra().len(), 3);
    }

    #[test]
    fn open_basis_is_rejected() {
        let [x, y, _] = spin_generators(1);
        assert!(matches!(LieAlgebraBasis::new(vec![x, y]), Err(Error::Validation(_))));
    }

    #[test]
    fn expectations_of_spin_half() {
        let basis = LieAlgebraBasis::from_rep(&spin_rep(1)).unwrap();
        let up = PureState::from_slice(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((generator_expectations(&up, &basis).unwrap()[2] - 0.5).abs() < 1e-15);
        assert!(generator_expectations(&bit(), &basis).unwrap()[2].abs() < 1e-15);
    }

    #[test]
    fn covariance_is_additive() {
        let (a, b) = (spin_rep(1), spin_rep(2));
        let ab = tensor_rep(&a, &b).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let psi = PureState::new(random_unit_vector(2, &mut rng)).unwrap();
        let phi = PureState::new(random_unit_vector(3, &mut rng)).unwrap();
        let sum = covariance(&psi, &LieAlgebraBasis::from_rep(&a).unwrap()).unwrap()
            + covariance(&phi, &LieAlgebraBasis::from_rep(&b).unwrap()).unwrap();
        let joint = covariance(&psi.tensor(&phi), &LieAlgebraBasis::from_rep(&ab).unwrap()).unwrap();
        assert!((joint - sum).amax() < 1e-12);
    }

    #[test]
    fn hessian_matches_covariance_quadratically() {
        let basis = LieAlgebraBasis::from_rep(&spin_rep(1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let psi = PureState::new(random_unit_vector(2, &mut rng)).unwrap();
        let d1 = charfn_hessian_check(&psi, &basis, 1e-3).unwrap();
        let d2 = charfn_hessian_check(&psi, &basis, 2e-3).unwrap();
        assert!(d1 < 1e-4, "{d1}");
        assert!(d2 > 2.0 * d1, "{d1} {d2}");
        assert!(matches!(charfn_hessian_check(&psi, &basis, 0.1), Err(Error::Validation(_))));
    }

    #[test]
    fn one_versus_two_copies_in_a_direct_sum() {
        // Charges (0,1) ⊕ (0,1)⊗(0,1).
        let rep = UnitaryRep::charges(Arc::new(Group::u1(2)), vec![0, 1, 0, 1, 1, 2]).unwrap();
        let basis = LieAlgebraBasis::from_rep(&rep).unwrap();
        let one = bit().embed(0, 6).unwrap();
        let two = bit().tensor(&bit()).embed(2, 6).unwrap();
        let report = check_reversible_asymptotic(&one, &two, &rep, &basis, &Tolerances::default()).unwrap();
        assert!(report.sym_equal);
        assert!((report.rate.unwrap() - 0.5).abs() < 1e-12);
        assert!(report.momentum.vacuous);
        assert!(matches!(report.overall, AsymptoticOverall::NecessaryConditionsHold { .. }));
    }

    #[test]
    fn non_parallel_spins_violate_momentum_condition() {
        let [x, y, z] = spin_generators(1);
        let gens: Vec<CMat> = [x, y, z].iter().map(|m| block_diag(m, m)).collect();
        let rep = UnitaryRep::generators(Arc::new(Group::su2(1)), gens[0].clone(), gens[1].clone(), gens[2].clone())
            .unwrap();
        let basis = LieAlgebraBasis::from_rep(&rep).unwrap();
        let s = FRAC_1_SQRT_2;
        let z_tilt = PureState::from_slice(&[c(0.9f64.sqrt(), 0.0), c(0.1f64.sqrt(), 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let x_tilt = PureState::from_slice(&[c(0.0, 0.0), c(0.0, 0.0), c(0.9f64.sqrt() * s + 0.1f64.sqrt() * s, 0.0), c(0.9f64.sqrt() * s - 0.1f64.sqrt() * s, 0.0)]).unwrap();
        let report = check_reversible_asymptotic(&z_tilt, &x_tilt, &rep, &basis, &Tolerances::default()).unwrap();
        assert!(!report.momentum.holds);
        assert!(matches!(report.overall, AsymptoticOverall::Fails { .. }));
    }

    #[test]
    fn finite_groups_are_unsupported() {
        let (group, _) = crate::IrrepTable::builtin(crate::group::Builtin::Cyclic(2));
        let rep = UnitaryRep::regular(group).unwrap();
        let basis = LieAlgebraBasis::new(vec![identity(2)]).unwrap();
        let psi = bit();
        assert!(matches!(
            check_reversible_asymptotic(&psi, &psi, &rep, &basis, &Tolerances::default()),
            Err(Error::Unsupported(_))
        ));
    }
}
