use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::charfn::{reduction, PureState};
use crate::deciders::{element_label, Certificate, RepContext, Verdict, Witness};
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::linalg::{c, cis, trace_norm};
use crate::oracle::{construct_invariant_unitary_witness, cross_operators, verify_unitary_witness};
use crate::rep::{IrrepTable, IsotypicDecomposition};

/// A one-dimensional representation `Θ: G → U(1)`.
#[derive(Clone, Debug, PartialEq)]
pub enum OneDimRep {
    /// Value table of a one-dimensional irrep of a finite group.
    Finite { label: String, values: Vec<Complex64> },
    /// `θ ↦ e^{inθ}`.
    Charge(i64),
    Trivial,
}

impl OneDimRep {
    pub fn eval(&self, g: &GroupElement) -> Result<Complex64> {
        match (self, g) {
            (OneDimRep::Finite { values, .. }, GroupElement::Finite(i)) => values
                .get(*i)
                .copied()
                .ok_or_else(|| Error::Type(format!("element #{i} out of range"))),
            (OneDimRep::Charge(n), GroupElement::U1(t)) => Ok(cis(*n as f64 * t)),
            (OneDimRep::Trivial, _) => Ok(c(1.0, 0.0)),
            _ => Err(Error::Type(format!("element {g} does not match the 1-d representation"))),
        }
    }

    pub fn label(&self) -> String {
        match self {
            OneDimRep::Finite { label, .. } => label.clone(),
            OneDimRep::Charge(n) => format!("n={n}"),
            OneDimRep::Trivial => "trivial".into(),
        }
    }
}

/// All one-dimensional representations available for the group: the
/// dimension-1 irreps of a finite group, charges `|n| ≤ band` for U(1), the
/// trivial one for SU(2).
pub fn one_dim_reps(table: &IrrepTable) -> Result<Vec<OneDimRep>> {
    match table.group().as_ref() {
        Group::Finite(g) => table
            .one_dimensional()
            .map(|irrep| {
                let values = (0..g.order())
                    .map(|e| irrep.character(&GroupElement::Finite(e)))
                    .collect::<Result<_>>()?;
                Ok(OneDimRep::Finite {
                    label: irrep.label.clone(),
                    values,
                })
            })
            .collect(),
        Group::U1 { band_limit } => {
            let b = *band_limit as i64;
            Ok((-b..=b).map(OneDimRep::Charge).collect())
        }
        Group::Su2 { .. } => Ok(vec![OneDimRep::Trivial]),
    }
}

fn check_states(psi: &PureState, phi: &PureState, ctx: &RepContext) -> Result<()> {
    for s in [psi, phi] {
        if s.dim() != ctx.rep.dim() {
            return Err(Error::Validation(format!(
                "state has dimension {} but the representation has {}",
                s.dim(),
                ctx.rep.dim()
            )));
        }
    }
    Ok(())
}

/// Index and value of `max |a_i − b_i|`.
fn worst_gap(a: &[Complex64], b: &[Complex64]) -> (usize, f64) {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(i, (x, y))| (i, (x - y).norm()))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc })
}

/// Unitary G-equivalence, decided by equality of the reductions onto irreps
/// and, independently, of the characteristic functions on the Haar nodes.
/// A `Yes` carries an explicit invariant unitary `V` with `Vψ = φ`.
pub fn unitary_g_equiv(psi: &PureState, phi: &PureState, ctx: &RepContext) -> Result<Verdict> {
    check_states(psi, phi, ctx)?;
    let tol = ctx.tol.equality;
    let (ra, rb) = (reduction(psi, &ctx.decomp)?, reduction(phi, &ctx.decomp)?);
    let red_res = ra.max_diff(&rb);
    let (va, vb) = (ctx.node_values(psi.amplitudes()), ctx.node_values(phi.amplitudes()));
    let (at, chi_res) = worst_gap(&va, &vb);
    let mut residuals = BTreeMap::new();
    residuals.insert("reduction".to_string(), red_res);
    residuals.insert("charfn".to_string(), chi_res);

    match (red_res <= tol, chi_res <= tol) {
        (true, true) => {
            let Some(v) = construct_invariant_unitary_witness(psi, phi, &ctx.decomp, tol) else {
                return Ok(Verdict::undecided(
                    "reductions and characteristic functions agree but no invariant unitary was reconstructed within tolerance",
                )
                .with_residuals(&residuals));
            };
            let check = verify_unitary_witness(&v, psi, phi, &ctx.rep, tol)?;
            residuals.insert("witness".to_string(), check.equality_residual);
            residuals.insert("commutation".to_string(), check.structure_residual);
            if !check.ok {
                return Ok(Verdict::undecided("reconstructed witness failed verification").with_residuals(&residuals));
            }
            Ok(Verdict::yes(Witness::InvariantUnitary(v)).with_residuals(&residuals))
        }
        (false, false) => {
            let cert = match ra.first_difference(&rb, tol) {
                Some((id, row, col, _)) => {
                    let get = |r: &crate::charfn::IrrepReduction| {
                        r.blocks.get(&id).map_or(c(0.0, 0.0), |m| m[(row, col)])
                    };
                    Certificate::ReductionEntry {
                        irrep: ra.labels.get(&id).or(rb.labels.get(&id)).cloned().unwrap_or_else(|| id.to_string()),
                        row,
                        col,
                        psi: get(&ra),
                        phi: get(&rb),
                    }
                }
                None => element_certificate(ctx, at, va[at], vb[at], "characteristic functions differ"),
            };
            Ok(Verdict::no(cert).with_residuals(&residuals))
        }
        _ => Ok(Verdict::undecided(
            "reduction and characteristic-function criteria disagree at this tolerance",
        )
        .with_residuals(&residuals)),
    }
}

fn element_certificate(ctx: &RepContext, node: usize, psi: Complex64, phi: Complex64, detail: &str) -> Certificate {
    let element = ctx.nodes()[node].0;
    Certificate::Element {
        element,
        label: element_label(ctx.group(), &element),
        psi,
        phi,
        detail: detail.to_string(),
    }
}

/// G-equivalence: `χ_φ = Θ·χ_ψ` for a one-dimensional representation `Θ`
/// (reported as the witness).
///
/// Finite groups: when the moduli agree, no `Θ` matches and either `χ`
/// vanishes somewhere, the outcome is undecided.
pub fn g_equiv(psi: &PureState, phi: &PureState, ctx: &RepContext) -> Result<Verdict> {
    check_states(psi, phi, ctx)?;
    let tol = ctx.tol.equality;
    let (va, vb) = (ctx.node_values(psi.amplitudes()), ctx.node_values(phi.amplitudes()));
    let moduli = |x: &[Complex64]| x.iter().map(|z| c(z.norm(), 0.0)).collect::<Vec<_>>();
    let (mod_at, mod_res) = worst_gap(&moduli(&va), &moduli(&vb));

    let (best, best_res, best_at) = match ctx.group().as_ref() {
        Group::U1 { .. } => best_charge_shift(psi, phi, ctx)?,
        _ => {
            let mut best: Option<(OneDimRep, f64, usize)> = None;
            for theta in one_dim_reps(&ctx.table)? {
                let shifted: Vec<Complex64> = ctx
                    .nodes()
                    .iter()
                    .zip(&va)
                    .map(|((g, _, _), a)| Ok(theta.eval(g)? * a))
                    .collect::<Result<_>>()?;
                let (at, res) = worst_gap(&vb, &shifted);
                if best.as_ref().is_none_or(|b| res < b.1) {
                    best = Some((theta, res, at));
                }
            }
            best.expect("the trivial representation is always present")
        }
    };
    let mut verdict = if best_res <= tol {
        Verdict::yes(Witness::OneDimRep(best))
    } else if mod_res > tol {
        Verdict::no(element_certificate(ctx, mod_at, va[mod_at], vb[mod_at], "moduli |χ_ψ| and |χ_φ| differ"))
    } else if !ctx.group().is_lie() && va.iter().chain(&vb).any(|z| z.norm() <= ctx.tol.zero) {
        Verdict::undecided("nonvanishing hypothesis violated: a characteristic function has zeros and no 1-d representation matches")
    } else {
        Verdict::no(element_certificate(
            ctx,
            best_at,
            va[best_at],
            vb[best_at],
            &format!("closest 1-d representation {} leaves a phase mismatch", best.label()),
        ))
    };
    verdict = verdict.with_residual("theta", best_res).with_residual("modulus", mod_res);
    Ok(verdict)
}

/// U(1): `χ_φ = e^{ikθ} χ_ψ` iff the charge distributions are shifted by `k`.
fn best_charge_shift(psi: &PureState, phi: &PureState, ctx: &RepContext) -> Result<(OneDimRep, f64, usize)> {
    let weights = |s: &PureState| -> BTreeMap<i64, f64> {
        let mut w = BTreeMap::new();
        for b in ctx.decomp.blocks() {
            if let crate::rep::IrrepId::Charge(n) = b.irrep {
                w.insert(n, b.components(s.amplitudes()).iter().map(|z| z.norm_sqr()).sum());
            }
        }
        w
    };
    let (wa, wb) = (weights(psi), weights(phi));
    let b = ctx.group().band() as i64;
    let mut best = (0i64, f64::INFINITY);
    for k in -2 * b..=2 * b {
        let mut res: f64 = 0.0;
        for n in -3 * b..=3 * b {
            let lhs = wb.get(&n).copied().unwrap_or(0.0);
            let rhs = wa.get(&(n - k)).copied().unwrap_or(0.0);
            res = res.max((lhs - rhs).abs());
        }
        if res < best.1 {
            best = (k, res);
        }
    }
    // Locate the worst node for the best shift on the Haar grid.
    let theta = OneDimRep::Charge(best.0);
    let (va, vb) = (ctx.node_values(psi.amplitudes()), ctx.node_values(phi.amplitudes()));
    let shifted: Vec<Complex64> = ctx
        .nodes()
        .iter()
        .zip(&va)
        .map(|((g, _, _), a)| Ok(theta.eval(g)? * a))
        .collect::<Result<_>>()?;
    let (at, _) = worst_gap(&vb, &shifted);
    Ok((theta, best.1, at))
}

/// `max_V |⟨φ|V|ψ⟩|` over G-invariant unitaries, equal to the sum over
/// irreps of the trace norms of the multiplicity-space cross operators.
pub fn max_invariant_fidelity(psi: &PureState, phi: &PureState, decomp: &IsotypicDecomposition) -> Result<f64> {
    for s in [psi, phi] {
        if s.dim() != decomp.dim() {
            return Err(Error::Validation("state dimension does not match the decomposition".into()));
        }
    }
    let total: f64 = cross_operators(psi, phi, decomp).iter().map(trace_norm).sum();
    Ok(total.min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deciders::Outcome;
    use crate::group::Builtin;
    use crate::linalg::random_unit_vector;
    use crate::oracle::random_invariant_unitary;
    use crate::rep::UnitaryRep;
    use crate::{CVec, Tolerances};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;
    use std::sync::Arc;

    fn regular(b: Builtin) -> RepContext {
        let (group, table) = IrrepTable::builtin(b);
        RepContext::new(UnitaryRep::regular(group).unwrap(), table, Tolerances::default()).unwrap()
    }

    #[test]
    fn one_dim_reps_of_catalog() {
        assert_eq!(one_dim_reps(&IrrepTable::builtin(Builtin::Cyclic(5)).1).unwrap().len(), 5);
        let s3: Vec<String> = one_dim_reps(&IrrepTable::builtin(Builtin::S3).1)
            .unwrap()
            .iter()
            .map(OneDimRep::label)
            .collect();
        assert_eq!(s3, vec!["trivial", "sign"]);
        let su2 = IrrepTable::for_lie(Arc::new(Group::su2(2))).unwrap();
        assert_eq!(one_dim_reps(&su2).unwrap(), vec![OneDimRep::Trivial]);
    }

    #[test]
    fn planted_invariant_unitary_is_recovered() {
        let ctx = regular(Builtin::D4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let psi = PureState::new(random_unit_vector(8, &mut rng)).unwrap();
        let phi = psi.apply(&random_invariant_unitary(&ctx.decomp, 3)).unwrap();
        let v = unitary_g_equiv(&psi, &phi, &ctx).unwrap();
        assert_eq!(v.outcome, Outcome::Yes);
        assert!(v.residuals["witness"] <= 1e-8);
        assert!((max_invariant_fidelity(&psi, &phi, &ctx.decomp).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn phase_and_translate_are_equivalent() {
        let ctx = regular(Builtin::Cyclic(6));
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let psi = PureState::new(random_unit_vector(6, &mut rng)).unwrap();
        let phase = PureState::new(psi.amplitudes() * cis(0.3)).unwrap();
        let moved = psi.apply(&ctx.rep.matrix(&GroupElement::Finite(2)).unwrap()).unwrap();
        for phi in [phase, moved] {
            assert_eq!(unitary_g_equiv(&psi, &phi, &ctx).unwrap().outcome, Outcome::Yes);
        }
    }

    #[test]
    fn different_reductions_give_certificate() {
        let ctx = regular(Builtin::S3);
        let triv = PureState::normalized(CVec::from_element(6, c(1.0, 0.0))).unwrap();
        let mut e = CVec::zeros(6);
        e[0] = c(1.0, 0.0);
        let delta = PureState::new(e).unwrap();
        let v = unitary_g_equiv(&triv, &delta, &ctx).unwrap();
        assert_eq!(v.outcome, Outcome::No);
        assert!(matches!(v.certificate, Some(Certificate::ReductionEntry { .. })));
        assert!(max_invariant_fidelity(&triv, &delta, &ctx.decomp).unwrap() < 1.0 - 1e-3);
    }

    #[test]
    fn charge_shift_is_g_equivalent() {
        let group = Arc::new(Group::u1(2));
        let rep = UnitaryRep::charges(group, vec![0, 1, 2]).unwrap();
        let ctx = RepContext::lie(rep, Tolerances::default()).unwrap();
        let s = FRAC_1_SQRT_2;
        let psi = PureState::from_slice(&[c(s, 0.0), c(s, 0.0), c(0.0, 0.0)]).unwrap();
        let phi = PureState::from_slice(&[c(0.0, 0.0), c(s, 0.0), c(s, 0.0)]).unwrap();
        let v = g_equiv(&psi, &phi, &ctx).unwrap();
        assert_eq!(v.outcome, Outcome::Yes);
        match v.witness {
            Some(Witness::OneDimRep(OneDimRep::Charge(1))) => {}
            other => panic!("{other:?}"),
        }
        assert_eq!(unitary_g_equiv(&psi, &phi, &ctx).unwrap().outcome, Outcome::No);
    }

    #[test]
    fn invariant_vs_asymmetric_is_not_g_equivalent() {
        let ctx = regular(Builtin::Q8);
        let triv = PureState::normalized(CVec::from_element(8, c(1.0, 0.0))).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let psi = PureState::new(random_unit_vector(8, &mut rng)).unwrap();
        let v = g_equiv(&triv, &psi, &ctx).unwrap();
        assert_eq!(v.outcome, Outcome::No);
        assert!(matches!(v.certificate, Some(Certificate::Element { .. })));
    }

    #[test]
    fn sign_twist_is_g_equivalent_on_s3() {
        let ctx = regular(Builtin::S3);
        let sign = ctx.decomp.block(crate::IrrepId::Finite(1)).unwrap().isometry.column(0).into_owned();
        let triv = ctx.decomp.block(crate::IrrepId::Finite(0)).unwrap().isometry.column(0).into_owned();
        let psi = PureState::new(triv).unwrap();
        let phi = PureState::new(sign).unwrap();
        let v = g_equiv(&psi, &phi, &ctx).unwrap();
        assert_eq!(v.outcome, Outcome::Yes);
        assert!(matches!(v.witness, Some(Witness::OneDimRep(OneDimRep::Finite { ref label, .. })) if label == "sign"));
    }
}
