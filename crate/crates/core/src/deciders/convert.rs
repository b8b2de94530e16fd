use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::charfn::{char_fn_with, CharFn, IrrepReduction, PureState};
use crate::deciders::pd::{fourier_blocks, synthesize};
use crate::deciders::{element_label, positive_definite_check, Certificate, PdFunction, RepContext, Verdict, Witness};
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::linalg::{
    c, coords_to_hermitian, hermitian_coord_len, hermitian_eigen, hermitian_part, hermitian_to_coords, kron, max_abs,
    psd_clip, real_lstsq, CMat,
};
use crate::oracle::verify_pd_witness;
use crate::rep::{decompose, spin_generators, IrrepId, IrrepTable, UnitaryRep};
use crate::Tolerances;

/// Iteration budget of the alternating-projection feasibility search.
pub const MAX_ITERATIONS: usize = 10_000;

/// One-way convertibility `ψ → φ` by a G-covariant channel: decides whether
/// a positive definite `f` with `f(e) = 1` and `χ_ψ = χ_φ·f` exists.
///
/// States in different representations can be compared with
/// [`convertible_chars`], or embedded into a direct sum first.
pub fn convertible(psi: &PureState, phi: &PureState, ctx: &RepContext) -> Result<Verdict> {
    for s in [psi, phi] {
        if s.dim() != ctx.rep.dim() {
            return Err(Error::Validation(format!(
                "state has dimension {} but the representation has {}",
                s.dim(),
                ctx.rep.dim()
            )));
        }
    }
    let chi = |s: &PureState| -> Result<CharFn> {
        if ctx.group().is_lie() {
            char_fn_with(s, &ctx.rep, &ctx.decomp)
        } else {
            Ok(CharFn::Finite {
                group: ctx.group().clone(),
                values: ctx.node_values(s.amplitudes()),
            })
        }
    };
    convertible_chars(&chi(psi)?, &chi(phi)?, &ctx.table, &ctx.tol)
}

/// [`convertible`] on characteristic functions directly.
pub fn convertible_chars(chi_psi: &CharFn, chi_phi: &CharFn, table: &IrrepTable, tol: &Tolerances) -> Result<Verdict> {
    if !chi_psi.group().same_group(chi_phi.group()) || !chi_psi.group().same_group(table.group()) {
        return Err(Error::Type("characteristic functions are over different groups".into()));
    }
    if let Some(v) = screen(chi_psi, chi_phi, tol)? {
        return Ok(v);
    }
    match chi_psi.group().as_ref() {
        Group::Finite(_) => finite(chi_psi, chi_phi, table, tol),
        Group::U1 { .. } => u1(chi_psi, chi_phi, table, tol),
        Group::Su2 { .. } => su2(chi_psi, chi_phi, table, tol),
    }
}

/// Necessary conditions from `|f(g)| ≤ f(e) = 1`: `χ_ψ` must vanish where
/// `χ_φ` does and `|χ_ψ| ≤ |χ_φ|` everywhere on the grid.
fn screen(chi_psi: &CharFn, chi_phi: &CharFn, tol: &Tolerances) -> Result<Option<Verdict>> {
    let group = chi_psi.group();
    let mut bound: Option<(GroupElement, f64, f64)> = None;
    for g in group.sample_grid() {
        let (a, b) = (chi_psi.eval(&g)?, chi_phi.eval(&g)?);
        if b.norm() <= tol.zero {
            if a.norm() > tol.equality {
                return Ok(Some(
                    Verdict::no(Certificate::Element {
                        element: g,
                        label: element_label(group, &g),
                        psi: a,
                        phi: b,
                        detail: "χ_φ vanishes where χ_ψ does not".into(),
                    })
                    .with_residual("zero_screen", a.norm()),
                ));
            }
        } else if a.norm() - b.norm() > tol.equality {
            let excess = a.norm() - b.norm();
            if bound.is_none_or(|(_, e, _)| excess > e) {
                bound = Some((g, excess, a.norm() / b.norm()));
            }
        }
    }
    Ok(bound.map(|(g, excess, modulus)| {
        Verdict::no(Certificate::PdBound {
            element: g,
            label: element_label(group, &g),
            modulus,
        })
        .with_residual("pd_bound", excess)
    }))
}

/// A candidate witness passing the PD check is re-verified independently.
fn accept(f: PdFunction, chi_psi: &CharFn, chi_phi: &CharFn, tol: &Tolerances, mut v: Verdict) -> Result<Verdict> {
    let check = verify_pd_witness(&f, chi_psi, chi_phi, tol.equality, tol.psd)?;
    v = v
        .with_residual("witness_equality", check.equality_residual)
        .with_residual("witness_min_eigenvalue", check.structure_residual);
    if check.ok {
        let mut yes = Verdict::yes(Witness::PdFunction(f));
        yes.residuals = v.residuals;
        Ok(yes)
    } else {
        v.outcome = crate::deciders::Outcome::Undecided;
        v.reason = Some("candidate positive definite function failed independent verification".into());
        Ok(v)
    }
}

fn determined(f: PdFunction, chi_psi: &CharFn, chi_phi: &CharFn, table: &IrrepTable, tol: &Tolerances) -> Result<Verdict> {
    let check = positive_definite_check(&f, table, tol)?;
    let base = Verdict::undecided("")
        .with_residual("min_eigenvalue", check.min_eigenvalue)
        .with_residual("hermitian_defect", check.hermitian_defect);
    if check.positive {
        return accept(f, chi_psi, chi_phi, tol, base);
    }
    let cert = check.certificate.expect("a failed check carries a certificate");
    let mut no = Verdict::no(cert);
    no.residuals = base.residuals;
    Ok(no)
}

fn finite(chi_psi: &CharFn, chi_phi: &CharFn, table: &IrrepTable, tol: &Tolerances) -> Result<Verdict> {
    let group = chi_psi.group().clone();
    let (a, b) = (chi_psi.values().expect("finite"), chi_phi.values().expect("finite"));
    let free: Vec<bool> = b.iter().map(|z| z.norm() <= tol.zero).collect();
    let f0: Vec<Complex64> = a
        .iter()
        .zip(b)
        .zip(&free)
        .map(|((x, y), z)| if *z { c(0.0, 0.0) } else { x / y })
        .collect();
    if !free.iter().any(|z| *z) {
        let f = PdFunction::Finite { group, values: f0 };
        return determined(f, chi_psi, chi_phi, table, tol);
    }
    alternating_finite(&group, &f0, &free, chi_psi, chi_phi, table, tol)
}

/// Alternating projections between `{f = f₀ off the zero set of χ_φ}` and the
/// PD cone. The cone projection clips each Fourier block, which is the
/// eigenvalue clipping of the group-circulant Gram matrix.
fn alternating_finite(
    group: &Arc<Group>,
    f0: &[Complex64],
    free: &[bool],
    chi_psi: &CharFn,
    chi_phi: &CharFn,
    table: &IrrepTable,
    tol: &Tolerances,
) -> Result<Verdict> {
    let n = f0.len() as f64;
    let covered: usize = table.irreps().iter().map(|i| i.dim * i.dim).sum();
    if covered != f0.len() {
        return Err(Error::Validation("feasibility search needs a complete irrep table".into()));
    }
    let mut x = f0.to_vec();
    let (mut pd_res, mut aff_res) = (f64::INFINITY, f64::INFINITY);
    for it in 1..=MAX_ITERATIONS {
        let blocks = fourier_blocks(&x, group, table)?;
        let mut gram_min = f64::INFINITY;
        let clipped: Vec<(IrrepId, CMat)> = blocks
            .into_iter()
            .map(|(id, a)| {
                let h = hermitian_part(&a);
                let (vals, _) = hermitian_eigen(&h);
                gram_min = gram_min.min(vals[0] * n / a.nrows() as f64);
                (id, psd_clip(&h))
            })
            .collect();
        pd_res = (-gram_min).max(0.0);
        let p = synthesize(&clipped, group, table)?;
        aff_res = p
            .iter()
            .zip(f0)
            .zip(free)
            .filter(|(_, z)| !**z)
            .map(|((u, v), _)| (u - v).norm())
            .fold(0.0, f64::max);

        let candidate = if pd_res <= tol.psd {
            Some(x.clone())
        } else if pd_res < tol.feasibility && aff_res < tol.feasibility {
            Some(p.clone())
        } else {
            None
        };
        if let Some(values) = candidate {
            let f = PdFunction::Finite { group: group.clone(), values };
            let check = verify_pd_witness(&f, chi_psi, chi_phi, tol.equality, tol.psd)?;
            if check.ok {
                return Ok(Verdict::yes(Witness::PdFunction(f))
                    .with_residual("iterations", it as f64)
                    .with_residual("pd_residual", pd_res)
                    .with_residual("affine_residual", aff_res)
                    .with_residual("witness_equality", check.equality_residual)
                    .with_residual("witness_min_eigenvalue", check.structure_residual));
            }
        }
        x = p
            .into_iter()
            .zip(f0)
            .zip(free)
            .map(|((u, v), z)| if *z { u } else { *v })
            .collect();
    }
    Ok(Verdict::undecided(format!(
        "alternating projections did not reach a verified feasible point within {MAX_ITERATIONS} iterations; infeasibility is not certified"
    ))
    .with_residual("iterations", MAX_ITERATIONS as f64)
    .with_residual("pd_residual", pd_res)
    .with_residual("affine_residual", aff_res))
}

fn reduction_of(chi: &CharFn) -> &IrrepReduction {
    chi.reduction().expect("Lie characteristic functions carry their reduction")
}

/// U(1): `χ_ψ = χ_φ·f` with `f = Σ q_k e^{ikθ}` is the convolution
/// `p_ψ = p_φ * q` of charge distributions. Any solution is supported in
/// `[min ψ − min φ, max ψ − max φ]` and is unique.
fn u1(chi_psi: &CharFn, chi_phi: &CharFn, table: &IrrepTable, tol: &Tolerances) -> Result<Verdict> {
    let weights = |chi: &CharFn| -> BTreeMap<i64, f64> {
        reduction_of(chi)
            .blocks
            .iter()
            .filter_map(|(id, m)| match id {
                IrrepId::Charge(n) if m[(0, 0)].re > tol.zero => Some((*n, m[(0, 0)].re)),
                _ => None,
            })
            .collect()
    };
    let (pa, pb) = (weights(chi_psi), weights(chi_phi));
    let support = |p: &BTreeMap<i64, f64>| -> Result<(i64, i64)> {
        match (p.keys().next(), p.keys().next_back()) {
            (Some(lo), Some(hi)) => Ok((*lo, *hi)),
            _ => Err(Error::Validation("characteristic function with no charge weight".into())),
        }
    };
    let ((alo, ahi), (blo, bhi)) = (support(&pa)?, support(&pb)?);
    let (klo, khi) = (alo - blo, ahi - bhi);
    if klo > khi {
        let norm = pa.values().map(|w| w * w).sum::<f64>().sqrt();
        return Ok(Verdict::no(Certificate::Infeasible {
            residual: norm,
            detail: format!(
                "charge support of χ_ψ [{alo}, {ahi}] is narrower than that of χ_φ [{blo}, {bhi}]"
            ),
        })
        .with_residual("linear", norm));
    }
    let ks: Vec<i64> = (klo..=khi).collect();
    let rows: Vec<i64> = (alo..=ahi).collect();
    let a = DMatrix::from_fn(rows.len(), ks.len(), |r, k| pb.get(&(rows[r] - ks[k])).copied().unwrap_or(0.0));
    let rhs = DVector::from_fn(rows.len(), |r, _| pa.get(&rows[r]).copied().unwrap_or(0.0));
    let (q, res) = real_lstsq(&a, &rhs, tol.kernel);
    if res > tol.equality {
        return Ok(Verdict::no(Certificate::Infeasible {
            residual: res,
            detail: "charge distribution of χ_ψ is not a convolution of χ_φ's".into(),
        })
        .with_residual("linear", res));
    }
    let coefficients = ks.iter().zip(q.iter()).map(|(k, v)| (*k, c(*v, 0.0))).collect();
    let f = PdFunction::U1 {
        group: chi_psi.group().clone(),
        coefficients,
    };
    Ok(determined(f, chi_psi, chi_phi, table, tol)?.with_residual("linear", res))
}

/// Linear map `F ↦ reduction of χ_φ·f` for SU(2), in orthonormal real
/// coordinates of the Hermitian blocks `F_j` (`2j ≤ f_band`).
struct Su2System {
    f_blocks: Vec<(u32, usize)>,
    out_blocks: Vec<(u32, usize)>,
    matrix: DMatrix<f64>,
}

impl Su2System {
    fn build(phi: &BTreeMap<u32, CMat>, f_band: u32) -> Result<Self> {
        let mut f_blocks = Vec::new();
        let mut cols = 0;
        for tj in 0..=f_band {
            f_blocks.push((tj, cols));
            cols += hermitian_coord_len(tj as usize + 1);
        }
        let max_phi = phi.keys().copied().max().unwrap_or(0);
        let mut out_blocks = Vec::new();
        let mut rows = 0;
        let mut out_offset = BTreeMap::new();
        for tj in 0..=(max_phi + f_band) {
            out_blocks.push((tj, rows));
            out_offset.insert(tj, rows);
            rows += hermitian_coord_len(tj as usize + 1);
        }
        let mut matrix = DMatrix::zeros(rows, cols);
        let mut coords = Vec::new();
        for (tj1, rho) in phi {
            for &(tj2, col0) in &f_blocks {
                let cg = clebsch_gordan(*tj1, tj2)?;
                let d2 = tj2 as usize + 1;
                for k in 0..hermitian_coord_len(d2) {
                    let mut unit = vec![0.0; hermitian_coord_len(d2)];
                    unit[k] = 1.0;
                    let prod = kron(rho, &coords_to_hermitian(&unit, d2));
                    for (tj, b) in &cg {
                        coords.clear();
                        hermitian_to_coords(&(b.adjoint() * &prod * b), &mut coords);
                        let r0 = out_offset[tj];
                        for (r, v) in coords.iter().enumerate() {
                            matrix[(r0 + r, col0 + k)] += v;
                        }
                    }
                }
            }
        }
        Ok(Su2System {
            f_blocks,
            out_blocks,
            matrix,
        })
    }

    fn rhs(&self, psi: &BTreeMap<u32, CMat>) -> DVector<f64> {
        let mut out = DVector::zeros(self.matrix.nrows());
        let mut coords = Vec::new();
        for &(tj, r0) in &self.out_blocks {
            if let Some(m) = psi.get(&tj) {
                coords.clear();
                hermitian_to_coords(m, &mut coords);
                for (r, v) in coords.iter().enumerate() {
                    out[r0 + r] = *v;
                }
            }
        }
        out
    }

    fn blocks(&self, x: &DVector<f64>) -> BTreeMap<u32, CMat> {
        self.f_blocks
            .iter()
            .map(|&(tj, off)| {
                let d = tj as usize + 1;
                (tj, coords_to_hermitian(&x.as_slice()[off..off + hermitian_coord_len(d)], d))
            })
            .collect()
    }

    fn coords(&self, blocks: &BTreeMap<u32, CMat>) -> DVector<f64> {
        let mut out = Vec::with_capacity(self.matrix.ncols());
        for (tj, _) in &self.f_blocks {
            hermitian_to_coords(&blocks[tj], &mut out);
        }
        DVector::from_vec(out)
    }
}

/// Isometries `B_J` with `D^{j1} ⊗ D^{j2} = Σ_J B_J D^J B_J†`, keyed by `2J`.
fn clebsch_gordan(tj1: u32, tj2: u32) -> Result<Vec<(u32, CMat)>> {
    let group = Arc::new(Group::su2(tj1 + tj2));
    let spin = |tj: u32| {
        let [x, y, z] = spin_generators(tj);
        UnitaryRep::generators(group.clone(), x, y, z)
    };
    let rep = crate::rep::tensor_rep(&spin(tj1)?, &spin(tj2)?)?;
    let table = IrrepTable::for_lie(rep.group().clone())?;
    let dec = decompose(&rep, &table)?;
    Ok(dec
        .blocks()
        .iter()
        .map(|b| match b.irrep {
            IrrepId::Spin(tj) => (tj, b.isometry.clone()),
            _ => unreachable!("SU(2) decompositions have spin blocks"),
        })
        .collect())
}

/// SU(2): the constraint becomes a finite real linear system on the Fourier
/// blocks of `f` (band `2j ≤ band ψ + band φ`), followed by a PSD check or,
/// when the solution is not unique, alternating projections.
fn su2(chi_psi: &CharFn, chi_phi: &CharFn, table: &IrrepTable, tol: &Tolerances) -> Result<Verdict> {
    let spins = |chi: &CharFn| -> BTreeMap<u32, CMat> {
        reduction_of(chi)
            .blocks
            .iter()
            .filter_map(|(id, m)| match id {
                IrrepId::Spin(tj) if max_abs(m) > tol.zero => Some((*tj, m.clone())),
                _ => None,
            })
            .collect()
    };
    let (pa, pb) = (spins(chi_psi), spins(chi_phi));
    let band = |p: &BTreeMap<u32, CMat>| p.keys().copied().max().unwrap_or(0);
    let system = Su2System::build(&pb, band(&pa) + band(&pb))?;
    let rhs = system.rhs(&pa);
    let a = &system.matrix;
    let (x0, res) = real_lstsq(a, &rhs, tol.kernel);
    if res > tol.equality {
        return Ok(Verdict::no(Certificate::Infeasible {
            residual: res,
            detail: "no band-limited f reproduces the reduction of χ_ψ".into(),
        })
        .with_residual("linear", res));
    }
    let null = real_null_space(a, tol.kernel);
    let group = chi_psi.group().clone();
    let make = |x: &DVector<f64>| PdFunction::Su2 {
        group: group.clone(),
        blocks: system.blocks(x),
    };
    if null.ncols() == 0 {
        return Ok(determined(make(&x0), chi_psi, chi_phi, table, tol)?.with_residual("linear", res));
    }

    let mut x = x0.clone();
    let (mut pd_res, mut aff_res) = (f64::INFINITY, f64::INFINITY);
    for it in 1..=MAX_ITERATIONS {
        let blocks = system.blocks(&x);
        pd_res = blocks
            .values()
            .map(|b| -hermitian_eigen(b).0[0])
            .fold(0.0, f64::max);
        let clipped: BTreeMap<u32, CMat> = blocks.iter().map(|(tj, b)| (*tj, psd_clip(b))).collect();
        let p = system.coords(&clipped);
        aff_res = (a * &p - &rhs).amax();
        let candidate = if pd_res <= tol.psd {
            Some(x.clone())
        } else if pd_res < tol.feasibility && aff_res < tol.feasibility {
            Some(p.clone())
        } else {
            None
        };
        if let Some(cx) = candidate {
            let f = make(&cx);
            let check = verify_pd_witness(&f, chi_psi, chi_phi, tol.equality, tol.psd)?;
            if check.ok {
                return Ok(Verdict::yes(Witness::PdFunction(f))
                    .with_residual("linear", res)
                    .with_residual("iterations", it as f64)
                    .with_residual("pd_residual", pd_res)
                    .with_residual("affine_residual", aff_res)
                    .with_residual("witness_equality", check.equality_residual)
                    .with_residual("witness_min_eigenvalue", check.structure_residual));
            }
        }
        // Orthogonal projection onto x0 + span(null).
        x = &x0 + &null * (null.transpose() * (&p - &x0));
    }
    Ok(Verdict::undecided(format!(
        "alternating projections did not reach a verified feasible point within {MAX_ITERATIONS} iterations; infeasibility is not certified"
    ))
    .with_residual("linear", res)
    .with_residual("iterations", MAX_ITERATIONS as f64)
    .with_residual("pd_residual", pd_res)
    .with_residual("affine_residual", aff_res))
}

/// Orthonormal basis (columns) of the kernel of a real matrix.
fn real_null_space(a: &DMatrix<f64>, rcond: f64) -> DMatrix<f64> {
    let (m, n) = a.shape();
    let padded = if m < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let kernel: Vec<usize> = (0..n)
        .filter(|i| svd.singular_values[*i] <= rcond * smax.max(1e-300))
        .collect();
    DMatrix::from_fn(n, kernel.len(), |r, k| v_t[(kernel[k], r)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfn::char_fn;
    use crate::deciders::Outcome;
    use crate::group::Builtin;
    use crate::linalg::random_unit_vector;
    use crate::CVec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn regular(b: Builtin) -> RepContext {
        let (group, table) = IrrepTable::builtin(b);
        RepContext::new(UnitaryRep::regular(group).unwrap(), table, Tolerances::default()).unwrap()
    }

    fn sqrt_state(p: &[f64]) -> PureState {
        PureState::from_slice(&p.iter().map(|x| c(x.sqrt(), 0.0)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn reflexive_with_constant_witness() {
        let ctx = regular(Builtin::S3);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let psi = PureState::new(random_unit_vector(6, &mut rng)).unwrap();
        let v = convertible(&psi, &psi, &ctx).unwrap();
        assert_eq!(v.outcome, Outcome::Yes);
        let Some(Witness::PdFunction(f)) = v.witness else { panic!() };
        for g in 0..6 {
            assert!((f.eval(&GroupElement::Finite(g)).unwrap() - c(1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn discarding_a_copy_is_allowed() {
        let (group, table) = IrrepTable::builtin(Builtin::D4);
        let rep = UnitaryRep::regular(group).unwrap();
        let rep2 = crate::rep::tensor_rep(&rep, &rep).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let psi = PureState::new(random_unit_vector(8, &mut rng)).unwrap();
        let two = psi.tensor(&psi);
        let v = convertible_chars(
            &char_fn(&two, &rep2).unwrap(),
            &char_fn(&psi, &rep).unwrap(),
            &table,
            &Tolerances::default(),
        )
        .unwrap();
        assert_eq!(v.outcome, Outcome::Yes, "{v:?}");
    }

    #[test]
    fn invariant_to_asymmetric_hits_pd_bound() {
        let ctx = regular(Builtin::Cyclic(4));
        let triv = PureState::normalized(CVec::from_element(4, c(1.0, 0.0))).unwrap();
        let psi = sqrt_state(&[0.7, 0.1, 0.1, 0.1]);
        let v = convertible(&triv, &psi, &ctx).unwrap();
        assert_eq!(v.outcome, Outcome::No);
        assert!(matches!(v.certificate, Some(Certificate::PdBound { modulus, .. }) if modulus > 1.0));
        assert_eq!(convertible(&psi, &triv, &ctx).unwrap().outcome, Outcome::Yes);
    }

    #[test]
    fn zero_pattern_feasible_by_projections() {
        // Amplitudes on the four characters of Z4; χ_φ vanishes at g².
        let (group, table) = IrrepTable::builtin(Builtin::Cyclic(4));
        let content: Vec<_> = (0..4).map(|k| (IrrepId::Finite(k), 1)).collect();
        let rep = UnitaryRep::from_irreps(&table, &content).unwrap();
        assert!(rep.group().same_group(&group));
        let ctx = RepContext::new(rep, table, Tolerances::default()).unwrap();
        let phi = sqrt_state(&[0.5, 0.25, 0.0, 0.25]);
        let psi = sqrt_state(&[0.35, 0.35, 0.15, 0.15]);
        let v = convertible(&psi, &phi, &ctx).unwrap();
        assert_eq!(v.outcome, Outcome::Yes, "{v:?}");
        // Equal moduli, phase e^{iπ/4} at the generator: the free value would
        // need t ≥ √2 − 1 and t ≤ 1 − √2 at once.
        let (hi, lo) = ((2.0 + 2f64.sqrt()) / 8.0, (2.0 - 2f64.sqrt()) / 8.0);
        let psi = sqrt_state(&[hi, hi, lo, lo]);
        let v = convertible(&psi, &phi, &ctx).unwrap();
        assert_eq!(v.outcome, Outcome::Undecided, "{v:?}");
    }

    #[test]
    fn u1_shifted_and_spread_distributions() {
        let group = Arc::new(Group::u1(3));
        let rep = UnitaryRep::charges(group, vec![0, 1, 2, 3]).unwrap();
        let ctx = RepContext::lie(rep, Tolerances::default()).unwrap();
        // ψ = φ ⊗ coin: p_ψ = p_φ * (1/2, 1/2).
        let phi = sqrt_state(&[0.5, 0.5, 0.0, 0.0]);
        let psi = sqrt_state(&[0.25, 0.5, 0.25, 0.0]);
        let v = convertible(&psi, &phi, &ctx).unwrap();
        assert_eq!(v.outcome, Outcome::Yes, "{v:?}");
        // The reverse direction would need negative Fourier weight or a
        // narrower support.
        assert_eq!(convertible(&phi, &psi, &ctx).unwrap().outcome, Outcome::No);
    }

    fn spin_rep(tj: u32) -> UnitaryRep {
        let [x, y, z] = spin_generators(tj);
        UnitaryRep::generators(Arc::new(Group::su2(tj)), x, y, z).unwrap()
    }

    #[test]
    fn clebsch_gordan_blocks_are_isometries() {
        let cg = clebsch_gordan(2, 1).unwrap();
        let spins: Vec<u32> = cg.iter().map(|(tj, _)| *tj).collect();
        assert_eq!(spins, vec![1, 3]);
        for (tj, b) in &cg {
            assert!(crate::linalg::max_abs_diff(&(b.adjoint() * b), &crate::linalg::identity(*tj as usize + 1)) < 1e-10);
        }
    }

    #[test]
    fn su2_two_copies_to_one() {
        let rep = spin_rep(1);
        let rep2 = crate::rep::tensor_rep(&rep, &rep).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let psi = PureState::new(random_unit_vector(2, &mut rng)).unwrap();
        let table = IrrepTable::for_lie(rep2.group().clone()).unwrap();
        let tol = Tolerances::default();
        let a = char_fn(&psi.tensor(&psi), &rep2).unwrap();
        let b = char_fn(&psi, &rep).unwrap();
        let b = CharFn::Lie { group: rep2.group().clone(), reduction: b.reduction().unwrap().clone() };
        assert_eq!(convertible_chars(&a, &b, &table, &tol).unwrap().outcome, Outcome::Yes);
        assert_eq!(convertible_chars(&b, &a, &table, &tol).unwrap().outcome, Outcome::No);
    }
}
