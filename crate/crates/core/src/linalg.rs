//! Dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `e^{iθ}`.
#[inline]
pub fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    let mut out = CVec::zeros(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i * b.len() + j] = x * y;
        }
    }
    out
}

pub fn block_diag(a: &CMat, b: &CMat) -> CMat {
    let n = a.nrows() + b.nrows();
    let mut out = CMat::zeros(n, n);
    out.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), (b.nrows(), b.ncols()))
        .copy_from(b);
    out
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn vec_max_abs(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * c(0.5, 0.0)
}

pub fn hermiticity_defect(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigen(m).0.first().copied().unwrap_or(0.0)
}

/// Eigenvector for the smallest eigenvalue of the Hermitian part.
pub fn min_eigenpair(m: &CMat) -> (f64, CVec) {
    let (vals, vecs) = hermitian_eigen(m);
    (vals[0], vecs.column(0).into_owned())
}

/// Projection of a Hermitian matrix onto the PSD cone (eigenvalue clipping).
pub fn psd_clip(m: &CMat) -> CMat {
    let (vals, vecs) = hermitian_eigen(m);
    let n = vals.len();
    let mut d = CMat::zeros(n, n);
    for (i, v) in vals.iter().enumerate() {
        d[(i, i)] = c(v.max(0.0), 0.0);
    }
    &vecs * d * vecs.adjoint()
}

/// `exp(-i t H)` for Hermitian `H`.
pub fn exp_minus_i(h: &CMat, t: f64) -> CMat {
    let (vals, vecs) = hermitian_eigen(h);
    let n = vals.len();
    let mut d = CMat::zeros(n, n);
    for (i, v) in vals.iter().enumerate() {
        d[(i, i)] = cis(-t * v);
    }
    &vecs * d * vecs.adjoint()
}

/// Singular values, descending.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn trace_norm(m: &CMat) -> f64 {
    singular_values(m).iter().sum()
}

/// Full SVD `m = U Σ V†` of a square matrix with singular values descending.
pub fn svd_square(m: &CMat) -> (CMat, Vec<f64>, CMat) {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let mut u_s = CMat::zeros(n, n);
    let mut v_s = CMat::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (col, &i) in order.iter().enumerate() {
        u_s.set_column(col, &u.column(i));
        v_s.set_column(col, &v_t.row(i).adjoint());
        s.push(svd.singular_values[i]);
    }
    (u_s, s, v_s)
}

/// Orthonormal basis of the kernel of `a` (columns), with singular values
/// below `tol · max(1, σ_max)` treated as zero.
pub fn null_space(a: &CMat, tol: f64) -> CMat {
    let cols = a.ncols();
    if cols == 0 {
        return CMat::zeros(0, 0);
    }
    // With at least as many rows as columns the thin SVD already has a full
    // right basis; otherwise pad with zero rows.
    let full = if a.nrows() >= cols {
        a.clone()
    } else {
        let mut sq = CMat::zeros(cols, cols);
        sq.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
        sq
    };
    let svd = full.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let scale = svd.singular_values.iter().copied().fold(0.0, f64::max).max(1.0);
    let kernel: Vec<CVec> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, sv)| **sv <= tol * scale)
        .map(|(i, _)| v_t.row(i).adjoint())
        .collect();
    let mut k = CMat::zeros(cols, kernel.len());
    for (j, b) in kernel.iter().enumerate() {
        k.set_column(j, b);
    }
    canonical_basis(&(&k * k.adjoint()), kernel.len())
}

/// Deterministic orthonormal basis for the range of an orthogonal projector.
///
/// Greedy pivoting on the projected standard basis vectors: at each step the
/// candidate with the largest residual norm is taken (lowest index on ties),
/// orthogonalised against the accepted vectors and phase-fixed so its entry
/// at the pivot index is real positive.
pub fn canonical_basis(projector: &CMat, rank: usize) -> CMat {
    let n = projector.nrows();
    let mut accepted: Vec<CVec> = Vec::with_capacity(rank);
    let mut used = vec![false; n];
    while accepted.len() < rank {
        let mut best: Option<(usize, CVec, f64)> = None;
        for k in 0..n {
            if used[k] {
                continue;
            }
            let mut r: CVec = projector.column(k).into_owned();
            for q in &accepted {
                let proj = q.dotc(&r);
                r -= q * proj;
            }
            let norm = r.norm();
            if best.as_ref().is_none_or(|b| norm > b.2 + 1e-12) {
                best = Some((k, r, norm));
            }
        }
        let Some((k, mut r, norm)) = best else { break };
        if norm < 1e-12 {
            break;
        }
        used[k] = true;
        r /= c(norm, 0.0);
        let pivot = r[k];
        if pivot.norm() > 0.0 {
            r *= pivot.conj() / pivot.norm();
        }
        accepted.push(r);
    }
    let mut out = CMat::zeros(n, accepted.len());
    for (j, v) in accepted.iter().enumerate() {
        out.set_column(j, v);
    }
    out
}

/// Haar-random unitary via phase-corrected QR of a Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    let g = CMat::from_fn(n, n, |_, _| gaussian_complex(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Uniformly random unit vector.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    let v = CVec::from_fn(n, |_, _| gaussian_complex(rng));
    let norm = v.norm();
    v / c(norm, 0.0)
}

pub fn unitarity_defect(u: &CMat) -> f64 {
    max_abs_diff(&(u.adjoint() * u), &identity(u.nrows()))
}

/// Real least-squares solve via SVD; returns `(x, residual_norm)`.
pub fn real_lstsq(a: &DMatrix<f64>, b: &DVector<f64>, rcond: f64) -> (DVector<f64>, f64) {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let x = svd
        .solve(b, rcond * smax.max(1e-300))
        .expect("svd computed with u and v");
    let res = (a * &x - b).norm();
    (x, res)
}

/// Moore–Penrose pseudo-inverse and numerical rank of a real matrix.
pub fn real_pinv(a: &DMatrix<f64>, rcond: f64) -> (DMatrix<f64>, usize) {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = rcond * smax.max(1e-300);
    let rank = svd.singular_values.iter().filter(|s| **s > cut).count();
    let pinv = svd.pseudo_inverse(cut).expect("svd computed with u and v");
    (pinv, rank)
}

/// Coordinates of a Hermitian matrix in an orthonormal (Frobenius) real basis:
/// diagonal entries, then `√2·Re`, `√2·Im` of the strict upper triangle.
pub fn hermitian_to_coords(m: &CMat, out: &mut Vec<f64>) {
    let n = m.nrows();
    for i in 0..n {
        out.push(m[(i, i)].re);
    }
    let s = std::f64::consts::SQRT_2;
    for i in 0..n {
        for j in (i + 1)..n {
            let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            out.push(s * z.re);
            out.push(s * z.im);
        }
    }
}

pub fn hermitian_coord_len(n: usize) -> usize {
    n * n
}

pub fn coords_to_hermitian(coords: &[f64], n: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = c(coords[i], 0.0);
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut k = n;
    for i in 0..n {
        for j in (i + 1)..n {
            let z = c(coords[k] * s, coords[k + 1] * s);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            k += 2;
        }
    }
    m
}

/// Quadratic form `x† M x`.
pub fn quadratic_form(m: &CMat, x: &CVec) -> Complex64 {
    x.dotc(&(m * x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..6 {
            assert!(unitarity_defect(&haar_unitary(n, &mut rng)) < 1e-12);
        }
    }

    #[test]
    fn exp_of_pauli_z() {
        let z = CMat::from_diagonal(&CVec::from_vec(vec![c(1.0, 0.0), c(-1.0, 0.0)]));
        let u = exp_minus_i(&z, 0.3);
        assert!((u[(0, 0)] - cis(-0.3)).norm() < 1e-14);
        assert!((u[(1, 1)] - cis(0.3)).norm() < 1e-14);
    }

    #[test]
    fn null_space_of_rank_one() {
        let a = CMat::from_row_slice(1, 3, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let k = null_space(&a, 1e-9);
        assert_eq!(k.ncols(), 2);
        assert!(max_abs(&(&a * &k)) < 1e-12);
        assert!(max_abs_diff(&(k.adjoint() * &k), &identity(2)) < 1e-12);
    }

    #[test]
    fn hermitian_coords_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = CMat::from_fn(4, 4, |_, _| gaussian_complex(&mut rng));
        let h = hermitian_part(&g);
        let mut coords = Vec::new();
        hermitian_to_coords(&h, &mut coords);
        assert_eq!(coords.len(), hermitian_coord_len(4));
        let back = coords_to_hermitian(&coords, 4);
        assert!(max_abs_diff(&h, &back) < 1e-14);
        let frob: f64 = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((frob - h.norm()).abs() < 1e-12);
    }

    #[test]
    fn canonical_basis_is_reproducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = haar_unitary(5, &mut rng);
        let b = u.columns(0, 2).into_owned();
        let p = &b * b.adjoint();
        let q1 = canonical_basis(&p, 2);
        let q2 = canonical_basis(&p.clone(), 2);
        assert_eq!(q1, q2);
        assert!(max_abs_diff(&(&q1 * q1.adjoint()), &p) < 1e-12);
    }
}
