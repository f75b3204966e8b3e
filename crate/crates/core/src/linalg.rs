//! Dense complex linear algebra shared by every module.
//!
//! Rank and membership decisions use a relative singular-value threshold:
//! a singular value counts as nonzero when it exceeds [`RANK_RTOL`] times
//! the largest singular value of the matrix under consideration.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Relative singular-value cutoff for numerical rank.
pub const RANK_RTOL: f64 = 1e-8;

/// Absolute floor below which a whole matrix is treated as zero.
const ZERO_FLOOR: f64 = 1e-13;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Largest entry modulus; zero for an empty matrix.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_vec(v: &CVec) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn basis_vector(n: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(n);
    v[i] = ONE;
    v
}

/// Matrix unit `E_ij` of size `n`.
pub fn matrix_unit(n: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(i, j)] = ONE;
    m
}

/// Column-major vectorization.
pub fn vec_of(m: &CMat) -> CVec {
    CVec::from_column_slice(m.as_slice())
}

pub fn unvec(v: &CVec, n: usize) -> CMat {
    assert_eq!(v.len(), n * n, "vector length is not a square");
    CMat::from_column_slice(n, n, v.as_slice())
}

pub fn columns_of(vectors: &[CVec], dim: usize) -> CMat {
    let mut m = CMat::zeros(dim, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}

/// Singular value decomposition `m = u diag(s) v^†` with `c = ncols(m)`
/// singular values, `u` of shape `r × c` and a full unitary `v` of shape
/// `c × c`. Columns of `u` belonging to zero singular values may be zero.
struct Svd {
    s: Vec<f64>,
    u: CMat,
    v: CMat,
}

/// LAPACK-free SVD with an accuracy check. The dense bidiagonal SVD is
/// tried first with an iteration cap; if it fails to reproduce `m` (it can mis-converge on
/// inputs with tiny complex entries) a one-sided Jacobi SVD is used.
fn svd(m: &CMat) -> Svd {
    let (r, c) = m.shape();
    let scale = m.norm().max(ZERO_FLOOR);
    let work = if r < c {
        let mut p = CMat::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let max_iter = 200 * work.nrows().max(work.ncols()).max(10);
    if let Some(dec) = work.try_svd(true, true, f64::EPSILON, max_iter) {
        let (Some(u), Some(v_t)) = (dec.u, dec.v_t) else { return jacobi_svd(m) };
        let s: Vec<f64> = dec.singular_values.iter().copied().collect();
        let u = u.rows(0, r).into_owned();
        let sigma = CMat::from_diagonal(&CVec::from_iterator(s.len(), s.iter().map(|x| re(*x))));
        let recon = (&u * sigma * &v_t - m).norm() / scale;
        let orth = (v_t.adjoint() * &v_t - identity(c)).norm();
        if recon < 1e-11 && orth < 1e-11 && s.len() == c && s.iter().all(|x| x.is_finite()) {
            return Svd { s, u, v: v_t.adjoint() };
        }
    }
    jacobi_svd(m)
}

/// One-sided (Hestenes) Jacobi SVD.
fn jacobi_svd(m: &CMat) -> Svd {
    let (r, c) = m.shape();
    let mut a = m.clone();
    let mut v = identity(c);
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..c {
            for q in (p + 1)..c {
                let alpha: f64 = a.column(p).norm_squared();
                let beta: f64 = a.column(q).norm_squared();
                let gamma = a.column(p).dotc(&a.column(q));
                let g = gamma.norm();
                if g <= 1e-15 * (alpha * beta).sqrt() || g < 1e-300 {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for mat in [&mut a, &mut v] {
                    let col_p = mat.column(p).into_owned();
                    let col_q = mat.column(q).into_owned() * phase.conj();
                    mat.set_column(p, &(&col_p * re(cs) - &col_q * re(sn)));
                    mat.set_column(q, &(&col_p * re(sn) + &col_q * re(cs)));
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let s: Vec<f64> = (0..c).map(|k| a.column(k).norm()).collect();
    let mut u = CMat::zeros(r, c);
    for k in 0..c {
        if s[k] > 0.0 {
            u.set_column(k, &(a.column(k) / re(s[k])));
        }
    }
    Svd { s, u, v }
}

fn cutoff(svals: &[f64]) -> f64 {
    let largest = svals.iter().copied().fold(0.0, f64::max);
    if largest < ZERO_FLOOR {
        f64::INFINITY
    } else {
        RANK_RTOL * largest
    }
}

/// Orthonormal basis (as columns) of the kernel of `m`.
pub fn null_space(m: &CMat) -> CMat {
    let c = m.ncols();
    if m.nrows() == 0 {
        return identity(c);
    }
    let dec = svd(m);
    let thr = cutoff(&dec.s);
    let cols: Vec<CVec> = (0..c).filter(|&k| !(dec.s[k] > thr)).map(|k| dec.v.column(k).into_owned()).collect();
    columns_of(&cols, c)
}

/// Orthonormal basis of the column space of `m`.
pub fn column_space(m: &CMat) -> CMat {
    let r = m.nrows();
    if m.ncols() == 0 || r == 0 {
        return CMat::zeros(r, 0);
    }
    let dec = svd(m);
    let thr = cutoff(&dec.s);
    let cols: Vec<CVec> = (0..m.ncols()).filter(|&k| dec.s[k] > thr).map(|k| dec.u.column(k).into_owned()).collect();
    columns_of(&cols, r)
}

/// Orthonormal basis (as columns) of the left kernel `{w : w^† m = 0}`.
pub fn left_null_space(m: &CMat) -> CMat {
    null_space(&m.adjoint())
}

pub fn rank(m: &CMat) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let s = svd(m).s;
    let thr = cutoff(&s);
    s.iter().filter(|x| **x > thr).count()
}

/// Singular values, descending, `min(r, c)` of them.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s = svd(m).s;
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s.truncate(m.nrows().min(m.ncols()));
    s
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    let h = (m + m.adjoint()) * re(0.5);
    let mut pairs: Vec<(f64, CVec)> = match h.clone().try_symmetric_eigen(f64::EPSILON, 200 * n.max(10)) {
        Some(eig) => (0..n).map(|k| (eig.eigenvalues[k], eig.eigenvectors.column(k).into_owned())).collect(),
        None => Vec::new(),
    };
    let check = |pairs: &[(f64, CVec)]| {
        let vecs = columns_of(&pairs.iter().map(|p| p.1.clone()).collect::<Vec<_>>(), n);
        let lam = CMat::from_diagonal(&CVec::from_iterator(n, pairs.iter().map(|p| re(p.0))));
        (&h * &vecs - &vecs * lam).norm() + (vecs.adjoint() * &vecs - identity(n)).norm() * h.norm()
    };
    if pairs.len() != n || !(check(&pairs) <= 1e-10 * h.norm().max(ZERO_FLOOR)) {
        // A positive definite shift turns the singular vectors into eigenvectors.
        let shift = h.norm() + 1.0;
        let dec = jacobi_svd(&(&h + identity(n) * re(shift)));
        pairs = (0..n).map(|k| (dec.s[k] - shift, dec.v.column(k).into_owned())).collect();
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let vals = pairs.iter().map(|p| p.0).collect();
    let vecs = columns_of(&pairs.into_iter().map(|p| p.1).collect::<Vec<_>>(), n);
    (vals, vecs)
}

pub fn min_hermitian_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigen(m).0.first().copied().unwrap_or(0.0)
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn hermitian_fn(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = hermitian_eigen(m);
    let n = m.nrows();
    let mut d = CMat::zeros(n, n);
    for (k, v) in vals.iter().enumerate() {
        d[(k, k)] = re(f(*v));
    }
    &vecs * d * vecs.adjoint()
}

/// Eigenvalues of a general square matrix via the complex Schur form.
pub fn eigenvalues(m: &CMat) -> Vec<C64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let schur = nalgebra::linalg::Schur::new(m.clone());
    let (_, t) = schur.unpack();
    (0..m.nrows()).map(|k| t[(k, k)]).collect()
}

/// Distance of `v` from the span of the orthonormal columns of `basis`.
pub fn distance_to_span(basis: &CMat, v: &CVec) -> f64 {
    if basis.ncols() == 0 {
        return v.norm();
    }
    let proj = basis * (basis.adjoint() * v);
    (v - proj).norm()
}

/// Largest distance of any (normalized) column of `vectors` from the span
/// of the orthonormal columns of `basis`.
pub fn containment_residual(basis: &CMat, vectors: &CMat) -> f64 {
    (0..vectors.ncols())
        .map(|j| {
            let v = vectors.column(j).into_owned();
            let n = v.norm();
            if n < ZERO_FLOOR {
                0.0
            } else {
                distance_to_span(basis, &v) / n
            }
        })
        .fold(0.0, f64::max)
}

/// Symmetric containment residual of two orthonormal bases; zero means the
/// spans coincide. Differing dimensions give `f64::INFINITY`.
pub fn subspace_distance(a: &CMat, b: &CMat) -> f64 {
    if a.ncols() != b.ncols() {
        return f64::INFINITY;
    }
    containment_residual(a, b).max(containment_residual(b, a))
}

/// Least-squares solve `m x = b` through the pseudo-inverse.
pub fn solve(m: &CMat, b: &CVec) -> CVec {
    pseudo_inverse(m) * b
}

/// Moore–Penrose pseudo-inverse with the rank cutoff applied.
pub fn pseudo_inverse(m: &CMat) -> CMat {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return CMat::zeros(c, r);
    }
    let dec = svd(m);
    let thr = cutoff(&dec.s);
    let mut out = CMat::zeros(c, r);
    for k in 0..c {
        if dec.s[k] > thr {
            out += dec.v.column(k) * dec.u.column(k).adjoint() * re(1.0 / dec.s[k]);
        }
    }
    out
}

/// Flip operator on `C^n ⊗ C^n` (first-leg-major indexing).
pub fn flip(n: usize) -> CMat {
    let mut s = CMat::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            s[(j * n + i, i * n + j)] = ONE;
        }
    }
    s
}

/// Block `(p, q)` of a matrix on `C^a ⊗ C^b`, i.e. the second-leg matrix
/// attached to the first-leg matrix unit `E_pq`.
pub fn leg_block(m: &CMat, b: usize, p: usize, q: usize) -> CMat {
    m.view((p * b, q * b), (b, b)).into_owned()
}

/// `Σ_pq E_pq ⊗ f(M_pq)` for `M` on `C^a ⊗ C^b`.
pub fn map_second_leg(m: &CMat, a: usize, b: usize, f: impl Fn(&CMat) -> CMat) -> CMat {
    let out_b = f(&CMat::zeros(b, b)).nrows();
    let mut out = CMat::zeros(a * out_b, a * out_b);
    for p in 0..a {
        for q in 0..a {
            let blk = f(&leg_block(m, b, p, q));
            out.view_mut((p * out_b, q * out_b), (out_b, out_b)).copy_from(&blk);
        }
    }
    out
}

/// Slice of the second leg by a functional: `Σ_pq E_pq ω(M_pq)`.
pub fn slice_second_leg(m: &CMat, a: usize, b: usize, omega: impl Fn(&CMat) -> C64) -> CMat {
    let mut out = CMat::zeros(a, a);
    for p in 0..a {
        for q in 0..a {
            out[(p, q)] = omega(&leg_block(m, b, p, q));
        }
    }
    out
}

/// Projector `Q Q^†` onto the span of orthonormal columns.
pub fn projector(basis: &CMat) -> CMat {
    basis * basis.adjoint()
}

/// Cesàro sum `Σ_{k=1}^{n} T^k` by binary splitting, `O(log n)` products.
pub fn cesaro_sum(t: &CMat, n: u64) -> CMat {
    let dim = t.nrows();
    // Invariant: `sum` = Σ_{k=1}^{done} T^k, `power` = T^{done}.
    let mut sum = CMat::zeros(dim, dim);
    let mut power = identity(dim);
    // Block of length 2^j: `block_sum` = Σ_{k=1}^{2^j} T^k, `block_pow` = T^{2^j}.
    let mut block_sum = t.clone();
    let mut block_pow = t.clone();
    let mut remaining = n;
    while remaining > 0 {
        if remaining & 1 == 1 {
            sum += &power * &block_sum;
            power = &power * &block_pow;
        }
        remaining >>= 1;
        if remaining > 0 {
            block_sum = &block_sum + &block_pow * &block_sum;
            block_pow = &block_pow * &block_pow;
        }
    }
    sum
}

/// Cesàro average `(1/n) Σ_{k=1}^{n} T^k`.
pub fn cesaro_average(t: &CMat, n: u64) -> CMat {
    cesaro_sum(t, n) * re(1.0 / n as f64)
}

/// Projection onto `ker(T − I)` along `ran(T − I)`, or a description of
/// why the decomposition fails.
pub fn mean_ergodic_projector(t: &CMat) -> std::result::Result<CMat, String> {
    let n = t.nrows();
    let shifted = t - identity(n);
    let k = null_space(&shifted);
    let l = left_null_space(&shifted);
    if k.ncols() != l.ncols() {
        return Err(format!("fixed space has dimension {} but the dual fixed space {}", k.ncols(), l.ncols()));
    }
    if k.ncols() == 0 {
        return Ok(CMat::zeros(n, n));
    }
    let pairing = l.adjoint() * &k;
    let sv = singular_values(&pairing);
    let smallest = sv.last().copied().unwrap_or(0.0);
    if smallest < 1e-8 {
        // ker ∩ ran is nontrivial: a Jordan block at eigenvalue 1.
        return Err(format!("fixed space meets the range of T - I (pairing singular value {smallest:e})"));
    }
    let inv = pseudo_inverse(&pairing);
    Ok(&k * inv * l.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A rank-one matrix on which the bidiagonal SVD mis-converges.
    fn hard_rank_one() -> CMat {
        let data = vec![
            c(0.3535533905932736, 0.0),
            c(-0.353553390593274, 0.0),
            c(-0.35355339059327306, 0.0),
            c(0.3535533905932737, 0.0),
            c(0.49999999999999983, 0.0),
            c(-6.582172948986329e-32, 0.0),
            c(0.0, 0.0),
            c(-0.4999999999999999, 0.0),
            c(-0.353553390593274, 0.0),
            c(0.3535533905932736, 0.0),
            c(0.3535533905932737, 0.0),
            c(-0.35355339059327306, 0.0),
            c(-0.4999999999999999, 0.0),
            c(0.0, 0.0),
            c(0.0, 6.582172948986329e-32),
            c(0.49999999999999983, 0.0),
            c(-0.35355339059327306, 0.0),
            c(0.3535533905932737, 0.0),
            c(0.3535533905932736, 0.0),
            c(-0.353553390593274, 0.0),
            c(-0.4999999999999999, 0.0),
            c(0.0, 0.0),
            c(0.0, -6.582172948986329e-32),
            c(0.49999999999999983, 0.0),
            c(0.3535533905932737, 0.0),
            c(-0.35355339059327306, 0.0),
            c(-0.353553390593274, 0.0),
            c(0.3535533905932736, 0.0),
            c(0.49999999999999983, 0.0),
            c(6.582172948986329e-32, 0.0),
            c(0.0, 0.0),
            c(-0.4999999999999999, 0.0),
            c(0.3535533905932737, 0.0),
            c(-0.35355339059327373, 0.0),
            c(-0.35355339059327373, 0.0),
            c(0.3535533905932737, 0.0),
            c(0.4999999999999998, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(-0.49999999999999967, 0.0),
            c(-4.654299127170889e-32, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(4.654299127170889e-32, 0.0),
            c(0.0, 0.0),
            c(-2.7755575615628914e-17, 0.0),
            c(0.0, -6.938893903907228e-16),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, -4.654299127170889e-32),
            c(0.0, 4.654299127170889e-32),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 6.938893903907228e-16),
            c(-2.7755575615628914e-17, 0.0),
            c(0.0, 0.0),
            c(-0.35355339059327373, 0.0),
            c(0.3535533905932737, 0.0),
            c(0.3535533905932737, 0.0),
            c(-0.35355339059327373, 0.0),
            c(-0.49999999999999967, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.4999999999999998, 0.0),
        ];
        CMat::from_column_slice(8, 8, &data)
    }

    #[test]
    fn svd_survives_hard_input() {
        let m = hard_rank_one();
        let dec = svd(&m);
        let sigma = CMat::from_diagonal(&CVec::from_iterator(8, dec.s.iter().map(|x| re(*x))));
        assert!((&dec.u * sigma * dec.v.adjoint() - &m).norm() < 1e-12);
        let cs = column_space(&m);
        assert_eq!(cs.ncols(), 1);
        assert!(distance_to_span(&cs, &m.column(0).into_owned()) < 1e-12);
        assert_eq!(null_space(&m).ncols(), 7);
        assert!(max_abs(&(&m * pseudo_inverse(&m) * &m - &m)) < 1e-12);
    }

    #[test]
    fn ergodic_projector_of_a_rotation_and_a_jordan_block() {
        let shift = CMat::from_row_slice(3, 3, &[ZERO, ZERO, ONE, ONE, ZERO, ZERO, ZERO, ONE, ZERO]);
        let e = mean_ergodic_projector(&shift).unwrap();
        assert!(max_abs(&(e - CMat::from_element(3, 3, re(1.0 / 3.0)))) < 1e-12);
        let jordan = CMat::from_row_slice(2, 2, &[ONE, ONE, ZERO, ONE]);
        assert!(mean_ergodic_projector(&jordan).is_err());
    }

    #[test]
    fn jacobi_matches_on_random_input() {
        let m = CMat::from_fn(5, 3, |i, j| c((i * 3 + j) as f64 % 4.0 - 1.5, (i + 2 * j) as f64 % 3.0 - 1.0));
        let dec = jacobi_svd(&m);
        let sigma = CMat::from_diagonal(&CVec::from_iterator(3, dec.s.iter().map(|x| re(*x))));
        assert!((&dec.u * sigma * dec.v.adjoint() - &m).norm() < 1e-12);
        let mut a = dec.s.clone();
        a.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let b = singular_values(&m);
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));
    }

    #[test]
    fn null_space_of_wide_and_tall() {
        let m = CMat::from_row_slice(1, 3, &[ONE, ONE, ZERO]);
        let k = null_space(&m);
        assert_eq!(k.ncols(), 2);
        assert!(max_abs(&(&m * &k)) < 1e-12);
        let tall = CMat::from_row_slice(3, 2, &[ONE, ONE, ONE, ONE, ONE, ONE]);
        assert_eq!(null_space(&tall).ncols(), 1);
        assert_eq!(null_space(&CMat::zeros(2, 2)).ncols(), 2);
    }

    #[test]
    fn cesaro_sum_matches_naive_loop() {
        let t = CMat::from_row_slice(2, 2, &[re(0.5), re(0.5), re(0.25), re(0.75)]);
        for n in [1u64, 2, 3, 7, 10, 33] {
            let mut naive = CMat::zeros(2, 2);
            let mut p = identity(2);
            for _ in 0..n {
                p = &p * &t;
                naive += &p;
            }
            assert!(max_abs(&(naive - cesaro_sum(&t, n))) < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn schur_eigenvalues_of_cyclic_shift() {
        let mut shift = CMat::zeros(3, 3);
        for i in 0..3 {
            shift[((i + 1) % 3, i)] = ONE;
        }
        let ev = eigenvalues(&shift);
        let ones = ev.iter().filter(|z| (**z - ONE).norm() < 1e-9).count();
        assert_eq!(ones, 1);
        for z in ev {
            assert!((z.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn flip_swaps_tensor_factors() {
        let a = CMat::from_fn(2, 2, |i, j| re((i * 2 + j) as f64));
        let b = CMat::from_fn(2, 2, |i, j| c(i as f64, j as f64));
        let s = flip(2);
        assert!(max_abs(&(&s * kron(&a, &b) * &s - kron(&b, &a))) < 1e-14);
    }
}
