//! Subspaces and *-subalgebras of an ambient *-algebra, generated algebras
//! and commutants.

use crate::error::{QgError, Result};
use crate::linalg::{
    column_space, columns_of, containment_residual, identity, max_abs_vec, null_space, subspace_distance, unvec,
    vec_of, CMat, CVec, RANK_RTOL,
};
use crate::spec::AlgebraSpec;

/// A finite-dimensional *-algebra presented on a coordinate space.
pub trait Ambient {
    fn coord_dim(&self) -> usize;
    fn product(&self, x: &CVec, y: &CVec) -> CVec;
    fn adjoint(&self, x: &CVec) -> CVec;
    fn unit(&self) -> CVec;
}

impl Ambient for AlgebraSpec {
    fn coord_dim(&self) -> usize {
        self.dim
    }
    fn product(&self, x: &CVec, y: &CVec) -> CVec {
        self.mul(x, y)
    }
    fn adjoint(&self, x: &CVec) -> CVec {
        self.star_of(x)
    }
    fn unit(&self) -> CVec {
        self.unit.clone()
    }
}

/// `M_n` on column-major vectorized coordinates.
#[derive(Debug, Clone, Copy)]
pub struct MatrixAmbient {
    pub n: usize,
}

impl Ambient for MatrixAmbient {
    fn coord_dim(&self) -> usize {
        self.n * self.n
    }
    fn product(&self, x: &CVec, y: &CVec) -> CVec {
        vec_of(&(unvec(x, self.n) * unvec(y, self.n)))
    }
    fn adjoint(&self, x: &CVec) -> CVec {
        vec_of(&unvec(x, self.n).adjoint())
    }
    fn unit(&self) -> CVec {
        vec_of(&identity(self.n))
    }
}

/// A subspace of an ambient *-algebra with an orthonormal basis (Euclidean
/// in ambient coordinates, i.e. Hilbert–Schmidt for matrix ambients).
#[derive(Debug, Clone)]
pub struct SubAlgebra {
    pub ambient_dim: usize,
    basis: CMat,
    pub closed_under_product: bool,
    pub closed_under_adjoint: bool,
    pub contains_identity: bool,
}

impl SubAlgebra {
    /// Span of `vectors` with all three flags evaluated at `tol`.
    pub fn span(ambient: &dyn Ambient, vectors: &CMat, tol: f64) -> Self {
        let basis = column_space(vectors);
        Self::from_orthonormal(ambient, basis, tol)
    }

    /// Wraps an already orthonormal basis and evaluates the flags.
    pub fn from_orthonormal(ambient: &dyn Ambient, basis: CMat, tol: f64) -> Self {
        let mut s = SubAlgebra {
            ambient_dim: ambient.coord_dim(),
            basis,
            closed_under_product: false,
            closed_under_adjoint: false,
            contains_identity: false,
        };
        s.contains_identity = s.residual(&ambient.unit()) <= tol;
        s.closed_under_adjoint = s.adjoint_residual(ambient) <= tol;
        s.closed_under_product = s.product_residual(ambient) <= tol;
        s
    }

    /// A linear carrier; product and adjoint flags are left unset.
    pub fn carrier(ambient: &dyn Ambient, basis: CMat, tol: f64) -> Self {
        let mut s = SubAlgebra {
            ambient_dim: ambient.coord_dim(),
            basis,
            closed_under_product: false,
            closed_under_adjoint: false,
            contains_identity: false,
        };
        s.contains_identity = s.residual(&ambient.unit()) <= tol;
        s
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Orthonormal basis as columns.
    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn basis_vector(&self, k: usize) -> CVec {
        self.basis.column(k).into_owned()
    }

    /// Basis elements as `n × n` matrices (matrix ambients only).
    pub fn basis_matrices(&self) -> Vec<CMat> {
        let n = (self.ambient_dim as f64).sqrt().round() as usize;
        (0..self.dim()).map(|k| unvec(&self.basis_vector(k), n)).collect()
    }

    /// Relative distance of `v` from the span.
    pub fn residual(&self, v: &CVec) -> f64 {
        containment_residual(&self.basis, &columns_of(std::slice::from_ref(v), self.ambient_dim))
    }

    pub fn contains(&self, v: &CVec, tol: f64) -> bool {
        self.residual(v) <= tol
    }

    /// Coordinates of `v` in the orthonormal basis.
    pub fn coords(&self, v: &CVec) -> CVec {
        self.basis.adjoint() * v
    }

    /// Zero iff the spans coincide; infinite on a dimension mismatch.
    pub fn distance(&self, other: &SubAlgebra) -> f64 {
        subspace_distance(&self.basis, &other.basis)
    }

    /// Largest relative distance of a column of `vectors` from the span.
    pub fn containment(&self, vectors: &CMat) -> f64 {
        containment_residual(&self.basis, vectors)
    }

    pub fn adjoint_residual(&self, ambient: &dyn Ambient) -> f64 {
        (0..self.dim()).map(|k| self.residual(&ambient.adjoint(&self.basis_vector(k)))).fold(0.0, f64::max)
    }

    pub fn product_residual(&self, ambient: &dyn Ambient) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..self.dim() {
            let x = self.basis_vector(a);
            for b in 0..self.dim() {
                let p = ambient.product(&x, &self.basis_vector(b));
                worst = worst.max(self.residual(&p));
            }
        }
        worst
    }
}

fn check_square(gens: &[CMat], n: usize) -> Result<()> {
    for g in gens {
        if g.nrows() != n || g.ncols() != n {
            return Err(QgError::DimensionMismatch { expected: n, got: g.nrows().max(g.ncols()) });
        }
    }
    Ok(())
}

/// Below this norm a normalized-generator word counts as zero.
const WORD_FLOOR: f64 = 1e-12;

/// Adds `v` to the orthonormal family if it is not already in the span.
fn extend_orthonormal(basis: &mut Vec<CVec>, v: &CVec) -> bool {
    let scale = v.norm();
    if scale < WORD_FLOOR {
        return false;
    }
    let mut r = v.clone();
    // Two passes of modified Gram–Schmidt.
    for _ in 0..2 {
        for q in basis.iter() {
            let proj = q.dotc(&r);
            r -= q * proj;
        }
    }
    let rn = r.norm();
    if rn > RANK_RTOL * scale * 10.0 && rn > WORD_FLOOR {
        basis.push(r / crate::linalg::re(rn));
        true
    } else {
        false
    }
}

/// Smallest unital *-subalgebra of `M_n` containing `generators`.
pub fn generated_algebra(generators: &[CMat], n: usize) -> Result<SubAlgebra> {
    check_square(generators, n)?;
    let amb = MatrixAmbient { n };
    // Normalized so that words stay on a common scale; numerically zero
    // generators are dropped.
    let largest = generators.iter().map(|g| g.norm()).fold(0.0, f64::max);
    let mut gens: Vec<CMat> = Vec::new();
    for g in generators {
        let norm = g.norm();
        if norm <= WORD_FLOOR * largest.max(1.0) {
            continue;
        }
        let g = g / crate::linalg::re(norm);
        gens.push(g.adjoint());
        gens.push(g);
    }
    let mut basis: Vec<CVec> = Vec::new();
    extend_orthonormal(&mut basis, &vec_of(&identity(n)));
    for g in &gens {
        extend_orthonormal(&mut basis, &vec_of(g));
    }
    // Grow by right multiplication with generators until stable; spans of
    // words in the generators are then exhausted.
    let mut start = 0;
    loop {
        let end = basis.len();
        for k in start..end {
            let x = unvec(&basis[k], n);
            for g in &gens {
                extend_orthonormal(&mut basis, &vec_of(&(&x * g)));
            }
        }
        if basis.len() == end {
            break;
        }
        start = end;
    }
    let q = columns_of(&basis, n * n);
    Ok(SubAlgebra::from_orthonormal(&amb, q, 1e-8))
}

/// `{X : XB = BX for every basis element B}` inside `M_n`.
pub fn commutant(sub: &SubAlgebra) -> Result<SubAlgebra> {
    let n = (sub.ambient_dim as f64).sqrt().round() as usize;
    if n * n != sub.ambient_dim {
        return Err(QgError::DimensionMismatch { expected: n * n, got: sub.ambient_dim });
    }
    let id = identity(n);
    let mut system = CMat::zeros(sub.dim() * n * n, n * n);
    for (k, b) in sub.basis_matrices().iter().enumerate() {
        // vec(BX) = (I ⊗ B) vec X, vec(XB) = (Bᵀ ⊗ I) vec X (column-major).
        let block = id.kronecker(b) - b.transpose().kronecker(&id);
        system.view_mut((k * n * n, 0), (n * n, n * n)).copy_from(&block);
    }
    let basis = null_space(&system);
    Ok(SubAlgebra::from_orthonormal(&MatrixAmbient { n }, basis, 1e-8))
}

/// Largest entry of a vector, exposed for residual reporting.
pub fn sup_norm(v: &CVec) -> f64 {
    max_abs_vec(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, re, ONE, ZERO};

    fn pauli_x() -> CMat {
        CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
    }
    fn pauli_z() -> CMat {
        CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
    }

    #[test]
    fn generated_by_identity_is_scalars() {
        let s = generated_algebra(&[identity(2)], 2).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.closed_under_product && s.closed_under_adjoint && s.contains_identity);
    }

    #[test]
    fn generated_by_diagonal_sign() {
        assert_eq!(generated_algebra(&[pauli_z()], 2).unwrap().dim(), 2);
    }

    #[test]
    fn paulis_generate_full_matrix_algebra() {
        // Brute-force oracle: the words 1, X, Z, XZ are linearly independent.
        let words = [identity(2), pauli_x(), pauli_z(), pauli_x() * pauli_z()];
        let cols: Vec<CVec> = words.iter().map(vec_of).collect();
        assert_eq!(crate::linalg::rank(&columns_of(&cols, 4)), 4);
        assert_eq!(generated_algebra(&[pauli_x(), pauli_z()], 2).unwrap().dim(), 4);
    }

    #[test]
    fn commutants_of_extremes() {
        let scalars = generated_algebra(&[identity(2)], 2).unwrap();
        assert_eq!(commutant(&scalars).unwrap().dim(), 4);
        let full = generated_algebra(&[pauli_x(), pauli_z()], 2).unwrap();
        assert_eq!(commutant(&full).unwrap().dim(), 1);
    }

    #[test]
    fn double_commutant_of_block_algebra() {
        // C ⊕ M_2 inside M_3.
        let mut a = CMat::zeros(3, 3);
        a[(0, 0)] = ONE;
        let mut b = CMat::zeros(3, 3);
        b[(1, 2)] = c(0.0, 1.0);
        b[(2, 1)] = re(2.0);
        let s = generated_algebra(&[a, b], 3).unwrap();
        assert_eq!(s.dim(), 5);
        let cc = commutant(&commutant(&s).unwrap()).unwrap();
        assert!(cc.distance(&s) < 1e-8);
    }

    #[test]
    fn mismatched_generator_rejected() {
        assert!(matches!(generated_algebra(&[identity(3)], 2), Err(QgError::DimensionMismatch { .. })));
    }
}
