//! Markov operators, ergodic projections, harmonic spaces and Poisson
//! boundaries with their Choi–Effros product.

use crate::error::{QgError, Result};
use crate::linalg::{
    cesaro_average, eigenvalues, hermitian_eigen, identity, max_abs, max_abs_vec, mean_ergodic_projector, null_space,
    re, subspace_distance, unvec, vec_of, CMat, CVec, RANK_RTOL, ZERO,
};
use crate::quantum_group::QuantumGroup;
use crate::spec::Tensor3;
use crate::star_algebra::{FiniteStarAlgebra, Wedderburn};
use crate::states::{cesaro_limit_state, is_nondegenerate, make_state, markov_matrix, StateFunctional};
use crate::subalgebra::{Ambient, MatrixAmbient, SubAlgebra};

/// Number of terms in the iterative Cesàro cross-check of an ergodic projection.
pub const CESARO_CHECK_TERMS: u64 = 1 << 30;
/// Agreement required between the exact and iterative ergodic projections.
pub const CESARO_CHECK_TOL: f64 = 1e-6;

/// Where a super-operator acts.
#[derive(Debug, Clone)]
pub enum Domain {
    /// Coefficient vectors of `A`; `embedding` holds `vec π(e_i)` as columns
    /// and its left inverse.
    Algebra { ambient: FiniteStarAlgebra, embedding: CMat, embedding_pinv: CMat },
    /// `B(H)` on column-major vectorized matrices.
    Operators(MatrixAmbient),
}

impl Domain {
    pub fn ambient(&self) -> &dyn Ambient {
        match self {
            Domain::Algebra { ambient, .. } => ambient,
            Domain::Operators(m) => m,
        }
    }
}

/// A linear map on `A` or on `B(H)` together with its certified properties.
#[derive(Debug, Clone)]
pub struct SuperOperator {
    pub domain: Domain,
    /// `N` for maps on `A`, `N²` for maps on `B(H)`.
    pub domain_dim: usize,
    pub matrix: CMat,
    pub choi: CMat,
    pub tol: f64,
    pub is_unital: bool,
    pub is_cp: bool,
    /// `h∘Φ = h` on `A`, `ω_ξ0∘Φ = ω_ξ0` on `B(H)`.
    pub is_haar_invariant: bool,
    pub min_choi_eigenvalue: f64,
}

/// `Σ E_ij ⊗ Ψ(E_ij)` for `Ψ` acting on `vec M_n`.
pub fn choi_matrix(psi: &CMat, n: usize) -> CMat {
    let mut choi = CMat::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let image = unvec(&psi.column(j * n + i).into_owned(), n);
            choi.view_mut((i * n, j * n), (n, n)).copy_from(&image);
        }
    }
    choi
}

fn min_choi_eigenvalue(choi: &CMat) -> f64 {
    let herm = (choi + choi.adjoint()) * re(0.5);
    let anti = max_abs(&(choi - choi.adjoint()));
    let min = hermitian_eigen(&herm).0[0];
    if anti > 1e-9 * max_abs(choi).max(1.0) {
        f64::NEG_INFINITY
    } else {
        min
    }
}

impl SuperOperator {
    /// A map on `A`. Complete positivity is certified through the Choi matrix
    /// of `π∘Φ∘π⁻¹∘P` on `M_N`, `P` the trace-orthogonal projection onto `π(A)`.
    pub fn on_algebra(qg: &QuantumGroup, matrix: CMat) -> Self {
        let n = qg.dim();
        let embedding = qg.pi_columns().clone();
        let embedding_pinv = qg.pi_pinv().clone();
        let psi = &embedding * &matrix * &embedding_pinv;
        let choi = choi_matrix(&psi, n);
        let unit = &qg.spec.unit;
        let is_unital = max_abs_vec(&(&matrix * unit - unit)) <= qg.tol;
        let is_haar_invariant = max_abs_vec(&(matrix.transpose() * &qg.haar - &qg.haar)) <= qg.tol;
        let domain = Domain::Algebra { ambient: FiniteStarAlgebra::from_spec(&qg.spec), embedding, embedding_pinv };
        Self::finish(domain, n, matrix, choi, qg.tol, is_unital, is_haar_invariant)
    }

    /// A map on `B(H)`, `H` the GNS space of `qg`.
    pub fn on_operators(qg: &QuantumGroup, matrix: CMat) -> Self {
        let n = qg.dim();
        let choi = choi_matrix(&matrix, n);
        let id = vec_of(&identity(n));
        let is_unital = max_abs_vec(&(&matrix * &id - &id)) <= qg.tol;
        // ω_ξ0(X) = ⟨ξ0, X ξ0⟩ = vec(ξ0 ξ0†)† vec X.
        let omega = vec_of(&(&qg.xi0 * qg.xi0.adjoint()));
        let lhs = matrix.adjoint() * &omega;
        let is_haar_invariant = max_abs_vec(&(lhs - &omega)) <= qg.tol;
        Self::finish(Domain::Operators(MatrixAmbient { n }), n * n, matrix, choi, qg.tol, is_unital, is_haar_invariant)
    }

    fn finish(
        domain: Domain,
        domain_dim: usize,
        matrix: CMat,
        choi: CMat,
        tol: f64,
        is_unital: bool,
        is_haar_invariant: bool,
    ) -> Self {
        let min = min_choi_eigenvalue(&choi);
        SuperOperator {
            domain,
            domain_dim,
            matrix,
            is_cp: min >= -tol * max_abs(&choi).max(1.0),
            choi,
            tol,
            is_unital,
            is_haar_invariant,
            min_choi_eigenvalue: min,
        }
    }

    /// Same domain, new matrix.
    fn with_matrix(&self, matrix: CMat, unit_preserving: bool) -> Self {
        let (choi, invariant) = match &self.domain {
            Domain::Algebra { embedding, embedding_pinv, .. } => {
                let n = embedding.nrows();
                let n = (n as f64).sqrt().round() as usize;
                (choi_matrix(&(embedding * &matrix * embedding_pinv), n), self.is_haar_invariant)
            }
            Domain::Operators(m) => (choi_matrix(&matrix, m.n), self.is_haar_invariant),
        };
        Self::finish(self.domain.clone(), self.domain_dim, matrix, choi, self.tol, unit_preserving, invariant)
    }

    pub fn apply(&self, x: &CVec) -> CVec {
        &self.matrix * x
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SuperOperator) -> CMat {
        &self.matrix * &other.matrix
    }

    fn unit(&self) -> CVec {
        self.domain.ambient().unit()
    }
}

/// `Φ_μ(x) = (ι⊗μ)Γ(x)`, certified unital, CP, Haar-invariant and covariant.
pub fn markov_operator(qg: &QuantumGroup, mu: &StateFunctional) -> Result<SuperOperator> {
    if !mu.belongs_to(qg) {
        return Err(QgError::MixedQuantumGroups);
    }
    let t = markov_matrix(qg, &mu.values);
    let residual = covariance_residual(qg, &t);
    if residual > qg.tol {
        return Err(QgError::CovarianceViolation(residual));
    }
    Ok(SuperOperator::on_algebra(qg, t))
}

/// `max_j ‖Γ(Φ e_j) − (ι⊗Φ)Γ(e_j)‖`.
pub fn covariance_residual(qg: &QuantumGroup, t: &CMat) -> f64 {
    let spec = &qg.spec;
    (0..spec.dim)
        .map(|j| {
            let lhs = spec.comult_of(&t.column(j).into_owned());
            let rhs = spec.comult_of(&spec.basis(j)) * t.transpose();
            max_abs(&(lhs - rhs))
        })
        .fold(0.0, f64::max)
}

/// Residuals of the ergodic projection's defining identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgodicResiduals {
    pub idempotence: f64,
    pub absorption: f64,
    pub cesaro: f64,
}

/// Projection onto `ker(T − I)` along `ran(T − I)`, checked against the
/// Cesàro averages of `T`.
pub fn ergodic_projection(phi: &SuperOperator) -> Result<SuperOperator> {
    let (e, _) = ergodic_projection_with_residuals(phi)?;
    Ok(e)
}

pub fn ergodic_projection_with_residuals(phi: &SuperOperator) -> Result<(SuperOperator, ErgodicResiduals)> {
    let t = &phi.matrix;
    let e = mean_ergodic_projector(t).map_err(QgError::MeanErgodicFailure)?;
    let scale = max_abs(&e).max(1.0);
    let idempotence = max_abs(&(&e * &e - &e)) / scale;
    let absorption = max_abs(&(&e * t - &e)).max(max_abs(&(t * &e - &e))) / scale;
    let cesaro = max_abs(&(cesaro_average(t, CESARO_CHECK_TERMS) - &e)) / scale;
    let residuals = ErgodicResiduals { idempotence, absorption, cesaro };
    let algebraic = idempotence.max(absorption);
    if algebraic > phi.tol.max(1e-9) {
        return Err(QgError::MeanErgodicFailure(format!("projection identities fail (residual {algebraic:e})")));
    }
    if cesaro > CESARO_CHECK_TOL {
        return Err(QgError::MeanErgodicFailure(format!("Cesàro averages disagree (residual {cesaro:e})")));
    }
    let unit = phi.unit();
    let unital = max_abs_vec(&(&e * &unit - &unit)) <= phi.tol;
    Ok((phi.with_matrix(e, unital), residuals))
}

/// `{x : Φ(x) = x}` as a carrier with identity and adjoint flags set.
pub fn harmonic_space(phi: &SuperOperator) -> SubAlgebra {
    let n = phi.domain_dim;
    let basis = null_space(&(&phi.matrix - identity(n)));
    let ambient = phi.domain.ambient();
    let mut space = SubAlgebra::carrier(ambient, basis, RANK_RTOL);
    space.closed_under_adjoint = space.adjoint_residual(ambient) <= RANK_RTOL;
    space
}

/// Multiplicity of the eigenvalue 1 of a dense matrix.
pub fn eigenvalue_one_multiplicity(t: &CMat) -> usize {
    eigenvalues(t).iter().filter(|z| (**z - re(1.0)).norm() < 1e-6).count()
}

/// Residuals certifying the Choi–Effros product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChoiEffrosResiduals {
    pub associativity: f64,
    pub unit: f64,
    pub star: f64,
}

/// The fixed space of an ergodic projection `E` with `x∘y = E(xy)`.
#[derive(Debug, Clone)]
pub struct ChoiEffrosAlgebra {
    pub ambient: SubAlgebra,
    /// `structure_constants.get(a, b, k)`: coefficient of `k_k` in `k_a ∘ k_b`.
    pub structure_constants: Tensor3,
    pub unit_coords: CVec,
    pub involution_matrix: CMat,
    pub blocks: Vec<usize>,
    pub kappa: Wedderburn,
    pub algebra: FiniteStarAlgebra,
    pub projection: SuperOperator,
    pub residuals: ChoiEffrosResiduals,
}

impl ChoiEffrosAlgebra {
    pub fn dim(&self) -> usize {
        self.ambient.dim()
    }

    /// Coordinates of an ambient element in the fixed-space basis.
    pub fn coords(&self, x: &CVec) -> CVec {
        self.ambient.coords(x)
    }

    /// Ambient element with the given coordinates.
    pub fn element(&self, coords: &CVec) -> CVec {
        self.ambient.basis() * coords
    }

    /// `x∘y = E(xy)` on ambient elements.
    pub fn product(&self, x: &CVec, y: &CVec) -> CVec {
        self.projection.apply(&self.projection.domain.ambient().product(x, y))
    }

    /// `kappa` applied to an ambient element of the fixed space.
    pub fn represent(&self, x: &CVec) -> CMat {
        self.kappa.kappa(&self.coords(x))
    }

    /// Largest `|c_ab^k − ⟨k_k, k_a k_b⟩|`: how far `∘` is from the ambient product.
    pub fn ambient_product_gap(&self) -> f64 {
        let amb = self.projection.domain.ambient();
        let d = self.dim();
        let mut worst = 0.0f64;
        for a in 0..d {
            let ka = self.ambient.basis_vector(a);
            for b in 0..d {
                let ambient_coords = self.coords(&amb.product(&ka, &self.ambient.basis_vector(b)));
                for k in 0..d {
                    worst = worst.max((self.structure_constants.get(a, b, k) - ambient_coords[k]).norm());
                }
            }
        }
        worst
    }
}

/// Builds the Choi–Effros algebra on the range of an ergodic projection.
pub fn choi_effros_from_projection(e: &SuperOperator) -> Result<ChoiEffrosAlgebra> {
    let amb = e.domain.ambient();
    let space = harmonic_space(e);
    let d = space.dim();
    let k = space.basis().clone();
    let mut constants = Tensor3::zeros(d);
    for a in 0..d {
        let ka = k.column(a).into_owned();
        for b in 0..d {
            let prod = e.apply(&amb.product(&ka, &k.column(b).into_owned()));
            let coords = k.adjoint() * prod;
            for (i, v) in coords.iter().enumerate() {
                if v.norm() > 1e-15 {
                    constants.set(a, b, i, *v);
                }
            }
        }
    }
    let unit_coords = k.adjoint() * amb.unit();
    let involution = CMat::from_fn(d, d, |j, a| {
        let adj = amb.adjoint(&k.column(a).into_owned());
        k.column(j).dotc(&adj)
    });
    let algebra =
        FiniteStarAlgebra { dim: d, mult: constants.clone(), unit: unit_coords.clone(), star: involution.clone() };
    let residuals = ChoiEffrosResiduals {
        associativity: algebra.associativity_residual(),
        unit: algebra.unit_residual(),
        star: algebra.star_residual(),
    };
    let tol = e.tol.max(1e-9);
    if residuals.associativity.max(residuals.unit) > tol {
        return Err(QgError::NonAssociativeProduct(residuals.associativity.max(residuals.unit)));
    }
    if residuals.star > tol {
        return Err(QgError::NonStarProduct(residuals.star));
    }
    let kappa = algebra.wedderburn()?;
    Ok(ChoiEffrosAlgebra {
        ambient: space,
        structure_constants: constants,
        unit_coords,
        involution_matrix: involution,
        blocks: kappa.blocks.clone(),
        kappa,
        algebra,
        projection: e.clone(),
        residuals,
    })
}

/// The Poisson boundary `(ℋ^μ, ∘)` of `μ`.
pub fn choi_effros_algebra(qg: &QuantumGroup, mu: &StateFunctional) -> Result<ChoiEffrosAlgebra> {
    let phi = markov_operator(qg, mu)?;
    choi_effros_from_projection(&ergodic_projection(&phi)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChoquetDenyReport {
    pub nondegenerate: bool,
    pub harmonic_dim: usize,
    /// Dense-eigensolver oracle for `harmonic_dim`.
    pub eigenvalue_one_multiplicity: usize,
    pub pass: bool,
}

/// Non-degenerate states have only scalar harmonic elements.
pub fn check_choquet_deny(qg: &QuantumGroup, mu: &StateFunctional) -> Result<ChoquetDenyReport> {
    let phi = markov_operator(qg, mu)?;
    let nondegenerate = is_nondegenerate(qg, mu)?;
    let harmonic_dim = harmonic_space(&phi).dim();
    let multiplicity = eigenvalue_one_multiplicity(&phi.matrix);
    let pass = harmonic_dim == multiplicity && (!nondegenerate || harmonic_dim == 1);
    Ok(ChoquetDenyReport { nondegenerate, harmonic_dim, eigenvalue_one_multiplicity: multiplicity, pass })
}

#[derive(Debug, Clone)]
pub struct IdempotentReport {
    /// The Cesàro limit `φ` of `ω`.
    pub phi: StateFunctional,
    pub phi_is_idempotent: bool,
    /// `max ‖Φ_φ(Φ_φ(x)Φ_φ(y)) − Φ_φ(x)Φ_φ(y)‖` over basis pairs.
    pub fs_residual: f64,
    /// Closure of `ℋ^φ` under the ambient product.
    pub ambient_closure_residual: f64,
    /// Largest gap between `∘` and the ambient product on `ℋ^φ`.
    pub product_agreement_residual: f64,
    /// Projector distance between `ℋ^ω` and `ℋ^φ`.
    pub boundary_distance: f64,
    pub harmonic_dim: usize,
    pub phi_blocks: Vec<usize>,
    pub omega_nondegenerate: bool,
    pub omega_ambient_closed: bool,
    /// `None` when the dichotomy hypothesis does not apply.
    pub dichotomy: Option<bool>,
    pub pass: bool,
}

/// Idempotent-state structure of the boundary of `ω`.
pub fn check_idempotent_theorems(qg: &QuantumGroup, omega: &StateFunctional) -> Result<IdempotentReport> {
    let tol = qg.tol;
    let phi = cesaro_limit_state(qg, omega)?;
    let phi_op = markov_operator(qg, &phi)?;
    let t = &phi_op.matrix;
    let spec = &qg.spec;
    let n = qg.dim();
    let images: Vec<CVec> = (0..n).map(|j| t.column(j).into_owned()).collect();
    let mut fs = 0.0f64;
    for x in &images {
        for y in &images {
            let p = spec.mul(x, y);
            fs = fs.max(max_abs_vec(&(t * &p - &p)));
        }
    }
    let boundary = choi_effros_from_projection(&ergodic_projection(&phi_op)?)?;
    let closure = boundary.ambient.product_residual(spec);
    let agreement = boundary.ambient_product_gap();

    let omega_space = harmonic_space(&markov_operator(qg, omega)?);
    let distance = subspace_distance(omega_space.basis(), boundary.ambient.basis());
    let nondegenerate = is_nondegenerate(qg, omega)?;
    let closed = omega_space.product_residual(spec) <= RANK_RTOL;
    let dichotomy = (nondegenerate && closed).then_some(omega_space.dim() == 1);

    let pass = phi.is_idempotent
        && fs <= tol
        && closure <= RANK_RTOL
        && agreement <= tol
        && distance <= RANK_RTOL
        && dichotomy != Some(false);
    Ok(IdempotentReport {
        phi_is_idempotent: phi.is_idempotent,
        phi,
        fs_residual: fs,
        ambient_closure_residual: closure,
        product_agreement_residual: agreement,
        boundary_distance: distance,
        harmonic_dim: omega_space.dim(),
        phi_blocks: boundary.blocks,
        omega_nondegenerate: nondegenerate,
        omega_ambient_closed: closed,
        dichotomy,
        pass,
    })
}

#[derive(Debug, Clone)]
pub struct InvariantMean {
    pub state: StateFunctional,
    /// `max ‖(ι⊗F)Γ(x) − F(x)1‖` over basis `x`.
    pub right_residual: f64,
    /// `max ‖(F⊗ι)Γ(x) − F(x)1‖` over basis `x`.
    pub left_residual: f64,
    pub haar_distance: f64,
}

/// Matrix of `f ↦ μ⋆f` on functional values.
pub fn left_convolution_matrix(qg: &QuantumGroup, mu: &CVec) -> CMat {
    let n = qg.dim();
    let mut c = CMat::zeros(n, n);
    for (k, i, j, d) in qg.spec.comult.nonzeros() {
        if mu[i] != ZERO {
            c[(k, j)] += d * mu[i];
        }
    }
    c
}

/// `F = lim (1/n) Σ μᵏ⋆f`, which is invariant when the boundary is trivial.
pub fn invariant_mean_from_trivial_boundary(
    qg: &QuantumGroup,
    mu: &StateFunctional,
    f: &StateFunctional,
) -> Result<InvariantMean> {
    let dim = harmonic_space(&markov_operator(qg, mu)?).dim();
    if dim != 1 {
        return Err(QgError::BoundaryNotTrivial(dim));
    }
    if !f.belongs_to(qg) {
        return Err(QgError::MixedQuantumGroups);
    }
    let c = left_convolution_matrix(qg, &mu.values);
    let e = mean_ergodic_projector(&c).map_err(QgError::MeanErgodicFailure)?;
    let values = e * &f.values;
    let (right, left) = crate::quantum_group::haar_invariance_residuals(&qg.spec, &values);
    let haar_distance = max_abs_vec(&(&values - &qg.haar));
    let state = make_state(qg, values)?;
    Ok(InvariantMean { state, right_residual: right, left_residual: left, haar_distance })
}
