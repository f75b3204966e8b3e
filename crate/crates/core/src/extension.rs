//! The extension `Θ(μ)` of a Markov operator to `B(H)`, its boundary, the
//! coaction on the Poisson boundary, the crossed product and the isomorphism
//! between them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boundary::{
    choi_effros_algebra, choi_effros_from_projection, ergodic_projection, harmonic_space, markov_operator,
    ChoiEffrosAlgebra, SuperOperator,
};
use crate::error::{QgError, Result};
use crate::linalg::{
    c, column_space, columns_of, flip, hermitian_eigen, identity, kron, leg_block, map_second_leg, matrix_unit,
    max_abs, max_abs_vec, re, singular_values, slice_second_leg, subspace_distance, unvec, vec_of, CMat, CVec, C64,
    RANK_RTOL, ZERO,
};
use crate::quantum_group::QuantumGroup;
use crate::states::StateFunctional;
use crate::subalgebra::{generated_algebra, MatrixAmbient, SubAlgebra};

/// `V(X⊗1)V*` without the slice test.
fn conjugate_by_v(qg: &QuantumGroup, x: &CMat) -> CMat {
    &qg.v * kron(x, &identity(qg.dim())) * qg.v.adjoint()
}

/// Largest relative distance of a second-leg block of `y` from `π(A)`.
fn second_leg_escape(qg: &QuantumGroup, y: &CMat) -> f64 {
    let n = qg.dim();
    let proj = qg.pi_projection();
    let scale = y.norm().max(1e-300);
    let mut worst = 0.0f64;
    for p in 0..n {
        for q in 0..n {
            let b = vec_of(&leg_block(y, n, p, q));
            worst = worst.max((&b - &proj * &b).norm() / scale);
        }
    }
    worst
}

/// `Γ̃(X) = V(X⊗1)V*`, whose second leg must lie in `π(A)`.
pub fn gamma_tilde(qg: &QuantumGroup, x: &CMat) -> Result<CMat> {
    let n = qg.dim();
    if x.nrows() != n || x.ncols() != n {
        return Err(QgError::DimensionMismatch { expected: n, got: x.nrows().max(x.ncols()) });
    }
    let y = conjugate_by_v(qg, x);
    let escape = second_leg_escape(qg, &y);
    if escape > qg.tol {
        return Err(QgError::SecondLegEscape(escape));
    }
    Ok(y)
}

/// `B ↦ μ(π⁻¹(B))` as a row acting on `vec B`.
fn pulled_back_state(qg: &QuantumGroup, mu: &CVec) -> CVec {
    qg.pi_pinv().transpose() * mu
}

/// `π∘Φ∘π⁻¹` on `vec M_N` for a map `Φ` on coefficients.
fn lift(qg: &QuantumGroup, t: &CMat) -> CMat {
    qg.pi_columns() * t * qg.pi_pinv()
}

#[derive(Debug, Clone)]
pub struct ThetaExtension {
    pub operator: SuperOperator,
    /// `max ‖Γ̃(Θ(X)) − (ι⊗Φ_μ)Γ̃(X)‖` over matrix units.
    pub representation_residual: f64,
    /// `max ‖Θ(π(x)) − π(Φ_μ(x))‖` over basis `x`.
    pub restriction_residual: f64,
    /// Smallest eigenvalue of `Θ†(1)`; positive iff `Θ` is faithful.
    pub dual_unit_min_eigenvalue: f64,
    pub is_faithful: bool,
}

/// `Θ(μ)(X) = (ι⊗μ∘π⁻¹)(V(X⊗1)V*)`, certified against the representation identity.
pub fn theta_extension(qg: &QuantumGroup, mu: &StateFunctional) -> Result<ThetaExtension> {
    let n = qg.dim();
    let phi = markov_operator(qg, mu)?;
    let w = pulled_back_state(qg, &mu.values);
    let slice = |b: &CMat| vec_of(b).dot(&w);
    let phi_lift = lift(qg, &phi.matrix);
    let apply_phi = |b: &CMat| unvec(&(&phi_lift * vec_of(b)), n);

    let mut matrix = CMat::zeros(n * n, n * n);
    let mut images = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let y = gamma_tilde(qg, &matrix_unit(n, i, j))?;
            let image = slice_second_leg(&y, n, n, slice);
            matrix.set_column(j * n + i, &vec_of(&image));
            images.push((y, image));
        }
    }
    let mut representation = 0.0f64;
    for (y, image) in &images {
        let lhs = conjugate_by_v(qg, image);
        let rhs = map_second_leg(y, n, n, apply_phi);
        representation = representation.max(max_abs(&(lhs - rhs)));
    }
    if representation > qg.tol {
        return Err(QgError::ExtensionContractViolation(representation));
    }
    let restriction = (0..n)
        .map(|k| {
            let lhs = unvec(&(&matrix * vec_of(&qg.pi[k])), n);
            let rhs = qg.pi_of(&phi.matrix.column(k).into_owned());
            max_abs(&(lhs - rhs))
        })
        .fold(0.0, f64::max);
    let dual_unit = unvec(&(matrix.adjoint() * vec_of(&identity(n))), n);
    let min = hermitian_eigen(&((&dual_unit + dual_unit.adjoint()) * re(0.5))).0[0];
    let operator = SuperOperator::on_operators(qg, matrix);
    Ok(ThetaExtension {
        operator,
        representation_residual: representation,
        restriction_residual: restriction,
        dual_unit_min_eigenvalue: min,
        is_faithful: min > qg.tol,
    })
}

#[derive(Debug, Clone)]
pub struct HarmonicOperators {
    pub theta: ThetaExtension,
    pub boundary: ChoiEffrosAlgebra,
    /// Containment of `π(ℋ^μ)` in `ℋ^{Θ(μ)}`.
    pub harmonic_containment: f64,
    /// Containment of `L∞(Ĝ)` in `ℋ^{Θ(μ)}`.
    pub dual_containment: f64,
    /// `‖E_Θ∘π − π∘E_μ‖` on basis elements.
    pub restriction_residual: f64,
}

impl HarmonicOperators {
    pub fn dim(&self) -> usize {
        self.boundary.dim()
    }

    pub fn worst_residual(&self) -> f64 {
        self.harmonic_containment.max(self.dual_containment).max(self.restriction_residual)
    }
}

/// `ℋ^{Θ(μ)}` with its Choi–Effros product.
pub fn harmonic_operators(qg: &QuantumGroup, mu: &StateFunctional) -> Result<HarmonicOperators> {
    let theta = theta_extension(qg, mu)?;
    let e_theta = ergodic_projection(&theta.operator)?;
    let boundary = choi_effros_from_projection(&e_theta)?;

    let phi = markov_operator(qg, mu)?;
    let e_mu = ergodic_projection(&phi)?;
    let harmonic = harmonic_space(&phi);
    let pi_harmonic: Vec<CVec> = (0..harmonic.dim()).map(|k| vec_of(&qg.pi_of(&harmonic.basis_vector(k)))).collect();
    let harmonic_containment = boundary.ambient.containment(&columns_of(&pi_harmonic, qg.dim() * qg.dim()));
    let dual = qg.dual_algebra()?;
    let dual_containment = boundary.ambient.containment(dual.basis());
    let restriction = max_abs(&(&e_theta.matrix * qg.pi_columns() - qg.pi_columns() * &e_mu.matrix));
    Ok(HarmonicOperators { theta, boundary, harmonic_containment, dual_containment, restriction_residual: restriction })
}

/// Residuals of the coaction identities on the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoactionResiduals {
    pub right_leg: f64,
    pub coassociativity: f64,
    pub unit: f64,
    pub star: f64,
    pub multiplicativity: f64,
}

impl CoactionResiduals {
    pub fn worst(&self) -> f64 {
        self.right_leg.max(self.coassociativity).max(self.unit).max(self.star).max(self.multiplicativity)
    }
}

/// `Γ_μ`: the restriction of `Γ` to the Poisson boundary.
#[derive(Debug, Clone)]
pub struct BoundaryCoaction {
    pub boundary: ChoiEffrosAlgebra,
    /// `Γ_μ(k_a) = Σ_{i,b} gamma_mu[a][(i, b)] e_i ⊗ k_b`.
    pub gamma_mu: Vec<CMat>,
    pub residuals: CoactionResiduals,
    n: usize,
    pi: Vec<CMat>,
}

impl BoundaryCoaction {
    /// Size of the representation space `H ⊗ C^s`.
    pub fn rep_size(&self) -> usize {
        self.n * self.boundary.kappa.size()
    }

    /// `(π⊗kappa)Γ_μ(x)` for `x` given by boundary coordinates.
    pub fn represent(&self, coords: &CVec) -> CMat {
        let d = self.boundary.dim();
        let mut total = CMat::zeros(self.n, d);
        for (a, g) in self.gamma_mu.iter().enumerate() {
            if coords[a] != ZERO {
                total += g * coords[a];
            }
        }
        let size = self.rep_size();
        let mut out = CMat::zeros(size, size);
        for i in 0..self.n {
            let row = total.row(i).transpose();
            if row.iter().any(|z| *z != ZERO) {
                out += kron(&self.pi[i], &self.boundary.kappa.kappa(&row));
            }
        }
        out
    }
}

/// Builds `Γ_μ` and verifies that it is a unital *-homomorphic coaction of
/// `(ℋ^μ, ∘)`.
pub fn boundary_coaction(qg: &QuantumGroup, mu: &StateFunctional) -> Result<BoundaryCoaction> {
    let boundary = choi_effros_algebra(qg, mu)?;
    coaction_on(qg, boundary)
}

fn coaction_on(qg: &QuantumGroup, boundary: ChoiEffrosAlgebra) -> Result<BoundaryCoaction> {
    let spec = &qg.spec;
    let n = spec.dim;
    let d = boundary.dim();
    let k = boundary.ambient.basis().clone();
    let k_conj = k.map(|z| z.conj());
    let mut gamma_mu = Vec::with_capacity(d);
    let mut right_leg = 0.0f64;
    for a in 0..d {
        let coeffs = spec.comult_of(&k.column(a).into_owned());
        let g = &coeffs * &k_conj;
        let rebuilt = &g * k.transpose();
        right_leg = right_leg.max(max_abs(&(rebuilt - &coeffs)) / max_abs(&coeffs).max(1e-300));
        gamma_mu.push(g);
    }
    if right_leg > RANK_RTOL {
        return Err(QgError::RightLegEscape(right_leg));
    }

    // (ι⊗Γ_μ)Γ_μ(k_a)[i][j][c] = Σ_b G_a[i,b] G_b[j,c]; (Γ⊗ι)Γ_μ(k_a)[p][q][c] = Σ_i d[i][p][q] G_a[i,c].
    let mut coassociativity = 0.0f64;
    for g in &gamma_mu {
        let mut rhs = vec![ZERO; n * n * d];
        for (i, p, q, dv) in spec.comult.nonzeros() {
            for cc in 0..d {
                rhs[(p * n + q) * d + cc] += dv * g[(i, cc)];
            }
        }
        for i in 0..n {
            for j in 0..n {
                for cc in 0..d {
                    let mut lhs = ZERO;
                    for b in 0..d {
                        lhs += g[(i, b)] * gamma_mu[b][(j, cc)];
                    }
                    coassociativity = coassociativity.max((lhs - rhs[(i * n + j) * d + cc]).norm());
                }
            }
        }
    }

    let mut coaction = BoundaryCoaction { boundary, gamma_mu, residuals: zero_residuals(), n, pi: qg.pi.clone() };
    coaction.residuals = coaction_residuals(&coaction, right_leg, coassociativity);
    Ok(coaction)
}

fn zero_residuals() -> CoactionResiduals {
    CoactionResiduals { right_leg: 0.0, coassociativity: 0.0, unit: 0.0, star: 0.0, multiplicativity: 0.0 }
}

fn coaction_residuals(co: &BoundaryCoaction, right_leg: f64, coassociativity: f64) -> CoactionResiduals {
    let b = &co.boundary;
    let d = b.dim();
    let unit = max_abs(&(co.represent(&b.unit_coords) - identity(co.rep_size())));
    let reps: Vec<CMat> = (0..d).map(|a| co.represent(&crate::linalg::basis_vector(d, a))).collect();
    let mut star = 0.0f64;
    let mut mult = 0.0f64;
    for a in 0..d {
        let adj = b.involution_matrix.column(a).into_owned();
        star = star.max(max_abs(&(co.represent(&adj) - reps[a].adjoint())));
        for bb in 0..d {
            let prod = CVec::from_fn(d, |kk, _| b.structure_constants.get(a, bb, kk));
            mult = mult.max(max_abs(&(co.represent(&prod) - &reps[a] * &reps[bb])));
        }
    }
    CoactionResiduals { right_leg, coassociativity, unit, star, multiplicativity: mult }
}

/// The crossed product built twice: as a generated algebra and as the fixed
/// points of `β`.
#[derive(Debug, Clone)]
pub struct CrossedProduct {
    pub coaction: BoundaryCoaction,
    pub algebra: SubAlgebra,
    pub beta_fixed_points: SubAlgebra,
    /// Projector distance between the two constructions.
    pub construction_distance: f64,
    /// `max ‖(ω⊗ι)β(y) − ω(1)y‖` over the fixed-point basis and test functionals.
    pub beta_fixed_residual: f64,
}

impl CrossedProduct {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

/// `W = σVσ`, so that `β(y) = (W*⊗1)((χ⊗ι)(ι⊗Γ_μ)(y))(W⊗1)`.
fn sigma_v_sigma(qg: &QuantumGroup) -> CMat {
    let s = flip(qg.dim());
    &s * &qg.v * &s
}

/// `R_u = W(u⊗I)`, giving `(ω_{u,v}⊗ι)(W*ZW) = R_u* Z R_v`.
fn slice_isometry(w: &CMat, u: &CVec) -> CMat {
    let n = u.len();
    let u_col = CMat::from_column_slice(n, 1, u.as_slice());
    w * kron(&u_col, &identity(n))
}

/// `A_{i,pq} = R_u*(π(e_i)⊗E_pq)R_v` for all `i, p, q`.
fn beta_slices(qg: &QuantumGroup, ru: &CMat, rv: &CMat) -> Vec<CMat> {
    let n = qg.dim();
    let mut out = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for p in 0..n {
            for q in 0..n {
                out.push(ru.adjoint() * kron(&qg.pi[i], &matrix_unit(n, p, q)) * rv);
            }
        }
    }
    out
}

/// `(ω⊗ι)β(y)` for `y = Σ_pq E_pq ⊗ kappa(Σ_a c[pq][a] k_a)`.
fn sliced_beta(co: &BoundaryCoaction, slices: &[CMat], coords: &[CVec]) -> CMat {
    let n = co.n;
    let d = co.boundary.dim();
    let size = co.rep_size();
    let mut out = CMat::zeros(size, size);
    for p in 0..n {
        for q in 0..n {
            let c_pq = &coords[p * n + q];
            if c_pq.iter().all(|z| z.norm() < 1e-15) {
                continue;
            }
            let mut h = CMat::zeros(n, d);
            for (a, g) in co.gamma_mu.iter().enumerate() {
                if c_pq[a] != ZERO {
                    h += g * c_pq[a];
                }
            }
            for i in 0..n {
                let row = h.row(i).transpose();
                if row.iter().all(|z| z.norm() < 1e-15) {
                    continue;
                }
                out += kron(&slices[(i * n + p) * n + q], &co.boundary.kappa.kappa(&row));
            }
        }
    }
    out
}

/// Boundary coordinates of each second-leg block of `y ∈ B(H) ⊗ kappa(ℋ_μ)`.
fn block_coords(co: &BoundaryCoaction, y: &CMat) -> Vec<CVec> {
    let n = co.n;
    let s = co.boundary.kappa.size();
    let mut out = Vec::with_capacity(n * n);
    for p in 0..n {
        for q in 0..n {
            out.push(co.boundary.kappa.kappa_inverse(&leg_block(y, s, p, q)));
        }
    }
    out
}

const BETA_TEST_SEED: u64 = 0xbe7a;

/// Generated-algebra and `β`-fixed-point constructions of `G ⋉ ℋ_μ`.
pub fn crossed_product(qg: &QuantumGroup, mu: &StateFunctional) -> Result<CrossedProduct> {
    let coaction = boundary_coaction(qg, mu)?;
    crossed_product_of(qg, coaction)
}

fn crossed_product_of(qg: &QuantumGroup, coaction: BoundaryCoaction) -> Result<CrossedProduct> {
    let n = qg.dim();
    let d = coaction.boundary.dim();
    let s = coaction.boundary.kappa.size();
    let size = n * s;

    let mut generators: Vec<CMat> = (0..d).map(|a| coaction.represent(&crate::linalg::basis_vector(d, a))).collect();
    let dual = qg.dual_algebra()?;
    for x in dual.basis_matrices() {
        generators.push(kron(&x, &identity(s)));
    }
    let algebra = generated_algebra(&generators, size)?;

    // Range of (ω_ξ0⊗ι)∘β on the spanning set E_pq ⊗ kappa(k_a).
    let w = sigma_v_sigma(qg);
    let r0 = slice_isometry(&w, &qg.xi0);
    let conditional = beta_slices(qg, &r0, &r0);
    let mut images = Vec::with_capacity(n * n * d);
    for p in 0..n {
        for q in 0..n {
            for a in 0..d {
                let mut coords = vec![CVec::zeros(d); n * n];
                coords[p * n + q][a] = re(1.0);
                images.push(vec_of(&sliced_beta(&coaction, &conditional, &coords)));
            }
        }
    }
    let fixed_basis = column_space(&columns_of(&images, size * size));
    let beta_fixed_points = SubAlgebra::from_orthonormal(&MatrixAmbient { n: size }, fixed_basis, RANK_RTOL);

    // β(y) = 1⊗y tested through ω_ξ0 and two seeded vector functionals.
    let mut rng = ChaCha8Rng::seed_from_u64(BETA_TEST_SEED);
    let mut random_vec = || CVec::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let mut tests: Vec<(C64, Vec<CMat>)> = vec![(re(1.0), conditional)];
    for _ in 0..2 {
        let (u, v) = (random_vec(), random_vec());
        let slices = beta_slices(qg, &slice_isometry(&w, &u), &slice_isometry(&w, &v));
        tests.push((u.dotc(&v), slices));
    }
    let mut fixed_residual = 0.0f64;
    for y in beta_fixed_points.basis_matrices() {
        let coords = block_coords(&coaction, &y);
        for (omega_one, slices) in &tests {
            let sliced = sliced_beta(&coaction, slices, &coords);
            fixed_residual = fixed_residual.max(max_abs(&(sliced - &y * *omega_one)));
        }
    }
    let distance = subspace_distance(algebra.basis(), beta_fixed_points.basis());
    let cp = CrossedProduct {
        coaction,
        algebra,
        beta_fixed_points,
        construction_distance: distance,
        beta_fixed_residual: fixed_residual,
    };
    if distance > RANK_RTOL || fixed_residual > RANK_RTOL {
        return Err(QgError::BetaMismatch(distance.max(fixed_residual)));
    }
    Ok(cp)
}

/// Outcome of the isomorphism check `ℋ_{Θ(μ)} ≅ G ⋉ ℋ_μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsoReport {
    /// `(dim ℋ_{Θ(μ)}, dim G ⋉ ℋ_μ)`.
    pub dims: (usize, usize),
    /// Named residuals in a fixed order.
    pub residuals: Vec<(String, f64)>,
    pub tol: f64,
    pub verdict: bool,
}

impl IsoReport {
    pub fn residual(&self, name: &str) -> Option<f64> {
        self.residuals.iter().find(|(n, _)| n == name).map(|(_, r)| *r)
    }
}

/// Tolerance for the main-theorem residuals.
pub const ISO_TOL: f64 = 1e-8;

/// Verifies that `L = (ι ⊗ kappa∘π⁻¹)∘Γ̃` maps `(ℋ^{Θ(μ)}, ∘_Θ)` isomorphically
/// onto the crossed product.
pub fn verify_main_theorem(qg: &QuantumGroup, mu: &StateFunctional) -> Result<IsoReport> {
    let upstairs = harmonic_operators(qg, mu)?;
    let cp = crossed_product(qg, mu)?;
    Ok(iso_report(qg, &upstairs, &cp))
}

fn iso_report(qg: &QuantumGroup, upstairs: &HarmonicOperators, cp: &CrossedProduct) -> IsoReport {
    let n = qg.dim();
    let top = &upstairs.boundary;
    let down = &cp.coaction.boundary;
    let dt = top.dim();

    let second_leg = std::cell::Cell::new(0.0f64);
    let l_of = |x: &CMat| -> CMat {
        let y = conjugate_by_v(qg, x);
        let scale = y.norm().max(1e-300);
        map_second_leg(&y, n, n, |b| {
            let (coords, resid) = qg.pi_inverse(b);
            let harmonic = down.coords(&coords);
            let outside = max_abs_vec(&(down.element(&harmonic) - &coords));
            second_leg.set(second_leg.get().max(resid * b.norm() / scale).max(outside));
            down.kappa.kappa(&harmonic)
        })
    };
    let basis: Vec<CMat> = (0..dt).map(|k| unvec(&top.ambient.basis_vector(k), n)).collect();
    let images: Vec<CMat> = basis.iter().map(l_of).collect();
    let size = cp.coaction.rep_size();
    let image_cols = columns_of(&images.iter().map(vec_of).collect::<Vec<_>>(), size * size);

    let sv = singular_values(&image_cols);
    let injectivity_gap = match (sv.first(), sv.last()) {
        (Some(hi), Some(lo)) if *hi > 0.0 => lo / hi,
        _ => 0.0,
    };
    let image_space = column_space(&image_cols);
    let image_in_cp = cp.algebra.containment(&image_space);
    let cp_in_image = crate::linalg::containment_residual(&image_space, cp.algebra.basis());

    let mut multiplicativity = 0.0f64;
    let mut star = 0.0f64;
    for a in 0..dt {
        let xa = top.ambient.basis_vector(a);
        star = star.max(max_abs(&(l_of(&basis[a].adjoint()) - images[a].adjoint())));
        for b in 0..dt {
            let prod = top.product(&xa, &top.ambient.basis_vector(b));
            let lhs = l_of(&unvec(&prod, n));
            multiplicativity = multiplicativity.max(max_abs(&(lhs - &images[a] * &images[b])));
        }
    }
    let unit = max_abs(&(l_of(&identity(n)) - identity(size)));

    let dims = (dt, cp.dim());
    let residuals = vec![
        ("injectivity_deficit".to_string(), (RANK_RTOL - injectivity_gap).max(0.0)),
        ("image_in_crossed_product".to_string(), image_in_cp),
        ("crossed_product_in_image".to_string(), cp_in_image),
        ("multiplicativity".to_string(), multiplicativity),
        ("star".to_string(), star),
        ("unit".to_string(), unit),
        ("second_leg_in_boundary".to_string(), second_leg.get()),
        ("beta_construction".to_string(), cp.construction_distance.max(cp.beta_fixed_residual)),
    ];
    let verdict = dims.0 == dims.1 && injectivity_gap > RANK_RTOL && residuals.iter().all(|(_, r)| *r <= ISO_TOL);
    IsoReport { dims, residuals, tol: ISO_TOL, verdict }
}

/// Everything the main theorem needs, computed once.
#[derive(Debug, Clone)]
pub struct ExtensionAnalysis {
    pub upstairs: HarmonicOperators,
    pub crossed: CrossedProduct,
    pub report: IsoReport,
}

pub fn analyze_extension(qg: &QuantumGroup, mu: &StateFunctional) -> Result<ExtensionAnalysis> {
    let upstairs = harmonic_operators(qg, mu)?;
    let crossed = crossed_product(qg, mu)?;
    let report = iso_report(qg, &upstairs, &crossed);
    Ok(ExtensionAnalysis { upstairs, crossed, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{cyclic_group, function_algebra, group_algebra, kac_paljutkin, symmetric_group_3, S3_SIGNS};
    use crate::linalg::basis_vector;
    use crate::quantum_group::{validate_spec, DEFAULT_TOL};
    use crate::states::{convolve_values, counit_state, haar_state, make_state, seeded_states, DEFAULT_SEED};

    fn qg_of(spec: crate::spec::AlgebraSpec) -> QuantumGroup {
        validate_spec(&spec, DEFAULT_TOL).unwrap()
    }

    fn z2() -> QuantumGroup {
        qg_of(function_algebra(&cyclic_group(2)).unwrap())
    }

    fn delta(qg: &QuantumGroup, i: usize) -> StateFunctional {
        make_state(qg, basis_vector(qg.dim(), i)).unwrap()
    }

    #[test]
    fn gamma_tilde_examples() {
        let kp = qg_of(kac_paljutkin());
        let one = gamma_tilde(&kp, &identity(8)).unwrap();
        assert!(max_abs(&(one - identity(64))) < 1e-12);
        for k in 0..8 {
            let y = gamma_tilde(&kp, &kp.pi[k]).unwrap();
            let g = kp.spec.comult_of(&kp.spec.basis(k));
            let mut rhs = CMat::zeros(64, 64);
            for i in 0..8 {
                for j in 0..8 {
                    rhs += kron(&kp.pi[i], &kp.pi[j]) * g[(i, j)];
                }
            }
            assert!(max_abs(&(y - rhs)) < 1e-12);
        }
    }

    #[test]
    fn gamma_tilde_on_cyclic_matrix_units() {
        // Oracle: on C(Z/n) the GNS basis is ξ_x = √n Λδ_x and
        // V(ξ_x ⊗ ξ_y) = ξ_{x-y} ⊗ ξ_y, a permutation.
        for n in [2, 3] {
            let g = qg_of(function_algebra(&cyclic_group(n)).unwrap());
            let mut perm = CMat::zeros(n * n, n * n);
            for x in 0..n {
                for y in 0..n {
                    perm[(((x + n - y) % n) * n + y, x * n + y)] = re(1.0);
                }
            }
            assert!(max_abs(&(&g.v - &perm)) < 1e-12);
            for (p, q) in [(0, 1), (1, 0), (0, 0)] {
                let x = matrix_unit(n, p, q);
                let expected = &perm * kron(&x, &identity(n)) * perm.transpose();
                let y = gamma_tilde(&g, &x).unwrap();
                assert!(max_abs(&(&y - &expected)) < 1e-12);
                assert!(second_leg_escape(&g, &y) < 1e-12);
            }
        }
        // For Z/2 the image of E_01 is E_01 ⊗ δ_0 + E_10 ⊗ δ_1.
        let g = z2();
        let y = gamma_tilde(&g, &matrix_unit(2, 0, 1)).unwrap();
        let expected =
            kron(&matrix_unit(2, 0, 1), &matrix_unit(2, 0, 0)) + kron(&matrix_unit(2, 1, 0), &matrix_unit(2, 1, 1));
        assert!(max_abs(&(y - expected)) < 1e-12);
    }

    #[test]
    fn theta_of_counit_is_identity() {
        for qg in [z2(), qg_of(kac_paljutkin())] {
            let t = theta_extension(&qg, &counit_state(&qg)).unwrap();
            let n = qg.dim();
            assert!(max_abs(&(&t.operator.matrix - identity(n * n))) < 1e-12);
            assert!(t.is_faithful && t.operator.is_cp && t.operator.is_unital);
        }
    }

    #[test]
    fn theta_contracts_on_random_states() {
        let kp = qg_of(kac_paljutkin());
        for mu in seeded_states(&kp, DEFAULT_SEED, 2) {
            let t = theta_extension(&kp, &mu).unwrap();
            assert!(t.representation_residual < 1e-9 && t.restriction_residual < 1e-9);
            assert!(t.operator.is_cp && t.operator.is_unital && t.is_faithful);
        }
    }

    #[test]
    fn theta_composition_law() {
        let kp = qg_of(kac_paljutkin());
        let states = seeded_states(&kp, DEFAULT_SEED, 2);
        let ab = make_state(&kp, convolve_values(&kp, &states[0].values, &states[1].values)).unwrap();
        let lhs = theta_extension(&kp, &ab).unwrap().operator.matrix;
        let rhs = theta_extension(&kp, &states[0]).unwrap().operator.matrix
            * theta_extension(&kp, &states[1]).unwrap().operator.matrix;
        assert!(max_abs(&(lhs - rhs)) < 1e-10);
    }

    #[test]
    fn harmonic_operator_dimensions() {
        let g = z2();
        let h = harmonic_operators(&g, &haar_state(&g)).unwrap();
        assert_eq!(h.dim(), 2);
        assert!(h.boundary.ambient.distance(&g.dual_algebra().unwrap()) < 1e-9);
        assert!(h.worst_residual() < 1e-9);
        assert_eq!(harmonic_operators(&g, &counit_state(&g)).unwrap().dim(), 4);
    }

    #[test]
    fn coaction_examples() {
        let g = z2();
        let co = boundary_coaction(&g, &haar_state(&g)).unwrap();
        assert_eq!(co.boundary.dim(), 1);
        assert!(max_abs(&(co.represent(&co.boundary.unit_coords) - identity(co.rep_size()))) < 1e-12);

        let s3 = qg_of(function_algebra(&symmetric_group_3()).unwrap());
        let mut v = CVec::zeros(6);
        v[0] = re(0.5);
        v[1] = re(0.5);
        let co = boundary_coaction(&s3, &make_state(&s3, v).unwrap()).unwrap();
        assert_eq!(co.boundary.dim(), 3);
        assert!(co.residuals.worst() < 1e-9);

        let kp = qg_of(kac_paljutkin());
        let co = boundary_coaction(&kp, &counit_state(&kp)).unwrap();
        assert_eq!(co.boundary.dim(), 8);
        assert!(co.residuals.worst() < 1e-9);
    }

    #[test]
    fn main_theorem_on_z2() {
        let g = z2();
        for (mu, dim) in [(counit_state(&g), 4), (haar_state(&g), 2), (delta(&g, 1), 2)] {
            let r = verify_main_theorem(&g, &mu).unwrap();
            assert_eq!(r.dims, (dim, dim), "{r:?}");
            assert!(r.verdict, "{r:?}");
        }
    }

    #[test]
    fn main_theorem_on_s3_pairs() {
        let s3 = qg_of(function_algebra(&symmetric_group_3()).unwrap());
        let mut v = CVec::zeros(6);
        v[0] = re(0.5);
        v[1] = re(0.5);
        let r = verify_main_theorem(&s3, &make_state(&s3, v).unwrap()).unwrap();
        assert!(r.verdict, "{r:?}");
        let r = verify_main_theorem(&s3, &haar_state(&s3)).unwrap();
        assert_eq!(r.dims, (6, 6));

        let cg = qg_of(group_algebra(&symmetric_group_3()).unwrap());
        let u = CVec::from_iterator(6, S3_SIGNS.iter().map(|s| re(if *s == 1 { 1.0 } else { 0.0 })));
        let r = verify_main_theorem(&cg, &make_state(&cg, u).unwrap()).unwrap();
        assert!(r.verdict, "{r:?}");
    }

    #[test]
    fn main_theorem_on_kac_paljutkin_haar() {
        let kp = qg_of(kac_paljutkin());
        let r = verify_main_theorem(&kp, &haar_state(&kp)).unwrap();
        assert_eq!(r.dims, (8, 8));
        assert!(r.verdict, "{r:?}");
    }

    #[test]
    fn theta_of_haar_is_faithful() {
        let g = z2();
        let t = theta_extension(&g, &haar_state(&g)).unwrap();
        assert!(t.dual_unit_min_eigenvalue > 0.0);
    }
}
