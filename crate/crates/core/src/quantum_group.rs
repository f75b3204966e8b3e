//! Validated finite quantum groups: Haar state, GNS representation and the
//! fundamental unitary.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::builtin::dual_of;
use crate::error::{QgError, Result};
use crate::linalg::{
    columns_of, flip, hermitian_eigen, hermitian_fn, identity, kron, max_abs, max_abs_vec, null_space, pseudo_inverse,
    re, vec_of, CMat, CVec, ZERO,
};
use crate::spec::AlgebraSpec;
use crate::subalgebra::{commutant, generated_algebra, SubAlgebra};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Formula used to build the fundamental unitary on GNS vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `V(Λa ⊗ Λb) = (Λ⊗Λ)(Γ(a)(1⊗b))`.
    LeftLegProduct,
    /// `V(Λa ⊗ Λb) = (Λ⊗Λ)(Γ(b)(a⊗1))`.
    RightLegProduct,
    /// Adjoint of [`Orientation::RightLegProduct`].
    RightLegProductAdjoint,
}

const ORIENTATIONS: [Orientation; 3] =
    [Orientation::LeftLegProduct, Orientation::RightLegProduct, Orientation::RightLegProductAdjoint];

/// Residuals of the three contracts a fundamental unitary must satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryContracts {
    pub unitarity: f64,
    pub pentagon: f64,
    pub implements_comultiplication: f64,
}

impl UnitaryContracts {
    pub fn worst(&self) -> f64 {
        self.unitarity.max(self.pentagon).max(self.implements_comultiplication)
    }
}

#[derive(Debug, Clone)]
pub struct QuantumGroup {
    pub spec: AlgebraSpec,
    pub tol: f64,
    /// `h(e_i)`.
    pub haar: CVec,
    /// `G_ij = h(e_i* e_j)`.
    pub gram: CMat,
    /// `R = G^{1/2}`: coefficient vectors to GNS vectors, `Λx = R x`.
    pub gns_basis_change: CMat,
    gns_inverse: CMat,
    /// `π(e_i)` in the GNS basis.
    pub pi: Vec<CMat>,
    /// Columns `vec π(e_i)`.
    pi_columns: CMat,
    pi_pinv: CMat,
    /// `Λ(1)`, a unit vector.
    pub xi0: CVec,
    /// Right fundamental unitary on `H ⊗ H`.
    pub v: CMat,
    pub orientation: Orientation,
    pub contracts: UnitaryContracts,
    pub haar_residuals: (f64, f64),
    fingerprint: u64,
}

/// Unique `h` with `(ι⊗h)Γ(x) = h(x)1` and `h(1) = 1`, as values on the basis.
pub fn compute_haar(spec: &AlgebraSpec) -> Result<CVec> {
    spec.check_shapes()?;
    let n = spec.dim;
    // Row (k, i): Σ_j d[k][i][j] h_j − h_k unit_i = 0.
    let mut system = CMat::zeros(n * n, n);
    for k in 0..n {
        for i in 0..n {
            let row = k * n + i;
            for j in 0..n {
                system[(row, j)] += spec.comult.get(k, i, j);
            }
            system[(row, k)] -= spec.unit[i];
        }
    }
    let kernel = null_space(&system);
    match kernel.ncols() {
        0 => return Err(QgError::NoInvariantState),
        1 => {}
        d => return Err(QgError::NonUniqueInvariantState(d)),
    }
    let h = kernel.column(0).into_owned();
    let at_unit = h.dot(&spec.unit);
    if at_unit.norm() < 1e-12 {
        return Err(QgError::NoInvariantState);
    }
    Ok(h / at_unit)
}

/// Residuals of `(ι⊗h)Γ(x) = h(x)1` and `(h⊗ι)Γ(x) = h(x)1` over the basis.
pub fn haar_invariance_residuals(spec: &AlgebraSpec, h: &CVec) -> (f64, f64) {
    let n = spec.dim;
    let (mut right, mut left) = (0.0f64, 0.0f64);
    for k in 0..n {
        let gk = spec.comult_of(&spec.basis(k));
        let target = &spec.unit * h[k];
        let r = &gk * h - &target;
        let l = gk.transpose() * h - &target;
        right = right.max(max_abs_vec(&r));
        left = left.max(max_abs_vec(&l));
    }
    (right, left)
}

fn gram_matrix(spec: &AlgebraSpec, h: &CVec) -> CMat {
    let n = spec.dim;
    let stars: Vec<CVec> = (0..n).map(|i| spec.star_of(&spec.basis(i))).collect();
    CMat::from_fn(n, n, |i, j| h.dot(&spec.mul(&stars[i], &spec.basis(j))))
}

/// `Vc` on coefficient vectors for the given orientation, before conjugation by `R ⊗ R`.
fn coefficient_unitary(spec: &AlgebraSpec, o: Orientation) -> CMat {
    let n = spec.dim;
    let mut vc = CMat::zeros(n * n, n * n);
    match o {
        Orientation::LeftLegProduct => {
            // Γ(e_a)(1⊗e_b) = Σ d[a][i][j] e_i ⊗ e_j e_b.
            for (a, i, j, d) in spec.comult.nonzeros() {
                for b in 0..n {
                    for k in 0..n {
                        let m = spec.mult.get(j, b, k);
                        if m != ZERO {
                            vc[(i * n + k, a * n + b)] += d * m;
                        }
                    }
                }
            }
        }
        Orientation::RightLegProduct | Orientation::RightLegProductAdjoint => {
            // Γ(e_b)(e_a⊗1) = Σ d[b][i][j] e_i e_a ⊗ e_j.
            for (b, i, j, d) in spec.comult.nonzeros() {
                for a in 0..n {
                    for k in 0..n {
                        let m = spec.mult.get(i, a, k);
                        if m != ZERO {
                            vc[(k * n + j, a * n + b)] += d * m;
                        }
                    }
                }
            }
        }
    }
    vc
}

/// Contract residuals of a candidate `V` against `π` and `Γ`.
pub fn unitary_contracts(spec: &AlgebraSpec, pi: &[CMat], v: &CMat) -> UnitaryContracts {
    let n = spec.dim;
    let nn = n * n;
    let unitarity = max_abs(&(v.adjoint() * v - identity(nn)));
    let id = identity(n);
    let v12 = kron(v, &id);
    let v23 = kron(&id, v);
    let s23 = kron(&id, &flip(n));
    let v13 = &s23 * &v12 * &s23;
    let pentagon = max_abs(&(&v12 * &v13 * &v23 - &v23 * &v12));
    let mut implement = 0.0f64;
    for k in 0..n {
        let lhs = v * kron(&pi[k], &id) * v.adjoint();
        let mut rhs = CMat::zeros(nn, nn);
        for i in 0..n {
            for j in 0..n {
                let d = spec.comult.get(k, i, j);
                if d != ZERO {
                    rhs += kron(&pi[i], &pi[j]) * d;
                }
            }
        }
        implement = implement.max(max_abs(&(lhs - rhs)));
    }
    UnitaryContracts { unitarity, pentagon, implements_comultiplication: implement }
}

fn fingerprint_of(spec: &AlgebraSpec) -> u64 {
    let mut hasher = DefaultHasher::new();
    spec.name.hash(&mut hasher);
    spec.dim.hash(&mut hasher);
    let mut feed = |z: &crate::linalg::C64| {
        z.re.to_bits().hash(&mut hasher);
        z.im.to_bits().hash(&mut hasher);
    };
    for (_, _, _, v) in spec.mult.nonzeros().chain(spec.comult.nonzeros()) {
        feed(&v);
    }
    spec.antipode.iter().chain(spec.star.iter()).chain(spec.unit.iter()).chain(spec.counit.iter()).for_each(feed);
    hasher.finish()
}

/// Validates a spec and builds its analytic data.
pub fn validate_spec(spec: &AlgebraSpec, tol: f64) -> Result<QuantumGroup> {
    spec.check_shapes()?;
    spec.check_axioms(tol)?;
    let n = spec.dim;
    let haar = compute_haar(spec)?;
    if let Some(given) = &spec.haar {
        let diff = max_abs_vec(&(given - &haar));
        if diff > tol {
            return Err(QgError::axiom("haar", diff));
        }
    }
    let haar_residuals = haar_invariance_residuals(spec, &haar);
    let worst = haar_residuals.0.max(haar_residuals.1);
    if worst > tol {
        return Err(QgError::axiom("haar_invariance", worst));
    }

    let gram = gram_matrix(spec, &haar);
    let herm_defect = max_abs(&(&gram - gram.adjoint()));
    let (evals, _) = hermitian_eigen(&((&gram + gram.adjoint()) * re(0.5)));
    let min_eval = evals[0];
    if min_eval <= tol || herm_defect > tol {
        return Err(QgError::NonFaithfulHaar(min_eval));
    }
    let mut trace_defect = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let ij = haar.dot(&spec.mul(&spec.basis(i), &spec.basis(j)));
            let ji = haar.dot(&spec.mul(&spec.basis(j), &spec.basis(i)));
            trace_defect = trace_defect.max((ij - ji).norm());
        }
    }
    if trace_defect > tol {
        return Err(QgError::NonTracialHaar(trace_defect));
    }

    let g_herm = (&gram + gram.adjoint()) * re(0.5);
    let r = hermitian_fn(&g_herm, f64::sqrt);
    let r_inv = hermitian_fn(&g_herm, |x| 1.0 / x.sqrt());
    let pi: Vec<CMat> = (0..n).map(|i| &r * spec.left_mult_basis(i) * &r_inv).collect();
    let pi_columns = columns_of(&pi.iter().map(vec_of).collect::<Vec<_>>(), n * n);
    let pi_pinv = pseudo_inverse(&pi_columns);
    let xi0 = &r * &spec.unit;

    let rr = kron(&r, &r);
    let rr_inv = kron(&r_inv, &r_inv);
    let mut failures = Vec::new();
    let mut chosen = None;
    for o in ORIENTATIONS {
        let mut v = &rr * coefficient_unitary(spec, o) * &rr_inv;
        if o == Orientation::RightLegProductAdjoint {
            v = v.adjoint();
        }
        let contracts = unitary_contracts(spec, &pi, &v);
        if contracts.worst() <= tol {
            chosen = Some((o, v, contracts));
            break;
        }
        failures.push(format!("{o:?}: {:.3e}", contracts.worst()));
    }
    let (orientation, v, contracts) = chosen.ok_or_else(|| QgError::OrientationFailure(failures.join(", ")))?;

    Ok(QuantumGroup {
        spec: spec.clone(),
        tol,
        haar,
        gram,
        gns_basis_change: r,
        gns_inverse: r_inv,
        pi,
        pi_columns,
        pi_pinv,
        xi0,
        v,
        orientation,
        contracts,
        haar_residuals,
        fingerprint: fingerprint_of(spec),
    })
}

/// The fundamental unitary together with its contract residuals.
pub fn fundamental_unitary(qg: &QuantumGroup) -> (&CMat, UnitaryContracts) {
    (&qg.v, qg.contracts)
}

/// Validates the dual Hopf structure and cross-checks its dimension against
/// the algebra generated by first-leg slices of `V`.
pub fn dual_quantum_group(qg: &QuantumGroup) -> Result<QuantumGroup> {
    let dual = validate_spec(&dual_of(&qg.spec), qg.tol)?;
    let slices = qg.dual_commutant()?;
    if slices.dim() != dual.dim() {
        return Err(QgError::axiom("dual_dimension", (slices.dim() as f64 - dual.dim() as f64).abs()));
    }
    Ok(dual)
}

impl QuantumGroup {
    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    /// Identifies the underlying spec; states remember it.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// `π(x)` for a coefficient vector `x`.
    pub fn pi_of(&self, x: &CVec) -> CMat {
        let n = self.dim();
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            if x[i] != ZERO {
                m += &self.pi[i] * x[i];
            }
        }
        m
    }

    /// Coefficients of the least-squares preimage under `π` and the relative
    /// distance of `m` from `π(A)`.
    pub fn pi_inverse(&self, m: &CMat) -> (CVec, f64) {
        let v = vec_of(m);
        let x = &self.pi_pinv * &v;
        let scale = v.norm().max(1e-300);
        let resid = (&self.pi_columns * &x - &v).norm() / scale;
        (x, if v.norm() == 0.0 { 0.0 } else { resid })
    }

    /// Orthonormal basis of `vec π(A)` as a subalgebra of `M_N`.
    pub fn pi_algebra(&self) -> SubAlgebra {
        SubAlgebra::span(&crate::subalgebra::MatrixAmbient { n: self.dim() }, &self.pi_columns, self.tol)
    }

    /// Columns `vec π(e_i)`.
    pub fn pi_columns(&self) -> &CMat {
        &self.pi_columns
    }

    /// Left inverse of [`QuantumGroup::pi_columns`], orthogonal onto `π(A)`.
    pub fn pi_pinv(&self) -> &CMat {
        &self.pi_pinv
    }

    /// Hilbert–Schmidt orthogonal projection of `vec M_N` onto `vec π(A)`.
    pub fn pi_projection(&self) -> CMat {
        &self.pi_columns * &self.pi_pinv
    }

    /// GNS vector of a coefficient vector.
    pub fn lambda(&self, x: &CVec) -> CVec {
        &self.gns_basis_change * x
    }

    /// Coefficient vector of a GNS vector.
    pub fn lambda_inverse(&self, xi: &CVec) -> CVec {
        &self.gns_inverse * xi
    }

    /// `h(x)` for a coefficient vector.
    pub fn haar_of(&self, x: &CVec) -> crate::linalg::C64 {
        self.haar.dot(x)
    }

    /// First-leg slices `(ι⊗ω_pq)(V)`; they span the commutant of the
    /// left regular algebra.
    pub fn v_slices(&self) -> Vec<CMat> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for p in 0..n {
            for q in 0..n {
                out.push(CMat::from_fn(n, n, |a, b| self.v[(a * n + p, b * n + q)]));
            }
        }
        out
    }

    /// `L∞(Ĝ')`: the algebra generated by first-leg slices of `V`.
    pub fn dual_commutant(&self) -> Result<SubAlgebra> {
        generated_algebra(&self.v_slices(), self.dim())
    }

    /// `L∞(Ĝ)`: the commutant of [`QuantumGroup::dual_commutant`].
    pub fn dual_algebra(&self) -> Result<SubAlgebra> {
        commutant(&self.dual_commutant()?)
    }

    /// Named residuals of every validation contract.
    pub fn residuals(&self) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> =
            self.spec.axiom_residuals().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        out.push(("haar_right_invariance".into(), self.haar_residuals.0));
        out.push(("haar_left_invariance".into(), self.haar_residuals.1));
        out.push(("unitarity".into(), self.contracts.unitarity));
        out.push(("pentagon".into(), self.contracts.pentagon));
        out.push(("comultiplication_implementation".into(), self.contracts.implements_comultiplication));
        out
    }
}
