//! States on a finite quantum group and their convolution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{QgError, Result};
use crate::linalg::{
    c, hermitian_eigen, max_abs, max_abs_vec, mean_ergodic_projector, re, solve, CMat, CVec, C64, ONE,
};
use crate::quantum_group::QuantumGroup;

/// Seed used whenever the caller does not supply one.
pub const DEFAULT_SEED: u64 = 42;

/// A linear functional `μ` on `A`, with its density `D` (`μ(x) = h(Dx)`).
#[derive(Debug, Clone, PartialEq)]
pub struct StateFunctional {
    qg_id: u64,
    /// `μ(e_i)`.
    pub values: CVec,
    pub density: CVec,
    pub is_positive: bool,
    pub is_unital: bool,
    pub is_idempotent: bool,
    /// Smallest eigenvalue of the Hermitian part of `π(D)`.
    pub min_density_eigenvalue: f64,
}

impl StateFunctional {
    pub fn eval(&self, x: &CVec) -> C64 {
        self.values.dot(x)
    }

    pub fn belongs_to(&self, qg: &QuantumGroup) -> bool {
        self.qg_id == qg.fingerprint()
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

fn same_group(qg: &QuantumGroup, states: &[&StateFunctional]) -> Result<()> {
    if states.iter().all(|s| s.belongs_to(qg)) {
        Ok(())
    } else {
        Err(QgError::MixedQuantumGroups)
    }
}

/// `H_ij = h(e_j e_i)`, so that `values = H · density`.
fn density_system(qg: &QuantumGroup) -> CMat {
    let spec = &qg.spec;
    let n = spec.dim;
    CMat::from_fn(n, n, |i, j| qg.haar_of(&spec.mul(&spec.basis(j), &spec.basis(i))))
}

/// Builds the functional and evaluates its flags without rejecting it.
pub fn functional(qg: &QuantumGroup, values: CVec) -> Result<StateFunctional> {
    let n = qg.dim();
    if values.len() != n {
        return Err(QgError::DimensionMismatch { expected: n, got: values.len() });
    }
    let density = solve(&density_system(qg), &values);
    let pd = qg.pi_of(&density);
    let herm = (&pd + pd.adjoint()) * re(0.5);
    let anti = max_abs(&(&pd - pd.adjoint())) * 0.5;
    let (evals, _) = hermitian_eigen(&herm);
    let min_eval = evals[0];
    let tol = qg.tol;
    let is_positive = min_eval >= -tol && anti <= tol;
    let is_unital = (values.dot(&qg.spec.unit) - ONE).norm() <= tol;
    let mut s = StateFunctional {
        qg_id: qg.fingerprint(),
        values,
        density,
        is_positive,
        is_unital,
        is_idempotent: false,
        min_density_eigenvalue: if anti <= tol { min_eval } else { f64::NEG_INFINITY },
    };
    s.is_idempotent = max_abs_vec(&(convolve_values(qg, &s.values, &s.values) - &s.values)) <= tol;
    Ok(s)
}

/// A certified state: positive and unital.
pub fn make_state(qg: &QuantumGroup, values: CVec) -> Result<StateFunctional> {
    let s = functional(qg, values)?;
    if !s.is_positive {
        return Err(QgError::NotPositive(s.min_density_eigenvalue));
    }
    if !s.is_unital {
        let v = s.values.dot(&qg.spec.unit);
        return Err(QgError::NotUnital(format!("{}{:+}i", v.re, v.im)));
    }
    Ok(s)
}

/// `x ↦ h(Dx)` for a density `D`.
pub fn state_from_density(qg: &QuantumGroup, density: &CVec) -> Result<StateFunctional> {
    let values = density_system(qg) * density;
    make_state(qg, values)
}

pub fn haar_state(qg: &QuantumGroup) -> StateFunctional {
    make_state(qg, qg.haar.clone()).expect("the Haar functional of a validated group is a state")
}

pub fn counit_state(qg: &QuantumGroup) -> StateFunctional {
    make_state(qg, qg.spec.counit.clone()).expect("the counit of a validated group is a state")
}

/// `(μ⋆ν)_k = Σ d[k][i][j] μ_i ν_j`.
pub fn convolve_values(qg: &QuantumGroup, mu: &CVec, nu: &CVec) -> CVec {
    let n = qg.dim();
    let mut out = CVec::zeros(n);
    for (k, i, j, d) in qg.spec.comult.nonzeros() {
        out[k] += d * mu[i] * nu[j];
    }
    out
}

pub fn convolve(qg: &QuantumGroup, mu: &StateFunctional, nu: &StateFunctional) -> Result<StateFunctional> {
    same_group(qg, &[mu, nu])?;
    make_state(qg, convolve_values(qg, &mu.values, &nu.values))
}

/// Matrix of `Φ_μ(x) = (ι⊗μ)Γ(x)` on coefficient vectors.
pub fn markov_matrix(qg: &QuantumGroup, mu: &CVec) -> CMat {
    let n = qg.dim();
    let mut t = CMat::zeros(n, n);
    for (j, a, b, d) in qg.spec.comult.nonzeros() {
        t[(a, j)] += d * mu[b];
    }
    t
}

/// Ergodic projection of `Φ_μ` on coefficient vectors.
pub fn ergodic_matrix(qg: &QuantumGroup, mu: &CVec) -> Result<CMat> {
    mean_ergodic_projector(&markov_matrix(qg, mu)).map_err(QgError::MeanErgodicFailure)
}

/// `φ = ε∘E_μ`, the limit of the Cesàro averages of `μ^n`.
pub fn cesaro_limit_state(qg: &QuantumGroup, mu: &StateFunctional) -> Result<StateFunctional> {
    same_group(qg, &[mu])?;
    let e = ergodic_matrix(qg, &mu.values)?;
    make_state(qg, e.transpose() * &qg.spec.counit)
}

/// `(1/n) Σ_{k=1}^{n} μ^k` by direct iteration.
pub fn iterative_cesaro_average(qg: &QuantumGroup, mu: &StateFunctional, n: usize) -> CVec {
    let mut power = mu.values.clone();
    let mut sum = power.clone();
    for _ in 1..n {
        power = convolve_values(qg, &power, &mu.values);
        sum += &power;
    }
    sum * re(1.0 / n as f64)
}

pub fn is_idempotent(qg: &QuantumGroup, mu: &StateFunctional) -> bool {
    max_abs_vec(&(convolve_values(qg, &mu.values, &mu.values) - &mu.values)) <= qg.tol
}

fn density_spectrum(qg: &QuantumGroup, mu: &StateFunctional) -> Vec<f64> {
    let pd = qg.pi_of(&mu.density);
    hermitian_eigen(&((&pd + pd.adjoint()) * re(0.5))).0
}

pub fn is_faithful(qg: &QuantumGroup, mu: &StateFunctional) -> bool {
    let ev = density_spectrum(qg, mu);
    let norm = ev.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    ev[0] > qg.tol * norm
}

/// Support-search oracle: the support of `(1/K) Σ_{n≤K} μ^n` is full at `K = 2N`.
pub fn support_search_nondegenerate(qg: &QuantumGroup, mu: &StateFunctional) -> Result<bool> {
    let n = qg.dim();
    let avg = iterative_cesaro_average(qg, mu, 2 * n);
    let s = functional(qg, avg)?;
    let ev = density_spectrum(qg, &s);
    let top = ev.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(ev[0] > crate::linalg::RANK_RTOL * top)
}

/// Non-degeneracy: the Cesàro limit is faithful. Cross-checked against the
/// support-search oracle; disagreement is an error.
pub fn is_nondegenerate(qg: &QuantumGroup, mu: &StateFunctional) -> Result<bool> {
    let phi = cesaro_limit_state(qg, mu)?;
    let primary = is_faithful(qg, &phi);
    let oracle = support_search_nondegenerate(qg, mu)?;
    if primary != oracle {
        return Err(QgError::OracleDisagreement { primary, oracle });
    }
    Ok(primary)
}

/// Random element of `A`, coefficients uniform in `[-1, 1] + i[-1, 1]`.
pub fn random_element(qg: &QuantumGroup, rng: &mut impl Rng) -> CVec {
    CVec::from_fn(qg.dim(), |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// `ρ(x) = h(a*a x) / h(a*a)` for a random `a`; faithful almost surely.
pub fn random_state(qg: &QuantumGroup, rng: &mut impl Rng) -> StateFunctional {
    let spec = &qg.spec;
    let a = random_element(qg, rng);
    let d = spec.mul(&spec.star_of(&a), &a);
    let d = &d / qg.haar_of(&d);
    state_from_density(qg, &d).expect("a*a has a positive density")
}

/// `t·h + (1−t)·ρ` with `t ∈ [2/3, 0.9]`: non-degenerate by construction.
///
/// Off the constants `Φ_μ` has norm at most `1−t`, so the Cesàro averages of
/// `μⁿ` are within `2(1−t)/(t·n) ≤ 1/n` of `h` on basis elements of norm one.
pub fn random_nondegenerate_state(qg: &QuantumGroup, rng: &mut impl Rng) -> StateFunctional {
    let t = rng.gen_range(2.0 / 3.0..0.9);
    let rho = random_state(qg, rng);
    let values = &qg.haar * re(t) + &rho.values * re(1.0 - t);
    make_state(qg, values).expect("convex combination of states")
}

/// `count` seeded non-degenerate states.
pub fn seeded_states(qg: &QuantumGroup, seed: u64, count: usize) -> Vec<StateFunctional> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_nondegenerate_state(qg, &mut rng)).collect()
}

/// Convolution power `μ^k`, `k ≥ 1`.
pub fn convolution_power(qg: &QuantumGroup, mu: &StateFunctional, k: usize) -> CVec {
    let mut p = mu.values.clone();
    for _ in 1..k {
        p = convolve_values(qg, &p, &mu.values);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{cyclic_group, function_algebra, group_algebra, kac_paljutkin, symmetric_group_3};
    use crate::linalg::basis_vector;
    use crate::quantum_group::{validate_spec, DEFAULT_TOL};

    fn qg_of(spec: crate::spec::AlgebraSpec) -> QuantumGroup {
        validate_spec(&spec, DEFAULT_TOL).unwrap()
    }

    fn point_mass(n: usize, i: usize) -> CVec {
        basis_vector(n, i)
    }

    #[test]
    fn point_masses_and_unitality() {
        let z3 = qg_of(function_algebra(&cyclic_group(3)).unwrap());
        assert!(make_state(&z3, point_mass(3, 1)).is_ok());
        let z2 = qg_of(function_algebra(&cyclic_group(2)).unwrap());
        let twice = CVec::from_element(2, re(1.0));
        assert!(matches!(make_state(&z2, twice), Err(QgError::NotUnital(_))));
        assert!(matches!(make_state(&z2, CVec::from_vec(vec![re(2.0), re(-1.0)])), Err(QgError::NotPositive(_))));
    }

    #[test]
    fn sign_character_is_a_state() {
        // Oracle: on CG(Z/2) the density of u = (1, −1) is 2δ_{λ_g}-weighted;
        // π(D) has eigenvalues {0, 2}, so u is positive.
        let g = qg_of(group_algebra(&cyclic_group(2)).unwrap());
        let u = make_state(&g, CVec::from_vec(vec![re(1.0), re(-1.0)])).unwrap();
        let ev = density_spectrum(&g, &u);
        assert!((ev[0]).abs() < 1e-12 && (ev[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn convolution_examples() {
        let z3 = qg_of(function_algebra(&cyclic_group(3)).unwrap());
        let g = make_state(&z3, point_mass(3, 1)).unwrap();
        let g2 = convolve(&z3, &g, &g).unwrap();
        assert!(max_abs_vec(&(g2.values - point_mass(3, 2))) < 1e-12);
        let eps = counit_state(&z3);
        assert!(max_abs_vec(&(convolve(&z3, &eps, &g).unwrap().values - &g.values)) < 1e-12);

        // Pointwise on a cocommutative group algebra; oracle is the direct product.
        let s3 = qg_of(group_algebra(&symmetric_group_3()).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = random_state(&s3, &mut rng);
        let v = random_state(&s3, &mut rng);
        let uv = convolve(&s3, &u, &v).unwrap();
        let pointwise = u.values.component_mul(&v.values);
        assert!(max_abs_vec(&(uv.values - pointwise)) < 1e-12);
    }

    #[test]
    fn mixed_groups_rejected() {
        let z2 = qg_of(function_algebra(&cyclic_group(2)).unwrap());
        let g2 = qg_of(group_algebra(&cyclic_group(2)).unwrap());
        let a = haar_state(&z2);
        let b = haar_state(&g2);
        assert_eq!(convolve(&z2, &a, &b), Err(QgError::MixedQuantumGroups));
    }

    #[test]
    fn cesaro_limits() {
        let z2 = qg_of(function_algebra(&cyclic_group(2)).unwrap());
        let flip = make_state(&z2, point_mass(2, 1)).unwrap();
        let phi = cesaro_limit_state(&z2, &flip).unwrap();
        assert!(max_abs_vec(&(phi.values - CVec::from_element(2, re(0.5)))) < 1e-12);
        let e = make_state(&z2, point_mass(2, 0)).unwrap();
        let phi = cesaro_limit_state(&z2, &e).unwrap();
        assert!(max_abs_vec(&(&phi.values - point_mass(2, 0))) < 1e-12);
        assert!(!is_faithful(&z2, &phi));
    }

    #[test]
    fn idempotents() {
        let s3 = qg_of(function_algebra(&symmetric_group_3()).unwrap());
        assert!(is_idempotent(&s3, &haar_state(&s3)));
        let mut v = CVec::zeros(6);
        v[0] = re(0.5);
        v[1] = re(0.5);
        assert!(is_idempotent(&s3, &make_state(&s3, v).unwrap()));
        let z3 = qg_of(function_algebra(&cyclic_group(3)).unwrap());
        assert!(!is_idempotent(&z3, &make_state(&z3, point_mass(3, 1)).unwrap()));
    }

    #[test]
    fn faithfulness() {
        let kp = qg_of(kac_paljutkin());
        assert!(is_faithful(&kp, &haar_state(&kp)));
        let s3 = qg_of(function_algebra(&symmetric_group_3()).unwrap());
        assert!(is_faithful(&s3, &haar_state(&s3)));
    }

    #[test]
    fn nondegeneracy_examples() {
        let z3 = qg_of(function_algebra(&cyclic_group(3)).unwrap());
        assert!(is_nondegenerate(&z3, &make_state(&z3, point_mass(3, 1)).unwrap()).unwrap());
        let z4 = qg_of(function_algebra(&cyclic_group(4)).unwrap());
        assert!(!is_nondegenerate(&z4, &make_state(&z4, point_mass(4, 2)).unwrap()).unwrap());
        let g2 = qg_of(group_algebra(&cyclic_group(2)).unwrap());
        let trivial = make_state(&g2, CVec::from_vec(vec![re(1.0), re(1.0)])).unwrap();
        assert!(!is_nondegenerate(&g2, &trivial).unwrap());
        let half = make_state(&g2, CVec::from_vec(vec![re(1.0), re(0.5)])).unwrap();
        assert!(is_nondegenerate(&g2, &half).unwrap());
    }

    #[test]
    fn random_states_are_nondegenerate_and_recover_haar() {
        let kp = qg_of(kac_paljutkin());
        for mu in seeded_states(&kp, DEFAULT_SEED, 3) {
            assert!(is_nondegenerate(&kp, &mu).unwrap());
            let phi = cesaro_limit_state(&kp, &mu).unwrap();
            assert!(max_abs_vec(&(phi.values - &kp.haar)) < 1e-8);
        }
    }
}
