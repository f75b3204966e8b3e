//! The spectrum group of characters, the Gelfand map onto functions on it,
//! and the comparison between classical and quantum boundaries.

use crate::boundary::{harmonic_space, markov_operator};
use crate::error::{QgError, Result};
use crate::linalg::{
    column_space, identity, max_abs, max_abs_vec, null_space, rank, re, subspace_distance, CMat, CVec, RANK_RTOL,
};
use crate::quantum_group::QuantumGroup;
use crate::star_algebra::FiniteStarAlgebra;
use crate::states::{convolve_values, make_state, StateFunctional};

/// Characters of `A` under convolution.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGroup {
    /// `characters[g][i] = φ_g(e_i)`; the counit comes first.
    pub characters: Vec<CVec>,
    /// `table[g][h]` is the index of `φ_g ⋆ φ_h`.
    pub table: Vec<Vec<usize>>,
    pub identity_index: usize,
    /// `inverse_map[g]` is the index of `φ_g ∘ S`.
    pub inverse_map: Vec<usize>,
    /// Largest deviation of a character from being a unital *-homomorphism.
    pub character_residual: f64,
}

impl SpectrumGroup {
    pub fn order(&self) -> usize {
        self.characters.len()
    }

    pub fn is_abelian(&self) -> bool {
        let m = self.order();
        (0..m).all(|g| (0..m).all(|h| self.table[g][h] == self.table[h][g]))
    }

    /// Subgroup generated by `gens`, as sorted indices.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut members = vec![self.identity_index];
        let mut frontier = members.clone();
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.table[x][g];
                if !members.contains(&y) {
                    members.push(y);
                    frontier.push(y);
                }
            }
        }
        members.sort_unstable();
        members
    }
}

const MATCH_TOL: f64 = 1e-8;

fn find_character(chars: &[CVec], v: &CVec) -> Option<usize> {
    chars.iter().position(|c| max_abs_vec(&(c - v)) <= MATCH_TOL)
}

fn lex_key(v: &CVec) -> Vec<(i64, i64)> {
    v.iter().map(|z| ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64)).collect()
}

/// One character per 1×1 block of the Wedderburn decomposition of `A`.
pub fn spectrum_group(qg: &QuantumGroup) -> Result<SpectrumGroup> {
    let spec = &qg.spec;
    let n = spec.dim;
    let w = FiniteStarAlgebra::from_spec(spec).wedderburn()?;
    let ones = w.blocks.iter().take_while(|b| **b == 1).count();
    let mut characters: Vec<CVec> = (0..ones).map(|g| CVec::from_fn(n, |i, _| w.images[i][(g, g)])).collect();

    let mut residual = 0.0f64;
    for phi in &characters {
        residual = residual.max((phi.dot(&spec.unit) - re(1.0)).norm());
        for i in 0..n {
            let ei = spec.basis(i);
            let star = phi.dot(&spec.star_of(&ei));
            residual = residual.max((star - phi[i].conj()).norm());
            for j in 0..n {
                let prod = phi.dot(&spec.mul(&ei, &spec.basis(j)));
                residual = residual.max((prod - phi[i] * phi[j]).norm());
            }
        }
    }
    if residual > qg.tol.max(MATCH_TOL) {
        return Err(QgError::ClosureFailure(format!("a 1×1 block is not a character (residual {residual:e})")));
    }

    let counit = find_character(&characters, &spec.counit)
        .ok_or_else(|| QgError::ClosureFailure("the counit is not among the characters".into()))?;
    let eps = characters.remove(counit);
    characters.sort_by_key(lex_key);
    characters.insert(0, eps);

    let m = characters.len();
    let mut table = vec![vec![0; m]; m];
    for g in 0..m {
        for h in 0..m {
            let prod = convolve_values(qg, &characters[g], &characters[h]);
            table[g][h] = find_character(&characters, &prod).ok_or_else(|| {
                QgError::ClosureFailure(format!("product of characters {g} and {h} is not a character"))
            })?;
        }
    }
    let s_t = spec.antipode.transpose();
    let mut inverse_map = Vec::with_capacity(m);
    for (g, phi) in characters.iter().enumerate() {
        let inv = find_character(&characters, &(&s_t * phi))
            .ok_or_else(|| QgError::ClosureFailure(format!("inverse of character {g} is not a character")))?;
        if table[g][inv] != 0 || table[inv][g] != 0 {
            return Err(QgError::ClosureFailure(format!("character {g} composed with its antipode is not the counit")));
        }
        inverse_map.push(inv);
    }
    for g in 0..m {
        if table[0][g] != g || table[g][0] != g {
            return Err(QgError::ClosureFailure("the counit is not a two-sided identity".into()));
        }
        for h in 0..m {
            for k in 0..m {
                if table[table[g][h]][k] != table[g][table[h][k]] {
                    return Err(QgError::ClosureFailure(format!("convolution is not associative at ({g}, {h}, {k})")));
                }
            }
        }
    }
    Ok(SpectrumGroup { characters, table, identity_index: 0, inverse_map, character_residual: residual })
}

/// `P(x)(φ) = φ(x)` with its certified properties.
#[derive(Debug, Clone, PartialEq)]
pub struct GelfandMap {
    /// `|G̃| × N`, row `g` is `φ_g`.
    pub matrix: CMat,
    pub rank: usize,
    /// `‖(P⊗P)Γ − Γ_a P‖` over the basis.
    pub intertwiner_residual: f64,
    /// Rank of `(ι⊗P)Γ`, which must equal `N`.
    pub coaction_rank: usize,
}

impl GelfandMap {
    pub fn apply(&self, x: &CVec) -> CVec {
        &self.matrix * x
    }
}

pub fn gelfand_map(qg: &QuantumGroup, sp: &SpectrumGroup) -> Result<GelfandMap> {
    let spec = &qg.spec;
    let n = spec.dim;
    let m = sp.order();
    let p = CMat::from_fn(m, n, |g, i| sp.characters[g][i]);
    let r = rank(&p);
    if r != m {
        return Err(QgError::SurjectivityFailure { rank: r, expected: m });
    }
    let mut intertwiner = 0.0f64;
    let mut coaction_cols = CMat::zeros(n * m, n);
    for k in 0..n {
        let g = spec.comult_of(&spec.basis(k));
        let pp = &p * &g * p.transpose();
        let ek = p.column(k);
        let expected = CMat::from_fn(m, m, |a, b| ek[sp.table[a][b]]);
        intertwiner = intertwiner.max(max_abs(&(pp - expected)));
        let half = &g * p.transpose();
        coaction_cols.set_column(k, &CVec::from_column_slice(half.as_slice()));
    }
    if intertwiner > qg.tol {
        return Err(QgError::IntertwinerFailure(intertwiner));
    }
    let coaction_rank = rank(&coaction_cols);
    Ok(GelfandMap { matrix: p, rank: r, intertwiner_residual: intertwiner, coaction_rank })
}

fn check_weights(sp: &SpectrumGroup, weights: &[f64]) -> Result<()> {
    if weights.len() != sp.order() {
        return Err(QgError::NotProbabilityVector(format!("expected {} weights, got {}", sp.order(), weights.len())));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < -1e-12) {
        return Err(QgError::NotProbabilityVector(format!("weight {w} is negative")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(QgError::NotProbabilityVector(format!("weights sum to {total}")));
    }
    Ok(())
}

/// `μ_G = Σ_g w_g φ_g`.
pub fn push_measure(qg: &QuantumGroup, sp: &SpectrumGroup, weights: &[f64]) -> Result<StateFunctional> {
    check_weights(sp, weights)?;
    let mut values = CVec::zeros(qg.dim());
    for (phi, w) in sp.characters.iter().zip(weights) {
        values += phi * re(*w);
    }
    make_state(qg, values)
}

/// `(T f)(s) = Σ_t w_t f(st)` on functions on the spectrum.
pub fn classical_markov_matrix(sp: &SpectrumGroup, weights: &[f64]) -> CMat {
    let m = sp.order();
    let mut t = CMat::zeros(m, m);
    for s in 0..m {
        for (u, w) in weights.iter().enumerate() {
            t[(s, sp.table[s][u])] += re(*w);
        }
    }
    t
}

/// Orthonormal basis of the classical harmonic functions.
pub fn classical_boundary(sp: &SpectrumGroup, weights: &[f64]) -> Result<CMat> {
    check_weights(sp, weights)?;
    let t = classical_markov_matrix(sp, weights);
    Ok(null_space(&(t - identity(sp.order()))))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BridgeReport {
    pub harmonic_dim: usize,
    pub lifted_dim: usize,
    pub classical_dim: usize,
    /// Distance between `ℋ^{μ_G}` and `{x : (ι⊗P)Γ(x) ∈ A⊗ℋ^cl}`.
    pub bridge_distance: f64,
    /// Whether the support of the weights generates the spectrum.
    pub generating: bool,
    /// Dimension of `{x : (ι⊗P)Γ(x) = x⊗1}` and its distance from `ℋ^{μ_G}`,
    /// evaluated when the weights are generating.
    pub homogeneous: Option<(usize, f64)>,
    /// Distance between `P(ℋ^{μ_G})` and `ℋ^cl` when `P` is invertible.
    pub classical_agreement: Option<f64>,
    pub pass: bool,
}

/// Compares the quantum boundary of `μ_G = μ∘P` with the lift of the
/// classical boundary on the spectrum.
pub fn verify_bridge(qg: &QuantumGroup, sp: &SpectrumGroup, weights: &[f64]) -> Result<BridgeReport> {
    let spec = &qg.spec;
    let n = spec.dim;
    let m = sp.order();
    let p = gelfand_map(qg, sp)?;
    let mu = push_measure(qg, sp, weights)?;
    let harmonic = harmonic_space(&markov_operator(qg, &mu)?);
    let classical = classical_boundary(sp, weights)?;
    let outside = identity(m) - &classical * classical.adjoint();

    // x ↦ (ι⊗P)Γ(x) as N × m matrices Y with Y[i][g].
    let lifted: Vec<CMat> = (0..n).map(|k| spec.comult_of(&spec.basis(k)) * p.matrix.transpose()).collect();
    let mut system = CMat::zeros(n * m, n);
    for (k, y) in lifted.iter().enumerate() {
        let r = y * outside.transpose();
        system.set_column(k, &CVec::from_column_slice(r.as_slice()));
    }
    let lifted_space = null_space(&system);
    let bridge_distance = subspace_distance(harmonic.basis(), &lifted_space);

    let support: Vec<usize> = (0..m).filter(|g| weights[*g] > 1e-12).collect();
    let generating = sp.generated_subgroup(&support).len() == m;
    let homogeneous = generating.then(|| {
        let mut system = CMat::zeros(n * m, n);
        for (k, y) in lifted.iter().enumerate() {
            let mut r = y.clone();
            for g in 0..m {
                r[(k, g)] -= re(1.0);
            }
            system.set_column(k, &CVec::from_column_slice(r.as_slice()));
        }
        let hom = null_space(&system);
        (hom.ncols(), subspace_distance(harmonic.basis(), &hom))
    });
    let classical_agreement = (m == n).then(|| {
        let image = column_space(&(&p.matrix * harmonic.basis()));
        subspace_distance(&image, &classical)
    });
    let pass = bridge_distance <= RANK_RTOL
        && homogeneous.is_none_or(|(_, d)| d <= RANK_RTOL)
        && classical_agreement.is_none_or(|d| d <= RANK_RTOL);
    Ok(BridgeReport {
        harmonic_dim: harmonic.dim(),
        lifted_dim: lifted_space.ncols(),
        classical_dim: classical.ncols(),
        bridge_distance,
        generating,
        homogeneous,
        classical_agreement,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{cyclic_group, function_algebra, group_algebra, kac_paljutkin, symmetric_group_3, S3_SIGNS};
    use crate::linalg::basis_vector;
    use crate::quantum_group::{validate_spec, DEFAULT_TOL};
    use crate::states::counit_state;

    fn qg_of(spec: crate::spec::AlgebraSpec) -> QuantumGroup {
        validate_spec(&spec, DEFAULT_TOL).unwrap()
    }

    fn is_permutation_of_identity(p: &CMat) -> bool {
        let n = p.nrows();
        (0..n).all(|r| {
            let ones = (0..n).filter(|c| (p[(r, *c)] - re(1.0)).norm() < 1e-10).count();
            let zeros = (0..n).filter(|c| p[(r, *c)].norm() < 1e-10).count();
            ones == 1 && zeros == n - 1
        })
    }

    #[test]
    fn spectrum_of_function_algebra_is_the_group() {
        let s3 = qg_of(function_algebra(&symmetric_group_3()).unwrap());
        let sp = spectrum_group(&s3).unwrap();
        assert_eq!(sp.order(), 6);
        // A nonabelian group of order 6 is S3.
        assert!(!sp.is_abelian());
        let p = gelfand_map(&s3, &sp).unwrap();
        assert!(is_permutation_of_identity(&p.matrix));
        assert_eq!(p.coaction_rank, 6);
    }

    #[test]
    fn spectrum_of_group_algebra_is_abelianization() {
        let cg = qg_of(group_algebra(&symmetric_group_3()).unwrap());
        let sp = spectrum_group(&cg).unwrap();
        assert_eq!(sp.order(), 2);
        // Oracle: the trivial and sign representations.
        let sign = CVec::from_iterator(6, S3_SIGNS.iter().map(|s| re(*s as f64)));
        assert!(max_abs_vec(&(&sp.characters[0] - CVec::from_element(6, re(1.0)))) < 1e-10);
        assert!(max_abs_vec(&(&sp.characters[1] - sign)) < 1e-10);
        assert_eq!(sp.table, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn spectrum_of_kac_paljutkin() {
        let kp = qg_of(kac_paljutkin());
        let sp = spectrum_group(&kp).unwrap();
        assert_eq!(sp.order(), 4);
        let p = gelfand_map(&kp, &sp).unwrap();
        assert_eq!(p.matrix.shape(), (4, 8));
        // Characters vanish on the M_2 summand and pick out one minimal projection of C^4.
        for g in 0..4 {
            for i in 4..8 {
                assert!(p.matrix[(g, i)].norm() < 1e-10);
            }
        }
        assert_eq!(p.coaction_rank, 8);
        // Oracle: the convolution table agrees with the table of products of characters.
        for g in 0..4 {
            for h in 0..4 {
                let prod = convolve_values(&kp, &sp.characters[g], &sp.characters[h]);
                assert!(max_abs_vec(&(prod - &sp.characters[sp.table[g][h]])) < 1e-10);
            }
        }
    }

    #[test]
    fn counit_factors_through_the_identity_character() {
        for qg in [qg_of(kac_paljutkin()), qg_of(group_algebra(&symmetric_group_3()).unwrap())] {
            let sp = spectrum_group(&qg).unwrap();
            let p = gelfand_map(&qg, &sp).unwrap();
            let e = basis_vector(sp.order(), sp.identity_index);
            assert!(max_abs_vec(&(p.matrix.transpose() * e - &qg.spec.counit)) < 1e-10);
        }
    }

    #[test]
    fn pushed_measures() {
        let s3 = qg_of(function_algebra(&symmetric_group_3()).unwrap());
        let sp = spectrum_group(&s3).unwrap();
        let mut point = vec![0.0; 6];
        point[0] = 1.0;
        let eps = push_measure(&s3, &sp, &point).unwrap();
        assert!(max_abs_vec(&(eps.values - counit_state(&s3).values)) < 1e-12);
        let uniform = push_measure(&s3, &sp, &[1.0 / 6.0; 6]).unwrap();
        assert!(max_abs_vec(&(uniform.values - &s3.haar)) < 1e-12);

        let cg = qg_of(group_algebra(&symmetric_group_3()).unwrap());
        let sp = spectrum_group(&cg).unwrap();
        let mu = push_measure(&cg, &sp, &[0.5, 0.5]).unwrap();
        let a3 = CVec::from_iterator(6, S3_SIGNS.iter().map(|s| re(if *s == 1 { 1.0 } else { 0.0 })));
        assert!(max_abs_vec(&(mu.values - a3)) < 1e-12);

        assert!(matches!(push_measure(&cg, &sp, &[0.7, 0.7]), Err(QgError::NotProbabilityVector(_))));
        assert!(matches!(push_measure(&cg, &sp, &[1.5, -0.5]), Err(QgError::NotProbabilityVector(_))));
        assert!(matches!(push_measure(&cg, &sp, &[1.0]), Err(QgError::NotProbabilityVector(_))));
    }

    #[test]
    fn classical_boundaries() {
        let z2 = qg_of(function_algebra(&cyclic_group(2)).unwrap());
        let sp = spectrum_group(&z2).unwrap();
        assert_eq!(classical_boundary(&sp, &[0.0, 1.0]).unwrap().ncols(), 1);
        assert_eq!(classical_boundary(&sp, &[1.0, 0.0]).unwrap().ncols(), 2);

        let s3 = qg_of(function_algebra(&symmetric_group_3()).unwrap());
        let sp = spectrum_group(&s3).unwrap();
        let transposition = (1..6).find(|g| sp.table[*g][*g] == 0).unwrap();
        let rotation = (1..6).find(|g| sp.table[*g][*g] != 0).unwrap();
        let mut w = vec![0.0; 6];
        w[transposition] = 0.5;
        w[rotation] = 0.5;
        // Oracle: eigenvalue-1 multiplicity of the stochastic matrix.
        let t = classical_markov_matrix(&sp, &w);
        assert_eq!(crate::boundary::eigenvalue_one_multiplicity(&t), 1);
        assert_eq!(classical_boundary(&sp, &w).unwrap().ncols(), 1);
    }

    #[test]
    fn bridge_on_group_algebra() {
        let cg = qg_of(group_algebra(&symmetric_group_3()).unwrap());
        let sp = spectrum_group(&cg).unwrap();
        let r = verify_bridge(&cg, &sp, &[0.5, 0.5]).unwrap();
        assert!(r.pass && r.generating);
        assert_eq!((r.harmonic_dim, r.lifted_dim), (3, 3));
        let (hom_dim, _) = r.homogeneous.unwrap();
        assert_eq!(hom_dim, 3);
    }

    #[test]
    fn bridge_on_function_algebra() {
        let s3 = qg_of(function_algebra(&symmetric_group_3()).unwrap());
        let sp = spectrum_group(&s3).unwrap();
        let transposition = (1..6).find(|g| sp.table[*g][*g] == 0).unwrap();
        let rotation = (1..6).find(|g| sp.table[*g][*g] != 0).unwrap();
        let mut w = vec![0.0; 6];
        w[transposition] = 0.5;
        w[rotation] = 0.5;
        let r = verify_bridge(&s3, &sp, &w).unwrap();
        assert!(r.pass && r.harmonic_dim == 1 && r.classical_dim == 1);
        assert!(r.classical_agreement.unwrap() < 1e-10);

        let mut w = vec![0.0; 6];
        w[transposition] = 1.0;
        let r = verify_bridge(&s3, &sp, &w).unwrap();
        assert!(r.pass && !r.generating && r.harmonic_dim == 3 && r.classical_dim == 3);
    }

    #[test]
    fn bridge_at_the_identity_is_everything() {
        let kp = qg_of(kac_paljutkin());
        let sp = spectrum_group(&kp).unwrap();
        let r = verify_bridge(&kp, &sp, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(r.pass && r.harmonic_dim == 8 && r.lifted_dim == 8 && r.classical_dim == 4);
    }
}
