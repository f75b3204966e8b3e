//! Abstract finite-dimensional C*-algebras given by structure constants, and
//! their Wedderburn decomposition into full matrix blocks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{QgError, Result};
use crate::linalg::{
    c, column_space, columns_of, hermitian_eigen, hermitian_fn, identity, max_abs, null_space, pseudo_inverse, re,
    singular_values, vec_of, CMat, CVec, ZERO,
};
use crate::spec::{AlgebraSpec, Tensor3};
use crate::subalgebra::Ambient;

/// `e_a e_b = Σ_k mult[a][b][k] e_k`, `e_a* = Σ_j star[j][a] e_j` (conjugate-linear).
#[derive(Debug, Clone)]
pub struct FiniteStarAlgebra {
    pub dim: usize,
    pub mult: Tensor3,
    pub unit: CVec,
    pub star: CMat,
}

impl Ambient for FiniteStarAlgebra {
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

impl FiniteStarAlgebra {
    pub fn from_spec(spec: &AlgebraSpec) -> Self {
        FiniteStarAlgebra { dim: spec.dim, mult: spec.mult.clone(), unit: spec.unit.clone(), star: spec.star.clone() }
    }

    pub fn mul(&self, x: &CVec, y: &CVec) -> CVec {
        self.left_mult(x) * y
    }

    pub fn star_of(&self, x: &CVec) -> CVec {
        &self.star * x.map(|z| z.conj())
    }

    pub fn left_mult(&self, x: &CVec) -> CMat {
        let d = self.dim;
        let mut m = CMat::zeros(d, d);
        for (a, b, k, v) in self.mult.nonzeros() {
            if x[a] != ZERO {
                m[(k, b)] += x[a] * v;
            }
        }
        m
    }

    /// `max ‖(e_a e_b) e_c − e_a (e_b e_c)‖`.
    pub fn associativity_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for a in 0..d {
            let ea = crate::linalg::basis_vector(d, a);
            for b in 0..d {
                let eb = crate::linalg::basis_vector(d, b);
                let ab = self.mul(&ea, &eb);
                let lab = self.left_mult(&ab);
                let la_lb = self.left_mult(&ea) * self.left_mult(&eb);
                worst = worst.max(max_abs(&(lab - la_lb)));
            }
        }
        worst
    }

    pub fn unit_residual(&self) -> f64 {
        let l = self.left_mult(&self.unit);
        let d = self.dim;
        let mut worst = max_abs(&(l - identity(d)));
        for a in 0..d {
            let ea = crate::linalg::basis_vector(d, a);
            worst = worst.max(crate::linalg::max_abs_vec(&(self.mul(&ea, &self.unit) - &ea)));
        }
        worst
    }

    /// `max ‖(xy)* − y* x*‖` and `‖x** − x‖` over basis pairs.
    pub fn star_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for a in 0..d {
            let ea = crate::linalg::basis_vector(d, a);
            worst = worst.max(crate::linalg::max_abs_vec(&(self.star_of(&self.star_of(&ea)) - &ea)));
            for b in 0..d {
                let eb = crate::linalg::basis_vector(d, b);
                let lhs = self.star_of(&self.mul(&ea, &eb));
                let rhs = self.mul(&self.star_of(&eb), &self.star_of(&ea));
                worst = worst.max(crate::linalg::max_abs_vec(&(lhs - rhs)));
            }
        }
        worst
    }

    /// Basis of the center, as columns.
    pub fn center(&self) -> CMat {
        let d = self.dim;
        let mut system = CMat::zeros(d * d, d);
        for (a, b, k, v) in self.mult.nonzeros() {
            // z = Σ z_a e_a commutes with e_b: Σ_a z_a (c[a][b][k] − c[b][a][k]) = 0.
            system[(b * d + k, a)] += v;
            system[(a * d + k, b)] -= v;
        }
        null_space(&system)
    }

    pub fn is_commutative(&self, tol: f64) -> bool {
        let d = self.dim;
        (0..d).all(|a| (0..d).all(|b| (0..d).all(|k| (self.mult.get(a, b, k) - self.mult.get(b, a, k)).norm() <= tol)))
    }

    /// Wedderburn decomposition with a seeded search for generic elements.
    pub fn wedderburn(&self) -> Result<Wedderburn> {
        wedderburn(self)
    }
}

/// Residuals certifying `kappa` as a unital *-isomorphism onto its image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaResiduals {
    pub multiplicativity: f64,
    pub star: f64,
    pub unit: f64,
    /// Smallest singular value of `x ↦ vec kappa(x)` relative to the largest.
    pub injectivity_gap: f64,
}

/// `kappa`: a block-diagonal faithful *-representation, blocks ascending.
#[derive(Debug, Clone)]
pub struct Wedderburn {
    pub blocks: Vec<usize>,
    /// `kappa(e_a)` for every basis element.
    pub images: Vec<CMat>,
    image_pinv: CMat,
    pub residuals: KappaResiduals,
}

impl Wedderburn {
    /// Size of the representation space, `Σ n_g`.
    pub fn size(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn kappa(&self, x: &CVec) -> CMat {
        let s = self.size();
        let mut m = CMat::zeros(s, s);
        for (a, img) in self.images.iter().enumerate() {
            if x[a] != ZERO {
                m += img * x[a];
            }
        }
        m
    }

    /// Coordinates of the preimage of `m`, assuming `m` is in the image.
    pub fn kappa_inverse(&self, m: &CMat) -> CVec {
        &self.image_pinv * vec_of(m)
    }

    /// Columns `vec kappa(e_a)`.
    pub fn image_columns(&self) -> CMat {
        columns_of(&self.images.iter().map(vec_of).collect::<Vec<_>>(), self.size() * self.size())
    }

    pub fn worst_residual(&self) -> f64 {
        let r = self.residuals;
        r.multiplicativity.max(r.star).max(r.unit)
    }
}

const WEDDERBURN_SEED: u64 = 0x5eed0fb10c;
const ATTEMPTS: u64 = 12;

/// Eigenvalue clusters of an ascending list, split at gaps above `gap`.
fn clusters(evals: &[f64], gap: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=evals.len() {
        if i == evals.len() || evals[i] - evals[i - 1] > gap {
            out.push(start..i);
            start = i;
        }
    }
    out
}

fn random_coeffs(rng: &mut ChaCha8Rng, k: usize) -> CVec {
    CVec::from_fn(k, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn wedderburn(alg: &FiniteStarAlgebra) -> Result<Wedderburn> {
    let mut last = String::new();
    for attempt in 0..ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(WEDDERBURN_SEED + attempt);
        match wedderburn_attempt(alg, &mut rng) {
            Ok(w) => return Ok(w),
            Err(e) => last = e,
        }
    }
    Err(QgError::WedderburnFailure(last))
}

fn wedderburn_attempt(alg: &FiniteStarAlgebra, rng: &mut ChaCha8Rng) -> std::result::Result<Wedderburn, String> {
    let d = alg.dim;
    let basis_l: Vec<CMat> = (0..d).map(|a| alg.left_mult(&crate::linalg::basis_vector(d, a))).collect();
    let l_of = |x: &CVec| -> CMat {
        let mut m = CMat::zeros(d, d);
        for a in 0..d {
            if x[a] != ZERO {
                m += &basis_l[a] * x[a];
            }
        }
        m
    };
    // Trace form of the regular representation; its Gram matrix makes the
    // regular representation a *-representation after orthonormalization.
    let q = CMat::from_fn(d, d, |a, b| {
        let xa_star = alg.star_of(&crate::linalg::basis_vector(d, a));
        (l_of(&xa_star) * &basis_l[b]).trace()
    });
    let q = (&q + q.adjoint()) * re(0.5);
    let (qe, _) = hermitian_eigen(&q);
    if qe[0] <= 1e-10 * qe[d - 1].abs().max(1.0) {
        return Err(format!("trace form is not positive definite (min eigenvalue {:e})", qe[0]));
    }
    let w = hermitian_fn(&q, f64::sqrt);
    let w_inv = hermitian_fn(&q, |x| 1.0 / x.sqrt());
    let lp = |x: &CVec| -> CMat { &w * l_of(x) * &w_inv };
    let unit_p = &w * &alg.unit;

    let center = alg.center();
    let r = center.ncols();
    let z = &center * random_coeffs(rng, r);
    let z_sa = (&z + alg.star_of(&z)) * re(0.5);
    let lz = lp(&z_sa);
    let lz = (&lz + lz.adjoint()) * re(0.5);
    let (zevals, zvecs) = hermitian_eigen(&lz);
    let spread = zevals[d - 1] - zevals[0];
    let groups = clusters(&zevals, 1e-6 * spread.max(1.0));
    if groups.len() != r {
        return Err(format!("{} eigenvalue clusters for a center of dimension {r}", groups.len()));
    }

    let mut found: Vec<(usize, CMat)> = Vec::new();
    let y = random_coeffs(rng, d);
    let y_sa = (&y + alg.star_of(&y)) * re(0.5);
    for range in groups {
        let mult = range.len();
        let n = (mult as f64).sqrt().round() as usize;
        if n * n != mult {
            return Err(format!("central block of dimension {mult} is not a square"));
        }
        let ug = zvecs.columns(range.start, mult).into_owned();
        // Central projection p_g, then a generic self-adjoint element of p_g A.
        let pg = &ug * ug.adjoint() * &unit_p;
        let pg = &w_inv * pg;
        let yg = alg.mul(&pg, &y_sa);
        let m = ug.adjoint() * lp(&yg) * &ug;
        let m = (&m + m.adjoint()) * re(0.5);
        let (yevals, yvecs) = hermitian_eigen(&m);
        let yspread = yevals[mult - 1] - yevals[0];
        let ygroups = clusters(&yevals, 1e-6 * yspread.max(1.0));
        if ygroups.len() != n || ygroups.iter().any(|g| g.len() != n) {
            return Err(format!("block of size {n} did not split into {n} equal clusters"));
        }
        let e = yvecs.columns(0, n).into_owned();
        let f_full = &ug * e;
        let q_el = &f_full * f_full.adjoint() * &unit_p;
        let ideal: Vec<CVec> = basis_l.iter().map(|l| &w * l * &w_inv * &q_el).collect();
        let f = column_space(&columns_of(&ideal, d));
        if f.ncols() != n {
            return Err(format!("left ideal has dimension {} instead of {n}", f.ncols()));
        }
        found.push((n, f));
    }
    found.sort_by_key(|(n, _)| *n);
    let blocks: Vec<usize> = found.iter().map(|(n, _)| *n).collect();
    if blocks.iter().map(|n| n * n).sum::<usize>() != d {
        return Err("block dimensions do not add up".into());
    }
    let size: usize = blocks.iter().sum();
    let images: Vec<CMat> = (0..d)
        .map(|a| {
            let la = &w * &basis_l[a] * &w_inv;
            let mut m = CMat::zeros(size, size);
            let mut off = 0;
            for (n, f) in &found {
                m.view_mut((off, off), (*n, *n)).copy_from(&(f.adjoint() * &la * f));
                off += n;
            }
            m
        })
        .collect();
    let cols = columns_of(&images.iter().map(vec_of).collect::<Vec<_>>(), size * size);
    let image_pinv = pseudo_inverse(&cols);
    let mut wb = Wedderburn {
        blocks,
        images,
        image_pinv,
        residuals: KappaResiduals { multiplicativity: 0.0, star: 0.0, unit: 0.0, injectivity_gap: 0.0 },
    };
    let mut mult = 0.0f64;
    let mut star = 0.0f64;
    for a in 0..d {
        let ea = crate::linalg::basis_vector(d, a);
        star = star.max(max_abs(&(wb.kappa(&alg.star_of(&ea)) - wb.images[a].adjoint())));
        for b in 0..d {
            let eb = crate::linalg::basis_vector(d, b);
            let lhs = wb.kappa(&alg.mul(&ea, &eb));
            mult = mult.max(max_abs(&(lhs - &wb.images[a] * &wb.images[b])));
        }
    }
    let unit = max_abs(&(wb.kappa(&alg.unit) - identity(size)));
    let sv = singular_values(&cols);
    let largest = sv.iter().copied().fold(0.0, f64::max);
    let smallest = sv.iter().copied().fold(f64::INFINITY, f64::min);
    wb.residuals =
        KappaResiduals { multiplicativity: mult, star, unit, injectivity_gap: smallest / largest.max(1e-300) };
    Ok(wb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{cyclic_group, dual_of, function_algebra, group_algebra, kac_paljutkin, symmetric_group_3};

    fn blocks_of(spec: &AlgebraSpec) -> Vec<usize> {
        let w = FiniteStarAlgebra::from_spec(spec).wedderburn().unwrap();
        assert!(w.worst_residual() < 1e-9, "kappa residuals {:?}", w.residuals);
        assert!(w.residuals.injectivity_gap > 1e-8);
        w.blocks
    }

    #[test]
    fn commutative_algebras_split_into_points() {
        assert_eq!(blocks_of(&function_algebra(&cyclic_group(4)).unwrap()), vec![1; 4]);
        assert_eq!(blocks_of(&function_algebra(&symmetric_group_3()).unwrap()), vec![1; 6]);
    }

    #[test]
    fn group_algebra_of_s3() {
        assert_eq!(blocks_of(&group_algebra(&symmetric_group_3()).unwrap()), vec![1, 1, 2]);
    }

    #[test]
    fn kac_paljutkin_and_its_dual() {
        let kp = kac_paljutkin();
        assert_eq!(blocks_of(&kp), vec![1, 1, 1, 1, 2]);
        assert_eq!(blocks_of(&dual_of(&kp)), vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn dual_of_s3_functions_matches_group_algebra() {
        assert_eq!(blocks_of(&dual_of(&function_algebra(&symmetric_group_3()).unwrap())), vec![1, 1, 2]);
    }

    #[test]
    fn full_matrix_algebra() {
        // M_2 on matrix units E_11, E_12, E_21, E_22.
        let mut mult = Tensor3::zeros(4);
        let idx = |i: usize, j: usize| 2 * i + j;
        for i in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    mult.set(idx(i, j), idx(j, l), idx(i, l), re(1.0));
                }
            }
        }
        let mut star = CMat::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                star[(idx(j, i), idx(i, j))] = re(1.0);
            }
        }
        let unit = CVec::from_vec(vec![re(1.0), ZERO, ZERO, re(1.0)]);
        let alg = FiniteStarAlgebra { dim: 4, mult, unit, star };
        assert_eq!(alg.center().ncols(), 1);
        assert_eq!(alg.wedderburn().unwrap().blocks, vec![2]);
    }
}
