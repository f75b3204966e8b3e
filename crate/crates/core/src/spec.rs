//! Structure constants of a finite-dimensional Hopf *-algebra and the
//! residuals of its axioms.
//!
//! Elements of `A` are coefficient vectors over the basis `e_0..e_{N-1}`.
//! Elements of `A ⊗ A` are `N × N` coefficient matrices whose row index is
//! the first leg. Elements of `A ⊗ A ⊗ A` are flat vectors indexed by
//! `(i * N + j) * N + k`.

use crate::error::{QgError, Result};
use crate::linalg::{basis_vector, max_abs, max_abs_vec, CMat, CVec, C64, ZERO};

/// Dense complex 3-tensor with an explicit index convention per use site.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    n: usize,
    data: Vec<C64>,
}

impl Tensor3 {
    pub fn zeros(n: usize) -> Self {
        Tensor3 { n, data: vec![ZERO; n * n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> C64 {
        self.data[(a * self.n + b) * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, v: C64) {
        self.data[(a * self.n + b) * self.n + c] = v;
    }

    #[inline]
    pub fn add(&mut self, a: usize, b: usize, c: usize, v: C64) {
        self.data[(a * self.n + b) * self.n + c] += v;
    }

    /// Nonzero entries in lexicographic index order.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, usize, C64)> + '_ {
        let n = self.n;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != ZERO)
            .map(move |(idx, v)| (idx / (n * n), (idx / n) % n, idx % n, *v))
    }
}

/// Structure constants of a Hopf *-algebra.
///
/// * `mult.get(i, j, k)`: coefficient of `e_k` in `e_i e_j`.
/// * `comult.get(k, i, j)`: coefficient of `e_i ⊗ e_j` in `Γ(e_k)`.
/// * `antipode[(j, i)]`: coefficient of `e_j` in `S(e_i)`.
/// * `star[(j, i)]`: coefficient of `e_j` in `e_i*`; extended conjugate-linearly.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraSpec {
    pub name: String,
    pub dim: usize,
    pub mult: Tensor3,
    pub unit: CVec,
    pub comult: Tensor3,
    pub counit: CVec,
    pub antipode: CMat,
    pub star: CMat,
    pub haar: Option<CVec>,
}

impl AlgebraSpec {
    /// Checks that every tensor has the shape implied by `dim`.
    pub fn check_shapes(&self) -> Result<()> {
        let n = self.dim;
        if n == 0 {
            return Err(QgError::InvalidSpec("dim must be at least 1".into()));
        }
        let bad = |what: &str| Err(QgError::InvalidSpec(format!("{what} has the wrong shape for dim {n}")));
        if self.mult.dim() != n {
            return bad("mult");
        }
        if self.comult.dim() != n {
            return bad("comult");
        }
        if self.unit.len() != n {
            return bad("unit");
        }
        if self.counit.len() != n {
            return bad("counit");
        }
        if self.antipode.shape() != (n, n) {
            return bad("antipode");
        }
        if self.star.shape() != (n, n) {
            return bad("star");
        }
        if let Some(h) = &self.haar {
            if h.len() != n {
                return bad("haar");
            }
        }
        Ok(())
    }

    /// Left multiplication by `e_i` as an `N × N` matrix.
    pub fn left_mult_basis(&self, i: usize) -> CMat {
        let n = self.dim;
        CMat::from_fn(n, n, |k, j| self.mult.get(i, j, k))
    }

    /// Left multiplication by `x`.
    pub fn left_mult(&self, x: &CVec) -> CMat {
        let n = self.dim;
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            if x[i] == ZERO {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    m[(k, j)] += x[i] * self.mult.get(i, j, k);
                }
            }
        }
        m
    }

    pub fn mul(&self, x: &CVec, y: &CVec) -> CVec {
        let n = self.dim;
        let mut out = CVec::zeros(n);
        for i in 0..n {
            if x[i] == ZERO {
                continue;
            }
            for j in 0..n {
                let xy = x[i] * y[j];
                if xy == ZERO {
                    continue;
                }
                for k in 0..n {
                    out[k] += xy * self.mult.get(i, j, k);
                }
            }
        }
        out
    }

    pub fn star_of(&self, x: &CVec) -> CVec {
        &self.star * x.map(|z| z.conj())
    }

    pub fn antipode_of(&self, x: &CVec) -> CVec {
        &self.antipode * x
    }

    pub fn counit_of(&self, x: &CVec) -> C64 {
        self.counit.dot(x)
    }

    pub fn basis(&self, i: usize) -> CVec {
        basis_vector(self.dim, i)
    }

    /// `Γ(x)` as an `N × N` coefficient matrix.
    pub fn comult_of(&self, x: &CVec) -> CMat {
        let n = self.dim;
        let mut m = CMat::zeros(n, n);
        for k in 0..n {
            if x[k] == ZERO {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += x[k] * self.comult.get(k, i, j);
                }
            }
        }
        m
    }

    /// Product in `A ⊗ A`.
    pub fn mul2(&self, x: &CMat, y: &CMat) -> CMat {
        let n = self.dim;
        let mut out = CMat::zeros(n, n);
        for a in 0..n {
            for c in 0..n {
                let xr = x.row(a).transpose();
                let yr = y.row(c).transpose();
                if max_abs_vec(&xr) == 0.0 || max_abs_vec(&yr) == 0.0 {
                    continue;
                }
                let left = self.mul(&self.basis(a), &self.basis(c));
                let right = self.mul(&xr, &yr);
                out += left * right.transpose();
            }
        }
        out
    }

    /// Involution on `A ⊗ A`.
    pub fn star2(&self, x: &CMat) -> CMat {
        &self.star * x.map(|z| z.conj()) * self.star.transpose()
    }

    /// `(Γ ⊗ ι)` applied to an element of `A ⊗ A`, flat `(i, j, k)` output.
    pub fn comult_left_leg(&self, x: &CMat) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![ZERO; n * n * n];
        for a in 0..n {
            for b in 0..n {
                let v = x[(a, b)];
                if v == ZERO {
                    continue;
                }
                for i in 0..n {
                    for j in 0..n {
                        out[(i * n + j) * n + b] += v * self.comult.get(a, i, j);
                    }
                }
            }
        }
        out
    }

    /// `(ι ⊗ Γ)` applied to an element of `A ⊗ A`, flat `(i, j, k)` output.
    pub fn comult_right_leg(&self, x: &CMat) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![ZERO; n * n * n];
        for a in 0..n {
            for b in 0..n {
                let v = x[(a, b)];
                if v == ZERO {
                    continue;
                }
                for j in 0..n {
                    for k in 0..n {
                        out[(a * n + j) * n + k] += v * self.comult.get(b, j, k);
                    }
                }
            }
        }
        out
    }

    /// Evaluates a functional given by its values on the basis.
    pub fn eval(functional: &CVec, x: &CVec) -> C64 {
        functional.dot(x)
    }

    /// Residuals of every Hopf *-algebra axiom, in checking order.
    pub fn axiom_residuals(&self) -> Vec<(&'static str, f64)> {
        let n = self.dim;
        let e: Vec<CVec> = (0..n).map(|i| self.basis(i)).collect();
        let prods: Vec<Vec<CVec>> = (0..n).map(|i| (0..n).map(|j| self.mul(&e[i], &e[j])).collect()).collect();
        let mut out = Vec::new();

        let mut assoc = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let l = self.mul(&prods[i][j], &e[k]);
                    let r = self.mul(&e[i], &prods[j][k]);
                    assoc = assoc.max(max_abs_vec(&(l - r)));
                }
            }
        }
        out.push(("associativity", assoc));

        let mut unit = 0.0f64;
        for x in &e {
            unit = unit.max(max_abs_vec(&(self.mul(&self.unit, x) - x)));
            unit = unit.max(max_abs_vec(&(self.mul(x, &self.unit) - x)));
        }
        out.push(("unit", unit));

        let stars: Vec<CVec> = e.iter().map(|x| self.star_of(x)).collect();
        let mut anti = 0.0f64;
        let mut invol = 0.0f64;
        for i in 0..n {
            invol = invol.max(max_abs_vec(&(self.star_of(&stars[i]) - &e[i])));
            for j in 0..n {
                let l = self.star_of(&prods[i][j]);
                let r = self.mul(&stars[j], &stars[i]);
                anti = anti.max(max_abs_vec(&(l - r)));
            }
        }
        out.push(("involution_antimultiplicative", anti));
        out.push(("involution_involutive", invol));

        let comults: Vec<CMat> = e.iter().map(|x| self.comult_of(x)).collect();
        let mut coassoc = 0.0f64;
        for g in &comults {
            let l = self.comult_left_leg(g);
            let r = self.comult_right_leg(g);
            let d = l.iter().zip(&r).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
            coassoc = coassoc.max(d);
        }
        out.push(("coassociativity", coassoc));

        let unit_tensor = &self.unit * self.unit.transpose();
        out.push(("comultiplication_unital", max_abs(&(self.comult_of(&self.unit) - unit_tensor))));

        let mut hom = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let l = self.comult_of(&prods[i][j]);
                let r = self.mul2(&comults[i], &comults[j]);
                hom = hom.max(max_abs(&(l - r)));
            }
        }
        out.push(("comultiplication_homomorphism", hom));

        let mut cstar = 0.0f64;
        for i in 0..n {
            let l = self.comult_of(&stars[i]);
            let r = self.star2(&comults[i]);
            cstar = cstar.max(max_abs(&(l - r)));
        }
        out.push(("comultiplication_star", cstar));

        let mut counit = 0.0f64;
        for (i, g) in comults.iter().enumerate() {
            let left = g.transpose() * &self.counit;
            let right = g * &self.counit;
            counit = counit.max(max_abs_vec(&(left - &e[i])));
            counit = counit.max(max_abs_vec(&(right - &e[i])));
        }
        out.push(("counit", counit));

        let mut anti_law = 0.0f64;
        for (i, g) in comults.iter().enumerate() {
            let target = &self.unit * self.counit_of(&e[i]);
            let mut l = CVec::zeros(n);
            let mut r = CVec::zeros(n);
            for a in 0..n {
                for b in 0..n {
                    let v = g[(a, b)];
                    if v == ZERO {
                        continue;
                    }
                    l += self.mul(&self.antipode_of(&e[a]), &e[b]) * v;
                    r += self.mul(&e[a], &self.antipode_of(&e[b])) * v;
                }
            }
            anti_law = anti_law.max(max_abs_vec(&(l - &target)));
            anti_law = anti_law.max(max_abs_vec(&(r - &target)));
        }
        out.push(("antipode", anti_law));

        let mut sss = 0.0f64;
        for x in &e {
            let y = self.star_of(&self.antipode_of(&self.star_of(&self.antipode_of(x))));
            sss = sss.max(max_abs_vec(&(y - x)));
        }
        out.push(("antipode_star", sss));
        out
    }

    /// First axiom whose residual exceeds `tol`, if any.
    pub fn check_axioms(&self, tol: f64) -> Result<()> {
        self.check_shapes()?;
        for (name, r) in self.axiom_residuals() {
            if !(r <= tol) {
                return Err(QgError::axiom(name, r));
            }
        }
        Ok(())
    }
}
