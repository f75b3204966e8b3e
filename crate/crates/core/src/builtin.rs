//! Built-in quantum groups: function algebras and group algebras of finite
//! groups, the eight-dimensional Kac–Paljutkin algebra, duals and tensor
//! products.

use crate::error::{QgError, Result};
use crate::linalg::{c, re, CMat, CVec, C64, ONE};
use crate::spec::{AlgebraSpec, Tensor3};

/// Multiplication table of a finite group: `table[a][b]` is the index of `a·b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    pub name: String,
    pub table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    /// Validates associativity, the identity and inverses.
    pub fn new(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(QgError::InvalidGroupTable("empty table".into()));
        }
        for row in &table {
            if row.len() != n {
                return Err(QgError::InvalidGroupTable("table is not square".into()));
            }
            if let Some(bad) = row.iter().find(|&&x| x >= n) {
                return Err(QgError::InvalidGroupTable(format!("entry {bad} out of range")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(QgError::InvalidGroupTable(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| QgError::InvalidGroupTable("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| QgError::InvalidGroupTable(format!("element {a} has no inverse")))?;
            inverse.push(inv);
        }
        Ok(GroupTable { name: name.into(), table, identity, inverse })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// Subgroup generated by `gens`, as a sorted index list.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut members = vec![false; self.order()];
        members[self.identity] = true;
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !members[y] {
                    members[y] = true;
                    frontier.push(y);
                }
            }
        }
        (0..self.order()).filter(|&i| members[i]).collect()
    }
}

/// Cyclic group `Z/n` with `k` standing for `g^k`.
pub fn cyclic_group(n: usize) -> GroupTable {
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    GroupTable::new(format!("Z{n}"), table).expect("cyclic table is a group")
}

/// Permutations of `{0,1,2}` in the fixed order
/// `e, (12), (13), (23), (123), (132)`, composed as functions (`(στ)(x) = σ(τ(x))`).
pub const S3_ELEMENTS: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];

/// Sign of each element of [`S3_ELEMENTS`].
pub const S3_SIGNS: [i32; 6] = [1, -1, -1, -1, 1, 1];

pub fn symmetric_group_3() -> GroupTable {
    let idx = |p: [usize; 3]| S3_ELEMENTS.iter().position(|q| *q == p).unwrap();
    let table =
        S3_ELEMENTS.iter().map(|s| S3_ELEMENTS.iter().map(|t| idx([s[t[0]], s[t[1]], s[t[2]]])).collect()).collect();
    GroupTable::new("S3", table).expect("S3 table is a group")
}

/// Named groups understood by the CLI: `z<n>` and `s3`.
pub fn named_group(name: &str) -> Option<GroupTable> {
    let lower = name.to_ascii_lowercase();
    if lower == "s3" {
        return Some(symmetric_group_3());
    }
    lower.strip_prefix('z').and_then(|n| n.parse::<usize>().ok()).filter(|n| *n >= 1).map(cyclic_group)
}

/// Which built-in family to construct.
#[derive(Debug, Clone)]
pub enum Builtin<'a> {
    FunctionAlgebra(&'a GroupTable),
    GroupAlgebra(&'a GroupTable),
    KacPaljutkin,
    DualOf(&'a AlgebraSpec),
    TensorProduct(&'a AlgebraSpec, &'a AlgebraSpec),
}

/// Builds the requested spec. Spec parameters must themselves pass axiom
/// checks at `1e-9`.
pub fn builtin(kind: Builtin<'_>) -> Result<AlgebraSpec> {
    let checked = |s: &AlgebraSpec| s.check_axioms(1e-9).map_err(|e| QgError::InvalidSpec(format!("{}: {e}", s.name)));
    match kind {
        Builtin::FunctionAlgebra(g) => function_algebra(g),
        Builtin::GroupAlgebra(g) => group_algebra(g),
        Builtin::KacPaljutkin => Ok(kac_paljutkin()),
        Builtin::DualOf(s) => {
            checked(s)?;
            Ok(dual_of(s))
        }
        Builtin::TensorProduct(a, b) => {
            checked(a)?;
            checked(b)?;
            Ok(tensor_product(a, b))
        }
    }
}

/// `C(G)`: point masses `δ_g`, `Γ(δ_k) = Σ_{ij=k} δ_i ⊗ δ_j`.
pub fn function_algebra(g: &GroupTable) -> Result<AlgebraSpec> {
    let n = g.order();
    let mut mult = Tensor3::zeros(n);
    let mut comult = Tensor3::zeros(n);
    let mut antipode = CMat::zeros(n, n);
    for a in 0..n {
        mult.set(a, a, a, ONE);
        antipode[(g.inverse(a), a)] = ONE;
        for b in 0..n {
            comult.set(g.mul(a, b), a, b, ONE);
        }
    }
    let mut counit = CVec::zeros(n);
    counit[g.identity()] = ONE;
    Ok(AlgebraSpec {
        name: format!("C({})", g.name),
        dim: n,
        mult,
        unit: CVec::from_element(n, ONE),
        comult,
        counit,
        antipode,
        star: CMat::identity(n, n),
        haar: Some(CVec::from_element(n, re(1.0 / n as f64))),
    })
}

/// Group algebra: `λ_g λ_h = λ_{gh}`, `Γ(λ_g) = λ_g ⊗ λ_g`, `λ_g* = λ_{g⁻¹}`.
pub fn group_algebra(g: &GroupTable) -> Result<AlgebraSpec> {
    let n = g.order();
    let mut mult = Tensor3::zeros(n);
    let mut comult = Tensor3::zeros(n);
    let mut antipode = CMat::zeros(n, n);
    for a in 0..n {
        comult.set(a, a, a, ONE);
        antipode[(g.inverse(a), a)] = ONE;
        for b in 0..n {
            mult.set(a, b, g.mul(a, b), ONE);
        }
    }
    let mut unit = CVec::zeros(n);
    unit[g.identity()] = ONE;
    let mut haar = CVec::zeros(n);
    haar[g.identity()] = ONE;
    Ok(AlgebraSpec {
        name: format!("CG({})", g.name),
        dim: n,
        mult,
        unit,
        comult,
        counit: CVec::from_element(n, ONE),
        star: antipode.clone(),
        antipode,
        haar: Some(haar),
    })
}

/// Basis order of [`kac_paljutkin`]: four minimal projections of `C^4`,
/// then the matrix units of `M_2`.
pub const KP_BASIS: [&str; 8] = ["e1", "e2", "e3", "e4", "a11", "a12", "a21", "a22"];

/// The Kac–Paljutkin quantum group `C^4 ⊕ M_2`.
pub fn kac_paljutkin() -> AlgebraSpec {
    let n = 8;
    let e = |k: usize| k - 1; // e1..e4 -> 0..3
    let a = |i: usize, j: usize| 4 + 2 * (i - 1) + (j - 1);
    let mut mult = Tensor3::zeros(n);
    for k in 1..=4 {
        mult.set(e(k), e(k), e(k), ONE);
    }
    for i in 1..=2 {
        for j in 1..=2 {
            for l in 1..=2 {
                mult.set(a(i, j), a(j, l), a(i, l), ONE);
            }
        }
    }
    let mut unit = CVec::zeros(n);
    for k in 1..=4 {
        unit[e(k)] = ONE;
    }
    unit[a(1, 1)] = ONE;
    unit[a(2, 2)] = ONE;

    let half = re(0.5);
    let ih = c(0.0, 0.5);
    let i1 = c(0.0, 1.0);
    let mut comult = Tensor3::zeros(n);
    let mut put = |k: usize, terms: &[(usize, usize, C64)]| {
        for &(x, y, v) in terms {
            comult.add(k, x, y, v);
        }
    };
    put(
        e(1),
        &[
            (e(1), e(1), ONE),
            (e(2), e(2), ONE),
            (e(3), e(3), ONE),
            (e(4), e(4), ONE),
            (a(1, 1), a(1, 1), half),
            (a(1, 2), a(1, 2), half),
            (a(2, 1), a(2, 1), half),
            (a(2, 2), a(2, 2), half),
        ],
    );
    put(
        e(2),
        &[
            (e(1), e(2), ONE),
            (e(2), e(1), ONE),
            (e(3), e(4), ONE),
            (e(4), e(3), ONE),
            (a(1, 1), a(2, 2), half),
            (a(2, 2), a(1, 1), half),
            (a(2, 1), a(1, 2), ih),
            (a(1, 2), a(2, 1), -ih),
        ],
    );
    put(
        e(3),
        &[
            (e(1), e(3), ONE),
            (e(3), e(1), ONE),
            (e(2), e(4), ONE),
            (e(4), e(2), ONE),
            (a(1, 1), a(2, 2), half),
            (a(2, 2), a(1, 1), half),
            (a(2, 1), a(1, 2), -ih),
            (a(1, 2), a(2, 1), ih),
        ],
    );
    put(
        e(4),
        &[
            (e(1), e(4), ONE),
            (e(4), e(1), ONE),
            (e(2), e(3), ONE),
            (e(3), e(2), ONE),
            (a(1, 1), a(1, 1), half),
            (a(2, 2), a(2, 2), half),
            (a(1, 2), a(1, 2), -half),
            (a(2, 1), a(2, 1), -half),
        ],
    );
    put(
        a(1, 1),
        &[
            (e(1), a(1, 1), ONE),
            (a(1, 1), e(1), ONE),
            (e(2), a(2, 2), ONE),
            (a(2, 2), e(2), ONE),
            (e(3), a(2, 2), ONE),
            (a(2, 2), e(3), ONE),
            (e(4), a(1, 1), ONE),
            (a(1, 1), e(4), ONE),
        ],
    );
    put(
        a(1, 2),
        &[
            (e(1), a(1, 2), ONE),
            (a(1, 2), e(1), ONE),
            (e(2), a(2, 1), i1),
            (a(2, 1), e(2), -i1),
            (e(3), a(2, 1), -i1),
            (a(2, 1), e(3), i1),
            (e(4), a(1, 2), -ONE),
            (a(1, 2), e(4), -ONE),
        ],
    );
    put(
        a(2, 1),
        &[
            (e(1), a(2, 1), ONE),
            (a(2, 1), e(1), ONE),
            (e(2), a(1, 2), -i1),
            (a(1, 2), e(2), i1),
            (e(3), a(1, 2), i1),
            (a(1, 2), e(3), -i1),
            (e(4), a(2, 1), -ONE),
            (a(2, 1), e(4), -ONE),
        ],
    );
    put(
        a(2, 2),
        &[
            (e(1), a(2, 2), ONE),
            (a(2, 2), e(1), ONE),
            (e(2), a(1, 1), ONE),
            (a(1, 1), e(2), ONE),
            (e(3), a(1, 1), ONE),
            (a(1, 1), e(3), ONE),
            (e(4), a(2, 2), ONE),
            (a(2, 2), e(4), ONE),
        ],
    );

    let mut counit = CVec::zeros(n);
    counit[e(1)] = ONE;
    let mut antipode = CMat::zeros(n, n);
    let mut star = CMat::zeros(n, n);
    for k in 1..=4 {
        antipode[(e(k), e(k))] = ONE;
        star[(e(k), e(k))] = ONE;
    }
    for i in 1..=2 {
        for j in 1..=2 {
            antipode[(a(j, i), a(i, j))] = ONE;
            star[(a(j, i), a(i, j))] = ONE;
        }
    }
    let mut haar = CVec::zeros(n);
    for k in 1..=4 {
        haar[e(k)] = re(0.125);
    }
    haar[a(1, 1)] = re(0.25);
    haar[a(2, 2)] = re(0.25);
    AlgebraSpec { name: "KP".into(), dim: n, mult, unit, comult, counit, antipode, star, haar: Some(haar) }
}

/// Dual Hopf *-algebra on the dual basis `φ_i(e_j) = δ_ij`: the product is
/// convolution, the coproduct dualizes multiplication, `S' = Sᵀ` and
/// `φ*(x) = conj(φ(S(x)*))`.
pub fn dual_of(spec: &AlgebraSpec) -> AlgebraSpec {
    let n = spec.dim;
    let mut mult = Tensor3::zeros(n);
    let mut comult = Tensor3::zeros(n);
    for (k, i, j, v) in spec.comult.nonzeros() {
        mult.set(i, j, k, v);
    }
    for (i, j, k, v) in spec.mult.nonzeros() {
        comult.set(k, i, j, v);
    }
    let star = (spec.star.map(|z| z.conj()) * &spec.antipode).transpose();
    AlgebraSpec {
        name: dual_name(&spec.name),
        dim: n,
        mult,
        unit: spec.counit.clone(),
        comult,
        counit: spec.unit.clone(),
        antipode: spec.antipode.transpose(),
        star,
        haar: None,
    }
}

fn dual_name(name: &str) -> String {
    name.strip_prefix("dual(")
        .and_then(|s| s.strip_suffix(')'))
        .map(str::to_string)
        .unwrap_or_else(|| format!("dual({name})"))
}

/// `A ⊗ B` with basis `e_i ⊗ f_j` at index `i * dim(B) + j`.
pub fn tensor_product(a: &AlgebraSpec, b: &AlgebraSpec) -> AlgebraSpec {
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let idx = |i: usize, j: usize| i * nb + j;
    let mut mult = Tensor3::zeros(n);
    for (i1, i2, i3, v) in a.mult.nonzeros() {
        for (j1, j2, j3, w) in b.mult.nonzeros() {
            mult.add(idx(i1, j1), idx(i2, j2), idx(i3, j3), v * w);
        }
    }
    let mut comult = Tensor3::zeros(n);
    for (k1, x1, y1, v) in a.comult.nonzeros() {
        for (k2, x2, y2, w) in b.comult.nonzeros() {
            comult.add(idx(k1, k2), idx(x1, x2), idx(y1, y2), v * w);
        }
    }
    let kron_vec = |x: &CVec, y: &CVec| CVec::from_fn(n, |k, _| x[k / nb] * y[k % nb]);
    let haar = match (&a.haar, &b.haar) {
        (Some(x), Some(y)) => Some(kron_vec(x, y)),
        _ => None,
    };
    AlgebraSpec {
        name: format!("{}⊗{}", a.name, b.name),
        dim: n,
        mult,
        unit: kron_vec(&a.unit, &b.unit),
        comult,
        counit: kron_vec(&a.counit, &b.counit),
        antipode: a.antipode.kronecker(&b.antipode),
        star: a.star.kronecker(&b.star),
        haar,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_tables_validate() {
        assert_eq!(cyclic_group(4).order(), 4);
        let s3 = symmetric_group_3();
        assert_eq!(s3.identity(), 0);
        // (12)(13) = (132) under function composition.
        assert_eq!(s3.mul(1, 2), 5);
        assert_eq!(s3.generated_subgroup(&[1]), vec![0, 1]);
        assert_eq!(s3.generated_subgroup(&[4]), vec![0, 4, 5]);
        assert_eq!(s3.generated_subgroup(&[1, 4]).len(), 6);
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(GroupTable::new("x", vec![]).is_err());
        assert!(GroupTable::new("x", vec![vec![0, 1], vec![0, 1]]).is_err());
        assert!(GroupTable::new("x", vec![vec![0, 2], vec![1, 0]]).is_err());
        assert!(GroupTable::new("x", vec![vec![0, 1], vec![1]]).is_err());
    }

    #[test]
    fn builtins_pass_axioms() {
        for spec in [
            function_algebra(&cyclic_group(3)).unwrap(),
            function_algebra(&symmetric_group_3()).unwrap(),
            group_algebra(&symmetric_group_3()).unwrap(),
            kac_paljutkin(),
        ] {
            spec.check_axioms(1e-12).unwrap_or_else(|e| panic!("{}: {e}", spec.name));
            dual_of(&spec).check_axioms(1e-12).unwrap_or_else(|e| panic!("dual {}: {e}", spec.name));
        }
    }

    #[test]
    fn bidual_is_identical() {
        for spec in [kac_paljutkin(), group_algebra(&symmetric_group_3()).unwrap()] {
            let mut bidual = dual_of(&dual_of(&spec));
            bidual.haar = spec.haar.clone();
            assert_eq!(bidual, spec);
        }
    }

    #[test]
    fn dual_of_function_algebra_z2_is_group_algebra() {
        let g = cyclic_group(2);
        let d = dual_of(&function_algebra(&g).unwrap());
        let ga = group_algebra(&g).unwrap();
        assert_eq!(d.mult, ga.mult);
        assert_eq!(d.comult, ga.comult);
        assert_eq!(d.unit, ga.unit);
        assert_eq!(d.counit, ga.counit);
        assert_eq!(d.star, ga.star);
        assert_eq!(d.antipode, ga.antipode);
    }

    #[test]
    fn tensor_product_passes_axioms() {
        let z2 = function_algebra(&cyclic_group(2)).unwrap();
        let g2 = group_algebra(&cyclic_group(2)).unwrap();
        let t = builtin(Builtin::TensorProduct(&z2, &g2)).unwrap();
        assert_eq!(t.dim, 4);
        t.check_axioms(1e-12).unwrap();
    }

    #[test]
    fn named_groups() {
        assert_eq!(named_group("Z4").unwrap().order(), 4);
        assert_eq!(named_group("s3").unwrap().order(), 6);
        assert!(named_group("q8").is_none());
    }
}
