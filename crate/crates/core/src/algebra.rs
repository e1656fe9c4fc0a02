//! Lie algebras given by rational structure constants.
//!
//! Only brackets `[e_i, e_j]` with `i < j` are stored; the others follow from
//! antisymmetry. Indices in the public API are 0-based except in
//! [`AlgebraBuilder`] and in violation reports, which use the 1-based `e_1 ..
//! e_n` labels of the usual bracket lists.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{axpy, is_zero_vector, span_basis, unit_vector, zero_vector, Echelon, RatMatrix, RatVector};
use crate::rational::{format_rational, Rational};

type SparseVec = Vec<(usize, Rational)>;

fn sparse(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.clone()))
        .collect()
}

#[derive(Clone)]
pub struct LieAlgebra {
    name: String,
    dim: usize,
    brackets: BTreeMap<(usize, usize), RatVector>,
    // [e_i, e_j] for every ordered pair, at index i * dim + j.
    table: Vec<SparseVec>,
}

impl LieAlgebra {
    /// Builds an algebra from 0-based `(i, j) -> [e_i, e_j]` entries with
    /// `i < j`. Zero brackets may be omitted.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        brackets: impl IntoIterator<Item = ((usize, usize), RatVector)>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parameter("dimension must be positive".into()));
        }
        let mut stored = BTreeMap::new();
        for ((i, j), v) in brackets {
            if i >= j {
                return Err(Error::InvalidBracket {
                    i: i + 1,
                    j: j + 1,
                    reason: "pairs must satisfy i < j".into(),
                });
            }
            if j >= dim {
                return Err(Error::InvalidBracket {
                    i: i + 1,
                    j: j + 1,
                    reason: format!("index exceeds dimension {dim}"),
                });
            }
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            if stored.contains_key(&(i, j)) {
                return Err(Error::InvalidBracket {
                    i: i + 1,
                    j: j + 1,
                    reason: "duplicate entry".into(),
                });
            }
            if !is_zero_vector(&v) {
                stored.insert((i, j), v);
            }
        }
        let mut table = vec![Vec::new(); dim * dim];
        for (&(i, j), v) in &stored {
            let s = sparse(v);
            table[j * dim + i] = s.iter().map(|(k, c)| (*k, -c.clone())).collect();
            table[i * dim + j] = s;
        }
        Ok(Self {
            name: name.into(),
            dim,
            brackets: stored,
            table,
        })
    }

    pub fn abelian(dim: usize) -> Result<Self> {
        Self::new(format!("abelian({dim})"), dim, [])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Stored brackets `(i, j) -> [e_i, e_j]`, 0-based with `i < j`.
    pub fn brackets(&self) -> impl Iterator<Item = ((usize, usize), &RatVector)> {
        self.brackets.iter().map(|(k, v)| (*k, v))
    }

    /// Sparse `[e_i, e_j]` for any ordered pair.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.table[i * self.dim + j]
    }

    pub fn basis_bracket_dense(&self, i: usize, j: usize) -> RatVector {
        let mut v = zero_vector(self.dim);
        for (k, c) in self.basis_bracket(i, j) {
            v[*k] = c.clone();
        }
        v
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Rational {
        self.basis_bracket(i, j)
            .iter()
            .find(|(kk, _)| *kk == k)
            .map_or_else(Rational::zero, |(_, c)| c.clone())
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// Same structure constants (names ignored).
    pub fn same_structure(&self, other: &Self) -> bool {
        self.dim == other.dim && self.brackets == other.brackets
    }

    fn check_len(&self, v: &[Rational]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Bilinear extension of the bracket table.
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Result<RatVector> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &[Rational], y: &[Rational]) -> RatVector {
        let mut out = zero_vector(self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || i == j {
                    continue;
                }
                let entries = self.basis_bracket(i, j);
                if entries.is_empty() {
                    continue;
                }
                let c = xi * yj;
                for (k, s) in entries {
                    out[*k] += &c * s;
                }
            }
        }
        out
    }

    /// `[e_i, v]` for a basis vector and an arbitrary vector.
    pub(crate) fn bracket_basis_left(&self, i: usize, v: &[Rational]) -> RatVector {
        let mut out = zero_vector(self.dim);
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            for (k, s) in self.basis_bracket(i, j) {
                out[*k] += vj * s;
            }
        }
        out
    }

    /// Matrix of `ad(x) = [x, -]`.
    pub fn ad(&self, x: &[Rational]) -> Result<RatMatrix> {
        self.check_len(x)?;
        let cols: Vec<RatVector> = (0..self.dim)
            .map(|j| self.bracket_unchecked(x, &unit_vector(self.dim, j)))
            .collect();
        RatMatrix::from_columns(&cols)
    }

    /// `[e_i, [e_j, e_k]]` as a dense vector.
    pub fn triple(&self, i: usize, j: usize, k: usize) -> RatVector {
        let inner = self.basis_bracket_dense(j, k);
        self.bracket_basis_left(i, &inner)
    }

    /// Dense table of all triple brackets `[e_i, [e_j, e_k]]`, indexed
    /// `(i * n + j) * n + k`.
    pub(crate) fn triple_table(&self) -> Vec<RatVector> {
        let n = self.dim;
        let mut out = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out.push(self.triple(i, j, k));
                }
            }
        }
        out
    }

    /// Triples `i < j < k` (1-based) on which the Jacobi identity fails.
    pub fn jacobi_check(&self) -> Vec<JacobiViolation> {
        let n = self.dim;
        let mut violations = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut r = self.triple(i, j, k);
                    let b = self.triple(j, k, i);
                    let c = self.triple(k, i, j);
                    for ((x, y), z) in r.iter_mut().zip(&b).zip(&c) {
                        *x += y + z;
                    }
                    if !is_zero_vector(&r) {
                        violations.push(JacobiViolation {
                            triple: [i + 1, j + 1, k + 1],
                            residual: r,
                        });
                    }
                }
            }
        }
        violations
    }

    pub fn is_lie_algebra(&self) -> bool {
        self.jacobi_check().is_empty()
    }

    /// Basis of `[A, B]` for subspaces given by bases.
    pub fn bracket_spaces(&self, a: &[RatVector], b: &[RatVector]) -> Vec<RatVector> {
        span_basis(
            self.dim,
            a.iter()
                .flat_map(|x| b.iter().map(move |y| (x, y)))
                .map(|(x, y)| self.bracket_unchecked(x, y)),
        )
    }

    fn whole_space(&self) -> Vec<RatVector> {
        (0..self.dim).map(|i| unit_vector(self.dim, i)).collect()
    }

    /// Bases of `g^0 = g, g^k = [g^{k-1}, g]` until the chain stabilizes;
    /// the last entry is the stable term (empty for nilpotent algebras).
    pub fn lower_central_series(&self) -> Vec<Vec<RatVector>> {
        let whole = self.whole_space();
        let mut series = vec![whole.clone()];
        loop {
            let last = series.last().expect("non-empty");
            let next = self.bracket_spaces(last, &whole);
            if next.len() == last.len() {
                break;
            }
            let done = next.is_empty();
            series.push(next);
            if done {
                break;
            }
        }
        series
    }

    pub fn lower_central_dims(&self) -> Vec<usize> {
        self.lower_central_series().iter().map(Vec::len).collect()
    }

    /// Bases of `g^(0) = g, g^(k) = [g^(k-1), g^(k-1)]` until stable.
    pub fn derived_series(&self) -> Vec<Vec<RatVector>> {
        let mut series = vec![self.whole_space()];
        loop {
            let last = series.last().expect("non-empty");
            let next = self.bracket_spaces(last, last);
            if next.len() == last.len() {
                break;
            }
            let done = next.is_empty();
            series.push(next);
            if done {
                break;
            }
        }
        series
    }

    /// The least `p` with `g^p = 0`, or `None` if the algebra is not nilpotent.
    pub fn nilindex(&self) -> Option<usize> {
        let series = self.lower_central_series();
        series.last().filter(|s| s.is_empty()).map(|_| series.len() - 1)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nilindex().is_some()
    }

    pub fn is_filiform(&self) -> bool {
        self.dim >= 2 && self.nilindex() == Some(self.dim - 1)
    }

    /// Basis of `{x : [x, e_i] = 0 for all i}`.
    pub fn center(&self) -> Vec<RatVector> {
        let n = self.dim;
        // Row (i, k) of the system: coefficient of e_k in [x, e_i].
        let mut ech = Echelon::new(n);
        for i in 0..n {
            for k in 0..n {
                let row: RatVector = (0..n).map(|l| self.structure_constant(l, i, k)).collect();
                ech.insert(row);
            }
        }
        ech.nullspace()
    }

    /// Complements `V_{k+1}` of `g^{k+1}` in `g^k`, so that
    /// `g = V_1 ⊕ ... ⊕ V_p`. Each complement extends the echelon basis of
    /// `g^{k+1}` with echelon basis vectors of `g^k`, lowest pivot first.
    pub fn filtration_complements(&self) -> Result<Flag> {
        let series = self.lower_central_series();
        if !series.last().is_some_and(Vec::is_empty) {
            return Err(Error::NotNilpotent);
        }
        let blocks = series
            .windows(2)
            .map(|w| {
                let mut ech = Echelon::new(self.dim);
                for v in &w[1] {
                    ech.insert(v.clone());
                }
                w[0].iter().filter(|v| ech.insert((*v).clone())).cloned().collect()
            })
            .collect();
        Ok(Flag { blocks })
    }

    /// The algebra with bracket `[x, y]' = f^{-1}[f x, f y]`.
    pub fn transport(&self, f: &RatMatrix) -> Result<Self> {
        if f.rows() != self.dim || f.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: f.rows(),
            });
        }
        let f_inv = f.inverse()?;
        let images: Vec<RatVector> = (0..self.dim).map(|i| f.column(i)).collect();
        let mut brackets = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let b = self.bracket_unchecked(&images[i], &images[j]);
                brackets.push(((i, j), f_inv.mul_vec(&b)?));
            }
        }
        Self::new(self.name.clone(), self.dim, brackets)
    }

    /// Checks the Lie triple system axioms for `[x, y, z] := [x, [y, z]]` on
    /// basis elements.
    pub fn lts_check(&self) -> Vec<LtsViolation> {
        let n = self.dim;
        let t = self.triple_table();
        let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
        let mut violations = Vec::new();

        for x in 0..n {
            for y in 0..n {
                for z in y..n {
                    let mut r = t[idx(x, y, z)].clone();
                    axpy(&mut r, &Rational::from_integer(1.into()), &t[idx(x, z, y)]);
                    if !is_zero_vector(&r) {
                        violations.push(LtsViolation::new(1, &[x, y, z]));
                    }
                }
            }
        }
        for x in 0..n {
            for y in x + 1..n {
                for z in y + 1..n {
                    let mut r = t[idx(x, y, z)].clone();
                    for (a, (b, c)) in r.iter_mut().zip(t[idx(y, z, x)].iter().zip(&t[idx(z, x, y)])) {
                        *a += b + c;
                    }
                    if !is_zero_vector(&r) {
                        violations.push(LtsViolation::new(2, &[x, y, z]));
                    }
                }
            }
        }
        // [[x,y,z],a,b] - [[x,a,b],y,z] = [[x,[y,a,b],z] + [x,y,[z,a,b]];
        // both sides are antisymmetric in (y,z) and in (a,b).
        let sparse_t: Vec<SparseVec> = t.iter().map(|v| sparse(v)).collect();
        let lin = |u: &SparseVec, j: usize, k: usize, out: &mut RatVector, sign: bool| {
            for (c, coeff) in u {
                let src = &t[idx(*c, j, k)];
                let coeff = if sign { -coeff.clone() } else { coeff.clone() };
                axpy(out, &coeff, src);
            }
        };
        for x in 0..n {
            for y in 0..n {
                for z in y + 1..n {
                    for a in 0..n {
                        for b in a + 1..n {
                            let mut r = zero_vector(n);
                            lin(&sparse_t[idx(x, y, z)], a, b, &mut r, false);
                            lin(&sparse_t[idx(x, a, b)], y, z, &mut r, true);
                            for (c, coeff) in &sparse_t[idx(y, a, b)] {
                                axpy(&mut r, &-coeff.clone(), &t[idx(x, *c, z)]);
                            }
                            for (c, coeff) in &sparse_t[idx(z, a, b)] {
                                axpy(&mut r, &-coeff.clone(), &t[idx(x, y, *c)]);
                            }
                            if !is_zero_vector(&r) {
                                violations.push(LtsViolation::new(3, &[x, y, z, a, b]));
                            }
                        }
                    }
                }
            }
        }
        violations
    }
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra({:?}, dim {}, {})", self.name, self.dim, self)
    }
}

impl fmt::Display for LieAlgebra {
    /// Bracket list such as `[e1,e2]=e3, [e1,e4]=e6+e7`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.brackets.is_empty() {
            return write!(f, "abelian");
        }
        let parts: Vec<String> = self
            .brackets
            .iter()
            .map(|(&(i, j), v)| format!("[e{},e{}]={}", i + 1, j + 1, render_vector(v)))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Renders a coordinate vector as `e6+e7`, `2*e3-1/2*e5`, or `0`.
pub fn render_vector(v: &[Rational]) -> String {
    let mut out = String::new();
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let negative = *c < Rational::zero();
        let abs = if negative { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push(if negative { '-' } else { '+' });
        }
        if abs != Rational::from_integer(1.into()) {
            out.push_str(&format_rational(&abs));
            out.push('*');
        }
        out.push_str(&format!("e{}", k + 1));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiViolation {
    /// 1-based indices `i < j < k`.
    pub triple: [usize; 3],
    #[serde(serialize_with = "crate::io::serialize_vector")]
    pub residual: RatVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LtsViolation {
    pub axiom: u8,
    /// 1-based basis indices of the failing instance.
    pub indices: Vec<usize>,
}

impl LtsViolation {
    fn new(axiom: u8, idx: &[usize]) -> Self {
        Self {
            axiom,
            indices: idx.iter().map(|i| i + 1).collect(),
        }
    }
}

/// A direct-sum decomposition `V_1 ⊕ ... ⊕ V_p` given by bases of the blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    pub blocks: Vec<Vec<RatVector>>,
}

impl Flag {
    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Concatenation of the block bases.
    pub fn adapted_basis(&self) -> Vec<RatVector> {
        self.blocks.iter().flatten().cloned().collect()
    }

    /// True when the blocks together form a basis of the `dim`-dimensional space.
    pub fn is_direct_sum(&self, dim: usize) -> bool {
        let basis = self.adapted_basis();
        basis.len() == dim && basis.iter().all(|v| v.len() == dim) && span_basis(dim, basis).len() == dim
    }
}

/// Builds algebras from bracket lists written with 1-based indices.
///
/// ```
/// use lie_prederiv::algebra::AlgebraBuilder;
///
/// let heis = AlgebraBuilder::new("heisenberg3", 3)
///     .bracket(1, 2, &[(3, 1)])
///     .build()
///     .unwrap();
/// assert_eq!(heis.nilindex(), Some(2));
/// ```
pub struct AlgebraBuilder {
    name: String,
    dim: usize,
    entries: Vec<((usize, usize), RatVector)>,
    error: Option<Error>,
}

impl AlgebraBuilder {
    pub fn new(name: impl Into<String>, dim: usize) -> Self {
        Self {
            name: name.into(),
            dim,
            entries: Vec::new(),
            error: None,
        }
    }

    /// `[e_i, e_j] = Σ c e_k` with integer coefficients.
    pub fn bracket(self, i: usize, j: usize, terms: &[(usize, i64)]) -> Self {
        let terms: Vec<(usize, Rational)> = terms
            .iter()
            .map(|&(k, c)| (k, Rational::from_integer(c.into())))
            .collect();
        self.bracket_rat(i, j, &terms)
    }

    pub fn bracket_rat(mut self, i: usize, j: usize, terms: &[(usize, Rational)]) -> Self {
        if self.error.is_some() {
            return self;
        }
        if i == 0 || j == 0 || terms.iter().any(|(k, _)| *k == 0 || *k > self.dim) {
            self.error = Some(Error::InvalidBracket {
                i,
                j,
                reason: "indices are 1-based and bounded by the dimension".into(),
            });
            return self;
        }
        let mut v = zero_vector(self.dim);
        for (k, c) in terms {
            v[k - 1] += c;
        }
        self.entries.push(((i - 1, j - 1), v));
        self
    }

    pub fn build(self) -> Result<LieAlgebra> {
        if let Some(e) = self.error {
            return Err(e);
        }
        LieAlgebra::new(self.name, self.dim, self.entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn heisenberg() -> LieAlgebra {
        AlgebraBuilder::new("h3", 3).bracket(1, 2, &[(3, 1)]).build().unwrap()
    }

    #[test]
    fn bracket_is_antisymmetric() {
        let g = heisenberg();
        let x = vec![int(1), int(2), int(0)];
        let y = vec![int(3), int(-1), int(5)];
        let xy = g.bracket(&x, &y).unwrap();
        let yx = g.bracket(&y, &x).unwrap();
        assert_eq!(xy, vec![int(0), int(0), int(-7)]);
        assert_eq!(yx, vec![int(0), int(0), int(7)]);
        assert!(is_zero_vector(&g.bracket(&x, &x).unwrap()));
        assert!(g.bracket(&x, &[int(1)]).is_err());
    }

    #[test]
    fn builder_rejects_bad_input() {
        assert!(AlgebraBuilder::new("x", 3).bracket(2, 1, &[(3, 1)]).build().is_err());
        assert!(AlgebraBuilder::new("x", 3).bracket(1, 2, &[(4, 1)]).build().is_err());
        assert!(AlgebraBuilder::new("x", 3)
            .bracket(1, 2, &[(3, 1)])
            .bracket(1, 2, &[(3, 1)])
            .build()
            .is_err());
        assert!(LieAlgebra::abelian(0).is_err());
    }

    #[test]
    fn heisenberg_structure() {
        let g = heisenberg();
        assert!(g.jacobi_check().is_empty());
        assert_eq!(g.lower_central_dims(), vec![3, 1, 0]);
        assert_eq!(g.nilindex(), Some(2));
        assert_eq!(g.center(), vec![unit_vector(3, 2)]);
        let flag = g.filtration_complements().unwrap();
        assert_eq!(flag.blocks, vec![vec![unit_vector(3, 0), unit_vector(3, 1)], vec![unit_vector(3, 2)]]);
        assert!(g.lts_check().is_empty());
    }

    #[test]
    fn abelian_structure() {
        let g = LieAlgebra::abelian(4).unwrap();
        assert_eq!(g.lower_central_dims(), vec![4, 0]);
        assert_eq!(g.nilindex(), Some(1));
        assert_eq!(g.filtration_complements().unwrap().dims(), vec![4]);
        assert_eq!(g.center().len(), 4);
        assert!(g.jacobi_check().is_empty());
        assert!(g.lts_check().is_empty());
        let line = LieAlgebra::abelian(1).unwrap();
        assert_eq!(line.nilindex(), Some(1));
        assert!(!line.is_filiform());
    }

    #[test]
    fn jacobi_violation_detected() {
        // [e1,e2]=e3, [e2,e3]=e1, [e1,e3]=e1 is not a Lie algebra.
        let g = AlgebraBuilder::new("bad", 3)
            .bracket(1, 2, &[(3, 1)])
            .bracket(2, 3, &[(1, 1)])
            .bracket(1, 3, &[(1, 1)])
            .build()
            .unwrap();
        let v = g.jacobi_check();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].triple, [1, 2, 3]);
    }

    #[test]
    fn non_nilpotent_has_no_flag() {
        let sl2 = AlgebraBuilder::new("sl2", 3)
            .bracket(1, 2, &[(3, 1)])
            .bracket(1, 3, &[(1, -2)])
            .bracket(2, 3, &[(2, 2)])
            .build()
            .unwrap();
        assert!(sl2.jacobi_check().is_empty());
        assert_eq!(sl2.nilindex(), None);
        assert!(matches!(sl2.filtration_complements(), Err(Error::NotNilpotent)));
        assert!(sl2.center().is_empty());
        assert_eq!(sl2.derived_series().len(), 1);
    }

    #[test]
    fn transport_identity_is_noop() {
        let g = heisenberg();
        let t = g.transport(&RatMatrix::identity(3)).unwrap();
        assert!(t.same_structure(&g));
        assert!(g.transport(&RatMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn render() {
        assert_eq!(render_vector(&[int(0), int(1), int(-2)]), "e2-2*e3");
        assert_eq!(render_vector(&[int(0)]), "0");
        assert_eq!(heisenberg().to_string(), "[e1,e2]=e3");
    }
}
