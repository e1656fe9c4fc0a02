//! Derivation and prederivation algebras.
//!
//! A derivation satisfies `D[x,y] = [Dx,y] + [x,Dy]`; a prederivation
//! satisfies `P[x,[y,z]] = [Px,[y,z]] + [x,[Py,z]] + [x,[y,Pz]]`. Both
//! conditions are linear in the matrix entries, so `Der(g)` and `Pder(g)`
//! are nullspaces of explicit linear systems. Unknowns are the matrix entries
//! in column-major order (`D e_j = Σ_i D[i][j] e_i` is unknown `j*n + i`).

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{is_zero_vector, zero_vector, Echelon, RatMatrix, RatVector};
use crate::poly::GenericMatrix;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Derivation,
    Prederivation,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceKind::Derivation => write!(f, "Der"),
            SpaceKind::Prederivation => write!(f, "Pder"),
        }
    }
}

/// A solved `Der(g)` or `Pder(g)`: canonical basis plus the generic element
/// `Σ t_r basis_r`.
#[derive(Clone, Debug)]
pub struct SolutionSpace {
    algebra: LieAlgebra,
    kind: SpaceKind,
    basis: Vec<RatMatrix>,
    // Free unknown (column-major entry index) attached to each basis matrix.
    free: Vec<usize>,
    generic: GenericMatrix,
}

impl SolutionSpace {
    fn from_echelon(algebra: &LieAlgebra, kind: SpaceKind, ech: &Echelon) -> Self {
        let n = algebra.dim();
        let pivots = ech.pivots();
        let mut is_pivot = vec![false; n * n];
        for p in pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..n * n).filter(|&u| !is_pivot[u]).collect();
        let basis: Vec<RatMatrix> = ech
            .nullspace()
            .iter()
            .map(|v| RatMatrix::from_column_major(n, v))
            .collect();
        let generic = GenericMatrix::from_basis(n, &basis);
        Self {
            algebra: algebra.clone(),
            kind,
            basis,
            free,
            generic,
        }
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RatMatrix] {
        &self.basis
    }

    pub fn generic(&self) -> &GenericMatrix {
        &self.generic
    }

    /// `Σ point[r] * basis[r]`.
    pub fn element(&self, point: &[Rational]) -> Result<RatMatrix> {
        self.generic.eval(point)
    }

    /// Coordinates of `m` in the canonical basis, or `None` if `m` is not in
    /// the span. The canonical basis carries an identity pattern on the free
    /// unknowns, so the coordinates are read off directly and then checked.
    pub fn coordinates(&self, m: &RatMatrix) -> Option<RatVector> {
        let n = self.algebra.dim();
        if m.rows() != n || m.cols() != n {
            return None;
        }
        let entries = m.to_column_major();
        let coords: RatVector = self.free.iter().map(|&u| entries[u].clone()).collect();
        let rebuilt = self.generic.eval(&coords).ok()?;
        (rebuilt == *m).then_some(coords)
    }

    pub fn in_span(&self, m: &RatMatrix) -> bool {
        self.coordinates(m).is_some()
    }

    /// Span membership cross-checked against the defining identity.
    pub fn membership(&self, m: &RatMatrix) -> Result<bool> {
        let n = self.algebra.dim();
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.rows(),
            });
        }
        let by_span = self.in_span(m);
        let by_identity = match self.kind {
            SpaceKind::Derivation => is_derivation(&self.algebra, m),
            SpaceKind::Prederivation => is_prederivation(&self.algebra, m),
        };
        if by_span != by_identity {
            return Err(Error::Inconsistent(format!(
                "{} membership: span says {by_span}, identity says {by_identity}",
                self.kind
            )));
        }
        Ok(by_span)
    }

    /// True iff the commutator of every pair of basis matrices stays in the
    /// span, i.e. the space is a Lie subalgebra of gl(g).
    pub fn closure_check(&self) -> bool {
        self.basis.iter().enumerate().all(|(r, a)| {
            self.basis[r + 1..]
                .iter()
                .all(|b| a.commutator(b).map(|c| self.in_span(&c)).unwrap_or(false))
        })
    }

    /// True iff every basis matrix lies in the span of `other`.
    pub fn is_subspace_of(&self, other: &SolutionSpace) -> bool {
        self.basis.iter().all(|b| other.in_span(b))
    }
}

fn derivation_rows(g: &LieAlgebra, mut sink: impl FnMut(RatVector)) {
    let n = g.dim();
    for i in 0..n {
        for j in i + 1..n {
            let w = g.basis_bracket_dense(i, j);
            let mut rows = vec![zero_vector(n * n); n];
            for (k, row) in rows.iter_mut().enumerate() {
                for (l, wl) in w.iter().enumerate() {
                    if !wl.is_zero() {
                        row[l * n + k] += wl;
                    }
                }
            }
            for m in 0..n {
                for (k, c) in g.basis_bracket(m, j) {
                    rows[*k][i * n + m] -= c;
                }
                for (k, c) in g.basis_bracket(i, m) {
                    rows[*k][j * n + m] -= c;
                }
            }
            rows.into_iter().filter(|r| !is_zero_vector(r)).for_each(&mut sink);
        }
    }
}

fn prederivation_rows(g: &LieAlgebra, mut sink: impl FnMut(RatVector)) {
    let n = g.dim();
    let t = g.triple_table();
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    for i in 0..n {
        for j in 0..n {
            for k in j + 1..n {
                let mut rows = vec![zero_vector(n * n); n];
                // P([e_i,[e_j,e_k]])
                for (s, ts) in t[idx(i, j, k)].iter().enumerate() {
                    if !ts.is_zero() {
                        for (r, row) in rows.iter_mut().enumerate() {
                            row[s * n + r] += ts;
                        }
                    }
                }
                for m in 0..n {
                    // [P e_i, [e_j,e_k]], [e_i,[P e_j,e_k]], [e_i,[e_j,P e_k]]
                    let parts = [
                        (i * n + m, &t[idx(m, j, k)]),
                        (j * n + m, &t[idx(i, m, k)]),
                        (k * n + m, &t[idx(i, j, m)]),
                    ];
                    for (unknown, vec) in parts {
                        for (r, c) in vec.iter().enumerate() {
                            if !c.is_zero() {
                                rows[r][unknown] -= c;
                            }
                        }
                    }
                }
                rows.into_iter().filter(|r| !is_zero_vector(r)).for_each(&mut sink);
            }
        }
    }
}

/// Basis of `Der(g)`: all `D` with `D[e_i,e_j] = [De_i,e_j] + [e_i,De_j]`
/// for `i < j`.
pub fn derivation_space(g: &LieAlgebra) -> SolutionSpace {
    let mut ech = Echelon::new(g.dim() * g.dim());
    derivation_rows(g, |row| {
        ech.insert(row);
    });
    SolutionSpace::from_echelon(g, SpaceKind::Derivation, &ech)
}

/// Basis of `Pder(g)`. The identity is imposed for all `i` and `j < k` only;
/// both sides are antisymmetric in `(y, z)`.
pub fn prederivation_space(g: &LieAlgebra) -> SolutionSpace {
    let mut ech = Echelon::new(g.dim() * g.dim());
    prederivation_rows(g, |row| {
        ech.insert(row);
    });
    SolutionSpace::from_echelon(g, SpaceKind::Prederivation, &ech)
}

pub fn solution_space(g: &LieAlgebra, kind: SpaceKind) -> SolutionSpace {
    match kind {
        SpaceKind::Derivation => derivation_space(g),
        SpaceKind::Prederivation => prederivation_space(g),
    }
}

fn image(m: &RatMatrix, i: usize) -> RatVector {
    m.column(i)
}

/// Checks `D[e_i,e_j] = [De_i,e_j] + [e_i,De_j]` directly.
pub fn is_derivation(g: &LieAlgebra, d: &RatMatrix) -> bool {
    let n = g.dim();
    if d.rows() != n || d.cols() != n {
        return false;
    }
    let images: Vec<RatVector> = (0..n).map(|i| image(d, i)).collect();
    let units: Vec<RatVector> = (0..n).map(|i| crate::linalg::unit_vector(n, i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = d.mul_vec(&g.basis_bracket_dense(i, j)).expect("square");
            let rhs = add(
                &g.bracket_unchecked(&images[i], &units[j]),
                &g.bracket_unchecked(&units[i], &images[j]),
            );
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

fn add(a: &[Rational], b: &[Rational]) -> RatVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Basis triples `(i, j, k)` (1-based) where the prederivation identity
/// fails, checked on all `n^3` triples.
pub fn prederivation_violations(g: &LieAlgebra, p: &RatMatrix) -> Vec<[usize; 3]> {
    let n = g.dim();
    assert_eq!(p.rows(), n, "size mismatch");
    let images: Vec<RatVector> = (0..n).map(|i| image(p, i)).collect();
    let units: Vec<RatVector> = (0..n).map(|i| crate::linalg::unit_vector(n, i)).collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let inner = g.basis_bracket_dense(j, k);
                let lhs = p.mul_vec(&g.bracket_unchecked(&units[i], &inner)).expect("square");
                let mut rhs = g.bracket_unchecked(&images[i], &inner);
                rhs = add(&rhs, &g.bracket_unchecked(&units[i], &g.bracket_unchecked(&images[j], &units[k])));
                rhs = add(&rhs, &g.bracket_unchecked(&units[i], &g.bracket_unchecked(&units[j], &images[k])));
                if lhs != rhs {
                    out.push([i + 1, j + 1, k + 1]);
                }
            }
        }
    }
    out
}

pub fn is_prederivation(g: &LieAlgebra, p: &RatMatrix) -> bool {
    p.rows() == g.dim() && p.cols() == g.dim() && prederivation_violations(g, p).is_empty()
}

/// The prederivation that sends one degree-two basis vector `[a, b]` (with
/// `a, b` in the first filtration block) to a central element and kills the
/// rest of an adapted basis. It is never a derivation.
pub fn central_prederivation(g: &LieAlgebra) -> Result<RatMatrix> {
    let n = g.dim();
    if n < 3 {
        return Err(Error::Hypothesis("dimension must be at least 3".into()));
    }
    let series = g.lower_central_series();
    let p = g.nilindex().ok_or(Error::NotNilpotent)?;
    if p < 2 {
        return Err(Error::Hypothesis("nilindex must exceed 1".into()));
    }
    let flag = g.filtration_complements()?;
    let v1 = &flag.blocks[0];
    let g2: &[RatVector] = series.get(2).map_or(&[], Vec::as_slice);
    let mut ech2 = Echelon::new(n);
    for v in g2 {
        ech2.insert(v.clone());
    }
    let w = v1
        .iter()
        .enumerate()
        .flat_map(|(a, x)| v1[a + 1..].iter().map(move |y| (x, y)))
        .map(|(x, y)| g.bracket_unchecked(x, y))
        .find(|w| !ech2.contains(w))
        .ok_or_else(|| Error::Inconsistent("no bracket of degree-one vectors escapes g^2".into()))?;

    let mut columns: Vec<RatVector> = v1.clone();
    let w_index = columns.len();
    columns.push(w.clone());
    let mut ech = Echelon::new(n);
    for v in g2.iter().chain(std::iter::once(&w)) {
        ech.insert(v.clone());
    }
    for v in &flag.blocks[1] {
        if ech.insert(v.clone()) {
            columns.push(v.clone());
        }
    }
    columns.extend(g2.iter().cloned());
    let basis = RatMatrix::from_columns(&columns)?;
    let dual = basis.inverse()?;
    let z = g
        .center()
        .into_iter()
        .next()
        .ok_or_else(|| Error::Inconsistent("nilpotent algebra with trivial center".into()))?;
    let mut out = RatMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            out[(r, c)] = &z[r] * &dual[(w_index, c)];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraBuilder;
    use crate::rational::int;

    fn heisenberg() -> LieAlgebra {
        AlgebraBuilder::new("h3", 3).bracket(1, 2, &[(3, 1)]).build().unwrap()
    }

    #[test]
    fn abelian_spaces_are_everything() {
        for n in 1..=3 {
            let g = LieAlgebra::abelian(n).unwrap();
            assert_eq!(derivation_space(&g).dim(), n * n);
            assert_eq!(prederivation_space(&g).dim(), n * n);
        }
    }

    #[test]
    fn heisenberg_spaces() {
        let g = heisenberg();
        // Der(h3): 6-dimensional (gl2 action on V1 plus maps into the center).
        assert_eq!(derivation_space(&g).dim(), 6);
        assert_eq!(prederivation_space(&g).dim(), 9);
    }

    #[test]
    fn membership_zero_and_identity() {
        let g = heisenberg();
        let der = derivation_space(&g);
        assert!(der.membership(&RatMatrix::zeros(3, 3)).unwrap());
        assert!(!der.membership(&RatMatrix::identity(3)).unwrap());
        let d = RatMatrix::from_diagonal(&[int(1), int(1), int(2)]);
        assert!(der.membership(&d).unwrap());
        assert!(der.membership(&RatMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn central_prederivation_on_heisenberg() {
        let g = heisenberg();
        let p = central_prederivation(&g).unwrap();
        let mut expected = RatMatrix::zeros(3, 3);
        expected[(2, 2)] = int(1);
        assert_eq!(p, expected);
        assert!(prederivation_space(&g).membership(&p).unwrap());
        assert!(!derivation_space(&g).membership(&p).unwrap());
        assert!(central_prederivation(&LieAlgebra::abelian(3).unwrap()).is_err());
    }
}
