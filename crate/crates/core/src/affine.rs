//! Affine structures induced by non-singular prederivations.
//!
//! For a linear map `P` put `ω(x, y) = P[x, y] - [x, P y] + [y, P x]`, which
//! vanishes exactly when `P` is a derivation. For a non-singular
//! prederivation the map
//!
//! ```text
//! θ(x) = P^{-1} ∘ ad(x) ∘ P + ½ P^{-1} ∘ ω(x, ·)
//! ```
//!
//! defines a product `x·y = θ(x) y` with `x·y - y·x = [x, y]`. The product is
//! left-symmetric (an affine structure) iff `θ` is a representation. The ½
//! needs characteristic other than 2, which exact rationals provide.

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::LieAlgebra;
use crate::deriv::is_prederivation;
use crate::error::{Error, Result};
use crate::linalg::{axpy, is_zero_vector, unit_vector, zero_vector, RatMatrix, RatVector};
use crate::rational::{rat, Rational};

/// The full table `ω(e_i, e_j)` at index `i * n + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Omega {
    n: usize,
    table: Vec<RatVector>,
}

impl Omega {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn basis_value(&self, i: usize, j: usize) -> &[Rational] {
        &self.table[i * self.n + j]
    }

    /// `ω(e_i, v)`.
    pub fn left_basis(&self, i: usize, v: &[Rational]) -> RatVector {
        let mut out = zero_vector(self.n);
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                axpy(&mut out, c, self.basis_value(i, k));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|v| is_zero_vector(v))
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                self.basis_value(i, j)
                    .iter()
                    .zip(self.basis_value(j, i))
                    .all(|(a, b)| (a + b).is_zero())
            })
        })
    }

    /// The matrix of `y -> ω(e_i, y)`.
    pub fn matrix(&self, i: usize) -> RatMatrix {
        let cols: Vec<RatVector> = (0..self.n).map(|j| self.basis_value(i, j).to_vec()).collect();
        RatMatrix::from_columns(&cols).expect("square table")
    }
}

fn check_square(g: &LieAlgebra, p: &RatMatrix) -> Result<()> {
    if p.rows() != g.dim() || p.cols() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: if p.rows() != g.dim() { p.rows() } else { p.cols() },
        });
    }
    Ok(())
}

pub fn omega(g: &LieAlgebra, p: &RatMatrix) -> Result<Omega> {
    check_square(g, p)?;
    let n = g.dim();
    let images: Vec<RatVector> = (0..n).map(|i| p.column(i)).collect();
    let mut table = vec![zero_vector(n); n * n];
    for i in 0..n {
        for j in i + 1..n {
            let mut w = p.mul_vec(&g.basis_bracket_dense(i, j))?;
            let a = g.bracket_basis_left(i, &images[j]);
            let b = g.bracket_basis_left(j, &images[i]);
            for k in 0..n {
                w[k] = &w[k] - &a[k] + &b[k];
            }
            table[j * n + i] = w.iter().map(|x| -x).collect();
            table[i * n + j] = w;
        }
    }
    Ok(Omega { n, table })
}

/// Basis triples `(x, y, z)` (1-based) where `[x, ω(y, z)] + ω(x, [y, z])`
/// is nonzero. Empty for every prederivation.
pub fn lemma25_check(g: &LieAlgebra, p: &RatMatrix) -> Result<Vec<[usize; 3]>> {
    let w = omega(g, p)?;
    let n = g.dim();
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in y + 1..n {
                let mut v = g.bracket_basis_left(x, w.basis_value(y, z));
                let u = w.left_basis(x, &g.basis_bracket_dense(y, z));
                for k in 0..n {
                    v[k] += &u[k];
                }
                if !is_zero_vector(&v) {
                    out.push([x + 1, y + 1, z + 1]);
                }
            }
        }
    }
    Ok(out)
}

/// A bilinear product on the underlying space of an algebra, stored on all
/// ordered basis pairs: `e_i · e_j` at index `i * n + j`.
#[derive(Clone, Debug)]
pub struct BilinearProduct {
    algebra: LieAlgebra,
    table: Vec<RatVector>,
}

impl BilinearProduct {
    pub fn new(algebra: &LieAlgebra, table: Vec<RatVector>) -> Result<Self> {
        let n = algebra.dim();
        if table.len() != n * n || table.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: table.len(),
            });
        }
        Ok(Self {
            algebra: algebra.clone(),
            table,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[Rational] {
        &self.table[i * self.algebra.dim() + j]
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|v| is_zero_vector(v))
    }

    pub fn product(&self, x: &[Rational], y: &[Rational]) -> Result<RatVector> {
        let n = self.algebra.dim();
        if x.len() != n || y.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if x.len() != n { x.len() } else { y.len() },
            });
        }
        let mut out = zero_vector(n);
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if !b.is_zero() {
                    axpy(&mut out, &(a * b), self.basis_product(i, j));
                }
            }
        }
        Ok(out)
    }

    /// Matrix of left multiplication `L(x) = x · (-)`.
    pub fn left(&self, x: &[Rational]) -> Result<RatMatrix> {
        let n = self.algebra.dim();
        let cols = (0..n)
            .map(|j| self.product(x, &unit_vector(n, j)))
            .collect::<Result<Vec<_>>>()?;
        RatMatrix::from_columns(&cols)
    }

    /// Ordered basis pairs (1-based) where `x·y - y·x != [x, y]`.
    pub fn commutator_violations(&self) -> Vec<[usize; 2]> {
        let n = self.algebra.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let bracket = self.algebra.basis_bracket_dense(i, j);
                let ok = (0..n)
                    .all(|k| &self.basis_product(i, j)[k] - &self.basis_product(j, i)[k] == bracket[k]);
                if !ok {
                    out.push([i + 1, j + 1]);
                }
            }
        }
        out
    }
}

/// The product `x·y = θ(x) y` built from a non-singular prederivation.
pub fn theta_product(g: &LieAlgebra, p: &RatMatrix) -> Result<BilinearProduct> {
    check_square(g, p)?;
    let p_inv = p.inverse()?;
    if !is_prederivation(g, p) {
        return Err(Error::Hypothesis("P is not a prederivation".into()));
    }
    let n = g.dim();
    let w = omega(g, p)?;
    let half = rat(1, 2);
    let mut table = vec![zero_vector(n); n * n];
    for i in 0..n {
        let ad = g.ad(&unit_vector(n, i))?;
        let theta = p_inv.mul(&ad)?.mul(p)?.add(&p_inv.mul(&w.matrix(i))?.scale(&half))?;
        for j in 0..n {
            table[i * n + j] = theta.column(j);
        }
    }
    BilinearProduct::new(g, table)
}

#[derive(Clone, Debug, Serialize)]
pub struct AffineCheck {
    /// `θ([x, y]) = [θ(x), θ(y)]` on all basis pairs.
    pub representation: bool,
    /// `(x·y)·z - x·(y·z)` symmetric in `x, y` on all basis triples.
    pub left_symmetric: bool,
    pub commutator_identity: bool,
    /// Basis pairs (1-based) where the representation property fails.
    pub violations: Vec<[usize; 2]>,
}

impl AffineCheck {
    pub fn is_affine(&self) -> bool {
        self.representation
    }
}

/// Checks whether `θ(x) = L(x)` is a representation, and independently
/// whether the product is left-symmetric. Given the commutator identity the
/// two are equivalent; a disagreement is reported as an error.
pub fn is_affine(prod: &BilinearProduct) -> Result<AffineCheck> {
    let g = prod.algebra();
    let n = g.dim();
    let lefts = (0..n)
        .map(|i| prod.left(&unit_vector(n, i)))
        .collect::<Result<Vec<_>>>()?;
    let mut violations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = prod.left(&g.basis_bracket_dense(i, j))?;
            if lhs != lefts[i].commutator(&lefts[j])? {
                violations.push([i + 1, j + 1]);
            }
        }
    }
    let mut left_symmetric = true;
    'outer: for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let assoc = |a: usize, b: usize| -> Result<RatVector> {
                    let ab_c = prod.product(prod.basis_product(a, b), &unit_vector(n, k))?;
                    let a_bc = prod.product(&unit_vector(n, a), prod.basis_product(b, k))?;
                    Ok(ab_c.iter().zip(&a_bc).map(|(x, y)| x - y).collect())
                };
                if assoc(i, j)? != assoc(j, i)? {
                    left_symmetric = false;
                    break 'outer;
                }
            }
        }
    }
    let commutator_identity = prod.commutator_violations().is_empty();
    let representation = violations.is_empty();
    if commutator_identity && representation != left_symmetric {
        return Err(Error::Inconsistent(
            "representation and left-symmetry checks disagree".into(),
        ));
    }
    Ok(AffineCheck {
        representation,
        left_symmetric,
        commutator_identity,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraBuilder;
    use crate::rational::int;

    fn remark_algebra() -> LieAlgebra {
        AlgebraBuilder::new("r", 7)
            .bracket(1, 2, &[(3, 1)])
            .bracket(1, 3, &[(4, 1)])
            .bracket(1, 4, &[(5, 1)])
            .bracket(1, 5, &[(6, 1)])
            .bracket(1, 6, &[(7, 1)])
            .bracket(2, 3, &[(6, 1), (7, 1)])
            .bracket(2, 4, &[(7, 1)])
            .build()
            .unwrap()
    }

    #[test]
    fn omega_on_the_diagonal_prederivation() {
        let g = remark_algebra();
        let p = RatMatrix::from_diagonal(&[1, 3, 3, 5, 5, 7, 7].map(int));
        let w = omega(&g, &p).unwrap();
        let mut expected = zero_vector(7);
        expected[5] = int(1);
        expected[6] = int(1);
        assert_eq!(w.basis_value(1, 2), expected.as_slice());
        assert!(w.is_antisymmetric());
        assert!(lemma25_check(&g, &p).unwrap().is_empty());
        let prod = theta_product(&g, &p).unwrap();
        assert!(prod.commutator_violations().is_empty());
    }

    #[test]
    fn abelian_identity_gives_zero_product() {
        let g = LieAlgebra::abelian(3).unwrap();
        let prod = theta_product(&g, &RatMatrix::identity(3)).unwrap();
        assert!(prod.is_zero());
        assert!(is_affine(&prod).unwrap().is_affine());
        assert!(omega(&g, &RatMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])).unwrap().is_zero());
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = remark_algebra();
        assert!(matches!(theta_product(&g, &RatMatrix::zeros(7, 7)), Err(Error::Singular)));
        assert!(omega(&g, &RatMatrix::identity(3)).is_err());
        let not_pder = RatMatrix::from_diagonal(&[1, 2, 3, 4, 5, 6, 8].map(int));
        assert!(matches!(theta_product(&g, &not_pder), Err(Error::Hypothesis(_))));
    }
}
