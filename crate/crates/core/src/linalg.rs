//! Dense exact linear algebra over the rationals.
//!
//! Everything here is exact: elimination pivots on the first nonzero entry in
//! column order, determinants use fraction-free (Bareiss) elimination over the
//! integers after clearing row denominators, and nullspace bases come out in
//! canonical reduced-echelon form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

pub type RatVector = Vec<Rational>;

pub fn zero_vector(len: usize) -> RatVector {
    vec![Rational::zero(); len]
}

/// The standard basis vector `e_index` (0-based) of length `len`.
pub fn unit_vector(len: usize, index: usize) -> RatVector {
    let mut v = zero_vector(len);
    v[index] = Rational::one();
    v
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `acc += coeff * v`
pub fn axpy(acc: &mut [Rational], coeff: &Rational, v: &[Rational]) {
    if coeff.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += coeff * x;
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_diagonal(diag: &[Rational]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    /// Builds a matrix from rows; every row must have the same length.
    pub fn from_rows(rows: Vec<RatVector>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self {
            rows: nrows,
            cols,
            data,
        })
    }

    /// Builds a square matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[RatVector]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, cols);
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: c.len(),
                });
            }
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    /// Convenience constructor from small integers, row-major.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        Self::from_rows(rows).expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RatVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<RatVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Entries in column-major order (the unknown ordering of the
    /// derivation systems).
    pub fn to_column_major(&self) -> RatVector {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self[(i, j)].clone());
            }
        }
        out
    }

    pub fn from_column_major(n: usize, entries: &[Rational]) -> Self {
        assert_eq!(entries.len(), n * n);
        let mut m = Self::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                m[(i, j)] = entries[j * n + i].clone();
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<RatVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { data, ..*self })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self { data, ..*self })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            data: self.data.iter().map(|x| x * c).collect(),
            ..*self
        }
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// True when every entry on or above the diagonal vanishes.
    pub fn is_strictly_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i..self.cols).all(|j| self[(i, j)].is_zero()))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.cols);
        for i in 0..self.rows {
            ech.insert(self.row(i).to_vec());
        }
        ech.rank()
    }

    /// Canonical basis of `{x : Ax = 0}`: one vector per free column, carrying
    /// a 1 in that column and 0 in the other free columns.
    pub fn nullspace(&self) -> Vec<RatVector> {
        let mut ech = Echelon::new(self.cols);
        for i in 0..self.rows {
            ech.insert(self.row(i).to_vec());
        }
        ech.nullspace()
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut ech = Echelon::new(self.cols);
        for i in 0..self.rows {
            ech.insert(self.row(i).to_vec());
        }
        let pivots = ech.pivots();
        let mut rows = ech.into_rows();
        rows.resize(self.rows, zero_vector(self.cols));
        let m = RatMatrix::from_rows(rows).unwrap_or_else(|_| RatMatrix::zeros(self.rows, self.cols));
        (m, pivots)
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> Result<Rational> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok(Rational::one());
        }
        // Clear denominators row by row, run Bareiss over Z, then rescale.
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let lcm = self
                .row(i)
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            a.push(
                self.row(i)
                    .iter()
                    .map(|x| x.numer() * (&lcm / x.denom()))
                    .collect(),
            );
            scale *= lcm;
        }
        let det = bareiss_integer(&mut a);
        Ok(Rational::new(det, scale))
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.require_square()?;
        let mut a = self.to_rows();
        let mut inv = RatMatrix::identity(n).to_rows();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::Singular)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].recip();
            for x in a[col].iter_mut() {
                *x *= &p;
            }
            for x in inv[col].iter_mut() {
                *x *= &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                let (pa, pi) = (a[col].clone(), inv[col].clone());
                for (x, y) in a[r].iter_mut().zip(&pa) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
                for (x, y) in inv[r].iter_mut().zip(&pi) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        RatMatrix::from_rows(inv)
    }

    /// Coefficients of `det(λI - A)`, lowest degree first, leading 1 included.
    pub fn charpoly(&self) -> Result<Vec<Rational>> {
        let n = self.require_square()?;
        // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k.
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let mut m = RatMatrix::zeros(n, n);
        for k in 1..=n {
            let mut next = self.mul(&m)?;
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            let am = self.mul(&next)?;
            coeffs[n - k] = -am.trace() / Rational::from_integer(BigInt::from(k));
            m = next;
        }
        Ok(coeffs)
    }

    /// True when some power of the matrix vanishes.
    pub fn is_nilpotent(&self) -> Result<bool> {
        let cp = self.charpoly()?;
        Ok(cp[..cp.len() - 1].iter().all(Zero::is_zero))
    }
}

fn bareiss_integer(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in cells {
            let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[ {} ]", padded.join(" "))?;
        }
        Ok(())
    }
}

struct EchelonRow {
    pivot: usize,
    entries: RatVector,
    support: Vec<usize>,
}

impl EchelonRow {
    fn new(entries: RatVector) -> Option<Self> {
        let support: Vec<usize> = (0..entries.len()).filter(|&k| !entries[k].is_zero()).collect();
        let pivot = *support.first()?;
        Some(Self {
            pivot,
            entries,
            support,
        })
    }
}

/// Incrementally maintained reduced row echelon form.
///
/// Rows can be fed one at a time (for instance straight from an equation
/// generator), so large overdetermined systems never need to be materialized
/// as a dense matrix. The stored rows are kept fully reduced after every
/// insertion.
pub struct Echelon {
    cols: usize,
    rows: Vec<EchelonRow>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Self {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.iter().map(|r| r.pivot).collect();
        p.sort_unstable();
        p
    }

    /// Reduces `v` against the stored rows; the result is zero iff `v` lies
    /// in the row space.
    pub fn reduce(&self, mut v: RatVector) -> RatVector {
        assert_eq!(v.len(), self.cols, "row length mismatch");
        for row in &self.rows {
            if v[row.pivot].is_zero() {
                continue;
            }
            let c = v[row.pivot].clone();
            for &k in &row.support {
                v[k] -= &c * &row.entries[k];
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        is_zero_vector(&self.reduce(v.to_vec()))
    }

    /// Inserts a row; returns true if it increased the rank.
    pub fn insert(&mut self, v: RatVector) -> bool {
        let reduced = self.reduce(v);
        let Some(mut new) = EchelonRow::new(reduced) else {
            return false;
        };
        let inv = new.entries[new.pivot].recip();
        for &k in &new.support {
            new.entries[k] *= &inv;
        }
        for row in &mut self.rows {
            if row.entries[new.pivot].is_zero() {
                continue;
            }
            let c = row.entries[new.pivot].clone();
            for &k in &new.support {
                row.entries[k] -= &c * &new.entries[k];
            }
            row.support = (0..self.cols).filter(|&k| !row.entries[k].is_zero()).collect();
        }
        self.rows.push(new);
        true
    }

    /// Rows sorted by pivot column.
    pub fn into_rows(mut self) -> Vec<RatVector> {
        self.rows.sort_by_key(|r| r.pivot);
        self.rows.into_iter().map(|r| r.entries).collect()
    }

    pub fn basis(&self) -> Vec<RatVector> {
        let mut rows: Vec<&EchelonRow> = self.rows.iter().collect();
        rows.sort_by_key(|r| r.pivot);
        rows.into_iter().map(|r| r.entries.clone()).collect()
    }

    /// Canonical basis of the solution space of the stored homogeneous rows.
    pub fn nullspace(&self) -> Vec<RatVector> {
        let pivots = self.pivots();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = zero_vector(self.cols);
                x[f] = Rational::one();
                for row in &self.rows {
                    if !row.entries[f].is_zero() {
                        x[row.pivot] = -row.entries[f].clone();
                    }
                }
                x
            })
            .collect()
    }
}

/// Canonical (reduced echelon) basis of the span of `vectors`.
pub fn span_basis(dim: usize, vectors: impl IntoIterator<Item = RatVector>) -> Vec<RatVector> {
    let mut ech = Echelon::new(dim);
    for v in vectors {
        ech.insert(v);
        if ech.rank() == dim {
            break;
        }
    }
    ech.into_rows()
}

/// Basis of the annihilator `{f : f(v) = 0 for v in span}` as row vectors.
pub fn annihilator(dim: usize, span: &[RatVector]) -> Vec<RatVector> {
    let mut ech = Echelon::new(dim);
    for v in span {
        ech.insert(v.clone());
    }
    ech.nullspace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn nullspace_examples() {
        assert_eq!(RatMatrix::zeros(3, 3).nullspace().len(), 3);
        assert_eq!(
            RatMatrix::zeros(3, 3).nullspace(),
            vec![unit_vector(3, 0), unit_vector(3, 1), unit_vector(3, 2)]
        );
        assert!(RatMatrix::identity(4).nullspace().is_empty());
        let a = RatMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(a.nullspace(), vec![vec![int(-2), int(1)]]);
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn det_of_diagonal() {
        let d = RatMatrix::from_diagonal(&[1, 3, 3, 5, 5, 7, 7].map(int));
        assert_eq!(d.det().unwrap(), int(11025));
    }

    #[test]
    fn det_with_fractions_and_swaps() {
        let a = RatMatrix::from_rows(vec![
            vec![int(0), rat(1, 2), int(1)],
            vec![rat(2, 3), int(0), int(1)],
            vec![int(1), int(1), int(0)],
        ])
        .unwrap();
        // cofactor by hand: 0*(0-1) - 1/2*(0-1) + 1*(2/3-0) = 1/2 + 2/3
        assert_eq!(a.det().unwrap(), rat(7, 6));
    }

    #[test]
    fn inverse_and_singular() {
        let a = RatMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), RatMatrix::identity(2));
        let s = RatMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.inverse(), Err(Error::Singular));
        assert!(RatMatrix::zeros(2, 3).det().is_err());
    }

    #[test]
    fn charpoly_strictly_lower() {
        let a = RatMatrix::from_i64(&[&[0, 0, 0], &[4, 0, 0], &[-1, 7, 0]]);
        assert_eq!(a.charpoly().unwrap(), vec![int(0), int(0), int(0), int(1)]);
        assert!(a.is_nilpotent().unwrap());
    }

    #[test]
    fn charpoly_two_by_two() {
        // λ² - 5λ - 2
        let a = RatMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.charpoly().unwrap(), vec![int(-2), int(-5), int(1)]);
    }

    #[test]
    fn rref_pivots() {
        let a = RatMatrix::from_i64(&[&[0, 2, 4], &[0, 1, 2], &[1, 0, 1]]);
        let (r, piv) = a.rref();
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r.row(0), &[int(1), int(0), int(1)]);
        assert_eq!(r.row(1), &[int(0), int(1), int(2)]);
        assert!(is_zero_vector(r.row(2)));
    }

    #[test]
    fn column_major_round_trip() {
        let a = RatMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let cm = a.to_column_major();
        assert_eq!(cm, vec![int(1), int(3), int(2), int(4)]);
        assert_eq!(RatMatrix::from_column_major(2, &cm), a);
    }
}
