//! Sparse multivariate polynomials over the rationals and matrices of them.
//!
//! A [`GenericMatrix`] is a square matrix whose entries are affine-linear
//! polynomials in the free parameters `t1, ..., tm` of a solution space. Its
//! determinant and characteristic polynomial, computed symbolically, decide
//! questions about *every* member of the space at once.
//!
//! Monomials are ordered graded-lexicographically with `t1 > t2 > ...`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::rational::{format_rational, Rational};

/// A power product `t_{v1}^{e1} * t_{v2}^{e2} * ...`, variables 0-based.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    degree: u32,
    powers: Vec<(u32, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(index: usize) -> Self {
        Self {
            degree: 1,
            powers: vec![(index as u32, 1)],
        }
    }

    /// Builds from a dense exponent vector.
    pub fn from_exponents(exps: &[u32]) -> Self {
        let powers: Vec<(u32, u32)> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| (v as u32, e))
            .collect();
        Self {
            degree: powers.iter().map(|p| p.1).sum(),
            powers,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.powers
            .iter()
            .find(|p| p.0 as usize == var)
            .map_or(0, |p| p.1)
    }

    fn max_var(&self) -> Option<usize> {
        self.powers.last().map(|p| p.0 as usize)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut powers = Vec::with_capacity(self.powers.len() + other.powers.len());
        let (mut a, mut b) = (self.powers.iter().peekable(), other.powers.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        powers.push((va, ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        powers.push((vb, eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        powers.push((va, ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(&&p), None) => {
                    powers.push(p);
                    a.next();
                }
                (None, Some(&&p)) => {
                    powers.push(p);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Self {
            degree: self.degree + other.degree,
            powers,
        }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let mut powers = Vec::with_capacity(self.powers.len());
        let mut b = other.powers.iter().peekable();
        for &(v, e) in &self.powers {
            let mut e = e;
            if let Some(&&(vb, eb)) = b.peek() {
                if vb < v {
                    return None;
                }
                if vb == v {
                    if eb > e {
                        return None;
                    }
                    e -= eb;
                    b.next();
                }
            }
            if e > 0 {
                powers.push((v, e));
            }
        }
        if b.next().is_some() {
            return None;
        }
        Some(Self {
            degree: self.degree - other.degree,
            powers,
        })
    }

    fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::one();
        for &(v, e) in &self.powers {
            for _ in 0..e {
                acc *= &point[v as usize];
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            let (mut a, mut b) = (self.powers.iter(), other.powers.iter());
            loop {
                match (a.next(), b.next()) {
                    (Some(&(va, ea)), Some(&(vb, eb))) => {
                        if va != vb {
                            // The monomial mentioning the earlier variable is larger.
                            return vb.cmp(&va);
                        }
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                    }
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (None, None) => return Ordering::Equal,
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `nvars` variables with exact rational coefficients.
/// No zero coefficient is ever stored; the zero polynomial has no terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(), c);
        p
    }

    /// The variable `t_{index+1}`.
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index out of range");
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(index), Rational::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert!(m.max_var().is_none_or(|v| v < nvars), "monomial uses unknown variable");
            p.add_term(m, c);
        }
        p
    }

    /// Affine-linear form `constant + Σ coeffs[r] t_r`.
    pub fn linear(constant: Rational, coeffs: &[Rational]) -> Self {
        let mut p = Self::constant(coeffs.len(), constant);
        for (r, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(r), c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Leading term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                let m = ma.mul(mb);
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += c,
                }
            }
        }
        Ok(Self {
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Substitutes every variable and returns the value.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::VariableMismatch {
                left: self.nvars,
                right: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            acc += c * m.eval(point);
        }
        Ok(acc)
    }

    /// Substitutes a subset of variables, keeping the variable count.
    pub fn substitute(&self, values: &[Option<Rational>]) -> Self {
        assert_eq!(values.len(), self.nvars);
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut kept = Vec::new();
            for &(v, e) in &m.powers {
                match &values[v as usize] {
                    Some(x) => {
                        for _ in 0..e {
                            coeff *= x;
                        }
                    }
                    None => kept.push((v, e)),
                }
            }
            out.add_term(
                Monomial {
                    degree: kept.iter().map(|p| p.1).sum(),
                    powers: kept,
                },
                coeff,
            );
        }
        out
    }

    /// Variables that occur with a nonzero coefficient.
    pub fn variables(&self) -> Vec<usize> {
        let mut vars: Vec<usize> = self
            .terms
            .keys()
            .flat_map(|m| m.powers.iter().map(|p| p.0 as usize))
            .collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    /// Degree of the polynomial in the single variable `var`.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    /// Writes the polynomial as `a * t_var + b` when it is at most linear in
    /// `var`; `a` and `b` do not involve `var`.
    pub fn linear_in(&self, var: usize) -> Option<(Self, Self)> {
        if self.degree_in(var) > 1 {
            return None;
        }
        let mut a = Self::zero(self.nvars);
        let mut b = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.exponent(var) == 1 {
                let rest = m.div(&Monomial::var(var)).expect("divisible");
                a.add_term(rest, c.clone());
            } else {
                b.add_term(m.clone(), c.clone());
            }
        }
        Some((a, b))
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// Exact quotient `self / divisor`; fails if the division leaves a
    /// remainder.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        self.check_vars(divisor)?;
        let (lm, lc) = divisor.leading_term().ok_or(Error::InexactDivision)?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading_term() {
            let m = rm.div(&lm).ok_or(Error::InexactDivision)?;
            let c = rc / &lc;
            let term = Self::from_terms(self.nvars, [(m, c)]);
            rem = rem.checked_sub(&term.checked_mul(divisor)?)?;
            quot = quot.checked_add(&term)?;
        }
        Ok(quot)
    }
}

impl std::ops::Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs).expect("variable count mismatch")
    }
}

impl std::ops::Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_sub(rhs).expect("variable count mismatch")
    }
}

impl std::ops::Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("variable count mismatch")
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for MultiPoly {
    /// Graded-lex descending, e.g. `5/4*t1^2*t3 - t2 + 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = *c < Rational::zero();
            let abs = if negative { -c.clone() } else { c.clone() };
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m
                .powers
                .iter()
                .map(|&(v, e)| match e {
                    1 => format!("t{}", v + 1),
                    _ => format!("t{}^{}", v + 1, e),
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.nvars, self)
    }
}

/// Memo-table budget for the Laplace expansion before switching to Bareiss.
const LAPLACE_MEMO_BUDGET: usize = 400_000;

/// Which algorithm produced a symbolic determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetMethod {
    Laplace,
    Bareiss,
}

impl fmt::Display for DetMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DetMethod::Laplace => write!(f, "memoized Laplace expansion"),
            DetMethod::Bareiss => write!(f, "fraction-free Bareiss elimination"),
        }
    }
}

/// Square matrix of polynomials in a shared set of parameters.
#[derive(Clone, PartialEq, Eq)]
pub struct GenericMatrix {
    n: usize,
    nvars: usize,
    entries: Vec<MultiPoly>,
}

impl GenericMatrix {
    pub fn zeros(n: usize, nvars: usize) -> Self {
        Self {
            n,
            nvars,
            entries: vec![MultiPoly::zero(nvars); n * n],
        }
    }

    /// `Σ_r t_r * basis[r]`, one parameter per basis matrix.
    pub fn from_basis(n: usize, basis: &[RatMatrix]) -> Self {
        let nvars = basis.len();
        let mut g = Self::zeros(n, nvars);
        for i in 0..n {
            for j in 0..n {
                let coeffs: Vec<Rational> = basis.iter().map(|b| b[(i, j)].clone()).collect();
                g.entries[i * n + j] = MultiPoly::linear(Rational::zero(), &coeffs);
            }
        }
        g
    }

    pub fn from_entries(n: usize, entries: Vec<MultiPoly>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        let nvars = entries.first().map_or(0, MultiPoly::nvars);
        if let Some(bad) = entries.iter().find(|p| p.nvars() != nvars) {
            return Err(Error::VariableMismatch {
                left: nvars,
                right: bad.nvars(),
            });
        }
        Ok(Self { n, nvars, entries })
    }

    /// `diag(t1, ..., tn)`.
    pub fn generic_diagonal(n: usize) -> Self {
        let mut g = Self::zeros(n, n);
        for i in 0..n {
            g.entries[i * n + i] = MultiPoly::var(n, i);
        }
        g
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn entry(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.n + j]
    }

    pub fn eval(&self, point: &[Rational]) -> Result<RatMatrix> {
        let mut m = RatMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(i, j)] = self.entry(i, j).eval(point)?;
            }
        }
        Ok(m)
    }

    pub fn is_strictly_lower_triangular(&self) -> bool {
        (0..self.n).all(|i| (i..self.n).all(|j| self.entry(i, j).is_zero()))
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n, self.nvars);
        for i in 0..n {
            for k in 0..n {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.entry(k, j);
                    if !b.is_zero() {
                        let prod = a * b;
                        out.entries[i * n + j] = &out.entries[i * n + j] + &prod;
                    }
                }
            }
        }
        out
    }

    /// Symbolic determinant; memoized Laplace expansion with a Bareiss
    /// fallback for matrices whose minor table grows too large.
    pub fn det(&self) -> MultiPoly {
        self.det_with_method().0
    }

    pub fn det_with_method(&self) -> (MultiPoly, DetMethod) {
        let blocks = self.diagonal_blocks();
        if blocks.len() > 1 {
            let mut det = MultiPoly::constant(self.nvars, Rational::one());
            let mut method = DetMethod::Laplace;
            for block in &blocks {
                let (d, m) = self.submatrix(block).det_with_method();
                if m == DetMethod::Bareiss {
                    method = m;
                }
                det = &det * &d;
                if det.is_zero() {
                    break;
                }
            }
            return (det, method);
        }
        if self.n <= 64 {
            if let Some(d) = self.det_laplace(LAPLACE_MEMO_BUDGET) {
                return (d, DetMethod::Laplace);
            }
        }
        (self.det_bareiss(), DetMethod::Bareiss)
    }

    /// Laplace expansion along rows, sparsest rows first, memoized on the
    /// set of consumed columns. Returns `None` if the memo table exceeds
    /// `budget` entries.
    pub fn det_laplace(&self, budget: usize) -> Option<MultiPoly> {
        let n = self.n;
        assert!(n <= 64, "Laplace expansion supports at most 64 columns");
        if n == 0 {
            return Some(MultiPoly::constant(self.nvars, Rational::one()));
        }
        let support: Vec<u64> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| !self.entry(i, j).is_zero())
                    .fold(0u64, |acc, j| acc | (1 << j))
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (support[i].count_ones(), i));
        let sign = permutation_sign(&order);
        let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut expander = Laplace {
            matrix: self,
            order: &order,
            support: &support,
            memo: HashMap::new(),
            budget,
        };
        let det = expander.minor(0, full)?;
        Some(if sign < 0 { -&det } else { det })
    }

    /// Fraction-free Bareiss elimination over the polynomial ring.
    pub fn det_bareiss(&self) -> MultiPoly {
        let n = self.n;
        let one = MultiPoly::constant(self.nvars, Rational::one());
        if n == 0 {
            return one;
        }
        let mut a: Vec<Vec<MultiPoly>> = (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j).clone()).collect())
            .collect();
        let mut negate = false;
        let mut prev = one;
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        negate = !negate;
                    }
                    None => return MultiPoly::zero(self.nvars),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num
                        .exact_div(&prev)
                        .expect("Bareiss invariant: previous pivot divides every 2x2 minor");
                }
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        if negate {
            -&det
        } else {
            det
        }
    }

    /// Coefficients `c_0, ..., c_{n-1}` of `det(λI - M)` below the leading
    /// `λ^n`, via Faddeev-LeVerrier. Every coefficient is identically zero
    /// iff every evaluation of the matrix is nilpotent.
    pub fn charpoly(&self) -> Vec<MultiPoly> {
        let blocks = self.diagonal_blocks();
        if blocks.len() == 1 {
            return self.charpoly_faddeev();
        }
        // Multiply the monic block polynomials, lowest degree first.
        let mut acc = vec![MultiPoly::constant(self.nvars, Rational::one())];
        for block in &blocks {
            let mut factor = self.submatrix(block).charpoly_faddeev();
            factor.push(MultiPoly::constant(self.nvars, Rational::one()));
            let mut prod = vec![MultiPoly::zero(self.nvars); acc.len() + factor.len() - 1];
            for (a, x) in acc.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (b, y) in factor.iter().enumerate() {
                    if !y.is_zero() {
                        prod[a + b] = &prod[a + b] + &(x * y);
                    }
                }
            }
            acc = prod;
        }
        acc.truncate(self.n);
        acc
    }

    /// Index sets of the diagonal blocks: strongly connected components of
    /// the graph with an edge `i -> j` whenever entry `(i, j)` is nonzero.
    /// After a simultaneous permutation of rows and columns the matrix is
    /// block triangular with these blocks on the diagonal, so determinant
    /// and characteristic polynomial factor over them.
    pub fn diagonal_blocks(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut reach = vec![vec![false; n]; n];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
            for (j, r) in row.iter_mut().enumerate() {
                if !self.entry(i, j).is_zero() {
                    *r = true;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    let row = reach[k].clone();
                    for (r, via) in reach[i].iter_mut().zip(row) {
                        *r |= via;
                    }
                }
            }
        }
        let mut assigned = vec![false; n];
        let mut blocks = Vec::new();
        for i in 0..n {
            if assigned[i] {
                continue;
            }
            let block: Vec<usize> = (i..n).filter(|&j| reach[i][j] && reach[j][i]).collect();
            for &j in &block {
                assigned[j] = true;
            }
            blocks.push(block);
        }
        blocks
    }

    fn submatrix(&self, idx: &[usize]) -> Self {
        let entries = idx
            .iter()
            .flat_map(|&i| idx.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.entry(i, j).clone())
            .collect();
        Self {
            n: idx.len(),
            nvars: self.nvars,
            entries,
        }
    }

    fn charpoly_faddeev(&self) -> Vec<MultiPoly> {
        let n = self.n;
        let mut coeffs = vec![MultiPoly::zero(self.nvars); n + 1];
        coeffs[n] = MultiPoly::constant(self.nvars, Rational::one());
        let mut m = Self::zeros(n, self.nvars);
        for k in 1..=n {
            let mut next = self.mul(&m);
            for i in 0..n {
                next.entries[i * n + i] = &next.entries[i * n + i] + &coeffs[n - k + 1];
            }
            // tr(A * next) needs only the diagonal of the product.
            let mut trace = MultiPoly::zero(self.nvars);
            for i in 0..n {
                for l in 0..n {
                    let a = self.entry(i, l);
                    let b = next.entry(l, i);
                    if !a.is_zero() && !b.is_zero() {
                        trace = &trace + &(a * b);
                    }
                }
            }
            coeffs[n - k] = trace.scale(&-Rational::new(BigInt::one(), BigInt::from(k)));
            m = next;
        }
        coeffs.truncate(n);
        coeffs
    }
}

impl fmt::Debug for GenericMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GenericMatrix {}x{} in {} parameters [", self.n, self.n, self.nvars)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.entry(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for GenericMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.entry(i, j).to_string()).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in cells {
            let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[ {} ]", padded.join(" | "))?;
        }
        Ok(())
    }
}

struct Laplace<'a> {
    matrix: &'a GenericMatrix,
    order: &'a [usize],
    support: &'a [u64],
    memo: HashMap<u64, MultiPoly>,
    budget: usize,
}

impl Laplace<'_> {
    fn minor(&mut self, depth: usize, cols: u64) -> Option<MultiPoly> {
        let n = self.matrix.n;
        let nvars = self.matrix.nvars;
        if depth == n {
            return Some(MultiPoly::constant(nvars, Rational::one()));
        }
        if let Some(hit) = self.memo.get(&cols) {
            return Some(hit.clone());
        }
        // A remaining row with no entries in the remaining columns kills the minor.
        if self.order[depth..].iter().any(|&r| self.support[r] & cols == 0) {
            return Some(MultiPoly::zero(nvars));
        }
        if self.memo.len() >= self.budget {
            return None;
        }
        let row = self.order[depth];
        let mut acc = MultiPoly::zero(nvars);
        let mut position = 0usize;
        for j in 0..n {
            if cols & (1 << j) == 0 {
                continue;
            }
            let entry = self.matrix.entry(row, j);
            if !entry.is_zero() {
                let sub = self.minor(depth + 1, cols & !(1 << j))?;
                if !sub.is_zero() {
                    let term = entry * &sub;
                    acc = if position.is_multiple_of(2) { &acc + &term } else { &acc - &term };
                }
            }
            position += 1;
        }
        self.memo.insert(cols, acc.clone());
        Some(acc)
    }
}

fn permutation_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = perm[k];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn t(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    #[test]
    fn ring_examples() {
        let (t1, t2) = (t(2, 0), t(2, 1));
        let prod = &(&t1 + &t2) * &(&t1 - &t2);
        assert_eq!(prod, &(&t1 * &t1) - &(&t2 * &t2));
        assert_eq!(prod.eval(&[int(3), int(2)]).unwrap(), int(5));
        assert!((&prod * &MultiPoly::zero(2)).is_zero());
        assert!(t1.checked_add(&t(3, 0)).is_err());
        assert!(prod.eval(&[int(1)]).is_err());
    }

    #[test]
    fn exact_division_examples() {
        let (t1, t2) = (t(2, 0), t(2, 1));
        let p = &(&t1 * &t1) - &(&t2 * &t2);
        assert_eq!(p.exact_div(&(&t1 - &t2)).unwrap(), &t1 + &t2);
        let one = MultiPoly::constant(2, int(1));
        assert_eq!(p.exact_div(&one).unwrap(), p);
        let two = MultiPoly::constant(2, int(2));
        let lhs = &(&two * &(&t1 * &t2)) + &(&MultiPoly::constant(2, int(4)) * &(&t2 * &t2));
        let q = &two * &t2;
        assert_eq!(lhs.exact_div(&q).unwrap(), &t1 + &t2.scale(&int(2)));
        assert_eq!(p.exact_div(&t1), Err(Error::InexactDivision));
    }

    #[test]
    fn grlex_order_and_rendering() {
        let (t1, t2, t3) = (t(3, 0), t(3, 1), t(3, 2));
        let p = &(&(&t1 * &t1) * &t3).scale(&crate::rational::rat(5, 4)) + &(&t2 - &MultiPoly::constant(3, int(3)));
        assert_eq!(p.to_string(), "5/4*t1^2*t3 + t2 - 3");
        let q = &(&t2 * &t2) + &(&t1 * &t3);
        // t1*t3 > t2^2 in grlex with t1 > t2 > t3
        assert_eq!(q.to_string(), "t1*t3 + t2^2");
        assert_eq!((-&t1).to_string(), "-t1");
        assert_eq!(MultiPoly::zero(1).to_string(), "0");
    }

    #[test]
    fn generic_diagonal_det() {
        for n in 1..=6 {
            let g = GenericMatrix::generic_diagonal(n);
            let expected = (0..n).fold(MultiPoly::constant(n, int(1)), |acc, i| &acc * &t(n, i));
            assert_eq!(g.det(), expected);
            assert_eq!(g.det_bareiss(), expected);
        }
    }

    #[test]
    fn strictly_lower_charpoly_vanishes() {
        let n = 4;
        let mut entries = vec![MultiPoly::zero(6); n * n];
        let mut v = 0;
        for i in 0..n {
            for j in 0..i {
                entries[i * n + j] = t(6, v);
                v += 1;
            }
        }
        let g = GenericMatrix::from_entries(n, entries).unwrap();
        assert!(g.charpoly().iter().all(MultiPoly::is_zero));
        assert!(g.det().is_zero());
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
    }
}
