//! Filiform Lie algebras in adapted bases.
//!
//! An adapted basis `e_1, ..., e_n` has `[e_1, e_i] = e_{i+1}` for
//! `2 <= i <= n-1`, and every other bracket is determined by constants
//! `α_{k,s}` indexed by the set
//!
//! ```text
//! I_n = { (k,s) : 2 <= k <= floor(n/2), 2k+1 <= s <= n }  ∪  { (n/2, n) if n is even }
//! ```
//!
//! through
//!
//! ```text
//! [e_i, e_j] = Σ_r ( Σ_{ℓ=0}^{floor((j-i-1)/2)} (-1)^ℓ C(j-i-ℓ-1, ℓ) α_{i+ℓ, r-j+i+2ℓ+1} ) e_r,   2 <= i < j <= n.
//! ```
//!
//! The resulting table satisfies the Jacobi identity only on a variety of
//! `α` values; [`jacobi_polynomials`] produces the defining equations.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{zero_vector, RatMatrix};
use crate::poly::MultiPoly;
use crate::rational::{binomial, format_rational, int, parse_rational, pow, Rational};

/// The index set `I_n` in canonical order: `k` ascending, then `s` ascending.
pub fn index_set(n: usize) -> Result<Vec<(usize, usize)>> {
    if n < 3 {
        return Err(Error::InvalidAlpha(format!("filiform dimension must be at least 3, got {n}")));
    }
    let mut out = Vec::new();
    for k in 2..=n / 2 {
        for s in 2 * k + 1..=n {
            out.push((k, s));
        }
    }
    if n.is_multiple_of(2) {
        out.push((n / 2, n));
    }
    Ok(out)
}

/// Structure constants `α_{k,s}` of an `n`-dimensional filiform law.
/// Entries not stored are zero.
#[derive(Clone, PartialEq, Eq)]
pub struct AlphaVector {
    n: usize,
    values: BTreeMap<(usize, usize), Rational>,
}

impl AlphaVector {
    pub fn zero(n: usize) -> Result<Self> {
        index_set(n)?;
        Ok(Self {
            n,
            values: BTreeMap::new(),
        })
    }

    /// From values listed in the order of [`index_set`].
    pub fn from_ordered(n: usize, values: &[Rational]) -> Result<Self> {
        let keys = index_set(n)?;
        if values.len() != keys.len() {
            return Err(Error::InvalidAlpha(format!(
                "expected {} values for n = {n}, got {}",
                keys.len(),
                values.len()
            )));
        }
        let mut a = Self::zero(n)?;
        for (key, v) in keys.into_iter().zip(values) {
            a.set(key.0, key.1, v.clone())?;
        }
        Ok(a)
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = ((usize, usize), Rational)>) -> Result<Self> {
        let mut a = Self::zero(n)?;
        for ((k, s), v) in pairs {
            a.set(k, s, v)?;
        }
        Ok(a)
    }

    /// Parses either an ordered comma-separated list (`"0,1,0,1/2"`) or
    /// explicit pairs (`"(2,5)=1,(3,7)=-2/3"`).
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.contains('=') {
            let mut a = Self::zero(n)?;
            let mut rest = text;
            while !rest.is_empty() {
                rest = rest.trim_start_matches([',', ' ']);
                if rest.is_empty() {
                    break;
                }
                let bad = || Error::Parse(format!("bad alpha pair list {text:?}"));
                let open = rest.strip_prefix('(').ok_or_else(bad)?;
                let (inside, after) = open.split_once(')').ok_or_else(bad)?;
                let (k, s) = inside.split_once(',').ok_or_else(bad)?;
                let k: usize = k.trim().parse().map_err(|_| bad())?;
                let s: usize = s.trim().parse().map_err(|_| bad())?;
                let after = after.trim_start().strip_prefix('=').ok_or_else(bad)?;
                let (value, tail) = after.split_once(',').unwrap_or((after, ""));
                a.set(k, s, parse_rational(value)?)?;
                rest = tail;
            }
            Ok(a)
        } else {
            let values = text
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(parse_rational)
                .collect::<Result<Vec<_>>>()?;
            Self::from_ordered(n, &values)
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `α_{k,s}`; zero outside `I_n`.
    pub fn get(&self, k: usize, s: usize) -> Rational {
        self.values.get(&(k, s)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, k: usize, s: usize, v: Rational) -> Result<()> {
        if !in_index_set(self.n, k, s) {
            return Err(Error::InvalidAlpha(format!("({k},{s}) is not in I_{}", self.n)));
        }
        if v.is_zero() {
            self.values.remove(&(k, s));
        } else {
            self.values.insert((k, s), v);
        }
        Ok(())
    }

    /// Values in the order of [`index_set`].
    pub fn ordered(&self) -> Vec<Rational> {
        index_set(self.n)
            .expect("validated at construction")
            .into_iter()
            .map(|(k, s)| self.get(k, s))
            .collect()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = ((usize, usize), &Rational)> {
        self.values.iter().map(|(k, v)| (*k, v))
    }
}

impl fmt::Display for AlphaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ordered().iter().map(format_rational).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for AlphaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlphaVector(n={}, {})", self.n, self)
    }
}

pub fn in_index_set(n: usize, k: usize, s: usize) -> bool {
    (k >= 2 && k <= n / 2 && s > 2 * k && s <= n) || (n.is_multiple_of(2) && k == n / 2 && s == n)
}

/// Coefficient of `e_r` in `[e_i, e_j]` (1-based, `2 <= i < j`) as a linear
/// combination of `α` entries: returns `(sign * binomial, (k, s))` pairs.
fn bracket_terms(n: usize, i: usize, j: usize, r: usize) -> Vec<(Rational, (usize, usize))> {
    let mut out = Vec::new();
    let (i, j, r) = (i as i64, j as i64, r as i64);
    for l in 0..=(j - i - 1) / 2 {
        let k = i + l;
        let s = r - j + i + 2 * l + 1;
        if k < 0 || s < 0 || !in_index_set(n, k as usize, s as usize) {
            continue;
        }
        let c = binomial(j - i - l - 1, l);
        if c.is_zero() {
            continue;
        }
        let c = if l % 2 == 1 { -c } else { c };
        out.push((c, (k as usize, s as usize)));
    }
    out
}

/// The filiform bracket table for `α`. Jacobi is not guaranteed.
pub fn build_filiform(n: usize, alpha: &AlphaVector) -> Result<LieAlgebra> {
    if alpha.n != n {
        return Err(Error::InvalidAlpha(format!("alpha vector is for n = {}, not {n}", alpha.n)));
    }
    let mut brackets = Vec::new();
    for i in 2..n {
        let mut v = zero_vector(n);
        v[i] = Rational::one();
        brackets.push(((0, i - 1), v));
    }
    for i in 2..=n {
        for j in i + 1..=n {
            let mut v = zero_vector(n);
            for r in 1..=n {
                for (c, (k, s)) in bracket_terms(n, i, j, r) {
                    v[r - 1] += c * alpha.get(k, s);
                }
            }
            brackets.push(((i - 1, j - 1), v));
        }
    }
    LieAlgebra::new(format!("filiform{n}{alpha}"), n, brackets)
}

/// Jacobi equations of the filiform family as polynomials in the `α`
/// entries. Variable `r` of every polynomial is `index_set(n)[r]`.
/// Duplicates and zero polynomials are removed.
pub fn jacobi_polynomials(n: usize) -> Result<Vec<MultiPoly>> {
    let keys = index_set(n)?;
    let m = keys.len();
    let var_of: BTreeMap<(usize, usize), usize> = keys.iter().enumerate().map(|(v, k)| (*k, v)).collect();
    // constants[i][j][r] as polynomials, 1-based indices, i < j.
    let coeff = |i: usize, j: usize, r: usize| -> MultiPoly {
        if i == j {
            return MultiPoly::zero(m);
        }
        let (a, b, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        let p = if a == 1 {
            if r == b + 1 && b >= 2 && b < n {
                MultiPoly::constant(m, Rational::one())
            } else {
                MultiPoly::zero(m)
            }
        } else {
            let mut p = MultiPoly::zero(m);
            for (c, key) in bracket_terms(n, a, b, r) {
                p = &p + &MultiPoly::var(m, var_of[&key]).scale(&c);
            }
            p
        };
        if sign < 0 {
            -&p
        } else {
            p
        }
    };
    let mut table = vec![MultiPoly::zero(m); (n + 1) * (n + 1) * (n + 1)];
    let at = |i: usize, j: usize, r: usize| (i * (n + 1) + j) * (n + 1) + r;
    for i in 1..=n {
        for j in 1..=n {
            for r in 1..=n {
                table[at(i, j, r)] = coeff(i, j, r);
            }
        }
    }
    // [e_a, [e_b, e_c]] component r
    let triple = |a: usize, b: usize, c: usize, r: usize| -> MultiPoly {
        let mut acc = MultiPoly::zero(m);
        for l in 1..=n {
            let inner = &table[at(b, c, l)];
            if inner.is_zero() {
                continue;
            }
            let outer = &table[at(a, l, r)];
            if !outer.is_zero() {
                acc = &acc + &(inner * outer);
            }
        }
        acc
    };
    let mut out: Vec<MultiPoly> = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                for r in 1..=n {
                    let p = &(&triple(i, j, k, r) + &triple(j, k, i, r)) + &triple(k, i, j, r);
                    if !p.is_zero() && !out.contains(&p) && !out.contains(&-&p) {
                        out.push(p);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The four displayed Jacobi conditions for `n = 11`, evaluated at `α`.
/// The term with `α_{4,12}` is kept with `α_{4,12} = 0` since `(4,12)` lies
/// outside `I_11`.
pub fn jacobi_constraints_dim11(alpha: &AlphaVector) -> Result<[Rational; 4]> {
    jacobi_constraints_dim11_with(alpha, &Rational::zero())
}

/// The same four residuals with an explicit value for the `α_{4,12}` symbol.
/// Passing `-α_{5,11}` makes the system agree with the brute-force Jacobi
/// equations.
pub fn jacobi_constraints_dim11_with(alpha: &AlphaVector, a412: &Rational) -> Result<[Rational; 4]> {
    if alpha.n != 11 {
        return Err(Error::InvalidAlpha("the displayed constraints are for n = 11".into()));
    }
    let a = |k, s| alpha.get(k, s);
    let two = int(2);
    let three = int(3);
    let r1 = a(4, 9) * (&two * a(2, 5) + a(3, 7)) - &three * a(3, 7) * a(3, 7);
    let r2 = a(4, 10) * (&two * a(2, 5) + a(3, 7)) + &three * a(4, 9) * (a(2, 6) + a(3, 8))
        - int(7) * a(3, 7) * a(3, 8);
    let r3 = a(5, 11) * (&two * a(2, 5) - a(3, 7) - a(4, 9)) + a(4, 9) * (int(6) * a(4, 9) - int(4) * a(3, 7));
    let r4 = a412 * (&two * a(2, 7) + a(3, 9))
        + a(4, 11) * (&two * a(2, 5) + a(3, 7))
        + &three * a(4, 10) * (a(2, 6) + a(3, 8))
        - int(4) * a(3, 8) * a(3, 8)
        + &two * a(4, 9) * (&two * a(2, 7) + &three * a(3, 9))
        - int(8) * a(3, 7) * a(3, 9);
    Ok([r1, r2, r3, r4])
}

/// Rescales the law under `e_1 -> a e_1`, `e_2 -> b e_2`,
/// `e_i -> [f(e_1), f(e_{i-1})]`: `α_{k,s} -> a^{2k-1-s} b α_{k,s}`.
pub fn rescale(alpha: &AlphaVector, a: &Rational, b: &Rational) -> Result<AlphaVector> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidAlpha("rescaling factors must be nonzero".into()));
    }
    let mut out = AlphaVector::zero(alpha.n)?;
    for ((k, s), v) in alpha.nonzero() {
        let factor = pow(a, 2 * k as i64 - 1 - s as i64) * b;
        out.set(k, s, v * factor)?;
    }
    Ok(out)
}

/// The basis change `f = diag(a, b, ab, a^2 b, ..., a^{n-2} b)`.
pub fn rescaling_matrix(n: usize, a: &Rational, b: &Rational) -> RatMatrix {
    let mut diag = vec![a.clone(), b.clone()];
    for i in 3..=n {
        diag.push(pow(a, i as i64 - 2) * b);
    }
    diag.truncate(n);
    RatMatrix::from_diagonal(&diag)
}

/// Result of [`normalize_a25`].
#[derive(Clone, Debug)]
pub struct Normalization {
    pub alpha: AlphaVector,
    pub a: Rational,
    pub b: Rational,
    pub basis_change: RatMatrix,
}

/// Moves to an adapted basis with `α_{2,5} = 1`. Over the rationals the
/// choice `a = 1`, `b = 1/α_{2,5}` always works; the result is checked by
/// transporting the algebra along the basis change.
pub fn normalize_a25(alpha: &AlphaVector) -> Result<Normalization> {
    let n = alpha.n;
    let a25 = alpha.get(2, 5);
    if a25.is_zero() {
        return Err(Error::Hypothesis("property (a) fails: α_{2,5} = 0".into()));
    }
    let a = Rational::one();
    let b = a25.recip();
    let normalized = rescale(alpha, &a, &b)?;
    let f = rescaling_matrix(n, &a, &b);
    let moved = build_filiform(n, alpha)?.transport(&f)?;
    if !moved.same_structure(&build_filiform(n, &normalized)?) {
        return Err(Error::Inconsistent("rescaled law does not match transported algebra".into()));
    }
    Ok(Normalization {
        alpha: normalized,
        a,
        b,
        basis_change: f,
    })
}

/// `C(2j-8, j-4) / (2^{j-5} (j-3)) * α_{2,6}^{j-5}`.
pub fn catalan_alpha(j: usize, a26: &Rational) -> Result<Rational> {
    if j < 7 {
        return Err(Error::InvalidAlpha(format!("catalan_alpha needs j >= 7, got {j}")));
    }
    let j = j as i64;
    let denom = pow(&int(2), j - 5) * int(j - 3);
    Ok(binomial(2 * j - 8, j - 4) / denom * pow(a26, j - 5))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FiliformProperties {
    /// No codimension-one `U ⊇ g^1` with `[U, g^1] ⊆ g^4`: `α_{2,5} != 0`.
    pub a: bool,
    /// `g^{(n-4)/2}` abelian for even `n`: `α_{n/2,n} = 0`.
    pub b: bool,
    /// `[g^1, g^1] ⊆ g^6`: `α_{3,7} = 0`.
    pub c: bool,
}

pub fn properties(alpha: &AlphaVector) -> FiliformProperties {
    let n = alpha.n;
    FiliformProperties {
        a: !alpha.get(2, 5).is_zero(),
        b: n % 2 == 1 || alpha.get(n / 2, n).is_zero(),
        c: alpha.get(3, 7).is_zero(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AClass {
    A1,
    A2,
    Neither,
}

/// `A_n^1` = (a)(b)(c), `A_n^2` = (a)(b) and not (c). Expects a Jacobi law.
pub fn a_class_membership(alpha: &AlphaVector) -> AClass {
    let p = properties(alpha);
    match (p.a && p.b, p.c) {
        (true, true) => AClass::A1,
        (true, false) => AClass::A2,
        _ => AClass::Neither,
    }
}

/// Closed-form answer for normalized `A_n^1` laws: `(P^{-1} exists,
/// D^{-1} exists)`.
pub fn an1_nonsingular_criterion(alpha: &AlphaVector) -> Result<(bool, bool)> {
    let n = alpha.n;
    if a_class_membership(alpha) != AClass::A1 {
        return Err(Error::Hypothesis("law is not in A_n^1".into()));
    }
    if !alpha.get(2, 5).is_one() {
        return Err(Error::Hypothesis("law must be normalized to α_{2,5} = 1".into()));
    }
    let a26 = alpha.get(2, 6);
    let third_row_vanishes = (8..=n).all(|i| alpha.get(3, i).is_zero());
    let second_row_catalan = (7..n).all(|j| alpha.get(2, j) == catalan_alpha(j, &a26).expect("j >= 7"));
    let pder = third_row_vanishes && second_row_catalan;
    let der = pder && n >= 7 && alpha.get(2, n) == catalan_alpha(n, &a26)?;
    Ok((pder, der))
}

/// Draws a random law on the Jacobi variety.
///
/// Entries listed in `fixed` are imposed; the remaining entries are assigned
/// in index-set order, values drawn from `[-range, range]`, and whenever a
/// Jacobi equation becomes linear in a single unassigned entry that entry is
/// solved for instead. Returns `None` when the draw hits an inconsistent
/// equation.
pub fn sample_jacobi_law<R: Rng>(
    n: usize,
    equations: &[MultiPoly],
    fixed: &BTreeMap<(usize, usize), Rational>,
    range: i64,
    rng: &mut R,
) -> Result<Option<AlphaVector>> {
    let keys = index_set(n)?;
    let m = keys.len();
    let mut values: Vec<Option<Rational>> = keys.iter().map(|k| fixed.get(k).cloned()).collect();
    let mut eqs: Vec<MultiPoly> = equations.iter().map(|e| e.substitute(&values)).collect();
    loop {
        // Propagate: solve any equation linear in its only free variable.
        loop {
            let mut progressed = false;
            for e in &eqs {
                if e.is_zero() {
                    continue;
                }
                let vars = e.variables();
                if vars.is_empty() {
                    return Ok(None);
                }
                if vars.len() != 1 {
                    continue;
                }
                let v = vars[0];
                if let Some((coef, rest)) = e.linear_in(v) {
                    let (Some(c), Some(r)) = (coef.constant_value(), rest.constant_value()) else {
                        continue;
                    };
                    if c.is_zero() {
                        continue;
                    }
                    values[v] = Some(-r / c);
                    progressed = true;
                    break;
                }
            }
            if !progressed {
                break;
            }
            eqs = eqs.iter().map(|e| e.substitute(&values)).collect();
        }
        match (0..m).find(|&v| values[v].is_none()) {
            Some(v) => {
                values[v] = Some(int(rng.gen_range(-range..=range)));
                eqs = eqs.iter().map(|e| e.substitute(&values)).collect();
            }
            None => break,
        }
    }
    if eqs.iter().any(|e| !e.is_zero()) {
        return Ok(None);
    }
    let ordered: Vec<Rational> = values.into_iter().map(|v| v.expect("all assigned")).collect();
    Ok(Some(AlphaVector::from_ordered(n, &ordered)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn index_sets() {
        let i11 = index_set(11).unwrap();
        assert_eq!(i11.len(), 16);
        assert_eq!(i11[0], (2, 5));
        assert_eq!(i11[7], (3, 7));
        assert_eq!(i11[15], (5, 11));
        assert_eq!(index_set(6).unwrap(), vec![(2, 5), (2, 6), (3, 6)]);
        assert_eq!(index_set(5).unwrap(), vec![(2, 5)]);
        assert_eq!(index_set(4).unwrap(), vec![(2, 4)]);
        assert!(index_set(2).is_err());
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan_alpha(7, &int(1)).unwrap(), rat(5, 4));
        assert_eq!(catalan_alpha(8, &int(1)).unwrap(), rat(7, 4));
        assert!(catalan_alpha(9, &int(0)).unwrap().is_zero());
        assert!(catalan_alpha(6, &int(1)).is_err());
    }

    #[test]
    fn model_filiform_is_lie() {
        for n in 3..=9 {
            let g = build_filiform(n, &AlphaVector::zero(n).unwrap()).unwrap();
            assert!(g.jacobi_check().is_empty());
            assert!(g.is_filiform());
        }
    }

    #[test]
    fn parse_forms() {
        let a = AlphaVector::parse(11, "0,1,0,0,0,0,1,0,0,0,0,0,0,0,0,0").unwrap();
        assert_eq!(a.get(2, 6), int(1));
        assert_eq!(a.get(2, 11), int(1));
        let b = AlphaVector::parse(11, "(2,6)=1, (2,11)=1").unwrap();
        assert_eq!(a, b);
        assert!(AlphaVector::parse(11, "(4,12)=1").is_err());
        assert!(AlphaVector::parse(11, "1,2").is_err());
    }

    #[test]
    fn normalization() {
        let a = AlphaVector::from_pairs(7, [((2, 5), int(4))]).unwrap();
        let norm = normalize_a25(&a).unwrap();
        assert_eq!(norm.alpha.get(2, 5), int(1));
        let one = AlphaVector::from_pairs(7, [((2, 5), int(1)), ((2, 6), int(2))]).unwrap();
        let same = normalize_a25(&one).unwrap();
        assert_eq!(same.alpha, one);
        assert_eq!(same.basis_change, RatMatrix::identity(7));
        assert!(normalize_a25(&AlphaVector::zero(7).unwrap()).is_err());
    }

    #[test]
    fn classes() {
        let a1 = AlphaVector::from_pairs(12, [((2, 5), int(1))]).unwrap();
        assert_eq!(a_class_membership(&a1), AClass::A1);
        let a2 = AlphaVector::from_pairs(12, [((2, 5), int(1)), ((3, 7), int(1))]).unwrap();
        assert_eq!(a_class_membership(&a2), AClass::A2);
        let not_b = AlphaVector::from_pairs(12, [((2, 5), int(1)), ((6, 12), int(1))]).unwrap();
        assert_eq!(a_class_membership(&not_b), AClass::Neither);
        assert_eq!(a_class_membership(&AlphaVector::zero(12).unwrap()), AClass::Neither);
    }

    #[test]
    fn an1_criterion_examples() {
        let mut pairs = vec![((2, 5), int(1)), ((2, 6), int(1))];
        for j in 7..=11 {
            pairs.push(((2, j), catalan_alpha(j, &int(1)).unwrap()));
        }
        let mut a = AlphaVector::from_pairs(12, pairs.clone()).unwrap();
        assert_eq!(an1_nonsingular_criterion(&a).unwrap(), (true, false));
        a.set(2, 12, catalan_alpha(12, &int(1)).unwrap()).unwrap();
        assert_eq!(an1_nonsingular_criterion(&a).unwrap(), (true, true));
        a.set(3, 8, int(1)).unwrap();
        assert_eq!(an1_nonsingular_criterion(&a).unwrap(), (false, false));
    }
}
