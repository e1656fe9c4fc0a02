use lie_prederiv::linalg::{annihilator, span_basis, Echelon};
use lie_prederiv::rational::{format_rational, int, parse_rational, rat};
use lie_prederiv::{RatMatrix, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

fn square(max: usize) -> impl Strategy<Value = RatMatrix> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(small_rational(), n), n)
            .prop_map(|rows| RatMatrix::from_rows(rows).unwrap())
    })
}

fn rectangular() -> impl Strategy<Value = RatMatrix> {
    (1usize..=5, 1usize..=6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, c), r)
            .prop_map(|rows| RatMatrix::from_rows(rows.into_iter().map(|row| row.into_iter().map(int).collect()).collect()).unwrap())
    })
}

/// Cofactor expansion along the first row.
fn cofactor_det(m: &RatMatrix) -> Rational {
    let n = m.rows();
    if n == 1 {
        return m[(0, 0)].clone();
    }
    let mut acc = Rational::zero();
    for j in 0..n {
        let minor: Vec<Vec<Rational>> = (1..n)
            .map(|i| (0..n).filter(|&c| c != j).map(|c| m[(i, c)].clone()).collect())
            .collect();
        let term = &m[(0, j)] * cofactor_det(&RatMatrix::from_rows(minor).unwrap());
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn eval_poly(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

proptest! {
    #[test]
    fn det_matches_cofactor_expansion(m in square(5)) {
        prop_assert_eq!(m.det().unwrap(), cofactor_det(&m));
    }

    #[test]
    fn det_is_multiplicative(a in square(4), seed in 0u64..1000) {
        let n = a.rows();
        let b = RatMatrix::from_rows((0..n).map(|i| (0..n).map(|j| int(((seed as i64 + 3 * i as i64 + 7 * j as i64) % 5) - 2)).collect()).collect()).unwrap();
        prop_assert_eq!(a.mul(&b).unwrap().det().unwrap(), a.det().unwrap() * b.det().unwrap());
    }

    #[test]
    fn inverse_is_two_sided(m in square(5)) {
        match m.inverse() {
            Ok(inv) => {
                let id = RatMatrix::identity(m.rows());
                prop_assert_eq!(m.mul(&inv).unwrap(), id.clone());
                prop_assert_eq!(inv.mul(&m).unwrap(), id);
            }
            Err(_) => prop_assert!(m.det().unwrap().is_zero()),
        }
    }

    #[test]
    fn rank_nullity(m in rectangular()) {
        let kernel = m.nullspace();
        prop_assert_eq!(m.rank() + kernel.len(), m.cols());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn echelon_agrees_with_dense_rank(m in rectangular()) {
        let mut e = Echelon::new(m.cols());
        for row in m.to_rows() {
            e.insert(row);
        }
        prop_assert_eq!(e.rank(), m.rank());
        for row in m.to_rows() {
            prop_assert!(e.contains(&row));
        }
        prop_assert_eq!(span_basis(m.cols(), m.to_rows()).len(), m.rank());
    }

    #[test]
    fn annihilator_is_orthogonal_complement(m in rectangular()) {
        let rows = m.to_rows();
        let ann = annihilator(m.cols(), &rows);
        prop_assert_eq!(ann.len() + m.rank(), m.cols());
        for a in &ann {
            for r in &rows {
                let dot: Rational = a.iter().zip(r).map(|(x, y)| x * y).sum();
                prop_assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn charpoly_is_det_of_shift(m in square(4), x in small_rational()) {
        let coeffs = m.charpoly().unwrap();
        prop_assert_eq!(coeffs.len(), m.rows() + 1);
        prop_assert!(coeffs[m.rows()].is_one());
        let shifted = RatMatrix::identity(m.rows()).scale(&x).sub(&m).unwrap();
        prop_assert_eq!(eval_poly(&coeffs, &x), cofactor_det(&shifted));
    }

    #[test]
    fn nilpotent_iff_power_vanishes(m in square(4)) {
        let mut power = m.clone();
        for _ in 1..m.rows() {
            power = power.mul(&m).unwrap();
        }
        prop_assert_eq!(m.is_nilpotent().unwrap(), power.is_zero());
    }

    #[test]
    fn rational_text_round_trip(p in -1000i64..1000, q in 1i64..50) {
        let x = rat(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }
}

#[test]
fn strictly_lower_triangular_is_nilpotent() {
    let m = RatMatrix::from_i64(&[&[0, 0, 0], &[4, 0, 0], &[-1, 2, 0]]);
    assert!(m.is_strictly_lower_triangular());
    assert!(m.is_nilpotent().unwrap());
    assert!(m.det().unwrap().is_zero());
}

#[test]
fn parse_rejects_garbage() {
    assert!(parse_rational("1/0").is_err());
    assert!(parse_rational("x").is_err());
    assert_eq!(parse_rational(" -6/4 ").unwrap(), rat(-3, 2));
}
