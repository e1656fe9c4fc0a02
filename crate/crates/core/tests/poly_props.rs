use lie_prederiv::poly::Monomial;
use lie_prederiv::rational::{int, rat};
use lie_prederiv::{GenericMatrix, MultiPoly, RatMatrix, Rational};
use num_traits::Zero;
use proptest::prelude::*;

const VARS: usize = 3;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(p, q)| rat(p, q))
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0u32..=2, VARS), small_rational()), 0..5).prop_map(|terms| {
        MultiPoly::from_terms(
            VARS,
            terms.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), c)),
        )
    })
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(small_rational(), VARS)
}

/// Entries affine-linear in the parameters, like a generic element.
fn linear_matrix(max: usize) -> impl Strategy<Value = GenericMatrix> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec((small_rational(), prop::collection::vec(-2i64..=2, VARS), 0u8..3), n * n)
            .prop_map(move |cells| {
                let entries = cells
                    .into_iter()
                    .map(|(c, coeffs, keep)| {
                        // Sparse patterns exercise the block decomposition.
                        if keep == 0 {
                            MultiPoly::zero(VARS)
                        } else {
                            MultiPoly::linear(c, &coeffs.into_iter().map(int).collect::<Vec<_>>())
                        }
                    })
                    .collect();
                GenericMatrix::from_entries(n, entries).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn evaluation_is_a_ring_map(a in poly(), b in poly(), x in point()) {
        let (ea, eb) = (a.eval(&x).unwrap(), b.eval(&x).unwrap());
        prop_assert_eq!((&a + &b).eval(&x).unwrap(), &ea + &eb);
        prop_assert_eq!((&a - &b).eval(&x).unwrap(), &ea - &eb);
        prop_assert_eq!((&a * &b).eval(&x).unwrap(), &ea * &eb);
        prop_assert_eq!((-&a).eval(&x).unwrap(), -ea);
    }

    #[test]
    fn exact_division_inverts_multiplication(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        let product = &a * &b;
        prop_assert_eq!(product.exact_div(&b).unwrap(), a);
    }

    #[test]
    fn substitution_then_evaluation(a in poly(), x in point()) {
        let partial = a.substitute(&[Some(x[0].clone()), None, None]);
        prop_assert_eq!(partial.eval(&x).unwrap(), a.eval(&x).unwrap());
        prop_assert!(!partial.variables().contains(&0));
    }

    #[test]
    fn det_commutes_with_evaluation(m in linear_matrix(4), x in point()) {
        let (det, _) = m.det_with_method();
        prop_assert_eq!(det.eval(&x).unwrap(), m.eval(&x).unwrap().det().unwrap());
    }

    #[test]
    fn bareiss_agrees_with_laplace(m in linear_matrix(4)) {
        if let Some(laplace) = m.det_laplace(usize::MAX) {
            prop_assert_eq!(laplace, m.det_bareiss());
        }
    }

    #[test]
    fn charpoly_commutes_with_evaluation(m in linear_matrix(4), x in point()) {
        let symbolic = m.charpoly();
        let numeric = m.eval(&x).unwrap().charpoly().unwrap();
        prop_assert_eq!(symbolic.len(), m.size());
        for (s, c) in symbolic.iter().zip(&numeric) {
            prop_assert_eq!(&s.eval(&x).unwrap(), c);
        }
    }

    #[test]
    fn diagonal_blocks_partition_indices(m in linear_matrix(5)) {
        let mut seen: Vec<usize> = m.diagonal_blocks().into_iter().flatten().collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..m.size()).collect::<Vec<_>>());
    }
}

#[test]
fn generic_diagonal_det_is_product_of_variables() {
    let g = GenericMatrix::generic_diagonal(3);
    let expected = &(&MultiPoly::var(3, 0) * &MultiPoly::var(3, 1)) * &MultiPoly::var(3, 2);
    assert_eq!(g.det(), expected);
    assert!(g.eval(&[int(1), int(0), int(2)]).unwrap().det().unwrap().is_zero());
}

#[test]
fn generic_element_of_a_basis() {
    let basis = [RatMatrix::from_i64(&[&[1, 0], &[0, 0]]), RatMatrix::from_i64(&[&[0, 0], &[1, 1]])];
    let g = GenericMatrix::from_basis(2, &basis);
    assert_eq!(g.eval(&[int(2), int(3)]).unwrap(), RatMatrix::from_i64(&[&[2, 0], &[3, 3]]));
    assert_eq!(g.det(), &MultiPoly::var(2, 0) * &MultiPoly::var(2, 1));
}
