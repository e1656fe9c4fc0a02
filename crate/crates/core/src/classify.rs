//! The four existence and nilpotency predicates, each answered with a
//! certificate that can be re-checked on its own.
//!
//! Positive existence answers come from random evaluation: a point whose
//! matrix has nonzero determinant is a complete proof. Negative answers are
//! always symbolic: the determinant of the generic element vanishes
//! identically. Nilpotency is decided by the characteristic polynomial of the
//! generic element and, independently, by an Engel flag.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Flag, LieAlgebra};
use crate::deriv::{derivation_space, is_prederivation, prederivation_space, SolutionSpace, SpaceKind};
use crate::error::{Error, Result};
use crate::io::{serialize_display, serialize_displays, serialize_matrix, serialize_rational, serialize_vector};
use crate::linalg::{annihilator, Echelon, RatMatrix, RatVector};
use crate::poly::MultiPoly;
use crate::rational::{int, pow, Rational};

pub const DEFAULT_SEED: u64 = 42;
/// Random evaluations tried before falling back to symbolic computation.
pub const RANDOM_TRIALS: usize = 8;
/// Evaluation points have integer coordinates in `[-BOUND, BOUND]`.
pub const BOUND: i64 = 1_000_000;

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `space.element(point) = matrix` with `det(matrix) = det != 0`.
    Witness {
        #[serde(serialize_with = "serialize_vector")]
        point: RatVector,
        #[serde(serialize_with = "serialize_matrix")]
        matrix: RatMatrix,
        #[serde(serialize_with = "serialize_rational")]
        det: Rational,
    },
    /// Blocks `W_1, ..., W_m` whose partial sums `V_k = W_1 + ... + W_k`
    /// satisfy `B V_k ⊆ V_{k-1}` for every basis matrix `B`.
    EngelFlag {
        #[serde(serialize_with = "serialize_flag")]
        flag: Flag,
    },
    /// The determinant of the generic element is the zero polynomial.
    VanishingDet {
        #[serde(serialize_with = "serialize_display")]
        poly: MultiPoly,
        method: String,
    },
    /// Every coefficient of `det(λI - M)` below `λ^n` is the zero polynomial.
    VanishingCharpoly {
        #[serde(serialize_with = "serialize_displays")]
        coefficients: Vec<MultiPoly>,
    },
    /// `space.element(point) = matrix` whose characteristic polynomial has
    /// the nonzero coefficient `coefficient` at `λ^degree`.
    NonNilpotentWitness {
        #[serde(serialize_with = "serialize_vector")]
        point: RatVector,
        #[serde(serialize_with = "serialize_matrix")]
        matrix: RatMatrix,
        degree: usize,
        #[serde(serialize_with = "serialize_rational")]
        coefficient: Rational,
    },
}

fn serialize_flag<S: serde::Serializer>(flag: &Flag, s: S) -> std::result::Result<S::Ok, S::Error> {
    let blocks: Vec<serde_json::Value> = flag
        .blocks
        .iter()
        .map(|b| serde_json::Value::Array(b.iter().map(|v| crate::io::vector_to_value(v)).collect()))
        .collect();
    serde::Serialize::serialize(&blocks, s)
}

/// A predicate value with its certificates.
#[derive(Clone, Debug, Serialize)]
pub struct Decision {
    pub holds: bool,
    pub certificates: Vec<Certificate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub algebra: String,
    pub dim: usize,
    pub dim_der: usize,
    pub dim_pder: usize,
    pub admits_nonsingular_derivation: Decision,
    pub admits_nonsingular_prederivation: Decision,
    pub characteristically_nilpotent: Decision,
    pub strongly_nilpotent: Decision,
}

impl ClassificationReport {
    /// Names of the implications between the four predicates that fail.
    pub fn lattice_violations(&self) -> Vec<&'static str> {
        let d = self.admits_nonsingular_derivation.holds;
        let p = self.admits_nonsingular_prederivation.holds;
        let c = self.characteristically_nilpotent.holds;
        let s = self.strongly_nilpotent.holds;
        let mut out = Vec::new();
        if s && !c {
            out.push("strongly nilpotent => characteristically nilpotent");
        }
        if d && !p {
            out.push("non-singular derivation => non-singular prederivation");
        }
        if p && s {
            out.push("non-singular prederivation => not strongly nilpotent");
        }
        if d && c {
            out.push("non-singular derivation => not characteristically nilpotent");
        }
        out
    }
}

fn random_point(rng: &mut ChaCha8Rng, len: usize) -> RatVector {
    (0..len).map(|_| int(rng.gen_range(-BOUND..=BOUND))).collect()
}

/// Does the space contain a matrix with nonzero determinant?
pub fn exists_nonsingular(space: &SolutionSpace, seed: u64) -> Result<Decision> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_TRIALS {
        let point = random_point(&mut rng, space.dim());
        let matrix = space.element(&point)?;
        let det = matrix.det()?;
        if !det.is_zero() {
            return Ok(witness(point, matrix, det));
        }
    }
    let (poly, method) = space.generic().det_with_method();
    if poly.is_zero() {
        return Ok(Decision {
            holds: false,
            certificates: vec![Certificate::VanishingDet {
                poly,
                method: method.to_string(),
            }],
        });
    }
    // The determinant is a nonzero polynomial; keep sampling until a point
    // avoids its zero set.
    loop {
        let point = random_point(&mut rng, space.dim());
        if !poly.eval(&point)?.is_zero() {
            let matrix = space.element(&point)?;
            let det = matrix.det()?;
            return Ok(witness(point, matrix, det));
        }
    }
}

fn witness(point: RatVector, matrix: RatMatrix, det: Rational) -> Decision {
    Decision {
        holds: true,
        certificates: vec![Certificate::Witness { point, matrix, det }],
    }
}

/// Is every element of the space nilpotent?
pub fn all_nilpotent(space: &SolutionSpace, seed: u64) -> Result<Decision> {
    let n = space.algebra().dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_TRIALS {
        let point = random_point(&mut rng, space.dim());
        let matrix = space.element(&point)?;
        let charpoly = matrix.charpoly()?;
        if let Some(degree) = (0..n).find(|&k| !charpoly[k].is_zero()) {
            let engel = engel_flag(space);
            if engel.is_some() {
                return Err(Error::Inconsistent(
                    "Engel flag found for a space with a non-nilpotent element".into(),
                ));
            }
            return Ok(Decision {
                holds: false,
                certificates: vec![Certificate::NonNilpotentWitness {
                    point,
                    matrix,
                    degree,
                    coefficient: charpoly[degree].clone(),
                }],
            });
        }
    }
    let coefficients = space.generic().charpoly();
    let symbolic = coefficients.iter().all(MultiPoly::is_zero);
    let engel = engel_flag(space);
    if symbolic != engel.is_some() {
        return Err(Error::Inconsistent(format!(
            "characteristic polynomial says all-nilpotent = {symbolic}, Engel flag says {}",
            engel.is_some()
        )));
    }
    match engel {
        Some(flag) => Ok(Decision {
            holds: true,
            certificates: vec![Certificate::VanishingCharpoly { coefficients }, Certificate::EngelFlag { flag }],
        }),
        None => {
            // Some coefficient is a nonzero polynomial; find a point where it
            // does not vanish.
            let degree = (0..n).find(|&k| !coefficients[k].is_zero()).expect("not all zero");
            loop {
                let point = random_point(&mut rng, space.dim());
                let value = coefficients[degree].eval(&point)?;
                if !value.is_zero() {
                    let matrix = space.element(&point)?;
                    return Ok(Decision {
                        holds: false,
                        certificates: vec![Certificate::NonNilpotentWitness {
                            point,
                            matrix,
                            degree,
                            coefficient: value,
                        }],
                    });
                }
            }
        }
    }
}

/// A flag `0 = V_0 ⊂ V_1 ⊂ ... ⊂ V_m = k^n` with `B V_k ⊆ V_{k-1}` for every
/// basis matrix `B`, built by `V_k = {x : B x ∈ V_{k-1} for all B}`. Returns
/// `None` when the chain stalls below the whole space, which happens exactly
/// when some element of the (commutator-closed) space is not nilpotent.
pub fn engel_flag(space: &SolutionSpace) -> Option<Flag> {
    let n = space.algebra().dim();
    let mut current = Echelon::new(n);
    let mut blocks: Vec<Vec<RatVector>> = Vec::new();
    while current.rank() < n {
        let ann = annihilator(n, &current.basis());
        let mut constraints = Echelon::new(n);
        for b in space.basis() {
            for a in &ann {
                // Row vector a^T B.
                let row: RatVector = (0..n)
                    .map(|j| (0..n).fold(Rational::zero(), |acc, i| acc + &a[i] * &b[(i, j)]))
                    .collect();
                constraints.insert(row);
            }
        }
        let next = constraints.nullspace();
        let block: Vec<RatVector> = next.into_iter().filter(|v| current.insert(v.clone())).collect();
        if block.is_empty() {
            return None;
        }
        blocks.push(block);
    }
    Some(Flag { blocks })
}

/// Checks `B W_k ⊆ W_1 + ... + W_{k-1}` for every block and basis matrix,
/// and that the blocks together span the space.
pub fn verify_engel_flag(space: &SolutionSpace, flag: &Flag) -> bool {
    let n = space.algebra().dim();
    if !flag.is_direct_sum(n) {
        return false;
    }
    let mut below = Echelon::new(n);
    for block in &flag.blocks {
        for v in block {
            for b in space.basis() {
                match b.mul_vec(v) {
                    Ok(image) if below.contains(&image) => {}
                    _ => return false,
                }
            }
        }
        for v in block {
            below.insert(v.clone());
        }
    }
    true
}

/// Re-checks a certificate against the space it was issued for.
pub fn verify_certificate(space: &SolutionSpace, cert: &Certificate) -> Result<bool> {
    let n = space.algebra().dim();
    Ok(match cert {
        Certificate::Witness { point, matrix, det } => {
            space.element(point)? == *matrix && space.membership(matrix)? && !det.is_zero() && matrix.det()? == *det
        }
        Certificate::EngelFlag { flag } => verify_engel_flag(space, flag),
        Certificate::VanishingDet { poly, .. } => poly.is_zero() && space.generic().det().is_zero(),
        Certificate::VanishingCharpoly { coefficients } => {
            coefficients.len() == n
                && coefficients.iter().all(MultiPoly::is_zero)
                && space.generic().charpoly().iter().all(MultiPoly::is_zero)
        }
        Certificate::NonNilpotentWitness {
            point,
            matrix,
            degree,
            coefficient,
        } => {
            space.element(point)? == *matrix
                && space.membership(matrix)?
                && !coefficient.is_zero()
                && *degree < n
                && matrix.charpoly()?[*degree] == *coefficient
        }
    })
}

/// For nilindex `p <= 4`: `P = 1` on `V_1 ⊕ V_2` and `P = 3` on `V_3 ⊕ V_4`,
/// where `V_k` complements `g^k` in `g^{k-1}`. Every triple bracket lands in
/// `V_3 ⊕ V_4` and vanishes unless all three arguments have weight one, so
/// `P` is a prederivation with determinant `3^{dim V_3 + dim V_4}`.
pub fn grading_prederivation(g: &LieAlgebra) -> Result<RatMatrix> {
    let p = g.nilindex().ok_or(Error::NotNilpotent)?;
    if p >= 5 {
        return Err(Error::Hypothesis(format!("nilindex must be at most 4, got {p}")));
    }
    let flag = g.filtration_complements()?;
    let mut weights = Vec::new();
    for (k, block) in flag.blocks.iter().enumerate() {
        let w = if k < 2 { int(1) } else { int(3) };
        weights.extend(std::iter::repeat_n(w, block.len()));
    }
    let basis = RatMatrix::from_columns(&flag.adapted_basis())?;
    let p_matrix = basis.mul(&RatMatrix::from_diagonal(&weights))?.mul(&basis.inverse()?)?;
    let heavy: usize = flag.blocks.iter().skip(2).map(Vec::len).sum();
    if !is_prederivation(g, &p_matrix) {
        return Err(Error::Inconsistent("grading map is not a prederivation".into()));
    }
    if p_matrix.det()? != pow(&int(3), heavy as i64) {
        return Err(Error::Inconsistent("grading map has unexpected determinant".into()));
    }
    Ok(p_matrix)
}

/// Both solution spaces and all four predicates, with internal consistency
/// checks: certificates re-verify and the implication lattice holds.
pub fn classify(g: &LieAlgebra, seed: u64) -> Result<ClassificationReport> {
    if let Some(v) = g.jacobi_check().first() {
        return Err(Error::Hypothesis(format!(
            "not a Lie algebra: Jacobi fails on e{}, e{}, e{}",
            v.triple[0], v.triple[1], v.triple[2]
        )));
    }
    let der = derivation_space(g);
    let pder = prederivation_space(g);
    classify_spaces(&der, &pder, seed)
}

/// [`classify`] on precomputed spaces.
pub fn classify_spaces(der: &SolutionSpace, pder: &SolutionSpace, seed: u64) -> Result<ClassificationReport> {
    if der.kind() != SpaceKind::Derivation || pder.kind() != SpaceKind::Prederivation {
        return Err(Error::Hypothesis("expected Der and Pder spaces".into()));
    }
    let g = der.algebra();
    let report = ClassificationReport {
        algebra: g.name().to_string(),
        dim: g.dim(),
        dim_der: der.dim(),
        dim_pder: pder.dim(),
        admits_nonsingular_derivation: exists_nonsingular(der, seed)?,
        admits_nonsingular_prederivation: exists_nonsingular(pder, seed)?,
        characteristically_nilpotent: all_nilpotent(der, seed)?,
        strongly_nilpotent: all_nilpotent(pder, seed)?,
    };
    let checks = [
        (der, &report.admits_nonsingular_derivation),
        (pder, &report.admits_nonsingular_prederivation),
        (der, &report.characteristically_nilpotent),
        (pder, &report.strongly_nilpotent),
    ];
    for (space, decision) in checks {
        for cert in &decision.certificates {
            if !verify_certificate(space, cert)? {
                return Err(Error::Inconsistent(format!("a {} certificate failed to re-verify", space.kind())));
            }
        }
    }
    if let Some(v) = report.lattice_violations().first() {
        return Err(Error::Inconsistent(format!("implication violated: {v}")));
    }
    Ok(report)
}

/// Classifies each algebra independently in parallel.
pub fn classify_batch(algebras: &[LieAlgebra], seed: u64) -> Vec<Result<ClassificationReport>> {
    algebras.par_iter().map(|g| classify(g, seed)).collect()
}

impl Decision {
    pub fn witness_matrix(&self) -> Option<&RatMatrix> {
        self.certificates.iter().find_map(|c| match c {
            Certificate::Witness { matrix, .. } => Some(matrix),
            _ => None,
        })
    }
}
