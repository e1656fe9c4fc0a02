//! Built-in algebras with their expected classification data.
//!
//! Names are addressed from the command line as `catalog:NAME`. Families take
//! named rational parameters, e.g. `g_7_4` with `lambda` or `g_n_alpha` with
//! `n` and `alpha`.

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{AlgebraBuilder, LieAlgebra};
use crate::error::{Error, Result};
use crate::filiform::{build_filiform, AlphaVector};
use crate::rational::{format_rational, int, rat, Rational};

/// Expected classification data; `None` where nothing is asserted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub dim_der: Option<usize>,
    pub dim_pder: Option<usize>,
    pub p_inv_exists: Option<bool>,
    pub d_inv_exists: Option<bool>,
    pub char_nilpotent: Option<bool>,
    pub strongly_nilpotent: Option<bool>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub rule: &'static str,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
    /// The encoding depends on a choice of convention for deformation
    /// cocycles and is not a verbatim transcription.
    pub convention_dependent: bool,
}

/// An instantiated entry.
#[derive(Clone, Debug)]
pub struct Instance {
    pub algebra: LieAlgebra,
    pub expected: Expected,
    pub convention_dependent: bool,
}

const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "g_7_1",
        summary: "7-dim strongly nilpotent, filiform",
        params: &[],
        convention_dependent: false,
    },
    CatalogEntry {
        name: "g_7_4",
        summary: "7-dim strongly nilpotent family",
        params: &[ParamSpec {
            name: "lambda",
            rule: "any rational",
        }],
        convention_dependent: false,
    },
    CatalogEntry {
        name: "g_7_5",
        summary: "7-dim, only singular derivations but a non-singular prederivation",
        params: &[],
        convention_dependent: false,
    },
    CatalogEntry {
        name: "g_7_7",
        summary: "7-dim strongly nilpotent",
        params: &[],
        convention_dependent: false,
    },
    CatalogEntry {
        name: "remark_algebra",
        summary: "7-dim filiform, characteristically nilpotent but not strongly nilpotent",
        params: &[],
        convention_dependent: false,
    },
    CatalogEntry {
        name: "strongly_nilpotent_family",
        summary: "filiform family all of whose prederivations are nilpotent",
        params: &[ParamSpec {
            name: "n",
            rule: "integer >= 7",
        }],
        convention_dependent: false,
    },
    CatalogEntry {
        name: "g_n_alpha",
        summary: "characteristically nilpotent family with a non-singular prederivation",
        params: &[
            ParamSpec {
                name: "n",
                rule: "integer >= 7",
            },
            ParamSpec {
                name: "alpha",
                rule: "nonzero rational",
            },
        ],
        convention_dependent: false,
    },
    CatalogEntry {
        name: "mu11_71",
        summary: "11-dim filiform, non-singular prederivation but no non-singular derivation",
        params: &[],
        convention_dependent: false,
    },
    CatalogEntry {
        name: "mu11_62",
        summary: "11-dim filiform family, non-singular prederivation but no non-singular derivation",
        params: &[ParamSpec {
            name: "beta",
            rule: "nonzero rational",
        }],
        convention_dependent: false,
    },
    CatalogEntry {
        name: "mu11_81",
        summary: "11-dim filiform, non-singular prederivation but no non-singular derivation",
        params: &[],
        convention_dependent: false,
    },
    CatalogEntry {
        name: "mu11_89",
        summary: "11-dim filiform, non-singular prederivation but no non-singular derivation",
        params: &[],
        convention_dependent: false,
    },
    CatalogEntry {
        name: "mu11_16",
        summary: "11-dim filiform, non-singular prederivation but no non-singular derivation",
        params: &[],
        convention_dependent: false,
    },
    CatalogEntry {
        name: "mu11_4_00",
        summary: "11-dim filiform, non-singular prederivation but no non-singular derivation",
        params: &[],
        convention_dependent: false,
    },
    CatalogEntry {
        name: "mu11_96a",
        summary: "11-dim filiform with alpha_{2,9} = alpha_{2,11} = 1",
        params: &[],
        convention_dependent: true,
    },
    CatalogEntry {
        name: "mu11_101a",
        summary: "11-dim filiform with alpha_{2,10} = alpha_{2,11} = 1",
        params: &[],
        convention_dependent: true,
    },
    CatalogEntry {
        name: "heisenberg3",
        summary: "3-dim Heisenberg algebra",
        params: &[],
        convention_dependent: false,
    },
    CatalogEntry {
        name: "abelian",
        summary: "abelian algebra of dimension n",
        params: &[ParamSpec {
            name: "n",
            rule: "integer >= 1",
        }],
        convention_dependent: false,
    },
    CatalogEntry {
        name: "sl2",
        summary: "simple algebra sl(2) in the basis h, e, f",
        params: &[],
        convention_dependent: false,
    },
    CatalogEntry {
        name: "model_filiform",
        summary: "[e_1, e_i] = e_{i+1} only",
        params: &[ParamSpec {
            name: "n",
            rule: "integer >= 3",
        }],
        convention_dependent: false,
    },
    CatalogEntry {
        name: "free_nilpotent_2_3",
        summary: "free 2-step nilpotent algebra on 3 generators",
        params: &[],
        convention_dependent: false,
    },
];

pub fn list() -> &'static [CatalogEntry] {
    ENTRIES
}

pub fn entry(name: &str) -> Result<&'static CatalogEntry> {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownAlgebra(name.to_string()))
}

pub type Params = BTreeMap<String, Rational>;

/// Parses `k=v` pairs as given on the command line.
pub fn parse_params<'a>(pairs: impl IntoIterator<Item = &'a str>) -> Result<Params> {
    let mut out = Params::new();
    for pair in pairs {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::Parameter(format!("expected k=v, got {pair:?}")))?;
        out.insert(k.trim().to_string(), crate::rational::parse_rational(v)?);
    }
    Ok(out)
}

pub fn get(name: &str, params: &Params) -> Result<LieAlgebra> {
    Ok(instance(name, params)?.algebra)
}

/// Builds the algebra and its expected data.
pub fn instance(name: &str, params: &Params) -> Result<Instance> {
    let spec = entry(name)?;
    for key in params.keys() {
        if !spec.params.iter().any(|p| p.name == key) {
            return Err(Error::Parameter(format!("{name} takes no parameter {key:?}")));
        }
    }
    let param = |key: &str| -> Result<Rational> {
        params
            .get(key)
            .cloned()
            .ok_or_else(|| Error::Parameter(format!("{name} needs parameter {key:?}")))
    };
    let dimension = |min: usize| -> Result<usize> {
        let v = param("n")?;
        let n = if v.is_integer() { v.to_integer().to_usize() } else { None };
        match n {
            Some(n) if n >= min => Ok(n),
            _ => Err(Error::Parameter(format!("{name}: n must be an integer >= {min}, got {}", format_rational(&v)))),
        }
    };
    let nonzero = |key: &str| -> Result<Rational> {
        let v = param(key)?;
        if v.is_zero() {
            return Err(Error::Parameter(format!("{name}: {key} must be nonzero")));
        }
        Ok(v)
    };
    let strongly = Expected {
        p_inv_exists: Some(false),
        d_inv_exists: Some(false),
        char_nilpotent: Some(true),
        strongly_nilpotent: Some(true),
        ..Expected::default()
    };
    let pder_only = Expected {
        p_inv_exists: Some(true),
        d_inv_exists: Some(false),
        ..Expected::default()
    };
    let graded = |der: Option<usize>, pder: Option<usize>| Expected {
        dim_der: der,
        dim_pder: pder,
        p_inv_exists: Some(true),
        d_inv_exists: Some(true),
        char_nilpotent: Some(false),
        strongly_nilpotent: Some(false),
    };
    let (algebra, expected) = match name {
        "g_7_1" => (
            filiform_chain("g_7_1", 7, 6)
                .bracket(2, 3, &[(6, 1)])
                .bracket(2, 4, &[(7, 1)])
                .bracket(2, 5, &[(7, 1)])
                .bracket(3, 4, &[(7, -1)])
                .build()?,
            Expected {
                dim_der: Some(10),
                dim_pder: Some(13),
                ..strongly.clone()
            },
        ),
        "g_7_4" => {
            let lambda = param("lambda")?;
            (
                AlgebraBuilder::new(format!("g_7_4({})", format_rational(&lambda)), 7)
                    .bracket(1, 2, &[(3, 1)])
                    .bracket(1, 3, &[(4, 1)])
                    .bracket_rat(1, 4, &[(6, Rational::one()), (7, lambda)])
                    .bracket(1, 5, &[(7, 1)])
                    .bracket(1, 6, &[(7, 1)])
                    .bracket(2, 3, &[(5, 1)])
                    .bracket(2, 4, &[(7, 1)])
                    .bracket(2, 5, &[(6, 1)])
                    .bracket(3, 5, &[(7, 1)])
                    .build()?,
                Expected {
                    dim_der: Some(10),
                    dim_pder: Some(12),
                    ..strongly.clone()
                },
            )
        }
        "g_7_5" => (
            AlgebraBuilder::new("g_7_5", 7)
                .bracket(1, 2, &[(3, 1)])
                .bracket(1, 3, &[(4, 1)])
                .bracket(1, 4, &[(6, 1), (7, 1)])
                .bracket(1, 6, &[(7, 1)])
                .bracket(2, 3, &[(5, 1)])
                .bracket(2, 5, &[(6, 1)])
                .bracket(3, 5, &[(7, 1)])
                .build()?,
            Expected {
                dim_der: Some(10),
                dim_pder: Some(13),
                p_inv_exists: Some(true),
                d_inv_exists: Some(false),
                char_nilpotent: Some(true),
                strongly_nilpotent: Some(false),
            },
        ),
        "g_7_7" => (
            AlgebraBuilder::new("g_7_7", 7)
                .bracket(1, 2, &[(3, 1)])
                .bracket(1, 3, &[(4, 1)])
                .bracket(1, 4, &[(7, 1)])
                .bracket(1, 5, &[(7, 1)])
                .bracket(1, 6, &[(7, 1)])
                .bracket(2, 3, &[(5, 1)])
                .bracket(2, 4, &[(7, 1)])
                .bracket(2, 5, &[(6, 1)])
                .bracket(3, 5, &[(7, 1)])
                .build()?,
            Expected {
                dim_der: Some(10),
                dim_pder: Some(12),
                ..strongly.clone()
            },
        ),
        "remark_algebra" => (
            filiform_chain("remark_algebra", 7, 6)
                .bracket(2, 3, &[(6, 1), (7, 1)])
                .bracket(2, 4, &[(7, 1)])
                .build()?,
            Expected {
                dim_der: Some(11),
                dim_pder: Some(16),
                p_inv_exists: Some(true),
                d_inv_exists: Some(false),
                char_nilpotent: Some(true),
                strongly_nilpotent: Some(false),
            },
        ),
        "strongly_nilpotent_family" => {
            let n = dimension(7)?;
            let g = filiform_chain(format!("strongly_nilpotent_family({n})"), n, n - 1)
                .bracket(2, 3, &[(n - 1, 1)])
                .bracket(2, 4, &[(n, 1)])
                .bracket(2, 5, &[(n, -1)])
                .bracket(3, 4, &[(n, 1)])
                .build()?;
            let dims = if n == 7 { (Some(10), Some(13)) } else { (None, None) };
            (
                g,
                Expected {
                    dim_der: dims.0,
                    dim_pder: dims.1,
                    ..strongly.clone()
                },
            )
        }
        "g_n_alpha" => {
            let n = dimension(7)?;
            let alpha = nonzero("alpha")?;
            let mut b = filiform_chain(format!("g_n_alpha({n},{})", format_rational(&alpha)), n, n - 1)
                .bracket_rat(2, 3, &[(5, Rational::one()), (n, alpha)]);
            for j in 4..=n - 2 {
                b = b.bracket(2, j, &[(j + 2, 1)]);
            }
            (
                b.build()?,
                Expected {
                    p_inv_exists: Some(true),
                    d_inv_exists: Some(false),
                    char_nilpotent: Some(true),
                    strongly_nilpotent: Some(false),
                    ..Expected::default()
                },
            )
        }
        "mu11_71" => (mu11(name, &[0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0])?, pder_only.clone()),
        "mu11_62" => {
            let beta = nonzero("beta")?;
            let mut values: Vec<Rational> = [0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0].map(int).to_vec();
            values[2] = beta.clone();
            values[9] = rat(1, 2);
            let alpha = AlphaVector::from_ordered(11, &values)?;
            let g = build_filiform(11, &alpha)?.with_name(format!("mu11_62({})", format_rational(&beta)));
            (g, pder_only.clone())
        }
        "mu11_81" => (mu11(name, &[0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0])?, pder_only.clone()),
        "mu11_89" => (mu11(name, &[0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0])?, pder_only.clone()),
        "mu11_16" => (mu11(name, &[1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0])?, pder_only.clone()),
        "mu11_4_00" => {
            let mut values: Vec<Rational> = [1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0].map(int).to_vec();
            values[7] = rat(4, 7);
            values[12] = rat(8, 21);
            let alpha = AlphaVector::from_ordered(11, &values)?;
            (build_filiform(11, &alpha)?.with_name(name), pder_only.clone())
        }
        "mu11_96a" => (mu11(name, &[0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0])?, pder_only.clone()),
        "mu11_101a" => (mu11(name, &[0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0])?, pder_only.clone()),
        "heisenberg3" => (
            AlgebraBuilder::new("heisenberg3", 3).bracket(1, 2, &[(3, 1)]).build()?,
            graded(Some(6), Some(9)),
        ),
        "abelian" => {
            let n = dimension(1)?;
            (
                LieAlgebra::abelian(n)?.with_name(format!("abelian({n})")),
                graded(Some(n * n), Some(n * n)),
            )
        }
        "sl2" => (
            AlgebraBuilder::new("sl2", 3)
                .bracket(1, 2, &[(2, 2)])
                .bracket(1, 3, &[(3, -2)])
                .bracket(2, 3, &[(1, 1)])
                .build()?,
            Expected {
                dim_der: Some(3),
                p_inv_exists: Some(false),
                d_inv_exists: Some(false),
                char_nilpotent: Some(false),
                strongly_nilpotent: Some(false),
                ..Expected::default()
            },
        ),
        "model_filiform" => {
            let n = dimension(3)?;
            (
                filiform_chain(format!("model_filiform({n})"), n, n - 1).build()?,
                graded(None, None),
            )
        }
        "free_nilpotent_2_3" => (
            AlgebraBuilder::new("free_nilpotent_2_3", 6)
                .bracket(1, 2, &[(4, 1)])
                .bracket(1, 3, &[(5, 1)])
                .bracket(2, 3, &[(6, 1)])
                .build()?,
            graded(None, None),
        ),
        _ => unreachable!("entry() accepted {name}"),
    };
    Ok(Instance {
        algebra,
        expected,
        convention_dependent: spec.convention_dependent,
    })
}

/// `[e_1, e_i] = e_{i+1}` for `2 <= i <= last`.
fn filiform_chain(name: impl Into<String>, n: usize, last: usize) -> AlgebraBuilder {
    let mut b = AlgebraBuilder::new(name, n);
    for i in 2..=last {
        b = b.bracket(1, i, &[(i + 1, 1)]);
    }
    b
}

fn mu11(name: &str, tuple: &[i64; 16]) -> Result<LieAlgebra> {
    let values: Vec<Rational> = tuple.iter().map(|&v| int(v)).collect();
    Ok(build_filiform(11, &AlphaVector::from_ordered(11, &values)?)?.with_name(name))
}

/// Every entry instantiated at representative parameters.
pub fn representatives() -> Vec<Instance> {
    let mut out = Vec::new();
    for e in ENTRIES {
        let sets: Vec<Vec<(&str, Rational)>> = match e.name {
            "g_7_4" => vec![vec![("lambda", int(0))], vec![("lambda", int(1))], vec![("lambda", int(2))]],
            "strongly_nilpotent_family" => (7..=9).map(|n| vec![("n", int(n))]).collect(),
            "g_n_alpha" => vec![vec![("n", int(7)), ("alpha", int(1))], vec![("n", int(8)), ("alpha", rat(1, 8))]],
            "mu11_62" => vec![vec![("beta", rat(1, 2))]],
            "abelian" => vec![vec![("n", int(1))], vec![("n", int(3))]],
            "model_filiform" => (3..=6).map(|n| vec![("n", int(n))]).collect(),
            _ => vec![vec![]],
        };
        for set in sets {
            let params: Params = set.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
            out.push(instance(e.name, &params).expect("representative parameters are valid"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pairs: &[(&str, i64)]) -> Params {
        pairs.iter().map(|(k, v)| (k.to_string(), int(*v))).collect()
    }

    #[test]
    fn every_representative_is_a_lie_algebra() {
        for inst in representatives() {
            assert!(inst.algebra.jacobi_check().is_empty(), "{}", inst.algebra.name());
        }
    }

    #[test]
    fn strongly_nilpotent_family_brackets() {
        let g = get("strongly_nilpotent_family", &params(&[("n", 9)])).unwrap();
        assert_eq!(g.structure_constant(1, 2, 7), int(1));
        assert_eq!(g.structure_constant(1, 4, 8), int(-1));
        assert_eq!(g.structure_constant(2, 3, 8), int(1));
        assert_eq!(g.structure_constant(0, 7, 8), int(1));
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(get("nope", &Params::new()), Err(Error::UnknownAlgebra(_))));
        assert!(matches!(get("g_7_4", &Params::new()), Err(Error::Parameter(_))));
        assert!(get("g_n_alpha", &params(&[("n", 8), ("alpha", 0)])).is_err());
        assert!(get("strongly_nilpotent_family", &params(&[("n", 6)])).is_err());
        assert!(get("g_7_1", &params(&[("n", 6)])).is_err());
        assert!(get("abelian", &params(&[("n", 1)])).is_ok());
        let mut frac = Params::new();
        frac.insert("n".into(), rat(7, 2));
        assert!(get("abelian", &frac).is_err());
    }

    #[test]
    fn parse_param_pairs() {
        let p = parse_params(["n=8", "alpha=1/32"]).unwrap();
        assert_eq!(p["alpha"], rat(1, 32));
        assert!(parse_params(["n"]).is_err());
    }
}
