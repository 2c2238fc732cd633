//! Seeded property suites over random samples.
//!
//! A suite is a list of properties; each property is checked over sample
//! indices `0 … samples−1`, every index drawing from its own generator. The
//! indices are evaluated through [`Strategy`], so the parallel and sequential
//! paths produce byte-identical reports.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::absolute::{archimedean_witness, verify_axioms_with, AbsValue};
use crate::cayley_dickson::{find_composition_violation_with, CdElement, MAX_LEVEL};
use crate::error::{Error, Result};
use crate::heisenberg::{
    add_vectors, separatedness_witness, Family, HeisenbergElement, HeisenbergGroup, HeisenbergRecord, InnerProduct,
    Pairing, MAX_SCALAR_LEVEL,
};
use crate::par::Strategy;
use crate::report::PropertyResult;
use crate::sampling::Sampler;
use crate::scalar::Rational;
use crate::unitriangular::{
    admissible_corners, corner_elem, delete_reduction, heisenberg_from_matrix, heisenberg_realization, pad_reduction,
    realization_matrix, tilde_membership,
};
use crate::witness::{
    break_compatibility, check_shrink, coset_projection_eq, escalate_unbounded, kronecker_oracle, EscalationRequest,
    NeighborhoodOracle,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    CdAxioms,
    AbsAxioms,
    HeisenbergAxioms,
    MatrixRealization,
    ReductionIso,
    Witnesses,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::CdAxioms,
        Suite::AbsAxioms,
        Suite::HeisenbergAxioms,
        Suite::MatrixRealization,
        Suite::ReductionIso,
        Suite::Witnesses,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::CdAxioms => "cd_axioms",
            Suite::AbsAxioms => "abs_axioms",
            Suite::HeisenbergAxioms => "heisenberg_axioms",
            Suite::MatrixRealization => "matrix_realization",
            Suite::ReductionIso => "reduction_iso",
            Suite::Witnesses => "witnesses",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub samples: usize,
    pub seed: u64,
    pub level: u32,
    pub dim: usize,
    pub coeff_magnitude: u32,
}

impl VerifyConfig {
    pub fn new(suite: Suite) -> Self {
        VerifyConfig {
            suite,
            samples: 100,
            seed: 0,
            level: 0,
            dim: 2,
            coeff_magnitude: 10,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Precondition("samples must be at least 1".into()));
        }
        if self.coeff_magnitude == 0 {
            return Err(Error::Precondition("coeff_magnitude must be at least 1".into()));
        }
        let max_level = match self.suite {
            Suite::CdAxioms | Suite::AbsAxioms => MAX_LEVEL,
            Suite::ReductionIso => 0,
            _ => MAX_SCALAR_LEVEL,
        };
        if self.level > max_level {
            return Err(Error::Precondition(format!(
                "suite {} supports levels up to {max_level}, got {}",
                self.suite, self.level
            )));
        }
        let needs_dim = matches!(
            self.suite,
            Suite::HeisenbergAxioms | Suite::MatrixRealization | Suite::ReductionIso | Suite::Witnesses
        );
        if needs_dim && self.dim == 0 {
            return Err(Error::Precondition("dim must be at least 1".into()));
        }
        Ok(())
    }

    fn sampler(&self) -> Sampler {
        Sampler::new(self.seed, self.coeff_magnitude)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub config: VerifyConfig,
    pub properties: Vec<PropertyResult>,
    pub exit: i32,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.exit == 0
    }

    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs a suite. An invalid configuration is an error; failed properties are
/// report content and set `exit` to 1.
pub fn run_verify(config: &VerifyConfig) -> Result<Report> {
    run_verify_with(config, Strategy::default())
}

pub fn run_verify_with(config: &VerifyConfig, strategy: Strategy) -> Result<Report> {
    config.validate()?;
    let properties = match config.suite {
        Suite::CdAxioms => cd_axioms(config, strategy),
        Suite::AbsAxioms => abs_axioms(config, strategy)?,
        Suite::HeisenbergAxioms => heisenberg_axioms(config, strategy)?,
        Suite::MatrixRealization => matrix_realization(config, strategy)?,
        Suite::ReductionIso => reduction_iso(config, strategy)?,
        Suite::Witnesses => witnesses(config, strategy)?,
    };
    let exit = if properties.iter().all(PropertyResult::passed) {
        0
    } else {
        1
    };
    Ok(Report {
        suite: config.suite,
        config: *config,
        properties,
        exit,
    })
}

fn unless(ok: bool, detail: impl FnOnce() -> Value) -> Option<Value> {
    (!ok).then(detail)
}

fn on_err<T>(r: Result<T>) -> std::result::Result<T, Value> {
    r.map_err(|e| json!({ "error": e.to_string() }))
}

/// Folds a fallible check into a violation.
fn check(f: impl FnOnce() -> std::result::Result<Option<Value>, Value>) -> Option<Value> {
    f().unwrap_or_else(Some)
}

fn cd_axioms(config: &VerifyConfig, strategy: Strategy) -> Vec<PropertyResult> {
    let s = config.sampler();
    let level = config.level;
    let n = config.samples;
    let pair = |tag: &str, i: usize| {
        let mut rng = s.rng(tag, i);
        (s.cd(&mut rng, level), s.cd(&mut rng, level))
    };
    let triple = |tag: &str, i: usize| {
        let mut rng = s.rng(tag, i);
        (s.cd(&mut rng, level), s.cd(&mut rng, level), s.cd(&mut rng, level))
    };
    let mul = |a: &CdElement, b: &CdElement| a.mul(b).expect("same level");

    let mut props = vec![
        PropertyResult::for_all(strategy, "composition", n, |i| {
            let (x, y) = pair("composition", i);
            let lhs = mul(&x, &y).norm_sq();
            let rhs = x.norm_sq() * y.norm_sq();
            unless(
                lhs == rhs,
                || json!({ "x": x, "y": y, "norm_xy": lhs, "norm_x_norm_y": rhs }),
            )
        }),
        PropertyResult::for_all(strategy, "conjugate_involution", n, |i| {
            let (x, _) = pair("conjugate_involution", i);
            unless(x.conjugate().conjugate() == x, || json!({ "x": x }))
        }),
        PropertyResult::for_all(strategy, "conjugate_anti_automorphism", n, |i| {
            let (x, y) = pair("conjugate_anti_automorphism", i);
            let ok = mul(&x, &y).conjugate() == mul(&y.conjugate(), &x.conjugate());
            unless(ok, || json!({ "x": x, "y": y }))
        }),
        PropertyResult::for_all(strategy, "quadratic_identity", n, |i| {
            let (x, _) = pair("quadratic_identity", i);
            let norm = CdElement::scalar(level, x.norm_sq());
            let trace_real = x.add(&x.conjugate()).expect("same level").as_scalar().is_some();
            let ok = mul(&x, &x.conjugate()) == norm && mul(&x.conjugate(), &x) == norm && trace_real;
            unless(ok, || json!({ "x": x }))
        }),
        PropertyResult::for_all(strategy, "two_sided_inverse", n, |i| {
            let mut rng = s.rng("two_sided_inverse", i);
            let x = s.nonzero_cd(&mut rng, level);
            let inv = x.invert().expect("nonzero");
            unless(
                mul(&x, &inv).is_one() && mul(&inv, &x).is_one(),
                || json!({ "x": x, "inverse": inv }),
            )
        }),
    ];
    if level <= 3 {
        props.push(PropertyResult::for_all(strategy, "alternativity", n, |i| {
            let (x, y) = pair("alternativity", i);
            let left = mul(&x, &mul(&x, &y)) == mul(&mul(&x, &x), &y);
            let right = mul(&mul(&y, &x), &x) == mul(&y, &mul(&x, &x));
            unless(left && right, || json!({ "x": x, "y": y }))
        }));
    } else {
        props.push(PropertyResult::exists(
            strategy,
            "exists_alternativity_violation",
            n,
            |i| {
                let (x, y) = pair("alternativity", i);
                let ok = mul(&x, &mul(&x, &y)) == mul(&mul(&x, &x), &y);
                (!ok).then(|| json!({ "x": x, "y": y }))
            },
        ));
    }
    if level <= 2 {
        props.push(PropertyResult::for_all(strategy, "associativity", n, |i| {
            let (x, y, z) = triple("associativity", i);
            let a = x.associator(&y, &z).expect("same level");
            unless(a.is_zero(), || json!({ "x": x, "y": y, "z": z, "associator": a }))
        }));
    } else {
        props.push(PropertyResult::exists(strategy, "exists_nonzero_associator", n, |i| {
            let (x, y, z) = triple("associativity", i);
            let a = x.associator(&y, &z).expect("same level");
            (!a.is_zero()).then(|| json!({ "x": x, "y": y, "z": z, "associator": a }))
        }));
    }
    if level == MAX_LEVEL {
        let hit = find_composition_violation_with(level, 1, strategy).expect("valid level");
        props.push(PropertyResult {
            name: "exists_structured_composition_violation".into(),
            checked: 1,
            failed: usize::from(hit.is_none()),
            counterexample: None,
            witness: hit.map(|h| serde_json::to_value(h).expect("serializable")),
        });
    }
    props
}

fn abs_axioms(config: &VerifyConfig, strategy: Strategy) -> Result<Vec<PropertyResult>> {
    let s = config.sampler();
    let mut props = Vec::new();
    let mut push_axioms = |prefix: &str, desc: AbsValue, tag: &str| -> Result<()> {
        let level = desc.level();
        let pairs: Vec<(CdElement, CdElement)> = strategy.map(config.samples, |i| {
            let mut rng = s.rng(tag, i);
            (s.cd(&mut rng, level), s.cd(&mut rng, level))
        });
        for r in verify_axioms_with(&desc, &pairs, strategy)? {
            props.push(PropertyResult {
                name: format!("{prefix}_{}", r.axiom),
                checked: r.checked,
                failed: r.failed,
                counterexample: r.counterexample,
                witness: None,
            });
        }
        Ok(())
    };
    let euclid = AbsValue::euclidean(config.level)?;
    push_axioms("euclidean", euclid, "euclidean")?;
    for p in [2, 3, 5] {
        push_axioms(&format!("padic{p}"), AbsValue::padic(p)?, &format!("padic{p}"))?;
    }

    let found = archimedean_witness(&euclid, 10);
    props.push(PropertyResult::single(
        "euclidean_archimedean_witness",
        unless(found == Some(2), || json!({ "bound": 10, "found": found })),
    ));
    for p in [2, 3, 5] {
        let found = archimedean_witness(&AbsValue::padic(p)?, 10_000);
        props.push(PropertyResult::single(
            format!("padic{p}_no_archimedean_witness"),
            found.map(|n| json!({ "bound": 10_000, "found": n })),
        ));
    }
    Ok(props)
}

fn group_for(config: &VerifyConfig, pairing: Pairing) -> Result<HeisenbergGroup> {
    Ok(HeisenbergGroup::new(InnerProduct::new(
        config.level,
        config.dim,
        pairing,
    )?))
}

fn pairing_tag(p: Pairing) -> &'static str {
    match p {
        Pairing::XThenF => "xf",
        Pairing::FThenX => "fx",
    }
}

fn heisenberg_axioms(config: &VerifyConfig, strategy: Strategy) -> Result<Vec<PropertyResult>> {
    let s = config.sampler();
    let n = config.samples;
    let mut props = Vec::new();
    for pairing in Pairing::BOTH {
        let g = group_for(config, pairing)?;
        let tag = pairing_tag(pairing);
        let rec = |u: &HeisenbergElement| HeisenbergRecord::from_element(&g, u);
        let draw = |name: &str, i: usize, k: usize| {
            let mut rng = s.rng(&format!("{tag}_{name}"), i);
            (0..k).map(|_| s.heisenberg(&mut rng, &g)).collect::<Vec<_>>()
        };
        let mul = |a: &HeisenbergElement, b: &HeisenbergElement| on_err(g.mul(a, b));
        let inv = |a: &HeisenbergElement| on_err(g.inverse(a));

        props.push(PropertyResult::for_all(
            strategy,
            format!("{tag}_associativity"),
            n,
            |i| {
                check(|| {
                    let u = draw("associativity", i, 3);
                    let left = mul(&mul(&u[0], &u[1])?, &u[2])?;
                    let right = mul(&u[0], &mul(&u[1], &u[2])?)?;
                    Ok(unless(
                        left == right,
                        || json!({ "u1": rec(&u[0]), "u2": rec(&u[1]), "u3": rec(&u[2]) }),
                    ))
                })
            },
        ));
        props.push(PropertyResult::for_all(strategy, format!("{tag}_identity"), n, |i| {
            check(|| {
                let u = draw("identity", i, 1);
                let e = g.identity();
                let ok = mul(&u[0], &e)? == u[0] && mul(&e, &u[0])? == u[0];
                Ok(unless(ok, || json!({ "u": rec(&u[0]) })))
            })
        }));
        props.push(PropertyResult::for_all(strategy, format!("{tag}_inverse"), n, |i| {
            check(|| {
                let u = draw("inverse", i, 1);
                let v = inv(&u[0])?;
                let ok = g.is_identity(&mul(&u[0], &v)?) && g.is_identity(&mul(&v, &u[0])?);
                Ok(unless(ok, || json!({ "u": rec(&u[0]), "inverse": rec(&v) })))
            })
        }));
        props.push(PropertyResult::for_all(strategy, format!("{tag}_commutator_closed_form"), n, |i| {
            check(|| {
                let u = draw("commutator", i, 2);
                let chain = on_err(g.commutator(&u[0], &u[1]))?;
                let closed = on_err(g.commutator_closed_form(&u[0], &u[1]))?;
                Ok(unless(chain == closed, || {
                    json!({ "u1": rec(&u[0]), "u2": rec(&u[1]), "chain": rec(&chain), "closed_form": rec(&closed) })
                }))
            })
        }));
        props.push(PropertyResult::for_all(
            strategy,
            format!("{tag}_two_step_nilpotent"),
            n,
            |i| {
                check(|| {
                    let u = draw("nilpotent", i, 3);
                    let c = on_err(g.commutator(&u[0], &u[1]))?;
                    let central = Family::CenterA.contains(&c);
                    let nested = on_err(g.commutator(&c, &u[2]))?;
                    Ok(unless(
                        central && g.is_identity(&nested),
                        || json!({ "u1": rec(&u[0]), "u2": rec(&u[1]), "u3": rec(&u[2]) }),
                    ))
                })
            },
        ));
        for fam in Family::ALL.into_iter().filter(|f| f.is_subgroup()) {
            props.push(PropertyResult::for_all(
                strategy,
                format!("{tag}_{}_closed", fam.name()),
                n,
                |i| {
                    check(|| {
                        let u = draw(fam.name(), i, 2);
                        let (a, b) = (fam.project(&u[0]), fam.project(&u[1]));
                        let ok = fam.contains(&mul(&a, &b)?) && fam.contains(&inv(&a)?);
                        Ok(unless(ok, || json!({ "u1": rec(&a), "u2": rec(&b) })))
                    })
                },
            ));
        }
        props.push(PropertyResult::exists(
            strategy,
            format!("{tag}_exists_e_cross_f_escape"),
            n,
            |i| {
                let u = draw("e_cross_f", i, 2);
                let (a, b) = (Family::ECrossF.project(&u[0]), Family::ECrossF.project(&u[1]));
                let prod = g.mul(&a, &b).ok()?;
                (!Family::ECrossF.contains(&prod))
                    .then(|| json!({ "u1": rec(&a), "u2": rec(&b), "product": rec(&prod) }))
            },
        ));
        props.push(PropertyResult::for_all(
            strategy,
            format!("{tag}_separatedness"),
            n,
            |i| {
                check(|| {
                    let mut rng = s.rng(&format!("{tag}_separated"), i);
                    let x0 = s.nonzero_vector(&mut rng, config.level, config.dim);
                    let f0 = s.nonzero_vector(&mut rng, config.level, config.dim);
                    let (x, f) = on_err(separatedness_witness(&g.w, &x0, &f0))?;
                    let ok = !on_err(g.w.eval(&x0, &f))?.is_zero() && !on_err(g.w.eval(&x, &f0))?.is_zero();
                    Ok(unless(ok, || json!({ "x0": x0, "f0": f0, "x": x, "f": f })))
                })
            },
        ));
    }
    Ok(props)
}

fn matrix_realization(config: &VerifyConfig, strategy: Strategy) -> Result<Vec<PropertyResult>> {
    let s = config.sampler();
    let n = config.samples;
    let mut props = Vec::new();
    for pairing in Pairing::BOTH {
        let g = group_for(config, pairing)?;
        let tag = pairing_tag(pairing);
        let rec = |u: &HeisenbergElement| HeisenbergRecord::from_element(&g, u);
        let draw = |name: &str, i: usize, k: usize| {
            let mut rng = s.rng(&format!("{tag}_{name}"), i);
            (0..k).map(|_| s.heisenberg(&mut rng, &g)).collect::<Vec<_>>()
        };
        let realize = |u: &HeisenbergElement| realization_matrix(&g, u).expect("valid element");
        let hom_fails = |u: &[HeisenbergElement]| -> Option<Value> {
            let lhs = realize(&g.mul(&u[0], &u[1]).expect("valid"));
            let rhs = realize(&u[0]).mul(&realize(&u[1])).expect("same shape");
            (lhs != rhs).then(|| {
                json!({ "u1": rec(&u[0]), "u2": rec(&u[1]), "realization_of_product": lhs, "product_of_realizations": rhs })
            })
        };
        let commutative = config.level <= 1;
        if commutative || pairing == Pairing::FThenX {
            props.push(PropertyResult::for_all(
                strategy,
                format!("{tag}_homomorphism"),
                n,
                |i| hom_fails(&draw("homomorphism", i, 2)),
            ));
            props.push(PropertyResult::for_all(
                strategy,
                format!("{tag}_inverse_compatible"),
                n,
                |i| {
                    check(|| {
                        let u = draw("inverse", i, 1);
                        let lhs = on_err(heisenberg_realization(&g, &on_err(g.inverse(&u[0]))?))?;
                        let rhs = on_err(realize(&u[0]).inverse())?;
                        Ok(unless(lhs == rhs, || json!({ "u": rec(&u[0]) })))
                    })
                },
            ));
        } else {
            props.push(PropertyResult::exists(
                strategy,
                format!("{tag}_exists_homomorphism_failure"),
                n,
                |i| hom_fails(&draw("homomorphism", i, 2)),
            ));
        }
        props.push(PropertyResult::for_all(strategy, format!("{tag}_injective"), n, |i| {
            check(|| {
                let u = draw("injective", i, 2);
                let (m0, m1) = (realize(&u[0]), realize(&u[1]));
                let back = on_err(heisenberg_from_matrix(&g, &m0))?;
                let ok = (u[0] == u[1]) == (m0 == m1) && back == u[0];
                Ok(unless(ok, || json!({ "u1": rec(&u[0]), "u2": rec(&u[1]) })))
            })
        }));
        props.push(PropertyResult::for_all(
            strategy,
            format!("{tag}_subset_shapes"),
            n,
            |i| {
                let u = draw("shapes", i, 1);
                let last = config.dim + 2;
                let e = realize(&Family::EOnly.project(&u[0]));
                let f = realize(&Family::FOnly.project(&u[0]));
                let ok = e.support().iter().all(|&(_, j)| j == last) && f.support().iter().all(|&(r, _)| r == 1);
                unless(ok, || json!({ "u": rec(&u[0]) }))
            },
        ));
    }
    Ok(props)
}

fn reduction_iso(config: &VerifyConfig, strategy: Strategy) -> Result<Vec<PropertyResult>> {
    let s = config.sampler();
    let n = config.dim;
    let m = n + 2;
    let samples = config.samples;
    let mut props = Vec::new();
    let scalar = |rng: &mut rand_chacha::ChaCha8Rng| s.cd(rng, 0);

    for (i, j) in admissible_corners(n) {
        props.push(PropertyResult::for_all(
            strategy,
            format!("corner_{i}_{j}_closed_abelian"),
            samples,
            |k| {
                check(|| {
                    let mut rng = s.rng(&format!("corner_{i}_{j}"), k);
                    let (a, b) = (scalar(&mut rng), scalar(&mut rng));
                    let ga = on_err(corner_elem(n, i, j, &a))?;
                    let gb = on_err(corner_elem(n, i, j, &b))?;
                    let sum = on_err(corner_elem(n, i, j, &a.add(&b).expect("level 0")))?;
                    let ab = on_err(ga.mul(&gb))?;
                    let ba = on_err(gb.mul(&ga))?;
                    let inv = on_err(ga.inverse())?;
                    let ok = ab == sum && ba == sum && inv == on_err(corner_elem(n, i, j, &a.neg()))?;
                    Ok(unless(ok, || json!({ "i": i, "j": j, "a": a, "b": b })))
                })
            },
        ));
    }

    for i in 2..m {
        let tag = format!("tilde_{i}");
        let draw = |k: usize| {
            let mut rng = s.rng(&tag, k);
            (
                s.unitriangular(&mut rng, m, 0, i - 1),
                s.unitriangular(&mut rng, m, 0, i - 1),
            )
        };
        props.push(PropertyResult::for_all(
            strategy,
            format!("tilde_{i}_closed"),
            samples,
            |k| {
                check(|| {
                    let (a, b) = draw(k);
                    let ok = on_err(tilde_membership(&a, i))?
                        && on_err(tilde_membership(&on_err(a.mul(&b))?, i))?
                        && on_err(tilde_membership(&on_err(a.inverse())?, i))?;
                    Ok(unless(ok, || json!({ "m1": a, "m2": b })))
                })
            },
        ));
        props.push(PropertyResult::for_all(
            strategy,
            format!("reduction_{i}_homomorphism"),
            samples,
            |k| {
                check(|| {
                    let (a, b) = draw(k);
                    let lhs = on_err(delete_reduction(&on_err(a.mul(&b))?, i))?;
                    let rhs = on_err(on_err(delete_reduction(&a, i))?.mul(&on_err(delete_reduction(&b, i))?))?;
                    Ok(unless(lhs == rhs, || json!({ "m1": a, "m2": b })))
                })
            },
        ));
        props.push(PropertyResult::for_all(
            strategy,
            format!("reduction_{i}_bijective"),
            samples,
            |k| {
                check(|| {
                    let (a, _) = draw(k);
                    let mut rng = s.rng(&format!("{tag}_target"), k);
                    let target = s.unitriangular(&mut rng, m + 1 - i, 0, 0);
                    let preimage = on_err(pad_reduction(&target, i))?;
                    let ok = on_err(pad_reduction(&on_err(delete_reduction(&a, i))?, i))? == a
                        && on_err(tilde_membership(&preimage, i))?
                        && on_err(delete_reduction(&preimage, i))? == target;
                    Ok(unless(ok, || json!({ "m": a, "target": target })))
                })
            },
        ));
    }

    let inner: Vec<(usize, usize)> = admissible_corners(n)
        .into_iter()
        .filter(|&(i, j)| 1 < i && j < m)
        .collect();
    props.push(PropertyResult::for_all(
        strategy,
        "corner_mapping",
        inner.len() * samples,
        |k| {
            let (i, j) = inner[k / samples];
            check(|| {
                let mut rng = s.rng(&format!("corner_map_{i}_{j}"), k % samples);
                let a = scalar(&mut rng);
                let image = on_err(delete_reduction(&on_err(corner_elem(n, i, j, &a))?, i))?;
                let expected = on_err(corner_elem(n + 1 - i, 1, j + 1 - i, &a))?;
                Ok(unless(
                    image == expected,
                    || json!({ "i": i, "j": j, "a": a, "image": image }),
                ))
            })
        },
    ));
    Ok(props)
}

/// Scales a nonzero `y` by an integer `t` with `N(t·y) > 1/ε²`.
fn escaping(y: &CdElement, eps0: &Rational) -> CdElement {
    let inv_eps = eps0.recip().expect("positive");
    let d = Rational::from_integer(inv_eps.floor() + 2);
    let e = Rational::from_integer(y.norm_sq().recip().expect("nonzero").floor() + 2);
    y.scale(&(d * e))
}

fn witnesses(config: &VerifyConfig, strategy: Strategy) -> Result<Vec<PropertyResult>> {
    let s = config.sampler();
    let level = config.level;
    let dim = config.dim;
    let n = config.samples;
    let mut props = Vec::new();

    for pairing in Pairing::BOTH {
        let w = InnerProduct::new(level, dim, pairing)?;
        let tag = pairing_tag(pairing);
        props.push(PropertyResult::for_all(
            strategy,
            format!("{tag}_break_compatibility"),
            n,
            |i| {
                let mut rng = s.rng(&format!("{tag}_break"), i);
                let eps0 = Rational::new(1, rand::Rng::random_range(&mut rng, 1..=20)).expect("nonzero");
                let mut xbar = s.vector(&mut rng, level, dim);
                let slot = rand::Rng::random_range(&mut rng, 0..dim);
                xbar[slot] = escaping(&s.nonzero_cd(&mut rng, level), &eps0);
                check(|| {
                    let out = on_err(break_compatibility(&w, &xbar, &eps0))?;
                    let eps_sq = eps0.square();
                    let first = xbar.iter().position(|x| x.norm_sq() * &eps_sq > Rational::one());
                    let support_ok = out.a.iter().enumerate().all(|(k, a)| (k == out.index) != a.is_zero());
                    let ok = out.max_abs_sq < eps_sq
                        && on_err(w.eval(&xbar, &out.a))?.is_one()
                        && first == Some(out.index)
                        && support_ok;
                    Ok(unless(ok, || json!({ "x": xbar, "eps0": eps0, "a": out.a })))
                })
            },
        ));
    }
    let w = InnerProduct::new(level, dim, Pairing::XThenF)?;
    props.push(PropertyResult::for_all(
        strategy,
        "break_compatibility_precondition",
        n,
        |i| {
            let mut rng = s.rng("break_precondition", i);
            let xbar = s.vector(&mut rng, level, dim);
            // N(x) ≤ 2^ℓ·M², so ε₀ = 1/(2^ℓ·M) leaves no coordinate escaping.
            let eps0 = Rational::new(1, (1i64 << level) * i64::from(s.magnitude)).expect("nonzero");
            match break_compatibility(&w, &xbar, &eps0) {
                Err(Error::Precondition(_)) => None,
                other => Some(json!({ "x": xbar, "eps0": eps0, "result": format!("{other:?}") })),
            }
        },
    ));

    let oracle = kronecker_oracle(Rational::new(1, 2)?, Rational::new(1, 2)?)?;
    let base = oracle.base();
    props.push(PropertyResult::for_all(strategy, "escalation_bound", 21, |m| {
        check(|| {
            let req = on_err(EscalationRequest::new(2, m as u32, Rational::one()))?;
            let out = on_err(escalate_unbounded(&oracle, &base, &req))?;
            let four_m = Rational::from_integer(num_traits::pow(BigInt::from(4), m));
            let ok = out.norm_sq >= four_m && oracle.contains(&base, &out.x);
            Ok(unless(ok, || json!({ "m": m, "x": out.x })))
        })
    }));
    props.push(PropertyResult::for_all(strategy, "shrink_sumset", 21, |m| {
        let mut rng = s.rng("shrink_sumset", m);
        let k = num_traits::pow(BigInt::from(2), m);
        let outside = check_shrink(&oracle, &base, &k, 20, &mut rng);
        unless(outside.is_empty(), || json!({ "m": m, "sums_outside": outside }))
    }));
    props.push(PropertyResult::for_all(strategy, "escape_unbounded", n, |i| {
        let mut rng = s.rng("escape", i);
        let r = s.rational(&mut rng).abs() * Rational::from_integer(1u64 << (i % 40));
        check(|| {
            let x = on_err(oracle.escape(&base, &r))?;
            Ok(unless(
                x >= r && oracle.contains(&base, &x),
                || json!({ "r": r, "x": x }),
            ))
        })
    }));
    props.push(PropertyResult::for_all(strategy, "coset_projection", n, |i| {
        let mut rng = s.rng("coset", i);
        let g = s.vector(&mut rng, level, dim);
        let g2 = s.vector(&mut rng, level, dim);
        let j = rand::Rng::random_range(&mut rng, 1..=dim);
        let mut h = s.vector(&mut rng, level, dim);
        h[j - 1] = CdElement::zero(level);
        let eq = |a: &[CdElement], b: &[CdElement]| coset_projection_eq(a, b, j).expect("valid index");
        let gh = add_vectors(&g, &h);
        let g2h = add_vectors(&g2, &h);
        let ok = eq(&g, &g)
            && eq(&g, &gh)
            && eq(&g, &g2) == eq(&g2, &g)
            && eq(&gh, &g2h) == eq(&g, &g2)
            && (!eq(&g, &gh) || !eq(&gh, &g2) || eq(&g, &g2));
        unless(ok, || json!({ "g": g, "g2": g2, "h": h, "j": j }))
    }));
    Ok(props)
}
