//! Acceptance gate: one line per criterion, with its runtime limit.
//!
//! Run with `cargo test -p relmin-core --test acceptance`. The process exits
//! nonzero if any criterion fails or overruns its limit.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use relmin::absolute::{archimedean_witness, AbsValue};
use relmin::cayley_dickson::find_composition_violation;
use relmin::heisenberg::separatedness_witness;
use relmin::sampling::Sampler;
use relmin::witness::{
    break_compatibility, check_shrink, escalate_unbounded, kronecker_oracle, EscalationRequest, NeighborhoodOracle,
};
use relmin::{
    run_verify, Error, HeisenbergGroup, InnerProduct, Pairing, Rational, Report, Strategy, Suite, VerifyConfig,
};

const SEED: u64 = 20_240_611;
const MAGNITUDE: u32 = 10;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn verify(suite: Suite, level: u32, dim: usize, samples: usize) -> Result<Report, String> {
    let config = VerifyConfig {
        suite,
        samples,
        seed: SEED,
        level,
        dim,
        coeff_magnitude: MAGNITUDE,
    };
    run_verify(&config).map_err(|e| e.to_string())
}

/// Requires each named property to be present and passing.
fn require(report: &Report, names: &[&str]) -> Result<(), String> {
    for name in names {
        let p = report
            .property(name)
            .ok_or_else(|| format!("{} level {}: no property {name}", report.suite, report.config.level))?;
        ensure(p.passed(), || {
            format!(
                "{} level {} dim {}: {name} failed {}/{}: {}",
                report.suite,
                report.config.level,
                report.config.dim,
                p.failed,
                p.checked,
                p.counterexample.clone().unwrap_or_default()
            )
        })?;
    }
    Ok(())
}

fn composition() -> Check {
    let s = Sampler::new(SEED, MAGNITUDE);
    for level in 0..=3 {
        let bad = Strategy::default().find_first(1000, |i| {
            let mut rng = s.rng("acceptance_composition", i);
            let (x, y) = (s.cd(&mut rng, level), s.cd(&mut rng, level));
            let ok = x.mul(&y).unwrap().norm_sq() == x.norm_sq() * y.norm_sq();
            (!ok).then_some((x, y))
        });
        if let Some((x, y)) = bad {
            return Err(format!("level {level}: N(xy) != N(x)N(y) for x = {x}, y = {y}"));
        }
    }
    let hit = find_composition_violation(4, 1)
        .map_err(|e| e.to_string())?
        .ok_or("no level-4 violation with bound 1")?;
    let product = hit.x.mul(&hit.y).unwrap().norm_sq();
    ensure(
        product == hit.product_norm && product != hit.x.norm_sq() * hit.y.norm_sq(),
        || "reported level-4 violation does not recheck".into(),
    )?;
    Ok(format!(
        "4000 pairs exact; sedenion pair x = {}, y = {} with N(x)N(y) = {}, N(xy) = {}",
        hit.x, hit.y, hit.norm_product, hit.product_norm
    ))
}

fn algebra_identities() -> Check {
    for level in 0..=3 {
        let r = verify(Suite::CdAxioms, level, 1, 500)?;
        require(
            &r,
            &["conjugate_anti_automorphism", "quadratic_identity", "two_sided_inverse"],
        )?;
        if level == 3 {
            require(&r, &["alternativity", "exists_nonzero_associator"])?;
        }
    }
    let r = verify(Suite::CdAxioms, 4, 1, 500)?;
    require(&r, &["exists_alternativity_violation"])?;
    Ok(
        "levels 0-3 identities on 500 samples; octonion associator and sedenion alternativity counterexamples found"
            .into(),
    )
}

fn heisenberg_axioms() -> Check {
    let s = Sampler::new(SEED, MAGNITUDE);
    let mut configs = 0;
    for level in [0, 2, 3] {
        for dim in 1..=4 {
            for pairing in Pairing::BOTH {
                let g = HeisenbergGroup::new(InnerProduct::new(level, dim, pairing).unwrap());
                let bad = Strategy::default().find_first(1000, |i| {
                    let mut rng = s.rng("acceptance_heisenberg", i);
                    let (u, v, t) = (
                        s.heisenberg(&mut rng, &g),
                        s.heisenberg(&mut rng, &g),
                        s.heisenberg(&mut rng, &g),
                    );
                    let assoc =
                        g.mul(&g.mul(&u, &v).unwrap(), &t).unwrap() == g.mul(&u, &g.mul(&v, &t).unwrap()).unwrap();
                    let e = g.identity();
                    let ident = g.mul(&u, &e).unwrap() == u && g.mul(&e, &u).unwrap() == u;
                    let inv = g.inverse(&u).unwrap();
                    let inverse = g.is_identity(&g.mul(&u, &inv).unwrap()) && g.is_identity(&g.mul(&inv, &u).unwrap());
                    let comm = i >= 500 || g.commutator(&u, &v).unwrap() == g.commutator_closed_form(&u, &v).unwrap();
                    (!(assoc && ident && inverse && comm)).then(|| format!("{assoc} {ident} {inverse} {comm}"))
                });
                if let Some(flags) = bad {
                    return Err(format!(
                        "level {level} dim {dim} {pairing:?}: assoc/identity/inverse/commutator = {flags}"
                    ));
                }
                configs += 1;
            }
        }
    }
    Ok(format!(
        "{configs} groups, 1000 samples each, commutator closed form on 500"
    ))
}

fn matrix_realization() -> Check {
    let r = verify(Suite::MatrixRealization, 0, 2, 500)?;
    require(&r, &["xf_homomorphism", "fx_homomorphism"])?;
    let r = verify(Suite::MatrixRealization, 2, 2, 500)?;
    require(&r, &["fx_homomorphism", "xf_exists_homomorphism_failure"])?;
    let witness = r
        .property("xf_exists_homomorphism_failure")
        .and_then(|p| p.witness.clone())
        .ok_or("level-2 x_then_f counterexample not reported")?;
    ensure(witness.get("u1").is_some() && witness.get("u2").is_some(), || {
        "counterexample lacks the offending pair".into()
    })?;
    Ok(
        "homomorphism on 500 pairs (level 0 both pairings, level 2 f_then_x); level-2 x_then_f counterexample reported"
            .into(),
    )
}

fn unitriangular() -> Check {
    let mut corners = 0;
    for n in 1..=6 {
        let r = verify(Suite::ReductionIso, 0, n, 200)?;
        ensure(r.passed(), || {
            let bad = r.properties.iter().find(|p| !p.passed()).unwrap();
            format!(
                "n = {n}: {} failed: {}",
                bad.name,
                bad.counterexample.clone().unwrap_or_default()
            )
        })?;
        ensure(r.property("corner_mapping").is_some(), || {
            format!("n = {n}: corner mapping missing")
        })?;
        corners += r
            .properties
            .iter()
            .filter(|p| p.name.starts_with("corner_") && p.name.ends_with("_abelian"))
            .count();
    }
    Ok(format!(
        "n = 1..6: {corners} admissible corners, tilde/reduction on 200 pairs per i, corner mapping exact"
    ))
}

fn compatibility_break() -> Check {
    let s = Sampler::new(SEED, MAGNITUDE);
    let dim = 3;
    for level in [0, 2, 3] {
        let w = InnerProduct::new(level, dim, Pairing::XThenF).unwrap();
        for i in 0..100 {
            let mut rng = s.rng("acceptance_break", i);
            let eps0 = s.nonzero_rational(&mut rng).abs();
            let mut xbar = s.vector(&mut rng, level, dim);
            // Every nonzero coefficient has |c| ≥ 1/M, so N(t·y) ≥ t²/M² > 1/ε₀².
            let t = Rational::from_integer((eps0.recip().unwrap().floor() + 1) * MAGNITUDE);
            let slot = rand::Rng::random_range(&mut rng, 0..dim);
            xbar[slot] = s.nonzero_cd(&mut rng, level).scale(&t);
            let out = break_compatibility(&w, &xbar, &eps0).map_err(|e| format!("level {level}: {e}"))?;
            ensure(out.max_abs_sq < eps0.square(), || {
                format!("level {level}: ā not in the ε₀-ball")
            })?;
            ensure(w.eval(&xbar, &out.a).unwrap().is_one(), || {
                format!("level {level}: w(x̄, ā) != 1")
            })?;
        }
        let mut rng = s.rng("acceptance_break_pre", level as usize);
        let small = s.vector(&mut rng, level, dim);
        let eps0 = Rational::new(1, (1i64 << level) * i64::from(MAGNITUDE)).unwrap();
        let rejects = [
            break_compatibility(&w, &small, &eps0),
            break_compatibility(&w, &small, &Rational::zero()),
            break_compatibility(&w, &small[..dim - 1], &eps0),
        ];
        for (k, r) in rejects.iter().enumerate() {
            ensure(r.is_err(), || format!("level {level}: invalid input {k} accepted"))?;
        }
        ensure(matches!(rejects[0], Err(Error::Precondition(_))), || {
            format!("level {level}: missing escape coordinate not reported as a precondition failure")
        })?;
    }
    Ok("300 witnesses exact at levels 0, 2, 3; precondition violations rejected".into())
}

fn escalation() -> Check {
    let oracle = kronecker_oracle(Rational::new(1, 2).unwrap(), Rational::new(1, 2).unwrap()).unwrap();
    let base = oracle.base();
    let s = Sampler::new(SEED, MAGNITUDE);
    for m in 0..=20u32 {
        let req = EscalationRequest::new(2, m, Rational::one()).unwrap();
        let out = escalate_unbounded(&oracle, &base, &req).map_err(|e| format!("m = {m}: {e}"))?;
        ensure(out.norm_sq >= Rational::from_integer(1u64 << (2 * m)), || {
            format!("m = {m}: A(x)² below 4^m")
        })?;
        let outside = check_shrink(
            &oracle,
            &base,
            &req.multiplier(),
            20,
            &mut s.rng("acceptance_shrink", m as usize),
        );
        ensure(outside.is_empty(), || {
            format!("m = {m}: {} sums left the neighborhood", outside.len())
        })?;
    }
    Ok("m = 0..20: A(x)² ≥ 4^m exact, 420 sumset samples inside".into())
}

fn absolute_values() -> Check {
    for level in 0..=3 {
        let r = verify(Suite::AbsAxioms, level, 1, 1000)?;
        ensure(r.passed(), || {
            let bad = r.properties.iter().find(|p| !p.passed()).unwrap();
            format!("level {level}: {} failed", bad.name)
        })?;
        let mut names = vec![
            "euclidean_multiplicativity".to_string(),
            "euclidean_triangle".to_string(),
        ];
        for p in [2, 3, 5] {
            for axiom in ["multiplicativity", "strong_triangle", "strong_triangle_equality"] {
                names.push(format!("padic{p}_{axiom}"));
            }
        }
        require(&r, &names.iter().map(String::as_str).collect::<Vec<_>>())?;
    }
    let euclid = archimedean_witness(&AbsValue::euclidean(0).unwrap(), 10);
    ensure(euclid == Some(2), || {
        format!("Euclidean archimedean witness {euclid:?}")
    })?;
    for p in [2, 3, 5] {
        let found = archimedean_witness(&AbsValue::padic(p).unwrap(), 10_000);
        ensure(found.is_none(), || format!("{p}-adic archimedean witness {found:?}"))?;
    }
    Ok("1000 pairs per level; p = 2, 3, 5 ultrametric; witness 2 for Euclidean, none ≤ 10^4 for p-adic".into())
}

fn separatedness() -> Check {
    let s = Sampler::new(SEED, MAGNITUDE);
    for level in [0, 2, 3] {
        for dim in 1..=4 {
            for pairing in Pairing::BOTH {
                let w = InnerProduct::new(level, dim, pairing).unwrap();
                for i in 0..200 {
                    let mut rng = s.rng("acceptance_separated", i);
                    let x0 = s.nonzero_vector(&mut rng, level, dim);
                    let f0 = s.nonzero_vector(&mut rng, level, dim);
                    let (x, f) = separatedness_witness(&w, &x0, &f0).map_err(|e| e.to_string())?;
                    let ok = !w.eval(&x0, &f).unwrap().is_zero() && !w.eval(&x, &f0).unwrap().is_zero();
                    ensure(ok, || format!("level {level} dim {dim} {pairing:?}: sample {i}"))?;
                }
            }
        }
    }
    Ok("200 nonzero pairs at levels 0, 2, 3, dims 1-4, both pairings".into())
}

fn determinism() -> Check {
    let mut runs = 0;
    for suite in Suite::ALL {
        let level = if suite == Suite::ReductionIso { 0 } else { 2 };
        let config = VerifyConfig {
            suite,
            samples: 30,
            seed: SEED,
            level,
            dim: 2,
            coeff_magnitude: MAGNITUDE,
        };
        let first = relmin::verify::run_verify_with(&config, Strategy::Parallel)
            .unwrap()
            .to_json();
        let second = relmin::verify::run_verify_with(&config, Strategy::Parallel)
            .unwrap()
            .to_json();
        let sequential = relmin::verify::run_verify_with(&config, Strategy::Sequential)
            .unwrap()
            .to_json();
        ensure(first == second, || format!("{suite}: repeated runs differ"))?;
        ensure(first == sequential, || {
            format!("{suite}: sequential and parallel reports differ")
        })?;
        runs += 1;
    }
    Ok(format!(
        "{runs} suites byte-identical across repeated runs and across strategies"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Check); 10] = [
        ("composition identity", 10, composition),
        ("algebra identities", 10, algebra_identities),
        ("Heisenberg group axioms", 20, heisenberg_axioms),
        ("matrix realization", 10, matrix_realization),
        ("unitriangular suite", 20, unitriangular),
        ("compatibility-breaking witness", 5, compatibility_break),
        ("escalation engine", 5, escalation),
        ("absolute-value axioms", 10, absolute_values),
        ("separatedness", 5, separatedness),
        ("determinism", 60, determinism),
    ];
    let mut failures = 0;
    for (k, (title, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over time limit; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {:>2} {status} {title} ({:.2} s, limit {limit} s): {detail}",
            k + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
