//! Absolute values on the scalar algebras.
//!
//! The Euclidean absolute value `A(x) = √N(x)` is carried by its square, the
//! norm form, so that comparisons such as `A(x) ≥ r` or `A(n) > 1` become
//! rational comparisons. The p-adic absolute value on ℚ takes rational values
//! and is represented exactly.

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cayley_dickson::{CdElement, MAX_LEVEL};
use crate::error::{Error, Result};
use crate::par::Strategy;
use crate::scalar::{int_valuation, sqrt_sum_leq, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AbsValue {
    EuclideanCd { level: u32 },
    Padic { p: u64 },
}

impl AbsValue {
    pub fn euclidean(level: u32) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(Error::UnsupportedLevel(level));
        }
        Ok(AbsValue::EuclideanCd { level })
    }

    pub fn padic(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        Ok(AbsValue::Padic { p })
    }

    /// Level the elements must live at (p-adic values act on ℚ only).
    pub fn level(&self) -> u32 {
        match self {
            AbsValue::EuclideanCd { level } => *level,
            AbsValue::Padic { .. } => 0,
        }
    }

    fn check(&self, x: &CdElement) -> Result<()> {
        if x.level() != self.level() {
            return Err(Error::LevelMismatch {
                expected: self.level(),
                found: x.level(),
            });
        }
        Ok(())
    }

    /// `A(x)²` for the Euclidean value, `|x|_p` for the p-adic one. Both are
    /// monotone in `A(x)`, which is all the axiom checks need.
    pub fn value(&self, x: &CdElement) -> Result<Rational> {
        self.check(x)?;
        Ok(match self {
            AbsValue::EuclideanCd { .. } => x.norm_sq(),
            AbsValue::Padic { p } => padic_abs(&x.coeffs()[0], *p),
        })
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// `A(x)²` under the Euclidean absolute value of the descriptor's level.
pub fn abs_squared(desc: &AbsValue, x: &CdElement) -> Result<Rational> {
    match desc {
        AbsValue::EuclideanCd { .. } => desc.value(x),
        AbsValue::Padic { .. } => Err(Error::Domain("abs_squared needs a Euclidean descriptor".into())),
    }
}

/// p-adic valuation `v_p(q)` of a nonzero rational.
pub fn padic_valuation(q: &Rational, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    Some(int_valuation(&q.numer(), &p) as i64 - int_valuation(&q.denom(), &p) as i64)
}

/// `|q|_p = p^(−v_p(q))`, and `0` at `q = 0`.
pub fn padic_abs(q: &Rational, p: u64) -> Rational {
    match padic_valuation(q, p) {
        None => Rational::zero(),
        Some(v) => {
            let exp = i32::try_from(-v).expect("valuation fits in i32");
            Rational::from_integer(p).pow(exp).expect("p is nonzero")
        }
    }
}

/// The least `n ≤ bound` with `A(n·1) > 1`, if any.
pub fn archimedean_witness(desc: &AbsValue, bound: u64) -> Option<u64> {
    let one = Rational::one();
    (1..=bound).find(|&n| {
        let n_elem = CdElement::scalar(desc.level(), Rational::from_integer(n));
        desc.value(&n_elem).expect("level matches") > one
    })
}

/// Per-axiom outcome of [`verify_axioms`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub checked: usize,
    pub failed: usize,
    pub counterexample: Option<Value>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

fn pair_json(x: &CdElement, y: &CdElement, extra: Value) -> Value {
    let mut v = json!({ "x": x, "y": y });
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    v
}

/// Checks positivity, multiplicativity and the triangle inequality on every
/// sample pair. Violations are report content, not errors.
pub fn verify_axioms(desc: &AbsValue, pairs: &[(CdElement, CdElement)]) -> Result<Vec<AxiomReport>> {
    verify_axioms_with(desc, pairs, Strategy::default())
}

pub fn verify_axioms_with(
    desc: &AbsValue,
    pairs: &[(CdElement, CdElement)],
    strategy: Strategy,
) -> Result<Vec<AxiomReport>> {
    for (x, y) in pairs {
        desc.check(x)?;
        desc.check(y)?;
    }
    let per_pair = strategy.map(pairs.len(), |i| check_pair(desc, &pairs[i]));
    let names: &[&str] = match desc {
        AbsValue::EuclideanCd { .. } => &["positivity", "multiplicativity", "triangle"],
        AbsValue::Padic { .. } => &[
            "positivity",
            "multiplicativity",
            "strong_triangle",
            "strong_triangle_equality",
            "triangle",
        ],
    };
    Ok(names
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let failures = per_pair.iter().filter_map(|row| row[k].as_ref());
            AxiomReport {
                axiom: (*name).to_string(),
                checked: pairs.len(),
                failed: failures.clone().count(),
                counterexample: failures.cloned().next(),
            }
        })
        .collect())
}

fn check_pair(desc: &AbsValue, (x, y): &(CdElement, CdElement)) -> Vec<Option<Value>> {
    let ax = desc.value(x).expect("checked");
    let ay = desc.value(y).expect("checked");
    let sum = x.add(y).expect("same level");
    let a_sum = desc.value(&sum).expect("checked");
    let a_prod = desc.value(&x.mul(y).expect("same level")).expect("checked");

    let positivity = (ax.is_zero() != x.is_zero() || ay.is_zero() != y.is_zero())
        .then(|| pair_json(x, y, json!({ "abs_x": ax, "abs_y": ay })));
    let prod_of_abs = &ax * &ay;
    let multiplicativity =
        (a_prod != prod_of_abs).then(|| pair_json(x, y, json!({ "abs_xy": a_prod, "abs_x_times_abs_y": prod_of_abs })));

    match desc {
        AbsValue::EuclideanCd { .. } => {
            let ok = sqrt_sum_leq(&a_sum, &ax, &ay).expect("norms are nonnegative");
            let triangle =
                (!ok).then(|| pair_json(x, y, json!({ "abs_sq_sum": a_sum, "abs_sq_x": ax, "abs_sq_y": ay })));
            vec![positivity, multiplicativity, triangle]
        }
        AbsValue::Padic { .. } => {
            let max = ax.clone().max(ay.clone());
            let detail = || json!({ "abs_sum": a_sum, "abs_x": ax, "abs_y": ay });
            let strong = (a_sum > max).then(|| pair_json(x, y, detail()));
            let equality = (ax != ay && a_sum != max).then(|| pair_json(x, y, detail()));
            let triangle = (a_sum > &ax + &ay).then(|| pair_json(x, y, detail()));
            vec![positivity, multiplicativity, strong, equality, triangle]
        }
    }
}
