//! Witness constructions behind the minimality arguments.
//!
//! A coarser group topology on ℚ cannot be stored, but the escalation
//! argument only ever asks two things of its neighborhood filter at zero:
//! a neighborhood `W` whose `k`-fold sums stay in a given `V`, and an element
//! of a neighborhood escaping any prescribed ball. [`NeighborhoodOracle`]
//! captures exactly those two capabilities, and [`KroneckerOracle`] is a
//! concrete instance built from the continued-fraction convergents of √2.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cayley_dickson::CdElement;
use crate::error::{Error, Result};
use crate::heisenberg::InnerProduct;
use crate::scalar::Rational;

pub trait NeighborhoodOracle: Sync {
    type Neighborhood: Clone + Debug + Send + Sync;

    /// The neighborhood the oracle was built around.
    fn base(&self) -> Self::Neighborhood;

    fn describe(&self, v: &Self::Neighborhood) -> Value;

    /// A neighborhood `W` with `W + … + W` (`k` terms) inside `v`.
    fn shrink(&self, v: &Self::Neighborhood, k: &BigInt) -> Self::Neighborhood;

    /// Some `x ∈ w` with `A(x) ≥ r`.
    fn escape(&self, w: &Self::Neighborhood, r: &Rational) -> Result<Rational>;

    fn contains(&self, v: &Self::Neighborhood, x: &Rational) -> bool;

    /// A random member of `v`, for spot-checking the shrink contract.
    fn sample_member<R: Rng + ?Sized>(&self, v: &Self::Neighborhood, rng: &mut R) -> Rational;
}

/// `{x ∈ ℚ : dist(x, ℤ) < δ₁, dist(√2·x, ℤ) < δ₂}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KroneckerNeighborhood {
    pub delta1: Rational,
    pub delta2: Rational,
}

/// The group topology on ℚ pulled back along `x ↦ (x, √2·x)` into the torus.
#[derive(Debug, Clone)]
pub struct KroneckerOracle {
    base: KroneckerNeighborhood,
}

pub fn kronecker_oracle(delta1: Rational, delta2: Rational) -> Result<KroneckerOracle> {
    let half = Rational::new(1, 2)?;
    for (name, d) in [("delta1", &delta1), ("delta2", &delta2)] {
        if d.is_negative() || d.is_zero() || d > &half {
            return Err(Error::Precondition(format!("{name} = {d} must lie in (0, 1/2]")));
        }
    }
    Ok(KroneckerOracle {
        base: KroneckerNeighborhood { delta1, delta2 },
    })
}

/// Continued-fraction convergents `p/q` of √2: 1/1, 3/2, 7/5, 17/12, …
pub fn sqrt2_convergents() -> impl Iterator<Item = (BigInt, BigInt)> {
    std::iter::successors(Some((BigInt::one(), BigInt::one())), |(p, q)| {
        Some((p + q * 2u32, p + q))
    })
}

/// Compares `√2·y` with `c` for `y ≥ 0`.
fn sqrt2_times_lt(y: &Rational, c: &Rational) -> bool {
    // √2·y < c  ⇔  c > 0 and 2y² < c²
    !c.is_negative() && !c.is_zero() && Rational::from(2) * y.square() < c.square()
}

fn sqrt2_times_gt(y: &Rational, c: &Rational) -> bool {
    c.is_negative() || Rational::from(2) * y.square() > c.square()
}

/// Decides `dist(√2·x, ℤ) < δ` exactly.
pub fn sqrt2_dist_lt(x: &Rational, delta: &Rational) -> bool {
    let y = x.abs();
    // floor(√2·s/t) = floor(isqrt(2s²) / t)
    let s = y.numer();
    let t = y.denom();
    let floor = (&s * &s * 2u32).sqrt() / &t;
    [floor.clone(), floor + 1].into_iter().any(|p| {
        let p = Rational::from_integer(p);
        sqrt2_times_gt(&y, &(&p - delta)) && sqrt2_times_lt(&y, &(&p + delta))
    })
}

impl NeighborhoodOracle for KroneckerOracle {
    type Neighborhood = KroneckerNeighborhood;

    fn base(&self) -> KroneckerNeighborhood {
        self.base.clone()
    }

    fn describe(&self, v: &KroneckerNeighborhood) -> Value {
        json!({ "kind": "kronecker_sqrt2", "delta1": v.delta1, "delta2": v.delta2 })
    }

    fn shrink(&self, v: &KroneckerNeighborhood, k: &BigInt) -> KroneckerNeighborhood {
        let k = Rational::from_integer(k.clone());
        KroneckerNeighborhood {
            delta1: v.delta1.checked_div(&k).expect("k ≥ 1"),
            delta2: v.delta2.checked_div(&k).expect("k ≥ 1"),
        }
    }

    /// The first convergent denominator `q` of √2 with `q ≥ r` and
    /// `q·δ₂ ≥ 1`; then `|q√2 − p| < 1/q ≤ δ₂`.
    fn escape(&self, w: &KroneckerNeighborhood, r: &Rational) -> Result<Rational> {
        let one = Rational::one();
        let (p, q) = sqrt2_convergents()
            .find(|(_, q)| {
                let q = Rational::from_integer(q.clone());
                &q >= r && &q * &w.delta2 >= one
            })
            .expect("convergent denominators are unbounded");
        let pell = &p * &p - &q * &q * 2u32;
        if pell.abs() != BigInt::one() {
            return Err(Error::Contract(format!("{p}/{q} is not a convergent of √2")));
        }
        Ok(Rational::from_integer(q))
    }

    fn contains(&self, v: &KroneckerNeighborhood, x: &Rational) -> bool {
        x.dist_to_integer() < v.delta1 && sqrt2_dist_lt(x, &v.delta2)
    }

    fn sample_member<R: Rng + ?Sized>(&self, v: &KroneckerNeighborhood, rng: &mut R) -> Rational {
        // A convergent denominator with error below δ₂/2, plus a perturbation
        // t with |t| < δ₁ and √2·|t| < δ₂/2.
        let two = Rational::from(2);
        let skip = rng.random_range(0..4);
        let q = sqrt2_convergents()
            .map(|(_, q)| Rational::from_integer(q))
            .filter(|q| q * &v.delta2 >= two)
            .nth(skip)
            .expect("unbounded");
        let q = if rng.random_bool(0.5) { q } else { -q };
        let q = if rng.random_bool(0.2) { Rational::zero() } else { q };
        let scale = (&v.delta1 * Rational::new(1, 2).unwrap()).min(&v.delta2 * Rational::new(1, 4).unwrap());
        let u = Rational::new(rng.random_range(-99i64..=99), 100).unwrap();
        q + scale * u
    }
}

/// Inputs of the escalation step: `A(n₀) = c > 1`, a power `m` and a radius.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EscalationRequest {
    pub n0: u64,
    pub c_squared: Rational,
    pub m: u32,
    pub r: Rational,
}

impl EscalationRequest {
    /// Uses the Euclidean value on ℚ, so `c² = n₀²`.
    pub fn new(n0: u64, m: u32, r: Rational) -> Result<Self> {
        let c_squared = Rational::from_integer(n0).square();
        if c_squared <= Rational::one() {
            return Err(Error::Precondition(format!("A({n0})² = {c_squared} is not above 1")));
        }
        if r.is_negative() || r.is_zero() {
            return Err(Error::Precondition(format!("radius {r} must be positive")));
        }
        Ok(EscalationRequest { n0, c_squared, m, r })
    }

    pub fn multiplier(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.n0), self.m as usize)
    }

    /// `c^{2m}·r²`.
    pub fn norm_bound(&self) -> Rational {
        self.c_squared.pow(self.m as i32).expect("c² > 1") * self.r.square()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Escalation {
    pub x: Rational,
    pub escaped: Rational,
    pub multiplier: Rational,
    pub shrunk: Value,
    pub norm_sq: Rational,
    pub norm_bound: Rational,
}

/// Produces `x ∈ v` with `A(x)² ≥ c^{2m}·r²`: shrink `v` by `k = n₀^m`,
/// escape the `r`-ball inside the shrunk neighborhood, and scale back by `k`.
/// Every oracle answer is checked exactly.
pub fn escalate_unbounded<O: NeighborhoodOracle>(
    oracle: &O,
    v: &O::Neighborhood,
    req: &EscalationRequest,
) -> Result<Escalation> {
    let k = req.multiplier();
    let w = oracle.shrink(v, &k);
    let escaped = oracle.escape(&w, &req.r)?;
    if !oracle.contains(&w, &escaped) {
        return Err(Error::Contract(format!("escape returned {escaped} outside {:?}", w)));
    }
    if escaped.square() < req.r.square() {
        return Err(Error::Contract(format!(
            "escape returned {escaped}, inside the ball of radius {}",
            req.r
        )));
    }
    let x = Rational::from_integer(k.clone()) * &escaped;
    if !oracle.contains(v, &x) {
        return Err(Error::Contract(format!(
            "{k}-fold sum {x} left the neighborhood {:?}",
            v
        )));
    }
    let norm_sq = x.square();
    let norm_bound = req.norm_bound();
    if norm_sq < norm_bound {
        return Err(Error::Contract(format!("A(x)² = {norm_sq} is below {norm_bound}")));
    }
    Ok(Escalation {
        x,
        escaped,
        multiplier: Rational::from_integer(k),
        shrunk: oracle.describe(&w),
        norm_sq,
        norm_bound,
    })
}

/// Spot-checks the shrink contract: draws `samples` random `k`-fold sums of
/// members of `shrink(v, k)` and returns those that fall outside `v`.
///
/// Each sum uses at most eight distinct members with multiplicities adding
/// up to `k`, so huge `k` stays cheap.
pub fn check_shrink<O: NeighborhoodOracle, R: Rng + ?Sized>(
    oracle: &O,
    v: &O::Neighborhood,
    k: &BigInt,
    samples: usize,
    rng: &mut R,
) -> Vec<Rational> {
    let w = oracle.shrink(v, k);
    let mut escaped = Vec::new();
    for _ in 0..samples {
        let distinct = if k < &BigInt::from(8) {
            usize::try_from(k).expect("small")
        } else {
            8
        };
        let members: Vec<Rational> = (0..distinct)
            .map(|_| loop {
                let m = oracle.sample_member(&w, rng);
                if oracle.contains(&w, &m) {
                    break m;
                }
            })
            .collect();
        // Split k into `distinct` positive parts.
        let mut mults = vec![BigInt::one(); distinct];
        let mut rest: BigInt = k - distinct;
        for (idx, mult) in mults.iter_mut().enumerate() {
            if idx + 1 == distinct {
                *mult += &rest;
            } else if !rest.is_zero() {
                let part = &rest * BigInt::from(rng.random_range(0u32..=100)) / BigInt::from(100u32);
                *mult += &part;
                rest -= part;
            }
        }
        let sum: Rational = members
            .iter()
            .zip(&mults)
            .map(|(x, c)| x * Rational::from_integer(c.clone()))
            .sum();
        if !oracle.contains(v, &sum) {
            escaped.push(sum);
        }
    }
    escaped
}

/// Output of [`break_compatibility`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompatibilityBreak {
    pub a: Vec<CdElement>,
    pub index: usize,
    pub w_value: CdElement,
    pub max_abs_sq: Rational,
}

/// Given `x̄` with some `A(xᵢ) > 1/ε₀`, returns `ā` supported on the first
/// such index with `aᵢ = xᵢ⁻¹`, so that `ā` lies in the `ε₀`-ball of the
/// max-metric while `w(x̄, ā) = 1`.
pub fn break_compatibility(w: &InnerProduct, xbar: &[CdElement], eps0: &Rational) -> Result<CompatibilityBreak> {
    w.check_vector(xbar)?;
    if eps0.is_negative() || eps0.is_zero() {
        return Err(Error::Precondition(format!("eps0 = {eps0} must be positive")));
    }
    let eps_sq = eps0.square();
    let one = Rational::one();
    let norms: Vec<Rational> = xbar.iter().map(CdElement::norm_sq).collect();
    let Some(index) = norms.iter().position(|n| n * &eps_sq > one) else {
        let largest = norms.iter().max().cloned().unwrap_or_default();
        return Err(Error::Precondition(format!(
            "no escaping coordinate: largest squared norm {largest} does not exceed 1/eps0² = {}",
            eps_sq.recip()?
        )));
    };
    let mut a = w.zero_vector();
    a[index] = xbar[index].invert()?;
    let max_abs_sq = a.iter().map(CdElement::norm_sq).max().expect("dim ≥ 1");
    if max_abs_sq >= eps_sq {
        return Err(Error::Contract(format!(
            "witness has squared norm {max_abs_sq} ≥ {eps_sq}"
        )));
    }
    let w_value = w.eval(xbar, &a)?;
    if !w_value.is_one() {
        return Err(Error::Contract(format!("w(x, a) = {w_value} instead of 1")));
    }
    Ok(CompatibilityBreak {
        a,
        index,
        w_value,
        max_abs_sq,
    })
}

/// Whether `g` and `g2` lie in the same coset of `H = {v : v_j = 0}`, i.e.
/// agree in coordinate `j` (1-based).
pub fn coset_projection_eq<T: PartialEq>(g: &[T], g2: &[T], j: usize) -> Result<bool> {
    if g.len() != g2.len() {
        return Err(Error::Shape(format!("lengths {} and {}", g.len(), g2.len())));
    }
    if !(1..=g.len()).contains(&j) {
        return Err(Error::Index(format!("j = {j} outside 1..={}", g.len())));
    }
    Ok(g[j - 1] == g2[j - 1])
}
