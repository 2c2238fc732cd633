//! The Cayley-Dickson tower over the rationals.
//!
//! Level 0 is ℚ itself, level 1 the Gaussian-rational "complex" level, level 2
//! the quaternions, level 3 the octonions and level 4 the sedenions. An element
//! of level `ℓ` stores `2^ℓ` coefficients; the recursive split is always
//! (first half, second half), and the product of pairs is
//!
//! ```text
//! (a, b)(c, d) = (ac − d b*, a* d + c b)
//! ```
//!
//! With this product the quaternion basis satisfies `e1·e2 = −e3`, so the
//! usual `i, j, k` are `e1, e2, −e3`.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::par::Strategy;
use crate::scalar::Rational;

pub const MAX_LEVEL: u32 = 4;

#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CdElement {
    level: u32,
    coeffs: Vec<Rational>,
}

impl CdElement {
    pub fn new(level: u32, coeffs: Vec<Rational>) -> Result<Self> {
        check_level(level)?;
        if coeffs.len() != 1 << level {
            return Err(Error::Shape(format!(
                "level {level} needs {} coefficients, got {}",
                1 << level,
                coeffs.len()
            )));
        }
        Ok(CdElement { level, coeffs })
    }

    pub fn zero(level: u32) -> Self {
        CdElement::scalar(level, Rational::zero())
    }

    pub fn one(level: u32) -> Self {
        CdElement::scalar(level, Rational::one())
    }

    /// The image of a rational under the unital embedding ℚ → level `ℓ`.
    pub fn scalar(level: u32, q: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); 1 << level];
        coeffs[0] = q;
        CdElement { level, coeffs }
    }

    /// The basis element `e_k`.
    pub fn basis(level: u32, k: usize) -> Result<Self> {
        check_level(level)?;
        if k >= 1 << level {
            return Err(Error::Index(format!("basis index {k} at level {level}")));
        }
        let mut x = CdElement::zero(level);
        x.coeffs[k] = Rational::one();
        Ok(x)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Rational::is_zero)
    }

    /// The real part, if every other coefficient vanishes.
    pub fn as_scalar(&self) -> Option<&Rational> {
        self.coeffs[1..].iter().all(Rational::is_zero).then(|| &self.coeffs[0])
    }

    fn same_level(&self, other: &CdElement) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch {
                expected: self.level,
                found: other.level,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &CdElement) -> Result<CdElement> {
        self.same_level(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &CdElement) -> Result<CdElement> {
        self.same_level(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn neg(&self) -> CdElement {
        CdElement {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> CdElement {
        CdElement {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    fn zip_with(&self, other: &CdElement, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        CdElement {
            level: self.level,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn mul(&self, other: &CdElement) -> Result<CdElement> {
        self.same_level(other)?;
        Ok(CdElement {
            level: self.level,
            coeffs: mul_coeffs(self.level, &self.coeffs, &other.coeffs),
        })
    }

    /// `(a, b)* = (a*, −b)`, i.e. every coefficient but the first is negated.
    pub fn conjugate(&self) -> CdElement {
        CdElement {
            level: self.level,
            coeffs: conj_slice(&self.coeffs),
        }
    }

    /// The quadratic norm form `N(x) = Σ cₖ²`, the square of the Euclidean
    /// absolute value.
    pub fn norm_sq(&self) -> Rational {
        self.coeffs.iter().map(Rational::square).sum()
    }

    /// `x* / N(x)`.
    pub fn invert(&self) -> Result<CdElement> {
        let n = self.norm_sq();
        if n.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv = n.recip()?;
        Ok(self.conjugate().scale(&inv))
    }

    /// `(x·y)·z − x·(y·z)`.
    pub fn associator(&self, y: &CdElement, z: &CdElement) -> Result<CdElement> {
        self.mul(y)?.mul(z)?.sub(&self.mul(&y.mul(z)?)?)
    }
}

fn check_level(level: u32) -> Result<()> {
    if level > MAX_LEVEL {
        return Err(Error::UnsupportedLevel(level));
    }
    Ok(())
}

/// Coefficient arithmetic for the recursive product. Implemented for exact
/// rationals and for machine integers, which the structured search uses since
/// its candidates have small integer coefficients.
trait Coeff: Clone {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Coeff for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Coeff for i64 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        self.checked_add(*rhs).expect("integer overflow in candidate product")
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.checked_sub(*rhs).expect("integer overflow in candidate product")
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.checked_mul(*rhs).expect("integer overflow in candidate product")
    }
    fn neg(&self) -> Self {
        -self
    }
}

fn conj_slice<T: Coeff>(x: &[T]) -> Vec<T> {
    let mut out: Vec<T> = x.iter().map(Coeff::neg).collect();
    out[0] = x[0].clone();
    out
}

/// The recursive product, straight from the doubling formula. Only used to
/// derive the basis tables below.
fn mul_slices<T: Coeff>(x: &[T], y: &[T]) -> Vec<T> {
    if x.len() == 1 {
        return vec![x[0].mul(&y[0])];
    }
    let h = x.len() / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let ac = mul_slices(a, c);
    let db_conj = mul_slices(d, &conj_slice(b));
    let a_conj_d = mul_slices(&conj_slice(a), d);
    let cb = mul_slices(c, b);
    let mut out: Vec<T> = ac.iter().zip(&db_conj).map(|(p, q)| p.sub(q)).collect();
    out.extend(a_conj_d.iter().zip(&cb).map(|(p, q)| p.add(q)));
    out
}

/// Signs of the basis products at each level: `e_i·e_j = s·e_{i⊕j}` with `s`
/// stored at `i·2^ℓ + j`. Derived once from the recursive product.
fn basis_signs(level: u32) -> &'static [i8] {
    static TABLES: [OnceLock<Vec<i8>>; MAX_LEVEL as usize + 1] = [const { OnceLock::new() }; MAX_LEVEL as usize + 1];
    TABLES[level as usize].get_or_init(|| {
        let dim = 1usize << level;
        let unit = |k: usize| {
            let mut v = vec![0i64; dim];
            v[k] = 1;
            v
        };
        let mut signs = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let p = mul_slices(&unit(i), &unit(j));
                assert!(
                    p.iter().enumerate().all(|(k, c)| (k == i ^ j) == (*c != 0)) && p[i ^ j].abs() == 1,
                    "basis product e{i}·e{j} is not a signed basis element"
                );
                signs.push(p[i ^ j] as i8);
            }
        }
        signs
    })
}

/// The product via the basis table, skipping zero coefficients.
fn mul_coeffs<T: Coeff>(level: u32, x: &[T], y: &[T]) -> Vec<T> {
    let dim = 1usize << level;
    let signs = basis_signs(level);
    let mut out = vec![T::zero(); dim];
    for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (j, yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let t = xi.mul(yj);
            let slot = &mut out[i ^ j];
            *slot = if signs[i * dim + j] > 0 {
                slot.add(&t)
            } else {
                slot.sub(&t)
            };
        }
    }
    out
}

impl fmt::Display for CdElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_scalar() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}·e{k}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CdElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}[", self.level)?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CdWire {
    Full { level: u32, coeffs: Vec<Rational> },
    Scalar(Rational),
}

/// Accepts the object form `{"level": ℓ, "coeffs": [...]}`, or a bare rational
/// as shorthand for a level-0 element.
impl<'de> Deserialize<'de> for CdElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match CdWire::deserialize(deserializer)? {
            CdWire::Full { level, coeffs } => CdElement::new(level, coeffs).map_err(serde::de::Error::custom),
            CdWire::Scalar(q) => Ok(CdElement::scalar(0, q)),
        }
    }
}

/// A pair whose norms fail to multiply: `N(x·y) ≠ N(x)·N(y)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompositionViolation {
    pub x: CdElement,
    pub y: CdElement,
    pub norm_product: Rational,
    pub product_norm: Rational,
}

/// Integer coefficient vectors of the structured candidate set, in search
/// order: every `s·e_i`, then every `s·e_i + t·e_j` with `i < j`, for nonzero
/// integers `|s|, |t| ≤ bound`.
fn candidate_coeffs(level: u32, bound: u32) -> Vec<Vec<i64>> {
    let dim = 1usize << level;
    let b = i64::from(bound);
    let coeffs: Vec<i64> = (-b..=b).filter(|&s| s != 0).collect();
    let mut out = Vec::new();
    for i in 0..dim {
        for &s in &coeffs {
            let mut x = vec![0; dim];
            x[i] = s;
            out.push(x);
        }
    }
    for i in 0..dim {
        for j in i + 1..dim {
            for &s in &coeffs {
                for &t in &coeffs {
                    let mut x = vec![0; dim];
                    x[i] = s;
                    x[j] = t;
                    out.push(x);
                }
            }
        }
    }
    out
}

fn from_ints(level: u32, coeffs: &[i64]) -> CdElement {
    CdElement {
        level,
        coeffs: coeffs.iter().map(|&c| Rational::from(c)).collect(),
    }
}

/// The structured candidate set searched for composition failures.
pub fn composition_candidates(level: u32, bound: u32) -> Result<Vec<CdElement>> {
    check_level(level)?;
    Ok(candidate_coeffs(level, bound)
        .iter()
        .map(|c| from_ints(level, c))
        .collect())
}

/// Searches the structured candidate set for a pair violating norm
/// multiplicativity, returning the first one in (x index, y index) order.
pub fn find_composition_violation(level: u32, bound: u32) -> Result<Option<CompositionViolation>> {
    find_composition_violation_with(level, bound, Strategy::default())
}

pub fn find_composition_violation_with(
    level: u32,
    bound: u32,
    strategy: Strategy,
) -> Result<Option<CompositionViolation>> {
    check_level(level)?;
    if bound == 0 {
        return Err(Error::Precondition("coefficient bound must be at least 1".into()));
    }
    let candidates = candidate_coeffs(level, bound);
    let norm = |v: &[i64]| -> i64 { v.iter().map(|c| c * c).sum() };
    let norms: Vec<i64> = candidates.iter().map(|c| norm(c)).collect();
    let hit = strategy.find_first(candidates.len(), |xi| {
        let x = &candidates[xi];
        candidates.iter().enumerate().find_map(|(yi, y)| {
            let product = mul_coeffs(level, x, y);
            (norm(&product) != norms[xi] * norms[yi]).then_some((xi, yi))
        })
    });
    // Re-derive the reported values with exact rational arithmetic.
    Ok(hit.map(|(xi, yi)| {
        let x = from_ints(level, &candidates[xi]);
        let y = from_ints(level, &candidates[yi]);
        let product_norm = x.mul(&y).expect("same level").norm_sq();
        let norm_product = x.norm_sq() * y.norm_sq();
        CompositionViolation {
            x,
            y,
            norm_product,
            product_norm,
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn el(level: u32, cs: &[i64]) -> CdElement {
        CdElement::new(level, cs.iter().map(|&c| Rational::from(c)).collect()).unwrap()
    }

    fn e(level: u32, k: usize) -> CdElement {
        CdElement::basis(level, k).unwrap()
    }

    /// Quaternion basis products worked out by hand from the pair formula
    /// over complex halves: entry `[a][b] = (sign, k)` means `e_a·e_b = sign·e_k`.
    const QUATERNION_TABLE: [[(i64, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (-1, 3), (1, 2)],
        [(1, 2), (1, 3), (-1, 0), (-1, 1)],
        [(1, 3), (-1, 2), (1, 1), (-1, 0)],
    ];

    #[test]
    fn table_product_matches_recursive_product() {
        for level in 0..=MAX_LEVEL {
            let dim = 1usize << level;
            let x: Vec<Rational> = (0..dim)
                .map(|k| Rational::new(k as i64 * 3 - 7, k as i64 % 4 + 1).unwrap())
                .collect();
            let y: Vec<Rational> = (0..dim)
                .map(|k| Rational::new(5 - k as i64 * k as i64, 3).unwrap())
                .collect();
            assert_eq!(mul_coeffs(level, &x, &y), mul_slices(&x, &y), "level {level}");
        }
    }

    #[test]
    fn quaternion_table_matches_hand_computation() {
        for (a, row) in QUATERNION_TABLE.iter().enumerate() {
            for (b, &(sign, k)) in row.iter().enumerate() {
                let expected = e(2, k).scale(&Rational::from(sign));
                assert_eq!(e(2, a).mul(&e(2, b)).unwrap(), expected, "e{a}·e{b}");
            }
        }
        // i, j, k = e1, e2, −e3 satisfy the standard relations.
        let (i, j, k) = (e(2, 1), e(2, 2), e(2, 3).neg());
        assert_eq!(i.mul(&j).unwrap(), k);
        assert_eq!(j.mul(&k).unwrap(), i);
        assert_eq!(k.mul(&i).unwrap(), j);
    }

    #[test]
    fn pair_unit_times_basis_pair() {
        // (1, 0)·(0, 1) = (0, 1) at level 3
        assert_eq!(e(3, 0).mul(&e(3, 4)).unwrap(), e(3, 4));
    }

    #[test]
    fn rational_level_product() {
        let x = CdElement::scalar(0, q("3/2"));
        let y = CdElement::scalar(0, q("4/3"));
        assert_eq!(x.mul(&y).unwrap(), CdElement::scalar(0, q("2")));
    }

    #[test]
    fn level_mismatch() {
        assert_eq!(
            e(2, 1).mul(&e(3, 1)),
            Err(Error::LevelMismatch { expected: 2, found: 3 })
        );
        assert!(matches!(CdElement::new(2, vec![q("1")]), Err(Error::Shape(_))));
        assert_eq!(CdElement::new(5, vec![]), Err(Error::UnsupportedLevel(5)));
    }

    #[test]
    fn conjugation() {
        assert_eq!(el(2, &[1, 1, 1, 1]).conjugate(), el(2, &[1, -1, -1, -1]));
        assert_eq!(el(0, &[5]).conjugate(), el(0, &[5]));
        let x = el(3, &[1, -2, 3, 0, 5, 6, -7, 8]);
        assert_eq!(x.conjugate().conjugate(), x);
    }

    #[test]
    fn norm_form() {
        assert_eq!(el(2, &[1, 1, 1, 1]).norm_sq(), q("4"));
        for k in 0..8 {
            assert_eq!(e(3, k).norm_sq(), q("1"));
        }
        assert_eq!(CdElement::zero(3).norm_sq(), q("0"));
    }

    #[test]
    fn inverses() {
        assert_eq!(e(2, 1).invert().unwrap(), e(2, 1).neg());
        assert_eq!(
            CdElement::scalar(0, q("3/4")).invert().unwrap(),
            CdElement::scalar(0, q("4/3"))
        );
        assert_eq!(CdElement::zero(2).invert(), Err(Error::NotInvertible));
    }

    #[test]
    fn associators_over_basis_triples() {
        let triples = |level: u32| {
            let d = 1 << level;
            (0..d).flat_map(move |a| (0..d).flat_map(move |b| (0..d).map(move |c| (a, b, c))))
        };
        for (a, b, c) in triples(2) {
            assert!(e(2, a).associator(&e(2, b), &e(2, c)).unwrap().is_zero());
        }
        let nonassoc = triples(3).find(|&(a, b, c)| !e(3, a).associator(&e(3, b), &e(3, c)).unwrap().is_zero());
        assert!(nonassoc.is_some());
        for a in 0..8 {
            for b in 0..8 {
                assert!(e(3, a).associator(&e(3, a), &e(3, b)).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn composition_search() {
        assert_eq!(find_composition_violation(2, 3).unwrap(), None);
        let hit = find_composition_violation(4, 1).unwrap().expect("sedenion violation");
        assert_ne!(hit.product_norm, hit.norm_product);
        assert_eq!(hit.x.mul(&hit.y).unwrap().norm_sq(), hit.product_norm);
        assert!(find_composition_violation(1, 0).is_err());
    }

    #[test]
    fn sedenion_zero_divisor_in_candidates() {
        let cands = composition_candidates(4, 1).unwrap();
        let zd = cands.iter().find_map(|x| {
            cands
                .iter()
                .find(|y| x.mul(y).unwrap().is_zero())
                .map(|y| (x.clone(), y.clone()))
        });
        let (x, y) = zd.expect("two-term sedenion zero divisors");
        assert!(!x.is_zero() && !y.is_zero());
    }

    #[test]
    fn json_forms() {
        let x = el(1, &[1, -2]);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"level":1,"coeffs":["1","-2"]}"#);
        let back: CdElement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        let short: CdElement = serde_json::from_str("\"3/4\"").unwrap();
        assert_eq!(short, CdElement::scalar(0, q("3/4")));
        assert!(serde_json::from_str::<CdElement>(r#"{"level":2,"coeffs":["1"]}"#).is_err());
    }
}
