//! Generalized Heisenberg groups `H(w) = (A × E) ⋊ F` for the inner-product
//! map `w : Fⁿ × Fⁿ → F` over a Cayley-Dickson scalar algebra.
//!
//! Elements are triples `(a, x̄, f̄)` and the group law is
//! `u₁u₂ = (a₁ + a₂ + w(x₂, f₁), x₁ + x₂, f₁ + f₂)`.

use serde::{Deserialize, Serialize};

use crate::cayley_dickson::CdElement;
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Order of the factors in each term of the inner product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Pairing {
    /// `w(x̄, f̄) = Σ xₖ·fₖ`
    #[default]
    #[serde(rename = "xf")]
    XThenF,
    /// `w(x̄, f̄) = Σ fₖ·xₖ`
    #[serde(rename = "fx")]
    FThenX,
}

impl Pairing {
    pub const BOTH: [Pairing; 2] = [Pairing::XThenF, Pairing::FThenX];
}

/// The biadditive map `w_n` over scalars of a given Cayley-Dickson level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InnerProduct {
    pub scalar_level: u32,
    pub dim: usize,
    pub pairing: Pairing,
}

pub const MAX_SCALAR_LEVEL: u32 = 3;

impl InnerProduct {
    pub fn new(scalar_level: u32, dim: usize, pairing: Pairing) -> Result<Self> {
        if scalar_level > MAX_SCALAR_LEVEL {
            return Err(Error::UnsupportedLevel(scalar_level));
        }
        if dim == 0 {
            return Err(Error::Shape("dimension must be at least 1".into()));
        }
        Ok(InnerProduct {
            scalar_level,
            dim,
            pairing,
        })
    }

    pub(crate) fn check_vector(&self, v: &[CdElement]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::Shape(format!(
                "vector of length {} for dimension {}",
                v.len(),
                self.dim
            )));
        }
        v.iter().try_for_each(|c| self.check_scalar(c))
    }

    pub(crate) fn check_scalar(&self, c: &CdElement) -> Result<()> {
        if c.level() != self.scalar_level {
            return Err(Error::LevelMismatch {
                expected: self.scalar_level,
                found: c.level(),
            });
        }
        Ok(())
    }

    pub fn zero_vector(&self) -> Vec<CdElement> {
        vec![CdElement::zero(self.scalar_level); self.dim]
    }

    /// The standard basis vector with `1` in slot `k` (0-based).
    pub fn unit_vector(&self, k: usize) -> Vec<CdElement> {
        let mut v = self.zero_vector();
        v[k] = CdElement::one(self.scalar_level);
        v
    }

    /// `w(x̄, f̄)`, summed in ascending index order.
    pub fn eval(&self, x: &[CdElement], f: &[CdElement]) -> Result<CdElement> {
        self.check_vector(x)?;
        self.check_vector(f)?;
        x.iter()
            .zip(f)
            .try_fold(CdElement::zero(self.scalar_level), |acc, (xk, fk)| {
                let term = match self.pairing {
                    Pairing::XThenF => xk.mul(fk)?,
                    Pairing::FThenX => fk.mul(xk)?,
                };
                acc.add(&term)
            })
    }
}

pub(crate) fn add_vectors(u: &[CdElement], v: &[CdElement]) -> Vec<CdElement> {
    u.iter()
        .zip(v)
        .map(|(a, b)| a.add(b).expect("checked levels"))
        .collect()
}

pub(crate) fn neg_vector(v: &[CdElement]) -> Vec<CdElement> {
    v.iter().map(CdElement::neg).collect()
}

pub(crate) fn is_zero_vector(v: &[CdElement]) -> bool {
    v.iter().all(CdElement::is_zero)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeisenbergElement {
    pub a: CdElement,
    pub x: Vec<CdElement>,
    pub f: Vec<CdElement>,
}

/// The subgroups and subsets of `H(w_n)` that appear in the co-minimality and
/// relative-minimality statements, given by their zero patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `(A × 0) ⋊ 0`, the center.
    CenterA,
    /// `(A × E) ⋊ 0`
    ACrossE,
    /// `(A × 0) ⋊ F`
    ACrossF,
    /// `(0 × E) ⋊ 0`
    EOnly,
    /// `(0 × 0) ⋊ F`
    FOnly,
    /// `(0 × E) ⋊ F`, a subset but not a subgroup.
    ECrossF,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::CenterA,
        Family::ACrossE,
        Family::ACrossF,
        Family::EOnly,
        Family::FOnly,
        Family::ECrossF,
    ];

    pub fn is_subgroup(self) -> bool {
        self != Family::ECrossF
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::CenterA => "center_a",
            Family::ACrossE => "a_cross_e",
            Family::ACrossF => "a_cross_f",
            Family::EOnly => "e_only",
            Family::FOnly => "f_only",
            Family::ECrossF => "e_cross_f",
        }
    }

    /// Which of the three components are forced to zero.
    fn zero_pattern(self) -> (bool, bool, bool) {
        match self {
            Family::CenterA => (false, true, true),
            Family::ACrossE => (false, false, true),
            Family::ACrossF => (false, true, false),
            Family::EOnly => (true, false, true),
            Family::FOnly => (true, true, false),
            Family::ECrossF => (true, false, false),
        }
    }

    pub fn contains(self, u: &HeisenbergElement) -> bool {
        let (a0, x0, f0) = self.zero_pattern();
        (!a0 || u.a.is_zero()) && (!x0 || is_zero_vector(&u.x)) && (!f0 || is_zero_vector(&u.f))
    }

    /// Zeroes the components this family forbids.
    pub fn project(self, u: &HeisenbergElement) -> HeisenbergElement {
        let (a0, x0, f0) = self.zero_pattern();
        let zero = |v: &[CdElement]| v.iter().map(|c| CdElement::zero(c.level())).collect();
        HeisenbergElement {
            a: if a0 { CdElement::zero(u.a.level()) } else { u.a.clone() },
            x: if x0 { zero(&u.x) } else { u.x.clone() },
            f: if f0 { zero(&u.f) } else { u.f.clone() },
        }
    }
}

/// `H(w)` for a fixed inner-product map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeisenbergGroup {
    pub w: InnerProduct,
}

impl HeisenbergGroup {
    pub fn new(w: InnerProduct) -> Self {
        HeisenbergGroup { w }
    }

    pub fn check(&self, u: &HeisenbergElement) -> Result<()> {
        self.w.check_scalar(&u.a)?;
        self.w.check_vector(&u.x)?;
        self.w.check_vector(&u.f)
    }

    pub fn element(&self, a: CdElement, x: Vec<CdElement>, f: Vec<CdElement>) -> Result<HeisenbergElement> {
        let u = HeisenbergElement { a, x, f };
        self.check(&u)?;
        Ok(u)
    }

    pub fn identity(&self) -> HeisenbergElement {
        HeisenbergElement {
            a: CdElement::zero(self.w.scalar_level),
            x: self.w.zero_vector(),
            f: self.w.zero_vector(),
        }
    }

    pub fn is_identity(&self, u: &HeisenbergElement) -> bool {
        u.a.is_zero() && is_zero_vector(&u.x) && is_zero_vector(&u.f)
    }

    pub fn mul(&self, u1: &HeisenbergElement, u2: &HeisenbergElement) -> Result<HeisenbergElement> {
        self.check(u1)?;
        self.check(u2)?;
        let twist = self.w.eval(&u2.x, &u1.f)?;
        Ok(HeisenbergElement {
            a: u1.a.add(&u2.a)?.add(&twist)?,
            x: add_vectors(&u1.x, &u2.x),
            f: add_vectors(&u1.f, &u2.f),
        })
    }

    /// `(−a + w(x̄, f̄), −x̄, −f̄)`.
    pub fn inverse(&self, u: &HeisenbergElement) -> Result<HeisenbergElement> {
        self.check(u)?;
        Ok(HeisenbergElement {
            a: u.a.neg().add(&self.w.eval(&u.x, &u.f)?)?,
            x: neg_vector(&u.x),
            f: neg_vector(&u.f),
        })
    }

    /// `u₁u₂u₁⁻¹u₂⁻¹` by multiplying out.
    pub fn commutator(&self, u1: &HeisenbergElement, u2: &HeisenbergElement) -> Result<HeisenbergElement> {
        let left = self.mul(u1, u2)?;
        let right = self.mul(&self.inverse(u1)?, &self.inverse(u2)?)?;
        self.mul(&left, &right)
    }

    /// The closed form `(w(x₂, f₁) − w(x₁, f₂), 0̄, 0̄)` of the commutator.
    pub fn commutator_closed_form(&self, u1: &HeisenbergElement, u2: &HeisenbergElement) -> Result<HeisenbergElement> {
        self.check(u1)?;
        self.check(u2)?;
        let a = self.w.eval(&u2.x, &u1.f)?.sub(&self.w.eval(&u1.x, &u2.f)?)?;
        Ok(HeisenbergElement {
            a,
            x: self.w.zero_vector(),
            f: self.w.zero_vector(),
        })
    }

    /// The scalar-only element `(a, 0̄, 0̄)`.
    pub fn central(&self, a: CdElement) -> Result<HeisenbergElement> {
        self.element(a, self.w.zero_vector(), self.w.zero_vector())
    }
}

/// Given nonzero `x̄₀, f̄₀`, builds `(x̄, f̄)` with `w(x̄₀, f̄) ≠ 0` and
/// `w(x̄, f̄₀) ≠ 0`: with `i` the first nonzero slot of `x̄₀` and `j` the first
/// nonzero slot of `f̄₀`, returns `(e_j, e_i)`.
pub fn separatedness_witness(
    w: &InnerProduct,
    x0: &[CdElement],
    f0: &[CdElement],
) -> Result<(Vec<CdElement>, Vec<CdElement>)> {
    w.check_vector(x0)?;
    w.check_vector(f0)?;
    let i = x0
        .iter()
        .position(|c| !c.is_zero())
        .ok_or_else(|| Error::Precondition("x0 is the zero vector".into()))?;
    let j = f0
        .iter()
        .position(|c| !c.is_zero())
        .ok_or_else(|| Error::Precondition("f0 is the zero vector".into()))?;
    Ok((w.unit_vector(j), w.unit_vector(i)))
}

/// JSON form of an element together with its group:
/// `{"a", "x", "f", "level", "n", "pairing"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeisenbergRecord {
    pub a: CdElement,
    pub x: Vec<CdElement>,
    pub f: Vec<CdElement>,
    pub level: u32,
    pub n: usize,
    #[serde(default)]
    pub pairing: Pairing,
}

impl HeisenbergRecord {
    pub fn from_element(group: &HeisenbergGroup, u: &HeisenbergElement) -> Self {
        HeisenbergRecord {
            a: u.a.clone(),
            x: u.x.clone(),
            f: u.f.clone(),
            level: group.w.scalar_level,
            n: group.w.dim,
            pairing: group.w.pairing,
        }
    }

    /// Validates the record. Level-0 shorthand entries are lifted to the
    /// record's level.
    pub fn into_element(self) -> Result<(HeisenbergGroup, HeisenbergElement)> {
        let group = HeisenbergGroup::new(InnerProduct::new(self.level, self.n, self.pairing)?);
        let lift = |c: CdElement| lift_scalar(c, self.level);
        let u = group.element(
            lift(self.a)?,
            self.x.into_iter().map(lift).collect::<Result<_>>()?,
            self.f.into_iter().map(lift).collect::<Result<_>>()?,
        )?;
        Ok((group, u))
    }
}

/// Embeds a level-0 value at `level`; other levels must already match.
pub fn lift_scalar(c: CdElement, level: u32) -> Result<CdElement> {
    if c.level() == level {
        Ok(c)
    } else if c.level() == 0 {
        Ok(CdElement::scalar(level, c.coeffs()[0].clone()))
    } else {
        Err(Error::LevelMismatch {
            expected: level,
            found: c.level(),
        })
    }
}

/// Convenience for building rational vectors in tests and examples.
pub fn rational_vector(level: u32, values: &[i64]) -> Vec<CdElement> {
    values
        .iter()
        .map(|&v| CdElement::scalar(level, Rational::from(v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> CdElement {
        CdElement::scalar(0, Rational::from(v))
    }

    fn group(level: u32, dim: usize, pairing: Pairing) -> HeisenbergGroup {
        HeisenbergGroup::new(InnerProduct::new(level, dim, pairing).unwrap())
    }

    fn quat(k: usize) -> CdElement {
        CdElement::basis(2, k).unwrap()
    }

    #[test]
    fn dot_product() {
        let w = InnerProduct::new(0, 2, Pairing::XThenF).unwrap();
        let v = w
            .eval(&rational_vector(0, &[1, 2]), &rational_vector(0, &[3, 4]))
            .unwrap();
        assert_eq!(v, q(11));
        let f = rational_vector(0, &[5, -7]);
        assert_eq!(w.eval(&w.unit_vector(1), &f).unwrap(), q(-7));
        assert!(matches!(w.eval(&rational_vector(0, &[1]), &f), Err(Error::Shape(_))));
    }

    #[test]
    fn quaternion_pairing_orders_differ_by_sign() {
        // e1·e2 = −e3 and e2·e1 = e3 under the tower's product.
        let xf = InnerProduct::new(2, 1, Pairing::XThenF).unwrap();
        let fx = InnerProduct::new(2, 1, Pairing::FThenX).unwrap();
        let x = [quat(1)];
        let f = [quat(2)];
        assert_eq!(xf.eval(&x, &f).unwrap(), quat(3).neg());
        assert_eq!(fx.eval(&x, &f).unwrap(), quat(3));
    }

    #[test]
    fn noncommuting_product() {
        let g = group(0, 1, Pairing::XThenF);
        let u = g.element(q(0), vec![q(1)], vec![q(0)]).unwrap();
        let v = g.element(q(0), vec![q(0)], vec![q(1)]).unwrap();
        assert_eq!(g.mul(&u, &v).unwrap(), g.element(q(0), vec![q(1)], vec![q(1)]).unwrap());
        assert_eq!(g.mul(&v, &u).unwrap(), g.element(q(1), vec![q(1)], vec![q(1)]).unwrap());
        assert_eq!(g.mul(&u, &g.identity()).unwrap(), u);
    }

    #[test]
    fn inverses() {
        let g = group(0, 2, Pairing::XThenF);
        assert_eq!(g.inverse(&g.identity()).unwrap(), g.identity());
        let u = g
            .element(q(3), rational_vector(0, &[1, -2]), g.w.zero_vector())
            .unwrap();
        let inv = g.inverse(&u).unwrap();
        assert_eq!(
            inv,
            g.element(q(-3), rational_vector(0, &[-1, 2]), g.w.zero_vector())
                .unwrap()
        );
        let v = g
            .element(q(5), rational_vector(0, &[1, 2]), rational_vector(0, &[3, 4]))
            .unwrap();
        assert!(g.is_identity(&g.mul(&v, &g.inverse(&v).unwrap()).unwrap()));
        assert!(g.is_identity(&g.mul(&g.inverse(&v).unwrap(), &v).unwrap()));
    }

    #[test]
    fn commutator_example() {
        let g = group(0, 1, Pairing::XThenF);
        let u1 = g.element(q(0), vec![q(1)], vec![q(0)]).unwrap();
        let u2 = g.element(q(0), vec![q(0)], vec![q(1)]).unwrap();
        let expected = g.central(q(-1)).unwrap();
        assert_eq!(g.commutator(&u1, &u2).unwrap(), expected);
        assert_eq!(g.commutator_closed_form(&u1, &u2).unwrap(), expected);
        assert!(g.is_identity(&g.commutator(&u1, &u1).unwrap()));
    }

    #[test]
    fn separatedness_examples() {
        let w = InnerProduct::new(0, 2, Pairing::XThenF).unwrap();
        let (x, f) = separatedness_witness(&w, &w.unit_vector(0), &w.unit_vector(1)).unwrap();
        assert_eq!((x.clone(), f.clone()), (w.unit_vector(1), w.unit_vector(0)));
        assert_eq!(w.eval(&w.unit_vector(0), &f).unwrap(), q(1));
        assert_eq!(w.eval(&x, &w.unit_vector(1)).unwrap(), q(1));

        let w1 = InnerProduct::new(0, 1, Pairing::XThenF).unwrap();
        let got = separatedness_witness(&w1, &[q(-4)], &[q(7)]).unwrap();
        assert_eq!(got, (w1.unit_vector(0), w1.unit_vector(0)));

        let wq = InnerProduct::new(2, 2, Pairing::XThenF).unwrap();
        let zero = CdElement::zero(2);
        let x0 = vec![quat(1), zero.clone()];
        let f0 = vec![zero, quat(2)];
        let (x, f) = separatedness_witness(&wq, &x0, &f0).unwrap();
        assert_eq!((x.clone(), f.clone()), (wq.unit_vector(1), wq.unit_vector(0)));
        assert_eq!(wq.eval(&x0, &f).unwrap(), quat(1));
        assert_eq!(wq.eval(&x, &f0).unwrap(), quat(2));

        assert!(matches!(
            separatedness_witness(&w, &w.zero_vector(), &w.unit_vector(0)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn family_membership() {
        let g = group(0, 2, Pairing::XThenF);
        for fam in Family::ALL {
            assert!(fam.contains(&g.identity()));
        }
        let e = g.element(q(0), rational_vector(0, &[1, 0]), g.w.zero_vector()).unwrap();
        assert!(Family::EOnly.contains(&e));
        assert!(!Family::FOnly.contains(&e));
        let c = g.central(q(1)).unwrap();
        assert!(Family::CenterA.contains(&c));
        assert!(!Family::ECrossF.contains(&c));
    }

    #[test]
    fn e_cross_f_is_not_closed() {
        let g = group(0, 1, Pairing::XThenF);
        let u = g.element(q(0), vec![q(0)], vec![q(1)]).unwrap();
        let v = g.element(q(0), vec![q(1)], vec![q(0)]).unwrap();
        assert!(Family::ECrossF.contains(&u) && Family::ECrossF.contains(&v));
        assert!(!Family::ECrossF.contains(&g.mul(&u, &v).unwrap()));
    }

    #[test]
    fn record_round_trip_and_lifting() {
        let json = r#"{"a": "2", "x": ["1"], "f": [{"level": 1, "coeffs": ["0", "1"]}],
                       "level": 1, "n": 1, "pairing": "fx"}"#;
        let rec: HeisenbergRecord = serde_json::from_str(json).unwrap();
        let (g, u) = rec.into_element().unwrap();
        assert_eq!(g.w.pairing, Pairing::FThenX);
        assert_eq!(u.a, CdElement::scalar(1, Rational::from(2)));
        let back = HeisenbergRecord::from_element(&g, &u);
        let text = serde_json::to_string(&back).unwrap();
        let again: HeisenbergRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(again, back);

        let bad = r#"{"a": "0", "x": ["1", "2"], "f": ["0"], "level": 0, "n": 1}"#;
        let rec: HeisenbergRecord = serde_json::from_str(bad).unwrap();
        assert!(rec.into_element().is_err());
    }
}
