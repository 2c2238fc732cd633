//! Upper unitriangular matrix groups `U_m(F)` with exact entries.
//!
//! Row and column indices in the public API are 1-based, matching the usual
//! `a_ij` notation; `m = n + 2` throughout the corner-subgroup operations.

use serde::{Deserialize, Deserializer, Serialize};

use crate::cayley_dickson::CdElement;
use crate::error::{Error, Result};
use crate::heisenberg::{lift_scalar, HeisenbergElement, HeisenbergGroup, Pairing};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniTriMatrix {
    level: u32,
    rows: Vec<Vec<CdElement>>,
}

impl UniTriMatrix {
    /// Validates shape, entry levels, unit diagonal and zero lower part.
    pub fn new(level: u32, rows: Vec<Vec<CdElement>>) -> Result<Self> {
        let m = rows.len();
        if m < 2 {
            return Err(Error::Shape(format!("size {m} is below 2")));
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Shape(format!(
                    "row {} has {} entries, expected {m}",
                    r + 1,
                    row.len()
                )));
            }
            for (c, entry) in row.iter().enumerate() {
                if entry.level() != level {
                    return Err(Error::LevelMismatch {
                        expected: level,
                        found: entry.level(),
                    });
                }
                if r == c && !entry.is_one() {
                    return Err(Error::NotUnitriangular(format!(
                        "diagonal entry ({0}, {0}) is {entry}",
                        r + 1
                    )));
                }
                if r > c && !entry.is_zero() {
                    return Err(Error::NotUnitriangular(format!(
                        "entry ({}, {}) below the diagonal is {entry}",
                        r + 1,
                        c + 1
                    )));
                }
            }
        }
        Ok(UniTriMatrix { level, rows })
    }

    pub fn identity(size: usize, level: u32) -> Self {
        let rows = (0..size)
            .map(|r| {
                (0..size)
                    .map(|c| {
                        if r == c {
                            CdElement::one(level)
                        } else {
                            CdElement::zero(level)
                        }
                    })
                    .collect()
            })
            .collect();
        UniTriMatrix { level, rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn rows(&self) -> &[Vec<CdElement>] {
        &self.rows
    }

    /// Entry `(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> &CdElement {
        &self.rows[i - 1][j - 1]
    }

    /// Sets a strictly upper entry `(i, j)`, 1-based.
    pub fn set(&mut self, i: usize, j: usize, value: CdElement) -> Result<()> {
        let m = self.size();
        if !(1 <= i && i < j && j <= m) {
            return Err(Error::Index(format!("({i}, {j}) is not strictly upper in size {m}")));
        }
        if value.level() != self.level {
            return Err(Error::LevelMismatch {
                expected: self.level,
                found: value.level(),
            });
        }
        self.rows[i - 1][j - 1] = value;
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(r, row)| {
            row.iter()
                .enumerate()
                .all(|(c, e)| if r == c { e.is_one() } else { e.is_zero() })
        })
    }

    /// Nonzero strictly-upper positions, 1-based.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let m = self.size();
        (0..m)
            .flat_map(|r| (r + 1..m).map(move |c| (r, c)))
            .filter(|&(r, c)| !self.rows[r][c].is_zero())
            .map(|(r, c)| (r + 1, c + 1))
            .collect()
    }

    fn same_shape(&self, other: &UniTriMatrix) -> Result<()> {
        if self.size() != other.size() {
            return Err(Error::Shape(format!("sizes {} and {}", self.size(), other.size())));
        }
        if self.level != other.level {
            return Err(Error::LevelMismatch {
                expected: self.level,
                found: other.level,
            });
        }
        Ok(())
    }

    /// Matrix product; each entry sums `a_ik·b_kj` for ascending `k`.
    pub fn mul(&self, other: &UniTriMatrix) -> Result<UniTriMatrix> {
        self.same_shape(other)?;
        let m = self.size();
        let mut out = UniTriMatrix::identity(m, self.level);
        for i in 0..m {
            for j in i + 1..m {
                let mut acc = CdElement::zero(self.level);
                for k in i..=j {
                    acc = acc.add(&self.rows[i][k].mul(&other.rows[k][j])?)?;
                }
                out.rows[i][j] = acc;
            }
        }
        Ok(out)
    }

    /// Back-substitution inverse `N` solving `M·N = I`.
    ///
    /// Two-sided for associative scalars (levels ≤ 2) and for the
    /// Heisenberg-shaped matrices at any level.
    pub fn inverse(&self) -> Result<UniTriMatrix> {
        let m = self.size();
        let mut inv = UniTriMatrix::identity(m, self.level);
        for j in 1..m {
            for i in (0..j).rev() {
                let mut acc = CdElement::zero(self.level);
                for k in i + 1..=j {
                    acc = acc.add(&self.rows[i][k].mul(&inv.rows[k][j])?)?;
                }
                inv.rows[i][j] = acc.neg();
            }
        }
        Ok(inv)
    }
}

impl Serialize for UniTriMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRecord {
            size: self.size(),
            level: self.level,
            rows: self.rows.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UniTriMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        MatrixRecord::deserialize(deserializer)?
            .into_matrix()
            .map_err(serde::de::Error::custom)
    }
}

/// `{"size": m, "level": ℓ, "rows": [[CD, ...], ...]}`, row-major.
#[derive(Serialize, Deserialize)]
struct MatrixRecord {
    size: usize,
    level: u32,
    rows: Vec<Vec<CdElement>>,
}

impl MatrixRecord {
    fn into_matrix(self) -> Result<UniTriMatrix> {
        if self.rows.len() != self.size {
            return Err(Error::Shape(format!(
                "size {} with {} rows",
                self.size,
                self.rows.len()
            )));
        }
        let level = self.level;
        let rows = self
            .rows
            .into_iter()
            .map(|row| row.into_iter().map(|c| lift_scalar(c, level)).collect())
            .collect::<Result<_>>()?;
        UniTriMatrix::new(level, rows)
    }
}

/// The `(n+2)×(n+2)` matrix of `(a, x̄, f̄)`: first row `(1, f₁ … fₙ, a)`,
/// last column `(a, x₁ … xₙ, 1)ᵀ`, identity elsewhere. No pairing check.
pub fn realization_matrix(group: &HeisenbergGroup, u: &HeisenbergElement) -> Result<UniTriMatrix> {
    group.check(u)?;
    let n = group.w.dim;
    let level = group.w.scalar_level;
    let mut m = UniTriMatrix::identity(n + 2, level);
    for k in 0..n {
        m.rows[0][k + 1] = u.f[k].clone();
        m.rows[k + 1][n + 1] = u.x[k].clone();
    }
    m.rows[0][n + 1] = u.a.clone();
    Ok(m)
}

/// The matrix realization of `H(Fⁿ)` inside `U_{n+2}(F)`.
///
/// Over noncommutative scalars (level ≥ 2) the product of realizations
/// produces `Σ fₖ·xₖ` in the corner, so the group must use
/// [`Pairing::FThenX`] for this to be a homomorphism.
pub fn heisenberg_realization(group: &HeisenbergGroup, u: &HeisenbergElement) -> Result<UniTriMatrix> {
    if group.w.scalar_level >= 2 && group.w.pairing != Pairing::FThenX {
        return Err(Error::Precondition(format!(
            "level {} scalars need the fx pairing for the matrix realization",
            group.w.scalar_level
        )));
    }
    realization_matrix(group, u)
}

/// Reads `(a, x̄, f̄)` back off a matrix of Heisenberg shape.
pub fn heisenberg_from_matrix(group: &HeisenbergGroup, m: &UniTriMatrix) -> Result<HeisenbergElement> {
    let n = group.w.dim;
    if m.size() != n + 2 || m.level() != group.w.scalar_level {
        return Err(Error::Shape(format!(
            "expected size {} at level {}",
            n + 2,
            group.w.scalar_level
        )));
    }
    let outside = m.support().into_iter().find(|&(i, j)| i != 1 && j != n + 2);
    if let Some((i, j)) = outside {
        return Err(Error::Precondition(format!(
            "entry ({i}, {j}) is outside the Heisenberg pattern"
        )));
    }
    Ok(HeisenbergElement {
        a: m.rows[0][n + 1].clone(),
        x: (1..=n).map(|k| m.rows[k][n + 1].clone()).collect(),
        f: (1..=n).map(|k| m.rows[0][k].clone()).collect(),
    })
}

fn check_field(level: u32) -> Result<()> {
    if level != 0 {
        return Err(Error::Precondition(format!(
            "corner subgroups are defined over the field level 0, got level {level}"
        )));
    }
    Ok(())
}

/// Whether `(i, j)` indexes a corner subgroup `G_ij` of `U_{n+2}`.
pub fn is_admissible_corner(n: usize, i: usize, j: usize) -> bool {
    1 <= i && i < j && j <= n + 2 && (i, j) != (1, n + 2)
}

/// All admissible `(i, j)` for a given `n`.
pub fn admissible_corners(n: usize) -> Vec<(usize, usize)> {
    (1..=n + 2)
        .flat_map(|i| (i + 1..=n + 2).map(move |j| (i, j)))
        .filter(|&(i, j)| is_admissible_corner(n, i, j))
        .collect()
}

/// `I + a·E_ij` in `U_{n+2}(F)`.
pub fn corner_elem(n: usize, i: usize, j: usize, a: &CdElement) -> Result<UniTriMatrix> {
    check_field(a.level())?;
    if n == 0 {
        return Err(Error::Index("n must be at least 1".into()));
    }
    if (i, j) == (1, n + 2) {
        return Err(Error::ExcludedCorner(n + 2));
    }
    if !is_admissible_corner(n, i, j) {
        return Err(Error::Index(format!(
            "({i}, {j}) is not above the diagonal of size {}",
            n + 2
        )));
    }
    let mut m = UniTriMatrix::identity(n + 2, 0);
    m.set(i, j, a.clone())?;
    Ok(m)
}

/// Membership in `Ũ_i`: rows `1 … i−1` vanish off the diagonal.
pub fn tilde_membership(m: &UniTriMatrix, i: usize) -> Result<bool> {
    if !(2 <= i && i <= m.size()) {
        return Err(Error::Index(format!("i = {i} outside 2..={}", m.size())));
    }
    Ok(m.rows[..i - 1]
        .iter()
        .enumerate()
        .all(|(r, row)| row.iter().enumerate().all(|(c, e)| r == c || e.is_zero())))
}

/// Deletes the first `i − 1` rows and columns of a member of `Ũ_i`, giving an
/// element of `U_{m−i+1}`.
pub fn delete_reduction(m: &UniTriMatrix, i: usize) -> Result<UniTriMatrix> {
    check_field(m.level())?;
    if !tilde_membership(m, i)? {
        return Err(Error::NotInTilde(i));
    }
    let rows = m.rows[i - 1..].iter().map(|row| row[i - 1..].to_vec()).collect();
    Ok(UniTriMatrix { level: m.level, rows })
}

/// The inverse of [`delete_reduction`]: pads with `i − 1` identity rows and
/// columns on the top left.
pub fn pad_reduction(small: &UniTriMatrix, i: usize) -> Result<UniTriMatrix> {
    if i < 2 {
        return Err(Error::Index(format!("i = {i} is below 2")));
    }
    let pad = i - 1;
    let mut m = UniTriMatrix::identity(small.size() + pad, small.level);
    for (r, row) in small.rows.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            m.rows[r + pad][c + pad] = e.clone();
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::InnerProduct;
    use crate::scalar::Rational;

    fn q(v: i64) -> CdElement {
        CdElement::scalar(0, Rational::from(v))
    }

    fn elem(size: usize, i: usize, j: usize, a: CdElement) -> UniTriMatrix {
        let mut m = UniTriMatrix::identity(size, a.level());
        m.set(i, j, a).unwrap();
        m
    }

    #[test]
    fn construction_checks() {
        let one = q(1);
        let zero = q(0);
        assert!(matches!(
            UniTriMatrix::new(0, vec![vec![one.clone(), zero.clone()], vec![one.clone(), one.clone()]]),
            Err(Error::NotUnitriangular(_))
        ));
        assert!(matches!(
            UniTriMatrix::new(0, vec![vec![q(2), zero.clone()], vec![zero.clone(), one.clone()]]),
            Err(Error::NotUnitriangular(_))
        ));
        assert!(matches!(UniTriMatrix::new(0, vec![vec![one]]), Err(Error::Shape(_))));
    }

    #[test]
    fn elementary_products() {
        let m = elem(3, 1, 2, q(2)).mul(&elem(3, 2, 3, q(5))).unwrap();
        assert_eq!(m.get(1, 2), &q(2));
        assert_eq!(m.get(2, 3), &q(5));
        assert_eq!(m.get(1, 3), &q(10));
        let a = elem(4, 1, 3, q(7));
        assert_eq!(a.mul(&UniTriMatrix::identity(4, 0)).unwrap(), a);
    }

    #[test]
    fn elementary_inverse() {
        let a = elem(5, 2, 4, q(3));
        assert_eq!(a.inverse().unwrap(), elem(5, 2, 4, q(-3)));
        let id = UniTriMatrix::identity(3, 0);
        assert_eq!(id.inverse().unwrap(), id);
    }

    #[test]
    fn general_inverse_size_five() {
        let mut m = UniTriMatrix::identity(5, 0);
        let mut v = 1;
        for i in 1..=5 {
            for j in i + 1..=5 {
                m.set(i, j, q(v * if (i + j) % 2 == 0 { 1 } else { -1 })).unwrap();
                v += 1;
            }
        }
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert!(inv.mul(&m).unwrap().is_identity());
    }

    #[test]
    fn realization_examples() {
        let g = HeisenbergGroup::new(InnerProduct::new(0, 2, Pairing::XThenF).unwrap());
        assert!(realization_matrix(&g, &g.identity()).unwrap().is_identity());
        let g1 = HeisenbergGroup::new(InnerProduct::new(0, 1, Pairing::XThenF).unwrap());
        let u = g1.element(q(0), vec![q(1)], vec![q(0)]).unwrap();
        let v = g1.element(q(0), vec![q(0)], vec![q(1)]).unwrap();
        for (a, b) in [(&u, &v), (&v, &u)] {
            let lhs = heisenberg_realization(&g1, &g1.mul(a, b).unwrap()).unwrap();
            let rhs = heisenberg_realization(&g1, a)
                .unwrap()
                .mul(&heisenberg_realization(&g1, b).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
        let m = realization_matrix(&g1, &g1.mul(&v, &u).unwrap()).unwrap();
        assert_eq!(heisenberg_from_matrix(&g1, &m).unwrap(), g1.mul(&v, &u).unwrap());
    }

    #[test]
    fn realization_needs_fx_over_quaternions() {
        let g = HeisenbergGroup::new(InnerProduct::new(2, 1, Pairing::XThenF).unwrap());
        assert!(matches!(
            heisenberg_realization(&g, &g.identity()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn corners() {
        assert!(corner_elem(2, 2, 3, &q(0)).unwrap().is_identity());
        let sum = corner_elem(3, 2, 4, &q(2))
            .unwrap()
            .mul(&corner_elem(3, 2, 4, &q(-5)).unwrap())
            .unwrap();
        assert_eq!(sum, corner_elem(3, 2, 4, &q(-3)).unwrap());
        assert_eq!(corner_elem(2, 1, 4, &q(1)), Err(Error::ExcludedCorner(4)));
        assert!(matches!(corner_elem(2, 3, 2, &q(1)), Err(Error::Index(_))));
        assert!(matches!(corner_elem(2, 1, 5, &q(1)), Err(Error::Index(_))));
        assert!(matches!(
            corner_elem(2, 1, 2, &CdElement::one(2)),
            Err(Error::Precondition(_))
        ));
        assert_eq!(admissible_corners(1), vec![(1, 2), (2, 3)]);
    }

    #[test]
    fn tilde_and_reduction() {
        let id = UniTriMatrix::identity(4, 0);
        for i in 2..=4 {
            assert!(tilde_membership(&id, i).unwrap());
        }
        assert!(!tilde_membership(&elem(4, 1, 2, q(1)), 2).unwrap());
        assert!(tilde_membership(&elem(4, 2, 3, q(9)), 2).unwrap());
        assert!(tilde_membership(&id, 1).is_err());
        assert!(tilde_membership(&id, 5).is_err());

        let n = 3;
        let reduced = delete_reduction(&corner_elem(n, 2, 3, &q(4)).unwrap(), 2).unwrap();
        assert_eq!(reduced, corner_elem(n - 1, 1, 2, &q(4)).unwrap());
        assert_eq!(delete_reduction(&id, 2).unwrap(), UniTriMatrix::identity(3, 0));
        assert_eq!(delete_reduction(&elem(4, 1, 3, q(1)), 2), Err(Error::NotInTilde(2)));
        assert_eq!(
            pad_reduction(&reduced, 2).unwrap(),
            corner_elem(n, 2, 3, &q(4)).unwrap()
        );
    }

    #[test]
    fn json_round_trip() {
        let m = elem(3, 1, 3, q(-2));
        let text = serde_json::to_string(&m).unwrap();
        let back: UniTriMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        let short = r#"{"size": 2, "level": 1, "rows": [["1", "3"], ["0", "1"]]}"#;
        let lifted: UniTriMatrix = serde_json::from_str(short).unwrap();
        assert_eq!(lifted.get(1, 2), &CdElement::scalar(1, Rational::from(3)));
        let bad = r#"{"size": 2, "level": 0, "rows": [["1", "3"], ["1", "1"]]}"#;
        assert!(serde_json::from_str::<UniTriMatrix>(bad).is_err());
    }
}
