//! 3x3 matrices over a ring and their elementary factorisations.

use std::fmt;

use serde::Serialize;

use super::ring::Ring;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Axis {
        Axis::ALL[i]
    }

    pub fn name(self) -> &'static str {
        ["x", "y", "z"][self.index()]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mat3<R> {
    entries: [[R; 3]; 3],
    det: R,
}

fn det3<R: Ring>(m: &[[R; 3]; 3]) -> R {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        m[r1][c1].clone() * m[r2][c2].clone() - m[r1][c2].clone() * m[r2][c1].clone()
    };
    m[0][0].clone() * minor(1, 2, 1, 2) - m[0][1].clone() * minor(1, 2, 0, 2)
        + m[0][2].clone() * minor(1, 2, 0, 1)
}

impl<R: Ring> Mat3<R> {
    pub fn new(entries: [[R; 3]; 3]) -> Mat3<R> {
        let det = det3(&entries);
        Mat3 { entries, det }
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> R) -> Mat3<R> {
        Mat3::new(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    pub fn identity(proto: &R) -> Mat3<R> {
        Mat3::from_fn(|i, j| if i == j { proto.one_like() } else { proto.zero_like() })
    }

    pub fn entries(&self) -> &[[R; 3]; 3] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.entries[i][j]
    }

    pub fn det(&self) -> &R {
        &self.det
    }

    pub fn is_invertible(&self) -> bool {
        self.det.is_unit()
    }

    pub fn column(&self, j: usize) -> [R; 3] {
        std::array::from_fn(|i| self.entries[i][j].clone())
    }

    pub fn mul(&self, o: &Mat3<R>) -> Mat3<R> {
        Mat3::from_fn(|i, j| {
            let mut acc = self.entries[i][0].zero_like();
            for k in 0..3 {
                let (x, y) = (&self.entries[i][k], &o.entries[k][j]);
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                acc = acc + x.clone() * y.clone();
            }
            acc
        })
    }

    /// `self * E` for the matrix `E` of an elementary move.
    pub fn apply_move(&self, mv: &ElementaryMove<R>) -> Mat3<R> {
        let mut e = self.entries.clone();
        let det = match mv {
            ElementaryMove::Scale { axis, lambda } => {
                let j = axis.index();
                for row in e.iter_mut() {
                    row[j] = row[j].clone() * lambda.clone();
                }
                self.det.clone() * lambda.clone()
            }
            ElementaryMove::Swap { i, j } => {
                for row in e.iter_mut() {
                    row.swap(i.index(), j.index());
                }
                -self.det.clone()
            }
            ElementaryMove::Shear { target, source, mu } => {
                let (t, s) = (target.index(), source.index());
                for row in e.iter_mut() {
                    if !row[t].is_zero() {
                        row[s] = row[s].clone() + mu.clone() * row[t].clone();
                    }
                }
                self.det.clone()
            }
        };
        Mat3 { entries: e, det }
    }

    pub fn inverse(&self) -> Result<Mat3<R>> {
        let di = self.det.inverse().ok_or(Error::NotInvertible)?;
        let m = &self.entries;
        // Adjugate: transpose of the cofactor matrix.
        Ok(Mat3::from_fn(|i, j| {
            let (r1, r2) = others(j);
            let (c1, c2) = others(i);
            let minor = m[r1][c1].clone() * m[r2][c2].clone() - m[r1][c2].clone() * m[r2][c1].clone();
            let signed = if (i + j) % 2 == 0 { minor } else { -minor };
            signed * di.clone()
        }))
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Mat3<S> {
        Mat3::from_fn(|i, j| f(&self.entries[i][j]))
    }

    /// Entries printed row by row.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.entries.iter().map(|row| row.iter().map(|e| e.to_string()).collect()).collect()
    }
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// One elementary coordinate change.
#[derive(Clone, Debug, PartialEq)]
pub enum ElementaryMove<R> {
    /// Multiply one coordinate by a unit.
    Scale { axis: Axis, lambda: R },
    Swap { i: Axis, j: Axis },
    /// `target <- target + mu * source`, i.e. the matrix `I + mu E[target][source]`.
    Shear { target: Axis, source: Axis, mu: R },
}

impl<R: Ring> ElementaryMove<R> {
    pub fn scale(axis: Axis, lambda: R) -> Self {
        ElementaryMove::Scale { axis, lambda }
    }

    pub fn swap(i: Axis, j: Axis) -> Self {
        assert_ne!(i, j, "swap needs distinct axes");
        ElementaryMove::Swap { i, j }
    }

    pub fn shear(target: Axis, source: Axis, mu: R) -> Self {
        assert_ne!(target, source, "shear needs distinct axes");
        ElementaryMove::Shear { target, source, mu }
    }

    pub fn matrix(&self, proto: &R) -> Mat3<R> {
        let id = |i: usize, j: usize| if i == j { proto.one_like() } else { proto.zero_like() };
        match self {
            ElementaryMove::Scale { axis, lambda } => Mat3::from_fn(|i, j| {
                if i == j && i == axis.index() {
                    lambda.clone()
                } else {
                    id(i, j)
                }
            }),
            ElementaryMove::Swap { i: a, j: b } => {
                let (a, b) = (a.index(), b.index());
                let perm = |i: usize| if i == a { b } else if i == b { a } else { i };
                Mat3::from_fn(|i, j| id(perm(i), j))
            }
            ElementaryMove::Shear { target, source, mu } => Mat3::from_fn(|i, j| {
                if i == target.index() && j == source.index() {
                    mu.clone()
                } else {
                    id(i, j)
                }
            }),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(match self {
            ElementaryMove::Scale { axis, lambda } => ElementaryMove::Scale {
                axis: *axis,
                lambda: lambda.inverse().ok_or(Error::NotAUnit)?,
            },
            ElementaryMove::Swap { .. } => self.clone(),
            ElementaryMove::Shear { target, source, mu } => {
                ElementaryMove::Shear { target: *target, source: *source, mu: -mu.clone() }
            }
        })
    }
}

impl<R: Ring> fmt::Display for ElementaryMove<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementaryMove::Scale { axis, lambda } => write!(f, "Scale({}, {})", axis.name(), lambda),
            ElementaryMove::Swap { i, j } => write!(f, "Swap({},{})", i.name(), j.name()),
            ElementaryMove::Shear { target, source, mu } => {
                write!(f, "Shear({}<-{}, {})", target.name(), source.name(), mu)
            }
        }
    }
}

/// Product of the moves in order; the identity for an empty list.
pub fn product<R: Ring>(moves: &[ElementaryMove<R>], proto: &R) -> Mat3<R> {
    moves.iter().fold(Mat3::identity(proto), |acc, m| acc.mul(&m.matrix(proto)))
}

/// Factor an invertible matrix into elementary moves whose product, in
/// order, is `m`.
///
/// Gauss-Jordan elimination by rows: each column is pivoted on the first
/// unit entry at or below the diagonal. Over a field or a local ring an
/// invertible matrix always has such a pivot; over a polynomial ring the
/// elimination can get stuck and reports `NoUnitPivot`.
pub fn decompose_gl3<R: Ring>(m: &Mat3<R>) -> Result<Vec<ElementaryMove<R>>> {
    if !m.is_invertible() {
        return Err(Error::NotInvertible);
    }
    let mut a = m.entries.clone();
    let mut row_ops: Vec<ElementaryMove<R>> = Vec::new();
    for j in 0..3 {
        let i = (j..3).find(|&i| a[i][j].is_unit()).ok_or(Error::NoUnitPivot)?;
        if i != j {
            a.swap(i, j);
            row_ops.push(ElementaryMove::swap(Axis::from_index(j), Axis::from_index(i)));
        }
        if !a[j][j].is_one() {
            let inv = a[j][j].inverse().ok_or(Error::NoUnitPivot)?;
            for k in 0..3 {
                a[j][k] = a[j][k].clone() * inv.clone();
            }
            row_ops.push(ElementaryMove::scale(Axis::from_index(j), inv));
        }
        for r in 0..3 {
            if r == j || a[r][j].is_zero() {
                continue;
            }
            let mu = -a[r][j].clone();
            for k in 0..3 {
                a[r][k] = a[r][k].clone() + mu.clone() * a[j][k].clone();
            }
            row_ops.push(ElementaryMove::shear(Axis::from_index(r), Axis::from_index(j), mu));
        }
    }
    // E_k ... E_1 M = I, so M = E_1^{-1} ... E_k^{-1}.
    row_ops.iter().map(|e| e.inverse()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::{Field, Scalar};

    fn mat(f: &Field, rows: [[i64; 3]; 3]) -> Mat3<Scalar> {
        Mat3::from_fn(|i, j| Scalar::from_i64(f, rows[i][j]))
    }

    #[test]
    fn small_decompositions() {
        let f = Field::prime(3).unwrap();
        let one = Scalar::one(&f);
        assert!(decompose_gl3(&Mat3::identity(&one)).unwrap().is_empty());
        let sw = mat(&f, [[0, 1, 0], [1, 0, 0], [0, 0, 1]]);
        assert_eq!(decompose_gl3(&sw).unwrap(), vec![ElementaryMove::swap(Axis::X, Axis::Y)]);
        let sh = mat(&f, [[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(decompose_gl3(&sh).unwrap(), vec![ElementaryMove::shear(Axis::X, Axis::Y, one.clone())]);
        let sing = mat(&f, [[1, 1, 0], [1, 1, 0], [0, 0, 1]]);
        assert_eq!(decompose_gl3(&sing), Err(Error::NotInvertible));
    }

    #[test]
    fn every_invertible_matrix_over_f2_reconstructs() {
        let f = Field::prime(2).unwrap();
        let one = Scalar::one(&f);
        let mut count = 0;
        for bits in 0u32..512 {
            let m = Mat3::from_fn(|i, j| Scalar::from_i64(&f, ((bits >> (3 * i + j)) & 1) as i64));
            if !m.is_invertible() {
                continue;
            }
            count += 1;
            let moves = decompose_gl3(&m).unwrap();
            assert_eq!(product(&moves, &one), m);
        }
        // |GL3(F2)| = 168.
        assert_eq!(count, 168);
    }

    #[test]
    fn inverse_matches() {
        let f = Field::prime(5).unwrap();
        let m = mat(&f, [[1, 2, 3], [0, 1, 4], [2, 0, 1]]);
        let mi = m.inverse().unwrap();
        assert_eq!(m.mul(&mi), Mat3::identity(&Scalar::one(&f)));
    }
}
