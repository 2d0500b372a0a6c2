//! Dense matrices over a [`Ring`].

use std::fmt;

use super::rational::{int, Rational};
use super::ring::Ring;
use crate::error::{Error, Result};

/// Row-major dense matrix. The column `j` is the image of the `j`-th basis vector.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn from_fn<F: FnMut(usize, usize) -> T>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U, F: Fn(&T) -> Result<U>>(&self, f: F) -> Result<Matrix<U>> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize, proto: &T) -> Self {
        let z = proto.zero_like();
        Self::from_fn(rows, cols, |_, _| z.clone())
    }

    pub fn identity(n: usize, proto: &T) -> Self {
        let z = proto.zero_like();
        let o = proto.one_like();
        Self::from_fn(n, n, |i, j| if i == j { o.clone() } else { z.clone() })
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let z = diag[0].zero_like();
        Self::from_fn(diag.len(), diag.len(), |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                z.clone()
            }
        })
    }

    /// Any entry, used to produce zeros and ones in the right ring.
    pub fn proto(&self) -> &T {
        &self.data[0]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::vanishes)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    fn check_same(&self, rhs: &Self, what: &str) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs, "add")?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).plus(rhs.get(i, j))
        }))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs, "sub")?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).minus(rhs.get(i, j))
        }))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "mul: {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let z = self.proto().zero_like();
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = z.clone();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.vanishes() {
                    continue;
                }
                let b = rhs.get(k, j);
                if b.vanishes() {
                    continue;
                }
                acc = acc.plus(&a.times(b));
            }
            acc
        }))
    }

    /// Panicking variants for shapes already known to agree.
    pub fn add(&self, rhs: &Self) -> Self {
        self.try_add(rhs).expect("matrix shapes")
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.try_sub(rhs).expect("matrix shapes")
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("matrix shapes")
    }

    pub fn neg(&self) -> Self {
        self.map(Ring::negate)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|x| x.scale(c))
    }

    pub fn scale_by(&self, c: &T) -> Self {
        self.map(|x| x.times(c))
    }

    pub fn trace(&self) -> T {
        let mut acc = self.proto().zero_like();
        for i in 0..self.rows.min(self.cols) {
            acc = acc.plus(self.get(i, i));
        }
        acc
    }

    /// `[self, rhs] = self*rhs - rhs*self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        Self::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            self.get(i / rhs.rows, j / rhs.cols)
                .times(rhs.get(i % rhs.rows, j % rhs.cols))
        })
    }

    /// `self (x) I + I (x) rhs` for square matrices.
    pub fn kron_sum(&self, rhs: &Self) -> Self {
        let ia = Self::identity(self.rows, self.proto());
        let ib = Self::identity(rhs.rows, rhs.proto());
        self.kron(&ib).add(&ia.kron(rhs))
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(cols: &[Vec<T>]) -> Self {
        let rows = cols.first().map_or(0, Vec::len);
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn mat_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "mat_vec length");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.proto().zero_like();
                for (j, x) in v.iter().enumerate() {
                    if !x.vanishes() {
                        acc = acc.plus(&self.get(i, j).times(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.rows, self.proto());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Coefficients `[c_0, .., c_n]` of `det(x I - self)`, lowest degree first.
    ///
    /// Faddeev-LeVerrier; needs division by `1..n`, fine in any Q-algebra.
    pub fn charpoly(&self) -> Vec<T> {
        assert!(self.is_square(), "charpoly of a non-square matrix");
        let n = self.rows;
        let proto = self.proto().clone();
        let id = Self::identity(n, &proto);
        let mut c = vec![proto.zero_like(); n + 1];
        c[n] = proto.one_like();
        let mut m = Self::zeros(n, n, &proto);
        for k in 1..=n {
            m = self.mul(&m).add(&id.scale_by(&c[n - k + 1]));
            let t = self.mul(&m).trace();
            c[n - k] = t.scale(&Rational::new((-1).into(), (k as i64).into()));
        }
        c
    }

    pub fn det(&self) -> T {
        let c = self.charpoly();
        if self.rows % 2 == 0 {
            c[0].clone()
        } else {
            c[0].negate()
        }
    }

    /// Solves `self * X = rhs` by elimination with unit pivots.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if rhs.rows != self.rows {
            return Err(Error::Dimension(format!(
                "solve: {} equations, right side has {} rows",
                self.rows, rhs.rows
            )));
        }
        let n = self.cols;
        let k = rhs.cols;
        let mut a: Vec<Vec<T>> = (0..self.rows)
            .map(|i| {
                let mut row: Vec<T> = (0..n).map(|j| self.get(i, j).clone()).collect();
                row.extend((0..k).map(|j| rhs.get(i, j).clone()));
                row
            })
            .collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut free = false;
        let mut non_unit = false;
        let mut r = 0;
        for col in 0..n {
            let mut found = None;
            let mut any_nonzero = false;
            for (i, row) in a.iter().enumerate().skip(r) {
                if row[col].vanishes() {
                    continue;
                }
                any_nonzero = true;
                if let Some(inv) = row[col].try_inverse() {
                    found = Some((i, inv));
                    break;
                }
            }
            let Some((p, inv)) = found else {
                if any_nonzero {
                    non_unit = true;
                } else {
                    free = true;
                }
                continue;
            };
            a.swap(r, p);
            for x in a[r].iter_mut() {
                *x = x.times(&inv);
            }
            let pivot_row = a[r].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == r || row[col].vanishes() {
                    continue;
                }
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.vanishes() {
                        *x = x.minus(&f.times(p));
                    }
                }
            }
            pivots.push((r, col));
            r += 1;
        }
        for row in &a[r..] {
            if row[..n].iter().all(Ring::vanishes) && row[n..].iter().any(|x| !x.vanishes()) {
                return Err(Error::NoSolution);
            }
        }
        if non_unit {
            return Err(Error::NonUnitPivot);
        }
        if free {
            return Err(Error::Ambiguous);
        }
        let z = self.proto().zero_like();
        let mut x = Self::zeros(n, k, &z);
        for (row, col) in pivots {
            for j in 0..k {
                x.set(col, j, a[row][n + j].clone());
            }
        }
        Ok(x)
    }

    pub fn solve_vec(&self, b: &[T]) -> Result<Vec<T>> {
        let rhs = Self::from_columns(&[b.to_vec()]);
        Ok(self.solve(&rhs)?.column(0))
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        self.solve(&Self::identity(self.rows, self.proto()))
    }
}

impl Matrix<Rational> {
    pub fn from_ints(rows: usize, cols: usize, v: &[i64]) -> Self {
        assert_eq!(v.len(), rows * cols);
        Self::from_fn(rows, cols, |i, j| int(v[i * cols + j]))
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, col).vanishes()) else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, p * m.cols + j);
            }
            let inv = m.get(r, col).recip();
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, col).vanishes() {
                    continue;
                }
                let f = m.get(i, col).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("data", &self.data)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::laurent::QLaurent;
    use crate::algebra::rational::rat;
    use proptest::prelude::*;

    fn arb_matrix(n: usize) -> impl Strategy<Value = Matrix<Rational>> {
        prop::collection::vec(-4i64..5, n * n).prop_map(move |v| Matrix::from_ints(n, n, &v))
    }

    #[test]
    fn charpoly_of_companion() {
        // companion matrix of x^3 - 2x + 5
        let m = Matrix::from_ints(3, 3, &[0, 0, -5, 1, 0, 2, 0, 1, 0]);
        assert_eq!(m.charpoly(), vec![int(5), int(-2), int(0), int(1)]);
        assert_eq!(m.det(), int(-5));
    }

    #[test]
    fn solve_errors() {
        let a = Matrix::from_ints(2, 2, &[1, 1, 2, 2]);
        let b = Matrix::from_ints(2, 1, &[1, 3]);
        assert_eq!(a.solve(&b), Err(Error::NoSolution));
        let b = Matrix::from_ints(2, 1, &[1, 2]);
        assert_eq!(a.solve(&b), Err(Error::Ambiguous));

        let q = QLaurent::q();
        let one = QLaurent::one();
        let a = Matrix::from_fn(1, 1, |_, _| &q + &one);
        let b = Matrix::from_fn(1, 1, |_, _| one.clone());
        assert_eq!(a.solve(&b), Err(Error::NonUnitPivot));
    }

    #[test]
    fn laurent_inverse() {
        let q = QLaurent::q();
        let z = QLaurent::zero();
        let one = QLaurent::one();
        let m = Matrix::from_rows(vec![vec![z.clone(), q.clone()], vec![one.clone(), &q + &one]])
            .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2, &one));
    }

    #[test]
    fn kron_sum_is_derivation_on_tensors() {
        let a = Matrix::from_ints(2, 2, &[1, 2, 0, 3]);
        let b = Matrix::from_ints(2, 2, &[0, 1, 1, 0]);
        let s = a.kron_sum(&b);
        assert_eq!(s.trace(), int(2 * 4 + 2 * 0));
        assert_eq!(s.rows(), 4);
    }

    #[test]
    fn rref_rank() {
        let m = Matrix::from_ints(3, 3, &[1, 2, 3, 2, 4, 6, 1, 0, 1]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.rref().1, vec![0, 1]);
        assert_eq!(Matrix::from_fn(1, 1, |_, _| rat(1, 2)).rank(), 1);
    }

    proptest! {
        #[test]
        fn cayley_hamilton(m in arb_matrix(4)) {
            let c = m.charpoly();
            let mut acc = Matrix::zeros(4, 4, &int(0));
            for (k, ck) in c.iter().enumerate() {
                acc = acc.add(&m.pow(k as u32).scale(ck));
            }
            prop_assert!(acc.is_zero());
        }

        #[test]
        fn inverse_when_invertible(m in arb_matrix(3)) {
            match m.inverse() {
                Ok(inv) => prop_assert_eq!(m.mul(&inv), Matrix::identity(3, &int(1))),
                Err(_) => prop_assert!(m.det().vanishes()),
            }
        }
    }
}
