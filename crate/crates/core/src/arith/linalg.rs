//! Dense linear algebra over an exact field.

use super::field::{Field, Rat};
use super::poly::Poly;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    /// Builds from row vectors; all rows must have length `cols`.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn from_cols(cols: Vec<Vec<F>>, rows: usize) -> Self {
        Self::from_rows(cols, rows).transpose()
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, o: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, o.rows);
        let mut r = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = r.get(i, j).clone() + a.clone() * b.clone();
                        r.set(i, j, v);
                    }
                }
            }
        }
        r
    }

    /// Stacks columns of `self` and `o` side by side.
    pub fn hcat(&self, o: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.rows, o.rows);
        let rows = (0..self.rows).map(|i| self.row(i).iter().chain(o.row(i)).cloned().collect()).collect();
        Self::from_rows(rows, self.cols + o.cols)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv();
            for j in c..m.cols {
                let v = m.get(r, j).clone() * inv.clone();
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let b = m.get(r, j).clone();
                    if !b.is_zero() {
                        let v = m.get(i, j).clone() - f.clone() * b;
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (m, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.get(r, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `self · x = b`, if one exists.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hcat(&Matrix::from_cols(vec![b.to_vec()], self.rows));
        let (m, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = m.get(r, self.cols).clone();
        }
        Some(x)
    }
}

/// Rank of a set of vectors of common length `n`.
pub fn span_rank<F: Field>(vectors: &[Vec<F>], n: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(vectors.to_vec(), n).rank()
}

/// Determinant of a square matrix over `Q[x]` by fraction-free elimination.
pub fn bareiss_det_poly(mut m: Vec<Vec<Poly<Rat>>>) -> Poly<Rat> {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Poly::zero();
            };
            m.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{rat, ratio};

    fn m(rows: &[&[i64]]) -> Matrix<Rat> {
        let c = rows[0].len();
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(), c)
    }

    #[test]
    fn rank_kernel_solve() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(|x| x == &rat(0)));
        let x = a.solve(&[rat(1), rat(2), rat(0)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![rat(1), rat(2), rat(0)]);
        assert!(a.solve(&[rat(1), rat(3), rat(0)]).is_none());
    }

    #[test]
    fn inverse_via_solve() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.solve(&[rat(1), rat(0)]).unwrap(), vec![rat(1), rat(-1)]);
        let b = m(&[&[3]]);
        assert_eq!(b.solve(&[rat(1)]).unwrap(), vec![ratio(1, 3)]);
    }

    #[test]
    fn polynomial_determinant() {
        // det [[x, 1], [1, x]] = x^2 - 1
        let x = Poly::<Rat>::x();
        let one = Poly::<Rat>::one();
        let d = bareiss_det_poly(vec![vec![x.clone(), one.clone()], vec![one.clone(), x.clone()]]);
        assert_eq!(d, Poly::from_ints(&[-1, 0, 1]));
        let z = Poly::<Rat>::zero();
        let d = bareiss_det_poly(vec![
            vec![z.clone(), one.clone(), z.clone()],
            vec![one.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), x.clone()],
        ]);
        assert_eq!(d, -x);
    }
}
