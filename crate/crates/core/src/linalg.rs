//! Exact Gaussian elimination over ℚ.

use rug::Rational;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::new(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    ///
    /// The pivot row is the first one with a nonzero entry, so the result only
    /// depends on the input matrix.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&i| *self.get(i, col) != 0) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = Rational::from(self.get(row, col).recip_ref());
            for j in col..self.cols {
                let idx = row * self.cols + j;
                self.data[idx] *= &inv;
            }
            for i in 0..self.rows {
                if i == row || *self.get(i, col) == 0 {
                    continue;
                }
                let factor = self.get(i, col).clone();
                for j in col..self.cols {
                    let t = Rational::from(&factor * self.get(row, j));
                    let idx = i * self.cols + j;
                    self.data[idx] -= t;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{v : Mv = 0}`, one vector per free column in increasing order,
    /// each with a 1 in its free column.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::new(); self.cols];
            v[free] = Rational::from(1);
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -m.get(r, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::new();
                for (j, x) in v.iter().enumerate() {
                    acc += Rational::from(self.get(i, j) * x);
                }
                acc
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&c| Rational::from(c)).collect()).collect())
    }

    #[test]
    fn rref_small() {
        let mut m = ints(&[&[2, 4, 6], &[1, 2, 4]]);
        assert_eq!(m.rref(), vec![0, 2]);
        assert_eq!(m, ints(&[&[1, 2, 0], &[0, 0, 1]]));
    }

    #[test]
    fn kernel_small() {
        let m = ints(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        assert_eq!(k[0], vec![Rational::from(-2), Rational::from(1), Rational::new()]);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|c| *c == 0));
        }
        assert!(ints(&[&[1, 0], &[0, 1]]).kernel().is_empty());
        assert_eq!(Matrix::zeros(0, 3).kernel().len(), 3);
    }

    fn matrix() -> impl Strategy<Value = Matrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-3i64..=3, c), r).prop_map(|rows| {
                Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(Rational::from).collect()).collect())
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in matrix()) {
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.len(), m.cols());
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(|c| *c == 0));
            }
        }

        #[test]
        fn rref_is_idempotent(m in matrix()) {
            let mut a = m.clone();
            let p = a.rref();
            let mut b = a.clone();
            prop_assert_eq!(b.rref(), p);
            prop_assert_eq!(a, b);
        }
    }
}
