//! Dense matrices over a working field.

use crate::gf::WorkingField;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut m = Matrix::zeros(0, cols);
        for r in rows {
            m.push_row(r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: u32) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: &[u32]) {
        assert_eq!(row.len(), self.cols, "row length");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduces in place to reduced row echelon form and returns the pivot
    /// columns. Elimination stops early once `stop_at` pivots are found.
    fn reduce(&mut self, w: &WorkingField, stop_at: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows || pivots.len() >= stop_at {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = w.inv(self.get(r, c)).expect("pivot is nonzero");
            for k in c..self.cols {
                let v = w.mul(self.get(r, k), inv);
                self.set(r, k, v);
            }
            for i in 0..self.rows {
                let factor = self.get(i, c);
                if i == r || factor == 0 {
                    continue;
                }
                for k in c..self.cols {
                    let v = w.sub(self.get(i, k), w.mul(factor, self.get(r, k)));
                    self.set(i, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&mut self, w: &WorkingField) -> Vec<usize> {
        self.reduce(w, usize::MAX)
    }

    pub fn rank(&self, w: &WorkingField) -> usize {
        self.clone().reduce(w, usize::MAX).len()
    }

    /// Whether the rank is at least `target`, stopping as soon as it is.
    pub fn rank_at_least(&self, w: &WorkingField, target: usize) -> bool {
        self.clone().reduce(w, target).len() >= target
    }

    /// One solution of A·x = b with all free variables zero, or `None` if
    /// the system is inconsistent.
    pub fn solve(&self, w: &WorkingField, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let pivots = aug.rref(w);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Some(x)
    }

    /// A basis of the right kernel {x : A·x = 0}, one vector per free column.
    pub fn kernel(&self, w: &WorkingField) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref(w);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0; self.cols];
                v[free] = 1;
                for (r, &c) in pivots.iter().enumerate() {
                    v[c] = w.neg(m.get(r, free));
                }
                v
            })
            .collect()
    }

    pub fn mul_vec(&self, w: &WorkingField, x: &[u32]) -> Vec<u32> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(0, |acc, (&a, &b)| w.add(acc, w.mul(a, b)))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldDesc;
    use proptest::prelude::*;

    #[test]
    fn rank_solve_kernel_over_f3() {
        let w = FieldDesc::new(3, 1).unwrap().arith();
        // Third row is the sum of the first two.
        let a = Matrix::from_rows(3, &[vec![1, 2, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(a.rank(&w), 2);
        assert!(a.rank_at_least(&w, 2));
        assert!(!a.rank_at_least(&w, 3));
        let x = a.solve(&w, &[1, 2, 0]).unwrap();
        assert_eq!(a.mul_vec(&w, &x), vec![1, 2, 0]);
        assert_eq!(a.solve(&w, &[1, 2, 1]), None);
        let k = a.kernel(&w);
        assert_eq!(k.len(), 1);
        assert_eq!(a.mul_vec(&w, &k[0]), vec![0, 0, 0]);
    }

    #[test]
    fn empty_shapes() {
        let w = FieldDesc::new(2, 1).unwrap().arith();
        let a = Matrix::zeros(0, 3);
        assert_eq!(a.rank(&w), 0);
        assert_eq!(a.kernel(&w).len(), 3);
        assert_eq!(a.solve(&w, &[]), Some(vec![0, 0, 0]));
    }

    proptest! {
        #[test]
        fn rank_nullity_over_f9(entries in proptest::collection::vec(0u32..9, 20)) {
            let w = FieldDesc::new(3, 2).unwrap().arith();
            let rows: Vec<Vec<u32>> = entries.chunks(5).map(|c| c.to_vec()).collect();
            let a = Matrix::from_rows(5, &rows);
            let rank = a.rank(&w);
            let kernel = a.kernel(&w);
            prop_assert_eq!(rank + kernel.len(), 5);
            for v in &kernel {
                prop_assert!(a.mul_vec(&w, v).iter().all(|&x| x == 0));
            }
            let b = a.mul_vec(&w, &[1, 2, 3, 4, 5]);
            let x = a.solve(&w, &b).unwrap();
            prop_assert_eq!(a.mul_vec(&w, &x), b);
        }
    }
}
