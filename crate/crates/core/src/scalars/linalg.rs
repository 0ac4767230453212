//! Dense exact linear algebra over `Q(zeta_m)`.

use alloc::vec;
use alloc::vec::Vec;

use super::cyclotomic::Cyclotomic;
use super::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dense {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Cyclotomic>,
}

impl Dense {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Dense { rows, cols, data: vec![Cyclotomic::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Cyclotomic::one();
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Cyclotomic>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Dense { rows, cols, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyclotomic) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Cyclotomic> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &Dense) -> Dense {
        assert_eq!(self.cols, other.rows);
        let mut out = Dense::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Cyclotomic::zero(), |acc, j| {
                    if v[j].is_zero() {
                        acc
                    } else {
                        acc + self.get(i, j) * &v[j]
                    }
                })
            })
            .collect()
    }

    pub fn sub(&self, other: &Dense) -> Dense {
        Dense {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Cyclotomic) -> Dense {
        Dense { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Cyclotomic::is_zero)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Dense, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, row * m.cols + j);
                }
            }
            let inv = m.get(row, col).inv().unwrap();
            for j in col..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col).clone();
                for j in col..m.cols {
                    let v = m.get(r, j) - &(&f * m.get(row, j));
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel.
    pub fn nullspace(&self) -> Vec<Vec<Cyclotomic>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Cyclotomic::zero(); self.cols];
                v[f] = Cyclotomic::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f);
                }
                v
            })
            .collect()
    }

    /// Some solution of `self * x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Cyclotomic]) -> Option<Vec<Cyclotomic>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Dense::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Cyclotomic::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Dense> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Dense::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Cyclotomic::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = Dense::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(out)
    }

    /// Characteristic polynomial `det(lambda - A)` by the Faddeev–LeVerrier recursion.
    pub fn charpoly(&self) -> Poly {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![Cyclotomic::zero(); n + 1];
        coeffs[n] = Cyclotomic::one();
        let mut m = Dense::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I ; c_{n-k} = -tr(A M_k) / k
            let mut next = self.mul(&m);
            for i in 0..n {
                let v = next.get(i, i) + &coeffs[n - k + 1];
                next.set(i, i, v);
            }
            m = next;
            let am = self.mul(&m);
            let tr = (0..n).fold(Cyclotomic::zero(), |acc, i| acc + am.get(i, i));
            coeffs[n - k] = -tr.scale(&super::rational::q(1, k as i64));
        }
        Poly::new(coeffs)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_nilpotent(&self) -> bool {
        let n = self.rows;
        let mut p = self.clone();
        for _ in 1..n {
            p = p.mul(self);
        }
        p.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_i64(n)
    }

    #[test]
    fn nullspace_and_solve() {
        let a = Dense::from_rows(2, 3, vec![c(1), c(2), c(3), c(2), c(4), c(6)]);
        assert_eq!(a.rank(), 1);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).iter().all(Cyclotomic::is_zero));
        }
        assert!(a.solve(&[c(1), c(3)]).is_none());
        let x = a.solve(&[c(1), c(2)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![c(1), c(2)]);
    }

    #[test]
    fn charpoly_of_rotation() {
        let a = Dense::from_rows(2, 2, vec![c(0), c(-1), c(1), c(0)]);
        assert_eq!(a.charpoly(), Poly::new(vec![c(1), c(0), c(1)]));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Dense::identity(2));
    }
}
