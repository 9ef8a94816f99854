//! Dense matrices over `F_{q^2}` (and its subfields) with exact elimination.

use std::fmt;

use crate::field_tower::{Fe, TowerData};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixF {
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl fmt::Debug for MatrixF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixF {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<u32> = self.row(i).iter().map(|x| x.0).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Solved(Vec<Fe>),
    /// `y` with `y A = 0` and `y b != 0`.
    Inconsistent(Vec<Fe>),
}

/// Reduced row echelon form together with its pivot columns.
pub struct Echelon {
    pub matrix: MatrixF,
    pub pivots: Vec<usize>,
}

impl MatrixF {
    pub fn zeros(rows: usize, cols: usize) -> MatrixF {
        MatrixF {
            rows,
            cols,
            data: vec![Fe::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> MatrixF {
        let mut m = MatrixF::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn scalar(n: usize, c: Fe) -> MatrixF {
        let mut m = MatrixF::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    pub fn diagonal(entries: &[Fe]) -> MatrixF {
        let mut m = MatrixF::zeros(entries.len(), entries.len());
        for (i, &c) in entries.iter().enumerate() {
            m.set(i, i, c);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fe>]) -> MatrixF {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        MatrixF {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Matrix whose columns are the given vectors; `len` fixes the row count
    /// when the list is empty.
    pub fn from_cols(cols: &[Vec<Fe>], len: usize) -> MatrixF {
        let mut m = MatrixF::zeros(len, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), len, "column length");
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Fe) -> MatrixF {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        MatrixF { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Fe) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn col(&self, j: usize) -> Vec<Fe> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
    pub fn columns(&self) -> Vec<Vec<Fe>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }
    pub fn entries(&self) -> &[Fe] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> MatrixF {
        MatrixF::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn map(&self, f: impl Fn(Fe) -> Fe) -> MatrixF {
        MatrixF {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> MatrixF {
        MatrixF::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j))
    }
    pub fn select_cols(&self, idx: &[usize]) -> MatrixF {
        MatrixF::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]))
    }

    pub fn hstack(&self, other: &MatrixF) -> MatrixF {
        assert_eq!(self.rows, other.rows);
        MatrixF::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        })
    }
    pub fn vstack(&self, other: &MatrixF) -> MatrixF {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        MatrixF {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, other: &MatrixF, t: &TowerData) -> MatrixF {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = MatrixF::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j);
                        out.set(i, j, t.add(cur, t.mul(a, b)));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Fe], t: &TowerData) -> Vec<Fe> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Fe::ZERO, |acc, (&a, &b)| t.add(acc, t.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, other: &MatrixF, t: &TowerData) -> MatrixF {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        MatrixF {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| t.add(a, b))
                .collect(),
        }
    }
    pub fn sub(&self, other: &MatrixF, t: &TowerData) -> MatrixF {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        MatrixF {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| t.sub(a, b))
                .collect(),
        }
    }
    pub fn scale(&self, c: Fe, t: &TowerData) -> MatrixF {
        self.map(|x| t.mul(c, x))
    }

    /// Kronecker product; basis `e_i ⊗ f_j` in lexicographic order.
    pub fn kron(&self, other: &MatrixF, t: &TowerData) -> MatrixF {
        let (r2, c2) = (other.rows, other.cols);
        MatrixF::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            t.mul(self.get(i / r2, j / c2), other.get(i % r2, j % c2))
        })
    }

    pub fn rref(&self, t: &TowerData) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = t.inv(m.get(r, c));
            for j in c..m.cols {
                let v = m.get(r, j);
                m.set(r, j, t.mul(v, inv));
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = t.sub(m.get(i, j), t.mul(f, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, t: &TowerData) -> usize {
        self.rref(t).pivots.len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column.
    pub fn nullspace(&self, t: &TowerData) -> Vec<Vec<Fe>> {
        let Echelon { matrix, pivots } = self.rref(t);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Fe::ZERO; self.cols];
                v[f] = Fe::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = t.neg(matrix.get(r, f));
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self, t: &TowerData) -> Option<MatrixF> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let Echelon { matrix, pivots } = self.hstack(&MatrixF::identity(n)).rref(t);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(MatrixF::from_fn(n, n, |i, j| matrix.get(i, n + j)))
    }

    pub fn is_invertible(&self, t: &TowerData) -> bool {
        self.is_square() && self.rank(t) == self.rows
    }

    /// Solves `A x = b`, or returns a left-kernel certificate of inconsistency.
    pub fn solve(&self, b: &[Fe], t: &TowerData) -> Solution {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&MatrixF::from_cols(&[b.to_vec()], self.rows));
        let Echelon { matrix, pivots } = aug.rref(t);
        if pivots.last() == Some(&self.cols) {
            let cert = self
                .transpose()
                .nullspace(t)
                .into_iter()
                .find(|y| !dot(y, b, t).is_zero())
                .expect("inconsistent system has a separating left-kernel vector");
            return Solution::Inconsistent(cert);
        }
        let mut x = vec![Fe::ZERO; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = matrix.get(r, self.cols);
        }
        Solution::Solved(x)
    }

    /// Column-reduced echelon basis of the column space: pivot of each column
    /// is its first nonzero entry from the top, equal to 1, and every other
    /// basis column vanishes in that row. Returns the basis and pivot rows.
    pub fn column_echelon(&self, t: &TowerData) -> (MatrixF, Vec<usize>) {
        let Echelon { matrix, pivots } = self.transpose().rref(t);
        let basis = matrix
            .select_rows(&(0..pivots.len()).collect::<Vec<_>>())
            .transpose();
        (basis, pivots)
    }

    /// True when every column of `other` lies in the column space of `self`.
    pub fn spans(&self, other: &MatrixF, t: &TowerData) -> bool {
        self.rank(t) == self.hstack(other).rank(t)
    }

    pub fn same_column_space(&self, other: &MatrixF, t: &TowerData) -> bool {
        self.spans(other, t) && other.spans(self, t)
    }

    pub fn to_u32_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.0).collect())
            .collect()
    }
}

/// Characteristic polynomial `det(xI - A)`, low degree first, via reduction
/// to upper Hessenberg form.
pub fn charpoly(a: &MatrixF, t: &TowerData) -> Vec<Fe> {
    assert!(a.is_square());
    let n = a.rows;
    let mut h = a.clone();
    for col in 0..n.saturating_sub(2) {
        let Some(piv) = (col + 1..n).find(|&i| !h.get(i, col).is_zero()) else {
            continue;
        };
        if piv != col + 1 {
            h.swap_rows(piv, col + 1);
            for i in 0..n {
                h.data.swap(i * n + piv, i * n + col + 1);
            }
        }
        let inv = t.inv(h.get(col + 1, col));
        for i in col + 2..n {
            let f = t.mul(h.get(i, col), inv);
            if f.is_zero() {
                continue;
            }
            for j in 0..n {
                let v = t.sub(h.get(i, j), t.mul(f, h.get(col + 1, j)));
                h.set(i, j, v);
            }
            // similarity: column col+1 += f * column i
            for r in 0..n {
                let v = t.add(h.get(r, col + 1), t.mul(f, h.get(r, i)));
                h.set(r, col + 1, v);
            }
        }
    }
    // p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_im (prod_{j=i+1..m} h_{j,j-1}) p_{i-1}
    let mut polys: Vec<Vec<Fe>> = vec![vec![Fe::ONE]];
    for m in 0..n {
        let prev = &polys[m];
        let mut next = vec![Fe::ZERO; m + 2];
        for (d, &c) in prev.iter().enumerate() {
            next[d + 1] = t.add(next[d + 1], c);
            next[d] = t.sub(next[d], t.mul(h.get(m, m), c));
        }
        let mut prod = Fe::ONE;
        for i in (0..m).rev() {
            prod = t.mul(prod, h.get(i + 1, i));
            let coef = t.mul(h.get(i, m), prod);
            if coef.is_zero() {
                continue;
            }
            for (d, &c) in polys[i].iter().enumerate() {
                next[d] = t.sub(next[d], t.mul(coef, c));
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

pub fn dot(a: &[Fe], b: &[Fe], t: &TowerData) -> Fe {
    a.iter()
        .zip(b)
        .fold(Fe::ZERO, |acc, (&x, &y)| t.add(acc, t.mul(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_tower::build_tower;

    fn fe_rows(t: &TowerData, rows: &[&[i64]]) -> MatrixF {
        MatrixF::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| t.from_int(x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn inverse_and_rank() {
        let t = build_tower(5, 1).unwrap();
        let a = fe_rows(&t, &[&[1, 2], &[3, 4]]);
        let inv = a.inverse(&t).unwrap();
        assert_eq!(a.mul(&inv, &t), MatrixF::identity(2));
        let s = fe_rows(&t, &[&[1, 2], &[2, 4]]);
        assert!(s.inverse(&t).is_none());
        assert_eq!(s.rank(&t), 1);
    }

    #[test]
    fn nullspace_is_kernel() {
        let t = build_tower(7, 1).unwrap();
        let a = fe_rows(&t, &[&[1, 2, 3, 4], &[0, 1, 2, 3]]);
        let ns = a.nullspace(&t);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.apply(&v, &t).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn inconsistent_system_certificate() {
        let t = build_tower(3, 1).unwrap();
        let a = fe_rows(&t, &[&[1, 1], &[2, 2]]);
        let b = vec![t.from_int(1), t.from_int(1)];
        match a.solve(&b, &t) {
            Solution::Inconsistent(y) => {
                assert!(a.transpose().apply(&y, &t).iter().all(|x| x.is_zero()));
                assert!(!dot(&y, &b, &t).is_zero());
            }
            Solution::Solved(_) => panic!("expected inconsistency"),
        }
        let b = vec![t.from_int(1), t.from_int(2)];
        let Solution::Solved(x) = a.solve(&b, &t) else {
            panic!("expected solution")
        };
        assert_eq!(a.apply(&x, &t), b);
    }

    #[test]
    fn column_echelon_shape() {
        let t = build_tower(5, 1).unwrap();
        let a = fe_rows(&t, &[&[0, 0], &[2, 4], &[1, 3]]);
        let (b, piv) = a.column_echelon(&t);
        assert_eq!(piv, vec![1, 2]);
        assert_eq!(b.get(1, 0), Fe::ONE);
        assert_eq!(b.get(2, 0), Fe::ZERO);
        assert_eq!(b.get(2, 1), Fe::ONE);
        assert!(a.same_column_space(&b, &t));
    }

    #[test]
    fn kron_mixed_product() {
        let t = build_tower(3, 2).unwrap();
        let g = t.gen();
        let a = MatrixF::from_rows(&[vec![g, Fe::ONE], vec![Fe::ZERO, g]]);
        let b = MatrixF::from_rows(&[vec![Fe::ONE, g], vec![g, g]]);
        let lhs = a.kron(&b, &t).mul(&b.kron(&a, &t), &t);
        let rhs = a.mul(&b, &t).kron(&b.mul(&a, &t), &t);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn cayley_hamilton() {
        let t = build_tower(7, 1).unwrap();
        let a = fe_rows(
            &t,
            &[&[0, 2, 3, 1], &[4, 0, 6, 2], &[1, 1, 1, 5], &[3, 0, 2, 0]],
        );
        let p = charpoly(&a, &t);
        assert_eq!(p.len(), 5);
        assert_eq!(p[4], Fe::ONE);
        let mut acc = MatrixF::zeros(4, 4);
        let mut pw = MatrixF::identity(4);
        for &c in &p {
            acc = acc.add(&pw.scale(c, &t), &t);
            pw = pw.mul(&a, &t);
        }
        assert!(acc.is_zero());
    }
}
