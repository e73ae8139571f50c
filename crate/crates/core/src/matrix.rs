//! Dense matrices over any [`Field`] with exact elimination.

use crate::field::Field;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: Field> Matrix<K> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<K>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }
    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }
    pub fn filled(rows: usize, cols: usize, v: K) -> Self {
        Matrix { rows, cols, data: vec![v; rows * cols] }
    }
    /// Identity with scalars shaped like `proto`.
    pub fn identity_like(n: usize, proto: &K) -> Self {
        let mut m = Self::filled(n, n, proto.zero_like());
        for i in 0..n {
            m.data[i * n + i] = proto.one_like();
        }
        m
    }
    pub fn diagonal(entries: Vec<K>) -> Self {
        let n = entries.len();
        let zero = entries[0].zero_like();
        let mut m = Self::filled(n, n, zero);
        for (i, e) in entries.into_iter().enumerate() {
            m.data[i * n + i] = e;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }
    pub fn ncols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, r: usize, c: usize) -> &K {
        &self.data[r * self.cols + c]
    }
    pub fn set(&mut self, r: usize, c: usize, v: K) {
        self.data[r * self.cols + c] = v;
    }
    pub fn row(&self, r: usize) -> &[K] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn entries(&self) -> &[K] {
        &self.data
    }
    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> Matrix<L> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
    pub fn try_map<L: Field, E>(&self, f: impl Fn(&K) -> Result<L, E>) -> Result<Matrix<L>, E> {
        let data: Result<Vec<L>, E> = self.data.iter().map(f).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data: data? })
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    /// Product skipping zero entries of the left factor; monomial matrices are common.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let zero = o.data.first().or(self.data.first()).map(|x| x.zero_like());
        let Some(zero) = zero else { return Matrix { rows: self.rows, cols: o.cols, data: vec![] } };
        let mut out: Vec<Option<K>> = vec![None; self.rows * o.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let unit = a.is_one();
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let t = if unit { b.clone() } else { a.mul_ref(b) };
                    let slot = &mut out[i * o.cols + j];
                    *slot = Some(match slot.take() {
                        None => t,
                        Some(s) => s.add_ref(&t),
                    });
                }
            }
        }
        Matrix { rows: self.rows, cols: o.cols, data: out.into_iter().map(|x| x.unwrap_or_else(|| zero.clone())).collect() }
    }

    pub fn mul_vec(&self, v: &[K]) -> Vec<K> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = v[0].zero_like();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add_ref(&a.mul_ref(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, s: &K) -> Self {
        self.map(|x| x.mul_ref(s))
    }
    pub fn add(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols);
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add_ref(b)).collect() }
    }
    pub fn sub(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols);
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub_ref(b)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }))
    }
    /// `Some(λ)` if the matrix is λ·I.
    pub fn scalar_value(&self) -> Option<K> {
        if self.rows != self.cols || self.rows == 0 {
            return None;
        }
        let l = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if (i == j && *e != l) || (i != j && !e.is_zero()) {
                    return None;
                }
            }
        }
        Some(l)
    }
    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }
    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv().expect("pivot is nonzero");
            if !inv.is_one() {
                for j in c..self.cols {
                    let v = self.get(r, j).mul_ref(&inv);
                    self.set(r, j, v);
                }
            }
            let pivot_row: Vec<(usize, K)> =
                (c..self.cols).filter(|&j| !self.get(r, j).is_zero()).map(|j| (j, self.get(r, j).clone())).collect();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for (j, v) in &pivot_row {
                    let nv = self.get(i, *j).sub_ref(&f.mul_ref(v));
                    self.set(i, *j, nv);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of {v : A v = 0}, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<K>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let Some(proto) = self.data.first() else { return vec![] };
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![proto.zero_like(); self.cols];
                v[f] = proto.one_like();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = m.get(r, f).neg_ref();
                }
                v
            })
            .collect()
    }

    pub fn det(&self) -> K {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = self.data[0].one_like();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else { return det.zero_like() };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = det.neg_ref();
            }
            let piv = m.get(c, c).clone();
            det = det.mul_ref(&piv);
            let inv = piv.inv().unwrap();
            for i in c + 1..n {
                let f = m.get(i, c).mul_ref(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let nv = m.get(i, j).sub_ref(&f.mul_ref(m.get(c, j)));
                    m.set(i, j, nv);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let proto = self.data.first()?;
        let mut aug = Matrix::filled(n, 2 * n, proto.zero_like());
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, proto.one_like());
        }
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(aug.get(i, n + j).clone());
            }
        }
        Some(Matrix { rows: n, cols: n, data: out })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut r = Self::identity_like(self.rows, &self.data[0]);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        r
    }

    /// Least k ≥ 1 with A^k = I, searching up to `cap`.
    pub fn order(&self, cap: u64) -> Option<u64> {
        let mut p = self.clone();
        for k in 1..=cap {
            if p.is_identity() {
                return Some(k);
            }
            p = p.mul(self);
        }
        None
    }

    /// Least k ≥ 1 with A^k scalar, searching up to `cap`.
    pub fn projective_order(&self, cap: u64) -> Option<u64> {
        let mut p = self.clone();
        for k in 1..=cap {
            if p.scalar_value().is_some() {
                return Some(k);
            }
            p = p.mul(self);
        }
        None
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, o: &Self) -> Self {
        let proto = self.data.first().or(o.data.first()).expect("empty blocks").zero_like();
        let n = self.rows + o.rows;
        let c = self.cols + o.cols;
        let mut m = Matrix::filled(n, c, proto);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                m.set(self.rows + i, self.cols + j, o.get(i, j).clone());
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    fn fp(rows: &[&[i64]]) -> Matrix<Fp> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Fp::new(v, 101)).collect()).collect())
    }

    #[test]
    fn rank_det_inverse() {
        let a = fp(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(a.rank(), 3);
        // det by cofactor expansion: 1(50-48) - 2(40-42) + 3(32-35) = -3
        assert_eq!(a.det(), Fp::new(-3, 101));
        assert!(a.mul(&a.inverse().unwrap()).is_identity());
        let s = fp(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.rank(), 1);
        assert!(s.inverse().is_none());
        let ns = s.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(s.mul_vec(&ns[0]).iter().all(|x| x.v == 0));
    }

    #[test]
    fn orders() {
        let p = fp(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        assert_eq!(p.order(10), Some(3));
        assert_eq!(fp(&[&[2, 0], &[0, 2]]).projective_order(5), Some(1));
    }
}
