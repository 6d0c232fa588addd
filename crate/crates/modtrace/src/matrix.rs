//! Dense matrices over cyclotomic numbers, and exact elimination.

use std::collections::BTreeMap;
use std::fmt;

use crate::cyclo::CycNumber;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<CycNumber>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = CycNumber;
    fn index(&self, (i, j): (usize, usize)) -> &CycNumber {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut CycNumber {
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![CycNumber::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        Matrix::scalar(n, &CycNumber::one())
    }

    pub fn scalar(n: usize, c: &CycNumber) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn diag(d: Vec<CycNumber>) -> Matrix {
        let n = d.len();
        let mut m = Matrix::zeros(n, n);
        for (i, x) in d.into_iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<CycNumber>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Column vector.
    pub fn column(v: Vec<CycNumber>) -> Matrix {
        Matrix {
            rows: v.len(),
            cols: 1,
            data: v,
        }
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

    pub fn row(&self, i: usize) -> &[CycNumber] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<CycNumber> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<CycNumber>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// The c with self = c * Id, if any.
    pub fn scalar_value(&self) -> Option<CycNumber> {
        if !self.is_square() || !self.is_diagonal() {
            return None;
        }
        if self.rows == 0 {
            return Some(CycNumber::zero());
        }
        let c = &self[(0, 0)];
        (1..self.rows).all(|i| &self[(i, i)] == c).then(|| c.clone())
    }

    pub fn is_identity(&self) -> bool {
        self.scalar_value().is_some_and(|c| c.is_one()) || (self.rows == 0 && self.cols == 0)
    }

    pub fn diagonal(&self) -> Vec<CycNumber> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn map(&self, f: impl Fn(&CycNumber) -> CycNumber) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| if x.is_zero() { x.clone() } else { f(x) }).collect(),
        }
    }

    pub fn scale(&self, c: &CycNumber) -> Matrix {
        if c.is_one() {
            return self.clone();
        }
        self.map(|x| x * c)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = &self[(i, j)];
                if !x.is_zero() {
                    t[(j, i)] = x.clone();
                }
            }
        }
        t
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in add");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in sub");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        self.map(|x| -x)
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "shape mismatch in mul");
        let mut out = Matrix::zeros(self.rows, o.cols);
        // sparsity pattern of o, row by row
        let o_nz: Vec<Vec<usize>> = (0..o.rows)
            .map(|k| (0..o.cols).filter(|&j| !o[(k, j)].is_zero()).collect())
            .collect();
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for &j in &o_nz[k] {
                    let p = a * &o[(k, j)];
                    let slot = &mut out.data[i * o.cols + j];
                    *slot = &*slot + &p;
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Matrix {
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Kronecker product, left factor major.
    pub fn kron(&self, o: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * o.rows, self.cols * o.cols);
        let oc = self.cols * o.cols;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        let b = &o[(k, l)];
                        if b.is_zero() {
                            continue;
                        }
                        out.data[(i * o.rows + k) * oc + j * o.cols + l] = a * b;
                    }
                }
            }
        }
        out
    }

    /// Sub-block with the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..m.cols {
            if row == m.rows {
                break;
            }
            // first nonzero entry at or below `row`
            let Some(p) = (row..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, row * m.cols + j);
                }
            }
            let inv = m[(row, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                if !m[(row, j)].is_zero() {
                    m[(row, j)] = &m[(row, j)] * &inv;
                }
            }
            let prow: Vec<(usize, CycNumber)> = (c..m.cols)
                .filter(|&j| !m[(row, j)].is_zero())
                .map(|j| (j, m[(row, j)].clone()))
                .collect();
            for i in 0..m.rows {
                if i == row {
                    continue;
                }
                let f = m[(i, c)].clone();
                if f.is_zero() {
                    continue;
                }
                for (j, v) in &prow {
                    let t = &f * v;
                    m[(i, *j)] = &m[(i, *j)] - &t;
                }
            }
            pivots.push(c);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn null_space(&self) -> Vec<Vec<CycNumber>> {
        let (r, pivots) = self.rref();
        null_from_rref(self.cols, &pivots, |i, j| r[(i, j)].clone())
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = CycNumber::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Ok(r.select(&rows, &cols))
    }
}

fn null_from_rref(
    ncols: usize,
    pivots: &[usize],
    entry: impl Fn(usize, usize) -> CycNumber,
) -> Vec<Vec<CycNumber>> {
    let mut is_pivot = vec![None; ncols];
    for (i, &p) in pivots.iter().enumerate() {
        is_pivot[p] = Some(i);
    }
    let mut basis = Vec::new();
    for f in 0..ncols {
        if is_pivot[f].is_some() {
            continue;
        }
        let mut v = vec![CycNumber::zero(); ncols];
        v[f] = CycNumber::one();
        for (i, &p) in pivots.iter().enumerate() {
            if p < f {
                let e = entry(i, f);
                if !e.is_zero() {
                    v[p] = -e;
                }
            }
        }
        basis.push(v);
    }
    basis
}

/// A sparse linear system, rows as column -> coefficient maps.
#[derive(Default, Clone)]
pub struct SparseSystem {
    ncols: usize,
    rows: Vec<BTreeMap<usize, CycNumber>>,
}

impl SparseSystem {
    pub fn new(ncols: usize) -> Self {
        SparseSystem {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: BTreeMap<usize, CycNumber>) {
        let row: BTreeMap<usize, CycNumber> = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        if !row.is_empty() {
            self.rows.push(row);
        }
    }

    /// Null space basis from the reduced echelon form. The RREF is unique,
    /// so the basis does not depend on the elimination order.
    pub fn null_space(&self) -> Vec<Vec<CycNumber>> {
        // pivot column -> normalized row (leading 1 at the pivot)
        let mut piv: BTreeMap<usize, BTreeMap<usize, CycNumber>> = BTreeMap::new();
        for row in &self.rows {
            let mut row = row.clone();
            loop {
                let hit = row.keys().copied().find(|c| piv.contains_key(c));
                let Some(c) = hit else { break };
                let f = row[&c].clone();
                for (j, v) in &piv[&c] {
                    let t = &f * v;
                    let e = row.entry(*j).or_insert_with(CycNumber::zero);
                    *e = &*e - &t;
                    if e.is_zero() {
                        row.remove(j);
                    }
                }
            }
            if let Some((&c, lead)) = row.iter().next() {
                let inv = lead.inv().expect("nonzero lead");
                let row: BTreeMap<usize, CycNumber> =
                    row.iter().map(|(j, v)| (*j, v * &inv)).collect();
                piv.insert(c, row);
            }
        }
        // back substitution, highest pivot first
        let cols: Vec<usize> = piv.keys().rev().copied().collect();
        for &c in &cols {
            let prow = piv[&c].clone();
            for (_, row) in piv.range_mut(..c) {
                if let Some(f) = row.get(&c).cloned() {
                    for (j, v) in &prow {
                        let t = &f * v;
                        let e = row.entry(*j).or_insert_with(CycNumber::zero);
                        *e = &*e - &t;
                        if e.is_zero() {
                            row.remove(j);
                        }
                    }
                }
            }
        }
        let pivots: Vec<usize> = piv.keys().copied().collect();
        let rows: Vec<&BTreeMap<usize, CycNumber>> = piv.values().collect();
        null_from_rref(self.ncols, &pivots, |i, j| {
            rows[i].get(&j).cloned().unwrap_or_else(CycNumber::zero)
        })
    }
}
