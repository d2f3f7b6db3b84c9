use std::fmt;

use crate::field::CycloNumber;

/// Dense row-major matrix over ℚ(ζ_n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    order: u32,
    entries: Vec<CycloNumber>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, order: u32) -> Self {
        Self {
            rows,
            cols,
            order,
            entries: vec![CycloNumber::zero(order); rows * cols],
        }
    }

    pub fn identity(n: usize, order: u32) -> Self {
        let mut m = Self::zeros(n, n, order);
        for i in 0..n {
            m.set(i, i, CycloNumber::one(order));
        }
        m
    }

    /// Builds a matrix from rows; every entry is lifted to a common order.
    /// `cols` is used when `rows` is empty.
    pub fn from_rows(rows: Vec<Vec<CycloNumber>>, cols: usize) -> Self {
        let order = rows
            .iter()
            .flatten()
            .map(CycloNumber::order)
            .fold(1u32, num_integer::lcm);
        let cols = rows.first().map_or(cols, Vec::len);
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            entries.extend(row.into_iter().map(|x| x.lift(order)));
        }
        Self {
            rows: nrows,
            cols,
            order,
            entries,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| CycloNumber::from_int(x, 1)).collect())
                .collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn get(&self, r: usize, c: usize) -> &CycloNumber {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: CycloNumber) {
        if value.order() != self.order {
            let order = num_integer::lcm(self.order, value.order());
            if order != self.order {
                self.relift(order);
            }
            self.entries[r * self.cols + c] = value.lift(order);
        } else {
            self.entries[r * self.cols + c] = value;
        }
    }

    fn relift(&mut self, order: u32) {
        for e in &mut self.entries {
            *e = e.lift(order);
        }
        self.order = order;
    }

    pub fn row(&self, r: usize) -> &[CycloNumber] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            order: self.order,
            entries,
        }
    }

    pub fn mul_vec(&self, v: &[CycloNumber]) -> Vec<CycloNumber> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(CycloNumber::zero(self.order), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let order = num_integer::lcm(self.order, other.order);
        let mut out = Matrix::zeros(self.rows, other.cols, order);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * out.cols + c;
                        out.entries[idx] = &out.entries[idx] + &(a * b);
                    }
                }
            }
        }
        out
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            entries.extend_from_slice(self.row(r));
        }
        Matrix {
            rows: rows.len(),
            cols: self.cols,
            order: self.order,
            entries,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<CycloNumber>], rows: usize) -> Matrix {
        let cols = columns.len();
        let mut m = Matrix::zeros(rows, cols, 1);
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, x) in col.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CycloNumber::is_zero)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination. The pivot in each column is the first nonzero
/// entry at or below the current pivot row.
pub fn rref(m: &Matrix) -> Rref {
    let mut a = m.clone();
    let cols = a.cols;
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..cols {
        if prow == a.rows {
            break;
        }
        let Some(src) = (prow..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        if src != prow {
            for c in 0..cols {
                a.entries.swap(src * cols + c, prow * cols + c);
            }
        }
        let inv = a.get(prow, col).inverse().expect("pivot is nonzero");
        for c in col..cols {
            let idx = prow * cols + c;
            a.entries[idx] = &a.entries[idx] * &inv;
        }
        for r in 0..a.rows {
            if r == prow {
                continue;
            }
            let factor = a.get(r, col).clone();
            if factor.is_zero() {
                continue;
            }
            for c in col..cols {
                let p = a.get(prow, c);
                if p.is_zero() {
                    continue;
                }
                let delta = &factor * p;
                let idx = r * cols + c;
                a.entries[idx] = &a.entries[idx] - &delta;
            }
        }
        pivots.push(col);
        prow += 1;
    }
    Rref { matrix: a, pivots }
}

pub fn rank(m: &Matrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    rref(m).pivots.len()
}

/// Basis of the right kernel, one vector per free column in increasing order.
pub fn nullspace(m: &Matrix) -> Vec<Vec<CycloNumber>> {
    let Rref { matrix: r, pivots } = rref(m);
    let order = r.order;
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![CycloNumber::zero(order); m.cols];
        v[free] = CycloNumber::one(order);
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r.get(i, free);
        }
        basis.push(v);
    }
    basis
}
