use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols);
        Self {
            rows,
            cols,
            entries: values.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    out[(r, c)] += a * &other[(k, c)];
                }
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row(&mut self, target: usize, source: usize, factor: &BigInt) {
        for c in 0..self.cols {
            let v = &self[(source, c)] * factor;
            self[(target, c)] += v;
        }
    }

    fn add_col(&mut self, target: usize, source: usize, factor: &BigInt) {
        for r in 0..self.rows {
            let v = &self[(r, source)] * factor;
            self[(r, target)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -&self[(r, c)];
            self[(r, c)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.entries[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.entries[r * self.cols + c]
    }
}

/// `u * m * v == s` with `s` diagonal, `d_1 | d_2 | …`, and `u`, `v` unimodular.
#[derive(Clone, Debug)]
pub struct Smith {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (rows, cols) = (m.rows, m.cols);
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let steps = rows.min(cols);

    for t in 0..steps {
        'pivot: loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for r in t..rows {
                for c in t..cols {
                    let x = &s[(r, c)];
                    if !x.is_zero() && best.is_none_or(|(br, bc)| x.abs() < s[(br, bc)].abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((pr, pc)) = best else {
                break 'pivot;
            };
            if pr != t {
                s.swap_rows(pr, t);
                u.swap_rows(pr, t);
            }
            if pc != t {
                s.swap_cols(pc, t);
                v.swap_cols(pc, t);
            }

            let mut clean = true;
            for r in t + 1..rows {
                if s[(r, t)].is_zero() {
                    continue;
                }
                let q = -s[(r, t)].div_floor(&s[(t, t)]);
                s.add_row(r, t, &q);
                u.add_row(r, t, &q);
                clean &= s[(r, t)].is_zero();
            }
            for c in t + 1..cols {
                if s[(t, c)].is_zero() {
                    continue;
                }
                let q = -s[(t, c)].div_floor(&s[(t, t)]);
                s.add_col(c, t, &q);
                v.add_col(c, t, &q);
                clean &= s[(t, c)].is_zero();
            }
            if !clean {
                continue;
            }

            // Enforce divisibility into the trailing block.
            let pivot = s[(t, t)].clone();
            let bad_row =
                (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !s[(r, c)].is_multiple_of(&pivot)));
            match bad_row {
                Some(r) => {
                    let one = BigInt::one();
                    s.add_row(t, r, &one);
                    u.add_row(t, r, &one);
                }
                None => break 'pivot,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    Smith { s, u, v }
}

/// ℤ/a₁ × ℤ/a₂ × …, elements stored as residue vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub moduli: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(moduli: Vec<u64>) -> Self {
        assert!(!moduli.is_empty(), "group needs at least one factor");
        assert!(moduli.iter().all(|&a| a >= 2), "moduli must be at least 2");
        Self { moduli }
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.moduli.len()]
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.moduli
            .iter()
            .zip(a.iter().zip(b))
            .map(|(&m, (&x, &y))| (x + y) % m)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        self.moduli
            .iter()
            .zip(a)
            .map(|(&m, &x)| (m - x % m) % m)
            .collect()
    }

    pub fn scale(&self, a: &[u64], k: i64) -> Vec<u64> {
        self.moduli
            .iter()
            .zip(a)
            .map(|(&m, &x)| ((k.rem_euclid(m as i64) as u128 * x as u128) % m as u128) as u64)
            .collect()
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn order(&self) -> u128 {
        self.moduli.iter().map(|&m| m as u128).product()
    }

    /// All elements, in lexicographic residue order.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &m in &self.moduli {
            out = out
                .into_iter()
                .flat_map(|p| (0..m).map(move |x| [p.clone(), vec![x]].concat()))
                .collect();
        }
        out
    }

    /// The units of ℤ/a₁ × …: tuples of units of each factor.
    pub fn unit_tuples(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &m in &self.moduli {
            let units: Vec<u64> = (1..m).filter(|x| x.gcd(&m) == 1).collect();
            out = out
                .into_iter()
                .flat_map(|p| units.iter().map(move |&u| [p.clone(), vec![u]].concat()))
                .collect();
        }
        out
    }

    pub fn mul_units(&self, units: &[u64], a: &[u64]) -> Vec<u64> {
        self.moduli
            .iter()
            .zip(units.iter().zip(a))
            .map(|(&m, (&u, &x))| (u as u128 * x as u128 % m as u128) as u64)
            .collect()
    }
}

/// One cyclic summand of a kernel: the vector generates a subgroup of the
/// given order, living in a single group factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelGenerator {
    pub factor: usize,
    pub order: u64,
    /// One group element per column.
    pub vector: Vec<Vec<u64>>,
}

/// Kernel of an integer matrix over a finite abelian group, presented as an
/// internal direct sum of cyclic subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModKernel {
    pub group: AbelianGroup,
    pub cols: usize,
    pub generators: Vec<KernelGenerator>,
}

impl ModKernel {
    pub fn size(&self) -> u128 {
        self.generators
            .iter()
            .fold(1u128, |acc, g| acc.saturating_mul(g.order as u128))
    }

    /// Enumerates kernel elements in mixed-radix order of the generator
    /// coefficients; stops after `cap` elements. Returns the elements and
    /// whether the enumeration was truncated.
    pub fn enumerate(&self, cap: usize) -> (Vec<Vec<Vec<u64>>>, bool) {
        let total = self.size();
        let truncated = total > cap as u128;
        let count = if truncated { cap } else { total as usize };
        let mut out = Vec::with_capacity(count);
        let mut coeffs = vec![0u64; self.generators.len()];
        let mut current = vec![self.group.zero(); self.cols];
        for _ in 0..count {
            out.push(current.clone());
            // Odometer increment, updating the running sum in place.
            for (i, g) in self.generators.iter().enumerate() {
                coeffs[i] += 1;
                if coeffs[i] < g.order {
                    for (x, gx) in current.iter_mut().zip(&g.vector) {
                        *x = self.group.add(x, gx);
                    }
                    break;
                }
                coeffs[i] = 0;
                let back = (g.order - 1) as i64;
                for (x, gx) in current.iter_mut().zip(&g.vector) {
                    *x = self.group.add(x, &self.group.scale(gx, -back));
                }
            }
        }
        (out, truncated)
    }

    pub fn contains(&self, m: &IntMatrix, x: &[Vec<u64>]) -> bool {
        apply_mod(m, x, &self.group)
            .iter()
            .all(|y| self.group.is_zero(y))
    }
}

/// `m · x` over the group, for x given as one group element per column.
pub fn apply_mod(m: &IntMatrix, x: &[Vec<u64>], group: &AbelianGroup) -> Vec<Vec<u64>> {
    assert_eq!(x.len(), m.cols);
    (0..m.rows)
        .map(|r| {
            (0..m.cols).fold(group.zero(), |acc, c| {
                let coeff = &m[(r, c)];
                if coeff.is_zero() {
                    return acc;
                }
                let acc_scaled: Vec<u64> = group
                    .moduli
                    .iter()
                    .zip(&x[c])
                    .map(|(&modulus, &xi)| {
                        let k = coeff
                            .mod_floor(&BigInt::from(modulus))
                            .to_u64()
                            .expect("residue fits");
                        ((k as u128 * xi as u128) % modulus as u128) as u64
                    })
                    .collect();
                group.add(&acc, &acc_scaled)
            })
        })
        .collect()
}

/// Solutions of `m x = 0` with `x ∈ G^cols`, `G = ℤ/a₁ × …`.
///
/// With `u m v = s`, the substitution `x = v y` turns the system into
/// `s_j y_j = 0`, so each column of `v` contributes a cyclic summand of order
/// `gcd(s_j, a)` per factor (`s_j = 0` past the rank).
pub fn solve_mod(m: &IntMatrix, moduli: &[u64]) -> ModKernel {
    let group = AbelianGroup::new(moduli.to_vec());
    let smith = smith_normal_form(m);
    let diag = smith.diagonal();
    let mut generators = Vec::new();
    for (factor, &a) in moduli.iter().enumerate() {
        let big_a = BigInt::from(a);
        for j in 0..m.cols {
            let s_j = diag.get(j).cloned().unwrap_or_else(BigInt::zero);
            let order = s_j.gcd(&big_a).to_u64().expect("gcd bounded by modulus");
            if order == 1 {
                continue;
            }
            let step = BigInt::from(a / order);
            let vector = (0..m.cols)
                .map(|r| {
                    let mut elem = vec![0u64; moduli.len()];
                    elem[factor] = (&smith.v[(r, j)] * &step)
                        .mod_floor(&big_a)
                        .to_u64()
                        .expect("residue fits");
                    elem
                })
                .collect();
            generators.push(KernelGenerator {
                factor,
                order,
                vector,
            });
        }
    }
    ModKernel {
        group,
        cols: m.cols,
        generators,
    }
}
