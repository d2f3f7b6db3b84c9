use crate::arrangement::{Arrangement, IncidenceLattice, LatticePoint};
use crate::error::{Error, Result};
use crate::field::CycloNumber;
use crate::linalg::{nullspace, Matrix};

/// Exponent triples (a, b, c) with a + b + c = deg, in descending
/// lexicographic order (x^deg first). Negative degrees give no monomials.
pub fn monomial_basis(deg: i64) -> Vec<[u32; 3]> {
    if deg < 0 {
        return Vec::new();
    }
    let deg = deg as u32;
    let mut out = Vec::with_capacity(((deg + 1) * (deg + 2) / 2) as usize);
    for a in (0..=deg).rev() {
        for b in (0..=deg - a).rev() {
            out.push([a, b, deg - a - b]);
        }
    }
    out
}

/// t_y(k) = ⌊m_y k/d⌋ - 1, the exponent of 𝒥^(>k) at y.
pub fn strict_order(m: usize, k: usize, d: usize) -> i64 {
    (m * k / d) as i64 - 1
}

/// s_y(k) = ⌈m_y k/d⌉ - 2, the exponent of 𝒥^(k) at y.
pub fn order_at(m: usize, k: usize, d: usize) -> i64 {
    (m * k).div_ceil(d) as i64 - 2
}

/// How the affine chart around each point of Σ is chosen.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum ChartPolicy {
    /// The largest-index nonzero coordinate.
    #[default]
    LastNonzero,
    FirstNonzero,
    /// One coordinate index per point of Σ, in lattice order.
    Explicit(Vec<usize>),
}

impl ChartPolicy {
    fn chart(&self, sigma_index: usize, y: &LatticePoint) -> Result<usize> {
        let coords = y.point.coords();
        let c = match self {
            ChartPolicy::LastNonzero => (0..3).rev().find(|&i| !coords[i].is_zero()),
            ChartPolicy::FirstNonzero => (0..3).find(|&i| !coords[i].is_zero()),
            ChartPolicy::Explicit(v) => v.get(sigma_index).copied(),
        };
        match c {
            Some(c) if c < 3 && !coords[c].is_zero() => Ok(c),
            _ => Err(Error::Precondition(format!(
                "no valid chart for point {}",
                y.point
            ))),
        }
    }
}

/// Jet data at one point of Σ: the chart coordinate, the local coordinates
/// (u, v) = (X_p/X_c - y_p, X_q/X_c - y_q) and the dehomogenized center.
#[derive(Clone, Debug)]
pub struct JetTarget {
    pub lines: Vec<usize>,
    pub chart: usize,
    others: [usize; 2],
    center: [CycloNumber; 2],
}

impl JetTarget {
    pub fn new(y: &LatticePoint, chart: usize) -> Result<Self> {
        let coords = y.point.coords();
        let inv = coords[chart].inverse()?;
        let others = match chart {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        };
        let center = others.map(|i| &coords[i] * &inv);
        Ok(Self {
            lines: y.lines.clone(),
            chart,
            others,
            center,
        })
    }

    /// Coefficient of u^a v^b in the expansion of the monomial X^e at this point.
    pub fn coefficient(&self, e: &[u32; 3], a: u32, b: u32) -> CycloNumber {
        let (ep, eq) = (e[self.others[0]], e[self.others[1]]);
        if a > ep || b > eq {
            return CycloNumber::zero(1);
        }
        let scale = binomial(ep, a) * binomial(eq, b);
        let value = &self.center[0].pow(ep - a) * &self.center[1].pow(eq - b);
        &CycloNumber::from_int(scale, 1) * &value
    }

    /// Rows for u^a v^b with lo ≤ a + b < hi, graded by total degree then by descending a.
    pub fn rows(&self, monomials: &[[u32; 3]], lo: i64, hi: i64) -> Vec<Vec<CycloNumber>> {
        let mut rows = Vec::new();
        for n in lo.max(0)..hi {
            let n = n as u32;
            for a in (0..=n).rev() {
                rows.push(
                    monomials
                        .iter()
                        .map(|e| self.coefficient(e, a, n - a))
                        .collect(),
                );
            }
        }
        rows
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Jet targets for every point of Σ, in lattice order.
pub fn jet_targets(lat: &IncidenceLattice, charts: &ChartPolicy) -> Result<Vec<JetTarget>> {
    lat.sigma()
        .enumerate()
        .map(|(i, y)| JetTarget::new(y, charts.chart(i, y)?))
        .collect()
}

fn check_k(d: usize, k: usize) -> Result<()> {
    if k == 0 || k >= d {
        return Err(Error::Precondition(format!(
            "k must lie in [1, {}], got {k}",
            d - 1
        )));
    }
    Ok(())
}

/// ρ̃^(k): ℂ[X]_{k-3} → ⊕_{y ∈ Σ} 𝒪_y / 𝒥^(>k)_y.
pub fn rho_tilde(
    arr: &Arrangement,
    lat: &IncidenceLattice,
    k: usize,
    charts: &ChartPolicy,
) -> Result<Matrix> {
    let d = arr.degree();
    check_k(d, k)?;
    let monomials = monomial_basis(k as i64 - 3);
    let mut rows = Vec::new();
    for target in jet_targets(lat, charts)? {
        rows.extend(target.rows(&monomials, 0, strict_order(target.lines.len(), k, d)));
    }
    Ok(Matrix::from_rows(rows, monomials.len()))
}

/// Linear conditions cutting J^(k)_{k-3} out of ℂ[X]_{k-3}: vanishing to
/// order s_y(k) at every y ∈ Σ.
pub fn ideal_constraints(
    arr: &Arrangement,
    lat: &IncidenceLattice,
    k: usize,
    charts: &ChartPolicy,
) -> Result<Matrix> {
    let d = arr.degree();
    check_k(d, k)?;
    let monomials = monomial_basis(k as i64 - 3);
    let mut rows = Vec::new();
    for target in jet_targets(lat, charts)? {
        rows.extend(target.rows(&monomials, 0, order_at(target.lines.len(), k, d)));
    }
    Ok(Matrix::from_rows(rows, monomials.len()))
}

/// ρ^(k): J^(k)_{k-3} → ⊕_{y ∈ Σ(k)} 𝒥^(k)_y / 𝒥^(>k)_y, written in the
/// nullspace basis of the ideal constraints.
pub fn rho(
    arr: &Arrangement,
    lat: &IncidenceLattice,
    k: usize,
    charts: &ChartPolicy,
) -> Result<Matrix> {
    let d = arr.degree();
    let monomials = monomial_basis(k as i64 - 3);
    let basis = nullspace(&ideal_constraints(arr, lat, k, charts)?);
    let mut rows = Vec::new();
    for target in jet_targets(lat, charts)? {
        let m = target.lines.len();
        if (m * k).is_multiple_of(d) {
            let q = (m * k / d) as i64;
            rows.extend(target.rows(&monomials, q - 2, q - 1));
        }
    }
    let graded = Matrix::from_rows(rows, monomials.len());
    Ok(graded.mul(&Matrix::from_columns(&basis, monomials.len())))
}

/// ρ̃^(k) when `ideal_constrained` is false, ρ^(k) otherwise. `deg` must equal k - 3.
pub fn jet_matrix(
    arr: &Arrangement,
    lat: &IncidenceLattice,
    deg: i64,
    k: usize,
    ideal_constrained: bool,
) -> Result<Matrix> {
    if deg != k as i64 - 3 {
        return Err(Error::Precondition(format!(
            "degree {deg} does not match k - 3 = {}",
            k as i64 - 3
        )));
    }
    if ideal_constrained {
        rho(arr, lat, k, &ChartPolicy::default())
    } else {
        rho_tilde(arr, lat, k, &ChartPolicy::default())
    }
}
