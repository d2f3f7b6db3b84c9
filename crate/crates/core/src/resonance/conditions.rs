use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::PartitionPhi;
use crate::arrangement::{Arrangement, IncidenceLattice, LatticePoint};
use crate::error::{Error, Result};
use crate::field::{rational, Rational};

/// Exhaustive subset and partition searches refuse arrangements with more lines than this.
pub const DEFAULT_SEARCH_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// α_{I,y} ∉ ℤ_{>0} for all y ∈ Σ.
    First,
    /// α_{I,y} ∉ ℤ_{<0} for all y ∈ Σ; handled through k' = d - k and the complement of I.
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub point: String,
    pub lines: Vec<usize>,
    pub alpha: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cond02Verdict {
    pub branch: Option<Branch>,
    /// A point with α_{I,y} a positive integer (blocks the first branch).
    pub positive_witness: Option<Witness>,
    /// A point with α_{I,y} a negative integer (blocks the second branch).
    pub negative_witness: Option<Witness>,
}

impl Cond02Verdict {
    pub fn holds(&self) -> bool {
        self.branch.is_some()
    }
}

/// α_{I,y} = (|I|/d) m_y - m_{I,y}.
fn alpha_i_y(d: usize, size: usize, y: &LatticePoint, member: &[bool]) -> Rational {
    rational((size * y.multiplicity()) as i64, d as i64) - rational(y.count_in(member) as i64, 1)
}

fn witness(y: &LatticePoint, alpha: &Rational) -> Witness {
    Witness {
        point: y.point.to_string(),
        lines: y.lines.iter().map(|i| i + 1).collect(),
        alpha: alpha.to_string(),
    }
}

fn check_range(d: usize, k: usize, subset: &[usize]) -> Result<Vec<bool>> {
    if k == 0 || 2 * k > d {
        return Err(Error::Precondition(format!(
            "need 1 ≤ k ≤ d/2 = {}/2, got k = {k}",
            d
        )));
    }
    if subset.len() != k {
        return Err(Error::Precondition(format!(
            "|I| = {} but k = {k}",
            subset.len()
        )));
    }
    let mut member = vec![false; d];
    for &i in subset {
        if i >= d || member[i] {
            return Err(Error::Precondition(format!(
                "bad or repeated line index {}",
                i + 1
            )));
        }
        member[i] = true;
    }
    Ok(member)
}

pub fn check_condition_02(
    lat: &IncidenceLattice,
    d: usize,
    k: usize,
    subset: &[usize],
) -> Result<Cond02Verdict> {
    let member = check_range(d, k, subset)?;
    Ok(evaluate_02(lat, d, subset.len(), &member))
}

fn evaluate_02(lat: &IncidenceLattice, d: usize, size: usize, member: &[bool]) -> Cond02Verdict {
    let mut positive = None;
    let mut negative = None;
    for y in lat.sigma() {
        let a = alpha_i_y(d, size, y, member);
        if a.is_integer() && !a.is_zero() {
            let slot = if a.is_positive() {
                &mut positive
            } else {
                &mut negative
            };
            slot.get_or_insert_with(|| witness(y, &a));
        }
    }
    let branch = match (&positive, &negative) {
        (None, _) => Some(Branch::First),
        (Some(_), None) => Some(Branch::Second),
        _ => None,
    };
    Cond02Verdict {
        branch,
        positive_witness: positive,
        negative_witness: negative,
    }
}

/// First k-subset (lexicographic, 0-based) satisfying either branch of the
/// condition, together with the branch.
pub fn search_i_for_02(
    lat: &IncidenceLattice,
    d: usize,
    k: usize,
    cap: usize,
) -> Result<Option<(Vec<usize>, Branch)>> {
    if k == 0 || 2 * k > d {
        return Err(Error::Precondition(format!(
            "need 1 ≤ k ≤ d/2, got k = {k}, d = {d}"
        )));
    }
    if d > cap {
        return Err(Error::SearchLimit(format!(
            "d = {d} exceeds the search cap {cap}"
        )));
    }
    let sigma: Vec<&LatticePoint> = lat.sigma().collect();
    // Points where k m_y / d is an integer are the only ones that can block a branch.
    let integral: Vec<(&LatticePoint, usize)> = sigma
        .iter()
        .filter(|y| (k * y.multiplicity()).is_multiple_of(d))
        .map(|y| (*y, k * y.multiplicity() / d))
        .collect();

    struct Search<'a> {
        d: usize,
        k: usize,
        integral: Vec<(&'a LatticePoint, usize)>,
        chosen: Vec<usize>,
        member: Vec<bool>,
    }

    impl Search<'_> {
        /// Branch 1 dies when some integral point can no longer reach its target count;
        /// branch 2 dies once some integral point exceeds it.
        fn alive(&self, next: usize) -> (bool, bool) {
            let remaining = self.k - self.chosen.len();
            let mut first = true;
            let mut second = true;
            for (y, target) in &self.integral {
                let have = y.count_in(&self.member);
                let reachable = y
                    .lines
                    .iter()
                    .filter(|&&i| i >= next)
                    .count()
                    .min(remaining);
                if have + reachable < *target {
                    first = false;
                }
                if have > *target {
                    second = false;
                }
            }
            (first, second)
        }

        fn go(&mut self, next: usize) -> Option<Branch> {
            if self.chosen.len() == self.k {
                let mut branch = None;
                let mut pos = false;
                let mut neg = false;
                for (y, target) in &self.integral {
                    let have = y.count_in(&self.member);
                    pos |= have < *target;
                    neg |= have > *target;
                }
                if !pos {
                    branch = Some(Branch::First);
                } else if !neg {
                    branch = Some(Branch::Second);
                }
                return branch;
            }
            let (first, second) = self.alive(next);
            if !first && !second {
                return None;
            }
            let slots = self.k - self.chosen.len();
            for i in next..=self.d - slots {
                self.chosen.push(i);
                self.member[i] = true;
                if let Some(b) = self.go(i + 1) {
                    return Some(b);
                }
                self.member[i] = false;
                self.chosen.pop();
            }
            None
        }
    }

    let mut search = Search {
        d,
        k,
        integral,
        chosen: Vec::new(),
        member: vec![false; d],
    };
    Ok(search.go(0).map(|b| (search.chosen.clone(), b)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem1Verdict {
    pub m: usize,
    pub r: usize,
    pub proportional_counts: bool,
    pub balanced_block: bool,
    /// Block index j₀ realizing the size/proportion condition, if any.
    pub balanced_block_index: Option<usize>,
    pub net_condition: bool,
    /// Block index j₀ whose index set satisfies the residue condition, if any.
    pub residue_block_index: Option<usize>,
    /// Proportional counts and a balanced block: b₁ ≥ r - 2 at every λ ≠ 1 with λ^m = 1.
    pub t1i: bool,
    /// Net condition: b₁ = m - 2 at every primitive m-th root of unity.
    pub t1ii: bool,
    pub details: Vec<String>,
}

impl Theorem1Verdict {
    /// Values of k in [1, d-1] where exp(2πik/d) is an m-th root of unity.
    pub fn mth_root_ks(&self, d: usize) -> Vec<usize> {
        (1..d).filter(|k| (k * self.m).is_multiple_of(d)).collect()
    }

    /// Values of k in [1, d-1] where exp(2πik/d) is a primitive m-th root of unity.
    pub fn primitive_ks(&self, d: usize) -> Vec<usize> {
        self.mth_root_ks(d)
            .into_iter()
            .filter(|k| (k * self.m / d).gcd(&self.m) == 1)
            .collect()
    }
}

pub fn check_theorem1_hypotheses(
    arr: &Arrangement,
    lat: &IncidenceLattice,
    phi: &PartitionPhi,
    m: usize,
    distinguished: usize,
) -> Result<Theorem1Verdict> {
    let d = arr.degree();
    let r = phi.block_count();
    if phi.degree() != d {
        return Err(Error::Precondition(format!(
            "partition has {} labels for {d} lines",
            phi.degree()
        )));
    }
    if !(3..d).contains(&m) || !(3..d).contains(&r) {
        return Err(Error::Precondition(format!(
            "need m, r in [3, {}], got m = {m}, r = {r}",
            d - 1
        )));
    }
    if distinguished >= d {
        return Err(Error::Precondition(format!(
            "distinguished line {} out of range",
            distinguished + 1
        )));
    }
    let mut details = Vec::new();
    let sigma_phi: Vec<&LatticePoint> = lat.sigma().filter(|y| phi.separates(y)).collect();
    let sigma_phi_affine: Vec<&LatticePoint> = sigma_phi
        .iter()
        .copied()
        .filter(|y| !y.contains_line(distinguished))
        .collect();

    // All m_{j,y} > 0 and the vectors (m_{j,y})_j pairwise proportional.
    let mut proportional_counts = true;
    let mut reference: Option<Vec<usize>> = None;
    for y in &sigma_phi_affine {
        let counts = phi.counts_at(y);
        if let Some(j) = counts.iter().position(|&c| c == 0) {
            proportional_counts = false;
            details.push(format!(
                "proportionality: m_{{{},y}} = 0 at {}",
                j + 1,
                y.point
            ));
            continue;
        }
        let g = counts.iter().fold(0, |acc, &c| acc.gcd(&c));
        let normalized: Vec<usize> = counts.iter().map(|c| c / g).collect();
        match &reference {
            None => reference = Some(normalized),
            Some(r0) if *r0 != normalized => {
                proportional_counts = false;
                details.push(format!(
                    "proportionality: block ratios at {} differ from the first point",
                    y.point
                ));
            }
            _ => {}
        }
    }

    // A block of size d/m carrying exactly m_y/m lines through every point.
    let balanced_block_index = if d.is_multiple_of(m) {
        (0..r).find(|&j| {
            phi.block(j).len() == d / m
                && sigma_phi_affine
                    .iter()
                    .all(|y| m * phi.counts_at(y)[j] == y.multiplicity())
        })
    } else {
        details.push(format!("balanced block: m = {m} does not divide d = {d}"));
        None
    };
    let balanced_block = balanced_block_index.is_some();
    if !balanced_block {
        details.push("balanced block: no block satisfies the size and proportion condition".into());
    }

    // Every block meets every point of Σ^φ once, m = r, and some block satisfies the residue condition.
    let mut nets_ok = true;
    for y in &sigma_phi {
        for (j, &c) in phi.counts_at(y).iter().enumerate() {
            if c != 1 {
                nets_ok = false;
                details.push(format!("net: m_{{{},y}} = {c} at {}", j + 1, y.point));
            }
        }
    }
    if m != r {
        details.push(format!("net: m = {m} differs from r = {r}"));
    }
    let residue_block_index = (0..r).find(|&j| {
        let block = phi.block(j);
        2 * block.len() <= d
            && check_condition_02(lat, d, block.len(), &block).is_ok_and(|v| v.holds())
    });
    if residue_block_index.is_none() {
        details.push("net: no block satisfies the residue condition".into());
    }
    let net_condition = nets_ok && m == r && residue_block_index.is_some();

    Ok(Theorem1Verdict {
        m,
        r,
        proportional_counts,
        balanced_block,
        balanced_block_index,
        net_condition,
        residue_block_index,
        t1i: proportional_counts && balanced_block && d.is_multiple_of(m),
        t1ii: net_condition,
        details,
    })
}
