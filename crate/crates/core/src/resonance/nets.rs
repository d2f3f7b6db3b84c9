use serde::{Deserialize, Serialize};

use crate::arrangement::{IncidenceLattice, LatticePoint};
use crate::error::{Error, Result};

/// A map φ from lines to blocks 0..r, with labels normalized to first-appearance order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct PartitionPhi {
    labels: Vec<usize>,
    blocks: usize,
}

impl PartitionPhi {
    /// Accepts arbitrary block labels and renumbers them 0, 1, … in order of first appearance.
    pub fn from_labels<T: Eq + Clone>(raw: &[T]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Precondition("empty partition".into()));
        }
        let mut seen: Vec<T> = Vec::new();
        let labels = raw
            .iter()
            .map(|l| match seen.iter().position(|s| s == l) {
                Some(p) => p,
                None => {
                    seen.push(l.clone());
                    seen.len() - 1
                }
            })
            .collect();
        Ok(Self {
            labels,
            blocks: seen.len(),
        })
    }

    pub fn from_blocks(d: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; d];
        for (j, block) in blocks.iter().enumerate() {
            for &i in block {
                if i >= d || labels[i] != usize::MAX {
                    return Err(Error::Precondition(format!(
                        "line {} missing, repeated or out of range",
                        i + 1
                    )));
                }
                labels[i] = j;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(Error::Precondition("blocks do not cover every line".into()));
        }
        Self::from_labels(&labels)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn degree(&self) -> usize {
        self.labels.len()
    }

    /// r, the number of blocks.
    pub fn block_count(&self) -> usize {
        self.blocks
    }

    /// I_j = φ⁻¹(j), sorted.
    pub fn block(&self, j: usize) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&i| self.labels[i] == j)
            .collect()
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        (0..self.blocks).map(|j| self.block(j)).collect()
    }

    /// m_{j,y} for every block j.
    pub fn counts_at(&self, y: &LatticePoint) -> Vec<usize> {
        let mut counts = vec![0; self.blocks];
        for &i in &y.lines {
            counts[self.labels[i]] += 1;
        }
        counts
    }

    /// y ∈ Σ^φ: y meets two lines in different blocks.
    pub fn separates(&self, y: &LatticePoint) -> bool {
        y.lines
            .iter()
            .any(|&i| self.labels[i] != self.labels[y.lines[0]])
    }
}

impl TryFrom<Vec<i64>> for PartitionPhi {
    type Error = Error;
    fn try_from(value: Vec<i64>) -> Result<Self> {
        Self::from_labels(&value)
    }
}

impl From<PartitionPhi> for Vec<i64> {
    fn from(value: PartitionPhi) -> Self {
        value.labels.iter().map(|&l| l as i64 + 1).collect()
    }
}

/// All partitions of the lines into `m` blocks of size d/m such that every
/// point of Σ^φ meets each block exactly once. Partitions are listed once
/// (block labels are canonical) in lexicographic order of their label vectors.
pub fn net_detect(lat: &IncidenceLattice, m: usize, cap: usize) -> Result<Vec<PartitionPhi>> {
    let d = lat.degree();
    if m < 3 || !d.is_multiple_of(m) {
        return Err(Error::Precondition(format!(
            "net detection needs m ≥ 3 dividing d = {d}, got m = {m}"
        )));
    }
    if d > cap {
        return Err(Error::SearchLimit(format!(
            "d = {d} exceeds the search cap {cap}"
        )));
    }
    let size = d / m;
    let sigma: Vec<&LatticePoint> = lat.sigma().collect();
    let mut points_of_line: Vec<Vec<usize>> = vec![Vec::new(); d];
    for (p, y) in sigma.iter().enumerate() {
        for &i in &y.lines {
            points_of_line[i].push(p);
        }
    }

    struct Search<'a> {
        m: usize,
        size: usize,
        sigma: Vec<&'a LatticePoint>,
        points_of_line: Vec<Vec<usize>>,
        labels: Vec<usize>,
        fill: Vec<usize>,
        found: Vec<PartitionPhi>,
    }

    impl Search<'_> {
        // Assigned labels at y must be all equal, or (when m_y = m) pairwise distinct.
        fn point_ok(&self, p: usize, upto: usize) -> bool {
            let y = self.sigma[p];
            let assigned: Vec<usize> = y
                .lines
                .iter()
                .filter(|&&i| i <= upto)
                .map(|&i| self.labels[i])
                .collect();
            let all_equal = assigned.windows(2).all(|w| w[0] == w[1]);
            if all_equal {
                return true;
            }
            if y.multiplicity() != self.m {
                return false;
            }
            let mut sorted = assigned.clone();
            sorted.sort_unstable();
            sorted.windows(2).all(|w| w[0] != w[1])
        }

        fn go(&mut self, line: usize, used: usize) {
            let d = self.labels.len();
            if line == d {
                self.found.push(PartitionPhi {
                    labels: self.labels.clone(),
                    blocks: self.m,
                });
                return;
            }
            let max_block = (used + 1).min(self.m);
            for b in 0..max_block {
                if self.fill[b] == self.size {
                    continue;
                }
                self.labels[line] = b;
                if self.points_of_line[line]
                    .iter()
                    .all(|&p| self.point_ok(p, line))
                {
                    self.fill[b] += 1;
                    self.go(line + 1, used.max(b + 1));
                    self.fill[b] -= 1;
                }
            }
        }
    }

    let mut search = Search {
        m,
        size,
        sigma,
        points_of_line,
        labels: vec![0; d],
        fill: vec![0; m],
        found: Vec::new(),
    };
    search.go(0, 0);
    Ok(search.found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{build_lattice, named_arrangement};

    fn lattice(name: &str) -> IncidenceLattice {
        build_lattice(&named_arrangement(name).unwrap()).unwrap()
    }

    /// Enumerates every label vector in [0, m)^d with canonical labeling and
    /// filters by the net condition directly.
    fn brute_force_nets(lat: &IncidenceLattice, m: usize) -> Vec<Vec<usize>> {
        let d = lat.degree();
        let mut out = Vec::new();
        let total = m.pow(d as u32);
        'outer: for code in 0..total {
            let mut labels = Vec::with_capacity(d);
            let mut c = code;
            for _ in 0..d {
                labels.push(c % m);
                c /= m;
            }
            labels.reverse();
            let phi = PartitionPhi::from_labels(&labels).unwrap();
            if phi.labels() != labels.as_slice() || phi.block_count() != m {
                continue;
            }
            if phi.blocks().iter().any(|b| b.len() != d / m) {
                continue;
            }
            for y in lat.sigma() {
                if phi.separates(y) && phi.counts_at(y).iter().any(|&c| c != 1) {
                    continue 'outer;
                }
            }
            out.push(labels);
        }
        out
    }

    #[test]
    fn braid_has_exactly_one_net() {
        let lat = lattice("braid");
        let nets = net_detect(&lat, 3, 16).unwrap();
        assert_eq!(nets.len(), 1);
        assert_eq!(nets[0].blocks(), vec![vec![0, 5], vec![1, 4], vec![2, 3]]);
        let brute: Vec<Vec<usize>> = brute_force_nets(&lat, 3);
        assert_eq!(brute, vec![nets[0].labels().to_vec()]);
    }

    #[test]
    fn hesse_has_exactly_one_four_net() {
        let lat = lattice("hesse");
        let nets = net_detect(&lat, 4, 16).unwrap();
        assert_eq!(nets.len(), 1);
        let blocks = nets[0].blocks();
        // {x, y, z} and the three pencil members θ^i x + θ^j y + z grouped by i + j mod 3
        assert_eq!(blocks[0], vec![0, 1, 2]);
        for block in &blocks[1..] {
            let residues: Vec<usize> = block
                .iter()
                .map(|&l| ((l - 3) / 3 + (l - 3) % 3) % 3)
                .collect();
            assert!(residues.windows(2).all(|w| w[0] == w[1]), "{block:?}");
        }
    }

    #[test]
    fn ex_3_1_iii_has_no_three_net() {
        assert!(net_detect(&lattice("ex-3-1-iii"), 3, 16)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn pappus_and_ceva_agree_with_brute_force() {
        for name in ["pappus-dual", "ceva3"] {
            let lat = lattice(name);
            let nets: Vec<Vec<usize>> = net_detect(&lat, 3, 16)
                .unwrap()
                .iter()
                .map(|p| p.labels().to_vec())
                .collect();
            assert_eq!(nets, brute_force_nets(&lat, 3), "{name}");
        }
    }

    #[test]
    fn bad_m_and_cap() {
        let lat = lattice("braid");
        assert!(net_detect(&lat, 4, 16).is_err());
        assert!(net_detect(&lat, 2, 16).is_err());
        assert!(matches!(net_detect(&lat, 3, 5), Err(Error::SearchLimit(_))));
    }

    #[test]
    fn label_normalization_and_json() {
        let phi: PartitionPhi = serde_json::from_str("[7, 7, 3, 9, 3, 9]").unwrap();
        assert_eq!(phi.labels(), &[0, 0, 1, 2, 1, 2]);
        assert_eq!(serde_json::to_string(&phi).unwrap(), "[1,1,2,3,2,3]");
    }
}
