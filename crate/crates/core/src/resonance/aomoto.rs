use super::ResidueWeights;
use crate::arrangement::{Arrangement, IncidenceLattice};
use crate::error::{Error, Result};
use crate::field::CycloNumber;
use crate::linalg::{nullspace, Matrix};

/// Which element of I_V indexes the omitted basis vector e_{k₀,k₀} of L_V.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Anchor {
    #[default]
    Max,
    Min,
}

/// The differential ω∧ : A¹ → A² of the Aomoto complex, written in the
/// basis e_i (i ≠ distinguished) of A¹ and the anchored bases
/// {e_{i,k₀(V)} : i ∈ I_V \ k₀(V)} of each summand L_V of A².
#[derive(Clone, Debug)]
pub struct AomotoSystem {
    distinguished: usize,
    /// Original line index of each column.
    columns: Vec<usize>,
    matrix: Matrix,
}

impl AomotoSystem {
    pub fn new(
        arr: &Arrangement,
        lat: &IncidenceLattice,
        w: &ResidueWeights,
        distinguished: usize,
    ) -> Result<Self> {
        Self::with_anchor(arr, lat, w, distinguished, Anchor::Max)
    }

    pub fn with_anchor(
        arr: &Arrangement,
        lat: &IncidenceLattice,
        w: &ResidueWeights,
        distinguished: usize,
        anchor: Anchor,
    ) -> Result<Self> {
        let d = arr.degree();
        if w.len() != d {
            return Err(Error::Precondition(format!(
                "{} residues given for {d} lines",
                w.len()
            )));
        }
        if distinguished >= d {
            return Err(Error::Precondition(format!(
                "distinguished line {} out of range",
                distinguished + 1
            )));
        }
        let columns: Vec<usize> = (0..d).filter(|&i| i != distinguished).collect();
        if columns.iter().all(|&i| w.alphas()[i].is_zero()) {
            return Err(Error::Precondition(
                "ω = 0: all affine residues vanish".into(),
            ));
        }
        let col_of = |i: usize| if i < distinguished { i } else { i - 1 };
        let mut rows = Vec::new();
        for point in lat.affine_points(distinguished) {
            let lines = &point.lines;
            let alpha_v = w.sum_over(lines);
            let k0 = match anchor {
                Anchor::Max => *lines.last().expect("points have incident lines"),
                Anchor::Min => lines[0],
            };
            for &i in lines.iter().filter(|&&i| i != k0) {
                // coefficient of e_{i,k₀} in ω∧η is α_i β_V - α_V β_i
                let alpha_i = &w.alphas()[i];
                let mut row = vec![CycloNumber::zero(1); d - 1];
                for &j in lines {
                    row[col_of(j)] = alpha_i.clone();
                }
                row[col_of(i)] = &row[col_of(i)] - &alpha_v;
                rows.push(row);
            }
        }
        let matrix = Matrix::from_rows(rows, d - 1);
        Ok(Self {
            distinguished,
            columns,
            matrix,
        })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn distinguished(&self) -> usize {
        self.distinguished
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    /// Basis of {η ∈ A¹ : ω∧η = 0}, as coefficient vectors over the columns.
    pub fn kernel(&self) -> Vec<Vec<CycloNumber>> {
        nullspace(&self.matrix)
    }

    /// dim H¹ = dim ker(ω∧) - dim(ω∧A⁰), the latter being 1.
    pub fn h1(&self) -> usize {
        self.kernel().len() - 1
    }
}

pub fn aomoto_h1(
    arr: &Arrangement,
    lat: &IncidenceLattice,
    w: &ResidueWeights,
    distinguished: usize,
) -> Result<usize> {
    Ok(AomotoSystem::new(arr, lat, w, distinguished)?.h1())
}

/// α-connected components of the affine lines: i ~ i' when their meeting
/// point is off the distinguished line and either a double point or a
/// multiple point with nonzero residue sum. Components are returned as
/// sorted lists of original line indices, ordered by smallest element.
pub fn alpha_components(
    lat: &IncidenceLattice,
    w: &ResidueWeights,
    distinguished: usize,
) -> Result<Vec<Vec<usize>>> {
    let d = lat.degree();
    if let Some(i) = (0..d).find(|&i| i != distinguished && w.alphas()[i].is_zero()) {
        return Err(Error::Precondition(format!("residue α_{} vanishes", i + 1)));
    }
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for point in lat.affine_points(distinguished) {
        if point.multiplicity() >= 3 && w.sum_over(&point.lines).is_zero() {
            continue;
        }
        let root = find(&mut parent, point.lines[0]);
        for &i in &point.lines[1..] {
            let r = find(&mut parent, i);
            parent[r] = root;
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in (0..d).filter(|&i| i != distinguished) {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut comps: Vec<Vec<usize>> = groups.into_values().collect();
    comps.sort();
    Ok(comps)
}
