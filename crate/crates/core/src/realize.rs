//! Combinatorial realization certificates: labelings of the lines by
//! elements of a finite abelian group in which three lines are concurrent
//! exactly when their labels sum to zero.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::IncidenceLattice;
use crate::error::{Error, Result};
use crate::linalg::{apply_mod, solve_mod, AbelianGroup, IntMatrix};

pub const DEFAULT_KERNEL_CAP: usize = 1_000_000;

/// Triple points as rows of a 0/1 matrix with three ones each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceSystem {
    pub d: usize,
    pub rows: Vec<[usize; 3]>,
}

impl IncidenceSystem {
    pub fn matrix(&self) -> IntMatrix {
        let mut values = vec![0i64; self.rows.len() * self.d];
        for (r, row) in self.rows.iter().enumerate() {
            for &i in row {
                values[r * self.d + i] = 1;
            }
        }
        IntMatrix::from_i64(self.rows.len(), self.d, &values)
    }

    fn is_row(&self, triple: &[usize; 3]) -> bool {
        self.rows.contains(triple)
    }
}

pub fn incidence_from_lattice(lat: &IncidenceLattice) -> Result<IncidenceSystem> {
    let mut rows = Vec::new();
    for y in lat.sigma() {
        if y.multiplicity() != 3 {
            return Err(Error::Precondition(format!(
                "point {} has multiplicity {}; only triple points are supported",
                y.point,
                y.multiplicity()
            )));
        }
        rows.push([y.lines[0], y.lines[1], y.lines[2]]);
    }
    Ok(IncidenceSystem {
        d: lat.degree(),
        rows,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TripleKind {
    Original,
    New,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroSumTriple {
    /// 1-based line indices.
    pub lines: [usize; 3],
    pub kind: TripleKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationCandidate {
    pub moduli: Vec<u64>,
    /// One group element per line.
    pub vector: Vec<Vec<u64>>,
    pub distinct: bool,
    pub induced_triples: usize,
    pub new_triples: usize,
    pub triples: Vec<ZeroSumTriple>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationSearch {
    pub moduli: Vec<u64>,
    /// Kernel size, saturated at u64::MAX.
    pub kernel_size: u64,
    pub examined: usize,
    pub truncated: bool,
    pub candidates: Vec<RealizationCandidate>,
}

fn group_for(moduli: &[u64]) -> Result<AbelianGroup> {
    if moduli.is_empty() || moduli.len() > 2 || moduli.iter().any(|&m| m < 2) {
        return Err(Error::Precondition(format!(
            "need one or two moduli, each at least 2, got {moduli:?}"
        )));
    }
    Ok(AbelianGroup::new(moduli.to_vec()))
}

/// Every 3-subset whose labels sum to zero, labeled as a row of the system or new.
pub fn annotate_membership(
    sys: &IncidenceSystem,
    x: &[Vec<u64>],
    moduli: &[u64],
) -> Result<Vec<ZeroSumTriple>> {
    let group = group_for(moduli)?;
    if x.len() != sys.d
        || x.iter()
            .any(|e| e.len() != moduli.len() || e.iter().zip(moduli).any(|(v, m)| v >= m))
    {
        return Err(Error::Precondition(
            "vector does not match the system and group".into(),
        ));
    }
    if apply_mod(&sys.matrix(), x, &group)
        .iter()
        .any(|r| !group.is_zero(r))
    {
        return Err(Error::Precondition(
            "vector is not a solution of Mx = 0".into(),
        ));
    }
    Ok(zero_sum_triples(sys, x, &group))
}

#[allow(clippy::needless_range_loop)]
fn zero_sum_triples(
    sys: &IncidenceSystem,
    x: &[Vec<u64>],
    group: &AbelianGroup,
) -> Vec<ZeroSumTriple> {
    let d = sys.d;
    let mut out = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let s = group.add(&x[i], &x[j]);
            for k in j + 1..d {
                if group.is_zero(&group.add(&s, &x[k])) {
                    let kind = if sys.is_row(&[i, j, k]) {
                        TripleKind::Original
                    } else {
                        TripleKind::New
                    };
                    out.push(ZeroSumTriple {
                        lines: [i + 1, j + 1, k + 1],
                        kind,
                    });
                }
            }
        }
    }
    out
}

fn candidate(
    sys: &IncidenceSystem,
    x: Vec<Vec<u64>>,
    group: &AbelianGroup,
) -> RealizationCandidate {
    let mut sorted = x.clone();
    sorted.sort();
    let distinct = sorted.windows(2).all(|w| w[0] != w[1]);
    let triples = zero_sum_triples(sys, &x, group);
    let induced = triples.len();
    RealizationCandidate {
        moduli: group.moduli.clone(),
        vector: x,
        distinct,
        induced_triples: induced,
        new_triples: induced.saturating_sub(sys.rows.len()),
        triples,
    }
}

/// Distinct-entry solutions of Mx = 0 over ℤ/a₁ (× ℤ/a₂), in kernel enumeration order.
pub fn search_realizations(
    sys: &IncidenceSystem,
    moduli: &[u64],
    cap: usize,
) -> Result<RealizationSearch> {
    let group = group_for(moduli)?;
    let kernel = solve_mod(&sys.matrix(), moduli);
    let (elements, truncated) = kernel.enumerate(cap);
    let candidates: Vec<RealizationCandidate> = elements
        .par_iter()
        .filter(|x| {
            let mut s = (*x).clone();
            s.sort();
            s.windows(2).all(|w| w[0] != w[1])
        })
        .map(|x| candidate(sys, x.clone(), &group))
        .collect();
    Ok(RealizationSearch {
        moduli: moduli.to_vec(),
        kernel_size: u64::try_from(kernel.size()).unwrap_or(u64::MAX),
        examined: elements.len(),
        truncated,
        candidates,
    })
}

/// x ↦ u·x + t componentwise, for a unit tuple u and an element t with 3t = 0.
pub fn affine_image(
    x: &[Vec<u64>],
    units: &[u64],
    shift: &[u64],
    moduli: &[u64],
) -> Result<Vec<Vec<u64>>> {
    let group = group_for(moduli)?;
    if units.iter().zip(moduli).any(|(u, m)| u.gcd(m) != 1)
        || !group.is_zero(&group.scale(shift, 3))
    {
        return Err(Error::Precondition(
            "not an affine automorphism preserving zero-sum triples".into(),
        ));
    }
    Ok(x.iter()
        .map(|e| group.add(&group.mul_units(units, e), shift))
        .collect())
}

/// Whether `b` lies in the orbit of `a` under the affine automorphisms above.
pub fn same_affine_orbit(a: &[Vec<u64>], b: &[Vec<u64>], moduli: &[u64]) -> Result<bool> {
    let group = group_for(moduli)?;
    let shifts: Vec<Vec<u64>> = group
        .elements()
        .into_iter()
        .filter(|t| group.is_zero(&group.scale(t, 3)))
        .collect();
    for u in group.unit_tuples() {
        for t in &shifts {
            if affine_image(a, &u, t, moduli)? == b {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{build_lattice, named_arrangement};

    fn system(name: &str) -> IncidenceSystem {
        incidence_from_lattice(&build_lattice(&named_arrangement(name).unwrap()).unwrap()).unwrap()
    }

    fn cyclic(v: &[u64]) -> Vec<Vec<u64>> {
        v.iter().map(|&x| vec![x]).collect()
    }

    #[test]
    fn system_sizes() {
        let ex = system("ex-3-1-iii");
        assert_eq!((ex.rows.len(), ex.d), (9, 9));
        assert_eq!(
            ex.matrix()
                .determinant()
                .to_string()
                .trim_start_matches('-'),
            "27"
        );
        assert_eq!(system("ceva3").rows.len(), 12);
        let hesse = build_lattice(&named_arrangement("hesse").unwrap()).unwrap();
        assert!(incidence_from_lattice(&hesse).is_err());
    }

    #[test]
    fn ex_3_1_iii_mod_27() {
        let sys = system("ex-3-1-iii");
        let known = cyclic(&[7, 1, 4, 19, 22, 16, 13, 10, 25]);
        let triples = annotate_membership(&sys, &known, &[27]).unwrap();
        assert_eq!(triples.len(), 9);
        assert!(triples.iter().all(|t| t.kind == TripleKind::Original));

        let search = search_realizations(&sys, &[27], DEFAULT_KERNEL_CAP).unwrap();
        assert!(!search.truncated);
        assert!(!search.candidates.is_empty());
        assert!(search.candidates.iter().any(|c| c.vector == known));
        for c in &search.candidates {
            assert!(c.distinct);
            assert_eq!((c.induced_triples, c.new_triples), (9, 0));
        }
        assert!(search
            .candidates
            .iter()
            .all(|c| same_affine_orbit(&known, &c.vector, &[27]).unwrap()));
    }

    #[test]
    fn ceva_over_z3_squared() {
        let sys = system("ceva3");
        let search = search_realizations(&sys, &[3, 3], DEFAULT_KERNEL_CAP).unwrap();
        assert!(!search.candidates.is_empty());
        for c in &search.candidates {
            let mut elems = c.vector.clone();
            elems.sort();
            assert_eq!(elems, AbelianGroup::new(vec![3, 3]).elements());
            assert_eq!(c.induced_triples, 12);
            assert!(c.triples.iter().all(|t| t.kind == TripleKind::Original));
        }
    }

    #[test]
    fn modulus_two_has_no_distinct_solutions() {
        for name in ["ex-3-1-iii", "ceva3", "braid"] {
            let sys = system(name);
            assert!(search_realizations(&sys, &[2], DEFAULT_KERNEL_CAP)
                .unwrap()
                .candidates
                .is_empty());
        }
    }

    #[test]
    fn corrupted_vector_rejected() {
        let sys = system("ex-3-1-iii");
        let bad = cyclic(&[8, 1, 4, 19, 22, 16, 13, 10, 25]);
        assert!(annotate_membership(&sys, &bad, &[27]).is_err());
        assert!(annotate_membership(&sys, &cyclic(&[0; 8]), &[27]).is_err());
        assert!(search_realizations(&sys, &[27, 3, 3], 10).is_err());
        assert!(search_realizations(&sys, &[1], 10).is_err());
    }

    #[test]
    fn truncation_is_flagged() {
        let sys = system("ceva3");
        let search = search_realizations(&sys, &[3, 3], 5).unwrap();
        assert!(search.truncated);
        assert_eq!(search.examined, 5);
    }

    #[test]
    fn affine_automorphisms_preserve_counts() {
        let sys = system("ex-3-1-iii");
        let known = cyclic(&[7, 1, 4, 19, 22, 16, 13, 10, 25]);
        for (u, t) in [(2u64, 0u64), (5, 9), (26, 18), (13, 9)] {
            let image = affine_image(&known, &[u], &[t], &[27]).unwrap();
            let triples = annotate_membership(&sys, &image, &[27]).unwrap();
            assert_eq!(triples.len(), 9);
            assert!(same_affine_orbit(&known, &image, &[27]).unwrap());
        }
        assert!(affine_image(&known, &[3], &[0], &[27]).is_err());
        assert!(affine_image(&known, &[1], &[1], &[27]).is_err());
    }
}
