use std::collections::HashMap;

use super::{Arrangement, ProjPoint};
use crate::error::{Error, Result};

/// An intersection point y with its incident lines I_y (0-based, sorted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePoint {
    pub point: ProjPoint,
    pub lines: Vec<usize>,
}

impl LatticePoint {
    pub fn multiplicity(&self) -> usize {
        self.lines.len()
    }

    pub fn contains_line(&self, i: usize) -> bool {
        self.lines.binary_search(&i).is_ok()
    }

    /// m_{I,y}: number of incident lines lying in `set`.
    pub fn count_in(&self, set: &[bool]) -> usize {
        self.lines.iter().filter(|&&i| set[i]).count()
    }
}

/// All pairwise intersection points of an arrangement, ordered by first
/// appearance when line pairs (i, j), i < j, are scanned lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceLattice {
    degree: usize,
    points: Vec<LatticePoint>,
}

pub fn build_lattice(arr: &Arrangement) -> Result<IncidenceLattice> {
    let lines = arr.lines();
    let d = lines.len();
    let mut index: HashMap<Vec<crate::field::Rational>, usize> = HashMap::new();
    let mut points: Vec<LatticePoint> = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let p = lines[i].meet(&lines[j]).map_err(|_| {
                Error::InvalidArrangement(format!(
                    "lines {} and {} coincide (arrangement is not reduced)",
                    i + 1,
                    j + 1
                ))
            })?;
            let slot = *index.entry(p.key()).or_insert_with(|| {
                points.push(LatticePoint {
                    point: p,
                    lines: Vec::new(),
                });
                points.len() - 1
            });
            let incident = &mut points[slot].lines;
            for k in [i, j] {
                if let Err(pos) = incident.binary_search(&k) {
                    incident.insert(pos, k);
                }
            }
        }
    }
    let lattice = IncidenceLattice { degree: d, points };
    lattice.check_pair_count()?;
    Ok(lattice)
}

impl IncidenceLattice {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    /// Σ: points of multiplicity at least 3.
    pub fn sigma(&self) -> impl Iterator<Item = &LatticePoint> {
        self.points.iter().filter(|p| p.multiplicity() >= 3)
    }

    pub fn sigma_len(&self) -> usize {
        self.sigma().count()
    }

    pub fn doubles(&self) -> impl Iterator<Item = &LatticePoint> {
        self.points.iter().filter(|p| p.multiplicity() == 2)
    }

    /// Σ minus the points on the distinguished line.
    pub fn sigma_off_line(&self, line: usize) -> impl Iterator<Item = &LatticePoint> {
        self.sigma().filter(move |p| !p.contains_line(line))
    }

    /// Points not on the distinguished line (the affine intersection points).
    pub fn affine_points(&self, line: usize) -> impl Iterator<Item = &LatticePoint> {
        self.points.iter().filter(move |p| !p.contains_line(line))
    }

    /// The point where lines `i` and `j` meet.
    pub fn meet(&self, i: usize, j: usize) -> &LatticePoint {
        self.points
            .iter()
            .find(|p| p.contains_line(i) && p.contains_line(j))
            .expect("every line pair meets in the lattice")
    }

    /// Histogram multiplicity → number of points.
    pub fn multiplicity_histogram(&self) -> std::collections::BTreeMap<usize, usize> {
        let mut h = std::collections::BTreeMap::new();
        for p in &self.points {
            *h.entry(p.multiplicity()).or_insert(0) += 1;
        }
        h
    }

    /// Σ_y C(m_y, 2) = C(d, 2).
    pub fn check_pair_count(&self) -> Result<()> {
        let total: usize = self
            .points
            .iter()
            .map(|p| p.multiplicity() * (p.multiplicity() - 1) / 2)
            .sum();
        let expected = self.degree * (self.degree - 1) / 2;
        if total != expected {
            return Err(Error::InvariantViolation(format!(
                "pair count {total} != C(d,2) = {expected}"
            )));
        }
        Ok(())
    }

    /// Sorted list of incident-line sets, for comparing lattices up to point relabeling.
    pub fn incidence_signature(&self) -> Vec<Vec<usize>> {
        let mut sig: Vec<Vec<usize>> = self.points.iter().map(|p| p.lines.clone()).collect();
        sig.sort();
        sig
    }
}

/// Σ(k) = { y ∈ Σ : d | m_y k }.
pub fn sigma_k(lat: &IncidenceLattice, d: usize, k: usize) -> Vec<&LatticePoint> {
    lat.sigma()
        .filter(|p| (p.multiplicity() * k).is_multiple_of(d))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::named_arrangement;
    use crate::field::CycloNumber;

    /// Brute force: a point lies in Σ iff at least three lines vanish there;
    /// every pair's meet is checked against every line directly.
    fn brute_force_signature(arr: &Arrangement) -> Vec<Vec<usize>> {
        let lines = arr.lines();
        let mut sets: Vec<Vec<usize>> = Vec::new();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let p = lines[i].meet(&lines[j]).unwrap();
                let set: Vec<usize> = (0..lines.len())
                    .filter(|&k| lines[k].contains(&p))
                    .collect();
                if !sets.contains(&set) {
                    sets.push(set);
                }
            }
        }
        sets.sort();
        sets
    }

    #[test]
    fn braid_lattice() {
        let arr = named_arrangement("braid").unwrap();
        let lat = build_lattice(&arr).unwrap();
        assert_eq!(lat.sigma_len(), 4);
        assert_eq!(lat.doubles().count(), 3);
        assert_eq!(lat.incidence_signature(), brute_force_signature(&arr));
        let mut sigma_pts: Vec<String> = lat.sigma().map(|p| p.point.to_string()).collect();
        sigma_pts.sort();
        assert_eq!(
            sigma_pts,
            vec!["(0 : 0 : 1)", "(0 : 1 : 0)", "(1 : 0 : 0)", "(1 : 1 : 1)"]
        );
    }

    #[test]
    fn ceva_lattice() {
        let arr = named_arrangement("ceva3").unwrap();
        let lat = build_lattice(&arr).unwrap();
        assert_eq!(lat.sigma_len(), 12);
        assert!(lat.sigma().all(|p| p.multiplicity() == 3));
        assert_eq!(lat.doubles().count(), 0);
        assert_eq!(lat.incidence_signature(), brute_force_signature(&arr));
    }

    #[test]
    fn hesse_lattice() {
        let arr = named_arrangement("hesse").unwrap();
        let lat = build_lattice(&arr).unwrap();
        assert_eq!(lat.degree(), 12);
        assert_eq!(lat.sigma_len(), 9);
        assert!(lat.sigma().all(|p| p.multiplicity() == 4));
        assert_eq!(lat.doubles().count(), 12);
        // Σ = {x³+y³+z³ = 0} ∩ {xyz = 0}
        for p in lat.sigma() {
            let [x, y, z] = p.point.coords();
            let cubic = &(&x.pow(3) + &y.pow(3)) + &z.pow(3);
            assert!(cubic.is_zero());
            assert!((&(x * y) * z).is_zero());
        }
    }

    #[test]
    fn sigma_k_examples() {
        let braid = build_lattice(&named_arrangement("braid").unwrap()).unwrap();
        assert_eq!(sigma_k(&braid, 6, 2).len(), 4);
        assert!(sigma_k(&braid, 6, 1).is_empty());
        let hesse = build_lattice(&named_arrangement("hesse").unwrap()).unwrap();
        assert_eq!(sigma_k(&hesse, 12, 6).len(), 9);
    }

    #[test]
    fn all_named_pass_pair_count_and_brute_force() {
        for name in crate::arrangement::NAMED_ARRANGEMENTS {
            let arr = named_arrangement(name).unwrap();
            let lat = build_lattice(&arr).unwrap();
            lat.check_pair_count().unwrap();
            assert_eq!(
                lat.incidence_signature(),
                brute_force_signature(&arr),
                "{name}"
            );
        }
    }

    #[test]
    fn projective_change_preserves_lattice() {
        // Normals transform by the inverse transpose; any invertible matrix will do.
        let b = [[2i64, 1, 0], [1, 1, 0], [3, -1, 1]];
        for name in crate::arrangement::NAMED_ARRANGEMENTS {
            let arr = named_arrangement(name).unwrap();
            let order = arr.order();
            let lines = arr
                .lines()
                .iter()
                .map(|l| {
                    let c = l.coeffs();
                    let row = |r: usize| {
                        (0..3).fold(CycloNumber::zero(order), |acc, k| {
                            &acc + &(&CycloNumber::from_int(b[r][k], 1) * &c[k])
                        })
                    };
                    super::super::ProjLine::new(row(0), row(1), row(2)).unwrap()
                })
                .collect();
            let moved = Arrangement::new(name, lines).unwrap();
            assert_eq!(
                build_lattice(&moved).unwrap().incidence_signature(),
                build_lattice(&arr).unwrap().incidence_signature()
            );
        }
    }
}
