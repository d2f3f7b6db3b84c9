use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{build_lattice, Arrangement, ProjLine};
use crate::error::{Error, Result};
use crate::field::CycloNumber;
use crate::linalg::{rank, Matrix};

pub const MAX_SECTION_ATTEMPTS: u32 = 32;
const PLANE_HEIGHT: i64 = 1000;

/// Central arrangement of hyperplanes in ℂ^n given by linear forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperplaneArrangement {
    pub name: String,
    pub dimension: usize,
    pub hyperplanes: Vec<Vec<CycloNumber>>,
}

impl HyperplaneArrangement {
    pub fn new(
        name: impl Into<String>,
        dimension: usize,
        hyperplanes: Vec<Vec<CycloNumber>>,
    ) -> Result<Self> {
        if hyperplanes.iter().any(|h| h.len() != dimension) {
            return Err(Error::InvalidArrangement(format!(
                "every hyperplane needs {dimension} coefficients"
            )));
        }
        Ok(Self {
            name: name.into(),
            dimension,
            hyperplanes,
        })
    }

    pub fn from_ints(
        name: impl Into<String>,
        dimension: usize,
        forms: &[Vec<i64>],
    ) -> Result<Self> {
        Self::new(
            name,
            dimension,
            forms
                .iter()
                .map(|f| f.iter().map(|&c| CycloNumber::from_int(c, 1)).collect())
                .collect(),
        )
    }

    fn span_rank(&self, idx: &[usize]) -> usize {
        rank(&Matrix::from_rows(
            idx.iter().map(|&i| self.hyperplanes[i].clone()).collect(),
            self.dimension,
        ))
    }

    /// Index sets of the codimension-2 flats: for each pair {i, j}, every
    /// hyperplane whose form lies in span(h_i, h_j).
    pub fn rank_two_flats(&self) -> Vec<Vec<usize>> {
        let d = self.hyperplanes.len();
        let mut covered = vec![vec![false; d]; d];
        let mut flats = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                if covered[i][j] {
                    continue;
                }
                let flat: Vec<usize> = (0..d)
                    .filter(|&l| l == i || l == j || self.span_rank(&[i, j, l]) == 2)
                    .collect();
                for &a in &flat {
                    for &b in &flat {
                        covered[a][b] = true;
                    }
                }
                flats.push(flat);
            }
        }
        flats.sort();
        flats
    }

    fn validate(&self) -> Result<()> {
        if self.dimension <= 3 {
            return Err(Error::Precondition(format!(
                "generic section needs ambient dimension > 3, got {}",
                self.dimension
            )));
        }
        let d = self.hyperplanes.len();
        for i in 0..d {
            if self.hyperplanes[i].iter().all(CycloNumber::is_zero) {
                return Err(Error::InvalidArrangement(format!(
                    "hyperplane {} is the zero form",
                    i + 1
                )));
            }
            for j in 0..i {
                if self.span_rank(&[i, j]) < 2 {
                    return Err(Error::InvalidArrangement(format!(
                        "hyperplanes {} and {} coincide (arrangement is not reduced)",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        let all: Vec<usize> = (0..d).collect();
        if self.span_rank(&all) < 3 {
            return Err(Error::InvalidArrangement(
                "forms span less than 3 dimensions".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionCertificate {
    pub seed: u64,
    pub attempts: u32,
    /// Three spanning vectors of the chosen plane, one column per coordinate of ℂ^n.
    pub plane: Vec<Vec<i64>>,
    /// Incident-index sets of the rank-2 flats, matched one-to-one by the section's points.
    pub flats: Vec<Vec<usize>>,
}

/// Restricts the arrangement to a random 3-dimensional linear subspace and
/// certifies that the rank-2 flat data survives.
pub fn generic_section(
    h: &HyperplaneArrangement,
    seed: u64,
) -> Result<(Arrangement, SectionCertificate)> {
    section_with_budget(h, seed, MAX_SECTION_ATTEMPTS)
}

fn section_with_budget(
    h: &HyperplaneArrangement,
    seed: u64,
    budget: u32,
) -> Result<(Arrangement, SectionCertificate)> {
    h.validate()?;
    let flats = h.rank_two_flats();
    let mut last_reason = String::new();
    for attempt in 0..budget {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
        let plane: Vec<Vec<i64>> = (0..3)
            .map(|_| {
                (0..h.dimension)
                    .map(|_| rng.gen_range(-PLANE_HEIGHT..=PLANE_HEIGHT))
                    .collect()
            })
            .collect();
        let restricted: Result<Vec<ProjLine>> = h
            .hyperplanes
            .iter()
            .map(|form| {
                let coeff = |p: &Vec<i64>| {
                    form.iter()
                        .zip(p)
                        .fold(CycloNumber::zero(1), |acc, (c, &x)| {
                            &acc + &(c * &CycloNumber::from_int(x, 1))
                        })
                };
                ProjLine::new(coeff(&plane[0]), coeff(&plane[1]), coeff(&plane[2]))
            })
            .collect();
        let arr = match restricted.and_then(|lines| Arrangement::new(h.name.clone(), lines)) {
            Ok(arr) => arr,
            Err(e) => {
                last_reason = e.to_string();
                continue;
            }
        };
        let lattice = build_lattice(&arr)?;
        if lattice.incidence_signature() == flats {
            let cert = SectionCertificate {
                seed,
                attempts: attempt + 1,
                plane,
                flats,
            };
            return Ok((arr, cert));
        }
        last_reason = "section created or merged intersection points".into();
    }
    Err(Error::GenericityNotAchieved {
        attempts: budget,
        reason: last_reason,
    })
}
