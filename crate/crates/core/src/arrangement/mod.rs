//! Projective line arrangements over ℚ(ζ_n) and their rank-2 intersection data.

mod io;
mod lattice;
mod named;
mod section;

pub use io::{ArrangementFile, HyperplaneFile, InputFile};
pub use lattice::{build_lattice, sigma_k, IncidenceLattice, LatticePoint};
pub use named::{named_arrangement, NAMED_ARRANGEMENTS};
pub use section::{
    generic_section, HyperplaneArrangement, SectionCertificate, MAX_SECTION_ATTEMPTS,
};

use crate::error::{Error, Result};
use crate::field::CycloNumber;
use crate::linalg::{rank, Matrix};

fn common_order<'a>(values: impl IntoIterator<Item = &'a CycloNumber>) -> u32 {
    values
        .into_iter()
        .map(CycloNumber::order)
        .fold(1, num_integer::lcm)
}

/// The linear form ax + by + cz, scaled so its first nonzero coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjLine {
    coeffs: [CycloNumber; 3],
}

impl ProjLine {
    pub fn new(a: CycloNumber, b: CycloNumber, c: CycloNumber) -> Result<Self> {
        let order = common_order([&a, &b, &c]);
        let coeffs = [a.lift(order), b.lift(order), c.lift(order)];
        let lead = coeffs
            .iter()
            .find(|x| !x.is_zero())
            .ok_or_else(|| Error::InvalidArrangement("zero linear form".into()))?
            .inverse()?;
        Ok(Self {
            coeffs: coeffs.map(|x| &x * &lead),
        })
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new(
            CycloNumber::from_int(a, 1),
            CycloNumber::from_int(b, 1),
            CycloNumber::from_int(c, 1),
        )
    }

    pub fn coeffs(&self) -> &[CycloNumber; 3] {
        &self.coeffs
    }

    pub fn order(&self) -> u32 {
        self.coeffs[0].order()
    }

    fn lift(&self, order: u32) -> Self {
        Self {
            coeffs: self.coeffs.clone().map(|x| x.lift(order)),
        }
    }

    pub fn eval(&self, p: &ProjPoint) -> CycloNumber {
        self.coeffs
            .iter()
            .zip(p.coords())
            .fold(CycloNumber::zero(self.order()), |acc, (a, x)| {
                &acc + &(a * x)
            })
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.eval(p).is_zero()
    }

    /// Intersection point of two distinct lines (cross product of normals).
    pub fn meet(&self, other: &ProjLine) -> Result<ProjPoint> {
        let [a1, b1, c1] = &self.coeffs;
        let [a2, b2, c2] = &other.coeffs;
        ProjPoint::new(
            &(b1 * c2) - &(c1 * b2),
            &(c1 * a2) - &(a1 * c2),
            &(a1 * b2) - &(b1 * a2),
        )
    }
}

impl std::fmt::Display for ProjLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [a, b, c] = &self.coeffs;
        write!(f, "({a})x + ({b})y + ({c})z")
    }
}

/// A point of ℙ², scaled so its last nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjPoint {
    coords: [CycloNumber; 3],
}

impl ProjPoint {
    pub fn new(x: CycloNumber, y: CycloNumber, z: CycloNumber) -> Result<Self> {
        let order = common_order([&x, &y, &z]);
        let coords = [x.lift(order), y.lift(order), z.lift(order)];
        let last = coords
            .iter()
            .rev()
            .find(|v| !v.is_zero())
            .ok_or_else(|| Error::InvalidArrangement("zero point coordinates".into()))?
            .inverse()?;
        Ok(Self {
            coords: coords.map(|v| &v * &last),
        })
    }

    pub fn coords(&self) -> &[CycloNumber; 3] {
        &self.coords
    }

    pub(crate) fn key(&self) -> Vec<crate::field::Rational> {
        self.coords
            .iter()
            .flat_map(|c| c.coeffs().iter().cloned())
            .collect()
    }
}

impl std::fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [x, y, z] = &self.coords;
        write!(f, "({x} : {y} : {z})")
    }
}

/// A reduced, essential arrangement of `d` lines in ℙ².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    name: String,
    order: u32,
    lines: Vec<ProjLine>,
}

impl Arrangement {
    pub fn new(name: impl Into<String>, lines: Vec<ProjLine>) -> Result<Self> {
        let order = common_order(lines.iter().flat_map(|l| l.coeffs.iter()));
        let lines: Vec<ProjLine> = lines.iter().map(|l| l.lift(order)).collect();
        if lines.len() < 3 {
            return Err(Error::InvalidArrangement(format!(
                "need at least 3 lines, got {}",
                lines.len()
            )));
        }
        for i in 0..lines.len() {
            for j in 0..i {
                if lines[i] == lines[j] {
                    return Err(Error::InvalidArrangement(format!(
                        "lines {} and {} coincide (arrangement is not reduced)",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        let normals = Matrix::from_rows(lines.iter().map(|l| l.coeffs.to_vec()).collect(), 3);
        if rank(&normals) < 3 {
            return Err(Error::InvalidArrangement(
                "arrangement is not essential: all lines pass through one point".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            order,
            lines,
        })
    }

    pub fn from_int_lines(name: impl Into<String>, lines: &[[i64; 3]]) -> Result<Self> {
        let lines = lines
            .iter()
            .map(|&[a, b, c]| ProjLine::from_ints(a, b, c))
            .collect::<Result<_>>()?;
        Self::new(name, lines)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Same lines in a new order: line `i` of the result is line `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        Self::new(
            self.name.clone(),
            perm.iter().map(|&i| self.lines[i].clone()).collect(),
        )
    }
}
