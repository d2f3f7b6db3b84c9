use serde::{Deserialize, Serialize};

use super::{generic_section, Arrangement, HyperplaneArrangement, ProjLine, SectionCertificate};
use crate::error::{Error, Result};
use crate::field::{CycloLiteral, CycloNumber};

fn default_order() -> u32 {
    1
}

/// `{"name": …, "cyclotomic_order": n, "lines": [[c_x, c_y, c_z], …]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementFile {
    #[serde(default)]
    pub name: String,
    #[serde(default = "default_order")]
    pub cyclotomic_order: u32,
    pub lines: Vec<[CycloLiteral; 3]>,
}

/// `{"dimension": n, "hyperplanes": [[c_1, …, c_n], …]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperplaneFile {
    #[serde(default)]
    pub name: String,
    #[serde(default = "default_order")]
    pub cyclotomic_order: u32,
    pub dimension: usize,
    pub hyperplanes: Vec<Vec<CycloLiteral>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InputFile {
    Plane(ArrangementFile),
    Hyperplanes(HyperplaneFile),
}

fn check_order(order: u32) -> Result<()> {
    if order == 0 {
        return Err(Error::Parse("cyclotomic_order must be positive".into()));
    }
    Ok(())
}

impl ArrangementFile {
    pub fn from_arrangement(arr: &Arrangement) -> Self {
        Self {
            name: arr.name().to_string(),
            cyclotomic_order: arr.order(),
            lines: arr
                .lines()
                .iter()
                .map(|l| l.coeffs().clone().map(|c| CycloLiteral::from(&c)))
                .collect(),
        }
    }

    pub fn to_arrangement(&self) -> Result<Arrangement> {
        check_order(self.cyclotomic_order)?;
        let lines = self
            .lines
            .iter()
            .map(|[a, b, c]| {
                let n = self.cyclotomic_order;
                ProjLine::new(a.resolve(n)?, b.resolve(n)?, c.resolve(n)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Arrangement::new(self.name.clone(), lines)
    }
}

impl HyperplaneFile {
    pub fn to_hyperplanes(&self) -> Result<HyperplaneArrangement> {
        check_order(self.cyclotomic_order)?;
        let forms = self
            .hyperplanes
            .iter()
            .map(|h| {
                h.iter()
                    .map(|c| c.resolve(self.cyclotomic_order))
                    .collect::<Result<Vec<CycloNumber>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        HyperplaneArrangement::new(self.name.clone(), self.dimension, forms)
    }
}

impl InputFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The plane arrangement described by the file; higher-dimensional
    /// inputs are cut down by a certified generic section.
    pub fn into_arrangement(self, seed: u64) -> Result<(Arrangement, Option<SectionCertificate>)> {
        match self {
            InputFile::Plane(f) => Ok((f.to_arrangement()?, None)),
            InputFile::Hyperplanes(f) => {
                let h = f.to_hyperplanes()?;
                if h.dimension == 3 {
                    let lines = h
                        .hyperplanes
                        .into_iter()
                        .map(|c| {
                            let [a, b, c]: [CycloNumber; 3] =
                                c.try_into().expect("dimension checked");
                            ProjLine::new(a, b, c)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    return Ok((Arrangement::new(h.name, lines)?, None));
                }
                let (arr, cert) = generic_section(&h, seed)?;
                Ok((arr, Some(cert)))
            }
        }
    }
}
