use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{rational, CycloNumber};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSource {
    Explicit,
    /// α_i = k/d - 1 on `subset`, k/d elsewhere (0-based line indices).
    FromKI {
        k: usize,
        subset: Vec<usize>,
    },
}

/// Residues α_1, …, α_d of a logarithmic 1-form, summing to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueWeights {
    alphas: Vec<CycloNumber>,
    source: WeightSource,
}

impl ResidueWeights {
    pub fn explicit(alphas: Vec<CycloNumber>) -> Result<Self> {
        let order = alphas
            .iter()
            .map(CycloNumber::order)
            .fold(1, num_integer::lcm);
        let total = alphas
            .iter()
            .fold(CycloNumber::zero(order), |acc, a| &acc + a);
        if !total.is_zero() {
            return Err(Error::Precondition(format!(
                "residues must sum to zero, got {total}"
            )));
        }
        Ok(Self {
            alphas,
            source: WeightSource::Explicit,
        })
    }

    pub fn alphas(&self) -> &[CycloNumber] {
        &self.alphas
    }

    pub fn source(&self) -> &WeightSource {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// Multiplies every residue by `a`; the result is explicit.
    pub fn scaled(&self, a: &CycloNumber) -> Self {
        Self {
            alphas: self.alphas.iter().map(|x| x * a).collect(),
            source: WeightSource::Explicit,
        }
    }

    /// α_V = Σ_{i ∈ lines} α_i.
    pub fn sum_over(&self, lines: &[usize]) -> CycloNumber {
        lines
            .iter()
            .fold(CycloNumber::zero(1), |acc, &i| &acc + &self.alphas[i])
    }
}

pub fn weights_from_k_i(d: usize, k: usize, subset: &[usize]) -> Result<ResidueWeights> {
    if k == 0 || k >= d {
        return Err(Error::Precondition(format!(
            "k must lie in [1, {}], got {k}",
            d - 1
        )));
    }
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != subset.len() {
        return Err(Error::Precondition(
            "index set I has repeated entries".into(),
        ));
    }
    if let Some(bad) = sorted.iter().find(|&&i| i >= d) {
        return Err(Error::Precondition(format!(
            "line index {} out of range 1..={d}",
            bad + 1
        )));
    }
    if sorted.len() != k {
        return Err(Error::Precondition(format!(
            "|I| = {} but k = {k}; the residues only sum to zero when |I| = k",
            sorted.len()
        )));
    }
    let base = rational(k as i64, d as i64);
    let alphas = (0..d)
        .map(|i| {
            let a = if sorted.binary_search(&i).is_ok() {
                &base - rational(1, 1)
            } else {
                base.clone()
            };
            CycloNumber::embed_rational(a, 1)
        })
        .collect();
    Ok(ResidueWeights {
        alphas,
        source: WeightSource::FromKI { k, subset: sorted },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, m: i64) -> CycloNumber {
        CycloNumber::embed_rational(rational(n, m), 1)
    }

    #[test]
    fn braid_weights() {
        let w = weights_from_k_i(6, 2, &[0, 3]).unwrap();
        assert_eq!(
            w.alphas(),
            &[q(-2, 3), q(1, 3), q(1, 3), q(-2, 3), q(1, 3), q(1, 3)]
        );
    }

    #[test]
    fn nine_lines_three_in_subset() {
        let w = weights_from_k_i(9, 3, &[0, 1, 2]).unwrap();
        for (i, a) in w.alphas().iter().enumerate() {
            assert_eq!(*a, if i < 3 { q(-2, 3) } else { q(1, 3) });
        }
    }

    #[test]
    fn weights_always_sum_to_zero() {
        for d in 3..10 {
            for k in 1..d {
                let subset: Vec<usize> = (0..k)
                    .map(|i| (i * 7) % d)
                    .collect::<std::collections::BTreeSet<_>>()
                    .into_iter()
                    .collect();
                if subset.len() != k {
                    continue;
                }
                let w = weights_from_k_i(d, k, &subset).unwrap();
                assert!(w.sum_over(&(0..d).collect::<Vec<_>>()).is_zero());
            }
        }
    }

    #[test]
    fn size_mismatch_rejected() {
        assert!(matches!(
            weights_from_k_i(6, 3, &[0, 4]),
            Err(Error::Precondition(_))
        ));
        assert!(weights_from_k_i(6, 0, &[]).is_err());
        assert!(weights_from_k_i(6, 2, &[0, 6]).is_err());
        assert!(weights_from_k_i(6, 2, &[1, 1]).is_err());
    }

    #[test]
    fn explicit_weights_must_sum_to_zero() {
        assert!(ResidueWeights::explicit(vec![q(1, 1), q(-1, 1), q(1, 2)]).is_err());
        assert!(ResidueWeights::explicit(vec![q(1, 1), q(-1, 2), q(-1, 2)]).is_ok());
    }
}
