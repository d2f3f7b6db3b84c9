//! Gr_F pieces of H¹(F_f)_λ from the cokernels of jet-evaluation maps.

mod jets;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use jets::{
    ideal_constraints, jet_matrix, jet_targets, monomial_basis, order_at, rho, rho_tilde,
    strict_order, ChartPolicy, JetTarget,
};

use crate::arrangement::{sigma_k, Arrangement, IncidenceLattice};
use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::resonance::Branch;

/// Aomoto dimension attached to an eigenvalue, with the subset certifying
/// that it equals b₁ there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AomotoCertificate {
    pub k: usize,
    /// 1-based line indices.
    pub subset: Vec<usize>,
    pub branch: Branch,
    pub h1: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenReport {
    pub k: usize,
    pub k_prime: usize,
    /// k/d in lowest terms; λ = exp(2πi k/d).
    pub lambda: String,
    pub sigma_k: usize,
    pub precheck_34i: bool,
    pub precheck_34ii: bool,
    pub grf0: usize,
    pub grf1: usize,
    pub b1: usize,
    pub aomoto: Option<AomotoCertificate>,
}

pub fn lambda_label(k: usize, d: usize) -> String {
    let g = k.gcd(&d);
    format!("{}/{}", k / g, d / g)
}

/// (dim coker ρ̃^(k), dim coker ρ^(k)); the two agree whenever the implementation is sound.
pub fn cokernel_pair(
    arr: &Arrangement,
    lat: &IncidenceLattice,
    k: usize,
    charts: &ChartPolicy,
) -> Result<(usize, usize)> {
    let full = rho_tilde(arr, lat, k, charts)?;
    let graded = rho(arr, lat, k, charts)?;
    Ok((full.rows() - rank(&full), graded.rows() - rank(&graded)))
}

fn coker_dim(
    arr: &Arrangement,
    lat: &IncidenceLattice,
    k: usize,
    charts: &ChartPolicy,
) -> Result<usize> {
    let (a, b) = cokernel_pair(arr, lat, k, charts)?;
    if a != b {
        return Err(Error::InvariantViolation(format!(
            "cokernels of the two jet maps differ at k = {k}: {a} vs {b}"
        )));
    }
    Ok(a)
}

/// (dim Gr_F⁰, dim Gr_F¹) of H¹(F_f)_λ at λ = exp(2πik/d).
pub fn grf_dims(arr: &Arrangement, lat: &IncidenceLattice, k: usize) -> Result<(usize, usize)> {
    grf_dims_with_charts(arr, lat, k, &ChartPolicy::default())
}

pub fn grf_dims_with_charts(
    arr: &Arrangement,
    lat: &IncidenceLattice,
    k: usize,
    charts: &ChartPolicy,
) -> Result<(usize, usize)> {
    let d = arr.degree();
    if k == 0 || k >= d {
        return Err(Error::Precondition(format!(
            "k must lie in [1, {}], got {k}",
            d - 1
        )));
    }
    Ok((
        coker_dim(arr, lat, k, charts)?,
        coker_dim(arr, lat, d - k, charts)?,
    ))
}

/// Necessary conditions for b₁ ≠ 0: Σ(k) is nonempty, and every line passes through a point of Σ(k).
pub fn precheck_vanishing(lat: &IncidenceLattice, d: usize, k: usize) -> Result<(bool, bool)> {
    if k == 0 || k >= d {
        return Err(Error::Precondition(format!(
            "k must lie in [1, {}], got {k}",
            d - 1
        )));
    }
    let pts = sigma_k(lat, d, k);
    let every_line = (0..lat.degree()).all(|i| pts.iter().any(|y| y.contains_line(i)));
    Ok((!pts.is_empty(), every_line))
}

pub fn eigen_report(arr: &Arrangement, lat: &IncidenceLattice, k: usize) -> Result<EigenReport> {
    let (grf0, grf1) = grf_dims(arr, lat, k)?;
    let report = assemble_report(lat, arr.degree(), k, grf0, grf1)?;
    if !(report.precheck_34i && report.precheck_34ii) && report.b1 != 0 {
        return Err(Error::InvariantViolation(format!(
            "k = {k}: vanishing pre-check fails but b₁ = {}",
            report.b1
        )));
    }
    Ok(report)
}

/// Builds a report from already computed Gr_F dimensions, without any consistency checks.
pub fn assemble_report(
    lat: &IncidenceLattice,
    d: usize,
    k: usize,
    grf0: usize,
    grf1: usize,
) -> Result<EigenReport> {
    let (p1, p2) = precheck_vanishing(lat, d, k)?;
    Ok(EigenReport {
        k,
        k_prime: d - k,
        lambda: lambda_label(k, d),
        sigma_k: sigma_k(lat, d, k).len(),
        precheck_34i: p1,
        precheck_34ii: p2,
        grf0,
        grf1,
        b1: grf0 + grf1,
        aomoto: None,
    })
}

/// Reports for k = 1, …, d-1, computed in parallel and returned in order of k.
pub fn full_spectrum(arr: &Arrangement, lat: &IncidenceLattice) -> Result<Vec<EigenReport>> {
    let d = arr.degree();
    let reports: Vec<EigenReport> = (1..d)
        .into_par_iter()
        .map(|k| eigen_report(arr, lat, k))
        .collect::<Result<_>>()?;
    for r in &reports {
        let other = &reports[r.k_prime - 1];
        if r.grf0 != other.grf1 || r.b1 != other.b1 {
            return Err(Error::InvariantViolation(format!(
                "conjugation symmetry fails between k = {} and k = {}",
                r.k, r.k_prime
            )));
        }
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{build_lattice, named_arrangement, NAMED_ARRANGEMENTS};
    use crate::field::CycloNumber;
    use crate::linalg::{nullspace, Matrix};

    fn setup(name: &str) -> (Arrangement, IncidenceLattice) {
        let arr = named_arrangement(name).unwrap();
        let lat = build_lattice(&arr).unwrap();
        (arr, lat)
    }

    fn b1s(name: &str) -> Vec<usize> {
        let (arr, lat) = setup(name);
        full_spectrum(&arr, &lat)
            .unwrap()
            .iter()
            .map(|r| r.b1)
            .collect()
    }

    #[test]
    fn monomial_basis_sizes() {
        assert_eq!(monomial_basis(0), vec![[0, 0, 0]]);
        assert_eq!(monomial_basis(1), vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(monomial_basis(3).len(), 10);
        assert!(monomial_basis(-1).is_empty());
    }

    #[test]
    fn braid_rho_tilde_at_four() {
        let (arr, lat) = setup("braid");
        let m = jet_matrix(&arr, &lat, 1, 4, false).unwrap();
        assert_eq!((m.rows(), m.cols()), (4, 3));
        assert_eq!(rank(&m), 3);
        let mut rows: Vec<Vec<String>> = (0..4)
            .map(|r| m.row(r).iter().map(ToString::to_string).collect())
            .collect();
        rows.sort();
        assert_eq!(
            rows,
            vec![
                vec!["0", "0", "1"],
                vec!["0", "1", "0"],
                vec!["1", "0", "0"],
                vec!["1", "1", "1"]
            ]
        );
        assert!(jet_matrix(&arr, &lat, 2, 4, false).is_err());
    }

    #[test]
    fn hesse_rho_tilde_kernel_is_fermat_and_xyz() {
        let (arr, lat) = setup("hesse");
        let m = jet_matrix(&arr, &lat, 3, 6, false).unwrap();
        assert_eq!((m.rows(), m.cols()), (9, 10));
        let kernel = nullspace(&m);
        assert_eq!(kernel.len(), 2);
        let basis = monomial_basis(3);
        let poly = |terms: &[([u32; 3], i64)]| -> Vec<CycloNumber> {
            basis
                .iter()
                .map(|e| {
                    CycloNumber::from_int(
                        terms.iter().find(|(t, _)| t == e).map_or(0, |(_, c)| *c),
                        1,
                    )
                })
                .collect()
        };
        let fermat = poly(&[([3, 0, 0], 1), ([0, 3, 0], 1), ([0, 0, 3], 1)]);
        let xyz = poly(&[([1, 1, 1], 1)]);
        for p in [fermat, xyz] {
            assert!(m.mul_vec(&p).iter().all(CycloNumber::is_zero));
        }
    }

    #[test]
    fn empty_targets_give_zero_rows() {
        let (arr, lat) = setup("braid");
        let m = jet_matrix(&arr, &lat, -1, 2, false).unwrap();
        assert_eq!(m.rows(), 0);
    }

    #[test]
    fn grf_examples() {
        let (arr, lat) = setup("braid");
        assert_eq!(grf_dims(&arr, &lat, 2).unwrap(), (0, 1));
        let (arr, lat) = setup("hesse");
        assert_eq!(grf_dims(&arr, &lat, 6).unwrap(), (1, 1));
        let (arr, lat) = setup("ex-3-1-iii");
        assert_eq!(grf_dims(&arr, &lat, 3).unwrap(), (0, 0));
        assert_eq!(grf_dims(&arr, &lat, 6).unwrap(), (0, 0));
        assert!(grf_dims(&arr, &lat, 0).is_err());
        assert!(grf_dims(&arr, &lat, 9).is_err());
    }

    #[test]
    fn spectra_of_named_arrangements() {
        assert_eq!(b1s("braid"), vec![0, 1, 0, 1, 0]);
        assert_eq!(b1s("ceva3"), vec![0, 0, 2, 0, 0, 2, 0, 0]);
        assert_eq!(b1s("hesse"), vec![0, 0, 2, 0, 0, 2, 0, 0, 2, 0, 0]);
        assert!(b1s("ex-3-1-iii").iter().all(|&b| b == 0));
    }

    #[test]
    fn prechecks() {
        let (_, lat) = setup("braid");
        assert_eq!(precheck_vanishing(&lat, 6, 3).unwrap(), (false, false));
        let (_, lat) = setup("hesse");
        assert_eq!(precheck_vanishing(&lat, 12, 3).unwrap(), (true, true));
        let (_, lat) = setup("ceva3");
        assert_eq!(precheck_vanishing(&lat, 9, 3).unwrap(), (true, true));
    }

    #[test]
    fn report_fields() {
        let (arr, lat) = setup("hesse");
        let r = eigen_report(&arr, &lat, 9).unwrap();
        assert_eq!(r.lambda, "3/4");
        assert_eq!(r.k_prime, 3);
        assert_eq!(r.sigma_k, 9);
        let json = serde_json::to_value(&r).unwrap();
        for key in [
            "k",
            "k_prime",
            "lambda",
            "sigma_k",
            "precheck_34i",
            "precheck_34ii",
            "grf0",
            "grf1",
            "b1",
            "aomoto",
        ] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn chart_choice_does_not_change_ranks() {
        for name in NAMED_ARRANGEMENTS {
            let (arr, lat) = setup(name);
            let d = arr.degree();
            let reference: Vec<(usize, usize)> =
                (1..d).map(|k| grf_dims(&arr, &lat, k).unwrap()).collect();
            let first: Vec<(usize, usize)> = (1..d)
                .map(|k| grf_dims_with_charts(&arr, &lat, k, &ChartPolicy::FirstNonzero).unwrap())
                .collect();
            assert_eq!(reference, first, "{name}");
        }
    }

    #[test]
    fn every_braid_chart_combination() {
        let (arr, lat) = setup("braid");
        let options: Vec<Vec<usize>> = lat
            .sigma()
            .map(|y| (0..3).filter(|&c| !y.point.coords()[c].is_zero()).collect())
            .collect();
        let mut combo = vec![0usize; options.len()];
        loop {
            let charts =
                ChartPolicy::Explicit(combo.iter().zip(&options).map(|(&i, o)| o[i]).collect());
            for k in 1..6 {
                assert_eq!(
                    grf_dims_with_charts(&arr, &lat, k, &charts).unwrap(),
                    grf_dims(&arr, &lat, k).unwrap()
                );
            }
            let mut pos = 0;
            while pos < combo.len() {
                combo[pos] += 1;
                if combo[pos] < options[pos].len() {
                    break;
                }
                combo[pos] = 0;
                pos += 1;
            }
            if pos == combo.len() {
                break;
            }
        }
        let bad = ChartPolicy::Explicit(vec![0; 4]);
        assert!(grf_dims_with_charts(&arr, &lat, 2, &bad).is_err());
    }

    #[test]
    fn surjective_above_two_thirds_for_triple_points() {
        for name in NAMED_ARRANGEMENTS {
            let (arr, lat) = setup(name);
            if !lat.sigma().all(|y| y.multiplicity() == 3) {
                continue;
            }
            let d = arr.degree();
            for k in (1..d).filter(|&k| 3 * k > 2 * d) {
                let m = rho_tilde(&arr, &lat, k, &ChartPolicy::default()).unwrap();
                assert_eq!(rank(&m), m.rows(), "{name} k={k}");
            }
        }
    }

    /// Dimension of the degree-`deg` part of ∩ I_y^{s_y}, computed from
    /// scratch: every homogeneous partial derivative of order < s_y vanishes at y.
    fn ideal_dim_by_derivatives(lat: &IncidenceLattice, d: usize, k: usize, deg: i64) -> usize {
        let monomials = monomial_basis(deg);
        let mut rows = Vec::new();
        for y in lat.sigma() {
            let s = order_at(y.multiplicity(), k, d);
            let coords = y.point.coords();
            for n in 0..s.max(0) {
                for beta in monomial_basis(n) {
                    rows.push(
                        monomials
                            .iter()
                            .map(|e| {
                                if (0..3).any(|i| beta[i] > e[i]) {
                                    return CycloNumber::zero(1);
                                }
                                (0..3).fold(CycloNumber::one(1), |acc, i| {
                                    let falling: i64 =
                                        (0..beta[i]).map(|j| (e[i] - j) as i64).product();
                                    &(&acc * &CycloNumber::from_int(falling, 1))
                                        * &coords[i].pow(e[i] - beta[i])
                                })
                            })
                            .collect(),
                    );
                }
            }
        }
        monomials.len() - rank(&Matrix::from_rows(rows, monomials.len()))
    }

    #[test]
    fn ideal_dimension_matches_derivative_oracle() {
        for name in NAMED_ARRANGEMENTS {
            let (arr, lat) = setup(name);
            let d = arr.degree();
            for k in (1..d).filter(|&k| k <= 7) {
                let constraints =
                    ideal_constraints(&arr, &lat, k, &ChartPolicy::default()).unwrap();
                let dim = nullspace(&constraints).len();
                assert_eq!(
                    dim,
                    ideal_dim_by_derivatives(&lat, d, k, k as i64 - 3),
                    "{name} k={k}"
                );
            }
        }
    }
}
