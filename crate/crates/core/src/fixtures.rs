//! The built-in regression table: each fixture runs end to end and compares
//! against known values.

use serde::{Deserialize, Serialize};

use crate::arrangement::{
    build_lattice, generic_section, named_arrangement, Arrangement, HyperplaneArrangement,
    IncidenceLattice, ProjLine,
};
use crate::error::{Error, Result};
use crate::field::CycloNumber;
use crate::linalg::{nullspace, rank};
use crate::milnor::{monomial_basis, rho_tilde, ChartPolicy};
use crate::realize::{
    incidence_from_lattice, same_affine_orbit, search_realizations, DEFAULT_KERNEL_CAP,
};
use crate::report::{analyze, AnalysisDocument, AnalysisOptions};
use crate::resonance::{net_detect, search_i_for_02, DEFAULT_SEARCH_CAP};

pub const FIXTURES: [&str; 6] = [
    "braid",
    "pappus-dual",
    "ex-3-1-iii",
    "ceva3",
    "hesse",
    "braid-c4",
];

/// The braid arrangement x_i - x_j (i < j) in ℂ⁴.
pub fn braid_c4() -> HyperplaneArrangement {
    let mut forms = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let mut f = vec![0i64; 4];
            f[i] = 1;
            f[j] = -1;
            forms.push(f);
        }
    }
    HyperplaneArrangement::from_ints("braid-c4", 4, &forms).expect("fixed data")
}

pub const SECTION_SEED: u64 = 7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureCheck {
    pub name: String,
    pub passed: bool,
    pub observed: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureOutcome {
    pub fixture: String,
    pub checks: Vec<FixtureCheck>,
}

impl FixtureOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Recorder(Vec<FixtureCheck>);

impl Recorder {
    fn check(&mut self, name: &str, passed: bool, observed: impl std::fmt::Debug) {
        self.0.push(FixtureCheck {
            name: name.to_string(),
            passed,
            observed: format!("{observed:?}"),
        });
    }
}

/// Moves the last line off its position, which destroys the expected lattice.
fn corrupt(arr: &Arrangement) -> Result<Arrangement> {
    let mut lines = arr.lines().to_vec();
    let shifted = lines.last().expect("nonempty").coeffs().clone();
    let bump = CycloNumber::from_int(17, 1);
    lines.pop();
    lines.push(ProjLine::new(
        &shifted[0] + &bump,
        shifted[1].clone(),
        &shifted[2] - &bump,
    )?);
    Arrangement::new(arr.name(), lines)
}

fn load(name: &str) -> Result<Arrangement> {
    if name == "braid-c4" {
        Ok(generic_section(&braid_c4(), SECTION_SEED)?.0)
    } else {
        named_arrangement(name)
    }
}

fn b1_at(doc: &AnalysisDocument, ks: &[usize]) -> Vec<usize> {
    ks.iter().map(|&k| doc.eigen[k - 1].b1).collect()
}

fn monomial_vector(terms: &[[u32; 3]]) -> Vec<CycloNumber> {
    monomial_basis(3)
        .iter()
        .map(|e| CycloNumber::from_int(terms.contains(e) as i64, 1))
        .collect()
}

/// Runs one fixture. With `corrupted`, the last line is perturbed first, so
/// the comparison is expected to fail.
pub fn run_fixture(name: &str, corrupted: bool) -> Result<FixtureOutcome> {
    if !FIXTURES.contains(&name) {
        return Err(Error::UnknownArrangement {
            name: name.to_string(),
            valid: FIXTURES.join(", "),
        });
    }
    let mut arr = load(name)?;
    if corrupted {
        arr = corrupt(&arr)?;
    }
    let lat = build_lattice(&arr)?;
    let doc = analyze(&arr, &lat, &AnalysisOptions::default())?;
    let mut rec = Recorder(Vec::new());
    rec.check(
        "consistency checks pass",
        doc.all_consistent(),
        doc.failed_checks(),
    );
    match name {
        "braid" | "braid-c4" => braid(&mut rec, &doc, &lat, name == "braid-c4"),
        "pappus-dual" => pappus(&mut rec, &doc),
        "ex-3-1-iii" => ex_3_1_iii(&mut rec, &doc, &lat)?,
        "ceva3" => ceva(&mut rec, &doc, &arr, &lat)?,
        "hesse" => hesse(&mut rec, &doc, &arr, &lat)?,
        _ => unreachable!(),
    }
    Ok(FixtureOutcome {
        fixture: name.to_string(),
        checks: rec.0,
    })
}

fn braid(rec: &mut Recorder, doc: &AnalysisDocument, lat: &IncidenceLattice, sectioned: bool) {
    rec.check(
        "b1 for k = 1..5 is (0,1,0,1,0)",
        doc.b1() == [0, 1, 0, 1, 0],
        doc.b1(),
    );
    let g = (doc.eigen[1].grf0, doc.eigen[1].grf1);
    rec.check("grf0(2) = 0 and grf1(2) = 1", g == (0, 1), g);
    let counts = (lat.sigma_len(), lat.doubles().count());
    rec.check(
        "4 triple points and 3 double points",
        counts == (4, 3),
        counts,
    );
    if !sectioned {
        let nets = doc.certificates.nets.iter().filter(|n| n.m == 3).count();
        rec.check("exactly one (3,2)-net", nets == 1, nets);
    }
}

fn pappus(rec: &mut Recorder, doc: &AnalysisDocument) {
    let expected = [0, 0, 1, 0, 0, 1, 0, 0];
    rec.check(
        "b1 = 1 at k = 3, 6 and 0 elsewhere",
        doc.b1() == expected,
        doc.b1(),
    );
    let cert = doc
        .certificates
        .residue
        .iter()
        .find(|c| c.k == 3)
        .map(|c| c.subset.clone());
    rec.check("residue condition certified at k = 3", cert.is_some(), cert);
    let net = doc
        .certificates
        .nets
        .iter()
        .any(|n| n.m == 3 && n.verdict.r == 3 && n.verdict.t1ii);
    rec.check(
        "net condition certified with m = r = 3",
        net,
        doc.certificates.nets.len(),
    );
}

fn ex_3_1_iii(rec: &mut Recorder, doc: &AnalysisDocument, lat: &IncidenceLattice) -> Result<()> {
    rec.check(
        "b1 = 0 for every k",
        doc.b1().iter().all(|&b| b == 0),
        doc.b1(),
    );
    let found = search_i_for_02(lat, lat.degree(), 3, DEFAULT_SEARCH_CAP)?;
    rec.check(
        "no subset satisfies the residue condition at k = 3",
        found.is_none(),
        found,
    );
    let nets = net_detect(lat, 3, DEFAULT_SEARCH_CAP)?.len();
    rec.check("no 3-net", nets == 0, nets);
    let sys = incidence_from_lattice(lat)?;
    let det = sys.matrix().determinant().magnitude().clone();
    rec.check("|det M| = 27", det == 27u32.into(), det.to_string());
    let known: Vec<Vec<u64>> = [7, 1, 4, 19, 22, 16, 13, 10, 25]
        .iter()
        .map(|&x| vec![x])
        .collect();
    let search = search_realizations(&sys, &[27], DEFAULT_KERNEL_CAP)?;
    let mut in_orbit = false;
    for c in &search.candidates {
        in_orbit |= same_affine_orbit(&known, &c.vector, &[27])?;
    }
    rec.check(
        "mod 27 solution in the orbit of (7,1,4,19,22,16,13,10,25)",
        in_orbit,
        search.candidates.len(),
    );
    let counts: Vec<(usize, usize)> = search
        .candidates
        .iter()
        .map(|c| (c.induced_triples, c.new_triples))
        .collect();
    rec.check(
        "9 induced triples and no new ones",
        !counts.is_empty() && counts.iter().all(|&c| c == (9, 0)),
        counts.first(),
    );
    Ok(())
}

fn ceva(
    rec: &mut Recorder,
    doc: &AnalysisDocument,
    arr: &Arrangement,
    lat: &IncidenceLattice,
) -> Result<()> {
    let all_triple = lat.sigma_len() == 12 && lat.sigma().all(|y| y.multiplicity() == 3);
    rec.check("|Σ| = 12, all triple points", all_triple, lat.sigma_len());
    rec.check(
        "b1 = 2 at k = 3, 6",
        b1_at(doc, &[3, 6]) == [2, 2],
        doc.b1(),
    );
    let m = rho_tilde(arr, lat, 6, &ChartPolicy::default())?;
    rec.check(
        "cubics evaluated at Σ are injective",
        rank(&m) == m.cols(),
        (m.rows(), m.cols(), rank(&m)),
    );
    let strict = doc
        .certificates
        .nets
        .iter()
        .find(|n| n.m == 3)
        .map(|n| (n.block_aomoto_h1, doc.eigen[2].b1));
    rec.check(
        "net-block Aomoto value below b1 at k = 3",
        strict.is_some_and(|(a, b)| a < b),
        strict,
    );
    Ok(())
}

fn hesse(
    rec: &mut Recorder,
    doc: &AnalysisDocument,
    arr: &Arrangement,
    lat: &IncidenceLattice,
) -> Result<()> {
    let ok = lat.sigma_len() == 9 && lat.sigma().all(|y| y.multiplicity() == 4);
    rec.check("|Σ| = 9, all quadruple points", ok, lat.sigma_len());
    let m = rho_tilde(arr, lat, 6, &ChartPolicy::default())?;
    let kernel = nullspace(&m).len();
    let fermat = monomial_vector(&[[3, 0, 0], [0, 3, 0], [0, 0, 3]]);
    let xyz = monomial_vector(&[[1, 1, 1]]);
    let contains = [fermat, xyz]
        .iter()
        .all(|p| m.mul_vec(p).iter().all(CycloNumber::is_zero));
    rec.check(
        "kernel at k = 6 is spanned by x³+y³+z³ and xyz",
        kernel == 2 && contains,
        kernel,
    );
    let g = (doc.eigen[5].grf0, doc.eigen[5].grf1);
    rec.check("grf0(6) = grf1(6) = 1", g == (1, 1), g);
    rec.check(
        "b1 = 2 at k = 3, 6, 9",
        b1_at(doc, &[3, 6, 9]) == [2, 2, 2],
        doc.b1(),
    );
    let net = doc
        .certificates
        .nets
        .iter()
        .any(|n| n.m == 4 && n.verdict.r == 4 && n.verdict.t1ii);
    rec.check(
        "net condition certified with m = r = 4",
        net,
        doc.certificates.nets.len(),
    );
    Ok(())
}

/// Runs the selected fixtures (all when `only` is empty).
pub fn run_suite(only: &[String], corrupted: &[String]) -> Result<Vec<FixtureOutcome>> {
    let selected: Vec<&str> = if only.is_empty() {
        FIXTURES.to_vec()
    } else {
        for name in only {
            if !FIXTURES.contains(&name.as_str()) {
                return Err(Error::UnknownArrangement {
                    name: name.clone(),
                    valid: FIXTURES.join(", "),
                });
            }
        }
        FIXTURES
            .iter()
            .copied()
            .filter(|f| only.iter().any(|o| o == f))
            .collect()
    };
    selected
        .iter()
        .map(|name| run_fixture(name, corrupted.iter().any(|c| c == name)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::NAMED_ARRANGEMENTS;

    #[test]
    fn every_named_arrangement_is_a_fixture() {
        for name in NAMED_ARRANGEMENTS {
            assert!(FIXTURES.contains(&name));
        }
    }

    #[test]
    fn braid_fixture_passes_and_corruption_is_caught() {
        assert!(run_fixture("braid", false).unwrap().passed());
        assert!(!run_fixture("braid", true).unwrap().passed());
    }

    #[test]
    fn only_filter_and_unknown_names() {
        let out = run_suite(&["braid-c4".into()], &[]).unwrap();
        assert_eq!(out.len(), 1);
        assert!(out[0].passed(), "{:?}", out[0]);
        assert!(run_suite(&["nope".into()], &[]).is_err());
    }
}
