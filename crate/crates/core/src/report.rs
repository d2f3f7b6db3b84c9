//! Analysis documents: lattice summary, eigen table, certificates and
//! cross-method consistency checks for one arrangement.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::{Arrangement, ArrangementFile, IncidenceLattice, SectionCertificate};
use crate::error::{Error, Result};
use crate::milnor::{assemble_report, cokernel_pair, AomotoCertificate, ChartPolicy, EigenReport};
use crate::resonance::{
    alpha_components, aomoto_h1, check_theorem1_hypotheses, net_detect, search_i_for_02,
    weights_from_k_i, Branch, PartitionPhi, Theorem1Verdict, DEFAULT_SEARCH_CAP,
};

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    /// 0-based; defaults to the last line.
    pub distinguished: Option<usize>,
    pub search_cap: usize,
    pub section: Option<SectionCertificate>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            distinguished: None,
            search_cap: DEFAULT_SEARCH_CAP,
            section: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementSummary {
    pub name: String,
    pub d: usize,
    pub field_order: u32,
    pub distinguished_line: usize,
    pub input: ArrangementFile,
    pub section: Option<SectionCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSummary {
    pub point: String,
    /// 1-based line indices.
    pub lines: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSummary {
    pub sigma: usize,
    pub doubles: usize,
    /// Multiplicity → number of points.
    pub histogram: BTreeMap<String, usize>,
    pub multiple_points: Vec<PointSummary>,
}

impl LatticeSummary {
    pub fn new(lat: &IncidenceLattice) -> Self {
        Self {
            sigma: lat.sigma_len(),
            doubles: lat.doubles().count(),
            histogram: lat
                .multiplicity_histogram()
                .into_iter()
                .map(|(m, c)| (m.to_string(), c))
                .collect(),
            multiple_points: lat
                .sigma()
                .map(|y| PointSummary {
                    point: y.point.to_string(),
                    lines: y.lines.iter().map(|i| i + 1).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueCertificate {
    pub k: usize,
    /// 1-based line indices of I.
    pub subset: Vec<usize>,
    pub branch: Branch,
    /// Aomoto H¹ for the weights actually used (k, I) or (d - k, complement of I).
    pub aomoto_h1: usize,
    pub alpha_components: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetCertificate {
    pub m: usize,
    pub partition: PartitionPhi,
    pub verdict: Theorem1Verdict,
    /// Aomoto H¹ with weights from k = |I₁| and the first block.
    pub block_aomoto_h1: usize,
    pub block_alpha_components: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificates {
    pub residue: Vec<ResidueCertificate>,
    pub nets: Vec<NetCertificate>,
    /// Searches that were skipped, with the reason.
    pub skipped: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyCheck {
    pub name: String,
    pub passed: bool,
    pub details: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisDocument {
    pub arrangement: ArrangementSummary,
    pub lattice: LatticeSummary,
    pub eigen: Vec<EigenReport>,
    pub certificates: Certificates,
    pub consistency: Vec<ConsistencyCheck>,
    pub notes: Vec<String>,
}

impl AnalysisDocument {
    pub fn all_consistent(&self) -> bool {
        self.consistency.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> Vec<&ConsistencyCheck> {
        self.consistency.iter().filter(|c| !c.passed).collect()
    }

    pub fn b1(&self) -> Vec<usize> {
        self.eigen.iter().map(|r| r.b1).collect()
    }
}

#[derive(Default)]
struct Checks(BTreeMap<&'static str, Vec<String>>);

impl Checks {
    fn register(&mut self, name: &'static str) {
        self.0.entry(name).or_default();
    }

    fn expect(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        let entry = self.0.entry(name).or_default();
        if !ok {
            entry.push(detail());
        }
    }

    fn finish(self) -> Vec<ConsistencyCheck> {
        self.0
            .into_iter()
            .map(|(name, details)| ConsistencyCheck {
                name: name.to_string(),
                passed: details.is_empty(),
                details,
            })
            .collect()
    }
}

const CONJUGATION: &str = "conjugation_symmetry";
const RHO_AGREEMENT: &str = "rho_matches_rho_tilde";
const AOMOTO_BOUND: &str = "aomoto_at_most_b1";
const AOMOTO_EQUALITY: &str = "aomoto_equals_b1_when_certified";
const PRECHECK: &str = "precheck_forces_zero";
const COMPONENT_BOUND: &str = "aomoto_at_most_components_minus_two";
const THEOREM1: &str = "net_bounds";

pub fn analyze(
    arr: &Arrangement,
    lat: &IncidenceLattice,
    options: &AnalysisOptions,
) -> Result<AnalysisDocument> {
    let d = arr.degree();
    let distinguished = options.distinguished.unwrap_or(d - 1);
    if distinguished >= d {
        return Err(Error::Precondition(format!(
            "distinguished line {} out of range 1..={d}",
            distinguished + 1
        )));
    }
    let mut checks = Checks::default();
    for name in [
        CONJUGATION,
        RHO_AGREEMENT,
        AOMOTO_BOUND,
        AOMOTO_EQUALITY,
        PRECHECK,
        COMPONENT_BOUND,
        THEOREM1,
    ] {
        checks.register(name);
    }

    let charts = ChartPolicy::default();
    let pairs: Vec<(usize, usize)> = (1..d)
        .into_par_iter()
        .map(|k| cokernel_pair(arr, lat, k, &charts))
        .collect::<Result<_>>()?;
    for (i, &(full, graded)) in pairs.iter().enumerate() {
        checks.expect(RHO_AGREEMENT, full == graded, || {
            format!("k = {}: {full} vs {graded}", i + 1)
        });
    }
    let mut eigen = Vec::with_capacity(d - 1);
    for k in 1..d {
        eigen.push(assemble_report(
            lat,
            d,
            k,
            pairs[k - 1].0,
            pairs[d - k - 1].0,
        )?);
    }
    for r in &eigen {
        let other = &eigen[r.k_prime - 1];
        checks.expect(
            CONJUGATION,
            r.grf0 == other.grf1 && r.b1 == other.b1,
            || format!("k = {} and k = {} disagree", r.k, r.k_prime),
        );
        checks.expect(
            PRECHECK,
            (r.precheck_34i && r.precheck_34ii) || r.b1 == 0,
            || format!("k = {}: pre-check fails but b1 = {}", r.k, r.b1),
        );
    }

    let mut certificates = Certificates::default();
    let mut notes = Vec::new();
    if d > options.search_cap {
        certificates.skipped.push(format!(
            "subset and net searches skipped: d = {d} exceeds the search cap {}",
            options.search_cap
        ));
    } else {
        for k in 1..=d / 2 {
            let Some((subset, branch)) = search_i_for_02(lat, d, k, options.search_cap)? else {
                continue;
            };
            let (wk, wi) = match branch {
                Branch::First => (k, subset.clone()),
                Branch::Second => (d - k, (0..d).filter(|i| !subset.contains(i)).collect()),
            };
            let w = weights_from_k_i(d, wk, &wi)?;
            let h1 = aomoto_h1(arr, lat, &w, distinguished)?;
            let comps = alpha_components(lat, &w, distinguished)?.len();
            let b1 = eigen[k - 1].b1;
            checks.expect(AOMOTO_EQUALITY, h1 == b1, || {
                format!("k = {k}: aomoto {h1} but b1 = {b1}")
            });
            checks.expect(AOMOTO_BOUND, h1 <= b1, || {
                format!("k = {k}: aomoto {h1} > b1 = {b1}")
            });
            checks.expect(COMPONENT_BOUND, h1 <= comps.saturating_sub(2), || {
                format!("k = {k}: aomoto {h1} with {comps} components")
            });
            let subset: Vec<usize> = subset.iter().map(|i| i + 1).collect();
            eigen[k - 1].aomoto = Some(AomotoCertificate {
                k,
                subset: subset.clone(),
                branch,
                h1,
            });
            certificates.residue.push(ResidueCertificate {
                k,
                subset,
                branch,
                aomoto_h1: h1,
                alpha_components: comps,
            });
        }
        for m in (3..d).filter(|m| d.is_multiple_of(*m)) {
            for phi in net_detect(lat, m, options.search_cap)? {
                let verdict = check_theorem1_hypotheses(arr, lat, &phi, m, distinguished)?;
                let r = verdict.r;
                if verdict.t1i {
                    for k in verdict.mth_root_ks(d) {
                        let b1 = eigen[k - 1].b1;
                        checks.expect(THEOREM1, b1 + 2 >= r, || {
                            format!("m = {m}, k = {k}: b1 = {b1} < r - 2")
                        });
                    }
                }
                if verdict.t1ii {
                    for k in verdict.primitive_ks(d) {
                        let b1 = eigen[k - 1].b1;
                        checks.expect(THEOREM1, b1 + 2 == m, || {
                            format!("m = {m}, k = {k}: b1 = {b1} ≠ m - 2")
                        });
                    }
                }
                let block = phi.block(0);
                let k = block.len();
                let w = weights_from_k_i(d, k, &block)?;
                let h1 = aomoto_h1(arr, lat, &w, distinguished)?;
                let comps = alpha_components(lat, &w, distinguished)?.len();
                let b1 = eigen[k - 1].b1;
                checks.expect(AOMOTO_BOUND, h1 <= b1, || {
                    format!("net block at k = {k}: aomoto {h1} > b1 = {b1}")
                });
                checks.expect(COMPONENT_BOUND, h1 <= comps.saturating_sub(2), || {
                    format!("net block at k = {k}: aomoto {h1} with {comps} components")
                });
                if h1 < b1 {
                    notes.push(format!(
                        "m = {m} net: Aomoto value {h1} at k = {k} is strictly below b1 = {b1}"
                    ));
                }
                certificates.nets.push(NetCertificate {
                    m,
                    partition: phi,
                    verdict,
                    block_aomoto_h1: h1,
                    block_alpha_components: comps,
                });
            }
        }
        let uncertified: Vec<usize> = eigen
            .iter()
            .filter(|r| r.precheck_34i)
            .map(|r| r.k)
            .filter(|&k| {
                let low = k.min(d - k);
                !certificates.residue.iter().any(|c| c.k == low)
                    && !certificates
                        .nets
                        .iter()
                        .any(|n| n.verdict.t1ii && n.verdict.primitive_ks(d).contains(&k))
            })
            .collect();
        if !uncertified.is_empty() {
            notes.push(format!(
                "no residue-condition or net certificate applies at k = {uncertified:?}; b1 there rests on the jet-map cokernels alone"
            ));
        }
    }

    Ok(AnalysisDocument {
        arrangement: ArrangementSummary {
            name: arr.name().to_string(),
            d,
            field_order: arr.order(),
            distinguished_line: distinguished + 1,
            input: ArrangementFile::from_arrangement(arr),
            section: options.section.clone(),
        },
        lattice: LatticeSummary::new(lat),
        eigen,
        certificates,
        consistency: checks.finish(),
        notes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "table" => Ok(Format::Table),
            other => Err(Error::Parse(format!(
                "unknown format {other:?}; use json or table"
            ))),
        }
    }
}

/// Pretty JSON with object keys sorted, so identical documents render to identical bytes.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

pub fn render(doc: &AnalysisDocument, format: Format) -> Result<String> {
    match format {
        Format::Json => to_canonical_json(doc),
        Format::Table => Ok(render_table(doc)),
    }
}

/// Left-aligned columns separated by two spaces.
pub fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{s}{}", " ".repeat(widths[c] - s.chars().count())))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn eigen_rows(eigen: &[EigenReport]) -> Vec<Vec<String>> {
    eigen
        .iter()
        .map(|r| {
            vec![
                format!("k={}", r.k),
                format!("λ=e(2πi·{})", r.lambda),
                format!("|Σ(k)|={}", r.sigma_k),
                format!("grf0={}", r.grf0),
                format!("grf1={}", r.grf1),
                format!("b1={}", r.b1),
                format!("pre=({},{})", r.precheck_34i as u8, r.precheck_34ii as u8),
                r.aomoto.as_ref().map_or(String::new(), |a| {
                    format!("aomoto={} I={:?}", a.h1, a.subset)
                }),
            ]
        })
        .collect()
}

fn render_table(doc: &AnalysisDocument) -> String {
    let a = &doc.arrangement;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "arrangement {}  d={}  field=Q(ζ{})",
        a.name, a.d, a.field_order
    );
    let hist: Vec<String> = doc
        .lattice
        .histogram
        .iter()
        .map(|(m, c)| format!("{c}×m{m}"))
        .collect();
    let _ = writeln!(
        out,
        "lattice  |Σ|={}  doubles={}  points: {}",
        doc.lattice.sigma,
        doc.lattice.doubles,
        hist.join(" ")
    );
    out.push('\n');
    out.push_str(&align(&eigen_rows(&doc.eigen)));
    if !doc.certificates.residue.is_empty() || !doc.certificates.nets.is_empty() {
        out.push('\n');
    }
    for c in &doc.certificates.residue {
        let _ = writeln!(
            out,
            "residue condition  k={}  I={:?}  branch={:?}  aomoto={}",
            c.k, c.subset, c.branch, c.aomoto_h1
        );
    }
    for n in &doc.certificates.nets {
        let labels: Vec<i64> = n.partition.clone().into();
        let _ = writeln!(
            out,
            "net m={}  φ={:?}  t1i={}  t1ii={}  block aomoto={}",
            n.m, labels, n.verdict.t1i, n.verdict.t1ii, n.block_aomoto_h1
        );
    }
    for s in &doc.certificates.skipped {
        let _ = writeln!(out, "skipped: {s}");
    }
    out.push('\n');
    for c in &doc.consistency {
        let status = if c.passed { "ok" } else { "FAILED" };
        let _ = writeln!(out, "check {:<40} {status}", c.name);
        for detail in &c.details {
            let _ = writeln!(out, "    {detail}");
        }
    }
    for n in &doc.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}
