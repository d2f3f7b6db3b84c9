use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use milfib_core::arrangement::{
    build_lattice, named_arrangement, Arrangement, ArrangementFile, IncidenceLattice, InputFile,
    SectionCertificate,
};
use milfib_core::fixtures::run_suite;
use milfib_core::milnor::{eigen_report, full_spectrum};
use milfib_core::realize::{incidence_from_lattice, search_realizations, DEFAULT_KERNEL_CAP};
use milfib_core::report::{
    align, analyze, eigen_rows, render, to_canonical_json, AnalysisOptions, Format, LatticeSummary,
};
use milfib_core::resonance::{
    alpha_components, check_condition_02, check_theorem1_hypotheses, net_detect, search_i_for_02,
    weights_from_k_i, AomotoSystem, PartitionPhi, DEFAULT_SEARCH_CAP,
};
use milfib_core::Error;
use serde_json::json;

/// Exact Milnor fiber eigenspace computations for line arrangements.
#[derive(Parser)]
#[command(name = "milfib", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Built-in arrangement: braid, pappus-dual, ex-3-1-iii, ceva3, hesse
    #[arg(long, required_unless_present = "input", conflicts_with = "input")]
    name: Option<String>,
    /// JSON file with lines in ℙ² or hyperplanes in ℂⁿ
    #[arg(long)]
    input: Option<PathBuf>,
    /// Seed for the generic plane section of hyperplane inputs
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "table")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Intersection points and multiplicities
    Lattice {
        #[command(flatten)]
        input: Input,
    },
    /// Aomoto complex H¹ for weights built from k and I
    Aomoto {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        /// Comma-separated 1-based line indices
        #[arg(long = "I", value_delimiter = ',', required = true)]
        subset: Vec<usize>,
        /// 1-based; defaults to the last line
        #[arg(long)]
        distinguished_line: Option<usize>,
    },
    /// Gr_F dimensions and b₁ at λ = exp(2πik/d), or the whole spectrum
    Milnor {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Full analysis document with consistency checks
    Analyze {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        distinguished_line: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        max_d: usize,
    },
    /// (m, d/m)-nets
    Net {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        max_d: usize,
    },
    /// Residue condition for a given I, or a search for one
    Cond02 {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long = "I", value_delimiter = ',')]
        subset: Option<Vec<usize>>,
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        max_d: usize,
    },
    /// Hypotheses of the net theorem for a partition of the lines
    Theorem1 {
        #[command(flatten)]
        input: Input,
        /// JSON array of block labels, one per line
        #[arg(long)]
        partition: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        distinguished_line: Option<usize>,
    },
    /// Group-labelings of the lines solving the triple-point system
    Realize {
        #[command(flatten)]
        input: Input,
        /// One modulus, or two separated by a comma
        #[arg(long = "mod", value_delimiter = ',', required = true)]
        moduli: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_KERNEL_CAP)]
        cap: usize,
    },
    /// Generic plane section of a hyperplane arrangement
    Section {
        #[command(flatten)]
        input: Input,
    },
    /// Run the built-in regression fixtures
    Examples {
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[arg(long, default_value = "table")]
        format: Format,
        #[arg(long, value_delimiter = ',', hide = true)]
        corrupt: Vec<String>,
    },
}

/// Failure of a theorem-encoded check; maps to exit code 2.
#[derive(Debug)]
struct Inconsistent(String);

impl std::fmt::Display for Inconsistent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Inconsistent {}

struct Loaded {
    arr: Arrangement,
    lat: IncidenceLattice,
    section: Option<SectionCertificate>,
}

fn load(input: &Input) -> anyhow::Result<Loaded> {
    let (arr, section) = match (&input.name, &input.input) {
        (Some(name), None) => (named_arrangement(name)?, None),
        (None, Some(path)) => read_input(path, input.seed)?,
        _ => bail!(Error::Precondition(
            "give exactly one of --name and --input".into()
        )),
    };
    let lat = build_lattice(&arr)?;
    Ok(Loaded { arr, lat, section })
}

fn read_input(path: &Path, seed: u64) -> anyhow::Result<(Arrangement, Option<SectionCertificate>)> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = InputFile::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(file.into_arrangement(seed)?)
}

/// 1-based CLI index to 0-based.
fn index(i: usize, d: usize, what: &str) -> anyhow::Result<usize> {
    if i == 0 || i > d {
        bail!(Error::Precondition(format!("{what} {i} outside 1..={d}")));
    }
    Ok(i - 1)
}

fn indices(list: &[usize], d: usize) -> anyhow::Result<Vec<usize>> {
    list.iter().map(|&i| index(i, d, "line index")).collect()
}

fn distinguished(opt: Option<usize>, d: usize) -> anyhow::Result<usize> {
    opt.map_or(Ok(d - 1), |i| index(i, d, "distinguished line"))
}

fn emit(format: Format, value: serde_json::Value, table: String) -> anyhow::Result<()> {
    match format {
        Format::Json => print!("{}", to_canonical_json(&value)?),
        Format::Table => print!("{table}"),
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Lattice { input } => {
            let l = load(&input)?;
            let summary = LatticeSummary::new(&l.lat);
            let mut rows = vec![vec!["point".to_string(), "m".into(), "lines".into()]];
            for y in l.lat.points() {
                let lines: Vec<String> = y.lines.iter().map(|i| (i + 1).to_string()).collect();
                rows.push(vec![
                    y.point.to_string(),
                    y.multiplicity().to_string(),
                    lines.join(","),
                ]);
            }
            let table = format!(
                "d={}  |Σ|={}  doubles={}\n{}",
                l.arr.degree(),
                summary.sigma,
                summary.doubles,
                align(&rows)
            );
            emit(input.format, serde_json::to_value(&summary)?, table)
        }
        Command::Aomoto {
            input,
            k,
            subset,
            distinguished_line,
        } => {
            let l = load(&input)?;
            let d = l.arr.degree();
            let dist = distinguished(distinguished_line, d)?;
            let w = weights_from_k_i(d, k, &indices(&subset, d)?)?;
            let system = AomotoSystem::new(&l.arr, &l.lat, &w, dist)?;
            let h1 = system.h1();
            let comps: Vec<Vec<usize>> = alpha_components(&l.lat, &w, dist)?
                .iter()
                .map(|c| c.iter().map(|i| i + 1).collect())
                .collect();
            let alphas: Vec<String> = w.alphas().iter().map(ToString::to_string).collect();
            let table = format!(
                "aomoto_h1={h1}\nrows={} cols={}\nalpha=({})\nalpha_components={comps:?}\n",
                system.matrix().rows(),
                system.matrix().cols(),
                alphas.join(", ")
            );
            let value = json!({"k": k, "I": subset, "distinguished_line": dist + 1, "alphas": alphas,
                "aomoto_h1": h1, "alpha_components": comps});
            emit(input.format, value, table)
        }
        Command::Milnor { input, k } => {
            let l = load(&input)?;
            let reports = match k {
                Some(k) => vec![eigen_report(&l.arr, &l.lat, k)?],
                None => full_spectrum(&l.arr, &l.lat)?,
            };
            emit(
                input.format,
                serde_json::to_value(&reports)?,
                align(&eigen_rows(&reports)),
            )
        }
        Command::Analyze {
            input,
            distinguished_line,
            max_d,
        } => {
            let l = load(&input)?;
            let options = AnalysisOptions {
                distinguished: Some(distinguished(distinguished_line, l.arr.degree())?),
                search_cap: max_d,
                section: l.section,
            };
            let doc = analyze(&l.arr, &l.lat, &options)?;
            print!("{}", render(&doc, input.format)?);
            if !doc.all_consistent() {
                let names: Vec<&str> = doc
                    .failed_checks()
                    .iter()
                    .map(|c| c.name.as_str())
                    .collect();
                bail!(Inconsistent(format!(
                    "consistency checks failed: {}",
                    names.join(", ")
                )));
            }
            Ok(())
        }
        Command::Net { input, m, max_d } => {
            let l = load(&input)?;
            let nets = net_detect(&l.lat, m, max_d)?;
            let mut table = format!("{} net(s) with m={m}\n", nets.len());
            for phi in &nets {
                let blocks: Vec<Vec<usize>> = phi
                    .blocks()
                    .iter()
                    .map(|b| b.iter().map(|i| i + 1).collect())
                    .collect();
                table.push_str(&format!("{blocks:?}\n"));
            }
            emit(input.format, serde_json::to_value(&nets)?, table)
        }
        Command::Cond02 {
            input,
            k,
            subset,
            max_d,
        } => {
            let l = load(&input)?;
            let d = l.arr.degree();
            match subset {
                Some(subset) => {
                    let verdict = check_condition_02(&l.lat, d, k, &indices(&subset, d)?)?;
                    let mut table =
                        format!("holds={} branch={:?}\n", verdict.holds(), verdict.branch);
                    for (label, w) in [
                        ("positive", &verdict.positive_witness),
                        ("negative", &verdict.negative_witness),
                    ] {
                        if let Some(w) = w {
                            table.push_str(&format!(
                                "{label} witness {} lines {:?} alpha={}\n",
                                w.point, w.lines, w.alpha
                            ));
                        }
                    }
                    emit(input.format, serde_json::to_value(&verdict)?, table)
                }
                None => {
                    let found = search_i_for_02(&l.lat, d, k, max_d)?;
                    let (value, table) = match found {
                        Some((s, branch)) => {
                            let s: Vec<usize> = s.iter().map(|i| i + 1).collect();
                            (
                                json!({"k": k, "I": s, "branch": branch}),
                                format!("found I={s:?} branch={branch:?}\n"),
                            )
                        }
                        None => (
                            json!({"k": k, "I": null}),
                            format!("no subset of size {k} satisfies the condition\n"),
                        ),
                    };
                    emit(input.format, value, table)
                }
            }
        }
        Command::Theorem1 {
            input,
            partition,
            m,
            distinguished_line,
        } => {
            let l = load(&input)?;
            let d = l.arr.degree();
            let text = std::fs::read_to_string(&partition)
                .with_context(|| format!("reading {}", partition.display()))?;
            let phi: PartitionPhi = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("{}: {e}", partition.display())))?;
            let verdict = check_theorem1_hypotheses(
                &l.arr,
                &l.lat,
                &phi,
                m,
                distinguished(distinguished_line, d)?,
            )?;
            let mut table = format!("t1i={} t1ii={}\n", verdict.t1i, verdict.t1ii);
            if verdict.t1i {
                table.push_str(&format!(
                    "b1 ≥ {} at k in {:?}\n",
                    verdict.r.saturating_sub(2),
                    verdict.mth_root_ks(d)
                ));
            }
            if verdict.t1ii {
                table.push_str(&format!(
                    "b1 = {} at k in {:?}\n",
                    m - 2,
                    verdict.primitive_ks(d)
                ));
            }
            for detail in &verdict.details {
                table.push_str(&format!("  {detail}\n"));
            }
            emit(input.format, serde_json::to_value(&verdict)?, table)
        }
        Command::Realize { input, moduli, cap } => {
            let l = load(&input)?;
            let sys = incidence_from_lattice(&l.lat)?;
            let search = search_realizations(&sys, &moduli, cap)?;
            let mut table = format!(
                "system {}x{}  kernel size {}  examined {}{}  distinct-entry solutions {}\n",
                sys.rows.len(),
                sys.d,
                search.kernel_size,
                search.examined,
                if search.truncated { " (truncated)" } else { "" },
                search.candidates.len()
            );
            if let Some(c) = search.candidates.first() {
                let x: Vec<String> = c
                    .vector
                    .iter()
                    .map(|e| {
                        if e.len() == 1 {
                            e[0].to_string()
                        } else {
                            format!("{e:?}")
                        }
                    })
                    .collect();
                table.push_str(&format!(
                    "x=({})\ninduced_triples={} new_triples={}\n",
                    x.join(","),
                    c.induced_triples,
                    c.new_triples
                ));
            }
            emit(input.format, serde_json::to_value(&search)?, table)
        }
        Command::Section { input } => {
            let l = load(&input)?;
            let file = ArrangementFile::from_arrangement(&l.arr);
            let value = json!({"arrangement": file, "certificate": l.section});
            let mut table = serde_json::to_string(&file)? + "\n";
            if let Some(c) = &l.section {
                table.push_str(&format!(
                    "seed={} attempts={} plane={:?}\n",
                    c.seed, c.attempts, c.plane
                ));
            }
            emit(input.format, value, table)
        }
        Command::Examples {
            only,
            format,
            corrupt,
        } => {
            let outcomes = run_suite(&only, &corrupt)?;
            let mut rows = Vec::new();
            for o in &outcomes {
                for c in &o.checks {
                    let status = if c.passed { "pass" } else { "FAIL" };
                    rows.push(vec![
                        status.to_string(),
                        o.fixture.clone(),
                        c.name.clone(),
                        c.observed.clone(),
                    ]);
                }
            }
            emit(format, serde_json::to_value(&outcomes)?, align(&rows))?;
            let failed: Vec<&str> = outcomes
                .iter()
                .filter(|o| !o.passed())
                .map(|o| o.fixture.as_str())
                .collect();
            if !failed.is_empty() {
                bail!(Inconsistent(format!(
                    "fixtures failed: {}",
                    failed.join(", ")
                )));
            }
            Ok(())
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let inconsistent = err.chain().any(|e| {
        e.downcast_ref::<Inconsistent>().is_some()
            || e.downcast_ref::<Error>()
                .is_some_and(Error::is_invariant_violation)
    });
    if inconsistent {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
