use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use strandcat::algebra::{enumerate_basis, enumerate_full_basis, HomClass, SymGenerator};
use strandcat::contact::{enumerate_all_tight, ContactView};
use strandcat::corpus::generate_corpus;
use strandcat::homology::{summand_nonzero, DiagramHomology};
use strandcat::isoverify::{sfh_table, verify, DiagramSummary, IsoReport, SfhTable};
use strandcat::sets::parse_subset_pair;
use strandcat::{ArcDiagram, LabelSet, StepSet, SurgeryVerdict};

mod pretty;

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(
    name = "strandcat",
    version,
    about = "Strand algebras, their homology, and contact category algebras"
)]
struct Cli {
    /// Render aligned tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that oriented surgery yields no closed loop.
    Validate { file: PathBuf },
    /// Invariants of the quadrangulated surface.
    Info { file: PathBuf },
    /// List the symmetrised generators with their gradings.
    Basis {
        file: PathBuf,
        /// Only generators with this many strands.
        #[arg(long)]
        strands: Option<usize>,
    },
    /// Homology dimension of every nonzero summand.
    Homology {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Chain)]
        method: Method,
        /// Restrict to one idempotent pair, written `start;end` (e.g. `1,3;-`).
        #[arg(long, allow_hyphen_values = true)]
        summand: Option<String>,
    },
    /// Tight cubulated contact structures.
    Contact {
        file: PathBuf,
        /// Bottom dividing set, as a label list or `-`.
        #[arg(long, allow_hyphen_values = true)]
        from: Option<String>,
        /// Top dividing set, as a label list or `-`.
        #[arg(long, allow_hyphen_values = true)]
        to: Option<String>,
    },
    /// Check the contact category algebra against homology.
    Verify {
        file: PathBuf,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Dimensions indexed by pairs of basic dividing sets.
    SfhTable { file: PathBuf },
    /// Run verification over every small arc diagram.
    Corpus {
        #[arg(long, default_value_t = 3)]
        max_k: usize,
        #[arg(long, default_value_t = 3)]
        max_l: usize,
        /// Include wall-clock time in the summary
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Chain,
    Local,
}

/// Exit status 1: the input is understood but fails a check. Exit status 2: it could not be
/// understood.
enum Failure {
    Check(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Check(m) | Failure::Usage(m) => m,
        }
    }
}

#[derive(Serialize)]
struct Versioned<T: Serialize> {
    schema: u32,
    #[serde(flatten)]
    body: T,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, ok)) => {
            println!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn json<T: Serialize>(body: T) -> String {
    serde_json::to_string(&Versioned {
        schema: SCHEMA,
        body,
    })
    .expect("report serialises")
}

fn load(path: &Path) -> Result<ArcDiagram, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    ArcDiagram::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_valid(path: &Path) -> Result<ArcDiagram, Failure> {
    let d = load(path)?;
    match d.validate() {
        SurgeryVerdict::Ok => Ok(d),
        SurgeryVerdict::Invalid { circle } => Err(Failure::Check(format!(
            "{}: oriented surgery closes up through places {circle:?}",
            path.display()
        ))),
    }
}

fn subset_arg(d: &ArcDiagram, raw: &str) -> Result<LabelSet, Failure> {
    let set: LabelSet = raw
        .parse()
        .map_err(|e| Failure::Usage(format!("`{raw}`: {e}")))?;
    check_in_range(d, set, raw)
}

fn check_in_range(d: &ArcDiagram, set: LabelSet, raw: &str) -> Result<LabelSet, Failure> {
    if set.is_subset(LabelSet::full(d.k())) {
        Ok(set)
    } else {
        Err(Failure::Usage(format!(
            "`{raw}` names a label above {}",
            d.k()
        )))
    }
}

#[derive(Serialize)]
struct Info {
    #[serde(flatten)]
    summary: DiagramSummary,
    places: usize,
    marked_points: usize,
    basic_dividing_sets: usize,
}

#[derive(Serialize)]
struct GeneratorRow<'a> {
    #[serde(flatten)]
    generator: &'a SymGenerator,
    maslov2: i64,
    h: HomClass,
}

#[derive(Serialize)]
struct BasisOut<'a> {
    strands: Option<usize>,
    count: usize,
    generators: Vec<GeneratorRow<'a>>,
}

#[derive(Serialize, PartialEq, Eq)]
struct DimRow {
    s: LabelSet,
    t: LabelSet,
    h: HomClass,
    dim: usize,
}

#[derive(Serialize)]
struct HomologyOut {
    method: Method,
    total_dim: usize,
    summands: Vec<DimRow>,
}

#[derive(Serialize)]
struct ContactOut {
    count: usize,
    structures: Vec<ContactView>,
}

#[derive(Serialize)]
struct VerifyOut {
    success: bool,
    #[serde(flatten)]
    report: IsoReport,
}

#[derive(Serialize)]
struct SfhOut {
    agrees: bool,
    #[serde(flatten)]
    table: SfhTable,
}

#[derive(Serialize)]
struct CorpusRow {
    segments: Vec<usize>,
    matching: Vec<usize>,
    ca_dim: usize,
    homology_dim: usize,
    pairs_checked: usize,
    success: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    mismatches: Vec<String>,
}

#[derive(Serialize)]
struct CorpusOut {
    max_k: usize,
    max_l: usize,
    diagrams: usize,
    failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<u128>,
    results: Vec<CorpusRow>,
}

/// Nonzero summands by the closed-form local table.
fn local_rows(d: &ArcDiagram) -> Vec<DimRow> {
    let n = d.interior_count();
    let mut rows = Vec::new();
    for s in LabelSet::all_subsets(d.k()) {
        for t in LabelSet::all_subsets(d.k()) {
            for u in StepSet::all_subsets(n) {
                let h = HomClass::indicator(n, u);
                if summand_nonzero(d, s, t, &h) {
                    rows.push(DimRow { s, t, h, dim: 1 });
                }
            }
        }
    }
    rows.sort_by(|a, b| (a.s, a.t, &a.h).cmp(&(b.s, b.t, &b.h)));
    rows
}

fn chain_rows(d: &ArcDiagram) -> Result<Vec<DimRow>, Failure> {
    let hom = DiagramHomology::compute(d).map_err(|e| Failure::Check(e.to_string()))?;
    Ok(hom
        .dims
        .iter()
        .filter(|(_, dims)| !dims.is_empty())
        .map(|(key, dims)| DimRow {
            s: key.s,
            t: key.t,
            h: key.h.clone(),
            dim: dims.values().sum(),
        })
        .collect())
}

fn run(cli: &Cli) -> Result<(String, bool), Failure> {
    let pretty = cli.pretty;
    match &cli.command {
        Command::Validate { file } => {
            let d = load(file)?;
            let verdict = d.validate();
            let ok = verdict.is_ok();
            let text = if pretty {
                pretty::verdict(&verdict)
            } else {
                json(&verdict)
            };
            Ok((text, ok))
        }
        Command::Info { file } => {
            let d = load_valid(file)?;
            let summary = DiagramSummary::of(&d).map_err(|e| Failure::Check(e.to_string()))?;
            let q = d
                .to_quad_surface()
                .map_err(|e| Failure::Check(e.to_string()))?;
            let info = Info {
                summary,
                places: d.place_count(),
                marked_points: q.marked_point_count,
                basic_dividing_sets: 1 << d.k(),
            };
            let text = if pretty {
                pretty::info(&info.summary, info.marked_points)
            } else {
                json(&info)
            };
            Ok((text, true))
        }
        Command::Basis { file, strands } => {
            let d = load_valid(file)?;
            if let Some(i) = strands {
                if *i > d.k() {
                    return Err(Failure::Usage(format!(
                        "--strands {i} exceeds k = {}",
                        d.k()
                    )));
                }
            }
            let gens = match strands {
                Some(i) => enumerate_basis(&d, *i),
                None => enumerate_full_basis(&d),
            };
            let rows: Vec<GeneratorRow> = gens
                .iter()
                .map(|g| GeneratorRow {
                    generator: g,
                    maslov2: g.maslov2(&d),
                    h: g.hom_grading(&d),
                })
                .collect();
            let text = if pretty {
                pretty::basis(rows.iter().map(|r| (r.generator, r.maslov2, &r.h)))
            } else {
                json(BasisOut {
                    strands: *strands,
                    count: rows.len(),
                    generators: rows,
                })
            };
            Ok((text, true))
        }
        Command::Homology {
            file,
            method,
            summand,
        } => {
            let d = load_valid(file)?;
            let filter = summand
                .as_deref()
                .map(|raw| {
                    let (s, t) = parse_subset_pair(raw)
                        .map_err(|e| Failure::Usage(format!("`{raw}`: {e}")))?;
                    Ok::<_, Failure>((check_in_range(&d, s, raw)?, check_in_range(&d, t, raw)?))
                })
                .transpose()?;
            let mut rows = match method {
                Method::Chain => chain_rows(&d)?,
                Method::Local => local_rows(&d),
            };
            if let Some((s, t)) = filter {
                rows.retain(|r| r.s == s && r.t == t);
            }
            let total_dim = rows.iter().map(|r| r.dim).sum();
            let text = if pretty {
                pretty::homology(rows.iter().map(|r| (r.s, r.t, &r.h, r.dim)), total_dim)
            } else {
                json(HomologyOut {
                    method: *method,
                    total_dim,
                    summands: rows,
                })
            };
            Ok((text, true))
        }
        Command::Contact { file, from, to } => {
            let d = load_valid(file)?;
            let from = from.as_deref().map(|r| subset_arg(&d, r)).transpose()?;
            let to = to.as_deref().map(|r| subset_arg(&d, r)).transpose()?;
            let structures: Vec<ContactView> = enumerate_all_tight(&d)
                .into_iter()
                .filter(|x| from.is_none_or(|s| x.bottom.on_squares == s))
                .filter(|x| to.is_none_or(|t| x.top.on_squares == t))
                .map(|x| x.view(&d))
                .collect();
            let text = if pretty {
                pretty::contact(&structures)
            } else {
                json(ContactOut {
                    count: structures.len(),
                    structures,
                })
            };
            Ok((text, true))
        }
        Command::Verify { file, timing } => {
            let d = load_valid(file)?;
            let start = Instant::now();
            let mut report = verify(&d).map_err(|e| Failure::Check(e.to_string()))?;
            if *timing {
                report.timing_ms = Some(start.elapsed().as_millis());
            }
            let success = report.success();
            let text = if pretty {
                pretty::report(&report)
            } else {
                json(VerifyOut { success, report })
            };
            Ok((text, success))
        }
        Command::SfhTable { file } => {
            let d = load_valid(file)?;
            let table = sfh_table(&d).map_err(|e| Failure::Check(e.to_string()))?;
            let agrees = table.agrees();
            let text = if pretty {
                pretty::sfh(&table)
            } else {
                json(SfhOut { agrees, table })
            };
            Ok((text, agrees))
        }
        Command::Corpus {
            max_k,
            max_l,
            timing,
        } => {
            if *max_k == 0 || *max_l == 0 {
                return Err(Failure::Usage(
                    "--max-k and --max-l must be positive".into(),
                ));
            }
            let start = Instant::now();
            let corpus = generate_corpus(*max_k, *max_l);
            let results: Vec<CorpusRow> = corpus
                .par_iter()
                .map(|d| match verify(d) {
                    Ok(r) => CorpusRow {
                        segments: d.segment_sizes().to_vec(),
                        matching: d.matching().to_vec(),
                        ca_dim: r.ca_dim,
                        homology_dim: r.homology_dim,
                        pairs_checked: r.pairs_checked,
                        success: r.success(),
                        mismatches: r
                            .mismatches
                            .iter()
                            .map(|m| format!("{}: {}", m.check, m.detail))
                            .collect(),
                    },
                    Err(e) => CorpusRow {
                        segments: d.segment_sizes().to_vec(),
                        matching: d.matching().to_vec(),
                        ca_dim: 0,
                        homology_dim: 0,
                        pairs_checked: 0,
                        success: false,
                        mismatches: vec![e.to_string()],
                    },
                })
                .collect();
            let failures = results.iter().filter(|r| !r.success).count();
            let out = CorpusOut {
                max_k: *max_k,
                max_l: *max_l,
                diagrams: results.len(),
                failures,
                timing_ms: timing.then(|| start.elapsed().as_millis()),
                results,
            };
            let text = if pretty {
                pretty::corpus(
                    out.results.iter().map(|r| {
                        (
                            &r.segments[..],
                            &r.matching[..],
                            r.ca_dim,
                            r.homology_dim,
                            r.success,
                        )
                    }),
                    out.failures,
                )
            } else {
                json(&out)
            };
            Ok((text, failures == 0))
        }
    }
}
