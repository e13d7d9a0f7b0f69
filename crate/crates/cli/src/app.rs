//! Argument parsing, command dispatch and text rendering.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use k3evenset_core::chow::{self, CompleteIntersection};
use k3evenset_core::disc;
use k3evenset_core::families::{self, GlueVector, NsFamily};
use k3evenset_core::lattice::{self, FrameVector};
use k3evenset_core::models::{self, DistinctnessReport, Table1Entry, GOLDEN_TABLE1};
use k3evenset_core::positivity::{self, HyperellipticVerdict, HyperellipticWitness};
use serde::Serialize;
use thiserror::Error;

use crate::json::*;
use crate::{oracle, parallel, verify};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "k3evenset", version, about = "Lattice computations for K3 surfaces with an even set of eight nodes")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Worker threads for root and glue scans.
    #[arg(long, default_value_t = 1, global = true, value_parser = clap::value_parser!(u64).range(1..=256))]
    pub jobs: u64,
    /// Largest d (or d') for batch verifications.
    #[arg(long, default_value_t = 12, global = true, value_parser = clap::value_parser!(u64).range(1..=64))]
    pub dmax: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Discriminant group of a family, e.g. `disc L:2d=6`.
    Disc {
        #[arg(value_parser = parse_family)]
        family: NsFamily,
    },
    /// Admissible glues over all 2^8 supports, for one d or for 1..=dmax.
    Glues {
        #[arg(long)]
        d: Option<u64>,
    },
    /// Index-2 overlattice of L_{2d} glued along a support, e.g. `overlattice 2 1,2`.
    Overlattice {
        d: u64,
        #[arg(value_parser = parse_support)]
        support: GlueVector,
    },
    /// Positivity status of a divisor, e.g. `ample L:2d=6 --divisor L-Nhat`.
    Ample {
        #[arg(value_parser = parse_family)]
        family: NsFamily,
        #[arg(long)]
        divisor: String,
        /// Cross-check with the brute-force root oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Even-set test for an octet of disjoint roots (default N1..N8).
    Evenset {
        #[arg(value_parser = parse_family)]
        family: NsFamily,
        /// Comma-separated divisor expressions.
        #[arg(long)]
        octet: Option<String>,
    },
    /// Double-cover test for a polarization.
    Hyperelliptic {
        #[arg(value_parser = parse_family)]
        family: NsFamily,
        #[arg(long)]
        divisor: String,
    },
    /// Intersection matrix of a complete intersection, e.g. `chow "P4xP2: (2,0)+(1,1)^3"`.
    Chow {
        #[arg(value_parser = parse_ci)]
        input: CompleteIntersection,
    },
    /// Regenerates the model table (all rows, or one family).
    Table1 {
        #[arg(value_parser = parse_family)]
        family: Option<NsFamily>,
    },
    /// Partner family under the quotient correspondence.
    Correspond {
        #[arg(value_parser = parse_family)]
        family: NsFamily,
        /// Compare discriminant groups with another family.
        #[arg(long, value_parser = parse_family)]
        against: Option<NsFamily>,
    },
    /// Runs every reproducibility criterion and reports pass/fail.
    VerifyPaper {
        /// Run a single criterion (1..=8).
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=8))]
        criterion: Option<u8>,
    },
}

fn parse_family(s: &str) -> Result<NsFamily, String> {
    let f: NsFamily = s.parse().map_err(|e: families::FamilyParseError| e.to_string())?;
    Ok(f)
}

fn parse_ci(s: &str) -> Result<CompleteIntersection, String> {
    s.parse().map_err(|e: chow::ChowError| e.to_string())
}

const SUPPORT_GRAMMAR: &str = "comma-separated distinct indices in 1..=8, e.g. 1,2 (or 'none')";

fn parse_support(s: &str) -> Result<GlueVector, String> {
    if s == "none" {
        return Ok(GlueVector::from_mask(0));
    }
    let mut mask = 0u16;
    for part in s.split(',') {
        let i: u16 = part.trim().parse().map_err(|_| format!("bad index {part:?}; expected {SUPPORT_GRAMMAR}"))?;
        if !(1..=8).contains(&i) || mask & (1 << (i - 1)) != 0 {
            return Err(format!("index {i} out of range or repeated; expected {SUPPORT_GRAMMAR}"));
        }
        mask |= 1 << (i - 1);
    }
    Ok(GlueVector::from_mask(mask))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

/// Process outcome: exit status and the two output streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { status: 2, stdout: String::new(), stderr: text }
            } else {
                Output { status: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok((ok, stdout)) => Output { status: if ok { 0 } else { 1 }, stdout, stderr: String::new() },
        Err(e) => Output { status: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn emit<T: Serialize>(cli: &Cli, report: &T, text: impl FnOnce() -> String) -> Result<String, CliError> {
    Ok(match cli.format {
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Text => text(),
    })
}

/// Returns `(verified, rendered report)`.
fn execute(cli: &Cli) -> Result<(bool, String), CliError> {
    let jobs = cli.jobs as usize;
    match &cli.command {
        Command::Disc { family } => {
            let r = disc_report(*family)?;
            let ok = r.matches_prediction;
            Ok((ok, emit(cli, &r, || disc_text(&r))?))
        }
        Command::Glues { d } => {
            let ds: Vec<u64> = match d {
                Some(0) => return Err(usage("d must be positive")),
                Some(d) => vec![*d],
                None => (1..=cli.dmax).collect(),
            };
            let r = glues_report(&ds, jobs)?;
            Ok((true, emit(cli, &r, || glues_text(&r))?))
        }
        Command::Overlattice { d, support } => {
            let r = overlattice_report(*d, support)?;
            Ok((true, emit(cli, &r, || overlattice_text(&r))?))
        }
        Command::Ample { family, divisor, oracle } => {
            let r = positivity_report(*family, divisor, *oracle, jobs)?;
            let ok = r.oracle.as_ref().map_or(true, |o| o.discrepancies.is_empty());
            Ok((ok, emit(cli, &r, || positivity_text(&r))?))
        }
        Command::Evenset { family, octet } => {
            let r = evenset_report(*family, octet.as_deref())?;
            Ok((true, emit(cli, &r, || format!("{}: {} ({})\n", r.family, r.verdict, r.detail))?))
        }
        Command::Hyperelliptic { family, divisor } => {
            let r = hyperelliptic_report(*family, divisor)?;
            Ok((true, emit(cli, &r, || hyperelliptic_text(&r))?))
        }
        Command::Chow { input } => {
            let r = ChowReport {
                schema: SCHEMA.into(),
                kind: "chow".into(),
                input: input.to_string(),
                matrix: chow::intersection_matrix(input).map_err(usage)?.row_vecs(),
                k3: chow::ci_is_k3(input).map_err(usage)?,
            };
            Ok((true, emit(cli, &r, || chow_text(&r))?))
        }
        Command::Table1 { family } => {
            let r = table1_report(*family)?;
            let ok = r.mismatches == 0;
            Ok((ok, emit(cli, &r, || table1_text(&r))?))
        }
        Command::Correspond { family, against } => {
            let r = correspond_report(*family, *against)?;
            let ok = r.involution;
            Ok((ok, emit(cli, &r, || correspond_text(&r))?))
        }
        Command::VerifyPaper { criterion } => {
            let opts = verify::Options { dmax: cli.dmax, jobs };
            let outcomes = match criterion {
                Some(id) => vec![verify::run_criterion(*id, &opts)],
                None => verify::run_all(&opts),
            };
            let r = verify::report(&opts, &outcomes);
            Ok((r.passed, emit(cli, &r, || verify_text(&r))?))
        }
    }
}

pub fn disc_report(family: NsFamily) -> Result<DiscReport, CliError> {
    let l = family.make().map_err(usage)?;
    let g = disc::discriminant_group(&l).map_err(usage)?;
    let mut predicted = family.predicted_invariant_factors();
    predicted.sort();
    Ok(DiscReport {
        schema: SCHEMA.into(),
        kind: "disc".into(),
        family: family.to_string(),
        lattice: LatticeJson::new(&l),
        matches_prediction: g.invariant_factors == predicted,
        invariant_factors: g.invariant_factors,
        order: g.order,
        lifts: g.lifts.iter().map(|x| FrameVectorJson::new(&x.vector)).collect(),
        predicted,
    })
}

pub fn glues_report(ds: &[u64], jobs: usize) -> Result<GluesReport, CliError> {
    let mut results = Vec::new();
    for &d in ds {
        let c = parallel::admissible_glues(d, jobs).map_err(usage)?;
        results.push(GlueRow {
            d,
            count: c.glues.len(),
            admissible: c.glues.iter().map(|g| g.support.clone()).collect(),
            classes: c.classes,
            overlattices_even: c.overlattices_even,
            n_primitive: c.n_primitive,
        });
    }
    Ok(GluesReport { schema: SCHEMA.into(), kind: "glues".into(), results })
}

pub fn overlattice_report(d: u64, support: &GlueVector) -> Result<OverlatticeReport, CliError> {
    let l = NsFamily::l(d).make().map_err(usage)?;
    let glue = support.glue_class(l.frame());
    let o = families::overlattice(&l, &glue).map_err(usage)?;
    let n = families::nikulin_in_frame(l.frame()).map_err(usage)?;
    Ok(OverlatticeReport {
        schema: SCHEMA.into(),
        kind: "overlattice".into(),
        d,
        support: support.support.clone(),
        glue: FrameVectorJson::new(&glue),
        even: o.is_even(),
        n_primitive: lattice::is_primitive(&o, &n).map_err(usage)?,
        invariant_factors: disc::discriminant_group(&o).map_err(usage)?.invariant_factors,
        lattice: LatticeJson::new(&o),
    })
}

pub fn positivity_report(family: NsFamily, divisor: &str, with_oracle: bool, jobs: usize) -> Result<PositivityJson, CliError> {
    let ns = family.make().map_err(usage)?;
    let dvec = models::parse_divisor(family, divisor).map_err(usage)?;
    let r = parallel::classify_positivity(&ns, &dvec, jobs).map_err(usage)?;
    let oracle = if with_oracle {
        let o = oracle::cross_check(&ns, &r).map_err(usage)?;
        Some(OracleJson { bound: rat_string(&o.bound), obstructions: o.obstructions.len(), discrepancies: o.discrepancies })
    } else {
        None
    };
    Ok(PositivityJson {
        schema: SCHEMA.into(),
        kind: "positivity".into(),
        family: family.to_string(),
        divisor: divisor.to_string(),
        vector: FrameVectorJson::new(&dvec),
        d2: r.self_intersection.clone(),
        status: r.status.as_str().into(),
        witness: r.witness.as_ref().map(FrameVectorJson::new),
        a_max: rat_string(&r.search_bound),
        exhaustive: r.exhaustive,
        assumptions: r.assumptions.clone(),
        notes: models::positivity_notes(family, &dvec, r.status),
        oracle,
    })
}

pub fn evenset_report(family: NsFamily, octet: Option<&str>) -> Result<EvenSetReport, CliError> {
    let ns = family.make().map_err(usage)?;
    let names: Vec<String> = match octet {
        Some(s) => s.split(',').map(|x| x.trim().to_string()).collect(),
        None if family.is_l_type() => (1..=8).map(|i| format!("N{i}")).collect(),
        None => (1..=8).map(|i| format!("E{i}")).collect(),
    };
    let report = |verdict: &str, detail: String| EvenSetReport {
        schema: SCHEMA.into(),
        kind: "evenset".into(),
        family: family.to_string(),
        octet: names.clone(),
        verdict: verdict.into(),
        detail,
    };
    if !family.is_l_type() {
        let m = FrameVector::unit(ns.frame(), 0);
        let perp = orthogonal_roots(&ns, &m)?;
        let detail = format!(
            "the orthogonal complement of M is E8(-2); short-vector scan finds {perp} vectors of square -2, so no octet of disjoint (-2)-classes exists"
        );
        return Ok(report("precondition_unsatisfiable", detail));
    }
    let vectors = names
        .iter()
        .map(|n| models::parse_divisor(family, n))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    let even = positivity::is_even_set(&ns, &vectors).map_err(usage)?;
    Ok(if even {
        report("even_set", "half the sum of the octet lies in the lattice".into())
    } else {
        report("not_even_set", "half the sum of the octet is not in the lattice".into())
    })
}

fn orthogonal_roots(ns: &lattice::IntegerLattice, m: &FrameVector) -> Result<usize, CliError> {
    use k3evenset_core::exactlin::{self, Int, IntMatrix, Rat};
    let coords = ns.rational_coordinates(m).map_err(usage)?.ok_or_else(|| usage("polarization not in lattice"))?;
    let den = exactlin::common_denominator(coords.iter());
    let mc: Vec<Int> = coords.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect();
    let g = ns.gram();
    let col: Vec<Vec<Int>> = (0..g.rows()).map(|i| vec![(0..g.cols()).map(|j| &g[(i, j)] * &mc[j]).sum()]).collect();
    let k = exactlin::left_kernel(&IntMatrix::from_rows(col).map_err(usage)?);
    let perp = g.congruent(&k).map_err(usage)?.map(|x| -x);
    Ok(lattice::short_vectors(&perp, &Int::from(2)).map_err(usage)?.len())
}

pub fn hyperelliptic_report(family: NsFamily, divisor: &str) -> Result<HyperellipticReport, CliError> {
    let ns = family.make().map_err(usage)?;
    let dvec = models::parse_divisor(family, divisor).map_err(usage)?;
    let d2 = lattice::inner_int(&dvec, &dvec).map_err(usage)?;
    let verdict = positivity::hyperelliptic_test(&ns, &dvec).map_err(usage)?;
    let (name, witness) = match verdict {
        HyperellipticVerdict::Birational => ("birational", None),
        HyperellipticVerdict::DoubleCover(w) => {
            let w = match w {
                HyperellipticWitness::Genus2 => WitnessJson { kind: "genus2".into(), class: None },
                HyperellipticWitness::Elliptic(e) => {
                    WitnessJson { kind: "elliptic".into(), class: Some(FrameVectorJson::new(&e)) }
                }
                HyperellipticWitness::Half(b) => WitnessJson { kind: "half".into(), class: Some(FrameVectorJson::new(&b)) },
            };
            ("double_cover", Some(w))
        }
    };
    Ok(HyperellipticReport {
        schema: SCHEMA.into(),
        kind: "hyperelliptic".into(),
        family: family.to_string(),
        divisor: divisor.to_string(),
        d2,
        verdict: name.into(),
        witness,
    })
}

fn table1_row(entry: &Table1Entry) -> Table1Row {
    let g = entry.golden;
    Table1Row {
        family: g.x.to_string(),
        partner: entry.correspondence.to_string(),
        partner_caption: g.y_caption.into(),
        partner_target_dim: g.y_target_dim,
        models: entry
            .models
            .iter()
            .zip(g.models)
            .map(|(m, gm)| ModelJson {
                polarization: m.polarization.to_string(),
                caption: gm.caption.into(),
                d2: m.self_intersection.clone(),
                h0: m.h0.clone(),
                h0_assumption: m.rr_assumption.as_str().into(),
                target_dim: m.target_dim.clone(),
                map_kind: m.map_kind.as_str().into(),
                degree: m.degree.clone(),
                even_set_images: m.even_set_images.iter().map(|i| i.as_string()).collect(),
                moduli_count: m.moduli_count,
                fibers: m.fibers.map(|f| FibersJson { i1: f.i1, i2: f.i2 }),
            })
            .collect(),
        products: entry
            .products
            .iter()
            .zip(g.products)
            .map(|(p, gp)| ProductJson {
                first: p.first.to_string(),
                second: p.second.to_string(),
                caption: gp.caption.into(),
                ambient: p.ambient.to_string(),
                lattice_gram: p.lattice_gram.row_vecs(),
                chow_matrix: p.chow_matrix.row_vecs(),
                ambient_is_k3: p.ambient_is_k3,
            })
            .collect(),
        mismatches: entry.mismatches.clone(),
    }
}

pub fn table1_report(family: Option<NsFamily>) -> Result<Table1Report, CliError> {
    let families: Vec<NsFamily> = match family {
        Some(f) => vec![f],
        None => GOLDEN_TABLE1.iter().map(|r| r.x).collect(),
    };
    let mut rows = Vec::new();
    for f in families {
        rows.push(table1_row(&models::table1(f).map_err(usage)?));
    }
    let mismatches = rows.iter().map(|r| r.mismatches.len()).sum();
    Ok(Table1Report { schema: SCHEMA.into(), kind: "table1".into(), rows, mismatches })
}

pub fn correspond_report(family: NsFamily, against: Option<NsFamily>) -> Result<CorrespondReport, CliError> {
    let partner = models::ns_correspondence(family);
    let distinctness = match against {
        Some(other) => {
            let (verdict, detail) = match models::families_distinct(family, other).map_err(usage)? {
                DistinctnessReport::DistinctByGroup => ("distinct_by_group", None),
                DistinctnessReport::SameGroupButConstraint(s) => ("same_group_but_constraint", Some(s)),
                DistinctnessReport::Compatible => ("compatible", None),
            };
            Some(DistinctnessJson { other: other.to_string(), verdict: verdict.into(), detail })
        }
        None => None,
    };
    Ok(CorrespondReport {
        schema: SCHEMA.into(),
        kind: "correspondence".into(),
        family: family.to_string(),
        partner: partner.to_string(),
        involution: models::ns_correspondence(partner) == family,
        distinctness,
    })
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn matrix_text(m: &[Vec<k3evenset_core::exactlin::Int>]) -> String {
    m.iter().map(|r| format!("[{}]", join(r))).collect::<Vec<_>>().join(" ")
}

fn frame_vector_text(v: &FrameVectorJson) -> String {
    let num = join(&v.num);
    if v.den == 1.into() {
        format!("({num})")
    } else {
        format!("({num})/{}", v.den)
    }
}

fn disc_text(r: &DiscReport) -> String {
    format!(
        "{}: invariant factors [{}], order {}, shape prediction {}\n",
        r.family,
        join(&r.invariant_factors),
        r.order,
        if r.matches_prediction { "matched" } else { "MISMATCH" }
    )
}

fn glues_text(r: &GluesReport) -> String {
    let mut s = String::new();
    for row in &r.results {
        let _ = writeln!(
            s,
            "d={:>2}  admissible={:>2}  classes={}  even={}  N primitive={}",
            row.d,
            row.count,
            row.classes.len(),
            row.overlattices_even,
            row.n_primitive
        );
    }
    s
}

fn overlattice_text(r: &OverlatticeReport) -> String {
    format!(
        "d={} support [{}]: glue {} even={} N primitive={} discriminant [{}]\n",
        r.d,
        join(&r.support),
        frame_vector_text(&r.glue),
        r.even,
        r.n_primitive,
        join(&r.invariant_factors)
    )
}

fn positivity_text(r: &PositivityJson) -> String {
    let mut s = format!("{} {}: D^2 = {}, status {}, a_max {}", r.family, r.divisor, r.d2, r.status, r.a_max);
    if let Some(w) = &r.witness {
        let _ = write!(s, ", witness {}", frame_vector_text(w));
    }
    s.push('\n');
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    if let Some(o) = &r.oracle {
        let _ = writeln!(s, "oracle: bound {}, {} obstructions, {} discrepancies", o.bound, o.obstructions, o.discrepancies.len());
    }
    s
}

fn hyperelliptic_text(r: &HyperellipticReport) -> String {
    let w = r.witness.as_ref().map_or(String::new(), |w| match &w.class {
        Some(c) => format!(" ({} {})", w.kind, frame_vector_text(c)),
        None => format!(" ({})", w.kind),
    });
    format!("{} {}: D^2 = {}, {}{w}\n", r.family, r.divisor, r.d2, r.verdict)
}

fn chow_text(r: &ChowReport) -> String {
    format!("{}: {} (K3: {})\n", r.input, matrix_text(&r.matrix), r.k3)
}

fn table1_text(r: &Table1Report) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<10} {:<28} {:>3} {:>3} {:<26} {:>3}  {:<44} Y",
        "X", "polarization", "D2", "dim", "map", "deg", "images of N1..N8"
    );
    for row in &r.rows {
        for m in &row.models {
            let _ = writeln!(
                s,
                "{:<10} {:<28} {:>3} {:>3} {:<26} {:>3}  {:<44} {} ({})",
                row.family,
                m.polarization,
                m.d2,
                m.target_dim,
                m.map_kind,
                m.degree,
                m.even_set_images.join(","),
                row.partner,
                row.partner_caption
            );
        }
        for p in &row.products {
            let _ = writeln!(
                s,
                "{:<10} {:<28} {}  lattice {}  chow {}",
                row.family,
                format!("{} x {}", p.first, p.second),
                p.ambient,
                matrix_text(&p.lattice_gram),
                matrix_text(&p.chow_matrix)
            );
        }
        for m in &row.mismatches {
            let _ = writeln!(s, "MISMATCH {m}");
        }
    }
    let _ = writeln!(s, "{} mismatches", r.mismatches);
    s
}

fn correspond_text(r: &CorrespondReport) -> String {
    let mut s = format!("{} <-> {} (involution: {})\n", r.family, r.partner, r.involution);
    if let Some(d) = &r.distinctness {
        let _ = writeln!(s, "vs {}: {}{}", d.other, d.verdict, d.detail.as_ref().map_or(String::new(), |x| format!(" ({x})")));
    }
    s
}

fn verify_text(r: &VerifyReport) -> String {
    let mut s = String::new();
    for c in &r.criteria {
        let _ = writeln!(s, "[{}] criterion {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.title);
        if !c.passed {
            for (got, want) in c.computed.iter().zip(&c.expected) {
                if got != want {
                    let _ = writeln!(s, "    computed {got}\n    expected {want}");
                }
            }
        }
    }
    let _ = writeln!(s, "{}", if r.passed { "all criteria passed" } else { "some criteria failed" });
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn supports_parse() {
        assert_eq!(parse_support("1,2").unwrap().support, vec![1, 2]);
        assert_eq!(parse_support("none").unwrap().support, Vec::<usize>::new());
        assert!(parse_support("0").is_err());
        assert!(parse_support("1,1").is_err());
        assert!(parse_support("x").unwrap_err().contains("1..=8"));
    }

    #[test]
    fn unknown_subcommand_is_a_usage_error() {
        let out = run(["k3evenset", "frobnicate"]);
        assert_eq!(out.status, 2);
    }

    #[test]
    fn unsupported_divisor_is_rejected() {
        let out = run(["k3evenset", "ample", "L:2d=6", "--divisor", "L-Q"]);
        assert_eq!(out.status, 2);
        assert!(out.stderr.contains("expected"), "{}", out.stderr);
    }

    #[test]
    fn l_family_pairs_with_m_prime() {
        let r = correspond_report(NsFamily::l(4), Some(NsFamily::m_prime(4))).unwrap();
        assert_eq!(r.partner, "M':2d'=16");
        assert_eq!(r.distinctness.unwrap().verdict, "same_group_but_constraint");
    }

    #[test]
    fn m_family_octets_are_unsatisfiable() {
        let r = evenset_report(NsFamily::m(2), None).unwrap();
        assert_eq!(r.verdict, "precondition_unsatisfiable");
    }
}
