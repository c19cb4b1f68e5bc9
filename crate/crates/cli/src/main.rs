//! Command line front end. Every subcommand prints deterministic output:
//! JSON reports by default (`--format text` for summaries), GAP/Magma text
//! for group exports, DOT for graphs. Exit codes: 0 success, 1 failed
//! verification or no result, 2 malformed input or usage, 3 internal
//! assertion failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use singer_core::catalog;
use singer_core::gf::make_field;
use singer_core::grouppres::{
    export, extend_by_p, extend_by_ps, gamma_t, rhombus_presentation, singer_lattice,
    ExportFormat, GroupPres,
};
use singer_core::linkcheck::{build_link, edge_triangle_count, matches_incidence_graph};
use singer_core::pds::{
    enumerate_pds_fixed_by_q, find_transformation, halberstam_laxton_pds, multiplier_report,
    singer_trace_pds, verify_pds, DiffSet,
};
use singer_core::pipeline;
use singer_core::plane::{build_plane, check_axioms, incidence_graph};
use singer_core::tripres::{
    brute_force_all, construct, enumerate_variants, equivalent, orbit_decompose, verify, Alpha,
    MChoice, TrianglePres,
};
use singer_core::Error;

#[derive(Parser)]
#[command(
    name = "singer",
    version,
    about = "Difference sets, triangle presentations, and their group presentations"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Args)]
struct FormatArg {
    /// Output style for reports
    #[arg(long, value_enum, default_value = "json")]
    format: ReportFormat,
}

#[derive(Subcommand)]
enum Cmd {
    /// Finite field contexts
    Gf {
        #[command(subcommand)]
        cmd: GfCmd,
    },
    /// Perfect difference sets
    Pds {
        #[command(subcommand)]
        cmd: PdsCmd,
    },
    /// The cyclic projective plane of a set
    Plane {
        #[command(subcommand)]
        cmd: PlaneCmd,
    },
    /// Triangle presentations
    Tripres {
        #[command(subcommand)]
        cmd: TripresCmd,
    },
    /// Group presentations read off a triangle presentation
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Vertex links of the presentation complex
    Link {
        #[command(subcommand)]
        cmd: LinkCmd,
    },
    /// Re-derive every row of the bundled reference table
    ReproduceTable {
        #[command(flatten)]
        format: FormatArg,
    },
    /// Run the full chain for one order and write an artifact bundle
    Pipeline {
        #[arg(long)]
        q: u64,
        /// Output directory for the bundle
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        format: FormatArg,
    },
}

#[derive(Subcommand)]
enum GfCmd {
    /// Build a field context and print it with its trace-zero exponents
    Info {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        /// Monic modulus coefficients, low degree first (searched if absent)
        #[arg(long)]
        modulus: Option<String>,
        #[command(flatten)]
        format: FormatArg,
    },
}

#[derive(Subcommand)]
enum PdsCmd {
    /// Generate the set of order q by one of the two constructions
    Gen {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "trace")]
        method: GenMethod,
    },
    /// Check the difference set axioms for a candidate
    Verify {
        #[arg(long)]
        set: String,
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        format: FormatArg,
    },
    /// All multipliers of a set, with their shifts
    Multipliers {
        #[arg(long)]
        set: String,
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Enumerate every set of order q fixed by multiplication by q
    EnumFixed {
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Find the unit multiple and shift taking one set to another
    Transform {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        format: FormatArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenMethod {
    Trace,
    Span,
}

#[derive(Subcommand)]
enum PlaneCmd {
    /// Build the plane of a set and check the plane axioms
    Check {
        #[arg(long)]
        set: String,
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Write the incidence graph in DOT format
    Graph {
        #[arg(long)]
        set: String,
        #[arg(long)]
        q: u64,
        /// Destination file (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum TripresCmd {
    /// Construct the presentation of a set for a multiplier choice
    Build {
        #[arg(long)]
        set: String,
        #[arg(long)]
        q: u64,
        /// q, q2, or a 0/1 mask with one bit per 3-orbit (1 picks q^2)
        #[arg(long, default_value = "q")]
        m: String,
    },
    /// Re-verify a stored presentation file
    Verify {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        format: FormatArg,
    },
    /// All presentations of a set across multiplier choices
    Variants {
        #[arg(long)]
        set: String,
    },
    /// Exhaustive search over all presentations for the standard
    /// correspondence of order q (q <= 3)
    All {
        #[arg(long)]
        q: u64,
    },
    /// Decide equivalence of two stored presentations
    Equiv {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[command(flatten)]
        format: FormatArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupKind {
    #[value(name = "gammaT")]
    GammaT,
    #[value(name = "gammaTp")]
    GammaTp,
    Tilde,
    Singer,
    Rhombus,
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Build one of the group presentations from a stored triangle
    /// presentation and print it
    Emit {
        #[arg(long, value_enum)]
        kind: GroupKind,
        /// Triangle presentation file
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "gap")]
        format: String,
    },
}

#[derive(Subcommand)]
enum LinkCmd {
    /// Build the vertex link of a stored presentation and check it
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also write the link graph in DOT format
        #[arg(long)]
        dot: Option<PathBuf>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Enumerate the six-cycles of the link
    Cycles {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        count_only: bool,
    },
}

fn parse_csv(text: &str) -> Result<Vec<u64>, Error> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| Error::BadInput(format!("not a number: {part:?}")))
        })
        .collect()
}

fn parse_m(text: &str, orbit_count: usize) -> Result<MChoice, Error> {
    match text {
        "q" => Ok(MChoice::AllQ),
        "q2" => Ok(MChoice::AllQSq),
        mask => {
            let bits: Result<Vec<bool>, Error> = mask
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::BadInput(format!(
                        "multiplier choice must be q, q2, or a 0/1 mask, got {text:?}"
                    ))),
                })
                .collect();
            let bits = bits?;
            if bits.len() != orbit_count {
                return Err(Error::BadInput(format!(
                    "mask length {} does not match the {} orbits",
                    bits.len(),
                    orbit_count
                )));
            }
            Ok(MChoice::Mask(bits))
        }
    }
}

fn read_tripres(path: &PathBuf) -> Result<TrianglePres, Error> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Error> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

/// Commands return whether every check they ran passed.
fn run(cli: Cli) -> Result<bool, Error> {
    match cli.cmd {
        Cmd::Gf { cmd } => run_gf(cmd),
        Cmd::Pds { cmd } => run_pds(cmd),
        Cmd::Plane { cmd } => run_plane(cmd),
        Cmd::Tripres { cmd } => run_tripres(cmd),
        Cmd::Group { cmd } => run_group(cmd),
        Cmd::Link { cmd } => run_link(cmd),
        Cmd::ReproduceTable { format } => {
            let outcomes = catalog::reproduce_table();
            let ok = outcomes.iter().all(|o| o.ok);
            match format.format {
                ReportFormat::Json => print_json(&outcomes)?,
                ReportFormat::Text => {
                    for o in &outcomes {
                        let mark = if o.ok { "pass" } else { "FAIL" };
                        println!("q = {:>2}: {mark} ({})", o.q, o.detail);
                    }
                }
            }
            Ok(ok)
        }
        Cmd::Pipeline { q, out, format } => {
            let report = pipeline::run(q, &out)?;
            let ok = pipeline::report_ok(&report);
            match format.format {
                ReportFormat::Json => print_json(&report)?,
                ReportFormat::Text => {
                    println!(
                        "q = {}: v = {}, f = {}, t = {}, {} presentation variants",
                        report.q, report.v, report.f, report.t, report.variant_count
                    );
                    println!(
                        "verified = {}, link ok = {}, wrote {} files to {}",
                        report.all_variants_verified,
                        report.link_biregular
                            && report.link_girth == Some(6)
                            && report.link_matches_incidence,
                        report.files.len(),
                        out.display()
                    );
                }
            }
            Ok(ok)
        }
    }
}

fn run_gf(cmd: GfCmd) -> Result<bool, Error> {
    match cmd {
        GfCmd::Info {
            p,
            n,
            modulus,
            format,
        } => {
            let modulus = modulus.as_deref().map(parse_csv).transpose()?;
            let ctx = make_field(p, n, modulus.as_deref())?;
            let trace_zero = singer_trace_pds(&ctx)?;
            #[derive(Serialize)]
            struct Info<'a> {
                field: &'a singer_core::gf::FieldCtx,
                q: u64,
                v: u64,
                trace_zero_exponents: &'a [u64],
            }
            let info = Info {
                field: &ctx,
                q: ctx.q(),
                v: ctx.v(),
                trace_zero_exponents: trace_zero.elems(),
            };
            match format.format {
                ReportFormat::Json => print_json(&info)?,
                ReportFormat::Text => {
                    println!("GF({}^{}) inside GF({}^{})", p, n, p, 3 * n);
                    println!("q = {}, v = {}", ctx.q(), ctx.v());
                    println!("trace-zero exponents mod v: {:?}", trace_zero.elems());
                }
            }
            Ok(true)
        }
    }
}

fn run_pds(cmd: PdsCmd) -> Result<bool, Error> {
    match cmd {
        PdsCmd::Gen { q, method } => {
            let (p, n) = singer_core::gf::prime_power(q).ok_or(Error::NotPrimePower(q))?;
            let ctx = make_field(p, n, None)?;
            let d = match method {
                GenMethod::Trace => singer_trace_pds(&ctx)?,
                GenMethod::Span => halberstam_laxton_pds(&ctx)?,
            };
            print_json(&d)?;
            Ok(true)
        }
        PdsCmd::Verify { set, q, format } => {
            let cand = parse_csv(&set)?;
            let check = verify_pds(&cand, q);
            match format.format {
                ReportFormat::Json => print_json(&check)?,
                ReportFormat::Text => {
                    if check.ok {
                        println!("valid difference set of order {q}");
                    } else {
                        println!(
                            "not a difference set: {} missing, {} duplicated",
                            check.missing.len(),
                            check.duplicated.len()
                        );
                    }
                }
            }
            Ok(check.ok)
        }
        PdsCmd::Multipliers { set, q, format } => {
            let d = DiffSet::new(q, &parse_csv(&set)?)?;
            let report = multiplier_report(&d)?;
            match format.format {
                ReportFormat::Json => print_json(&report)?,
                ReportFormat::Text => {
                    println!("multipliers (m, shift): {:?}", report.multipliers);
                    println!("fixed by: {:?}", report.fixed_by);
                }
            }
            Ok(true)
        }
        PdsCmd::EnumFixed { q, format } => {
            let sets = enumerate_pds_fixed_by_q(q)?;
            match format.format {
                ReportFormat::Json => print_json(&sets)?,
                ReportFormat::Text => {
                    for d in &sets {
                        println!("{:?}", d.elems());
                    }
                    println!("{} sets of order {q} fixed by {q}", sets.len());
                }
            }
            Ok(true)
        }
        PdsCmd::Transform {
            from,
            to,
            q,
            format,
        } => {
            let d1 = DiffSet::new(q, &parse_csv(&from)?)?;
            let d2 = DiffSet::new(q, &parse_csv(&to)?)?;
            let (u, s) = find_transformation(&d1, &d2)?;
            match format.format {
                ReportFormat::Json => print_json(&serde_json::json!({ "u": u, "s": s }))?,
                ReportFormat::Text => println!("u = {u}, s = {s} (u*D + s)"),
            }
            Ok(true)
        }
    }
}

fn run_plane(cmd: PlaneCmd) -> Result<bool, Error> {
    match cmd {
        PlaneCmd::Check { set, q, format } => {
            let d = DiffSet::new(q, &parse_csv(&set)?)?;
            let plane = build_plane(&d)?;
            let axioms = check_axioms(&plane)?;
            match format.format {
                ReportFormat::Json => print_json(&axioms)?,
                ReportFormat::Text => println!(
                    "plane of order {}: {} points, quadrilateral {:?}",
                    axioms.q, axioms.v, axioms.quadrilateral
                ),
            }
            Ok(true)
        }
        PlaneCmd::Graph { set, q, out } => {
            let d = DiffSet::new(q, &parse_csv(&set)?)?;
            let plane = build_plane(&d)?;
            let dot = incidence_graph(&plane).to_dot();
            match out {
                Some(path) => fs::write(path, dot)?,
                None => print!("{dot}"),
            }
            Ok(true)
        }
    }
}

fn run_tripres(cmd: TripresCmd) -> Result<bool, Error> {
    match cmd {
        TripresCmd::Build { set, q, m } => {
            let d = DiffSet::new(q, &parse_csv(&set)?)?;
            let dec = orbit_decompose(&d)?;
            let choice = parse_m(&m, dec.t())?;
            if choice.is_mixed(dec.t()) {
                eprintln!(
                    "warning: mixing multipliers across orbits can leave the \
                     arithmetic class of the standard construction"
                );
            }
            let t = construct(&d, &choice)?;
            print_json(&t)?;
            Ok(true)
        }
        TripresCmd::Verify { file, format } => {
            // parsing re-runs the full verification
            let t = read_tripres(&file)?;
            let report = verify(&t.full(), t.alpha())?;
            match format.format {
                ReportFormat::Json => print_json(&report)?,
                ReportFormat::Text => println!(
                    "order {}: {} classes, {} triples, ok = {}",
                    t.q(),
                    t.classes().len(),
                    report.triple_count,
                    report.ok
                ),
            }
            Ok(report.ok)
        }
        TripresCmd::Variants { set } => {
            let elems = parse_csv(&set)?;
            if elems.is_empty() {
                return Err(Error::BadInput("empty set".into()));
            }
            let d = DiffSet::new(elems.len() as u64 - 1, &elems)?;
            let variants = enumerate_variants(&d)?;
            print_json(&variants)?;
            Ok(true)
        }
        TripresCmd::All { q } => {
            let (p, n) = singer_core::gf::prime_power(q).ok_or(Error::NotPrimePower(q))?;
            let ctx = make_field(p, n, None)?;
            let d = singer_trace_pds(&ctx)?;
            let plane = build_plane(&d)?;
            let alpha = Alpha::identity(plane);
            let found = brute_force_all(&alpha)?;
            print_json(&found)?;
            Ok(true)
        }
        TripresCmd::Equiv { a, b, format } => {
            let t1 = read_tripres(&a)?;
            let t2 = read_tripres(&b)?;
            match equivalent(&t1, &t2) {
                Ok(witness) => {
                    match format.format {
                        ReportFormat::Json => print_json(&witness)?,
                        ReportFormat::Text => println!("equivalent: {witness:?}"),
                    }
                    Ok(true)
                }
                Err(Error::NotRelated) => {
                    match format.format {
                        ReportFormat::Json => {
                            print_json(&serde_json::json!({ "equivalent": false }))?
                        }
                        ReportFormat::Text => println!("not equivalent"),
                    }
                    Ok(false)
                }
                Err(e) => Err(e),
            }
        }
    }
}

fn run_group(cmd: GroupCmd) -> Result<bool, Error> {
    match cmd {
        GroupCmd::Emit {
            kind,
            input,
            format,
        } => {
            let t = read_tripres(&input)?;
            let pres: GroupPres = match kind {
                GroupKind::GammaT => gamma_t(&t),
                GroupKind::GammaTp => extend_by_p(&t)?,
                GroupKind::Tilde => extend_by_ps(&t)?,
                GroupKind::Singer => singer_lattice(t.alpha().plane().base()),
                GroupKind::Rhombus => rhombus_presentation(&t)?,
            };
            let format = ExportFormat::from_name(&format)?;
            print!("{}", export(&pres, format)?);
            Ok(true)
        }
    }
}

fn run_link(cmd: LinkCmd) -> Result<bool, Error> {
    match cmd {
        LinkCmd::Check { input, dot, format } => {
            let t = read_tripres(&input)?;
            let link = build_link(&t);
            let degree = (t.q() + 1) as usize;
            #[derive(Serialize)]
            struct LinkReport {
                q: u64,
                v: u64,
                biregular: bool,
                girth: Option<usize>,
                matches_incidence: bool,
                edge_triangle_counts_ok: bool,
            }
            let report = LinkReport {
                q: t.q(),
                v: t.v(),
                biregular: link.graph().is_biregular(degree),
                girth: link.graph().girth(),
                matches_incidence: matches_incidence_graph(&link, &t),
                edge_triangle_counts_ok: (0..t.v())
                    .all(|i| edge_triangle_count(&t, i) == degree),
            };
            if let Some(path) = dot {
                fs::write(path, link.graph().to_dot())?;
            }
            let ok = report.biregular
                && report.girth == Some(6)
                && report.matches_incidence
                && report.edge_triangle_counts_ok;
            match format.format {
                ReportFormat::Json => print_json(&report)?,
                ReportFormat::Text => println!(
                    "link of order {}: biregular = {}, girth = {:?}, incidence match = {}",
                    report.q, report.biregular, report.girth, report.matches_incidence
                ),
            }
            Ok(ok)
        }
        LinkCmd::Cycles { input, count_only } => {
            let t = read_tripres(&input)?;
            let link = build_link(&t);
            let cycles = singer_core::linkcheck::six_cycles(&link);
            if count_only {
                println!("{}", cycles.len());
            } else {
                print_json(&cycles)?;
            }
            Ok(true)
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Internal(_) => 3,
        Error::NonPrime(_)
        | Error::NotPrimePower(_)
        | Error::ReducibleModulus { .. }
        | Error::WrongDegree { .. }
        | Error::TooLarge(_)
        | Error::UnsupportedFormat(_)
        | Error::BadInput(_)
        | Error::Io(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    // die like cat does when stdout is a closed pipe instead of panicking
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
