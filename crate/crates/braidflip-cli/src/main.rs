//! Command-line front end: parse braid description files (or use a built-in
//! example), extract certified Delaunay flip sequences, compose the braid
//! invariant operator, and emit deterministic reports.
//!
//! Exit codes: 0 success; 2 usage, file, or parse problems; 3 degenerate or
//! non-generic braids; 4 numeric failures (identity gates or transport gates
//! violated, operator assembly inconsistencies).

mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use braidflip::{
    analyze_braid, eigen_multiplicity, eigenvalue_clusters, enumerate_colorings,
    euclidean_edge_lengths, extract_flip_sequence, initial_triangulation, orthogonality_suite,
    pentagon_suite_exhaustive, pentagon_suite_random, ptolemy_propagate, Coloring, Error,
    FlipEvent, IdentityReport, PentagonTuple, PerturbedTuple, RecouplingParams, RecouplingTuple,
    StrandSystem, EIGEN_CLUSTER_TOL, EIGEN_RANK_TOL,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use input::BraidDescription;
use report::{
    tolerances, tool_info, ClusterReport, ColoringReport, EdgeLength, EventReport,
    IdentitySuites, InputInfo, OperatorReport, Parameters, PtolemyReport, RefineStep, RunReport,
    SpectrumReport, SuiteReport, VerifyLevel, VerifyReport, ORTHOGONALITY_GATE, PENTAGON_GATE,
    PTOLEMY_ROUNDTRIP_GATE,
};

/// Pentagon scans are exhaustive up to this many labels per slot (9 slots);
/// beyond it the suite samples randomly with a per-level deterministic seed.
const EXHAUSTIVE_PENTAGON_LABELS: usize = 5;

/// Random pentagon sample count used when the exhaustive scan is infeasible.
const DEFAULT_PENTAGON_SAMPLES: usize = 10_000;

#[derive(Parser)]
#[command(
    name = "braidflip",
    version,
    about = "Braid invariants from Delaunay flip sequences of moving planar points"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline: events, coloring bases, flip operators, the
    /// composed invariant operator, and its spectrum.
    Invariant(InvariantArgs),
    /// Check the orthogonality and pentagon identities over a range of
    /// levels r.
    Verify(VerifyArgs),
    /// Extract and print the certified flip-event sequence.
    Events(EventsArgs),
    /// Write the canonical description file of a built-in example braid.
    Describe(DescribeArgs),
    /// Dump the q-6j coefficient table at a level as structured text.
    Tables(TablesArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Braid description file (JSON; see the README for the schema).
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
    /// Built-in example braid.
    #[arg(long, value_enum, value_name = "NAME")]
    example: Option<ExampleName>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExampleName {
    /// Five strands: an orbiting satellite inside a static triangle.
    Paper,
    /// The same orbit traversed twice (the square of `paper`).
    PaperDoubled,
    /// Two far-apart five-point clusters with commuting interior flips.
    TwoCluster,
}

impl ExampleName {
    fn name(self) -> &'static str {
        match self {
            ExampleName::Paper => "paper",
            ExampleName::PaperDoubled => "paper-doubled",
            ExampleName::TwoCluster => "two-cluster",
        }
    }

    fn comment(self) -> &'static str {
        match self {
            ExampleName::Paper => {
                "Static centre with a satellite orbiting at radius 1/3 over one turn, \
                 inside the static triangle (-1/2, sqrt(3)/2), (-1/2, -sqrt(3)/2), (1, 0)."
            }
            ExampleName::PaperDoubled => {
                "The `paper` braid traversed twice; its operator is the square of the \
                 single-turn operator."
            }
            ExampleName::TwoCluster => {
                "Two translated copies of the five-point orbit with offset phases; \
                 flips inside one cluster act on quads disjoint from the other's."
            }
        }
    }

    fn build(self) -> braidflip::Result<StrandSystem> {
        match self {
            ExampleName::Paper => braidflip::fixtures::five_point_orbit(1.0 / 3.0, 1),
            ExampleName::PaperDoubled => braidflip::fixtures::five_point_orbit(1.0 / 3.0, 2),
            ExampleName::TwoCluster => braidflip::fixtures::two_cluster_orbits(),
        }
    }
}

#[derive(Args)]
struct InvariantArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Recoupling level (labels run over 0..=r-2); requires r >= 3.
    #[arg(long, default_value_t = 4)]
    r: usize,
    /// Which pentagon tuple drives the per-flip transport.
    #[arg(long, value_enum, default_value_t = TupleKind::Recoupling)]
    tuple: TupleKind,
    /// Initial uniform time samples for event extraction.
    #[arg(long, default_value_t = 512)]
    samples: usize,
    /// Bracket width each flip event is bisected down to.
    #[arg(long = "time-tol", default_value_t = 1e-9)]
    time_tol: f64,
    /// Include the full operator matrix (row-major) and the coloring basis
    /// in the JSON report.
    #[arg(long)]
    dump_matrix: bool,
    /// Seed labels for the ptolemy tuple.
    #[arg(long = "seed-lengths", value_enum, default_value_t = SeedKind::Euclidean)]
    seed_lengths: SeedKind,
    /// Write the full JSON report here.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TupleKind {
    /// q-6j symbols at level r (finite coloring bases, invariant operator).
    Recoupling,
    /// Deterministic edge-length transport by the cyclic-quadrilateral rule.
    Ptolemy,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeedKind {
    /// Euclidean edge lengths of the initial triangulation at t = 0.
    Euclidean,
}

#[derive(Args)]
struct VerifyArgs {
    /// Smallest level checked.
    #[arg(long = "r-min", default_value_t = 3)]
    r_min: usize,
    /// Largest level checked.
    #[arg(long = "r-max", default_value_t = 6)]
    r_max: usize,
    /// Random pentagon samples per level when the exhaustive scan is
    /// infeasible (labels > 5 per slot).
    #[arg(long = "pentagon-samples", default_value_t = DEFAULT_PENTAGON_SAMPLES)]
    pentagon_samples: usize,
    /// Test hook: perturb one 6j evaluation path by this amount; the suites
    /// must then fail with a located counterexample.
    #[arg(long, hide = true, value_name = "EPS")]
    perturb: Option<f64>,
    /// Write the full JSON report here.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct EventsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Initial uniform time samples for event extraction.
    #[arg(long, default_value_t = 512)]
    samples: usize,
    /// Bracket width each flip event is bisected down to.
    #[arg(long = "time-tol", default_value_t = 1e-9)]
    time_tol: f64,
    /// Re-extract with doubled sampling this many times and require the
    /// event sequence to be stable.
    #[arg(long, default_value_t = 0)]
    refine: usize,
    /// Write the full JSON report here.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct DescribeArgs {
    /// Built-in example braid to serialize.
    #[arg(long, value_enum, value_name = "NAME")]
    example: ExampleName,
    /// Output path; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TablesArgs {
    /// Recoupling level; requires r >= 3.
    #[arg(long, default_value_t = 4)]
    r: usize,
}

/// A failure carrying the exit code its class mandates.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }

    fn numeric(message: impl Into<String>) -> Failure {
        Failure { code: 4, message: message.into() }
    }
}

const GENERICITY_HINT: &str = "hint: the braid is not generic at this tolerance; perturb the \
     configuration slightly (for example move one point by 1e-6) or increase --samples so each \
     bracket isolates a single flip";

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match &e {
            Error::InvalidStrandSystem { .. } => 2,
            Error::DegenerateConfiguration { .. } | Error::NonGenericBraid { .. } => 3,
            _ => 4,
        };
        let mut message = e.to_string();
        if code == 3 {
            message.push('\n');
            message.push_str(GENERICITY_HINT);
        }
        Failure { code, message }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Invariant(args) => cmd_invariant(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Events(args) => cmd_events(args),
        Command::Describe(args) => cmd_describe(args),
        Command::Tables(args) => cmd_tables(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing.

impl InputArgs {
    /// Load the braid: `(source, name, system)`.
    fn load(&self) -> Result<(String, String, StrandSystem), Failure> {
        if let Some(example) = self.example {
            let system = example.build()?;
            return Ok((
                format!("example:{}", example.name()),
                example.name().to_string(),
                system,
            ));
        }
        let path = self.file.as_ref().expect("clap guarantees one input source");
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        let desc = BraidDescription::parse(&text)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        let system = desc.to_system()?;
        Ok((format!("file:{}", path.display()), desc.name, system))
    }
}

fn validate_level(r: usize) -> Result<(), Failure> {
    if r < 3 {
        return Err(Failure::usage(format!("--r must be at least 3, got {r}")));
    }
    if r - 1 > u8::MAX as usize + 1 {
        return Err(Failure::usage(format!("--r {r} is too large (labels exceed 8 bits)")));
    }
    Ok(())
}

fn validate_samples(samples: usize) -> Result<(), Failure> {
    if samples < 2 {
        return Err(Failure::usage(format!("--samples must be at least 2, got {samples}")));
    }
    Ok(())
}

fn write_json_file(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    println!("report written to {}", path.display());
    Ok(())
}

fn print_event_listing(events: &[FlipEvent]) {
    println!("{} flip event(s)", events.len());
    for (k, ev) in events.iter().enumerate() {
        println!(
            "  {:>3}. t in [{:.9}, {:.9}]  remove ({},{})  insert ({},{})  \
             quad ({},{})-({},{})-({},{})-({},{})",
            k + 1,
            ev.t_lo,
            ev.t_hi,
            ev.removed.lo(),
            ev.removed.hi(),
            ev.inserted.lo(),
            ev.inserted.hi(),
            ev.quad[0].lo(),
            ev.quad[0].hi(),
            ev.quad[1].lo(),
            ev.quad[1].hi(),
            ev.quad[2].lo(),
            ev.quad[2].hi(),
            ev.quad[3].lo(),
            ev.quad[3].hi(),
        );
    }
}

fn event_reports(events: &[FlipEvent]) -> Vec<EventReport> {
    events
        .iter()
        .enumerate()
        .map(|(k, ev)| EventReport::from_event(k, ev))
        .collect()
}

/// Run both identity suites for one level; pentagon mode depends on the
/// label count.
fn run_identity_suites<T>(
    tuple: &T,
    r: usize,
    pentagon_samples: usize,
) -> Result<(IdentityReport, IdentityReport, &'static str), Failure>
where
    T: PentagonTuple,
{
    let orthogonality = orthogonality_suite(tuple)?;
    let (pentagon, mode) = if r - 1 <= EXHAUSTIVE_PENTAGON_LABELS {
        (pentagon_suite_exhaustive(tuple)?, "exhaustive")
    } else {
        let seed = 0x5EED_0000u64 + r as u64;
        (pentagon_suite_random(tuple, pentagon_samples, seed)?, "random")
    };
    Ok((orthogonality, pentagon, mode))
}

fn print_suite_line(r: usize, name: &str, mode: &str, suite: &SuiteReport) {
    println!(
        "  r = {r}: {name} ({mode}): worst deviation {:.3e} over {} tuples (gate {:.1e}): {}",
        suite.worst_deviation,
        suite.checked,
        suite.gate,
        if suite.pass { "pass" } else { "FAIL" },
    );
}

// ---------------------------------------------------------------------------
// invariant

fn cmd_invariant(args: InvariantArgs) -> Result<(), Failure> {
    validate_samples(args.samples)?;
    let (source, name, system) = args.input.load()?;
    println!("braid '{name}' ({} strands) from {source}", system.n());
    match args.tuple {
        TupleKind::Recoupling => invariant_recoupling(&args, &source, &name, &system),
        TupleKind::Ptolemy => invariant_ptolemy(&args, &source, &name, &system),
    }
}

fn invariant_recoupling(
    args: &InvariantArgs,
    source: &str,
    name: &str,
    system: &StrandSystem,
) -> Result<(), Failure> {
    validate_level(args.r)?;
    println!(
        "tuple: recoupling at level r = {} (labels 0..={}); {} samples, time tolerance {:.1e}",
        args.r,
        args.r - 2,
        args.samples,
        args.time_tol
    );
    let tuple = RecouplingTuple::new(RecouplingParams::new(args.r));
    let analysis = analyze_braid(system, &tuple, args.samples, args.time_tol)?;
    print_event_listing(&analysis.events);

    // Per-triangulation coloring dimensions along the chain.
    let mut tri = initial_triangulation(system, args.samples)?;
    let mut dims = vec![enumerate_colorings(&tri, &tuple)?.dim()];
    for ev in &analysis.events {
        tri = tri.apply_flip(ev.removed, ev.inserted)?;
        dims.push(enumerate_colorings(&tri, &tuple)?.dim());
    }
    println!(
        "coloring dimension: {} (constant across {} triangulations)",
        analysis.basis.dim(),
        dims.len()
    );

    let dim = analysis.operator.dim();
    let max_dev = analysis.operator.max_deviation_from_identity();
    println!(
        "operator: {dim} x {dim} from {} flip(s); max |A - I| = {:.6e}",
        analysis.events.len(),
        max_dev
    );

    let clusters = eigenvalue_clusters(&analysis.operator, EIGEN_CLUSTER_TOL)?;
    let m_minus = eigen_multiplicity(&analysis.operator, -1.0, EIGEN_RANK_TOL);
    let m_plus = eigen_multiplicity(&analysis.operator, 1.0, EIGEN_RANK_TOL);
    println!("spectrum: {} cluster(s)", clusters.len());
    for (rep, count) in &clusters {
        println!("  {:+.9} {:+.9}i  multiplicity {count}", rep.re, rep.im);
    }
    println!("eigenspace dimensions: lambda = -1 -> {m_minus}, lambda = +1 -> {m_plus}");

    let (orth, pent, pent_mode) = run_identity_suites(&tuple, args.r, DEFAULT_PENTAGON_SAMPLES)?;
    let orth_suite = SuiteReport::new("exhaustive", &orth, ORTHOGONALITY_GATE);
    let pent_suite = SuiteReport::new(pent_mode, &pent, PENTAGON_GATE);
    print_suite_line(args.r, "orthogonality", "exhaustive", &orth_suite);
    print_suite_line(args.r, "pentagon", pent_mode, &pent_suite);
    let gates_pass = orth_suite.pass && pent_suite.pass;

    let report = RunReport {
        tool: tool_info(),
        command: "invariant".to_string(),
        input: InputInfo {
            source: source.to_string(),
            name: name.to_string(),
            strand_count: system.n(),
        },
        parameters: Parameters {
            tuple: "recoupling".to_string(),
            r: Some(args.r),
            samples: args.samples,
            time_tolerance: args.time_tol,
            seed_lengths: None,
            dump_matrix: args.dump_matrix,
        },
        tolerances: tolerances(),
        events: event_reports(&analysis.events),
        coloring: Some(ColoringReport {
            dimension: analysis.basis.dim(),
            per_triangulation: dims,
        }),
        operator: Some(OperatorReport {
            dim,
            event_count: analysis.operator.event_count(),
            max_deviation_from_identity: max_dev,
            matrix_row_major: args.dump_matrix.then(|| {
                let m = analysis.operator.matrix();
                (0..dim).flat_map(|r| (0..dim).map(move |c| m[(r, c)])).collect()
            }),
            basis_edge_order: args.dump_matrix.then(|| {
                analysis.basis.edge_order().iter().map(|e| [e.lo(), e.hi()]).collect()
            }),
            basis_rows: args.dump_matrix.then(|| {
                (0..dim).map(|k| analysis.basis.label_row(k).to_vec()).collect()
            }),
        }),
        spectrum: Some(SpectrumReport {
            clusters: clusters
                .iter()
                .map(|(rep, count)| ClusterReport { re: rep.re, im: rep.im, multiplicity: *count })
                .collect(),
            multiplicity_at_minus_one: m_minus,
            multiplicity_at_plus_one: m_plus,
        }),
        identity_suites: Some(IdentitySuites {
            orthogonality: orth_suite,
            pentagon: pent_suite,
        }),
        ptolemy: None,
        refinement: None,
    };
    if let Some(path) = &args.json {
        write_json_file(path, &report::to_json(&report))?;
    }
    if !gates_pass {
        return Err(Failure::numeric(format!(
            "identity gates violated at r = {}: orthogonality worst {:.3e} (gate {:.1e}), \
             pentagon worst {:.3e} (gate {:.1e}); worst cases {} / {}",
            args.r, orth.worst_dev, ORTHOGONALITY_GATE, pent.worst_dev, PENTAGON_GATE,
            orth.worst_case, pent.worst_case
        )));
    }
    Ok(())
}

fn coloring_to_edge_lengths(labels: &Coloring<f64>) -> Vec<EdgeLength> {
    labels
        .assignment()
        .iter()
        .map(|(e, &v)| EdgeLength { edge: [e.lo(), e.hi()], length: v })
        .collect()
}

fn invariant_ptolemy(
    args: &InvariantArgs,
    source: &str,
    name: &str,
    system: &StrandSystem,
) -> Result<(), Failure> {
    let SeedKind::Euclidean = args.seed_lengths;
    println!(
        "tuple: ptolemy with euclidean seed lengths; {} samples, time tolerance {:.1e}",
        args.samples, args.time_tol
    );
    let events = extract_flip_sequence(system, args.samples, args.time_tol)?;
    print_event_listing(&events);

    let tri0 = initial_triangulation(system, args.samples)?;
    let points0 = system.position_at(0.0)?;
    let seed = euclidean_edge_lengths(&tri0, &points0);
    let final_labels = ptolemy_propagate(&seed, &events)?;
    let back_events: Vec<FlipEvent> = events.iter().rev().map(FlipEvent::inverse).collect();
    let recovered = ptolemy_propagate(&final_labels, &back_events)?;

    let mut residual = 0.0f64;
    for (e, &want) in seed.assignment() {
        let got = recovered
            .label(*e)
            .ok_or_else(|| Failure::numeric(format!("edge ({},{}) lost in transport", e.lo(), e.hi())))?;
        residual = residual.max((got - want).abs() / want.abs().max(1.0));
    }
    let pass = residual <= PTOLEMY_ROUNDTRIP_GATE;

    println!("initial edge lengths at t = 0:");
    for EdgeLength { edge, length } in coloring_to_edge_lengths(&seed) {
        println!("  ({},{}) = {:.12}", edge[0], edge[1], length);
    }
    println!("final labels after {} flip(s):", events.len());
    for EdgeLength { edge, length } in coloring_to_edge_lengths(&final_labels) {
        println!("  ({},{}) = {:.12}", edge[0], edge[1], length);
    }
    println!(
        "forward-then-inverse residual: {:.3e} (gate {:.1e}): {}",
        residual,
        PTOLEMY_ROUNDTRIP_GATE,
        if pass { "pass" } else { "FAIL" }
    );

    let report = RunReport {
        tool: tool_info(),
        command: "invariant".to_string(),
        input: InputInfo {
            source: source.to_string(),
            name: name.to_string(),
            strand_count: system.n(),
        },
        parameters: Parameters {
            tuple: "ptolemy".to_string(),
            r: None,
            samples: args.samples,
            time_tolerance: args.time_tol,
            seed_lengths: Some("euclidean".to_string()),
            dump_matrix: args.dump_matrix,
        },
        tolerances: tolerances(),
        events: event_reports(&events),
        coloring: None,
        operator: None,
        spectrum: None,
        identity_suites: None,
        ptolemy: Some(PtolemyReport {
            initial: coloring_to_edge_lengths(&seed),
            final_labels: coloring_to_edge_lengths(&final_labels),
            roundtrip_residual: residual,
            gate: PTOLEMY_ROUNDTRIP_GATE,
            pass,
        }),
        refinement: None,
    };
    if let Some(path) = &args.json {
        write_json_file(path, &report::to_json(&report))?;
    }
    if !pass {
        return Err(Failure::numeric(format!(
            "ptolemy transport is not invertible within {:.1e} (residual {:.3e})",
            PTOLEMY_ROUNDTRIP_GATE, residual
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// verify

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    validate_level(args.r_min)?;
    validate_level(args.r_max)?;
    if args.r_min > args.r_max {
        return Err(Failure::usage(format!(
            "--r-min {} exceeds --r-max {}",
            args.r_min, args.r_max
        )));
    }
    if let Some(eps) = args.perturb {
        println!("checking identities for r in {}..={} with one 6j value perturbed by {eps:e}", args.r_min, args.r_max);
    } else {
        println!("checking identities for r in {}..={}", args.r_min, args.r_max);
    }

    let mut levels = Vec::new();
    let mut failures: Vec<String> = Vec::new();
    for r in args.r_min..=args.r_max {
        let base = RecouplingTuple::new(RecouplingParams::new(r));
        let (orth, pent, mode) = match args.perturb {
            None => run_identity_suites(&base, r, args.pentagon_samples)?,
            Some(eps) => {
                let tampered = PerturbedTuple::new(base, eps);
                run_identity_suites(&tampered, r, args.pentagon_samples)?
            }
        };
        let orth_suite = SuiteReport::new("exhaustive", &orth, ORTHOGONALITY_GATE);
        let pent_suite = SuiteReport::new(mode, &pent, PENTAGON_GATE);
        print_suite_line(r, "orthogonality", "exhaustive", &orth_suite);
        print_suite_line(r, "pentagon", mode, &pent_suite);
        if !orth_suite.pass {
            failures.push(format!(
                "r = {r} orthogonality: deviation {:.3e} at {}",
                orth.worst_dev, orth.worst_case
            ));
        }
        if !pent_suite.pass {
            failures.push(format!(
                "r = {r} pentagon: deviation {:.3e} at {}",
                pent.worst_dev, pent.worst_case
            ));
        }
        levels.push(VerifyLevel { r, orthogonality: orth_suite, pentagon: pent_suite });
    }

    let all_pass = failures.is_empty();
    let report = VerifyReport {
        tool: tool_info(),
        command: "verify".to_string(),
        perturbation: args.perturb,
        levels,
        all_pass,
    };
    if let Some(path) = &args.json {
        write_json_file(path, &report::to_json(&report))?;
    }
    if all_pass {
        println!("verdict: all identities hold within tolerance");
        Ok(())
    } else {
        Err(Failure::numeric(format!(
            "identity violations:\n  {}",
            failures.join("\n  ")
        )))
    }
}

// ---------------------------------------------------------------------------
// events

fn cmd_events(args: EventsArgs) -> Result<(), Failure> {
    validate_samples(args.samples)?;
    let (source, name, system) = args.input.load()?;
    println!("braid '{name}' ({} strands) from {source}", system.n());
    println!("sampling: {} intervals, time tolerance {:.1e}", args.samples, args.time_tol);
    let events = extract_flip_sequence(&system, args.samples, args.time_tol)?;
    print_event_listing(&events);

    let mut steps = Vec::new();
    let mut samples = args.samples;
    for _ in 0..args.refine {
        samples = samples
            .checked_mul(2)
            .ok_or_else(|| Failure::usage("sample count overflow during refinement"))?;
        let refined = extract_flip_sequence(&system, samples, args.time_tol)?;
        let drift = sequence_drift(&events, &refined, args.time_tol).map_err(|detail| Failure {
            code: 3,
            message: format!(
                "refinement to {samples} samples changed the event sequence: {detail}\n{GENERICITY_HINT}"
            ),
        })?;
        println!(
            "refine to {samples} samples: {} event(s), max |t_mid drift| = {:.3e}: stable",
            refined.len(),
            drift
        );
        steps.push(RefineStep { samples, events: refined.len(), max_t_mid_drift: drift });
    }

    let report = RunReport {
        tool: tool_info(),
        command: "events".to_string(),
        input: InputInfo {
            source: source.clone(),
            name: name.clone(),
            strand_count: system.n(),
        },
        parameters: Parameters {
            tuple: "none".to_string(),
            r: None,
            samples: args.samples,
            time_tolerance: args.time_tol,
            seed_lengths: None,
            dump_matrix: false,
        },
        tolerances: tolerances(),
        events: event_reports(&events),
        coloring: None,
        operator: None,
        spectrum: None,
        identity_suites: None,
        ptolemy: None,
        refinement: (!steps.is_empty()).then_some(steps),
    };
    if let Some(path) = &args.json {
        write_json_file(path, &report::to_json(&report))?;
    }
    Ok(())
}

/// Compare two extractions of the same braid: the combinatorial sequences
/// must agree exactly and midpoints may drift by at most twice the bracket
/// tolerance. Returns the worst drift.
fn sequence_drift(a: &[FlipEvent], b: &[FlipEvent], time_tol: f64) -> Result<f64, String> {
    if a.len() != b.len() {
        return Err(format!("{} events became {}", a.len(), b.len()));
    }
    let mut drift = 0.0f64;
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        if x.removed != y.removed || x.inserted != y.inserted || x.quad != y.quad {
            return Err(format!(
                "event {} changed from (remove {}, insert {}) to (remove {}, insert {})",
                k + 1,
                x.removed,
                x.inserted,
                y.removed,
                y.inserted
            ));
        }
        drift = drift.max((x.t_mid() - y.t_mid()).abs());
    }
    if drift > 2.0 * time_tol {
        return Err(format!(
            "event times drifted by {drift:.3e}, beyond twice the bracket tolerance {time_tol:.1e}"
        ));
    }
    Ok(drift)
}

// ---------------------------------------------------------------------------
// describe

fn cmd_describe(args: DescribeArgs) -> Result<(), Failure> {
    let system = args.example.build()?;
    let desc = BraidDescription::from_system(
        args.example.name(),
        Some(args.example.comment()),
        &system,
    );
    let text = desc.to_json();
    match &args.out {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
            println!("description written to {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// tables

fn cmd_tables(args: TablesArgs) -> Result<(), Failure> {
    validate_level(args.r)?;
    let params = RecouplingParams::new(args.r);
    let labels = args.r - 1;
    println!("# q-6j symbols at level r = {}; labels 0..={}", args.r, labels - 1);
    println!("# columns: a b i c d j value");
    println!("# rows where the triangles (a,b,j), (c,d,j), (a,d,i), (b,c,i) are all admissible");
    for a in 0..labels {
        for b in 0..labels {
            for i in 0..labels {
                for c in 0..labels {
                    for d in 0..labels {
                        for j in 0..labels {
                            if params.admissible(a, b, j)
                                && params.admissible(c, d, j)
                                && params.admissible(a, d, i)
                                && params.admissible(b, c, i)
                            {
                                println!(
                                    "{a} {b} {i} {c} {d} {j} {:+.17e}",
                                    params.sixj(a, b, i, c, d, j)
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}
