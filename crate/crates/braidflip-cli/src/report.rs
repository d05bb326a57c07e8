//! Structured run reports. Every field is deterministic for a given input
//! and flag set — no timestamps, no absolute paths beyond what the user
//! passed, no map types with unstable iteration order — so identical runs
//! produce byte-identical JSON.

use braidflip::FlipEvent;
use serde::Serialize;

/// Acceptance thresholds used by the gates, recorded in every report.
pub const ORTHOGONALITY_GATE: f64 = 1e-9;
pub const PENTAGON_GATE: f64 = 1e-8;
pub const PTOLEMY_ROUNDTRIP_GATE: f64 = 1e-9;

#[derive(Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

pub fn tool_info() -> ToolInfo {
    ToolInfo {
        name: "braidflip",
        version: env!("CARGO_PKG_VERSION"),
    }
}

#[derive(Serialize)]
pub struct InputInfo {
    /// Where the braid came from: `example:<name>` or `file:<path>`.
    pub source: String,
    pub name: String,
    pub strand_count: usize,
}

#[derive(Serialize)]
pub struct Parameters {
    pub tuple: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    pub samples: usize,
    pub time_tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_lengths: Option<String>,
    pub dump_matrix: bool,
}

#[derive(Serialize)]
pub struct Tolerances {
    pub entry_abs: f64,
    pub entry_rel: f64,
    pub eigen_rank: f64,
    pub eigen_cluster: f64,
    pub orthogonality_gate: f64,
    pub pentagon_gate: f64,
    pub ptolemy_roundtrip_gate: f64,
}

pub fn tolerances() -> Tolerances {
    Tolerances {
        entry_abs: braidflip::ENTRY_ABS_TOL,
        entry_rel: braidflip::ENTRY_REL_TOL,
        eigen_rank: braidflip::EIGEN_RANK_TOL,
        eigen_cluster: braidflip::EIGEN_CLUSTER_TOL,
        orthogonality_gate: ORTHOGONALITY_GATE,
        pentagon_gate: PENTAGON_GATE,
        ptolemy_roundtrip_gate: PTOLEMY_ROUNDTRIP_GATE,
    }
}

#[derive(Serialize)]
pub struct EventReport {
    pub index: usize,
    pub t_lo: f64,
    pub t_hi: f64,
    pub t_mid: f64,
    pub removed: [usize; 2],
    pub inserted: [usize; 2],
    pub quad: [[usize; 2]; 4],
}

impl EventReport {
    pub fn from_event(index: usize, ev: &FlipEvent) -> EventReport {
        EventReport {
            index,
            t_lo: ev.t_lo,
            t_hi: ev.t_hi,
            t_mid: ev.t_mid(),
            removed: [ev.removed.lo(), ev.removed.hi()],
            inserted: [ev.inserted.lo(), ev.inserted.hi()],
            quad: ev.quad.map(|e| [e.lo(), e.hi()]),
        }
    }
}

#[derive(Serialize)]
pub struct ColoringReport {
    pub dimension: usize,
    /// One entry per triangulation along the chain (initial, then one per
    /// event); all equal by the basis-dimension invariant.
    pub per_triangulation: Vec<usize>,
}

#[derive(Serialize)]
pub struct OperatorReport {
    pub dim: usize,
    pub event_count: usize,
    pub max_deviation_from_identity: f64,
    /// Row-major dump of the full matrix; present only with `--dump-matrix`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_row_major: Option<Vec<f64>>,
    /// Edge order the basis rows refer to; rows are label vectors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis_edge_order: Option<Vec<[usize; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis_rows: Option<Vec<Vec<u8>>>,
}

#[derive(Serialize)]
pub struct ClusterReport {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

#[derive(Serialize)]
pub struct SpectrumReport {
    pub clusters: Vec<ClusterReport>,
    pub multiplicity_at_minus_one: usize,
    pub multiplicity_at_plus_one: usize,
}

#[derive(Serialize)]
pub struct SuiteReport {
    /// `exhaustive` or `random`.
    pub mode: String,
    pub checked: usize,
    pub worst_deviation: f64,
    pub worst_case: String,
    pub gate: f64,
    pub pass: bool,
}

impl SuiteReport {
    pub fn new(mode: &str, report: &braidflip::IdentityReport, gate: f64) -> SuiteReport {
        SuiteReport {
            mode: mode.to_string(),
            checked: report.checked,
            worst_deviation: report.worst_dev,
            worst_case: report.worst_case.clone(),
            gate,
            pass: report.worst_dev <= gate,
        }
    }
}

#[derive(Serialize)]
pub struct IdentitySuites {
    pub orthogonality: SuiteReport,
    pub pentagon: SuiteReport,
}

#[derive(Serialize)]
pub struct EdgeLength {
    pub edge: [usize; 2],
    pub length: f64,
}

#[derive(Serialize)]
pub struct PtolemyReport {
    /// Euclidean edge lengths of the initial triangulation at t = 0.
    pub initial: Vec<EdgeLength>,
    /// The labels after transporting through the whole flip sequence.
    #[serde(rename = "final")]
    pub final_labels: Vec<EdgeLength>,
    /// Largest scaled difference between the seed labeling and the result of
    /// transporting forward and then back through the inverse flips.
    pub roundtrip_residual: f64,
    pub gate: f64,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct RefineStep {
    pub samples: usize,
    pub events: usize,
    pub max_t_mid_drift: f64,
}

/// The report of `invariant` and `events` runs.
#[derive(Serialize)]
pub struct RunReport {
    pub tool: ToolInfo,
    pub command: String,
    pub input: InputInfo,
    pub parameters: Parameters,
    pub tolerances: Tolerances,
    pub events: Vec<EventReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coloring: Option<ColoringReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity_suites: Option<IdentitySuites>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ptolemy: Option<PtolemyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refinement: Option<Vec<RefineStep>>,
}

#[derive(Serialize)]
pub struct VerifyLevel {
    pub r: usize,
    pub orthogonality: SuiteReport,
    pub pentagon: SuiteReport,
}

/// The report of `verify` runs.
#[derive(Serialize)]
pub struct VerifyReport {
    pub tool: ToolInfo,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<f64>,
    pub levels: Vec<VerifyLevel>,
    pub all_pass: bool,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    text
}
