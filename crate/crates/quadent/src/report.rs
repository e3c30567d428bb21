//! JSON report schemas. Every report type round-trips through serde.

use serde::{Deserialize, Serialize};

use quadent_core::catalog::{
    make_basis, make_state, BasisCorrection, NamedBasis, NamedState, BASIS_NAMES, STATE_NAMES,
};
use quadent_core::densecode::CapacityReport;
use quadent_core::entanglement::{EntanglementProfile, TracingResolution};
use quadent_core::locc::{DiscriminationReport, TranscriptIssue};
use quadent_core::teleport::TeleportReport;
use quadent_core::PureState;

/// Amplitudes below this are left out of ket lists.
pub const KET_EPS: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ket {
    pub label: String,
    pub re: f64,
    pub im: f64,
}

pub fn kets(state: &PureState) -> Vec<Ket> {
    state.kets(KET_EPS).into_iter().map(|(label, a)| Ket { label, re: a.re, im: a.im }).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDump {
    pub name: String,
    pub params: Vec<(String, f64)>,
    pub kets: Vec<Ket>,
}

impl From<&NamedState> for StateDump {
    fn from(s: &NamedState) -> Self {
        Self { name: s.name.clone(), params: s.params.clone(), kets: kets(&s.state) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectionDump {
    pub label: String,
    pub printed_label: String,
    pub kind: String,
    pub printed: Vec<Ket>,
    pub corrected: Vec<Ket>,
    pub printed_max_overlap: f64,
    pub corrected_max_overlap: f64,
    pub support_weight: Option<(f64, f64)>,
    pub method: String,
}

impl From<&BasisCorrection> for CorrectionDump {
    fn from(c: &BasisCorrection) -> Self {
        Self {
            label: c.label.clone(),
            printed_label: c.printed_label.clone(),
            kind: format!("{:?}", c.kind),
            printed: kets(&c.printed),
            corrected: kets(&c.corrected),
            printed_max_overlap: c.certificate.printed_max_overlap,
            corrected_max_overlap: c.certificate.corrected_max_overlap,
            support_weight: c.certificate.support_weight,
            method: c.certificate.method.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisVector {
    pub label: String,
    pub kets: Vec<Ket>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisDump {
    pub name: String,
    pub num_qubits: usize,
    pub complete: bool,
    pub vectors: Vec<BasisVector>,
    pub corrections: Vec<CorrectionDump>,
}

impl From<&NamedBasis> for BasisDump {
    fn from(b: &NamedBasis) -> Self {
        Self {
            name: b.name.clone(),
            num_qubits: b.num_qubits(),
            complete: b.is_complete(),
            vectors: b
                .labels()
                .iter()
                .zip(b.vectors())
                .map(|(l, v)| BasisVector { label: l.clone(), kets: kets(v) })
                .collect(),
            corrections: b.corrections().iter().map(CorrectionDump::from).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogDump {
    pub states: Vec<StateDump>,
    pub bases: Vec<BasisDump>,
}

/// Every catalog state at default parameters and every basis with its corrections.
pub fn catalog_dump() -> quadent_core::Result<CatalogDump> {
    let states =
        STATE_NAMES.iter().map(|n| make_state(n, &[]).map(|s| StateDump::from(&s))).collect::<Result<_, _>>()?;
    let bases = BASIS_NAMES.iter().map(|n| make_basis(n).map(|b| BasisDump::from(&b))).collect::<Result<_, _>>()?;
    Ok(CatalogDump { states, bases })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeRow {
    pub labels: Vec<String>,
    pub correction: String,
    pub min_probability: f64,
    pub max_probability: f64,
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartyCbits {
    pub party: String,
    pub cbits: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrintedMismatch {
    pub outcome: Vec<String>,
    pub printed: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TeleportJson {
    pub scenario_id: String,
    pub feasible: bool,
    pub worst_fidelity: f64,
    pub cost_cbits: u32,
    pub party_costs: Vec<PartyCbits>,
    pub uniform: bool,
    pub completion_flagged: bool,
    pub probe_count: usize,
    pub per_outcome: Vec<OutcomeRow>,
    pub printed_mismatches: Vec<PrintedMismatch>,
    /// Best fidelity reachable per outcome when infeasible.
    pub infeasible_best: Option<Vec<BestRow>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BestRow {
    pub labels: Vec<String>,
    pub correction: String,
    pub fidelity: f64,
}

impl From<&TeleportReport> for TeleportJson {
    fn from(r: &TeleportReport) -> Self {
        Self {
            scenario_id: r.scenario_id.clone(),
            feasible: r.feasible,
            worst_fidelity: r.worst_fidelity,
            cost_cbits: r.cost_cbits,
            party_costs: r.party_costs.iter().map(|p| PartyCbits { party: p.party.clone(), cbits: p.cbits }).collect(),
            uniform: r.uniform,
            completion_flagged: r.completion_flagged,
            probe_count: r.probe_count,
            per_outcome: r
                .per_outcome
                .iter()
                .map(|o| OutcomeRow {
                    labels: o.labels.clone(),
                    correction: o.correction.to_string(),
                    min_probability: o.min_probability,
                    max_probability: o.max_probability,
                    fidelity: o.fidelity,
                })
                .collect(),
            printed_mismatches: r
                .printed_mismatches
                .iter()
                .map(|p| PrintedMismatch { outcome: p.outcome.clone(), printed: p.text.clone() })
                .collect(),
            infeasible_best: r.certificate.as_ref().map(|c| {
                c.best
                    .iter()
                    .map(|(labels, corr, f)| BestRow {
                        labels: labels.clone(),
                        correction: corr.to_string(),
                        fidelity: *f,
                    })
                    .collect()
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub sender: Vec<usize>,
    pub receiver: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenseCodeJson {
    pub state: String,
    pub scenario: String,
    pub distribution: Distribution,
    #[serde(rename = "N")]
    pub n: usize,
    pub cbits: f64,
    pub encoded: usize,
    pub distinct: usize,
    pub witness_labels: Vec<String>,
    /// `N` for every sender subset tried.
    pub per_choice: Vec<(Vec<usize>, usize)>,
}

impl From<&CapacityReport> for DenseCodeJson {
    fn from(r: &CapacityReport) -> Self {
        Self {
            state: r.state.clone(),
            scenario: r.scenario.clone(),
            distribution: Distribution { sender: r.sender_qubits.clone(), receiver: r.receiver_qubits.clone() },
            n: r.max_orthogonal,
            cbits: r.capacity_cbits,
            encoded: r.encoded_count,
            distinct: r.distinct_count,
            witness_labels: r.witness.clone(),
            per_choice: r.per_choice.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairValue {
    pub pair: (usize, usize),
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracingJson {
    pub traced_out: Vec<PairValue>,
    pub kept: Vec<PairValue>,
    pub traced_out_matches: bool,
    pub kept_matches: bool,
    pub others_vanish: bool,
}

impl From<&TracingResolution> for TracingJson {
    fn from(t: &TracingResolution) -> Self {
        let pv = |v: &[((usize, usize), f64)]| v.iter().map(|p| PairValue { pair: p.0, value: p.1 }).collect();
        Self {
            traced_out: pv(&t.traced_out),
            kept: pv(&t.kept),
            traced_out_matches: t.traced_out_matches,
            kept_matches: t.kept_matches,
            others_vanish: t.others_vanish,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileJson {
    pub state: String,
    pub purities: Vec<(Vec<usize>, f64)>,
    pub concurrences: Vec<PairValue>,
    pub genuine: bool,
    pub tracing: Option<TracingJson>,
    /// Claims recorded without a computation behind them.
    pub unverified: Vec<String>,
}

impl ProfileJson {
    pub fn new(p: &EntanglementProfile, tracing: Option<&TracingResolution>, unverified: Vec<String>) -> Self {
        Self {
            state: p.state.clone(),
            purities: p.purities.clone(),
            concurrences: p.concurrences.iter().map(|c| PairValue { pair: c.0, value: c.1 }).collect(),
            genuine: p.genuine,
            tracing: tracing.map(TracingJson::from),
            unverified,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoccJson {
    pub set: String,
    pub protocol: String,
    pub success: bool,
    pub recovered_cbits: f64,
    pub inter_receiver_cbits: u32,
    pub round_orthogonal: Vec<bool>,
    pub issues: Vec<String>,
    pub certificate_passed: Option<bool>,
}

pub fn issue_text(i: &TranscriptIssue) -> String {
    match i {
        TranscriptIssue::Ambiguous { transcript, candidates } => {
            format!("{} reached by {}", transcript.join("|"), candidates.join(", "))
        }
        TranscriptIssue::Unmapped { transcript, candidate } => {
            format!("{} ({candidate}) unmapped", transcript.join("|"))
        }
        TranscriptIssue::Misidentified { transcript, candidate, identified } => {
            format!("{} ({candidate}) identified as {identified}", transcript.join("|"))
        }
    }
}

impl LoccJson {
    pub fn new(set: &str, r: &DiscriminationReport, certificate_passed: Option<bool>) -> Self {
        Self {
            set: set.into(),
            protocol: r.protocol.clone(),
            success: r.success,
            recovered_cbits: r.recovered_cbits,
            inter_receiver_cbits: r.inter_receiver_cbits,
            round_orthogonal: r.round_orthogonal.clone(),
            issues: r.issues.iter().map(issue_text).collect(),
            certificate_passed,
        }
    }
}
