//! Every built-in claim, checked and tabulated.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use quadent_core::catalog::{make_basis, make_state, validate_orthonormal, BASIS_NAMES};
use quadent_core::densecode::{capacity, SenderChoice};
use quadent_core::entanglement::{pair_concurrence, profile, resolve_tracing, three_tangle_pure};
use quadent_core::locc::{self, check_certificate, protocol_certificate, run_discrimination, OPEN_NEGATIVES};
use quadent_core::teleport::{builtin_ids, builtin_scenario, run_scenario, CorrectionSpec};

use crate::run::unverified_claims;
use crate::{CliError, Settings, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    AsPrinted,
    AsCorrected,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::AsPrinted => "as-printed",
            Flag::AsCorrected => "as-corrected",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub group: String,
    pub statement: String,
    pub computed: String,
    pub status: Status,
    pub flag: Flag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub settings: Settings,
    pub claims: Vec<Claim>,
    pub passed: usize,
    pub total: usize,
    /// Statements carried along without a check.
    pub unverified: Vec<String>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.passed == self.total
    }
}

fn claim(group: &str, statement: String, computed: String, status: Status) -> Claim {
    Claim { group: group.into(), statement, computed, status, flag: Flag::AsPrinted, note: None }
}

fn teleport(id: &str, settings: Settings) -> Result<Vec<Claim>, CliError> {
    let s = builtin_scenario(id)?;
    let r = run_scenario(&s, settings.seed)?;
    let feasible = r.worst_fidelity >= 1.0 - settings.tolerance;
    let e = s.expected.unwrap_or(quadent_core::teleport::Expectation { feasible: true, cost_cbits: None });
    let ops = match &s.corrections {
        CorrectionSpec::Synthesize(a) => format!("{a:?}"),
        CorrectionSpec::Table(_) => "table".into(),
    };
    let (statement, ok) = if e.feasible {
        let cost = e.cost_cbits.map(|c| format!(", {c} cbits")).unwrap_or_default();
        (format!("teleport {id}: fidelity 1{cost}"), feasible && e.cost_cbits.is_none_or(|c| c == r.cost_cbits))
    } else {
        let certified = r.certificate.as_ref().is_some_and(|c| c.is_bounded_away());
        (format!("teleport {id}: infeasible with {ops} corrections"), !feasible && certified)
    };
    let computed = format!("worst fidelity {:.12}, {} cbits", r.worst_fidelity, r.cost_cbits);
    let mut c = claim("teleport", statement, computed, Status::judge(ok));
    let mut notes: Vec<String> = s
        .plan
        .steps()
        .iter()
        .flat_map(|st| st.basis.corrections().iter().map(move |k| format!("{}/{}", st.basis.name, k.label)))
        .collect();
    notes.dedup();
    notes.extend(r.printed_mismatches.iter().map(|m| format!("printed residual {}: {}", m.outcome.join(","), m.text)));
    if !notes.is_empty() {
        c.flag = Flag::AsCorrected;
        c.note = Some(notes.join("; "));
    }
    Ok(vec![c])
}

/// Expected maximum orthogonal count; `None` means fewer than 4.
struct DcRow {
    state: &'static str,
    senders: SenderChoice,
    expected: Option<usize>,
    disagree: Option<&'static str>,
}

fn dc_rows() -> Vec<DcRow> {
    let fixed = |q: &[usize]| SenderChoice::Fixed(q.to_vec());
    let row = |state, senders, expected| DcRow { state, senders, expected, disagree: None };
    vec![
        row("GHZ4", fixed(&[0]), Some(4)),
        row("GHZ4", fixed(&[0, 1]), Some(8)),
        row("GHZ4", fixed(&[0, 1, 2]), Some(16)),
        row("W4", fixed(&[0]), None),
        row("W4", fixed(&[0, 1]), Some(8)),
        row("W4", fixed(&[0, 1, 2]), Some(8)),
        row("W11", SenderChoice::Best(1), Some(4)),
        DcRow {
            state: "W11",
            senders: fixed(&[0, 1, 2]),
            expected: Some(8),
            disagree: Some(
                "the receiver's qubit is maximally mixed for every m, n, so all 16 Pauli encodings are orthogonal",
            ),
        },
        row("Omega", fixed(&[0]), Some(4)),
        row("Omega", fixed(&[0, 1]), Some(16)),
        row("Omega", fixed(&[0, 1, 2]), Some(16)),
        row("Q4", fixed(&[1]), Some(4)),
        row("Q4", fixed(&[0]), None),
        row("Q4", fixed(&[0, 1]), Some(8)),
        row("Q4", fixed(&[0, 1, 2]), Some(8)),
        DcRow {
            state: "Q4",
            senders: SenderChoice::Best(3),
            expected: Some(8),
            disagree: Some("senders {0, 2, 3} leave qubit 1 maximally mixed, so 16 encodings are orthogonal"),
        },
        row("Q5", fixed(&[1]), Some(4)),
        row("Q5", fixed(&[0, 1]), Some(8)),
        row("Q5", fixed(&[0, 1, 2]), Some(16)),
    ]
}

fn cbits(n: usize) -> String {
    format!("{}", (n as f64).log2())
}

fn dense(row: &DcRow) -> Result<Vec<Claim>, CliError> {
    let s = make_state(row.state, &[])?;
    let r = capacity(&s, &row.senders, false)?;
    let k = match &row.senders {
        SenderChoice::Fixed(q) => q.len(),
        SenderChoice::Best(k) => *k,
    };
    let senders = match &row.senders {
        SenderChoice::Fixed(q) if k == 1 => format!(" (sender qubit {})", q[0]),
        SenderChoice::Best(1) => " (best sender qubit)".into(),
        SenderChoice::Best(_) => " (any sender qubits)".into(),
        _ => String::new(),
    };
    let (value, ok) = match row.expected {
        Some(n) => (format!("{} cbits", cbits(n)), r.max_orthogonal == n),
        None => ("< 2 cbits".into(), r.max_orthogonal < 4),
    };
    let status = match (ok, row.disagree) {
        (true, _) => Status::Pass,
        (false, Some(_)) => Status::Disagree,
        (false, None) => Status::Fail,
    };
    let computed = format!("N={} on {:?}, {} cbits", r.max_orthogonal, r.sender_qubits, cbits(r.max_orthogonal));
    let mut c = claim("densecode", format!("{} DC{k} capacity{senders}: {value}", row.state), computed, status);
    if !ok {
        c.note = row.disagree.map(String::from);
    }
    Ok(vec![c])
}

/// Corrections that restore printed typos the claims themselves rely on.
const DOCUMENTED: &[&str] = &["omega16/Ω15"];

fn basis(name: &str) -> Result<Vec<Claim>, CliError> {
    let b = make_basis(name)?;
    let v = validate_orthonormal(&b);
    let deviation = v.max_offdiag.max(v.max_norm_deviation);
    let corrections: Vec<String> = b.corrections().iter().map(|c| format!("{name}/{}", c.label)).collect();
    let certified = b
        .corrections()
        .iter()
        .all(|c| c.certificate.corrected_max_overlap <= 1e-12 && !c.certificate.method.is_empty());
    let undocumented: Vec<&String> = corrections.iter().filter(|c| !DOCUMENTED.contains(&c.as_str())).collect();
    let gram = if corrections.is_empty() {
        format!("Gram deviation {deviation:.1e}")
    } else {
        format!("Gram deviation {deviation:.1e} after corrections")
    };
    let status = if !v.passed || !certified {
        Status::Fail
    } else if undocumented.is_empty() {
        Status::Pass
    } else {
        Status::Disagree
    };
    let mut c = claim("basis", format!("basis {name}: orthonormal as printed"), gram, status);
    if !corrections.is_empty() {
        c.flag = Flag::AsCorrected;
        let parts: Vec<String> = b
            .corrections()
            .iter()
            .map(|k| match k.certificate.support_weight {
                Some((before, after)) => {
                    format!("{} ({:?}, support weight {before:.3} to {after:.3})", k.label, k.kind)
                }
                None => format!("{} ({:?}, printed overlap {:.3})", k.label, k.kind, k.certificate.printed_max_overlap),
            })
            .collect();
        c.note = Some(format!("corrected {}", parts.join(", ")));
    }
    Ok(vec![c])
}

fn genuine(name: &'static str) -> Result<Vec<Claim>, CliError> {
    let p = profile(&make_state(name, &[])?)?;
    Ok(vec![claim(
        "entanglement",
        format!("{name}: every proper reduction is mixed"),
        format!("max purity {:.6}", p.max_purity()),
        Status::judge(p.genuine),
    )])
}

fn pairs(name: &'static str, want: f64) -> Result<Vec<Claim>, CliError> {
    let s = make_state(name, &[])?.state;
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            worst = worst.max((pair_concurrence(&s, i, j)? - want).abs());
        }
    }
    Ok(vec![claim(
        "entanglement",
        format!("{name}: every pair concurrence is {want}"),
        format!("max deviation {worst:.1e}"),
        Status::judge(worst <= 1e-9),
    )])
}

fn tangle(name: &'static str, want: f64) -> Result<Vec<Claim>, CliError> {
    let t = three_tangle_pure(&make_state(name, &[])?.state)?;
    Ok(vec![claim(
        "entanglement",
        format!("{name}: three-tangle {want}"),
        format!("{t:.12}"),
        Status::judge((t - want).abs() <= 1e-9),
    )])
}

fn q4_pairs() -> Result<Vec<Claim>, CliError> {
    let s = make_state("Q4", &[])?.state;
    let t = resolve_tracing(&s, 0, &[2, 3], 0.5, 1e-9)?;
    let ok = (t.traced_out_matches || t.kept_matches) && t.others_vanish;
    let mut c = claim(
        "entanglement",
        "Q4: tracing out qubit 0 and (2 or 3) leaves concurrence 1/2, others vanish".into(),
        format!(
            "traced-out reading {}, kept reading {}",
            if t.traced_out_matches { "matches" } else { "differs" },
            if t.kept_matches { "matches" } else { "differs" }
        ),
        Status::judge(ok),
    );
    c.note = Some("pairs read as the qubits traced out".into());
    Ok(vec![c])
}

fn locc_claims(s: &locc::LoccScenario) -> Result<Vec<Claim>, CliError> {
    let cands = locc::candidate_set(s.set)?;
    let p = locc::protocol(s.protocol)?;
    let r = run_discrimination(&cands, &p)?;
    let statement = if s.expect_success {
        let cost = s.expected_inter_receiver.map(|c| format!(", {c} cbits between receivers")).unwrap_or_default();
        format!("LOCC {}: distinguishable{cost}", s.id)
    } else {
        format!("LOCC {}: not distinguishable", s.id)
    };
    let ok = r.success == s.expect_success
        && (!s.expect_success || s.expected_inter_receiver.is_none_or(|c| c == r.inter_receiver_cbits));
    let computed =
        format!("success={}, {} cbits between receivers, {} issues", r.success, r.inter_receiver_cbits, r.issues.len());
    let mut out = vec![claim("locc", statement, computed, Status::judge(ok))];
    if s.expect_success {
        let cert = check_certificate(&cands, &protocol_certificate(&cands, &p)?)?;
        out.push(claim(
            "locc",
            format!("LOCC {}: product-basis certificate holds", s.id),
            format!("{} violations", cert.violations.len()),
            Status::judge(cert.passed),
        ));
    }
    Ok(out)
}

type Job = Box<dyn Fn(Settings) -> Result<Vec<Claim>, CliError> + Send + Sync>;

fn jobs() -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for id in builtin_ids() {
        jobs.push(Box::new(move |s| teleport(&id, s)));
    }
    for row in dc_rows() {
        jobs.push(Box::new(move |_| dense(&row)));
    }
    for name in BASIS_NAMES {
        jobs.push(Box::new(move |_| basis(name)));
    }
    for name in ["GHZ4", "W4", "Omega", "Q4", "Q5"] {
        jobs.push(Box::new(move |_| genuine(name)));
    }
    jobs.push(Box::new(|_| pairs("W4", 0.5)));
    jobs.push(Box::new(|_| pairs("Omega", 0.0)));
    jobs.push(Box::new(|_| pairs("Q5", 0.0)));
    jobs.push(Box::new(|_| q4_pairs()));
    jobs.push(Box::new(|_| tangle("GHZ3", 1.0)));
    jobs.push(Box::new(|_| tangle("W3", 0.0)));
    for s in locc::builtin_scenarios() {
        jobs.push(Box::new(move |_| locc_claims(&s)));
    }
    jobs
}

pub fn run_suite(settings: Settings) -> Result<SuiteReport, CliError> {
    let results: Vec<Result<Vec<Claim>, CliError>> = jobs().par_iter().map(|j| j(settings)).collect();
    let mut claims = Vec::new();
    for r in results {
        claims.extend(r?);
    }
    let mut unverified: Vec<String> = ["GHZ4", "W4", "Q4", "Q5"]
        .iter()
        .flat_map(|n| unverified_claims(n).into_iter().map(move |c| format!("{n}: {c}")))
        .collect();
    unverified.extend(OPEN_NEGATIVES.iter().map(|(s, c)| format!("{s}: {c}")));
    let passed = claims.iter().filter(|c| c.status == Status::Pass).count();
    Ok(SuiteReport { settings, total: claims.len(), passed, claims, unverified })
}
