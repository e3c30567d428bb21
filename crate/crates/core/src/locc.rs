//! Multi-receiver discrimination of orthogonal state sets by local
//! measurements and one-way classical messages.
//!
//! Protocols are non-adaptive: every round's basis is fixed in advance.

use alloc::{
    collections::BTreeMap,
    format,
    string::{String, ToString},
    vec,
    vec::Vec,
};

use crate::catalog::{make_basis, make_state, NamedBasis};
use crate::densecode::{generate_encoded, EncodingSpec};
use crate::measure::{enumerate_outcomes, MeasurementPlan};
use crate::state::{check_targets, PureState, C64, TOL};
use crate::teleport::{ceil_log2, Party};
use crate::{Error, Result};

/// One local measurement; its outcome is broadcast as a message.
#[derive(Clone, Debug, PartialEq)]
pub struct Round {
    pub party: String,
    pub targets: Vec<usize>,
    pub basis: NamedBasis,
}

impl Round {
    /// `ceil(log2 |basis|)` cbits.
    pub fn width(&self) -> u32 {
        ceil_log2(self.basis.len())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoccProtocol {
    pub name: String,
    parties: Vec<Party>,
    rounds: Vec<Round>,
    plan: MeasurementPlan,
    identification: Option<BTreeMap<Vec<String>, String>>,
}

impl LoccProtocol {
    pub fn new(
        name: impl Into<String>,
        parties: Vec<Party>,
        rounds: Vec<(String, Vec<usize>, NamedBasis)>,
    ) -> Result<Self> {
        let owned: Vec<usize> = parties.iter().flat_map(|p| p.qubits.iter().copied()).collect();
        check_targets(&owned, owned.iter().max().map_or(0, |m| m + 1))?;
        for (party, targets, _) in &rounds {
            let p = parties.iter().find(|p| &p.name == party).ok_or_else(|| Error::UnknownName(party.clone()))?;
            if let Some(q) = targets.iter().find(|q| !p.qubits.contains(q)) {
                return Err(Error::Constraint(format!("{party} does not hold qubit {q}")));
            }
        }
        let plan = MeasurementPlan::new(rounds.iter().map(|r| (r.1.clone(), r.2.clone())).collect())?;
        let rounds = rounds
            .into_iter()
            .zip(plan.steps())
            .map(|((party, targets, _), s)| Round { party, targets, basis: s.basis.clone() })
            .collect();
        Ok(Self { name: name.into(), parties, rounds, plan, identification: None })
    }

    /// Fixes the transcript → candidate map instead of deriving it from the candidates.
    pub fn with_identification(mut self, map: BTreeMap<Vec<String>, String>) -> Self {
        self.identification = Some(map);
        self
    }

    pub fn parties(&self) -> &[Party] {
        &self.parties
    }

    pub fn rounds(&self) -> &[Round] {
        &self.rounds
    }

    pub fn plan(&self) -> &MeasurementPlan {
        &self.plan
    }

    /// The party acting in the last round; it announces the identification.
    pub fn final_party(&self) -> Option<&str> {
        self.rounds.last().map(|r| r.party.as_str())
    }

    /// Message bits sent by everyone except the final party.
    pub fn inter_receiver_cbits(&self) -> u32 {
        let last = self.final_party();
        self.rounds.iter().filter(|r| Some(r.party.as_str()) != last).map(Round::width).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TranscriptIssue {
    /// Several candidates reach the transcript.
    Ambiguous { transcript: Vec<String>, candidates: Vec<String> },
    /// A fixed identification map has no entry.
    Unmapped { transcript: Vec<String>, candidate: String },
    /// A fixed identification map names the wrong candidate.
    Misidentified { transcript: Vec<String>, candidate: String, identified: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscriminationReport {
    pub protocol: String,
    pub success: bool,
    /// Every reachable transcript with the candidates reaching it and their probabilities.
    pub transcripts: Vec<(Vec<String>, Vec<(String, f64)>)>,
    pub issues: Vec<TranscriptIssue>,
    /// `log2` of the set size on success, else 0.
    pub recovered_cbits: f64,
    pub inter_receiver_cbits: u32,
    /// Per round: conditional candidate states sharing a transcript prefix stay orthogonal.
    pub round_orthogonal: Vec<bool>,
}

fn check_candidates(candidates: &[(String, PureState)]) -> Result<usize> {
    let n = candidates.first().map(|c| c.1.num_qubits()).ok_or(Error::EmptySubset)?;
    for (i, (a, sa)) in candidates.iter().enumerate() {
        if sa.num_qubits() != n {
            return Err(Error::DimensionMismatch { expected: n, found: sa.num_qubits() });
        }
        for (b, sb) in &candidates[i + 1..] {
            if sa.inner(sb)?.norm() > TOL {
                return Err(Error::NotOrthogonal(a.clone(), b.clone()));
            }
        }
    }
    Ok(n)
}

fn prefix_orthogonal(candidates: &[(String, PureState)], plan: &MeasurementPlan, rounds: usize) -> Result<bool> {
    let prefix =
        MeasurementPlan::new(plan.steps()[..rounds].iter().map(|s| (s.targets.clone(), s.basis.clone())).collect())?;
    let mut groups: BTreeMap<Vec<String>, Vec<(f64, PureState)>> = BTreeMap::new();
    for (_, s) in candidates {
        for b in enumerate_outcomes(s, &prefix)? {
            groups.entry(b.labels).or_default().push((b.probability, b.residual));
        }
    }
    for members in groups.values() {
        for (i, (pa, ra)) in members.iter().enumerate() {
            for (pb, rb) in &members[i + 1..] {
                if libm::sqrt(pa * pb) * ra.inner(rb)?.norm() > TOL {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Runs every candidate through the protocol and checks that each reachable
/// transcript singles out one candidate.
pub fn run_discrimination(candidates: &[(String, PureState)], protocol: &LoccProtocol) -> Result<DiscriminationReport> {
    let n = check_candidates(candidates)?;
    check_targets(&protocol.plan.measured_qubits(), n)?;
    let mut reach: BTreeMap<Vec<String>, Vec<(String, f64)>> = BTreeMap::new();
    for (label, s) in candidates {
        for b in enumerate_outcomes(s, &protocol.plan)? {
            reach.entry(b.labels).or_default().push((label.clone(), b.probability));
        }
    }
    let mut issues = Vec::new();
    for (t, who) in &reach {
        match &protocol.identification {
            None if who.len() > 1 => issues.push(TranscriptIssue::Ambiguous {
                transcript: t.clone(),
                candidates: who.iter().map(|w| w.0.clone()).collect(),
            }),
            None => {}
            Some(map) => {
                for (c, _) in who {
                    match map.get(t) {
                        None => issues.push(TranscriptIssue::Unmapped { transcript: t.clone(), candidate: c.clone() }),
                        Some(id) if id != c => issues.push(TranscriptIssue::Misidentified {
                            transcript: t.clone(),
                            candidate: c.clone(),
                            identified: id.clone(),
                        }),
                        Some(_) => {}
                    }
                }
            }
        }
    }
    let round_orthogonal = (1..=protocol.rounds.len())
        .map(|r| prefix_orthogonal(candidates, &protocol.plan, r))
        .collect::<Result<Vec<_>>>()?;
    let success = issues.is_empty();
    debug_assert!(!success || round_orthogonal.iter().all(|&o| o));
    Ok(DiscriminationReport {
        protocol: protocol.name.clone(),
        success,
        transcripts: reach.into_iter().collect(),
        issues,
        recovered_cbits: if success { libm::log2(candidates.len() as f64) } else { 0.0 },
        inter_receiver_cbits: protocol.inter_receiver_cbits(),
        round_orthogonal,
    })
}

/// `coefficient · |a⟩|b⟩` across a bipartition.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductTerm {
    pub coefficient: C64,
    pub a: PureState,
    pub b: PureState,
}

/// Each candidate written as a sum of product vectors across `a_side | b_side`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChenLiCertificate {
    pub a_side: Vec<usize>,
    pub b_side: Vec<usize>,
    pub decompositions: Vec<(String, Vec<ProductTerm>)>,
}

impl ChenLiCertificate {
    pub fn new(
        a_side: Vec<usize>,
        b_side: Vec<usize>,
        decompositions: Vec<(String, Vec<ProductTerm>)>,
    ) -> Result<Self> {
        if a_side.is_empty() || b_side.is_empty() {
            return Err(Error::EmptySubset);
        }
        let all: Vec<usize> = a_side.iter().chain(&b_side).copied().collect();
        check_targets(&all, all.len())?;
        for (label, terms) in &decompositions {
            if terms.iter().any(|t| t.a.num_qubits() != a_side.len() || t.b.num_qubits() != b_side.len()) {
                return Err(Error::MalformedTerm(format!("term of {label} does not match the bipartition")));
            }
        }
        Ok(Self { a_side, b_side, decompositions })
    }

    pub fn num_qubits(&self) -> usize {
        self.a_side.len() + self.b_side.len()
    }

    /// The normalized product vector `|a⟩|b⟩` on the full register.
    pub fn term_state(&self, term: &ProductTerm) -> Result<PureState> {
        let order: Vec<usize> = self.a_side.iter().chain(&self.b_side).copied().collect();
        term.a.tensor(&term.b)?.permute_qubits(&order)
    }
}

/// Coefficients of every candidate in the product basis `a_basis ⊗ b_basis`,
/// keeping terms above `1e-10`.
pub fn decompose_in_product_basis(
    candidates: &[(String, PureState)],
    a_side: &[usize],
    a_basis: &NamedBasis,
    b_side: &[usize],
    b_basis: &NamedBasis,
) -> Result<ChenLiCertificate> {
    if a_basis.num_qubits() != a_side.len() || b_basis.num_qubits() != b_side.len() {
        return Err(Error::MalformedTerm(format!(
            "{} ⊗ {} does not match the bipartition",
            a_basis.name, b_basis.name
        )));
    }
    let shell = ChenLiCertificate::new(a_side.to_vec(), b_side.to_vec(), Vec::new())?;
    let mut decompositions = Vec::new();
    for (label, s) in candidates {
        if s.num_qubits() != shell.num_qubits() {
            return Err(Error::DimensionMismatch { expected: shell.num_qubits(), found: s.num_qubits() });
        }
        let mut terms = Vec::new();
        for a in a_basis.vectors() {
            for b in b_basis.vectors() {
                let mut t = ProductTerm { coefficient: C64::new(1.0, 0.0), a: a.clone(), b: b.clone() };
                let c = shell.term_state(&t)?.inner(s)?;
                if c.norm() > TOL {
                    t.coefficient = c;
                    terms.push(t);
                }
            }
        }
        decompositions.push((label.clone(), terms));
    }
    ChenLiCertificate::new(a_side.to_vec(), b_side.to_vec(), decompositions)
}

#[derive(Clone, Debug, PartialEq)]
pub enum CertificateViolation {
    /// Phase-aligned distance between the candidate and its normalized term sum.
    Reconstruction { candidate: String, error: f64 },
    /// Term `term` of `candidate` overlaps `other`.
    SharedTerm { candidate: String, term: usize, other: String, overlap: f64 },
    /// Term `term` of `candidate` is orthogonal to it.
    IdleTerm { candidate: String, term: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificateReport {
    pub passed: bool,
    pub violations: Vec<CertificateViolation>,
}

/// Checks reconstruction, exclusive product terms and nonzero own overlap.
pub fn check_certificate(candidates: &[(String, PureState)], cert: &ChenLiCertificate) -> Result<CertificateReport> {
    let mut violations = Vec::new();
    for (label, s) in candidates {
        if s.num_qubits() != cert.num_qubits() {
            return Err(Error::DimensionMismatch { expected: cert.num_qubits(), found: s.num_qubits() });
        }
        let terms = cert
            .decompositions
            .iter()
            .find(|d| &d.0 == label)
            .map(|d| &d.1)
            .ok_or_else(|| Error::UnknownName(label.clone()))?;
        let mut sum = vec![C64::default(); s.dim()];
        let mut states = Vec::with_capacity(terms.len());
        for t in terms {
            let v = cert.term_state(t)?;
            for (x, y) in sum.iter_mut().zip(v.amplitudes()) {
                *x += t.coefficient * y;
            }
            states.push(v);
        }
        let error = match PureState::normalized(s.num_qubits(), sum) {
            Ok(v) => {
                let ov = s.inner(&v)?;
                let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { C64::new(1.0, 0.0) };
                let d: f64 = v.amplitudes().iter().zip(s.amplitudes()).map(|(x, y)| (x - y * phase).norm_sqr()).sum();
                libm::sqrt(d)
            }
            Err(_) => 1.0,
        };
        if error > TOL {
            violations.push(CertificateViolation::Reconstruction { candidate: label.clone(), error });
        }
        for (k, v) in states.iter().enumerate() {
            if v.inner(s)?.norm() <= TOL {
                violations.push(CertificateViolation::IdleTerm { candidate: label.clone(), term: k });
            }
            for (other, o) in candidates {
                if other == label {
                    continue;
                }
                let overlap = v.inner(o)?.norm();
                if overlap > TOL {
                    violations.push(CertificateViolation::SharedTerm {
                        candidate: label.clone(),
                        term: k,
                        other: other.clone(),
                        overlap,
                    });
                }
            }
        }
    }
    Ok(CertificateReport { passed: violations.is_empty(), violations })
}

/// Qubit-first criterion for a supplied Alice basis: the conditional states
/// `⟨k_A|ψ_i⟩` must be pairwise orthogonal across candidates for each `k`.
pub fn walgate_hardy_qubit_check(candidates: &[PureState], alice_qubit: usize, basis: &NamedBasis) -> Result<bool> {
    if basis.num_qubits() != 1 || basis.len() != 2 {
        return Err(Error::IncompleteBasis(basis.name.clone()));
    }
    let Some(first) = candidates.first() else {
        return Ok(true);
    };
    let n = first.num_qubits();
    check_targets(&[alice_qubit], n)?;
    let plan = MeasurementPlan::new(vec![(vec![alice_qubit], basis.clone())])?;
    for label in basis.labels() {
        let mut cond: Vec<(f64, PureState)> = Vec::new();
        for s in candidates {
            if s.num_qubits() != n {
                return Err(Error::DimensionMismatch { expected: n, found: s.num_qubits() });
            }
            if let Some(b) = enumerate_outcomes(s, &plan)?.into_iter().find(|b| &b.labels[0] == label) {
                cond.push((b.probability, b.residual));
            }
        }
        for (i, (pa, ra)) in cond.iter().enumerate() {
            for (pb, rb) in &cond[i + 1..] {
                if libm::sqrt(pa * pb) * ra.inner(rb)?.norm() > TOL {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Candidate sets shipped with the crate.
pub const SET_NAMES: &[&str] = &["ghz_8", "omega_4", "omega_16", "w_4", "q5_4"];

/// Protocols shipped with the crate.
pub const PROTOCOL_NAMES: &[&str] = &["bell13_bell24", "pm4_ghz3", "comp13_comp24"];

/// Resources with no known multi-receiver set of four or more.
pub const OPEN_NEGATIVES: &[(&str, &str)] = &[("Q4", "no known LOCC set ≥ 4")];

fn encoded_subset(resource: &str, keep: Option<&[&str]>) -> Result<Vec<(String, PureState)>> {
    let s = make_state(resource, &[])?.state;
    let all = generate_encoded(&s, &EncodingSpec::new(vec![0, 1]))?;
    let Some(keep) = keep else {
        return Ok(all);
    };
    keep.iter()
        .map(|k| all.iter().find(|e| e.0 == *k).cloned().ok_or_else(|| Error::UnknownName(k.to_string())))
        .collect()
}

/// Labelled candidate states; encodings act on qubits 0 and 1.
pub fn candidate_set(name: &str) -> Result<Vec<(String, PureState)>> {
    match name {
        "ghz_8" => {
            let b = make_basis("ghz4_full")?;
            Ok(b.labels().iter().cloned().zip(b.vectors().iter().cloned()).collect())
        }
        "omega_4" => encoded_subset("Omega", Some(&["I⊗I", "I⊗σ1", "σ1⊗I", "σ1⊗σ1"])),
        "omega_16" => encoded_subset("Omega", None),
        "w_4" => encoded_subset("W4", Some(&["I⊗I", "σ3⊗σ3", "σ1⊗I", "iσ2⊗σ3"])),
        "q5_4" => encoded_subset("Q5", Some(&["I⊗I", "σ1⊗I", "I⊗σ1", "σ1⊗σ1"])),
        _ => Err(Error::UnknownName(name.into())),
    }
}

fn party(name: &str, qubits: &[usize]) -> Party {
    Party { name: name.into(), qubits: qubits.to_vec() }
}

/// `B1` measures and reports, then `B2` measures and identifies.
pub fn protocol(name: &str) -> Result<LoccProtocol> {
    let two = |a: &[usize], ba: &str, b: &[usize], bb: &str| {
        LoccProtocol::new(
            name,
            vec![party("B1", a), party("B2", b)],
            vec![("B1".into(), a.to_vec(), make_basis(ba)?), ("B2".into(), b.to_vec(), make_basis(bb)?)],
        )
    };
    match name {
        "bell13_bell24" => two(&[0, 2], "bell", &[1, 3], "bell"),
        "pm4_ghz3" => two(&[3], "plus_minus", &[0, 1, 2], "ghz3_full"),
        "comp13_comp24" => two(&[0, 2], "computational:2", &[1, 3], "computational:2"),
        _ => Err(Error::UnknownName(name.into())),
    }
}

/// Decomposition over the product of a two-round protocol's bases, split
/// between the two parties.
pub fn protocol_certificate(candidates: &[(String, PureState)], protocol: &LoccProtocol) -> Result<ChenLiCertificate> {
    let [a, b] = protocol.rounds() else {
        return Err(Error::Constraint(format!("{} does not have exactly two rounds", protocol.name)));
    };
    decompose_in_product_basis(candidates, &a.targets, &a.basis, &b.targets, &b.basis)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoccScenario {
    pub id: String,
    pub set: &'static str,
    pub protocol: &'static str,
    pub expect_success: bool,
    pub expected_inter_receiver: Option<u32>,
}

pub fn builtin_scenarios() -> Vec<LoccScenario> {
    let mk = |set: &'static str, protocol: &'static str, ok: bool, cost: Option<u32>| LoccScenario {
        id: format!("{set}/{protocol}"),
        set,
        protocol,
        expect_success: ok,
        expected_inter_receiver: cost,
    };
    let mut out = vec![
        mk("ghz_8", "bell13_bell24", true, Some(2)),
        mk("ghz_8", "pm4_ghz3", true, Some(1)),
        mk("omega_4", "comp13_comp24", true, Some(2)),
        mk("w_4", "bell13_bell24", true, Some(2)),
        mk("q5_4", "comp13_comp24", true, Some(2)),
    ];
    out.extend(PROTOCOL_NAMES.iter().map(|p| mk("omega_16", p, false, None)));
    out
}
