//! Teleportation scenarios: joint-state construction, measurement, outcome-indexed
//! corrections and certification over a finite probe set.
//!
//! Joint registers put the unknown qubits `a, b, c` first, followed by resource
//! qubits `1..=4`. A map that is correct on the family basis vectors and on all
//! pairwise sums `(e_i + e_j)/√2`, `(e_i + i e_j)/√2` is correct on the whole
//! family up to a global phase, so the finite probe set certifies "every
//! unknown state". Random members are checked on top of that.

use alloc::{
    collections::{BTreeMap, BTreeSet},
    format,
    string::{String, ToString},
    vec,
    vec::Vec,
};
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::catalog::{make_basis, make_state, NamedState};
use crate::measure::{enumerate_outcomes, MeasurementPlan};
use crate::state::{c, LocalUnitary, Pauli, PureState, C64, TOL};
use crate::{Error, Result};

/// Haar-random members appended to every probe set.
pub const RANDOM_PROBES: usize = 20;

/// Best fidelity below this certifies that a correction class cannot work.
pub const INFEASIBLE_MARGIN: f64 = 1e-3;

/// Which unknown states the scenario claims to carry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// Every state of the register.
    Arbitrary,
    /// `σ ⊗ … ⊗ σ (α|0…0⟩ + β|1…1⟩)` with the listed dressings.
    GhzSubclass(Vec<Pauli>),
    /// `σi(a) σj(c) (α|φ+⟩|1⟩ + β|φ−⟩|0⟩)` on three qubits.
    OmegaSubclass(Pauli, Pauli),
    /// The single equal-weight state `½(|001⟩+|010⟩+|100⟩+|000⟩)`.
    WSubclass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownFamily {
    num_qubits: usize,
    kind: FamilyKind,
}

impl UnknownFamily {
    pub fn arbitrary(num_qubits: usize) -> Result<Self> {
        if !(1..=3).contains(&num_qubits) {
            return Err(Error::Constraint(format!("unknown state must have 1 to 3 qubits, got {num_qubits}")));
        }
        Ok(Self { num_qubits, kind: FamilyKind::Arbitrary })
    }

    pub fn ghz_subclass(paulis: Vec<Pauli>) -> Result<Self> {
        if !(2..=3).contains(&paulis.len()) {
            return Err(Error::Constraint("GHZ subclass needs 2 or 3 dressings".into()));
        }
        Ok(Self { num_qubits: paulis.len(), kind: FamilyKind::GhzSubclass(paulis) })
    }

    pub fn omega_subclass(i: Pauli, j: Pauli) -> Self {
        Self { num_qubits: 3, kind: FamilyKind::OmegaSubclass(i, j) }
    }

    pub fn w_subclass() -> Self {
        Self { num_qubits: 3, kind: FamilyKind::WSubclass }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    /// Orthonormal vectors spanning the family.
    pub fn basis(&self) -> Result<Vec<PureState>> {
        let k = self.num_qubits;
        match &self.kind {
            FamilyKind::Arbitrary => (0..1 << k).map(|i| PureState::basis(k, i)).collect(),
            FamilyKind::GhzSubclass(ps) => {
                let u = LocalUnitary::pauli_string(ps);
                let all: Vec<usize> = (0..k).collect();
                [0, (1 << k) - 1].iter().map(|&i| PureState::basis(k, i)?.apply_local(&u, &all)).collect()
            }
            FamilyKind::OmegaSubclass(i, j) => {
                let h = core::f64::consts::FRAC_1_SQRT_2;
                let phi_p1 = PureState::new(3, sparse(3, &[(0b001, h), (0b111, h)]))?;
                let phi_m0 = PureState::new(3, sparse(3, &[(0b000, h), (0b110, -h)]))?;
                [phi_p1, phi_m0]
                    .iter()
                    .map(|v| v.apply_local(&LocalUnitary::pauli(*i), &[0])?.apply_local(&LocalUnitary::pauli(*j), &[2]))
                    .collect()
            }
            FamilyKind::WSubclass => Ok(vec![make_state("W3_equal", &[])?.state]),
        }
    }

    pub fn label(&self) -> String {
        let codes = |ps: &[Pauli]| ps.iter().map(|p| p.code().to_string()).collect::<String>();
        match &self.kind {
            FamilyKind::Arbitrary => format!("arbitrary:{}", self.num_qubits),
            FamilyKind::GhzSubclass(ps) => format!("ghz_subclass:{}", codes(ps)),
            FamilyKind::OmegaSubclass(i, j) => format!("omega_subclass:{}", codes(&[*i, *j])),
            FamilyKind::WSubclass => "w_subclass".into(),
        }
    }
}

fn sparse(n: usize, entries: &[(usize, f64)]) -> Vec<C64> {
    let mut v = vec![C64::default(); 1 << n];
    for &(i, a) in entries {
        v[i] = c(a, 0.0);
    }
    v
}

fn combine(n: usize, basis: &[PureState], coeffs: &[C64]) -> Result<PureState> {
    let mut amps = vec![C64::default(); 1 << n];
    for (b, w) in basis.iter().zip(coeffs) {
        for (a, x) in amps.iter_mut().zip(b.amplitudes()) {
            *a += w * x;
        }
    }
    PureState::normalized(n, amps)
}

/// Family basis vectors, then every `(e_i + e_j)/√2` and `(e_i + i e_j)/√2`,
/// then [`RANDOM_PROBES`] seeded random members.
pub fn probe_states(family: &UnknownFamily, seed: u64) -> Result<Vec<PureState>> {
    let k = family.num_qubits;
    let basis = family.basis()?;
    let m = basis.len();
    let mut out = basis.clone();
    for i in 0..m {
        for j in i + 1..m {
            for phase in [c(1.0, 0.0), c(0.0, 1.0)] {
                let mut w = vec![C64::default(); m];
                w[i] = c(1.0, 0.0);
                w[j] = phase;
                out.push(combine(k, &basis, &w)?);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_PROBES {
        let w: Vec<C64> = (0..m).map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        out.push(combine(k, &basis, &w)?);
    }
    Ok(out)
}

/// Number of structured (non-random) probes for a family.
pub fn structured_probe_count(family: &UnknownFamily) -> Result<usize> {
    let m = family.basis()?.len();
    Ok(m + m * (m - 1))
}

/// Joint-register index of a qubit name (`a`, `b`, `c` or `1`..`4`).
pub fn joint_index(unknown_qubits: usize, name: &str) -> Result<usize> {
    match name {
        "a" | "b" | "c" => {
            let idx = (name.as_bytes()[0] - b'a') as usize;
            if idx >= unknown_qubits {
                return Err(Error::QubitOutOfRange { qubit: idx, num_qubits: unknown_qubits });
            }
            Ok(idx)
        }
        "1" | "2" | "3" | "4" => Ok(unknown_qubits + (name.as_bytes()[0] - b'1') as usize),
        _ => Err(Error::InvalidLabel(name.into())),
    }
}

/// Display name of a joint-register index.
pub fn qubit_name(unknown_qubits: usize, index: usize) -> String {
    if index < unknown_qubits {
        ["a", "b", "c"][index].into()
    } else {
        (index - unknown_qubits + 1).to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Party {
    pub name: String,
    pub qubits: Vec<usize>,
}

/// Ownership of every joint qubit. The receiver only holds resource qubits;
/// the relay is whoever holds qubit `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartyDistribution {
    unknown_qubits: usize,
    parties: Vec<Party>,
    receiver: usize,
}

impl PartyDistribution {
    pub fn new(unknown_qubits: usize, parties: Vec<Party>, receiver: &str) -> Result<Self> {
        let total = unknown_qubits + 4;
        let mut seen = vec![false; total];
        for p in &parties {
            for &q in &p.qubits {
                if q >= total {
                    return Err(Error::QubitOutOfRange { qubit: q, num_qubits: total });
                }
                if seen[q] {
                    return Err(Error::DuplicateQubit(q));
                }
                seen[q] = true;
            }
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(Error::PlanMismatch(format!("qubit {} has no owner", qubit_name(unknown_qubits, q))));
        }
        let receiver =
            parties.iter().position(|p| p.name == receiver).ok_or_else(|| Error::UnknownName(receiver.into()))?;
        let r = &parties[receiver];
        if r.qubits.is_empty() || r.qubits.iter().any(|&q| q < unknown_qubits) {
            return Err(Error::PlanMismatch("receiver must hold only resource qubits".into()));
        }
        if receiver == 0 && parties.len() == 1 {
            return Err(Error::PlanMismatch("no sender".into()));
        }
        let mut parties = parties;
        parties[receiver].qubits.sort_unstable();
        Ok(Self { unknown_qubits, parties, receiver })
    }

    /// Builds a distribution from qubit names, e.g. `[("Alice", &["a","1"]), ("Bob", &["4"])]`.
    pub fn from_names(unknown_qubits: usize, parties: &[(&str, &[&str])], receiver: &str) -> Result<Self> {
        let ps = parties
            .iter()
            .map(|(name, qs)| {
                Ok(Party {
                    name: (*name).into(),
                    qubits: qs.iter().map(|q| joint_index(unknown_qubits, q)).collect::<Result<_>>()?,
                })
            })
            .collect::<Result<_>>()?;
        Self::new(unknown_qubits, ps, receiver)
    }

    pub fn parties(&self) -> &[Party] {
        &self.parties
    }

    pub fn unknown_qubits(&self) -> usize {
        self.unknown_qubits
    }

    pub fn receiver(&self) -> &Party {
        &self.parties[self.receiver]
    }

    pub fn owner(&self, qubit: usize) -> Option<usize> {
        self.parties.iter().position(|p| p.qubits.contains(&qubit))
    }

    pub fn relay(&self) -> usize {
        self.owner(0).unwrap_or(0)
    }
}

/// Correction classes searched by [`synthesize_corrections`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AllowedOps {
    Paulis,
    PaulisCz,
    PaulisDiagonal,
}

/// Receiver-side correction: optional CZ, then optional diagonal signs, then
/// one Pauli per receiver qubit. Positions refer to the receiver's qubits in
/// ascending order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Correction {
    pub paulis: Vec<Pauli>,
    pub cz: Option<(usize, usize)>,
    /// Bit `x` set means `-1` on receiver basis index `x`.
    pub diag: Option<u64>,
}

impl Correction {
    pub fn paulis(paulis: Vec<Pauli>) -> Self {
        Self { paulis, cz: None, diag: None }
    }

    pub fn num_qubits(&self) -> usize {
        self.paulis.len()
    }

    /// The ordered operator list, as `(receiver positions, unitary)`.
    pub fn ops(&self) -> Vec<(Vec<usize>, LocalUnitary)> {
        let r = self.paulis.len();
        let mut ops = Vec::new();
        if let Some((p, q)) = self.cz {
            ops.push((vec![p, q], LocalUnitary::cz()));
        }
        if let Some(mask) = self.diag {
            ops.push(((0..r).collect(), LocalUnitary::diagonal_signs(r, mask)));
        }
        for (i, p) in self.paulis.iter().enumerate() {
            ops.push((vec![i], LocalUnitary::pauli(*p)));
        }
        ops
    }

    /// The full receiver unitary.
    pub fn unitary(&self) -> Result<LocalUnitary> {
        let r = self.paulis.len();
        let mut u = LocalUnitary::pauli_string(&self.paulis);
        if let Some(mask) = self.diag {
            u = u.compose(&LocalUnitary::diagonal_signs(r, mask))?;
        }
        if let Some((p, q)) = self.cz {
            let mut mask = 0u64;
            for x in 0..1usize << r {
                if (x >> (r - 1 - p)) & 1 == 1 && (x >> (r - 1 - q)) & 1 == 1 {
                    mask |= 1 << x;
                }
            }
            u = u.compose(&LocalUnitary::diagonal_signs(r, mask))?;
        }
        Ok(u)
    }

    pub fn apply(&self, residual: &PureState) -> Result<PureState> {
        let all: Vec<usize> = (0..self.paulis.len()).collect();
        residual.apply_local(&self.unitary()?, &all)
    }
}

impl fmt::Display for Correction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<&str> = self.paulis.iter().map(|p| p.symbol()).collect();
        write!(f, "{}", ps.join("⊗"))?;
        if let Some(mask) = self.diag {
            write!(f, " · D[{mask:#x}]")?;
        }
        if let Some((p, q)) = self.cz {
            write!(f, " · CZ({p},{q})")?;
        }
        Ok(())
    }
}

/// Outcome label tuple to correction.
pub type CorrectionTable = BTreeMap<Vec<String>, Correction>;

/// Corrections in the lexicographic search order: Pauli tuples outermost, then
/// CZ placement or diagonal mask (identity first).
pub fn candidate_corrections(receiver_qubits: usize, allowed: AllowedOps) -> Vec<Correction> {
    let r = receiver_qubits;
    let mut extras: Vec<(Option<(usize, usize)>, Option<u64>)> = vec![(None, None)];
    match allowed {
        AllowedOps::Paulis => {}
        AllowedOps::PaulisCz => {
            for p in 0..r {
                for q in p + 1..r {
                    extras.push((Some((p, q)), None));
                }
            }
        }
        AllowedOps::PaulisDiagonal => {
            for mask in 1..1u64 << (1usize << r) {
                extras.push((None, Some(mask)));
            }
        }
    }
    let mut out = Vec::new();
    for code in 0..1usize << (2 * r) {
        let paulis: Vec<Pauli> =
            (0..r).map(|i| Pauli::from_code(((code >> (2 * (r - 1 - i))) & 3) as u8).unwrap_or(Pauli::I)).collect();
        for &(cz, diag) in &extras {
            out.push(Correction { paulis: paulis.clone(), cz, diag });
        }
    }
    out
}

/// Where a scenario's corrections come from.
#[derive(Clone, Debug, PartialEq)]
pub enum CorrectionSpec {
    Synthesize(AllowedOps),
    Table(CorrectionTable),
}

/// What a scenario is expected to show.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub feasible: bool,
    pub cost_cbits: Option<u32>,
}

/// A residual written as a 2×2 real map on `(α, β)`, used to compare printed
/// rewrites against the derived ones.
#[derive(Clone, Debug, PartialEq)]
pub struct PrintedResidual {
    pub outcome: Vec<String>,
    pub text: String,
    pub map: [f64; 4],
}

#[derive(Clone, Debug, PartialEq)]
pub struct TeleportScenario {
    pub id: String,
    pub resource: NamedState,
    pub family: UnknownFamily,
    pub distribution: PartyDistribution,
    pub plan: MeasurementPlan,
    pub corrections: CorrectionSpec,
    pub expected: Option<Expectation>,
    pub printed_residuals: Vec<PrintedResidual>,
}

impl TeleportScenario {
    /// Checks that the plan measures exactly the sender-side qubits, one
    /// owner per step, and that the receiver register matches the family.
    pub fn validate(&self) -> Result<()> {
        let d = &self.distribution;
        let k = self.family.num_qubits();
        if d.unknown_qubits() != k || self.resource.state.num_qubits() != 4 {
            return Err(Error::PlanMismatch("distribution does not match family and resource".into()));
        }
        let recv = &d.receiver().qubits;
        if recv.len() != k {
            return Err(Error::PlanMismatch(format!("receiver holds {} qubits, family has {k}", recv.len())));
        }
        let mut measured = self.plan.measured_qubits();
        measured.sort_unstable();
        let senders: Vec<usize> = (0..k + 4).filter(|q| !recv.contains(q)).collect();
        if measured != senders {
            return Err(Error::PlanMismatch("plan must measure every sender-side qubit".into()));
        }
        self.step_owners().map(|_| ())
    }

    /// Owning party of every plan step.
    pub fn step_owners(&self) -> Result<Vec<usize>> {
        self.plan
            .steps()
            .iter()
            .map(|s| {
                let o = self.distribution.owner(s.targets[0]);
                if s.targets.iter().any(|&q| self.distribution.owner(q) != o) {
                    return Err(Error::PlanMismatch(format!("step on {:?} spans several parties", s.targets)));
                }
                o.ok_or_else(|| Error::PlanMismatch("unowned qubit".into()))
            })
            .collect()
    }
}

/// Branches of every probe, keyed by outcome.
struct ProbeRun {
    probe: PureState,
    branches: Vec<(Vec<String>, f64, PureState)>,
}

fn run_probes(s: &TeleportScenario, probes: &[PureState]) -> Result<Vec<ProbeRun>> {
    s.validate()?;
    let recv = &s.distribution.receiver().qubits;
    probes
        .iter()
        .map(|p| {
            let joint = p.tensor(&s.resource.state)?;
            let branches = enumerate_outcomes(&joint, &s.plan)?
                .into_iter()
                .map(|b| {
                    if &b.residual_qubits != recv {
                        return Err(Error::PlanMismatch("residual is not the receiver register".into()));
                    }
                    Ok((b.labels, b.probability, b.residual))
                })
                .collect::<Result<_>>()?;
            Ok(ProbeRun { probe: p.clone(), branches })
        })
        .collect()
}

fn reachable(runs: &[ProbeRun]) -> BTreeSet<Vec<String>> {
    runs.iter().flat_map(|r| r.branches.iter().map(|b| b.0.clone())).collect()
}

/// Lowest fidelity of `corr` over every probe in which `outcome` occurs.
fn outcome_fidelity(runs: &[ProbeRun], outcome: &[String], corr: &Correction) -> Result<f64> {
    let u = corr.unitary()?;
    let all: Vec<usize> = (0..corr.num_qubits()).collect();
    let mut worst = 1.0f64;
    for r in runs {
        for (labels, _, residual) in &r.branches {
            if labels.as_slice() == outcome {
                let f = residual.apply_local(&u, &all)?.fidelity(&r.probe)?;
                worst = worst.min(f);
            }
        }
    }
    Ok(worst)
}

/// Per-outcome best achievable fidelity when no allowed correction works.
#[derive(Clone, Debug, PartialEq)]
pub struct InfeasibilityCertificate {
    pub allowed: AllowedOps,
    /// Outcome, best correction found and its worst fidelity over the probes.
    pub best: Vec<(Vec<String>, Correction, f64)>,
    pub worst_fidelity: f64,
}

impl InfeasibilityCertificate {
    /// True when some outcome stays below `1 - INFEASIBLE_MARGIN`.
    pub fn is_bounded_away(&self) -> bool {
        self.worst_fidelity < 1.0 - INFEASIBLE_MARGIN
    }

    /// Best-effort table, one entry per outcome.
    pub fn table(&self) -> CorrectionTable {
        self.best.iter().map(|(o, c, _)| (o.clone(), c.clone())).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Synthesis {
    Feasible(CorrectionTable),
    Infeasible(InfeasibilityCertificate),
}

fn synthesize_on(runs: &[ProbeRun], receiver_qubits: usize, allowed: AllowedOps, tol: f64) -> Result<Synthesis> {
    let candidates = candidate_corrections(receiver_qubits, allowed);
    let mut table = CorrectionTable::new();
    let mut best = Vec::new();
    let mut feasible = true;
    for outcome in reachable(runs) {
        let mut top: Option<(Correction, f64)> = None;
        for cand in &candidates {
            let f = outcome_fidelity(runs, &outcome, cand)?;
            if top.as_ref().is_none_or(|(_, bf)| f > *bf) {
                top = Some((cand.clone(), f));
            }
            if f >= 1.0 - tol {
                break;
            }
        }
        let (corr, f) = top.ok_or_else(|| Error::MissingCorrection(outcome.join(",")))?;
        if f < 1.0 - tol {
            feasible = false;
        }
        table.insert(outcome.clone(), corr.clone());
        best.push((outcome, corr, f));
    }
    if feasible {
        Ok(Synthesis::Feasible(table))
    } else {
        let worst_fidelity = best.iter().map(|b| b.2).fold(1.0, f64::min);
        Ok(Synthesis::Infeasible(InfeasibilityCertificate { allowed, best, worst_fidelity }))
    }
}

/// Searches, outcome by outcome, for the first allowed correction that gives
/// fidelity 1 on every probe.
pub fn synthesize_corrections(
    resource: &NamedState,
    plan: &MeasurementPlan,
    distribution: &PartyDistribution,
    family: &UnknownFamily,
    allowed: AllowedOps,
    seed: u64,
) -> Result<Synthesis> {
    let s = TeleportScenario {
        id: String::new(),
        resource: resource.clone(),
        family: family.clone(),
        distribution: distribution.clone(),
        plan: plan.clone(),
        corrections: CorrectionSpec::Synthesize(allowed),
        expected: None,
        printed_residuals: Vec::new(),
    };
    let runs = run_probes(&s, &probe_states(family, seed)?)?;
    synthesize_on(&runs, family.num_qubits(), allowed, TOL)
}

/// Cbits sent by one party.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartyCost {
    pub party: String,
    pub cbits: u32,
}

pub(crate) fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Hop-counting cost. The relay (holder of `a`) sends enough bits to name
/// the correction; every other measuring sender sends enough bits to name
/// the class of its outcomes, two outcomes sharing a class when they lead to
/// the same correction whatever the other parties saw.
pub fn cost_from_table(
    scenario: &TeleportScenario,
    table: &CorrectionTable,
    reachable: &BTreeSet<Vec<String>>,
) -> Result<Vec<PartyCost>> {
    let owners = scenario.step_owners()?;
    let d = &scenario.distribution;
    let relay = d.relay();
    let mut out = Vec::new();
    let mut parties: Vec<usize> = owners.clone();
    parties.sort_unstable();
    parties.dedup();
    if !parties.contains(&relay) {
        parties.insert(0, relay);
    }
    for p in parties {
        let cbits = if p == relay {
            let distinct: BTreeSet<&Correction> = reachable.iter().filter_map(|o| table.get(o)).collect();
            ceil_log2(distinct.len())
        } else {
            let mine: Vec<usize> = (0..owners.len()).filter(|&i| owners[i] == p).collect();
            let mut classes: BTreeMap<Vec<String>, BTreeMap<Vec<String>, &Correction>> = BTreeMap::new();
            for o in reachable {
                let own: Vec<String> = mine.iter().map(|&i| o[i].clone()).collect();
                let rest: Vec<String> = (0..o.len()).filter(|i| !mine.contains(i)).map(|i| o[i].clone()).collect();
                let corr = table.get(o).ok_or_else(|| Error::MissingCorrection(o.join(",")))?;
                classes.entry(own).or_default().insert(rest, corr);
            }
            let distinct: BTreeSet<&BTreeMap<Vec<String>, &Correction>> = classes.values().collect();
            ceil_log2(distinct.len())
        };
        out.push(PartyCost { party: d.parties()[p].name.clone(), cbits });
    }
    Ok(out)
}

/// One row of a report.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeReport {
    pub labels: Vec<String>,
    pub correction: Correction,
    pub min_probability: f64,
    pub max_probability: f64,
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TeleportReport {
    pub scenario_id: String,
    pub per_outcome: Vec<OutcomeReport>,
    pub worst_fidelity: f64,
    /// Worst fidelity over the basis and phase-pair probes only.
    pub structured_worst: f64,
    /// Worst fidelity over the random probes only.
    pub random_worst: f64,
    pub cost_cbits: u32,
    pub party_costs: Vec<PartyCost>,
    pub feasible: bool,
    /// Every probe splits into equiprobable branches.
    pub uniform: bool,
    /// Some completion (`⊥`) outcome occurs with non-negligible probability.
    pub completion_flagged: bool,
    pub certificate: Option<InfeasibilityCertificate>,
    /// Printed residuals that disagree with the derived branch.
    pub printed_mismatches: Vec<PrintedResidual>,
    pub probe_count: usize,
}

impl TeleportReport {
    /// Structured probes correct implies random probes correct.
    pub fn linearity_holds(&self) -> bool {
        self.structured_worst < 1.0 - TOL || self.random_worst >= 1.0 - TOL
    }
}

/// Runs a scenario over its full probe set.
pub fn run_scenario(s: &TeleportScenario, seed: u64) -> Result<TeleportReport> {
    let probes = probe_states(&s.family, seed)?;
    let structured = structured_probe_count(&s.family)?;
    let runs = run_probes(s, &probes)?;
    let reach = reachable(&runs);
    let (table, certificate) = match &s.corrections {
        CorrectionSpec::Table(t) => (t.clone(), None),
        CorrectionSpec::Synthesize(allowed) => match synthesize_on(&runs, s.family.num_qubits(), *allowed, TOL)? {
            Synthesis::Feasible(t) => (t, None),
            Synthesis::Infeasible(cert) => (cert.table(), Some(cert)),
        },
    };
    let mut per: BTreeMap<Vec<String>, OutcomeReport> = BTreeMap::new();
    let (mut structured_worst, mut random_worst) = (1.0f64, 1.0f64);
    let mut uniform = true;
    let mut completion_flagged = false;
    for (pi, r) in runs.iter().enumerate() {
        let p0 = r.branches.first().map_or(0.0, |b| b.1);
        for (labels, p, residual) in &r.branches {
            let corr = table.get(labels).ok_or_else(|| Error::MissingCorrection(labels.join(",")))?;
            let f = corr.apply(residual)?.fidelity(&r.probe)?;
            if pi < structured {
                structured_worst = structured_worst.min(f);
            } else {
                random_worst = random_worst.min(f);
            }
            uniform &= (p - p0).abs() <= TOL;
            completion_flagged |= *p > TOL && labels.iter().any(|l| crate::catalog::is_completion_label(l));
            let e = per.entry(labels.clone()).or_insert(OutcomeReport {
                labels: labels.clone(),
                correction: corr.clone(),
                min_probability: *p,
                max_probability: *p,
                fidelity: f,
            });
            e.min_probability = e.min_probability.min(*p);
            e.max_probability = e.max_probability.max(*p);
            e.fidelity = e.fidelity.min(f);
        }
    }
    let party_costs = cost_from_table(s, &table, &reach)?;
    let worst_fidelity = structured_worst.min(random_worst);
    let printed_mismatches = printed_mismatches(s, &runs)?;
    Ok(TeleportReport {
        scenario_id: s.id.clone(),
        per_outcome: per.into_values().collect(),
        worst_fidelity,
        structured_worst,
        random_worst,
        cost_cbits: party_costs.iter().map(|p| p.cbits).sum(),
        party_costs,
        feasible: worst_fidelity > 1.0 - TOL,
        uniform,
        completion_flagged,
        certificate,
        printed_mismatches,
        probe_count: probes.len(),
    })
}

/// Total cbits of a scenario under its own (or synthesized) correction table.
pub fn classical_cost(s: &TeleportScenario, seed: u64) -> Result<u32> {
    Ok(run_scenario(s, seed)?.cost_cbits)
}

fn printed_mismatches(s: &TeleportScenario, runs: &[ProbeRun]) -> Result<Vec<PrintedResidual>> {
    let mut out = Vec::new();
    for pr in &s.printed_residuals {
        let mut worst = 1.0f64;
        for r in runs {
            if r.probe.num_qubits() != 1 {
                return Err(Error::PlanMismatch("printed residuals are single-qubit maps".into()));
            }
            let (al, be) = (r.probe.amplitude(0), r.probe.amplitude(1));
            let m = pr.map;
            let want = PureState::normalized(1, vec![al * m[0] + be * m[1], al * m[2] + be * m[3]])?;
            for (labels, _, residual) in &r.branches {
                if *labels == pr.outcome {
                    worst = worst.min(residual.fidelity(&want)?);
                }
            }
        }
        if worst < 1.0 - TOL {
            out.push(pr.clone());
        }
    }
    Ok(out)
}

/// Best worst-case fidelity over every basis in `basis_names` measured on
/// `targets` (sender side), with the given correction class.
pub fn sweep_bases(
    resource: &NamedState,
    distribution: &PartyDistribution,
    family: &UnknownFamily,
    targets: &[usize],
    basis_names: &[String],
    allowed: AllowedOps,
    seed: u64,
) -> Result<Vec<(String, f64)>> {
    basis_names
        .iter()
        .map(|name| {
            let plan = MeasurementPlan::new(vec![(targets.to_vec(), make_basis(name)?)])?;
            let w = match synthesize_corrections(resource, &plan, distribution, family, allowed, seed)? {
                Synthesis::Feasible(_) => 1.0,
                Synthesis::Infeasible(c) => c.worst_fidelity,
            };
            Ok((name.clone(), w))
        })
        .collect()
}

struct Def<'a> {
    id: String,
    resource: &'a str,
    family: UnknownFamily,
    parties: &'a [(&'a str, &'a [&'a str])],
    steps: Vec<(String, &'a [&'a str])>,
    allowed: AllowedOps,
    expected: Expectation,
}

fn build(def: Def<'_>) -> Result<TeleportScenario> {
    let k = def.family.num_qubits();
    let distribution = PartyDistribution::from_names(k, def.parties, "Bob")?;
    let steps = def
        .steps
        .iter()
        .map(|(basis, qs)| Ok((qs.iter().map(|q| joint_index(k, q)).collect::<Result<Vec<_>>>()?, make_basis(basis)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TeleportScenario {
        id: def.id,
        resource: make_state(def.resource, &[])?,
        family: def.family,
        distribution,
        plan: MeasurementPlan::new(steps)?,
        corrections: CorrectionSpec::Synthesize(def.allowed),
        expected: Some(def.expected),
        printed_residuals: Vec::new(),
    })
}

fn yes(cost: u32) -> Expectation {
    Expectation { feasible: true, cost_cbits: Some(cost) }
}

const NO: Expectation = Expectation { feasible: false, cost_cbits: None };

fn printed(outcome: &str, text: &str, map: [f64; 4]) -> PrintedResidual {
    PrintedResidual { outcome: vec![outcome.into()], text: text.into(), map }
}

const ALICE_4: &[(&str, &[&str])] = &[("Alice", &["a", "1", "2", "3"]), ("Bob", &["4"])];

/// Every built-in scenario id, in suite order.
pub fn builtin_ids() -> Vec<String> {
    let mut ids: Vec<String> = [
        "ghz_1q_4p",
        "ghz_1q_3p1_2party",
        "ghz_1q_3p1_3party",
        "ghz_1q_bell_bell",
        "ghz_1q_bell_1_1_2party",
        "ghz_1q_bell_1_1_3party",
        "ghz_1q_bell_1_1_4party",
        "omega_1q_omega_basis",
        "omega_1q_ghz_basis",
        "omega_1q_3p1",
        "omega_1q_3p1_3party",
        "omega_1q_bell_bell",
        "omega_1q_bell_bell_3party",
        "w11_1q",
        "q4_1q_rho",
        "q4_1q_tau",
        "q4_11_1q",
        "q5_1q_varphi",
        "q5_1q_xi",
        "q5_1q_omega3",
        "omega_2q_omega16",
        "omega_2q_bell_bell_cz",
        "w_3q_equal",
        "w_plain_1q",
        "q4_bob4_1q",
        "omega_2q_bell_bell_paulis",
    ]
    .iter()
    .map(|s| (*s).into())
    .collect();
    for i in 0..4 {
        for j in 0..4 {
            ids.push(format!("ghz_2q_subclass:{i}{j}"));
        }
    }
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                ids.push(format!("ghz_3q_subclass:{i}{j}{k}"));
            }
        }
    }
    for i in 0..4 {
        for j in 0..4 {
            ids.push(format!("omega_3q_subclass:{i}{j}"));
        }
    }
    ids
}

fn pauli_digits(s: &str, n: usize, id: &str) -> Result<Vec<Pauli>> {
    if s.len() != n {
        return Err(Error::UnknownName(id.into()));
    }
    s.chars()
        .map(|ch| ch.to_digit(10).and_then(|d| Pauli::from_code(d as u8)).ok_or_else(|| Error::UnknownName(id.into())))
        .collect()
}

/// Builds a built-in scenario by id (see [`builtin_ids`]).
pub fn builtin_scenario(id: &str) -> Result<TeleportScenario> {
    let a1 = || UnknownFamily::arbitrary(1);
    let st = |b: &str| b.to_string();
    let (base, suffix) = match id.split_once(':') {
        Some((b, s)) => (b, Some(s)),
        None => (id, None),
    };
    let def = match (base, suffix) {
        ("ghz_1q_4p", None) => Def {
            id: id.into(),
            resource: "GHZ4",
            family: a1()?,
            parties: ALICE_4,
            steps: vec![(st("ghz4_full"), &["a", "1", "2", "3"])],
            allowed: AllowedOps::Paulis,
            expected: yes(2),
        },
        ("ghz_1q_3p1_2party", None) | ("omega_1q_3p1", None) => Def {
            id: id.into(),
            resource: if base.starts_with("ghz") { "GHZ4" } else { "Omega" },
            family: a1()?,
            parties: ALICE_4,
            steps: vec![(st("ghz3_full"), &["a", "1", "2"]), (st("plus_minus"), &["3"])],
            allowed: AllowedOps::Paulis,
            expected: yes(2),
        },
        ("ghz_1q_3p1_3party", None) | ("omega_1q_3p1_3party", None) => Def {
            id: id.into(),
            resource: if base.starts_with("ghz") { "GHZ4" } else { "Omega" },
            family: a1()?,
            parties: &[("Alice", &["a", "1", "2"]), ("Charlie", &["3"]), ("Bob", &["4"])],
            steps: vec![(st("ghz3_full"), &["a", "1", "2"]), (st("plus_minus"), &["3"])],
            allowed: AllowedOps::Paulis,
            expected: yes(3),
        },
        ("ghz_1q_bell_bell", None) => Def {
            id: id.into(),
            resource: "GHZ4",
            family: a1()?,
            parties: ALICE_4,
            steps: vec![(st("bell"), &["a", "1"]), (st("bell"), &["2", "3"])],
            allowed: AllowedOps::Paulis,
            expected: yes(2),
        },
        ("ghz_1q_bell_1_1_2party", None) => Def {
            id: id.into(),
            resource: "GHZ4",
            family: a1()?,
            parties: ALICE_4,
            steps: vec![(st("bell"), &["a", "1"]), (st("plus_minus"), &["2"]), (st("plus_minus"), &["3"])],
            allowed: AllowedOps::Paulis,
            expected: yes(2),
        },
        ("ghz_1q_bell_1_1_3party", None) => Def {
            id: id.into(),
            resource: "GHZ4",
            family: a1()?,
            parties: &[("Alice", &["a", "1", "2"]), ("Charlie", &["3"]), ("Bob", &["4"])],
            steps: vec![(st("bell"), &["a", "1"]), (st("plus_minus"), &["2"]), (st("plus_minus"), &["3"])],
            allowed: AllowedOps::Paulis,
            expected: yes(3),
        },
        ("ghz_1q_bell_1_1_4party", None) => Def {
            id: id.into(),
            resource: "GHZ4",
            family: a1()?,
            parties: &[("Alice", &["a", "1"]), ("Charlie", &["2"]), ("David", &["3"]), ("Bob", &["4"])],
            steps: vec![(st("bell"), &["a", "1"]), (st("plus_minus"), &["2"]), (st("plus_minus"), &["3"])],
            allowed: AllowedOps::Paulis,
            expected: yes(4),
        },
        ("omega_1q_omega_basis", None) => Def {
            id: id.into(),
            resource: "Omega",
            family: a1()?,
            parties: ALICE_4,
            steps: vec![(st("omega_meas"), &["a", "1", "2", "3"])],
            allowed: AllowedOps::Paulis,
            expected: yes(2),
        },
        ("omega_1q_ghz_basis", None) => Def {
            id: id.into(),
            resource: "Omega",
            family: a1()?,
            parties: ALICE_4,
            steps: vec![(st("ghz4_full"), &["a", "1", "2", "3"])],
            allowed: AllowedOps::Paulis,
            expected: yes(2),
        },
        ("omega_1q_bell_bell", None) => Def {
            id: id.into(),
            resource: "Omega",
            family: a1()?,
            parties: ALICE_4,
            steps: vec![(st("bell"), &["a", "2"]), (st("bell"), &["1", "3"])],
            allowed: AllowedOps::Paulis,
            expected: yes(2),
        },
        ("omega_1q_bell_bell_3party", None) => Def {
            id: id.into(),
            resource: "Omega",
            family: a1()?,
            parties: &[("Alice", &["a", "2"]), ("Charlie", &["1", "3"]), ("Bob", &["4"])],
            steps: vec![(st("bell"), &["a", "2"]), (st("bell"), &["1", "3"])],
            allowed: AllowedOps::Paulis,
            expected: yes(4),
        },
        ("w11_1q", None) => Def {
            id: id.into(),
            resource: "W11",
            family: a1()?,
            parties: ALICE_4,
            steps: vec![(st("eta_zeta_W11"), &["a", "1", "2", "3"])],
            allowed: AllowedOps::Paulis,
            expected: yes(2),
        },
        ("q4_1q_rho", None) | ("q4_1q_tau", None) => Def {
            id: id.into(),
            resource: "Q4",
            family: a1()?,
            parties: &[("Alice", &["a", "1", "3", "4"]), ("Bob", &["2"])],
            steps: vec![(st(if base.ends_with("rho") { "rho_Q4" } else { "tau_Q4" }), &["a", "1", "3", "4"])],
            allowed: AllowedOps::Paulis,
            expected: yes(2),
        },
        ("q4_11_1q", None) => Def {
            id: id.into(),
            resource: "Q4_11",
            family: a1()?,
            parties: ALICE_4,
            steps: vec![(st("eta_zeta_Q4"), &["a", "1", "2", "3"])],
            allowed: AllowedOps::Paulis,
            expected: yes(2),
        },
        ("q5_1q_varphi", None) | ("q5_1q_xi", None) => Def {
            id: id.into(),
            resource: "Q5",
            family: a1()?,
            parties: ALICE_4,
            steps: vec![(st(if base.ends_with("xi") { "xi_Q5" } else { "varphi_Q5" }), &["a", "1", "2", "3"])],
            allowed: AllowedOps::Paulis,
            expected: yes(2),
        },
        ("q5_1q_omega3", None) => Def {
            id: id.into(),
            resource: "Q5",
            family: a1()?,
            parties: ALICE_4,
            steps: vec![(st("omega3_Q5"), &["a", "2", "3"]), (st("plus_minus"), &["1"])],
            allowed: AllowedOps::Paulis,
            expected: yes(2),
        },
        ("omega_2q_omega16", None) => Def {
            id: id.into(),
            resource: "Omega",
            family: UnknownFamily::arbitrary(2)?,
            parties: &[("Alice", &["a", "b", "1", "2"]), ("Bob", &["3", "4"])],
            steps: vec![(st("omega16"), &["a", "b", "1", "2"])],
            allowed: AllowedOps::Paulis,
            expected: yes(4),
        },
        ("omega_2q_bell_bell_cz", None) | ("omega_2q_bell_bell_paulis", None) => {
            let cz = base.ends_with("cz");
            Def {
                id: id.into(),
                resource: "Omega",
                family: UnknownFamily::arbitrary(2)?,
                parties: &[("Alice", &["a", "b", "1", "2"]), ("Bob", &["3", "4"])],
                steps: vec![(st("bell"), &["a", "2"]), (st("bell"), &["b", "1"])],
                allowed: if cz { AllowedOps::PaulisCz } else { AllowedOps::Paulis },
                expected: if cz { yes(4) } else { NO },
            }
        }
        ("w_3q_equal", None) => Def {
            id: id.into(),
            resource: "W4",
            family: UnknownFamily::w_subclass(),
            parties: &[("Alice", &["a", "b", "c", "1"]), ("Bob", &["2", "3", "4"])],
            steps: vec![(st("sigma_W"), &["a", "b", "c", "1"])],
            allowed: AllowedOps::PaulisDiagonal,
            expected: yes(1),
        },
        ("w_plain_1q", None) => Def {
            id: id.into(),
            resource: "W4",
            family: a1()?,
            parties: ALICE_4,
            steps: vec![(st("ghz4_full"), &["a", "1", "2", "3"])],
            allowed: AllowedOps::Paulis,
            expected: NO,
        },
        ("q4_bob4_1q", None) => Def {
            id: id.into(),
            resource: "Q4",
            family: a1()?,
            parties: ALICE_4,
            steps: vec![(st("tau_Q4"), &["a", "1", "2", "3"])],
            allowed: AllowedOps::Paulis,
            expected: NO,
        },
        ("ghz_2q_subclass", Some(s)) => Def {
            id: id.into(),
            resource: "GHZ4",
            family: UnknownFamily::ghz_subclass(pauli_digits(s, 2, id)?)?,
            parties: &[("Alice", &["a", "b", "1", "2"]), ("Bob", &["3", "4"])],
            steps: vec![(format!("pi_2q:{s}"), &["a", "b", "1", "2"])],
            allowed: AllowedOps::Paulis,
            expected: yes(2),
        },
        ("ghz_3q_subclass", Some(s)) => Def {
            id: id.into(),
            resource: "GHZ4",
            family: UnknownFamily::ghz_subclass(pauli_digits(s, 3, id)?)?,
            parties: &[("Alice", &["a", "b", "c", "1"]), ("Bob", &["2", "3", "4"])],
            steps: vec![(format!("pi_3q:{s}"), &["a", "b", "c", "1"])],
            allowed: AllowedOps::Paulis,
            expected: yes(2),
        },
        ("omega_3q_subclass", Some(s)) => {
            let ps = pauli_digits(s, 2, id)?;
            Def {
                id: id.into(),
                resource: "Omega",
                family: UnknownFamily::omega_subclass(ps[0], ps[1]),
                parties: &[("Alice", &["a", "b", "c", "1"]), ("Bob", &["2", "3", "4"])],
                steps: vec![(format!("Omega34_3q:{s}"), &["a", "b", "c", "1"])],
                allowed: AllowedOps::Paulis,
                expected: yes(2),
            }
        }
        _ => return Err(Error::UnknownName(id.into())),
    };
    let mut s = build(def)?;
    s.printed_residuals = match base {
        "ghz_1q_4p" => vec![
            printed("4GHZ1+", "α|0⟩+β|1⟩", [1.0, 0.0, 0.0, 1.0]),
            printed("4GHZ1-", "α|0⟩−β|1⟩", [1.0, 0.0, 0.0, -1.0]),
            printed("4GHZ2+", "α|1⟩+β|0⟩", [0.0, 1.0, 1.0, 0.0]),
            printed("4GHZ2-", "α|1⟩−β|0⟩", [0.0, -1.0, 1.0, 0.0]),
        ],
        "w11_1q" => vec![printed("ζ-", "α|0⟩−β|1⟩", [1.0, 0.0, 0.0, -1.0])],
        "q5_1q_varphi" => vec![printed("φ2-", "α|0⟩−β|1⟩", [1.0, 0.0, 0.0, -1.0])],
        _ => Vec::new(),
    };
    Ok(s)
}

/// All built-in scenarios, in suite order.
pub fn builtin_scenarios() -> Result<Vec<TeleportScenario>> {
    builtin_ids().iter().map(|id| builtin_scenario(id)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probe_counts() {
        assert_eq!(probe_states(&UnknownFamily::arbitrary(1).unwrap(), 1).unwrap().len(), 2 + 2 + RANDOM_PROBES);
        assert_eq!(probe_states(&UnknownFamily::arbitrary(3).unwrap(), 1).unwrap().len(), 8 + 56 + RANDOM_PROBES);
        let g = UnknownFamily::ghz_subclass(vec![Pauli::X, Pauli::Z]).unwrap();
        assert_eq!(probe_states(&g, 1).unwrap().len(), 2 + 2 + RANDOM_PROBES);
        assert_eq!(probe_states(&UnknownFamily::w_subclass(), 1).unwrap().len(), 1 + RANDOM_PROBES);
    }

    #[test]
    fn one_qubit_probes_include_plus_and_plus_i() {
        let p = probe_states(&UnknownFamily::arbitrary(1).unwrap(), 0).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::new(1, vec![c(h, 0.0), c(h, 0.0)]).unwrap();
        let plus_i = PureState::new(1, vec![c(h, 0.0), c(0.0, h)]).unwrap();
        assert!((p[2].fidelity(&plus).unwrap() - 1.0).abs() < 1e-12);
        assert!((p[3].fidelity(&plus_i).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn joint_indices() {
        assert_eq!(joint_index(1, "a").unwrap(), 0);
        assert_eq!(joint_index(1, "4").unwrap(), 4);
        assert_eq!(joint_index(3, "1").unwrap(), 3);
        assert!(joint_index(1, "b").is_err());
        assert_eq!(qubit_name(2, 5), "4");
    }

    #[test]
    fn distribution_must_partition() {
        assert!(PartyDistribution::from_names(1, &[("Alice", &["a", "1", "2"]), ("Bob", &["4"])], "Bob").is_err());
        assert!(PartyDistribution::from_names(1, &[("Alice", &["1", "2", "3", "4"]), ("Bob", &["a"])], "Bob").is_err());
        assert!(PartyDistribution::from_names(1, ALICE_4, "Carol").is_err());
    }

    #[test]
    fn candidate_order() {
        let c1 = candidate_corrections(1, AllowedOps::Paulis);
        assert_eq!(c1.iter().map(|c| c.paulis[0]).collect::<Vec<_>>(), Pauli::ALL.to_vec());
        let c3 = candidate_corrections(3, AllowedOps::PaulisDiagonal);
        assert_eq!(c3.len(), 64 * 256);
        assert_eq!(c3[1].diag, Some(1));
        let c2 = candidate_corrections(2, AllowedOps::PaulisCz);
        assert_eq!(c2.len(), 16 * 2);
        assert_eq!(c2[1].cz, Some((0, 1)));
    }

    #[test]
    fn correction_unitary_matches_ops() {
        let corr = Correction { paulis: vec![Pauli::X, Pauli::Z], cz: Some((0, 1)), diag: Some(0b0110) };
        let v = PureState::from_kets(&[
            ("00", c(0.3, 0.0)),
            ("01", c(0.1, 0.4)),
            ("10", c(-0.5, 0.2)),
            ("11", c(0.6, 0.0)),
        ])
        .unwrap();
        let by_ops = corr.ops().iter().try_fold(v.clone(), |s, (t, u)| s.apply_local(u, t)).unwrap();
        let whole = corr.apply(&v).unwrap();
        for (x, y) in by_ops.amplitudes().iter().zip(whole.amplitudes()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn ghz_four_particle_protocol() {
        let s = builtin_scenario("ghz_1q_4p").unwrap();
        let r = run_scenario(&s, 42).unwrap();
        assert!(r.feasible && r.uniform && !r.completion_flagged);
        assert_eq!(r.cost_cbits, 2);
        assert_eq!(r.per_outcome.len(), 4);
        assert!(r.printed_mismatches.is_empty());
        let codes: Vec<Pauli> = r.per_outcome.iter().map(|o| o.correction.paulis[0]).collect();
        assert_eq!(codes, vec![Pauli::I, Pauli::Z, Pauli::X, Pauli::Y]);
    }

    #[test]
    fn cost_rule() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(16), 4);
    }

    #[test]
    fn every_builtin_builds() {
        let ids = builtin_ids();
        assert_eq!(ids.len(), 26 + 16 + 64 + 16);
        for id in &ids {
            let s = builtin_scenario(id).unwrap();
            s.validate().unwrap();
        }
        assert!(builtin_scenario("nope").is_err());
    }
}
