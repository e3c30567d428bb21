//! Versioned scenario files.
//!
//! A file is `{"version": 1, "entries": [...]}` where every entry carries a
//! `kind` tag. Unknown fields are rejected everywhere.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use quadent_core::catalog::{make_basis, make_state, NamedState};
use quadent_core::densecode::SenderChoice;
use quadent_core::locc;
use quadent_core::measure::MeasurementPlan;
use quadent_core::teleport::{
    builtin_scenario, joint_index, AllowedOps, CorrectionSpec, Expectation, Party, PartyDistribution, TeleportScenario,
    UnknownFamily,
};
use quadent_core::{PureState, C64};

use crate::report::Ket;
use crate::CliError;

pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: u32,
    pub entries: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Entry {
    Teleport(TeleportEntry),
    Densecode(DenseCodeEntry),
    Locc(LoccEntry),
    Diagnose(DiagnoseEntry),
}

impl Entry {
    pub fn kind(&self) -> Kind {
        match self {
            Entry::Teleport(_) => Kind::Teleport,
            Entry::Densecode(_) => Kind::Densecode,
            Entry::Locc(_) => Kind::Locc,
            Entry::Diagnose(_) => Kind::Diagnose,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Teleport,
    Densecode,
    Locc,
    Diagnose,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Teleport => "teleport",
            Kind::Densecode => "densecode",
            Kind::Locc => "locc",
            Kind::Diagnose => "diagnose",
        }
    }
}

/// A catalog name, a parametrized catalog entry, or an inline ket list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateRef {
    Name(String),
    Catalog(CatalogRef),
    Inline(InlineState),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogRef {
    pub catalog: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineState {
    #[serde(default)]
    pub name: Option<String>,
    pub kets: Vec<Ket>,
}

impl StateRef {
    pub fn resolve(&self) -> Result<NamedState, CliError> {
        match self {
            StateRef::Name(n) => Ok(make_state(n, &[])?),
            StateRef::Catalog(c) => {
                let params: Vec<(&str, f64)> = c.params.iter().map(|(k, v)| (k.as_str(), *v)).collect();
                Ok(make_state(&c.catalog, &params)?)
            }
            StateRef::Inline(s) => {
                let terms: Vec<(&str, C64)> = s.kets.iter().map(|k| (k.label.as_str(), C64::new(k.re, k.im))).collect();
                Ok(NamedState {
                    name: s.name.clone().unwrap_or_else(|| "inline".into()),
                    params: Vec::new(),
                    state: PureState::from_kets(&terms)?,
                })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ops {
    Paulis,
    PaulisCz,
    PaulisDiagonal,
}

impl From<Ops> for AllowedOps {
    fn from(o: Ops) -> Self {
        match o {
            Ops::Paulis => AllowedOps::Paulis,
            Ops::PaulisCz => AllowedOps::PaulisCz,
            Ops::PaulisDiagonal => AllowedOps::PaulisDiagonal,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartySpec {
    pub name: String,
    /// Qubit names: `a`, `b`, `c` for the unknown state, `1`..`4` for the resource.
    pub qubits: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepSpec {
    pub basis: String,
    pub qubits: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TeleportEntry {
    pub id: String,
    /// Built-in scenario used as a template; the other fields override it.
    #[serde(default)]
    pub builtin: Option<String>,
    #[serde(default)]
    pub resource: Option<StateRef>,
    /// Size of an arbitrary unknown state; only for scenarios without a template.
    #[serde(default)]
    pub unknown_qubits: Option<usize>,
    #[serde(default)]
    pub parties: Option<Vec<PartySpec>>,
    #[serde(default)]
    pub receiver: Option<String>,
    #[serde(default)]
    pub plan: Option<Vec<StepSpec>>,
    #[serde(default)]
    pub corrections: Option<Ops>,
    #[serde(default)]
    pub expect_feasible: Option<bool>,
    #[serde(default)]
    pub expect_cost: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DenseCodeEntry {
    pub state: StateRef,
    /// Fixed sender qubits (0-based).
    #[serde(default)]
    pub senders: Option<Vec<usize>>,
    /// Try every sender subset of this size instead.
    #[serde(default)]
    pub best: Option<usize>,
    #[serde(default)]
    pub plain_sigma2: bool,
    #[serde(default)]
    pub expect_n: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Candidate {
    pub label: String,
    pub state: StateRef,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoccEntry {
    #[serde(default)]
    pub set: Option<String>,
    #[serde(default)]
    pub candidates: Option<Vec<Candidate>>,
    pub protocol: String,
    #[serde(default)]
    pub expect_success: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnoseEntry {
    pub state: StateRef,
    #[serde(default)]
    pub expect_genuine: Option<bool>,
}

pub fn parse(text: &str) -> Result<ScenarioFile, CliError> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    if file.version != VERSION {
        return Err(CliError::Parse(format!("unsupported scenario version {} (expected {VERSION})", file.version)));
    }
    Ok(file)
}

/// A file entry with every reference resolved.
#[derive(Clone, Debug)]
pub enum Resolved {
    Teleport {
        scenario: Box<TeleportScenario>,
    },
    Densecode {
        state: NamedState,
        choice: SenderChoice,
        plain_sigma2: bool,
        expect_n: Option<usize>,
    },
    Locc {
        set: String,
        candidates: Vec<(String, PureState)>,
        protocol: locc::LoccProtocol,
        expect_success: Option<bool>,
    },
    Diagnose {
        state: NamedState,
        expect_genuine: Option<bool>,
    },
}

fn qubit_indices(k: usize, names: &[String]) -> Result<Vec<usize>, CliError> {
    names.iter().map(|q| joint_index(k, q).map_err(CliError::from)).collect()
}

fn distribution(k: usize, e: &TeleportEntry, ps: &[PartySpec]) -> Result<PartyDistribution, CliError> {
    let parties = ps
        .iter()
        .map(|p| Ok(Party { name: p.name.clone(), qubits: qubit_indices(k, &p.qubits)? }))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(PartyDistribution::new(k, parties, e.receiver.as_deref().unwrap_or("Bob"))?)
}

fn plan(k: usize, steps: &[StepSpec]) -> Result<MeasurementPlan, CliError> {
    let steps = steps
        .iter()
        .map(|st| Ok((qubit_indices(k, &st.qubits)?, make_basis(&st.basis)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(MeasurementPlan::new(steps)?)
}

fn teleport(e: &TeleportEntry) -> Result<TeleportScenario, CliError> {
    let mut s = match &e.builtin {
        Some(id) => {
            let mut s = builtin_scenario(id)?;
            let k = s.family.num_qubits();
            if e.unknown_qubits.is_some_and(|u| u != k) {
                return Err(CliError::Parse(format!("teleport `{}`: unknown_qubits conflicts with `{id}`", e.id)));
            }
            if let Some(r) = &e.resource {
                s.resource = r.resolve()?;
                s.expected = None;
                s.printed_residuals.clear();
            }
            if let Some(ps) = &e.parties {
                s.distribution = distribution(k, e, ps)?;
                s.expected = None;
            }
            if let Some(steps) = &e.plan {
                s.plan = plan(k, steps)?;
                s.expected = None;
                s.printed_residuals.clear();
            }
            s
        }
        None => {
            let (Some(resource), Some(ps), Some(steps)) = (&e.resource, &e.parties, &e.plan) else {
                return Err(CliError::Parse(format!(
                    "teleport `{}` needs `builtin` or resource, parties and plan",
                    e.id
                )));
            };
            let k = e.unknown_qubits.unwrap_or(1);
            TeleportScenario {
                id: e.id.clone(),
                resource: resource.resolve()?,
                family: UnknownFamily::arbitrary(k)?,
                distribution: distribution(k, e, ps)?,
                plan: plan(k, steps)?,
                corrections: CorrectionSpec::Synthesize(AllowedOps::Paulis),
                expected: None,
                printed_residuals: Vec::new(),
            }
        }
    };
    s.id = e.id.clone();
    if let Some(ops) = e.corrections {
        s.corrections = CorrectionSpec::Synthesize(ops.into());
        s.expected = None;
    }
    if e.expect_feasible.is_some() || e.expect_cost.is_some() {
        s.expected = Some(Expectation { feasible: e.expect_feasible.unwrap_or(true), cost_cbits: e.expect_cost });
    }
    s.validate()?;
    Ok(s)
}

pub fn resolve(entry: &Entry) -> Result<Resolved, CliError> {
    Ok(match entry {
        Entry::Teleport(e) => Resolved::Teleport { scenario: Box::new(teleport(e)?) },
        Entry::Densecode(e) => {
            let choice = match (&e.senders, e.best) {
                (Some(q), None) => SenderChoice::Fixed(q.clone()),
                (None, Some(k)) => SenderChoice::Best(k),
                _ => return Err(CliError::Parse("densecode entries need exactly one of `senders` and `best`".into())),
            };
            Resolved::Densecode {
                state: e.state.resolve()?,
                choice,
                plain_sigma2: e.plain_sigma2,
                expect_n: e.expect_n,
            }
        }
        Entry::Locc(e) => {
            let (set, candidates) = match (&e.set, &e.candidates) {
                (Some(name), None) => (name.clone(), locc::candidate_set(name)?),
                (None, Some(cs)) => (
                    "inline".to_string(),
                    cs.iter()
                        .map(|c| Ok((c.label.clone(), c.state.resolve()?.state)))
                        .collect::<Result<Vec<_>, CliError>>()?,
                ),
                _ => return Err(CliError::Parse("locc entries need exactly one of `set` and `candidates`".into())),
            };
            Resolved::Locc { set, candidates, protocol: locc::protocol(&e.protocol)?, expect_success: e.expect_success }
        }
        Entry::Diagnose(e) => Resolved::Diagnose { state: e.state.resolve()?, expect_genuine: e.expect_genuine },
    })
}
