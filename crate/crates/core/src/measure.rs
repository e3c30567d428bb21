//! Projective measurements on qubit subsets: exhaustive branch enumeration and
//! seeded sampling.

use alloc::{string::String, vec, vec::Vec};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{is_completion_label, validate_orthonormal, NamedBasis};
use crate::state::{check_targets, complement, sub_offsets, PureState, C64};
use crate::{Error, Result};

/// Branches lighter than this are dropped from enumeration.
pub const DROP_PROBABILITY: f64 = 1e-12;

/// One measurement in a plan: a complete basis on an ordered list of qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementStep {
    pub targets: Vec<usize>,
    pub basis: NamedBasis,
}

/// Ordered measurement steps on pairwise disjoint qubit sets.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementPlan {
    steps: Vec<MeasurementStep>,
}

impl MeasurementPlan {
    /// Validates the steps and completes any basis that spans a proper subspace.
    pub fn new(steps: Vec<(Vec<usize>, NamedBasis)>) -> Result<Self> {
        let mut seen: Vec<usize> = Vec::new();
        let mut out = Vec::with_capacity(steps.len());
        for (targets, basis) in steps {
            if targets.is_empty() {
                return Err(Error::EmptySubset);
            }
            for &q in &targets {
                if seen.contains(&q) {
                    return Err(Error::OverlappingTargets(q));
                }
                seen.push(q);
            }
            if basis.num_qubits() != targets.len() {
                return Err(Error::DimensionMismatch { expected: targets.len(), found: basis.num_qubits() });
            }
            if !validate_orthonormal(&basis).passed {
                return Err(Error::IncompleteBasis(basis.name.clone()));
            }
            let basis = if basis.is_complete() { basis } else { basis.completed()? };
            out.push(MeasurementStep { targets, basis });
        }
        Ok(Self { steps: out })
    }

    pub fn steps(&self) -> &[MeasurementStep] {
        &self.steps
    }

    /// Measured qubits in step order.
    pub fn measured_qubits(&self) -> Vec<usize> {
        self.steps.iter().flat_map(|s| s.targets.iter().copied()).collect()
    }

    fn check_register(&self, num_qubits: usize) -> Result<()> {
        check_targets(&self.measured_qubits(), num_qubits)
    }
}

/// One joint outcome of a plan.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeBranch {
    /// One label per step.
    pub labels: Vec<String>,
    pub probability: f64,
    /// Post-measurement state of the unmeasured qubits.
    pub residual: PureState,
    /// Original indices of the residual's qubits, ascending.
    pub residual_qubits: Vec<usize>,
}

impl OutcomeBranch {
    /// True when some step landed on a vector added by basis completion.
    pub fn hits_completion(&self) -> bool {
        self.labels.iter().any(|l| is_completion_label(l))
    }
}

/// Projects the listed register positions onto `bra` and returns the
/// unnormalized state on the remaining positions (ascending).
fn contract(amps: &[C64], n: usize, positions: &[usize], bra: &PureState) -> Vec<C64> {
    let rest = complement(n, positions);
    let to = sub_offsets(n, positions);
    let ro = sub_offsets(n, &rest);
    ro.iter().map(|r| bra.amplitudes().iter().zip(&to).map(|(b, t)| b.conj() * amps[t | r]).sum()).collect()
}

/// Every outcome with probability at least [`DROP_PROBABILITY`], in
/// lexicographic order of basis indices.
pub fn enumerate_outcomes(state: &PureState, plan: &MeasurementPlan) -> Result<Vec<OutcomeBranch>> {
    plan.check_register(state.num_qubits())?;
    let mut out = Vec::new();
    let remaining: Vec<usize> = (0..state.num_qubits()).collect();
    walk(plan, 0, state.amplitudes().to_vec(), remaining, &mut Vec::new(), &mut out)?;
    Ok(out)
}

fn walk(
    plan: &MeasurementPlan,
    step: usize,
    amps: Vec<C64>,
    remaining: Vec<usize>,
    labels: &mut Vec<String>,
    out: &mut Vec<OutcomeBranch>,
) -> Result<()> {
    let weight: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if weight < DROP_PROBABILITY {
        return Ok(());
    }
    let Some(s) = plan.steps.get(step) else {
        let n = remaining.len();
        out.push(OutcomeBranch {
            labels: labels.clone(),
            probability: weight,
            residual: PureState::normalized(n, amps)?,
            residual_qubits: remaining,
        });
        return Ok(());
    };
    let n = remaining.len();
    let positions: Vec<usize> = s
        .targets
        .iter()
        .map(|q| remaining.iter().position(|r| r == q).ok_or(Error::QubitOutOfRange { qubit: *q, num_qubits: n }))
        .collect::<Result<_>>()?;
    let next_remaining: Vec<usize> = remaining.iter().copied().filter(|q| !s.targets.contains(q)).collect();
    for (label, bra) in s.basis.labels().iter().zip(s.basis.vectors()) {
        let sub = contract(&amps, n, &positions, bra);
        labels.push(label.clone());
        walk(plan, step + 1, sub, next_remaining.clone(), labels, out)?;
        labels.pop();
    }
    Ok(())
}

/// Draws one branch with its Born probability; reproducible for a fixed seed.
pub fn sample(state: &PureState, plan: &MeasurementPlan, seed: u64) -> Result<OutcomeBranch> {
    let branches = enumerate_outcomes(state, plan)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(pick(branches, rng.random::<f64>()))
}

/// Draws `count` branches from one seeded stream.
pub fn sample_many(state: &PureState, plan: &MeasurementPlan, seed: u64, count: usize) -> Result<Vec<OutcomeBranch>> {
    let branches = enumerate_outcomes(state, plan)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(|_| pick(branches.clone(), rng.random::<f64>())).collect())
}

fn pick(branches: Vec<OutcomeBranch>, u: f64) -> OutcomeBranch {
    let total: f64 = branches.iter().map(|b| b.probability).sum();
    let mut acc = 0.0;
    let last = branches.len().saturating_sub(1);
    for (i, b) in branches.into_iter().enumerate() {
        acc += b.probability / total;
        if u < acc || i == last {
            return b;
        }
    }
    OutcomeBranch { labels: vec![], probability: 0.0, residual: PureState::scalar(), residual_qubits: vec![] }
}

/// Rebuilds `Σ √p |labels⟩ ⊗ residual` in the original qubit order.
pub fn reassemble(branches: &[OutcomeBranch], plan: &MeasurementPlan, num_qubits: usize) -> Result<Vec<C64>> {
    let mut total = vec![C64::default(); 1 << num_qubits];
    for b in branches {
        let mut part = PureState::scalar();
        let mut order: Vec<usize> = Vec::with_capacity(num_qubits);
        for (step, label) in plan.steps.iter().zip(&b.labels) {
            let v = step.basis.vector(label).ok_or_else(|| Error::UnknownName(label.clone()))?;
            part = part.tensor(v)?;
            order.extend(&step.targets);
        }
        part = part.tensor(&b.residual)?;
        order.extend(&b.residual_qubits);
        let placed = part.permute_qubits(&order)?;
        let w = libm::sqrt(b.probability);
        for (t, a) in total.iter_mut().zip(placed.amplitudes()) {
            *t += a * w;
        }
    }
    Ok(total)
}
