//! Single-receiver superdense coding: Pauli-encoded state sets and exact
//! maximum mutually orthogonal subsets.

use alloc::{format, string::String, vec::Vec};

use crate::catalog::NamedState;
use crate::state::{LocalUnitary, Pauli, PureState, TOL};
use crate::{Error, Result};

/// Distinct (up to phase) encoded states the clique search accepts.
pub const MAX_CLIQUE_VERTICES: usize = 128;

/// Sender qubits and the operator alphabet `{I, σ1, iσ2, σ3}` on each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodingSpec {
    pub sender_qubits: Vec<usize>,
    /// Use `σ2` instead of `iσ2` in the alphabet.
    pub plain_sigma2: bool,
}

impl EncodingSpec {
    pub fn new(sender_qubits: Vec<usize>) -> Self {
        Self { sender_qubits, plain_sigma2: false }
    }

    /// `DC1`, `DC2`, …
    pub fn tag(&self) -> String {
        format!("DC{}", self.sender_qubits.len())
    }

    fn operator(&self, code: usize) -> (&'static str, LocalUnitary) {
        match code {
            0 => ("I", LocalUnitary::pauli(Pauli::I)),
            1 => ("σ1", LocalUnitary::pauli(Pauli::X)),
            2 if self.plain_sigma2 => ("σ2", LocalUnitary::pauli(Pauli::Y)),
            2 => ("iσ2", LocalUnitary::i_sigma2()),
            _ => ("σ3", LocalUnitary::pauli(Pauli::Z)),
        }
    }
}

/// All `4^k` encodings, labelled like `I⊗σ1`, first sender qubit most significant.
pub fn generate_encoded(resource: &PureState, spec: &EncodingSpec) -> Result<Vec<(String, PureState)>> {
    let k = spec.sender_qubits.len();
    if k == 0 {
        return Err(Error::EmptySubset);
    }
    crate::state::check_targets(&spec.sender_qubits, resource.num_qubits())?;
    let mut out = Vec::with_capacity(1 << (2 * k));
    for code in 0..1usize << (2 * k) {
        let mut s = resource.clone();
        let mut names = Vec::with_capacity(k);
        for (i, &q) in spec.sender_qubits.iter().enumerate() {
            let (name, u) = spec.operator((code >> (2 * (k - 1 - i))) & 3);
            s = s.apply_local(&u, &[q])?;
            names.push(name);
        }
        out.push((names.join("⊗"), s));
    }
    Ok(out)
}

/// Indices of the first state of every phase-equivalence class.
pub fn distinct_up_to_phase(states: &[PureState]) -> Result<Vec<usize>> {
    let mut reps: Vec<usize> = Vec::new();
    for (i, s) in states.iter().enumerate() {
        let mut dup = false;
        for &r in &reps {
            if states[r].fidelity(s)? > 1.0 - TOL {
                dup = true;
                break;
            }
        }
        if !dup {
            reps.push(i);
        }
    }
    Ok(reps)
}

type Bits = u128;

struct Graph {
    adj: Vec<Bits>,
}

impl Graph {
    /// Greedy colouring of `cand`; returns vertices in colour order with the
    /// colour count reached at each.
    fn colour(&self, cand: Bits) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut rest = cand;
        let mut colour = 0;
        while rest != 0 {
            colour += 1;
            let mut q = rest;
            while q != 0 {
                let v = q.trailing_zeros() as usize;
                q &= !(1 << v);
                q &= !self.adj[v];
                rest &= !(1 << v);
                out.push((v, colour));
            }
        }
        out
    }

    fn max_size(&self, cand: Bits, size: usize, best: &mut usize) {
        let order = self.colour(cand);
        let mut cand = cand;
        for &(v, bound) in order.iter().rev() {
            if size + bound <= *best {
                return;
            }
            let next = cand & self.adj[v];
            if next == 0 {
                *best = (*best).max(size + 1);
            } else {
                self.max_size(next, size + 1, best);
            }
            cand &= !(1 << v);
        }
    }

    /// First clique of size `target` in lexicographic vertex order.
    fn first(&self, cand: Bits, chosen: &mut Vec<usize>, target: usize) -> bool {
        if chosen.len() == target {
            return true;
        }
        let need = target - chosen.len();
        let mut cand = cand;
        while cand != 0 {
            if (cand.count_ones() as usize) < need || self.colour(cand).last().map_or(0, |x| x.1) < need {
                return false;
            }
            let v = cand.trailing_zeros() as usize;
            cand &= !(1 << v);
            chosen.push(v);
            if self.first(cand & self.adj[v], chosen, target) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}

/// Lexicographically smallest maximum set of pairwise orthogonal states
/// (`|⟨i|j⟩| < 1e-10`), as ascending indices into `states`.
pub fn max_mutually_orthogonal(states: &[PureState]) -> Result<Vec<usize>> {
    if states.is_empty() {
        return Ok(Vec::new());
    }
    // A clique holds at most one member per phase class, and the smallest
    // index of each class is never worse lexicographically.
    let reps = distinct_up_to_phase(states)?;
    if reps.len() > MAX_CLIQUE_VERTICES {
        return Err(Error::TooManyStates(reps.len(), MAX_CLIQUE_VERTICES));
    }
    let m = reps.len();
    let mut adj = alloc::vec![0 as Bits; m];
    for i in 0..m {
        for j in i + 1..m {
            if states[reps[i]].inner(&states[reps[j]])?.norm() < TOL {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    let g = Graph { adj };
    let all: Bits = if m == 128 { !0 } else { (1 << m) - 1 };
    let mut best = 1;
    g.max_size(all, 0, &mut best);
    let mut chosen = Vec::new();
    g.first(all, &mut chosen, best);
    Ok(chosen.into_iter().map(|i| reps[i]).collect())
}

/// How the sender qubits are picked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SenderChoice {
    Fixed(Vec<usize>),
    /// Every `k`-subset is tried; the first with the largest `N` wins.
    Best(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CapacityReport {
    pub state: String,
    pub scenario: String,
    pub sender_qubits: Vec<usize>,
    pub receiver_qubits: Vec<usize>,
    pub encoded_count: usize,
    pub distinct_count: usize,
    pub max_orthogonal: usize,
    pub capacity_cbits: f64,
    pub witness: Vec<String>,
    /// `N` for every sender subset examined.
    pub per_choice: Vec<(Vec<usize>, usize)>,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..1usize << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|q| m >> (n - 1 - q) & 1 == 1).collect())
        .rev()
        .collect()
}

fn single(resource: &NamedState, spec: &EncodingSpec) -> Result<(usize, usize, Vec<String>, usize)> {
    let enc = generate_encoded(&resource.state, spec)?;
    let states: Vec<PureState> = enc.iter().map(|e| e.1.clone()).collect();
    let distinct = distinct_up_to_phase(&states)?.len();
    let w = max_mutually_orthogonal(&states)?;
    Ok((w.len(), enc.len(), w.iter().map(|&i| enc[i].0.clone()).collect(), distinct))
}

/// Dense-coding capacity `log2 N` of a resource for the given sender choice.
pub fn capacity(resource: &NamedState, choice: &SenderChoice, plain_sigma2: bool) -> Result<CapacityReport> {
    let n = resource.state.num_qubits();
    let choices = match choice {
        SenderChoice::Fixed(q) => alloc::vec![q.clone()],
        SenderChoice::Best(k) => {
            if *k == 0 || *k >= n {
                return Err(Error::Constraint(format!("sender must hold 1 to {} qubits", n - 1)));
            }
            subsets(n, *k)
        }
    };
    let mut per_choice = Vec::new();
    let mut best: Option<(Vec<usize>, usize, usize, Vec<String>, usize)> = None;
    for q in choices {
        let spec = EncodingSpec { sender_qubits: q.clone(), plain_sigma2 };
        let (big_n, count, witness, distinct) = single(resource, &spec)?;
        per_choice.push((q.clone(), big_n));
        if best.as_ref().is_none_or(|b| big_n > b.1) {
            best = Some((q, big_n, count, witness, distinct));
        }
    }
    let (sender, big_n, count, witness, distinct) = best.ok_or(Error::EmptySubset)?;
    Ok(CapacityReport {
        state: resource.name.clone(),
        scenario: format!("DC{}", sender.len()),
        receiver_qubits: (0..n).filter(|q| !sender.contains(q)).collect(),
        sender_qubits: sender,
        encoded_count: count,
        distinct_count: distinct,
        max_orthogonal: big_n,
        capacity_cbits: libm::log2(big_n as f64),
        witness,
        per_choice,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::make_state;

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(
            subsets(4, 2),
            alloc::vec![
                alloc::vec![0, 1],
                alloc::vec![0, 2],
                alloc::vec![0, 3],
                alloc::vec![1, 2],
                alloc::vec![1, 3],
                alloc::vec![2, 3]
            ]
        );
    }

    #[test]
    fn ghz_dc1_is_four_orthogonal_states() {
        let ghz = make_state("GHZ4", &[]).unwrap();
        let enc = generate_encoded(&ghz.state, &EncodingSpec::new(alloc::vec![0])).unwrap();
        assert_eq!(enc.len(), 4);
        assert_eq!(enc[2].0, "iσ2");
        let states: Vec<PureState> = enc.into_iter().map(|e| e.1).collect();
        assert_eq!(max_mutually_orthogonal(&states).unwrap(), alloc::vec![0, 1, 2, 3]);
    }

    #[test]
    fn w_dc1_is_not_orthogonal() {
        let r = capacity(&make_state("W4", &[]).unwrap(), &SenderChoice::Fixed(alloc::vec![0]), false).unwrap();
        assert!(r.max_orthogonal < 4);
    }

    #[test]
    fn duplicates_collapse() {
        let a = PureState::from_label("01").unwrap();
        let b = a.with_global_phase(1.0);
        let c = PureState::from_label("10").unwrap();
        assert_eq!(distinct_up_to_phase(&[a.clone(), b.clone(), c.clone()]).unwrap(), alloc::vec![0, 2]);
        assert_eq!(max_mutually_orthogonal(&[a, b, c]).unwrap(), alloc::vec![0, 2]);
    }

    #[test]
    fn omega_dc2_labels() {
        let r = capacity(&make_state("Omega", &[]).unwrap(), &SenderChoice::Fixed(alloc::vec![0, 1]), false).unwrap();
        assert_eq!(r.max_orthogonal, 16);
        assert_eq!(r.witness[1], "I⊗σ1");
        assert_eq!(r.scenario, "DC2");
        assert_eq!(r.receiver_qubits, alloc::vec![2, 3]);
    }
}
