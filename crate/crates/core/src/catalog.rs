//! Named resource states and measurement bases.
//!
//! Prefactors are always recomputed from the ket list. Bases whose printed form
//! is inconsistent carry a [`BasisCorrection`] describing the substitution.

use alloc::{
    borrow::ToOwned,
    format,
    string::{String, ToString},
    vec,
    vec::Vec,
};

use crate::linalg;
use crate::state::{c, ket_label, LocalUnitary, Pauli, PureState, C64, NORM_TOL};
use crate::{Error, Result};

/// A catalog state together with the parameters that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedState {
    pub name: String,
    pub params: Vec<(String, f64)>,
    pub state: PureState,
}

/// Names accepted by [`make_state`] that need no parameters.
pub const STATE_NAMES: &[&str] = &[
    "GHZ4",
    "W4",
    "Omega",
    "Q4",
    "Q4_11",
    "Q5",
    "W_mn",
    "Bell:phi+",
    "Bell:phi-",
    "Bell:psi+",
    "Bell:psi-",
    "GHZ3",
    "W3",
    "W3_equal",
];

/// The five four-qubit resources, in catalog order.
pub const RESOURCE_NAMES: &[&str] = &["GHZ4", "W4", "Omega", "Q4", "Q5"];

fn real_kets(terms: &[(&str, f64)]) -> Result<PureState> {
    let t: Vec<(&str, C64)> = terms.iter().map(|(l, a)| (*l, c(*a, 0.0))).collect();
    PureState::from_kets(&t)
}

fn param(params: &[(&str, f64)], key: &str, default: f64) -> f64 {
    params.iter().find(|(k, _)| *k == key).map_or(default, |(_, v)| *v)
}

fn bell(kind: &str) -> Result<PureState> {
    match kind {
        "phi+" => real_kets(&[("00", 1.0), ("11", 1.0)]),
        "phi-" => real_kets(&[("00", 1.0), ("11", -1.0)]),
        "psi+" => real_kets(&[("01", 1.0), ("10", 1.0)]),
        "psi-" => real_kets(&[("01", 1.0), ("10", -1.0)]),
        _ => Err(Error::UnknownName(format!("Bell:{kind}"))),
    }
}

/// `n`-qubit GHZ state `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz(n: usize) -> Result<PureState> {
    if n == 0 {
        return Err(Error::Constraint("GHZ needs at least one qubit".into()));
    }
    crate::state::check_capacity(n)?;
    let mut amps = vec![C64::default(); 1 << n];
    amps[0] = c(1.0, 0.0);
    amps[(1 << n) - 1] = c(1.0, 0.0);
    PureState::normalized(n, amps)
}

/// `n`-qubit W state, the equal superposition of single-excitation kets.
pub fn w(n: usize) -> Result<PureState> {
    if n == 0 {
        return Err(Error::Constraint("W needs at least one qubit".into()));
    }
    crate::state::check_capacity(n)?;
    let mut amps = vec![C64::default(); 1 << n];
    for q in 0..n {
        amps[1 << q] = c(1.0, 0.0);
    }
    PureState::normalized(n, amps)
}

fn sized(name: &str, prefix: &str, params: &[(&str, f64)]) -> Option<Result<usize>> {
    let rest = name.strip_prefix(prefix)?;
    let n = if rest == "n" {
        let v = param(params, "n", f64::NAN);
        if !(v.is_finite() && v >= 1.0 && libm::trunc(v) == v) {
            return Some(Err(Error::Constraint(format!("{name} needs an integer parameter n ≥ 1"))));
        }
        v as usize
    } else {
        match rest.parse::<usize>() {
            Ok(n) => n,
            Err(_) => return Some(Err(Error::UnknownName(name.into()))),
        }
    };
    Some(Ok(n))
}

/// Builds a named state.
///
/// Parametric names: `W_mn` (`m`, `n` ≥ 0 and phases `rho`, `eta`, `sigma`),
/// `W_gen` (`p`, `q`, `r`, `s` with optional `p_im` … `s_im`, subject to
/// `|p|²+|q|²+|r|²=|s|²`), `GHZ:n` / `W:n` (parameter `n`, or `GHZ:5`).
pub fn make_state(name: &str, params: &[(&str, f64)]) -> Result<NamedState> {
    let mut used: Vec<(String, f64)> = Vec::new();
    let state = match name {
        "GHZ4" | "GHZ" | "Q1" => ghz(4)?,
        "W4" | "W" | "Q2" => w(4)?,
        "Omega" | "Q3" => real_kets(&[("0000", 1.0), ("0110", 1.0), ("1001", 1.0), ("1111", -1.0)])?,
        "Q4" => real_kets(&[("0000", 1.0), ("0101", 1.0), ("1000", 1.0), ("1110", 1.0)])?,
        "Q4_11" => real_kets(&[("0000", 1.0), ("1000", 1.0), ("1110", 1.0), ("0101", libm::sqrt(3.0))])?,
        "Q5" => real_kets(&[("0000", 1.0), ("1011", 1.0), ("1101", 1.0), ("1110", 1.0)])?,
        "W11" => {
            return make_state("W_mn", &[("m", 1.0), ("n", 1.0)]).map(|mut s| {
                s.name = "W11".into();
                s
            })
        }
        "W_mn" => {
            let m = param(params, "m", 1.0);
            let n = param(params, "n", 1.0);
            if !(m >= 0.0 && n >= 0.0 && m.is_finite() && n.is_finite()) {
                return Err(Error::Constraint(format!("W_mn needs m, n ≥ 0 (got m={m}, n={n})")));
            }
            let (rho, eta, sigma) = (param(params, "rho", 0.0), param(params, "eta", 0.0), param(params, "sigma", 0.0));
            used = vec![
                ("m".into(), m),
                ("n".into(), n),
                ("rho".into(), rho),
                ("eta".into(), eta),
                ("sigma".into(), sigma),
            ];
            let mut amps = vec![C64::default(); 16];
            amps[0b1000] = c(1.0, 0.0);
            amps[0b0100] = C64::from_polar(libm::sqrt(m), rho);
            amps[0b0010] = C64::from_polar(libm::sqrt(n), eta);
            amps[0b0001] = C64::from_polar(libm::sqrt(m + n + 1.0), sigma);
            PureState::normalized(4, amps)?
        }
        "W_gen" => {
            let get = |k: &str| c(param(params, k, 0.0), param(params, &format!("{k}_im"), 0.0));
            let (p, q, r, s) = (get("p"), get("q"), get("r"), get("s"));
            let lhs = p.norm_sqr() + q.norm_sqr() + r.norm_sqr();
            if (lhs - s.norm_sqr()).abs() > 1e-10 {
                return Err(Error::Constraint(format!("|p|²+|q|²+|r|² = {lhs} differs from |s|² = {}", s.norm_sqr())));
            }
            for k in ["p", "q", "r", "s"] {
                used.push((k.into(), param(params, k, 0.0)));
                let im = param(params, &format!("{k}_im"), 0.0);
                if im != 0.0 {
                    used.push((format!("{k}_im"), im));
                }
            }
            let mut amps = vec![C64::default(); 16];
            amps[0b1000] = p;
            amps[0b0100] = q;
            amps[0b0010] = r;
            amps[0b0001] = s;
            PureState::normalized(4, amps)?
        }
        "GHZ3" => ghz(3)?,
        "W3" => w(3)?,
        "W3_equal" => real_kets(&[("001", 1.0), ("010", 1.0), ("100", 1.0), ("000", 1.0)])?,
        _ => {
            if let Some(kind) = name.strip_prefix("Bell:") {
                bell(kind)?
            } else if let Some(n) = sized(name, "GHZ:", params) {
                let n = n?;
                used.push(("n".into(), n as f64));
                ghz(n)?
            } else if let Some(n) = sized(name, "W:", params) {
                let n = n?;
                used.push(("n".into(), n as f64));
                w(n)?
            } else {
                return Err(Error::UnknownName(name.into()));
            }
        }
    };
    Ok(NamedState { name: name.into(), params: used, state })
}

/// Why a printed basis vector or label was replaced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrectionKind {
    /// The printed vector repeats another vector of the set.
    DuplicateVector,
    /// The printed vector overlaps other vectors of the set.
    NotOrthogonal,
    /// The printed vectors are orthonormal but miss the support of the joint
    /// state they are meant to measure.
    OutsideSupport,
    /// The printed label repeats another label of the set.
    DuplicateLabel,
}

/// Numbers backing a correction.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivationCertificate {
    /// Largest `|⟨v|w⟩|` between the printed vector and the rest of the printed set.
    pub printed_max_overlap: f64,
    /// Largest `|⟨v|w⟩|` between the corrected vector and the rest of the corrected set.
    pub corrected_max_overlap: f64,
    /// Weight of the printed and corrected vectors on the support of the joint
    /// state they measure, when that is what the repair restores.
    pub support_weight: Option<(f64, f64)>,
    /// Candidates examined by the repair search.
    pub candidates: usize,
    /// Candidates that satisfied the repair condition.
    pub solutions: usize,
    pub method: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisCorrection {
    pub label: String,
    pub printed_label: String,
    pub kind: CorrectionKind,
    pub printed: PureState,
    pub corrected: PureState,
    pub certificate: DerivationCertificate,
}

/// Labelled orthonormal set used as a von Neumann measurement basis.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedBasis {
    pub name: String,
    num_qubits: usize,
    vectors: Vec<PureState>,
    labels: Vec<String>,
    corrections: Vec<BasisCorrection>,
}

impl NamedBasis {
    pub fn new(name: impl Into<String>, vectors: Vec<PureState>, labels: Vec<String>) -> Result<Self> {
        let name = name.into();
        let Some(first) = vectors.first() else {
            return Err(Error::IncompleteBasis(name));
        };
        let n = first.num_qubits();
        if labels.len() != vectors.len() {
            return Err(Error::DimensionMismatch { expected: vectors.len(), found: labels.len() });
        }
        if let Some(v) = vectors.iter().find(|v| v.num_qubits() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: v.num_qubits() });
        }
        Ok(Self { name, num_qubits: n, vectors, labels, corrections: Vec::new() })
    }

    fn from_pairs(name: &str, pairs: Vec<(String, PureState)>) -> Result<Self> {
        let (labels, vectors) = pairs.into_iter().unzip();
        Self::new(name, vectors, labels)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[PureState] {
        &self.vectors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn corrections(&self) -> &[BasisCorrection] {
        &self.corrections
    }

    pub fn is_complete(&self) -> bool {
        self.vectors.len() == 1 << self.num_qubits
    }

    pub fn vector(&self, label: &str) -> Option<&PureState> {
        self.labels.iter().position(|l| l == label).map(|i| &self.vectors[i])
    }

    /// Appends an orthonormal completion labelled `⊥1`, `⊥2`, …
    pub fn completed(&self) -> Result<Self> {
        let report = validate_orthonormal(self);
        if !report.passed {
            return Err(Error::IncompleteBasis(self.name.clone()));
        }
        let raw: Vec<Vec<C64>> = self.vectors.iter().map(|v| v.amplitudes().to_vec()).collect();
        let extra = linalg::complete_orthonormal(1 << self.num_qubits, &raw);
        let mut out = self.clone();
        for (k, v) in extra.into_iter().enumerate() {
            out.vectors.push(PureState::normalized(self.num_qubits, v)?);
            out.labels.push(format!("{}{}", COMPLETION_PREFIX, k + 1));
        }
        if !out.is_complete() {
            return Err(Error::IncompleteBasis(self.name.clone()));
        }
        Ok(out)
    }

    /// Product basis `self ⊗ other` with labels joined by `⊗`.
    pub fn tensor(&self, other: &NamedBasis) -> Result<Self> {
        let mut vectors = Vec::new();
        let mut labels = Vec::new();
        for (la, a) in self.labels.iter().zip(&self.vectors) {
            for (lb, b) in other.labels.iter().zip(&other.vectors) {
                vectors.push(a.tensor(b)?);
                labels.push(format!("{la}⊗{lb}"));
            }
        }
        Self::new(format!("{}⊗{}", self.name, other.name), vectors, labels)
    }

    /// Applies `u` to the listed qubits of every vector.
    pub fn dressed(&self, u: &LocalUnitary, targets: &[usize], name: impl Into<String>) -> Result<Self> {
        let vectors = self.vectors.iter().map(|v| v.apply_local(u, targets)).collect::<Result<Vec<_>>>()?;
        let mut out = Self::new(name, vectors, self.labels.clone())?;
        out.corrections = self.corrections.clone();
        Ok(out)
    }
}

/// Label prefix of vectors added by [`NamedBasis::completed`].
pub const COMPLETION_PREFIX: &str = "⊥";

pub fn is_completion_label(label: &str) -> bool {
    label.starts_with(COMPLETION_PREFIX)
}

/// Result of a Gram check.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub max_offdiag: f64,
    pub max_norm_deviation: f64,
    pub num_vectors: usize,
    pub dim: usize,
    pub complete: bool,
    pub duplicate_labels: bool,
    pub passed: bool,
}

/// Gram-matrix check of a basis. Never fails; the report carries the verdict.
pub fn validate_orthonormal(basis: &NamedBasis) -> ValidationReport {
    let v = basis.vectors();
    let mut max_offdiag = 0.0f64;
    let mut max_norm_deviation = 0.0f64;
    for i in 0..v.len() {
        max_norm_deviation = max_norm_deviation.max((v[i].norm() - 1.0).abs());
        for j in i + 1..v.len() {
            let g = linalg::vdot(v[i].amplitudes(), v[j].amplitudes()).norm();
            max_offdiag = max_offdiag.max(g);
        }
    }
    let labels = basis.labels();
    let duplicate_labels = (0..labels.len()).any(|i| labels[i + 1..].contains(&labels[i]));
    ValidationReport {
        max_offdiag,
        max_norm_deviation,
        num_vectors: v.len(),
        dim: 1 << basis.num_qubits(),
        complete: basis.is_complete(),
        duplicate_labels,
        passed: max_offdiag <= NORM_TOL && max_norm_deviation <= NORM_TOL && !duplicate_labels,
    }
}

/// Names accepted by [`make_basis`] (parametric ones with their default suffix).
pub const BASIS_NAMES: &[&str] = &[
    "computational:1",
    "computational:2",
    "computational:3",
    "computational:4",
    "plus_minus",
    "bell",
    "ghz4_full",
    "ghz3_full",
    "omega_meas",
    "eta_zeta_W11",
    "rho_Q4",
    "tau_Q4",
    "eta_zeta_Q4",
    "varphi_Q5",
    "xi_Q5",
    "omega3_Q5",
    "omega16",
    "pi_2q",
    "pi_3q",
    "Omega34_3q",
    "sigma_W",
];

/// Basis names whose printed form differs from the catalog form.
pub const CORRECTED_BASES: &[&str] = &["omega16", "rho_Q4", "tau_Q4", "Omega34_3q", "sigma_W"];

/// `(|x⟩ ± |y⟩)/√2` pairs labelled `{prefix}{start}±`, `{prefix}{start+1}±`, …
fn pm_pairs(prefix: &str, start: usize, pairs: &[(&str, &str)]) -> Result<Vec<(String, PureState)>> {
    let states = pairs
        .iter()
        .map(|(a, b)| Ok((PureState::from_label(a)?, PureState::from_label(b)?)))
        .collect::<Result<Vec<_>>>()?;
    pm_states(prefix, start, &states)
}

/// `(x ± y)/‖·‖` pairs built from arbitrary vectors.
fn pm_states(prefix: &str, start: usize, pairs: &[(PureState, PureState)]) -> Result<Vec<(String, PureState)>> {
    let mut out = Vec::new();
    for (k, (x, y)) in pairs.iter().enumerate() {
        for (sign, tag) in [(1.0, "+"), (-1.0, "-")] {
            let amps = x.amplitudes().iter().zip(y.amplitudes()).map(|(a, b)| a + b * sign).collect();
            out.push((format!("{prefix}{}{tag}", start + k), PureState::normalized(x.num_qubits(), amps)?));
        }
    }
    Ok(out)
}

fn prod(parts: &[&PureState]) -> Result<PureState> {
    parts.iter().try_fold(PureState::scalar(), |acc, p| acc.tensor(p))
}

fn parse_paulis(spec: &str, count: usize, name: &str) -> Result<Vec<Pauli>> {
    if spec.len() != count {
        return Err(Error::UnknownName(name.into()));
    }
    spec.chars()
        .map(|ch| {
            ch.to_digit(10).and_then(|d| Pauli::from_code(d as u8)).ok_or_else(|| Error::UnknownName(name.into()))
        })
        .collect()
}

fn split_suffix(name: &str) -> (&str, Option<&str>) {
    match name.split_once(':') {
        Some((b, s)) => (b, Some(s)),
        None => (name, None),
    }
}

fn omega16_printed() -> Result<Vec<(String, PureState)>> {
    const ROWS: [[(&str, f64); 4]; 16] = [
        [("0000", 1.0), ("0110", 1.0), ("1001", 1.0), ("1111", -1.0)],
        [("0000", 1.0), ("0110", 1.0), ("1001", -1.0), ("1111", 1.0)],
        [("0000", 1.0), ("0110", -1.0), ("1001", 1.0), ("1111", 1.0)],
        [("0000", 1.0), ("0110", -1.0), ("1001", -1.0), ("1111", -1.0)],
        [("0001", 1.0), ("0111", 1.0), ("1000", 1.0), ("1110", -1.0)],
        [("0001", 1.0), ("0111", 1.0), ("1000", -1.0), ("1110", 1.0)],
        [("0001", 1.0), ("0111", -1.0), ("1000", 1.0), ("1110", 1.0)],
        [("0001", 1.0), ("0111", -1.0), ("1000", -1.0), ("1110", -1.0)],
        [("0010", 1.0), ("0100", 1.0), ("1011", 1.0), ("1101", -1.0)],
        [("0010", 1.0), ("0100", 1.0), ("1011", -1.0), ("1101", 1.0)],
        [("0010", 1.0), ("0100", -1.0), ("1011", 1.0), ("1101", 1.0)],
        [("0010", 1.0), ("0100", -1.0), ("1011", -1.0), ("1101", -1.0)],
        [("0011", 1.0), ("0101", 1.0), ("1010", -1.0), ("1100", 1.0)],
        [("0011", 1.0), ("0101", 1.0), ("1010", 1.0), ("1100", -1.0)],
        [("0011", 1.0), ("0101", 1.0), ("1010", -1.0), ("1100", 1.0)],
        [("0011", 1.0), ("0101", -1.0), ("1010", -1.0), ("1100", -1.0)],
    ];
    ROWS.iter().enumerate().map(|(i, row)| Ok((format!("Ω{}", i + 1), real_kets(row)?))).collect()
}

fn max_overlap_with_others(set: &[(String, PureState)], idx: usize, v: &PureState) -> f64 {
    set.iter()
        .enumerate()
        .filter(|(j, _)| *j != idx)
        .map(|(_, (_, w))| linalg::vdot(v.amplitudes(), w.amplitudes()).norm())
        .fold(0.0, f64::max)
}

/// Labelled vectors plus the corrections applied to them.
type Derived = (Vec<(String, PureState)>, Vec<BasisCorrection>);

/// Replaces the repeated `Ω15` by the sign pattern over
/// `{|0011⟩, |0101⟩, |1010⟩, |1100⟩}` orthogonal to every other vector.
fn omega16_corrected() -> Result<Derived> {
    let printed = omega16_printed()?;
    let idx = 14;
    let mut solutions = Vec::new();
    for pattern in 0u8..8 {
        let s = |bit: u8| if pattern >> bit & 1 == 1 { -1.0 } else { 1.0 };
        let cand = real_kets(&[("0011", 1.0), ("0101", s(2)), ("1010", s(1)), ("1100", s(0))])?;
        if max_overlap_with_others(&printed, idx, &cand) < NORM_TOL {
            solutions.push(cand);
        }
    }
    if solutions.len() != 1 {
        return Err(Error::IncompleteBasis("omega16".into()));
    }
    let corrected = solutions.pop().unwrap_or_else(PureState::scalar);
    let mut fixed = printed.clone();
    fixed[idx].1 = corrected.clone();
    let cert = DerivationCertificate {
        printed_max_overlap: max_overlap_with_others(&printed, idx, &printed[idx].1),
        corrected_max_overlap: max_overlap_with_others(&fixed, idx, &corrected),
        support_weight: None,
        candidates: 8,
        solutions: 1,
        method: "sign search over span{|0011⟩,|0101⟩,|1010⟩,|1100⟩} for the pattern orthogonal to all other vectors"
            .into(),
    };
    let fix = BasisCorrection {
        label: "Ω15".into(),
        printed_label: "Ω15".into(),
        kind: CorrectionKind::DuplicateVector,
        printed: printed[idx].1.clone(),
        corrected,
        certificate: cert,
    };
    Ok((fixed, vec![fix]))
}

/// Ordering `(a, 1, 3, 4)`.
fn rho_q4_printed() -> Result<Vec<(String, PureState)>> {
    Ok(vec![
        ("ρ1+".into(), real_kets(&[("0000", 1.0), ("0100", 1.0), ("1001", 1.0), ("1011", 1.0)])?),
        ("ρ1-".into(), real_kets(&[("0000", 1.0), ("0100", 1.0), ("1001", -1.0), ("1011", -1.0)])?),
        ("ρ2+".into(), real_kets(&[("0001", 1.0), ("0011", 1.0), ("1001", 1.0), ("1100", 1.0)])?),
        ("ρ2-".into(), real_kets(&[("0001", 1.0), ("0011", 1.0), ("1001", -1.0), ("1100", -1.0)])?),
    ])
}

/// Support of `|ψ⟩_a ⊗ Q4` on `(a,1,3,4)`: `a` free, `(1,3,4) ∈ {000, 100, 001, 110}`.
fn q4_support_weight(v: &PureState) -> f64 {
    [0usize, 4, 1, 6].iter().flat_map(|&t| [t, 8 | t]).map(|i| v.amplitude(i).norm_sqr()).sum()
}

/// Exchanges the `(1,3,4)` patterns `011` and `110`. The printed rewrite of
/// `|ψ⟩_a ⊗ Q4` attaches Bob's `|1⟩` to `011`, but `|1110⟩_{1234}` puts `110` there.
fn q4_swap(v: &PureState) -> Result<PureState> {
    let mut a = v.amplitudes().to_vec();
    for hi in [0, 8] {
        a.swap(hi | 3, hi | 6);
    }
    PureState::new(4, a)
}

fn q4_repairs(printed: &[(String, PureState)], fixed: &[(String, PureState)], method: &str) -> Vec<BasisCorrection> {
    (0..printed.len())
        .filter(|&i| printed[i].1 != fixed[i].1)
        .map(|i| {
            let printed_max_overlap = max_overlap_with_others(printed, i, &printed[i].1);
            BasisCorrection {
                label: fixed[i].0.clone(),
                printed_label: printed[i].0.clone(),
                kind: if printed_max_overlap > NORM_TOL {
                    CorrectionKind::NotOrthogonal
                } else {
                    CorrectionKind::OutsideSupport
                },
                printed: printed[i].1.clone(),
                corrected: fixed[i].1.clone(),
                certificate: DerivationCertificate {
                    printed_max_overlap,
                    corrected_max_overlap: max_overlap_with_others(fixed, i, &fixed[i].1),
                    support_weight: Some((q4_support_weight(&printed[i].1), q4_support_weight(&fixed[i].1))),
                    candidates: 1,
                    solutions: 1,
                    method: method.into(),
                },
            }
        })
        .collect()
}

/// Every vector moved onto the true support; `ρ2±` also pairs the `α`-part on
/// Bob's `|1⟩` with the `β`-part on Bob's `|0⟩`, which is `(|1000⟩ + |1100⟩)`.
fn rho_q4_corrected() -> Result<Derived> {
    let printed = rho_q4_printed()?;
    let mut fixed = printed.iter().map(|(l, v)| Ok((l.clone(), q4_swap(v)?))).collect::<Result<Vec<_>>>()?;
    fixed[2].1 = real_kets(&[("0001", 1.0), ("0110", 1.0), ("1000", 1.0), ("1100", 1.0)])?;
    fixed[3].1 = real_kets(&[("0001", 1.0), ("0110", 1.0), ("1000", -1.0), ("1100", -1.0)])?;
    let fixes = q4_repairs(&printed, &fixed, "re-derived from |ψ⟩_a ⊗ Q4 regrouped as (a,1,3,4)|2");
    Ok((fixed, fixes))
}

fn tau_q4_printed() -> Result<Vec<(String, PureState)>> {
    pm_pairs("τ", 1, &[("0000", "1001"), ("0001", "1000"), ("0100", "1011"), ("0011", "1100")])
}

fn tau_q4_corrected() -> Result<Derived> {
    let printed = tau_q4_printed()?;
    let fixed = printed.iter().map(|(l, v)| Ok((l.clone(), q4_swap(v)?))).collect::<Result<Vec<_>>>()?;
    let fixes = q4_repairs(&printed, &fixed, "re-derived from |ψ⟩_a ⊗ Q4 regrouped as (a,1,3,4)|2");
    Ok((fixed, fixes))
}

fn omega34_vectors(printed: bool) -> Result<Vec<(String, PureState)>> {
    let pp = bell("phi+")?;
    let pm = bell("phi-")?;
    let k = |l: &str| PureState::from_label(l);
    let (a3, b3) = if printed { ("00", "11") } else { ("11", "00") };
    pm_states(
        "Ω",
        3,
        &[(prod(&[&pp, &k(a3)?])?, prod(&[&pm, &k(b3)?])?), (prod(&[&pp, &k("10")?])?, prod(&[&pm, &k("01")?])?)],
    )
}

/// Support of `(α φ+|1⟩ + β φ−|0⟩)_{abc} ⊗ Ω` on `(a,b,c,1)` is spanned by
/// `φ+|10⟩, φ+|11⟩, φ−|00⟩, φ−|01⟩`; `Ω3±` must pair `φ+|11⟩` with `φ−|00⟩`.
fn omega34_corrected() -> Result<Derived> {
    let printed = omega34_vectors(true)?;
    let fixed = omega34_vectors(false)?;
    let support: Vec<PureState> = {
        let pp = bell("phi+")?;
        let pm = bell("phi-")?;
        [(&pp, "10"), (&pp, "11"), (&pm, "00"), (&pm, "01")]
            .iter()
            .map(|(b, l)| prod(&[b, &PureState::from_label(l)?]))
            .collect::<Result<_>>()?
    };
    let support_weight = |v: &PureState| -> f64 {
        support.iter().map(|s| linalg::vdot(s.amplitudes(), v.amplitudes()).norm_sqr()).sum()
    };
    let fixes = (0..2)
        .map(|i| BasisCorrection {
            label: fixed[i].0.clone(),
            printed_label: printed[i].0.clone(),
            kind: CorrectionKind::OutsideSupport,
            printed: printed[i].1.clone(),
            corrected: fixed[i].1.clone(),
            certificate: DerivationCertificate {
                printed_max_overlap: max_overlap_with_others(&printed, i, &printed[i].1),
                corrected_max_overlap: max_overlap_with_others(&fixed, i, &fixed[i].1),
                support_weight: Some((support_weight(&printed[i].1), support_weight(&fixed[i].1))),
                candidates: 2,
                solutions: 1,
                method: "Ω3± re-paired so both halves lie in span{φ+|10⟩, φ+|11⟩, φ−|00⟩, φ−|01⟩}".into(),
            },
        })
        .collect();
    Ok((fixed, fixes))
}

fn sigma_w_pairs() -> [(&'static str, &'static str); 4] {
    [("0010", "0011"), ("0100", "0101"), ("1000", "1001"), ("0000", "0001")]
}

fn sigma_w(printed: bool) -> Result<Derived> {
    let mut v = pm_pairs("Σ", 1, &sigma_w_pairs())?;
    let mut fixes = Vec::new();
    for i in 6..8 {
        let corrected_label = v[i].0.clone();
        let printed_label = corrected_label.replace('4', "1");
        if printed {
            v[i].0 = printed_label;
        } else {
            fixes.push(BasisCorrection {
                label: corrected_label,
                printed_label,
                kind: CorrectionKind::DuplicateLabel,
                printed: v[i].1.clone(),
                corrected: v[i].1.clone(),
                certificate: DerivationCertificate {
                    printed_max_overlap: 0.0,
                    corrected_max_overlap: max_overlap_with_others(&v, i, &v[i].1),
                    support_weight: None,
                    candidates: 1,
                    solutions: 1,
                    method: "fourth pair relabelled; vectors unchanged".into(),
                },
            });
        }
    }
    Ok((v, fixes))
}

fn ghz4_pairs() -> [(&'static str, &'static str); 4] {
    [("0000", "1111"), ("0111", "1000"), ("0011", "1100"), ("0100", "1011")]
}

fn ghz3_pairs() -> [(&'static str, &'static str); 4] {
    [("000", "111"), ("011", "100"), ("001", "110"), ("010", "101")]
}

fn pauli_suffix_name(base: &str, ps: &[Pauli]) -> String {
    let digits: String = ps.iter().map(|p| char::from(b'0' + p.code())).collect();
    format!("{base}:{digits}")
}

fn build_basis(name: &str, printed: bool) -> Result<NamedBasis> {
    let (base, suffix) = split_suffix(name);
    let mut corrections = Vec::new();
    let pairs: Vec<(String, PureState)> = match (base, suffix) {
        ("computational", Some(k)) => {
            let k: usize = k.parse().map_err(|_| Error::UnknownName(name.into()))?;
            if k == 0 || k > crate::MAX_QUBITS {
                return Err(Error::UnknownName(name.into()));
            }
            (0..1usize << k).map(|i| Ok((ket_label(i, k), PureState::basis(k, i)?))).collect::<Result<_>>()?
        }
        ("plus_minus", None) => vec![
            ("+".into(), real_kets(&[("0", 1.0), ("1", 1.0)])?),
            ("-".into(), real_kets(&[("0", 1.0), ("1", -1.0)])?),
        ],
        ("bell", None) => {
            ["phi+", "phi-", "psi+", "psi-"].iter().map(|k| Ok(((*k).to_owned(), bell(k)?))).collect::<Result<_>>()?
        }
        ("ghz4_full", None) => pm_pairs("4GHZ", 1, &ghz4_pairs())?,
        ("ghz3_full", None) => pm_pairs("3GHZ", 1, &ghz3_pairs())?,
        ("omega_meas", None) => {
            let pp = bell("phi+")?;
            let pm = bell("phi-")?;
            let k = |l: &str| PureState::from_label(l);
            pm_states(
                "Ω",
                1,
                &[
                    (prod(&[&k("00")?, &pp])?, prod(&[&k("11")?, &pm])?),
                    (prod(&[&k("01")?, &pm])?, prod(&[&k("10")?, &pp])?),
                ],
            )?
        }
        ("eta_zeta_W11", None) => {
            let s3 = libm::sqrt(3.0);
            vec![
                ("η+".into(), real_kets(&[("0100", 1.0), ("0010", 1.0), ("0001", 1.0), ("1000", s3)])?),
                ("η-".into(), real_kets(&[("0100", 1.0), ("0010", 1.0), ("0001", 1.0), ("1000", -s3)])?),
                ("ζ+".into(), real_kets(&[("1100", 1.0), ("1010", 1.0), ("1001", 1.0), ("0000", s3)])?),
                ("ζ-".into(), real_kets(&[("1100", 1.0), ("1010", 1.0), ("1001", 1.0), ("0000", -s3)])?),
            ]
        }
        ("rho_Q4", None) => {
            if printed {
                rho_q4_printed()?
            } else {
                let (v, f) = rho_q4_corrected()?;
                corrections = f;
                v
            }
        }
        ("tau_Q4", None) => {
            if printed {
                tau_q4_printed()?
            } else {
                let (v, f) = tau_q4_corrected()?;
                corrections = f;
                v
            }
        }
        ("eta_zeta_Q4", None) => {
            let s3 = libm::sqrt(3.0);
            vec![
                ("η+".into(), real_kets(&[("0000", 1.0), ("0100", 1.0), ("0111", 1.0), ("1010", s3)])?),
                ("η-".into(), real_kets(&[("0000", 1.0), ("0100", 1.0), ("0111", 1.0), ("1010", -s3)])?),
                ("ζ+".into(), real_kets(&[("1000", 1.0), ("1100", 1.0), ("1111", 1.0), ("0010", s3)])?),
                ("ζ-".into(), real_kets(&[("1000", 1.0), ("1100", 1.0), ("1111", 1.0), ("0010", -s3)])?),
            ]
        }
        ("varphi_Q5", None) => vec![
            ("φ1+".into(), real_kets(&[("0000", 1.0), ("0111", 1.0), ("1101", 1.0), ("1110", 1.0)])?),
            ("φ1-".into(), real_kets(&[("0000", 1.0), ("0111", 1.0), ("1101", -1.0), ("1110", -1.0)])?),
            ("φ2+".into(), real_kets(&[("0101", 1.0), ("0110", 1.0), ("1000", 1.0), ("1111", 1.0)])?),
            ("φ2-".into(), real_kets(&[("0101", 1.0), ("0110", 1.0), ("1000", -1.0), ("1111", -1.0)])?),
        ],
        ("xi_Q5", None) => pm_pairs("ξ", 1, &[("0000", "1101"), ("0111", "1110"), ("0101", "1000"), ("0110", "1111")])?,
        ("omega3_Q5", None) => pm_pairs("ω", 1, &[("000", "101"), ("001", "100"), ("010", "111"), ("011", "110")])?,
        ("omega16", None) => {
            if printed {
                omega16_printed()?
            } else {
                let (v, f) = omega16_corrected()?;
                corrections = f;
                v
            }
        }
        ("pi_2q", s) => {
            let ps = parse_paulis(s.unwrap_or("00"), 2, name)?;
            let u = LocalUnitary::pauli_string(&ps);
            let raw = pm_pairs("π", 1, &[("0000", "1111"), ("0011", "1100")])?;
            let mut out = Vec::new();
            for (l, v) in raw {
                out.push((l, v.apply_local(&u, &[0, 1])?));
            }
            return NamedBasis::from_pairs(&pauli_suffix_name("pi_2q", &ps), out);
        }
        ("pi_3q", s) => {
            let ps = parse_paulis(s.unwrap_or("000"), 3, name)?;
            let u = LocalUnitary::pauli_string(&ps);
            let raw = pm_pairs("π", 3, &[("0000", "1111"), ("0001", "1110")])?;
            let mut out = Vec::new();
            for (l, v) in raw {
                out.push((l, v.apply_local(&u, &[0, 1, 2])?));
            }
            return NamedBasis::from_pairs(&pauli_suffix_name("pi_3q", &ps), out);
        }
        ("Omega34_3q", s) => {
            let ps = parse_paulis(s.unwrap_or("00"), 2, name)?;
            let (raw, fixes) = if printed { (omega34_vectors(true)?, Vec::new()) } else { omega34_corrected()? };
            let mut out = Vec::new();
            for (l, v) in raw {
                let v = v.apply_local(&LocalUnitary::pauli(ps[0]), &[0])?;
                out.push((l, v.apply_local(&LocalUnitary::pauli(ps[1]), &[2])?));
            }
            let mut b = NamedBasis::from_pairs(&pauli_suffix_name("Omega34_3q", &ps), out)?;
            b.corrections = fixes;
            return Ok(b);
        }
        ("sigma_W", None) => {
            let (v, f) = sigma_w(printed)?;
            corrections = f;
            v
        }
        _ => return Err(Error::UnknownName(name.into())),
    };
    let mut b = NamedBasis::from_pairs(name, pairs)?;
    b.corrections = corrections;
    Ok(b)
}

/// Builds a named basis in its corrected form.
///
/// Parametric names: `computational:k`, `pi_2q:ij`, `pi_3q:ijk` and
/// `Omega34_3q:ij`, where the digits are Pauli codes (0 = σ0 … 3 = σ3)
/// dressing the leading unknown-state qubits.
pub fn make_basis(name: &str) -> Result<NamedBasis> {
    build_basis(name, false)
}

/// Builds a basis exactly as printed, including inconsistent vectors or labels.
pub fn make_basis_as_printed(name: &str) -> Result<NamedBasis> {
    build_basis(name, true)
}

/// Four-qubit catalog bases measured on four qubits (used for exhaustive sweeps).
pub fn four_qubit_basis_names() -> Vec<String> {
    BASIS_NAMES
        .iter()
        .filter_map(|n| make_basis(n).ok())
        .filter(|b| b.num_qubits() == 4)
        .map(|b| b.name.to_string())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2 as H;

    fn amp(s: &PureState, label: &str) -> C64 {
        let (_, i) = crate::state::parse_ket_label(label).unwrap();
        s.amplitude(i)
    }

    #[test]
    fn omega_matches_expanded_kets() {
        let s = make_state("Omega", &[]).unwrap().state;
        for (l, v) in [("0000", 0.5), ("0110", 0.5), ("1001", 0.5), ("1111", -0.5)] {
            assert!((amp(&s, l).re - v).abs() < 1e-15);
        }
    }

    #[test]
    fn printed_prefactors_are_ignored() {
        let g = make_state("GHZ:n", &[("n", 4.0)]).unwrap().state;
        assert!((amp(&g, "0000").re - H).abs() < 1e-15);
        assert_eq!(g, make_state("GHZ4", &[]).unwrap().state);
        let w = make_state("W4", &[]).unwrap().state;
        assert!((amp(&w, "0100").re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn w_mn_at_unit_parameters() {
        let s = make_state("W_mn", &[("m", 1.0), ("n", 1.0)]).unwrap().state;
        let r6 = 1.0 / libm::sqrt(6.0);
        assert!((amp(&s, "1000").re - r6).abs() < 1e-15);
        assert!((amp(&s, "0001").re - libm::sqrt(3.0) * r6).abs() < 1e-15);
        assert!(make_state("W_mn", &[("m", -1.0)]).is_err());
    }

    #[test]
    fn general_w_constraint() {
        let ok = make_state("W_gen", &[("p", 1.0), ("q", 1.0), ("r", 1.0), ("s", libm::sqrt(3.0))]);
        assert!(ok.is_ok());
        let bad = make_state("W_gen", &[("p", 1.0), ("q", 1.0), ("r", 1.0), ("s", 1.0)]);
        assert!(matches!(bad, Err(Error::Constraint(_))));
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(matches!(make_state("nope", &[]), Err(Error::UnknownName(_))));
        assert!(matches!(make_basis("nope"), Err(Error::UnknownName(_))));
        assert!(make_basis("pi_2q:4").is_err());
    }

    #[test]
    fn every_catalog_basis_is_orthonormal() {
        for name in BASIS_NAMES {
            let b = make_basis(name).unwrap();
            let r = validate_orthonormal(&b);
            assert!(r.passed, "{name}: {r:?}");
            let full = b.completed().unwrap();
            assert!(validate_orthonormal(&full).passed, "{name} completion");
        }
    }

    #[test]
    fn printed_omega16_fails_with_unit_overlap() {
        let r = validate_orthonormal(&make_basis_as_printed("omega16").unwrap());
        assert!(!r.passed);
        assert!((r.max_offdiag - 1.0).abs() < 1e-12);
        let fixed = make_basis("omega16").unwrap();
        let want = real_kets(&[("0011", 1.0), ("0101", -1.0), ("1010", 1.0), ("1100", 1.0)]).unwrap();
        assert_eq!(fixed.vector("Ω15").unwrap(), &want);
        assert_eq!(fixed.corrections().len(), 1);
    }

    #[test]
    fn ghz4_full_spans_half_the_space() {
        let b = make_basis("ghz4_full").unwrap();
        let r = validate_orthonormal(&b);
        assert!(r.passed && !r.complete && r.num_vectors == 8);
    }

    #[test]
    fn corrected_bases_carry_certificates() {
        for name in CORRECTED_BASES {
            let b = make_basis(name).unwrap();
            assert!(!b.corrections().is_empty(), "{name}");
            assert!(b.corrections().iter().all(|c| c.certificate.corrected_max_overlap < 1e-12));
        }
        let rho = make_basis_as_printed("rho_Q4").unwrap();
        assert!((validate_orthonormal(&rho).max_offdiag - 0.25).abs() < 1e-12);
        assert!(validate_orthonormal(&make_basis_as_printed("sigma_W").unwrap()).duplicate_labels);
    }

    #[test]
    fn dressed_bases_stay_orthonormal() {
        for i in 0..4 {
            for j in 0..4 {
                let b = make_basis(&format!("pi_2q:{i}{j}")).unwrap();
                assert!(validate_orthonormal(&b).passed);
                let o = make_basis(&format!("Omega34_3q:{i}{j}")).unwrap();
                assert!(validate_orthonormal(&o).passed);
            }
        }
    }
}
