//! Entanglement witnesses: reduced purities, Wootters concurrence and the
//! pure-state three-tangle.
//!
//! The mixed-state three-tangle (a convex-roof optimisation) is not computed.

use alloc::{string::String, vec, vec::Vec};

use crate::catalog::NamedState;
use crate::linalg;
use crate::state::{DensityMatrix, PureState, C64};
use crate::{Error, Result};

/// Purity below `1 - GENUINE_MARGIN` counts as mixed.
pub const GENUINE_MARGIN: f64 = 1e-6;

/// Eigenvalues of `ρ` at or below this are treated as outside its support.
pub const SUPPORT_CUTOFF: f64 = 1e-14;

/// Wootters concurrence `max(0, λ1 − λ2 − λ3 − λ4)` of a two-qubit state.
///
/// The `λi` are the singular values of `τ_kl = ⟨v_k|σ2⊗σ2|v_l*⟩` over the
/// subnormalized eigenvectors `v_k` of `ρ`; restricting to the support keeps
/// square roots of eigenvalue noise out of the result.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.num_qubits() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: rho.num_qubits() });
    }
    let (p, vecs) = linalg::hermitian_eigen(4, rho.entries());
    let support: Vec<Vec<C64>> = (0..4)
        .filter(|&k| p[k] > SUPPORT_CUTOFF)
        .map(|k| (0..4).map(|i| vecs[i * 4 + k] * libm::sqrt(p[k])).collect())
        .collect();
    // σ2⊗σ2 is anti-diagonal with entry -1 in rows 0 and 3, +1 in rows 1 and 2.
    let flip = |v: &[C64]| -> Vec<C64> {
        (0..4).map(|i| v[3 - i].conj() * if i == 0 || i == 3 { -1.0 } else { 1.0 }).collect()
    };
    let d = support.len();
    let mut tau = vec![C64::default(); d * d];
    for k in 0..d {
        for l in 0..d {
            tau[k * d + l] = linalg::vdot(&support[k], &flip(&support[l]));
        }
    }
    let gram = linalg::matmul(d, &linalg::adjoint(d, &tau), &tau);
    let (evals, _) = linalg::hermitian_eigen(d, &gram);
    let mut lam: Vec<f64> = evals.iter().map(|e| libm::sqrt(e.max(0.0))).collect();
    lam.resize(4, 0.0);
    lam.sort_by(|a, b| b.total_cmp(a));
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

/// Concurrence of the reduction of `state` to the qubit pair `(i, j)`.
pub fn pair_concurrence(state: &PureState, i: usize, j: usize) -> Result<f64> {
    wootters_concurrence(&state.reduced_density(&[i, j])?)
}

/// Residual tangle `τ = C²_{A(BC)} − C²_{AB} − C²_{AC}` of a three-qubit pure
/// state, clamped at 0.
pub fn three_tangle_pure(state: &PureState) -> Result<f64> {
    if state.num_qubits() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: state.num_qubits() });
    }
    let rho_a = state.reduced_density(&[0])?;
    let det = (rho_a.get(0, 0) * rho_a.get(1, 1) - rho_a.get(0, 1) * rho_a.get(1, 0)).re;
    let cab = pair_concurrence(state, 0, 1)?;
    let cac = pair_concurrence(state, 0, 2)?;
    Ok((4.0 * det - cab * cab - cac * cac).clamp(0.0, 1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntanglementProfile {
    pub state: String,
    /// Purity of every proper nonempty kept subset, ordered by size then lexicographically.
    pub purities: Vec<(Vec<usize>, f64)>,
    /// Concurrence of every qubit pair.
    pub concurrences: Vec<((usize, usize), f64)>,
    /// Every proper reduction is mixed.
    pub genuine: bool,
}

impl EntanglementProfile {
    pub fn min_purity(&self) -> f64 {
        self.purities.iter().map(|p| p.1).fold(1.0, f64::min)
    }

    pub fn max_purity(&self) -> f64 {
        self.purities.iter().map(|p| p.1).fold(0.0, f64::max)
    }

    pub fn concurrence(&self, i: usize, j: usize) -> Option<f64> {
        let key = (i.min(j), i.max(j));
        self.concurrences.iter().find(|c| c.0 == key).map(|c| c.1)
    }
}

/// Proper nonempty subsets of `0..n`, by size then lexicographically.
pub fn proper_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> =
        (1..(1usize << n) - 1).map(|m| (0..n).filter(|q| (m >> q) & 1 == 1).collect()).collect();
    out.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Purities of all proper reductions and concurrences of all pairs.
pub fn profile(state: &NamedState) -> Result<EntanglementProfile> {
    let s = &state.state;
    let n = s.num_qubits();
    if n < 2 {
        return Err(Error::DimensionMismatch { expected: 4, found: n });
    }
    let purities = proper_subsets(n)
        .into_iter()
        .map(|k| Ok((k.clone(), s.reduced_density(&k)?.purity())))
        .collect::<Result<Vec<_>>>()?;
    let mut concurrences = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            concurrences.push(((i, j), pair_concurrence(s, i, j)?));
        }
    }
    let genuine = purities.iter().all(|p| p.1 <= 1.0 - GENUINE_MARGIN);
    Ok(EntanglementProfile { state: state.name.clone(), purities, concurrences, genuine })
}

/// Concurrences under the two readings of "tracing out qubit `first` and one
/// of `either`": the pair left after tracing, or the traced pair itself.
#[derive(Clone, Debug, PartialEq)]
pub struct TracingResolution {
    pub traced_out: Vec<((usize, usize), f64)>,
    pub kept: Vec<((usize, usize), f64)>,
    pub traced_out_matches: bool,
    pub kept_matches: bool,
    /// Under the traced-out reading, every other pair has zero concurrence.
    pub others_vanish: bool,
}

pub fn resolve_tracing(
    state: &PureState,
    first: usize,
    either: &[usize],
    expected: f64,
    tol: f64,
) -> Result<TracingResolution> {
    let n = state.num_qubits();
    let pair = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut traced_out = Vec::new();
    let mut kept = Vec::new();
    for &x in either {
        let rest: Vec<usize> = (0..n).filter(|&q| q != first && q != x).collect();
        if rest.len() != 2 {
            return Err(Error::Constraint("tracing two qubits must leave a pair".into()));
        }
        traced_out.push((pair(rest[0], rest[1]), pair_concurrence(state, rest[0], rest[1])?));
        kept.push((pair(first, x), pair_concurrence(state, first, x)?));
    }
    let matches = |v: &[((usize, usize), f64)]| v.iter().all(|p| (p.1 - expected).abs() <= tol);
    let mut others_vanish = true;
    for i in 0..n {
        for j in i + 1..n {
            if !traced_out.iter().any(|p| p.0 == (i, j)) {
                others_vanish &= pair_concurrence(state, i, j)? <= tol;
            }
        }
    }
    Ok(TracingResolution {
        traced_out_matches: matches(&traced_out),
        kept_matches: matches(&kept),
        traced_out,
        kept,
        others_vanish,
    })
}

/// `ρ = |ψ⟩⟨ψ|` as a density matrix on two qubits; small helper for callers
/// that hold raw amplitudes.
pub fn projector(amps: &[C64]) -> Result<DensityMatrix> {
    let n = match amps.len() {
        4 => 2,
        2 => 1,
        d => return Err(Error::DimensionMismatch { expected: 4, found: d }),
    };
    Ok(DensityMatrix::from_pure(&PureState::normalized(n, amps.to_vec())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::make_state;
    use crate::state::c;

    #[test]
    fn bell_and_product() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let bell = projector(&[c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]).unwrap();
        assert!((wootters_concurrence(&bell).unwrap() - 1.0).abs() < 1e-10);
        let prod = projector(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(wootters_concurrence(&prod).unwrap().abs() < 1e-10);
        let one = DensityMatrix::from_pure(&PureState::from_label("0").unwrap());
        assert!(wootters_concurrence(&one).is_err());
    }

    #[test]
    fn w_pairs_and_omega_pairs() {
        let w = make_state("W4", &[]).unwrap().state;
        assert!((pair_concurrence(&w, 0, 1).unwrap() - 0.5).abs() < 1e-9);
        let o = make_state("Omega", &[]).unwrap().state;
        assert!(pair_concurrence(&o, 0, 1).unwrap() < 1e-9);
    }

    #[test]
    fn tangles() {
        let g = make_state("GHZ3", &[]).unwrap().state;
        assert!((three_tangle_pure(&g).unwrap() - 1.0).abs() < 1e-9);
        let w = make_state("W3", &[]).unwrap().state;
        assert!(three_tangle_pure(&w).unwrap() < 1e-9);
        assert!(three_tangle_pure(&PureState::from_label("000").unwrap()).unwrap() < 1e-12);
        assert!(three_tangle_pure(&PureState::from_label("00").unwrap()).is_err());
    }

    #[test]
    fn fourteen_subsets() {
        let s = proper_subsets(4);
        assert_eq!(s.len(), 14);
        assert_eq!(s[0], vec![0]);
        assert_eq!(s[4], vec![0, 1]);
        assert_eq!(s[13], vec![1, 2, 3]);
    }

    #[test]
    fn q4_reading() {
        let q4 = make_state("Q4", &[]).unwrap().state;
        let r = resolve_tracing(&q4, 0, &[2, 3], 0.5, 1e-9).unwrap();
        assert!(r.traced_out_matches && !r.kept_matches && r.others_vanish);
        assert_eq!(r.traced_out[0].0, (1, 3));
    }
}
