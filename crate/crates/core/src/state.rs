//! Dense pure states over qubit registers, local unitaries and reduced density matrices.
//!
//! Qubit 0 is the leftmost symbol of a ket label: in `|0110⟩` qubit 0 reads `0`
//! and qubit 1 reads `1`. Basis index `x` of an `n`-qubit register stores qubit
//! `q` in bit `n - 1 - q`.

use alloc::{format, string::String, vec, vec::Vec};
use core::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg;
use crate::{Error, Result};

pub type C64 = Complex64;

/// Largest register the crate will allocate.
pub const MAX_QUBITS: usize = 12;
/// Tolerance of internal normalization and unitarity checks.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance used for assertions about physical claims.
pub const TOL: f64 = 1e-10;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub(crate) fn check_capacity(num_qubits: usize) -> Result<()> {
    if num_qubits > MAX_QUBITS {
        return Err(Error::Capacity { qubits: num_qubits, max: MAX_QUBITS });
    }
    Ok(())
}

/// Validates an ordered list of distinct qubits inside an `n`-qubit register.
pub(crate) fn check_targets(targets: &[usize], num_qubits: usize) -> Result<()> {
    let mut seen = 0u64;
    for &q in targets {
        if q >= num_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
        }
        if seen & (1 << q) != 0 {
            return Err(Error::DuplicateQubit(q));
        }
        seen |= 1 << q;
    }
    Ok(())
}

/// Index offsets of the `2^k` sub-basis states over `qubits` (in the given order)
/// inside an `n`-qubit register.
pub(crate) fn sub_offsets(num_qubits: usize, qubits: &[usize]) -> Vec<usize> {
    let k = qubits.len();
    (0..1usize << k)
        .map(|s| {
            qubits.iter().enumerate().fold(0usize, |acc, (j, &q)| {
                if (s >> (k - 1 - j)) & 1 == 1 {
                    acc | (1 << (num_qubits - 1 - q))
                } else {
                    acc
                }
            })
        })
        .collect()
}

/// Qubits of an `n`-qubit register not listed in `qubits`, ascending.
pub(crate) fn complement(num_qubits: usize, qubits: &[usize]) -> Vec<usize> {
    (0..num_qubits).filter(|q| !qubits.contains(q)).collect()
}

/// Ket label of basis index `index` in an `n`-qubit register, e.g. `0110`.
pub fn ket_label(index: usize, num_qubits: usize) -> String {
    (0..num_qubits).map(|q| if (index >> (num_qubits - 1 - q)) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Parses a bit-string ket label into `(num_qubits, index)`.
pub fn parse_ket_label(label: &str) -> Result<(usize, usize)> {
    let bits = label.trim_start_matches('|').trim_end_matches('⟩').trim_end_matches('>');
    if bits.is_empty() || bits.len() > MAX_QUBITS {
        return Err(Error::InvalidLabel(label.into()));
    }
    let mut index = 0usize;
    for ch in bits.chars() {
        index <<= 1;
        match ch {
            '0' => {}
            '1' => index |= 1,
            _ => return Err(Error::InvalidLabel(label.into())),
        }
    }
    Ok((bits.len(), index))
}

fn norm_sqr(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

/// Normalized amplitude vector over `2^num_qubits` computational basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl PureState {
    /// Wraps an amplitude vector that is already normalized.
    pub fn new(num_qubits: usize, amps: Vec<C64>) -> Result<Self> {
        check_capacity(num_qubits)?;
        if amps.len() != 1 << num_qubits {
            return Err(Error::DimensionMismatch { expected: 1 << num_qubits, found: amps.len() });
        }
        let n = norm_sqr(&amps);
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm: libm::sqrt(n) });
        }
        Ok(Self { num_qubits, amps })
    }

    /// Rescales an arbitrary nonzero vector to unit norm.
    pub fn normalized(num_qubits: usize, mut amps: Vec<C64>) -> Result<Self> {
        check_capacity(num_qubits)?;
        if amps.len() != 1 << num_qubits {
            return Err(Error::DimensionMismatch { expected: 1 << num_qubits, found: amps.len() });
        }
        let n = libm::sqrt(norm_sqr(&amps));
        if n < 1e-300 {
            return Err(Error::ZeroVector);
        }
        for a in &mut amps {
            *a /= n;
        }
        Ok(Self { num_qubits, amps })
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_capacity(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: index + 1 });
        }
        let mut amps = vec![C64::default(); dim];
        amps[index] = c(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// The empty register: a single amplitude equal to 1.
    pub fn scalar() -> Self {
        Self { num_qubits: 0, amps: vec![c(1.0, 0.0)] }
    }

    /// Computational basis state from a label such as `0110`.
    pub fn from_label(label: &str) -> Result<Self> {
        let (n, index) = parse_ket_label(label)?;
        Self::basis(n, index)
    }

    /// Superposition of labelled kets, normalized afterwards. Repeated labels add up.
    pub fn from_kets(terms: &[(&str, C64)]) -> Result<Self> {
        let Some((first, _)) = terms.first() else {
            return Err(Error::ZeroVector);
        };
        let (n, _) = parse_ket_label(first)?;
        let mut amps = vec![C64::default(); 1 << n];
        for (label, amp) in terms {
            let (m, index) = parse_ket_label(label)?;
            if m != n {
                return Err(Error::DimensionMismatch { expected: n, found: m });
            }
            amps[index] += amp;
        }
        Self::normalized(n, amps)
    }

    /// Haar-random state drawn from normalized complex Gaussian amplitudes.
    pub fn haar_random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<Self> {
        check_capacity(num_qubits)?;
        let amps =
            (0..1usize << num_qubits).map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        Self::normalized(num_qubits, amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(norm_sqr(&self.amps))
    }

    /// `self ⊗ other`; `self` occupies the leading qubits.
    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        let n = self.num_qubits + other.num_qubits;
        check_capacity(n)?;
        let mut amps = Vec::with_capacity(1 << n);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(Self { num_qubits: n, amps })
    }

    /// Applies `u` to `targets` (in order, first target is the most significant
    /// operand qubit) and the identity elsewhere.
    pub fn apply_local(&self, u: &LocalUnitary, targets: &[usize]) -> Result<Self> {
        check_targets(targets, self.num_qubits)?;
        if u.num_qubits() != targets.len() {
            return Err(Error::DimensionMismatch { expected: u.num_qubits(), found: targets.len() });
        }
        let dim = u.dim();
        let offsets = sub_offsets(self.num_qubits, targets);
        let tmask = offsets[dim - 1];
        let mut out = vec![C64::default(); self.amps.len()];
        let mut buf = vec![C64::default(); dim];
        for base in (0..self.amps.len()).filter(|x| x & tmask == 0) {
            for (s, b) in buf.iter_mut().enumerate() {
                *b = self.amps[base | offsets[s]];
            }
            for r in 0..dim {
                let row = &u.entries[r * dim..(r + 1) * dim];
                out[base | offsets[r]] = row.iter().zip(&buf).map(|(m, v)| m * v).sum();
            }
        }
        Ok(Self { num_qubits: self.num_qubits, amps: out })
    }

    /// Moves qubit `i` to position `perm[i]`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self> {
        let n = self.num_qubits;
        if perm.len() != n {
            return Err(Error::NotBijective(n));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::NotBijective(n));
            }
            seen[p] = true;
        }
        let mut amps = vec![C64::default(); self.amps.len()];
        for (x, a) in self.amps.iter().enumerate() {
            let mut y = 0usize;
            for (q, &p) in perm.iter().enumerate() {
                if (x >> (n - 1 - q)) & 1 == 1 {
                    y |= 1 << (n - 1 - p);
                }
            }
            amps[y] = *a;
        }
        Ok(Self { num_qubits: n, amps })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, found: other.num_qubits });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|²`, blind to global phase.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr().min(1.0))
    }

    /// Partial trace onto `keep`; the kept qubits appear in the listed order.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::EmptySubset);
        }
        check_targets(keep, self.num_qubits)?;
        let rest = complement(self.num_qubits, keep);
        let ko = sub_offsets(self.num_qubits, keep);
        let ro = sub_offsets(self.num_qubits, &rest);
        let d = ko.len();
        let mut rho = vec![C64::default(); d * d];
        for i in 0..d {
            for j in i..d {
                let v: C64 = ro.iter().map(|r| self.amps[ko[i] | r] * self.amps[ko[j] | r].conj()).sum();
                rho[i * d + j] = v;
                rho[j * d + i] = v.conj();
            }
        }
        DensityMatrix::new(keep.len(), rho)
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let ph = C64::from_polar(1.0, theta);
        Self { num_qubits: self.num_qubits, amps: self.amps.iter().map(|a| a * ph).collect() }
    }

    /// Nonzero terms as `(ket label, amplitude)`.
    pub fn kets(&self, eps: f64) -> Vec<(String, C64)> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > eps)
            .map(|(i, a)| (ket_label(i, self.num_qubits), *a))
            .collect()
    }
}

impl fmt::Display for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.kets(1e-12);
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (label, a)) in terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if a.im.abs() < 1e-12 {
                write!(f, "{:.6}|{}⟩", a.re, label)?;
            } else {
                write!(f, "({:.6}{:+.6}i)|{}⟩", a.re, a.im, label)?;
            }
        }
        Ok(())
    }
}

/// Single-qubit Pauli operators in the order σ0, σ1, σ2, σ3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Pauli::I => "σ0",
            Pauli::X => "σ1",
            Pauli::Y => "σ2",
            Pauli::Z => "σ3",
        }
    }

    pub fn matrix(self) -> [C64; 4] {
        let o = c(0.0, 0.0);
        let l = c(1.0, 0.0);
        match self {
            Pauli::I => [l, o, o, l],
            Pauli::X => [o, l, l, o],
            Pauli::Y => [o, c(0.0, -1.0), c(0.0, 1.0), o],
            Pauli::Z => [l, o, o, -l],
        }
    }
}

/// Unitary on `k` qubits stored as a row-major `2^k × 2^k` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalUnitary {
    num_qubits: usize,
    entries: Vec<C64>,
}

impl LocalUnitary {
    pub fn new(num_qubits: usize, entries: Vec<C64>) -> Result<Self> {
        check_capacity(num_qubits)?;
        let d = 1usize << num_qubits;
        if entries.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, found: entries.len() });
        }
        let dev = linalg::unitarity_deviation(d, &entries);
        if dev > NORM_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { num_qubits, entries })
    }

    pub fn identity(num_qubits: usize) -> Self {
        let d = 1usize << num_qubits;
        Self { num_qubits, entries: linalg::identity(d) }
    }

    pub fn pauli(p: Pauli) -> Self {
        Self { num_qubits: 1, entries: p.matrix().to_vec() }
    }

    /// `iσ2 = [[0, 1], [-1, 0]]`.
    pub fn i_sigma2() -> Self {
        let o = c(0.0, 0.0);
        Self { num_qubits: 1, entries: vec![o, c(1.0, 0.0), c(-1.0, 0.0), o] }
    }

    /// Controlled phase on two qubits: `-1` on `|11⟩`.
    pub fn cz() -> Self {
        Self::diagonal_signs(2, 1 << 3)
    }

    /// Diagonal operator with `-1` on every basis index whose bit is set in `mask`.
    pub fn diagonal_signs(num_qubits: usize, mask: u64) -> Self {
        let d = 1usize << num_qubits;
        let mut entries = vec![C64::default(); d * d];
        for i in 0..d {
            entries[i * d + i] = if (mask >> i) & 1 == 1 { c(-1.0, 0.0) } else { c(1.0, 0.0) };
        }
        Self { num_qubits, entries }
    }

    /// Tensor product of single-qubit Paulis, first entry on the leading qubit.
    pub fn pauli_string(paulis: &[Pauli]) -> Self {
        paulis.iter().fold(Self { num_qubits: 0, entries: vec![c(1.0, 0.0)] }, |acc, &p| acc.kron(&Self::pauli(p)))
    }

    pub fn kron(&self, other: &LocalUnitary) -> Self {
        Self {
            num_qubits: self.num_qubits + other.num_qubits,
            entries: linalg::kron(self.dim(), &self.entries, other.dim(), &other.entries),
        }
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &LocalUnitary) -> Result<Self> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, found: other.num_qubits });
        }
        Ok(Self { num_qubits: self.num_qubits, entries: linalg::matmul(self.dim(), &self.entries, &other.entries) })
    }

    pub fn adjoint(&self) -> Self {
        Self { num_qubits: self.num_qubits, entries: linalg::adjoint(self.dim(), &self.entries) }
    }

    /// Haar-random unitary via Gram-Schmidt on a complex Gaussian matrix.
    pub fn haar_random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<Self> {
        check_capacity(num_qubits)?;
        let d = 1usize << num_qubits;
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
        while cols.len() < d {
            let v: Vec<C64> = (0..d).map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
            if let Some(u) = linalg::orthogonalize(&v, &cols, 1e-6) {
                cols.push(u);
            }
        }
        let mut entries = vec![C64::default(); d * d];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                entries[i * d + j] = *v;
            }
        }
        Self::new(num_qubits, entries)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }
}

/// Validated density matrix over `k` qubits, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    entries: Vec<C64>,
}

impl DensityMatrix {
    pub fn new(num_qubits: usize, entries: Vec<C64>) -> Result<Self> {
        check_capacity(num_qubits)?;
        let d = 1usize << num_qubits;
        if entries.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, found: entries.len() });
        }
        let herm = linalg::hermiticity_deviation(d, &entries);
        if herm > NORM_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr: f64 = (0..d).map(|i| entries[i * d + i].re).sum();
        if (tr - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let (evals, _) = linalg::hermitian_eigen(d, &entries);
        if let Some(min) = evals.first().filter(|&&m| m < -TOL) {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min}")));
        }
        Ok(Self { num_qubits, entries })
    }

    /// Projector `|ψ⟩⟨ψ|`.
    pub fn from_pure(state: &PureState) -> Self {
        let a = state.amplitudes();
        let d = a.len();
        let mut entries = vec![C64::default(); d * d];
        for i in 0..d {
            for j in 0..d {
                entries[i * d + j] = a[i] * a[j].conj();
            }
        }
        Self { num_qubits: state.num_qubits(), entries }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.dim() + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.get(i, i).re).sum()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigen(self.dim(), &self.entries).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn labels_are_big_endian() {
        let s = PureState::from_label("0110").unwrap();
        assert_eq!(s.num_qubits(), 4);
        assert_eq!(s.amplitude(0b0110), c(1.0, 0.0));
        assert_eq!(ket_label(6, 4), "0110");
        assert!(parse_ket_label("01a").is_err());
    }

    #[test]
    fn tensor_concatenates_labels() {
        let z = PureState::from_label("0").unwrap();
        let o = PureState::from_label("1").unwrap();
        assert_eq!(z.tensor(&o).unwrap(), PureState::from_label("01").unwrap());
        let plus = PureState::from_kets(&[("0", c(1.0, 0.0)), ("1", c(1.0, 0.0))]).unwrap();
        let t = plus.tensor(&z).unwrap();
        assert!(close(t.amplitude(0b00).re, FRAC_1_SQRT_2));
        assert!(close(t.amplitude(0b10).re, FRAC_1_SQRT_2));
    }

    #[test]
    fn capacity_is_enforced() {
        let a = PureState::basis(7, 0).unwrap();
        let b = PureState::basis(6, 0).unwrap();
        assert!(matches!(a.tensor(&b), Err(Error::Capacity { qubits: 13, .. })));
        assert!(PureState::basis(13, 0).is_err());
    }

    #[test]
    fn local_paulis_and_cz() {
        let s = PureState::from_label("00").unwrap();
        let x = LocalUnitary::pauli(Pauli::X);
        assert_eq!(s.apply_local(&x, &[0]).unwrap(), PureState::from_label("10").unwrap());

        let phi = PureState::from_kets(&[("00", c(1.0, 0.0)), ("11", c(1.0, 0.0))]).unwrap();
        let out = phi.apply_local(&LocalUnitary::pauli(Pauli::Z), &[0]).unwrap();
        let want = PureState::from_kets(&[("00", c(1.0, 0.0)), ("11", c(-1.0, 0.0))]).unwrap();
        assert!(close(out.fidelity(&want).unwrap(), 1.0));
        assert!(close(out.inner(&want).unwrap().re, 1.0));

        let s = PureState::from_kets(&[("0011", c(1.0, 0.0)), ("0010", c(1.0, 0.0))]).unwrap();
        let out = s.apply_local(&LocalUnitary::cz(), &[2, 3]).unwrap();
        assert!(close(out.amplitude(0b0011).re, -FRAC_1_SQRT_2));
        assert!(close(out.amplitude(0b0010).re, FRAC_1_SQRT_2));
    }

    #[test]
    fn target_order_matters() {
        // CNOT with control on the first listed target.
        let o = c(0.0, 0.0);
        let l = c(1.0, 0.0);
        let cnot = LocalUnitary::new(2, vec![l, o, o, o, o, l, o, o, o, o, o, l, o, o, l, o]).unwrap();
        let s = PureState::from_label("100").unwrap();
        assert_eq!(s.apply_local(&cnot, &[0, 2]).unwrap(), PureState::from_label("101").unwrap());
        assert_eq!(s.apply_local(&cnot, &[2, 0]).unwrap(), s);
    }

    #[test]
    fn apply_local_rejects_bad_targets() {
        let s = PureState::basis(3, 0).unwrap();
        let x = LocalUnitary::pauli(Pauli::X);
        assert!(matches!(s.apply_local(&x, &[3]), Err(Error::QubitOutOfRange { .. })));
        assert!(matches!(s.apply_local(&LocalUnitary::cz(), &[1, 1]), Err(Error::DuplicateQubit(1))));
        assert!(matches!(s.apply_local(&x, &[0, 1]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn permutation_moves_qubits() {
        let s = PureState::from_label("01").unwrap();
        assert_eq!(s.permute_qubits(&[1, 0]).unwrap(), PureState::from_label("10").unwrap());
        let s = PureState::from_label("100").unwrap();
        assert_eq!(s.permute_qubits(&[2, 0, 1]).unwrap(), PureState::from_label("001").unwrap());
        assert!(matches!(s.permute_qubits(&[0, 0, 1]), Err(Error::NotBijective(3))));
    }

    #[test]
    fn fidelity_examples() {
        let z = PureState::from_label("0").unwrap();
        let plus = PureState::from_kets(&[("0", c(1.0, 0.0)), ("1", c(1.0, 0.0))]).unwrap();
        assert!(close(z.fidelity(&plus).unwrap(), 0.5));
        assert!(close(plus.fidelity(&plus.with_global_phase(1.3)).unwrap(), 1.0));
        assert_eq!(z.inner(&PureState::from_label("1").unwrap()).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn reduced_density_of_ghz() {
        let ghz = PureState::from_kets(&[("0000", c(1.0, 0.0)), ("1111", c(1.0, 0.0))]).unwrap();
        let r = ghz.reduced_density(&[0]).unwrap();
        assert!(close(r.get(0, 0).re, 0.5) && close(r.get(1, 1).re, 0.5));
        assert!(r.get(0, 1).norm() < 1e-15);
        assert!(close(ghz.reduced_density(&[0, 1]).unwrap().purity(), 0.5));
        assert!(close(ghz.reduced_density(&[0, 1, 2, 3]).unwrap().purity(), 1.0));
        assert!(matches!(ghz.reduced_density(&[]), Err(Error::EmptySubset)));
    }

    #[test]
    fn density_validation() {
        let o = c(0.0, 0.0);
        assert!(DensityMatrix::new(1, vec![c(0.5, 0.0), o, o, c(0.5, 0.0)]).is_ok());
        assert!(matches!(
            DensityMatrix::new(1, vec![c(0.5, 0.0), c(0.1, 0.0), o, c(0.5, 0.0)]),
            Err(Error::NotHermitian(_))
        ));
        assert!(DensityMatrix::new(1, vec![c(0.6, 0.0), o, o, c(0.6, 0.0)]).is_err());
        assert!(DensityMatrix::new(1, vec![c(1.5, 0.0), o, o, c(-0.5, 0.0)]).is_err());
    }

    #[test]
    fn unitary_validation() {
        let o = c(0.0, 0.0);
        assert!(matches!(LocalUnitary::new(1, vec![c(2.0, 0.0), o, o, c(1.0, 0.0)]), Err(Error::NotUnitary(_))));
        let u = LocalUnitary::i_sigma2();
        assert!(LocalUnitary::new(1, u.entries().to_vec()).is_ok());
        let xz = LocalUnitary::pauli_string(&[Pauli::X, Pauli::Z]);
        assert_eq!(xz.num_qubits(), 2);
        let s = PureState::from_label("01").unwrap();
        assert!(close(s.apply_local(&xz, &[0, 1]).unwrap().amplitude(0b11).re, -1.0));
    }
}
