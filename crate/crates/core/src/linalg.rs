//! Small dense complex matrix helpers (row-major, square).

use alloc::{vec, vec::Vec};

use crate::state::C64;

pub fn identity(d: usize) -> Vec<C64> {
    let mut m = vec![C64::default(); d * d];
    for i in 0..d {
        m[i * d + i] = C64::new(1.0, 0.0);
    }
    m
}

pub fn matmul(d: usize, a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::default(); d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k];
            if aik == C64::default() {
                continue;
            }
            for j in 0..d {
                out[i * d + j] += aik * b[k * d + j];
            }
        }
    }
    out
}

pub fn adjoint(d: usize, a: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::default(); d * d];
    for i in 0..d {
        for j in 0..d {
            out[j * d + i] = a[i * d + j].conj();
        }
    }
    out
}

pub fn kron(da: usize, a: &[C64], db: usize, b: &[C64]) -> Vec<C64> {
    let d = da * db;
    let mut out = vec![C64::default(); d * d];
    for i in 0..da {
        for j in 0..da {
            let aij = a[i * da + j];
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k) * d + (j * db + l)] = aij * b[k * db + l];
                }
            }
        }
    }
    out
}

/// Largest entry of `|U†U − I|`.
pub fn unitarity_deviation(d: usize, u: &[C64]) -> f64 {
    let p = matmul(d, &adjoint(d, u), u);
    let id = identity(d);
    p.iter().zip(&id).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Largest entry of `|A − A†|`.
pub fn hermiticity_deviation(d: usize, a: &[C64]) -> f64 {
    let mut dev = 0.0f64;
    for i in 0..d {
        for j in i..d {
            dev = dev.max((a[i * d + j] - a[j * d + i].conj()).norm());
        }
    }
    dev
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the matching eigenvectors as the
/// columns of a row-major matrix.
pub fn hermitian_eigen(d: usize, a: &[C64]) -> (Vec<f64>, Vec<C64>) {
    let mut m = a.to_vec();
    // Symmetrize so rounding in the input cannot bias the rotations.
    for i in 0..d {
        m[i * d + i] = C64::new(m[i * d + i].re, 0.0);
        for j in i + 1..d {
            let v = (m[i * d + j] + m[j * d + i].conj()) * 0.5;
            m[i * d + j] = v;
            m[j * d + i] = v.conj();
        }
    }
    let mut v = identity(d);
    let scale: f64 = m.iter().map(|x| x.norm_sqr()).sum::<f64>().max(1e-300);
    for _sweep in 0..100 {
        let off: f64 = (0..d)
            .flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * d + j].norm_sqr())
            .sum();
        if off <= 1e-32 * scale {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                let apq = m[p * d + q];
                let r = apq.norm();
                if r < 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let app = m[p * d + p].re;
                let aqq = m[q * d + q].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + libm::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
                };
                let cs = 1.0 / libm::sqrt(1.0 + t * t);
                let sn = t * cs;
                // V = D·R with D = diag(1, conj(phase)) on (p, q).
                let vpp = C64::new(cs, 0.0);
                let vpq = C64::new(sn, 0.0);
                let vqp = -phase.conj() * sn;
                let vqq = phase.conj() * cs;
                for k in 0..d {
                    let kp = m[k * d + p];
                    let kq = m[k * d + q];
                    m[k * d + p] = kp * vpp + kq * vqp;
                    m[k * d + q] = kp * vpq + kq * vqq;
                }
                for k in 0..d {
                    let pk = m[p * d + k];
                    let qk = m[q * d + k];
                    m[p * d + k] = vpp.conj() * pk + vqp.conj() * qk;
                    m[q * d + k] = vpq.conj() * pk + vqq.conj() * qk;
                }
                m[p * d + q] = C64::default();
                m[q * d + p] = C64::default();
                for k in 0..d {
                    let kp = v[k * d + p];
                    let kq = v[k * d + q];
                    v[k * d + p] = kp * vpp + kq * vqp;
                    v[k * d + q] = kp * vpq + kq * vqq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| m[i * d + i].re.total_cmp(&m[j * d + j].re));
    let evals = order.iter().map(|&i| m[i * d + i].re).collect();
    let mut vecs = vec![C64::default(); d * d];
    for (new, &old) in order.iter().enumerate() {
        for k in 0..d {
            vecs[k * d + new] = v[k * d + old];
        }
    }
    (evals, vecs)
}

/// Square root of a positive semidefinite Hermitian matrix; negative noise is clamped.
pub fn sqrt_psd(d: usize, a: &[C64]) -> Vec<C64> {
    let (evals, vecs) = hermitian_eigen(d, a);
    let mut out = vec![C64::default(); d * d];
    for (k, &lam) in evals.iter().enumerate() {
        let s = libm::sqrt(lam.max(0.0));
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] += vecs[i * d + k] * vecs[j * d + k].conj() * s;
            }
        }
    }
    out
}

pub fn vdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Removes the components of `v` along the orthonormal `basis` (twice, for
/// stability) and normalizes; `None` if less than `min_norm` survives.
pub fn orthogonalize(v: &[C64], basis: &[Vec<C64>], min_norm: f64) -> Option<Vec<C64>> {
    let mut w = v.to_vec();
    for _ in 0..2 {
        for b in basis {
            let p = vdot(b, &w);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= p * bi;
            }
        }
    }
    let n = libm::sqrt(w.iter().map(|x| x.norm_sqr()).sum::<f64>());
    if n < min_norm {
        return None;
    }
    for x in &mut w {
        *x /= n;
    }
    Some(w)
}

/// Extends an orthonormal set to a full basis of `C^d` using computational
/// vectors in ascending order. Returns only the added vectors.
pub fn complete_orthonormal(d: usize, vectors: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let mut all: Vec<Vec<C64>> = vectors.to_vec();
    let mut added = Vec::new();
    for i in 0..d {
        if all.len() == d {
            break;
        }
        let mut e = vec![C64::default(); d];
        e[i] = C64::new(1.0, 0.0);
        if let Some(w) = orthogonalize(&e, &all, 1e-6) {
            all.push(w.clone());
            added.push(w);
        }
    }
    added
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eigen_of_pauli_y() {
        let y = [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)];
        let (evals, vecs) = hermitian_eigen(2, &y);
        assert!((evals[0] + 1.0).abs() < 1e-14 && (evals[1] - 1.0).abs() < 1e-14);
        // Y v = λ v for each column.
        for k in 0..2 {
            for i in 0..2 {
                let yv: C64 = (0..2).map(|j| y[i * 2 + j] * vecs[j * 2 + k]).sum();
                assert!((yv - vecs[i * 2 + k] * evals[k]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn eigen_reconstructs_random_hermitian() {
        let d = 6;
        let mut a = vec![C64::default(); d * d];
        let mut seed = 7u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for i in 0..d {
            a[i * d + i] = c(next(), 0.0);
            for j in i + 1..d {
                let v = c(next(), next());
                a[i * d + j] = v;
                a[j * d + i] = v.conj();
            }
        }
        let (evals, vecs) = hermitian_eigen(d, &a);
        assert!(evals.windows(2).all(|w| w[0] <= w[1]));
        for i in 0..d {
            for j in 0..d {
                let r: C64 = (0..d).map(|k| vecs[i * d + k] * vecs[j * d + k].conj() * evals[k]).sum();
                assert!((r - a[i * d + j]).norm() < 1e-12);
            }
        }
        assert!(unitarity_deviation(d, &vecs) < 1e-12);
    }

    #[test]
    fn sqrt_squares_back() {
        let a = [c(0.75, 0.0), c(0.25, 0.1), c(0.25, -0.1), c(0.25, 0.0)];
        let s = sqrt_psd(2, &a);
        let ss = matmul(2, &s, &s);
        for (x, y) in ss.iter().zip(&a) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn completion_fills_the_space() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let v = vec![vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]];
        let extra = complete_orthonormal(4, &v);
        assert_eq!(extra.len(), 3);
        let mut all = v.clone();
        all.extend(extra);
        for i in 0..4 {
            for j in 0..4 {
                let g = vdot(&all[i], &all[j]).norm();
                assert!((g - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kron_of_identities() {
        let i2 = identity(2);
        assert_eq!(kron(2, &i2, 2, &i2), identity(4));
    }
}
