//! Small fixed-size complex linear algebra: just enough for 2x2 and 3x3
//! Hermitian matrices and one 8x8 linear solve. Eigenvalues of 3x3
//! Hermitian matrices come from cyclic Jacobi rotations, which keeps the
//! off-diagonal residual at machine precision without pulling in a dense
//! linear-algebra dependency.

use num_complex::Complex64 as C;

use crate::{Error, Result};

pub(crate) const ZERO: C = C::new(0.0, 0.0);

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Maximum Hermiticity deviation `max_ij |a_ij - conj(a_ji)|`.
pub(crate) fn herm_deviation<const N: usize>(m: &[[C; N]; N]) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..N {
        for j in 0..N {
            dev = dev.max((m[i][j] - m[j][i].conj()).norm());
        }
    }
    dev
}

pub(crate) fn trace<const N: usize>(m: &[[C; N]; N]) -> C {
    (0..N).map(|i| m[i][i]).sum()
}

/// Eigen-decomposition of a 3x3 Hermitian matrix by cyclic Jacobi sweeps.
///
/// Returns eigenvalues in ascending order together with matching
/// orthonormal eigenvectors as the columns of a unitary matrix. Each
/// rotation `U` in the `(p, q)` plane is
///
/// ```text
/// U[p][p] = cos t,          U[p][q] = -sin t * phase,
/// U[q][p] = sin t * conj(phase),   U[q][q] = cos t,
/// ```
///
/// with `phase = a_pq / |a_pq|` and `tan(2t) = 2 |a_pq| / (a_pp - a_qq)`,
/// which annihilates `a_pq` exactly.
pub(crate) fn eigh3(m: &[[C; 3]; 3]) -> ([f64; 3], [[C; 3]; 3]) {
    let mut a = *m;
    // Symmetrise round-off so the rotations see an exactly Hermitian input.
    for i in 0..3 {
        for j in (i + 1)..3 {
            let avg = 0.5 * (a[i][j] + a[j][i].conj());
            a[i][j] = avg;
            a[j][i] = avg.conj();
        }
        a[i][i] = c(a[i][i].re, 0.0);
    }
    let mut v = [[ZERO; 3]; 3];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = c(1.0, 0.0);
    }
    let scale: f64 = a
        .iter()
        .flatten()
        .map(|e| e.norm())
        .fold(0.0, f64::max)
        .max(1e-300);
    for _sweep in 0..60 {
        let off: f64 = (0..3)
            .flat_map(|p| ((p + 1)..3).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q].norm())
            .fold(0.0, f64::max);
        if off <= 1e-16 * scale {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..3 {
                let apq = a[p][q];
                if apq.norm() <= 1e-18 * scale {
                    continue;
                }
                let phase = apq / apq.norm();
                let theta = 0.5 * (2.0 * apq.norm()).atan2(a[p][p].re - a[q][q].re);
                let (ct, st) = (theta.cos(), theta.sin());
                let upp = c(ct, 0.0);
                let upq = -st * phase;
                let uqp = st * phase.conj();
                // A <- A U on columns p, q.
                for k in 0..3 {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = akp * upp + akq * uqp;
                    a[k][q] = akp * upq + akq * upp;
                }
                // A <- U^dagger A on rows p, q.
                for k in 0..3 {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = upp * apk + uqp.conj() * aqk;
                    a[q][k] = upq.conj() * apk + upp * aqk;
                }
                // V <- V U accumulates the eigenvectors.
                for k in 0..3 {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = vkp * upp + vkq * uqp;
                    v[k][q] = vkp * upq + vkq * upp;
                }
            }
        }
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a[i][i].re.partial_cmp(&a[j][j].re).unwrap());
    let mut vals = [0.0; 3];
    let mut vecs = [[ZERO; 3]; 3];
    for (out, &idx) in order.iter().enumerate() {
        vals[out] = a[idx][idx].re;
        for k in 0..3 {
            vecs[k][out] = v[k][idx];
        }
    }
    (vals, vecs)
}

/// Solves the complex linear system `A x = b` for fixed size 8 by Gaussian
/// elimination with partial pivoting.
pub(crate) fn solve8(a: &[[C; 8]; 8], b: &[C; 8]) -> Result<[C; 8]> {
    let mut m = *a;
    let mut x = *b;
    for col in 0..8 {
        let pivot = (col..8)
            .max_by(|&i, &j| m[i][col].norm().partial_cmp(&m[j][col].norm()).unwrap())
            .unwrap();
        if m[pivot][col].norm() < 1e-300 {
            return Err(Error::Numerics("singular 8x8 linear system".into()));
        }
        m.swap(col, pivot);
        x.swap(col, pivot);
        let inv = c(1.0, 0.0) / m[col][col];
        for row in (col + 1)..8 {
            let f = m[row][col] * inv;
            if f.norm() == 0.0 {
                continue;
            }
            for k in col..8 {
                let sub = f * m[col][k];
                m[row][k] -= sub;
            }
            let sub = f * x[col];
            x[row] -= sub;
        }
    }
    for col in (0..8).rev() {
        let mut acc = x[col];
        for k in (col + 1)..8 {
            acc -= m[col][k] * x[k];
        }
        x[col] = acc / m[col][col];
    }
    Ok(x)
}
