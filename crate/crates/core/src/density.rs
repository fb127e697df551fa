//! Density matrices, Bloch vectors, spectral decompositions and entropy
//! functionals.
//!
//! Basis convention: index 0 is the ground state, index 1 the excited
//! state; `z = rho_22 - rho_11`, `x = 2 Re rho_21`, `y = 2 Im rho_21`, so a
//! Bloch vector `(x, y, z)` maps to `rho_12 = (x - i y) / 2` and
//! `rho_22 = (1 + z) / 2`. All entropies are in nats with the convention
//! `0 ln 0 = 0`.

use num_complex::Complex64 as C;
use serde::Serialize;

use crate::linalg::{c, eigh3, herm_deviation, trace, ZERO};
use crate::{Error, Result};

/// Tolerance for Hermiticity of a density matrix.
const HERM_TOL: f64 = 1e-12;
/// Tolerance for the trace of a density matrix.
const TRACE_TOL: f64 = 1e-9;
/// Most negative admissible eigenvalue of a density matrix.
const PSD_TOL: f64 = -1e-9;
/// Admissible overshoot of a Bloch vector beyond the unit ball.
const BLOCH_TOL: f64 = 1e-12;
/// Eigenvalues below this weight count as outside the support.
const SUPPORT_TOL: f64 = 1e-12;

/// A validated 2x2 density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Density2 {
    m: [[C; 2]; 2],
}

impl Density2 {
    /// Validates Hermiticity (1e-12), unit trace (1e-9) and positivity
    /// (eigenvalues at least -1e-9).
    pub fn new(m: [[C; 2]; 2]) -> Result<Self> {
        let dev = herm_deviation(&m);
        if dev > HERM_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = trace(&m);
        if (tr - c(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::TraceNotOne((tr - c(1.0, 0.0)).norm()));
        }
        // Eigenvalues of a Hermitian 2x2 with unit trace: (1 +- |r|) / 2.
        let half_diff = 0.5 * (m[1][1].re - m[0][0].re);
        let r = (half_diff * half_diff + m[0][1].norm_sqr()).sqrt() * 2.0;
        let lam_min = 0.5 * (1.0 - r);
        if lam_min < PSD_TOL {
            return Err(Error::NotPositive(lam_min));
        }
        Ok(Self { m })
    }

    /// The excited-state projector |2><2|.
    pub fn excited() -> Self {
        Self {
            m: [[ZERO, ZERO], [ZERO, c(1.0, 0.0)]],
        }
    }

    /// The ground-state projector |1><1|.
    pub fn ground() -> Self {
        Self {
            m: [[c(1.0, 0.0), ZERO], [ZERO, ZERO]],
        }
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> C {
        self.m[i][j]
    }

    #[inline]
    pub fn matrix(&self) -> [[C; 2]; 2] {
        self.m
    }

    /// Excited-state population `rho_22`.
    #[inline]
    pub fn rho22(&self) -> f64 {
        self.m[1][1].re
    }
}

/// A validated 3x3 density matrix for the ladder system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Density3 {
    m: [[C; 3]; 3],
}

impl Density3 {
    /// Same admission rules as [`Density2::new`].
    pub fn new(m: [[C; 3]; 3]) -> Result<Self> {
        let dev = herm_deviation(&m);
        if dev > HERM_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = trace(&m);
        if (tr - c(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::TraceNotOne((tr - c(1.0, 0.0)).norm()));
        }
        let (vals, _) = eigh3(&m);
        if vals[0] < PSD_TOL {
            return Err(Error::NotPositive(vals[0]));
        }
        Ok(Self { m })
    }

    /// The projector onto basis state `k` (0, 1 or 2).
    pub fn basis_state(k: usize) -> Self {
        let mut m = [[ZERO; 3]; 3];
        m[k][k] = c(1.0, 0.0);
        Self { m }
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> C {
        self.m[i][j]
    }

    #[inline]
    pub fn matrix(&self) -> [[C; 3]; 3] {
        self.m
    }

    /// Populations `(rho_11, rho_22, rho_33)`.
    #[inline]
    pub fn populations(&self) -> [f64; 3] {
        [self.m[0][0].re, self.m[1][1].re, self.m[2][2].re]
    }
}

/// A Bloch vector constrained to the closed unit ball (up to 1e-12).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Self { x, y, z };
        if v.norm() > 1.0 + BLOCH_TOL {
            return Err(Error::BlochNorm(v.norm()));
        }
        Ok(v)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// Builds the density matrix for a Bloch vector; rejects vectors outside
/// the unit ball beyond round-off.
pub fn density_from_bloch(r: &BlochVector) -> Result<Density2> {
    if r.norm() > 1.0 + BLOCH_TOL {
        return Err(Error::BlochNorm(r.norm()));
    }
    let rho12 = c(0.5 * r.x, -0.5 * r.y);
    Density2::new([
        [c(0.5 * (1.0 - r.z), 0.0), rho12],
        [rho12.conj(), c(0.5 * (1.0 + r.z), 0.0)],
    ])
}

/// Reads the Bloch vector of a 2x2 density matrix.
pub fn bloch_from_density(rho: &Density2) -> BlochVector {
    let m = rho.matrix();
    BlochVector {
        x: 2.0 * m[1][0].re,
        y: 2.0 * m[1][0].im,
        z: m[1][1].re - m[0][0].re,
    }
}

/// Spectral decomposition of a 2x2 density matrix.
///
/// `lambda_plus = (1 + |r|) / 2` and `lambda_minus = (1 - |r|) / 2` with
/// eigenvectors `(a_pm, b_pm)` in the ground/excited basis.
#[derive(Debug, Clone, Copy)]
pub struct Spectrum2 {
    pub lambda_minus: f64,
    pub lambda_plus: f64,
    pub eigvec_minus: [C; 2],
    pub eigvec_plus: [C; 2],
}

/// Eigen-decomposes a 2x2 density matrix in closed form.
///
/// The amplitudes are `|b_pm|^2 = (|r| pm z) / (2 |r|)` and
/// `a_pm = [(pm |r| - z) / (x + i y)] b_pm`; a fully mixed state returns
/// the canonical basis, and a diagonal state returns basis vectors sorted
/// by population.
pub fn eig2(rho: &Density2) -> Spectrum2 {
    let r = bloch_from_density(rho);
    let norm = r.norm();
    let lambda_plus = 0.5 * (1.0 + norm);
    let lambda_minus = 0.5 * (1.0 - norm);
    let planar = r.x * r.x + r.y * r.y;
    if planar < 1e-30 {
        // Diagonal state: eigenvectors are the basis vectors, the plus
        // branch holding the more occupied one (excited for z >= 0).
        let ground = [c(1.0, 0.0), ZERO];
        let excited = [ZERO, c(1.0, 0.0)];
        let (plus, minus) = if r.z >= 0.0 {
            (excited, ground)
        } else {
            (ground, excited)
        };
        return Spectrum2 {
            lambda_minus,
            lambda_plus,
            eigvec_minus: minus,
            eigvec_plus: plus,
        };
    }
    let xy = c(r.x, r.y);
    let b_plus = ((norm + r.z) / (2.0 * norm)).sqrt();
    let b_minus = ((norm - r.z) / (2.0 * norm)).sqrt();
    let a_plus = c(norm - r.z, 0.0) / xy * b_plus;
    let a_minus = c(-norm - r.z, 0.0) / xy * b_minus;
    Spectrum2 {
        lambda_minus,
        lambda_plus,
        eigvec_minus: [a_minus, c(b_minus, 0.0)],
        eigvec_plus: [a_plus, c(b_plus, 0.0)],
    }
}

/// Clamps a near-zero negative eigenvalue to zero; rejects anything below
/// the positivity tolerance.
fn clamp_eigenvalue(lam: f64) -> Result<f64> {
    if lam < PSD_TOL {
        return Err(Error::NotPositive(lam));
    }
    Ok(lam.max(0.0))
}

#[inline]
fn xlnx(p: f64) -> f64 {
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0
    }
}

/// Von Neumann entropy `-Tr rho ln rho` of a 2x2 density matrix, in nats.
pub fn von_neumann_entropy(rho: &Density2) -> Result<f64> {
    let norm = bloch_from_density(rho).norm();
    let lp = clamp_eigenvalue(0.5 * (1.0 + norm))?.min(1.0);
    let lm = clamp_eigenvalue(0.5 * (1.0 - norm))?;
    Ok(-xlnx(lp) - xlnx(lm))
}

/// Von Neumann entropy of a 3x3 density matrix, in nats.
pub fn von_neumann_entropy3(rho: &Density3) -> Result<f64> {
    let (vals, _) = eigh3(&rho.matrix());
    let mut s = 0.0;
    for lam in vals {
        s -= xlnx(clamp_eigenvalue(lam)?.min(1.0));
    }
    Ok(s)
}

/// Quantum relative entropy `D(rho || sigma)` for 2x2 states, in nats.
///
/// Returns `f64::INFINITY` when the support of `rho` leaks outside the
/// support of `sigma` (weight above 1e-12 on a null eigenvector).
pub fn relative_entropy(rho: &Density2, sigma: &Density2) -> Result<f64> {
    let s_rho = von_neumann_entropy(rho)?;
    let w = eig2(rho);
    let v = eig2(sigma);
    let mut acc = -s_rho;
    for (lam_sigma, vec_sigma) in [
        (v.lambda_minus, v.eigvec_minus),
        (v.lambda_plus, v.eigvec_plus),
    ] {
        let mut weight = 0.0;
        for (lam_rho, vec_rho) in [
            (w.lambda_minus.max(0.0), w.eigvec_minus),
            (w.lambda_plus.min(1.0), w.eigvec_plus),
        ] {
            let overlap = (vec_sigma[0].conj() * vec_rho[0] + vec_sigma[1].conj() * vec_rho[1])
                .norm_sqr();
            weight += lam_rho * overlap;
        }
        let lam_sigma = clamp_eigenvalue(lam_sigma)?;
        if lam_sigma <= SUPPORT_TOL * SUPPORT_TOL {
            if weight > SUPPORT_TOL {
                return Ok(f64::INFINITY);
            }
        } else {
            acc -= weight * lam_sigma.ln();
        }
    }
    Ok(acc)
}

/// Quantum relative entropy for 3x3 states, in nats, with the same
/// support convention as [`relative_entropy`].
pub fn relative_entropy3(rho: &Density3, sigma: &Density3) -> Result<f64> {
    let s_rho = von_neumann_entropy3(rho)?;
    let (wl, wv) = eigh3(&rho.matrix());
    let (sl, sv) = eigh3(&sigma.matrix());
    let mut acc = -s_rho;
    for j in 0..3 {
        let mut weight = 0.0;
        for i in 0..3 {
            let lam_rho = clamp_eigenvalue(wl[i])?.min(1.0);
            if lam_rho == 0.0 {
                continue;
            }
            let mut ov = ZERO;
            for k in 0..3 {
                ov += sv[k][j].conj() * wv[k][i];
            }
            weight += lam_rho * ov.norm_sqr();
        }
        let lam_sigma = clamp_eigenvalue(sl[j])?;
        if lam_sigma <= SUPPORT_TOL * SUPPORT_TOL {
            if weight > SUPPORT_TOL {
                return Ok(f64::INFINITY);
            }
        } else {
            acc -= weight * lam_sigma.ln();
        }
    }
    Ok(acc)
}

/// Binary entropy `H(p) = -p ln p - (1-p) ln(1-p)` in nats.
///
/// Arguments outside `[0, 1]` (beyond 1e-12 round-off) are rejected;
/// endpoints return zero.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "binary entropy argument {p} outside [0, 1]"
        )));
    }
    let p = p.clamp(0.0, 1.0);
    Ok(-xlnx(p) - xlnx(1.0 - p))
}

/// Bare energies assigned to the ground and excited levels.
///
/// Only the gap `e2 - e1 > 0` matters physically; the default is `(0, 1)`
/// so that energies read directly in gap units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyConvention {
    pub e1: f64,
    pub e2: f64,
}

impl EnergyConvention {
    pub fn new(e1: f64, e2: f64) -> Result<Self> {
        if e2 <= e1 || !e1.is_finite() || !e2.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "energy convention requires finite e2 > e1, got ({e1}, {e2})"
            )));
        }
        Ok(Self { e1, e2 })
    }

    /// The level gap `e2 - e1`.
    #[inline]
    pub fn gap(&self) -> f64 {
        self.e2 - self.e1
    }
}

impl Default for EnergyConvention {
    fn default() -> Self {
        Self { e1: 0.0, e2: 1.0 }
    }
}

/// Mean bare energy `e1 rho_11 + e2 rho_22`.
pub fn bare_energy(rho: &Density2, convention: &EnergyConvention) -> f64 {
    convention.e1 * rho.entry(0, 0).re + convention.e2 * rho.rho22()
}
