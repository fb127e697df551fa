//! Figure-level experiments: drive-to-decay sweeps of the minimum
//! balance, Bloch-grid heatmaps and the violation-threshold search.
//!
//! All drivers build ledgers under the default bath convention, integrate
//! to a horizon covering both the slow relaxation and the slow drive
//! envelope, and reduce each run to its minimum balance value. Work items
//! are independent; results are gathered by grid index so output does not
//! depend on execution order.

use rayon::prelude::*;
use serde::Serialize;

use crate::density::{bloch_from_density, density_from_bloch, BlochVector, Density2, EnergyConvention};
use crate::ledger::{entropy_ledger, ledger_time_grid, min_upsilon, BathConvention};
use crate::two_level::{analytic_excited_trajectory, evolve, SystemParams2};
use crate::{Error, Result};

/// Contour of the minimum balance marking the edge of the violation
/// region (in nats, just below zero so the flat bound-holding plateau
/// does not degenerate the marching step).
const CONTOUR_LEVEL: f64 = -1e-4;

/// Threshold below which a minimum balance counts as a violation.
const VIOLATION_TOL: f64 = -1e-9;

/// Grid and horizon controls shared by the scan drivers.
#[derive(Debug, Clone, Copy)]
pub struct ScanOpts {
    /// Horizon in units of the slower of `1/gamma` and `1/omega`.
    pub horizon_factor: f64,
    /// Ledger samples per fastest system timescale.
    pub per_scale: usize,
}

impl Default for ScanOpts {
    fn default() -> Self {
        Self {
            horizon_factor: 30.0,
            per_scale: 400,
        }
    }
}

/// A sweep of the minimum balance over drive-to-decay ratios.
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    /// Drive-to-decay ratios (the sweep axis).
    pub ratios: Vec<f64>,
    /// Minimum balance per ratio; NaN flags a failed point.
    pub min_upsilon: Vec<f64>,
    /// Time of the minimum per ratio, in units of `1/gamma`.
    pub t_star: Vec<f64>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("ratio,min_upsilon,t_star\n");
        for k in 0..self.ratios.len() {
            out.push_str(&format!(
                "{},{},{}\n",
                self.ratios[k], self.min_upsilon[k], self.t_star[k]
            ));
        }
        out
    }
}

fn horizon(p: &SystemParams2, opts: &ScanOpts) -> f64 {
    opts.horizon_factor * (1.0 / p.gamma()).max(1.0 / p.omega())
}

fn run_min(
    p: &SystemParams2,
    rho0: &Density2,
    from_excited: bool,
    opts: &ScanOpts,
) -> Result<(f64, f64)> {
    let grid = ledger_time_grid(p, horizon(p, opts), opts.per_scale);
    let traj = if from_excited {
        analytic_excited_trajectory(p, &grid)?
    } else {
        evolve(p, rho0, &grid)?
    };
    let ledger = entropy_ledger(&traj, BathConvention::default(), &EnergyConvention::default())?;
    min_upsilon(&ledger)
}

fn is_excited(rho0: &Density2) -> bool {
    let b = bloch_from_density(rho0);
    b.x.abs() < 1e-12 && b.y.abs() < 1e-12 && (b.z - 1.0).abs() < 1e-12
}

/// Sweeps the minimum balance over drive-to-decay ratios with the decay
/// rate normalised to 1, so times are reported in units of `1/gamma`.
///
/// Ratios must lie in `[1e-3, 1e3]`. Points where the integrator fails
/// are flagged with NaN rather than aborting the sweep.
pub fn ddr_sweep(rho0: &Density2, ratios: &[f64], opts: &ScanOpts) -> Result<SweepResult> {
    for &r in ratios {
        if !(1e-3..=1e3).contains(&r) {
            return Err(Error::InvalidParameter(format!(
                "drive-to-decay ratio must lie in [1e-3, 1e3], got {r}"
            )));
        }
    }
    let fast = is_excited(rho0);
    let points: Vec<(f64, f64)> = ratios
        .par_iter()
        .map(|&ratio| {
            let p = match SystemParams2::new(ratio, 1.0) {
                Ok(p) => p,
                Err(_) => return (f64::NAN, f64::NAN),
            };
            run_min(&p, rho0, fast, opts).unwrap_or((f64::NAN, f64::NAN))
        })
        .collect();
    Ok(SweepResult {
        ratios: ratios.to_vec(),
        min_upsilon: points.iter().map(|p| p.0).collect(),
        t_star: points.iter().map(|p| p.1).collect(),
    })
}

/// Locates the drive-to-decay ratio at which the minimum balance first
/// turns negative for the given initial state, by bisection in log space
/// on `[lo, hi]` down to 0.1 % bracket width.
///
/// Errors if the bound is already violated at `lo` (threshold below the
/// bracket) or never violated at `hi` (no sign change inside).
pub fn find_violation_threshold(
    rho0: &Density2,
    lo: f64,
    hi: f64,
    opts: &ScanOpts,
) -> Result<f64> {
    if !(1e-3..=1e3).contains(&lo) || !(1e-3..=1e3).contains(&hi) || lo >= hi {
        return Err(Error::InvalidParameter(format!(
            "bracket must satisfy 1e-3 <= lo < hi <= 1e3, got [{lo}, {hi}]"
        )));
    }
    let fast = is_excited(rho0);
    let violated = |ratio: f64| -> Result<bool> {
        let p = SystemParams2::new(ratio, 1.0)?;
        Ok(run_min(&p, rho0, fast, opts)?.0 < VIOLATION_TOL)
    };
    if violated(lo)? {
        return Err(Error::InvalidParameter(format!(
            "bound already violated at the lower bracket {lo}; threshold lies below it"
        )));
    }
    if !violated(hi)? {
        return Err(Error::InvalidParameter(format!(
            "no violation up to the upper bracket {hi}; no sign change inside"
        )));
    }
    let (mut lo, mut hi) = (lo, hi);
    while hi / lo > 1.001 {
        let mid = (lo * hi).sqrt();
        if violated(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo * hi).sqrt())
}

/// Round-off allowance on the cone edge `|z| = r`, so grid diagonals
/// that land an ulp outside still count as inside.
const CONE_EDGE_TOL: f64 = 1e-12;

/// Initial state on the tomography slice of the Bloch ball: `x = 0` and
/// `y = -sqrt(r^2 - z^2)`, so `(z, r)` fixes the state up to the slice
/// convention. Points within `1e-12` of the edge `|z| = r` are accepted
/// and snapped onto it.
pub fn slice_bloch_vector(z: f64, r: f64) -> Result<BlochVector> {
    if !(0.0..=1.0).contains(&r) || !z.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "slice requires radius in [0, 1], got r = {r}, z = {z}"
        )));
    }
    if z.abs() > r + CONE_EDGE_TOL {
        return Err(Error::InvalidParameter(format!(
            "slice requires |z| <= r, got z = {z}, r = {r}"
        )));
    }
    let y = -((r * r - z * z).max(0.0)).sqrt();
    BlochVector::new(0.0, y, z)
}

/// A Bloch-grid map of the minimum balance over initial states on the
/// tomography slice, with the contour bounding the violation region.
#[derive(Debug, Clone, Serialize)]
pub struct HeatmapResult {
    pub omega: f64,
    pub gamma: f64,
    pub z_grid: Vec<f64>,
    pub r_grid: Vec<f64>,
    /// `min_upsilon[iz][ir]`; NaN marks cells outside `|z| <= r`.
    pub min_upsilon: Vec<Vec<f64>>,
    /// Interpolated `(z, r)` points where the minimum balance crosses the
    /// contour level, in row-major edge order.
    pub zero_contour: Vec<[f64; 2]>,
}

impl HeatmapResult {
    /// CSV of `(z, r, min_upsilon)` triples for the valid cells, row
    /// major with `z` as the outer loop.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("z,r,min_upsilon\n");
        for (iz, &z) in self.z_grid.iter().enumerate() {
            for (ir, &r) in self.r_grid.iter().enumerate() {
                let u = self.min_upsilon[iz][ir];
                if u.is_finite() {
                    out.push_str(&format!("{z},{r},{u}\n"));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Numerics(format!("serialising heatmap: {e}")))?;
        s.push('\n');
        Ok(s)
    }
}

fn contour_points(
    z_grid: &[f64],
    r_grid: &[f64],
    m: &[Vec<f64>],
    level: f64,
) -> Vec<[f64; 2]> {
    let mut pts = Vec::new();
    let cross = |u0: f64, u1: f64| (u0 - level) * (u1 - level) < 0.0;
    for iz in 0..z_grid.len() {
        for ir in 0..r_grid.len() {
            let u0 = m[iz][ir];
            if ir + 1 < r_grid.len() {
                let u1 = m[iz][ir + 1];
                if cross(u0, u1) {
                    let f = (level - u0) / (u1 - u0);
                    pts.push([z_grid[iz], r_grid[ir] + f * (r_grid[ir + 1] - r_grid[ir])]);
                }
            }
            if iz + 1 < z_grid.len() {
                let u1 = m[iz + 1][ir];
                if cross(u0, u1) {
                    let f = (level - u0) / (u1 - u0);
                    pts.push([z_grid[iz] + f * (z_grid[iz + 1] - z_grid[iz]), r_grid[ir]]);
                }
            }
        }
    }
    pts
}

/// Maps the minimum balance over initial states `(z, r)` on the
/// tomography slice for fixed system rates. Cells more than `1e-12`
/// outside `|z| <= r` are NaN; cells where the run fails are flagged
/// NaN as well.
pub fn bloch_grid_scan(
    p: &SystemParams2,
    z_grid: &[f64],
    r_grid: &[f64],
    opts: &ScanOpts,
) -> Result<HeatmapResult> {
    if z_grid.is_empty() || r_grid.is_empty() {
        return Err(Error::InvalidParameter("empty Bloch grid".into()));
    }
    if z_grid.iter().chain(r_grid).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "Bloch grid entries must be finite".into(),
        ));
    }
    for w in z_grid.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidParameter(
                "z grid must be strictly increasing".into(),
            ));
        }
    }
    for w in r_grid.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidParameter(
                "r grid must be strictly increasing".into(),
            ));
        }
    }
    if z_grid[0] < -1.0 || *z_grid.last().unwrap() > 1.0 {
        return Err(Error::InvalidParameter("z grid must lie in [-1, 1]".into()));
    }
    if r_grid[0] < 0.0 || *r_grid.last().unwrap() > 1.0 {
        return Err(Error::InvalidParameter("r grid must lie in [0, 1]".into()));
    }
    let nr = r_grid.len();
    let cells: Vec<f64> = (0..z_grid.len() * nr)
        .into_par_iter()
        .map(|idx| {
            let (iz, ir) = (idx / nr, idx % nr);
            let (z, r) = (z_grid[iz], r_grid[ir]);
            if z.abs() > r + CONE_EDGE_TOL {
                return f64::NAN;
            }
            let run = slice_bloch_vector(z, r)
                .and_then(|b| density_from_bloch(&b))
                .and_then(|rho0| run_min(p, &rho0, false, opts));
            run.map(|(u, _)| u).unwrap_or(f64::NAN)
        })
        .collect();
    let min_matrix: Vec<Vec<f64>> = cells.chunks(nr).map(|row| row.to_vec()).collect();
    let zero_contour = contour_points(z_grid, r_grid, &min_matrix, CONTOUR_LEVEL);
    Ok(HeatmapResult {
        omega: p.omega(),
        gamma: p.gamma(),
        z_grid: z_grid.to_vec(),
        r_grid: r_grid.to_vec(),
        min_upsilon: min_matrix,
        zero_contour,
    })
}
