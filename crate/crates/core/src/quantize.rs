//! Transcendental quantization conditions for the finite square double well,
//! root bracketing below the barrier, and the splitting sweep toward the
//! infinite-barrier limit.
//!
//! The matching conditions are implemented unsquared, as derived from
//! logarithmic-derivative matching at the barrier edge; squaring both sides
//! recovers the familiar squared forms but would admit spurious roots where
//! the cotangent has the wrong sign.

use crate::eigen::{eigenvalues_lowest, sturm_count_below};
use crate::error::{Error, Result};
use crate::lattice::{assemble_hamiltonian, ApplyOp, Grid};
use crate::models::square_double_well;
use crate::symmetry::parity_sectors;
use serde::Serialize;

/// Geometry of the finite square double well: hard walls at +-a, a step of
/// height `alpha` on [-b, b].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WellGeometry {
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    pub m: f64,
    pub hbar: f64,
}

impl WellGeometry {
    pub fn new(alpha: f64, a: f64, b: f64, m: f64, hbar: f64) -> Result<WellGeometry> {
        if !(a > b && b > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "well geometry requires a > b > 0, got a = {a}, b = {b}"
            )));
        }
        if alpha.is_nan() || alpha <= 0.0 || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "alpha = {alpha} must be finite and > 0"
            )));
        }
        if m.is_nan() || m <= 0.0 || hbar.is_nan() || hbar <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "m = {m}, hbar = {hbar} must be > 0"
            )));
        }
        Ok(WellGeometry {
            alpha,
            a,
            b,
            m,
            hbar,
        })
    }

    /// Well width a - b.
    pub fn width(&self) -> f64 {
        self.a - self.b
    }

    /// Oscillating wavenumber at energy `e`.
    fn k(&self, e: f64) -> f64 {
        (2.0 * self.m * e).sqrt() / self.hbar
    }

    /// Barrier decay rate at energy `e`.
    fn kappa(&self, e: f64) -> f64 {
        (2.0 * self.m * (self.alpha - e)).sqrt() / self.hbar
    }
}

/// Parity sector of a matching condition or of a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

fn condition(e: f64, g: &WellGeometry, parity: Parity) -> Result<f64> {
    if !(e > 0.0 && e < g.alpha) {
        return Err(Error::InvalidParameter(format!(
            "energy {e} outside the open interval (0, {})",
            g.alpha
        )));
    }
    let k = g.k(e);
    let kappa = g.kappa(e);
    // cot at a pole yields a signed infinity, which the bracketing handles
    let phase = k * g.width();
    let cot = phase.cos() / phase.sin();
    let barrier = match parity {
        Parity::Even => (kappa * g.b).tanh(),
        Parity::Odd => 1.0 / (kappa * g.b).tanh(),
    };
    Ok(-e.sqrt() * cot - (g.alpha - e).sqrt() * barrier)
}

/// Unsquared even matching residual
/// `-sqrt(E) cot((a-b) sqrt(2mE)/hbar) - sqrt(alpha-E) tanh(b sqrt(2m(alpha-E))/hbar)`.
/// Its zeros are the even levels below the barrier.
pub fn even_condition(e: f64, g: &WellGeometry) -> Result<f64> {
    condition(e, g, Parity::Even)
}

/// Odd matching residual: as [`even_condition`] with tanh replaced by coth.
pub fn odd_condition(e: f64, g: &WellGeometry) -> Result<f64> {
    condition(e, g, Parity::Odd)
}

/// Energies of the cot poles, `(j pi hbar / (a-b))^2 / (2m)`; these separate
/// the root brackets and are exactly the decoupled-well levels.
fn pole_energy(g: &WellGeometry, j: usize) -> f64 {
    let k = j as f64 * std::f64::consts::PI * g.hbar / g.width();
    k * k / (2.0 * g.m)
}

/// Roots of one parity's matching condition, with the finite-difference
/// cross check recorded per root.
#[derive(Debug, Clone, Serialize)]
pub struct RootReport {
    pub parity: Parity,
    /// Strictly increasing roots in (0, alpha).
    pub roots: Vec<f64>,
    /// Brackets scanned (delimited by cot poles, clipped at alpha).
    pub brackets: Vec<(f64, f64)>,
    /// Per-root relative error against the matching finite-difference level.
    pub oracle_match: Vec<f64>,
    /// Finite-difference levels of this parity below the barrier.
    pub fd_levels: Vec<f64>,
    /// Residual of the matching condition at each accepted root.
    pub residuals: Vec<f64>,
}

fn bisect_root(g: &WellGeometry, parity: Parity, lo: f64, hi: f64) -> Option<f64> {
    let f = |e: f64| condition(e, g, parity).unwrap_or(f64::NAN);
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let fb = f(b);
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..220 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Some(0.5 * (a + b))
}

/// Default sample-count target for the finite-difference oracle.
pub const DEFAULT_ORACLE_N: usize = 6399;

/// Pick an odd sample count >= `target` whose interior grid on (-a, a) puts
/// samples exactly on +-b, so the sampled step is exactly even and the
/// barrier edges carry no alignment error.
pub fn aligned_interior_n(a: f64, b: f64, target: usize) -> usize {
    let frac = (a - b) / (2.0 * a);
    for n in target..target + 65_536 {
        if n % 2 == 0 {
            continue;
        }
        let pos = frac * (n + 1) as f64;
        if (pos - pos.round()).abs() < 1e-9 {
            return n;
        }
    }
    if target % 2 == 1 {
        target
    } else {
        target + 1
    }
}

/// Finite-difference levels below the barrier, one list per parity.
pub fn fd_subbarrier_levels(g: &WellGeometry, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let model = square_double_well(g.alpha, g.a, g.b)?;
    let grid = Grid::interior_of(-g.a, g.a, n)?;
    let v = model.sample(&grid)?;
    let op = assemble_hamiltonian(&grid, &v, g.m, g.hbar)?;
    let sectors = parity_sectors(&op, &grid)?;
    let mut out = Vec::with_capacity(2);
    for sector in [&sectors.even, &sectors.odd] {
        let below = sturm_count_below(sector, g.alpha);
        let levels = if below == 0 {
            Vec::new()
        } else {
            eigenvalues_lowest(sector, below.min(sector.dim()))?
        };
        out.push(levels.into_iter().filter(|&e| e < g.alpha).collect());
    }
    let odd = out.pop().unwrap();
    let even = out.pop().unwrap();
    Ok((even, odd))
}

/// Bracket and bisect every sub-barrier root of one parity, then verify each
/// against the finite-difference levels of the same parity. An empty root
/// list is a valid result: levels only appear below the barrier once the
/// step height passes a threshold.
pub fn find_subbarrier_levels(g: &WellGeometry, parity: Parity) -> Result<RootReport> {
    find_subbarrier_levels_with(g, parity, DEFAULT_ORACLE_N)
}

/// As [`find_subbarrier_levels`] with an explicit oracle resolution target.
pub fn find_subbarrier_levels_with(
    g: &WellGeometry,
    parity: Parity,
    oracle_n: usize,
) -> Result<RootReport> {
    let mut brackets = Vec::new();
    let mut lo = 0.0;
    let mut j = 1;
    loop {
        let hi = pole_energy(g, j);
        if hi >= g.alpha {
            brackets.push((lo, g.alpha));
            break;
        }
        brackets.push((lo, hi));
        lo = hi;
        j += 1;
    }

    let mut roots = Vec::new();
    let mut residuals = Vec::new();
    for &(blo, bhi) in &brackets {
        let width = bhi - blo;
        let inset = (width * 1e-12).max(f64::EPSILON * bhi.abs());
        if bhi - blo <= 2.0 * inset {
            continue;
        }
        if let Some(root) = bisect_root(g, parity, blo + inset, bhi - inset) {
            let res = condition(root, g, parity)?;
            roots.push(root);
            residuals.push(res);
        }
    }

    let n = aligned_interior_n(g.a, g.b, oracle_n);
    let (fd_even, fd_odd) = fd_subbarrier_levels(g, n)?;
    let fd_levels = match parity {
        Parity::Even => fd_even,
        Parity::Odd => fd_odd,
    };
    let oracle_match = roots
        .iter()
        .zip(&fd_levels)
        .map(|(r, f)| (r - f).abs() / f.abs().max(f64::MIN_POSITIVE))
        .collect();
    Ok(RootReport {
        parity,
        roots,
        brackets,
        oracle_match,
        fd_levels,
        residuals,
    })
}

/// One row of the splitting sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub e_even: Option<f64>,
    pub e_odd: Option<f64>,
    /// `E_odd - E_even` for the requested doublet.
    pub delta: Option<f64>,
    /// Set when the requested level is missing below this barrier height.
    pub flagged: bool,
}

/// Splitting of doublet `level` as a function of the barrier height.
#[derive(Debug, Clone, Serialize)]
pub struct SweepTable {
    pub level: u32,
    pub rows: Vec<SweepRow>,
    /// Smallest sweep alpha with any sub-barrier root (empirical threshold).
    pub threshold_alpha: Option<f64>,
}

/// Sweep the barrier height over `alphas` (ascending) and record the
/// even-odd splitting of doublet `level`. Missing levels flag their row
/// rather than failing the sweep.
pub fn splitting_sweep(alphas: &[f64], g_base: &WellGeometry, level: u32) -> Result<SweepTable> {
    splitting_sweep_with(alphas, g_base, level, DEFAULT_ORACLE_N)
}

/// As [`splitting_sweep`] with an explicit oracle resolution target.
pub fn splitting_sweep_with(
    alphas: &[f64],
    g_base: &WellGeometry,
    level: u32,
    oracle_n: usize,
) -> Result<SweepTable> {
    if level < 1 {
        return Err(Error::InvalidParameter("level must be >= 1".into()));
    }
    for w in alphas.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidParameter(
                "alphas must be strictly ascending".into(),
            ));
        }
    }
    let mut rows = Vec::with_capacity(alphas.len());
    let mut threshold = None;
    for &alpha in alphas {
        let g = WellGeometry::new(alpha, g_base.a, g_base.b, g_base.m, g_base.hbar)?;
        let even = find_subbarrier_levels_with(&g, Parity::Even, oracle_n)?;
        let odd = find_subbarrier_levels_with(&g, Parity::Odd, oracle_n)?;
        if threshold.is_none() && (!even.roots.is_empty() || !odd.roots.is_empty()) {
            threshold = Some(alpha);
        }
        let idx = (level - 1) as usize;
        let e_even = even.roots.get(idx).copied();
        let e_odd = odd.roots.get(idx).copied();
        let delta = match (e_even, e_odd) {
            (Some(e), Some(o)) => Some(o - e),
            _ => None,
        };
        rows.push(SweepRow {
            alpha,
            e_even,
            e_odd,
            delta,
            flagged: delta.is_none(),
        });
    }
    Ok(SweepTable {
        level,
        rows,
        threshold_alpha: threshold,
    })
}
