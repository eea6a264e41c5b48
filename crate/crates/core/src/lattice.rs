//! Spatial grids and discrete Hamiltonians.
//!
//! Grids are uniform sample lattices. Hard walls are always represented by
//! domain truncation: the wavefunction is taken to vanish one spacing beyond
//! the first and last sample (Dirichlet ghost points), never by large finite
//! potential values. [`Grid::interior_of`] places those ghost points exactly
//! on the physical walls, which keeps the discretization second-order in h.

use crate::error::{Error, Result};
use serde::Serialize;

/// Which end sample positions are computed from. Centered grids reflect
/// exactly about x = 0; a right-anchored grid mirrors a left-anchored one
/// bitwise, which keeps the two wells of a split domain exact images.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
enum Anchor {
    Left,
    Right,
    Center,
}

/// Uniform one-dimensional sample lattice.
///
/// A grid flagged `symmetric` has `xmin = -xmax` and an odd sample count, so
/// that `x = 0` is a sample and sample positions reflect exactly:
/// `x(n-1-i) == -x(i)` bitwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    xmin: f64,
    xmax: f64,
    n: usize,
    h: f64,
    symmetric: bool,
    anchor: Anchor,
}

impl Grid {
    /// Sample count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Spacing, `(xmax - xmin) / (n - 1)`.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn xmin(&self) -> f64 {
        self.xmin
    }

    pub fn xmax(&self) -> f64 {
        self.xmax
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Position of sample `i`.
    ///
    /// On symmetric grids positions are computed about the midpoint so that
    /// reflection is exact in floating point.
    pub fn x(&self, i: usize) -> f64 {
        debug_assert!(i < self.n);
        match self.anchor {
            Anchor::Center => {
                let c = ((self.n - 1) / 2) as f64;
                (i as f64 - c) * self.h
            }
            Anchor::Left => self.xmin + i as f64 * self.h,
            Anchor::Right => self.xmax - (self.n - 1 - i) as f64 * self.h,
        }
    }

    /// All sample positions.
    pub fn samples(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Index of the sample closest to `x`.
    pub fn nearest_index(&self, x: f64) -> usize {
        let raw = (x - self.x(0)) / self.h;
        let i = raw.round();
        if i <= 0.0 {
            0
        } else if i >= (self.n - 1) as f64 {
            self.n - 1
        } else {
            i as usize
        }
    }

    /// Grid whose samples fill the open interval between two hard walls.
    ///
    /// The Dirichlet ghost points of the assembled operator then coincide
    /// with the walls, so infinite-well eigenvalues converge at O(h^2).
    pub fn interior_of(wall_lo: f64, wall_hi: f64, n: usize) -> Result<Grid> {
        if !wall_lo.is_finite() || !wall_hi.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "non-finite walls ({wall_lo}, {wall_hi})"
            )));
        }
        if wall_hi <= wall_lo {
            return Err(Error::InvalidGrid(format!(
                "walls out of order ({wall_lo}, {wall_hi})"
            )));
        }
        if n < 3 {
            return Err(Error::InvalidGrid(format!("n = {n} < 3")));
        }
        let h = (wall_hi - wall_lo) / (n + 1) as f64;
        build_grid(wall_lo + h, wall_hi - h, n)
    }
}

/// Build a uniform grid with samples at both end points.
///
/// The `symmetric` flag is set iff `xmin == -xmax` and `n` is odd.
pub fn build_grid(xmin: f64, xmax: f64, n: usize) -> Result<Grid> {
    build_grid_anchored(xmin, xmax, n, Anchor::Left)
}

fn build_grid_anchored(xmin: f64, xmax: f64, n: usize, anchor: Anchor) -> Result<Grid> {
    if !xmin.is_finite() || !xmax.is_finite() {
        return Err(Error::InvalidGrid(format!(
            "non-finite bounds ({xmin}, {xmax})"
        )));
    }
    if xmax <= xmin {
        return Err(Error::InvalidGrid(format!(
            "bounds out of order ({xmin}, {xmax})"
        )));
    }
    if n < 3 {
        return Err(Error::InvalidGrid(format!("n = {n} < 3")));
    }
    let h = (xmax - xmin) / (n - 1) as f64;
    let symmetric = xmin == -xmax && n % 2 == 1;
    Ok(Grid {
        xmin,
        xmax,
        n,
        h,
        symmetric,
        anchor: if symmetric { Anchor::Center } else { anchor },
    })
}

/// Closed interval representing an infinite internal barrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarrierInterval {
    lo: f64,
    hi: f64,
}

impl BarrierInterval {
    pub fn new(lo: f64, hi: f64) -> Result<BarrierInterval> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::InvalidParameter(format!(
                "barrier interval [{lo}, {hi}] must satisfy lo < hi"
            )));
        }
        Ok(BarrierInterval { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// True when `lo == -hi`, the case used for parity arguments.
    pub fn is_centered(&self) -> bool {
        self.lo == -self.hi
    }
}

/// Operators that can be applied to a sample vector.
///
/// Implemented by [`TridiagonalOperator`], by [`SplitOperator`] for domains
/// with an excluded interior region, and by the two-channel spinor operator.
pub trait ApplyOp {
    fn dim(&self) -> usize;

    fn apply_into(&self, v: &[f64], out: &mut [f64]);

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.apply_into(v, &mut out);
        out
    }
}

/// Real symmetric tridiagonal operator, stored as one diagonal and one
/// off-diagonal array so symmetry holds by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<TridiagonalOperator> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len().saturating_sub(1),
                got: offdiag.len(),
            });
        }
        for (i, d) in diag.iter().enumerate() {
            if !d.is_finite() {
                return Err(Error::NonFiniteSample {
                    index: i,
                    x: f64::NAN,
                    value: *d,
                });
            }
        }
        for (i, e) in offdiag.iter().enumerate() {
            if !e.is_finite() {
                return Err(Error::NonFiniteSample {
                    index: i,
                    x: f64::NAN,
                    value: *e,
                });
            }
        }
        Ok(TridiagonalOperator { diag, offdiag })
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Infinity norm (max absolute row sum).
    pub fn inf_norm(&self) -> f64 {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let left = if i > 0 {
                    self.offdiag[i - 1].abs()
                } else {
                    0.0
                };
                let right = if i < n - 1 {
                    self.offdiag[i].abs()
                } else {
                    0.0
                };
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    /// Dense expansion, for small-n cross checks.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.diag.len();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.diag[i];
            if i + 1 < n {
                m[i][i + 1] = self.offdiag[i];
                m[i + 1][i] = self.offdiag[i];
            }
        }
        m
    }
}

impl ApplyOp for TridiagonalOperator {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        let n = self.diag.len();
        assert_eq!(v.len(), n);
        assert_eq!(out.len(), n);
        for i in 0..n {
            let mut acc = self.diag[i] * v[i];
            if i > 0 {
                acc += self.offdiag[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                acc += self.offdiag[i] * v[i + 1];
            }
            out[i] = acc;
        }
    }
}

/// Assemble the three-point finite-difference Hamiltonian
/// `H = -hbar^2/(2m) d^2/dx^2 + V` on a grid, with Dirichlet conditions
/// implied one spacing outside the sample range.
///
/// Infinite potential regions must be handled by domain truncation before
/// calling this; every sample of `v` has to be finite.
pub fn assemble_hamiltonian(
    grid: &Grid,
    v: &[f64],
    mass: f64,
    hbar: f64,
) -> Result<TridiagonalOperator> {
    if v.len() != grid.n() {
        return Err(Error::DimensionMismatch {
            expected: grid.n(),
            got: v.len(),
        });
    }
    if mass.is_nan() || mass <= 0.0 || !mass.is_finite() {
        return Err(Error::InvalidParameter(format!("mass = {mass}")));
    }
    if hbar.is_nan() || hbar <= 0.0 || !hbar.is_finite() {
        return Err(Error::InvalidParameter(format!("hbar = {hbar}")));
    }
    let kin = hbar * hbar / (2.0 * mass * grid.h() * grid.h());
    let mut diag = Vec::with_capacity(grid.n());
    for (i, &vi) in v.iter().enumerate() {
        if !vi.is_finite() {
            return Err(Error::NonFiniteSample {
                index: i,
                x: grid.x(i),
                value: vi,
            });
        }
        diag.push(2.0 * kin + vi);
    }
    let offdiag = vec![-kin; grid.n() - 1];
    TridiagonalOperator::new(diag, offdiag)
}

/// Result of cutting a grid around an infinite internal barrier.
///
/// The barrier end points are snapped to the nearest samples; those samples
/// become the wall faces and are excluded from the sub-grids, so the implied
/// Dirichlet zeros of each sub-domain land exactly on the barrier.
#[derive(Debug, Clone)]
pub struct SplitDomain {
    pub left: Grid,
    pub right: Grid,
    /// Parent index of the first right-well sample.
    pub right_offset: usize,
    /// Parent indices of the snapped barrier faces.
    pub barrier_lo_index: usize,
    pub barrier_hi_index: usize,
    /// Distances the barrier end points moved when snapping.
    pub snap_lo: f64,
    pub snap_hi: f64,
    parent_n: usize,
}

impl SplitDomain {
    pub fn parent_n(&self) -> usize {
        self.parent_n
    }

    /// Embed a left-well sample vector into the parent grid (zeros elsewhere).
    pub fn embed_left(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.left.n());
        let mut out = vec![0.0; self.parent_n];
        out[..v.len()].copy_from_slice(v);
        out
    }

    /// Embed a right-well sample vector into the parent grid.
    pub fn embed_right(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.right.n());
        let mut out = vec![0.0; self.parent_n];
        out[self.right_offset..self.right_offset + v.len()].copy_from_slice(v);
        out
    }

    /// Assemble the full-domain operator from per-well potential samples.
    pub fn operator(
        &self,
        v_left: &[f64],
        v_right: &[f64],
        mass: f64,
        hbar: f64,
    ) -> Result<SplitOperator> {
        let left = assemble_hamiltonian(&self.left, v_left, mass, hbar)?;
        let right = assemble_hamiltonian(&self.right, v_right, mass, hbar)?;
        Ok(SplitOperator {
            left,
            right,
            right_offset: self.right_offset,
            dim: self.parent_n,
        })
    }
}

/// Split a grid into the two wells on either side of an infinite barrier.
pub fn split_domain(grid: &Grid, barrier: &BarrierInterval) -> Result<SplitDomain> {
    let (lo, hi) = (barrier.lo(), barrier.hi());
    if lo <= grid.xmin() || hi >= grid.xmax() {
        return Err(Error::BarrierOutsideDomain {
            lo,
            hi,
            xmin: grid.xmin(),
            xmax: grid.xmax(),
        });
    }
    let j = grid.nearest_index(lo);
    let k = grid.nearest_index(hi);
    if k <= j {
        return Err(Error::InvalidGrid(format!(
            "barrier [{lo}, {hi}] snaps to fewer than one sample at h = {}",
            grid.h()
        )));
    }
    let n_left = j;
    let n_right = grid.n() - 1 - k;
    if n_left < 3 || n_right < 3 {
        return Err(Error::InvalidGrid(format!(
            "sub-grid too small after split (left {n_left}, right {n_right})"
        )));
    }
    let left = build_grid_anchored(grid.x(0), grid.x(j - 1), n_left, Anchor::Left)?;
    let right = build_grid_anchored(grid.x(k + 1), grid.x(grid.n() - 1), n_right, Anchor::Right)?;
    Ok(SplitDomain {
        left,
        right,
        right_offset: k + 1,
        barrier_lo_index: j,
        barrier_hi_index: k,
        snap_lo: (grid.x(j) - lo).abs(),
        snap_hi: (grid.x(k) - hi).abs(),
        parent_n: grid.n(),
    })
}

/// Block operator for a split domain: acts as the left-well Hamiltonian on
/// the left samples, the right-well Hamiltonian on the right samples, and
/// pins everything inside the barrier to zero.
#[derive(Debug, Clone)]
pub struct SplitOperator {
    left: TridiagonalOperator,
    right: TridiagonalOperator,
    right_offset: usize,
    dim: usize,
}

impl SplitOperator {
    pub fn left(&self) -> &TridiagonalOperator {
        &self.left
    }

    pub fn right(&self) -> &TridiagonalOperator {
        &self.right
    }

    pub fn right_offset(&self) -> usize {
        self.right_offset
    }

    pub fn inf_norm(&self) -> f64 {
        self.left.inf_norm().max(self.right.inf_norm())
    }
}

impl ApplyOp for SplitOperator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        assert_eq!(v.len(), self.dim);
        assert_eq!(out.len(), self.dim);
        out.fill(0.0);
        let nl = self.left.dim();
        let nr = self.right.dim();
        self.left.apply_into(&v[..nl], &mut out[..nl]);
        self.right.apply_into(
            &v[self.right_offset..self.right_offset + nr],
            &mut out[self.right_offset..self.right_offset + nr],
        );
    }
}

/// Grid-weighted inner product `h * sum(a_i b_i)`.
pub fn inner(a: &[f64], b: &[f64], weight: f64) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    weight * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()
}

/// Grid-weighted 2-norm.
pub fn norm(a: &[f64], weight: f64) -> f64 {
    inner(a, a, weight).sqrt()
}
