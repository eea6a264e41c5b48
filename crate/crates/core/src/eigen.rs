//! Symmetric tridiagonal eigensolver and degeneracy clustering.
//!
//! Eigenvalues come from bisection on Sturm sequences, eigenvectors from
//! inverse iteration with reorthogonalization, which stays robust when
//! levels cluster to within rounding — the hard case for double wells.

use crate::error::{Error, Result};
use crate::lattice::{norm, ApplyOp, Grid, TridiagonalOperator};
use serde::Serialize;

const MAX_BISECT_ITER: usize = 210;
const MAX_INVERSE_ITER: usize = 12;

/// Count eigenvalues of `op` strictly below `lambda` via the Sturm sequence
/// (number of negative pivots of the LDL^T factorization of `op - lambda I`).
pub fn sturm_count_below(op: &TridiagonalOperator, lambda: f64) -> usize {
    let d = op.diag();
    let e = op.offdiag();
    let n = d.len();
    let max_e2 = e.iter().fold(0.0f64, |m, &x| m.max(x * x));
    let pivmin = f64::MIN_POSITIVE.max(f64::MIN_POSITIVE * max_e2);

    let mut count = 0;
    let mut q = d[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let q_safe = if q.abs() < pivmin {
            if q >= 0.0 {
                pivmin
            } else {
                -pivmin
            }
        } else {
            q
        };
        q = (d[i] - lambda) - e[i - 1] * e[i - 1] / q_safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin_bounds(op: &TridiagonalOperator) -> (f64, f64) {
    let d = op.diag();
    let e = op.offdiag();
    let n = d.len();
    let mut lo = f64::MAX;
    let mut hi = f64::MIN;
    for i in 0..n {
        let left = if i > 0 { e[i - 1].abs() } else { 0.0 };
        let right = if i < n - 1 { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - left - right);
        hi = hi.max(d[i] + left + right);
    }
    let pad = 1e-12 * (hi - lo).abs().max(1.0) + f64::MIN_POSITIVE;
    (lo - pad, hi + pad)
}

/// The `k` lowest eigenvalues, ascending, to near machine precision.
pub fn eigenvalues_lowest(op: &TridiagonalOperator, k: usize) -> Result<Vec<f64>> {
    let n = op.dim();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "requested {k} eigenvalues of a {n}-dimensional operator"
        )));
    }
    let (glo, ghi) = gershgorin_bounds(op);
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let mut a = glo;
        let mut b = ghi;
        for _ in 0..MAX_BISECT_ITER {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if sturm_count_below(op, mid) <= j {
                a = mid;
            } else {
                b = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    Ok(out)
}

/// Partial-pivot LU factorization of `T - lambda I` for a tridiagonal `T`.
/// Row swaps introduce a second super-diagonal.
struct ShiftedLu {
    n: usize,
    low: Vec<f64>,   // multipliers
    d0: Vec<f64>,    // main diagonal of U
    d1: Vec<f64>,    // first super-diagonal of U
    d2: Vec<f64>,    // second super-diagonal of U
    swap: Vec<bool>, // row interchange markers
}

impl ShiftedLu {
    fn factor(op: &TridiagonalOperator, lambda: f64) -> ShiftedLu {
        let n = op.dim();
        let dg = op.diag();
        let e = op.offdiag();
        let tiny = f64::EPSILON * op.inf_norm().max(f64::MIN_POSITIVE) * 1e-3 + f64::MIN_POSITIVE;

        let mut d0 = vec![0.0; n];
        let mut d1 = vec![0.0; n];
        let mut d2 = vec![0.0; n];
        let mut low = vec![0.0; n];
        let mut swap = vec![false; n];

        // current row (a, b, c) and the next row's leading entries
        let mut a = dg[0] - lambda;
        let mut b = if n > 1 { e[0] } else { 0.0 };
        let mut c = 0.0;
        for i in 0..n {
            let (sub, next_d, next_e) = if i + 1 < n {
                (
                    e[i],
                    dg[i + 1] - lambda,
                    if i + 2 < n { e[i + 1] } else { 0.0 },
                )
            } else {
                (0.0, 0.0, 0.0)
            };
            if i + 1 < n && sub.abs() > a.abs() {
                // swap rows i and i+1
                swap[i] = true;
                d0[i] = sub;
                d1[i] = next_d;
                d2[i] = next_e;
                let m = a / sub;
                low[i] = m;
                a = b - m * next_d;
                b = c - m * next_e;
                c = 0.0;
            } else {
                let pivot = if a.abs() < tiny {
                    if a >= 0.0 {
                        tiny
                    } else {
                        -tiny
                    }
                } else {
                    a
                };
                d0[i] = pivot;
                d1[i] = b;
                d2[i] = c;
                if i + 1 < n {
                    let m = sub / pivot;
                    low[i] = m;
                    a = next_d - m * b;
                    b = next_e - m * c;
                    c = 0.0;
                }
            }
        }
        ShiftedLu {
            n,
            low,
            d0,
            d1,
            d2,
            swap,
        }
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swap[i] {
                y.swap(i, i + 1);
            }
            let yi = y[i];
            y[i + 1] -= self.low[i] * yi;
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = y[i];
            if i + 1 < n {
                acc -= self.d1[i] * x[i + 1];
            }
            if i + 2 < n {
                acc -= self.d2[i] * x[i + 2];
            }
            x[i] = acc / self.d0[i];
        }
        x
    }
}

fn euclid_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn orthogonalize_against(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi -= dot * bi;
        }
    }
}

/// Deterministic start vector for inverse iteration; varies with the level
/// index so duplicate shifts still converge to independent directions.
fn start_vector(n: usize, index: usize) -> Vec<f64> {
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    (0..n)
        .map(|i| {
            let t = ((i + 1) as f64 * GOLDEN + (index + 1) as f64 * std::f64::consts::FRAC_1_PI)
                .fract();
            t - 0.5
        })
        .collect()
}

fn residual_euclid(op: &TridiagonalOperator, v: &[f64], lambda: f64) -> f64 {
    let mut hv = vec![0.0; v.len()];
    op.apply_into(v, &mut hv);
    hv.iter()
        .zip(v)
        .map(|(h, x)| {
            let r = h - lambda * x;
            r * r
        })
        .sum::<f64>()
        .sqrt()
}

/// Residual threshold accepted by the solver for a unit (Euclidean) vector.
pub fn solver_tolerance(op: &TridiagonalOperator) -> f64 {
    256.0 * f64::EPSILON * op.inf_norm().max(1.0)
}

/// Guaranteed bound on `||H psi - E psi||` for solver output, valid in the
/// grid-weighted norm as well: grid normalization rescales the residual
/// vector by exactly the factor the weighted norm puts back.
pub fn residual_bound(op: &TridiagonalOperator) -> f64 {
    10.0 * solver_tolerance(op)
}

fn inverse_iteration(
    op: &TridiagonalOperator,
    lambda: f64,
    index: usize,
    previous: &[Vec<f64>],
) -> Result<Vec<f64>> {
    let n = op.dim();
    let lu = ShiftedLu::factor(op, lambda);
    let tol = solver_tolerance(op);

    let mut v = start_vector(n, index);
    orthogonalize_against(&mut v, previous);
    let nv = euclid_norm(&v);
    if nv == 0.0 {
        v = start_vector(n, index + 7919);
    } else {
        v.iter_mut().for_each(|x| *x /= nv);
    }

    let mut best = v.clone();
    let mut best_res = f64::MAX;
    for _ in 0..MAX_INVERSE_ITER {
        let mut y = lu.solve(&v);
        orthogonalize_against(&mut y, previous);
        let ny = euclid_norm(&y);
        if !ny.is_finite() || ny == 0.0 {
            v = start_vector(n, index + 104_729);
            orthogonalize_against(&mut v, previous);
            let nv = euclid_norm(&v).max(f64::MIN_POSITIVE);
            v.iter_mut().for_each(|x| *x /= nv);
            continue;
        }
        y.iter_mut().for_each(|x| *x /= ny);
        let res = residual_euclid(op, &y, lambda);
        if res < best_res {
            best_res = res;
            best = y.clone();
        }
        v = y;
        if res <= tol {
            return Ok(v);
        }
    }
    if best_res <= 10.0 * tol {
        Ok(best)
    } else {
        Err(Error::ConvergenceFailure {
            index,
            iterations: MAX_INVERSE_ITER,
            residual: best_res,
        })
    }
}

/// Euclidean-normalized eigenpairs of the `k` lowest levels, before any grid
/// weighting. This is the raw engine behind [`eigensolve`].
pub fn eigenpairs_euclidean(
    op: &TridiagonalOperator,
    k: usize,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let levels = eigenvalues_lowest(op, k)?;
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    for (j, &lambda) in levels.iter().enumerate() {
        let mut v = inverse_iteration(op, lambda, j, &vectors)?;
        orthogonalize_against(&mut v, &vectors);
        let nv = euclid_norm(&v);
        if nv == 0.0 {
            return Err(Error::ConvergenceFailure {
                index: j,
                iterations: MAX_INVERSE_ITER,
                residual: f64::MAX,
            });
        }
        v.iter_mut().for_each(|x| *x /= nv);
        vectors.push(v);
    }
    Ok((levels, vectors))
}

/// Ordered eigenpairs on a grid. Vectors are normalized so that
/// `h * sum(psi_i^2) = 1` and signed so the first sample above `1e-12` in
/// magnitude is positive.
#[derive(Debug, Clone)]
pub struct Spectrum {
    levels: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    grid: Grid,
}

impl Spectrum {
    /// Assemble a spectrum from parts, validating ordering and normalization.
    /// Vector length may be any multiple of one (e.g. `2 n` for two-channel
    /// states); the norm weight is always the grid spacing.
    pub fn from_parts(levels: Vec<f64>, vectors: Vec<Vec<f64>>, grid: Grid) -> Result<Spectrum> {
        if levels.len() != vectors.len() {
            return Err(Error::DimensionMismatch {
                expected: levels.len(),
                got: vectors.len(),
            });
        }
        for i in 1..levels.len() {
            if levels[i] < levels[i - 1] {
                return Err(Error::UnsortedLevels(i));
            }
        }
        for v in &vectors {
            let nv = norm(v, grid.h());
            if (nv - 1.0).abs() > 1e-8 {
                return Err(Error::NotNormalized(nv));
            }
        }
        Ok(Spectrum {
            levels,
            vectors,
            grid,
        })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> f64 {
        self.levels[i]
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.vectors[i]
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Norm weight for inner products between states of this spectrum.
    pub fn weight(&self) -> f64 {
        self.grid.h()
    }

    /// Merge two spectra over the same grid into one ascending list.
    /// Ties keep `self` entries first, so merging is deterministic.
    pub fn merge(&self, other: &Spectrum) -> Result<Spectrum> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(
                "cannot merge spectra over different grids".into(),
            ));
        }
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (i, &e) in self.levels.iter().enumerate() {
            pairs.push((e, 0, i));
        }
        for (i, &e) in other.levels.iter().enumerate() {
            pairs.push((e, 1, i));
        }
        pairs.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap()
                .then(a.1.cmp(&b.1))
                .then(a.2.cmp(&b.2))
        });
        let mut levels = Vec::with_capacity(pairs.len());
        let mut vectors = Vec::with_capacity(pairs.len());
        for (e, src, i) in pairs {
            levels.push(e);
            vectors.push(if src == 0 {
                self.vectors[i].clone()
            } else {
                other.vectors[i].clone()
            });
        }
        Ok(Spectrum {
            levels,
            vectors,
            grid: self.grid.clone(),
        })
    }

    /// Keep only the `k` lowest levels.
    pub fn truncated(mut self, k: usize) -> Spectrum {
        self.levels.truncate(k);
        self.vectors.truncate(k);
        self
    }
}

fn fix_sign(v: &mut [f64]) {
    for &x in v.iter() {
        if x.abs() > 1e-12 {
            if x < 0.0 {
                v.iter_mut().for_each(|y| *y = -*y);
            }
            return;
        }
    }
}

/// Solve for the `k` lowest eigenpairs of a discretized Hamiltonian.
///
/// Deterministic for identical inputs; iteration failures are reported,
/// never silently ignored.
pub fn eigensolve(op: &TridiagonalOperator, k: usize, grid: &Grid) -> Result<Spectrum> {
    if op.dim() != grid.n() {
        return Err(Error::DimensionMismatch {
            expected: grid.n(),
            got: op.dim(),
        });
    }
    let (levels, mut vectors) = eigenpairs_euclidean(op, k)?;
    let scale = 1.0 / grid.h().sqrt();
    for v in &mut vectors {
        v.iter_mut().for_each(|x| *x *= scale);
        fix_sign(v);
    }
    Spectrum::from_parts(levels, vectors, grid.clone())
}

/// One group of numerically coincident levels.
#[derive(Debug, Clone, Serialize)]
pub struct DegeneracyCluster {
    pub mean_energy: f64,
    pub multiplicity: usize,
    pub members: Vec<usize>,
}

/// Tolerance-clustered levels. Clusters are disjoint, cover the input, and
/// are separated by gaps larger than `tol`.
#[derive(Debug, Clone, Serialize)]
pub struct DegeneracyReport {
    pub clusters: Vec<DegeneracyCluster>,
    pub tol: f64,
}

impl DegeneracyReport {
    pub fn multiplicities(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.multiplicity).collect()
    }
}

/// Greedy gap-based clustering: scanning ascending, a new cluster starts
/// whenever the gap to the previous level exceeds `tol`.
pub fn cluster_degeneracies(levels: &[f64], tol: f64) -> Result<DegeneracyReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tol = {tol}")));
    }
    for i in 1..levels.len() {
        if levels[i] < levels[i - 1] {
            return Err(Error::UnsortedLevels(i));
        }
    }
    let mut clusters: Vec<DegeneracyCluster> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    for (i, &e) in levels.iter().enumerate() {
        if let Some(&last) = current.last() {
            if e - levels[last] > tol {
                clusters.push(finish_cluster(&current, levels));
                current.clear();
            }
        }
        current.push(i);
    }
    if !current.is_empty() {
        clusters.push(finish_cluster(&current, levels));
    }
    Ok(DegeneracyReport { clusters, tol })
}

fn finish_cluster(members: &[usize], levels: &[f64]) -> DegeneracyCluster {
    let mean = members.iter().map(|&i| levels[i]).sum::<f64>() / members.len() as f64;
    DegeneracyCluster {
        mean_energy: mean,
        multiplicity: members.len(),
        members: members.to_vec(),
    }
}

/// Grid-weighted residual `||H psi - E psi||_2`.
pub fn residual_norm(op: &dyn ApplyOp, psi: &[f64], e: f64, weight: f64) -> Result<f64> {
    if psi.len() != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            got: psi.len(),
        });
    }
    let mut hpsi = vec![0.0; psi.len()];
    op.apply_into(psi, &mut hpsi);
    let r: Vec<f64> = hpsi.iter().zip(psi).map(|(h, x)| h - e * x).collect();
    Ok(norm(&r, weight))
}
