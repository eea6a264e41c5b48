//! Symmetry operators, commutator diagnostics, ground-level breakdown
//! verdicts, the non-overlapping pair construction, and the half-line
//! projection for potentials with an infinite central barrier.

use crate::eigen::{cluster_degeneracies, Spectrum};
use crate::error::{Error, Result};
use crate::lattice::{inner, norm, ApplyOp, BarrierInterval, Grid, TridiagonalOperator};
use serde::Serialize;

/// Dense orthogonal involution, for symmetries without special structure.
#[derive(Debug, Clone)]
pub struct DenseInvolution {
    dim: usize,
    /// Row-major matrix entries.
    mat: Vec<f64>,
}

impl DenseInvolution {
    pub fn new(dim: usize, mat: Vec<f64>) -> Result<DenseInvolution> {
        if mat.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: mat.len(),
            });
        }
        Ok(DenseInvolution { dim, mat })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.mat
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(m, x)| m * x).sum())
            .collect()
    }
}

/// A unitary involution acting on state samples.
#[derive(Debug, Clone)]
pub enum SymmetryOp {
    /// Sample reversal on a symmetric grid: `(P psi)(x) = psi(-x)`.
    Parity,
    /// Channel sign flip on stacked two-channel states: `(up, down) ->
    /// (up, -down)`.
    Sigma3,
    /// Arbitrary orthogonal involution given as a dense matrix.
    Custom(DenseInvolution),
}

impl SymmetryOp {
    /// Apply the operator to a sample vector.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        match self {
            SymmetryOp::Parity => {
                let mut out = v.to_vec();
                out.reverse();
                Ok(out)
            }
            SymmetryOp::Sigma3 => {
                if !v.len().is_multiple_of(2) {
                    return Err(Error::DimensionMismatch {
                        expected: v.len() + 1,
                        got: v.len(),
                    });
                }
                let half = v.len() / 2;
                let mut out = v.to_vec();
                for x in &mut out[half..] {
                    *x = -*x;
                }
                Ok(out)
            }
            SymmetryOp::Custom(m) => {
                if v.len() != m.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: m.dim(),
                        got: v.len(),
                    });
                }
                Ok(m.apply(v))
            }
        }
    }
}

/// Apply the parity operator on a symmetric grid: sample `i` maps to sample
/// `n - 1 - i`.
pub fn parity_apply(psi: &[f64], grid: &Grid) -> Result<Vec<f64>> {
    if !grid.is_symmetric() {
        return Err(Error::GridMismatch(
            "parity requires a symmetric grid".into(),
        ));
    }
    if psi.len() != grid.n() {
        return Err(Error::DimensionMismatch {
            expected: grid.n(),
            got: psi.len(),
        });
    }
    let mut out = psi.to_vec();
    out.reverse();
    Ok(out)
}

/// Probe-basis commutator defect: `max_i ||(H U - U H) e_i||_2`.
///
/// Zero within rounding whenever `U` is an exact symmetry of the assembled
/// operator (even potential on a symmetric grid, or the block-diagonal
/// two-channel Hamiltonian with the channel sign flip).
pub fn commutator_norm(op: &dyn ApplyOp, u: &SymmetryOp) -> Result<f64> {
    let n = op.dim();
    let mut e = vec![0.0; n];
    let mut hu = vec![0.0; n];
    let mut max_defect = 0.0f64;
    for i in 0..n {
        e[i] = 1.0;
        let ue = u.apply(&e)?;
        op.apply_into(&ue, &mut hu);
        let mut he = vec![0.0; n];
        op.apply_into(&e, &mut he);
        let uhe = u.apply(&he)?;
        let defect: f64 = hu
            .iter()
            .zip(&uhe)
            .map(|(a, b)| {
                let d = a - b;
                d * d
            })
            .sum::<f64>()
            .sqrt();
        max_defect = max_defect.max(defect);
        e[i] = 0.0;
    }
    Ok(max_defect)
}

const COLLINEAR_EPS: f64 = 1e-12;

fn scaled(v: &[f64], s: f64) -> Vec<f64> {
    v.iter().map(|x| x * s).collect()
}

fn lin_comb(a: &[f64], ca: f64, b: &[f64], cb: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| ca * x + cb * y).collect()
}

/// From a symmetry-breaking pair of overlapping states (`b = U a`, both
/// normalized in the `weight` inner product), build the non-overlapping pair
/// `(L, R)` with `<L|R> = 0` and `U L = R`, spanning the same subspace.
pub fn build_nonoverlapping_pair(
    a: &[f64],
    b: &[f64],
    u: &SymmetryOp,
    weight: f64,
    tol: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let na = norm(a, weight);
    if (na - 1.0).abs() > 1e-6 {
        return Err(Error::NotNormalized(na));
    }
    let nb = norm(b, weight);
    if (nb - 1.0).abs() > 1e-6 {
        return Err(Error::NotNormalized(nb));
    }
    let ua = u.apply(a)?;
    let defect: f64 = norm(
        &ua.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>(),
        weight,
    );
    if defect > tol {
        return Err(Error::SymmetryInconsistent(format!(
            "B differs from U A by {defect:e}"
        )));
    }
    let s = inner(a, b, weight);
    if s.abs() >= 1.0 - COLLINEAR_EPS {
        return Err(Error::CollinearStates(s.abs()));
    }
    let plus = scaled(&lin_comb(a, 1.0, b, 1.0), 1.0 / (2.0 * (1.0 + s)).sqrt());
    let minus = scaled(&lin_comb(a, 1.0, b, -1.0), 1.0 / (2.0 * (1.0 - s)).sqrt());
    let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
    let left = lin_comb(&plus, inv_sqrt2, &minus, inv_sqrt2);
    let right = lin_comb(&plus, inv_sqrt2, &minus, -inv_sqrt2);
    Ok((left, right))
}

/// Recombine a non-overlapping pair into the symmetry-respecting states
/// `plus = (L + R)/sqrt(2)` (eigenvalue +1) and `minus = (L - R)/sqrt(2)`
/// (eigenvalue -1).
pub fn symmetry_respecting_pair(
    left: &[f64],
    right: &[f64],
    weight: f64,
    tol: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if left.len() != right.len() {
        return Err(Error::DimensionMismatch {
            expected: left.len(),
            got: right.len(),
        });
    }
    let overlap = inner(left, right, weight);
    if overlap.abs() > tol {
        return Err(Error::NotOrthogonal(overlap));
    }
    let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
    Ok((
        lin_comb(left, inv_sqrt2, right, inv_sqrt2),
        lin_comb(left, inv_sqrt2, right, -inv_sqrt2),
    ))
}

/// Result of projecting a state onto the right half-line.
#[derive(Debug, Clone)]
pub struct RightProjection {
    pub samples: Vec<f64>,
    /// Set when the right half was identically zero and the input was
    /// returned unchanged (the input is then already one of a
    /// non-overlapping pair together with its reflection).
    pub unchanged: bool,
}

/// Zero the samples at `x < 0` and renormalize. The sample at `x = 0`
/// belongs to the right half; for every model with a central barrier it sits
/// inside the barrier, where the state vanishes anyway.
pub fn project_right(
    psi: &[f64],
    grid: &Grid,
    barrier: &BarrierInterval,
) -> Result<RightProjection> {
    if !grid.is_symmetric() {
        return Err(Error::GridMismatch(
            "projection requires a symmetric grid".into(),
        ));
    }
    if !barrier.is_centered() {
        return Err(Error::InvalidParameter(format!(
            "barrier [{}, {}] is not centered at 0",
            barrier.lo(),
            barrier.hi()
        )));
    }
    if psi.len() != grid.n() {
        return Err(Error::DimensionMismatch {
            expected: grid.n(),
            got: psi.len(),
        });
    }
    let center = (grid.n() - 1) / 2;
    let right_norm_sq: f64 = psi[center..].iter().map(|x| x * x).sum::<f64>() * grid.h();
    if right_norm_sq == 0.0 {
        let total = norm(psi, grid.h());
        if total == 0.0 {
            return Err(Error::ZeroState);
        }
        return Ok(RightProjection {
            samples: psi.to_vec(),
            unchanged: true,
        });
    }
    let k = 1.0 / right_norm_sq.sqrt();
    let mut out = vec![0.0; psi.len()];
    for (i, x) in psi.iter().enumerate() {
        if i >= center {
            out[i] = k * x;
        }
    }
    Ok(RightProjection {
        samples: out,
        unchanged: false,
    })
}

/// Verdict on spontaneous breakdown of a symmetry at the ground level.
#[derive(Debug, Clone, Serialize)]
pub struct SsbVerdict {
    pub ground_multiplicity: usize,
    pub commutator_norm: f64,
    /// Non-overlapping symmetry-breaking pair, when one exists.
    #[serde(skip)]
    pub pair: Option<(Vec<f64>, Vec<f64>)>,
    pub pair_overlap: f64,
    /// Defect `||U L - R||` of the reported pair.
    pub pair_defect: f64,
    pub broken: bool,
}

/// Decide whether the ground level of `spectrum` spontaneously breaks the
/// symmetry `u` of `hamiltonian`.
///
/// The ground cluster is found at tolerance `tol`. For a degenerate cluster
/// the restriction of `u` to the span of the first two ground vectors is a
/// 2x2 involution; unless that restriction is plus or minus the identity it
/// has eigenvalues +1 and -1, and the sum and difference of its in-plane
/// eigenvectors form the non-overlapping pair with `U L = R`.
pub fn detect_ssb(
    spectrum: &Spectrum,
    hamiltonian: &dyn ApplyOp,
    u: &SymmetryOp,
    tol: f64,
) -> Result<SsbVerdict> {
    if spectrum.len() < 2 {
        return Err(Error::InvalidParameter(
            "spectrum must contain at least 2 levels".into(),
        ));
    }
    let comm = commutator_norm(hamiltonian, u)?;
    let scale = {
        // largest column norm seen by the probe, as an operator magnitude
        let n = hamiltonian.dim();
        let mut e = vec![0.0; n];
        let mut he = vec![0.0; n];
        let mut m = 0.0f64;
        for i in (0..n).step_by((n / 16).max(1)) {
            e[i] = 1.0;
            hamiltonian.apply_into(&e, &mut he);
            m = m.max(he.iter().map(|x| x * x).sum::<f64>().sqrt());
            e[i] = 0.0;
        }
        m.max(1.0)
    };
    if comm > 1e-8 * scale {
        return Err(Error::NotASymmetry(comm));
    }

    let w = spectrum.weight();
    let report = cluster_degeneracies(spectrum.levels(), tol)?;
    let ground = &report.clusters[0];
    if ground.multiplicity < 2 {
        return Ok(SsbVerdict {
            ground_multiplicity: ground.multiplicity,
            commutator_norm: comm,
            pair: None,
            pair_overlap: 0.0,
            pair_defect: 0.0,
            broken: false,
        });
    }

    // Orthonormal basis of the (first two dimensions of the) ground space.
    let v0 = spectrum.vector(ground.members[0]).to_vec();
    let mut v1 = spectrum.vector(ground.members[1]).to_vec();
    let c = inner(&v0, &v1, w);
    for (y, x) in v1.iter_mut().zip(&v0) {
        *y -= c * x;
    }
    let n1 = norm(&v1, w);
    if n1 < 1e-8 {
        return Err(Error::SymmetryInconsistent(
            "clustered ground vectors are collinear".into(),
        ));
    }
    v1.iter_mut().for_each(|y| *y /= n1);

    let uv0 = u.apply(&v0)?;
    let uv1 = u.apply(&v1)?;
    // restriction of U to span{v0, v1}
    let m00 = inner(&v0, &uv0, w);
    let m10 = inner(&v1, &uv0, w);
    let m01 = inner(&v0, &uv1, w);
    let m11 = inner(&v1, &uv1, w);
    // the solver basis is arbitrary within the cluster; U must still map it
    // into the same span
    for (uv, (a0, a1)) in [(&uv0, (m00, m10)), (&uv1, (m01, m11))] {
        let proj = lin_comb(&v0, a0, &v1, a1);
        let defect = norm(
            &uv.iter().zip(&proj).map(|(x, y)| x - y).collect::<Vec<_>>(),
            w,
        );
        if defect > tol.max(1e-10) {
            return Err(Error::SymmetryInconsistent(format!(
                "symmetry leaves the ground eigenspace by {defect:e}"
            )));
        }
    }
    let r_sym = 0.5 * (m01 + m10);
    // M^2 = I for an involution restricted to an invariant plane
    let m2_defect = [
        m00 * m00 + r_sym * r_sym - 1.0,
        m11 * m11 + r_sym * r_sym - 1.0,
        r_sym * (m00 + m11),
    ]
    .iter()
    .fold(0.0f64, |acc, d| acc.max(d.abs()));
    if m2_defect > 1e-6 {
        return Err(Error::SymmetryInconsistent(format!(
            "restriction of U to the ground space is not an involution (defect {m2_defect:e})"
        )));
    }

    let identity_like = (m00 - 1.0).abs().max((m11 - 1.0).abs()).max(r_sym.abs());
    let anti_identity_like = (m00 + 1.0).abs().max((m11 + 1.0).abs()).max(r_sym.abs());
    if identity_like < 1e-8 || anti_identity_like < 1e-8 {
        // U acts as +-identity on the ground space: every image is collinear
        // with its source, so no symmetry-breaking pair exists
        return Ok(SsbVerdict {
            ground_multiplicity: ground.multiplicity,
            commutator_norm: comm,
            pair: None,
            pair_overlap: 0.0,
            pair_defect: 0.0,
            broken: false,
        });
    }

    // Eigenvectors of the symmetric 2x2 restriction; eigenvalues are +-1.
    let theta = 0.5 * (2.0 * r_sym).atan2(m00 - m11);
    let (cos_t, sin_t) = (theta.cos(), theta.sin());
    let lam_first = m00 * cos_t * cos_t + m11 * sin_t * sin_t + 2.0 * r_sym * cos_t * sin_t;
    let e_first = lin_comb(&v0, cos_t, &v1, sin_t);
    let e_second = lin_comb(&v0, -sin_t, &v1, cos_t);
    let (plus, minus) = if lam_first > 0.0 {
        (e_first, e_second)
    } else {
        (e_second, e_first)
    };

    let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
    let left = lin_comb(&plus, inv_sqrt2, &minus, inv_sqrt2);
    let right = lin_comb(&plus, inv_sqrt2, &minus, -inv_sqrt2);
    let overlap = inner(&left, &right, w);
    let ul = u.apply(&left)?;
    let defect = norm(
        &ul.iter()
            .zip(&right)
            .map(|(x, y)| x - y)
            .collect::<Vec<_>>(),
        w,
    );
    let broken = overlap.abs() <= tol && defect <= tol;
    Ok(SsbVerdict {
        ground_multiplicity: ground.multiplicity,
        commutator_norm: comm,
        pair: Some((left, right)),
        pair_overlap: overlap,
        pair_defect: defect,
        broken,
    })
}

/// Even and odd parity sectors of a reflection-symmetric tridiagonal
/// operator on a symmetric grid.
///
/// Folding the domain about x = 0 turns the operator into two independent
/// tridiagonal blocks, one per parity, which stay perfectly separated even
/// when the even-odd splitting falls below rounding.
#[derive(Debug, Clone)]
pub struct ParitySectors {
    pub even: TridiagonalOperator,
    pub odd: TridiagonalOperator,
    center: usize,
}

impl ParitySectors {
    /// Unfold an even-sector vector to the full grid (not normalized).
    pub fn unfold_even(&self, folded: &[f64]) -> Vec<f64> {
        let q = self.center;
        let n = 2 * q + 1;
        let mut out = vec![0.0; n];
        out[q] = folded[0] * 2.0f64.sqrt();
        for (j, &x) in folded.iter().enumerate().skip(1) {
            out[q + j] = x;
            out[q - j] = x;
        }
        out
    }

    /// Unfold an odd-sector vector to the full grid (not normalized).
    pub fn unfold_odd(&self, folded: &[f64]) -> Vec<f64> {
        let q = self.center;
        let n = 2 * q + 1;
        let mut out = vec![0.0; n];
        for (j, &x) in folded.iter().enumerate() {
            out[q + 1 + j] = x;
            out[q - 1 - j] = -x;
        }
        out
    }
}

/// Fold a reflection-symmetric operator into its parity sectors.
pub fn parity_sectors(op: &TridiagonalOperator, grid: &Grid) -> Result<ParitySectors> {
    if !grid.is_symmetric() {
        return Err(Error::GridMismatch(
            "parity sectors require a symmetric grid".into(),
        ));
    }
    if op.dim() != grid.n() {
        return Err(Error::DimensionMismatch {
            expected: grid.n(),
            got: op.dim(),
        });
    }
    let n = op.dim();
    let d = op.diag();
    let e = op.offdiag();
    for i in 0..n {
        if d[i] != d[n - 1 - i] {
            return Err(Error::SymmetryInconsistent(format!(
                "diagonal is not reflection-symmetric at index {i}"
            )));
        }
    }
    for i in 0..n - 1 {
        if e[i] != e[n - 2 - i] {
            return Err(Error::SymmetryInconsistent(format!(
                "off-diagonal is not reflection-symmetric at index {i}"
            )));
        }
    }
    let q = (n - 1) / 2;
    // Even sector: basis (psi_q / sqrt(2), psi_{q+1}, ..., psi_{n-1}); the
    // center coupling picks up the sqrt(2) of the similarity scaling.
    let mut even_diag = Vec::with_capacity(q + 1);
    let mut even_off = Vec::with_capacity(q);
    even_diag.push(d[q]);
    for j in 1..=q {
        even_diag.push(d[q + j]);
    }
    if q >= 1 {
        even_off.push(2.0f64.sqrt() * e[q]);
        for j in 1..q {
            even_off.push(e[q + j]);
        }
    }
    let even = TridiagonalOperator::new(even_diag, even_off)?;
    let odd = TridiagonalOperator::new(
        (1..=q).map(|j| d[q + j]).collect(),
        (1..q).map(|j| e[q + j]).collect(),
    )?;
    Ok(ParitySectors {
        even,
        odd,
        center: q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{
        eigensolve, eigenvalues_lowest, residual_bound, residual_norm, solver_tolerance,
    };
    use crate::lattice::{assemble_hamiltonian, build_grid, split_domain};
    use crate::models::{self, WellSide};

    #[test]
    fn parity_fixes_even_and_flips_odd_samples() {
        let g = build_grid(-1.0, 1.0, 5).unwrap();
        let even: Vec<f64> = g.samples().iter().map(|&x| x * x).collect();
        assert_eq!(parity_apply(&even, &g).unwrap(), even);
        let odd: Vec<f64> = g.samples().iter().map(|&x| x * x * x).collect();
        let negated: Vec<f64> = odd.iter().map(|x| -x).collect();
        assert_eq!(parity_apply(&odd, &g).unwrap(), negated);
    }

    #[test]
    fn parity_rejects_asymmetric_grid() {
        let g = build_grid(0.0, 1.0, 5).unwrap();
        assert!(parity_apply(&[0.0; 5], &g).is_err());
    }

    #[test]
    fn parity_maps_left_well_function_to_right() {
        let g = Grid::interior_of(-2.0, 2.0, 1599).unwrap();
        let l = models::uinf_eigenfunction(1, WellSide::Left, 2.0, 0.5, &g).unwrap();
        let r = models::uinf_eigenfunction(1, WellSide::Right, 2.0, 0.5, &g).unwrap();
        assert_eq!(parity_apply(&l, &g).unwrap(), r);
    }

    #[test]
    fn commutator_vanishes_for_even_potential() {
        let g = build_grid(-3.0, 3.0, 201).unwrap();
        let v: Vec<f64> = g
            .samples()
            .iter()
            .map(|&x| {
                let x2 = x * x;
                x2 * x2 - x2
            })
            .collect();
        let op = assemble_hamiltonian(&g, &v, 1.0, 1.0).unwrap();
        let c = commutator_norm(&op, &SymmetryOp::Parity).unwrap();
        assert!(c <= 1e-12, "commutator {c:e}");
    }

    #[test]
    fn commutator_detects_tilted_potential() {
        let g = build_grid(-3.0, 3.0, 201).unwrap();
        let v: Vec<f64> = g
            .samples()
            .iter()
            .map(|&x| {
                let x2 = x * x;
                x2 * x2 - x2 + 0.1 * x
            })
            .collect();
        let op = assemble_hamiltonian(&g, &v, 1.0, 1.0).unwrap();
        let c = commutator_norm(&op, &SymmetryOp::Parity).unwrap();
        assert!(c > 1e-3, "commutator {c:e}");
    }

    #[test]
    fn nonoverlapping_pair_two_vector_example() {
        // A = (1, 0), B = (0.6, 0.8), U = reflection about their bisector
        let a = vec![1.0, 0.0];
        let b = vec![0.6, 0.8];
        let plus_dir = [0.894_427_190_999_915_9, 0.447_213_595_499_958];
        let mat = vec![
            2.0 * plus_dir[0] * plus_dir[0] - 1.0,
            2.0 * plus_dir[0] * plus_dir[1],
            2.0 * plus_dir[1] * plus_dir[0],
            2.0 * plus_dir[1] * plus_dir[1] - 1.0,
        ];
        let u = SymmetryOp::Custom(DenseInvolution::new(2, mat).unwrap());
        let (l, r) = build_nonoverlapping_pair(&a, &b, &u, 1.0, 1e-8).unwrap();
        assert!((l[0] - 0.948_683_298_050_513_8).abs() < 1e-12);
        assert!((l[1] + 0.316_227_766_016_837_94).abs() < 1e-12);
        assert!((r[0] - 0.316_227_766_016_837_94).abs() < 1e-12);
        assert!((r[1] - 0.948_683_298_050_513_8).abs() < 1e-12);
        assert!(inner(&l, &r, 1.0).abs() < 1e-15);
        // U L = R and U R = L
        let ul = u.apply(&l).unwrap();
        let ur = u.apply(&r).unwrap();
        for i in 0..2 {
            assert!((ul[i] - r[i]).abs() < 1e-12);
            assert!((ur[i] - l[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn already_orthogonal_inputs_still_give_orthogonal_pair() {
        let a = vec![1.0, 0.0];
        let b = vec![0.0, 1.0];
        let u = SymmetryOp::Custom(DenseInvolution::new(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap());
        let (l, r) = build_nonoverlapping_pair(&a, &b, &u, 1.0, 1e-8).unwrap();
        assert!(inner(&l, &r, 1.0).abs() < 1e-15);
        assert!((norm(&l, 1.0) - 1.0).abs() < 1e-12);
        assert!((norm(&r, 1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pair_construction_rejects_collinear_states() {
        let a = vec![1.0, 0.0];
        let u = SymmetryOp::Custom(DenseInvolution::new(2, vec![1.0, 0.0, 0.0, -1.0]).unwrap());
        let err = build_nonoverlapping_pair(&a, &a, &u, 1.0, 1e-8);
        assert!(matches!(err, Err(Error::CollinearStates(_))));
    }

    #[test]
    fn pair_construction_rejects_mismatched_b() {
        let a = vec![1.0, 0.0];
        let b = vec![0.6, 0.8];
        // U maps A elsewhere than B
        let u = SymmetryOp::Custom(DenseInvolution::new(2, vec![1.0, 0.0, 0.0, -1.0]).unwrap());
        assert!(matches!(
            build_nonoverlapping_pair(&a, &b, &u, 1.0, 1e-8),
            Err(Error::SymmetryInconsistent(_))
        ));
    }

    #[test]
    fn respecting_pair_from_well_functions() {
        let g = Grid::interior_of(-2.0, 2.0, 1599).unwrap();
        let l = models::uinf_eigenfunction(1, WellSide::Left, 2.0, 0.5, &g).unwrap();
        let r = models::uinf_eigenfunction(1, WellSide::Right, 2.0, 0.5, &g).unwrap();
        let (plus, minus) = symmetry_respecting_pair(&l, &r, g.h(), 1e-10).unwrap();
        // even under parity, odd under parity
        let p_plus = parity_apply(&plus, &g).unwrap();
        let p_minus = parity_apply(&minus, &g).unwrap();
        for i in 0..g.n() {
            assert!((p_plus[i] - plus[i]).abs() < 1e-12);
            assert!((p_minus[i] + minus[i]).abs() < 1e-12);
        }
        assert!(inner(&plus, &minus, g.h()).abs() < 1e-12);
        assert!((norm(&plus, g.h()) - 1.0).abs() < 1e-10);
        assert!((norm(&minus, g.h()) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn respecting_pair_rejects_overlapping_inputs() {
        let l = vec![1.0, 0.0];
        let r = vec![0.6, 0.8];
        assert!(matches!(
            symmetry_respecting_pair(&l, &r, 1.0, 1e-10),
            Err(Error::NotOrthogonal(_))
        ));
    }

    #[test]
    fn projection_of_right_localized_state_is_identity_up_to_norm() {
        let g = Grid::interior_of(-2.0, 2.0, 1599).unwrap();
        let barrier = BarrierInterval::new(-0.5, 0.5).unwrap();
        let r = models::uinf_eigenfunction(2, WellSide::Right, 2.0, 0.5, &g).unwrap();
        let proj = project_right(&r, &g, &barrier).unwrap();
        assert!(!proj.unchanged);
        for (a, b) in proj.samples.iter().zip(&r) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn projection_of_left_localized_state_reports_unchanged() {
        let g = Grid::interior_of(-2.0, 2.0, 1599).unwrap();
        let barrier = BarrierInterval::new(-0.5, 0.5).unwrap();
        let l = models::uinf_eigenfunction(1, WellSide::Left, 2.0, 0.5, &g).unwrap();
        let proj = project_right(&l, &g, &barrier).unwrap();
        assert!(proj.unchanged);
        assert_eq!(proj.samples, l);
    }

    #[test]
    fn projection_parity_image_is_left_projection() {
        let g = Grid::interior_of(-2.0, 2.0, 1599).unwrap();
        let barrier = BarrierInterval::new(-0.5, 0.5).unwrap();
        let l = models::uinf_eigenfunction(1, WellSide::Left, 2.0, 0.5, &g).unwrap();
        let r = models::uinf_eigenfunction(1, WellSide::Right, 2.0, 0.5, &g).unwrap();
        let even = symmetry_respecting_pair(&l, &r, g.h(), 1e-10).unwrap().0;
        let proj = project_right(&even, &g, &barrier).unwrap();
        let left_proj = parity_apply(&proj.samples, &g).unwrap();
        // the reflected projection is supported on x <= 0 and normalized
        assert!((norm(&left_proj, g.h()) - 1.0).abs() < 1e-10);
        let center = (g.n() - 1) / 2;
        for (i, &x) in left_proj.iter().enumerate().skip(center + 1) {
            assert_eq!(x, 0.0, "sample {i} nonzero");
        }
    }

    #[test]
    fn projection_rejects_zero_state() {
        let g = build_grid(-1.0, 1.0, 5).unwrap();
        let barrier = BarrierInterval::new(-0.25, 0.25).unwrap();
        assert!(matches!(
            project_right(&[0.0; 5], &g, &barrier),
            Err(Error::ZeroState)
        ));
    }

    #[test]
    fn projected_well_state_is_still_an_eigenvector() {
        // an even combination projects onto a single-well eigenvector
        let model = models::double_infinite_well(2.0, 0.5).unwrap();
        let g = model.grid_for(1599).unwrap();
        let barrier = *model.barrier().unwrap();
        let split = split_domain(&g, &barrier).unwrap();
        let nl = split.left.n();
        let op = split
            .operator(&vec![0.0; nl], &vec![0.0; nl], 1.0, 1.0)
            .unwrap();
        let left_spec = eigensolve(op.left(), 5, &split.left).unwrap();
        let bound = residual_bound(op.left());
        for j in 0..5 {
            let e = left_spec.level(j);
            let psi_l = split.embed_left(left_spec.vector(j));
            let psi_r = parity_apply(&psi_l, &g).unwrap();
            let (plus, _) = symmetry_respecting_pair(&psi_l, &psi_r, g.h(), 1e-9).unwrap();
            let proj = project_right(&plus, &g, &barrier).unwrap();
            let r = residual_norm(&op, &proj.samples, e, g.h()).unwrap();
            assert!(r < 10.0 * bound, "level {j}: projected residual {r:e}");
            // orthogonal to its own parity image
            let image = parity_apply(&proj.samples, &g).unwrap();
            assert!(inner(&proj.samples, &image, g.h()).abs() < 1e-12);
        }
    }

    #[test]
    fn detect_ssb_sombrero_is_unbroken() {
        let model = models::quartic_sombrero(1.0, 1.0).unwrap();
        let g = build_grid(-4.0, 4.0, 1601).unwrap();
        let v = model.sample(&g).unwrap();
        let op = assemble_hamiltonian(&g, &v, 1.0, 1.0).unwrap();
        let spec = eigensolve(&op, 4, &g).unwrap();
        let verdict = detect_ssb(&spec, &op, &SymmetryOp::Parity, 1e-8).unwrap();
        assert!(!verdict.broken);
        assert_eq!(verdict.ground_multiplicity, 1);
        assert!(verdict.commutator_norm <= 1e-12);
        assert!(spec.level(1) - spec.level(0) > 1e-7);
    }

    #[test]
    fn detect_ssb_double_infinite_well_is_broken() {
        let model = models::double_infinite_well(2.0, 0.5).unwrap();
        let g = model.grid_for(1599).unwrap();
        let split = split_domain(&g, model.barrier().unwrap()).unwrap();
        let nl = split.left.n();
        let op = split
            .operator(&vec![0.0; nl], &vec![0.0; nl], 1.0, 1.0)
            .unwrap();
        let left = eigensolve(op.left(), 3, &split.left).unwrap();
        let right = eigensolve(op.right(), 3, &split.right).unwrap();
        let levels: Vec<f64> = left.levels().to_vec();
        let spec_l = Spectrum::from_parts(
            levels.clone(),
            (0..3).map(|j| split.embed_left(left.vector(j))).collect(),
            g.clone(),
        )
        .unwrap();
        let spec_r = Spectrum::from_parts(
            right.levels().to_vec(),
            (0..3).map(|j| split.embed_right(right.vector(j))).collect(),
            g.clone(),
        )
        .unwrap();
        let merged = spec_l.merge(&spec_r).unwrap();
        let verdict = detect_ssb(&merged, &op, &SymmetryOp::Parity, 1e-8).unwrap();
        assert!(verdict.broken);
        assert_eq!(verdict.ground_multiplicity, 2);
        assert!(verdict.pair_overlap.abs() < 1e-12);
        let (l_state, r_state) = verdict.pair.as_ref().unwrap();
        // the pair is the left/right localized doublet, up to global sign
        let exact_l = models::uinf_eigenfunction(1, WellSide::Left, 2.0, 0.5, &g).unwrap();
        let ol = inner(l_state, &exact_l, g.h()).abs();
        let or = inner(r_state, &exact_l, g.h()).abs();
        assert!(
            (ol > 0.999 && or < 1e-6) || (or > 0.999 && ol < 1e-6),
            "pair not well localized: |<L|exact>| = {ol}, |<R|exact>| = {or}"
        );
    }

    #[test]
    fn degenerate_but_symmetric_eigenspace_is_not_broken() {
        // a free diagonal operator commutes with parity and makes every
        // vector an eigenvector; if both clustered ground vectors are even,
        // parity acts as the identity on their span and no symmetry-breaking
        // pair exists
        let g = build_grid(-1.0, 1.0, 5).unwrap();
        let op = TridiagonalOperator::new(vec![1.0; 5], vec![0.0; 4]).unwrap();
        let h = g.h();
        let e0: Vec<f64> = vec![0.0, 0.0, 1.0 / h.sqrt(), 0.0, 0.0];
        let mut e1: Vec<f64> = vec![1.0, 0.0, 0.0, 0.0, 1.0];
        let n1 = crate::lattice::norm(&e1, h);
        e1.iter_mut().for_each(|x| *x /= n1);
        let spec = Spectrum::from_parts(vec![1.0, 1.0], vec![e0, e1], g.clone()).unwrap();
        let verdict = detect_ssb(&spec, &op, &SymmetryOp::Parity, 1e-8).unwrap();
        assert_eq!(verdict.ground_multiplicity, 2);
        assert!(!verdict.broken);
        assert!(verdict.pair.is_none());

        // one even and one odd vector span a plane where parity is not the
        // identity, and the mixed combinations form the pair
        let e_even: Vec<f64> = vec![0.0, 0.0, 1.0 / h.sqrt(), 0.0, 0.0];
        let mut e_odd: Vec<f64> = vec![-1.0, 0.0, 0.0, 0.0, 1.0];
        let n_odd = crate::lattice::norm(&e_odd, h);
        e_odd.iter_mut().for_each(|x| *x /= n_odd);
        let spec = Spectrum::from_parts(vec![1.0, 1.0], vec![e_even, e_odd], g.clone()).unwrap();
        let verdict = detect_ssb(&spec, &op, &SymmetryOp::Parity, 1e-8).unwrap();
        assert!(verdict.broken);
        assert!(verdict.pair_overlap.abs() < 1e-12);
        let (l, r) = verdict.pair.as_ref().unwrap();
        let pl = parity_apply(l, &g).unwrap();
        for (x, y) in pl.iter().zip(r) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn detect_ssb_rejects_a_non_symmetry() {
        // tilting the potential makes parity fail the commutator gate
        let g = build_grid(-4.0, 4.0, 801).unwrap();
        let v: Vec<f64> = g
            .samples()
            .iter()
            .map(|&x| {
                let x2 = x * x;
                x2 * x2 - x2 + 0.1 * x
            })
            .collect();
        let op = assemble_hamiltonian(&g, &v, 1.0, 1.0).unwrap();
        let spec = eigensolve(&op, 3, &g).unwrap();
        assert!(matches!(
            detect_ssb(&spec, &op, &SymmetryOp::Parity, 1e-8),
            Err(Error::NotASymmetry(_))
        ));
    }

    #[test]
    fn sublemma_pair_members_have_eigenvalues_plus_minus_one() {
        let a = vec![1.0, 0.0];
        let b = vec![0.6, 0.8];
        let plus_dir = [0.894_427_190_999_915_9, 0.447_213_595_499_958];
        let mat = vec![
            2.0 * plus_dir[0] * plus_dir[0] - 1.0,
            2.0 * plus_dir[0] * plus_dir[1],
            2.0 * plus_dir[1] * plus_dir[0],
            2.0 * plus_dir[1] * plus_dir[1] - 1.0,
        ];
        let u = SymmetryOp::Custom(DenseInvolution::new(2, mat).unwrap());
        let (l, r) = build_nonoverlapping_pair(&a, &b, &u, 1.0, 1e-8).unwrap();
        let (plus, minus) = symmetry_respecting_pair(&l, &r, 1.0, 1e-10).unwrap();
        let up = u.apply(&plus).unwrap();
        let um = u.apply(&minus).unwrap();
        for i in 0..2 {
            assert!((up[i] - plus[i]).abs() < 1e-12);
            assert!((um[i] + minus[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn parity_sectors_split_the_oscillator_ladder() {
        let g = build_grid(-8.0, 8.0, 1601).unwrap();
        let v: Vec<f64> = g.samples().iter().map(|&x| 0.5 * x * x).collect();
        let op = assemble_hamiltonian(&g, &v, 1.0, 1.0).unwrap();
        let sectors = parity_sectors(&op, &g).unwrap();
        let even = eigenvalues_lowest(&sectors.even, 3).unwrap();
        let odd = eigenvalues_lowest(&sectors.odd, 3).unwrap();
        for (j, &e) in even.iter().enumerate() {
            let exact = 2.0 * j as f64 + 0.5;
            assert!((e - exact).abs() < 1e-3, "even {j}: {e}");
        }
        for (j, &e) in odd.iter().enumerate() {
            let exact = 2.0 * j as f64 + 1.5;
            assert!((e - exact).abs() < 1e-3, "odd {j}: {e}");
        }
    }

    #[test]
    fn unfolded_sector_vectors_have_definite_parity() {
        let g = build_grid(-6.0, 6.0, 401).unwrap();
        let v: Vec<f64> = g.samples().iter().map(|&x| 0.5 * x * x).collect();
        let op = assemble_hamiltonian(&g, &v, 1.0, 1.0).unwrap();
        let sectors = parity_sectors(&op, &g).unwrap();
        let (vals_e, vecs_e) = crate::eigen::eigenpairs_euclidean(&sectors.even, 2).unwrap();
        let (vals_o, vecs_o) = crate::eigen::eigenpairs_euclidean(&sectors.odd, 2).unwrap();
        let tol = solver_tolerance(&op) * 4.0;
        for (lam, folded) in vals_e.iter().zip(&vecs_e) {
            let mut full = sectors.unfold_even(folded);
            let nf = norm(&full, 1.0);
            full.iter_mut().for_each(|x| *x /= nf);
            let rev = {
                let mut r = full.clone();
                r.reverse();
                r
            };
            assert_eq!(full, rev);
            let r = residual_norm(&op, &full, *lam, 1.0).unwrap();
            assert!(r <= tol, "even residual {r:e} > {tol:e}");
        }
        for (lam, folded) in vals_o.iter().zip(&vecs_o) {
            let mut full = sectors.unfold_odd(folded);
            let nf = norm(&full, 1.0);
            full.iter_mut().for_each(|x| *x /= nf);
            let neg_rev: Vec<f64> = full.iter().rev().map(|x| -x).collect();
            assert_eq!(full, neg_rev);
            let r = residual_norm(&op, &full, *lam, 1.0).unwrap();
            assert!(r <= tol, "odd residual {r:e} > {tol:e}");
        }
    }
}
