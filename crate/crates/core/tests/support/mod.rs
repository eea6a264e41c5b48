//! Shared test helpers: an independent dense eigenvalue oracle and small
//! random-state generators.
//!
//! Compiled into several test targets; not every helper is used by each.
#![allow(dead_code)]

use rand::Rng;
use ssb_core::lattice::TridiagonalOperator;

/// Cyclic Jacobi eigenvalue iteration on a dense symmetric matrix.
///
/// Deliberately independent of the Sturm-bisection path in the crate: it
/// works on the dense expansion and uses plane rotations only. Returns the
/// eigenvalues sorted ascending.
pub fn jacobi_eigenvalues(matrix: &[Vec<f64>]) -> Vec<f64> {
    let n = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let off = |a: &[Vec<f64>]| -> f64 {
        let mut s = 0.0;
        for (i, row) in a.iter().enumerate() {
            for (j, &entry) in row.iter().enumerate() {
                if i != j {
                    s += entry * entry;
                }
            }
        }
        s.sqrt()
    };
    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |m, &x| m.max(x.abs()))
        .max(1.0);
    for _sweep in 0..60 {
        if off(&a) <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let akp = row[p];
                    let akq = row[q];
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                #[allow(clippy::needless_range_loop)]
                for k in 0..n {
                    // rows p and q alias, so index access stays
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut vals: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    vals
}

/// Random tridiagonal operator with entries in [-2, 2].
pub fn random_tridiagonal<R: Rng>(rng: &mut R, n: usize) -> TridiagonalOperator {
    let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let offdiag: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
    TridiagonalOperator::new(diag, offdiag).unwrap()
}

/// Random orthogonal involution with both +1 and -1 eigenvalues, plus a
/// unit vector that overlaps its own image by exactly `s`.
pub fn involution_with_overlap<R: Rng>(
    rng: &mut R,
    dim: usize,
    s: f64,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    // random orthonormal basis via Gram-Schmidt
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= dot * bi;
            }
        }
        let nv: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nv > 1e-3 {
            v.iter_mut().for_each(|x| *x /= nv);
            basis.push(v);
        }
    }
    // signs: at least one +1 and one -1
    let mut signs: Vec<f64> = (0..dim)
        .map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
        .collect();
    signs[0] = 1.0;
    signs[1] = -1.0;
    // U = Q D Q^T, row-major
    let mut mat = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = 0.0;
            for (k, b) in basis.iter().enumerate() {
                acc += b[i] * signs[k] * b[j];
            }
            mat[i * dim + j] = acc;
        }
    }
    // A = cos(t) u+ + sin(t) u- gives <A|UA> = cos(2t) = s
    let theta = 0.5 * s.acos();
    let (ct, st) = (theta.cos(), theta.sin());
    let a: Vec<f64> = (0..dim)
        .map(|i| ct * basis[0][i] + st * basis[1][i])
        .collect();
    let b: Vec<f64> = (0..dim)
        .map(|i| ct * basis[0][i] - st * basis[1][i])
        .collect();
    (mat, a, b)
}
