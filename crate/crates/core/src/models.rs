//! The potential zoo: every concrete model of the laboratory, each carrying
//! its analytic oracle data where a closed form exists.
//!
//! All potentials are even about x = 0. Evaluators are written in terms of
//! x^2 and |x| so that evenness is exact in floating point, sample by sample.

use crate::error::{Error, Result};
use crate::lattice::{norm, BarrierInterval, Grid};
use serde::{Deserialize, Serialize};

/// Tagged potential definition with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PotentialKind {
    /// `V(x) = lambda x^4 - mu x^2`, the quartic double well.
    QuarticSombrero { lambda: f64, mu: f64 },
    /// `V(x) = hbar^2/(2m) (16 a^2 x^6 - 12 a x^2)`, whose exact ground
    /// state is proportional to `exp(-a x^4)` with energy zero.
    SexticFactorized { a: f64, m: f64, hbar: f64 },
    /// `V_a(x) = m omega^2 (|x| - a)^2`, two oscillator wells glued at 0.
    DoubleOscillator { m: f64, omega: f64, a: f64 },
    /// Hard walls at +-a, a finite step `alpha` on [-b, b], zero between.
    SquareDoubleWell { alpha: f64, a: f64, b: f64 },
    /// Hard walls at +-a and an infinite barrier on [-b, b]: two decoupled
    /// wells of width a - b each.
    DoubleInfiniteWell { a: f64, b: f64 },
}

/// Closed-form ground-state shapes used as solver oracles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum GroundForm {
    /// Proportional to `exp(-a x^4)`.
    QuarticGaussian { a: f64 },
}

impl GroundForm {
    /// Unnormalized value at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            GroundForm::QuarticGaussian { a } => {
                let x2 = x * x;
                (-a * x2 * x2).exp()
            }
        }
    }

    /// Samples normalized so that `h * sum(f_i^2) = 1`. Normalization uses
    /// the inverse square root of the squared norm, so the result is a unit
    /// vector in the grid inner product.
    pub fn sampled_normalized(&self, grid: &Grid) -> Result<Vec<f64>> {
        let mut f: Vec<f64> = grid.samples().iter().map(|&x| self.eval(x)).collect();
        let n = norm(&f, grid.h());
        if n == 0.0 {
            return Err(Error::UnderResolved("ground form vanishes on grid".into()));
        }
        f.iter_mut().for_each(|y| *y /= n);
        Ok(f)
    }
}

/// Closed-form level data attached to a model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum LevelFormula {
    /// `E_n = pi^2 hbar^2 n^2 / (2 m width^2)`, each level carrying the
    /// stated multiplicity.
    InfiniteWell { width: f64, multiplicity: usize },
}

impl LevelFormula {
    pub fn energy(&self, n: u32, mass: f64, hbar: f64) -> f64 {
        match self {
            LevelFormula::InfiniteWell { width, .. } => {
                let k = n as f64 * std::f64::consts::PI * hbar / width;
                k * k / (2.0 * mass)
            }
        }
    }

    pub fn multiplicity(&self) -> usize {
        match self {
            LevelFormula::InfiniteWell { multiplicity, .. } => *multiplicity,
        }
    }
}

/// Analytic data a model exposes for cross-checking the numerics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticOracle {
    pub ground_energy: Option<f64>,
    pub ground_form: Option<GroundForm>,
    pub levels: Option<LevelFormula>,
}

/// A potential model with its domain hint, optional barrier and oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialModel {
    kind: PotentialKind,
    domain_hint: (f64, f64),
    barrier: Option<BarrierInterval>,
    analytic: Option<AnalyticOracle>,
}

fn require_positive(name: &str, value: f64) -> Result<()> {
    if value.is_nan() || value <= 0.0 || !value.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "{name} = {value} must be > 0"
        )));
    }
    Ok(())
}

/// `V(x) = lambda x^4 - mu x^2`.
pub fn quartic_sombrero(lambda: f64, mu: f64) -> Result<PotentialModel> {
    require_positive("lambda", lambda)?;
    require_positive("mu", mu)?;
    // half-width grows with the well separation sqrt(mu/(2 lambda)) and with
    // the softness of the quartic tail
    let l = 4.0
        * ((mu / lambda).sqrt().sqrt())
            .max(lambda.powf(-1.0 / 6.0))
            .max(1.0);
    Ok(PotentialModel {
        kind: PotentialKind::QuarticSombrero { lambda, mu },
        domain_hint: (-l, l),
        barrier: None,
        analytic: None,
    })
}

/// The factorized sextic double well. Its exact ground state is
/// proportional to `exp(-a x^4)` with energy exactly zero.
pub fn sextic_factorized(a: f64, m: f64, hbar: f64) -> Result<PotentialModel> {
    require_positive("a", a)?;
    require_positive("m", m)?;
    require_positive("hbar", hbar)?;
    let l = 4.0 * a.powf(-0.25).max(1.0);
    Ok(PotentialModel {
        kind: PotentialKind::SexticFactorized { a, m, hbar },
        domain_hint: (-l, l),
        barrier: None,
        analytic: Some(AnalyticOracle {
            ground_energy: Some(0.0),
            ground_form: Some(GroundForm::QuarticGaussian { a }),
            levels: None,
        }),
    })
}

/// `V_a(x) = m omega^2 (|x| - a)^2`.
pub fn double_oscillator(m: f64, omega: f64, a: f64) -> Result<PotentialModel> {
    require_positive("m", m)?;
    require_positive("omega", omega)?;
    if a.is_nan() || a < 0.0 || !a.is_finite() {
        return Err(Error::InvalidParameter(format!("a = {a} must be >= 0")));
    }
    let pad = 6.0 / (m * omega).sqrt();
    Ok(PotentialModel {
        kind: PotentialKind::DoubleOscillator { m, omega, a },
        domain_hint: (-a - pad, a + pad),
        barrier: None,
        analytic: None,
    })
}

/// Hard walls at +-a with a finite step `alpha` on [-b, b].
pub fn square_double_well(alpha: f64, a: f64, b: f64) -> Result<PotentialModel> {
    if !(a > b && b > 0.0) || !a.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "well geometry requires a > b > 0, got a = {a}, b = {b}"
        )));
    }
    if alpha.is_nan() || alpha < 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "alpha = {alpha} must be finite and >= 0"
        )));
    }
    Ok(PotentialModel {
        kind: PotentialKind::SquareDoubleWell { alpha, a, b },
        domain_hint: (-a, a),
        barrier: None,
        analytic: None,
    })
}

/// Two infinitely deep wells of width a - b separated by the barrier [-b, b].
pub fn double_infinite_well(a: f64, b: f64) -> Result<PotentialModel> {
    if !(a > b && b > 0.0) || !a.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "well geometry requires a > b > 0, got a = {a}, b = {b}"
        )));
    }
    Ok(PotentialModel {
        kind: PotentialKind::DoubleInfiniteWell { a, b },
        domain_hint: (-a, a),
        barrier: Some(BarrierInterval::new(-b, b)?),
        analytic: Some(AnalyticOracle {
            ground_energy: None,
            ground_form: None,
            levels: Some(LevelFormula::InfiniteWell {
                width: a - b,
                multiplicity: 2,
            }),
        }),
    })
}

impl PotentialModel {
    /// Build a model directly from a parameter record.
    pub fn from_kind(kind: &PotentialKind) -> Result<PotentialModel> {
        match *kind {
            PotentialKind::QuarticSombrero { lambda, mu } => quartic_sombrero(lambda, mu),
            PotentialKind::SexticFactorized { a, m, hbar } => sextic_factorized(a, m, hbar),
            PotentialKind::DoubleOscillator { m, omega, a } => double_oscillator(m, omega, a),
            PotentialKind::SquareDoubleWell { alpha, a, b } => square_double_well(alpha, a, b),
            PotentialKind::DoubleInfiniteWell { a, b } => double_infinite_well(a, b),
        }
    }

    pub fn kind(&self) -> &PotentialKind {
        &self.kind
    }

    pub fn domain_hint(&self) -> (f64, f64) {
        self.domain_hint
    }

    pub fn barrier(&self) -> Option<&BarrierInterval> {
        self.barrier.as_ref()
    }

    pub fn analytic(&self) -> Option<&AnalyticOracle> {
        self.analytic.as_ref()
    }

    /// True when the domain hint is bounded by hard walls.
    pub fn has_walls(&self) -> bool {
        matches!(
            self.kind,
            PotentialKind::SquareDoubleWell { .. } | PotentialKind::DoubleInfiniteWell { .. }
        )
    }

    /// Potential value at `x`. Hard-wall regions evaluate to infinity; the
    /// sampling helpers exclude them by construction.
    pub fn evaluate(&self, x: f64) -> f64 {
        match self.kind {
            PotentialKind::QuarticSombrero { lambda, mu } => {
                let x2 = x * x;
                lambda * (x2 * x2) - mu * x2
            }
            PotentialKind::SexticFactorized { a, m, hbar } => {
                let x2 = x * x;
                let x6 = x2 * x2 * x2;
                hbar * hbar / (2.0 * m) * (16.0 * (a * a) * x6 - 12.0 * a * x2)
            }
            PotentialKind::DoubleOscillator { m, omega, a } => {
                let d = x.abs() - a;
                m * omega * omega * d * d
            }
            PotentialKind::SquareDoubleWell { alpha, a, b } => {
                let ax = x.abs();
                if ax >= a {
                    f64::INFINITY
                } else if ax <= b {
                    alpha
                } else {
                    0.0
                }
            }
            PotentialKind::DoubleInfiniteWell { a, b } => {
                let ax = x.abs();
                if ax >= a || ax <= b {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
        }
    }

    /// Grid suited to this model: interior sampling between the walls for
    /// walled models (so the Dirichlet ghosts sit on the walls), a plain
    /// end-point grid otherwise.
    pub fn grid_for(&self, n: usize) -> Result<Grid> {
        let (lo, hi) = self.domain_hint;
        if self.has_walls() {
            Grid::interior_of(lo, hi, n)
        } else {
            crate::lattice::build_grid(lo, hi, n)
        }
    }

    /// Sample the potential on a grid. Fails on any non-finite value, so
    /// callers must truncate hard-wall regions out of the grid first.
    pub fn sample(&self, grid: &Grid) -> Result<Vec<f64>> {
        let mut v = Vec::with_capacity(grid.n());
        for i in 0..grid.n() {
            let x = grid.x(i);
            let value = self.evaluate(x);
            if !value.is_finite() {
                return Err(Error::NonFiniteSample { index: i, x, value });
            }
            v.push(value);
        }
        Ok(v)
    }
}

/// Grid norm of `(q f)(x) = -(f' + 4 a x^3 f)` for `f = exp(-a x^4)`, with
/// the derivative taken by centered differences. The exact annihilation
/// makes this vanish to discretization order; the residual must shrink as
/// O(h^2), which is checked against the half-resolution sub-grid.
pub fn annihilator_residual(a: f64, grid: &Grid) -> Result<f64> {
    require_positive("a", a)?;
    if !grid.is_symmetric() {
        return Err(Error::GridMismatch(
            "annihilator residual requires a symmetric grid".into(),
        ));
    }
    let form = GroundForm::QuarticGaussian { a };
    let edge = form.eval(grid.x(grid.n() - 1));
    if edge > 1e-12 {
        return Err(Error::UnderResolved(format!(
            "boundary value {edge:e} exceeds 1e-12; widen the domain"
        )));
    }
    let f: Vec<f64> = grid.samples().iter().map(|&x| form.eval(x)).collect();

    let residual = |stride: usize| -> f64 {
        let h = grid.h() * stride as f64;
        let idx: Vec<usize> = (0..grid.n()).step_by(stride).collect();
        let mut acc = 0.0;
        for w in idx.windows(3) {
            let (im, i, ip) = (w[0], w[1], w[2]);
            let x = grid.x(i);
            let dfdx = (f[ip] - f[im]) / (2.0 * h);
            let r = dfdx + 4.0 * a * x * x * x * f[i];
            acc += r * r;
        }
        (h * acc).sqrt()
    };

    let fine = residual(1);
    let coarse = residual(2);
    // In the O(h^2) regime the fine residual is about a quarter of the
    // coarse one; anything above ~0.35 means the grid is not resolving f.
    if fine > 0.35 * coarse {
        return Err(Error::GridTooCoarse {
            residual: fine,
            bound: 0.25 * coarse,
        });
    }
    Ok(fine)
}

/// Side selector for the decoupled-well eigenfunctions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WellSide {
    Left,
    Right,
}

/// Closed-form eigenfunction of the double infinite well, sampled on a
/// symmetric grid spanning (-a, a) and normalized to one in the grid inner
/// product.
///
/// The left function is `sqrt(2/(a-b)) sin(pi n (x+a)/(a-b))` inside
/// (-a, -b) and zero elsewhere; the right function is defined as its exact
/// reflection, so sample reversal maps one onto the other bitwise.
pub fn uinf_eigenfunction(n: u32, side: WellSide, a: f64, b: f64, grid: &Grid) -> Result<Vec<f64>> {
    if n < 1 {
        return Err(Error::InvalidParameter("level index n must be >= 1".into()));
    }
    if !(a > b && b > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "well geometry requires a > b > 0, got a = {a}, b = {b}"
        )));
    }
    if !grid.is_symmetric() {
        return Err(Error::GridMismatch("grid must be symmetric".into()));
    }
    let wall = grid.x(grid.n() - 1) + grid.h();
    if (wall - a).abs() > 0.75 * grid.h() {
        return Err(Error::GridMismatch(format!(
            "grid implies walls at +-{wall}, expected +-{a}"
        )));
    }
    let width = a - b;
    let amp = (2.0 / width).sqrt();
    let left_val = |x: f64| -> f64 {
        if x > -a && x < -b {
            amp * (std::f64::consts::PI * n as f64 * (x + a) / width).sin()
        } else {
            0.0
        }
    };
    // normalize both sides by the left-side norm, accumulated in one fixed
    // order, so the right function stays the exact sample reversal of the
    // left one
    let left_samples: Vec<f64> = (0..grid.n()).map(|i| left_val(grid.x(i))).collect();
    let nv = norm(&left_samples, grid.h());
    if nv == 0.0 {
        return Err(Error::UnderResolved(
            "eigenfunction vanishes on every sample".into(),
        ));
    }
    let psi: Vec<f64> = match side {
        WellSide::Left => left_samples.iter().map(|y| y / nv).collect(),
        WellSide::Right => (0..grid.n())
            .map(|i| left_samples[grid.n() - 1 - i] / nv)
            .collect(),
    };
    Ok(psi)
}
