//! Two-channel model: a pair of energy-displaced oscillators with
//! incommensurate frequencies, the channel sign flip as an internal
//! symmetry, ground-level breakdown of that symmetry, and the magnetostatic
//! reparametrization of the block Hamiltonian.

use crate::eigen::{eigensolve, Spectrum};
use crate::error::{Error, Result};
use crate::lattice::{assemble_hamiltonian, norm, ApplyOp, Grid, TridiagonalOperator};
use serde::Serialize;

/// Golden ratio, the default incommensurate frequency ratio: of all
/// irrationals it is the hardest to approximate by small rationals.
pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

/// Channel label of the two-component states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Plus,
    Minus,
}

/// Pair of energy-displaced oscillators `H_pm = p^2/2m + m w_pm^2 x^2/2 -
/// hbar w_pm / 2`, stacked into a block-diagonal two-channel Hamiltonian.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpinorModel {
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub m: f64,
    pub hbar: f64,
    /// Frequency ratio `omega_plus / omega_minus`.
    pub ratio: f64,
    /// Small rational `p/q` (p, q <= 64) within 1e-9 of the ratio, if one
    /// exists; a commensurate ratio lines the two ladders up at excited
    /// levels and spoils the uniqueness of the ground degeneracy.
    pub commensurate_warning: Option<(u32, u32)>,
}

/// Search for a small rational approximation of the frequency ratio.
fn commensurate(ratio: f64) -> Option<(u32, u32)> {
    for q in 1..=64u32 {
        let p = (ratio * q as f64).round();
        if !(1.0..=64.0).contains(&p) {
            continue;
        }
        if (ratio - p / q as f64).abs() < 1e-9 {
            return Some((p as u32, q));
        }
    }
    None
}

/// Build the two-channel model from its fundamental frequencies.
pub fn build_spinor_model(
    omega_plus: f64,
    omega_minus: f64,
    m: f64,
    hbar: f64,
) -> Result<SpinorModel> {
    for (name, v) in [
        ("omega_plus", omega_plus),
        ("omega_minus", omega_minus),
        ("m", m),
        ("hbar", hbar),
    ] {
        if v.is_nan() || v <= 0.0 || !v.is_finite() {
            return Err(Error::InvalidParameter(format!("{name} = {v} must be > 0")));
        }
    }
    let ratio = omega_plus / omega_minus;
    Ok(SpinorModel {
        omega_plus,
        omega_minus,
        m,
        hbar,
        ratio,
        commensurate_warning: commensurate(ratio),
    })
}

impl SpinorModel {
    pub fn omega(&self, channel: Channel) -> f64 {
        match channel {
            Channel::Plus => self.omega_plus,
            Channel::Minus => self.omega_minus,
        }
    }

    /// Channel potential `m w^2 x^2 / 2 - hbar w / 2`; the displacement puts
    /// the channel ground level exactly at zero.
    pub fn channel_potential(&self, channel: Channel, x: f64) -> f64 {
        let w = self.omega(channel);
        0.5 * self.m * w * w * x * x - 0.5 * self.hbar * w
    }

    /// Assemble one channel's discretized Hamiltonian.
    pub fn channel_hamiltonian(
        &self,
        channel: Channel,
        grid: &Grid,
    ) -> Result<TridiagonalOperator> {
        let v: Vec<f64> = grid
            .samples()
            .iter()
            .map(|&x| self.channel_potential(channel, x))
            .collect();
        assemble_hamiltonian(grid, &v, self.m, self.hbar)
    }

    /// Assemble the block-diagonal two-channel operator.
    pub fn hamiltonian(&self, grid: &Grid) -> Result<TwoChannelOperator> {
        Ok(TwoChannelOperator {
            up: self.channel_hamiltonian(Channel::Plus, grid)?,
            down: self.channel_hamiltonian(Channel::Minus, grid)?,
        })
    }

    /// Normalized closed-form ground state of one channel, sampled on the
    /// grid. Fails when the raw continuum normalization deviates from one by
    /// more than 1e-8, which signals an under-resolving grid.
    pub fn ground_channel_state(&self, channel: Channel, grid: &Grid) -> Result<Vec<f64>> {
        let w = self.omega(channel);
        let alpha = self.m * w / self.hbar;
        let amp = (alpha / std::f64::consts::PI).powf(0.25);
        let mut psi: Vec<f64> = grid
            .samples()
            .iter()
            .map(|&x| amp * (-0.5 * alpha * x * x).exp())
            .collect();
        let raw = norm(&psi, grid.h());
        if (raw - 1.0).abs() > 1e-8 {
            return Err(Error::UnderResolved(format!(
                "channel ground norm {raw} deviates from 1 beyond 1e-8"
            )));
        }
        psi.iter_mut().for_each(|y| *y /= raw);
        Ok(psi)
    }
}

/// Block-diagonal operator acting on stacked `(up, down)` sample vectors.
#[derive(Debug, Clone)]
pub struct TwoChannelOperator {
    pub up: TridiagonalOperator,
    pub down: TridiagonalOperator,
}

impl ApplyOp for TwoChannelOperator {
    fn dim(&self) -> usize {
        self.up.dim() + self.down.dim()
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        let n = self.up.dim();
        self.up.apply_into(&v[..n], &mut out[..n]);
        self.down.apply_into(&v[n..], &mut out[n..]);
    }
}

/// Two-component state with combined norm `sum(up^2 + down^2) h = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorState {
    pub up: Vec<f64>,
    pub down: Vec<f64>,
}

impl SpinorState {
    pub fn stacked(&self) -> Vec<f64> {
        let mut out = self.up.clone();
        out.extend_from_slice(&self.down);
        out
    }

    pub fn norm(&self, weight: f64) -> f64 {
        norm(&self.stacked(), weight)
    }

    /// Inner product between two-channel states.
    pub fn inner(&self, other: &SpinorState, weight: f64) -> f64 {
        crate::lattice::inner(&self.stacked(), &other.stacked(), weight)
    }

    /// Channel sign flip `(up, down) -> (up, -down)`.
    pub fn sigma3(&self) -> SpinorState {
        SpinorState {
            up: self.up.clone(),
            down: self.down.iter().map(|x| -x).collect(),
        }
    }
}

/// One entry of the labeled closed-form spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LabeledLevel {
    pub n: u32,
    pub channel: Channel,
    pub energy: f64,
}

/// Closed-form spectrum `E = hbar n omega_pm`, merged ascending over both
/// channels for `n = 0..=nmax`. Ties order the plus channel first.
pub fn analytic_spectrum(model: &SpinorModel, nmax: u32) -> Vec<LabeledLevel> {
    let mut out = Vec::with_capacity(2 * (nmax as usize + 1));
    for n in 0..=nmax {
        for channel in [Channel::Plus, Channel::Minus] {
            out.push(LabeledLevel {
                n,
                channel,
                energy: model.hbar * n as f64 * model.omega(channel),
            });
        }
    }
    out.sort_by(|a, b| {
        a.energy
            .partial_cmp(&b.energy)
            .unwrap()
            .then(a.n.cmp(&b.n))
            .then(a.channel.cmp(&b.channel))
    });
    out
}

/// The non-overlapping symmetry-breaking ground pair: equal-weight sums of
/// the two channel ground states, exchanged by the channel sign flip.
/// States are built from the closed-form Gaussians; the finite-difference
/// solver serves as a cross check only.
pub fn ground_pair(model: &SpinorModel, grid: &Grid) -> Result<(SpinorState, SpinorState)> {
    let g_plus = model.ground_channel_state(Channel::Plus, grid)?;
    let g_minus = model.ground_channel_state(Channel::Minus, grid)?;
    let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
    let psi_r = SpinorState {
        up: g_plus.iter().map(|x| x * inv_sqrt2).collect(),
        down: g_minus.iter().map(|x| x * inv_sqrt2).collect(),
    };
    let psi_l = psi_r.sigma3();
    Ok((psi_r, psi_l))
}

/// Probe the commutator of the channel sign flip with the assembled
/// two-channel Hamiltonian. The block-diagonal structure makes this exactly
/// zero; a coupled fixture returns the coupling strength instead.
pub fn sigma3_commutator_check(model: &SpinorModel, grid: &Grid) -> Result<f64> {
    let op = model.hamiltonian(grid)?;
    crate::symmetry::commutator_norm(&op, &crate::symmetry::SymmetryOp::Sigma3)
}

/// Magnetostatic reparametrization of the two-channel model: the common
/// oscillator plus a z-aligned field whose quadratic and constant parts
/// carry the channel differences.
///
/// `omega_delta_sq` is stored signed, since it is negative whenever
/// `omega_plus < omega_minus` and only ever enters through its value, never
/// through a square root.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldForm {
    pub omega0: f64,
    pub omega_delta_sq: f64,
    pub epsilon0: f64,
    pub epsilon_delta: f64,
    pub m: f64,
    pub hbar: f64,
}

/// Extract the field-form parameters: `omega0^2 +- omega_delta^2 =
/// omega_pm^2` and `epsilon0 +- epsilon_delta = hbar omega_pm`.
pub fn to_field_form(model: &SpinorModel) -> FieldForm {
    let wp2 = model.omega_plus * model.omega_plus;
    let wm2 = model.omega_minus * model.omega_minus;
    FieldForm {
        omega0: ((wp2 + wm2) / 2.0).sqrt(),
        omega_delta_sq: (wp2 - wm2) / 2.0,
        epsilon0: model.hbar * (model.omega_plus + model.omega_minus) / 2.0,
        epsilon_delta: model.hbar * (model.omega_plus - model.omega_minus) / 2.0,
        m: model.m,
        hbar: model.hbar,
    }
}

impl FieldForm {
    /// Squared channel frequency reconstructed from the field form.
    pub fn channel_omega_sq(&self, channel: Channel) -> f64 {
        let w0sq = self.omega0 * self.omega0;
        match channel {
            Channel::Plus => w0sq + self.omega_delta_sq,
            Channel::Minus => w0sq - self.omega_delta_sq,
        }
    }

    /// Channel energy displacement `hbar omega_pm / 2` reconstructed from
    /// the field form.
    pub fn channel_displacement(&self, channel: Channel) -> f64 {
        match channel {
            Channel::Plus => (self.epsilon0 + self.epsilon_delta) / 2.0,
            Channel::Minus => (self.epsilon0 - self.epsilon_delta) / 2.0,
        }
    }

    /// The z component of the static field; it vanishes identically when
    /// the two frequencies coincide, and all levels become degenerate.
    pub fn b_z(&self, x: f64) -> f64 {
        -(self.m * self.omega_delta_sq * x * x - self.epsilon_delta) / self.hbar
    }

    /// Rebuild both channel Hamiltonians from the field form alone.
    pub fn reconstruct_hamiltonians(
        &self,
        grid: &Grid,
    ) -> Result<(TridiagonalOperator, TridiagonalOperator)> {
        let mut ops = Vec::with_capacity(2);
        for channel in [Channel::Plus, Channel::Minus] {
            let w2 = self.channel_omega_sq(channel);
            let shift = self.channel_displacement(channel);
            let v: Vec<f64> = grid
                .samples()
                .iter()
                .map(|&x| 0.5 * self.m * w2 * x * x - shift)
                .collect();
            ops.push(assemble_hamiltonian(grid, &v, self.m, self.hbar)?);
        }
        let down = ops.pop().unwrap();
        let up = ops.pop().unwrap();
        Ok((up, down))
    }
}

/// Finite-difference spectrum of the two-channel Hamiltonian: each channel
/// is solved on its own (the blocks are decoupled), then the stacked states
/// are merged ascending.
pub fn fd_spectrum(model: &SpinorModel, grid: &Grid, k: usize) -> Result<Spectrum> {
    let n = grid.n();
    let up = model.channel_hamiltonian(Channel::Plus, grid)?;
    let down = model.channel_hamiltonian(Channel::Minus, grid)?;
    let spec_up = eigensolve(&up, k, grid)?;
    let spec_down = eigensolve(&down, k, grid)?;
    let stack = |v: &[f64], upper: bool| -> Vec<f64> {
        let mut out = vec![0.0; 2 * n];
        if upper {
            out[..n].copy_from_slice(v);
        } else {
            out[n..].copy_from_slice(v);
        }
        out
    };
    let up_stacked = Spectrum::from_parts(
        spec_up.levels().to_vec(),
        (0..k).map(|j| stack(spec_up.vector(j), true)).collect(),
        grid.clone(),
    )?;
    let down_stacked = Spectrum::from_parts(
        spec_down.levels().to_vec(),
        (0..k).map(|j| stack(spec_down.vector(j), false)).collect(),
        grid.clone(),
    )?;
    Ok(up_stacked.merge(&down_stacked)?.truncated(k))
}
