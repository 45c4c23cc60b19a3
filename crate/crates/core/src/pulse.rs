//! Pulse-level simulation in the frame rotating at the microwave photon
//! energy.
//!
//! During an event the Hamiltonian is
//!
//! H(t) = Σ_k ((Δ_k − E_MW)/2)·σ_z^k + Σ_bond (J/2)·σ_z σ_z
//!      + (ω₁(t)/2)·Σ_k (cos φ·σ_x^k + sin φ·σ_y^k)
//!
//! with all terms in μeV. Couplings are Ising only (the splitting spread is
//! far larger than J, which freezes flip-flop terms), the drive is the
//! co-rotating RWA term, and E_MW is the drive photon energy (the cavity
//! energy when no drive is present, so frame phases stay consistent across
//! a program). The J/2 normalization makes a spin flip against neighbors
//! (s_L, s_R) cost exactly Δ_X + J_L·s_L + J_R·s_R.
//!
//! Integration is piecewise-constant midpoint exponentiation: each step
//! applies exp(−i·H(t_mid)·dt/ħ) exactly. The drive-phase conjugation
//! H = V·(D + a(t)·Σσ_x)·V† with diagonal V reduces every exponential to a
//! real-symmetric eigenproblem. Runs of steps with identical H (rectangular
//! or drive-free segments) are exponentiated in one shot, which is the same
//! operator exactly.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::chain::{CellType, Pattern};
use crate::device::{effective_couplings, DeviceSpec, EffectiveCouplings, LaserSettings};
use crate::error::{Error, Result};
use crate::state::{ChainState, Representation};
use crate::units::HBAR_UEV_NS;

/// Hard ceiling on the per-step rotation angle, rad.
pub const MAX_STEP_PHASE: f64 = 0.05;
/// Default number of steps an event is divided into.
pub const DEFAULT_STEPS_PER_EVENT: usize = 2000;
/// Minimum number of steps an event may be divided into.
pub const MIN_STEPS_PER_EVENT: usize = 100;

/// Microwave drive envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Envelope {
    Rectangular,
    Gaussian { sigma_ns: f64, truncation_sigmas: f64 },
}

impl Envelope {
    /// Dimensionless shape in [0, 1] at time `t` into an event of length
    /// `duration`. Gaussians are centered and clipped at ±kσ.
    pub fn value(&self, t: f64, duration: f64) -> f64 {
        match *self {
            Envelope::Rectangular => 1.0,
            Envelope::Gaussian { sigma_ns, truncation_sigmas } => {
                let x = t - duration / 2.0;
                if x.abs() > truncation_sigmas * sigma_ns {
                    0.0
                } else {
                    (-x * x / (2.0 * sigma_ns * sigma_ns)).exp()
                }
            }
        }
    }

    /// ∫ shape dt over the event, by composite Simpson quadrature.
    pub fn area(&self, duration: f64) -> f64 {
        match *self {
            Envelope::Rectangular => duration,
            Envelope::Gaussian { .. } => {
                let n = 4096;
                let h = duration / n as f64;
                let mut acc = self.value(0.0, duration) + self.value(duration, duration);
                for i in 1..n {
                    let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                    acc += w * self.value(i as f64 * h, duration);
                }
                acc * h / 3.0
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Envelope::Rectangular => Ok(()),
            Envelope::Gaussian { sigma_ns, truncation_sigmas } => {
                if sigma_ns <= 0.0 {
                    return Err(Error::InvalidEvent("gaussian sigma must be positive".into()));
                }
                if truncation_sigmas < 3.0 {
                    return Err(Error::InvalidEvent(
                        "gaussian truncation must be at least 3σ".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// Enveloped microwave drive at a fixed photon energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MicrowaveDrive {
    /// Peak Rabi energy ω₁, μeV.
    pub rabi_uev: f64,
    /// Drive photon energy, μeV (nominally the cavity energy).
    pub freq_uev: f64,
    pub phase_rad: f64,
    pub envelope: Envelope,
}

impl MicrowaveDrive {
    pub fn validate(&self) -> Result<()> {
        if self.rabi_uev < 0.0 {
            return Err(Error::InvalidEvent("microwave rabi energy must be ≥ 0".into()));
        }
        if self.freq_uev <= 0.0 {
            return Err(Error::InvalidEvent("microwave photon energy must be positive".into()));
        }
        self.envelope.validate()
    }
}

/// One timed slice of the global schedule: optical settings plus an
/// optional microwave drive, all applied simultaneously.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseEvent {
    pub duration_ns: f64,
    pub lasers: LaserSettings,
    pub microwave: Option<MicrowaveDrive>,
}

impl PulseEvent {
    /// Drive-free window with the given laser settings.
    pub fn optical(duration_ns: f64, lasers: LaserSettings) -> Self {
        PulseEvent { duration_ns, lasers, microwave: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.duration_ns <= 0.0 {
            return Err(Error::InvalidEvent(format!(
                "event duration must be positive, got {}",
                self.duration_ns
            )));
        }
        self.lasers.validate()?;
        if let Some(mw) = &self.microwave {
            mw.validate()?;
            // the drive only acts on optically split spins; the pulses must
            // be simultaneous
            if !(self.lasers.circular_on && self.lasers.linear_on) {
                return Err(Error::InvalidEvent(
                    "microwave drive requires both optical pulses on for the same window".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Time-sliced rotating-frame Hamiltonian terms, all in μeV.
#[derive(Debug, Clone)]
pub struct FrameHamiltonian {
    /// Per-site coefficient of σ_z: (Δ_k − E_MW)/2.
    pub zeeman_uev: Vec<f64>,
    /// Per-bond (left site, right site, J/2) coefficients of σ_z σ_z.
    pub ising_uev: Vec<(usize, usize, f64)>,
    /// Instantaneous drive (ω₁(t)/2, axis phase), if driven at this time.
    pub drive: Option<(f64, f64)>,
}

impl FrameHamiltonian {
    pub fn n_sites(&self) -> usize {
        self.zeeman_uev.len()
    }

    /// Diagonal part over basis states: Σ z_k·s_k + Σ (J/2)·s_a·s_b.
    pub fn diagonal(&self) -> Vec<f64> {
        let n = self.n_sites();
        let dim = 1usize << n;
        let mut d = vec![0.0; dim];
        for (i, di) in d.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (k, z) in self.zeeman_uev.iter().enumerate() {
                acc += z * sign_of_bit(i, k);
            }
            for &(a, b, j2) in &self.ising_uev {
                acc += j2 * sign_of_bit(i, a) * sign_of_bit(i, b);
            }
            *di = acc;
        }
        d
    }

    /// Dense matrix in the computational basis.
    pub fn matrix(&self) -> DMatrix<C64> {
        let n = self.n_sites();
        let dim = 1usize << n;
        let diag = self.diagonal();
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(diag[i], 0.0);
        }
        if let Some((amp, phase)) = self.drive {
            // (cos φ σ_x + sin φ σ_y) has ⟨up|·|down⟩ = e^{iφ} in the
            // (down, up) index basis
            let raise = C64::from_polar(amp, phase);
            for k in 0..n {
                let mask = 1usize << k;
                for i in 0..dim {
                    if i & mask == 0 {
                        m[(i | mask, i)] += raise;
                        m[(i, i | mask)] += raise.conj();
                    }
                }
            }
        }
        m
    }
}

fn sign_of_bit(index: usize, bit: usize) -> f64 {
    if (index >> bit) & 1 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// Build the rotating-frame Hamiltonian of an event at time `t_ns` into the
/// event, with optional per-site static splitting offsets (μeV, applied only
/// while the circular laser is on).
pub fn build_hamiltonian_with_offsets(
    spec: &DeviceSpec,
    event: &PulseEvent,
    t_ns: f64,
    offsets_uev: Option<&[f64]>,
) -> Result<FrameHamiltonian> {
    event.validate()?;
    let eff = effective_couplings(spec, &event.lasers)?;
    Ok(frame_hamiltonian(spec, event, &eff, t_ns, offsets_uev))
}

/// Like [`build_hamiltonian_with_offsets`] with no offsets.
pub fn build_hamiltonian(
    spec: &DeviceSpec,
    event: &PulseEvent,
    t_ns: f64,
) -> Result<FrameHamiltonian> {
    build_hamiltonian_with_offsets(spec, event, t_ns, None)
}

fn frame_hamiltonian(
    spec: &DeviceSpec,
    event: &PulseEvent,
    eff: &EffectiveCouplings,
    t_ns: f64,
    offsets_uev: Option<&[f64]>,
) -> FrameHamiltonian {
    let pattern = &spec.pattern;
    let n = pattern.len();
    let e_mw = frame_energy(spec, event);
    let circular_on = event.lasers.circular_on && event.lasers.rabi_c_mev > 0.0;
    let mut zeeman = Vec::with_capacity(n);
    for k in 0..n {
        let mut delta = eff.splitting(pattern.cell(k));
        if circular_on {
            if let Some(offs) = offsets_uev {
                delta += offs[k];
            }
        }
        zeeman.push((delta - e_mw) / 2.0);
    }
    let ising = pattern
        .bonds()
        .map(|(a, b)| (a, b, eff.bond(a) / 2.0))
        .filter(|(_, _, j2)| *j2 != 0.0)
        .collect();
    let drive = event.microwave.as_ref().map(|mw| {
        (mw.rabi_uev * mw.envelope.value(t_ns, event.duration_ns) / 2.0, mw.phase_rad)
    });
    FrameHamiltonian { zeeman_uev: zeeman, ising_uev: ising, drive }
}

/// Photon energy defining the rotating frame for this event.
pub fn frame_energy(spec: &DeviceSpec, event: &PulseEvent) -> f64 {
    event.microwave.as_ref().map(|m| m.freq_uev).unwrap_or(spec.cavity_energy_uev)
}

/// Upper bound on the spectral radius of H during the event, μeV
/// (Gershgorin over the diagonal plus the peak drive row sum).
pub fn energy_scale_bound(spec: &DeviceSpec, event: &PulseEvent) -> Result<f64> {
    let eff = effective_couplings(spec, &event.lasers)?;
    let e_mw = frame_energy(spec, event);
    let pattern = &spec.pattern;
    let mut diag_bound = 0.0;
    for k in 0..pattern.len() {
        diag_bound += ((eff.splitting(pattern.cell(k)) - e_mw) / 2.0).abs();
    }
    for (a, _) in pattern.bonds() {
        diag_bound += (eff.bond(a) / 2.0).abs();
    }
    let drive_bound = event
        .microwave
        .as_ref()
        .map(|m| pattern.len() as f64 * m.rabi_uev / 2.0)
        .unwrap_or(0.0);
    Ok(diag_bound + drive_bound)
}

/// Largest step that satisfies both integrator preconditions, capped at
/// duration/[`DEFAULT_STEPS_PER_EVENT`]. Sits 1% below the phase cap so the
/// precondition check never trips on rounding.
pub fn default_dt(spec: &DeviceSpec, event: &PulseEvent) -> Result<f64> {
    let bound = energy_scale_bound(spec, event)?;
    let phase_cap =
        if bound > 0.0 { 0.99 * MAX_STEP_PHASE * HBAR_UEV_NS / bound } else { f64::MAX };
    Ok((event.duration_ns / DEFAULT_STEPS_PER_EVENT as f64).min(phase_cap))
}

fn validate_dt(spec: &DeviceSpec, event: &PulseEvent, dt: f64) -> Result<()> {
    if dt <= 0.0 {
        return Err(Error::StepSize { dt, reason: "dt must be positive".into() });
    }
    if dt > event.duration_ns / MIN_STEPS_PER_EVENT as f64 {
        return Err(Error::StepSize {
            dt,
            reason: format!("dt must be at most duration/{MIN_STEPS_PER_EVENT}"),
        });
    }
    let bound = energy_scale_bound(spec, event)?;
    let phase = dt * bound / HBAR_UEV_NS;
    if phase > MAX_STEP_PHASE {
        return Err(Error::StepSize {
            dt,
            reason: format!(
                "per-step phase {phase:.3} rad exceeds {MAX_STEP_PHASE} (energy scale {bound:.3} μeV)"
            ),
        });
    }
    Ok(())
}

/// Step-wise integrator for one event. The state stays in the computational
/// frame between steps, so noise operators and samples can be interleaved.
pub struct EventStepper {
    dim: usize,
    n_sites: usize,
    /// Diagonal energies (zeeman + Ising + offsets), μeV.
    diag: Vec<f64>,
    /// Drive peak ω₁/2 in μeV, envelope, and duration, if driven.
    drive: Option<DriveSpec>,
    /// Diagonal of the axis-phase conjugation V.
    v_phase: Vec<C64>,
    dt: f64,
    n_steps: usize,
    duration: f64,
    /// Cached eigendecomposition keyed by the drive amplitude of the step.
    eig_cache: Option<(f64, DMatrix<f64>, DVector<f64>)>,
}

struct DriveSpec {
    half_peak_uev: f64,
    envelope: Envelope,
    phase: f64,
}

impl EventStepper {
    pub fn new(
        spec: &DeviceSpec,
        event: &PulseEvent,
        dt: f64,
        offsets_uev: Option<&[f64]>,
    ) -> Result<Self> {
        event.validate()?;
        validate_dt(spec, event, dt)?;
        let eff = effective_couplings(spec, &event.lasers)?;
        let h0 = frame_hamiltonian(spec, event, &eff, 0.0, offsets_uev);
        let n = h0.n_sites();
        let dim = 1usize << n;
        let diag = h0.diagonal();
        let drive = event.microwave.as_ref().map(|mw| DriveSpec {
            half_peak_uev: mw.rabi_uev / 2.0,
            envelope: mw.envelope,
            phase: mw.phase_rad,
        });
        let v_phase = match &drive {
            Some(d) => (0..dim)
                .map(|i| {
                    // V = ⊗_k diag(e^{−iφ/2}, e^{+iφ/2})
                    let ups = i.count_ones() as f64;
                    let angle = d.phase * (2.0 * ups - n as f64) / 2.0;
                    C64::from_polar(1.0, angle)
                })
                .collect(),
            None => vec![C64::new(1.0, 0.0); dim],
        };
        let n_steps = (event.duration_ns / dt).ceil() as usize;
        Ok(EventStepper {
            dim,
            n_sites: n,
            diag,
            drive,
            v_phase,
            dt: event.duration_ns / n_steps as f64,
            n_steps,
            duration: event.duration_ns,
            eig_cache: None,
        })
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Whether H is diagonal for the whole event (no drive).
    pub fn is_diagonal(&self) -> bool {
        self.drive.is_none()
    }

    fn amplitude_at(&self, step: usize) -> f64 {
        match &self.drive {
            None => 0.0,
            Some(d) => {
                let t_mid = (step as f64 + 0.5) * self.dt;
                d.half_peak_uev * d.envelope.value(t_mid, self.duration)
            }
        }
    }

    /// Apply exp(−i·H(t_mid)·dt/ħ) for `step` to a packed complex matrix
    /// (`dim` rows; any number of columns).
    pub fn apply_step(&mut self, step: usize, re: &mut DMatrix<f64>, im: &mut DMatrix<f64>) {
        let amp = self.amplitude_at(step);
        if amp == 0.0 {
            self.apply_diagonal(self.dt, re, im);
            return;
        }
        self.apply_constant(amp, self.dt, re, im);
    }

    /// Evolve by a diagonal segment of length `t` exactly.
    fn apply_diagonal(&self, t: f64, re: &mut DMatrix<f64>, im: &mut DMatrix<f64>) {
        for row in 0..self.dim {
            let theta = self.diag[row] * t / HBAR_UEV_NS;
            let (s, c) = theta.sin_cos();
            for col in 0..re.ncols() {
                let (r, i) = (re[(row, col)], im[(row, col)]);
                // e^{−iθ}(r + i·i)
                re[(row, col)] = r * c + i * s;
                im[(row, col)] = i * c - r * s;
            }
        }
    }

    /// Exact exponential of the constant Hamiltonian D + amp·Σσ_x over time
    /// `t`, conjugated by the drive-phase diagonal V.
    fn apply_constant(&mut self, amp: f64, t: f64, re: &mut DMatrix<f64>, im: &mut DMatrix<f64>) {
        let reuse = matches!(&self.eig_cache, Some((a, _, _)) if *a == amp);
        if !reuse {
            let mut m = DMatrix::<f64>::zeros(self.dim, self.dim);
            for i in 0..self.dim {
                m[(i, i)] = self.diag[i];
            }
            for k in 0..self.n_sites {
                let mask = 1usize << k;
                for i in 0..self.dim {
                    if i & mask == 0 {
                        m[(i | mask, i)] += amp;
                        m[(i, i | mask)] += amp;
                    }
                }
            }
            let eig = m.symmetric_eigen();
            self.eig_cache = Some((amp, eig.eigenvectors, eig.eigenvalues));
        }
        let (_, q, lambda) = self.eig_cache.as_ref().expect("eig cache");

        // ψ ← V Q e^{−iΛt/ħ} Qᵀ V† ψ
        scale_rows_conj(&self.v_phase, re, im);
        let mut ar = q.transpose() * &*re;
        let mut ai = q.transpose() * &*im;
        for row in 0..self.dim {
            let theta = lambda[row] * t / HBAR_UEV_NS;
            let (s, c) = theta.sin_cos();
            for col in 0..ar.ncols() {
                let (r, i) = (ar[(row, col)], ai[(row, col)]);
                ar[(row, col)] = r * c + i * s;
                ai[(row, col)] = i * c - r * s;
            }
        }
        *re = q * ar;
        *im = q * ai;
        scale_rows(&self.v_phase, re, im);
    }

    /// Full-event propagator. Runs of steps with identical H are merged into
    /// a single exact exponential.
    pub fn propagator(&mut self) -> DMatrix<C64> {
        let mut re = DMatrix::<f64>::identity(self.dim, self.dim);
        let mut im = DMatrix::<f64>::zeros(self.dim, self.dim);
        self.run(&mut re, &mut im);
        pack_complex(&re, &im)
    }

    /// Evolve a state vector over the whole event.
    pub fn evolve_vector(&mut self, v: &mut DVector<C64>) {
        let (mut re, mut im) = unpack_vector(v);
        self.run(&mut re, &mut im);
        for i in 0..self.dim {
            v[i] = C64::new(re[(i, 0)], im[(i, 0)]);
        }
    }

    fn run(&mut self, re: &mut DMatrix<f64>, im: &mut DMatrix<f64>) {
        let mut step = 0;
        while step < self.n_steps {
            let amp = self.amplitude_at(step);
            // merge the run of steps sharing this amplitude
            let mut end = step + 1;
            while end < self.n_steps && self.amplitude_at(end) == amp {
                end += 1;
            }
            let span = (end - step) as f64 * self.dt;
            if amp == 0.0 {
                self.apply_diagonal(span, re, im);
            } else {
                self.apply_constant(amp, span, re, im);
            }
            step = end;
        }
    }
}

fn scale_rows(phase: &[C64], re: &mut DMatrix<f64>, im: &mut DMatrix<f64>) {
    for row in 0..phase.len() {
        let p = phase[row];
        for col in 0..re.ncols() {
            let (r, i) = (re[(row, col)], im[(row, col)]);
            re[(row, col)] = r * p.re - i * p.im;
            im[(row, col)] = r * p.im + i * p.re;
        }
    }
}

fn scale_rows_conj(phase: &[C64], re: &mut DMatrix<f64>, im: &mut DMatrix<f64>) {
    for row in 0..phase.len() {
        let p = phase[row].conj();
        for col in 0..re.ncols() {
            let (r, i) = (re[(row, col)], im[(row, col)]);
            re[(row, col)] = r * p.re - i * p.im;
            im[(row, col)] = r * p.im + i * p.re;
        }
    }
}

fn pack_complex(re: &DMatrix<f64>, im: &DMatrix<f64>) -> DMatrix<C64> {
    DMatrix::from_fn(re.nrows(), re.ncols(), |r, c| C64::new(re[(r, c)], im[(r, c)]))
}

fn unpack_vector(v: &DVector<C64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let re = DMatrix::from_fn(v.len(), 1, |r, _| v[r].re);
    let im = DMatrix::from_fn(v.len(), 1, |r, _| v[r].im);
    (re, im)
}

/// Full-event unitary in the computational basis.
pub fn event_propagator(
    spec: &DeviceSpec,
    event: &PulseEvent,
    dt: f64,
    offsets_uev: Option<&[f64]>,
) -> Result<DMatrix<C64>> {
    Ok(EventStepper::new(spec, event, dt, offsets_uev)?.propagator())
}

/// Propagate a state through one event. Norm (or trace) is preserved to
/// integrator precision.
pub fn evolve(state: &mut ChainState, event: &PulseEvent, spec: &DeviceSpec, dt: f64) -> Result<()> {
    evolve_with_offsets(state, event, spec, dt, None)
}

/// [`evolve`] with per-site static splitting offsets (μeV).
pub fn evolve_with_offsets(
    state: &mut ChainState,
    event: &PulseEvent,
    spec: &DeviceSpec,
    dt: f64,
    offsets_uev: Option<&[f64]>,
) -> Result<()> {
    if state.pattern() != &spec.pattern {
        return Err(Error::InvalidProgram(format!(
            "state pattern {} does not match device pattern {}",
            state.pattern(),
            spec.pattern
        )));
    }
    let mut stepper = EventStepper::new(spec, event, dt, offsets_uev)?;
    match state.repr_mut() {
        Representation::Pure(v) => stepper.evolve_vector(v),
        Representation::Density(rho) => {
            let u = stepper.propagator();
            *rho = &u * &*rho * u.adjoint();
        }
    }
    Ok(())
}

/// One candidate microwave transition of the device: flipping `site` with
/// its neighbors in the given spin configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub site: usize,
    pub cell_type: CellType,
    /// σ_z values of real neighbors; `None` at a chain end (no bond).
    pub s_left: Option<i8>,
    pub s_right: Option<i8>,
    /// Flip cost Δ + J_L·s_L + J_R·s_R at the given couplings, μeV.
    pub energy_uev: f64,
}

impl Transition {
    pub fn describe(&self) -> String {
        let fmt = |s: Option<i8>| match s {
            None => "end".to_string(),
            Some(1) => "1".to_string(),
            _ => "0".to_string(),
        };
        format!(
            "{}[site {}] (left {}, right {}) at {:.4} μeV",
            self.cell_type,
            self.site,
            fmt(self.s_left),
            fmt(self.s_right),
            self.energy_uev
        )
    }
}

/// Every (site, neighbor-configuration) transition energy of the pattern
/// under the given effective couplings.
pub fn enumerate_transitions(pattern: &Pattern, eff: &EffectiveCouplings) -> Vec<Transition> {
    let n = pattern.len();
    let mut out = Vec::new();
    for site in 0..n {
        let t = pattern.cell(site);
        let delta = eff.splitting(t);
        let j_left = if site > 0 { Some(eff.bond(site - 1)) } else { None };
        let j_right = if site + 1 < n { Some(eff.bond(site)) } else { None };
        let left_options: Vec<Option<i8>> = match j_left {
            Some(_) => vec![Some(-1), Some(1)],
            None => vec![None],
        };
        let right_options: Vec<Option<i8>> = match j_right {
            Some(_) => vec![Some(-1), Some(1)],
            None => vec![None],
        };
        for &sl in &left_options {
            for &sr in &right_options {
                let mut e = delta;
                if let (Some(j), Some(s)) = (j_left, sl) {
                    e += j * s as f64;
                }
                if let (Some(j), Some(s)) = (j_right, sr) {
                    e += j * s as f64;
                }
                out.push(Transition {
                    site,
                    cell_type: t,
                    s_left: sl,
                    s_right: sr,
                    energy_uev: e,
                });
            }
        }
    }
    out
}

/// |⟨a|b⟩|² for pure states, Uhlmann fidelity for density matrices,
/// ⟨ψ|ρ|ψ⟩ for a mixed pair. Global phase is irrelevant by construction.
pub fn fidelity(a: &ChainState, b: &ChainState) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::InvalidProgram(format!(
            "state dimensions differ: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    let f = match (a.repr(), b.repr()) {
        (Representation::Pure(x), Representation::Pure(y)) => x.dotc(y).norm_sqr(),
        (Representation::Pure(x), Representation::Density(rho))
        | (Representation::Density(rho), Representation::Pure(x)) => {
            let rx = rho * x;
            x.dotc(&rx).re
        }
        (Representation::Density(rho), Representation::Density(sigma)) => {
            let sr = matrix_sqrt(rho);
            let m = &sr * sigma * &sr;
            // F = (Tr √(√ρ σ √ρ))²
            let herm = (&m + m.adjoint()).scale(0.5);
            let eig = herm.symmetric_eigen();
            let tr: f64 = eig.eigenvalues.iter().map(|l| l.max(0.0).sqrt()).sum();
            tr * tr
        }
    };
    Ok(f.clamp(0.0, 1.0 + 1e-9).min(1.0))
}

fn matrix_sqrt(rho: &DMatrix<C64>) -> DMatrix<C64> {
    let herm = (rho + rho.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigen();
    let q = eig.eigenvectors;
    let sqrt_vals =
        DVector::from_iterator(eig.eigenvalues.len(), eig.eigenvalues.iter().map(|l| {
            C64::new(l.max(0.0).sqrt(), 0.0)
        }));
    &q * DMatrix::from_diagonal(&sqrt_vals) * q.adjoint()
}
