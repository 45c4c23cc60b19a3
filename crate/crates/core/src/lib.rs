//! Desk-scale simulator and parameter calculator for a globally controlled
//! donor-spin quantum cellular automaton.
//!
//! The crate models a typed chain of donor electron spins (cells `A`, `B`,
//! `C` and a terminal readout cell `D`) whose splittings and Ising couplings
//! are gated by two lasers, and which is driven globally by microwave pulses
//! at a fixed cavity frequency. It provides:
//!
//! - [`formulas`]: every closed-form device number (splittings, exchange,
//!   linewidths, decoherence-time estimates) over unit-checked quantities;
//! - [`state`]: pure-state / density-matrix chain states with observables
//!   and channels;
//! - [`oracle`]: exact idealized semantics of globally applied conditional
//!   rotations, the correctness reference for the pulse engine;
//! - [`pulse`]: rotating-frame pulse-level integration of laser-gated
//!   Hamiltonians with enveloped microwave drive;
//! - [`noise`]: dephasing channels, trajectory unraveling, static ensemble
//!   inhomogeneity, and reproducible parallel ensemble averaging;
//! - [`program`]: compilation of logical operations (conditional rotations,
//!   controlled phases, swaps, shifts toward the readout cell) into global
//!   pulse schedules;
//! - [`readout`]: optical-pumping initialization, ensemble Faraday readout,
//!   and single-cell tomography;
//! - [`report`]: the derived-parameter table used by the `params` command.

pub mod chain;
pub mod demo;
pub mod device;
pub mod error;
pub mod formulas;
pub mod oracle;
pub mod pulse;
pub mod state;
pub mod units;

pub use chain::{CellType, Pattern};
pub use device::{
    effective_couplings, BoundarySpins, DeviceSpec, EffectiveCouplings, LaserSettings,
    MaterialParams,
};
pub use error::{Error, Result};
pub use oracle::{BoundaryPolicy, Condition, GateRule, RuleAction};
pub use pulse::{evolve, fidelity, Envelope, MicrowaveDrive, PulseEvent};
pub use state::{ChainState, Observable, PauliLabel, Representation};
pub use units::{Quantity, Unit};
