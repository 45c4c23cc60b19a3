//! Closed-form device physics: optically induced splittings and couplings,
//! linewidths, and decoherence-time estimates.
//!
//! All operations take unit-tagged [`Quantity`] inputs and check dimensions
//! before evaluating, so a mismatched call site fails loudly. Outputs follow
//! the crate's canonical units (μeV, ns, nm).
//!
//! A note on ħ vs h: the source conventions for a few of these estimates
//! absorb a factor of 2π inconsistently. [`t2_metal`] and
//! [`t2_from_esr_halfwidth`] are evaluated with the 2π absorbed (the only
//! reading that reproduces the published ns-scale values), while
//! [`t2_insulator`] and [`t2_hyperfine_limit`] are evaluated with literal ħ
//! and their known discrepancy is reported by the parameter table instead of
//! being hidden.

use crate::error::{Error, Result};
use crate::units::{
    Quantity, Unit, ELECTRON_MASS_KG, ELEMENTARY_CHARGE_C, HBAR_UEV_NS, H_UEV_PER_GHZ,
    MU_B_UEV_PER_T,
};

/// Bandwidth estimator constant in δ_EX = k·ħ/t_p. The estimate is only
/// order-of-magnitude; k is exposed so alternative pulse-shape conventions
/// (within a factor ~2) can be dialed in.
pub const EXCITATION_BANDWIDTH_FACTOR: f64 = 1.0;

/// Edwards–Sienko criterion constant in n_c^(1/3)·a0 = 0.26.
pub const MOTT_CRITERION: f64 = 0.26;

fn positive(q: Quantity, unit: Unit, name: &'static str) -> Result<f64> {
    let v = q.value_in(unit)?;
    if v <= 0.0 {
        return Err(Error::NonPositive { name, value: v });
    }
    Ok(v)
}

fn non_negative(q: Quantity, unit: Unit, name: &'static str) -> Result<f64> {
    let v = q.value_in(unit)?;
    if v < 0.0 {
        return Err(Error::Negative { name, value: v });
    }
    Ok(v)
}

/// Laser-induced spin splitting Δ_i = Ω_C²/δ_i, in μeV.
pub fn spin_splitting(rabi_c: Quantity, detuning: Quantity) -> Result<Quantity> {
    let omega = non_negative(rabi_c, Unit::MicroEv, "rabi energy")?;
    let delta = positive(detuning, Unit::MicroEv, "detuning")?;
    Ok(Quantity::uev(omega * omega / delta))
}

/// Relay-mediated exchange J_ij = J_iR·J_Rj·Ω_L²/δ_R³, in μeV.
///
/// The expression is homogeneous of degree one in energy, so all four inputs
/// are converted to μeV before evaluating.
pub fn exchange_coupling(
    j_ir: Quantity,
    j_rj: Quantity,
    rabi_l: Quantity,
    relay_detuning: Quantity,
) -> Result<Quantity> {
    let ji = j_ir.value_in(Unit::MicroEv)?;
    let jj = j_rj.value_in(Unit::MicroEv)?;
    let omega = non_negative(rabi_l, Unit::MicroEv, "rabi energy")?;
    let dr = positive(relay_detuning, Unit::MicroEv, "relay detuning")?;
    Ok(Quantity::uev(ji * jj * omega * omega / (dr * dr * dr)))
}

/// Rabi energy that places Ω²/δ at `target`: Ω_C = √(δ·Δ), in meV.
pub fn solve_rabi_for_resonance(detuning: Quantity, target: Quantity) -> Result<Quantity> {
    let delta = positive(detuning, Unit::MicroEv, "detuning")?;
    let t = positive(target, Unit::MicroEv, "target transition")?;
    Quantity::uev((delta * t).sqrt()).to(Unit::MilliEv)
}

/// Spin value as a σ_z eigenvalue: '0' (down) ↦ −1, '1' (up) ↦ +1.
pub fn spin_sign(bit: u8) -> f64 {
    if bit == 0 {
        -1.0
    } else {
        1.0
    }
}

/// Energy cost of flipping a cell against its neighbors:
/// Δ_X + J_left·s_left + J_right·s_right, in μeV.
pub fn conditional_transition_energy(
    splitting: Quantity,
    j_left: Quantity,
    s_left: f64,
    j_right: Quantity,
    s_right: f64,
) -> Result<Quantity> {
    let d = splitting.value_in(Unit::MicroEv)?;
    let jl = j_left.value_in(Unit::MicroEv)?;
    let jr = j_right.value_in(Unit::MicroEv)?;
    Ok(Quantity::uev(d + jl * s_left + jr * s_right))
}

/// Homogeneous linewidth of a transition with lifetime τ: Γ = ħ/τ, in μeV.
pub fn linewidth_from_lifetime(lifetime: Quantity) -> Result<Quantity> {
    let tau = positive(lifetime, Unit::Nanosecond, "lifetime")?;
    Ok(Quantity::uev(HBAR_UEV_NS / tau))
}

/// Inhomogeneous ESR width inherited from the optical line:
/// Γ_inh = Γ_D0X·(Δ_i/δ_i), in μeV.
pub fn esr_inhomogeneous_width(
    gamma_d0x: Quantity,
    splitting: Quantity,
    detuning: Quantity,
) -> Result<Quantity> {
    let g = non_negative(gamma_d0x, Unit::MicroEv, "optical linewidth")?;
    let d = splitting.value_in(Unit::MicroEv)?;
    let delta = positive(detuning, Unit::MicroEv, "detuning")?;
    Ok(Quantity::uev(g * d / delta))
}

/// Excitation bandwidth of a pulse of length t_p: δ_EX = k·ħ/t_p, in μeV.
pub fn excitation_bandwidth(pulse_length: Quantity) -> Result<Quantity> {
    let tp = positive(pulse_length, Unit::Nanosecond, "pulse length")?;
    Ok(Quantity::uev(EXCITATION_BANDWIDTH_FACTOR * HBAR_UEV_NS / tp))
}

/// Transport collision time τ_c = μ·m*/e from the mobility (cm²V⁻¹s⁻¹), in fs.
pub fn collision_time(mobility_cm2_v_s: f64, m_eff: f64) -> Result<Quantity> {
    if mobility_cm2_v_s <= 0.0 {
        return Err(Error::NonPositive { name: "mobility", value: mobility_cm2_v_s });
    }
    if m_eff <= 0.0 {
        return Err(Error::NonPositive { name: "effective mass", value: m_eff });
    }
    let mobility_si = mobility_cm2_v_s * 1e-4; // m²/(V·s)
    let tau_s = mobility_si * m_eff * ELECTRON_MASS_KG / ELEMENTARY_CHARGE_C;
    Ok(Quantity::fs(tau_s * 1e15))
}

/// Fermi wave vector from the g-factor anisotropy,
/// k_F = √(2Δg)·g·μ_B·B0/|C0|, in nm⁻¹. Inverts Δg = ½(C0·k_F)²/(g·μ_B·B0)².
pub fn fermi_k_from_anisotropy(
    delta_g: f64,
    g: f64,
    b0: Quantity,
    c0_uev_nm: f64,
) -> Result<Quantity> {
    if delta_g < 0.0 {
        return Err(Error::Negative { name: "g-factor anisotropy", value: delta_g });
    }
    let b = positive(b0, Unit::Tesla, "magnetic field")?;
    Ok(Quantity::per_nm(
        (2.0 * delta_g).sqrt() * g * MU_B_UEV_PER_T * b / c0_uev_nm.abs(),
    ))
}

/// Metallic-phase decoherence time T2 = ½·ħ²/((C0·k_F)²·τ_c), in ns.
///
/// The printed form carries a 2π that cancels when its "ħ" is read as h;
/// this is the reading that reproduces the published ~1 ns.
pub fn t2_metal(c0_uev_nm: f64, k_f: Quantity, tau_c: Quantity) -> Result<Quantity> {
    let kf = positive(k_f, Unit::PerNm, "Fermi wave vector")?;
    let tau = positive(tau_c, Unit::Nanosecond, "collision time")?;
    let coupling = c0_uev_nm.abs() * kf; // μeV
    Ok(Quantity::ns(0.5 * HBAR_UEV_NS * HBAR_UEV_NS / (coupling * coupling * tau)))
}

/// Average spin rotation angle per hop, γ = |C0|/(R0·a0), dimensionless.
pub fn gamma_angle(c0_uev_nm: f64, r0: Quantity, a0: Quantity) -> Result<f64> {
    let r = positive(r0, Unit::MicroEv, "ionization energy")?;
    let a = positive(a0, Unit::Nanometer, "Bohr radius")?;
    Ok(c0_uev_nm.abs() / (r * a))
}

/// Insulating-phase decoherence time T2 = β·ħ/(n0·a0³·R0·γ²), in μs
/// (reported as a ns quantity). Evaluated with literal ħ.
pub fn t2_insulator(
    n0: Quantity,
    a0: Quantity,
    r0: Quantity,
    gamma: f64,
    beta: f64,
) -> Result<Quantity> {
    let n_cm3 = positive(n0, Unit::PerCm3, "donor density")?;
    let a = positive(a0, Unit::Nanometer, "Bohr radius")?;
    let r = positive(r0, Unit::MicroEv, "ionization energy")?;
    if gamma <= 0.0 {
        return Err(Error::NonPositive { name: "gamma", value: gamma });
    }
    if beta <= 0.0 {
        return Err(Error::NonPositive { name: "beta", value: beta });
    }
    let n_nm3 = n_cm3 * 1e-21; // nm⁻³
    Ok(Quantity::ns(beta * HBAR_UEV_NS / (n_nm3 * a * a * a * r * gamma * gamma)))
}

/// Hyperfine limit on the decoherence time, T2 = N·ħ/(h·ν) = N/(2πν),
/// reported in ns. Evaluated with literal ħ over A = hν; the published value
/// for the reference parameters does not follow from any standard convention
/// and is flagged by the parameter table rather than asserted.
pub fn t2_hyperfine_limit(n_nuclei: f64, nu_hf: Quantity) -> Result<Quantity> {
    if n_nuclei < 1.0 {
        return Err(Error::NonPositive { name: "nuclear count", value: n_nuclei });
    }
    let nu_ghz = positive(nu_hf, Unit::GigaHz, "hyperfine frequency")?;
    let a_uev = H_UEV_PER_GHZ * nu_ghz;
    Ok(Quantity::ns(n_nuclei * HBAR_UEV_NS / a_uev))
}

/// Critical density of the metal–insulator transition, n_c = (0.26/a0)³, in cm⁻³.
pub fn mott_critical_density(a0: Quantity) -> Result<Quantity> {
    let a = positive(a0, Unit::Nanometer, "Bohr radius")?;
    let nc_nm3 = (MOTT_CRITERION / a).powi(3);
    Ok(Quantity::per_cm3(nc_nm3 * 1e21))
}

/// Decoherence time from an ESR line halfwidth: T2 = ħ/(2·g·μ_B·ΔB), in ns
/// (printed form ħ/(4π·g·μ_B·ΔB) with its ħ read as h).
pub fn t2_from_esr_halfwidth(halfwidth: Quantity, g: f64) -> Result<Quantity> {
    let db = positive(halfwidth, Unit::Tesla, "ESR halfwidth")?;
    Ok(Quantity::ns(HBAR_UEV_NS / (2.0 * g * MU_B_UEV_PER_T * db)))
}

/// Number of gates that fit in the coherence window, T2/T_p.
pub fn fault_tolerance_ratio(t2: Quantity, gate_time: Quantity) -> Result<f64> {
    let t = positive(t2, Unit::Nanosecond, "T2")?;
    let tp = positive(gate_time, Unit::Nanosecond, "gate time")?;
    Ok(t / tp)
}
