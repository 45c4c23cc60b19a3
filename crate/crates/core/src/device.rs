//! Device description: material constants, cell pattern, per-type optical
//! detunings, relay couplings, cavity energy, and the laser-gated effective
//! couplings derived from them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chain::{CellType, Pattern};
use crate::error::{Error, Result};
use crate::formulas::{exchange_coupling, spin_splitting};
use crate::units::Quantity;

/// Host material constants. Lengths in nm, energies in the units named by
/// each field, times in ps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    /// Spin-orbit ("k-linear") coupling constant, μeV·nm. Negative in ZnO.
    pub c0_uev_nm: f64,
    /// Donor ionization energy, meV.
    pub r0_mev: f64,
    /// Donor Bohr radius, nm (γ-consistent default).
    pub a0_nm: f64,
    /// Alternative Bohr radius consistent with the Mott-criterion deduction, nm.
    #[serde(default = "default_a0_mott")]
    pub a0_mott_nm: f64,
    /// Electron effective mass in units of the free-electron mass.
    pub m_eff: f64,
    /// Average electronic g-factor.
    pub g_av: f64,
    /// Free-exciton binding energy, meV.
    pub eb_x_mev: f64,
    /// Donor-bound-exciton binding energy, meV.
    pub eb_d0x_mev: f64,
    /// Bound-exciton recombination time, ps.
    pub t_rec_ps: f64,
    /// Dimensionless β(T) prefactor of the insulating-phase T2 estimate.
    pub beta_t: f64,
    /// Effective number of nuclei coupled to a donor electron.
    pub n_nuc: f64,
    /// Hyperfine frequency, MHz.
    pub nu_hf_mhz: f64,
}

fn default_a0_mott() -> f64 {
    2.93
}

impl MaterialParams {
    /// ZnO host with a hydrogen donor.
    pub fn zno_hydrogen() -> Self {
        MaterialParams {
            c0_uev_nm: -64.0,
            r0_mev: 35.0,
            a0_nm: 2.15,
            a0_mott_nm: 2.93,
            m_eff: 0.30,
            g_av: 1.956,
            eb_x_mev: 60.0,
            eb_d0x_mev: 10.0,
            t_rec_ps: 60.0,
            beta_t: 0.05,
            n_nuc: 50.0,
            nu_hf_mhz: 1.4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.r0_mev <= 0.0 {
            return Err(Error::NonPositive { name: "r0_mev", value: self.r0_mev });
        }
        if self.a0_nm <= 0.0 {
            return Err(Error::NonPositive { name: "a0_nm", value: self.a0_nm });
        }
        if self.m_eff <= 0.0 || self.m_eff > 1.0 {
            return Err(Error::InvalidDevice(format!(
                "m_eff must lie in (0, 1], got {}",
                self.m_eff
            )));
        }
        if self.t_rec_ps <= 0.0 {
            return Err(Error::NonPositive { name: "t_rec_ps", value: self.t_rec_ps });
        }
        Ok(())
    }
}

/// Virtual neighbor spin value at each chain end, used when evaluating
/// neighbor conditions at the boundary. `0` keeps end cells unreachable by
/// rules conditioned on a `1` neighbor, which is what makes them separately
/// addressable for loading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundarySpins {
    pub left: u8,
    pub right: u8,
}

impl Default for BoundarySpins {
    fn default() -> Self {
        BoundarySpins { left: 0, right: 0 }
    }
}

impl BoundarySpins {
    pub fn new(left: u8, right: u8) -> Result<Self> {
        if left > 1 || right > 1 {
            return Err(Error::InvalidDevice("boundary spins must be 0 or 1".into()));
        }
        Ok(BoundarySpins { left, right })
    }
}

/// Full device configuration: pattern, laser detunings, relay couplings,
/// cavity energy, and host material.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceSpec {
    pub pattern: Pattern,
    /// Per-type detuning δ_i of the circular laser from the D0X transition, meV.
    pub detunings_mev: BTreeMap<CellType, f64>,
    /// Detuning δ_R of the linear laser from the relay exciton, meV.
    pub relay_detuning_mev: f64,
    /// Per-type vertical exchange J_iR to an adjacent relay exciton, μeV.
    pub relay_couplings_uev: BTreeMap<CellType, f64>,
    /// Cavity photon energy Δ_CAV, μeV.
    pub cavity_energy_uev: f64,
    pub material: MaterialParams,
    /// Residual donor density n0, cm⁻³.
    pub donor_density_cm3: f64,
    /// Operating temperature, K.
    pub temperature_k: f64,
    #[serde(default)]
    pub boundary: BoundarySpins,
}

impl DeviceSpec {
    pub fn validate(&self) -> Result<()> {
        self.material.validate()?;
        for t in self.pattern.types_present() {
            match self.detunings_mev.get(&t) {
                Some(d) if *d > 0.0 => {}
                Some(d) => {
                    return Err(Error::InvalidDevice(format!(
                        "detuning for type {t} must be positive (virtual excitation only), got {d}"
                    )))
                }
                None => {
                    return Err(Error::InvalidDevice(format!("missing detuning for type {t}")))
                }
            }
            if !self.relay_couplings_uev.contains_key(&t) {
                return Err(Error::InvalidDevice(format!(
                    "missing relay coupling for type {t}"
                )));
            }
        }
        if self.relay_detuning_mev <= 0.0 {
            return Err(Error::NonPositive {
                name: "relay_detuning_mev",
                value: self.relay_detuning_mev,
            });
        }
        if self.cavity_energy_uev <= 0.0 {
            return Err(Error::NonPositive {
                name: "cavity_energy_uev",
                value: self.cavity_energy_uev,
            });
        }
        if self.donor_density_cm3 <= 0.0 {
            return Err(Error::NonPositive {
                name: "donor_density_cm3",
                value: self.donor_density_cm3,
            });
        }
        if self.boundary.left > 1 || self.boundary.right > 1 {
            return Err(Error::InvalidDevice("boundary spins must be 0 or 1".into()));
        }
        Ok(())
    }

    pub fn detuning(&self, t: CellType) -> Result<Quantity> {
        self.detunings_mev
            .get(&t)
            .map(|d| Quantity::mev(*d))
            .ok_or_else(|| Error::InvalidDevice(format!("missing detuning for type {t}")))
    }

    pub fn relay_coupling(&self, t: CellType) -> Result<Quantity> {
        self.relay_couplings_uev
            .get(&t)
            .map(|j| Quantity::uev(*j))
            .ok_or_else(|| Error::InvalidDevice(format!("missing relay coupling for type {t}")))
    }

    pub fn cavity_energy(&self) -> Quantity {
        Quantity::uev(self.cavity_energy_uev)
    }
}

/// Settings of the two gating lasers during one window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaserSettings {
    /// Rabi energy Ω_C of the circularly polarised laser, meV.
    pub rabi_c_mev: f64,
    /// Rabi energy Ω_L of the linearly polarised laser, meV.
    pub rabi_l_mev: f64,
    pub circular_on: bool,
    pub linear_on: bool,
}

impl LaserSettings {
    pub fn off() -> Self {
        LaserSettings { rabi_c_mev: 0.0, rabi_l_mev: 0.0, circular_on: false, linear_on: false }
    }

    pub fn both_on(rabi_c_mev: f64, rabi_l_mev: f64) -> Self {
        LaserSettings { rabi_c_mev, rabi_l_mev, circular_on: true, linear_on: true }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rabi_c_mev < 0.0 {
            return Err(Error::Negative { name: "rabi_c_mev", value: self.rabi_c_mev });
        }
        if self.rabi_l_mev < 0.0 {
            return Err(Error::Negative { name: "rabi_l_mev", value: self.rabi_l_mev });
        }
        Ok(())
    }

    /// Effective circular Rabi energy (zero when the laser is gated off).
    pub fn effective_rabi_c(&self) -> Quantity {
        Quantity::mev(if self.circular_on { self.rabi_c_mev } else { 0.0 })
    }

    /// Effective linear Rabi energy (zero when the laser is gated off).
    pub fn effective_rabi_l(&self) -> Quantity {
        Quantity::mev(if self.linear_on { self.rabi_l_mev } else { 0.0 })
    }
}

/// Laser-induced splittings and couplings active during a gating window.
/// All entries vanish when the corresponding laser is off.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveCouplings {
    /// Δ_i per type, μeV.
    pub delta_uev: BTreeMap<CellType, f64>,
    /// J per adjacent (site, site+1) bond, μeV.
    pub jmap_uev: BTreeMap<(usize, usize), f64>,
}

impl EffectiveCouplings {
    pub fn splitting(&self, t: CellType) -> f64 {
        self.delta_uev.get(&t).copied().unwrap_or(0.0)
    }

    pub fn bond(&self, left_site: usize) -> f64 {
        self.jmap_uev.get(&(left_site, left_site + 1)).copied().unwrap_or(0.0)
    }
}

/// Assemble the splitting and coupling maps for the whole pattern. A relay
/// sits between every adjacent doped pair, so each bond (k, k+1) carries
/// J = J_{t_k,R}·J_{R,t_{k+1}}·Ω_L²/δ_R³.
pub fn effective_couplings(spec: &DeviceSpec, lasers: &LaserSettings) -> Result<EffectiveCouplings> {
    spec.validate()?;
    lasers.validate()?;
    let rabi_c = lasers.effective_rabi_c();
    let rabi_l = lasers.effective_rabi_l();
    let relay_det = Quantity::mev(spec.relay_detuning_mev);

    let mut delta_uev = BTreeMap::new();
    for t in spec.pattern.types_present() {
        let d = spin_splitting(rabi_c, spec.detuning(t)?)?;
        delta_uev.insert(t, d.value);
    }

    let mut jmap_uev = BTreeMap::new();
    for (a, b) in spec.pattern.bonds() {
        let ta = spec.pattern.cell(a);
        let tb = spec.pattern.cell(b);
        let j = exchange_coupling(
            spec.relay_coupling(ta)?,
            spec.relay_coupling(tb)?,
            rabi_l,
            relay_det,
        )?;
        jmap_uev.insert((a, b), j.value);
    }

    Ok(EffectiveCouplings { delta_uev, jmap_uev })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec_abc() -> DeviceSpec {
        DeviceSpec {
            pattern: Pattern::parse("ABC").unwrap(),
            detunings_mev: [(CellType::A, 12.0), (CellType::B, 10.0), (CellType::C, 8.0)]
                .into_iter()
                .collect(),
            relay_detuning_mev: 4.0,
            relay_couplings_uev: [
                (CellType::A, 500.0),
                (CellType::B, 400.0),
                (CellType::C, 300.0),
            ]
            .into_iter()
            .collect(),
            cavity_energy_uev: 95.0,
            material: MaterialParams::zno_hydrogen(),
            donor_density_cm3: 1e16,
            temperature_k: 4.2,
            boundary: BoundarySpins::default(),
        }
    }

    #[test]
    fn paper_detunings_give_published_splittings() {
        let spec = spec_abc();
        let lasers = LaserSettings::both_on(1.07, 2.0);
        let eff = effective_couplings(&spec, &lasers).unwrap();
        assert_relative_eq!(eff.splitting(CellType::A), 95.408333, epsilon = 1e-4);
        assert_relative_eq!(eff.splitting(CellType::B), 114.49, epsilon = 1e-2);
        assert_relative_eq!(eff.splitting(CellType::C), 143.1125, epsilon = 1e-4);
        assert_eq!(eff.jmap_uev.len(), 2);
    }

    #[test]
    fn lasers_off_zeroes_everything() {
        let spec = spec_abc();
        let eff = effective_couplings(&spec, &LaserSettings::off()).unwrap();
        assert!(eff.delta_uev.values().all(|v| *v == 0.0));
        assert!(eff.jmap_uev.values().all(|v| *v == 0.0));

        // gating flags alone switch the contribution off
        let gated = LaserSettings {
            rabi_c_mev: 1.07,
            rabi_l_mev: 2.0,
            circular_on: false,
            linear_on: false,
        };
        let eff = effective_couplings(&spec, &gated).unwrap();
        assert!(eff.delta_uev.values().all(|v| *v == 0.0));
        assert!(eff.jmap_uev.values().all(|v| *v == 0.0));
    }

    #[test]
    fn two_cell_bond_matches_direct_formula() {
        let mut spec = spec_abc();
        spec.pattern = Pattern::parse("AB").unwrap();
        spec.relay_couplings_uev.insert(CellType::A, 1000.0);
        spec.relay_couplings_uev.insert(CellType::B, 1000.0);
        let eff = effective_couplings(&spec, &LaserSettings::both_on(0.0, 2.0)).unwrap();
        assert_relative_eq!(eff.bond(0), 62.5, epsilon = 1e-9);
    }

    #[test]
    fn validation_catches_bad_specs() {
        let mut spec = spec_abc();
        spec.detunings_mev.insert(CellType::B, -1.0);
        assert!(spec.validate().is_err());

        let mut spec = spec_abc();
        spec.detunings_mev.remove(&CellType::C);
        assert!(spec.validate().is_err());

        let mut spec = spec_abc();
        spec.relay_detuning_mev = 0.0;
        assert!(spec.validate().is_err());

        let mut spec = spec_abc();
        spec.material.m_eff = 1.4;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn device_round_trips_through_json() {
        let spec = spec_abc();
        let json = serde_json::to_string_pretty(&spec).unwrap();
        let back: DeviceSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(spec, back);
    }
}
