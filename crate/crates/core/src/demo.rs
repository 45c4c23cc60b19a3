//! Reference device configurations: a ZnO hydrogen-donor chain with the
//! published detuning set, relay couplings chosen to realize round
//! inter-donor couplings (J_AB, J_BC, J_CA) = (4, 2, 6) μeV and J_CD = 3 μeV
//! at the operating point, and the K-band cavity at 95 μeV.

use std::collections::BTreeMap;

use crate::chain::{CellType, Pattern};
use crate::device::{BoundarySpins, DeviceSpec, LaserSettings, MaterialParams};

/// Operating-point laser settings: Ω_C = 1.07 meV, Ω_L = 2 meV, both on.
pub fn operating_lasers() -> LaserSettings {
    LaserSettings::both_on(1.07, 2.0)
}

/// Relay couplings (μeV) that produce J_AB = 4, J_BC = 2, J_CA = 6 and
/// J_CD = 3 μeV at Ω_L = 2 meV, δ_R = 4 meV.
fn reference_relay_couplings() -> BTreeMap<CellType, f64> {
    // J_ij = j_i·j_j·f with f = Ω_L²/δ_R³ = 6.25e-5 μeV⁻¹
    let f = 2000.0f64 * 2000.0 / (4000.0f64 * 4000.0 * 4000.0);
    let j_a = (4.0 * 6.0 / 2.0 / f).sqrt();
    let j_b = (4.0 * 2.0 / 6.0 / f).sqrt();
    let j_c = (2.0 * 6.0 / 4.0 / f).sqrt();
    let j_d = j_c; // makes J_CD = j_c²·f = 3 μeV
    [(CellType::A, j_a), (CellType::B, j_b), (CellType::C, j_c), (CellType::D, j_d)]
        .into_iter()
        .collect()
}

fn reference_detunings() -> BTreeMap<CellType, f64> {
    [(CellType::A, 12.0), (CellType::B, 10.0), (CellType::C, 8.0), (CellType::D, 6.0)]
        .into_iter()
        .collect()
}

fn reference_device(pattern: &str) -> DeviceSpec {
    DeviceSpec {
        pattern: Pattern::parse(pattern).expect("valid pattern"),
        detunings_mev: reference_detunings(),
        relay_detuning_mev: 4.0,
        relay_couplings_uev: reference_relay_couplings(),
        cavity_energy_uev: 95.0,
        material: MaterialParams::zno_hydrogen(),
        donor_density_cm3: 1e17,
        temperature_k: 4.2,
        boundary: BoundarySpins::default(),
    }
}

/// The full reference molecule ABCABCD.
pub fn paper_device() -> DeviceSpec {
    reference_device("ABCABCD")
}

/// Six-cell ABCABC chain (no readout cell), used by the selectivity checks.
pub fn six_cell_device() -> DeviceSpec {
    reference_device("ABCABC")
}

/// Four-cell ABCD chain, the smallest shift-capable molecule.
pub fn four_cell_device() -> DeviceSpec {
    reference_device("ABCD")
}

/// A chain with the given pattern and reference parameters.
pub fn device_with_pattern(pattern: &str) -> DeviceSpec {
    reference_device(pattern)
}

/// Single-cell device of one type (used for Rabi and Ramsey physics).
pub fn single_site_device(t: CellType) -> DeviceSpec {
    reference_device(&t.as_char().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::effective_couplings;
    use approx::assert_relative_eq;

    #[test]
    fn reference_couplings_hit_round_values() {
        let spec = paper_device();
        let eff = effective_couplings(&spec, &operating_lasers()).unwrap();
        // bonds: A-B, B-C, C-A, A-B, B-C, C-D
        assert_relative_eq!(eff.bond(0), 4.0, max_relative = 1e-12);
        assert_relative_eq!(eff.bond(1), 2.0, max_relative = 1e-12);
        assert_relative_eq!(eff.bond(2), 6.0, max_relative = 1e-12);
        assert_relative_eq!(eff.bond(3), 4.0, max_relative = 1e-12);
        assert_relative_eq!(eff.bond(4), 2.0, max_relative = 1e-12);
        assert_relative_eq!(eff.bond(5), 3.0, max_relative = 1e-12);
        assert_relative_eq!(eff.splitting(CellType::A), 95.408333, epsilon = 1e-4);
    }

    #[test]
    fn variants_validate() {
        paper_device().validate().unwrap();
        six_cell_device().validate().unwrap();
        four_cell_device().validate().unwrap();
        single_site_device(CellType::A).validate().unwrap();
    }
}
