//! Unit-tagged physical quantities.
//!
//! Every closed-form expression in this crate takes [`Quantity`] values so
//! that a caller passing, say, a time where an energy is expected gets an
//! error instead of a silently wrong number. Internally everything is
//! canonicalized to μeV / ns / nm; energy↔frequency conversion uses E = hν
//! and energy↔lifetime uses Γ = ħ/τ.

use std::fmt;

use crate::error::{Error, Result};

/// Planck constant, μeV per GHz.
pub const H_UEV_PER_GHZ: f64 = 4.135667;
/// Reduced Planck constant, μeV·ns.
pub const HBAR_UEV_NS: f64 = 0.6582120;
/// Bohr magneton, μeV per tesla.
pub const MU_B_UEV_PER_T: f64 = 57.883;
/// Free electron mass, kg.
pub const ELECTRON_MASS_KG: f64 = 9.109_383_7015e-31;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE_C: f64 = 1.602_176_634e-19;

/// Physical dimension of a [`Quantity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Energy,
    Frequency,
    Time,
    Length,
    MagneticField,
    NumberDensity,
    InverseLength,
    Temperature,
    Dimensionless,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Dimension::Energy => "energy",
            Dimension::Frequency => "frequency",
            Dimension::Time => "time",
            Dimension::Length => "length",
            Dimension::MagneticField => "magnetic field",
            Dimension::NumberDensity => "number density",
            Dimension::InverseLength => "inverse length",
            Dimension::Temperature => "temperature",
            Dimension::Dimensionless => "dimensionless",
        };
        f.write_str(s)
    }
}

/// Supported units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    MicroEv,
    MilliEv,
    GigaHz,
    MegaHz,
    Nanosecond,
    Picosecond,
    Femtosecond,
    Nanometer,
    Tesla,
    MilliTesla,
    PerCm3,
    PerNm,
    Kelvin,
    Dimensionless,
}

impl Unit {
    pub fn dimension(self) -> Dimension {
        match self {
            Unit::MicroEv | Unit::MilliEv => Dimension::Energy,
            Unit::GigaHz | Unit::MegaHz => Dimension::Frequency,
            Unit::Nanosecond | Unit::Picosecond | Unit::Femtosecond => Dimension::Time,
            Unit::Nanometer => Dimension::Length,
            Unit::Tesla | Unit::MilliTesla => Dimension::MagneticField,
            Unit::PerCm3 => Dimension::NumberDensity,
            Unit::PerNm => Dimension::InverseLength,
            Unit::Kelvin => Dimension::Temperature,
            Unit::Dimensionless => Dimension::Dimensionless,
        }
    }

    /// Scale factor to the canonical unit of this unit's dimension
    /// (μeV, GHz, ns, nm, T, cm⁻³, nm⁻¹, K).
    fn to_canonical(self) -> f64 {
        match self {
            Unit::MicroEv => 1.0,
            Unit::MilliEv => 1e3,
            Unit::GigaHz => 1.0,
            Unit::MegaHz => 1e-3,
            Unit::Nanosecond => 1.0,
            Unit::Picosecond => 1e-3,
            Unit::Femtosecond => 1e-6,
            Unit::Nanometer => 1.0,
            Unit::Tesla => 1.0,
            Unit::MilliTesla => 1e-3,
            Unit::PerCm3 => 1.0,
            Unit::PerNm => 1.0,
            Unit::Kelvin => 1.0,
            Unit::Dimensionless => 1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Unit::MicroEv => "μeV",
            Unit::MilliEv => "meV",
            Unit::GigaHz => "GHz",
            Unit::MegaHz => "MHz",
            Unit::Nanosecond => "ns",
            Unit::Picosecond => "ps",
            Unit::Femtosecond => "fs",
            Unit::Nanometer => "nm",
            Unit::Tesla => "T",
            Unit::MilliTesla => "mT",
            Unit::PerCm3 => "cm⁻³",
            Unit::PerNm => "nm⁻¹",
            Unit::Kelvin => "K",
            Unit::Dimensionless => "",
        }
    }
}

/// A real value tagged with its unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

impl Quantity {
    pub fn new(value: f64, unit: Unit) -> Self {
        Quantity { value, unit }
    }

    pub fn uev(value: f64) -> Self {
        Quantity::new(value, Unit::MicroEv)
    }
    pub fn mev(value: f64) -> Self {
        Quantity::new(value, Unit::MilliEv)
    }
    pub fn ghz(value: f64) -> Self {
        Quantity::new(value, Unit::GigaHz)
    }
    pub fn mhz(value: f64) -> Self {
        Quantity::new(value, Unit::MegaHz)
    }
    pub fn ns(value: f64) -> Self {
        Quantity::new(value, Unit::Nanosecond)
    }
    pub fn ps(value: f64) -> Self {
        Quantity::new(value, Unit::Picosecond)
    }
    pub fn fs(value: f64) -> Self {
        Quantity::new(value, Unit::Femtosecond)
    }
    pub fn nm(value: f64) -> Self {
        Quantity::new(value, Unit::Nanometer)
    }
    pub fn tesla(value: f64) -> Self {
        Quantity::new(value, Unit::Tesla)
    }
    pub fn mtesla(value: f64) -> Self {
        Quantity::new(value, Unit::MilliTesla)
    }
    pub fn per_cm3(value: f64) -> Self {
        Quantity::new(value, Unit::PerCm3)
    }
    pub fn per_nm(value: f64) -> Self {
        Quantity::new(value, Unit::PerNm)
    }
    pub fn kelvin(value: f64) -> Self {
        Quantity::new(value, Unit::Kelvin)
    }
    pub fn dimensionless(value: f64) -> Self {
        Quantity::new(value, Unit::Dimensionless)
    }

    pub fn dimension(&self) -> Dimension {
        self.unit.dimension()
    }

    /// Value expressed in `unit`; errors if the dimensions differ.
    pub fn value_in(&self, unit: Unit) -> Result<f64> {
        if self.unit.dimension() != unit.dimension() {
            return Err(Error::DimensionMismatch {
                expected: unit.dimension(),
                got: self.unit.dimension(),
            });
        }
        Ok(self.value * self.unit.to_canonical() / unit.to_canonical())
    }

    pub fn to(&self, unit: Unit) -> Result<Quantity> {
        Ok(Quantity::new(self.value_in(unit)?, unit))
    }

    /// Sum of two quantities of the same dimension, in `self`'s unit.
    pub fn add(&self, other: Quantity) -> Result<Quantity> {
        Ok(Quantity::new(self.value + other.value_in(self.unit)?, self.unit))
    }

    /// Difference of two quantities of the same dimension, in `self`'s unit.
    pub fn sub(&self, other: Quantity) -> Result<Quantity> {
        Ok(Quantity::new(self.value - other.value_in(self.unit)?, self.unit))
    }

    /// Scale by a dimensionless factor.
    pub fn scaled(&self, factor: f64) -> Quantity {
        Quantity::new(self.value * factor, self.unit)
    }

    /// Dimensionless ratio of two quantities of the same dimension.
    pub fn ratio(&self, other: Quantity) -> Result<f64> {
        let denom = other.value_in(self.unit)?;
        Ok(self.value / denom)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unit == Unit::Dimensionless {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{} {}", self.value, self.unit.symbol())
        }
    }
}

/// E = hν.
pub fn energy_from_frequency(nu: Quantity) -> Result<Quantity> {
    let ghz = nu.value_in(Unit::GigaHz)?;
    Ok(Quantity::uev(H_UEV_PER_GHZ * ghz))
}

/// ν = E/h.
pub fn frequency_from_energy(e: Quantity) -> Result<Quantity> {
    let uev = e.value_in(Unit::MicroEv)?;
    Ok(Quantity::ghz(uev / H_UEV_PER_GHZ))
}

/// Γ = ħ/τ.
pub fn energy_from_lifetime(tau: Quantity) -> Result<Quantity> {
    let ns = tau.value_in(Unit::Nanosecond)?;
    if ns <= 0.0 {
        return Err(Error::NonPositive { name: "lifetime", value: ns });
    }
    Ok(Quantity::uev(HBAR_UEV_NS / ns))
}

/// τ = ħ/Γ.
pub fn lifetime_from_energy(gamma: Quantity) -> Result<Quantity> {
    let uev = gamma.value_in(Unit::MicroEv)?;
    if uev <= 0.0 {
        return Err(Error::NonPositive { name: "linewidth", value: uev });
    }
    Ok(Quantity::ns(HBAR_UEV_NS / uev))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn energy_unit_conversion() {
        let e = Quantity::mev(1.07);
        assert_relative_eq!(e.value_in(Unit::MicroEv).unwrap(), 1070.0);
        assert_relative_eq!(Quantity::uev(95.0).value_in(Unit::MilliEv).unwrap(), 0.095);
    }

    #[test]
    fn time_unit_conversion() {
        assert_relative_eq!(Quantity::ps(60.0).value_in(Unit::Nanosecond).unwrap(), 0.06);
        assert_relative_eq!(Quantity::fs(340.0).value_in(Unit::Nanosecond).unwrap(), 3.4e-4);
    }

    #[test]
    fn incompatible_units_error() {
        let err = Quantity::ns(1.0).value_in(Unit::MicroEv).unwrap_err();
        match err {
            Error::DimensionMismatch { expected, got } => {
                assert_eq!(expected, Dimension::Energy);
                assert_eq!(got, Dimension::Time);
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert!(Quantity::mev(1.0).add(Quantity::tesla(1.0)).is_err());
        assert!(Quantity::nm(1.0).sub(Quantity::kelvin(1.0)).is_err());
    }

    #[test]
    fn add_converts_to_lhs_unit() {
        let s = Quantity::mev(1.0).add(Quantity::uev(500.0)).unwrap();
        assert_eq!(s.unit, Unit::MilliEv);
        assert_relative_eq!(s.value, 1.5);
    }

    #[test]
    fn planck_relation_round_trip() {
        // 23 GHz drive photon sits at ~95 μeV
        let e = energy_from_frequency(Quantity::ghz(23.0)).unwrap();
        assert_relative_eq!(e.value, 95.120341, epsilon = 1e-6);
        let nu = frequency_from_energy(e).unwrap();
        assert_relative_eq!(nu.value, 23.0, epsilon = 1e-12);
    }

    #[test]
    fn lifetime_linewidth_round_trip() {
        let gamma = energy_from_lifetime(Quantity::ns(HBAR_UEV_NS)).unwrap();
        assert_relative_eq!(gamma.value, 1.0, epsilon = 1e-12);
        let tau = lifetime_from_energy(gamma).unwrap();
        assert_relative_eq!(tau.value_in(Unit::Nanosecond).unwrap(), HBAR_UEV_NS);
        assert!(energy_from_lifetime(Quantity::ns(0.0)).is_err());
    }
}
