//! Quantum state of a typed donor chain: pure amplitude vectors or density
//! matrices over the 2^N computational basis.
//!
//! Basis convention: site k is bit k of the basis index, with bit value 1
//! meaning spin up (logical '1') and 0 meaning spin down. Spin down maps to
//! σ_z eigenvalue −1, so σ_z in the single-site index basis is
//! diag(−1, +1) and optical pumping to all-'0' gives ⟨σ_z⟩ = −1 per site.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::chain::Pattern;
use crate::error::{Error, Result};

/// Maximum chain length for the pure-state representation.
pub const MAX_PURE_SITES: usize = 12;
/// Maximum chain length for the density-matrix representation.
pub const MAX_DENSITY_SITES: usize = 8;

pub const NORM_TOL: f64 = 1e-9;
pub const PSD_TOL: f64 = 1e-7;

/// Single-site Pauli operators in the bit-index basis (|0⟩ = down, |1⟩ = up).
pub mod pauli {
    use num_complex::Complex64 as C64;

    pub const I: [[C64; 2]; 2] =
        [[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]];
    pub const X: [[C64; 2]; 2] =
        [[C64::new(0.0, 0.0), C64::new(1.0, 0.0)], [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]];
    /// σ_y = [[0, −i], [i, 0]] in the (down, up) index basis, chosen so the
    /// relative phase φ of the up amplitude maps to Bloch azimuth +φ
    /// (x toward y). Note X·Y = −i·Z with the down-is-−1 Z below.
    pub const Y: [[C64; 2]; 2] =
        [[C64::new(0.0, 0.0), C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), C64::new(0.0, 0.0)]];
    /// σ_z with |0⟩ = spin down ↦ eigenvalue −1.
    pub const Z: [[C64; 2]; 2] =
        [[C64::new(-1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]];
}

/// Pure-state or density-matrix representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    Pure(DVector<C64>),
    Density(DMatrix<C64>),
}

/// State of a typed chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    pattern: Pattern,
    repr: Representation,
}

/// Site-local Pauli label per site.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observable {
    labels: Vec<PauliLabel>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliLabel {
    I,
    X,
    Y,
    Z,
}

impl Observable {
    /// Parse a Pauli string such as `"ZIIZ"`, one letter per site.
    pub fn parse(s: &str, n_sites: usize) -> Result<Self> {
        let labels: Vec<PauliLabel> = s
            .chars()
            .map(|c| match c {
                'I' => Ok(PauliLabel::I),
                'X' => Ok(PauliLabel::X),
                'Y' => Ok(PauliLabel::Y),
                'Z' => Ok(PauliLabel::Z),
                other => Err(Error::ObservableMismatch(format!("bad Pauli {other:?}"), n_sites)),
            })
            .collect::<Result<_>>()?;
        if labels.len() != n_sites {
            return Err(Error::ObservableMismatch(s.to_string(), n_sites));
        }
        Ok(Observable { labels })
    }

    /// Single-site Pauli, identity elsewhere.
    pub fn single(n_sites: usize, site: usize, p: PauliLabel) -> Self {
        let mut labels = vec![PauliLabel::I; n_sites];
        labels[site] = p;
        Observable { labels }
    }

    pub fn labels(&self) -> &[PauliLabel] {
        &self.labels
    }

    pub fn to_pauli_string(&self) -> String {
        self.labels
            .iter()
            .map(|l| match l {
                PauliLabel::I => 'I',
                PauliLabel::X => 'X',
                PauliLabel::Y => 'Y',
                PauliLabel::Z => 'Z',
            })
            .collect()
    }

    /// Action on a basis index: O|i⟩ = phase·|j⟩.
    fn basis_action(&self, index: usize) -> (usize, C64) {
        let mut target = index;
        let mut phase = C64::new(1.0, 0.0);
        for (site, label) in self.labels.iter().enumerate() {
            let bit = (index >> site) & 1;
            match label {
                PauliLabel::I => {}
                PauliLabel::X => target ^= 1 << site,
                PauliLabel::Y => {
                    target ^= 1 << site;
                    // ⟨1|σ_y|0⟩ = i, ⟨0|σ_y|1⟩ = −i in the down/up index basis
                    phase *= if bit == 0 { C64::new(0.0, 1.0) } else { C64::new(0.0, -1.0) };
                }
                PauliLabel::Z => {
                    phase *= C64::new(if bit == 0 { -1.0 } else { 1.0 }, 0.0);
                }
            }
        }
        (target, phase)
    }
}

impl ChainState {
    /// Computational basis state with the given bits; character k of
    /// `basis_string` is site k's value.
    pub fn new_chain(pattern: &str, basis_string: &str) -> Result<Self> {
        let pattern = Pattern::parse(pattern)?;
        Self::basis_state(pattern, basis_string)
    }

    pub fn basis_state(pattern: Pattern, basis_string: &str) -> Result<Self> {
        let n = pattern.len();
        if n > MAX_PURE_SITES {
            return Err(Error::ChainTooLong { sites: n, max: MAX_PURE_SITES, repr: "pure" });
        }
        if basis_string.len() != n || !basis_string.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::BasisMismatch { basis: basis_string.to_string(), len: n });
        }
        let mut index = 0usize;
        for (site, c) in basis_string.chars().enumerate() {
            if c == '1' {
                index |= 1 << site;
            }
        }
        let mut v = DVector::<C64>::zeros(1 << n);
        v[index] = C64::new(1.0, 0.0);
        Ok(ChainState { pattern, repr: Representation::Pure(v) })
    }

    /// Pure state from an amplitude vector (normalized on entry within 1e-9).
    pub fn from_amplitudes(pattern: Pattern, amps: DVector<C64>) -> Result<Self> {
        let n = pattern.len();
        if n > MAX_PURE_SITES {
            return Err(Error::ChainTooLong { sites: n, max: MAX_PURE_SITES, repr: "pure" });
        }
        if amps.len() != 1 << n {
            return Err(Error::NotNormalized(format!(
                "amplitude vector length {} != 2^{n}",
                amps.len()
            )));
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(format!("‖ψ‖ = {norm}")));
        }
        Ok(ChainState { pattern, repr: Representation::Pure(amps) })
    }

    pub fn from_density(pattern: Pattern, rho: DMatrix<C64>) -> Result<Self> {
        let n = pattern.len();
        if n > MAX_DENSITY_SITES {
            return Err(Error::ChainTooLong { sites: n, max: MAX_DENSITY_SITES, repr: "density" });
        }
        let dim = 1usize << n;
        if rho.nrows() != dim || rho.ncols() != dim {
            return Err(Error::NotNormalized(format!(
                "density matrix is {}×{}, expected {dim}×{dim}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        let state = ChainState { pattern, repr: Representation::Density(rho) };
        state.check_density()?;
        Ok(state)
    }

    /// Convert a pure state to its projector density matrix.
    pub fn to_density(&self) -> Result<ChainState> {
        match &self.repr {
            Representation::Pure(v) => {
                let n = self.pattern.len();
                if n > MAX_DENSITY_SITES {
                    return Err(Error::ChainTooLong {
                        sites: n,
                        max: MAX_DENSITY_SITES,
                        repr: "density",
                    });
                }
                let rho = v * v.adjoint();
                Ok(ChainState { pattern: self.pattern.clone(), repr: Representation::Density(rho) })
            }
            Representation::Density(_) => Ok(self.clone()),
        }
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn n_sites(&self) -> usize {
        self.pattern.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.pattern.len()
    }

    pub fn repr(&self) -> &Representation {
        &self.repr
    }

    pub(crate) fn repr_mut(&mut self) -> &mut Representation {
        &mut self.repr
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.repr, Representation::Pure(_))
    }

    pub fn amplitudes(&self) -> Option<&DVector<C64>> {
        match &self.repr {
            Representation::Pure(v) => Some(v),
            Representation::Density(_) => None,
        }
    }

    pub fn density(&self) -> Option<&DMatrix<C64>> {
        match &self.repr {
            Representation::Density(m) => Some(m),
            Representation::Pure(_) => None,
        }
    }

    /// ⟨O⟩; real within 1e-9 for Hermitian O (the residual imaginary part is
    /// dropped after a sanity check).
    pub fn expect(&self, obs: &Observable) -> Result<f64> {
        if obs.labels.len() != self.pattern.len() {
            return Err(Error::ObservableMismatch(obs.to_pauli_string(), self.pattern.len()));
        }
        let val: C64 = match &self.repr {
            Representation::Pure(v) => {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..v.len() {
                    if v[i] == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let (j, phase) = obs.basis_action(i);
                    acc += v[j].conj() * phase * v[i];
                }
                acc
            }
            Representation::Density(rho) => {
                // Tr(Oρ) = Σ_i ⟨i|Oρ|i⟩ = Σ_i phase_i·ρ[i, j_i]
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..rho.nrows() {
                    let (j, phase) = obs.basis_action(i);
                    acc += phase * rho[(i, j)];
                }
                acc
            }
        };
        if val.im.abs() > 1e-8 {
            return Err(Error::NotNormalized(format!(
                "expectation has imaginary part {}",
                val.im
            )));
        }
        Ok(val.re)
    }

    /// Apply a unitary given on `support_sites` (row/column bit k of U is
    /// `support_sites[k]`). Errors if U is not unitary within 1e-9.
    pub fn apply_unitary(&mut self, u: &DMatrix<C64>, support_sites: &[usize]) -> Result<()> {
        let k = support_sites.len();
        let dim = 1usize << k;
        if u.nrows() != dim || u.ncols() != dim {
            return Err(Error::NotUnitary { deviation: f64::INFINITY });
        }
        let dev = (u.adjoint() * u - DMatrix::<C64>::identity(dim, dim)).norm();
        if dev > NORM_TOL * (dim as f64).sqrt() {
            return Err(Error::NotUnitary { deviation: dev });
        }
        for (i, s) in support_sites.iter().enumerate() {
            if *s >= self.pattern.len() || support_sites[..i].contains(s) {
                return Err(Error::InvalidRule(format!("bad support sites {support_sites:?}")));
            }
        }
        match &mut self.repr {
            Representation::Pure(v) => apply_on_support(v.as_mut_slice(), u, support_sites),
            Representation::Density(rho) => {
                let full = embed_unitary(u, support_sites, self.pattern.len());
                *rho = &full * &*rho * full.adjoint();
            }
        }
        Ok(())
    }

    /// Apply a Kraus channel (density representation only). The set must be
    /// trace preserving within 1e-9.
    pub fn apply_channel(&mut self, kraus: &[DMatrix<C64>], support_sites: &[usize]) -> Result<()> {
        let k = support_sites.len();
        let dim = 1usize << k;
        let mut completeness = DMatrix::<C64>::zeros(dim, dim);
        for op in kraus {
            if op.nrows() != dim || op.ncols() != dim {
                return Err(Error::NotTracePreserving { deviation: f64::INFINITY });
            }
            completeness += op.adjoint() * op;
        }
        let dev = (completeness - DMatrix::<C64>::identity(dim, dim)).norm();
        if dev > NORM_TOL * (dim as f64).sqrt() {
            return Err(Error::NotTracePreserving { deviation: dev });
        }
        if self.is_pure() {
            *self = self.to_density()?;
        }
        let n = self.pattern.len();
        let rho = match &mut self.repr {
            Representation::Density(rho) => rho,
            Representation::Pure(_) => unreachable!(),
        };
        let mut out = DMatrix::<C64>::zeros(rho.nrows(), rho.ncols());
        for op in kraus {
            let full = embed_unitary(op, support_sites, n);
            out += &full * &*rho * full.adjoint();
        }
        *rho = out;
        Ok(())
    }

    /// Norm (pure) or trace (density), for conservation checks.
    pub fn weight(&self) -> f64 {
        match &self.repr {
            Representation::Pure(v) => v.norm(),
            Representation::Density(rho) => {
                rho.diagonal().iter().map(|c| c.re).sum::<f64>()
            }
        }
    }

    /// Validate the representation invariants (norm / Hermiticity / trace /
    /// positive semidefiniteness).
    pub fn validate(&self) -> Result<()> {
        match &self.repr {
            Representation::Pure(v) => {
                let norm = v.norm();
                if (norm - 1.0).abs() > NORM_TOL {
                    return Err(Error::NotNormalized(format!("‖ψ‖ = {norm}")));
                }
            }
            Representation::Density(_) => self.check_density()?,
        }
        Ok(())
    }

    fn check_density(&self) -> Result<()> {
        let rho = self.density().expect("density representation");
        let herm_dev = (rho - rho.adjoint()).norm();
        if herm_dev > NORM_TOL * (rho.nrows() as f64) {
            return Err(Error::NotNormalized(format!("non-Hermitian by {herm_dev:.3e}")));
        }
        let trace: f64 = rho.diagonal().iter().map(|c| c.re).sum();
        if (trace - 1.0).abs() > NORM_TOL * (rho.nrows() as f64).sqrt() {
            return Err(Error::NotNormalized(format!("trace = {trace}")));
        }
        let herm = (rho + rho.adjoint()).scale(0.5);
        let eigs = herm.symmetric_eigen().eigenvalues;
        let min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(Error::NotNormalized(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    /// Amplitudes as [re, im] pairs (pure) or the flattened density matrix,
    /// for debugging and golden tests.
    pub fn dump_json(&self) -> serde_json::Value {
        match &self.repr {
            Representation::Pure(v) => serde_json::json!({
                "pattern": self.pattern.to_string(),
                "kind": "pure",
                "amplitudes": v.iter().map(|c| vec![c.re, c.im]).collect::<Vec<_>>(),
            }),
            Representation::Density(rho) => serde_json::json!({
                "pattern": self.pattern.to_string(),
                "kind": "density",
                "rows": rho.row_iter().map(|r| {
                    r.iter().map(|c| vec![c.re, c.im]).collect::<Vec<_>>()
                }).collect::<Vec<_>>(),
            }),
        }
    }
}

/// Apply a small unitary on the given support bits of a full state vector.
pub fn apply_on_support(state: &mut [C64], u: &DMatrix<C64>, support: &[usize]) {
    let k = support.len();
    let sub = 1usize << k;
    let n_total = state.len();
    let masks: Vec<usize> = support.iter().map(|s| 1usize << s).collect();
    let support_mask: usize = masks.iter().sum();
    let mut local = vec![C64::new(0.0, 0.0); sub];
    // iterate over all assignments of the non-support bits
    let mut base = 0usize;
    loop {
        // gather
        for (li, slot) in local.iter_mut().enumerate() {
            let mut idx = base;
            for (bit, mask) in masks.iter().enumerate() {
                if (li >> bit) & 1 == 1 {
                    idx |= mask;
                }
            }
            *slot = state[idx];
        }
        // scatter u·local
        for (row, _) in local.iter().enumerate() {
            let mut idx = base;
            for (bit, mask) in masks.iter().enumerate() {
                if (row >> bit) & 1 == 1 {
                    idx |= mask;
                }
            }
            let mut acc = C64::new(0.0, 0.0);
            for (col, amp) in local.iter().enumerate() {
                acc += u[(row, col)] * amp;
            }
            state[idx] = acc;
        }
        // next assignment of non-support bits
        base = ((base | support_mask) + 1) & !support_mask;
        if base >= n_total {
            break;
        }
    }
}

/// Embed a k-site operator into the full 2^N space.
pub fn embed_unitary(u: &DMatrix<C64>, support: &[usize], n_sites: usize) -> DMatrix<C64> {
    let dim = 1usize << n_sites;
    let k = support.len();
    let sub = 1usize << k;
    let mut full = DMatrix::<C64>::zeros(dim, dim);
    for col in 0..dim {
        let mut lc = 0usize;
        for (bit, s) in support.iter().enumerate() {
            lc |= ((col >> s) & 1) << bit;
        }
        for lr in 0..sub {
            let entry = u[(lr, lc)];
            if entry == C64::new(0.0, 0.0) {
                continue;
            }
            let mut row = col;
            for (bit, s) in support.iter().enumerate() {
                let want = (lr >> bit) & 1;
                row = (row & !(1 << s)) | (want << s);
            }
            full[(row, col)] += entry;
        }
    }
    full
}

/// Dense matrix of a Pauli-string observable (test and tooling helper).
pub fn observable_matrix(obs: &Observable) -> DMatrix<C64> {
    let n = obs.labels().len();
    let dim = 1usize << n;
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for i in 0..dim {
        let (j, phase) = obs.basis_action(i);
        m[(j, i)] += phase;
    }
    m
}
