//! Exact idealized semantics of globally applied conditional rotations.
//!
//! A rule targets every cell of one type and rotates it iff its left/right
//! neighbors hold the required spin values. All factors of the resulting
//! product have disjoint rotation supports (same-type cells are never
//! adjacent) and diagonal condition projectors, so they commute and the
//! global unitary is well defined with conditions read synchronously.
//!
//! This module favors a transparent, brute-force-auditable construction
//! over speed; it is the correctness reference for the pulse engine.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::chain::{CellType, Pattern};
use crate::device::BoundarySpins;
use crate::error::{Error, Result};
use crate::state::{ChainState, Representation};

/// Virtual neighbor values used when a rule's conditions are evaluated at
/// the chain ends; shares its shape with the device-level default.
pub type BoundaryPolicy = BoundarySpins;

/// Neighbor condition of a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    Zero,
    One,
    Any,
}

impl Condition {
    pub fn matches(self, bit: u8) -> bool {
        match self {
            Condition::Zero => bit == 0,
            Condition::One => bit == 1,
            Condition::Any => true,
        }
    }
}

/// What a matched cell does: an equatorial rotation by `theta` about the
/// axis cos φ·x + sin φ·y, or a pure z rotation. Exactly one variant is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RuleAction {
    Equatorial { theta: f64, axis_phase: f64 },
    ZRotation { angle: f64 },
}

/// One global conditional-rotation rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateRule {
    pub target: CellType,
    pub left: Condition,
    pub right: Condition,
    pub action: RuleAction,
}

impl GateRule {
    pub fn conditional_x(target: CellType, left: Condition, right: Condition, theta: f64) -> Self {
        GateRule { target, left, right, action: RuleAction::Equatorial { theta, axis_phase: 0.0 } }
    }

    pub fn conditional_z(target: CellType, left: Condition, right: Condition, angle: f64) -> Self {
        GateRule { target, left, right, action: RuleAction::ZRotation { angle } }
    }

    /// The 2×2 applied to a matched cell, in the (down, up) index basis.
    pub fn rotation_matrix(&self) -> DMatrix<C64> {
        match self.action {
            RuleAction::Equatorial { theta, axis_phase } => {
                let (s, c) = (theta / 2.0).sin_cos();
                let e_minus = C64::from_polar(1.0, -axis_phase);
                let e_plus = C64::from_polar(1.0, axis_phase);
                DMatrix::from_row_slice(
                    2,
                    2,
                    &[
                        C64::new(c, 0.0),
                        C64::new(0.0, -s) * e_minus,
                        C64::new(0.0, -s) * e_plus,
                        C64::new(c, 0.0),
                    ],
                )
            }
            RuleAction::ZRotation { angle } => {
                // σ_z|down⟩ = −|down⟩, so Rz(ζ) = diag(e^{+iζ/2}, e^{−iζ/2})
                DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
                    C64::from_polar(1.0, angle / 2.0),
                    C64::from_polar(1.0, -angle / 2.0),
                ]))
            }
        }
    }
}

/// Neighbor bit values of `site` in basis index `index`, with virtual values
/// at the chain ends.
pub fn neighbor_bits(
    pattern: &Pattern,
    boundary: BoundarySpins,
    index: usize,
    site: usize,
) -> (u8, u8) {
    let n = pattern.len();
    let left = if site == 0 { boundary.left } else { ((index >> (site - 1)) & 1) as u8 };
    let right =
        if site + 1 >= n { boundary.right } else { ((index >> (site + 1)) & 1) as u8 };
    (left, right)
}

/// Whether the rule's neighbor conditions hold for `site` in basis `index`.
pub fn conditions_match(
    pattern: &Pattern,
    rule: &GateRule,
    boundary: BoundarySpins,
    index: usize,
    site: usize,
) -> bool {
    let (l, r) = neighbor_bits(pattern, boundary, index, site);
    rule.left.matches(l) && rule.right.matches(r)
}

/// The full 2^N × 2^N unitary of one rule: the commuting product over target
/// sites of [P_match ⊗ R + (1 − P_match) ⊗ 1].
pub fn conditional_unitary(
    pattern: &Pattern,
    rule: &GateRule,
    boundary: BoundarySpins,
) -> DMatrix<C64> {
    let n = pattern.len();
    let dim = 1usize << n;
    let r = rule.rotation_matrix();
    let mut u = DMatrix::<C64>::identity(dim, dim);
    for site in pattern.sites_of_type(rule.target) {
        let mut factor = DMatrix::<C64>::zeros(dim, dim);
        let mask = 1usize << site;
        for col in 0..dim {
            if !conditions_match(pattern, rule, boundary, col, site) {
                factor[(col, col)] = C64::new(1.0, 0.0);
                continue;
            }
            let bit = (col >> site) & 1;
            let flipped = col ^ mask;
            factor[(col, col)] += r[(bit, bit)];
            factor[(flipped, col)] += r[(bit ^ 1, bit)];
        }
        u = factor * u;
    }
    u
}

/// Apply a rule to a state without forming the full matrix. Factors are
/// applied site by site; this equals the simultaneous product because
/// rotation supports never overlap another factor's condition bits.
pub fn apply_rule(state: &mut ChainState, rule: &GateRule, boundary: BoundarySpins) -> Result<()> {
    let pattern = state.pattern().clone();
    let r = rule.rotation_matrix();
    match state_repr_mut(state) {
        StateMut::Pure(v) => {
            for site in pattern.sites_of_type(rule.target) {
                apply_factor(v, &pattern, rule, &r, boundary, site);
            }
        }
        StateMut::Density(_) => {
            let u = conditional_unitary(&pattern, rule, boundary);
            let rho = state.density().expect("density").clone();
            let updated = &u * rho * u.adjoint();
            if let StateMut::Density(m) = state_repr_mut(state) {
                *m = updated;
            }
        }
    }
    Ok(())
}

enum StateMut<'a> {
    Pure(&'a mut [C64]),
    Density(&'a mut DMatrix<C64>),
}

fn state_repr_mut(state: &mut ChainState) -> StateMut<'_> {
    // ChainState does not expose mutable internals publicly; route through a
    // crate-internal accessor.
    match state.repr_mut() {
        Representation::Pure(v) => StateMut::Pure(v.as_mut_slice()),
        Representation::Density(m) => StateMut::Density(m),
    }
}

fn apply_factor(
    v: &mut [C64],
    pattern: &Pattern,
    rule: &GateRule,
    r: &DMatrix<C64>,
    boundary: BoundarySpins,
    site: usize,
) {
    let mask = 1usize << site;
    for i in 0..v.len() {
        if i & mask != 0 {
            continue; // visit each (down, up) pair once, from the down index
        }
        if !conditions_match(pattern, rule, boundary, i, site) {
            continue;
        }
        let j = i | mask;
        let a = v[i];
        let b = v[j];
        v[i] = r[(0, 0)] * a + r[(0, 1)] * b;
        v[j] = r[(1, 0)] * a + r[(1, 1)] * b;
    }
}

/// Synchronous classical cellular-automaton step: flips exactly the target
/// bits whose neighbor conditions match, conditions read on the input.
/// Requires an equatorial π rule.
pub fn classical_automaton_step(
    pattern: &Pattern,
    bits: &str,
    rule: &GateRule,
    boundary: BoundarySpins,
) -> Result<String> {
    match rule.action {
        RuleAction::Equatorial { theta, .. }
            if (theta - std::f64::consts::PI).abs() < 1e-12 => {}
        _ => {
            return Err(Error::InvalidRule(
                "classical step requires an equatorial π rule".into(),
            ))
        }
    }
    let n = pattern.len();
    if bits.len() != n || !bits.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::BasisMismatch { basis: bits.to_string(), len: n });
    }
    let mut index = 0usize;
    for (site, c) in bits.chars().enumerate() {
        if c == '1' {
            index |= 1 << site;
        }
    }
    let mut out = index;
    for site in pattern.sites_of_type(rule.target) {
        if conditions_match(pattern, rule, boundary, index, site) {
            out ^= 1 << site;
        }
    }
    Ok((0..n).map(|k| if (out >> k) & 1 == 1 { '1' } else { '0' }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    use crate::state::Observable;

    fn b00() -> BoundarySpins {
        BoundarySpins::default()
    }

    /// Independent brute-force oracle: construct the rule unitary basis
    /// state by basis state from first principles, without the
    /// product-of-factors machinery.
    fn brute_force_unitary(
        pattern: &Pattern,
        rule: &GateRule,
        boundary: BoundarySpins,
    ) -> DMatrix<C64> {
        let n = pattern.len();
        let dim = 1usize << n;
        let r = rule.rotation_matrix();
        let mut u = DMatrix::<C64>::zeros(dim, dim);
        for col in 0..dim {
            // amplitude map: each matched site contributes a 2×2, unmatched
            // sites the identity; expand the tensor product over subsets
            let matched: Vec<usize> = pattern
                .sites_of_type(rule.target)
                .into_iter()
                .filter(|&s| conditions_match(pattern, rule, boundary, col, s))
                .collect();
            let m = matched.len();
            for subset in 0usize..(1 << m) {
                let mut row = col;
                let mut amp = C64::new(1.0, 0.0);
                for (bit_pos, site) in matched.iter().enumerate() {
                    let in_bit = (col >> site) & 1;
                    let flip = (subset >> bit_pos) & 1 == 1;
                    let out_bit = if flip { in_bit ^ 1 } else { in_bit };
                    amp *= r[(out_bit, in_bit)];
                    if flip {
                        row ^= 1 << site;
                    }
                }
                u[(row, col)] += amp;
            }
        }
        u
    }

    #[test]
    fn worked_example_flips_and_phase() {
        // ABCABC, input 010110: A₀ (left = virtual 0, right B₁ = 1) and
        // A₃ (left C₂ = 0, right B₄ = 1) flip; two −i factors give −1.
        let rule = GateRule::conditional_x(CellType::A, Condition::Zero, Condition::One, PI);
        let mut st = ChainState::new_chain("ABCABC", "010110").unwrap();
        apply_rule(&mut st, &rule, b00()).unwrap();
        let expected: usize = 0b010011; // bits of "110010": sites 0,1,4 set
        let amps = st.amplitudes().unwrap();
        assert_relative_eq!(amps[expected].re, -1.0, epsilon = 1e-12);
        assert_relative_eq!(amps[expected].im, 0.0, epsilon = 1e-12);
        let total: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn classical_step_matches_worked_example() {
        let pattern = Pattern::parse("ABCABC").unwrap();
        let rule = GateRule::conditional_x(CellType::A, Condition::Zero, Condition::One, PI);
        let out = classical_automaton_step(&pattern, "010110", &rule, b00()).unwrap();
        assert_eq!(out, "110010");

        let rule_b = GateRule::conditional_x(CellType::B, Condition::One, Condition::One, PI);
        let out = classical_automaton_step(&pattern, "111111", &rule_b, b00()).unwrap();
        assert_eq!(out, "101101");

        // empty match set: identity
        let rule_none = GateRule::conditional_x(CellType::A, Condition::One, Condition::One, PI);
        let out = classical_automaton_step(&pattern, "000000", &rule_none, b00()).unwrap();
        assert_eq!(out, "000000");
    }

    #[test]
    fn unmatched_rule_is_identity() {
        let rule = GateRule::conditional_x(CellType::A, Condition::One, Condition::Any, PI);
        let mut st = ChainState::new_chain("ABCABC", "000000").unwrap();
        let before = st.clone();
        apply_rule(&mut st, &rule, b00()).unwrap();
        assert_eq!(st, before);

        // absent target type: no-op, not an error
        let pattern_ab = Pattern::parse("AB").unwrap();
        let rule_d = GateRule::conditional_x(CellType::D, Condition::Any, Condition::Any, PI);
        let u = conditional_unitary(&pattern_ab, &rule_d, b00());
        assert!((u - DMatrix::<C64>::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn matches_brute_force_on_random_rules() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let patterns = ["ABCABC", "ABAB", "CABCAB", "ABCD", "ABCABCD"];
        let conds = [Condition::Zero, Condition::One, Condition::Any];
        for _ in 0..40 {
            let pattern = Pattern::parse(patterns[rng.random_range(0..patterns.len())]).unwrap();
            let present = pattern.types_present();
            let target = present[rng.random_range(0..present.len())];
            let rule = GateRule {
                target,
                left: conds[rng.random_range(0..3)],
                right: conds[rng.random_range(0..3)],
                action: if rng.random_bool(0.7) {
                    RuleAction::Equatorial {
                        theta: rng.random_range(0.0..std::f64::consts::TAU),
                        axis_phase: rng.random_range(0.0..std::f64::consts::TAU),
                    }
                } else {
                    RuleAction::ZRotation { angle: rng.random_range(0.0..std::f64::consts::TAU) }
                },
            };
            let boundary = BoundarySpins::new(rng.random_range(0..2), rng.random_range(0..2))
                .unwrap();
            let u = conditional_unitary(&pattern, &rule, boundary);
            let bf = brute_force_unitary(&pattern, &rule, boundary);
            assert!((&u - &bf).norm() < 1e-10, "construction mismatch for {rule:?}");
            let dim = u.nrows();
            let dev = (u.adjoint() * &u - DMatrix::<C64>::identity(dim, dim)).norm();
            assert!(dev < 1e-10, "not unitary: {dev}");
        }
    }

    #[test]
    fn quantum_matches_classical_on_all_basis_states() {
        let pattern = Pattern::parse("ABCABCD").unwrap();
        let rules = [
            GateRule::conditional_x(CellType::A, Condition::Zero, Condition::One, PI),
            GateRule::conditional_x(CellType::B, Condition::One, Condition::Any, PI),
            GateRule::conditional_x(CellType::C, Condition::Any, Condition::Zero, PI),
            GateRule::conditional_x(CellType::D, Condition::One, Condition::Any, PI),
        ];
        for rule in rules {
            let u = conditional_unitary(&pattern, &rule, b00());
            for i in 0..(1usize << 7) {
                let bits: String =
                    (0..7).map(|k| if (i >> k) & 1 == 1 { '1' } else { '0' }).collect();
                let expected = classical_automaton_step(&pattern, &bits, &rule, b00()).unwrap();
                let mut out_index = 0usize;
                for (site, c) in expected.chars().enumerate() {
                    if c == '1' {
                        out_index |= 1 << site;
                    }
                }
                // column i must be a pure phase on out_index
                let col = u.column(i);
                assert_relative_eq!(col[out_index].norm(), 1.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn factor_order_does_not_matter() {
        // permuting the site order changes the product by < 1e-10
        let pattern = Pattern::parse("ABCABC").unwrap();
        let rule = GateRule::conditional_x(CellType::A, Condition::Any, Condition::One, 1.3);
        let dim = 1usize << 6;
        let r = rule.rotation_matrix();
        let build = |sites: &[usize]| {
            let mut u = DMatrix::<C64>::identity(dim, dim);
            for &site in sites {
                let mut factor = DMatrix::<C64>::zeros(dim, dim);
                for col in 0..dim {
                    if !conditions_match(&pattern, &rule, b00(), col, site) {
                        factor[(col, col)] = C64::new(1.0, 0.0);
                        continue;
                    }
                    let bit = (col >> site) & 1;
                    factor[(col, col)] += r[(bit, bit)];
                    factor[(col ^ (1 << site), col)] += r[(bit ^ 1, bit)];
                }
                u = factor * u;
            }
            u
        };
        let forward = build(&[0, 3]);
        let reverse = build(&[3, 0]);
        assert!((forward - reverse).norm() < 1e-10);
    }

    #[test]
    fn any_condition_decomposes() {
        let pattern = Pattern::parse("CABCAB").unwrap();
        let theta = 0.9;
        let any_rule = GateRule::conditional_x(CellType::A, Condition::Any, Condition::One, theta);
        let zero_rule =
            GateRule::conditional_x(CellType::A, Condition::Zero, Condition::One, theta);
        let one_rule = GateRule::conditional_x(CellType::A, Condition::One, Condition::One, theta);
        let u_any = conditional_unitary(&pattern, &any_rule, b00());
        let u_comp = conditional_unitary(&pattern, &one_rule, b00())
            * conditional_unitary(&pattern, &zero_rule, b00());
        assert!((u_any - u_comp).norm() < 1e-10);
    }

    #[test]
    fn two_pi_rotation_gives_minus_one_on_matched_subspace() {
        // spinor 2π rotation: R(2π) = −1; verified against the matrix
        // exponential of the generator
        let pattern = Pattern::parse("AB").unwrap();
        let rule = GateRule::conditional_x(CellType::A, Condition::Any, Condition::One, 2.0 * PI);
        let u = conditional_unitary(&pattern, &rule, b00());
        // basis |11⟩ (index 3) is matched: picks up −1; |01⟩ index 1 matched too
        assert_relative_eq!(u[(3, 3)].re, -1.0, epsilon = 1e-12);
        assert_relative_eq!(u[(0, 0)].re, 1.0, epsilon = 1e-12);

        // exp(−iπ(cosφX+sinφY)) via series, compared to rotation_matrix
        let phi = 0.7;
        let rule = GateRule {
            target: CellType::A,
            left: Condition::Any,
            right: Condition::Any,
            action: RuleAction::Equatorial { theta: 2.0 * PI, axis_phase: phi },
        };
        let gen = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.0, 0.0),
                C64::from_polar(1.0, -phi),
                C64::from_polar(1.0, phi),
                C64::new(0.0, 0.0),
            ],
        );
        let mut expm = DMatrix::<C64>::identity(2, 2);
        let a = gen.map(|x| x * C64::new(0.0, -PI));
        let mut term = DMatrix::<C64>::identity(2, 2);
        for k in 1..40 {
            term = (&term * &a).map(|x| x / C64::new(k as f64, 0.0));
            expm += &term;
        }
        assert!((rule.rotation_matrix() - expm).norm() < 1e-12);
    }

    #[test]
    fn rule_acts_linearly_on_superpositions() {
        let pattern = "ABCABC";
        let rule = GateRule::conditional_x(CellType::B, Condition::One, Condition::Zero, PI);
        let s1 = "100000";
        let s2 = "110100";
        let mut a = ChainState::new_chain(pattern, s1).unwrap();
        let mut b = ChainState::new_chain(pattern, s2).unwrap();
        let mut sup = {
            let va = a.amplitudes().unwrap();
            let vb = b.amplitudes().unwrap();
            let v = (va + vb).map(|c| c / C64::new(2f64.sqrt(), 0.0));
            ChainState::from_amplitudes(Pattern::parse(pattern).unwrap(), v).unwrap()
        };
        apply_rule(&mut a, &rule, b00()).unwrap();
        apply_rule(&mut b, &rule, b00()).unwrap();
        apply_rule(&mut sup, &rule, b00()).unwrap();
        let expect = (a.amplitudes().unwrap() + b.amplitudes().unwrap())
            .map(|c| c / C64::new(2f64.sqrt(), 0.0));
        assert!((sup.amplitudes().unwrap() - expect).norm() < 1e-12);
    }

    #[test]
    fn pi_rule_squares_to_phase_on_static_match_sets() {
        // A targets in ABCABC never neighbor other A targets, so flipping
        // them does not change any condition bit: π twice returns the input
        // up to the spinor phase (−1) per matched site
        let rule = GateRule::conditional_x(CellType::A, Condition::Zero, Condition::One, PI);

        // two matched sites → (−1)² = +1
        let mut st = ChainState::new_chain("ABCABC", "010110").unwrap();
        let before = st.amplitudes().unwrap().clone();
        apply_rule(&mut st, &rule, b00()).unwrap();
        apply_rule(&mut st, &rule, b00()).unwrap();
        assert!((st.amplitudes().unwrap() - &before).norm() < 1e-12);

        // one matched site (A₀ only; A₃ fails its right condition) → global −1
        let mut st = ChainState::new_chain("ABCABC", "010000").unwrap();
        let before = st.amplitudes().unwrap().clone();
        apply_rule(&mut st, &rule, b00()).unwrap();
        apply_rule(&mut st, &rule, b00()).unwrap();
        assert!((st.amplitudes().unwrap() + &before).norm() < 1e-12, "expected global −1");
    }

    #[test]
    fn boundary_policy_changes_end_matching() {
        let pattern = Pattern::parse("ABC").unwrap();
        let rule = GateRule::conditional_x(CellType::A, Condition::One, Condition::Zero, PI);
        // with virtual left 0 the end A never matches
        let out =
            classical_automaton_step(&pattern, "000", &rule, BoundarySpins::new(0, 0).unwrap())
                .unwrap();
        assert_eq!(out, "000");
        // with virtual left 1 it does
        let out =
            classical_automaton_step(&pattern, "000", &rule, BoundarySpins::new(1, 0).unwrap())
                .unwrap();
        assert_eq!(out, "100");
    }

    #[test]
    fn z_rule_applies_conditional_phase() {
        let pattern = Pattern::parse("AB").unwrap();
        let rule = GateRule::conditional_z(CellType::B, Condition::One, Condition::Any, PI);
        let u = conditional_unitary(&pattern, &rule, b00());
        // site 0 = A (control), site 1 = B (target). Matched when A = 1.
        // |10⟩ index 1: B down → e^{+iπ/2} = i; |11⟩ index 3: B up → −i
        assert!((u[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((u[(2, 2)] - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((u[(1, 1)] - C64::new(0.0, 1.0)).norm() < 1e-12);
        assert!((u[(3, 3)] - C64::new(0.0, -1.0)).norm() < 1e-12);

        let z_without_angle = GateRule::conditional_z(CellType::B, Condition::Any, Condition::Any, 0.0);
        let u = conditional_unitary(&pattern, &z_without_angle, b00());
        assert!((u - DMatrix::<C64>::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn expectation_after_rule() {
        // sanity: π rule on B flips ⟨Z_B⟩ from −1 to +1 when matched
        let mut st = ChainState::new_chain("ABC", "100").unwrap();
        let rule = GateRule::conditional_x(CellType::B, Condition::One, Condition::Zero, PI);
        apply_rule(&mut st, &rule, b00()).unwrap();
        let z1 = st.expect(&Observable::single(3, 1, crate::state::PauliLabel::Z)).unwrap();
        assert_relative_eq!(z1, 1.0, epsilon = 1e-12);
    }
}
