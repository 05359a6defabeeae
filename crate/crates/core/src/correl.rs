//! Two-point Pauli correlators, collective spin moments and the static
//! structure factor `S^ab(k) = sum_{i<j} e^{ik(r_j - r_i)} <s_i^a s_j^b>`.
//!
//! Spin operators are bare Pauli matrices (no factor 1/2). Site indices are
//! 0-based throughout.

use alloc::vec::Vec;

use crate::error::{input_err, Error, Result};
use crate::pauli::{PauliAxis, PauliString};
use crate::qstate::{QubitState, StateRef};
use crate::C64;

const IMAG_RESIDUE_TOL: f64 = 1e-10;

/// Positions of the sites in units of the lattice spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteLayout {
    positions: Vec<f64>,
}

impl SiteLayout {
    /// `r_i = i`, unit spacing.
    pub fn uniform(n_sites: usize) -> Self {
        SiteLayout {
            positions: (0..n_sites).map(|i| i as f64).collect(),
        }
    }

    pub fn new(positions: Vec<f64>) -> Result<Self> {
        if positions.iter().any(|r| !r.is_finite()) {
            return Err(input_err!("site positions must be finite"));
        }
        if positions.windows(2).any(|w| w[1] <= w[0]) {
            return Err(input_err!("site positions must be strictly increasing"));
        }
        Ok(SiteLayout { positions })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    /// `m_ij = r_j - r_i`
    pub fn separation(&self, i: usize, j: usize) -> f64 {
        self.positions[j] - self.positions[i]
    }
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    if i >= j {
        return Err(input_err!("site pair requires i < j, got ({i}, {j})"));
    }
    if j >= n {
        return Err(input_err!("site {j} out of range for {n} qubits"));
    }
    Ok(())
}

pub(crate) fn real_part(value: C64, what: &str) -> Result<f64> {
    if value.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::Check(alloc::format!(
            "{what} has imaginary residue {}",
            value.im
        )));
    }
    Ok(value.re)
}

/// `<sigma_i^a sigma_j^b>` for `i < j`.
pub fn two_point<S: QubitState + ?Sized>(
    state: &S,
    i: usize,
    j: usize,
    a: PauliAxis,
    b: PauliAxis,
) -> Result<f64> {
    let n = state.n_qubits();
    check_pair(n, i, j)?;
    let value = state.pauli_expectation(&PauliString::pair(n, i, a, j, b));
    real_part(value, "two-point correlator")
}

/// Nonzero entries of column `basis` of `J_a = 1/2 sum_k sigma_k^a`.
fn collective_column(n: usize, basis: usize, axis: PauliAxis, out: &mut Vec<(usize, C64)>) {
    out.clear();
    for site in 0..n {
        let (t, ph) = PauliString::single(n, site, axis).act(basis);
        match out.iter_mut().find(|(idx, _)| *idx == t) {
            Some(entry) => entry.1 += ph * 0.5,
            None => out.push((t, ph * 0.5)),
        }
    }
}

/// `<J_a^2>` computed from `J_a` itself, independent of the pair sums.
pub fn collective_spin_sq<S: QubitState + ?Sized>(state: &S, axis: PauliAxis) -> f64 {
    let n = state.n_qubits();
    let mut column = Vec::with_capacity(n);
    match state.state_ref() {
        StateRef::Pure(s) => {
            // ||J psi||^2
            let mut image = alloc::vec![C64::new(0.0, 0.0); s.dim()];
            for (b, &amp) in s.amplitudes().iter().enumerate() {
                collective_column(n, b, axis, &mut column);
                for &(t, w) in &column {
                    image[t] += w * amp;
                }
            }
            image.iter().map(|x| x.norm_sqr()).sum()
        }
        StateRef::Mixed(m) => {
            // Tr(J rho J) = sum_b (J e_b)^dagger rho (J e_b)
            let rho = m.entries();
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..m.dim() {
                collective_column(n, b, axis, &mut column);
                for &(r, wr) in &column {
                    for &(c, wc) in &column {
                        acc += wr.conj() * rho[(r, c)] * wc;
                    }
                }
            }
            acc.re
        }
    }
}

/// Static structure factor for the axis pair `(a, b)` at wave vector `k`.
pub fn structure_factor<S: QubitState + ?Sized>(
    state: &S,
    k: f64,
    a: PauliAxis,
    b: PauliAxis,
    layout: &SiteLayout,
) -> Result<C64> {
    let n = state.n_qubits();
    if layout.len() != n {
        return Err(input_err!(
            "layout has {} sites but the state has {n} qubits",
            layout.len()
        ));
    }
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            let phase = C64::from_polar(1.0, k * layout.separation(i, j));
            acc += phase * two_point(state, i, j, a, b)?;
        }
    }
    Ok(acc)
}

/// Both sides of `S^aa(0) = (4 J_a^2 - N)/2`, evaluated by separate routes.
pub fn verify_collective_identity<S: QubitState + ?Sized>(
    state: &S,
    axis: PauliAxis,
) -> Result<(f64, f64)> {
    let n = state.n_qubits();
    let lhs = structure_factor(state, 0.0, axis, axis, &SiteLayout::uniform(n))?.re;
    let rhs = (4.0 * collective_spin_sq(state, axis) - n as f64) / 2.0;
    Ok((lhs, rhs))
}

/// One row of a correlator table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorEntry {
    pub i: usize,
    pub j: usize,
    pub a: PauliAxis,
    pub b: PauliAxis,
    pub value: f64,
}

/// Every `<sigma_i^a sigma_j^b>` with `i < j`, ordered by `(i, j, a, b)`.
pub fn correlator_table<S: QubitState + ?Sized>(state: &S) -> Result<Vec<CorrelatorEntry>> {
    let n = state.n_qubits();
    let mut rows = Vec::with_capacity(n * n * 9 / 2);
    for i in 0..n {
        for j in i + 1..n {
            for a in PauliAxis::ALL {
                for b in PauliAxis::ALL {
                    rows.push(CorrelatorEntry {
                        i,
                        j,
                        a,
                        b,
                        value: two_point(state, i, j, a, b)?,
                    });
                }
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{basis_state, dicke, DensityMatrix};
    use core::f64::consts::PI;

    #[test]
    fn layout_validation() {
        assert!(SiteLayout::new(alloc::vec![0.0, 1.0, 1.0]).is_err());
        assert!(SiteLayout::new(alloc::vec![0.0, f64::NAN]).is_err());
        assert_eq!(SiteLayout::uniform(3).positions(), &[0.0, 1.0, 2.0]);
    }

    #[test]
    fn two_point_examples() {
        let s = basis_state(2, "00").unwrap();
        assert_eq!(
            two_point(&s, 0, 1, PauliAxis::Z, PauliAxis::Z).unwrap(),
            1.0
        );
        let w = dicke(3, 1).unwrap();
        let v = two_point(&w, 0, 1, PauliAxis::X, PauliAxis::X).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert_eq!(
            two_point(&mixed, 0, 1, PauliAxis::X, PauliAxis::X).unwrap(),
            0.0
        );
    }

    #[test]
    fn two_point_rejects_bad_pairs() {
        let s = basis_state(3, "000").unwrap();
        assert!(two_point(&s, 1, 1, PauliAxis::Z, PauliAxis::Z).is_err());
        assert!(two_point(&s, 2, 1, PauliAxis::Z, PauliAxis::Z).is_err());
        assert!(two_point(&s, 1, 3, PauliAxis::Z, PauliAxis::Z).is_err());
    }

    #[test]
    fn collective_examples() {
        let s = basis_state(2, "00").unwrap();
        assert!((collective_spin_sq(&s, PauliAxis::Z) - 1.0).abs() < 1e-15);
        let w = dicke(3, 1).unwrap();
        assert!((collective_spin_sq(&w, PauliAxis::X) - 7.0 / 4.0).abs() < 1e-14);
        for n in 1..=7 {
            for l in 0..=n {
                let d = dicke(n, l).unwrap();
                let expected = ((n as f64) - 2.0 * l as f64).powi(2) / 4.0;
                assert!((collective_spin_sq(&d, PauliAxis::Z) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn collective_mixed_matches_pure() {
        let d = dicke(4, 2).unwrap();
        let rho = d.to_density().unwrap();
        for axis in PauliAxis::ALL {
            let a = collective_spin_sq(&d, axis);
            let b = collective_spin_sq(&rho, axis);
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn structure_factor_examples() {
        let s = basis_state(4, "0000").unwrap();
        let v =
            structure_factor(&s, PI, PauliAxis::Z, PauliAxis::Z, &SiteLayout::uniform(4)).unwrap();
        assert!((v - C64::new(-2.0, 0.0)).norm() < 1e-12);
        assert!(
            structure_factor(&s, 0.0, PauliAxis::Z, PauliAxis::Z, &SiteLayout::uniform(3)).is_err()
        );
    }

    #[test]
    fn identity_examples() {
        let d = dicke(4, 2).unwrap();
        let (lhs, rhs) = verify_collective_identity(&d, PauliAxis::X).unwrap();
        assert!((lhs - 4.0).abs() < 1e-12 && (rhs - 4.0).abs() < 1e-12);
        let s = basis_state(2, "00").unwrap();
        let (lhs, rhs) = verify_collective_identity(&s, PauliAxis::Z).unwrap();
        assert!((lhs - 1.0).abs() < 1e-15 && (rhs - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dicke_pairs_are_all_equal() {
        let d = dicke(5, 2).unwrap();
        for a in PauliAxis::ALL {
            let first = two_point(&d, 0, 1, a, a).unwrap();
            for i in 0..5 {
                for j in i + 1..5 {
                    assert!((two_point(&d, i, j, a, a).unwrap() - first).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn table_is_ordered() {
        let w = dicke(3, 1).unwrap();
        let t = correlator_table(&w).unwrap();
        assert_eq!(t.len(), 3 * 9);
        assert_eq!(
            (t[0].i, t[0].j, t[0].a, t[0].b),
            (0, 1, PauliAxis::X, PauliAxis::X)
        );
        assert_eq!((t[26].i, t[26].j), (1, 2));
    }
}
