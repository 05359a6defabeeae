//! Pauli operators acting on computational basis indices.
//!
//! Site `q` (0-indexed, leftmost in ket notation) lives at bit `n - 1 - q` of a
//! basis index, so `|001>` on three qubits is index 1.

use core::fmt;

use crate::C64;

/// One of the three Pauli directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn index(self) -> usize {
        match self {
            PauliAxis::X => 0,
            PauliAxis::Y => 1,
            PauliAxis::Z => 2,
        }
    }

    pub fn label(self) -> char {
        match self {
            PauliAxis::X => 'x',
            PauliAxis::Y => 'y',
            PauliAxis::Z => 'z',
        }
    }

    pub fn from_label(c: char) -> Option<Self> {
        match c.to_ascii_lowercase() {
            'x' => Some(PauliAxis::X),
            'y' => Some(PauliAxis::Y),
            'z' => Some(PauliAxis::Z),
            _ => None,
        }
    }

    /// The 2x2 matrix in row-major order.
    pub fn matrix(self) -> [[C64; 2]; 2] {
        let o = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            PauliAxis::X => [[o, one], [one, o]],
            PauliAxis::Y => [[o, -i], [i, o]],
            PauliAxis::Z => [[one, o], [o, -one]],
        }
    }
}

impl fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Bit of the basis index that carries site `site` of an `n`-qubit register.
#[inline]
pub fn site_bit(n_qubits: usize, site: usize) -> usize {
    1 << (n_qubits - 1 - site)
}

/// A tensor product of Pauli operators on distinct sites.
///
/// Acting on `|b>` gives `i^ny * (-1)^popcount(b & sign) |b ^ flip>`, where
/// `flip` marks X/Y sites and `sign` marks Y/Z sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PauliString {
    flip: usize,
    sign: usize,
    y_count: u32,
    support: usize,
}

impl PauliString {
    pub fn identity() -> Self {
        PauliString {
            flip: 0,
            sign: 0,
            y_count: 0,
            support: 0,
        }
    }

    /// Appends `axis` on `site`. Sites must not repeat.
    pub fn with(mut self, n_qubits: usize, site: usize, axis: PauliAxis) -> Self {
        let bit = site_bit(n_qubits, site);
        debug_assert!(self.support & bit == 0, "site {site} already occupied");
        self.support |= bit;
        match axis {
            PauliAxis::X => self.flip |= bit,
            PauliAxis::Y => {
                self.flip |= bit;
                self.sign |= bit;
                self.y_count += 1;
            }
            PauliAxis::Z => self.sign |= bit,
        }
        self
    }

    pub fn single(n_qubits: usize, site: usize, axis: PauliAxis) -> Self {
        Self::identity().with(n_qubits, site, axis)
    }

    pub fn pair(n_qubits: usize, i: usize, a: PauliAxis, j: usize, b: PauliAxis) -> Self {
        Self::identity().with(n_qubits, i, a).with(n_qubits, j, b)
    }

    pub fn flip_mask(&self) -> usize {
        self.flip
    }

    /// Image of basis state `basis`: returns `(target, phase)`.
    #[inline]
    pub fn act(&self, basis: usize) -> (usize, C64) {
        let negative = (basis & self.sign).count_ones() & 1 == 1;
        let base = match self.y_count % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
        (basis ^ self.flip, if negative { -base } else { base })
    }

    /// `P|psi>` as a new amplitude vector.
    pub fn apply(&self, amplitudes: &[C64]) -> alloc::vec::Vec<C64> {
        let mut out = alloc::vec![C64::new(0.0, 0.0); amplitudes.len()];
        for (b, &amp) in amplitudes.iter().enumerate() {
            let (t, ph) = self.act(b);
            out[t] += ph * amp;
        }
        out
    }
}

/// Applies a 2x2 unitary to `site` in place.
pub fn apply_single_qubit(
    amplitudes: &mut [C64],
    n_qubits: usize,
    site: usize,
    gate: &[[C64; 2]; 2],
) {
    let bit = site_bit(n_qubits, site);
    for b in 0..amplitudes.len() {
        if b & bit != 0 {
            continue;
        }
        let a0 = amplitudes[b];
        let a1 = amplitudes[b | bit];
        amplitudes[b] = gate[0][0] * a0 + gate[0][1] * a1;
        amplitudes[b | bit] = gate[1][0] * a0 + gate[1][1] * a1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-15
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn single_site_action_matches_matrices() {
        for axis in PauliAxis::ALL {
            let m = axis.matrix();
            for input in 0..2usize {
                let (t, ph) = PauliString::single(1, 0, axis).act(input);
                // column `input` of the matrix has its only nonzero at row t
                assert!(close(m[t][input], ph), "{axis} on |{input}>");
                assert!(close(m[1 - t][input], C64::new(0.0, 0.0)));
            }
        }
    }

    #[test]
    fn leftmost_site_is_most_significant_bit() {
        assert_eq!(site_bit(3, 0), 0b100);
        assert_eq!(site_bit(3, 2), 0b001);
        let (t, _) = PauliString::single(3, 2, PauliAxis::X).act(0);
        assert_eq!(t, 1);
    }

    #[test]
    fn yy_on_pair_has_real_phase() {
        let p = PauliString::pair(2, 0, PauliAxis::Y, 1, PauliAxis::Y);
        // Y|0> = i|1>, so YY|00> = -|11>
        let (t, ph) = p.act(0);
        assert_eq!(t, 3);
        assert!(close(ph, C64::new(-1.0, 0.0)));
        let (t, ph) = p.act(1);
        assert_eq!(t, 2);
        assert!(close(ph, C64::new(1.0, 0.0)));
    }

    #[test]
    fn hadamard_roundtrip() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let gate = [
            [C64::new(h, 0.0), C64::new(h, 0.0)],
            [C64::new(h, 0.0), C64::new(-h, 0.0)],
        ];
        let mut amps = alloc::vec![C64::new(0.0, 0.0); 4];
        amps[1] = C64::new(1.0, 0.0);
        apply_single_qubit(&mut amps, 2, 0, &gate);
        apply_single_qubit(&mut amps, 2, 0, &gate);
        assert!(close(amps[1], C64::new(1.0, 0.0)));
    }
}
