//! N-qubit states: pure amplitude vectors, density matrices, and the
//! constructors for the state families the witnesses are tested on.

use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicUsize, Ordering};

use nalgebra::DMatrix;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{input_err, resource_err, Result};
use crate::pauli::{site_bit, PauliAxis, PauliString};
use crate::C64;

pub const DEFAULT_MAX_QUBITS: usize = 16;
/// Cap for anything that materializes a 2^N x 2^N matrix.
pub const MAX_DENSE_QUBITS: usize = 12;

const NORM_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

static MAX_QUBITS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_QUBITS);

/// Largest register accepted by the state constructors.
pub fn max_qubits() -> usize {
    MAX_QUBITS.load(Ordering::Relaxed)
}

pub fn set_max_qubits(n: usize) {
    MAX_QUBITS.store(n.min(usize::BITS as usize - 2), Ordering::Relaxed);
}

fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(input_err!("a register needs at least one qubit"));
    }
    if n_qubits > max_qubits() {
        return Err(resource_err!(
            "{n_qubits} qubits exceeds the cap of {}",
            max_qubits()
        ));
    }
    Ok(())
}

pub(crate) fn check_dense(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_DENSE_QUBITS {
        return Err(resource_err!(
            "dense operators are capped at {MAX_DENSE_QUBITS} qubits, got {n_qubits}"
        ));
    }
    Ok(())
}

/// Binomial coefficient, exact in u64 for the register sizes used here.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Sign of a superposition branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn factor(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Normalized pure state of an N-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized to within 1e-12.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_register(n_qubits)?;
        if amplitudes.len() != 1 << n_qubits {
            return Err(input_err!(
                "expected {} amplitudes for {n_qubits} qubits, got {}",
                1usize << n_qubits,
                amplitudes.len()
            ));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(input_err!("state is not normalized: |psi|^2 = {norm_sq}"));
        }
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    /// Rescales to unit norm when the norm is within `tolerance` of one.
    pub fn from_amplitudes_renormalizing(
        n_qubits: usize,
        mut amplitudes: Vec<C64>,
        tolerance: f64,
    ) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() >= tolerance {
            return Err(input_err!(
                "state norm {norm} deviates from 1 by more than {tolerance}"
            ));
        }
        for a in amplitudes.iter_mut() {
            *a /= norm;
        }
        Self::from_amplitudes(n_qubits, amplitudes)
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalize(n_qubits: usize, mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(input_err!("cannot normalize a zero or non-finite vector"));
        }
        for a in amplitudes.iter_mut() {
            *a /= norm;
        }
        Self::from_amplitudes(n_qubits, amplitudes)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    /// Amplitude of the ket written as a bit string, e.g. `"0011"`.
    pub fn amplitude_of(&self, bits: &str) -> Result<C64> {
        Ok(self.amplitudes[parse_bits(self.n_qubits, bits)?])
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|psi><psi|`; fails above the dense cap.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        check_dense(self.n_qubits)?;
        let a = &self.amplitudes;
        let entries = DMatrix::from_fn(a.len(), a.len(), |r, c| a[r] * a[c].conj());
        Ok(DensityMatrix {
            n_qubits: self.n_qubits,
            entries,
        })
    }
}

/// Mixed state of an N-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    entries: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn from_entries(n_qubits: usize, entries: DMatrix<C64>) -> Result<Self> {
        check_register(n_qubits)?;
        check_dense(n_qubits)?;
        let dim = 1usize << n_qubits;
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(input_err!(
                "expected a {dim}x{dim} matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            ));
        }
        for r in 0..dim {
            for c in r..dim {
                if (entries[(r, c)] - entries[(c, r)].conj()).norm() > HERMITIAN_TOL {
                    return Err(input_err!("matrix is not Hermitian at ({r}, {c})"));
                }
            }
        }
        let trace = entries.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > NORM_TOL {
            return Err(input_err!("trace is {trace}, expected 1"));
        }
        let min_eig = entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(input_err!("matrix has negative eigenvalue {min_eig}"));
        }
        Ok(DensityMatrix { n_qubits, entries })
    }

    pub(crate) fn from_parts(n_qubits: usize, entries: DMatrix<C64>) -> Self {
        DensityMatrix { n_qubits, entries }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        check_dense(n_qubits)?;
        let dim = 1usize << n_qubits;
        let entries = DMatrix::from_diagonal_element(dim, dim, C64::new(1.0 / dim as f64, 0.0));
        Ok(DensityMatrix { n_qubits, entries })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    /// `Tr(rho O)` for a dense operator of matching size.
    pub fn expectation_dense(&self, operator: &DMatrix<C64>) -> C64 {
        let dim = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..dim {
            for c in 0..dim {
                acc += self.entries[(r, c)] * operator[(c, r)];
            }
        }
        acc
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }
}

/// Borrowed view over either state representation.
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a StateVector),
    Mixed(&'a DensityMatrix),
}

/// Anything that can be measured by the correlator routines.
pub trait QubitState {
    fn state_ref(&self) -> StateRef<'_>;

    fn n_qubits(&self) -> usize {
        match self.state_ref() {
            StateRef::Pure(s) => s.n_qubits,
            StateRef::Mixed(m) => m.n_qubits,
        }
    }

    /// `<P>` for a Pauli string, computed without materializing `P`.
    fn pauli_expectation(&self, string: &PauliString) -> C64 {
        match self.state_ref() {
            StateRef::Pure(s) => {
                let a = &s.amplitudes;
                let mut acc = C64::new(0.0, 0.0);
                for (b, &amp) in a.iter().enumerate() {
                    let (t, ph) = string.act(b);
                    acc += a[t].conj() * ph * amp;
                }
                acc
            }
            StateRef::Mixed(m) => {
                // Tr(rho P) = sum_b phase_b * rho[b, P(b)]
                let mut acc = C64::new(0.0, 0.0);
                for b in 0..m.dim() {
                    let (t, ph) = string.act(b);
                    acc += ph * m.entries[(b, t)];
                }
                acc
            }
        }
    }
}

impl QubitState for StateVector {
    fn state_ref(&self) -> StateRef<'_> {
        StateRef::Pure(self)
    }
}

impl QubitState for DensityMatrix {
    fn state_ref(&self) -> StateRef<'_> {
        StateRef::Mixed(self)
    }
}

impl<T: QubitState + ?Sized> QubitState for &T {
    fn state_ref(&self) -> StateRef<'_> {
        (**self).state_ref()
    }
}

/// Single-qubit Bloch vector; norm at most one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = BlochVector { x, y, z };
        if !(v.norm_sq() <= 1.0 + NORM_TOL) {
            return Err(input_err!(
                "Bloch vector ({x}, {y}, {z}) lies outside the unit ball"
            ));
        }
        Ok(v)
    }

    /// Pure state on the sphere at polar angle `theta`, azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        BlochVector {
            x: theta.sin() * phi.cos(),
            y: theta.sin() * phi.sin(),
            z: theta.cos(),
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn component(&self, axis: PauliAxis) -> f64 {
        match axis {
            PauliAxis::X => self.x,
            PauliAxis::Y => self.y,
            PauliAxis::Z => self.z,
        }
    }

    /// `(1 + n . sigma) / 2`
    pub fn density(&self) -> [[C64; 2]; 2] {
        [
            [
                C64::new((1.0 + self.z) / 2.0, 0.0),
                C64::new(self.x / 2.0, -self.y / 2.0),
            ],
            [
                C64::new(self.x / 2.0, self.y / 2.0),
                C64::new((1.0 - self.z) / 2.0, 0.0),
            ],
        ]
    }

    /// Uniform on the unit sphere.
    pub fn random_pure<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v: [f64; 3] = core::array::from_fn(|_| StandardNormal.sample(rng));
            let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if norm > 1e-12 {
                return BlochVector {
                    x: v[0] / norm,
                    y: v[1] / norm,
                    z: v[2] / norm,
                };
            }
        }
    }

    /// Uniform in the unit ball.
    pub fn random_mixed<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let dir = Self::random_pure(rng);
        let r = rng.random::<f64>().cbrt();
        BlochVector {
            x: r * dir.x,
            y: r * dir.y,
            z: r * dir.z,
        }
    }

    /// A unit-norm ket with this Bloch vector; requires a pure vector.
    pub fn ket(&self) -> [C64; 2] {
        let theta = libm::acos(self.z.clamp(-1.0, 1.0));
        let phi = libm::atan2(self.y, self.x);
        [
            C64::new((theta / 2.0).cos(), 0.0),
            C64::from_polar((theta / 2.0).sin(), phi),
        ]
    }
}

fn parse_bits(n_qubits: usize, bits: &str) -> Result<usize> {
    if bits.chars().count() != n_qubits {
        return Err(input_err!(
            "bit string {bits:?} does not have length {n_qubits}"
        ));
    }
    let mut index = 0usize;
    for (site, ch) in bits.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => index |= site_bit(n_qubits, site),
            other => return Err(input_err!("invalid bit {other:?} in {bits:?}")),
        }
    }
    Ok(index)
}

/// Ket `|bits>` rendered back from a basis index.
pub fn bits_of(n_qubits: usize, index: usize) -> alloc::string::String {
    (0..n_qubits)
        .map(|site| {
            if index & site_bit(n_qubits, site) != 0 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

pub fn basis_state(n_qubits: usize, bits: &str) -> Result<StateVector> {
    check_register(n_qubits)?;
    let index = parse_bits(n_qubits, bits)?;
    let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n_qubits];
    amplitudes[index] = C64::new(1.0, 0.0);
    StateVector::from_amplitudes(n_qubits, amplitudes)
}

fn check_excitations(n_qubits: usize, l: usize) -> Result<()> {
    check_register(n_qubits)?;
    if l > n_qubits {
        return Err(input_err!(
            "excitation number {l} exceeds {n_qubits} qubits"
        ));
    }
    Ok(())
}

fn weight_l_state(n_qubits: usize, l: usize, sign: impl Fn(usize) -> f64) -> Result<StateVector> {
    check_excitations(n_qubits, l)?;
    let amp = 1.0 / (binomial(n_qubits as u64, l as u64) as f64).sqrt();
    let amplitudes = (0..1usize << n_qubits)
        .map(|b| {
            if b.count_ones() as usize == l {
                C64::new(sign(b) * amp, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    StateVector::from_amplitudes(n_qubits, amplitudes)
}

/// `|N,l>`: equal superposition of all weight-`l` basis states.
pub fn dicke(n_qubits: usize, l: usize) -> Result<StateVector> {
    weight_l_state(n_qubits, l, |_| 1.0)
}

/// Sum of the 0-indexed positions of the 1s in the ket.
fn position_sum(n_qubits: usize, index: usize) -> usize {
    (0..n_qubits)
        .filter(|&site| index & site_bit(n_qubits, site) != 0)
        .sum()
}

/// Sign of basis state `index` in `|N,l^ph>`.
///
/// Every adjacent transposition moves one excitation by one site, so the
/// transposition parity from `1^l 0^(N-l)` equals the parity of the change in
/// position sum.
pub fn phased_dicke_sign(n_qubits: usize, l: usize, index: usize) -> f64 {
    let reference = l * l.saturating_sub(1) / 2;
    if (position_sum(n_qubits, index) + reference).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `|N,l^ph>`: Dicke state whose terms carry the transposition parity
/// relative to `1^l 0^(N-l)`, which has sign +.
pub fn phased_dicke(n_qubits: usize, l: usize) -> Result<StateVector> {
    weight_l_state(n_qubits, l, |b| phased_dicke_sign(n_qubits, l, b))
}

/// `cos(theta) |GHZ_0011> +- sin(theta) |GHZ_0000>` with
/// `|GHZ_0011> = (|0011> + |1100>)/sqrt2` and `|GHZ_0000> = (|0000> + |1111>)/sqrt2`.
pub fn ghz_superposition(theta: f64, branch: Branch) -> StateVector {
    let c = theta.cos() * core::f64::consts::FRAC_1_SQRT_2;
    let s = branch.factor() * theta.sin() * core::f64::consts::FRAC_1_SQRT_2;
    let mut amplitudes = vec![C64::new(0.0, 0.0); 16];
    amplitudes[0b0011] = C64::new(c, 0.0);
    amplitudes[0b1100] = C64::new(c, 0.0);
    amplitudes[0b0000] = C64::new(s, 0.0);
    amplitudes[0b1111] = C64::new(s, 0.0);
    StateVector {
        n_qubits: 4,
        amplitudes,
    }
}

/// `cos(theta)|4,2> +- sin(theta)/sqrt2 (|0000> + |1111>)`.
pub fn dicke_ghz_superposition(theta: f64, branch: Branch) -> StateVector {
    let d = theta.cos() / 6f64.sqrt();
    let s = branch.factor() * theta.sin() * core::f64::consts::FRAC_1_SQRT_2;
    let amplitudes = (0..16usize)
        .map(|b| match b.count_ones() {
            2 => C64::new(d, 0.0),
            0 | 4 => C64::new(s, 0.0),
            _ => C64::new(0.0, 0.0),
        })
        .collect();
    StateVector {
        n_qubits: 4,
        amplitudes,
    }
}

/// Normalized vector of i.i.d. complex-normal entries, real part drawn first.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    let mut v: Vec<C64> = (0..dim)
        .map(|_| {
            let re = StandardNormal.sample(rng);
            C64::new(re, StandardNormal.sample(rng))
        })
        .collect();
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

/// Haar-random pure state.
pub fn random_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<StateVector> {
    check_register(n_qubits)?;
    StateVector::normalize(n_qubits, random_unit_vector(rng, 1 << n_qubits))
}

/// `rho_1 (x) ... (x) rho_N` from per-qubit Bloch vectors.
pub fn product_density(blochs: &[BlochVector]) -> Result<DensityMatrix> {
    let n_qubits = blochs.len();
    check_register(n_qubits)?;
    check_dense(n_qubits)?;
    for b in blochs {
        BlochVector::new(b.x, b.y, b.z)?;
    }
    let mut entries = DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
    for b in blochs {
        let m = b.density();
        let factor = DMatrix::from_fn(2, 2, |r, c| m[r][c]);
        entries = entries.kronecker(&factor);
    }
    Ok(DensityMatrix { n_qubits, entries })
}

/// Pure product state `|b_1> (x) ... (x) |b_N>` for unit Bloch vectors.
pub fn product_state(blochs: &[BlochVector]) -> Result<StateVector> {
    let n_qubits = blochs.len();
    check_register(n_qubits)?;
    for b in blochs {
        if (b.norm_sq() - 1.0).abs() > 1e-9 {
            return Err(input_err!("product kets need unit Bloch vectors"));
        }
    }
    let kets: Vec<[C64; 2]> = blochs.iter().map(BlochVector::ket).collect();
    let amplitudes = (0..1usize << n_qubits)
        .map(|b| {
            kets.iter()
                .enumerate()
                .map(|(site, k)| k[usize::from(b & site_bit(n_qubits, site) != 0)])
                .product()
        })
        .collect();
    StateVector::normalize(n_qubits, amplitudes)
}

/// `p 1/2^N + (1-p) |psi><psi|`.
pub fn mix_with_white_noise(state: &StateVector, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(input_err!("noise fraction {p} outside [0, 1]"));
    }
    let mut rho = state.to_density()?;
    let dim = rho.dim();
    rho.entries *= C64::new(1.0 - p, 0.0);
    for d in 0..dim {
        rho.entries[(d, d)] += C64::new(p / dim as f64, 0.0);
    }
    Ok(rho)
}

/// Applies `sigma^axis` on `site` from both sides: `P rho P`.
pub(crate) fn conjugate_by_pauli(
    rho: &DensityMatrix,
    site: usize,
    axis: PauliAxis,
) -> DensityMatrix {
    let p = PauliString::single(rho.n_qubits, site, axis);
    let dim = rho.dim();
    let mut out = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
    for c in 0..dim {
        let (tc, pc) = p.act(c);
        for r in 0..dim {
            let (tr, pr) = p.act(r);
            out[(tr, tc)] = pr * pc.conj() * rho.entries[(r, c)];
        }
    }
    DensityMatrix::from_parts(rho.n_qubits, out)
}

pub(crate) fn scale_add(a: &DensityMatrix, wa: f64, b: &DensityMatrix, wb: f64) -> DensityMatrix {
    let entries = a.entries.map(|x| x * wa) + b.entries.map(|x| x * wb);
    DensityMatrix::from_parts(a.n_qubits, entries)
}
