//! The witness `W(k) = 1 - Sigma(k)` with
//! `Sigma(k) = 1/B(N,2) sum_{i<j} cos(k m_ij) sum_a c_a sigma_i^a sigma_j^a`.
//!
//! Averaging the structure-factor operator over `+k` and `-k` leaves only the
//! cosine of each phase, so `Sigma(k)` is Hermitian for real coefficients.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_rational::Ratio;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::correl::{two_point, SiteLayout};
use crate::error::{input_err, Error, Result};
use crate::pauli::{PauliAxis, PauliString};
use crate::qstate::{binomial, check_dense, QubitState};
use crate::C64;

/// Default strictness margin for [`detects`].
pub const DETECTION_TOL: f64 = 1e-9;

/// Parameters of one witness: register size, wave vector, coefficients and
/// site positions.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSpec {
    n_qubits: usize,
    k: f64,
    coeffs: [f64; 3],
    layout: SiteLayout,
}

impl WitnessSpec {
    /// Unit-spaced chain.
    pub fn new(n_qubits: usize, k: f64, coeffs: [f64; 3]) -> Result<Self> {
        Self::with_layout(n_qubits, k, coeffs, SiteLayout::uniform(n_qubits))
    }

    pub fn with_layout(
        n_qubits: usize,
        k: f64,
        coeffs: [f64; 3],
        layout: SiteLayout,
    ) -> Result<Self> {
        if n_qubits < 2 {
            return Err(input_err!("a two-point witness needs at least 2 qubits"));
        }
        if layout.len() != n_qubits {
            return Err(input_err!(
                "layout has {} sites for {n_qubits} qubits",
                layout.len()
            ));
        }
        if !k.is_finite() {
            return Err(input_err!("wave vector must be finite"));
        }
        if coeffs.iter().any(|c| !(c.abs() <= 1.0)) {
            return Err(input_err!(
                "coefficients must satisfy |c| <= 1, got {coeffs:?}"
            ));
        }
        Ok(WitnessSpec {
            n_qubits,
            k,
            coeffs,
            layout,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn coeffs(&self) -> [f64; 3] {
        self.coeffs
    }

    pub fn coefficient(&self, axis: PauliAxis) -> f64 {
        self.coeffs[axis.index()]
    }

    pub fn layout(&self) -> &SiteLayout {
        &self.layout
    }

    /// Same spec at a different wave vector.
    pub fn at_k(&self, k: f64) -> Self {
        WitnessSpec { k, ..self.clone() }
    }

    /// `cos(k m_ij) / B(N,2)`
    pub fn pair_weight(&self, i: usize, j: usize) -> f64 {
        let pairs = binomial(self.n_qubits as u64, 2) as f64;
        (self.k * self.layout.separation(i, j)).cos() / pairs
    }

    /// Axes with nonzero coefficient.
    pub fn active_axes(&self) -> impl Iterator<Item = PauliAxis> + '_ {
        PauliAxis::ALL
            .into_iter()
            .filter(|a| self.coefficient(*a) != 0.0)
    }
}

fn check_state<S: QubitState + ?Sized>(state: &S, spec: &WitnessSpec) -> Result<()> {
    if state.n_qubits() != spec.n_qubits {
        return Err(input_err!(
            "state has {} qubits, witness expects {}",
            state.n_qubits(),
            spec.n_qubits
        ));
    }
    Ok(())
}

/// `<Sigma(k)>` from the two-point correlators.
pub fn sigma_value<S: QubitState + ?Sized>(state: &S, spec: &WitnessSpec) -> Result<f64> {
    check_state(state, spec)?;
    let n = spec.n_qubits;
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let mut pair = 0.0;
            for axis in spec.active_axes() {
                pair += spec.coefficient(axis) * two_point(state, i, j, axis, axis)?;
            }
            total += spec.pair_weight(i, j) * pair;
        }
    }
    Ok(total)
}

/// `<W(k)> = 1 - <Sigma(k)>`; negative values certify entanglement.
pub fn witness_value<S: QubitState + ?Sized>(state: &S, spec: &WitnessSpec) -> Result<f64> {
    Ok(1.0 - sigma_value(state, spec)?)
}

/// `true` iff `<W(k)> < -tol`.
pub fn detects<S: QubitState + ?Sized>(state: &S, spec: &WitnessSpec, tol: f64) -> Result<bool> {
    Ok(witness_value(state, spec)? < -tol)
}

/// `<N,l| Sigma(0) |N,l>` for `c = (1, 1, -1)`:
/// `(4l(N-l) - (N-2l)^2 + N) / (N(N-1))`.
pub fn dicke_sigma_closed_form(n_qubits: usize, l: usize) -> Result<Ratio<i64>> {
    if n_qubits < 2 {
        return Err(input_err!("closed form needs N >= 2"));
    }
    if l > n_qubits {
        return Err(input_err!("l = {l} exceeds N = {n_qubits}"));
    }
    let n = n_qubits as i64;
    let l = l as i64;
    let num = 4 * l * (n - l) - (n - 2 * l) * (n - 2 * l) + n;
    Ok(Ratio::new(num, n * (n - 1)))
}

/// `<N,l^ph| Sigma(pi) |N,l^ph>` on the half-filled phased Dicke states.
///
/// Without the z term the value is `2 l(N-l) / B(N,2)`. With `c_z = 1` only
/// the four- and six-qubit cases are tabulated.
pub fn phased_dicke_sigma_closed_form(
    n_qubits: usize,
    l: usize,
    with_z: bool,
) -> Result<Ratio<i64>> {
    if with_z {
        return match (n_qubits, l) {
            (4, 2) => Ok(Ratio::new(13, 9)),
            (6, 3) => Ok(Ratio::new(31, 25)),
            _ => Err(Error::Unsupported(alloc::format!(
                "no closed form with c_z = 1 for N = {n_qubits}, l = {l}"
            ))),
        };
    }
    let half_filled = if n_qubits.is_multiple_of(2) {
        2 * l == n_qubits
    } else {
        2 * l + 1 == n_qubits || 2 * l == n_qubits + 1
    };
    if n_qubits < 2 || !half_filled {
        return Err(Error::Unsupported(alloc::format!(
            "closed form requires half filling, got N = {n_qubits}, l = {l}"
        )));
    }
    let n = n_qubits as i64;
    let l = l as i64;
    Ok(Ratio::new(2 * l * (n - l) * 2, n * (n - 1)))
}

/// Dense `Sigma(k)`; exists for the eigen-solvers in the see-saw.
pub fn sigma_operator(spec: &WitnessSpec) -> Result<DMatrix<C64>> {
    let n = spec.n_qubits;
    check_dense(n)?;
    let dim = 1usize << n;
    let mut op = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
    for i in 0..n {
        for j in i + 1..n {
            let w = spec.pair_weight(i, j);
            for axis in spec.active_axes() {
                let weight = w * spec.coefficient(axis);
                let p = PauliString::pair(n, i, axis, j, axis);
                for b in 0..dim {
                    let (t, ph) = p.act(b);
                    op[(t, b)] += ph * weight;
                }
            }
        }
    }
    Ok(op)
}

/// One row of a wave-vector scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub k: f64,
    pub sigma: f64,
    pub witness: f64,
}

/// Evaluates `Sigma(k)` and `W(k)` pointwise over `k_grid`, in grid order.
pub fn scan_k<S: QubitState + ?Sized>(
    state: &S,
    coeffs: [f64; 3],
    layout: &SiteLayout,
    k_grid: &[f64],
) -> Result<Vec<ScanPoint>> {
    if k_grid.is_empty() {
        return Err(input_err!("k grid is empty"));
    }
    let base = WitnessSpec::with_layout(state.n_qubits(), 0.0, coeffs, layout.clone())?;
    k_grid
        .iter()
        .map(|&k| {
            let sigma = sigma_value(state, &base.at_k(k))?;
            Ok(ScanPoint {
                k,
                sigma,
                witness: 1.0 - sigma,
            })
        })
        .collect()
}

/// Lower edge of the detection window of a one-parameter family on `(lo, hi)`.
///
/// Scans `steps - 1` interior points, takes the last one that is not detected
/// (`<W> >= 0`) and bisects the sign change above it down to `tol`. Returns
/// `None` when the family is undetected just below `hi` or detected throughout.
pub fn detection_onset<S, F>(
    family: F,
    spec: &WitnessSpec,
    lo: f64,
    hi: f64,
    steps: usize,
    tol: f64,
) -> Result<Option<f64>>
where
    S: QubitState,
    F: Fn(f64) -> S,
{
    if !(lo < hi) || steps < 2 || !(tol > 0.0) {
        return Err(input_err!("need lo < hi, steps >= 2 and tol > 0"));
    }
    let at = |i: usize| lo + (hi - lo) * i as f64 / steps as f64;
    let negative = |x: f64| -> Result<bool> { Ok(witness_value(&family(x), spec)? < 0.0) };
    let mut last_off = None;
    for i in 1..steps {
        if !negative(at(i))? {
            last_off = Some(i);
        }
    }
    let Some(i) = last_off else { return Ok(None) };
    if i + 1 == steps {
        return Ok(None);
    }
    let (mut a, mut b) = (at(i), at(i + 1));
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if negative(mid)? {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(Some(0.5 * (a + b)))
}
