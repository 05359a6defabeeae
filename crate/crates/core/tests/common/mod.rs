//! Test-only oracles. Everything here builds operators as explicit Kronecker
//! products, independent of the bit-twiddling paths in the library.

#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use structfac_core::qstate::BlochVector;
use structfac_core::{PauliAxis, StateVector, WitnessSpec, C64};

pub fn pauli(axis: PauliAxis) -> DMatrix<C64> {
    let m = axis.matrix();
    DMatrix::from_fn(2, 2, |r, c| m[r][c])
}

/// `sigma^{a_1} (x) ... ` with identities on the unlisted sites.
pub fn dense_string(n: usize, factors: &[(usize, PauliAxis)]) -> DMatrix<C64> {
    let mut out = DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
    for site in 0..n {
        let f = factors
            .iter()
            .find(|(s, _)| *s == site)
            .map(|(_, a)| pauli(*a))
            .unwrap_or_else(|| DMatrix::identity(2, 2));
        out = out.kronecker(&f);
    }
    out
}

pub fn dense_sigma(spec: &WitnessSpec) -> DMatrix<C64> {
    let n = spec.n_qubits();
    let dim = 1 << n;
    let pairs = (n * (n - 1) / 2) as f64;
    let mut out = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
    for i in 0..n {
        for j in i + 1..n {
            let m = spec.layout().positions()[j] - spec.layout().positions()[i];
            for axis in PauliAxis::ALL {
                let w = spec.coefficient(axis) * (spec.k() * m).cos() / pairs;
                out += dense_string(n, &[(i, axis), (j, axis)]) * C64::new(w, 0.0);
            }
        }
    }
    out
}

pub fn expectation(amps: &[C64], op: &DMatrix<C64>) -> C64 {
    let v = nalgebra::DVector::from_column_slice(amps);
    (v.adjoint() * op * &v)[(0, 0)]
}

pub fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateVector {
    let amps = (0..1 << n)
        .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    StateVector::normalize(n, amps).unwrap()
}

/// Uniform in the unit ball.
pub fn random_bloch(rng: &mut ChaCha8Rng) -> BlochVector {
    loop {
        let (x, y, z): (f64, f64, f64) = (
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        if x * x + y * y + z * z <= 1.0 {
            return BlochVector::new(x, y, z).unwrap();
        }
    }
}

pub fn random_spec(rng: &mut ChaCha8Rng, n: usize) -> WitnessSpec {
    let k = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    let c = [
        rng.random_range(-1.0..=1.0),
        rng.random_range(-1.0..=1.0),
        rng.random_range(-1.0..=1.0),
    ];
    WitnessSpec::new(n, k, c).unwrap()
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn top_eigenvalue(m: &DMatrix<C64>) -> f64 {
    m.clone().symmetric_eigenvalues().max()
}

/// `Tr_s[(rho_s (x) 1) op]` for a single site `s`: an operator on the other
/// `n - 1` sites (ascending order).
pub fn trace_out_site(
    op: &DMatrix<C64>,
    n: usize,
    site: usize,
    rho: &[[C64; 2]; 2],
) -> DMatrix<C64> {
    let rest = n - 1;
    let insert = |r: usize, bit: usize| -> usize {
        // r is an (n-1)-bit index over the remaining sites; place `bit` at `site`
        let pos = n - 1 - site;
        let high = (r >> pos) << (pos + 1);
        let low = r & ((1 << pos) - 1);
        high | (bit << pos) | low
    };
    DMatrix::from_fn(1 << rest, 1 << rest, |r, c| {
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..2 {
            for a2 in 0..2 {
                acc += rho[a2][a] * op[(insert(r, a), insert(c, a2))];
            }
        }
        acc
    })
}

/// Max over a single-qubit Bloch-sphere grid on `site`, with the remaining
/// qubits optimized exactly (top eigenvalue of the reduced operator).
pub fn grid_search_single_site(op: &DMatrix<C64>, n: usize, site: usize, steps: usize) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for t in 0..=steps {
        let theta = std::f64::consts::PI * t as f64 / steps as f64;
        let n_phi = if t == 0 || t == steps { 1 } else { 2 * steps };
        for p in 0..n_phi {
            let phi = 2.0 * std::f64::consts::PI * p as f64 / (2 * steps) as f64;
            let rho = BlochVector::from_angles(theta, phi).density();
            let reduced = trace_out_site(op, n, site, &rho);
            best = best.max(top_eigenvalue(&reduced));
        }
    }
    best
}
