//! Depolarizing noise and the robustness thresholds of a witness.
//!
//! `Sigma(k)` is a sum of traceless Pauli strings, so white noise of weight `p`
//! scales its expectation by `1 - p`, and per-qubit depolarizing noise of
//! strength `q` scales every two-body term by `(1 - q)^2`. The thresholds
//! therefore have closed forms in `<Sigma>`.

use num_rational::Ratio;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{input_err, resource_err, Result};
use crate::pauli::PauliAxis;
use crate::qstate::{conjugate_by_pauli, scale_add, DensityMatrix, StateVector};
use crate::witness::{sigma_value, WitnessSpec};

/// Default largest register for [`kraus_crosscheck`].
pub const KRAUS_SITE_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    /// `rho -> p 1/2^N + (1-p) rho`
    Collective(f64),
    /// `rho_s -> (1-q) rho_s + q 1/2` on every qubit independently.
    Individual(f64),
}

impl NoiseModel {
    pub fn collective(p: f64) -> Result<Self> {
        check_strength(p)?;
        Ok(NoiseModel::Collective(p))
    }

    pub fn individual(q: f64) -> Result<Self> {
        check_strength(q)?;
        Ok(NoiseModel::Individual(q))
    }

    pub fn strength(&self) -> f64 {
        match *self {
            NoiseModel::Collective(s) | NoiseModel::Individual(s) => s,
        }
    }

    /// Multiplier applied to the noiseless `<Sigma>`.
    pub fn shrink_factor(&self) -> f64 {
        match *self {
            NoiseModel::Collective(p) => 1.0 - p,
            NoiseModel::Individual(q) => (1.0 - q) * (1.0 - q),
        }
    }
}

fn check_strength(s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) {
        return Err(input_err!("noise strength {s} outside [0, 1]"));
    }
    Ok(())
}

/// `<Sigma(k)>` on the noisy version of `state`.
pub fn noisy_sigma(state: &StateVector, spec: &WitnessSpec, noise: NoiseModel) -> Result<f64> {
    check_strength(noise.strength())?;
    Ok(noise.shrink_factor() * sigma_value(state, spec)?)
}

/// `p* = 1 - 1/s`, or 0 when `s <= 1` (no detection even without noise).
pub fn collective_threshold_from_sigma(sigma: f64) -> f64 {
    if sigma > 1.0 {
        1.0 - 1.0 / sigma
    } else {
        0.0
    }
}

/// `q* = 1 - 1/sqrt(s)`, or 0 when `s <= 1`.
pub fn individual_threshold_from_sigma(sigma: f64) -> f64 {
    if sigma > 1.0 {
        1.0 - 1.0 / sigma.sqrt()
    } else {
        0.0
    }
}

/// Exact `p*` for a rational `<Sigma>`.
pub fn collective_threshold_exact(sigma: Ratio<i64>) -> Ratio<i64> {
    let one = Ratio::from_integer(1);
    if sigma > one {
        one - sigma.recip()
    } else {
        Ratio::from_integer(0)
    }
}

/// Largest white-noise weight below which the noisy state is still detected.
pub fn collective_threshold(state: &StateVector, spec: &WitnessSpec) -> Result<f64> {
    Ok(collective_threshold_from_sigma(sigma_value(state, spec)?))
}

/// Largest per-qubit depolarizing strength below which detection survives.
pub fn individual_threshold(state: &StateVector, spec: &WitnessSpec) -> Result<f64> {
    Ok(individual_threshold_from_sigma(sigma_value(state, spec)?))
}

/// Applies the single-qubit depolarizing channel to every qubit via its Kraus
/// operators `sqrt(1 - 3q/4) 1` and `sqrt(q/4) sigma^a`.
pub fn depolarize_each_qubit(rho: &DensityMatrix, q: f64) -> Result<DensityMatrix> {
    check_strength(q)?;
    let mut current = rho.clone();
    for site in 0..rho.n_qubits() {
        let mut next = scale_add(&current, 1.0 - 0.75 * q, &current, 0.0);
        for axis in PauliAxis::ALL {
            let kicked = conjugate_by_pauli(&current, site, axis);
            next = scale_add(&next, 1.0, &kicked, 0.25 * q);
        }
        current = next;
    }
    Ok(current)
}

/// `<Sigma>` under per-qubit noise by two routes: the `(1-q)^2` factor law on
/// the observable, and explicit Kraus evolution of the density matrix.
pub fn kraus_crosscheck(
    state: &StateVector,
    spec: &WitnessSpec,
    q: f64,
    site_cap: usize,
) -> Result<(f64, f64)> {
    if state.n_qubits() > site_cap {
        return Err(resource_err!(
            "Kraus cross-check is capped at {site_cap} qubits, got {}",
            state.n_qubits()
        ));
    }
    let observable_side = noisy_sigma(state, spec, NoiseModel::individual(q)?)?;
    let rho = depolarize_each_qubit(&state.to_density()?, q)?;
    let state_side = sigma_value(&rho, spec)?;
    Ok((observable_side, state_side))
}
