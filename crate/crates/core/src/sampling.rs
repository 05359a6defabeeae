//! Finite-shot estimation of the witness from projective measurements.
//!
//! One measurement setting per nonzero coefficient: every qubit is read out in
//! the same Pauli basis, so a single shot yields `s_i s_j` for all pairs at
//! once. Each shot contributes one sample of the weighted pair sum for its
//! setting, and the standard error comes from the sample variance of those
//! per-shot values (pairs from the same shot are correlated, so they are not
//! treated as independent).
//!
//! Substreams: setting `a` of a plan with seed `s` draws from ChaCha8 seeded
//! with `s` on stream `a`. Grid point `g` of a convergence curve uses seed
//! `derive_seed(s, g)`.

use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::distr::weighted::WeightedIndex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;

use crate::error::{input_err, Result};
use crate::pauli::{apply_single_qubit, site_bit, PauliAxis};
use crate::qstate::StateVector;
use crate::witness::WitnessSpec;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotPlan {
    pub shots_per_setting: usize,
    pub seed: u64,
}

impl ShotPlan {
    pub fn new(shots_per_setting: usize, seed: u64) -> Result<Self> {
        if shots_per_setting == 0 {
            return Err(input_err!("need at least one shot per setting"));
        }
        Ok(ShotPlan {
            shots_per_setting,
            seed,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotEstimate {
    /// Plug-in estimate of `<W(k)>`.
    pub estimate: f64,
    pub std_error: f64,
    /// Number of distinct measurement bases simulated (at most 3).
    pub settings: usize,
}

/// Rotation taking the eigenbasis of `axis` onto the computational basis.
fn readout_rotation(axis: PauliAxis) -> Option<[[C64; 2]; 2]> {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    match axis {
        PauliAxis::Z => None,
        PauliAxis::X => Some([
            [C64::new(h, 0.0), C64::new(h, 0.0)],
            [C64::new(h, 0.0), C64::new(-h, 0.0)],
        ]),
        // H S^dagger
        PauliAxis::Y => Some([
            [C64::new(h, 0.0), C64::new(0.0, -h)],
            [C64::new(h, 0.0), C64::new(0.0, h)],
        ]),
    }
}

/// Outcome distribution when every qubit is measured along `axis`.
pub fn readout_distribution(state: &StateVector, axis: PauliAxis) -> Vec<f64> {
    let n = state.n_qubits();
    let mut amps = state.amplitudes().to_vec();
    if let Some(gate) = readout_rotation(axis) {
        for site in 0..n {
            apply_single_qubit(&mut amps, n, site, &gate);
        }
    }
    amps.iter().map(|a| a.norm_sqr()).collect()
}

/// Per-outcome value of `c_a/B(N,2) sum_{i<j} cos(k m_ij) s_i s_j`.
fn outcome_values(spec: &WitnessSpec, axis: PauliAxis) -> Vec<f64> {
    let n = spec.n_qubits();
    let c = spec.coefficient(axis);
    let mut weights = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            weights.push((site_bit(n, i) | site_bit(n, j), c * spec.pair_weight(i, j)));
        }
    }
    (0..1usize << n)
        .map(|b| {
            weights
                .iter()
                .map(|&(mask, w)| {
                    if (b & mask).count_ones() % 2 == 0 {
                        w
                    } else {
                        -w
                    }
                })
                .sum()
        })
        .collect()
}

/// Worst-case per-shot spread of a setting, used when a single shot leaves
/// the sample variance undefined.
fn value_range(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    hi - lo
}

/// Simulates the measurement of `W(k)` with `plan.shots_per_setting` shots in
/// each active basis.
pub fn estimate_witness(
    state: &StateVector,
    spec: &WitnessSpec,
    plan: &ShotPlan,
) -> Result<ShotEstimate> {
    if state.n_qubits() != spec.n_qubits() {
        return Err(input_err!(
            "state has {} qubits, witness expects {}",
            state.n_qubits(),
            spec.n_qubits()
        ));
    }
    let shots = plan.shots_per_setting;
    if shots == 0 {
        return Err(input_err!("need at least one shot per setting"));
    }
    let mut sigma = 0.0;
    let mut variance = 0.0;
    let mut settings = 0;
    for axis in spec.active_axes() {
        settings += 1;
        let probs = readout_distribution(state, axis);
        let values = outcome_values(spec, axis);
        let sampler =
            WeightedIndex::new(&probs).map_err(|e| input_err!("readout distribution: {e}"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
        rng.set_stream(axis.index() as u64);

        // Welford accumulation keeps the variance stable at 1e6 shots.
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for t in 0..shots {
            let v = values[sampler.sample(&mut rng)];
            let delta = v - mean;
            mean += delta / (t + 1) as f64;
            m2 += delta * (v - mean);
        }
        sigma += mean;
        variance += if shots > 1 {
            m2 / (shots - 1) as f64 / shots as f64
        } else {
            let r = value_range(&values);
            r * r / 4.0
        };
    }
    Ok(ShotEstimate {
        estimate: 1.0 - sigma,
        std_error: variance.sqrt(),
        settings,
    })
}

/// SplitMix64 step, used to derive independent grid-point seeds.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub shots: usize,
    pub estimate: f64,
    pub std_error: f64,
}

/// One estimate per entry of `shot_grid`, each from its own substream.
pub fn convergence_curve(
    state: &StateVector,
    spec: &WitnessSpec,
    shot_grid: &[usize],
    seed: u64,
) -> Result<Vec<CurvePoint>> {
    if shot_grid.is_empty() {
        return Err(input_err!("shot grid is empty"));
    }
    shot_grid
        .iter()
        .enumerate()
        .map(|(g, &shots)| {
            let plan = ShotPlan::new(shots, derive_seed(seed, g as u64))?;
            let e = estimate_witness(state, spec, &plan)?;
            Ok(CurvePoint {
                shots,
                estimate: e.estimate,
                std_error: e.std_error,
            })
        })
        .collect()
}

/// Least-squares slope of `ln std_error` against `ln shots`; `-1/2` for an
/// unbiased Monte Carlo estimator.
pub fn log_log_slope(curve: &[CurvePoint]) -> Result<f64> {
    if curve.len() < 2 {
        return Err(input_err!("need at least two curve points"));
    }
    if curve.iter().any(|p| !(p.std_error > 0.0)) {
        return Err(input_err!("std_error must be positive for a log-log fit"));
    }
    let n = curve.len() as f64;
    let xs: Vec<f64> = curve.iter().map(|p| (p.shots as f64).ln()).collect();
    let ys: Vec<f64> = curve.iter().map(|p| p.std_error.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if var == 0.0 {
        return Err(input_err!("shot grid needs at least two distinct sizes"));
    }
    Ok(cov / var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correl::two_point;
    use crate::qstate::{basis_state, dicke, phased_dicke};
    use crate::witness::witness_value;
    use core::f64::consts::PI;

    #[test]
    fn readout_reproduces_correlators() {
        let s = phased_dicke(3, 1).unwrap();
        for axis in PauliAxis::ALL {
            let probs = readout_distribution(&s, axis);
            assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            let mut zz = 0.0;
            for (b, p) in probs.iter().enumerate() {
                let parity = (b & 0b110).count_ones() % 2;
                zz += if parity == 0 { *p } else { -*p };
            }
            assert!(
                (zz - two_point(&s, 0, 1, axis, axis).unwrap()).abs() < 1e-14,
                "{axis}"
            );
        }
    }

    #[test]
    fn deterministic_outcomes_have_zero_error() {
        let s = basis_state(4, "0000").unwrap();
        let spec = WitnessSpec::new(4, 0.0, [0.0, 0.0, 1.0]).unwrap();
        let e = estimate_witness(&s, &spec, &ShotPlan::new(1000, 3).unwrap()).unwrap();
        assert_eq!(e.std_error, 0.0);
        assert!((e.estimate - witness_value(&s, &spec).unwrap()).abs() < 1e-12);
        assert_eq!(e.settings, 1);
    }

    #[test]
    fn single_shot_is_defined() {
        let s = dicke(4, 2).unwrap();
        let spec = WitnessSpec::new(4, 0.0, [1.0, 1.0, -1.0]).unwrap();
        let e = estimate_witness(&s, &spec, &ShotPlan::new(1, 0).unwrap()).unwrap();
        assert!(e.std_error > 0.0 && e.std_error.is_finite());
        assert!(ShotPlan::new(0, 0).is_err());
    }

    #[test]
    fn empty_coefficients_estimate_one() {
        let s = phased_dicke(4, 2).unwrap();
        let spec = WitnessSpec::new(4, PI, [0.0; 3]).unwrap();
        let curve = convergence_curve(&s, &spec, &[10, 100], 1).unwrap();
        assert!(curve
            .iter()
            .all(|p| p.estimate == 1.0 && p.std_error == 0.0));
    }

    #[test]
    fn same_seed_same_output() {
        let s = phased_dicke(4, 2).unwrap();
        let spec = WitnessSpec::new(4, PI, [1.0; 3]).unwrap();
        let a = convergence_curve(&s, &spec, &[100, 1000], 9).unwrap();
        let b = convergence_curve(&s, &spec, &[100, 1000], 9).unwrap();
        assert_eq!(a, b);
        let c = convergence_curve(&s, &spec, &[100, 1000], 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn estimate_tracks_exact_value() {
        let s = phased_dicke(4, 2).unwrap();
        let spec = WitnessSpec::new(4, PI, [1.0; 3]).unwrap();
        let curve = convergence_curve(&s, &spec, &[10_000], 5).unwrap();
        let p = curve[0];
        assert!((p.estimate + 4.0 / 9.0).abs() < 3.0 * p.std_error, "{p:?}");
    }

    #[test]
    fn slope_of_exact_power_law() {
        let curve: Vec<CurvePoint> = [100usize, 400, 1600]
            .iter()
            .map(|&shots| CurvePoint {
                shots,
                estimate: 0.0,
                std_error: 1.0 / (shots as f64).sqrt(),
            })
            .collect();
        assert!((log_log_slope(&curve).unwrap() + 0.5).abs() < 1e-12);
        assert!(log_log_slope(&curve[..1]).is_err());
    }
}
