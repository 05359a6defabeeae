//! Maximum of `<Sigma(k)>` over biseparable and fully product pure states.
//!
//! The maximum of a linear functional over a convex hull is attained at an
//! extreme point, so pure states that factorize across a single cut bound
//! every (mixed) biseparable state. The optimizer is a see-saw: with all
//! factors but one held fixed, `<Sigma>` is a Hermitian form in the free
//! factor, maximized exactly by the top eigenvector of the contracted operator.
//!
//! Random restarts are seeded per `(cut index, restart index)`: the generator
//! is ChaCha8 seeded with the user seed, on stream `(cut << 32) | restart`.
//! The product ansatz uses cut index `u32::MAX`.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{input_err, Error, Result};
use crate::pauli::site_bit;
use crate::qstate::{check_dense, random_unit_vector, QubitState, StateVector};
use crate::witness::{sigma_operator, sigma_value, WitnessSpec};
use crate::C64;

/// Tolerance for re-verifying a reported bound against its stored state.
pub const SOUNDNESS_TOL: f64 = 1e-9;

const PRODUCT_STREAM: u64 = u32::MAX as u64;

/// A cut of the register into two nonempty parts, with site 0 in `part_a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bipartition {
    n_qubits: usize,
    part_a: Vec<usize>,
    part_b: Vec<usize>,
}

impl Bipartition {
    /// Builds the canonical cut with `sites` on one side.
    pub fn new(n_qubits: usize, sites: &[usize]) -> Result<Self> {
        let mut in_a = vec![false; n_qubits];
        for &s in sites {
            if s >= n_qubits {
                return Err(input_err!("site {s} out of range for {n_qubits} qubits"));
            }
            in_a[s] = true;
        }
        if n_qubits > 0 && !in_a[0] {
            in_a.iter_mut().for_each(|x| *x = !*x);
        }
        let part_a: Vec<usize> = (0..n_qubits).filter(|&s| in_a[s]).collect();
        let part_b: Vec<usize> = (0..n_qubits).filter(|&s| !in_a[s]).collect();
        if part_a.is_empty() || part_b.is_empty() {
            return Err(input_err!("both sides of a cut must be nonempty"));
        }
        Ok(Bipartition {
            n_qubits,
            part_a,
            part_b,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn part_a(&self) -> &[usize] {
        &self.part_a
    }

    pub fn part_b(&self) -> &[usize] {
        &self.part_b
    }
}

impl core::fmt::Display for Bipartition {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let join = |f: &mut core::fmt::Formatter<'_>, part: &[usize]| -> core::fmt::Result {
            write!(f, "{{")?;
            for (t, s) in part.iter().enumerate() {
                if t > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", s + 1)?;
            }
            write!(f, "}}")
        };
        join(f, &self.part_a)?;
        write!(f, "|")?;
        join(f, &self.part_b)
    }
}

/// All `2^(N-1) - 1` canonical cuts.
///
/// Bit `t` of the enumeration counter puts site `t + 1` into `part_a`, so for
/// three qubits the order is `{1}|{2,3}`, `{1,2}|{3}`, `{1,3}|{2}` (1-based).
pub fn enumerate_bipartitions(n_qubits: usize) -> Result<Vec<Bipartition>> {
    if n_qubits < 2 {
        return Err(input_err!("need at least 2 qubits to cut"));
    }
    let count = (1usize << (n_qubits - 1)) - 1;
    (0..count)
        .map(|mask| {
            let sites: Vec<usize> = core::iter::once(0)
                .chain((1..n_qubits).filter(|s| mask & (1 << (s - 1)) != 0))
                .collect();
            Bipartition::new(n_qubits, &sites)
        })
        .collect()
}

/// Tuning for the see-saw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeesawOptions {
    pub restarts: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SeesawOptions {
    fn default() -> Self {
        SeesawOptions {
            restarts: 200,
            tol: 1e-10,
            max_iter: 500,
            seed: 0,
        }
    }
}

/// Index tables mapping a group of sites and its complement into the register.
struct Split {
    inner: Vec<usize>,
    outer: Vec<usize>,
}

/// Global basis bits for every local index of `sites` (first site is the
/// most significant local bit).
fn scatter_table(n_qubits: usize, sites: &[usize]) -> Vec<usize> {
    let m = sites.len();
    (0..1usize << m)
        .map(|local| {
            sites
                .iter()
                .enumerate()
                .filter(|(t, _)| local & (1 << (m - 1 - t)) != 0)
                .fold(0, |acc, (_, &s)| acc | site_bit(n_qubits, s))
        })
        .collect()
}

fn gather(n_qubits: usize, sites: &[usize], global: usize) -> usize {
    let m = sites.len();
    sites
        .iter()
        .enumerate()
        .filter(|(_, &s)| global & site_bit(n_qubits, s) != 0)
        .fold(0, |acc, (t, _)| acc | (1 << (m - 1 - t)))
}

impl Split {
    fn new(n_qubits: usize, group: &[usize]) -> (Self, Vec<usize>) {
        let complement: Vec<usize> = (0..n_qubits).filter(|s| !group.contains(s)).collect();
        let split = Split {
            inner: scatter_table(n_qubits, group),
            outer: scatter_table(n_qubits, &complement),
        };
        (split, complement)
    }

    /// `<env| op |env>` as an operator on the group, by index slicing.
    fn contract(&self, op: &DMatrix<C64>, env: &[C64]) -> DMatrix<C64> {
        let d = self.inner.len();
        let mut out = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
        for (c, &gc) in self.inner.iter().enumerate() {
            // op applied to |c> (x) |env>, projected back onto <r| (x) <env|
            let mut column = vec![C64::new(0.0, 0.0); op.nrows()];
            for (b, &gb) in self.outer.iter().enumerate() {
                if env[b] == C64::new(0.0, 0.0) {
                    continue;
                }
                let src = op.column(gc | gb);
                for (row, v) in column.iter_mut().enumerate() {
                    *v += src[row] * env[b];
                }
            }
            for (r, &gr) in self.inner.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (b, &gb) in self.outer.iter().enumerate() {
                    acc += env[b].conj() * column[gr | gb];
                }
                out[(r, c)] = acc;
            }
        }
        out
    }
}

/// Effective operator on `group` for a fixed state on the complement,
/// `<phi| op |phi>` with the complement's sites in ascending order.
pub fn effective_operator(
    op: &DMatrix<C64>,
    n_qubits: usize,
    group: &[usize],
    complement_state: &[C64],
) -> DMatrix<C64> {
    Split::new(n_qubits, group).0.contract(op, complement_state)
}

/// Largest eigenvalue and a normalized eigenvector of a Hermitian matrix.
pub fn top_eigenpair(m: DMatrix<C64>) -> (f64, Vec<C64>) {
    let n = m.nrows();
    // symmetrize away round-off before handing to the Hermitian solver
    let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut best = 0;
    for i in 1..n {
        if eig.eigenvalues[i] > eig.eigenvalues[best] {
            best = i;
        }
    }
    let v: Vec<C64> = eig.eigenvectors.column(best).iter().cloned().collect();
    (eig.eigenvalues[best], v)
}

/// Largest eigenvalue of `Sigma(k)`: the maximum over all states.
pub fn max_eigenvalue(spec: &WitnessSpec) -> Result<f64> {
    Ok(top_eigenpair(sigma_operator(spec)?).0)
}

/// Outcome of one see-saw run from one starting point.
#[derive(Debug, Clone, PartialEq)]
pub struct SeesawRun {
    pub value: f64,
    /// One normalized state per group, in group order.
    pub factors: Vec<Vec<C64>>,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after every half-step (one entry per factor update).
    pub trajectory: Vec<f64>,
}

/// Amplitude of the product of `factors` (all groups except `skip`) on the
/// complement index `b`.
fn environment(
    n_qubits: usize,
    groups: &[Vec<usize>],
    factors: &[Vec<C64>],
    skip: usize,
    outer: &[usize],
) -> Vec<C64> {
    outer
        .iter()
        .map(|&global| {
            groups
                .iter()
                .zip(factors)
                .enumerate()
                .filter(|(g, _)| *g != skip)
                .map(|(_, (sites, f))| f[gather(n_qubits, sites, global)])
                .product()
        })
        .collect()
}

/// Alternating maximization of `<op>` over product states with the given
/// site groups, starting from `factors`.
pub fn seesaw_from(
    op: &DMatrix<C64>,
    n_qubits: usize,
    groups: &[Vec<usize>],
    mut factors: Vec<Vec<C64>>,
    tol: f64,
    max_iter: usize,
) -> SeesawRun {
    let splits: Vec<Split> = groups.iter().map(|g| Split::new(n_qubits, g).0).collect();
    let mut trajectory = Vec::new();
    let mut value = f64::NEG_INFINITY;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let before = value;
        for (g, split) in splits.iter().enumerate() {
            let env = environment(n_qubits, groups, &factors, g, &split.outer);
            let (top, vec) = top_eigenpair(split.contract(op, &env));
            factors[g] = vec;
            value = top;
            trajectory.push(top);
        }
        if value - before < tol {
            converged = true;
            break;
        }
    }
    SeesawRun {
        value,
        factors,
        iterations,
        converged,
        trajectory,
    }
}

fn restart_rng(seed: u64, cut_index: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((cut_index << 32) | restart as u64);
    rng
}

/// Best of `opts.restarts` runs; ties keep the earliest restart.
fn best_of_restarts(
    op: &DMatrix<C64>,
    n_qubits: usize,
    groups: &[Vec<usize>],
    opts: &SeesawOptions,
    cut_index: u64,
) -> Result<SeesawRun> {
    if opts.restarts == 0 {
        return Err(input_err!("see-saw needs at least one restart"));
    }
    let mut best: Option<SeesawRun> = None;
    for r in 0..opts.restarts {
        let mut rng = restart_rng(opts.seed, cut_index, r);
        let init = groups
            .iter()
            .map(|g| random_unit_vector(&mut rng, 1 << g.len()))
            .collect();
        let run = seesaw_from(op, n_qubits, groups, init, opts.tol, opts.max_iter);
        if best.as_ref().is_none_or(|b| run.value > b.value) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Tensor product of per-group states back into register order.
pub fn assemble(
    n_qubits: usize,
    groups: &[Vec<usize>],
    factors: &[Vec<C64>],
) -> Result<StateVector> {
    let amplitudes = (0..1usize << n_qubits)
        .map(|global| {
            groups
                .iter()
                .zip(factors)
                .map(|(sites, f)| f[gather(n_qubits, sites, global)])
                .product()
        })
        .collect();
    StateVector::normalize(n_qubits, amplitudes)
}

/// Best biseparable value found for one spec.
#[derive(Debug, Clone, PartialEq)]
pub struct BisepResult {
    pub spec: WitnessSpec,
    pub bound: f64,
    pub best_cut: Bipartition,
    /// States on `best_cut.part_a()` and `best_cut.part_b()`.
    pub best_state: (StateVector, StateVector),
    /// Restarts per cut.
    pub restarts_used: usize,
    pub converged: bool,
    pub iterations: usize,
}

impl BisepResult {
    /// The achieving biseparable state on the full register.
    pub fn assembled_state(&self) -> Result<StateVector> {
        let groups = [self.best_cut.part_a.clone(), self.best_cut.part_b.clone()];
        let factors = [
            self.best_state.0.amplitudes().to_vec(),
            self.best_state.1.amplitudes().to_vec(),
        ];
        assemble(self.best_cut.n_qubits, &groups, &factors)
    }
}

fn check_cut(spec: &WitnessSpec, cut: &Bipartition) -> Result<()> {
    if cut.n_qubits != spec.n_qubits() {
        return Err(input_err!(
            "cut is over {} qubits, spec over {}",
            cut.n_qubits,
            spec.n_qubits()
        ));
    }
    Ok(())
}

fn finish(
    spec: &WitnessSpec,
    cut: &Bipartition,
    run: SeesawRun,
    opts: &SeesawOptions,
) -> Result<BisepResult> {
    let state_a = StateVector::normalize(cut.part_a.len(), run.factors[0].clone())?;
    let state_b = StateVector::normalize(cut.part_b.len(), run.factors[1].clone())?;
    let result = BisepResult {
        spec: spec.clone(),
        bound: run.value,
        best_cut: cut.clone(),
        best_state: (state_a, state_b),
        restarts_used: opts.restarts,
        converged: run.converged,
        iterations: run.iterations,
    };
    let recomputed = sigma_value(&result.assembled_state()?, spec)?;
    if (recomputed - result.bound).abs() > SOUNDNESS_TOL {
        return Err(Error::Check(alloc::format!(
            "see-saw value {} not reproduced by its state ({recomputed})",
            result.bound
        )));
    }
    Ok(result)
}

fn seesaw_on_operator(
    op: &DMatrix<C64>,
    spec: &WitnessSpec,
    cut: &Bipartition,
    cut_index: u64,
    opts: &SeesawOptions,
) -> Result<BisepResult> {
    let groups = [cut.part_a.clone(), cut.part_b.clone()];
    let run = best_of_restarts(op, spec.n_qubits(), &groups, opts, cut_index)?;
    finish(spec, cut, run, opts)
}

/// See-saw maximum of `<Sigma>` over states product across `cut`.
pub fn seesaw_max(
    spec: &WitnessSpec,
    cut: &Bipartition,
    opts: &SeesawOptions,
) -> Result<BisepResult> {
    check_cut(spec, cut)?;
    check_dense(spec.n_qubits())?;
    let op = sigma_operator(spec)?;
    seesaw_on_operator(&op, spec, cut, 0, opts)
}

/// Maximum of [`seesaw_max`] over every canonical cut.
pub fn bisep_bound(spec: &WitnessSpec, opts: &SeesawOptions) -> Result<BisepResult> {
    let op = sigma_operator(spec)?;
    let mut best: Option<BisepResult> = None;
    for (c, cut) in enumerate_bipartitions(spec.n_qubits())?.iter().enumerate() {
        let result = seesaw_on_operator(&op, spec, cut, c as u64, opts)?;
        if best.as_ref().is_none_or(|b| result.bound > b.bound) {
            best = Some(result);
        }
    }
    Ok(best.expect("at least one cut"))
}

/// Best fully product state found by cycling single-qubit updates.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductBound {
    pub bound: f64,
    pub state: StateVector,
    pub converged: bool,
}

/// See-saw over the fully product ansatz.
pub fn product_bound(spec: &WitnessSpec, opts: &SeesawOptions) -> Result<ProductBound> {
    let n = spec.n_qubits();
    let op = sigma_operator(spec)?;
    let groups: Vec<Vec<usize>> = (0..n).map(|s| vec![s]).collect();
    let run = best_of_restarts(&op, n, &groups, opts, PRODUCT_STREAM)?;
    let state = assemble(n, &groups, &run.factors)?;
    let recomputed = sigma_value(&state, spec)?;
    if (recomputed - run.value).abs() > SOUNDNESS_TOL {
        return Err(Error::Check(alloc::format!(
            "product see-saw value {} not reproduced by its state ({recomputed})",
            run.value
        )));
    }
    Ok(ProductBound {
        bound: run.value,
        state,
        converged: run.converged,
    })
}

/// `true` iff `<Sigma>` on `state` exceeds the biseparable bound by more than `tol`.
pub fn gme_detected<S: QubitState + ?Sized>(
    state: &S,
    spec: &WitnessSpec,
    bisep: &BisepResult,
    tol: f64,
) -> Result<bool> {
    if bisep.spec != *spec {
        return Err(input_err!(
            "biseparable bound was computed for a different witness"
        ));
    }
    Ok(sigma_value(state, spec)? > bisep.bound + tol)
}
