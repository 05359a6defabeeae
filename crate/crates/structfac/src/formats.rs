//! JSON and CSV shapes for states, witness specs and command output.
//!
//! CSV numbers carry 17 significant digits; JSON uses serde_json's
//! round-trip formatting. Site indices in every file are 1-based.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use structfac_core::bisep::{Bipartition, BisepResult};
use structfac_core::correl::{CorrelatorEntry, SiteLayout};
use structfac_core::qstate::{bits_of, max_qubits};
use structfac_core::sampling::CurvePoint;
use structfac_core::witness::ScanPoint;
use structfac_core::{Error as CoreError, StateVector, WitnessSpec, C64};

use crate::error::{input, CliError};

/// Norm slack within which a state file is silently renormalized.
pub const RENORMALIZE_TOL: f64 = 1e-9;

/// `x` with 17 significant digits.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateTerm {
    pub basis: String,
    pub re: f64,
    pub im: f64,
}

/// `{n_qubits, terms: [{basis, re, im}]}` listing nonzero amplitudes only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub n_qubits: usize,
    pub terms: Vec<StateTerm>,
}

impl StateFile {
    pub fn from_state(state: &StateVector) -> Self {
        let n = state.n_qubits();
        let terms = state
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != C64::new(0.0, 0.0))
            .map(|(b, a)| StateTerm {
                basis: bits_of(n, b),
                re: a.re,
                im: a.im,
            })
            .collect();
        StateFile { n_qubits: n, terms }
    }

    /// Rebuilds the state; renormalizes if the norm is off by less than
    /// [`RENORMALIZE_TOL`], rejects otherwise.
    pub fn to_state(&self) -> Result<StateVector, CliError> {
        let n = self.n_qubits;
        if n == 0 {
            return Err(input!("state file needs n_qubits >= 1"));
        }
        if n > max_qubits() {
            return Err(CoreError::Resource(format!(
                "{n} qubits exceeds the cap of {}",
                max_qubits()
            ))
            .into());
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        let mut seen = vec![false; 1 << n];
        for term in &self.terms {
            if term.basis.len() != n || !term.basis.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(input!("basis {:?} is not a {n}-bit string", term.basis));
            }
            if !term.re.is_finite() || !term.im.is_finite() {
                return Err(input!("non-finite amplitude on {:?}", term.basis));
            }
            let index = usize::from_str_radix(&term.basis, 2)
                .map_err(|_| input!("bad basis {:?}", term.basis))?;
            if std::mem::replace(&mut seen[index], true) {
                return Err(input!("basis {:?} listed twice", term.basis));
            }
            amps[index] = C64::new(term.re, term.im);
        }
        Ok(StateVector::from_amplitudes_renormalizing(
            n,
            amps,
            RENORMALIZE_TOL,
        )?)
    }
}

/// `{n_qubits, k, c: [cx, cy, cz], positions: [...]}`; positions default to
/// the unit-spaced chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecFile {
    pub n_qubits: usize,
    pub k: f64,
    pub c: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<f64>>,
}

impl SpecFile {
    pub fn from_spec(spec: &WitnessSpec) -> Self {
        SpecFile {
            n_qubits: spec.n_qubits(),
            k: spec.k(),
            c: spec.coeffs(),
            positions: Some(spec.layout().positions().to_vec()),
        }
    }

    pub fn to_spec(&self) -> Result<WitnessSpec, CliError> {
        let layout = match &self.positions {
            Some(p) => SiteLayout::new(p.clone())?,
            None => SiteLayout::uniform(self.n_qubits),
        };
        Ok(WitnessSpec::with_layout(
            self.n_qubits,
            self.k,
            self.c,
            layout,
        )?)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_state(path: &Path) -> Result<StateVector, CliError> {
    serde_json::from_str::<StateFile>(&read(path)?)?.to_state()
}

pub fn read_spec(path: &Path) -> Result<WitnessSpec, CliError> {
    serde_json::from_str::<SpecFile>(&read(path)?)?.to_spec()
}

/// A cut with 1-based site lists and its `{..}|{..}` label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutFile {
    pub part_a: Vec<usize>,
    pub part_b: Vec<usize>,
    pub label: String,
}

impl CutFile {
    pub fn from_cut(cut: &Bipartition) -> Self {
        CutFile {
            part_a: cut.part_a().iter().map(|s| s + 1).collect(),
            part_b: cut.part_b().iter().map(|s| s + 1).collect(),
            label: cut.to_string(),
        }
    }
}

/// JSON form of a biseparable bound, with both factors of the achieving state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BisepFile {
    pub spec: SpecFile,
    pub bound: f64,
    pub best_cut: CutFile,
    pub best_state: [StateFile; 2],
    pub restarts_used: usize,
    pub converged: bool,
    pub iterations: usize,
    /// Present when a state was checked against the bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gme_check: Option<GmeCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GmeCheck {
    pub state: String,
    pub sigma: f64,
    pub gme_detected: bool,
}

impl BisepFile {
    pub fn from_result(r: &BisepResult) -> Self {
        BisepFile {
            spec: SpecFile::from_spec(&r.spec),
            bound: r.bound,
            best_cut: CutFile::from_cut(&r.best_cut),
            best_state: [
                StateFile::from_state(&r.best_state.0),
                StateFile::from_state(&r.best_state.1),
            ],
            restarts_used: r.restarts_used,
            converged: r.converged,
            iterations: r.iterations,
            gme_check: None,
        }
    }
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::Writer::from_writer(w)
}

/// Header `k,sigma,witness`.
pub fn write_scan_csv<W: Write>(w: W, points: &[ScanPoint]) -> Result<(), CliError> {
    let mut out = csv_writer(w);
    out.write_record(["k", "sigma", "witness"])?;
    for p in points {
        out.write_record([sig17(p.k), sig17(p.sigma), sig17(p.witness)])?;
    }
    out.flush()?;
    Ok(())
}

/// Header `shots,estimate,std_error`.
pub fn write_curve_csv<W: Write>(w: W, points: &[CurvePoint]) -> Result<(), CliError> {
    let mut out = csv_writer(w);
    out.write_record(["shots", "estimate", "std_error"])?;
    for p in points {
        out.write_record([p.shots.to_string(), sig17(p.estimate), sig17(p.std_error)])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustnessRow {
    pub state_id: String,
    pub spec: String,
    pub p_star: f64,
    pub q_star: f64,
}

/// Header `state_id,spec,p_star,q_star`.
pub fn write_robustness_csv<W: Write>(w: W, rows: &[RobustnessRow]) -> Result<(), CliError> {
    let mut out = csv_writer(w);
    out.write_record(["state_id", "spec", "p_star", "q_star"])?;
    for r in rows {
        out.write_record([
            r.state_id.clone(),
            r.spec.clone(),
            sig17(r.p_star),
            sig17(r.q_star),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Header `i,j,alpha,beta,value`.
pub fn write_correlators_csv<W: Write>(w: W, rows: &[CorrelatorEntry]) -> Result<(), CliError> {
    let mut out = csv_writer(w);
    out.write_record(["i", "j", "alpha", "beta", "value"])?;
    for r in rows {
        out.write_record([
            (r.i + 1).to_string(),
            (r.j + 1).to_string(),
            r.a.to_string(),
            r.b.to_string(),
            sig17(r.value),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Compact one-line description, e.g. `k=3.141592653589793 c=(1,1,1)`.
pub fn spec_label(spec: &WitnessSpec) -> String {
    let [x, y, z] = spec.coeffs();
    let mut label = format!("k={} c=({x},{y},{z})", spec.k());
    if *spec.layout() != SiteLayout::uniform(spec.n_qubits()) {
        let p: Vec<String> = spec
            .layout()
            .positions()
            .iter()
            .map(f64::to_string)
            .collect();
        label.push_str(&format!(" positions=({})", p.join(",")));
    }
    label
}

#[cfg(test)]
mod tests {
    use super::*;
    use structfac_core::qstate::phased_dicke;

    #[test]
    fn state_round_trip() {
        let s = phased_dicke(4, 2).unwrap();
        let file = StateFile::from_state(&s);
        assert_eq!(file.terms.len(), 6);
        let json = serde_json::to_string(&file).unwrap();
        let back = serde_json::from_str::<StateFile>(&json)
            .unwrap()
            .to_state()
            .unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn renormalize_window() {
        let term = |basis: &str, re| StateTerm {
            basis: basis.into(),
            re,
            im: 0.0,
        };
        let slightly_off = StateFile {
            n_qubits: 1,
            terms: vec![term("0", 1.0 + 1e-10)],
        };
        assert_eq!(
            slightly_off.to_state().unwrap().amplitudes()[0],
            C64::new(1.0, 0.0)
        );
        let far_off = StateFile {
            n_qubits: 1,
            terms: vec![term("0", 1.1)],
        };
        assert!(far_off.to_state().is_err());
        let duplicate = StateFile {
            n_qubits: 1,
            terms: vec![term("1", 0.6), term("1", 0.8)],
        };
        assert!(duplicate.to_state().is_err());
        let wrong_len = StateFile {
            n_qubits: 2,
            terms: vec![term("1", 1.0)],
        };
        assert!(wrong_len.to_state().is_err());
    }

    #[test]
    fn spec_positions_default() {
        let f: SpecFile = serde_json::from_str(r#"{"n_qubits":3,"k":0.5,"c":[1,1,-1]}"#).unwrap();
        let spec = f.to_spec().unwrap();
        assert_eq!(spec.layout().positions(), &[0.0, 1.0, 2.0]);
        assert_eq!(SpecFile::from_spec(&spec).to_spec().unwrap(), spec);
        let bad: SpecFile = serde_json::from_str(r#"{"n_qubits":3,"k":0,"c":[2,1,1]}"#).unwrap();
        assert!(bad.to_spec().is_err());
    }

    #[test]
    fn csv_precision() {
        let mut buf = Vec::new();
        write_curve_csv(
            &mut buf,
            &[CurvePoint {
                shots: 10,
                estimate: -2.0 / 3.0,
                std_error: 0.1,
            }],
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "shots,estimate,std_error\n10,-6.6666666666666663e-1,1.0000000000000001e-1\n"
        );
        let value: f64 = text
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .nth(1)
            .unwrap()
            .parse()
            .unwrap();
        assert_eq!(value, -2.0 / 3.0);
    }
}
