//! Where a command's state comes from: a builtin family or a JSON file.
//!
//! Builtins are written `name:args`:
//!
//! | source | meaning |
//! |---|---|
//! | `dicke:N,L` | Dicke state with `L` excitations |
//! | `phased-dicke:N,L` | phased Dicke state |
//! | `ghz-superposition:THETA[,+/-]` | four-qubit GHZ superposition |
//! | `dicke-ghz-superposition:THETA[,+/-]` | `|4,2>` plus GHZ |
//! | `basis:BITS` | computational basis state |
//! | `product:x,y,z;x,y,z;...` | pure product state from unit Bloch vectors |
//!
//! Anything else is read as a path to a state file.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use structfac_core::qstate::{
    basis_state, dicke, dicke_ghz_superposition, ghz_superposition, phased_dicke, product_state,
};
use structfac_core::{BlochVector, Branch, StateVector};

use crate::angle::{parse_angle, parse_reals};
use crate::error::{input, CliError};
use crate::formats::read_state;

pub const CATALOG: [&str; 6] = [
    "dicke",
    "phased-dicke",
    "ghz-superposition",
    "dicke-ghz-superposition",
    "basis",
    "product",
];

#[derive(Debug, Clone, PartialEq)]
pub enum StateSource {
    Dicke { n: usize, l: usize },
    PhasedDicke { n: usize, l: usize },
    GhzSuperposition { theta: f64, branch: Branch },
    DickeGhzSuperposition { theta: f64, branch: Branch },
    Basis(String),
    Product(Vec<BlochVector>),
    File(PathBuf),
}

fn pair(args: &str) -> Result<(usize, usize), CliError> {
    let parts: Vec<&str> = args.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [n, l] => Ok((
            n.parse().map_err(|_| input!("bad qubit count {n:?}"))?,
            l.parse()
                .map_err(|_| input!("bad excitation count {l:?}"))?,
        )),
        _ => Err(input!("expected N,L, got {args:?}")),
    }
}

fn angle_and_branch(args: &str) -> Result<(f64, Branch), CliError> {
    let (theta, sign) = match args.rsplit_once(',') {
        Some((t, s)) => (t, s.trim()),
        None => (args, "+"),
    };
    let branch = match sign {
        "+" | "plus" => Branch::Plus,
        "-" | "minus" => Branch::Minus,
        other => return Err(input!("branch must be + or -, got {other:?}")),
    };
    Ok((parse_angle(theta)?, branch))
}

impl FromStr for StateSource {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let Some((name, args)) = s.split_once(':') else {
            return Ok(StateSource::File(PathBuf::from(s)));
        };
        Ok(match name.trim() {
            "dicke" => {
                let (n, l) = pair(args)?;
                StateSource::Dicke { n, l }
            }
            "phased-dicke" => {
                let (n, l) = pair(args)?;
                StateSource::PhasedDicke { n, l }
            }
            "ghz-superposition" => {
                let (theta, branch) = angle_and_branch(args)?;
                StateSource::GhzSuperposition { theta, branch }
            }
            "dicke-ghz-superposition" => {
                let (theta, branch) = angle_and_branch(args)?;
                StateSource::DickeGhzSuperposition { theta, branch }
            }
            "basis" => StateSource::Basis(args.trim().to_string()),
            "product" => {
                let blochs = args
                    .split(';')
                    .map(|t| match parse_reals(t)?.as_slice() {
                        &[x, y, z] => Ok(BlochVector::new(x, y, z)?),
                        _ => Err(input!("Bloch vector needs three components, got {t:?}")),
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                StateSource::Product(blochs)
            }
            _ => StateSource::File(PathBuf::from(s)),
        })
    }
}

impl StateSource {
    pub fn load(&self) -> Result<StateVector, CliError> {
        Ok(match self {
            StateSource::Dicke { n, l } => dicke(*n, *l)?,
            StateSource::PhasedDicke { n, l } => phased_dicke(*n, *l)?,
            StateSource::GhzSuperposition { theta, branch } => ghz_superposition(*theta, *branch),
            StateSource::DickeGhzSuperposition { theta, branch } => {
                dicke_ghz_superposition(*theta, *branch)
            }
            StateSource::Basis(bits) => basis_state(bits.len(), bits)?,
            StateSource::Product(blochs) => product_state(blochs)?,
            StateSource::File(path) => {
                if !path.exists() {
                    return Err(input!(
                        "{} is neither a state file nor a builtin ({})",
                        path.display(),
                        CATALOG.join(", ")
                    ));
                }
                read_state(path)?
            }
        })
    }
}

/// A loaded state together with the text that named it.
#[derive(Debug, Clone)]
pub struct LoadedState {
    pub id: String,
    pub state: StateVector,
}

impl LoadedState {
    pub fn from_arg(text: &str) -> Result<Self, CliError> {
        Ok(LoadedState {
            id: text.to_string(),
            state: text.parse::<StateSource>()?.load()?,
        })
    }
}

impl fmt::Display for LoadedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}
