//! JSON problem files: parsing, validation into a [`Scenario`], and the
//! canonical re-serialization used for reproducible reports.
//!
//! Complex numbers are explicit `[re, im]` pairs; no string-encoded
//! complexes, no locale ambiguity, bit-reproducible round trips.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;
use crate::quantum::{depolarize, Basis, QuantumState, Scenario};

/// On-disk problem description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub dimension: usize,
    pub state: StateSpec,
    pub basis_a: Vec<Vec<[f64; 2]>>,
    pub basis_b: Vec<Vec<[f64; 2]>>,
    /// Optional depolarization strength applied to the state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "data", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateSpec {
    Pure(Vec<[f64; 2]>),
    Mixed(Vec<Vec<[f64; 2]>>),
}

/// A validated problem: the effective scenario (after any depolarization)
/// plus the pure pre-noise scenario when one exists.
#[derive(Debug, Clone)]
pub struct Problem {
    pub file: ProblemFile,
    pub scenario: Scenario,
    /// The scenario before depolarization, when the input state was pure.
    pub pure_scenario: Option<Scenario>,
    pub eta: f64,
}

fn to_c(pair: [f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

fn parse_vectors(raw: &[Vec<[f64; 2]>], d: usize, field: &str) -> Result<Vec<Vec<Complex64>>> {
    if raw.len() != d {
        return Err(Error::Parse(format!(
            "{field}: expected {d} vectors, found {}",
            raw.len()
        )));
    }
    raw.iter()
        .enumerate()
        .map(|(i, v)| {
            if v.len() != d {
                return Err(Error::Parse(format!(
                    "{field}: vector {i} has length {}, expected {d}",
                    v.len()
                )));
            }
            Ok(v.iter().copied().map(to_c).collect())
        })
        .collect()
}

/// Parses and validates a problem file. Schema violations surface as parse
/// errors carrying the offending field; numeric violations (orthonormality,
/// normalization, positivity) as validation errors with the residual.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let file: ProblemFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let d = file.dimension;
    if d < 2 {
        return Err(Error::Parse(format!("dimension must be at least 2, got {d}")));
    }
    let basis_a = Basis::new(parse_vectors(&file.basis_a, d, "basis_a")?)
        .map_err(|e| Error::Validation(format!("basis_a: {e}")))?;
    let basis_b = Basis::new(parse_vectors(&file.basis_b, d, "basis_b")?)
        .map_err(|e| Error::Validation(format!("basis_b: {e}")))?;
    let state = match &file.state {
        StateSpec::Pure(amps) => {
            if amps.len() != d {
                return Err(Error::Parse(format!(
                    "state.data: expected {d} amplitudes, found {}",
                    amps.len()
                )));
            }
            QuantumState::new_pure(amps.iter().copied().map(to_c).collect())
                .map_err(|e| Error::Validation(format!("state: {e}")))?
        }
        StateSpec::Mixed(rows) => {
            if rows.len() != d {
                return Err(Error::Parse(format!(
                    "state.data: expected {d} rows, found {}",
                    rows.len()
                )));
            }
            for (i, row) in rows.iter().enumerate() {
                if row.len() != d {
                    return Err(Error::Parse(format!(
                        "state.data: row {i} has length {}, expected {d}",
                        row.len()
                    )));
                }
            }
            let m = ComplexMatrix::from_fn(d, d, |r, c| to_c(rows[r][c]));
            QuantumState::new_mixed(m).map_err(|e| Error::Validation(format!("state: {e}")))?
        }
    };
    let eta = file.eta.unwrap_or(0.0);
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::Validation(format!("eta {eta} outside [0, 1]")));
    }
    let pure_scenario = if state.is_pure() {
        Some(Scenario::new(state.clone(), basis_a.clone(), basis_b.clone())?)
    } else {
        None
    };
    let effective_state = if eta > 0.0 {
        depolarize(&state, eta)?
    } else {
        state
    };
    let scenario = Scenario::new(effective_state, basis_a, basis_b)?;
    Ok(Problem {
        file,
        scenario,
        pure_scenario,
        eta,
    })
}

/// The on-disk form of a validated problem: the parsed document itself.
/// Round trips are idempotent once the float formatting has canonicalized,
/// and the pre-depolarization state stays pre-depolarization.
pub fn to_problem_file(p: &Problem) -> ProblemFile {
    p.file.clone()
}
