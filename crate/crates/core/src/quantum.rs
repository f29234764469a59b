//! States, observables-as-eigenbases, Born-rule distributions, and the
//! post-measurement ensemble of a projective apparatus.
//!
//! Observables enter only through their eigenbases: eigenvalues never matter
//! for outcome statistics, and degenerate observables are out of scope — a
//! `Basis` fixes a measurement completely.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigenvalues, inner, vec_norm, ComplexMatrix};

/// Validation tolerance on the Gram matrix of a basis.
pub const GRAM_TOL: f64 = 1e-10;
/// Validation tolerance on norms, traces and probability sums.
pub const STATE_TOL: f64 = 1e-12;
/// Density-matrix eigenvalues may dip this far below zero from roundoff.
pub const EIGENVALUE_TOL: f64 = 1e-12;
/// Probabilities this far below zero are clamped to 0; anything lower is an
/// error in the caller's state, not roundoff.
pub const PROB_CLAMP: f64 = 1e-15;

/// A probability distribution over `d` outcomes, indexed 0..d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbDist {
    values: Vec<f64>,
}

impl ProbDist {
    /// Validates nonnegativity (clamping roundoff down to −`PROB_CLAMP`) and
    /// normalization within `STATE_TOL`, then renormalizes exactly.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_clamp(values, PROB_CLAMP)
    }

    fn with_clamp(mut values: Vec<f64>, clamp: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Dimension {
                context: "probability distribution length",
                expected: 1,
                got: 0,
            });
        }
        for v in values.iter_mut() {
            if !v.is_finite() {
                return Err(Error::Validation(format!("non-finite probability {v}")));
            }
            if *v < 0.0 {
                if *v < -clamp {
                    return Err(Error::Validation(format!(
                        "negative probability {v} below clamp threshold {clamp:e}"
                    )));
                }
                *v = 0.0;
            }
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > STATE_TOL {
            return Err(Error::Validation(format!(
                "probabilities sum to {sum}, expected 1 within {STATE_TOL:e}"
            )));
        }
        for v in values.iter_mut() {
            *v /= sum;
        }
        Ok(Self { values })
    }

    pub fn uniform(d: usize) -> Self {
        Self {
            values: vec![1.0 / d as f64; d],
        }
    }

    pub fn point_mass(d: usize, outcome: usize) -> Self {
        let mut values = vec![0.0; d];
        values[outcome] = 1.0;
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// An ordered orthonormal basis; vector `i` carries outcome label `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    vectors: Vec<Vec<Complex64>>,
}

impl Basis {
    /// Validates that the vectors form a square orthonormal system:
    /// ‖G − I‖_max ≤ `GRAM_TOL` where G is the Gram matrix.
    pub fn new(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let d = vectors.len();
        if d == 0 {
            return Err(Error::Dimension {
                context: "basis size",
                expected: 1,
                got: 0,
            });
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != d {
                return Err(Error::Dimension {
                    context: "basis vector length",
                    expected: d,
                    got: vectors[i].len(),
                });
            }
        }
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let g = inner(&vectors[i], &vectors[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        if worst > GRAM_TOL {
            return Err(Error::Validation(format!(
                "basis is not orthonormal: Gram residual {worst:e} exceeds {GRAM_TOL:e}"
            )));
        }
        Ok(Self { vectors })
    }

    pub fn computational(d: usize) -> Self {
        let vectors = (0..d)
            .map(|i| {
                let mut v = vec![Complex64::new(0.0, 0.0); d];
                v[i] = Complex64::new(1.0, 0.0);
                v
            })
            .collect();
        Self { vectors }
    }

    /// Eigenbasis of σz with the +1 eigenvector first: {|0⟩, |1⟩}.
    pub fn sigma_z() -> Self {
        Self::computational(2)
    }

    /// Eigenbasis of σx with the +1 eigenvector first: {|+⟩, |−⟩}.
    pub fn sigma_x() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            vectors: vec![
                vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
                vec![Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
            ],
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vector(&self, i: usize) -> &[Complex64] {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    /// Overlap matrix U with U_ij = ⟨selfᵢ|otherⱼ⟩.
    pub fn overlaps(&self, other: &Basis) -> Result<ComplexMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension {
                context: "basis overlap",
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(ComplexMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            inner(&self.vectors[i], &other.vectors[j])
        }))
    }
}

/// A pure state vector or a density matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure(Vec<Complex64>),
    Mixed(ComplexMatrix),
}

impl QuantumState {
    /// Validates unit norm within `STATE_TOL`, then renormalizes exactly.
    pub fn new_pure(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Dimension {
                context: "state dimension",
                expected: 1,
                got: 0,
            });
        }
        if !amplitudes.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Validation("non-finite amplitude".into()));
        }
        let n = vec_norm(&amplitudes);
        if (n - 1.0).abs() > STATE_TOL {
            return Err(Error::Validation(format!(
                "pure state norm {n} is not 1 within {STATE_TOL:e}"
            )));
        }
        for z in amplitudes.iter_mut() {
            *z /= n;
        }
        Ok(Self::Pure(amplitudes))
    }

    /// Validates Hermiticity, unit trace, and spectrum ≥ −`EIGENVALUE_TOL`.
    pub fn new_mixed(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension {
                context: "density matrix shape",
                expected: matrix.rows(),
                got: matrix.cols(),
            });
        }
        if !matrix.is_finite() {
            return Err(Error::Validation("non-finite density matrix entry".into()));
        }
        let d = matrix.rows();
        let herm_residual = matrix.max_abs_diff(&matrix.adjoint())?;
        if herm_residual > STATE_TOL {
            return Err(Error::Validation(format!(
                "density matrix is not Hermitian: residual {herm_residual:e}"
            )));
        }
        let trace: f64 = (0..d).map(|i| matrix.at(i, i).re).sum();
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::Validation(format!(
                "density matrix trace {trace} is not 1 within {STATE_TOL:e}"
            )));
        }
        let min_eig = hermitian_eigenvalues(&matrix)?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -EIGENVALUE_TOL {
            return Err(Error::Validation(format!(
                "density matrix has eigenvalue {min_eig:e} below -{EIGENVALUE_TOL:e}"
            )));
        }
        Ok(Self::Mixed(matrix))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Pure(v) => v.len(),
            Self::Mixed(m) => m.rows(),
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, Self::Pure(_))
    }

    /// Density-matrix form, ψψ† for pure inputs.
    pub fn density_matrix(&self) -> ComplexMatrix {
        match self {
            Self::Pure(v) => {
                ComplexMatrix::from_fn(v.len(), v.len(), |r, c| v[r] * v[c].conj())
            }
            Self::Mixed(m) => m.clone(),
        }
    }

    /// ⟨v|ρ|v⟩ for one candidate outcome vector.
    pub(crate) fn expectation(&self, v: &[Complex64]) -> f64 {
        match self {
            Self::Pure(psi) => inner(v, psi).norm_sqr(),
            Self::Mixed(m) => {
                let mv = m.apply(v).expect("dimension checked by caller");
                inner(v, &mv).re
            }
        }
    }
}

/// The fixed problem instance: a state and the eigenbases of the two
/// observables under study.
#[derive(Debug, Clone)]
pub struct Scenario {
    state: QuantumState,
    basis_a: Basis,
    basis_b: Basis,
}

impl Scenario {
    pub fn new(state: QuantumState, basis_a: Basis, basis_b: Basis) -> Result<Self> {
        let d = state.dim();
        if d < 2 {
            return Err(Error::Dimension {
                context: "scenario dimension",
                expected: 2,
                got: d,
            });
        }
        for (name, got) in [("A basis", basis_a.dim()), ("B basis", basis_b.dim())] {
            if got != d {
                return Err(Error::Validation(format!(
                    "{name} dimension {got} does not match state dimension {d}"
                )));
            }
        }
        Ok(Self {
            state,
            basis_a,
            basis_b,
        })
    }

    pub fn state(&self) -> &QuantumState {
        &self.state
    }

    pub fn basis_a(&self) -> &Basis {
        &self.basis_a
    }

    pub fn basis_b(&self) -> &Basis {
        &self.basis_b
    }

    pub fn dim(&self) -> usize {
        self.state.dim()
    }

    /// Ideal outcome distribution of the first observable.
    pub fn ideal_p(&self) -> Result<ProbDist> {
        born_distribution(&self.state, &self.basis_a)
    }

    /// Ideal outcome distribution of the second observable.
    pub fn ideal_q(&self) -> Result<ProbDist> {
        born_distribution(&self.state, &self.basis_b)
    }
}

fn check_dims(state: &QuantumState, basis: &Basis, context: &'static str) -> Result<()> {
    if state.dim() != basis.dim() {
        return Err(Error::Dimension {
            context,
            expected: state.dim(),
            got: basis.dim(),
        });
    }
    Ok(())
}

/// Born-rule distribution: valueᵢ = ⟨vᵢ|ρ|vᵢ⟩ (= |⟨vᵢ|ψ⟩|² for pure states).
pub fn born_distribution(state: &QuantumState, basis: &Basis) -> Result<ProbDist> {
    check_dims(state, basis, "born distribution")?;
    let values: Vec<f64> = basis
        .vectors()
        .iter()
        .map(|v| state.expectation(v))
        .collect();
    // A valid mixed state may carry eigenvalues down to -EIGENVALUE_TOL, so
    // Born values inherit that tolerance before the distribution clamp.
    ProbDist::with_clamp(values, EIGENVALUE_TOL)
}

/// Statistical ensemble after a projective measurement in `meas`:
/// Σᵢ p′ᵢ |vᵢ⟩⟨vᵢ|, diagonal in the measurement basis.
pub fn post_measurement_state(state: &QuantumState, meas: &Basis) -> Result<QuantumState> {
    check_dims(state, meas, "post-measurement state")?;
    let probs = born_distribution(state, meas)?;
    let d = state.dim();
    let mut rho = ComplexMatrix::zeros(d, d);
    for (v, &p) in meas.vectors().iter().zip(probs.values()) {
        if p == 0.0 {
            continue;
        }
        for r in 0..d {
            for c in 0..d {
                let add = v[r] * v[c].conj() * p;
                rho.set(r, c, rho.at(r, c) + add);
            }
        }
    }
    Ok(QuantumState::Mixed(rho))
}

/// Distribution of the second observable on the post-measurement ensemble:
/// q̃ⱼ = Σᵢ p′ᵢ |⟨vᵢ|bⱼ⟩|².
pub fn disturbed_distribution(
    state: &QuantumState,
    meas: &Basis,
    basis_b: &Basis,
) -> Result<ProbDist> {
    check_dims(state, meas, "disturbed distribution (measurement basis)")?;
    check_dims(state, basis_b, "disturbed distribution (target basis)")?;
    let probs = born_distribution(state, meas)?;
    let overlaps = meas.overlaps(basis_b)?;
    let d = state.dim();
    let values: Vec<f64> = (0..d)
        .map(|j| {
            (0..d)
                .map(|i| probs.values()[i] * overlaps.at(i, j).norm_sqr())
                .sum()
        })
        .collect();
    ProbDist::new(values)
}

/// Multiplies each basis vector by a unit phase so that ⟨bⱼ|ψ⟩ = √qⱼ ≥ 0.
/// Vectors orthogonal to ψ are left unchanged (any phase is valid there).
pub fn phase_align(state: &QuantumState, basis_b: &Basis) -> Result<Basis> {
    let psi = match state {
        QuantumState::Pure(v) => v,
        QuantumState::Mixed(_) => {
            return Err(Error::Unsupported(
                "phase alignment is defined for pure states only".into(),
            ))
        }
    };
    check_dims(state, basis_b, "phase alignment")?;
    let vectors = basis_b
        .vectors()
        .iter()
        .map(|b| {
            let ov = inner(b, psi);
            if ov.norm() == 0.0 {
                return b.clone();
            }
            let phase = ov / ov.norm();
            b.iter().map(|z| z * phase).collect()
        })
        .collect();
    // Phases do not change the Gram matrix; skip revalidation.
    Ok(Basis { vectors })
}

/// The depolarized ensemble η/d·I + (1−η)·ρ.
pub fn depolarize(state: &QuantumState, eta: f64) -> Result<QuantumState> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::Precondition(format!(
            "depolarization strength {eta} outside [0, 1]"
        )));
    }
    let d = state.dim();
    let rho = state.density_matrix();
    let mut out = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            let mut v = rho.at(r, c) * (1.0 - eta);
            if r == c {
                v += Complex64::new(eta / d as f64, 0.0);
            }
            out.set(r, c, v);
        }
    }
    Ok(QuantumState::Mixed(out))
}

/// Bloch vector of a qubit state: (tr ρσx, tr ρσy, tr ρσz).
pub fn bloch_vector(state: &QuantumState) -> Result<[f64; 3]> {
    if state.dim() != 2 {
        return Err(Error::Unsupported(
            "Bloch vectors are defined for qubits only".into(),
        ));
    }
    let rho = state.density_matrix();
    Ok([
        2.0 * rho.at(0, 1).re,
        -2.0 * rho.at(0, 1).im,
        rho.at(0, 0).re - rho.at(1, 1).re,
    ])
}

/// Bloch vector of the +1-labeled projector of a qubit basis (vector 0).
pub fn bloch_of_basis(basis: &Basis) -> Result<[f64; 3]> {
    if basis.dim() != 2 {
        return Err(Error::Unsupported(
            "Bloch vectors are defined for qubits only".into(),
        ));
    }
    let v = basis.vector(0);
    let cross = v[0].conj() * v[1];
    Ok([
        2.0 * cross.re,
        2.0 * cross.im,
        v[0].norm_sqr() - v[1].norm_sqr(),
    ])
}

/// Eigenbasis of n⃗·σ⃗ for a unit Bloch vector, +1 eigenvector first.
pub fn basis_from_bloch(n: [f64; 3]) -> Result<Basis> {
    let [x, y, z] = n;
    let norm = (x * x + y * y + z * z).sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::Precondition(format!(
            "Bloch direction must be a unit vector, |n| = {norm}"
        )));
    }
    let (x, y, z) = (x / norm, y / norm, z / norm);
    // Pick the numerically stable eigenvector expression for either pole.
    let plus: Vec<Complex64> = if z >= 0.0 {
        let s = (2.0 * (1.0 + z)).sqrt();
        vec![
            Complex64::new((1.0 + z) / s, 0.0),
            Complex64::new(x / s, y / s),
        ]
    } else {
        let s = (2.0 * (1.0 - z)).sqrt();
        vec![
            Complex64::new(x / s, -y / s),
            Complex64::new((1.0 - z) / s, 0.0),
        ]
    };
    let minus = vec![-plus[1].conj(), plus[0].conj()];
    Basis::new(vec![plus, minus])
}
