//! Brute-force numerical layer: minimize error + disturbance over candidate
//! measurement bases, sweep the qubit σz/σx family, and draw finite-shot
//! samples from the sequential experiment.
//!
//! The oracle is deliberately independent of the constructive synthesis path:
//! it never seeds itself with a synthesized basis, so a near-zero minimum in
//! the majorization regime is independent evidence, not an echo.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::divergence::relative_entropy_slices;
use crate::error::{Error, Result};
use crate::numerics::{random_unitary, ComplexMatrix, Seed};
use crate::quantum::{born_distribution, Basis, ProbDist, QuantumState, Scenario};

/// Outcome of one oracle minimization.
#[derive(Debug, Clone, Serialize)]
pub struct OracleResult {
    pub min_value: f64,
    /// For qubits the two search angles (α, β); for d ≥ 3 the flattened
    /// re/im entries of the best basis matrix.
    pub argmin_basis_params: Vec<f64>,
    pub evaluations: u64,
    pub refined: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MajorizationVerdict {
    #[serde(rename = "P>Q")]
    PMajorizesQ,
    #[serde(rename = "Q>P")]
    QMajorizesP,
    #[serde(rename = "incomparable")]
    Incomparable,
}

impl std::fmt::Display for MajorizationVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::PMajorizesQ => write!(f, "P>Q"),
            Self::QMajorizesP => write!(f, "Q>P"),
            Self::Incomparable => write!(f, "incomparable"),
        }
    }
}

/// One θ-step of the qubit sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    pub p1: f64,
    pub q1: f64,
    pub verdict: MajorizationVerdict,
    /// Tradeoff lower bound in nats.
    pub blue: f64,
    /// Oracle minimum in nats; an upper envelope, never below `blue`.
    pub red: f64,
}

/// Shared evaluation context: ideal sorted values plus the target basis,
/// with candidate bases supplied as raw vectors so the hot loop skips
/// revalidation.
struct Objective<'a> {
    state: &'a QuantumState,
    basis_b: &'a [Vec<Complex64>],
    sorted_p: Vec<f64>,
    sorted_q: Vec<f64>,
    evaluations: u64,
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

impl<'a> Objective<'a> {
    fn new(s: &'a Scenario) -> Result<Self> {
        let p = s.ideal_p()?;
        let q = s.ideal_q()?;
        Ok(Self {
            state: s.state(),
            basis_b: s.basis_b().vectors(),
            sorted_p: sorted_desc(p.values().to_vec()),
            sorted_q: sorted_desc(q.values().to_vec()),
            evaluations: 0,
        })
    }

    /// Error + disturbance of a candidate apparatus, with outcome labels
    /// aligned descending on both sides (the per-basis optimal labeling).
    fn eval(&mut self, candidate: &[Vec<Complex64>]) -> f64 {
        self.evaluations += 1;
        let d = candidate.len();
        let pprime: Vec<f64> = candidate
            .iter()
            .map(|v| self.state.expectation(v).max(0.0))
            .collect();
        let mut qt = vec![0.0f64; d];
        for (i, v) in candidate.iter().enumerate() {
            if pprime[i] == 0.0 {
                continue;
            }
            for (j, b) in self.basis_b.iter().enumerate() {
                let ov: Complex64 = v.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
                qt[j] += pprime[i] * ov.norm_sqr();
            }
        }
        let sp = sorted_desc(pprime);
        let sq = sorted_desc(qt);
        let err = relative_entropy_slices(&self.sorted_p, &sp).expect("equal lengths");
        let dis = relative_entropy_slices(&self.sorted_q, &sq).expect("equal lengths");
        err + dis
    }
}

/// Golden-section minimization of a 1-D slice.
fn golden_min(
    mut f: impl FnMut(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    iters: usize,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Qubit candidate basis from the two search angles, expressed over the
/// scenario's A eigenframe: |a′₀⟩ = cos(α/2)|a₀⟩ + e^{iβ} sin(α/2)|a₁⟩.
fn qubit_candidate(a0: &[Complex64], a1: &[Complex64], alpha: f64, beta: f64) -> [Vec<Complex64>; 2] {
    let (c, s) = ((alpha / 2.0).cos(), (alpha / 2.0).sin());
    let phase = Complex64::from_polar(1.0, beta);
    let d = a0.len();
    let mut v0 = vec![Complex64::new(0.0, 0.0); d];
    let mut v1 = vec![Complex64::new(0.0, 0.0); d];
    for i in 0..d {
        v0[i] = a0[i] * c + a1[i] * (phase * s);
        v1[i] = -a0[i] * (phase.conj() * s) + a1[i] * c;
    }
    [v0, v1]
}

fn qubit_search(s: &Scenario, budget: u64) -> Result<OracleResult> {
    let mut obj = Objective::new(s)?;
    let a0 = s.basis_a().vector(0).to_vec();
    let a1 = s.basis_a().vector(1).to_vec();
    let n_beta = (budget / 64).clamp(16, 256) as usize;
    let n_alpha = (budget / n_beta as u64).clamp(32, 1024) as usize;
    let alpha_step = std::f64::consts::PI / (n_alpha - 1) as f64;
    let beta_step = 2.0 * std::f64::consts::PI / n_beta as f64;
    let mut best = f64::INFINITY;
    let mut best_ab = (0.0f64, 0.0f64);
    for i in 0..n_alpha {
        let alpha = i as f64 * alpha_step;
        for j in 0..n_beta {
            let beta = j as f64 * beta_step;
            let v = obj.eval(&qubit_candidate(&a0, &a1, alpha, beta));
            if v < best {
                best = v;
                best_ab = (alpha, beta);
            }
        }
    }
    // Compass refinement with diagonal moves around the best grid cell; the
    // objective is smooth, so halving the step on every stall converges well
    // past the grid resolution even along tilted valleys.
    let (mut alpha, mut beta) = best_ab;
    let mut h = alpha_step.max(beta_step);
    while h > 1e-11 {
        let mut improved = false;
        for (da, db) in [
            (1.0, 0.0),
            (-1.0, 0.0),
            (0.0, 1.0),
            (0.0, -1.0),
            (1.0, 1.0),
            (1.0, -1.0),
            (-1.0, 1.0),
            (-1.0, -1.0),
        ] {
            let na = (alpha + da * h).clamp(0.0, std::f64::consts::PI);
            let nb = beta + db * h;
            let v = obj.eval(&qubit_candidate(&a0, &a1, na, nb));
            if v < best {
                best = v;
                alpha = na;
                beta = nb;
                improved = true;
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    Ok(OracleResult {
        min_value: best,
        argmin_basis_params: vec![alpha, beta],
        evaluations: obj.evaluations,
        refined: true,
    })
}

/// In-place right multiplication by a complex Givens rotation in plane (i, j).
fn apply_givens(v: &mut ComplexMatrix, i: usize, j: usize, theta: f64, phi: f64) {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(s, phi);
    for r in 0..v.rows() {
        let vi = v.at(r, i);
        let vj = v.at(r, j);
        v.set(r, i, vi * c + vj * e);
        v.set(r, j, -vi * e.conj() + vj * c);
    }
}

fn matrix_columns(v: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..v.cols()).map(|c| v.column(c)).collect()
}

fn descent_search(s: &Scenario, budget: u64, seed: Seed) -> Result<OracleResult> {
    let mut obj = Objective::new(s)?;
    let d = s.dim();
    let planes: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| ((i + 1)..d).map(move |j| (i, j)))
        .collect();
    // Rough per-start cost, used only to scale the number of starts.
    let per_start = (14 * planes.len() * 2 * 30) as u64;
    let n_starts = (budget / per_start).max(2);
    let mut best = f64::INFINITY;
    let mut best_matrix = ComplexMatrix::identity(d);
    for start in 0..n_starts {
        // Start 0 is the ideal apparatus itself; the rest are Haar draws.
        let mut v = if start == 0 {
            ComplexMatrix::from_fn(d, d, |r, c| s.basis_a().vector(c)[r])
        } else {
            random_unitary(d, seed.child(start))?
        };
        let mut current = obj.eval(&matrix_columns(&v));
        // The two phase passes per plane span the full tangent space of the
        // basis manifold, so exact line searches converge to a local minimum;
        // the rate is linear, hence the generous sweep cap.
        for _sweep in 0..40 {
            let before = current;
            for &(i, j) in &planes {
                for phi in [0.0, std::f64::consts::FRAC_PI_2] {
                    let (theta, val) = golden_min(
                        |t| {
                            let mut trial = v.clone();
                            apply_givens(&mut trial, i, j, t, phi);
                            obj.eval(&matrix_columns(&trial))
                        },
                        -std::f64::consts::FRAC_PI_2,
                        std::f64::consts::FRAC_PI_2,
                        30,
                    );
                    if val < current {
                        apply_givens(&mut v, i, j, theta, phi);
                        current = val;
                    }
                }
            }
            if before - current < 1e-14 {
                break;
            }
        }
        if current < best {
            best = current;
            best_matrix = v;
        }
    }
    let params = best_matrix
        .entries()
        .iter()
        .flat_map(|z| [z.re, z.im])
        .collect();
    Ok(OracleResult {
        min_value: best,
        argmin_basis_params: params,
        evaluations: obj.evaluations,
        refined: true,
    })
}

/// Numerically minimizes error + disturbance over projective measurement
/// bases. For qubits a dense (α, β) grid with golden refinement; for d ≥ 3
/// Haar-seeded starts with Givens-plane coordinate descent (a best-effort
/// upper envelope, not a certified global minimum).
pub fn s2_min_numeric(s: &Scenario, budget: u64, seed: Seed) -> Result<OracleResult> {
    if budget == 0 {
        return Err(Error::Precondition("oracle budget must be positive".into()));
    }
    if s.dim() > 6 {
        return Err(Error::Unsupported(format!(
            "oracle search is implemented for d ≤ 6, got {}",
            s.dim()
        )));
    }
    if s.dim() == 2 {
        qubit_search(s, budget)
    } else {
        descent_search(s, budget, seed)
    }
}

/// The σz/σx qubit family: per θ, the state cos(θ/2)|0⟩ + sin(θ/2)|1⟩ with
/// A = σz and B = σx; reports the bound, the oracle minimum, and the
/// majorization verdict.
pub fn sweep_qubit(
    theta_start: f64,
    theta_end: f64,
    steps: usize,
    budget: u64,
    seed: Seed,
) -> Result<Vec<SweepRow>> {
    if steps < 2 {
        return Err(Error::Precondition("sweep needs at least 2 steps".into()));
    }
    let mut rows = Vec::with_capacity(steps);
    for k in 0..steps {
        let theta = theta_start + (theta_end - theta_start) * k as f64 / (steps - 1) as f64;
        let state = QuantumState::new_pure(vec![
            Complex64::new((theta / 2.0).cos(), 0.0),
            Complex64::new((theta / 2.0).sin(), 0.0),
        ])?;
        let s = Scenario::new(state, Basis::sigma_z(), Basis::sigma_x())?;
        let p = s.ideal_p()?;
        let q = s.ideal_q()?;
        let report = crate::bound::tradeoff_bound(&p, &q)?;
        let oracle = s2_min_numeric(&s, budget, seed.child(k as u64))?;
        let verdict = qubit_verdict(&p, &q);
        rows.push(SweepRow {
            theta,
            p1: p.values()[0],
            q1: q.values()[0],
            verdict,
            blue: report.bound,
            red: oracle.min_value,
        });
    }
    Ok(rows)
}

fn qubit_verdict(p: &ProbDist, q: &ProbDist) -> MajorizationVerdict {
    let p1 = p.values().iter().cloned().fold(0.0, f64::max);
    let q1 = q.values().iter().cloned().fold(0.0, f64::max);
    if p1 >= q1 - 1e-12 {
        MajorizationVerdict::PMajorizesQ
    } else if q1 >= p1 - 1e-12 {
        MajorizationVerdict::QMajorizesP
    } else {
        MajorizationVerdict::Incomparable
    }
}

/// Draws `shots` sequential outcomes — apparatus outcome i ~ P′, then B
/// outcome j from the collapsed vector — and returns the empirical
/// frequencies of both.
pub fn sample_sequential(
    s: &Scenario,
    meas: &Basis,
    shots: u64,
    seed: Seed,
) -> Result<(ProbDist, ProbDist)> {
    if shots == 0 {
        return Err(Error::Precondition("at least one shot required".into()));
    }
    let d = s.dim();
    if meas.dim() != d {
        return Err(Error::Dimension {
            context: "sampling measurement basis",
            expected: d,
            got: meas.dim(),
        });
    }
    let pprime = born_distribution(s.state(), meas)?;
    let overlaps = meas.overlaps(s.basis_b())?;
    let rows: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|j| overlaps.at(i, j).norm_sqr()).collect())
        .collect();
    let mut rng = seed.rng();
    let draw = |dist: &[f64], rng: &mut rand_chacha::ChaCha12Rng| -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (idx, &w) in dist.iter().enumerate() {
            acc += w;
            if u < acc {
                return idx;
            }
        }
        dist.len() - 1
    };
    let mut count_i = vec![0u64; d];
    let mut count_j = vec![0u64; d];
    for _ in 0..shots {
        let i = draw(pprime.values(), &mut rng);
        let j = draw(&rows[i], &mut rng);
        count_i[i] += 1;
        count_j[j] += 1;
    }
    let emp = |counts: &[u64]| -> Result<ProbDist> {
        ProbDist::new(counts.iter().map(|&c| c as f64 / shots as f64).collect())
    };
    Ok((emp(&count_i)?, emp(&count_j)?))
}
