//! Constructive synthesis of the unitaries behind zero-error
//! zero-disturbance (ZEZD) measurements.
//!
//! Given sorted lists P ≻ Q with equal totals, `synthesize` builds a unitary
//! satisfying both
//!
//! ```text
//! (1)  Σᵢ pᵢ |Uᵢⱼ|² = qⱼ            (column condition)
//! (2)  Σⱼ Uᵢⱼ √qⱼ  = √pᵢ           (vector condition)
//! ```
//!
//! by induction on the dimension: one 2×2 block displaces the largest p onto
//! the largest q, and the remainder recurses on d−1 values. Each level has a
//! two-fold branch choice, so a full run is labeled by d−1 sign bits and
//! generically 2^(d−1) distinct solutions exist.

use num_complex::Complex64;

use crate::divergence::relative_entropy;
use crate::error::{Error, Result};
use crate::majorization::{majorizes, sort_desc, SortedDist, TOTALS_TOL};
use crate::numerics::{unitarity_residual, ComplexMatrix};
use crate::quantum::{
    basis_from_bloch, bloch_of_basis, bloch_vector, born_distribution, depolarize,
    disturbed_distribution, phase_align, Basis, Scenario,
};

/// Upper bound on the unitarity residual of a synthesized solution.
pub const UNITARITY_TOL: f64 = 1e-9;
/// Upper bound on the two condition residuals of a synthesized solution.
pub const CONDITION_TOL: f64 = 1e-8;

/// One synthesized unitary together with its branch label and verified
/// condition residuals.
#[derive(Debug, Clone)]
pub struct SynthesisSolution {
    pub u: ComplexMatrix,
    pub signs: Vec<bool>,
    pub residual1: f64,
    pub residual2: f64,
}

/// All 2^(d−1) sign strings for dimension `d`, in ascending binary order.
pub fn all_sign_strings(d: usize) -> Vec<Vec<bool>> {
    let bits = d - 1;
    (0u32..1 << bits)
        .map(|i| (0..bits).map(|k| i >> k & 1 == 1).collect())
        .collect()
}

fn clamped_sqrt(x: f64) -> f64 {
    x.max(0.0).sqrt()
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// Assembles the 2×2 family that is unitary for every phase triple:
/// e^{−iφ}/√(p₁−p₂) · [[√(q₁−p₂), e^{iθ₁}√(p₁−q₁)], [e^{iθ₂}√(p₁−q₁), −e^{i(θ₁+θ₂)}√(q₁−p₂)]]
fn base2_with_phases(p1: f64, p2: f64, q1: f64, phi: f64, th1: f64, th2: f64) -> ComplexMatrix {
    let denom = clamped_sqrt(p1 - p2);
    let a = clamped_sqrt(q1 - p2) / denom;
    let b = clamped_sqrt(p1 - q1) / denom;
    let g = Complex64::from_polar(1.0, -phi);
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 0, g * a);
    m.set(0, 1, g * Complex64::from_polar(b, th1));
    m.set(1, 0, g * Complex64::from_polar(b, th2));
    m.set(1, 1, -g * Complex64::from_polar(a, th1 + th2));
    m
}

fn residuals_slices(u: &ComplexMatrix, p: &[f64], q: &[f64]) -> (f64, f64) {
    let d = p.len();
    let mut r1 = 0.0f64;
    for j in 0..d {
        let col: f64 = (0..d).map(|i| p[i] * u.at(i, j).norm_sqr()).sum();
        r1 = r1.max((col - q[j]).abs());
    }
    let mut r2 = 0.0f64;
    for i in 0..d {
        let row: Complex64 = (0..d)
            .map(|j| u.at(i, j) * clamped_sqrt(q[j]))
            .sum::<Complex64>();
        r2 = r2.max((row - Complex64::new(clamped_sqrt(p[i]), 0.0)).norm());
    }
    (r1, r2)
}

/// Closed-form phases for the 2×2 base case, primary branch. Falls back to a
/// direct solve of the vector condition (exact in atan2 form) if the printed
/// arcsine forms ever leave a residual; the matrix family is unitary for all
/// phases, so only condition (2) is at stake.
fn base2_unchecked(p1: f64, p2: f64, q1: f64, q2: f64, sign: bool) -> ComplexMatrix {
    let scale = p1.max(1e-300);
    // q ≈ p: nothing to rotate. Equal totals force q₂ ≈ p₂ as well, and
    // p₁ ≈ p₂ squeezes q₁ between them.
    if p1 - q1 <= 1e-14 * scale || p1 - p2 <= 1e-13 * scale || q2 <= 0.0 {
        return ComplexMatrix::identity(2);
    }
    let sgn = if sign { -1.0 } else { 1.0 };
    let phi = clamp_unit((p2 * (p1 - q1)).sqrt() / (q1 * (p1 - p2)).sqrt()).asin();
    let th1 = clamp_unit((p1 * p2).sqrt() / (q1 * q2).sqrt()).asin();
    let th2 = phi + clamp_unit((p1 * (q1 - p2)).max(0.0).sqrt() / (q1 * (p1 - p2)).sqrt()).asin();
    let u = base2_with_phases(p1, p2, q1, sgn * phi, sgn * th1, sgn * th2);
    let (r1, r2) = residuals_slices(&u, &[p1, p2], &[q1, q2]);
    if r1 <= 1e-10 && r2 <= 1e-10 {
        return u;
    }
    // Direct solve: |A + B e^{iθ₁}| = C fixes θ₁, then φ and θ₂ absorb the
    // residual phases of the two rows.
    let a_big = (q1 * (q1 - p2).max(0.0)).sqrt();
    let b_big = (q2 * (p1 - q1).max(0.0)).sqrt();
    let c_big = (p1 * (p1 - p2)).sqrt();
    let cos_th1 = if a_big * b_big > 0.0 {
        clamp_unit((c_big * c_big - a_big * a_big - b_big * b_big) / (2.0 * a_big * b_big))
    } else {
        1.0
    };
    let th1 = sgn * cos_th1.acos();
    let row1 = Complex64::new(a_big, 0.0) + Complex64::from_polar(b_big, th1);
    let phi = row1.arg();
    let a2 = (q1 * (p1 - q1).max(0.0)).sqrt();
    let b2 = (q2 * (q1 - p2).max(0.0)).sqrt();
    let row2 = Complex64::new(a2, 0.0) - Complex64::from_polar(b2, th1);
    let th2 = if row2.norm() <= 1e-300 {
        0.0
    } else {
        phi - row2.arg()
    };
    base2_with_phases(p1, p2, q1, phi, th1, th2)
}

/// The d = 2 base case of the induction: a unitary satisfying both
/// conditions for sorted pairs `p ≻ q` with equal totals (not necessarily
/// normalized). `sign` selects one of the two phase branches.
pub fn synthesize_base2(p: (f64, f64), q: (f64, f64), sign: bool) -> Result<ComplexMatrix> {
    let (p1, p2) = p;
    let (q1, q2) = q;
    if !(p1 >= p2 && p2 >= 0.0 && q1 >= q2 && q2 >= 0.0) {
        return Err(Error::Precondition(
            "pairs must be sorted nonincreasing and nonnegative".into(),
        ));
    }
    if ((p1 + p2) - (q1 + q2)).abs() > TOTALS_TOL {
        return Err(Error::Precondition(format!(
            "equal totals required: {} vs {}",
            p1 + p2,
            q1 + q2
        )));
    }
    if p1 < q1 - 1e-12 {
        return Err(Error::Precondition(format!(
            "majorization violated: p1 = {p1} < q1 = {q1}"
        )));
    }
    Ok(base2_unchecked(p1, p2, q1, q2, sign))
}

/// Embeds a 2×2 block at coordinates (i, j) of a d×d identity.
fn embed_block(d: usize, i: usize, j: usize, block: &ComplexMatrix) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(d);
    m.set(i, i, block.at(0, 0));
    m.set(i, j, block.at(0, 1));
    m.set(j, i, block.at(1, 0));
    m.set(j, j, block.at(1, 1));
    m
}

fn swap_columns(block: &ComplexMatrix) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 0, block.at(0, 1));
    m.set(0, 1, block.at(0, 0));
    m.set(1, 0, block.at(1, 1));
    m.set(1, 1, block.at(1, 0));
    m
}

/// One induction level on an unordered value list. `p_vals[k]` and
/// `q_vals[k]` both live on local coordinate `k`; q stays sorted descending
/// but the displaced p-value may sit anywhere, so the pivot scans values
/// instead of assuming order.
fn synth_rec(p_vals: &[f64], q_vals: &[f64], signs: &[bool]) -> Result<ComplexMatrix> {
    let n = p_vals.len();
    if n == 1 {
        return Ok(ComplexMatrix::identity(1));
    }
    let l = p_vals
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap().then(b.0.cmp(&a.0)))
        .map(|(i, _)| i)
        .unwrap();
    let q1 = q_vals[0];
    // Partner: the largest p-value not exceeding q1 (smallest index on ties),
    // so that the displaced value q1 lands between the pair.
    let mut m_idx = None;
    for (i, &v) in p_vals.iter().enumerate() {
        if i == l || v > q1 + 1e-12 {
            continue;
        }
        match m_idx {
            None => m_idx = Some(i),
            Some(prev) => {
                if v > p_vals[prev] {
                    m_idx = Some(i)
                }
            }
        }
    }
    // Float noise can leave every remaining value marginally above q1; any
    // partner then works, the smallest value keeps the clamps tiny.
    let m_idx = m_idx.unwrap_or_else(|| {
        p_vals
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != l)
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| i)
            .unwrap()
    });
    let displaced = p_vals[l] + p_vals[m_idx] - q1;
    let block = if q1 >= displaced {
        base2_unchecked(p_vals[l], p_vals[m_idx], q1, displaced, signs[0])
    } else {
        swap_columns(&base2_unchecked(
            p_vals[l],
            p_vals[m_idx],
            displaced,
            q1,
            signs[0],
        ))
    };
    let v_emb = embed_block(n, l, m_idx, &block);

    let mut sub_p: Vec<f64> = Vec::with_capacity(n - 1);
    for (i, &v) in p_vals.iter().enumerate() {
        if i == l {
            continue;
        }
        sub_p.push(if i == m_idx { displaced.max(0.0) } else { v });
    }
    let w_sub = synth_rec(&sub_p, &q_vals[1..], &signs[1..])?;
    let mut w_emb = ComplexMatrix::identity(n);
    let sub_coords: Vec<usize> = (0..n).filter(|&i| i != l).collect();
    for (si, &ci) in sub_coords.iter().enumerate() {
        for (sj, &cj) in sub_coords.iter().enumerate() {
            w_emb.set(ci, cj, w_sub.at(si, sj));
        }
    }

    // Cycle that parks the leading q-value on coordinate l before the
    // sub-solution consumes the rest in order.
    let mut perm = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let tau = if j == 0 {
            l
        } else if j <= l {
            j - 1
        } else {
            j
        };
        perm.set(tau, j, Complex64::new(1.0, 0.0));
    }

    v_emb.mul(&w_emb)?.mul(&perm)
}

/// Builds a unitary satisfying both conditions for `p ≻ q`, following the
/// branch choices in `signs` (one bit per induction level, d−1 in total).
pub fn synthesize(p: &SortedDist, q: &SortedDist, signs: &[bool]) -> Result<SynthesisSolution> {
    let d = p.len();
    if d < 2 {
        return Err(Error::Dimension {
            context: "synthesis dimension",
            expected: 2,
            got: d,
        });
    }
    if q.len() != d {
        return Err(Error::Dimension {
            context: "synthesis target length",
            expected: d,
            got: q.len(),
        });
    }
    if signs.len() != d - 1 {
        return Err(Error::Precondition(format!(
            "expected {} sign bits, got {}",
            d - 1,
            signs.len()
        )));
    }
    if !majorizes(p, q)? {
        return Err(Error::Precondition(
            "majorization violated: no unitary can connect these lists".into(),
        ));
    }
    let u = synth_rec(p.values(), q.values(), signs)?;
    let (residual1, residual2) = residuals_slices(&u, p.values(), q.values());
    let unit = unitarity_residual(&u)?;
    if unit > UNITARITY_TOL || residual1 > CONDITION_TOL || residual2 > CONDITION_TOL {
        return Err(Error::Validation(format!(
            "synthesis left residuals beyond tolerance: unitarity {unit:e}, \
             condition residuals {residual1:e} / {residual2:e}"
        )));
    }
    Ok(SynthesisSolution {
        u,
        signs: signs.to_vec(),
        residual1,
        residual2,
    })
}

/// Residuals of the two synthesis conditions for an arbitrary unitary.
pub fn verify_conditions(u: &ComplexMatrix, p: &SortedDist, q: &SortedDist) -> Result<(f64, f64)> {
    if p.len() != q.len() {
        return Err(Error::Dimension {
            context: "condition verification",
            expected: p.len(),
            got: q.len(),
        });
    }
    if !u.is_square() || u.rows() != p.len() {
        return Err(Error::Dimension {
            context: "condition verification matrix",
            expected: p.len(),
            got: u.rows(),
        });
    }
    Ok(residuals_slices(u, p.values(), q.values()))
}

/// A unitary realizing the column condition alone (Σᵢ pᵢ|Uᵢⱼ|² = qⱼ), which
/// exists exactly when `p ≻ q`. Reuses the full synthesis, whose output
/// satisfies both conditions and hence this one.
pub fn horn_unitary(p: &SortedDist, q: &SortedDist, signs: &[bool]) -> Result<ComplexMatrix> {
    Ok(synthesize(p, q, signs)?.u)
}

/// Measurement basis with zero error on A and zero disturbance on B,
/// for a pure scenario with sorted-P majorizing sorted-Q.
///
/// The returned basis is labeled to match the A outcomes: the vector at
/// original label `perm_P[i]` reproduces the i-th largest ideal probability.
pub fn zezd_basis(s: &Scenario, signs: &[bool]) -> Result<Basis> {
    if !s.state().is_pure() {
        return Err(Error::Unsupported(
            "zezd_basis handles pure states; use mixed_qubit_zezd or the depolarized \
             check for mixed ensembles"
                .into(),
        ));
    }
    let sp = sort_desc(&s.ideal_p()?);
    let sq = sort_desc(&s.ideal_q()?);
    if !majorizes(&sp, &sq)? {
        return Err(Error::NoZezd(
            "the A distribution does not majorize the B distribution; only the \
             tradeoff bound applies"
                .into(),
        ));
    }
    let aligned = phase_align(s.state(), s.basis_b())?;
    let sol = synthesize(&sp, &sq, signs)?;
    let d = s.dim();
    let mut vectors = vec![Vec::new(); d];
    for i in 0..d {
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        for k in 0..d {
            let coeff = sol.u.at(i, k).conj();
            for (x, b) in v.iter_mut().zip(aligned.vector(sq.perm()[k])) {
                *x += coeff * b;
            }
        }
        vectors[sp.perm()[i]] = v;
    }
    Basis::new(vectors)
}

/// ZEZD measurement direction for an arbitrary qubit ensemble, via the Bloch
/// picture: rotate the A direction about the state vector until the
/// post-measurement projection reproduces the B statistics
/// (cos θ_a · cos ξ = cos θ_b with ξ the resulting angle to the B axis).
pub fn mixed_qubit_zezd(s: &Scenario) -> Result<Basis> {
    if s.dim() != 2 {
        return Err(Error::Unsupported(
            "the Bloch construction is defined for qubits".into(),
        ));
    }
    let r = bloch_vector(s.state())?;
    let a = bloch_of_basis(s.basis_a())?;
    let b = bloch_of_basis(s.basis_b())?;
    let rnorm = norm3(r);
    if rnorm <= 1e-14 {
        // Maximally mixed: P = Q = uniform and the ideal A measurement is
        // already harmless.
        return Ok(s.basis_a().clone());
    }
    let rhat = scale3(r, 1.0 / rnorm);
    let sign_a = if dot3(r, a) >= 0.0 { 1.0 } else { -1.0 };
    let sign_b = if dot3(r, b) >= 0.0 { 1.0 } else { -1.0 };
    let abar = scale3(a, sign_a);
    let bbar = scale3(b, sign_b);
    let cos_ta = clamp_unit(dot3(rhat, abar));
    let cos_tb = clamp_unit(dot3(rhat, bbar));
    if cos_ta < cos_tb - 1e-12 {
        return Err(Error::NoZezd(
            "the A distribution does not majorize the B distribution; only the \
             tradeoff bound applies"
                .into(),
        ));
    }
    let sin_ta = clamped_sqrt(1.0 - cos_ta * cos_ta);
    let sin_tb = clamped_sqrt(1.0 - cos_tb * cos_tb);
    let a_new = if sin_tb <= 1e-12 || cos_ta <= 1e-14 {
        // B parallel to the state (θ_b ≈ 0 forces θ_a ≈ 0), or both
        // directions essentially equatorial (P ≈ Q ≈ uniform): A itself works.
        abar
    } else {
        let u_b = scale3(sub3(bbar, scale3(rhat, cos_tb)), 1.0 / sin_tb);
        let v = cross3(rhat, u_b);
        let cos_alpha = clamp_unit(sin_ta * cos_tb / (cos_ta * sin_tb));
        let sin_alpha = clamped_sqrt(1.0 - cos_alpha * cos_alpha);
        add3(
            scale3(rhat, cos_ta),
            add3(
                scale3(u_b, sin_ta * cos_alpha),
                scale3(v, sin_ta * sin_alpha),
            ),
        )
    };
    let basis = basis_from_bloch(a_new)?;
    if sign_a >= 0.0 {
        Ok(basis)
    } else {
        let minus = basis.vector(1).to_vec();
        let plus = basis.vector(0).to_vec();
        Basis::new(vec![minus, plus])
    }
}

/// Error and disturbance of a fixed measurement basis on the depolarized
/// ensemble η/d·I + (1−η)ρ. A ZEZD basis for the pure scenario keeps both at
/// zero because depolarization acts affinely on all four distributions.
pub fn depolarized_zezd_check(s: &Scenario, eta: f64, basis: &Basis) -> Result<(f64, f64)> {
    if !s.state().is_pure() {
        return Err(Error::Unsupported(
            "the depolarized check starts from a pure scenario".into(),
        ));
    }
    let noisy = depolarize(s.state(), eta)?;
    let p = born_distribution(&noisy, s.basis_a())?;
    let pp = born_distribution(&noisy, basis)?;
    let q = born_distribution(&noisy, s.basis_b())?;
    let qt = disturbed_distribution(&noisy, basis, s.basis_b())?;
    Ok((
        relative_entropy(&p, &pp)?,
        relative_entropy(&q, &qt)?,
    ))
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

fn scale3(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn add3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence::err_dis_sum;
    use crate::quantum::QuantumState;
    use crate::quantum::ProbDist;

    fn sd(vals: &[f64]) -> SortedDist {
        SortedDist::from_values(vals)
    }

    fn qubit_scenario(theta: f64) -> Scenario {
        let state = QuantumState::new_pure(vec![
            Complex64::new((theta / 2.0).cos(), 0.0),
            Complex64::new((theta / 2.0).sin(), 0.0),
        ])
        .unwrap();
        Scenario::new(state, Basis::sigma_z(), Basis::sigma_x()).unwrap()
    }

    fn err_dis_of(s: &Scenario, meas: &Basis) -> f64 {
        let p = s.ideal_p().unwrap();
        let q = s.ideal_q().unwrap();
        let pp = born_distribution(s.state(), meas).unwrap();
        let qt = disturbed_distribution(s.state(), meas, s.basis_b()).unwrap();
        err_dis_sum(&p, &q, &pp, &qt).unwrap()
    }

    #[test]
    fn base2_boundary_is_identity_pattern() {
        let u = synthesize_base2((0.7, 0.3), (0.7, 0.3), false).unwrap();
        assert!(u.max_abs_diff(&ComplexMatrix::identity(2)).unwrap() < 1e-12);
    }

    #[test]
    fn base2_conditions_hold() {
        let u = synthesize_base2((0.7, 0.3), (0.5, 0.5), false).unwrap();
        let (r1, r2) = residuals_slices(&u, &[0.7, 0.3], &[0.5, 0.5]);
        assert!(r1 < 1e-10 && r2 < 1e-10, "r1={r1:e} r2={r2:e}");
        assert!(unitarity_residual(&u).unwrap() < 1e-12);
    }

    #[test]
    fn base2_branches_are_distinct_and_valid() {
        let ua = synthesize_base2((0.7, 0.3), (0.6, 0.4), false).unwrap();
        let ub = synthesize_base2((0.7, 0.3), (0.6, 0.4), true).unwrap();
        for u in [&ua, &ub] {
            let (r1, r2) = residuals_slices(u, &[0.7, 0.3], &[0.6, 0.4]);
            assert!(r1 < 1e-10 && r2 < 1e-10);
        }
        assert!(ua.max_abs_diff(&ub).unwrap() > 1e-3);
    }

    #[test]
    fn base2_rejects_majorization_violation() {
        assert!(matches!(
            synthesize_base2((0.6, 0.4), (0.8, 0.2), false),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn synthesize_identity_when_lists_agree() {
        let p = sd(&[0.5, 0.3, 0.2]);
        for signs in all_sign_strings(3) {
            let sol = synthesize(&p, &p, &signs).unwrap();
            assert!(sol.u.max_abs_diff(&ComplexMatrix::identity(3)).unwrap() < 1e-12);
        }
    }

    #[test]
    fn synthesize_d3_all_branches() {
        let p = sd(&[0.5, 0.3, 0.2]);
        let q = sd(&[0.4, 0.35, 0.25]);
        let sols: Vec<_> = all_sign_strings(3)
            .into_iter()
            .map(|signs| synthesize(&p, &q, &signs).unwrap())
            .collect();
        assert_eq!(sols.len(), 4);
        for s in &sols {
            assert!(s.residual1 <= 1e-10, "residual1 {:e}", s.residual1);
            assert!(s.residual2 <= 1e-10, "residual2 {:e}", s.residual2);
            assert!(unitarity_residual(&s.u).unwrap() <= 1e-12);
        }
        for i in 0..sols.len() {
            for j in (i + 1)..sols.len() {
                assert!(sols[i].u.max_abs_diff(&sols[j].u).unwrap() > 1e-6);
            }
        }
    }

    #[test]
    fn synthesize_from_point_mass() {
        let p = sd(&[1.0, 0.0]);
        let q = sd(&[0.6, 0.4]);
        let sol = synthesize(&p, &q, &[false]).unwrap();
        assert!(sol.residual1 <= 1e-10 && sol.residual2 <= 1e-10);
    }

    #[test]
    fn synthesize_rejects_non_majorizing_input() {
        let p = sd(&[0.6, 0.4]);
        let q = sd(&[0.9, 0.1]);
        assert!(matches!(
            synthesize(&p, &q, &[false]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn verify_conditions_on_identity_and_swap() {
        let p = sd(&[0.7, 0.3]);
        let (r1, r2) = verify_conditions(&ComplexMatrix::identity(2), &p, &p).unwrap();
        assert_eq!((r1, r2), (0.0, 0.0));
        let mut swap = ComplexMatrix::zeros(2, 2);
        swap.set(0, 1, Complex64::new(1.0, 0.0));
        swap.set(1, 0, Complex64::new(1.0, 0.0));
        let (r1, _) = verify_conditions(&swap, &p, &p).unwrap();
        assert!((r1 - 0.4).abs() < 1e-15);
    }

    #[test]
    fn horn_unitary_pushes_distribution() {
        let p = sd(&[0.5, 0.3, 0.2]);
        let q = sd(&[1.0 / 3.0; 3]);
        let u = horn_unitary(&p, &q, &[false, false]).unwrap();
        let (r1, _) = residuals_slices(&u, p.values(), q.values());
        assert!(r1 <= 1e-10);
    }

    #[test]
    fn zezd_basis_achieves_zero_error_zero_disturbance() {
        let s = qubit_scenario(std::f64::consts::PI / 5.0);
        let basis = zezd_basis(&s, &[false]).unwrap();
        assert!(err_dis_of(&s, &basis) <= 1e-12);
    }

    #[test]
    fn zezd_basis_for_eigenstate() {
        let s = Scenario::new(
            QuantumState::new_pure(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
                .unwrap(),
            Basis::sigma_z(),
            Basis::sigma_x(),
        )
        .unwrap();
        let basis = zezd_basis(&s, &[false]).unwrap();
        assert!(err_dis_of(&s, &basis) <= 1e-12);
    }

    #[test]
    fn zezd_basis_refuses_tradeoff_regime() {
        let s = qubit_scenario(std::f64::consts::PI / 3.0);
        assert!(matches!(zezd_basis(&s, &[false]), Err(Error::NoZezd(_))));
    }

    #[test]
    fn mixed_qubit_construction_frozen_example() {
        // r = 0.5 ẑ, A along ẑ, B along x̂: P = (0.75, 0.25) ≻ Q = (0.5, 0.5).
        let mut rho = ComplexMatrix::zeros(2, 2);
        rho.set(0, 0, Complex64::new(0.75, 0.0));
        rho.set(1, 1, Complex64::new(0.25, 0.0));
        let s = Scenario::new(
            QuantumState::new_mixed(rho).unwrap(),
            Basis::sigma_z(),
            Basis::sigma_x(),
        )
        .unwrap();
        let basis = mixed_qubit_zezd(&s).unwrap();
        let p = s.ideal_p().unwrap();
        let pp = born_distribution(s.state(), &basis).unwrap();
        let q = s.ideal_q().unwrap();
        let qt = disturbed_distribution(s.state(), &basis, s.basis_b()).unwrap();
        assert!(relative_entropy(&p, &pp).unwrap() <= 1e-9);
        assert!(relative_entropy(&q, &qt).unwrap() <= 1e-9);
        // cos θ_b = 0 forces the new direction onto the equatorial circle of
        // the rotation cone: here a⃗ itself (θ_a = 0).
        let got = bloch_of_basis(&basis).unwrap();
        assert!((got[2] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn mixed_qubit_agrees_with_pure_construction() {
        let s = qubit_scenario(0.55);
        let pure_basis = zezd_basis(&s, &[false]).unwrap();
        let bloch_basis = mixed_qubit_zezd(&s).unwrap();
        assert!(err_dis_of(&s, &pure_basis) <= 1e-9);
        assert!(err_dis_of(&s, &bloch_basis) <= 1e-9);
    }

    #[test]
    fn mixed_qubit_coincident_axes_keep_a() {
        // θ_a = θ_b with coincident axes: the A basis itself is harmless.
        let mut rho = ComplexMatrix::zeros(2, 2);
        rho.set(0, 0, Complex64::new(0.8, 0.0));
        rho.set(1, 1, Complex64::new(0.2, 0.0));
        let s = Scenario::new(
            QuantumState::new_mixed(rho).unwrap(),
            Basis::sigma_z(),
            Basis::sigma_z(),
        )
        .unwrap();
        let basis = mixed_qubit_zezd(&s).unwrap();
        let got = bloch_of_basis(&basis).unwrap();
        assert!((got[2] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn mixed_qubit_maximally_mixed_returns_a() {
        let s = Scenario::new(
            QuantumState::new_mixed(ComplexMatrix::from_fn(2, 2, |r, c| {
                if r == c {
                    Complex64::new(0.5, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }))
            .unwrap(),
            Basis::sigma_z(),
            Basis::sigma_x(),
        )
        .unwrap();
        let basis = mixed_qubit_zezd(&s).unwrap();
        assert_eq!(basis.vectors(), Basis::sigma_z().vectors());
    }

    #[test]
    fn mixed_qubit_refuses_tradeoff_regime() {
        let s = qubit_scenario(std::f64::consts::PI / 3.0);
        assert!(matches!(mixed_qubit_zezd(&s), Err(Error::NoZezd(_))));
    }

    #[test]
    fn depolarized_check_endpoints() {
        let s = qubit_scenario(std::f64::consts::PI / 5.0);
        let basis = zezd_basis(&s, &[false]).unwrap();
        for eta in [0.0, 0.4, 1.0] {
            let (err, dis) = depolarized_zezd_check(&s, eta, &basis).unwrap();
            assert!(err <= 1e-9 && dis <= 1e-9, "eta={eta}: {err:e} {dis:e}");
        }
        assert!(depolarized_zezd_check(&s, 1.2, &basis).is_err());
    }

    #[test]
    fn sign_string_enumeration() {
        assert_eq!(all_sign_strings(2).len(), 2);
        assert_eq!(all_sign_strings(4).len(), 8);
        let p = ProbDist::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(p.len(), 2);
    }
}
