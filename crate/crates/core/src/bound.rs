//! The Jensen–Shannon tradeoff lower bound on error + disturbance, its
//! closed-form extreme points, and constructions realizing them.
//!
//! With sorted ideal distributions P and Q, the minimum of
//! D(P‖P′) + D(Q‖Q̃) over all pairs with P′ ≻ Q̃ is attained on a face where
//! some prefix sums agree. Faces correspond to contiguous partitions; on each
//! valid partition the Lagrange extreme point is explicit and its value is
//! the doubled Jensen–Shannon divergence of the coarse-grained pair. The
//! bound is the minimum of those values over the coarsest valid partitions.

use num_complex::Complex64;
use serde::Serialize;

use crate::divergence::{err_dis_sum, js_divergence, relative_entropy_slices};
use crate::error::{Error, Result};
use crate::majorization::{
    coarse_grain, coarsest_of, majorizes_by_sections, sort_desc, valid_partitions, Partition,
    SortedDist,
};
use crate::numerics::inner;
use crate::quantum::{born_distribution, disturbed_distribution, Basis, ProbDist, Scenario};
use crate::synthesis::{horn_unitary, synthesize};

/// Everything `tradeoff_bound` learns about one pair of ideal distributions.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub sorted_p: SortedDist,
    pub sorted_q: SortedDist,
    pub valid_partitions: Vec<Partition>,
    pub coarsest: Vec<Partition>,
    /// Doubled Jensen–Shannon value of the coarse-grained pair, per coarsest
    /// partition, in ascending cut-mask order.
    pub per_partition_js: Vec<(Partition, f64)>,
    /// min over the coarsest partitions; zero exactly in the ZEZD regime.
    pub bound: f64,
    /// All coarsest partitions attaining the minimum.
    pub argmin: Vec<Partition>,
    /// Extreme point (P′, Q̃) at the first argmin, in the sorted frame.
    pub extreme_point: (ProbDist, ProbDist),
    pub zezd_possible: bool,
}

/// Lower bound on error + disturbance for ideal distributions `p` and `q`.
///
/// Sorts both descending (the optimal outcome labeling), enumerates the
/// partitions under which P majorizes Q by sections, and minimizes the
/// doubled Jensen–Shannon divergence of the coarse-grained pairs over the
/// coarsest ones. The no-cut partition is valid exactly when P ≻ Q, which
/// makes the bound zero and a perfect apparatus possible.
pub fn tradeoff_bound(p: &ProbDist, q: &ProbDist) -> Result<BoundReport> {
    if p.len() != q.len() {
        return Err(Error::Dimension {
            context: "tradeoff bound",
            expected: p.len(),
            got: q.len(),
        });
    }
    let sorted_p = sort_desc(p);
    let sorted_q = sort_desc(q);
    let valid = valid_partitions(&sorted_p, &sorted_q)?;
    let coarsest = coarsest_of(&valid, sorted_p.len());
    let mut per_partition_js = Vec::with_capacity(coarsest.len());
    for part in &coarsest {
        let cp = coarse_grain(&sorted_p, part)?;
        let cq = coarse_grain(&sorted_q, part)?;
        per_partition_js.push((part.clone(), js_divergence(&cp, &cq)?));
    }
    let bound = per_partition_js
        .iter()
        .map(|(_, v)| *v)
        .fold(f64::INFINITY, f64::min);
    let argmin: Vec<Partition> = per_partition_js
        .iter()
        .filter(|(_, v)| *v <= bound + 1e-15)
        .map(|(part, _)| part.clone())
        .collect();
    let extreme_point = extreme_point(&sorted_p, &sorted_q, &argmin[0])?;
    let zezd_possible = coarsest.iter().any(|part| part.cuts().is_empty());
    Ok(BoundReport {
        sorted_p,
        sorted_q,
        valid_partitions: valid,
        coarsest,
        per_partition_js,
        bound: if zezd_possible { 0.0 } else { bound },
        argmin,
        extreme_point,
        zezd_possible,
    })
}

/// Closed-form minimizer of D(P‖P′) + D(Q‖Q̃) on the face of a valid
/// partition: within section S, p′ᵢ = pᵢ/2·(1 + Q_S/P_S) and
/// q̃ᵢ = qᵢ/2·(1 + P_S/Q_S). Per-section sums of P′ and Q̃ agree exactly, and
/// the attained value is the doubled Jensen–Shannon divergence of the
/// coarse-grained pair. Zero-mass sections follow the infinitesimal-factor
/// limit: the surviving side is halved and the vanished side picks up the
/// matching uniform share.
pub fn extreme_point(
    p: &SortedDist,
    q: &SortedDist,
    part: &Partition,
) -> Result<(ProbDist, ProbDist)> {
    if !majorizes_by_sections(p, q, part)? {
        return Err(Error::Precondition(
            "partition is not valid for this pair; its extreme point leaves the \
             majorization region"
                .into(),
        ));
    }
    let d = p.len();
    let mut pp = vec![0.0; d];
    let mut qt = vec![0.0; d];
    for section in part.sections() {
        let ps: f64 = p.values()[section.clone()].iter().sum();
        let qs: f64 = q.values()[section.clone()].iter().sum();
        let k = section.len() as f64;
        for i in section {
            let (pi, qi) = (p.values()[i], q.values()[i]);
            if ps <= 0.0 && qs <= 0.0 {
                continue;
            } else if qs <= 0.0 {
                pp[i] = 0.5 * pi;
                qt[i] = 0.5 * ps / k;
            } else if ps <= 0.0 {
                pp[i] = 0.5 * qs / k;
                qt[i] = 0.5 * qi;
            } else {
                pp[i] = 0.5 * pi * (1.0 + qs / ps);
                qt[i] = 0.5 * qi * (1.0 + ps / qs);
            }
        }
    }
    Ok((ProbDist::new(pp)?, ProbDist::new(qt)?))
}

/// Independent qubit check of the bound: a grid scan over the unit square of
/// (p′₁, q̃₁) pairs restricted to sorted majorization, followed by compass
/// refinement around the best cell.
pub fn s1_min_numeric_qubit(p: &ProbDist, q: &ProbDist, grid_n: usize) -> Result<f64> {
    if p.len() != 2 || q.len() != 2 {
        return Err(Error::Unsupported(
            "the grid verifier is implemented for qubits only".into(),
        ));
    }
    if grid_n < 2 {
        return Err(Error::Precondition("grid must have at least 2 points".into()));
    }
    let sp = sort_desc(p);
    let sq = sort_desc(q);
    let objective = |x: f64, y: f64| -> f64 {
        // Sorted majorization for d = 2: the more certain side of P′ must
        // dominate the more certain side of Q̃.
        if x.max(1.0 - x) < y.max(1.0 - y) {
            return f64::INFINITY;
        }
        let dp = relative_entropy_slices(sp.values(), &[x, 1.0 - x]).unwrap();
        let dq = relative_entropy_slices(sq.values(), &[y, 1.0 - y]).unwrap();
        dp + dq
    };
    let step = 1.0 / (grid_n - 1) as f64;
    let mut best = f64::INFINITY;
    let mut best_xy = (0.5, 0.5);
    for i in 0..grid_n {
        let x = i as f64 * step;
        for j in 0..grid_n {
            let y = j as f64 * step;
            let v = objective(x, y);
            if v < best {
                best = v;
                best_xy = (x, y);
            }
        }
    }
    // Compass search shrinks around the best grid cell; the objective is
    // smooth so a few dozen halvings reach far below the grid resolution.
    let (mut x, mut y) = best_xy;
    let mut h = step;
    for _ in 0..60 {
        let mut improved = false;
        for (dx, dy) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h), (h, h), (-h, -h)] {
            let (nx, ny) = ((x + dx).clamp(0.0, 1.0), (y + dy).clamp(0.0, 1.0));
            let v = objective(nx, ny);
            if v < best {
                best = v;
                x = nx;
                y = ny;
                improved = true;
            }
        }
        if !improved {
            h *= 0.5;
            if h < 1e-12 {
                break;
            }
        }
    }
    Ok(best)
}

/// Realizes a target extreme point (P′, Q̃) with actual measurement bases:
/// an apparatus basis for A whose Born distribution on the scenario state is
/// P′, and a replacement basis for the B measurement whose sequential
/// statistics are Q̃. The state is embedded as the leading vector of an
/// auxiliary frame, the A side comes from a synthesis against the point-mass
/// distribution, and the B side from the column condition alone.
///
/// Both returned bases are labeled to match the scenario's original outcome
/// labels; `signs` picks the synthesis branches.
pub fn realize_s1_point(
    s: &Scenario,
    target: &(ProbDist, ProbDist),
    signs: &[bool],
) -> Result<(Basis, Basis)> {
    if !s.state().is_pure() {
        return Err(Error::Unsupported(
            "realizing an extreme point needs a pure scenario state".into(),
        ));
    }
    let d = s.dim();
    let (target_pp, target_qt) = target;
    if target_pp.len() != d || target_qt.len() != d {
        return Err(Error::Dimension {
            context: "target distribution length",
            expected: d,
            got: target_pp.len().min(target_qt.len()),
        });
    }
    let sp_t = sort_desc(target_pp);
    let sq_t = sort_desc(target_qt);
    // Sorted slot k of a target carries the k-th largest probability; route
    // it through the target's own permutation onto the scenario's original
    // outcome labels, aligned descending with the matching ideal.
    let ideal_p_perm = sort_desc(&s.ideal_p()?).perm().to_vec();
    let ideal_q_perm = sort_desc(&s.ideal_q()?).perm().to_vec();
    let a_label = |k: usize| ideal_p_perm[sp_t.perm()[k]];
    let b_label = |l: usize| ideal_q_perm[sq_t.perm()[l]];

    // Auxiliary orthonormal frame with the state first.
    let psi = match s.state() {
        crate::quantum::QuantumState::Pure(v) => v.clone(),
        _ => unreachable!(),
    };
    let frame = complete_frame(&psi);

    // a′ basis: any unitary whose first row is √(sorted P′) has columns whose
    // Born distribution on ψ is sorted P′; the synthesis from the point mass
    // provides exactly that row.
    let point_mass = {
        let mut v = vec![0.0; d];
        v[0] = 1.0;
        SortedDist::new(v)?
    };
    let u1 = synthesize(&point_mass, &sp_t, signs)
        .map_err(|e| match e {
            Error::Precondition(msg) => Error::Precondition(format!(
                "target lies outside the realizable region: {msg}"
            )),
            other => other,
        })?
        .u;
    let mut a_vectors = vec![Vec::new(); d];
    for k in 0..d {
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        for j in 0..d {
            let coeff = u1.at(j, k);
            for (x, f) in v.iter_mut().zip(&frame[j]) {
                *x += coeff * f;
            }
        }
        a_vectors[a_label(k)] = v;
    }
    let a_basis = Basis::new(a_vectors)?;

    // b′ basis: the column condition pushes sorted P′ onto sorted Q̃ exactly
    // when the former majorizes the latter — guaranteed for extreme points of
    // valid partitions.
    let h = horn_unitary(&sp_t, &sq_t, signs).map_err(|e| match e {
        Error::Precondition(msg) => Error::Precondition(format!(
            "target lies outside the majorization region: {msg}"
        )),
        other => other,
    })?;
    let a_sorted_vectors: Vec<&[Complex64]> = (0..d).map(|k| a_basis.vector(a_label(k))).collect();
    let mut b_vectors = vec![Vec::new(); d];
    for l in 0..d {
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        for k in 0..d {
            let coeff = h.at(k, l).conj();
            for (x, a) in v.iter_mut().zip(a_sorted_vectors[k]) {
                *x += coeff * a;
            }
        }
        b_vectors[b_label(l)] = v;
    }
    let b_basis = Basis::new(b_vectors)?;
    Ok((a_basis, b_basis))
}

/// Orthonormal frame starting with `psi`, completed from the canonical basis
/// by Gram–Schmidt (skipping near-parallel candidates).
fn complete_frame(psi: &[Complex64]) -> Vec<Vec<Complex64>> {
    let d = psi.len();
    let mut frame: Vec<Vec<Complex64>> = vec![psi.to_vec()];
    let mut candidate = 0usize;
    while frame.len() < d {
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        v[candidate % d] = Complex64::new(1.0, 0.0);
        candidate += 1;
        for _pass in 0..2 {
            for f in &frame {
                let proj = inner(f, &v);
                for (x, fi) in v.iter_mut().zip(f) {
                    *x -= proj * fi;
                }
            }
        }
        let n = crate::numerics::vec_norm(&v);
        if n < 1e-6 {
            continue;
        }
        for x in v.iter_mut() {
            *x /= n;
        }
        frame.push(v);
    }
    frame
}

/// Error + disturbance of an apparatus pair (a′ measurement, b′ readout)
/// against the scenario's ideal distributions, with native labels.
pub fn realized_err_dis(s: &Scenario, a_basis: &Basis, b_basis: &Basis) -> Result<f64> {
    let p = s.ideal_p()?;
    let q = s.ideal_q()?;
    let pp = born_distribution(s.state(), a_basis)?;
    let qt = disturbed_distribution(s.state(), a_basis, b_basis)?;
    err_dis_sum(&p, &q, &pp, &qt)
}
