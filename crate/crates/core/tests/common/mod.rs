//! Shared test fixtures: randomized scenarios, distribution pairs with
//! prescribed majorization relations, and error/disturbance evaluation.
//!
//! The scenario constructors here are deliberately independent of the
//! synthesis machinery under test: states are embedded with Householder
//! reflections and Gram–Schmidt frames only.

#![allow(dead_code)]

use backaction::divergence::err_dis_sum;
use backaction::majorization::{majorizes, sort_desc, SortedDist};
use backaction::numerics::{inner, random_prob_dist, random_unitary, vec_norm, ComplexMatrix, Seed};
use backaction::quantum::{born_distribution, disturbed_distribution};
use backaction::{Basis, Complex64, ProbDist, QuantumState, Scenario};
use rand::Rng;

pub fn random_basis(d: usize, seed: Seed) -> Basis {
    let u = random_unitary(d, seed).unwrap();
    Basis::new((0..d).map(|c| u.column(c)).collect()).unwrap()
}

pub fn random_pure_state(d: usize, seed: Seed) -> QuantumState {
    let u = random_unitary(d, seed).unwrap();
    QuantumState::new_pure(u.column(0)).unwrap()
}

pub fn random_mixed_state(d: usize, seed: Seed) -> QuantumState {
    let spectrum = random_prob_dist(d, seed.child(0)).unwrap();
    let u = random_unitary(d, seed.child(1)).unwrap();
    let mut rho = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        let v = u.column(k);
        let w = spectrum.values()[k];
        for r in 0..d {
            for c in 0..d {
                let add = v[r] * v[c].conj() * w;
                rho.set(r, c, rho.at(r, c) + add);
            }
        }
    }
    QuantumState::new_mixed(rho).unwrap()
}

pub fn random_pure_scenario(d: usize, seed: Seed) -> Scenario {
    Scenario::new(
        random_pure_state(d, seed.child(10)),
        random_basis(d, seed.child(11)),
        random_basis(d, seed.child(12)),
    )
    .unwrap()
}

pub fn random_mixed_scenario(d: usize, seed: Seed) -> Scenario {
    Scenario::new(
        random_mixed_state(d, seed.child(10)),
        random_basis(d, seed.child(11)),
        random_basis(d, seed.child(12)),
    )
    .unwrap()
}

/// Sorted pair with `p ≻ q`, generated without rejection: q is the
/// unistochastic push-forward of p through a Haar unitary, which the
/// Hardy–Littlewood–Pólya theorem guarantees p majorizes.
pub fn random_majorizing_pair(d: usize, seed: Seed) -> (SortedDist, SortedDist) {
    let p = random_prob_dist(d, seed.child(0)).unwrap();
    let u = random_unitary(d, seed.child(1)).unwrap();
    let q: Vec<f64> = (0..d)
        .map(|j| {
            (0..d)
                .map(|i| p.values()[i] * u.at(i, j).norm_sqr())
                .sum()
        })
        .collect();
    (
        sort_desc(&p),
        sort_desc(&ProbDist::new(q).unwrap()),
    )
}

/// Sorted pair with `p ⊁ q`, by rejection from the uniform simplex.
pub fn random_non_majorizing_pair(d: usize, seed: Seed) -> (SortedDist, SortedDist) {
    for k in 0.. {
        let p = sort_desc(&random_prob_dist(d, seed.child(2 * k)).unwrap());
        let q = sort_desc(&random_prob_dist(d, seed.child(2 * k + 1)).unwrap());
        if !majorizes(&p, &q).unwrap() {
            return (p, q);
        }
    }
    unreachable!()
}

/// A pure scenario whose ideal distributions are exactly `p` (observable A)
/// and `q` (observable B), up to roundoff: the state is written over a
/// random-phase B eigenbasis with amplitudes √q, and the A basis comes from
/// a real Householder reflection whose leading row is √p, applied over a
/// Gram–Schmidt completion of the state.
pub fn scenario_with_distributions(p: &[f64], q: &[f64], seed: Seed) -> Scenario {
    let d = p.len();
    assert_eq!(q.len(), d);
    let basis_b = random_basis(d, seed.child(20));
    let mut rng = seed.child(21).rng();
    let psi: Vec<Complex64> = {
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        for (j, amp) in v.iter_mut().enumerate() {
            let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            *amp = Complex64::from_polar(q[j].max(0.0).sqrt(), phase);
        }
        let mut out = vec![Complex64::new(0.0, 0.0); d];
        for (j, amp) in v.iter().enumerate() {
            for (x, b) in out.iter_mut().zip(basis_b.vector(j)) {
                *x += amp * b;
            }
        }
        out
    };
    let state = QuantumState::new_pure(psi.clone()).unwrap();

    // Frame with the state first.
    let mut frame: Vec<Vec<Complex64>> = vec![psi];
    let mut candidate = 0usize;
    while frame.len() < d {
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        v[candidate % d] = Complex64::new(1.0, 0.0);
        candidate += 1;
        for _ in 0..2 {
            for f in &frame {
                let proj = inner(f, &v);
                for (x, fi) in v.iter_mut().zip(f) {
                    *x -= proj * fi;
                }
            }
        }
        let n = vec_norm(&v);
        if n < 1e-6 {
            continue;
        }
        for x in v.iter_mut() {
            *x /= n;
        }
        frame.push(v);
    }

    // Real symmetric Householder with first row √p.
    let u: Vec<f64> = p.iter().map(|&x| x.max(0.0).sqrt()).collect();
    let mut w = u.clone();
    w[0] -= 1.0;
    let wn2: f64 = w.iter().map(|x| x * x).sum();
    let h = |r: usize, c: usize| -> f64 {
        let id = if r == c { 1.0 } else { 0.0 };
        if wn2 < 1e-30 {
            id
        } else {
            id - 2.0 * w[r] * w[c] / wn2
        }
    };
    let basis_a: Vec<Vec<Complex64>> = (0..d)
        .map(|i| {
            let mut v = vec![Complex64::new(0.0, 0.0); d];
            for (j, f) in frame.iter().enumerate() {
                let coeff = h(j, i);
                for (x, fj) in v.iter_mut().zip(f) {
                    *x += fj * coeff;
                }
            }
            v
        })
        .collect();
    Scenario::new(state, Basis::new(basis_a).unwrap(), basis_b).unwrap()
}

/// Error + disturbance of a measurement basis with native outcome labels.
pub fn err_dis_of(s: &Scenario, meas: &Basis) -> f64 {
    let p = s.ideal_p().unwrap();
    let q = s.ideal_q().unwrap();
    let pp = born_distribution(s.state(), meas).unwrap();
    let qt = disturbed_distribution(s.state(), meas, s.basis_b()).unwrap();
    err_dis_sum(&p, &q, &pp, &qt).unwrap()
}

/// Total-variation distance between two distributions.
pub fn total_variation(a: &ProbDist, b: &ProbDist) -> f64 {
    0.5 * a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .sum::<f64>()
}
