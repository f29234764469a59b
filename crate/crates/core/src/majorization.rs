//! Majorization, contiguous partitions of the sorted index string,
//! majorization by sections, and the family of coarsest valid partitions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::ProbDist;

/// One-sided slack on prefix-sum comparisons so float noise never flips a
/// true majorization to false; exact ties count as majorization.
pub const MAJORIZATION_SLACK: f64 = 1e-12;
/// Two lists compared for majorization must carry the same total mass.
pub const TOTALS_TOL: f64 = 1e-10;
/// Enumerating partitions is 2^(d−1); refuse beyond this dimension.
pub const MAX_PARTITION_DIM: usize = 20;

/// A list sorted in nonincreasing order together with the permutation back to
/// the original labels: `perm[k]` is the original index of the k-th largest
/// value. Totals need not be 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SortedDist {
    values: Vec<f64>,
    perm: Vec<usize>,
}

impl SortedDist {
    /// Wraps values that are already nonincreasing (identity permutation).
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Precondition(
                "values must be sorted in nonincreasing order".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Precondition(
                "sorted distribution values must be finite and nonnegative".into(),
            ));
        }
        let perm = (0..values.len()).collect();
        Ok(Self { values, perm })
    }

    pub fn from_values(values: &[f64]) -> Self {
        let mut idx: Vec<usize> = (0..values.len()).collect();
        // Stable: ties keep original label order.
        idx.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
        Self {
            values: idx.iter().map(|&i| values[i]).collect(),
            perm: idx,
        }
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

    /// Original label of the value at sorted position `k`.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn total(&self) -> f64 {
        compensated_sum(&self.values)
    }
}

/// Stable descending sort of a distribution.
pub fn sort_desc(p: &ProbDist) -> SortedDist {
    SortedDist::from_values(p.values())
}

/// A contiguous partition of the index string 0..d. A cut at position `c`
/// separates indices `c−1` and `c`; cuts are strictly increasing values in
/// 1..d. No cuts means the single-section (trivial) partition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    d: usize,
    cuts: Vec<usize>,
}

impl Partition {
    pub fn new(d: usize, cuts: Vec<usize>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Dimension {
                context: "partition length",
                expected: 1,
                got: 0,
            });
        }
        for w in cuts.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Precondition(
                    "partition cuts must be strictly increasing".into(),
                ));
            }
        }
        if cuts.iter().any(|&c| c == 0 || c >= d) {
            return Err(Error::Precondition(format!(
                "partition cuts must lie in 1..{d}"
            )));
        }
        Ok(Self { d, cuts })
    }

    pub fn trivial(d: usize) -> Self {
        Self { d, cuts: vec![] }
    }

    pub fn finest(d: usize) -> Self {
        Self {
            d,
            cuts: (1..d).collect(),
        }
    }

    /// Bit `i` of `mask` set means a cut at position `i+1`.
    pub fn from_mask(d: usize, mask: u32) -> Self {
        let cuts = (0..d.saturating_sub(1))
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| i + 1)
            .collect();
        Self { d, cuts }
    }

    pub fn mask(&self) -> u32 {
        self.cuts.iter().fold(0, |m, &c| m | 1 << (c - 1))
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn cuts(&self) -> &[usize] {
        &self.cuts
    }

    pub fn num_sections(&self) -> usize {
        self.cuts.len() + 1
    }

    /// Half-open index ranges of the sections, in order.
    pub fn sections(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::with_capacity(self.num_sections());
        let mut start = 0;
        for &c in &self.cuts {
            out.push(start..c);
            start = c;
        }
        out.push(start..self.d);
        out
    }

    /// `self` is coarser than `other` when `other` can be obtained from
    /// `self` by additional cutting. This is a partial order.
    pub fn is_coarser_than(&self, other: &Partition) -> bool {
        self.d == other.d
            && self.cuts.len() < other.cuts.len()
            && self.cuts.iter().all(|c| other.cuts.binary_search(c).is_ok())
    }
}

fn compensated_sum(values: &[f64]) -> f64 {
    // Neumaier variant of Kahan summation.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn check_same_len(p: &SortedDist, q: &SortedDist) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::Dimension {
            context: "majorization comparison",
            expected: p.len(),
            got: q.len(),
        });
    }
    Ok(())
}

/// Prefix-sum domination on raw sorted slices with absolute slack.
fn majorizes_slices(p: &[f64], q: &[f64], slack: f64) -> bool {
    let mut pp = 0.0;
    let mut qq = 0.0;
    for (a, b) in p.iter().zip(q) {
        pp += a;
        qq += b;
        if pp < qq - slack {
            return false;
        }
    }
    true
}

/// P majorizes Q: every prefix sum of P dominates that of Q (with
/// `MAJORIZATION_SLACK`). Totals must agree within `TOTALS_TOL` but need not
/// be 1.
pub fn majorizes(p: &SortedDist, q: &SortedDist) -> Result<bool> {
    check_same_len(p, q)?;
    let (tp, tq) = (p.total(), q.total());
    if (tp - tq).abs() > TOTALS_TOL {
        return Err(Error::Precondition(format!(
            "majorization requires equal totals: {tp} vs {tq}"
        )));
    }
    Ok(majorizes_slices(p.values(), q.values(), MAJORIZATION_SLACK))
}

/// Within one section, is the section-normalized P-slice majorizing the
/// section-normalized Q-slice? Zero-mass sections follow the limit of
/// infinitesimal positive factors: a zero-mass Q-section is the uniform
/// limit (majorized by everything, so the section passes); a zero-mass
/// P-section is uniform too and majorizes only a uniform Q-section.
fn section_passes(p: &[f64], q: &[f64]) -> bool {
    let ps = compensated_sum(p);
    let qs = compensated_sum(q);
    let k = p.len() as f64;
    if qs <= 0.0 {
        return true;
    }
    if ps <= 0.0 {
        // Uniform ≻ Q̂ only when Q̂ is itself uniform.
        let mean = qs / k;
        return q.iter().all(|&v| (v - mean).abs() <= MAJORIZATION_SLACK * qs.max(1.0));
    }
    // prefix(p)/ps ≥ prefix(q)/qs − slack, in multiplied-out form.
    let mut pp = 0.0;
    let mut qq = 0.0;
    for (a, b) in p.iter().zip(q) {
        pp += a;
        qq += b;
        if pp * qs < qq * ps - MAJORIZATION_SLACK * ps * qs {
            return false;
        }
    }
    true
}

/// Majorization by sections: the normalized relation must hold inside every
/// section of the partition.
pub fn majorizes_by_sections(p: &SortedDist, q: &SortedDist, part: &Partition) -> Result<bool> {
    check_same_len(p, q)?;
    if part.dim() != p.len() {
        return Err(Error::Dimension {
            context: "partition over distribution",
            expected: p.len(),
            got: part.dim(),
        });
    }
    Ok(part
        .sections()
        .into_iter()
        .all(|s| section_passes(&p.values()[s.clone()], &q.values()[s])))
}

/// Sums the sorted values inside each section (compensated summation).
pub fn coarse_grain(p: &SortedDist, part: &Partition) -> Result<ProbDist> {
    if part.dim() != p.len() {
        return Err(Error::Dimension {
            context: "coarse graining",
            expected: p.len(),
            got: part.dim(),
        });
    }
    let values: Vec<f64> = part
        .sections()
        .into_iter()
        .map(|s| compensated_sum(&p.values()[s]))
        .collect();
    ProbDist::new(values)
}

/// All contiguous partitions under which P majorizes Q by sections,
/// in ascending cut-mask order.
pub fn valid_partitions(p: &SortedDist, q: &SortedDist) -> Result<Vec<Partition>> {
    check_same_len(p, q)?;
    let d = p.len();
    if d > MAX_PARTITION_DIM {
        return Err(Error::ResourceLimit(format!(
            "partition enumeration is 2^(d-1); d = {d} exceeds {MAX_PARTITION_DIM}"
        )));
    }
    let mut out = Vec::new();
    for mask in 0u32..1 << (d - 1) {
        let part = Partition::from_mask(d, mask);
        if majorizes_by_sections(p, q, &part)? {
            out.push(part);
        }
    }
    Ok(out)
}

/// The coarsest members of `valid_partitions`: valid partitions none of
/// whose strict coarsenings (cut subsets) is itself valid. Never empty —
/// the finest partition always qualifies.
pub fn coarsest_valid_partitions(p: &SortedDist, q: &SortedDist) -> Result<Vec<Partition>> {
    let valid = valid_partitions(p, q)?;
    Ok(coarsest_of(&valid, p.len()))
}

/// Extracts the maximal elements under the coarseness partial order.
/// `dominated[m]` marks masks with some valid subset, built by subset DP so
/// the scan stays O(2^(d−1)·d) instead of comparing all pairs.
pub fn coarsest_of(valid: &[Partition], d: usize) -> Vec<Partition> {
    let bits = d - 1;
    let size = 1usize << bits;
    let mut is_valid = vec![false; size];
    for part in valid {
        is_valid[part.mask() as usize] = true;
    }
    let mut dominated = vec![false; size];
    for m in 0..size {
        dominated[m] = is_valid[m]
            || (0..bits).any(|b| m >> b & 1 == 1 && dominated[m & !(1 << b)]);
    }
    valid
        .iter()
        .filter(|part| {
            let m = part.mask() as usize;
            !(0..bits).any(|b| m >> b & 1 == 1 && dominated[m & !(1 << b)])
        })
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sd(vals: &[f64]) -> SortedDist {
        SortedDist::from_values(vals)
    }

    #[test]
    fn sort_desc_tracks_labels() {
        let p = ProbDist::new(vec![0.2, 0.5, 0.3]).unwrap();
        let s = sort_desc(&p);
        assert_eq!(s.values(), &[0.5, 0.3, 0.2]);
        assert_eq!(s.perm(), &[1, 2, 0]);
    }

    #[test]
    fn sort_desc_ties_keep_original_order() {
        let p = ProbDist::new(vec![0.5, 0.5]).unwrap();
        let s = sort_desc(&p);
        assert_eq!(s.perm(), &[0, 1]);
    }

    #[test]
    fn sort_desc_of_sorted_is_identity() {
        let p = ProbDist::new(vec![0.6, 0.3, 0.1]).unwrap();
        assert_eq!(sort_desc(&p).perm(), &[0, 1, 2]);
    }

    #[test]
    fn point_mass_majorizes_everything() {
        assert!(majorizes(&sd(&[1.0, 0.0, 0.0]), &sd(&[0.5, 0.3, 0.2])).unwrap());
    }

    #[test]
    fn uniform_is_majorized_by_everything() {
        let third = 1.0 / 3.0;
        assert!(majorizes(&sd(&[0.5, 0.3, 0.2]), &sd(&[third, third, third])).unwrap());
    }

    #[test]
    fn majorization_can_fail() {
        assert!(!majorizes(&sd(&[0.727, 0.273]), &sd(&[0.978, 0.022])).unwrap());
    }

    #[test]
    fn majorizes_rejects_unequal_totals() {
        assert!(matches!(
            majorizes(&sd(&[0.7, 0.3]), &sd(&[0.5, 0.3])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn finest_partition_always_passes() {
        let p = sd(&[0.4, 0.3, 0.2, 0.1]);
        let q = sd(&[0.7, 0.2, 0.05, 0.05]);
        assert!(majorizes_by_sections(&p, &q, &Partition::finest(4)).unwrap());
    }

    #[test]
    fn sections_example_pass_and_fail() {
        let p = sd(&[0.5, 0.3, 0.2]);
        let q = sd(&[0.6, 0.2, 0.2]);
        // {0}{1,2}: second section gives (0.6, 0.4) ≻ (0.5, 0.5).
        assert!(majorizes_by_sections(&p, &q, &Partition::new(3, vec![1]).unwrap()).unwrap());
        // {0,1}{2}: first section gives (0.625, 0.375) ⊁ (0.75, 0.25).
        assert!(!majorizes_by_sections(&p, &q, &Partition::new(3, vec![2]).unwrap()).unwrap());
    }

    #[test]
    fn coarse_grain_examples() {
        let p = sd(&[0.5, 0.3, 0.2]);
        assert_eq!(
            coarse_grain(&p, &Partition::trivial(3)).unwrap().values(),
            &[1.0]
        );
        assert_eq!(
            coarse_grain(&p, &Partition::finest(3)).unwrap().values(),
            &[0.5, 0.3, 0.2]
        );
        assert_eq!(
            coarse_grain(&p, &Partition::new(3, vec![1]).unwrap())
                .unwrap()
                .values(),
            &[0.5, 0.5]
        );
    }

    #[test]
    fn coarsest_partitions_worked_example() {
        let p = sd(&[0.5, 0.3, 0.2]);
        let q = sd(&[0.6, 0.2, 0.2]);
        let coarsest = coarsest_valid_partitions(&p, &q).unwrap();
        assert_eq!(coarsest, vec![Partition::new(3, vec![1]).unwrap()]);
    }

    #[test]
    fn globally_majorizing_pair_has_trivial_coarsest() {
        let p = sd(&[0.75, 0.25]);
        let q = sd(&[0.6, 0.4]);
        let coarsest = coarsest_valid_partitions(&p, &q).unwrap();
        assert_eq!(coarsest, vec![Partition::trivial(2)]);
    }

    #[test]
    fn partition_pool_size_d3() {
        let p = sd(&[0.5, 0.3, 0.2]);
        let q = sd(&[0.5, 0.3, 0.2]);
        // All 2^(3-1) = 4 contiguous partitions are valid for P = Q.
        assert_eq!(valid_partitions(&p, &q).unwrap().len(), 4);
    }

    #[test]
    fn enumeration_guard() {
        let n = 21;
        let vals = vec![1.0 / n as f64; n];
        let p = sd(&vals);
        assert!(matches!(
            coarsest_valid_partitions(&p, &p),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn zero_mass_section_conventions() {
        // Zero Q-section passes regardless of P.
        let p = sd(&[0.6, 0.4, 0.0, 0.0]);
        let q = sd(&[1.0, 0.0, 0.0, 0.0]);
        let part = Partition::new(4, vec![1]).unwrap();
        // Section {1,2,3}: Q-mass 0 → passes; section {0}: singleton passes.
        assert!(majorizes_by_sections(&p, &q, &part).unwrap());
        // Zero P-section against non-uniform Q-section fails...
        let p = sd(&[1.0, 0.0, 0.0]);
        let q = sd(&[0.4, 0.4, 0.2]);
        let part = Partition::new(3, vec![1]).unwrap();
        assert!(!majorizes_by_sections(&p, &q, &part).unwrap());
        // ...but passes when the Q-section is uniform.
        let q = sd(&[0.4, 0.3, 0.3]);
        assert!(majorizes_by_sections(&p, &q, &part).unwrap());
    }

    #[test]
    fn coarseness_is_a_partial_order() {
        let a = Partition::new(9, vec![2]).unwrap();
        let b = Partition::new(9, vec![2, 5]).unwrap();
        let c = Partition::new(9, vec![4, 7]).unwrap();
        assert!(a.is_coarser_than(&b));
        assert!(!b.is_coarser_than(&a));
        assert!(!a.is_coarser_than(&c));
        assert!(!c.is_coarser_than(&a));
    }

    #[test]
    fn partition_mask_round_trip() {
        for mask in 0u32..16 {
            let p = Partition::from_mask(5, mask);
            assert_eq!(p.mask(), mask);
        }
    }
}
