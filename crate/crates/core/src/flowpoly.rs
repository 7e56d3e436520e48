//! Flow polytopes P_{l,m}(h): lattice-point counting (the Kostant partition
//! function), exact volumes via Ehrhart leading coefficients, and chamber
//! volume polynomials.
//!
//! Counting runs over a box table: each of the M edge copies contributes one
//! in-place pass data[s] += data[s - root], so a full table costs O(M * states)
//! additions. Counts use checked i128; the top of the desk-scale grid stays
//! far below the overflow bound.

use std::collections::BTreeMap;

use num::One;
use thiserror::Error;

use crate::poly::{interpolate_homogeneous, monomial_count, InterpolateError, Poly};
use crate::rootsys::Weight;
use crate::{rint, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FlowError {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("multiplicity m[{0},{1}] must be present and at least 1")]
    BadMultiplicity(usize, usize),
    #[error("h must have integer alpha coordinates")]
    NonIntegralH,
    #[error("h must lie in the open cone (all alpha coordinates positive)")]
    NotInOpenCone,
    #[error("counting overflow; instance too large for exact i128 counting")]
    CountOverflow,
    #[error("Ehrhart fit failed at k={0}: h lies on a chamber wall or the polytope is not full-dimensional")]
    EhrhartFitFailed(i64),
    #[error("samples straddle a chamber wall (inconsistent surplus fit)")]
    WallStraddle,
    #[error("rank-deficient interpolation; more samples needed (have rank {rank} of {needed})")]
    NeedMoreSamples { rank: usize, needed: usize },
    #[error("need at least {needed} samples, got {got}")]
    NotEnoughSamples { needed: usize, got: usize },
    #[error("duplicate sample points")]
    DuplicateSamples,
    #[error("custom samples must have positive integer alpha coordinates")]
    BadSample,
}

/// Edge multiplicities m_{i,j} (1 <= i < j <= l+1) of the complete DAG.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiplicityMatrix {
    l: usize,
    m: BTreeMap<(usize, usize), u32>,
}

impl MultiplicityMatrix {
    pub fn new(l: usize, entries: BTreeMap<(usize, usize), u32>) -> Result<Self, FlowError> {
        if l == 0 {
            return Err(FlowError::ZeroRank);
        }
        for i in 1..=l {
            for j in i + 1..=l + 1 {
                match entries.get(&(i, j)) {
                    Some(&v) if v >= 1 => {}
                    _ => return Err(FlowError::BadMultiplicity(i, j)),
                }
            }
        }
        if entries.len() != l * (l + 1) / 2 {
            let extra = entries
                .keys()
                .find(|(i, j)| !(1 <= *i && i < j && *j <= l + 1))
                .copied()
                .unwrap_or((0, 0));
            return Err(FlowError::BadMultiplicity(extra.0, extra.1));
        }
        Ok(MultiplicityMatrix { l, m: entries })
    }

    /// All m_{i,j} equal to n.
    pub fn uniform(l: usize, n: u32) -> Result<Self, FlowError> {
        if n == 0 {
            return Err(FlowError::BadMultiplicity(1, 2));
        }
        let mut m = BTreeMap::new();
        for i in 1..=l {
            for j in i + 1..=l + 1 {
                m.insert((i, j), n);
            }
        }
        MultiplicityMatrix::new(l, m)
    }

    /// From a flat list in (i,j) lexicographic order.
    pub fn from_list(l: usize, values: &[u32]) -> Result<Self, FlowError> {
        let mut m = BTreeMap::new();
        let mut it = values.iter();
        for i in 1..=l {
            for j in i + 1..=l + 1 {
                let v = it.next().ok_or(FlowError::BadMultiplicity(i, j))?;
                m.insert((i, j), *v);
            }
        }
        if it.next().is_some() {
            return Err(FlowError::BadMultiplicity(0, 0));
        }
        MultiplicityMatrix::new(l, m)
    }

    pub fn rank(&self) -> usize {
        self.l
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.m[&(i, j)]
    }

    /// M = sum of all multiplicities; the ambient dimension of the polytope.
    pub fn total(&self) -> u32 {
        self.m.values().sum()
    }

    /// M_i = sum over j > i of m_{i,j}.
    pub fn row_tail(&self, i: usize) -> u32 {
        (i + 1..=self.l + 1).map(|j| self.get(i, j)).sum()
    }

    /// Expected dimension of the flow polytope, M - l.
    pub fn dim(&self) -> u32 {
        self.total() - self.l as u32
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &u32)> {
        self.m.iter()
    }
}

/// Kostant partition counts for every h in a box, computed in one DP sweep.
pub struct PartitionTable {
    l: usize,
    bound: Vec<i64>,
    strides: Vec<usize>,
    data: Vec<i128>,
}

impl PartitionTable {
    pub fn build(mult: &MultiplicityMatrix, bound: &[i64]) -> Result<Self, FlowError> {
        let l = mult.rank();
        assert_eq!(bound.len(), l);
        if bound.iter().any(|&b| b < 0) {
            return Err(FlowError::NotInOpenCone);
        }
        let mut strides = vec![0usize; l];
        let mut size = 1usize;
        for t in (0..l).rev() {
            strides[t] = size;
            size = size
                .checked_mul((bound[t] + 1) as usize)
                .ok_or(FlowError::CountOverflow)?;
        }
        let mut data = vec![0i128; size];
        data[0] = 1;
        // The positive root e_i - e_j has alpha support [i, j-1] (1-based).
        for (&(i, j), &mij) in mult.entries() {
            let support = (i - 1)..(j - 1); // 0-based alpha indices
            let offset: usize = support.clone().map(|t| strides[t]).sum();
            for _copy in 0..mij {
                let mut coords = vec![0i64; l];
                for idx in 0..size {
                    if support.clone().all(|t| coords[t] >= 1) {
                        let prev = data[idx - offset];
                        if prev != 0 {
                            data[idx] = data[idx]
                                .checked_add(prev)
                                .ok_or(FlowError::CountOverflow)?;
                        }
                    }
                    // advance multi-index (last coordinate fastest)
                    for t in (0..l).rev() {
                        coords[t] += 1;
                        if coords[t] <= bound[t] {
                            break;
                        }
                        coords[t] = 0;
                    }
                }
            }
        }
        Ok(PartitionTable {
            l,
            bound: bound.to_vec(),
            strides,
            data,
        })
    }

    /// p_{l,m}(h); zero outside the cone, panics above the table bound.
    pub fn count(&self, h: &[i64]) -> i128 {
        assert_eq!(h.len(), self.l);
        if h.iter().any(|&c| c < 0) {
            return 0;
        }
        let mut idx = 0usize;
        for t in 0..self.l {
            assert!(h[t] <= self.bound[t], "query outside table bound");
            idx += self.strides[t] * h[t] as usize;
        }
        self.data[idx]
    }
}

fn integer_h(h: &Weight) -> Result<Vec<i64>, FlowError> {
    h.integer_alpha_coords().ok_or(FlowError::NonIntegralH)
}

/// |P_{l,m}(h) ∩ Z^M|: the Kostant partition function with multiplicities.
pub fn partition_count(mult: &MultiplicityMatrix, h: &Weight) -> Result<i128, FlowError> {
    let hc = integer_h(h)?;
    if hc.iter().any(|&c| c < 0) {
        return Ok(0);
    }
    Ok(PartitionTable::build(mult, &hc)?.count(&hc))
}

fn factorial_rat(n: u32) -> Rat {
    let mut acc = Rat::one();
    for t in 1..=n {
        acc *= rint(t as i64);
    }
    acc
}

/// Leading Ehrhart coefficient of k -> p(kh) read off a difference table.
///
/// Counts at k = 0..d+2 are fitted by the unique degree-d polynomial through
/// k = 0..d; the two surplus counts verify the fit exactly.
fn ehrhart_leading_from_counts(counts: &[i128], d: u32) -> Result<Rat, FlowError> {
    assert_eq!(counts.len(), d as usize + 3);
    if d == 0 {
        if counts[1] != counts[0] {
            return Err(FlowError::EhrhartFitFailed(1));
        }
        if counts[2] != counts[0] {
            return Err(FlowError::EhrhartFitFailed(2));
        }
        return Ok(Rat::from_integer(counts[0].into()));
    }
    let mut diffs: Vec<i128> = counts.to_vec();
    for level in 1..=(d as usize + 2) {
        for t in 0..(diffs.len() - level) {
            diffs[t] = diffs[t + 1] - diffs[t];
        }
        if level == d as usize {
            // leading coefficient = Δ^d c(0) / d!
            let lead = diffs[0];
            // the two (d+1)-th differences must vanish
            let e1 = diffs[1] - diffs[0];
            let e2 = diffs[2] - diffs[1];
            if e1 != 0 {
                return Err(FlowError::EhrhartFitFailed(d as i64 + 1));
            }
            if e2 != 0 {
                return Err(FlowError::EhrhartFitFailed(d as i64 + 2));
            }
            return Ok(Rat::from_integer(lead.into()) / factorial_rat(d));
        }
    }
    // d == 0 handled inside the loop as well (level 1 checks run after return);
    unreachable!("difference table loop always returns at level d");
}

fn ehrhart_volume_from_table(
    table: &PartitionTable,
    d: u32,
    hc: &[i64],
) -> Result<Rat, FlowError> {
    let counts: Vec<i128> = (0..=(d as i64 + 2))
        .map(|k| {
            let scaled: Vec<i64> = hc.iter().map(|&c| c * k).collect();
            table.count(&scaled)
        })
        .collect();
    ehrhart_leading_from_counts(&counts, d)
}

/// Lattice-normalized volume of P_{l,m}(h) for integral h in the open cone.
pub fn ehrhart_volume(mult: &MultiplicityMatrix, h: &Weight) -> Result<Rat, FlowError> {
    let hc = integer_h(h)?;
    if hc.iter().any(|&c| c <= 0) {
        return Err(FlowError::NotInOpenCone);
    }
    let d = mult.dim();
    let bound: Vec<i64> = hc.iter().map(|&c| c * (d as i64 + 2)).collect();
    let table = PartitionTable::build(mult, &bound)?;
    ehrhart_volume_from_table(&table, d, &hc)
}

/// Chamber selector for the volume polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Chamber {
    /// q_l > ... > q_1 > 0; samples are generated automatically.
    Nice,
    /// Caller-supplied interior integer points of one open chamber.
    Custom(Vec<Vec<i64>>),
}

/// Integer points of the open nice chamber: strictly increasing positive
/// primitive tuples, enumerated with the smallest top coordinate first.
///
/// Only primitive tuples (componentwise gcd 1) are kept: a homogeneous
/// polynomial gives proportional interpolation rows on proportional points,
/// so non-primitive tuples would add samples without adding rank.
pub fn nice_samples(l: usize, count: usize) -> Vec<Vec<i64>> {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    if l == 1 {
        // One projective direction only; surplus points still verify the
        // degree through the c^d scaling of the values.
        return (1..=count as i64).map(|c| vec![c]).collect();
    }
    let mut out = Vec::with_capacity(count);
    let mut top = l as i64;
    while out.len() < count {
        // all strictly increasing (l-1)-tuples below `top`
        fn combos(k: usize, lo: i64, hi: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if k == 0 {
                out.push(prefix.clone());
                return;
            }
            for v in lo..=(hi - k as i64 + 1) {
                prefix.push(v);
                combos(k - 1, v + 1, hi, prefix, out);
                prefix.pop();
            }
        }
        let mut lower = Vec::new();
        combos(l - 1, 1, top - 1, &mut Vec::new(), &mut lower);
        for mut tuple in lower {
            tuple.push(top);
            if tuple.iter().fold(0, |g, &c| gcd(g, c)) != 1 {
                continue;
            }
            out.push(tuple);
            if out.len() == count {
                break;
            }
        }
        top += 1;
    }
    out
}

/// The homogeneous degree-(M-l) polynomial matching the Ehrhart volume on one
/// open chamber, with two surplus verification points.
pub fn chamber_volume_polynomial(
    mult: &MultiplicityMatrix,
    chamber: &Chamber,
) -> Result<Poly, FlowError> {
    let l = mult.rank();
    let d = mult.dim();
    let needed = monomial_count(l, d);
    let samples: Vec<Vec<i64>> = match chamber {
        Chamber::Nice => {
            // Distinct primitive directions almost always suffice; on the
            // rare rank-deficient configuration, take more of them.
            let mut count = needed + 2;
            for _ in 0..4 {
                match fit_chamber_samples(mult, d, &nice_samples(l, count)) {
                    Err(FlowError::NeedMoreSamples { .. }) => count += needed / 4 + 8,
                    other => return other,
                }
            }
            nice_samples(l, count)
        }
        Chamber::Custom(points) => {
            if points.len() < needed + 2 {
                return Err(FlowError::NotEnoughSamples {
                    needed: needed + 2,
                    got: points.len(),
                });
            }
            for p in points {
                if p.len() != l || p.iter().any(|&c| c <= 0) {
                    return Err(FlowError::BadSample);
                }
            }
            points.clone()
        }
    };
    fit_chamber_samples(mult, d, &samples)
}

/// Evaluate the exact volume at every sample (one shared counting table) and
/// interpolate the unique homogeneous degree-d polynomial through them.
fn fit_chamber_samples(
    mult: &MultiplicityMatrix,
    d: u32,
    samples: &[Vec<i64>],
) -> Result<Poly, FlowError> {
    let l = mult.rank();
    let mut bound = vec![0i64; l];
    for s in samples {
        for t in 0..l {
            bound[t] = bound[t].max(s[t] * (d as i64 + 2));
        }
    }
    let table = PartitionTable::build(mult, &bound)?;
    let data: Vec<(Vec<Rat>, Rat)> = samples
        .iter()
        .map(|s| {
            let vol = ehrhart_volume_from_table(&table, d, s)?;
            Ok((s.iter().map(|&c| rint(c)).collect(), vol))
        })
        .collect::<Result<_, FlowError>>()?;
    interpolate_homogeneous(l, d, &data).map_err(|e| match e {
        InterpolateError::Inconsistent { .. } => FlowError::WallStraddle,
        InterpolateError::RankDeficient { rank, needed } => {
            FlowError::NeedMoreSamples { rank, needed }
        }
        InterpolateError::NotEnoughSamples { needed, got, .. } => {
            FlowError::NotEnoughSamples { needed, got }
        }
        InterpolateError::DuplicatePoints => FlowError::DuplicateSamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q_names;
    use crate::rat;

    fn w(coords: &[i64]) -> Weight {
        Weight::new(coords.iter().map(|&c| rint(c)).collect()).unwrap()
    }

    #[test]
    fn partition_count_a2_unit_multiplicities() {
        let m = MultiplicityMatrix::uniform(2, 1).unwrap();
        // loadings (x12, x13, x23) in {(0,1,0), (1,0,1)}
        assert_eq!(partition_count(&m, &w(&[1, 1])).unwrap(), 2);
    }

    #[test]
    fn partition_count_rank_one_stars_and_bars() {
        let m = MultiplicityMatrix::uniform(1, 2).unwrap();
        assert_eq!(partition_count(&m, &w(&[3])).unwrap(), 4);
    }

    #[test]
    fn partition_count_outside_cone_is_zero() {
        let m = MultiplicityMatrix::uniform(2, 1).unwrap();
        assert_eq!(partition_count(&m, &w(&[-1, 0])).unwrap(), 0);
    }

    #[test]
    fn partition_count_rejects_non_integral() {
        let m = MultiplicityMatrix::uniform(1, 1).unwrap();
        let h = Weight::new(vec![rat(1, 2)]).unwrap();
        assert_eq!(partition_count(&m, &h), Err(FlowError::NonIntegralH));
    }

    /// Independent oracle: enumerate each edge-copy flow directly with
    /// componentwise pruning (roots only add nonnegative alpha coordinates).
    pub(crate) fn brute_force_count(mult: &MultiplicityMatrix, h: &[i64]) -> i128 {
        if h.iter().any(|&c| c < 0) {
            return 0;
        }
        let l = mult.rank();
        let mut edges = Vec::new();
        for (&(i, j), &mij) in mult.entries() {
            for _ in 0..mij {
                let mut v = vec![0i64; l];
                for item in v.iter_mut().take(j - 1).skip(i - 1) {
                    *item = 1;
                }
                edges.push(v);
            }
        }
        fn rec(edges: &[Vec<i64>], remaining: &mut Vec<i64>, pos: usize) -> i128 {
            if pos == edges.len() {
                return if remaining.iter().all(|&c| c == 0) { 1 } else { 0 };
            }
            let edge = &edges[pos];
            let max_flow = remaining
                .iter()
                .zip(edge)
                .filter(|(_, &e)| e == 1)
                .map(|(&r, _)| r)
                .min()
                .unwrap();
            let mut total = 0;
            for f in 0..=max_flow {
                for (r, e) in remaining.iter_mut().zip(edge) {
                    *r -= f * e;
                }
                total += rec(edges, remaining, pos + 1);
                for (r, e) in remaining.iter_mut().zip(edge) {
                    *r += f * e;
                }
            }
            total
        }
        rec(&edges, &mut h.to_vec(), 0)
    }

    #[test]
    fn dp_matches_brute_force_on_small_grid() {
        for l in 1..=2usize {
            for n in 1..=2u32 {
                let m = MultiplicityMatrix::uniform(l, n).unwrap();
                let coords: Vec<Vec<i64>> = match l {
                    1 => (0..=4).map(|a| vec![a]).collect(),
                    _ => (0..=3)
                        .flat_map(|a| (0..=3).map(move |b| vec![a, b]))
                        .collect(),
                };
                for h in coords {
                    let dp = partition_count(&m, &w(&h)).unwrap();
                    assert_eq!(dp, brute_force_count(&m, &h), "l={l} n={n} h={h:?}");
                }
            }
        }
    }

    #[test]
    fn ehrhart_volume_segment() {
        let m = MultiplicityMatrix::uniform(2, 1).unwrap();
        assert_eq!(ehrhart_volume(&m, &w(&[1, 2])).unwrap(), rint(1));
    }

    #[test]
    fn ehrhart_volume_simplex() {
        let m = MultiplicityMatrix::uniform(1, 3).unwrap();
        assert_eq!(ehrhart_volume(&m, &w(&[2])).unwrap(), rint(2));
    }

    #[test]
    fn ehrhart_volume_example_value() {
        let m = MultiplicityMatrix::uniform(2, 2).unwrap();
        // (1/12) q1^3 (2 q2 - q1) at (1,2) = 1/4
        assert_eq!(ehrhart_volume(&m, &w(&[1, 2])).unwrap(), rat(1, 4));
    }

    #[test]
    fn ehrhart_volume_rejects_boundary() {
        let m = MultiplicityMatrix::uniform(2, 1).unwrap();
        assert_eq!(
            ehrhart_volume(&m, &w(&[0, 1])),
            Err(FlowError::NotInOpenCone)
        );
    }

    #[test]
    fn nice_polynomial_all_m_two() {
        let m = MultiplicityMatrix::uniform(2, 2).unwrap();
        let v = chamber_volume_polynomial(&m, &Chamber::Nice).unwrap();
        assert_eq!(v.to_string(), "-1/12 q1^4 + 1/6 q1^3 q2");
    }

    #[test]
    fn nice_polynomial_all_m_one() {
        let m = MultiplicityMatrix::uniform(2, 1).unwrap();
        let v = chamber_volume_polynomial(&m, &Chamber::Nice).unwrap();
        assert_eq!(v.to_string(), "q1");
    }

    #[test]
    fn nice_polynomial_rank_one_simplex() {
        for n in 1..=4u32 {
            let m = MultiplicityMatrix::uniform(1, n).unwrap();
            let v = chamber_volume_polynomial(&m, &Chamber::Nice).unwrap();
            let expected = Poly::var(1, 0)
                .pow(n - 1)
                .scale(&(Rat::one() / factorial_rat(n - 1)));
            assert_eq!(v, expected);
        }
    }

    #[test]
    fn chamber_polynomial_is_homogeneous_and_consistent() {
        let m = MultiplicityMatrix::uniform(2, 2).unwrap();
        let v = chamber_volume_polynomial(&m, &Chamber::Nice).unwrap();
        assert_eq!(v.homogeneous_degree(), Some(m.dim()));
        // consistency at an interior point not used in interpolation
        let h = w(&[5, 9]);
        let direct = ehrhart_volume(&m, &h).unwrap();
        assert_eq!(v.eval(&[rint(5), rint(9)]), direct);
    }

    #[test]
    fn custom_chamber_other_side_of_wall() {
        let m = MultiplicityMatrix::uniform(2, 2).unwrap();
        let samples: Vec<Vec<i64>> = (2..=8)
            .flat_map(|a| (1..a).map(move |b| vec![a, b]))
            .collect();
        let v = chamber_volume_polynomial(&m, &Chamber::Custom(samples)).unwrap();
        // (1/12) q2^3 (2 q1 - q2)
        let expected = Poly::parse("1/6 q1 q2^3 - 1/12 q2^4", 2, &q_names(2)).unwrap();
        assert_eq!(v, expected);
    }

    #[test]
    fn straddling_samples_are_detected() {
        let m = MultiplicityMatrix::uniform(2, 2).unwrap();
        let mut samples: Vec<Vec<i64>> = (1..=6)
            .flat_map(|a| ((a + 1)..=7).map(move |b| vec![a, b]))
            .collect();
        samples.push(vec![5, 2]); // other chamber
        assert_eq!(
            chamber_volume_polynomial(&m, &Chamber::Custom(samples)),
            Err(FlowError::WallStraddle)
        );
    }

    #[test]
    fn monotone_in_multiplicities() {
        let h = w(&[2, 3]);
        let mut prev = 0;
        for n in 1..=3 {
            let m = MultiplicityMatrix::uniform(2, n).unwrap();
            let c = partition_count(&m, &h).unwrap();
            assert!(c >= prev);
            prev = c;
        }
    }

    #[test]
    fn nice_samples_are_strictly_increasing() {
        for l in 1..=3usize {
            for s in nice_samples(l, 20) {
                assert!(s[0] >= 1);
                assert!(s.windows(2).all(|w| w[1] > w[0]));
            }
        }
    }
}
