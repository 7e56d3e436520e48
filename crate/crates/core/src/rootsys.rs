//! The A_l root system: weights in simple-root coordinates, the Weyl group
//! S_{l+1} acting by permutation of e-coordinates, cone and chamber
//! predicates, and the sufficiently-close condition.

use std::fmt;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::{rat, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootSysError {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("e-coordinates must sum to zero")]
    NonZeroSum,
    #[error("not a permutation of 1..={0}")]
    BadPermutation(usize),
    #[error("lambdas must be nonempty")]
    EmptyLambdas,
    #[error("weight parse error: {0}")]
    Parse(String),
}

/// A weight of A_l, stored in simple-root (alpha) coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Weight {
    coeffs: Vec<Rat>,
}

impl Weight {
    pub fn new(coeffs: Vec<Rat>) -> Result<Weight, RootSysError> {
        if coeffs.is_empty() {
            return Err(RootSysError::ZeroRank);
        }
        Ok(Weight { coeffs })
    }

    pub fn zero(l: usize) -> Weight {
        Weight {
            coeffs: vec![Rat::zero(); l],
        }
    }

    /// The simple root alpha_i (1-based).
    pub fn simple_root(l: usize, i: usize) -> Weight {
        assert!((1..=l).contains(&i));
        let mut w = Weight::zero(l);
        w.coeffs[i - 1] = Rat::one();
        w
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn alpha_coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coordinates in the standard basis of R^{l+1}; entries sum to zero.
    pub fn to_e_coords(&self) -> Vec<Rat> {
        let l = self.rank();
        let mut e = Vec::with_capacity(l + 1);
        // alpha_i = e_i - e_{i+1}, so e_k = q_k - q_{k-1} with q_0 = q_{l+1} = 0.
        for k in 0..=l {
            let hi = if k < l { self.coeffs[k].clone() } else { Rat::zero() };
            let lo = if k > 0 { self.coeffs[k - 1].clone() } else { Rat::zero() };
            e.push(hi - lo);
        }
        e
    }

    pub fn from_e_coords(e: &[Rat]) -> Result<Weight, RootSysError> {
        if e.len() < 2 {
            return Err(RootSysError::ZeroRank);
        }
        let sum: Rat = e.iter().sum();
        if !sum.is_zero() {
            return Err(RootSysError::NonZeroSum);
        }
        let l = e.len() - 1;
        let mut coeffs = Vec::with_capacity(l);
        let mut acc = Rat::zero();
        for item in e.iter().take(l) {
            acc += item;
            coeffs.push(acc.clone());
        }
        Ok(Weight { coeffs })
    }

    /// Coordinates in the fundamental-weight basis (the Cartan matrix applied
    /// to the alpha coordinates).
    pub fn to_fundamental(&self) -> Vec<Rat> {
        let l = self.rank();
        (0..l)
            .map(|j| {
                let mut f = &self.coeffs[j] * rat(2, 1);
                if j > 0 {
                    f -= &self.coeffs[j - 1];
                }
                if j + 1 < l {
                    f -= &self.coeffs[j + 1];
                }
                f
            })
            .collect()
    }

    pub fn add(&self, other: &Weight) -> Weight {
        assert_eq!(self.rank(), other.rank());
        Weight {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        assert_eq!(self.rank(), other.rank());
        Weight {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Weight {
        Weight {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// True iff every alpha coordinate is an integer (root-lattice member).
    pub fn has_integer_alpha(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// True iff every fundamental coordinate is an integer (integral weight).
    pub fn is_integral(&self) -> bool {
        self.to_fundamental().iter().all(|c| c.is_integer())
    }

    /// True iff every fundamental coordinate is a nonnegative (dominant).
    pub fn is_dominant(&self) -> bool {
        self.to_fundamental().iter().all(|c| !c.is_negative())
    }

    pub fn integer_alpha_coords(&self) -> Option<Vec<i64>> {
        self.coeffs
            .iter()
            .map(|c| {
                if c.is_integer() {
                    i64::try_from(c.to_integer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }

    /// Parse comma-separated exact rationals, e.g. "2/3,1/3".
    pub fn parse_alpha(s: &str) -> Result<Weight, RootSysError> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<Rat>()
                    .map_err(|_| RootSysError::Parse(format!("bad rational '{t}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Weight::new(coeffs)
    }

    pub fn parse_fundamental(s: &str) -> Result<Weight, RootSysError> {
        let w = Weight::parse_alpha(s)?;
        Ok(fundamental_to_alpha(w.rank(), w.alpha_coeffs().to_vec())?)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|c| {
                if c.is_integer() {
                    c.numer().to_string()
                } else {
                    format!("{}/{}", c.numer(), c.denom())
                }
            })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Convert fundamental-weight coordinates to alpha coordinates via the
/// inverse type-A Cartan matrix: (C^{-1})_{ij} = min(i,j)(l+1-max(i,j))/(l+1).
pub fn fundamental_to_alpha(l: usize, coeffs: Vec<Rat>) -> Result<Weight, RootSysError> {
    if l == 0 {
        return Err(RootSysError::ZeroRank);
    }
    if coeffs.len() != l {
        return Err(RootSysError::RankMismatch(l, coeffs.len()));
    }
    let mut alpha = Vec::with_capacity(l);
    for i in 1..=l {
        let mut acc = Rat::zero();
        for (j, f) in coeffs.iter().enumerate() {
            let j = j + 1;
            let c = rat(
                (i.min(j) * (l + 1 - i.max(j))) as i64,
                (l + 1) as i64,
            );
            acc += c * f;
        }
        alpha.push(acc);
    }
    Ok(Weight { coeffs: alpha })
}

/// The i-th fundamental weight (1-based) in alpha coordinates.
pub fn fundamental_weight(l: usize, i: usize) -> Weight {
    assert!((1..=l).contains(&i));
    let mut f = vec![Rat::zero(); l];
    f[i - 1] = Rat::one();
    fundamental_to_alpha(l, f).unwrap()
}

/// Which rho enters the multiplicity formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RhoConvention {
    /// Half-sum of positive roots, equal to the sum of fundamental weights.
    #[default]
    Standard,
    /// Half-sum of the simple roots only; agrees with Standard at rank 1.
    HalfSimpleSum,
}

/// The standard rho: half-sum of positive roots, q_i = i(l+1-i)/2.
pub fn standard_rho(l: usize) -> Weight {
    assert!(l >= 1);
    Weight {
        coeffs: (1..=l)
            .map(|i| rat((i * (l + 1 - i)) as i64, 2))
            .collect(),
    }
}

/// Half-sum of the simple roots, (1/2, ..., 1/2) in alpha coordinates.
pub fn half_simple_sum_rho(l: usize) -> Weight {
    assert!(l >= 1);
    Weight {
        coeffs: vec![rat(1, 2); l],
    }
}

pub fn rho(l: usize, convention: RhoConvention) -> Weight {
    match convention {
        RhoConvention::Standard => standard_rho(l),
        RhoConvention::HalfSimpleSum => half_simple_sum_rho(l),
    }
}

/// An element of the Weyl group W = S_{l+1} with its signature.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeylElement {
    /// perm[i] = image of i, 0-based, length l+1.
    perm: Vec<usize>,
    sign: i8,
}

impl WeylElement {
    pub fn identity(l: usize) -> WeylElement {
        WeylElement {
            perm: (0..=l).collect(),
            sign: 1,
        }
    }

    pub fn from_perm(perm: Vec<usize>) -> Result<WeylElement, RootSysError> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(RootSysError::BadPermutation(n));
            }
            seen[p] = true;
        }
        let sign = permutation_sign(&perm);
        Ok(WeylElement { perm, sign })
    }

    /// The simple reflection s_i swapping e_i and e_{i+1} (1-based i).
    pub fn simple_reflection(l: usize, i: usize) -> WeylElement {
        assert!((1..=l).contains(&i));
        let mut perm: Vec<usize> = (0..=l).collect();
        perm.swap(i - 1, i);
        WeylElement { perm, sign: -1 }
    }

    pub fn rank(&self) -> usize {
        self.perm.len() - 1
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Composition self ∘ other (apply `other` first).
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        assert_eq!(self.rank(), other.rank());
        WeylElement {
            perm: other.perm.iter().map(|&p| self.perm[p]).collect(),
            sign: self.sign * other.sign,
        }
    }

    /// Act on a weight by permuting its e-coordinates.
    pub fn act(&self, x: &Weight) -> Result<Weight, RootSysError> {
        if self.rank() != x.rank() {
            return Err(RootSysError::RankMismatch(self.rank(), x.rank()));
        }
        let e = x.to_e_coords();
        let mut out = vec![Rat::zero(); e.len()];
        for (i, v) in e.into_iter().enumerate() {
            out[self.perm[i]] = v;
        }
        Weight::from_e_coords(&out)
    }
}

fn permutation_sign(perm: &[usize]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All (l+1)! elements of the Weyl group of A_l.
pub fn weyl_group(l: usize) -> Vec<WeylElement> {
    let n = l + 1;
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    // Heap's algorithm.
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<WeylElement>) {
        if k == 1 {
            out.push(WeylElement::from_perm(items.clone()).unwrap());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut items, &mut out);
    out
}

/// Membership in the closed cone C(A_l^+): all alpha coordinates >= 0.
pub fn in_positive_cone(x: &Weight) -> bool {
    x.alpha_coeffs().iter().all(|c| !c.is_negative())
}

/// Membership in the open nice chamber: q_l > q_{l-1} > ... > q_1 > 0.
pub fn in_nice_chamber(x: &Weight) -> bool {
    let q = x.alpha_coeffs();
    if !q[0].is_positive() {
        return false;
    }
    q.windows(2).all(|w| w[1] > w[0])
}

/// The sufficiently-close condition on (lambda_1..lambda_n; mu): the only
/// tuple of Weyl elements with
/// sigma_1(l_1+rho)+...+sigma_n(l_n+rho) - (mu+n rho) in C(A_l^+)
/// is the all-identity tuple, which must itself land in the cone.
pub fn sufficiently_close(lambdas: &[Weight], mu: &Weight) -> Result<bool, RootSysError> {
    sufficiently_close_with_rho(lambdas, mu, RhoConvention::Standard)
}

pub fn sufficiently_close_with_rho(
    lambdas: &[Weight],
    mu: &Weight,
    convention: RhoConvention,
) -> Result<bool, RootSysError> {
    if lambdas.is_empty() {
        return Err(RootSysError::EmptyLambdas);
    }
    let l = mu.rank();
    for lam in lambdas {
        if lam.rank() != l {
            return Err(RootSysError::RankMismatch(lam.rank(), l));
        }
    }
    let n = lambdas.len();
    let r = rho(l, convention);
    let group = weyl_group(l);
    // Precompute sigma(lambda_i + rho) for every sigma and i.
    let shifted: Vec<Vec<Weight>> = lambdas
        .iter()
        .map(|lam| {
            let lr = lam.add(&r);
            group.iter().map(|w| w.act(&lr).unwrap()).collect()
        })
        .collect();
    let offset = mu.add(&r.scale(&crate::rint(n as i64)));
    let identity_index = group.iter().position(|w| w.is_identity()).unwrap();

    let mut indices = vec![0usize; n];
    loop {
        let mut sum = Weight::zero(l);
        for (i, &gi) in indices.iter().enumerate() {
            sum = sum.add(&shifted[i][gi]);
        }
        let arg = sum.sub(&offset);
        let all_identity = indices.iter().all(|&gi| gi == identity_index);
        if in_positive_cone(&arg) != all_identity {
            return Ok(false);
        }
        // Odometer over W^n.
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(true);
            }
            indices[pos] += 1;
            if indices[pos] < group.len() {
                break;
            }
            indices[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rint;

    #[test]
    fn fundamental_to_alpha_rank_one() {
        let w = fundamental_to_alpha(1, vec![rint(1)]).unwrap();
        assert_eq!(w.alpha_coeffs(), &[rat(1, 2)]);
    }

    #[test]
    fn fundamental_to_alpha_rank_two() {
        let w = fundamental_to_alpha(2, vec![rint(1), rint(0)]).unwrap();
        assert_eq!(w.alpha_coeffs(), &[rat(2, 3), rat(1, 3)]);
        let w = fundamental_to_alpha(2, vec![rint(1), rint(1)]).unwrap();
        assert_eq!(w.alpha_coeffs(), &[rint(1), rint(1)]);
    }

    #[test]
    fn fundamental_to_alpha_rejects_rank_zero() {
        assert_eq!(
            fundamental_to_alpha(0, vec![]),
            Err(RootSysError::ZeroRank)
        );
    }

    #[test]
    fn standard_rho_values() {
        assert_eq!(standard_rho(1).alpha_coeffs(), &[rat(1, 2)]);
        assert_eq!(standard_rho(2).alpha_coeffs(), &[rint(1), rint(1)]);
        assert_eq!(
            standard_rho(3).alpha_coeffs(),
            &[rat(3, 2), rint(2), rat(3, 2)]
        );
    }

    #[test]
    fn rho_equals_sum_of_fundamental_weights() {
        for l in 1..=4 {
            let mut sum = Weight::zero(l);
            for i in 1..=l {
                sum = sum.add(&fundamental_weight(l, i));
            }
            assert_eq!(sum, standard_rho(l));
        }
    }

    #[test]
    fn simple_reflection_on_rank_one() {
        let s = WeylElement::simple_reflection(1, 1);
        let a1 = Weight::simple_root(1, 1);
        assert_eq!(s.act(&a1).unwrap(), a1.scale(&rint(-1)));
    }

    #[test]
    fn simple_reflection_sends_alpha2_to_alpha1_plus_alpha2() {
        let s = WeylElement::simple_reflection(2, 1);
        let a1 = Weight::simple_root(2, 1);
        let a2 = Weight::simple_root(2, 2);
        assert_eq!(s.act(&a2).unwrap(), a1.add(&a2));
    }

    #[test]
    fn identity_acts_trivially() {
        let id = WeylElement::identity(3);
        let x = Weight::new(vec![rat(3, 7), rint(-2), rat(5, 2)]).unwrap();
        assert_eq!(id.act(&x).unwrap(), x);
    }

    #[test]
    fn rho_shifts_by_simple_roots_under_reflections() {
        for l in 1..=3 {
            let r = standard_rho(l);
            for i in 1..=l {
                let s = WeylElement::simple_reflection(l, i);
                assert_eq!(s.act(&r).unwrap(), r.sub(&Weight::simple_root(l, i)));
            }
        }
    }

    #[test]
    fn positive_cone_membership() {
        let a1 = Weight::simple_root(2, 1);
        let a2 = Weight::simple_root(2, 2);
        assert!(in_positive_cone(&a1.add(&a2)));
        assert!(!in_positive_cone(&a1.scale(&rint(-1))));
        assert!(in_positive_cone(&fundamental_weight(2, 1)));
    }

    #[test]
    fn nice_chamber_membership() {
        let w = |a, b| Weight::new(vec![rint(a), rint(b)]).unwrap();
        assert!(in_nice_chamber(&w(1, 2)));
        assert!(!in_nice_chamber(&w(2, 1)));
        assert!(!in_nice_chamber(&w(1, 1)));
    }

    #[test]
    fn sufficiently_close_rank_one_examples() {
        let lam = fundamental_weight(1, 1);
        let zero = Weight::zero(1);
        assert!(sufficiently_close(&[lam.clone(), lam.clone()], &zero).unwrap());
        let minus_a1 = Weight::simple_root(1, 1).scale(&rint(-1));
        assert!(!sufficiently_close(&[lam.clone(), lam.clone()], &minus_a1).unwrap());
        assert!(sufficiently_close(&[lam.clone()], &lam).unwrap());
    }

    #[test]
    fn sufficiently_close_implies_cone_membership() {
        let lam = fundamental_weight(2, 1).add(&fundamental_weight(2, 2));
        let mu = Weight::zero(2);
        if sufficiently_close(&[lam.clone(), lam.clone()], &mu).unwrap() {
            let total = lam.add(&lam).sub(&mu);
            assert!(in_positive_cone(&total));
        }
    }

    #[test]
    fn weyl_group_size_and_signs() {
        let g = weyl_group(2);
        assert_eq!(g.len(), 6);
        let sum: i32 = g.iter().map(|w| w.sign() as i32).sum();
        assert_eq!(sum, 0);
    }

    #[test]
    fn e_coordinate_round_trip() {
        let x = Weight::new(vec![rat(2, 3), rat(1, 3)]).unwrap();
        let e = x.to_e_coords();
        let sum: Rat = e.iter().sum();
        assert!(sum.is_zero());
        assert_eq!(Weight::from_e_coords(&e).unwrap(), x);
    }

    #[test]
    fn fundamental_round_trip() {
        let x = Weight::new(vec![rat(5, 7), rat(-3, 2), rint(4)]).unwrap();
        let f = x.to_fundamental();
        assert_eq!(fundamental_to_alpha(3, f).unwrap(), x);
    }
}
