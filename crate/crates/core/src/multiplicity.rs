//! Tensor-product weight multiplicities via the generalized Kostant
//! multiplicity formula, with an independent convolution oracle and the
//! asymptotic volume probe.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::flowpoly::{partition_count, FlowError, MultiplicityMatrix};
use crate::rootsys::{
    rho, sufficiently_close_with_rho, weyl_group, RhoConvention, RootSysError, Weight,
};
use crate::{rint, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MultError {
    #[error("lambdas must be nonempty")]
    EmptyLambdas,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("lambda_{0} is not an integral dominant weight")]
    NotDominantIntegral(usize),
    #[error("mu is not an integral weight")]
    MuNotIntegral,
    #[error("alternating Kostant sum is negative ({0}); rho convention bug")]
    NegativeSum(i128),
    #[error("sufficiently-close precondition does not hold")]
    NotSufficientlyClose,
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    RootSys(#[from] RootSysError),
}

/// A tensor weight-multiplicity query: dominant integral highest weights and
/// an integral target weight, all of the same rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityQuery {
    lambdas: Vec<Weight>,
    mu: Weight,
}

impl MultiplicityQuery {
    pub fn new(lambdas: Vec<Weight>, mu: Weight) -> Result<Self, MultError> {
        if lambdas.is_empty() {
            return Err(MultError::EmptyLambdas);
        }
        let l = mu.rank();
        for (i, lam) in lambdas.iter().enumerate() {
            if lam.rank() != l {
                return Err(MultError::RankMismatch(lam.rank(), l));
            }
            if !lam.is_integral() || !lam.is_dominant() {
                return Err(MultError::NotDominantIntegral(i + 1));
            }
        }
        if !mu.is_integral() {
            return Err(MultError::MuNotIntegral);
        }
        Ok(MultiplicityQuery { lambdas, mu })
    }

    pub fn rank(&self) -> usize {
        self.mu.rank()
    }

    pub fn factors(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[Weight] {
        &self.lambdas
    }

    pub fn mu(&self) -> &Weight {
        &self.mu
    }

    pub fn lambda_sum(&self) -> Weight {
        let mut acc = Weight::zero(self.rank());
        for lam in &self.lambdas {
            acc = acc.add(lam);
        }
        acc
    }

    /// The query at (k lambda_1, ..., k lambda_n; k mu).
    pub fn scaled(&self, k: i64) -> MultiplicityQuery {
        let c = rint(k);
        MultiplicityQuery {
            lambdas: self.lambdas.iter().map(|lam| lam.scale(&c)).collect(),
            mu: self.mu.scale(&c),
        }
    }
}

fn alternating_kostant_sum(
    lambdas: &[Weight],
    mu: &Weight,
    mult: &MultiplicityMatrix,
    convention: RhoConvention,
) -> Result<i128, MultError> {
    let l = mu.rank();
    let n = lambdas.len();
    let r = rho(l, convention);
    let group = weyl_group(l);
    let shifted: Vec<Vec<Weight>> = lambdas
        .iter()
        .map(|lam| {
            let lr = lam.add(&r);
            group
                .iter()
                .map(|w| w.act(&lr))
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;
    let offset = mu.add(&r.scale(&rint(n as i64)));

    let mut total: i128 = 0;
    let mut indices = vec![0usize; n];
    loop {
        let mut sum = Weight::zero(l);
        let mut sign: i128 = 1;
        for (i, &gi) in indices.iter().enumerate() {
            sum = sum.add(&shifted[i][gi]);
            sign *= group[gi].sign() as i128;
        }
        let arg = sum.sub(&offset);
        // Non-integral arguments index empty polytopes.
        if arg.has_integer_alpha() {
            total += sign * partition_count(mult, &arg)?;
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(total);
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

/// Dimension of the mu-weight space of V_{lambda_1} ⊗ ... ⊗ V_{lambda_n},
/// by the alternating sum over W^n with the partition function p_{l,n}.
pub fn tensor_weight_multiplicity(q: &MultiplicityQuery) -> Result<i128, MultError> {
    tensor_weight_multiplicity_with_rho(q, RhoConvention::Standard)
}

pub fn tensor_weight_multiplicity_with_rho(
    q: &MultiplicityQuery,
    convention: RhoConvention,
) -> Result<i128, MultError> {
    let mult = MultiplicityMatrix::uniform(q.rank(), q.factors() as u32)?;
    let total = alternating_kostant_sum(&q.lambdas, &q.mu, &mult, convention)?;
    if total < 0 {
        return Err(MultError::NegativeSum(total));
    }
    Ok(total)
}

/// Weight multiplicity in a single irreducible V_lambda (ordinary Kostant).
fn single_multiplicity(lambda: &Weight, mu: &Weight) -> Result<i128, MultError> {
    let mult = MultiplicityMatrix::uniform(lambda.rank(), 1)?;
    let total = alternating_kostant_sum(
        std::slice::from_ref(lambda),
        mu,
        &mult,
        RhoConvention::Standard,
    )?;
    if total < 0 {
        return Err(MultError::NegativeSum(total));
    }
    Ok(total)
}

/// The full weight support of V_lambda with multiplicities, enumerated by
/// intersecting lambda minus nonnegative root combinations with the box
/// spanned down to the lowest weight.
pub fn weight_support(lambda: &Weight) -> Result<BTreeMap<Vec<Rat>, i128>, MultError> {
    let l = lambda.rank();
    // Lowest weight = w0(lambda): reverse the e-coordinates.
    let e = lambda.to_e_coords();
    let rev: Vec<Rat> = e.into_iter().rev().collect();
    let lowest = Weight::from_e_coords(&rev)?;
    let depth = lambda.sub(&lowest);
    let box_bound = depth
        .integer_alpha_coords()
        .expect("lambda - w0(lambda) lies in the root lattice");

    let mut support = BTreeMap::new();
    let mut c = vec![0i64; l];
    loop {
        let drop = Weight::new(c.iter().map(|&x| rint(x)).collect())?;
        let nu = lambda.sub(&drop);
        let m = single_multiplicity(lambda, &nu)?;
        if m > 0 {
            support.insert(nu.alpha_coeffs().to_vec(), m);
        }
        let mut pos = 0;
        loop {
            if pos == l {
                return Ok(support);
            }
            c[pos] += 1;
            if c[pos] <= box_bound[pos] {
                break;
            }
            c[pos] = 0;
            pos += 1;
        }
    }
}

/// Independent oracle: the tensor weight space is the convolution of the
/// single-factor weight multiplicities.
pub fn convolution_oracle(q: &MultiplicityQuery) -> Result<i128, MultError> {
    let supports: Vec<BTreeMap<Vec<Rat>, i128>> = q
        .lambdas
        .iter()
        .map(weight_support)
        .collect::<Result<_, _>>()?;
    let n = supports.len();
    // Iterate the product of the first n-1 supports; the last summand is
    // forced by mu.
    fn rec(
        supports: &[BTreeMap<Vec<Rat>, i128>],
        pos: usize,
        partial: &Weight,
        acc: i128,
        mu: &Weight,
        total: &mut i128,
    ) {
        if pos == supports.len() - 1 {
            let needed = mu.sub(partial);
            if let Some(m) = supports[pos].get(needed.alpha_coeffs()) {
                *total += acc * m;
            }
            return;
        }
        for (nu, m) in &supports[pos] {
            let w = Weight::new(nu.clone()).unwrap();
            rec(supports, pos + 1, &partial.add(&w), acc * m, mu, total);
        }
    }
    let mut total = 0i128;
    rec(
        &supports[..n],
        0,
        &Weight::zero(q.rank()),
        1,
        &q.mu,
        &mut total,
    );
    Ok(total)
}

/// Under the sufficiently-close condition, the alternating sum collapses to
/// its identity term: multiplicity = p_{l,n}(lambda - mu). Returns the truth
/// of that equality.
pub fn sufficiently_close_reduction_check(q: &MultiplicityQuery) -> Result<bool, MultError> {
    if !sufficiently_close_with_rho(&q.lambdas, &q.mu, RhoConvention::Standard)? {
        return Err(MultError::NotSufficientlyClose);
    }
    let lhs = tensor_weight_multiplicity(q)?;
    let diff = q.lambda_sum().sub(&q.mu);
    let mult = MultiplicityMatrix::uniform(q.rank(), q.factors() as u32)?;
    let rhs = if diff.has_integer_alpha() {
        partition_count(&mult, &diff)?
    } else {
        0
    };
    Ok(lhs == rhs)
}

/// The sequence k -> multiplicity(k lambda_i, k mu) / k^d for k = 1..kmax,
/// where d = n l(l+1)/2 - l is the dimension of the weight variety.
pub fn asymptotic_volume_probe(
    q: &MultiplicityQuery,
    kmax: u32,
) -> Result<Vec<Rat>, MultError> {
    if !sufficiently_close_with_rho(&q.lambdas, &q.mu, RhoConvention::Standard)? {
        return Err(MultError::NotSufficientlyClose);
    }
    let l = q.rank();
    let n = q.factors();
    let d = (n * l * (l + 1) / 2 - l) as u32;
    let mut out = Vec::with_capacity(kmax as usize);
    for k in 1..=kmax as i64 {
        let count = tensor_weight_multiplicity(&q.scaled(k))?;
        let mut denom = Rat::from_integer(1.into());
        for _ in 0..d {
            denom *= rint(k);
        }
        out.push(Rat::from_integer(count.into()) / denom);
    }
    Ok(out)
}

/// Term-by-term collapse witness: under sufficiently-close, every
/// non-identity tuple's argument lies outside the positive cone.
pub fn reduction_is_termwise(q: &MultiplicityQuery) -> Result<bool, MultError> {
    use crate::rootsys::in_positive_cone;
    let l = q.rank();
    let n = q.factors();
    let r = rho(l, RhoConvention::Standard);
    let group = weyl_group(l);
    let shifted: Vec<Vec<Weight>> = q
        .lambdas
        .iter()
        .map(|lam| {
            let lr = lam.add(&r);
            group.iter().map(|w| w.act(&lr).unwrap()).collect()
        })
        .collect();
    let offset = q.mu.add(&r.scale(&rint(n as i64)));
    let identity_index = group.iter().position(|w| w.is_identity()).unwrap();
    let mut indices = vec![0usize; n];
    loop {
        let all_identity = indices.iter().all(|&gi| gi == identity_index);
        if !all_identity {
            let mut sum = Weight::zero(l);
            for (i, &gi) in indices.iter().enumerate() {
                sum = sum.add(&shifted[i][gi]);
            }
            if in_positive_cone(&sum.sub(&offset)) {
                return Ok(false);
            }
        }
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
