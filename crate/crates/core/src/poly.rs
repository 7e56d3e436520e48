//! Multivariate polynomials over the rationals, differential operators with
//! constant coefficients, and exact homogeneous interpolation.
//!
//! Terms are kept in graded-lexicographic order and printed largest first, so
//! equal polynomials always print identically.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{self, SolveOutcome};
use crate::{Int, Rat};

/// Exponent multi-index, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise difference, if nonnegative.
    pub fn checked_sub(&self, other: &Monomial) -> Option<Monomial> {
        if self.0.len() != other.0.len() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut acc = Rat::one();
        for (e, x) in self.0.iter().zip(point) {
            for _ in 0..*e {
                acc *= x;
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials in `nvars` variables of total degree exactly `degree`,
/// in descending graded-lexicographic order.
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if nvars == 1 {
            prefix.push(degree);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=degree).rev() {
            prefix.push(e);
            rec(nvars - 1, degree - e, prefix, out);
            prefix.pop();
        }
    }
    assert!(nvars >= 1);
    let mut out = Vec::new();
    rec(nvars, degree, &mut Vec::new(), &mut out);
    out
}

/// Number of monomials in `nvars` variables of total degree `degree`.
pub fn monomial_count(nvars: usize, degree: u32) -> usize {
    // C(degree + nvars - 1, nvars - 1)
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..(nvars as u128 - 1) {
        num *= degree as u128 + i + 1;
        den *= i + 1;
    }
    (num / den) as usize
}

/// Exact multivariate polynomial over the rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable count mismatch: {0} vs {1}")]
    NvarsMismatch(usize, usize),
    #[error("parse error in polynomial: {0}")]
    Parse(String),
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Poly {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial(vec![0; nvars]), c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Poly {
        assert!(i < nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::from_term(nvars, Monomial(e), Rat::one())
    }

    pub fn from_term(nvars: usize, m: Monomial, c: Rat) -> Poly {
        assert_eq!(m.0.len(), nvars);
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        // Largest term first: canonical order for printing and golden tests.
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Degree if every term has the same total degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.degree()?;
        if self.terms.keys().all(|m| m.degree() == d) {
            Some(d)
        } else {
            None
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::constant(self.nvars, Rat::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            acc += c * m.eval(point);
        }
        acc
    }

    /// Substitute the given polynomials for the variables.
    pub fn compose(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let target_nvars = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = Poly::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target_nvars, c.clone());
            for (e, img) in m.0.iter().zip(images) {
                if *e > 0 {
                    term = term.mul(&img.pow(*e));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// The homogeneous component of the given total degree.
    pub fn homogeneous_part(&self, degree: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coefficient vector with respect to the monomial list (descending grlex).
    pub fn coeff_vector(&self, basis: &[Monomial]) -> Vec<Rat> {
        basis.iter().map(|m| self.coeff(m)).collect()
    }

    pub fn from_coeff_vector(nvars: usize, basis: &[Monomial], coeffs: &[Rat]) -> Poly {
        let mut p = Poly::zero(nvars);
        for (m, c) in basis.iter().zip(coeffs) {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    /// Render with the given variable names.
    pub fn to_string_named(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mono = render_monomial(m, names);
            if mono.is_empty() {
                out.push_str(&format_rat(&abs));
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format_rat(&abs));
                out.push(' ');
                out.push_str(&mono);
            }
        }
        out
    }

    /// Parse the canonical text format, e.g. `-1/12 q1^4 + 1/6 q1^3 q2`.
    pub fn parse(input: &str, nvars: usize, names: &[String]) -> Result<Poly, PolyError> {
        assert_eq!(names.len(), nvars);
        let input = input.trim();
        if input == "0" {
            return Ok(Poly::zero(nvars));
        }
        let mut out = Poly::zero(nvars);
        // Split into signed terms.
        let mut rest = input;
        let mut sign = Rat::one();
        if let Some(r) = rest.strip_prefix('-') {
            sign = -sign;
            rest = r.trim_start();
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r.trim_start();
        }
        loop {
            let split = rest
                .char_indices()
                .find(|&(i, ch)| (ch == '+' || ch == '-') && rest[..i].ends_with(' '));
            let (term_str, next_sign, remainder) = match split {
                Some((i, ch)) => (&rest[..i], ch, &rest[i + 1..]),
                None => (rest, ' ', ""),
            };
            let (m, c) = parse_term(term_str.trim(), nvars, names)?;
            out.add_term(m, sign * c);
            if remainder.is_empty() {
                break;
            }
            sign = if next_sign == '-' { -Rat::one() } else { Rat::one() };
            rest = remainder.trim_start();
        }
        Ok(out)
    }
}

fn render_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (e, name) in m.0.iter().zip(names) {
        match e {
            0 => {}
            1 => parts.push(name.clone()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join(" ")
}

fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_term(s: &str, nvars: usize, names: &[String]) -> Result<(Monomial, Rat), PolyError> {
    let mut coeff = Rat::one();
    let mut exps = vec![0u32; nvars];
    for (i, factor) in s.split_whitespace().enumerate() {
        let (base, exp) = match factor.split_once('^') {
            Some((b, e)) => {
                let e: u32 = e
                    .parse()
                    .map_err(|_| PolyError::Parse(format!("bad exponent in '{factor}'")))?;
                (b, e)
            }
            None => (factor, 1),
        };
        if let Some(vi) = names.iter().position(|n| n == base) {
            exps[vi] += exp;
        } else if i == 0 && factor == base {
            coeff = base
                .parse::<Rat>()
                .map_err(|_| PolyError::Parse(format!("unknown factor '{factor}'")))?;
        } else {
            return Err(PolyError::Parse(format!("unknown factor '{factor}'")));
        }
    }
    Ok((Monomial(exps), coeff))
}

/// Default variable names q1..ql.
pub fn q_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("q{i}")).collect()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_named(&q_names(self.nvars)))
    }
}

/// Constant-coefficient differential operator, stored as a polynomial in the
/// formal symbols d1..dl.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffOperator(pub Poly);

impl DiffOperator {
    pub fn nvars(&self) -> usize {
        self.0.nvars()
    }

    /// Apply the operator: d^a(q^b) = (b!/(b-a)!) q^(b-a) when b >= a, else 0.
    pub fn apply(&self, v: &Poly) -> Poly {
        assert_eq!(self.0.nvars(), v.nvars(), "variable count mismatch");
        let mut out = Poly::zero(v.nvars());
        for (a, ca) in self.0.terms.iter() {
            for (b, cb) in v.terms.iter() {
                if let Some(rest) = b.checked_sub(a) {
                    let mut factor = Int::one();
                    for (bi, ai) in b.0.iter().zip(&a.0) {
                        for t in (bi - ai + 1)..=*bi {
                            factor *= Int::from(t);
                        }
                    }
                    out.add_term(rest, ca * cb * Rat::from_integer(factor));
                }
            }
        }
        out
    }

    pub fn to_string_named(&self, names: &[String]) -> String {
        self.0.to_string_named(names)
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.0.nvars()).map(|i| format!("d{i}")).collect();
        write!(f, "{}", self.0.to_string_named(&names))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InterpolateError {
    #[error("need at least {needed} samples for degree {degree} in {nvars} variables, got {got}")]
    NotEnoughSamples {
        nvars: usize,
        degree: u32,
        needed: usize,
        got: usize,
    },
    #[error("sample points are not pairwise distinct")]
    DuplicatePoints,
    #[error("interpolation system is rank deficient (rank {rank} of {needed}); more points needed")]
    RankDeficient { rank: usize, needed: usize },
    #[error("surplus samples are inconsistent with a single degree-{degree} polynomial")]
    Inconsistent { degree: u32 },
}

/// The unique homogeneous polynomial of the given degree through the samples.
///
/// Surplus samples beyond the monomial count are verified, not discarded; an
/// inconsistency signals a wrong degree or samples straddling a chamber wall.
pub fn interpolate_homogeneous(
    nvars: usize,
    degree: u32,
    samples: &[(Vec<Rat>, Rat)],
) -> Result<Poly, InterpolateError> {
    let basis = monomials_of_degree(nvars, degree);
    let needed = basis.len();
    if samples.len() < needed {
        return Err(InterpolateError::NotEnoughSamples {
            nvars,
            degree,
            needed,
            got: samples.len(),
        });
    }
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            if samples[i].0 == samples[j].0 {
                return Err(InterpolateError::DuplicatePoints);
            }
        }
    }
    let rows: Vec<Vec<Rat>> = samples
        .iter()
        .map(|(pt, _)| basis.iter().map(|m| m.eval(pt)).collect())
        .collect();
    let rhs: Vec<Rat> = samples.iter().map(|(_, v)| v.clone()).collect();
    match linalg::solve(&rows, &rhs, needed) {
        SolveOutcome::Unique(coeffs) => Ok(Poly::from_coeff_vector(nvars, &basis, &coeffs)),
        SolveOutcome::RankDeficient { rank } => {
            Err(InterpolateError::RankDeficient { rank, needed })
        }
        SolveOutcome::Inconsistent => Err(InterpolateError::Inconsistent { degree }),
    }
}
