//! The Poincaré duality algebra D/Ann(v): annihilator ideals by degreewise
//! linear algebra, Betti numbers, intersection pairings as mixed partials of
//! the volume polynomial, the differential system characterizing nice-chamber
//! volumes, the annihilator generation check, and the merged-variable check.
//!
//! Operator degree k is cohomological degree 2k (each generator sits in H^2),
//! so all odd Betti numbers vanish and reports list b_0, b_2, ..., b_{2d}.

use num::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::flowpoly::{ehrhart_volume, FlowError, MultiplicityMatrix};
use crate::linalg;
use crate::poly::{monomials_of_degree, DiffOperator, Monomial, Poly};
use crate::rootsys::Weight;
use crate::{rint, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DualError {
    #[error("v must be a nonzero homogeneous polynomial")]
    NotHomogeneous,
    #[error("total exponent {got} must equal the top degree {expected}")]
    WrongPairingDegree { expected: u32, got: u32 },
    #[error("the two Betti computations disagree at degree {0}")]
    BettiMismatch(u32),
    #[error(
        "solution space of the differential system has dimension {0}, not 1; \
         this falsifies the uniqueness claim for this instance"
    )]
    SolutionSpaceDimension(usize),
    #[error("no normalization point with nonzero kernel value found")]
    NoNormalizationPoint,
    #[error(transparent)]
    Flow(#[from] FlowError),
}

fn homogeneous_degree(v: &Poly) -> Result<u32, DualError> {
    v.homogeneous_degree().ok_or(DualError::NotHomogeneous)
}

/// Exact basis of the degree-k part of Ann(v).
///
/// Columns are the degree-k operator monomials; rows are the coordinates of
/// their action on v in the degree-(d-k) monomial basis.
pub fn annihilator_degree(v: &Poly, k: u32) -> Result<Vec<DiffOperator>, DualError> {
    let d = homogeneous_degree(v)?;
    let nvars = v.nvars();
    let ops = monomials_of_degree(nvars, k);
    if k > d {
        // Everything annihilates: degree would drop below zero.
        return Ok(ops
            .into_iter()
            .map(|m| DiffOperator(Poly::from_term(nvars, m, Rat::one())))
            .collect());
    }
    let target = monomials_of_degree(nvars, d - k);
    let mut rows = vec![vec![Rat::zero(); ops.len()]; target.len()];
    for (c, op) in ops.iter().enumerate() {
        let image = DiffOperator(Poly::from_term(nvars, op.clone(), Rat::one())).apply(v);
        for (r, t) in target.iter().enumerate() {
            rows[r][c] = image.coeff(t);
        }
    }
    let kernel = linalg::kernel_basis(&rows, ops.len());
    Ok(kernel
        .into_iter()
        .map(|coeffs| DiffOperator(Poly::from_coeff_vector(nvars, &ops, &coeffs)))
        .collect())
}

/// The pairing matrix [coefficient extraction of d^{a+b} v] between operator
/// degrees k and d-k.
pub fn pairing_matrix(v: &Poly, k: u32) -> Result<Vec<Vec<Rat>>, DualError> {
    let d = homogeneous_degree(v)?;
    assert!(k <= d);
    let nvars = v.nvars();
    let rows_basis = monomials_of_degree(nvars, k);
    let cols_basis = monomials_of_degree(nvars, d - k);
    Ok(rows_basis
        .iter()
        .map(|a| {
            cols_basis
                .iter()
                .map(|b| {
                    let m = a.mul(b);
                    let mut factor = Rat::one();
                    for e in &m.0 {
                        for t in 1..=*e {
                            factor *= rint(t as i64);
                        }
                    }
                    v.coeff(&m) * factor
                })
                .collect()
        })
        .collect())
}

/// Betti numbers b_0, b_2, ..., b_{2d} of D/Ann(v), computed two ways
/// (annihilator codimension and pairing-matrix rank) which must agree.
pub fn betti_numbers(v: &Poly) -> Result<Vec<usize>, DualError> {
    let d = homogeneous_degree(v)?;
    let nvars = v.nvars();
    let mut betti = Vec::with_capacity(d as usize + 1);
    for k in 0..=d {
        let monos = monomials_of_degree(nvars, k).len();
        let ann = annihilator_degree(v, k)?.len();
        let via_ann = monos - ann;
        let pm = pairing_matrix(v, k)?;
        let cols = monomials_of_degree(nvars, d - k).len();
        let via_rank = linalg::rank(&pm, cols);
        if via_ann != via_rank {
            return Err(DualError::BettiMismatch(k));
        }
        betti.push(via_ann);
    }
    Ok(betti)
}

/// Poincaré polynomial string, e.g. "1+2t^2+2t^4+2t^6+t^8".
pub fn poincare_polynomial_string(betti: &[usize]) -> String {
    let mut parts = Vec::new();
    for (k, &b) in betti.iter().enumerate() {
        if b == 0 {
            continue;
        }
        let part = match (k, b) {
            (0, b) => format!("{b}"),
            (k, 1) => format!("t^{}", 2 * k),
            (k, b) => format!("{b}t^{}", 2 * k),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

/// Graded summary of D/Ann(v).
#[derive(Debug, Clone, Serialize)]
pub struct GradedAlgebraReport {
    pub formal_dimension: u32,
    /// b_0, b_2, ..., b_{2d}; odd Betti numbers are identically zero.
    pub betti: Vec<usize>,
    pub poincare_polynomial: String,
    /// Basis strings of Ann(v)_k per operator degree k = 0..=d.
    pub annihilator_bases: Vec<Vec<String>>,
    pub total_dimension: usize,
}

pub fn graded_algebra_report(v: &Poly) -> Result<GradedAlgebraReport, DualError> {
    let d = homogeneous_degree(v)?;
    let betti = betti_numbers(v)?;
    let mut bases = Vec::new();
    for k in 0..=d {
        bases.push(
            annihilator_degree(v, k)?
                .iter()
                .map(|op| op.to_string())
                .collect(),
        );
    }
    Ok(GradedAlgebraReport {
        formal_dimension: 2 * d,
        total_dimension: betti.iter().sum(),
        poincare_polynomial: poincare_polynomial_string(&betti),
        betti,
        annihilator_bases: bases,
    })
}

/// The intersection pairing as a mixed partial of the volume polynomial:
/// the exact constant d^exponents v_raw, defined when |exponents| = deg v_raw.
pub fn intersection_pairing(v_raw: &Poly, exponents: &Monomial) -> Result<Rat, DualError> {
    let d = homogeneous_degree(v_raw)?;
    if exponents.degree() != d {
        return Err(DualError::WrongPairingDegree {
            expected: d,
            got: exponents.degree(),
        });
    }
    let op = DiffOperator(Poly::from_term(
        v_raw.nvars(),
        exponents.clone(),
        Rat::one(),
    ));
    let result = op.apply(v_raw);
    Ok(result.coeff(&Monomial(vec![0; v_raw.nvars()])))
}

/// The nice-chamber differential system: for i = l down to 1,
/// d_i^{m_{i,i+1}} (d_i + d_{i+1})^{m_{i,i+2}} ... (d_i + ... + d_l)^{m_{i,l+1}}.
pub fn nst_operators(mult: &MultiplicityMatrix) -> Vec<DiffOperator> {
    let l = mult.rank();
    let mut ops = Vec::with_capacity(l);
    for i in (1..=l).rev() {
        let mut op = Poly::constant(l, Rat::one());
        for j in i + 1..=l + 1 {
            let mut factor = Poly::zero(l);
            for t in i..=j - 1 {
                factor = factor.add(&Poly::var(l, t - 1));
            }
            op = op.mul(&factor.pow(mult.get(i, j)));
        }
        ops.push(DiffOperator(op));
    }
    ops
}

/// True iff every operator of the system annihilates v.
pub fn verify_nst_system(mult: &MultiplicityMatrix, v: &Poly) -> bool {
    nst_operators(mult).iter().all(|op| op.apply(v).is_zero())
}

/// Solve the differential system in the homogeneous degree M-l: the solution
/// space must be one-dimensional; the generator is normalized by one Ehrhart
/// volume evaluation at a nice-chamber integral point.
pub fn solve_nice_volume(mult: &MultiplicityMatrix) -> Result<Poly, DualError> {
    let l = mult.rank();
    let d = mult.dim();
    let basis = monomials_of_degree(l, d);
    let ops = nst_operators(mult);

    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for op in &ops {
        let op_deg = op.0.homogeneous_degree().expect("operators are homogeneous");
        if op_deg > d {
            continue;
        }
        let target = monomials_of_degree(l, d - op_deg);
        let mut images: Vec<Vec<Rat>> = vec![vec![Rat::zero(); basis.len()]; target.len()];
        for (c, m) in basis.iter().enumerate() {
            let image = op.apply(&Poly::from_term(l, m.clone(), Rat::one()));
            for (r, t) in target.iter().enumerate() {
                images[r][c] = image.coeff(t);
            }
        }
        rows.extend(images);
    }
    let kernel = linalg::kernel_basis(&rows, basis.len());
    if kernel.len() != 1 {
        return Err(DualError::SolutionSpaceDimension(kernel.len()));
    }
    let generator = Poly::from_coeff_vector(l, &basis, &kernel[0]);

    // Normalize at the first nice point where the generator is nonzero.
    for point in crate::flowpoly::nice_samples(l, 8) {
        let pt: Vec<Rat> = point.iter().map(|&c| rint(c)).collect();
        let gval = generator.eval(&pt);
        if gval.is_zero() {
            continue;
        }
        let h = Weight::new(pt).expect("nice points have positive rank");
        let vol = ehrhart_volume(mult, &h)?;
        return Ok(generator.scale(&(vol / gval)));
    }
    Err(DualError::NoNormalizationPoint)
}

/// One degree of the generation comparison.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeCheck {
    pub degree: u32,
    pub ann_dim: usize,
    pub ideal_dim: usize,
}

/// Degreewise comparison of Ann(v) with the ideal generated by the system
/// operators, plus the nonvanishing witness coefficient from the proof.
#[derive(Debug, Clone, Serialize)]
pub struct GenerationReport {
    pub degrees: Vec<DegreeCheck>,
    pub witness_exponents: Vec<u32>,
    pub witness_nonzero: bool,
}

impl GenerationReport {
    pub fn all_degrees_match(&self) -> bool {
        self.degrees.iter().all(|c| c.ann_dim == c.ideal_dim)
    }

    pub fn passed(&self) -> bool {
        self.all_degrees_match() && self.witness_nonzero
    }

    /// Degrees where the generated ideal misses part of the annihilator.
    pub fn gaps(&self) -> Vec<u32> {
        self.degrees
            .iter()
            .filter(|c| c.ann_dim != c.ideal_dim)
            .map(|c| c.degree)
            .collect()
    }
}

/// Check that Ann(v) is generated by the system operators, degree by degree
/// up to the top degree M-l (beyond which Ann is everything).
pub fn verify_generation(mult: &MultiplicityMatrix, v: &Poly) -> Result<GenerationReport, DualError> {
    let l = mult.rank();
    let d = homogeneous_degree(v)?;
    let ops = nst_operators(mult);
    let op_degs: Vec<u32> = ops
        .iter()
        .map(|op| op.0.homogeneous_degree().expect("operators are homogeneous"))
        .collect();

    let mut degrees = Vec::new();
    for k in 0..=d {
        let ann_dim = annihilator_degree(v, k)?.len();
        // Degree-k slice of the generated ideal: spans of op_i * monomial.
        let basis_k = monomials_of_degree(l, k);
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for (op, &deg) in ops.iter().zip(&op_degs) {
            if deg > k {
                continue;
            }
            for m in monomials_of_degree(l, k - deg) {
                let prod = op.0.mul(&Poly::from_term(l, m, Rat::one()));
                rows.push(prod.coeff_vector(&basis_k));
            }
        }
        let ideal_dim = if rows.is_empty() {
            0
        } else {
            linalg::rank(&rows, basis_k.len())
        };
        degrees.push(DegreeCheck {
            degree: k,
            ann_dim,
            ideal_dim,
        });
    }

    // Witness from the generation proof: the coefficient of
    // q_1^{M_1-1} ... q_l^{M_l-1} in v does not vanish.
    let witness: Vec<u32> = (1..=l).map(|i| mult.row_tail(i) - 1).collect();
    let witness_nonzero = !v.coeff(&Monomial(witness.clone())).is_zero();
    Ok(GenerationReport {
        degrees,
        witness_exponents: witness,
        witness_nonzero,
    })
}

/// The merge of raw variables (p_{i,j}, x_j) into q_j = sum_i p_{i,j} - x_j.
///
/// Raw variable order: p_{1,1..l}, p_{2,1..l}, ..., p_{n,1..l}, x_1..x_l.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergedCoordinateMap {
    pub n: usize,
    pub l: usize,
}

impl MergedCoordinateMap {
    pub fn new(n: usize, l: usize) -> Self {
        assert!(n >= 1 && l >= 1);
        MergedCoordinateMap { n, l }
    }

    pub fn raw_nvars(&self) -> usize {
        self.n * self.l + self.l
    }

    /// Index of p_{i,j} among the raw variables (1-based i, j).
    pub fn p_index(&self, i: usize, j: usize) -> usize {
        assert!((1..=self.n).contains(&i) && (1..=self.l).contains(&j));
        (i - 1) * self.l + (j - 1)
    }

    /// Index of x_j among the raw variables (1-based j).
    pub fn x_index(&self, j: usize) -> usize {
        assert!((1..=self.l).contains(&j));
        self.n * self.l + (j - 1)
    }

    /// The linear forms q_j = p_{1,j} + ... + p_{n,j} - x_j.
    pub fn q_forms(&self) -> Vec<Poly> {
        let nv = self.raw_nvars();
        (1..=self.l)
            .map(|j| {
                let mut q = Poly::zero(nv);
                for i in 1..=self.n {
                    q = q.add(&Poly::var(nv, self.p_index(i, j)));
                }
                q.sub(&Poly::var(nv, self.x_index(j)))
            })
            .collect()
    }

    /// Express a polynomial in q_1..q_l as a polynomial in the raw variables.
    pub fn expand(&self, v: &Poly) -> Poly {
        assert_eq!(v.nvars(), self.l);
        v.compose(&self.q_forms())
    }

    /// Raw variable names p{i}_{j}, x{j} for printing.
    pub fn raw_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.raw_nvars());
        for i in 1..=self.n {
            for j in 1..=self.l {
                names.push(format!("p{i}_{j}"));
            }
        }
        for j in 1..=self.l {
            names.push(format!("x{j}"));
        }
        names
    }
}

/// True iff the raw-variable polynomial factors through the merged
/// coordinates: all differences d/dp_{i,j} - d/dp_{i',j} and all sums
/// d/dp_{i,j} + d/dx_j annihilate it.
pub fn verify_variable_merge(l: usize, n: usize, raw: &Poly) -> bool {
    let map = MergedCoordinateMap::new(n, l);
    if raw.nvars() != map.raw_nvars() {
        return false;
    }
    let nv = map.raw_nvars();
    for j in 1..=l {
        let first = Poly::var(nv, map.p_index(1, j));
        for i in 2..=n {
            let diff = DiffOperator(first.sub(&Poly::var(nv, map.p_index(i, j))));
            if !diff.apply(raw).is_zero() {
                return false;
            }
        }
        let sum = DiffOperator(first.add(&Poly::var(nv, map.x_index(j))));
        if !sum.apply(raw).is_zero() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flowpoly::{chamber_volume_polynomial, Chamber};
    use crate::poly::q_names;
    use crate::rat;

    fn example_volume() -> Poly {
        // (1/12) q1^3 (2 q2 - q1)
        Poly::parse("-1/12 q1^4 + 1/6 q1^3 q2", 2, &q_names(2)).unwrap()
    }

    #[test]
    fn annihilator_degree_two_of_example() {
        let basis = annihilator_degree(&example_volume(), 2).unwrap();
        assert_eq!(basis.len(), 1);
        // spanned by d2^2
        assert_eq!(basis[0].0, Poly::var(2, 1).pow(2));
    }

    #[test]
    fn annihilator_degree_one_of_linear_volume() {
        let v = Poly::var(2, 0); // q1
        let basis = annihilator_degree(&v, 1).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].0, Poly::var(2, 1));
    }

    #[test]
    fn degree_zero_annihilator_is_empty() {
        assert!(annihilator_degree(&example_volume(), 0).unwrap().is_empty());
        assert!(annihilator_degree(&Poly::var(2, 0), 0).unwrap().is_empty());
    }

    #[test]
    fn betti_numbers_of_example() {
        assert_eq!(betti_numbers(&example_volume()).unwrap(), vec![1, 2, 2, 2, 1]);
    }

    #[test]
    fn betti_numbers_of_truncation_rings() {
        for n in 1..=5u32 {
            // v = q^{n-1}/(n-1)! in one variable
            let mut v = Poly::var(1, 0).pow(n - 1);
            for t in 1..n {
                v = v.scale(&rat(1, t as i64));
            }
            assert_eq!(betti_numbers(&v).unwrap(), vec![1; n as usize]);
        }
        assert_eq!(betti_numbers(&Poly::var(2, 0)).unwrap(), vec![1, 1]);
    }

    #[test]
    fn poincare_string_of_example() {
        let b = betti_numbers(&example_volume()).unwrap();
        assert_eq!(poincare_polynomial_string(&b), "1+2t^2+2t^4+2t^6+t^8");
    }

    #[test]
    fn poincare_duality_of_example_report() {
        let v = example_volume();
        let betti = betti_numbers(&v).unwrap();
        let d = v.homogeneous_degree().unwrap();
        for k in 0..=d {
            assert_eq!(betti[k as usize], betti[(d - k) as usize]);
            let pm = pairing_matrix(&v, k).unwrap();
            let cols = monomials_of_degree(2, d - k).len();
            assert_eq!(linalg::rank(&pm, cols), betti[k as usize]);
        }
    }

    #[test]
    fn example_intersection_pairings() {
        let map = MergedCoordinateMap::new(2, 2);
        let raw = map.expand(&example_volume());
        // raw vars: p1_1, p1_2, p2_1, p2_2, x1, x2 mapped from (p,q,r,s,x,y)
        let cases: [(Vec<u32>, i64); 6] = [
            (vec![4, 0, 0, 0, 0, 0], -2), // p^4
            (vec![3, 1, 0, 0, 0, 0], 1),  // p^3 q
            (vec![3, 0, 1, 0, 0, 0], -2), // p^3 r
            (vec![3, 0, 0, 1, 0, 0], 1),  // p^3 s
            (vec![3, 0, 0, 0, 1, 0], 2),  // p^3 x
            (vec![3, 0, 0, 0, 0, 1], -1), // p^3 y
        ];
        for (exps, expected) in cases {
            let got = intersection_pairing(&raw, &Monomial(exps.clone())).unwrap();
            assert_eq!(got, rint(expected), "exponents {exps:?}");
        }
    }

    #[test]
    fn pairing_rejects_wrong_total_degree() {
        let map = MergedCoordinateMap::new(2, 2);
        let raw = map.expand(&example_volume());
        assert_eq!(
            intersection_pairing(&raw, &Monomial(vec![3, 0, 0, 0, 0, 0])),
            Err(DualError::WrongPairingDegree {
                expected: 4,
                got: 3
            })
        );
    }

    #[test]
    fn nst_system_on_example() {
        let m2 = MultiplicityMatrix::uniform(2, 2).unwrap();
        assert!(verify_nst_system(&m2, &example_volume()));
        let m1 = MultiplicityMatrix::uniform(2, 1).unwrap();
        assert!(verify_nst_system(&m1, &Poly::var(2, 0)));
        assert!(!verify_nst_system(&m1, &Poly::var(2, 0).pow(2)));
    }

    #[test]
    fn solve_nice_volume_examples() {
        let m2 = MultiplicityMatrix::uniform(2, 2).unwrap();
        assert_eq!(solve_nice_volume(&m2).unwrap(), example_volume());
        let m1 = MultiplicityMatrix::uniform(2, 1).unwrap();
        assert_eq!(solve_nice_volume(&m1).unwrap(), Poly::var(2, 0));
        for n in 1..=4u32 {
            let m = MultiplicityMatrix::uniform(1, n).unwrap();
            let mut expected = Poly::var(1, 0).pow(n - 1);
            for t in 1..n {
                expected = expected.scale(&rat(1, t as i64));
            }
            assert_eq!(solve_nice_volume(&m).unwrap(), expected);
        }
    }

    #[test]
    fn generation_check_examples() {
        let m2 = MultiplicityMatrix::uniform(2, 2).unwrap();
        let report = verify_generation(&m2, &example_volume()).unwrap();
        assert!(report.passed());
        assert_eq!(report.degrees.len(), 5);
        assert_eq!(report.degrees[2].ann_dim, 1);
        assert_eq!(report.degrees[2].ideal_dim, 1);

        let m1 = MultiplicityMatrix::uniform(2, 1).unwrap();
        let report = verify_generation(&m1, &Poly::var(2, 0)).unwrap();
        assert!(report.passed());

        for n in 1..=3u32 {
            let m = MultiplicityMatrix::uniform(1, n).unwrap();
            let v = solve_nice_volume(&m).unwrap();
            assert!(verify_generation(&m, &v).unwrap().passed());
        }
    }

    #[test]
    fn merge_check_on_example_volume() {
        let map = MergedCoordinateMap::new(2, 2);
        let raw = map.expand(&example_volume());
        assert!(verify_variable_merge(2, 2, &raw));
    }

    #[test]
    fn merge_check_rejects_unmergeable_polynomial() {
        // p1_1 * p1_2 has no matching x dependence.
        let map = MergedCoordinateMap::new(2, 2);
        let nv = map.raw_nvars();
        let raw = Poly::var(nv, 0).mul(&Poly::var(nv, 1));
        assert!(!verify_variable_merge(2, 2, &raw));
    }

    #[test]
    fn nst_membership_in_annihilator() {
        for (l, n) in [(1usize, 2u32), (2, 1), (2, 2), (2, 3)] {
            let m = MultiplicityMatrix::uniform(l, n).unwrap();
            let v = chamber_volume_polynomial(&m, &Chamber::Nice).unwrap();
            for op in nst_operators(&m) {
                assert!(op.apply(&v).is_zero(), "l={l} n={n}");
            }
        }
    }

    #[test]
    fn graded_report_shape() {
        let r = graded_algebra_report(&example_volume()).unwrap();
        assert_eq!(r.formal_dimension, 8);
        assert_eq!(r.betti, vec![1, 2, 2, 2, 1]);
        assert_eq!(r.total_dimension, 8);
        assert_eq!(r.poincare_polynomial, "1+2t^2+2t^4+2t^6+t^8");
        assert!(r.annihilator_bases[0].is_empty());
    }
}
