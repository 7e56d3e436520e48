//! The explicit presentation ring R[z_1..z_l]/I with relation i given by
//! z_i^n (z_i + z_{i+1})^n ... (z_i + ... + z_l)^n, its Hilbert function by
//! degreewise normal-form linear algebra, and cross-validation against the
//! duality algebra of the nice-chamber volume polynomial.

use num::One;
use serde::Serialize;
use thiserror::Error;

use crate::dualalgebra::{betti_numbers, DualError};
use crate::flowpoly::{chamber_volume_polynomial, Chamber, FlowError, MultiplicityMatrix};
use crate::linalg;
use crate::poly::{monomials_of_degree, DiffOperator, Poly};
use crate::Rat;

#[derive(Debug, Error)]
pub enum CohomError {
    #[error("the quotient is not zero in degree {0} past the expected socle")]
    NotTruncated(u32),
    #[error(transparent)]
    Dual(#[from] DualError),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// The relation ideal of the presentation ring.
#[derive(Debug, Clone)]
pub struct PresentationIdeal {
    l: usize,
    n: u32,
    generators: Vec<Poly>,
}

impl PresentationIdeal {
    /// Generator i (for i = 1..l) is z_i^n (z_i+z_{i+1})^n ... (z_i+...+z_l)^n,
    /// homogeneous of degree n(l-i+1).
    pub fn new(l: usize, n: u32) -> PresentationIdeal {
        assert!(l >= 1 && n >= 1);
        let generators = (1..=l)
            .map(|i| {
                let mut g = Poly::constant(l, Rat::one());
                for j in i..=l {
                    let mut factor = Poly::zero(l);
                    for t in i..=j {
                        factor = factor.add(&Poly::var(l, t - 1));
                    }
                    g = g.mul(&factor.pow(n));
                }
                g
            })
            .collect();
        PresentationIdeal { l, n, generators }
    }

    pub fn rank(&self) -> usize {
        self.l
    }

    pub fn factor_count(&self) -> u32 {
        self.n
    }

    /// The expanded generator polynomials, i = 1..l.
    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    /// Factored display strings, e.g. "z1^2*(z1+z2)^2"; omits ^1.
    pub fn generator_strings(&self) -> Vec<String> {
        (1..=self.l)
            .map(|i| {
                let mut parts = Vec::new();
                for j in i..=self.l {
                    let base = (i..=j)
                        .map(|t| format!("z{t}"))
                        .collect::<Vec<_>>()
                        .join("+");
                    let base = if j > i { format!("({base})") } else { base };
                    if self.n == 1 {
                        parts.push(base);
                    } else {
                        parts.push(format!("{base}^{}", self.n));
                    }
                }
                parts.join("*")
            })
            .collect()
    }

    /// Degree where the quotient must end: n*l(l+1)/2 - l.
    pub fn socle_degree(&self) -> u32 {
        self.n * (self.l * (self.l + 1) / 2) as u32 - self.l as u32
    }

    /// Dimension of the degree-k slice of the quotient: monomial count minus
    /// the rank of the span of {generator x monomial} in degree k.
    fn quotient_dim(&self, k: u32) -> usize {
        let basis = monomials_of_degree(self.l, k);
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for g in &self.generators {
            let deg = g.homogeneous_degree().expect("generators are homogeneous");
            if deg > k {
                continue;
            }
            for m in monomials_of_degree(self.l, k - deg) {
                rows.push(g.mul(&Poly::from_term(self.l, m, Rat::one())).coeff_vector(&basis));
            }
        }
        let rank = if rows.is_empty() {
            0
        } else {
            linalg::rank(&rows, basis.len())
        };
        basis.len() - rank
    }
}

/// Graded dimensions of the quotient ring, degrees 0..=socle.
///
/// One extra degree past the socle is computed and must vanish; a nonzero
/// value there means the quotient is not finite-dimensional as claimed.
pub fn hilbert_function(ideal: &PresentationIdeal) -> Result<Vec<usize>, CohomError> {
    let socle = ideal.socle_degree();
    if ideal.quotient_dim(socle + 1) != 0 {
        return Err(CohomError::NotTruncated(socle + 1));
    }
    Ok((0..=socle).map(|k| ideal.quotient_dim(k)).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossValidateReport {
    pub generators: Vec<String>,
    pub hilbert: Vec<usize>,
    pub betti: Vec<usize>,
    /// Degrees where a presentation generator fails to annihilate v (empty on pass).
    pub non_annihilating_generators: Vec<usize>,
    /// Degrees where hilbert and betti disagree (empty on pass).
    pub mismatched_degrees: Vec<u32>,
    pub matches_dual_algebra: bool,
}

/// Check the presentation against the duality algebra of the nice-chamber
/// volume polynomial for the uniform multiplicity matrix (all m = n):
/// every generator, read as a differential operator, must annihilate v, and
/// the Hilbert function must match the Betti numbers degree for degree.
pub fn cross_validate(l: usize, n: u32) -> Result<CrossValidateReport, CohomError> {
    let mult = MultiplicityMatrix::uniform(l, n)?;
    let v = chamber_volume_polynomial(&mult, &Chamber::Nice)?;
    cross_validate_with_volume(l, n, &v)
}

/// Same as `cross_validate` but reusing an already computed volume polynomial.
pub fn cross_validate_with_volume(
    l: usize,
    n: u32,
    v: &Poly,
) -> Result<CrossValidateReport, CohomError> {
    let ideal = PresentationIdeal::new(l, n);
    let hilbert = hilbert_function(&ideal)?;
    let betti = betti_numbers(v)?;

    let non_annihilating: Vec<usize> = ideal
        .generators()
        .iter()
        .enumerate()
        .filter(|(_, g)| !DiffOperator((*g).clone()).apply(v).is_zero())
        .map(|(i, _)| i + 1)
        .collect();

    let mut mismatched = Vec::new();
    let longest = hilbert.len().max(betti.len());
    for k in 0..longest {
        let h = hilbert.get(k).copied().unwrap_or(0);
        let b = betti.get(k).copied().unwrap_or(0);
        if h != b {
            mismatched.push(k as u32);
        }
    }

    let matches = non_annihilating.is_empty() && mismatched.is_empty();
    Ok(CrossValidateReport {
        generators: ideal.generator_strings(),
        hilbert,
        betti,
        non_annihilating_generators: non_annihilating,
        mismatched_degrees: mismatched,
        matches_dual_algebra: matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(l: usize, i: usize) -> Poly {
        Poly::var(l, i)
    }

    #[test]
    fn generators_rank_two_pairs() {
        let ideal = PresentationIdeal::new(2, 2);
        assert_eq!(ideal.generators()[0], z(2, 0).pow(2).mul(&z(2, 0).add(&z(2, 1)).pow(2)));
        assert_eq!(ideal.generators()[1], z(2, 1).pow(2));
        assert_eq!(
            ideal.generator_strings(),
            vec!["z1^2*(z1+z2)^2".to_string(), "z2^2".to_string()]
        );
    }

    #[test]
    fn generators_single_variable() {
        let ideal = PresentationIdeal::new(1, 3);
        assert_eq!(ideal.generators(), &[z(1, 0).pow(3)]);
        assert_eq!(ideal.generator_strings(), vec!["z1^3".to_string()]);
    }

    #[test]
    fn generators_rank_two_single_copy() {
        // z_1(z_1+z_2) expands to z_1^2 + z_1 z_2.
        let ideal = PresentationIdeal::new(2, 1);
        assert_eq!(
            ideal.generators()[0],
            z(2, 0).pow(2).add(&z(2, 0).mul(&z(2, 1)))
        );
        assert_eq!(ideal.generators()[1], z(2, 1));
        assert_eq!(
            ideal.generator_strings(),
            vec!["z1*(z1+z2)".to_string(), "z2".to_string()]
        );
    }

    #[test]
    fn generator_degrees() {
        for (l, n) in [(1usize, 2u32), (2, 2), (3, 2), (3, 3)] {
            let ideal = PresentationIdeal::new(l, n);
            for (i, g) in ideal.generators().iter().enumerate() {
                let expected = n * (l - i) as u32;
                assert_eq!(g.homogeneous_degree(), Some(expected));
            }
        }
    }

    #[test]
    fn hilbert_rank_two_double() {
        let ideal = PresentationIdeal::new(2, 2);
        assert_eq!(hilbert_function(&ideal).unwrap(), vec![1, 2, 2, 2, 1]);
    }

    #[test]
    fn hilbert_truncation_ring() {
        for n in 1..=5u32 {
            let ideal = PresentationIdeal::new(1, n);
            assert_eq!(hilbert_function(&ideal).unwrap(), vec![1; n as usize]);
        }
    }

    #[test]
    fn hilbert_rank_two_single_copy() {
        let ideal = PresentationIdeal::new(2, 1);
        assert_eq!(hilbert_function(&ideal).unwrap(), vec![1, 1]);
    }

    #[test]
    fn hilbert_is_symmetric() {
        for (l, n) in [(2usize, 2u32), (2, 3), (3, 1), (3, 2)] {
            let h = hilbert_function(&PresentationIdeal::new(l, n)).unwrap();
            let len = h.len();
            for k in 0..len {
                assert_eq!(h[k], h[len - 1 - k], "l={l} n={n} k={k}");
            }
            assert_eq!(h[0], 1);
            if n >= 2 {
                assert_eq!(h[1], l);
            }
        }
    }

    #[test]
    fn cross_validate_small_grid() {
        for (l, n, expected) in [
            (2usize, 2u32, vec![1, 2, 2, 2, 1]),
            (2, 1, vec![1, 1]),
            (1, 4, vec![1, 1, 1, 1]),
        ] {
            let report = cross_validate(l, n).unwrap();
            assert!(report.matches_dual_algebra, "l={l} n={n}: {report:?}");
            assert_eq!(report.hilbert, expected);
            assert_eq!(report.betti, report.hilbert);
        }
    }

    #[test]
    fn cross_validate_flags_wrong_volume() {
        // Against the wrong polynomial the relations fail and so do the ranks.
        let v = Poly::var(2, 0).pow(4);
        let report = cross_validate_with_volume(2, 2, &v).unwrap();
        assert!(!report.matches_dual_algebra);
        assert!(!report.non_annihilating_generators.is_empty());
    }

    #[test]
    fn socle_degree_formula() {
        assert_eq!(PresentationIdeal::new(2, 2).socle_degree(), 4);
        assert_eq!(PresentationIdeal::new(3, 3).socle_degree(), 15);
        assert_eq!(PresentationIdeal::new(1, 5).socle_degree(), 4);
    }

    #[test]
    fn quotient_total_dimension_matches_betti_sum() {
        let h = hilbert_function(&PresentationIdeal::new(2, 3)).unwrap();
        let mult = MultiplicityMatrix::uniform(2, 3).unwrap();
        let v = chamber_volume_polynomial(&mult, &Chamber::Nice).unwrap();
        let b = betti_numbers(&v).unwrap();
        assert_eq!(h.iter().sum::<usize>(), b.iter().sum::<usize>());
    }
}
