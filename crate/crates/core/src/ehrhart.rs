//! Classical Ehrhart machinery: quasi-polynomials by exact interpolation
//! with held-out verification, Ehrhart series and h*-polynomials, Ehrhart
//! reciprocity, and Eulerian polynomials.

use num::{One, Zero};
use thiserror::Error;

use crate::exact_arith::{IntPolynomial, RationalFunction};
use crate::linalg::{self, Int, Rat};
use crate::polytope::RationalPolytope;

#[derive(Debug, Error, PartialEq)]
pub enum EhrhartError {
    #[error("interpolated quasi-polynomial disagrees with a held-out count at m = {m}: expected {expected}, got {got}")]
    VerificationMismatch { m: i64, expected: Rat, got: Rat },
    #[error("operation requires a lattice polytope")]
    NotLattice,
}

/// Quasi-polynomial: one rational-coefficient constituent per residue class
/// of the period. Constituent i applies when m = i mod period.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiPolynomial {
    period: usize,
    constituents: Vec<Vec<Rat>>,
}

impl QuasiPolynomial {
    pub fn new(period: usize, constituents: Vec<Vec<Rat>>) -> Self {
        assert!(period >= 1);
        assert_eq!(constituents.len(), period);
        let constituents = constituents
            .into_iter()
            .map(|mut c| {
                while c.last().map(|x| x.is_zero()).unwrap_or(false) {
                    c.pop();
                }
                c
            })
            .collect();
        QuasiPolynomial {
            period,
            constituents,
        }
    }

    /// Interpolate from exact values: for each residue class the smallest
    /// `points_per_residue` arguments >= min_m are sampled, then `verify`
    /// further arguments are checked against the interpolation.
    pub fn interpolate(
        period: usize,
        points_per_residue: usize,
        min_m: usize,
        verify: usize,
        f: impl Fn(usize) -> Rat,
    ) -> Result<Self, EhrhartError> {
        let mut constituents = Vec::with_capacity(period);
        let mut max_sampled = 0usize;
        for i in 0..period {
            let mut m = i;
            while m < min_m {
                m += period;
            }
            let points: Vec<(Rat, Rat)> = (0..points_per_residue)
                .map(|k| {
                    let arg = m + k * period;
                    max_sampled = max_sampled.max(arg);
                    (Rat::from_integer(Int::from(arg as i64)), f(arg))
                })
                .collect();
            constituents.push(linalg::interpolate_polynomial(&points));
        }
        let qp = QuasiPolynomial::new(period, constituents);
        for k in 1..=verify {
            let m = max_sampled + k;
            let expected = f(m);
            let got = qp.eval(m as i64);
            if got != expected {
                return Err(EhrhartError::VerificationMismatch {
                    m: m as i64,
                    expected,
                    got,
                });
            }
        }
        Ok(qp)
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn constituents(&self) -> &[Vec<Rat>] {
        &self.constituents
    }

    /// Evaluation at any integer; negative arguments use the constituent
    /// indexed by m mod period in 0..period.
    pub fn eval(&self, m: i64) -> Rat {
        let idx = m.rem_euclid(self.period as i64) as usize;
        let x = Rat::from_integer(Int::from(m));
        let mut acc = Rat::zero();
        for c in self.constituents[idx].iter().rev() {
            acc = acc * &x + c;
        }
        acc
    }

    pub fn degree(&self) -> usize {
        self.constituents
            .iter()
            .map(|c| c.len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of m^k in the constituent for residue i.
    pub fn coefficient(&self, i: usize, k: usize) -> Rat {
        self.constituents[i % self.period]
            .get(k)
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Smallest divisor of the period that reproduces all constituents.
    pub fn minimal_period(&self) -> usize {
        'outer: for s in 1..=self.period {
            if self.period % s != 0 {
                continue;
            }
            for i in 0..self.period {
                if self.constituents[i] != self.constituents[(i + s) % self.period] {
                    continue 'outer;
                }
            }
            return s;
        }
        self.period
    }

    pub fn is_polynomial(&self) -> bool {
        self.minimal_period() == 1
    }
}

/// Ehrhart series: numerator over (1 - t^period)^(dim + 1).
#[derive(Debug, Clone, PartialEq)]
pub struct EhrhartSeries {
    pub dim: usize,
    pub period: usize,
    pub numerator: IntPolynomial,
}

impl EhrhartSeries {
    pub fn rational_function(&self) -> RationalFunction {
        RationalFunction::over_standard(self.numerator.clone(), self.period, self.dim + 1)
    }
}

/// Series of a rational polytope, with the numerator recovered by clearing
/// the factored denominator against directly counted dilates and verified
/// on held-out counts.
pub fn ehrhart_series(q: &RationalPolytope) -> Result<EhrhartSeries, EhrhartError> {
    let d = q.dim();
    let r = q.denominator();
    let n_num = r * (d + 1); // numerator degree < n_num
    let horizon = n_num + r;
    let counts: Vec<Int> = (0..horizon)
        .map(|m| Int::from(q.count_lattice_points(m) as i64))
        .collect();
    // numerator = counts * (1 - t^r)^(d+1), truncated; the tail beyond the
    // degree bound must vanish, which is the held-out verification
    let den = IntPolynomial::one_minus_t_pow(r).pow(d + 1);
    let mut num = vec![Int::zero(); horizon];
    for (m, c) in counts.iter().enumerate() {
        for j in 0..=den.degree() {
            if m + j < horizon {
                num[m + j] += c * den.coeff(j);
            }
        }
    }
    for (m, c) in num.iter().enumerate().skip(n_num) {
        if !c.is_zero() {
            return Err(EhrhartError::VerificationMismatch {
                m: m as i64,
                expected: Rat::zero(),
                got: Rat::from_integer(c.clone()),
            });
        }
    }
    num.truncate(n_num);
    Ok(EhrhartSeries {
        dim: d,
        period: r,
        numerator: IntPolynomial::new(num),
    })
}

/// h*-polynomial with degree and codegree; lattice polytopes only.
#[derive(Debug, Clone, PartialEq)]
pub struct HStarData {
    pub h_star: IntPolynomial,
    pub degree: usize,
    pub codegree: usize,
}

pub fn h_star_data(q: &RationalPolytope) -> Result<HStarData, EhrhartError> {
    if q.denominator() != 1 {
        return Err(EhrhartError::NotLattice);
    }
    let series = ehrhart_series(q)?;
    let h = series.numerator;
    let s = h.degree();
    Ok(HStarData {
        degree: s,
        codegree: q.dim() + 1 - s,
        h_star: h,
    })
}

/// Counting quasi-polynomial of the dilates, interpolated and verified.
pub fn quasi_polynomial(q: &RationalPolytope) -> Result<QuasiPolynomial, EhrhartError> {
    let d = q.dim();
    let r = q.denominator();
    QuasiPolynomial::interpolate(r, d + 1, 0, r, |m| {
        Rat::from_integer(Int::from(q.count_lattice_points(m) as i64))
    })
}

/// Counting quasi-polynomial of relative-interior points of the dilates.
pub fn interior_quasi_polynomial(q: &RationalPolytope) -> Result<QuasiPolynomial, EhrhartError> {
    let d = q.dim();
    let r = q.denominator();
    QuasiPolynomial::interpolate(r, d + 1, 1, r, |m| {
        Rat::from_integer(Int::from(q.count_interior_lattice_points(m) as i64))
    })
}

/// Ehrhart reciprocity f(-m) = (-1)^dim f_interior(m), tested directly on
/// the verification horizon; a falsified m is the witness.
pub fn reciprocity_check(q: &RationalPolytope) -> Result<(), i64> {
    let d = q.dim();
    let r = q.denominator();
    let qp = quasi_polynomial(q).map_err(|_| -1i64)?;
    let sign = if d % 2 == 0 { Rat::one() } else { -Rat::one() };
    for m in 1..=((d + 1) * r + 2) as i64 {
        let lhs = qp.eval(-m);
        let rhs = &sign * Rat::from_integer(Int::from(
            q.count_interior_lattice_points(m as usize) as i64,
        ));
        if lhs != rhs {
            return Err(m);
        }
    }
    Ok(())
}

/// Eulerian polynomial A(d; t): descent-count generating polynomial over the
/// permutations of d elements; A(0) = A(1) = 1.
pub fn eulerian_polynomial(d: usize) -> IntPolynomial {
    let mut row: Vec<Int> = vec![Int::one()];
    for n in 1..=d {
        let mut next = vec![Int::zero(); n];
        for i in 0..n {
            let from_same = if i < row.len() {
                Int::from(i as i64 + 1) * &row[i]
            } else {
                Int::zero()
            };
            let from_prev = if i >= 1 && i - 1 < row.len() {
                Int::from((n - i) as i64) * &row[i - 1]
            } else {
                Int::zero()
            };
            next[i] = from_same + from_prev;
        }
        row = next;
    }
    IntPolynomial::new(row)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::RationalPolytope;

    fn unit_square() -> RationalPolytope {
        RationalPolytope::from_integer_points(2, &[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]])
    }

    #[test]
    fn square_h_star() {
        let h = h_star_data(&unit_square()).unwrap();
        assert_eq!(h.h_star, IntPolynomial::from_i64(&[1, 1]));
        assert_eq!(h.degree, 1);
        assert_eq!(h.codegree, 2);
        assert_eq!(h.h_star, eulerian_polynomial(2));
    }

    #[test]
    fn cube_counts_match_closed_form() {
        let seg = RationalPolytope::from_integer_points(1, &[vec![0], vec![1]]);
        let cube = seg.product(&seg).product(&seg);
        let qp = quasi_polynomial(&cube).unwrap();
        assert!(qp.is_polynomial());
        for m in 0..6 {
            assert_eq!(
                qp.eval(m),
                Rat::from_integer(Int::from((m + 1).pow(3)))
            );
        }
        let h = h_star_data(&cube).unwrap();
        assert_eq!(h.h_star, eulerian_polynomial(3));
    }

    #[test]
    fn half_segment_period_two() {
        let seg = RationalPolytope::from_points(
            1,
            &[vec![Rat::zero()], vec![Rat::new(Int::one(), Int::from(2))]],
        );
        let qp = quasi_polynomial(&seg).unwrap();
        assert_eq!(qp.period(), 2);
        assert_eq!(qp.minimal_period(), 2);
        for m in 0..10i64 {
            let expect = if m % 2 == 0 { m / 2 + 1 } else { (m + 1) / 2 };
            assert_eq!(qp.eval(m), Rat::from_integer(Int::from(expect)));
        }
    }

    #[test]
    fn series_verification_and_single_point() {
        let pt = RationalPolytope::from_integer_points(2, &[vec![3, 4]]);
        let s = ehrhart_series(&pt).unwrap();
        assert_eq!(s.period, 1);
        assert_eq!(s.numerator, IntPolynomial::one());
        assert_eq!(s.dim, 0);
    }

    #[test]
    fn reciprocity_small_cases() {
        let sq = unit_square();
        assert_eq!(reciprocity_check(&sq), Ok(()));
        let qp = quasi_polynomial(&sq).unwrap();
        assert!(qp.eval(-1).is_zero());

        let hex = RationalPolytope::from_integer_points(
            2,
            &[
                vec![1, 0],
                vec![-1, 0],
                vec![0, 1],
                vec![0, -1],
                vec![1, 1],
                vec![-1, -1],
            ],
        );
        assert_eq!(reciprocity_check(&hex), Ok(()));
        let qph = quasi_polynomial(&hex).unwrap();
        assert_eq!(qph.eval(-1), Rat::one());

        let tri = RationalPolytope::from_integer_points(2, &[vec![0, 0], vec![1, 0], vec![0, 1]]);
        let qpt = quasi_polynomial(&tri).unwrap();
        assert!(qpt.eval(-2).is_zero());
        assert_eq!(qpt.eval(-3), Rat::one());
        assert_eq!(reciprocity_check(&tri), Ok(()));
    }

    #[test]
    fn quasi_polynomial_basics() {
        let sq = unit_square();
        let qp = quasi_polynomial(&sq).unwrap();
        assert_eq!(qp.degree(), 2);
        assert_eq!(qp.eval(0), Rat::one());
        // leading coefficient = normalized volume for lattice polytopes
        assert_eq!(qp.coefficient(0, 2), sq.normalized_volume());
    }

    #[test]
    fn pip_style_rational_polytope() {
        // conv{(1/2,0), (0,1), (0,-1)} has denominator 2
        let p = RationalPolytope::from_points(
            2,
            &[
                vec![Rat::new(Int::one(), Int::from(2)), Rat::zero()],
                vec![Rat::zero(), Rat::one()],
                vec![Rat::zero(), -Rat::one()],
            ],
        );
        assert_eq!(p.denominator(), 2);
        let qp = quasi_polynomial(&p).unwrap();
        assert_eq!(qp.period(), 2);
        for m in 0..8 {
            assert_eq!(
                qp.eval(m as i64),
                Rat::from_integer(Int::from(p.count_lattice_points(m) as i64))
            );
        }
    }

    #[test]
    fn eulerian_polynomials() {
        assert_eq!(eulerian_polynomial(0), IntPolynomial::one());
        assert_eq!(eulerian_polynomial(1), IntPolynomial::one());
        assert_eq!(eulerian_polynomial(2), IntPolynomial::from_i64(&[1, 1]));
        assert_eq!(eulerian_polynomial(3), IntPolynomial::from_i64(&[1, 4, 1]));
        assert_eq!(
            eulerian_polynomial(4),
            IntPolynomial::from_i64(&[1, 11, 11, 1])
        );
    }

    #[test]
    fn h_star_invariants() {
        // h*(1) = dim! * volume on a lattice example
        let hex = RationalPolytope::from_integer_points(
            2,
            &[
                vec![1, 0],
                vec![-1, 0],
                vec![0, 1],
                vec![0, -1],
                vec![1, 1],
                vec![-1, -1],
            ],
        );
        let h = h_star_data(&hex).unwrap();
        let total: Int = h.h_star.coeffs().iter().cloned().sum();
        let vol = hex.normalized_volume() * Rat::from_integer(Int::from(2));
        assert_eq!(Rat::from_integer(total), vol);
        // h*_1 = points - dim - 1, h*_d = interior points
        assert_eq!(
            h.h_star.coeff(1),
            Int::from(hex.count_lattice_points(1) as i64 - 3)
        );
        assert_eq!(
            h.h_star.coeff(2),
            Int::from(hex.count_interior_lattice_points(1) as i64)
        );
    }
}
