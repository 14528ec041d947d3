//! Exact scalar and polynomial arithmetic: integer polynomials, rational
//! functions in `t` with denominators built from `(1 - t^a)^b` factors, and
//! cyclotomic-field values used as character entries.

use std::collections::HashMap;
use std::sync::Mutex;

use num::{BigInt, Integer, One, Signed, Zero};
use once_cell::sync::Lazy;
use thiserror::Error;

use crate::linalg::{Int, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("expanded denominator has zero constant term")]
    ZeroConstantTerm,
    #[error("pole at t = 1 after cancellation")]
    PoleAtOne,
}

// ---------------------------------------------------------------------------
// IntPolynomial
// ---------------------------------------------------------------------------

/// Univariate polynomial with big-integer coefficients, ascending degree,
/// no trailing zero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<Int>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<Int>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// The monomial c * t^k.
    pub fn monomial(c: Int, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Int::zero(); k + 1];
        coeffs[k] = c;
        IntPolynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Int {
        self.coeffs.get(i).cloned().unwrap_or_else(Int::zero)
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Int::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &Int) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval_int(&self, x: &Int) -> Int {
        let mut acc = Int::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rat::from_integer(c.clone());
        }
        acc
    }

    /// t^n * p(1/t) for n >= deg p: the reversed coefficient sequence padded
    /// to length n + 1.
    pub fn reverse(&self, n: usize) -> Self {
        assert!(n >= self.degree() || self.is_zero());
        let mut out = vec![Int::zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[n - i] = c.clone();
        }
        Self::new(out)
    }

    pub fn is_palindromic(&self) -> bool {
        !self.is_zero() && *self == self.reverse(self.degree())
    }

    /// 1 - t^a.
    pub fn one_minus_t_pow(a: usize) -> Self {
        let mut coeffs = vec![Int::zero(); a + 1];
        coeffs[0] = Int::one();
        coeffs[a] = -Int::one();
        Self::new(coeffs)
    }

    /// 1 + t + ... + t^{a-1}.
    pub fn all_ones(a: usize) -> Self {
        Self::new(vec![Int::one(); a])
    }

    pub fn to_rat_coeffs(&self) -> Vec<Rat> {
        self.coeffs
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect()
    }

    /// Exact division; `None` when the remainder is nonzero or the quotient
    /// is not integral.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero());
        let (q, r) = rpoly_divrem(&self.to_rat_coeffs(), &d.to_rat_coeffs());
        if !r.is_empty() {
            return None;
        }
        from_rat_coeffs(&q)
    }

    /// Content: gcd of coefficients, with the sign of the leading coefficient.
    pub fn content(&self) -> Int {
        let mut g = Int::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        if self.coeffs.last().map(|c| c.is_negative()).unwrap_or(false) {
            g = -g;
        }
        g
    }

    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let term = if i == 0 {
                format!("{mag}")
            } else {
                let p = if i == 1 {
                    var.to_string()
                } else {
                    format!("{var}^{i}")
                };
                if mag.is_one() {
                    p
                } else {
                    format!("{mag}*{p}")
                }
            };
            if parts.is_empty() {
                parts.push(if c.is_negative() {
                    format!("-{term}")
                } else {
                    term
                });
            } else {
                parts.push(format!(
                    " {} {term}",
                    if c.is_negative() { "-" } else { "+" }
                ));
            }
        }
        parts.concat()
    }
}

fn from_rat_coeffs(c: &[Rat]) -> Option<IntPolynomial> {
    let mut out = Vec::with_capacity(c.len());
    for x in c {
        if !x.is_integer() {
            return None;
        }
        out.push(x.to_integer());
    }
    Some(IntPolynomial::new(out))
}

// ---------------------------------------------------------------------------
// rational-coefficient polynomial helpers (private)
// ---------------------------------------------------------------------------

fn rpoly_trim(mut c: Vec<Rat>) -> Vec<Rat> {
    while c.last().map(|x| x.is_zero()).unwrap_or(false) {
        c.pop();
    }
    c
}

fn rpoly_divrem(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let den = rpoly_trim(den.to_vec());
    assert!(!den.is_empty());
    let mut rem = rpoly_trim(num.to_vec());
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let mut quo = vec![Rat::zero(); rem.len() - den.len() + 1];
    let lead = den.last().unwrap().clone();
    while rem.len() >= den.len() {
        let k = rem.len() - den.len();
        let f = rem.last().unwrap() / &lead;
        quo[k] = f.clone();
        for (i, d) in den.iter().enumerate() {
            let sub = d * &f;
            rem[k + i] = &rem[k + i] - sub;
        }
        rem = rpoly_trim(rem);
        if rem.is_empty() {
            break;
        }
        if rem.len() < den.len() {
            break;
        }
    }
    (rpoly_trim(quo), rem)
}

fn rpoly_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut a = rpoly_trim(a.to_vec());
    let mut b = rpoly_trim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = rpoly_divrem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(l) = a.last().cloned() {
        for x in a.iter_mut() {
            *x = &*x / &l;
        }
    }
    a
}

/// Primitive integer polynomial proportional to the given rational one.
fn rpoly_primitive(c: &[Rat]) -> IntPolynomial {
    let c = rpoly_trim(c.to_vec());
    if c.is_empty() {
        return IntPolynomial::zero();
    }
    let mut lcm = Int::one();
    for x in &c {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<Int> = c.iter().map(|x| (x * Rat::from_integer(lcm.clone())).to_integer()).collect();
    let p = IntPolynomial::new(ints);
    let content = p.content();
    IntPolynomial::new(p.coeffs.iter().map(|x| x / &content).collect())
}

// ---------------------------------------------------------------------------
// RationalFunction
// ---------------------------------------------------------------------------

/// Rational function in `t`: integer numerator over a denominator described
/// as a product of `(1 - t^a)^b` factors times an optional extra integer
/// polynomial. A fully cancelled numerator/denominator pair is kept alongside
/// the factored description.
#[derive(Debug, Clone)]
pub struct RationalFunction {
    numerator: IntPolynomial,
    factors: Vec<(usize, usize)>,
    extra: IntPolynomial,
    reduced_num: IntPolynomial,
    reduced_den: IntPolynomial,
}

impl RationalFunction {
    pub fn new(numerator: IntPolynomial, factors: &[(usize, usize)], extra: IntPolynomial) -> Self {
        assert!(!extra.is_zero());
        let mut fs: Vec<(usize, usize)> = factors.iter().cloned().filter(|&(_, b)| b > 0).collect();
        for &(a, _) in &fs {
            assert!(a >= 1);
        }
        fs.sort_unstable();
        let mut den = extra.clone();
        for &(a, b) in &fs {
            den = den.mul(&IntPolynomial::one_minus_t_pow(a).pow(b));
        }
        let (rn, rd) = reduce_fraction(&numerator, &den);
        RationalFunction {
            numerator,
            factors: fs,
            extra,
            reduced_num: rn,
            reduced_den: rd,
        }
    }

    pub fn from_poly(p: IntPolynomial) -> Self {
        Self::new(p, &[], IntPolynomial::one())
    }

    /// num / (1 - t^a)^b.
    pub fn over_standard(numerator: IntPolynomial, a: usize, b: usize) -> Self {
        Self::new(numerator, &[(a, b)], IntPolynomial::one())
    }

    pub fn numerator(&self) -> &IntPolynomial {
        &self.numerator
    }

    pub fn factors(&self) -> &[(usize, usize)] {
        &self.factors
    }

    pub fn extra_factor(&self) -> &IntPolynomial {
        &self.extra
    }

    /// Fully cancelled numerator; shares no polynomial factor with the
    /// cancelled denominator.
    pub fn reduced_numerator(&self) -> &IntPolynomial {
        &self.reduced_num
    }

    pub fn reduced_denominator(&self) -> &IntPolynomial {
        &self.reduced_den
    }

    pub fn is_zero(&self) -> bool {
        self.reduced_num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.reduced_den.degree() == 0
    }

    /// The polynomial value when the cancelled denominator is constant.
    pub fn as_polynomial(&self) -> Option<IntPolynomial> {
        if !self.is_polynomial() {
            return None;
        }
        let d = self.reduced_den.coeff(0);
        if d.is_one() {
            Some(self.reduced_num.clone())
        } else {
            // constant denominators other than 1 cannot appear for series with
            // integer coefficients, but divide exactly when they do
            let coeffs: Option<Vec<Int>> = self
                .reduced_num
                .coeffs()
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(&d);
                    r.is_zero().then_some(q)
                })
                .collect();
            coeffs.map(IntPolynomial::new)
        }
    }

    /// First k coefficients of the power-series expansion.
    pub fn series(&self, k: usize) -> Result<Vec<Rat>, ArithError> {
        series_quotient_rat(&self.reduced_num, &self.reduced_den, k)
    }

    /// First k coefficients, asserting integrality.
    pub fn series_int(&self, k: usize) -> Result<Vec<Int>, ArithError> {
        let s = self.series(k)?;
        Ok(s.iter()
            .map(|x| {
                assert!(x.is_integer(), "series coefficient not an integer");
                x.to_integer()
            })
            .collect())
    }

    pub fn eval_at_one(&self) -> Result<Rat, ArithError> {
        let dv = self.reduced_den.eval_rat(&Rat::one());
        if dv.is_zero() {
            return Err(ArithError::PoleAtOne);
        }
        Ok(self.reduced_num.eval_rat(&Rat::one()) / dv)
    }

    pub fn eval_at(&self, x: &Rat) -> Option<Rat> {
        let dv = self.reduced_den.eval_rat(x);
        if dv.is_zero() {
            return None;
        }
        Some(self.reduced_num.eval_rat(x) / dv)
    }

    fn from_reduced(num: IntPolynomial, den: IntPolynomial) -> Self {
        RationalFunction {
            numerator: num.clone(),
            factors: Vec::new(),
            extra: den.clone(),
            reduced_num: num,
            reduced_den: den,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self
            .reduced_num
            .mul(&other.reduced_den)
            .add(&other.reduced_num.mul(&self.reduced_den));
        let den = self.reduced_den.mul(&other.reduced_den);
        let (n, d) = reduce_fraction(&num, &den);
        Self::from_reduced(n, d)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self::from_reduced(self.reduced_num.neg(), self.reduced_den.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let num = self.reduced_num.mul(&other.reduced_num);
        let den = self.reduced_den.mul(&other.reduced_den);
        let (n, d) = reduce_fraction(&num, &den);
        Self::from_reduced(n, d)
    }

    pub fn mul_poly(&self, p: &IntPolynomial) -> Self {
        self.mul(&Self::from_poly(p.clone()))
    }

    /// t^shift * f(1/t) as a rational function; `shift` may be negative when
    /// the numerator carries enough powers of t.
    pub fn inverse_substitution(&self, shift: i64) -> Self {
        let dn = self.reduced_num.degree() as i64;
        let dd = self.reduced_den.degree() as i64;
        let num_rev = if self.reduced_num.is_zero() {
            IntPolynomial::zero()
        } else {
            self.reduced_num.reverse(self.reduced_num.degree())
        };
        let den_rev = self.reduced_den.reverse(self.reduced_den.degree());
        // t^shift f(1/t) = t^{shift + dd - dn} rev(num)/rev(den)
        let e = shift + dd - dn;
        let (num, den) = if e >= 0 {
            (num_rev.mul(&IntPolynomial::monomial(Int::one(), e as usize)), den_rev)
        } else {
            (num_rev, den_rev.mul(&IntPolynomial::monomial(Int::one(), (-e) as usize)))
        };
        let (n, d) = reduce_fraction(&num, &den);
        Self::from_reduced(n, d)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.reduced_num.mul(&other.reduced_den) == other.reduced_num.mul(&self.reduced_den)
    }
}

impl Eq for RationalFunction {}

/// Cancel the fraction num/den: divide both by their primitive polynomial
/// gcd and by the integer content gcd, normalizing the denominator to have
/// positive leading coefficient and, when nonzero, positive constant term.
fn reduce_fraction(num: &IntPolynomial, den: &IntPolynomial) -> (IntPolynomial, IntPolynomial) {
    assert!(!den.is_zero());
    if num.is_zero() {
        return (IntPolynomial::zero(), IntPolynomial::one());
    }
    let g = rpoly_gcd(&num.to_rat_coeffs(), &den.to_rat_coeffs());
    let (mut n, mut d) = if rpoly_trim(g.clone()).len() > 1 {
        let gp = rpoly_primitive(&g);
        (num.div_exact(&gp).expect("gcd divides numerator"),
         den.div_exact(&gp).expect("gcd divides denominator"))
    } else {
        (num.clone(), den.clone())
    };
    let cn = n.content();
    let cd = d.content();
    let cg = cn.gcd(&cd);
    if !cg.is_one() {
        n = IntPolynomial::new(n.coeffs().iter().map(|x| x / &cg).collect());
        d = IntPolynomial::new(d.coeffs().iter().map(|x| x / &cg).collect());
    }
    // prefer positive constant term; fall back to positive leading coefficient
    let flip = if !d.coeff(0).is_zero() {
        d.coeff(0).is_negative()
    } else {
        d.coeffs().last().unwrap().is_negative()
    };
    if flip {
        n = n.neg();
        d = d.neg();
    }
    (n, d)
}

fn series_quotient_rat(
    num: &IntPolynomial,
    den: &IntPolynomial,
    k: usize,
) -> Result<Vec<Rat>, ArithError> {
    let d0 = den.coeff(0);
    if d0.is_zero() {
        return Err(ArithError::ZeroConstantTerm);
    }
    let d0 = Rat::from_integer(d0);
    let mut out: Vec<Rat> = Vec::with_capacity(k);
    for m in 0..k {
        let mut acc = Rat::from_integer(num.coeff(m));
        for j in 1..=m.min(den.degree()) {
            let sub = Rat::from_integer(den.coeff(j)) * &out[m - j];
            acc -= sub;
        }
        out.push(acc / &d0);
    }
    Ok(out)
}

/// First k power-series coefficients of num over a `(1 - t^a)^b` factored
/// denominator with an optional extra polynomial factor.
pub fn poly_series_quotient(
    num: &IntPolynomial,
    factors: &[(usize, usize)],
    extra: &IntPolynomial,
    k: usize,
) -> Result<Vec<Int>, ArithError> {
    let mut den = extra.clone();
    for &(a, b) in factors {
        den = den.mul(&IntPolynomial::one_minus_t_pow(a).pow(b));
    }
    let s = series_quotient_rat(num, &den, k)?;
    Ok(s.iter()
        .map(|x| {
            assert!(x.is_integer(), "series coefficient not an integer");
            x.to_integer()
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Cyclotomic values
// ---------------------------------------------------------------------------

pub fn euler_phi(n: usize) -> usize {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

static CYCLOTOMIC_CACHE: Lazy<Mutex<HashMap<usize, IntPolynomial>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// The n-th cyclotomic polynomial, computed by dividing x^n - 1 by the
/// cyclotomic polynomials of the proper divisors of n.
pub fn cyclotomic_polynomial(n: usize) -> IntPolynomial {
    assert!(n >= 1);
    if let Some(p) = CYCLOTOMIC_CACHE.lock().unwrap().get(&n) {
        return p.clone();
    }
    let result = if n == 1 {
        IntPolynomial::from_i64(&[-1, 1])
    } else {
        let mut num = IntPolynomial::one_minus_t_pow(n).neg(); // x^n - 1
        for d in 1..n {
            if n % d == 0 {
                let phi_d = cyclotomic_polynomial(d);
                num = num.div_exact(&phi_d).expect("cyclotomic division is exact");
            }
        }
        num
    };
    CYCLOTOMIC_CACHE
        .lock()
        .unwrap()
        .insert(n, result.clone());
    result
}

/// Element of the N-th cyclotomic field on the power basis
/// 1, z, ..., z^{phi(N)-1} with z = e^{2 pi i / N}.
#[derive(Debug, Clone)]
pub struct CyclotomicValue {
    order: usize,
    coords: Vec<Rat>,
}

impl CyclotomicValue {
    pub fn zero() -> Self {
        CyclotomicValue {
            order: 1,
            coords: vec![Rat::zero()],
        }
    }

    pub fn one() -> Self {
        Self::from_rational(Rat::one())
    }

    pub fn from_rational(r: Rat) -> Self {
        CyclotomicValue {
            order: 1,
            coords: vec![r],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rat::from_integer(Int::from(n)))
    }

    pub fn from_bigint(n: Int) -> Self {
        Self::from_rational(Rat::from_integer(n))
    }

    /// zeta_n^k.
    pub fn root_of_unity(n: usize, k: usize) -> Self {
        assert!(n >= 1);
        let k = k % n;
        let deg = euler_phi(n);
        let mut raw = vec![Rat::zero(); k + 1];
        raw[k] = Rat::one();
        let coords = reduce_mod_cyclotomic(raw, n, deg);
        CyclotomicValue { order: n, coords }.shrink()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Lift to the cyclotomic field of order L (order must divide L).
    pub fn lift_to(&self, l: usize) -> Self {
        assert!(l % self.order == 0);
        if l == self.order {
            return self.clone();
        }
        let step = l / self.order;
        let deg = euler_phi(l);
        let mut raw = vec![Rat::zero(); (self.coords.len() - 1) * step + 1];
        for (j, c) in self.coords.iter().enumerate() {
            raw[j * step] = c.clone();
        }
        let coords = reduce_mod_cyclotomic(raw, l, deg);
        CyclotomicValue { order: l, coords }
    }

    /// Drop to order 1 when the value is rational; keeps arithmetic small.
    fn shrink(self) -> Self {
        if self.order > 1 && self.coords.iter().skip(1).all(|c| c.is_zero()) {
            CyclotomicValue {
                order: 1,
                coords: vec![self.coords[0].clone()],
            }
        } else {
            self
        }
    }

    fn common_order(&self, other: &Self) -> usize {
        self.order.lcm(&other.order)
    }

    pub fn add(&self, other: &Self) -> Self {
        let l = self.common_order(other);
        let a = self.lift_to(l);
        let b = other.lift_to(l);
        let n = a.coords.len().max(b.coords.len());
        let coords = (0..n)
            .map(|i| {
                a.coords.get(i).cloned().unwrap_or_else(Rat::zero)
                    + b.coords.get(i).cloned().unwrap_or_else(Rat::zero)
            })
            .collect();
        CyclotomicValue { order: l, coords }.shrink()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CyclotomicValue {
            order: self.order,
            coords: self.coords.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let l = self.common_order(other);
        let a = self.lift_to(l);
        let b = other.lift_to(l);
        let mut raw = vec![Rat::zero(); a.coords.len() + b.coords.len()];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                let p = x * y;
                raw[i + j] += p;
            }
        }
        let deg = euler_phi(l);
        let coords = reduce_mod_cyclotomic(raw, l, deg);
        CyclotomicValue { order: l, coords }.shrink()
    }

    pub fn scale(&self, r: &Rat) -> Self {
        CyclotomicValue {
            order: self.order,
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
        .shrink()
    }

    /// Complex conjugation: z^j maps to z^{N-j}.
    pub fn conjugate(&self) -> Self {
        if self.order <= 2 {
            return self.clone();
        }
        let n = self.order;
        let deg = euler_phi(n);
        let mut raw = vec![Rat::zero(); n];
        for (j, c) in self.coords.iter().enumerate() {
            let k = (n - j) % n;
            raw[k] += c.clone();
        }
        let coords = reduce_mod_cyclotomic(raw, n, deg);
        CyclotomicValue { order: n, coords }.shrink()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().skip(1).all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<Rat> {
        self.is_rational().then(|| self.coords[0].clone())
    }

    pub fn as_integer(&self) -> Option<Int> {
        let r = self.as_rational()?;
        r.is_integer().then(|| r.to_integer())
    }

    /// Floating-point image under z = e^{2 pi i / N}; sanity checks only.
    pub fn to_complex(&self) -> (f64, f64) {
        let theta = 2.0 * std::f64::consts::PI / self.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.coords.iter().enumerate() {
            let v = rat_to_f64(c);
            re += v * (theta * j as f64).cos();
            im += v * (theta * j as f64).sin();
        }
        (re, im)
    }

    pub fn render(&self) -> String {
        if let Some(r) = self.as_rational() {
            return format!("{r}");
        }
        let mut parts = Vec::new();
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let base = if j == 0 {
                format!("{c}")
            } else {
                let z = if j == 1 {
                    format!("z{}", self.order)
                } else {
                    format!("z{}^{}", self.order, j)
                };
                if c.is_one() {
                    z
                } else {
                    format!("{c}*{z}")
                }
            };
            parts.push(base);
        }
        parts.join(" + ")
    }
}

impl PartialEq for CyclotomicValue {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl Eq for CyclotomicValue {}

fn rat_to_f64(r: &Rat) -> f64 {
    let n = bigint_to_f64(r.numer());
    let d = bigint_to_f64(r.denom());
    n / d
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    x.to_string().parse::<f64>().unwrap_or(f64::NAN)
}

fn reduce_mod_cyclotomic(raw: Vec<Rat>, n: usize, deg: usize) -> Vec<Rat> {
    let mut c = raw;
    if c.len() > deg {
        let phi = cyclotomic_polynomial(n).to_rat_coeffs();
        let (_, r) = rpoly_divrem(&c, &phi);
        c = r;
    }
    c.resize(deg, Rat::zero());
    c
}

/// Sum of rationals as a BigRational; convenience for inner products.
pub fn big_rational_sum<I: IntoIterator<Item = Rat>>(it: I) -> Rat {
    let mut acc = Rat::zero();
    for x in it {
        acc += x;
    }
    acc
}

pub fn binomial(n: i64, k: i64) -> Int {
    if k < 0 {
        return Int::zero();
    }
    // generalized binomial for possibly negative n, integer-valued for n >= 0
    let mut num = Int::one();
    let mut den = Int::one();
    for i in 0..k {
        num *= Int::from(n - i);
        den *= Int::from(i + 1);
    }
    let r = Rat::new(num, den);
    assert!(r.is_integer());
    r.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(num: &[i64], factors: &[(usize, usize)], extra: &[i64]) -> RationalFunction {
        RationalFunction::new(
            IntPolynomial::from_i64(num),
            factors,
            IntPolynomial::from_i64(extra),
        )
    }

    #[test]
    fn series_examples() {
        let s = poly_series_quotient(
            &IntPolynomial::one(),
            &[(1, 2)],
            &IntPolynomial::one(),
            4,
        )
        .unwrap();
        assert_eq!(s, vec![1, 2, 3, 4].into_iter().map(Int::from).collect::<Vec<_>>());

        let s = poly_series_quotient(
            &IntPolynomial::from_i64(&[1, 1, 1, 1]),
            &[(1, 4)],
            &IntPolynomial::one(),
            3,
        )
        .unwrap();
        assert_eq!(s, vec![1, 5, 15].into_iter().map(Int::from).collect::<Vec<_>>());

        let s = poly_series_quotient(
            &IntPolynomial::zero(),
            &[(1, 1)],
            &IntPolynomial::one(),
            5,
        )
        .unwrap();
        assert!(s.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn series_rejects_zero_constant_term() {
        let e = poly_series_quotient(
            &IntPolynomial::one(),
            &[],
            &IntPolynomial::from_i64(&[0, 1]),
            3,
        );
        assert_eq!(e.unwrap_err(), ArithError::ZeroConstantTerm);
    }

    #[test]
    fn eval_at_one_examples() {
        // (1 - t^2)/(1 - t) = 1 + t
        let f = rf(&[1, 0, -1], &[(1, 1)], &[1]);
        assert!(f.is_polynomial());
        assert_eq!(f.eval_at_one().unwrap(), Rat::from_integer(Int::from(2)));

        // (1 + 3t + 8t^2 + 3t^3 + t^4)/(1 + t) at t = 1 gives 8
        let f = rf(&[1, 3, 8, 3, 1], &[], &[1, 1]);
        assert_eq!(f.eval_at_one().unwrap(), Rat::from_integer(Int::from(8)));
        assert!(!f.is_polynomial());

        // (1 - t)/(1 - t)^2 has a simple pole at 1
        let f = rf(&[1, -1], &[(1, 2)], &[1]);
        assert_eq!(f.eval_at_one().unwrap_err(), ArithError::PoleAtOne);
    }

    #[test]
    fn rational_function_algebra() {
        let a = rf(&[1], &[(1, 1)], &[1]); // 1/(1-t)
        let b = rf(&[1], &[(2, 1)], &[1]); // 1/(1-t^2)
        let prod = a.mul(&b);
        let s = prod.series(6).unwrap();
        // 1/((1-t)(1-t^2)) counts partitions into parts 1 and 2
        let expect = [1i64, 1, 2, 2, 3, 3];
        for (x, e) in s.iter().zip(expect) {
            assert_eq!(*x, Rat::from_integer(Int::from(e)));
        }
        let back = prod.mul(&rf(&[1, -1, -1, 1], &[], &[1]));
        assert_eq!(back, RationalFunction::from_poly(IntPolynomial::one()));
    }

    #[test]
    fn inverse_substitution_palindrome() {
        // h = 1 + 5t + 5t^2 + t^3 is palindromic: t^3 h(1/t) = h(t)
        let h = RationalFunction::from_poly(IntPolynomial::from_i64(&[1, 5, 5, 1]));
        assert_eq!(h.inverse_substitution(3), h);
        let g = RationalFunction::from_poly(IntPolynomial::from_i64(&[1, 2]));
        assert_ne!(g.inverse_substitution(1), g);
    }

    #[test]
    fn cyclotomic_basics() {
        let z6 = CyclotomicValue::root_of_unity(6, 1);
        let z6_5 = CyclotomicValue::root_of_unity(6, 5);
        assert_eq!(z6.add(&z6_5), CyclotomicValue::one());

        let i = CyclotomicValue::root_of_unity(4, 1);
        assert_eq!(i.mul(&i), CyclotomicValue::from_int(-1));

        let z3 = CyclotomicValue::root_of_unity(3, 1);
        assert_eq!(z3.conjugate(), CyclotomicValue::root_of_unity(3, 2));

        // mixed orders: z2 * z3 = z6^5
        let z2 = CyclotomicValue::root_of_unity(2, 1);
        assert_eq!(z2.mul(&z3), CyclotomicValue::root_of_unity(6, 5));
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(6), IntPolynomial::from_i64(&[1, -1, 1]));
        assert_eq!(
            cyclotomic_polynomial(12),
            IntPolynomial::from_i64(&[1, 0, -1, 0, 1])
        );
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(1), 1);
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for n in [2usize, 3, 4, 5, 6, 8, 12] {
            let mut acc = CyclotomicValue::zero();
            for k in 0..n {
                acc = acc.add(&CyclotomicValue::root_of_unity(n, k));
            }
            assert!(acc.is_zero(), "order {n}");
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Int::from(10));
        assert_eq!(binomial(2, 0), Int::from(1));
        assert_eq!(binomial(1, 3), Int::from(0));
        assert_eq!(binomial(-1, 2), Int::from(1));
    }
}
