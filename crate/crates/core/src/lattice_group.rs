//! Finite groups of affine lattice automorphisms: closure from generators,
//! conjugacy classes, class functions over cyclotomic values, permutation and
//! determinant characters, and an exact irreducible character table computed
//! by the Dixon-Schneider class-matrix method.

use std::collections::HashMap;

use num::{Integer, One, Signed, Zero};
use thiserror::Error;

use crate::exact_arith::CyclotomicValue;
use crate::exact_arith::IntPolynomial;
use crate::linalg::{self, Int, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("group closure exceeded the cap of {0} elements")]
    ClosureExceeded(usize),
    #[error("generator linear part is not invertible over the integers")]
    NonInvertibleGenerator,
    #[error("group order {0} exceeds the character-table cap of {1}")]
    CapExceeded(usize, usize),
}

/// Affine automorphism of the lattice Z^d: a pair (linear, translation).
/// Acting on a lattice point u at height 1, g sends u to linear*u - translation;
/// the lift to Z^d x Z sends (u, h) to (linear*u - h*translation, h).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineLatticeAutomorphism {
    pub linear: Vec<Vec<Int>>,
    pub translation: Vec<Int>,
}

impl AffineLatticeAutomorphism {
    pub fn new(linear: Vec<Vec<Int>>, translation: Vec<Int>) -> Self {
        let d = linear.len();
        assert!(linear.iter().all(|r| r.len() == d));
        assert_eq!(translation.len(), d);
        AffineLatticeAutomorphism {
            linear,
            translation,
        }
    }

    pub fn from_i64(linear: &[&[i64]], translation: &[i64]) -> Self {
        Self::new(
            linear
                .iter()
                .map(|row| row.iter().map(|&x| Int::from(x)).collect())
                .collect(),
            translation.iter().map(|&x| Int::from(x)).collect(),
        )
    }

    pub fn linear_from_i64(linear: &[&[i64]]) -> Self {
        let d = linear.len();
        Self::from_i64(linear, &vec![0i64; d])
    }

    pub fn identity(d: usize) -> Self {
        AffineLatticeAutomorphism {
            linear: (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| if i == j { Int::one() } else { Int::zero() })
                        .collect()
                })
                .collect(),
            translation: vec![Int::zero(); d],
        }
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    /// Height-1 action: u maps to linear*u - translation.
    pub fn apply(&self, u: &[Int]) -> Vec<Int> {
        self.linear
            .iter()
            .zip(&self.translation)
            .map(|(row, w)| {
                let s: Int = row.iter().zip(u).map(|(a, x)| a * x).sum();
                s - w
            })
            .collect()
    }

    pub fn apply_rat(&self, u: &[Rat]) -> Vec<Rat> {
        self.linear
            .iter()
            .zip(&self.translation)
            .map(|(row, w)| {
                let s: Rat = row
                    .iter()
                    .zip(u)
                    .map(|(a, x)| Rat::from_integer(a.clone()) * x)
                    .sum();
                s - Rat::from_integer(w.clone())
            })
            .collect()
    }

    /// Composition: self after other, with the cocycle
    /// w(gh) = w(g) + rho(g) w(h).
    pub fn compose(&self, other: &Self) -> Self {
        let d = self.dim();
        assert_eq!(d, other.dim());
        let linear: Vec<Vec<Int>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| &self.linear[i][k] * &other.linear[k][j]).sum())
                    .collect()
            })
            .collect();
        let translation: Vec<Int> = (0..d)
            .map(|i| {
                let rot: Int = (0..d)
                    .map(|k| &self.linear[i][k] * &other.translation[k])
                    .sum();
                &self.translation[i] + rot
            })
            .collect();
        AffineLatticeAutomorphism {
            linear,
            translation,
        }
    }

    pub fn det(&self) -> Int {
        let rows: Vec<Vec<Rat>> = self
            .linear
            .iter()
            .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
            .collect();
        let d = linalg::determinant(&rows);
        assert!(d.is_integer());
        d.to_integer()
    }

    /// Inverse; requires determinant +-1.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.dim();
        let det = self.det();
        if !det.abs().is_one() {
            return None;
        }
        // solve linear * X = I over the rationals; entries come out integral
        let rows: Vec<Vec<Rat>> = self
            .linear
            .iter()
            .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
            .collect();
        let mut inv = vec![vec![Int::zero(); d]; d];
        for col in 0..d {
            let e: Vec<Rat> = (0..d)
                .map(|i| {
                    if i == col {
                        Rat::one()
                    } else {
                        Rat::zero()
                    }
                })
                .collect();
            let x = linalg::solve(&rows, &e)?;
            for i in 0..d {
                assert!(x[i].is_integer());
                inv[i][col] = x[i].to_integer();
            }
        }
        // w(g^{-1}) = -rho(g)^{-1} w(g)
        let translation: Vec<Int> = (0..d)
            .map(|i| -(0..d).map(|k| &inv[i][k] * &self.translation[k]).sum::<Int>())
            .collect();
        Some(AffineLatticeAutomorphism {
            linear: inv,
            translation,
        })
    }

    /// The (d+1)x(d+1) lift acting on Z^d x Z.
    pub fn lift(&self) -> Vec<Vec<Int>> {
        let d = self.dim();
        let mut m = vec![vec![Int::zero(); d + 1]; d + 1];
        for i in 0..d {
            for j in 0..d {
                m[i][j] = self.linear[i][j].clone();
            }
            m[i][d] = -self.translation[i].clone();
        }
        m[d][d] = Int::one();
        m
    }

    /// Multiplicity of eigenvalue 1 of the linear part over the rationals.
    pub fn fixed_subspace_dimension(&self) -> usize {
        let d = self.dim();
        let rows: Vec<Vec<Rat>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mut x = Rat::from_integer(self.linear[i][j].clone());
                        if i == j {
                            x -= Rat::one();
                        }
                        x
                    })
                    .collect()
            })
            .collect();
        d - linalg::rank(&rows)
    }

    /// det(I - linear * t) as an integer polynomial of degree <= d,
    /// by exact interpolation.
    pub fn char_poly_one_minus_t(&self) -> IntPolynomial {
        let d = self.dim();
        let points: Vec<(Rat, Rat)> = (0..=d)
            .map(|x| {
                let xr = Rat::from_integer(Int::from(x as i64));
                let rows: Vec<Vec<Rat>> = (0..d)
                    .map(|i| {
                        (0..d)
                            .map(|j| {
                                let mut v = -Rat::from_integer(self.linear[i][j].clone()) * &xr;
                                if i == j {
                                    v += Rat::one();
                                }
                                v
                            })
                            .collect()
                    })
                    .collect();
                (xr, linalg::determinant(&rows))
            })
            .collect();
        let coeffs = linalg::interpolate_polynomial(&points);
        let ints: Vec<Int> = coeffs
            .iter()
            .map(|c| {
                assert!(c.is_integer());
                c.to_integer()
            })
            .collect();
        IntPolynomial::new(ints)
    }

    fn key(&self) -> Vec<Int> {
        let mut k: Vec<Int> = self.linear.iter().flatten().cloned().collect();
        k.extend(self.translation.iter().cloned());
        k
    }
}

/// Finite group generated by affine lattice automorphisms, with conjugacy
/// classes and cached structure.
#[derive(Debug, Clone)]
pub struct FiniteMatrixGroup {
    dim: usize,
    elements: Vec<AffineLatticeAutomorphism>,
    index: HashMap<Vec<Int>, usize>,
    inverse: Vec<usize>,
    element_order: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    exponent: usize,
}

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;
pub const CHARACTER_TABLE_CAP: usize = 2_000;

impl FiniteMatrixGroup {
    pub fn generate(
        generators: &[AffineLatticeAutomorphism],
        dim: usize,
        cap: usize,
    ) -> Result<Self, GroupError> {
        assert!(cap >= 1);
        for g in generators {
            assert_eq!(g.dim(), dim);
            if !g.det().abs().is_one() {
                return Err(GroupError::NonInvertibleGenerator);
            }
        }
        let id = AffineLatticeAutomorphism::identity(dim);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id.key(), 0usize);
        let mut frontier = vec![0usize];
        while let Some(i) = frontier.pop() {
            for g in generators {
                let prod = elements[i].compose(g);
                let k = prod.key();
                if !index.contains_key(&k) {
                    if elements.len() >= cap {
                        return Err(GroupError::ClosureExceeded(cap));
                    }
                    index.insert(k, elements.len());
                    elements.push(prod);
                    frontier.push(elements.len() - 1);
                }
            }
        }
        let n = elements.len();
        let inverse: Vec<usize> = (0..n)
            .map(|i| index[&elements[i].inverse().expect("group element invertible").key()])
            .collect();
        let element_order: Vec<usize> = (0..n)
            .map(|i| {
                let mut m = elements[i].clone();
                let mut ord = 1;
                while index[&m.key()] != 0 {
                    m = m.compose(&elements[i]);
                    ord += 1;
                }
                ord
            })
            .collect();
        let exponent = element_order
            .iter()
            .fold(1usize, |acc, &o| acc.lcm(&o));
        // conjugacy classes: orbits under conjugation; conjugating by the
        // generators suffices to sweep out each orbit
        let conj_by: Vec<(usize, usize)> = generators
            .iter()
            .map(|g| {
                let gi = index[&g.key()];
                (gi, inverse[gi])
            })
            .collect();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for i in 0..n {
            if class_of[i] != usize::MAX {
                continue;
            }
            let cid = classes.len();
            let mut members = Vec::new();
            let mut stack = vec![i];
            class_of[i] = cid;
            while let Some(x) = stack.pop() {
                members.push(x);
                for &(t, ti) in &conj_by {
                    let y = index[&elements[t]
                        .compose(&elements[x])
                        .compose(&elements[ti])
                        .key()];
                    if class_of[y] == usize::MAX {
                        class_of[y] = cid;
                        stack.push(y);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        Ok(FiniteMatrixGroup {
            dim,
            elements,
            index,
            inverse,
            element_order,
            classes,
            class_of,
            exponent,
        })
    }

    pub fn trivial(dim: usize) -> Self {
        Self::generate(&[], dim, 1).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn elements(&self) -> &[AffineLatticeAutomorphism] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &AffineLatticeAutomorphism {
        &self.elements[i]
    }

    pub fn element_index(&self, g: &AffineLatticeAutomorphism) -> Option<usize> {
        self.index.get(&g.key()).copied()
    }

    pub fn product_index(&self, i: usize, j: usize) -> usize {
        self.index[&self.elements[i].compose(&self.elements[j]).key()]
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn power_index(&self, i: usize, mut n: i64) -> usize {
        let o = self.element_order[i] as i64;
        n = n.rem_euclid(o);
        let mut acc = 0usize;
        for _ in 0..n {
            acc = self.product_index(acc, i);
        }
        acc
    }

    pub fn element_order(&self, i: usize) -> usize {
        self.element_order[i]
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, elem: usize) -> usize {
        self.class_of[elem]
    }

    /// Representative of a class: its least element index.
    pub fn class_rep(&self, class: usize) -> usize {
        self.classes[class][0]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }

    /// Class containing the inverses of a class.
    pub fn inverse_class(&self, class: usize) -> usize {
        self.class_of[self.inverse[self.class_rep(class)]]
    }

    /// The determinant character g -> det(rho(g)), with the reflection
    /// parity identity det(rho(g)) = (-1)^(d - dim M^g) checked per class.
    pub fn det_character(&self) -> ClassFunction {
        let values: Vec<CyclotomicValue> = (0..self.num_classes())
            .map(|c| {
                let g = &self.elements[self.class_rep(c)];
                let det = g.det();
                assert!(det.abs().is_one());
                let fix = g.fixed_subspace_dimension();
                let parity = if (self.dim - fix) % 2 == 0 {
                    Int::one()
                } else {
                    -Int::one()
                };
                assert_eq!(det, parity, "determinant parity identity failed");
                CyclotomicValue::from_bigint(det)
            })
            .collect();
        ClassFunction::new(self, values)
    }

    /// Permutation character of an action of the group on `n_points` points,
    /// given as elementwise images.
    pub fn permutation_character(&self, n_points: usize, image: impl Fn(usize, usize) -> usize) -> ClassFunction {
        let values: Vec<CyclotomicValue> = (0..self.num_classes())
            .map(|c| {
                let g = self.class_rep(c);
                let fixed = (0..n_points).filter(|&p| image(g, p) == p).count();
                CyclotomicValue::from_int(fixed as i64)
            })
            .collect();
        ClassFunction::new(self, values)
    }

    /// Number of orbits of the same action, counted directly.
    pub fn orbit_count(&self, n_points: usize, image: impl Fn(usize, usize) -> usize) -> usize {
        let mut seen = vec![false; n_points];
        let mut orbits = 0;
        for p in 0..n_points {
            if seen[p] {
                continue;
            }
            orbits += 1;
            let mut stack = vec![p];
            seen[p] = true;
            while let Some(q) = stack.pop() {
                for g in 0..self.order() {
                    let r = image(g, q);
                    if !seen[r] {
                        seen[r] = true;
                        stack.push(r);
                    }
                }
            }
        }
        orbits
    }

    /// The regular character: |G| at the identity, 0 elsewhere.
    pub fn standard_character(&self) -> ClassFunction {
        let values: Vec<CyclotomicValue> = (0..self.num_classes())
            .map(|c| {
                if self.class_rep(c) == 0 {
                    CyclotomicValue::from_int(self.order() as i64)
                } else {
                    CyclotomicValue::zero()
                }
            })
            .collect();
        ClassFunction::new(self, values)
    }

    /// Block-diagonal direct product acting on the concatenated ambient
    /// lattices. Element (g, h) embeds as diag(g, h).
    pub fn direct_product(&self, other: &FiniteMatrixGroup) -> Result<FiniteMatrixGroup, GroupError> {
        let d1 = self.dim;
        let d2 = other.dim;
        let embed = |g: &AffineLatticeAutomorphism, left: bool| -> AffineLatticeAutomorphism {
            let d = d1 + d2;
            let mut linear = vec![vec![Int::zero(); d]; d];
            let mut translation = vec![Int::zero(); d];
            for i in 0..d {
                linear[i][i] = Int::one();
            }
            let off = if left { 0 } else { d1 };
            for i in 0..g.dim() {
                for j in 0..g.dim() {
                    linear[off + i][off + j] = g.linear[i][j].clone();
                }
                translation[off + i] = g.translation[i].clone();
            }
            AffineLatticeAutomorphism {
                linear,
                translation,
            }
        };
        let mut gens = Vec::new();
        for g in &self.elements {
            gens.push(embed(g, true));
        }
        for h in &other.elements {
            gens.push(embed(h, false));
        }
        FiniteMatrixGroup::generate(&gens, d1 + d2, self.order() * other.order() + 1)
    }
}

/// Exact class function: one cyclotomic value per conjugacy class, carrying
/// the class data needed for inner products.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassFunction {
    pub group_order: usize,
    pub class_sizes: Vec<usize>,
    inverse_class: Vec<usize>,
    identity_class: usize,
    pub values: Vec<CyclotomicValue>,
}

impl ClassFunction {
    pub fn new(group: &FiniteMatrixGroup, values: Vec<CyclotomicValue>) -> Self {
        assert_eq!(values.len(), group.num_classes());
        ClassFunction {
            group_order: group.order(),
            class_sizes: group.class_sizes(),
            inverse_class: (0..group.num_classes())
                .map(|c| group.inverse_class(c))
                .collect(),
            identity_class: group.class_of(0),
            values,
        }
    }

    pub fn trivial(group: &FiniteMatrixGroup) -> Self {
        Self::new(
            group,
            (0..group.num_classes())
                .map(|_| CyclotomicValue::one())
                .collect(),
        )
    }

    pub fn from_rationals(group: &FiniteMatrixGroup, values: Vec<Rat>) -> Self {
        Self::new(
            group,
            values
                .into_iter()
                .map(CyclotomicValue::from_rational)
                .collect(),
        )
    }

    pub fn value_at_identity(&self) -> &CyclotomicValue {
        &self.values[self.identity_class]
    }

    pub fn identity_class(&self) -> usize {
        self.identity_class
    }

    /// Hermitian inner product (1/|G|) sum over g of self(g) * conj(other(g)).
    pub fn inner_product(&self, other: &Self) -> CyclotomicValue {
        assert_eq!(self.group_order, other.group_order);
        let mut acc = CyclotomicValue::zero();
        for (c, v) in self.values.iter().enumerate() {
            let term = v
                .mul(&other.values[c].conjugate())
                .scale(&Rat::from_integer(Int::from(self.class_sizes[c] as i64)));
            acc = acc.add(&term);
        }
        acc.scale(&Rat::new(Int::one(), Int::from(self.group_order as i64)))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.sub(b))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.mul(b))
    }

    fn zip(&self, other: &Self, f: impl Fn(&CyclotomicValue, &CyclotomicValue) -> CyclotomicValue) -> Self {
        assert_eq!(self.group_order, other.group_order);
        assert_eq!(self.values.len(), other.values.len());
        ClassFunction {
            group_order: self.group_order,
            class_sizes: self.class_sizes.clone(),
            inverse_class: self.inverse_class.clone(),
            identity_class: self.identity_class,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        ClassFunction {
            group_order: self.group_order,
            class_sizes: self.class_sizes.clone(),
            inverse_class: self.inverse_class.clone(),
            identity_class: self.identity_class,
            values: self.values.iter().map(|v| v.scale(r)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// All values rational integers.
    pub fn is_integer_valued(&self) -> bool {
        self.values.iter().all(|v| v.as_integer().is_some())
    }
}

/// Complete set of irreducible characters with class sizes.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub irreducibles: Vec<ClassFunction>,
    pub class_sizes: Vec<usize>,
    pub degrees: Vec<usize>,
}

impl CharacterTable {
    /// Multiplicities <f, chi_i> of the irreducibles in a class function,
    /// plus the effectiveness flag (all multiplicities nonnegative rational
    /// integers).
    pub fn decompose(&self, f: &ClassFunction) -> (Vec<CyclotomicValue>, bool) {
        let mults: Vec<CyclotomicValue> = self
            .irreducibles
            .iter()
            .map(|chi| f.inner_product(chi))
            .collect();
        let effective = mults
            .iter()
            .all(|m| m.as_integer().map(|i| !i.is_negative()).unwrap_or(false));
        (mults, effective)
    }

    pub fn verify_orthonormality(&self) -> bool {
        let k = self.irreducibles.len();
        for i in 0..k {
            for j in 0..k {
                let ip = self.irreducibles[i].inner_product(&self.irreducibles[j]);
                let expect = if i == j {
                    CyclotomicValue::one()
                } else {
                    CyclotomicValue::zero()
                };
                if ip != expect {
                    return false;
                }
            }
        }
        true
    }
}

// ---------------------------------------------------------------------------
// Dixon-Schneider character table
// ---------------------------------------------------------------------------

mod fp {
    pub fn add(a: u64, b: u64, p: u64) -> u64 {
        (a + b) % p
    }
    pub fn sub(a: u64, b: u64, p: u64) -> u64 {
        (a + p - b % p) % p
    }
    pub fn mul(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }
    pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1u64;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a, p);
            }
            a = mul(a, a, p);
            e >>= 1;
        }
        r
    }
    pub fn inv(a: u64, p: u64) -> u64 {
        pow(a, p - 2, p)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Nullspace basis of a square matrix over F_p.
fn fp_nullspace(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == n {
            break;
        }
        let Some(pr) = (r..n).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = fp::inv(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = fp::mul(*x, inv, p);
        }
        for i in 0..n {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..n {
                    a[i][j] = fp::sub(a[i][j], fp::mul(f, a[r][j], p), p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    for f in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; n];
        v[f] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = fp::sub(0, a[i][f], p);
        }
        basis.push(v);
    }
    basis
}

/// Solve B x = w over F_p where B is n x k of rank k (columns independent).
fn fp_solve_columns(b: &[Vec<u64>], w: &[u64], p: u64) -> Vec<u64> {
    let n = b.len();
    let k = b[0].len();
    let mut aug: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row = b[i].clone();
            row.push(w[i]);
            row
        })
        .collect();
    let mut x = vec![0u64; k];
    let mut r = 0;
    let mut pivot_of_col = vec![usize::MAX; k];
    for c in 0..k {
        let pr = (r..n).find(|&i| aug[i][c] != 0).expect("rank deficiency");
        aug.swap(r, pr);
        let inv = fp::inv(aug[r][c], p);
        for v in aug[r].iter_mut() {
            *v = fp::mul(*v, inv, p);
        }
        for i in 0..n {
            if i != r && aug[i][c] != 0 {
                let f = aug[i][c];
                for j in 0..=k {
                    aug[i][j] = fp::sub(aug[i][j], fp::mul(f, aug[r][j], p), p);
                }
            }
        }
        pivot_of_col[c] = r;
        r += 1;
    }
    for c in 0..k {
        x[c] = aug[pivot_of_col[c]][k];
    }
    x
}

pub fn character_table(group: &FiniteMatrixGroup) -> Result<CharacterTable, GroupError> {
    character_table_with_cap(group, CHARACTER_TABLE_CAP)
}

pub fn character_table_with_cap(
    group: &FiniteMatrixGroup,
    cap: usize,
) -> Result<CharacterTable, GroupError> {
    let n = group.order();
    if n > cap {
        return Err(GroupError::CapExceeded(n, cap));
    }
    let r = group.num_classes();
    let e = group.exponent() as u64;
    // prime p = 1 mod exponent with p > 2 sqrt(|G|), so degrees and
    // multiplicities lift uniquely from F_p
    let mut p = e + 1;
    loop {
        if is_prime(p) && (p as f64) > 2.0 * (n as f64).sqrt() {
            break;
        }
        p += e;
    }

    let reps: Vec<usize> = (0..r).map(|c| group.class_rep(c)).collect();
    let class_sizes = group.class_sizes();
    let id_class = group.class_of(0);

    // class matrices M_i with (M_i)[j][k] = #{ x in C_i : x^{-1} z_k in C_j },
    // computed lazily while splitting the common eigenvector spaces
    let class_matrix = |i: usize| -> Vec<Vec<u64>> {
        let mut m = vec![vec![0u64; r]; r];
        for &x in &group.classes()[i] {
            let xi = group.inverse_index(x);
            for (k, &zk) in reps.iter().enumerate() {
                let y = group.product_index(xi, zk);
                m[group.class_of(y)][k] += 1;
            }
        }
        for row in m.iter_mut() {
            for v in row.iter_mut() {
                *v %= p;
            }
        }
        m
    };

    // start with the full space; repeatedly split by each class matrix
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r)
        .map(|i| {
            let mut v = vec![0u64; r];
            v[i] = 1;
            v
        })
        .collect()];
    for i in 0..r {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        if i == id_class {
            continue;
        }
        let m = class_matrix(i);
        let mut next = Vec::new();
        for s in spaces {
            if s.len() == 1 {
                next.push(s);
                continue;
            }
            let dim = s.len();
            // columns of bmat are the basis vectors
            let bmat: Vec<Vec<u64>> = (0..r)
                .map(|row| (0..dim).map(|t| s[t][row]).collect())
                .collect();
            // restriction C: M b_t = sum_u C[u][t] b_u
            let mut cmat = vec![vec![0u64; dim]; dim];
            for (t, b) in s.iter().enumerate() {
                let w: Vec<u64> = (0..r)
                    .map(|row| {
                        let mut acc = 0u64;
                        for k in 0..r {
                            acc = fp::add(acc, fp::mul(m[row][k], b[k], p), p);
                        }
                        acc
                    })
                    .collect();
                let col = fp_solve_columns(&bmat, &w, p);
                for u in 0..dim {
                    cmat[u][t] = col[u];
                }
            }
            // eigen-split the restriction; the class algebra is semisimple
            // and split over F_p, so eigenspace dimensions sum to dim
            let mut found = 0;
            for lam in 0..p {
                let shifted: Vec<Vec<u64>> = (0..dim)
                    .map(|a| {
                        (0..dim)
                            .map(|b| {
                                if a == b {
                                    fp::sub(cmat[a][b], lam, p)
                                } else {
                                    cmat[a][b]
                                }
                            })
                            .collect()
                    })
                    .collect();
                let null = fp_nullspace(&shifted, p);
                if null.is_empty() {
                    continue;
                }
                found += null.len();
                // the whole eigenspace stays one subspace; later class
                // matrices split it further
                let sub: Vec<Vec<u64>> = null
                    .iter()
                    .map(|alpha| {
                        (0..r)
                            .map(|row| {
                                let mut acc = 0u64;
                                for t in 0..dim {
                                    acc = fp::add(acc, fp::mul(alpha[t], s[t][row], p), p);
                                }
                                acc
                            })
                            .collect()
                    })
                    .collect();
                next.push(sub);
                if found == dim {
                    break;
                }
            }
            assert_eq!(found, dim, "class matrix failed to split over F_p");
        }
        spaces = next;
    }
    assert!(spaces.iter().all(|s| s.len() == 1));

    // each space yields the central character omega, normalized at identity
    let mut chars_modp: Vec<Vec<u64>> = Vec::new();
    let mut degrees: Vec<u64> = Vec::new();
    let inv_class: Vec<usize> = (0..r).map(|c| group.inverse_class(c)).collect();
    for s in &spaces {
        let v = &s[0];
        assert!(v[id_class] != 0, "eigenvector vanishes at identity class");
        let norm = fp::inv(v[id_class], p);
        let omega: Vec<u64> = v.iter().map(|&x| fp::mul(x, norm, p)).collect();
        // 1/chi(1)^2 = (1/|G|) sum_k omega_k omega_{k*} / |C_k|
        let mut acc = 0u64;
        for k in 0..r {
            let term = fp::mul(
                fp::mul(omega[k], omega[inv_class[k]], p),
                fp::inv(class_sizes[k] as u64 % p, p),
                p,
            );
            acc = fp::add(acc, term, p);
        }
        let d2 = fp::mul(n as u64 % p, fp::inv(acc, p), p);
        let deg = (1..p)
            .take_while(|&d| 2 * d < p + 1)
            .find(|&d| fp::mul(d, d, p) == d2)
            .expect("degree not found in range");
        degrees.push(deg);
        let chi: Vec<u64> = (0..r)
            .map(|k| {
                fp::mul(
                    fp::mul(deg, omega[k], p),
                    fp::inv(class_sizes[k] as u64 % p, p),
                    p,
                )
            })
            .collect();
        chars_modp.push(chi);
    }

    // lift to exact cyclotomic values: chi(g_j) = sum_k m_{j,k} zeta_e^k with
    // m_{j,k} = (1/e) sum_l chi(g_j^l) theta^{-lk} mod p, and 0 <= m < p
    let theta = {
        let gen = (2..p)
            .find(|&a| {
                // primitive root test over the prime factors of p-1
                let mut ok = true;
                let mut m = p - 1;
                let mut f = 2;
                while f * f <= m {
                    if m % f == 0 {
                        if fp::pow(a, (p - 1) / f, p) == 1 {
                            ok = false;
                            break;
                        }
                        while m % f == 0 {
                            m /= f;
                        }
                    }
                    f += 1;
                }
                if ok && m > 1 && fp::pow(a, (p - 1) / m, p) == 1 {
                    ok = false;
                }
                ok
            })
            .expect("primitive root exists");
        fp::pow(gen, (p - 1) / e, p)
    };
    let power_class: Vec<Vec<usize>> = (0..r)
        .map(|j| {
            (0..e as i64)
                .map(|l| group.class_of(group.power_index(reps[j], l)))
                .collect()
        })
        .collect();
    let e_inv = fp::inv(e % p, p);
    let mut irreducibles: Vec<ClassFunction> = Vec::new();
    for chi in &chars_modp {
        let values: Vec<CyclotomicValue> = (0..r)
            .map(|j| {
                let mut acc = CyclotomicValue::zero();
                for k in 0..e as usize {
                    let mut m = 0u64;
                    for l in 0..e as usize {
                        let t = fp::mul(
                            chi[power_class[j][l]],
                            fp::inv(fp::pow(theta, (l * k) as u64, p), p),
                            p,
                        );
                        m = fp::add(m, t, p);
                    }
                    m = fp::mul(m, e_inv, p);
                    if m != 0 {
                        let term = CyclotomicValue::root_of_unity(e as usize, k)
                            .scale(&Rat::from_integer(Int::from(m)));
                        acc = acc.add(&term);
                    }
                }
                acc
            })
            .collect();
        irreducibles.push(ClassFunction::new(group, values));
    }

    // sort by degree, then by value order for reproducibility
    let mut order: Vec<usize> = (0..irreducibles.len()).collect();
    order.sort_by_key(|&i| {
        (
            degrees[i],
            irreducibles[i]
                .values
                .iter()
                .map(|v| v.render())
                .collect::<Vec<_>>(),
        )
    });
    let irreducibles: Vec<ClassFunction> = order.iter().map(|&i| irreducibles[i].clone()).collect();
    let degrees: Vec<usize> = order.iter().map(|&i| degrees[i] as usize).collect();

    let table = CharacterTable {
        irreducibles,
        class_sizes,
        degrees,
    };
    assert_eq!(table.irreducibles.len(), r);
    assert_eq!(
        table.degrees.iter().map(|d| d * d).sum::<usize>(),
        n,
        "degree squares must sum to the group order"
    );
    assert!(table.verify_orthonormality(), "character table fails orthonormality");
    Ok(table)
}
