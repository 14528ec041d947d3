//! Worked instances: named invariant polytopes with their symmetry groups,
//! closed-form character and numerator formulas for hypercubes and centrally
//! symmetric polytopes, the marked tableaux statistic, and symmetric group
//! characters for labeling irreducibles by partitions.

use num::{One, Zero};

use crate::ehrhart::eulerian_polynomial;
use crate::exact_arith::{binomial, IntPolynomial};
use crate::fixed_locus::fixed_polytope;
use crate::lattice_group::{AffineLatticeAutomorphism, ClassFunction, FiniteMatrixGroup};
use crate::linalg::{self, Int, Rat};
use crate::polytope::RationalPolytope;

/// A named invariant polytope with its group.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub polytope: RationalPolytope,
    pub group: FiniteMatrixGroup,
}

fn generate(gens: &[AffineLatticeAutomorphism], dim: usize) -> FiniteMatrixGroup {
    FiniteMatrixGroup::generate(gens, dim, crate::lattice_group::DEFAULT_CLOSURE_CAP)
        .expect("gallery group closes under the default cap")
}

/// Hexagon with vertices +-(1,0), +-(0,1), +-(1,1) under the rotation of
/// order six.
pub fn hexagon_z6() -> Instance {
    let polytope = RationalPolytope::from_integer_points(
        2,
        &[
            vec![1, 0],
            vec![1, 1],
            vec![0, 1],
            vec![-1, 0],
            vec![-1, -1],
            vec![0, -1],
        ],
    );
    let rot = AffineLatticeAutomorphism::linear_from_i64(&[&[1, -1], &[1, 0]]);
    Instance {
        name: "hexagon-z6".into(),
        polytope,
        group: generate(&[rot], 2),
    }
}

/// Unit square with the order-two reflection x -> 1 - x, which fixes the
/// segment x = 1/2 and no lattice point.
pub fn bad_square_z2() -> Instance {
    let polytope = RationalPolytope::from_integer_points(
        2,
        &[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]],
    );
    let tau = AffineLatticeAutomorphism::from_i64(&[&[-1, 0], &[0, 1]], &[-1, 0]);
    Instance {
        name: "bad-square-z2".into(),
        polytope,
        group: generate(&[tau], 2),
    }
}

/// Reflexive 3-polytope with vertices +-(0,0,1), +-(1,0,1), +-(0,1,1),
/// +-(1,1,1) under an order-two linear reflection whose fixed plane meets
/// the lattice in an index-two sublattice.
pub fn bad_reflexive_z2() -> Instance {
    let mut verts = Vec::new();
    for v in [[0i64, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1]] {
        verts.push(v.to_vec());
        verts.push(v.iter().map(|x| -x).collect());
    }
    let polytope = RationalPolytope::from_integer_points(3, &verts);
    let tau =
        AffineLatticeAutomorphism::linear_from_i64(&[&[-1, 0, 1], &[0, 1, 0], &[0, 0, 1]]);
    Instance {
        name: "bad-reflexive-z2".into(),
        polytope,
        group: generate(&[tau], 3),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypercubeGroup {
    /// Coordinate permutations.
    SymD,
    /// Signed coordinate permutations, acting up to translation.
    BD,
}

/// Unit hypercube [0,1]^d with coordinate permutations or all signed
/// permutations.
pub fn hypercube_instance(d: usize, which: HypercubeGroup) -> Instance {
    let verts: Vec<Vec<i64>> = (0..1u64 << d)
        .map(|mask| (0..d).map(|i| ((mask >> i) & 1) as i64).collect())
        .collect();
    let polytope = RationalPolytope::from_integer_points(d, &verts);
    let mut gens = sym_generators(d);
    let name = match which {
        HypercubeGroup::SymD => format!("hypercube-sym-{d}"),
        HypercubeGroup::BD => {
            // sign flip on the first coordinate, translated back into the cube
            let mut linear = identity_rows(d);
            linear[0][0] = -1;
            let mut translation = vec![0i64; d];
            translation[0] = -1;
            gens.push(affine_from_vecs(&linear, &translation));
            format!("hypercube-b-{d}")
        }
    };
    Instance {
        name,
        polytope,
        group: generate(&gens, d),
    }
}

/// Centrally symmetric polytope V(2k, d) with vertices +-e_i and, for k > 0,
/// +-(e_1 + ... + e_2k), under the central inversion.
pub fn cross_family(k: usize, d: usize) -> Instance {
    assert!(2 * k <= d);
    let mut verts: Vec<Vec<i64>> = Vec::new();
    for i in 0..d {
        let mut v = vec![0i64; d];
        v[i] = 1;
        verts.push(v.clone());
        v[i] = -1;
        verts.push(v);
    }
    if k > 0 {
        let mut v = vec![0i64; d];
        for x in v.iter_mut().take(2 * k) {
            *x = 1;
        }
        verts.push(v.iter().map(|x| -x).collect());
        verts.push(v);
    }
    let polytope = RationalPolytope::from_integer_points(d, &verts);
    let minus = affine_from_vecs(
        &identity_rows(d)
            .iter()
            .map(|row| row.iter().map(|x| -x).collect())
            .collect::<Vec<_>>(),
        &vec![0; d],
    );
    Instance {
        name: format!("cross-{}-{}", 2 * k, d),
        polytope,
        group: generate(&[minus], d),
    }
}

/// The reflexive (2n-1)-simplex: images of the standard basis of Z^2n in the
/// quotient lattice Z^2n / Z(1,...,1), with Sym_2n permuting coordinates.
/// The quotient basis is fixed once: the images of e_1, ..., e_{2n-1}.
pub fn standard_reflexive_simplex(n: usize) -> Instance {
    assert!(n >= 1);
    let big = 2 * n;
    let dim = big - 1;
    let verts: Vec<Vec<i64>> = (0..big)
        .map(|i| quotient_basis_vector(i, dim))
        .collect();
    let polytope = RationalPolytope::from_integer_points(dim, &verts);
    let mut gens = vec![quotient_permutation_matrix(&transposition(big, 0, 1), dim)];
    if big > 2 {
        gens.push(quotient_permutation_matrix(&full_cycle(big), dim));
    }
    Instance {
        name: format!("simplex-{n}"),
        polytope,
        group: generate(&gens, dim),
    }
}

/// The fixed polytope of an n-cycle acting on the reflexive (2n-1)-simplex:
/// an n-dimensional rational polytope with denominator n whose counting
/// quasi-polynomial is the polynomial C(m+n, n) + C(m, n).
pub fn pip_family(n: usize) -> RationalPolytope {
    assert!(n >= 2);
    let inst = standard_reflexive_simplex(n);
    let mut perm: Vec<usize> = (0..2 * n).collect();
    for (i, p) in perm.iter_mut().enumerate().take(n) {
        *p = (i + 1) % n;
    }
    let g = quotient_permutation_matrix(&perm, 2 * n - 1);
    let idx = inst
        .group
        .element_index(&g)
        .expect("the n-cycle lies in the symmetric group");
    fixed_polytope(&inst.polytope, &inst.group, idx)
        .expect("invariant instance")
        .polytope
}

/// The fixed polytope of the n-cycle restricted to its own affine span: a
/// full-dimensional rational polytope with trivial group, suitable for the
/// classical pipeline.
pub fn pip_instance(n: usize) -> Instance {
    let p = pip_family(n);
    let base = p
        .lattice_points(1)
        .into_iter()
        .next()
        .expect("the first dilate contains a lattice point");
    let ambient = p.ambient();
    let trivial = FiniteMatrixGroup::trivial(ambient);
    let (polytope, _) = restrict_to_affine_span(&p, &trivial, &base);
    Instance {
        name: format!("pip-{n}"),
        group: FiniteMatrixGroup::trivial(polytope.ambient()),
        polytope,
    }
}

/// Standard simplex conv{e_1, ..., e_n} with Sym_n, pushed down to its
/// affine span so that orbit counts become partition counts.
pub fn standard_simplex_orbit(n: usize) -> Instance {
    assert!(n >= 2);
    let verts: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0i64; n];
            v[i] = 1;
            v
        })
        .collect();
    let polytope = RationalPolytope::from_integer_points(n, &verts);
    let group = generate(&sym_generators(n), n);
    let base: Vec<Int> = {
        let mut b = vec![Int::zero(); n];
        b[0] = Int::one();
        b
    };
    let (polytope, group) = restrict_to_affine_span(&polytope, &group, &base);
    Instance {
        name: format!("simplex-orbit-{n}"),
        polytope,
        group,
    }
}

/// Re-express a lower-dimensional invariant polytope inside its own affine
/// span: coordinates relative to a lattice point `base` of the span and the
/// direction lattice basis, with the group action pushed through.
pub fn restrict_to_affine_span(
    p: &RationalPolytope,
    group: &FiniteMatrixGroup,
    base: &[Int],
) -> (RationalPolytope, FiniteMatrixGroup) {
    let basis = p.direction_basis();
    let k = basis.len();
    let ambient = p.ambient();
    // columns of the basis as a rational system for coordinate solves
    let rows: Vec<Vec<Rat>> = (0..ambient)
        .map(|i| basis.iter().map(|b| Rat::from_integer(b[i].clone())).collect())
        .collect();
    let coords_of = |v: &[Rat]| -> Vec<Rat> {
        let target: Vec<Rat> = v
            .iter()
            .zip(base)
            .map(|(x, b)| x - Rat::from_integer(b.clone()))
            .collect();
        linalg::solve(&rows, &target).expect("the point lies in the affine span")
    };
    let new_verts: Vec<Vec<Rat>> = p.vertices().iter().map(|v| coords_of(v)).collect();
    let polytope = RationalPolytope::from_points(k, &new_verts);
    let base_rat: Vec<Rat> = base.iter().map(|b| Rat::from_integer(b.clone())).collect();
    let gens: Vec<AffineLatticeAutomorphism> = group
        .elements()
        .iter()
        .map(|g| {
            let mut linear = vec![vec![Int::zero(); k]; k];
            for (j, b) in basis.iter().enumerate() {
                let img: Vec<Rat> = (0..ambient)
                    .map(|i| {
                        let shifted: Rat = (0..ambient)
                            .map(|l| {
                                Rat::from_integer(g.linear[i][l].clone())
                                    * Rat::from_integer(b[l].clone())
                            })
                            .sum();
                        shifted + Rat::from_integer(base[i].clone())
                    })
                    .collect();
                let col = coords_of(&img);
                for (i, c) in col.iter().enumerate() {
                    assert!(c.is_integer(), "the action preserves the direction lattice");
                    linear[i][j] = c.to_integer();
                }
            }
            let img_base = g.apply_rat(&base_rat);
            let col = coords_of(&img_base);
            let translation: Vec<Int> = col
                .iter()
                .map(|c| {
                    assert!(c.is_integer(), "lattice points of the span map to lattice points");
                    -c.to_integer()
                })
                .collect();
            AffineLatticeAutomorphism::new(linear, translation)
        })
        .collect();
    let group = FiniteMatrixGroup::generate(&gens, k, group.order() + 1)
        .expect("the restricted group is a quotient of the original");
    (polytope, group)
}

/// Closed form for the hypercube series value at a permutation of cycle type
/// mu: the Eulerian polynomial of the cycle count times one factor
/// 1 + t + ... + t^(mu_i - 1) per cycle.
pub fn hypercube_char_formula(d: usize, mu: &[usize]) -> IntPolynomial {
    assert_eq!(mu.iter().sum::<usize>(), d);
    let mut out = eulerian_polynomial(mu.len());
    for &part in mu {
        out = out.mul(&IntPolynomial::all_ones(part));
    }
    out
}

/// Index generating polynomial of marked tableaux of a given shape: weakly
/// increasing rows, strictly increasing columns, entries 0..=d, positive
/// values forming 1..k, each marked value j contributing t^f(j) for
/// 1 <= f(j) <= m_j - 1.
pub fn marked_tableaux_polynomial(shape: &[usize]) -> IntPolynomial {
    assert!(!shape.is_empty());
    for w in shape.windows(2) {
        assert!(w[0] >= w[1], "shape is a partition");
    }
    let d: usize = shape.iter().sum();
    let mut total = IntPolynomial::zero();
    let mut entries: Vec<Vec<usize>> = shape.iter().map(|&r| vec![0; r]).collect();
    fill_tableau(shape, d, &mut entries, 0, 0, &mut total);
    total
}

fn fill_tableau(
    shape: &[usize],
    d: usize,
    entries: &mut Vec<Vec<usize>>,
    row: usize,
    col: usize,
    total: &mut IntPolynomial,
) {
    if row == shape.len() {
        if let Some(p) = marking_polynomial(entries, d) {
            *total = total.add(&p);
        }
        return;
    }
    let (next_row, next_col) = if col + 1 < shape[row] {
        (row, col + 1)
    } else {
        (row + 1, 0)
    };
    let lo = {
        let left = if col > 0 { entries[row][col - 1] } else { 0 };
        let above = if row > 0 && col < shape[row - 1] {
            entries[row - 1][col] + 1
        } else {
            0
        };
        left.max(above)
    };
    for v in lo..=d {
        entries[row][col] = v;
        fill_tableau(shape, d, entries, next_row, next_col, total);
    }
}

/// The marking factor of one tableau: None when inadmissible, the product of
/// t + ... + t^(m_j - 1) over the positive values otherwise (an empty
/// product when only zeros appear).
fn marking_polynomial(entries: &[Vec<usize>], d: usize) -> Option<IntPolynomial> {
    let mut counts = vec![0usize; d + 1];
    for row in entries {
        for &v in row {
            counts[v] += 1;
        }
    }
    let k = (1..=d).take_while(|&j| counts[j] > 0).count();
    if (k + 1..=d).any(|j| counts[j] > 0) {
        return None;
    }
    let mut out = IntPolynomial::one();
    for &m in counts.iter().take(k + 1).skip(1) {
        if m < 2 {
            return None;
        }
        // t + t^2 + ... + t^(m-1)
        let factor = IntPolynomial::all_ones(m - 1).mul(&IntPolynomial::monomial(Int::one(), 1));
        out = out.mul(&factor);
    }
    Some(out)
}

/// All partitions of d in decreasing lexicographic order.
pub fn partitions(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    rec(d, d, &mut cur, &mut out);
    out
}

/// Irreducible character of the symmetric group, by border strip removal on
/// beta numbers: chi^lambda evaluated at cycle type mu.
pub fn symmetric_group_character(lambda: &[usize], mu: &[usize]) -> Int {
    assert_eq!(
        lambda.iter().sum::<usize>(),
        mu.iter().sum::<usize>(),
        "character arguments partition the same integer"
    );
    let len = lambda.len();
    let beta: Vec<i64> = lambda
        .iter()
        .enumerate()
        .map(|(i, &l)| l as i64 + (len - 1 - i) as i64)
        .collect();
    strip_recursion(&beta, mu)
}

fn strip_recursion(beta: &[i64], mu: &[usize]) -> Int {
    if mu.is_empty() {
        return Int::one();
    }
    let k = mu[0] as i64;
    let rest = &mu[1..];
    let mut acc = Int::zero();
    for (i, &b) in beta.iter().enumerate() {
        let target = b - k;
        if target < 0 || beta.contains(&target) {
            continue;
        }
        let crossings = beta.iter().filter(|&&c| c > target && c < b).count();
        let mut next: Vec<i64> = beta.to_vec();
        next[i] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let term = strip_recursion(&next, rest);
        if crossings % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Cycle type of a permutation matrix; None when the linear part is not a
/// permutation of coordinates or a translation is present.
pub fn permutation_cycle_type(g: &AffineLatticeAutomorphism) -> Option<Vec<usize>> {
    let d = g.dim();
    if g.translation.iter().any(|w| !w.is_zero()) {
        return None;
    }
    let mut perm = vec![usize::MAX; d];
    for j in 0..d {
        let mut hit = None;
        for i in 0..d {
            let e = &g.linear[i][j];
            if e.is_one() {
                if hit.is_some() {
                    return None;
                }
                hit = Some(i);
            } else if !e.is_zero() {
                return None;
            }
        }
        perm[j] = hit?;
    }
    let mut seen = vec![false; d];
    let mut cycles = Vec::new();
    for start in 0..d {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            len += 1;
            i = perm[i];
        }
        cycles.push(len);
    }
    cycles.sort_unstable_by(|a, b| b.cmp(a));
    Some(cycles)
}

/// chi^lambda as a class function of a group of permutation matrices.
pub fn symmetric_irreducible(group: &FiniteMatrixGroup, lambda: &[usize]) -> ClassFunction {
    let values: Vec<Rat> = (0..group.num_classes())
        .map(|c| {
            let g = group.element(group.class_rep(c));
            let mu = permutation_cycle_type(g).expect("a group of permutation matrices");
            Rat::from_integer(symmetric_group_character(lambda, &mu))
        })
        .collect();
    ClassFunction::from_rationals(group, values)
}

/// Partial row sums of Pascal's triangle: T(d, i) = sum_{j<=i} C(d+1, j) for
/// i <= d/2, extended symmetrically; cross-checked against the face-count
/// generating polynomial sum_j C(d+1, j) 2^j t^j (1-t)^(d-j).
pub fn pascal_partial_sums(d: usize, i: usize) -> Int {
    assert!(i <= d);
    let ii = i.min(d - i);
    let closed: Int = (0..=ii).map(|j| binomial(d as i64 + 1, j as i64)).sum();
    if 2 * ii <= d {
        let mut gen = IntPolynomial::zero();
        for j in 0..=d {
            let term = IntPolynomial::monomial(binomial(d as i64 + 1, j as i64), j)
                .scale(&Int::from(2i64).pow(j as u32))
                .mul(&IntPolynomial::one_minus_t_pow(1).pow(d - j));
            gen = gen.add(&term);
        }
        assert_eq!(gen.coeff(ii), closed, "closed form against the face-count polynomial");
    }
    closed
}

/// h* of the centrally symmetric family: sum_i C(2i, i) t^i (1 + t)^(d - 2i).
pub fn cross_family_h_star(k: usize, d: usize) -> IntPolynomial {
    assert!(2 * k <= d);
    let mut out = IntPolynomial::zero();
    for i in 0..=k {
        let term = IntPolynomial::monomial(binomial(2 * i as i64, i as i64), i)
            .mul(&IntPolynomial::from_i64(&[1, 1]).pow(d - 2 * i));
        out = out.add(&term);
    }
    out
}

/// Label the irreducibles of a group of permutation matrices by partitions,
/// matching each table row against the border strip characters. None when
/// some class representative is not a permutation matrix or a row has no
/// partition match.
pub fn partition_labels(
    group: &FiniteMatrixGroup,
    table: &crate::lattice_group::CharacterTable,
) -> Option<Vec<String>> {
    let d = group.dim();
    for c in 0..group.num_classes() {
        permutation_cycle_type(group.element(group.class_rep(c)))?;
    }
    let candidates: Vec<(Vec<usize>, ClassFunction)> = partitions(d)
        .into_iter()
        .map(|l| {
            let f = symmetric_irreducible(group, &l);
            (l, f)
        })
        .collect();
    let mut labels = Vec::with_capacity(table.irreducibles.len());
    for row in &table.irreducibles {
        let (shape, _) = candidates
            .iter()
            .find(|(_, f)| row.sub(f).is_zero())?;
        let parts: Vec<String> = shape.iter().map(|p| p.to_string()).collect();
        labels.push(format!("({})", parts.join(",")));
    }
    Some(labels)
}

/// Look up a gallery instance by its name, including the parametrized
/// families.
pub fn instance_by_name(name: &str) -> Option<Instance> {
    match name {
        "hexagon-z6" => return Some(hexagon_z6()),
        "bad-square-z2" => return Some(bad_square_z2()),
        "bad-reflexive-z2" => return Some(bad_reflexive_z2()),
        _ => {}
    }
    if let Some(d) = name.strip_prefix("hypercube-sym-").and_then(|s| s.parse().ok()) {
        return Some(hypercube_instance(d, HypercubeGroup::SymD));
    }
    if let Some(d) = name.strip_prefix("hypercube-b-").and_then(|s| s.parse().ok()) {
        return Some(hypercube_instance(d, HypercubeGroup::BD));
    }
    if let Some(rest) = name.strip_prefix("cross-") {
        let parts: Vec<usize> = rest.split('-').map(|s| s.parse().ok()).collect::<Option<_>>()?;
        if let [two_k, d] = parts[..] {
            if two_k % 2 == 0 && two_k <= d {
                return Some(cross_family(two_k / 2, d));
            }
        }
        return None;
    }
    if let Some(n) = name.strip_prefix("simplex-orbit-").and_then(|s| s.parse().ok()) {
        return Some(standard_simplex_orbit(n));
    }
    if let Some(n) = name.strip_prefix("simplex-").and_then(|s| s.parse().ok()) {
        return Some(standard_reflexive_simplex(n));
    }
    if let Some(n) = name.strip_prefix("pip-").and_then(|s| s.parse().ok()) {
        return Some(pip_instance(n));
    }
    None
}

/// The instances exercised by the default property suite.
pub fn all_instances() -> Vec<Instance> {
    vec![
        hexagon_z6(),
        bad_square_z2(),
        bad_reflexive_z2(),
        hypercube_instance(2, HypercubeGroup::SymD),
        hypercube_instance(3, HypercubeGroup::SymD),
        hypercube_instance(2, HypercubeGroup::BD),
        cross_family(0, 2),
        cross_family(1, 2),
        cross_family(0, 3),
        cross_family(1, 3),
        standard_reflexive_simplex(2),
        standard_simplex_orbit(3),
    ]
}

fn identity_rows(d: usize) -> Vec<Vec<i64>> {
    (0..d)
        .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn affine_from_vecs(linear: &[Vec<i64>], translation: &[i64]) -> AffineLatticeAutomorphism {
    AffineLatticeAutomorphism::new(
        linear
            .iter()
            .map(|row| row.iter().map(|&x| Int::from(x)).collect())
            .collect(),
        translation.iter().map(|&x| Int::from(x)).collect(),
    )
}

fn transposition(d: usize, a: usize, b: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..d).collect();
    p.swap(a, b);
    p
}

fn full_cycle(d: usize) -> Vec<usize> {
    (0..d).map(|i| (i + 1) % d).collect()
}

fn permutation_matrix(perm: &[usize]) -> AffineLatticeAutomorphism {
    let d = perm.len();
    let mut linear = vec![vec![0i64; d]; d];
    for (j, &i) in perm.iter().enumerate() {
        linear[i][j] = 1;
    }
    affine_from_vecs(&linear, &vec![0; d])
}

fn sym_generators(d: usize) -> Vec<AffineLatticeAutomorphism> {
    let mut gens = vec![permutation_matrix(&transposition(d, 0, 1))];
    if d > 2 {
        gens.push(permutation_matrix(&full_cycle(d)));
    }
    gens
}

/// Image of the standard basis vector of index i in the fixed basis of the
/// quotient lattice of rank `dim`: a basis vector for i < dim, all minus
/// ones for the last index.
fn quotient_basis_vector(i: usize, dim: usize) -> Vec<i64> {
    if i < dim {
        let mut v = vec![0i64; dim];
        v[i] = 1;
        v
    } else {
        vec![-1; dim]
    }
}

/// A coordinate permutation of the big lattice, pushed to the fixed basis of
/// the quotient.
fn quotient_permutation_matrix(perm: &[usize], dim: usize) -> AffineLatticeAutomorphism {
    let mut linear = vec![vec![0i64; dim]; dim];
    for j in 0..dim {
        let col = quotient_basis_vector(perm[j], dim);
        for i in 0..dim {
            linear[i][j] = col[i];
        }
    }
    affine_from_vecs(&linear, &vec![0; dim])
}
