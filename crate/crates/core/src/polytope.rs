//! Exact rational polytopes in vertex description. Lattice-point enumeration
//! works inside the affine span: integer solutions of the span equations are
//! parametrized by a basis of the direction lattice and scanned over a
//! bounding box, so lower-dimensional and non-lattice-spanned polytopes are
//! handled uniformly.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num::{Integer, One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{self, Int, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("operation requires a full-dimensional polytope")]
    NotFullDimensional,
    #[error("operation requires a lattice polytope")]
    NotLattice,
    #[error("ambient dimension mismatch")]
    DimensionMismatch,
}

/// Polytope with exact rational vertices. All cached descriptions are
/// computed on construction.
#[derive(Debug, Clone)]
pub struct RationalPolytope {
    ambient: usize,
    vertices: Vec<Vec<Rat>>,
    dim: usize,
    /// Base vertex of the affine span.
    v0: Vec<Rat>,
    /// Primitive integer functionals a with a.x constant on P; the pair is
    /// (a, a.v0).
    equations: Vec<(Vec<Int>, Rat)>,
    /// Basis of the direction lattice: all integer vectors in the linear
    /// span of P - v0.
    dir_basis: Vec<Vec<Int>>,
    /// Vertices in local coordinates y with v = v0 + sum y_i b_i.
    local_vertices: Vec<Vec<Rat>>,
    /// Facets in local coordinates: a.y <= b with primitive integer a.
    local_facets: Vec<(Vec<Int>, Rat)>,
}

impl RationalPolytope {
    pub fn from_points(ambient: usize, points: &[Vec<Rat>]) -> Self {
        assert!(!points.is_empty(), "polytope needs at least one point");
        for p in points {
            assert_eq!(p.len(), ambient);
        }
        // deduplicate, then prune non-extreme points
        let mut uniq: Vec<Vec<Rat>> = Vec::new();
        for p in points {
            if !uniq.contains(p) {
                uniq.push(p.clone());
            }
        }
        let mut vertices: Vec<Vec<Rat>> = Vec::new();
        for (i, p) in uniq.iter().enumerate() {
            let others: Vec<Vec<Rat>> = uniq
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| q.clone())
                .collect();
            if others.is_empty() || !linalg::in_convex_hull(&others, p) {
                vertices.push(p.clone());
            }
        }
        vertices.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let v0 = vertices[0].clone();
        let dirs: Vec<Vec<Rat>> = vertices
            .iter()
            .skip(1)
            .map(|v| v.iter().zip(&v0).map(|(a, b)| a - b).collect())
            .collect();
        let dim = linalg::rank(&dirs);

        // functionals vanishing on the directions, scaled primitive
        let functionals: Vec<Vec<Rat>> = if dirs.is_empty() {
            (0..ambient)
                .map(|i| {
                    (0..ambient)
                        .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                        .collect()
                })
                .collect()
        } else {
            linalg::nullspace(&dirs)
        };
        let equations: Vec<(Vec<Int>, Rat)> = functionals
            .into_iter()
            .map(|f| {
                let a = primitive_integer(&f);
                let c = dot_int_rat(&a, &v0);
                (a, c)
            })
            .collect();
        assert_eq!(equations.len(), ambient - dim);

        // direction lattice: integer kernel of the equation matrix
        let eq_rows: Vec<Vec<Int>> = equations.iter().map(|(a, _)| a.clone()).collect();
        let dir_basis = if eq_rows.is_empty() {
            identity_cols(ambient)
        } else {
            linalg::integer_kernel(&eq_rows)
        };
        assert_eq!(dir_basis.len(), dim);

        let local_vertices: Vec<Vec<Rat>> = vertices
            .iter()
            .map(|v| {
                let rhs: Vec<Rat> = v.iter().zip(&v0).map(|(a, b)| a - b).collect();
                solve_in_basis(&dir_basis, &rhs).expect("vertex lies in the affine span")
            })
            .collect();

        let local_facets = brute_force_facets(&local_vertices, dim);

        RationalPolytope {
            ambient,
            vertices,
            dim,
            v0,
            equations,
            dir_basis,
            local_vertices,
            local_facets,
        }
    }

    pub fn from_integer_points(ambient: usize, points: &[Vec<i64>]) -> Self {
        let pts: Vec<Vec<Rat>> = points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|&x| Rat::from_integer(Int::from(x)))
                    .collect()
            })
            .collect();
        Self::from_points(ambient, &pts)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    pub fn base_vertex(&self) -> &[Rat] {
        &self.v0
    }

    pub fn direction_basis(&self) -> &[Vec<Int>] {
        &self.dir_basis
    }

    /// Span equations a.x = c with primitive integer a.
    pub fn span_equations(&self) -> &[(Vec<Int>, Rat)] {
        &self.equations
    }

    /// Facet inequalities pulled back to the ambient space: alpha.x <= beta
    /// with integer alpha, valid on P and tight on a facet; meaningful
    /// together with the span equations.
    pub fn facet_inequalities(&self) -> Vec<(Vec<Int>, Rat)> {
        self.local_facets
            .iter()
            .map(|(a, b)| {
                // find alpha with alpha . b_j = a_j for each basis vector
                let rows: Vec<Vec<Rat>> = self
                    .dir_basis
                    .iter()
                    .map(|bv| bv.iter().map(|x| Rat::from_integer(x.clone())).collect())
                    .collect();
                let rhs: Vec<Rat> = a.iter().map(|x| Rat::from_integer(x.clone())).collect();
                let alpha = linalg::solve(&rows, &rhs).expect("functional extends");
                let alpha = primitive_integer(&alpha);
                // rescale the bound consistently: alpha.(v0 + sum y b) =
                // alpha.v0 + s * a.y for the primitive scale s
                let s = scale_factor(&alpha, &self.dir_basis, a);
                let beta = dot_int_rat(&alpha, &self.v0) + b * s;
                (alpha, beta)
            })
            .collect()
    }

    pub fn num_facets(&self) -> usize {
        self.local_facets.len()
    }

    /// Local-coordinate facets a.y <= b relative to (base vertex, direction
    /// basis).
    pub fn local_facets(&self) -> &[(Vec<Int>, Rat)] {
        &self.local_facets
    }

    pub fn is_lattice(&self) -> bool {
        self.vertices
            .iter()
            .all(|v| v.iter().all(|x| x.is_integer()))
    }

    /// Least m >= 1 with mP a lattice polytope.
    pub fn denominator(&self) -> usize {
        let mut l = Int::one();
        for v in &self.vertices {
            for x in v {
                l = l.lcm(x.denom());
            }
        }
        use num::ToPrimitive;
        l.to_usize().expect("denominator fits in usize")
    }

    /// Least m >= 1 such that the affine span of mP contains a lattice point.
    pub fn index(&self) -> usize {
        if self.equations.is_empty() {
            return 1;
        }
        let rows: Vec<Vec<Int>> = self.equations.iter().map(|(a, _)| a.clone()).collect();
        let snf = linalg::smith_normal_form(&rows);
        let c: Vec<Rat> = self.equations.iter().map(|(_, c)| c.clone()).collect();
        let uc: Vec<Rat> = snf
            .u
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&c)
                    .map(|(x, y)| Rat::from_integer(x.clone()) * y)
                    .sum()
            })
            .collect();
        let mut m = Int::one();
        for (i, val) in uc.iter().enumerate() {
            if i < snf.rank {
                let q = val / Rat::from_integer(snf.s[i][i].clone());
                m = m.lcm(q.denom());
            } else {
                assert!(val.is_zero(), "affine span never meets the lattice");
            }
        }
        use num::ToPrimitive;
        m.to_usize().expect("index fits in usize")
    }

    /// Membership test for a rational point.
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.contains_inner(x, false)
    }

    /// Relative-interior membership.
    pub fn contains_interior(&self, x: &[Rat]) -> bool {
        self.contains_inner(x, true)
    }

    fn contains_inner(&self, x: &[Rat], strict: bool) -> bool {
        assert_eq!(x.len(), self.ambient);
        for (a, c) in &self.equations {
            if &dot_int_rat(a, x) != c {
                return false;
            }
        }
        let rhs: Vec<Rat> = x.iter().zip(&self.v0).map(|(a, b)| a - b).collect();
        let Some(y) = solve_in_basis(&self.dir_basis, &rhs) else {
            return false;
        };
        self.local_facets.iter().all(|(a, b)| {
            let v = dot_int_rat_local(a, &y);
            if strict {
                v < *b
            } else {
                v <= *b
            }
        })
    }

    /// Lattice points of the m-th dilate; m = 0 yields the origin only, so
    /// the counting function starts at 1.
    pub fn lattice_points(&self, m: usize) -> Vec<Vec<Int>> {
        self.dilate_points(m, false)
    }

    /// Relative-interior lattice points of the m-th dilate.
    pub fn interior_lattice_points(&self, m: usize) -> Vec<Vec<Int>> {
        assert!(m >= 1);
        self.dilate_points(m, true)
    }

    fn dilate_points(&self, m: usize, strict: bool) -> Vec<Vec<Int>> {
        if m == 0 {
            return vec![vec![Int::zero(); self.ambient]];
        }
        let mi = Int::from(m as i64);
        let mr = Rat::from_integer(mi.clone());
        // integer solutions of the span equations of mP
        let (u0, consistent) = if self.equations.is_empty() {
            (vec![Int::zero(); self.ambient], true)
        } else {
            let rows: Vec<Vec<Int>> = self.equations.iter().map(|(a, _)| a.clone()).collect();
            let mut b = Vec::new();
            let mut ok = true;
            for (_, c) in &self.equations {
                let v = c * &mr;
                if v.is_integer() {
                    b.push(v.to_integer());
                } else {
                    ok = false;
                    break;
                }
            }
            if !ok {
                (Vec::new(), false)
            } else {
                match linalg::solve_integer(&rows, &b) {
                    Some(u) => (u, true),
                    None => (Vec::new(), false),
                }
            }
        };
        if !consistent {
            return Vec::new();
        }
        if self.dim == 0 {
            // single point m*v0 when integral, already covered by u0
            return vec![u0];
        }
        // z-coordinates: u = u0 + B z; vertex images give the bounding box
        let zs: Vec<Vec<Rat>> = self
            .vertices
            .iter()
            .map(|v| {
                let rhs: Vec<Rat> = v
                    .iter()
                    .zip(&u0)
                    .map(|(x, u)| x * &mr - Rat::from_integer(u.clone()))
                    .collect();
                solve_in_basis(&self.dir_basis, &rhs).expect("vertex in span")
            })
            .collect();
        let lo: Vec<Int> = (0..self.dim)
            .map(|i| zs.iter().map(|z| z[i].ceil().to_integer()).min().unwrap())
            .collect();
        let hi: Vec<Int> = (0..self.dim)
            .map(|i| zs.iter().map(|z| z[i].floor().to_integer()).max().unwrap())
            .collect();
        if (0..self.dim).any(|i| lo[i] > hi[i]) {
            return Vec::new();
        }
        // facet tests in z-coordinates: a.(z + c_m) <= m b, with
        // c_m solving B c = u0 - m v0
        let rhs: Vec<Rat> = u0
            .iter()
            .zip(&self.v0)
            .map(|(u, v)| Rat::from_integer(u.clone()) - v * &mr)
            .collect();
        let cm = solve_in_basis(&self.dir_basis, &rhs).expect("u0 in span");
        let tests: Vec<(Vec<Int>, Rat)> = self
            .local_facets
            .iter()
            .map(|(a, b)| {
                let shift = dot_int_rat_local(a, &cm);
                (a.clone(), b * &mr - shift)
            })
            .collect();
        let mut out = Vec::new();
        let mut z: Vec<Int> = lo.clone();
        'scan: loop {
            let inside = tests.iter().all(|(a, bound)| {
                let v: Int = a.iter().zip(&z).map(|(x, y)| x * y).sum();
                let v = Rat::from_integer(v);
                if strict {
                    v < *bound
                } else {
                    v <= *bound
                }
            });
            if inside {
                let u: Vec<Int> = (0..self.ambient)
                    .map(|i| {
                        let add: Int = self
                            .dir_basis
                            .iter()
                            .zip(&z)
                            .map(|(bv, zc)| &bv[i] * zc)
                            .sum();
                        &u0[i] + add
                    })
                    .collect();
                out.push(u);
            }
            // advance odometer
            for i in 0..self.dim {
                z[i] += 1;
                if z[i] <= hi[i] {
                    continue 'scan;
                }
                z[i] = lo[i].clone();
            }
            break;
        }
        out.sort();
        out
    }

    pub fn count_lattice_points(&self, m: usize) -> usize {
        self.lattice_points(m).len()
    }

    pub fn count_interior_lattice_points(&self, m: usize) -> usize {
        self.interior_lattice_points(m).len()
    }

    /// Volume inside the affine span, normalized so a fundamental cell of the
    /// direction lattice has volume 1.
    pub fn normalized_volume(&self) -> Rat {
        normalized_volume_local(&self.local_vertices, &self.local_facets, self.dim)
    }

    /// Reflexivity of a full-dimensional lattice polytope: the origin is the
    /// unique interior lattice point and every facet has the form a.x <= 1
    /// with primitive a.
    pub fn is_reflexive(&self) -> Result<bool, PolytopeError> {
        if self.dim != self.ambient {
            return Err(PolytopeError::NotFullDimensional);
        }
        if !self.is_lattice() {
            return Err(PolytopeError::NotLattice);
        }
        let one = Rat::one();
        Ok(self.facet_inequalities().iter().all(|(_, b)| *b == one)
            && self.contains_interior(&vec![Rat::zero(); self.ambient]))
    }

    /// Whether some lattice translate of P is reflexive; returns the
    /// translating interior point when so.
    pub fn translate_of_reflexive(&self) -> Result<Option<Vec<Int>>, PolytopeError> {
        if self.dim != self.ambient {
            return Err(PolytopeError::NotFullDimensional);
        }
        if !self.is_lattice() {
            return Err(PolytopeError::NotLattice);
        }
        let interior = self.interior_lattice_points(1);
        if interior.len() != 1 {
            return Ok(None);
        }
        let w = interior[0].clone();
        let shifted = self.translate_int_neg(&w);
        Ok(if shifted.is_reflexive()? {
            Some(w)
        } else {
            None
        })
    }

    fn translate_int_neg(&self, w: &[Int]) -> RationalPolytope {
        let pts: Vec<Vec<Rat>> = self
            .vertices
            .iter()
            .map(|v| {
                v.iter()
                    .zip(w)
                    .map(|(x, t)| x - Rat::from_integer(t.clone()))
                    .collect()
            })
            .collect();
        RationalPolytope::from_points(self.ambient, &pts)
    }

    pub fn translate(&self, w: &[Rat]) -> RationalPolytope {
        let pts: Vec<Vec<Rat>> = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(w).map(|(x, t)| x + t).collect())
            .collect();
        RationalPolytope::from_points(self.ambient, &pts)
    }

    pub fn dilate(&self, m: usize) -> RationalPolytope {
        let mr = Rat::from_integer(Int::from(m as i64));
        if m == 0 {
            return RationalPolytope::from_points(
                self.ambient,
                &[vec![Rat::zero(); self.ambient]],
            );
        }
        let pts: Vec<Vec<Rat>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x * &mr).collect())
            .collect();
        RationalPolytope::from_points(self.ambient, &pts)
    }

    pub fn product(&self, other: &RationalPolytope) -> RationalPolytope {
        let pts: Vec<Vec<Rat>> = self
            .vertices
            .iter()
            .cartesian_product(other.vertices.iter())
            .map(|(a, b)| a.iter().chain(b.iter()).cloned().collect())
            .collect();
        RationalPolytope::from_points(self.ambient + other.ambient, &pts)
    }

    /// conv(P x 0, 0 x Q); both polytopes must contain the origin.
    pub fn free_sum(&self, other: &RationalPolytope) -> RationalPolytope {
        let zs = vec![Rat::zero(); self.ambient];
        let zo = vec![Rat::zero(); other.ambient];
        assert!(self.contains(&zs), "free sum needs the origin in P");
        assert!(other.contains(&zo), "free sum needs the origin in Q");
        let mut pts: Vec<Vec<Rat>> = self
            .vertices
            .iter()
            .map(|a| a.iter().chain(zo.iter()).cloned().collect())
            .collect();
        pts.extend(
            other
                .vertices
                .iter()
                .map(|b| zs.iter().chain(b.iter()).cloned().collect::<Vec<Rat>>()),
        );
        RationalPolytope::from_points(self.ambient + other.ambient, &pts)
    }

    /// Convex hull of P placed at height 1 with the origin.
    pub fn pyramid(&self) -> RationalPolytope {
        let mut pts: Vec<Vec<Rat>> = self
            .vertices
            .iter()
            .map(|v| {
                let mut p = v.clone();
                p.push(Rat::one());
                p
            })
            .collect();
        pts.push(vec![Rat::zero(); self.ambient + 1]);
        RationalPolytope::from_points(self.ambient + 1, &pts)
    }

    /// Faces as vertex-index sets ordered by inclusion.
    pub fn face_poset(&self) -> FacePoset {
        let nv = self.vertices.len();
        let all: BTreeSet<usize> = (0..nv).collect();
        let facet_sets: Vec<BTreeSet<usize>> = self
            .local_facets
            .iter()
            .map(|(a, b)| {
                (0..nv)
                    .filter(|&i| dot_int_rat_local(a, &self.local_vertices[i]) == *b)
                    .collect()
            })
            .collect();
        let mut faces: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        faces.insert(all.clone());
        let mut frontier = vec![all];
        while let Some(f) = frontier.pop() {
            for fs in &facet_sets {
                let inter: BTreeSet<usize> = f.intersection(fs).cloned().collect();
                if !faces.contains(&inter) {
                    faces.insert(inter.clone());
                    frontier.push(inter);
                }
            }
        }
        let mut list: Vec<(Vec<usize>, i64)> = faces
            .into_iter()
            .map(|f| {
                let idx: Vec<usize> = f.into_iter().collect();
                let d = if idx.is_empty() {
                    -1
                } else {
                    let dirs: Vec<Vec<Rat>> = idx
                        .iter()
                        .skip(1)
                        .map(|&i| {
                            self.vertices[i]
                                .iter()
                                .zip(&self.vertices[idx[0]])
                                .map(|(a, b)| a - b)
                                .collect()
                        })
                        .collect();
                    linalg::rank(&dirs) as i64
                };
                (idx, d)
            })
            .collect();
        list.sort_by_key(|(f, d)| (*d, f.clone()));
        FacePoset { faces: list }
    }
}

/// Faces of a polytope as vertex-index sets with their dimensions; sorted by
/// dimension (the empty face has dimension -1).
#[derive(Debug, Clone)]
pub struct FacePoset {
    pub faces: Vec<(Vec<usize>, i64)>,
}

impl FacePoset {
    pub fn of_dim(&self, d: i64) -> impl Iterator<Item = &Vec<usize>> {
        self.faces
            .iter()
            .filter(move |(_, fd)| *fd == d)
            .map(|(f, _)| f)
    }
}

fn identity_cols(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect()
}

/// Scale a rational vector to a primitive integer vector (same direction).
fn primitive_integer(v: &[Rat]) -> Vec<Int> {
    let mut l = Int::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<Int> = v
        .iter()
        .map(|x| (x * Rat::from_integer(l.clone())).to_integer())
        .collect();
    let mut g = Int::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return ints;
    }
    ints.iter().map(|x| x / &g).collect()
}

fn dot_int_rat(a: &[Int], x: &[Rat]) -> Rat {
    a.iter()
        .zip(x)
        .map(|(c, v)| Rat::from_integer(c.clone()) * v)
        .sum()
}

fn dot_int_rat_local(a: &[Int], y: &[Rat]) -> Rat {
    dot_int_rat(a, y)
}

/// Solve sum_i y_i basis_i = rhs for rational y; None when rhs is outside
/// the span.
fn solve_in_basis(basis: &[Vec<Int>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    if basis.is_empty() {
        return rhs.iter().all(|x| x.is_zero()).then(Vec::new);
    }
    let n = rhs.len();
    let rows: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            basis
                .iter()
                .map(|b| Rat::from_integer(b[i].clone()))
                .collect()
        })
        .collect();
    let y = linalg::solve(&rows, rhs)?;
    // consistency: the solver only checks pivot rows, so verify
    for i in 0..n {
        let lhs: Rat = basis
            .iter()
            .zip(&y)
            .map(|(b, c)| Rat::from_integer(b[i].clone()) * c)
            .sum();
        if lhs != rhs[i] {
            return None;
        }
    }
    Some(y)
}

/// Scale factor s with alpha.(b_j) = s * a_j for all basis vectors; the
/// primitive rescaling of a pulled-back functional.
fn scale_factor(alpha: &[Int], basis: &[Vec<Int>], a: &[Int]) -> Rat {
    for (j, bv) in basis.iter().enumerate() {
        if !a[j].is_zero() {
            let lhs: Int = alpha.iter().zip(bv).map(|(x, y)| x * y).sum();
            return Rat::new(lhs, a[j].clone());
        }
    }
    Rat::one()
}

/// Brute-force facet enumeration for a full-dimensional polytope given by
/// local-coordinate vertices.
fn brute_force_facets(verts: &[Vec<Rat>], dim: usize) -> Vec<(Vec<Int>, Rat)> {
    if dim == 0 {
        return Vec::new();
    }
    if dim == 1 {
        let lo = verts.iter().map(|v| v[0].clone()).min().unwrap();
        let hi = verts.iter().map(|v| v[0].clone()).max().unwrap();
        return vec![
            (vec![-Int::one()], -lo),
            (vec![Int::one()], hi),
        ];
    }
    let mut seen: BTreeMap<(Vec<Int>, Rat), ()> = BTreeMap::new();
    let mut out: Vec<(Vec<Int>, Rat)> = Vec::new();
    for subset in (0..verts.len()).combinations(dim) {
        let base = &verts[subset[0]];
        let dirs: Vec<Vec<Rat>> = subset
            .iter()
            .skip(1)
            .map(|&i| verts[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let null = linalg::nullspace(&dirs);
        if null.len() != 1 {
            continue;
        }
        let a = primitive_integer(&null[0]);
        if a.iter().all(|x| x.is_zero()) {
            continue;
        }
        let b = dot_int_rat(&a, base);
        let mut any_below = false;
        let mut any_above = false;
        for v in verts {
            let val = dot_int_rat(&a, v);
            if val < b {
                any_below = true;
            } else if val > b {
                any_above = true;
            }
        }
        let (a, b) = if any_above && any_below {
            continue;
        } else if any_above {
            (a.iter().map(|x| -x.clone()).collect::<Vec<Int>>(), -b)
        } else {
            (a, b)
        };
        // tight set must span a (dim-1)-dimensional face to be a facet
        let tight: Vec<&Vec<Rat>> = verts
            .iter()
            .filter(|v| dot_int_rat(&a, v) == b)
            .collect();
        let t0 = tight[0];
        let tdirs: Vec<Vec<Rat>> = tight
            .iter()
            .skip(1)
            .map(|v| v.iter().zip(t0.iter()).map(|(x, y)| x - y).collect())
            .collect();
        if linalg::rank(&tdirs) + 1 != dim {
            continue;
        }
        let key = (a.clone(), b.clone());
        if seen.insert(key, ()).is_none() {
            out.push((a, b));
        }
    }
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out
}

/// Recursive pyramid decomposition of the lattice-normalized volume for a
/// full-dimensional polytope in local coordinates.
fn normalized_volume_local(
    verts: &[Vec<Rat>],
    facets: &[(Vec<Int>, Rat)],
    dim: usize,
) -> Rat {
    if dim == 0 {
        return Rat::one();
    }
    if dim == 1 {
        let lo = verts.iter().map(|v| v[0].clone()).min().unwrap();
        let hi = verts.iter().map(|v| v[0].clone()).max().unwrap();
        return hi - lo;
    }
    let w = &verts[0];
    let mut total = Rat::zero();
    for (a, b) in facets {
        let dist = b - dot_int_rat(a, w);
        if dist.is_zero() {
            continue;
        }
        // facet vertices, re-expressed in the facet's own lattice coordinates
        let fverts: Vec<Vec<Rat>> = verts
            .iter()
            .filter(|v| dot_int_rat(a, v) == *b)
            .cloned()
            .collect();
        let fbasis = linalg::integer_kernel(&[a.clone()]);
        let f0 = &fverts[0];
        let flocal: Vec<Vec<Rat>> = fverts
            .iter()
            .map(|v| {
                let rhs: Vec<Rat> = v.iter().zip(f0).map(|(x, y)| x - y).collect();
                solve_in_basis(&fbasis, &rhs).expect("facet vertex in facet span")
            })
            .collect();
        let ffacets = brute_force_facets(&flocal, dim - 1);
        let fvol = normalized_volume_local(&flocal, &ffacets, dim - 1);
        total += dist.abs() * fvol;
    }
    total / Rat::from_integer(Int::from(dim as i64))
}
