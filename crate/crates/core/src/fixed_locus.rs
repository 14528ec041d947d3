//! Fixed polytopes P_g = { u in P : g.u = u }, built as convex hulls of
//! orbit barycenters of vertices, with their dimension, denominator and
//! index data.

use thiserror::Error;

use crate::lattice_group::{AffineLatticeAutomorphism, FiniteMatrixGroup};
use crate::linalg::{Int, Rat};
use crate::polytope::RationalPolytope;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FixedLocusError {
    #[error("element {0} does not permute the vertex set of the polytope")]
    NotInvariant(usize),
}

/// Fixed polytope of a group element with its lattice invariants.
#[derive(Debug, Clone)]
pub struct FixedPolytopeRecord {
    /// Element index inside its group.
    pub element: usize,
    pub polytope: RationalPolytope,
    /// dim M^g: multiplicity of eigenvalue 1 of the linear part.
    pub fixed_space_dim: usize,
    /// Least m with a lattice point in the affine span of m P_g.
    pub index: usize,
    /// Least m with m P_g a lattice polytope.
    pub denominator: usize,
}

/// Check that every group element permutes the vertex set; the witness of a
/// failure is the offending element index.
pub fn verify_invariance(
    p: &RationalPolytope,
    group: &FiniteMatrixGroup,
) -> Result<(), FixedLocusError> {
    for (i, g) in group.elements().iter().enumerate() {
        permutes_vertices(p, g).ok_or(FixedLocusError::NotInvariant(i))?;
    }
    Ok(())
}

/// The permutation of vertex indices induced by g, when it exists.
fn permutes_vertices(
    p: &RationalPolytope,
    g: &AffineLatticeAutomorphism,
) -> Option<Vec<usize>> {
    let verts = p.vertices();
    let mut perm = Vec::with_capacity(verts.len());
    for v in verts {
        let img = g.apply_rat(v);
        let j = verts.iter().position(|w| *w == img)?;
        perm.push(j);
    }
    let mut seen = vec![false; verts.len()];
    for &j in &perm {
        if seen[j] {
            return None;
        }
        seen[j] = true;
    }
    Some(perm)
}

/// P_g as the convex hull of the barycenters of the g-orbits of vertices.
pub fn fixed_polytope(
    p: &RationalPolytope,
    group: &FiniteMatrixGroup,
    element: usize,
) -> Result<FixedPolytopeRecord, FixedLocusError> {
    let g = group.element(element);
    let perm = permutes_vertices(p, g).ok_or(FixedLocusError::NotInvariant(element))?;
    let verts = p.vertices();
    let n = verts.len();
    let mut seen = vec![false; n];
    let mut barycenters: Vec<Vec<Rat>> = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            orbit.push(i);
            i = perm[i];
        }
        let len = Rat::from_integer(Int::from(orbit.len() as i64));
        let bary: Vec<Rat> = (0..p.ambient())
            .map(|c| {
                let s: Rat = orbit.iter().map(|&v| verts[v][c].clone()).sum();
                s / &len
            })
            .collect();
        barycenters.push(bary);
    }
    let polytope = RationalPolytope::from_points(p.ambient(), &barycenters);
    let fixed_space_dim = g.fixed_subspace_dimension();
    assert_eq!(
        polytope.dim(),
        fixed_space_dim,
        "fixed polytope dimension must equal the fixed subspace dimension"
    );
    let denominator = polytope.denominator();
    let order = group.element_order(element);
    assert_eq!(
        order % denominator,
        0,
        "the element order clears the fixed polytope's denominator"
    );
    let index = polytope.index();
    assert_eq!(denominator % index, 0, "index divides denominator");
    Ok(FixedPolytopeRecord {
        element,
        polytope,
        fixed_space_dim,
        index,
        denominator,
    })
}

/// Count of lattice points of mP fixed by g, computed on the points of mP
/// directly; cross-checks enumeration of m P_g.
pub fn count_fixed_points(
    p: &RationalPolytope,
    g: &AffineLatticeAutomorphism,
    m: usize,
    interior: bool,
) -> usize {
    if m == 0 {
        // m = 0 dilate is the single point 0, fixed by the linear part
        return 1;
    }
    let pts = if interior {
        p.interior_lattice_points(m)
    } else {
        p.lattice_points(m)
    };
    pts.iter()
        .filter(|u| {
            // g acts on mP via rho(u) - m w
            let img: Vec<Int> = g
                .linear
                .iter()
                .zip(&g.translation)
                .map(|(row, w)| {
                    let s: Int = row.iter().zip(u.iter()).map(|(a, x)| a * x).sum();
                    s - Int::from(m as i64) * w
                })
                .collect();
            img == **u
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_group::DEFAULT_CLOSURE_CAP;
    use num::One;

    fn square() -> RationalPolytope {
        RationalPolytope::from_integer_points(2, &[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]])
    }

    fn b2() -> FiniteMatrixGroup {
        let sigma = AffineLatticeAutomorphism::from_i64(&[&[0, -1], &[1, 0]], &[-1, 0]);
        let tau = AffineLatticeAutomorphism::from_i64(&[&[-1, 0], &[0, 1]], &[-1, 0]);
        FiniteMatrixGroup::generate(&[sigma, tau], 2, DEFAULT_CLOSURE_CAP).unwrap()
    }

    #[test]
    fn identity_fixed_polytope_is_p() {
        let p = square();
        let g = FiniteMatrixGroup::trivial(2);
        let rec = fixed_polytope(&p, &g, 0).unwrap();
        assert_eq!(rec.polytope.vertices(), p.vertices());
        assert_eq!(rec.fixed_space_dim, 2);
        assert_eq!(rec.index, 1);
        assert_eq!(rec.denominator, 1);
    }

    #[test]
    fn square_fixed_loci() {
        let p = square();
        let g = b2();
        verify_invariance(&p, &g).unwrap();
        for i in 0..g.order() {
            let rec = fixed_polytope(&p, &g, i).unwrap();
            assert_eq!(rec.polytope.dim(), g.element(i).fixed_subspace_dimension());
            // order(g) . P_g is a lattice polytope
            let ord = g.element_order(i);
            assert_eq!(ord % rec.denominator, 0);
        }
        // the rotation fixes only the center (1/2, 1/2)
        let sigma = AffineLatticeAutomorphism::from_i64(&[&[0, -1], &[1, 0]], &[-1, 0]);
        let si = g.element_index(&sigma).unwrap();
        let rec = fixed_polytope(&p, &g, si).unwrap();
        assert_eq!(rec.polytope.dim(), 0);
        assert_eq!(rec.polytope.vertices()[0], vec![
            Rat::new(Int::one(), Int::from(2)),
            Rat::new(Int::one(), Int::from(2))
        ]);
        assert_eq!(rec.denominator, 2);
        assert_eq!(rec.index, 2);
    }

    #[test]
    fn reflection_without_lattice_fixed_points() {
        // x -> 1 - x on the segment [0,1]: fixed polytope is the half point
        let p = RationalPolytope::from_integer_points(1, &[vec![0], vec![1]]);
        let tau = AffineLatticeAutomorphism::from_i64(&[&[-1]], &[-1]);
        let g = FiniteMatrixGroup::generate(&[tau.clone()], 1, 10).unwrap();
        let ti = g.element_index(&tau).unwrap();
        let rec = fixed_polytope(&p, &g, ti).unwrap();
        assert_eq!(rec.polytope.dim(), 0);
        assert_eq!(rec.denominator, 2);
        assert_eq!(rec.polytope.count_lattice_points(1), 0);
        assert_eq!(rec.polytope.count_lattice_points(2), 1);
    }

    #[test]
    fn fixed_point_counts_cross_check() {
        let p = square();
        let g = b2();
        for i in 0..g.order() {
            let rec = fixed_polytope(&p, &g, i).unwrap();
            for m in 0..5usize {
                let via_fixed_polytope = rec.polytope.count_lattice_points(m);
                let direct = count_fixed_points(&p, g.element(i), m, false);
                assert_eq!(via_fixed_polytope, direct, "element {i} at m = {m}");
            }
        }
    }

    #[test]
    fn not_invariant_detected() {
        let p = RationalPolytope::from_integer_points(2, &[vec![0, 0], vec![2, 0], vec![0, 1]]);
        let sigma = AffineLatticeAutomorphism::linear_from_i64(&[&[0, 1], &[1, 0]]);
        let g = FiniteMatrixGroup::generate(&[sigma.clone()], 2, 10).unwrap();
        let si = g.element_index(&sigma).unwrap();
        assert_eq!(
            fixed_polytope(&p, &g, si).unwrap_err(),
            FixedLocusError::NotInvariant(si)
        );
    }
}
