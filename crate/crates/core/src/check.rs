//! Property suite: runs every structural invariant applicable to an
//! instance and reports one pass/fail outcome per property, with witnesses.
//! Panics inside a property are caught and reported as failures.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};

use num::Zero;

use crate::ehrhart::h_star_data;
use crate::equivariant::{
    face_fixed_point_criterion, free_sum_identity_check, EquivariantContext, EquivariantHStar,
    LatticeFixedVerdict,
};
use crate::exact_arith::{binomial, IntPolynomial, RationalFunction};
use crate::fixed_locus::fixed_polytope;
use crate::gallery::{
    cross_family, cross_family_h_star, hypercube_char_formula, marked_tableaux_polynomial,
    partitions, permutation_cycle_type, symmetric_group_character, Instance,
};
use crate::lattice_group::{
    character_table, AffineLatticeAutomorphism, CharacterTable, ClassFunction, FiniteMatrixGroup,
};
use crate::linalg::{Int, Rat};
use crate::polytope::RationalPolytope;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub instance: String,
    pub outcomes: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

/// Run one property under panic capture; a success may carry a value for
/// later properties plus a human-readable detail.
fn run_check<T>(
    outcomes: &mut Vec<CheckOutcome>,
    name: &str,
    f: impl FnOnce() -> Result<(T, String), String>,
) -> Option<T> {
    let result = catch_unwind(AssertUnwindSafe(f));
    match result {
        Ok(Ok((value, detail))) => {
            outcomes.push(CheckOutcome {
                name: name.into(),
                passed: true,
                detail,
            });
            Some(value)
        }
        Ok(Err(witness)) => {
            outcomes.push(CheckOutcome {
                name: name.into(),
                passed: false,
                detail: witness,
            });
            None
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| (*s).to_string()))
                .unwrap_or_else(|| "panic with non-string payload".into());
            outcomes.push(CheckOutcome {
                name: name.into(),
                passed: false,
                detail: format!("panicked: {msg}"),
            });
            None
        }
    }
}

fn ok(detail: impl Into<String>) -> Result<((), String), String> {
    Ok(((), detail.into()))
}

/// The full suite on one instance.
pub fn run_suite(inst: &Instance) -> SuiteReport {
    let mut outcomes = Vec::new();
    let ctx = run_check(&mut outcomes, "pipeline", || {
        let ctx = EquivariantContext::new(inst.polytope.clone(), inst.group.clone())
            .map_err(|e| format!("{e}"))?;
        let detail = format!(
            "group order {}, {} classes, dim {}",
            ctx.group().order(),
            ctx.group().num_classes(),
            ctx.polytope().dim()
        );
        Ok((ctx, detail))
    });
    let Some(ctx) = ctx else {
        return SuiteReport {
            instance: inst.name.clone(),
            outcomes,
        };
    };
    let ctx = &ctx;

    run_check(&mut outcomes, "counting-characters", || {
        let trivial = ClassFunction::trivial(ctx.group());
        if !ctx.chi_mp(0).sub(&trivial).is_zero() {
            return Err("the zeroth count is not the trivial character".into());
        }
        for m in 0..=ctx.group().exponent() + 2 {
            let enumerated = ctx.chi_mp(m);
            let from_qp = ctx.counting_character(m as i64);
            if !enumerated.sub(&from_qp).is_zero() {
                return Err(format!("closed counts disagree with the quasi-polynomial at m = {m}"));
            }
            if m >= 1 {
                let enumerated = ctx.chi_star_mp(m);
                let from_qp = ctx.interior_counting_character(m as i64);
                if !enumerated.sub(&from_qp).is_zero() {
                    return Err(format!(
                        "interior counts disagree with the quasi-polynomial at m = {m}"
                    ));
                }
            }
        }
        ok(format!("verified for m <= {}", ctx.group().exponent() + 2))
    });

    let hstar = run_check(&mut outcomes, "hstar-structure", || {
        let hstar = ctx.equivariant_hstar();
        let mut detail = if hstar.is_polynomial() {
            "polynomial".to_string()
        } else {
            "non-polynomial".to_string()
        };
        if let Some(coeffs) = hstar.coefficients() {
            if ctx.polytope().is_lattice() {
                let h = h_star_data(ctx.polytope()).map_err(|e| format!("{e}"))?;
                if coeffs.len() != h.degree + 1 {
                    return Err(format!(
                        "degree {} differs from the h* degree {}",
                        coeffs.len() - 1,
                        h.degree
                    ));
                }
                let top = coeffs.last().expect("a polynomial has coefficients");
                let interior = ctx.chi_star_mp(h.codegree);
                if !top.sub(&interior).is_zero() {
                    return Err(
                        "the top coefficient differs from the interior character of the codegree dilate"
                            .into(),
                    );
                }
                detail.push_str(&format!(", degree {}, codegree {}", h.degree, h.codegree));
            }
        }
        Ok((hstar, detail))
    });

    let table = run_check(&mut outcomes, "character-table", || {
        let table = character_table(ctx.group()).map_err(|e| format!("{e}"))?;
        if !table.verify_orthonormality() {
            return Err("the computed table is not orthonormal".into());
        }
        let detail = format!("{} irreducibles", table.irreducibles.len());
        Ok((table, detail))
    });

    if let (Some(hstar), Some(table)) = (hstar.as_ref(), table.as_ref()) {
        run_check(&mut outcomes, "effectiveness", || {
            effectiveness_check(ctx, hstar, table)
        });
    }

    run_check(&mut outcomes, "trivial-restriction", || {
        let trivial = FiniteMatrixGroup::trivial(ctx.polytope().ambient());
        let tctx = EquivariantContext::new(ctx.polytope().clone(), trivial)
            .map_err(|e| format!("{e}"))?;
        let h = tctx.equivariant_hstar();
        let full = ctx.equivariant_hstar();
        let id = ctx
            .group()
            .element_index(&AffineLatticeAutomorphism::identity(ctx.group().dim()))
            .expect("the identity is present");
        if h.per_class[0] != full.per_class[ctx.group().class_of(id)] {
            return Err("the trivial-group series differs from the identity class value".into());
        }
        if ctx.polytope().is_lattice() {
            let hd = h_star_data(ctx.polytope()).map_err(|e| format!("{e}"))?;
            if h.per_class[0] != RationalFunction::from_poly(hd.h_star.clone()) {
                return Err("the trivial-group series differs from h*".into());
            }
        }
        ok("matches h* through the one-class pipeline")
    });

    run_check(&mut outcomes, "phi-at-one", || {
        let phi1 = ctx.phi_at_one().map_err(|e| format!("{e}"))?;
        ok(if phi1.integral {
            "both routes agree; all values integral"
        } else {
            "both routes agree; non-integral values present"
        })
    });

    run_check(&mut outcomes, "reciprocity", || {
        ctx.equivariant_reciprocity_check()
            .map_err(|w| format!("failed at {w:?}"))?;
        ok(format!("pointwise to m = {}, series algebraically", ctx.horizon()))
    });

    if ctx.polytope().is_lattice() {
        run_check(&mut outcomes, "leading-coefficients", || {
            ctx.leading_coefficients().map_err(|e| format!("{e}"))?;
            ok("top and subtop structure verified")
        });

        run_check(&mut outcomes, "palindrome-five-way", || {
            let report = ctx.palindrome_reflexive_check().map_err(|e| format!("{e}"))?;
            ok(format!(
                "all five conditions agree: {}",
                if report.all() { "reflexive-type" } else { "not reflexive-type" }
            ))
        });
    }

    run_check(&mut outcomes, "orbit-counts", || {
        let data = ctx.orbit_quasipolynomials();
        for m in 1..=2usize {
            let burnside = burnside_orbit_count(ctx.polytope(), ctx.group(), m);
            if data.closed.eval(m as i64) != Rat::from_integer(Int::from(burnside as i64)) {
                return Err(format!("orbit count at m = {m} disagrees with Burnside"));
            }
        }
        ok(format!(
            "period {} closed, reciprocity pairings hold",
            data.closed.period()
        ))
    });

    run_check(&mut outcomes, "criteria-consistency", || {
        let hstar = ctx.equivariant_hstar();
        let lattice_verdict = ctx.criterion_all_fixed_lattice();
        let bad = ctx.criterion_bad_element();
        let face = ctx.criterion_face_fixed_points();
        if lattice_verdict == LatticeFixedVerdict::Applies && !hstar.is_polynomial() {
            return Err("all fixed polytopes lattice yet the series is not polynomial".into());
        }
        if bad.is_some() && hstar.is_polynomial() {
            return Err("a bad element witness with a polynomial series".into());
        }
        if let (Ok(()), Some(table)) = (&face, table.as_ref()) {
            if hstar.is_polynomial() {
                let (_, effective) = ctx
                    .hstar_effectiveness(&hstar, table)
                    .expect("polynomial series decomposes");
                if !effective {
                    return Err("face criterion passed yet the series is not effective".into());
                }
            }
        }
        ok(format!(
            "lattice {:?}, bad witness {:?}, face {:?}",
            lattice_verdict,
            bad,
            face.is_ok()
        ))
    });

    run_check(&mut outcomes, "dilate-multiples", || {
        let e = ctx.group().exponent();
        let scaled = dilated_action(ctx.group(), e);
        let p = ctx.polytope().dilate(e);
        for c in 0..scaled.num_classes() {
            let rec = fixed_polytope(&p, &scaled, scaled.class_rep(c))
                .map_err(|e| format!("{e}"))?;
            if rec.denominator != 1 {
                return Err(format!(
                    "class {c} of the exponent dilate has denominator {}",
                    rec.denominator
                ));
            }
        }
        let n = ctx.group().order();
        let scaled = dilated_action(ctx.group(), n);
        let p = ctx.polytope().dilate(n);
        face_fixed_point_criterion(&p, &scaled)
            .map_err(|face| format!("face {face:?} of the order dilate has no fixed point"))?;
        ok(format!("exponent dilate {e} lattice-fixed, order dilate {n} face-fixed"))
    });

    if ctx.polytope().vertices().len() == ctx.polytope().dim() + 1 && ctx.polytope().is_lattice()
    {
        run_check(&mut outcomes, "box-points", || {
            let boxed = ctx.box_points_hstar().map_err(|e| format!("{e}"))?;
            let generic = ctx.equivariant_hstar();
            if boxed.per_class != generic.per_class {
                return Err("box point route differs from the series route".into());
            }
            ok("box point route matches the series route")
        });
    }

    instance_specific_checks(inst, ctx, &mut outcomes);

    SuiteReport {
        instance: inst.name.clone(),
        outcomes,
    }
}

fn effectiveness_check(
    ctx: &EquivariantContext,
    hstar: &EquivariantHStar,
    table: &CharacterTable,
) -> Result<((), String), String> {
    let Some((_, effective)) = ctx.hstar_effectiveness(hstar, table) else {
        return ok("non-polynomial; decomposition not applicable");
    };
    let coeffs = hstar.coefficients().expect("polynomial");
    let trivial = ClassFunction::trivial(ctx.group());
    if !coeffs[0].sub(&trivial).is_zero() {
        return Err("the constant coefficient is not the trivial character".into());
    }
    if coeffs.len() > 1 {
        let (_, first_effective) = table.decompose(&coeffs[1]);
        if !first_effective {
            return Err("the linear coefficient is not effective".into());
        }
        let d = ctx.polytope().dim();
        let diff = if let Some(phid) = coeffs.get(d) {
            coeffs[1].sub(phid)
        } else {
            coeffs[1].clone()
        };
        let (_, dominates) = table.decompose(&diff);
        if !dominates {
            return Err("the linear coefficient does not dominate the top one".into());
        }
    }
    ok(if effective {
        "all coefficients effective"
    } else {
        "linear coefficient effective; some coefficient is not"
    })
}

/// Burnside count of lattice point orbits of the m-th dilate.
fn burnside_orbit_count(p: &RationalPolytope, group: &FiniteMatrixGroup, m: usize) -> usize {
    let pts = p.lattice_points(m);
    let index: HashMap<Vec<Int>, usize> = pts
        .iter()
        .enumerate()
        .map(|(i, u)| (u.clone(), i))
        .collect();
    group.orbit_count(pts.len(), |g, i| {
        let g = group.element(g);
        let u = &pts[i];
        let img: Vec<Int> = g
            .linear
            .iter()
            .zip(&g.translation)
            .map(|(row, w)| {
                let s: Int = row.iter().zip(u.iter()).map(|(a, x)| a * x).sum();
                s - Int::from(m as i64) * w
            })
            .collect();
        *index.get(&img).expect("the dilate is invariant")
    })
}

/// The same group with translation parts scaled by m: the action on the m-th
/// dilate.
fn dilated_action(group: &FiniteMatrixGroup, m: usize) -> FiniteMatrixGroup {
    let gens: Vec<AffineLatticeAutomorphism> = group
        .elements()
        .iter()
        .map(|g| {
            AffineLatticeAutomorphism::new(
                g.linear.clone(),
                g.translation
                    .iter()
                    .map(|w| w * Int::from(m as i64))
                    .collect(),
            )
        })
        .collect();
    FiniteMatrixGroup::generate(&gens, group.dim(), group.order() + 1)
        .expect("scaling translations preserves the group")
}

fn instance_specific_checks(
    inst: &Instance,
    ctx: &EquivariantContext,
    outcomes: &mut Vec<CheckOutcome>,
) {
    if let Some(rest) = inst.name.strip_prefix("cross-") {
        let parts: Vec<usize> = rest.split('-').filter_map(|s| s.parse().ok()).collect();
        if let [two_k, d] = parts[..] {
            run_check(outcomes, "centrally-symmetric-formula", || {
                centrally_symmetric_check(ctx, two_k / 2, d)
            });
        }
    } else if let Some(rest) = inst.name.strip_prefix("hypercube-sym-") {
        if let Ok(d) = rest.parse::<usize>() {
            run_check(outcomes, "hypercube-cycle-type-formula", || {
                hypercube_formula_check(ctx, d)
            });
            if d <= 4 {
                run_check(outcomes, "hypercube-tableaux-decomposition", || {
                    hypercube_tableaux_check(ctx, d)
                });
            }
        }
    } else if let Some(rest) = inst.name.strip_prefix("simplex-orbit-") {
        if let Ok(n) = rest.parse::<usize>() {
            run_check(outcomes, "partition-orbit-counts", || {
                partition_orbit_check(ctx, n)
            });
        }
    } else if let Some(rest) = inst.name.strip_prefix("simplex-") {
        if let Ok(n) = rest.parse::<usize>() {
            run_check(outcomes, "simplex-trivial-coefficients", || {
                let hstar = ctx.equivariant_hstar();
                let coeffs = hstar
                    .coefficients()
                    .ok_or("the reflexive simplex series must be polynomial")?;
                if coeffs.len() != 2 * n {
                    return Err(format!("expected degree {}, got {}", 2 * n - 1, coeffs.len() - 1));
                }
                let trivial = ClassFunction::trivial(ctx.group());
                for (i, c) in coeffs.iter().enumerate() {
                    if !c.sub(&trivial).is_zero() {
                        return Err(format!("coefficient {i} is not the trivial character"));
                    }
                }
                ok("all coefficients are the trivial character")
            });
        }
    }
}

/// phi on the central inversion instance: h* at the identity, (1+t)^d at the
/// inversion, h*_i >= C(d, i), and the Braun product against the base case.
fn centrally_symmetric_check(
    ctx: &EquivariantContext,
    k: usize,
    d: usize,
) -> Result<((), String), String> {
    let h = h_star_data(ctx.polytope()).map_err(|e| format!("{e}"))?;
    if h.h_star != cross_family_h_star(k, d) {
        return Err("h* differs from the binomial closed form".into());
    }
    for i in 0..=d {
        if h.h_star.coeff(i) < binomial(d as i64, i as i64) {
            return Err(format!("h*_{i} is below the binomial bound"));
        }
    }
    let hstar = ctx.equivariant_hstar();
    let (id_class, inv_class) = two_classes(ctx.group())?;
    if hstar.per_class[id_class] != RationalFunction::from_poly(h.h_star.clone()) {
        return Err("the identity class value differs from h*".into());
    }
    let ones = IntPolynomial::from_i64(&[1, 1]).pow(d);
    if hstar.per_class[inv_class] != RationalFunction::from_poly(ones) {
        return Err("the inversion class value differs from (1+t)^d".into());
    }
    // Braun factorization against the minimal centrally symmetric core
    let base_dim = (2 * k).max(1);
    if d > base_dim {
        let base = cross_family(k, base_dim);
        let base_ctx = EquivariantContext::new(base.polytope, base.group)
            .map_err(|e| format!("{e}"))?;
        let base_hstar = base_ctx.equivariant_hstar();
        let (bid, binv) = two_classes(base_ctx.group())?;
        let extra = RationalFunction::from_poly(IntPolynomial::from_i64(&[1, 1]).pow(d - base_dim));
        if hstar.per_class[id_class] != base_hstar.per_class[bid].mul(&extra)
            || hstar.per_class[inv_class] != base_hstar.per_class[binv].mul(&extra)
        {
            return Err("the free sum factorization fails".into());
        }
        // one free sum step checked end to end on the product group
        let seg = RationalPolytope::from_integer_points(1, &[vec![-1], vec![1]]);
        let seg_ctx = EquivariantContext::new(seg, FiniteMatrixGroup::trivial(1))
            .map_err(|e| format!("{e}"))?;
        if !free_sum_identity_check(&base_ctx, &seg_ctx).map_err(|e| format!("{e}"))? {
            return Err("the free sum identity fails on base (+) segment".into());
        }
    }
    ok("closed form, binomial bound and free sum factorization hold")
}

fn two_classes(group: &FiniteMatrixGroup) -> Result<(usize, usize), String> {
    if group.order() != 2 || group.num_classes() != 2 {
        return Err("expected the order-two inversion group".into());
    }
    let id = group
        .element_index(&AffineLatticeAutomorphism::identity(group.dim()))
        .expect("the identity is present");
    let id_class = group.class_of(id);
    Ok((id_class, 1 - id_class))
}

/// Per-class values of the hypercube series against the cycle type closed
/// form.
fn hypercube_formula_check(ctx: &EquivariantContext, d: usize) -> Result<((), String), String> {
    let hstar = ctx.equivariant_hstar();
    for c in 0..ctx.group().num_classes() {
        let g = ctx.group().element(ctx.group().class_rep(c));
        let mu = permutation_cycle_type(g).ok_or("expected permutation matrices")?;
        let expected = hypercube_char_formula(d, &mu);
        if hstar.per_class[c] != RationalFunction::from_poly(expected) {
            return Err(format!("class of cycle type {mu:?} disagrees"));
        }
    }
    ok("all classes match the cycle type formula")
}

/// Coefficients of the hypercube series against the marked tableaux
/// expansion over the irreducibles of the symmetric group.
fn hypercube_tableaux_check(ctx: &EquivariantContext, d: usize) -> Result<((), String), String> {
    let hstar = ctx.equivariant_hstar();
    let coeffs = hstar
        .coefficients()
        .ok_or("the hypercube series under coordinate permutations is polynomial")?;
    let shapes = partitions(d);
    for (i, coeff) in coeffs.iter().enumerate() {
        let mut expected = vec![Rat::zero(); ctx.group().num_classes()];
        for shape in &shapes {
            let mult = marked_tableaux_polynomial(shape).coeff(i);
            if mult.is_zero() {
                continue;
            }
            for (c, e) in expected.iter_mut().enumerate() {
                let g = ctx.group().element(ctx.group().class_rep(c));
                let mu = permutation_cycle_type(g).ok_or("expected permutation matrices")?;
                *e += Rat::from_integer(&mult * symmetric_group_character(shape, &mu));
            }
        }
        let expected = ClassFunction::from_rationals(ctx.group(), expected);
        if !coeff.sub(&expected).is_zero() {
            return Err(format!("coefficient {i} differs from the tableaux expansion"));
        }
    }
    ok(format!("all {} coefficients expand over marked tableaux", coeffs.len()))
}

/// Orbit quasi-polynomials of the standard simplex under coordinate
/// permutations against direct partition counts.
fn partition_orbit_check(ctx: &EquivariantContext, n: usize) -> Result<((), String), String> {
    let data = ctx.orbit_quasipolynomials();
    for m in 0..=10usize {
        let expected = partitions_with_at_most(m, n);
        if data.closed.eval(m as i64) != Rat::from_integer(Int::from(expected as i64)) {
            return Err(format!("orbit count at m = {m} is not the partition count"));
        }
        if m >= 1 {
            // interior counts only agree with the quasi-polynomial from m = 1
            let expected = partitions_distinct(m as i64, n, 1);
            if data.signed_interior.eval(m as i64) != Rat::from_integer(Int::from(expected as i64))
            {
                return Err(format!(
                    "signed interior orbit count at m = {m} is not the distinct partition count"
                ));
            }
        }
    }
    ok("matches direct partition counters for m <= 10")
}

/// Partitions of m into at most n parts (equivalently with parts of size at
/// most n).
fn partitions_with_at_most(m: usize, n: usize) -> usize {
    fn rec(m: i64, max_part: i64) -> usize {
        if m == 0 {
            return 1;
        }
        if max_part == 0 {
            return 0;
        }
        let mut acc = rec(m, max_part - 1);
        if m >= max_part {
            acc += rec(m - max_part, max_part);
        }
        acc
    }
    rec(m as i64, n as i64)
}

/// Partitions of m into exactly n distinct parts, each at least `min`.
fn partitions_distinct(m: i64, n: usize, min: i64) -> usize {
    if n == 0 {
        return usize::from(m == 0);
    }
    let mut acc = 0;
    let mut first = min;
    while first * n as i64 + (n as i64 * (n as i64 - 1)) / 2 <= m {
        acc += partitions_distinct(m - first, n - 1, first + 1);
        first += 1;
    }
    acc
}

/// The suite over the whole gallery.
pub fn run_all() -> Vec<SuiteReport> {
    crate::gallery::all_instances()
        .iter()
        .map(run_suite)
        .collect()
}
