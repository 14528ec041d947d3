//! End-to-end acceptance runs: each test exercises one headline scenario,
//! prints a single pass or fail line and enforces a wall-clock budget.

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eqehrhart::ehrhart::{eulerian_polynomial, h_star_data, quasi_polynomial};
use eqehrhart::exact_arith::binomial;
use eqehrhart::gallery::{self, HypercubeGroup};
use eqehrhart::lattice_group::{ClassFunction, DEFAULT_CLOSURE_CAP};
use eqehrhart::linalg::{Int, Rat};
use eqehrhart::{
    check, AffineLatticeAutomorphism, CyclotomicValue, EquivariantContext, FiniteMatrixGroup,
    HStarVerdict, IntPolynomial, RationalPolytope,
};

fn criterion(n: usize, label: &str, budget_secs: u64, body: impl FnOnce()) {
    let budget = Duration::from_secs(budget_secs);
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    match outcome {
        Ok(()) if elapsed <= budget => {
            println!("criterion {n} ({label}): pass ({elapsed:.2?})");
        }
        Ok(()) => {
            println!(
                "criterion {n} ({label}): fail (took {elapsed:.2?}, budget {budget:?})"
            );
            panic!("criterion {n} exceeded its time budget");
        }
        Err(cause) => {
            println!("criterion {n} ({label}): fail ({elapsed:.2?})");
            resume_unwind(cause);
        }
    }
}

fn poly(coeffs: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64(coeffs)
}

fn as_poly(f: &eqehrhart::RationalFunction) -> IntPolynomial {
    f.as_polynomial().expect("a polynomial class value")
}

fn class_of(group: &FiniteMatrixGroup, g: &AffineLatticeAutomorphism) -> usize {
    group.class_of(group.element_index(g).expect("element of the group"))
}

fn same(a: &ClassFunction, b: &ClassFunction) -> bool {
    a.sub(b).is_zero()
}

fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Hexagon under the order-six rotation: polynomial phi with the stated
/// character decomposition, phi at the rotation, and phi[1].
#[test]
fn criterion_1_hexagon() {
    criterion(1, "hexagon", 1, || {
        let inst = gallery::hexagon_z6();
        let ctx = EquivariantContext::new(inst.polytope, inst.group).unwrap();
        let group = ctx.group();
        let rot = AffineLatticeAutomorphism::linear_from_i64(&[&[1, -1], &[1, 0]]);
        let rot_idx = group.element_index(&rot).unwrap();
        // classes of the powers of the rotation, j = 0..6
        let power_class: Vec<usize> = (0..6)
            .map(|j| group.class_of(group.power_index(rot_idx, j)))
            .collect();
        // the six linear characters chi^k(rot^j) = zeta_6^{kj}
        let linear_chars: Vec<ClassFunction> = (0..6)
            .map(|k| {
                let mut values = vec![CyclotomicValue::zero(); 6];
                for (j, &c) in power_class.iter().enumerate() {
                    values[c] = CyclotomicValue::root_of_unity(6, (k * j) % 6);
                }
                ClassFunction::new(group, values)
            })
            .collect();

        let hstar = ctx.equivariant_hstar();
        let coeffs = hstar.coefficients().expect("hexagon phi is polynomial");
        assert_eq!(coeffs.len(), 3);
        // phi_0 = phi_2 = trivial, phi_1 = 1 + chi^2 + chi^3 + chi^4
        let expected_mults = [
            [1i64, 0, 0, 0, 0, 0],
            [1, 0, 1, 1, 1, 0],
            [1, 0, 0, 0, 0, 0],
        ];
        for (i, row) in expected_mults.iter().enumerate() {
            for (k, chi) in linear_chars.iter().enumerate() {
                let m = coeffs[i]
                    .inner_product(chi)
                    .as_rational()
                    .expect("rational multiplicity");
                assert_eq!(m, rat(row[k]), "phi_{i} multiplicity of chi^{k}");
            }
        }
        // phi at the rotation itself
        assert_eq!(
            as_poly(&hstar.per_class[power_class[1]]),
            poly(&[1, -1, 1])
        );
        // phi[1] takes the values 3 + zeta^{2j} + zeta^{3j} + zeta^{4j}
        let phi1 = ctx.phi_at_one().unwrap();
        assert!(phi1.integral);
        for (j, expected) in [6i64, 1, 3, 4, 3, 1].into_iter().enumerate() {
            let v = phi1.values.values[power_class[j]]
                .as_rational()
                .expect("integral phi[1]");
            assert_eq!(v, rat(expected), "phi[1] at rotation power {j}");
        }
    });
}

/// Unit square under the full signed symmetry group: phi stays a proper
/// rational function on the rotation and axis reflection classes, and the
/// restriction to the diagonal swap is polynomial again.
#[test]
fn criterion_2_square_signed_symmetries() {
    criterion(2, "square signed symmetries", 1, || {
        let inst = gallery::hypercube_instance(2, HypercubeGroup::BD);
        let ctx = EquivariantContext::new(inst.polytope.clone(), inst.group).unwrap();
        let group = ctx.group();
        assert_eq!(group.order(), 8);

        let sigma = AffineLatticeAutomorphism::from_i64(&[&[0, -1], &[1, 0]], &[-1, 0]);
        let sigma2 = sigma.compose(&sigma);
        let tau = AffineLatticeAutomorphism::from_i64(&[&[-1, 0], &[0, 1]], &[-1, 0]);
        let swap = AffineLatticeAutomorphism::linear_from_i64(&[&[0, 1], &[1, 0]]);
        let identity = AffineLatticeAutomorphism::identity(2);

        let hstar = ctx.equivariant_hstar();
        let HStarVerdict::NonPolynomial { witness_classes } = &hstar.verdict else {
            panic!("phi for the signed square must not be polynomial");
        };
        let mut expected_witnesses = vec![class_of(group, &sigma), class_of(group, &tau)];
        expected_witnesses.sort_unstable();
        let mut got = witness_classes.clone();
        got.sort_unstable();
        assert_eq!(got, expected_witnesses);

        // polynomial classes evaluate to 1 + t, the witnesses to the proper
        // form (1 + t^2) / (1 + t)
        for g in [&identity, &sigma2, &swap] {
            assert_eq!(as_poly(&hstar.per_class[class_of(group, g)]), poly(&[1, 1]));
        }
        for g in [&sigma, &tau] {
            let f = &hstar.per_class[class_of(group, g)];
            assert_eq!(f.reduced_numerator(), &poly(&[1, 0, 1]));
            assert_eq!(f.reduced_denominator(), &poly(&[1, 1]));
        }

        // restricting to the subgroup generated by the diagonal swap
        // recovers the polynomial phi = 1 + t
        let sub = FiniteMatrixGroup::generate(&[swap], 2, DEFAULT_CLOSURE_CAP).unwrap();
        let sub_ctx = EquivariantContext::new(inst.polytope, sub).unwrap();
        let sub_hstar = sub_ctx.equivariant_hstar();
        let coeffs = sub_hstar.coefficients().expect("restriction is polynomial");
        assert_eq!(coeffs.len(), 2);
        for c in coeffs {
            assert!(same(c, &ClassFunction::trivial(sub_ctx.group())));
        }
    });
}

/// Reflexive 3-polytope whose order-two symmetry is a bad element: the
/// classical h* is palindromic yet phi is not polynomial.
#[test]
fn criterion_3_bad_reflexive() {
    criterion(3, "bad reflexive", 5, || {
        let inst = gallery::bad_reflexive_z2();
        assert_eq!(
            h_star_data(&inst.polytope).unwrap().h_star,
            poly(&[1, 5, 5, 1])
        );
        let ctx = EquivariantContext::new(inst.polytope, inst.group).unwrap();
        let group = ctx.group();
        let tau =
            AffineLatticeAutomorphism::linear_from_i64(&[&[-1, 0, 1], &[0, 1, 0], &[0, 0, 1]]);
        let tau_class = class_of(group, &tau);
        let id_class = class_of(group, &AffineLatticeAutomorphism::identity(3));

        let hstar = ctx.equivariant_hstar();
        assert!(!hstar.is_polynomial());
        assert_eq!(as_poly(&hstar.per_class[id_class]), poly(&[1, 5, 5, 1]));
        let f = &hstar.per_class[tau_class];
        assert_eq!(f.reduced_numerator(), &poly(&[1, 0, 6, 0, 1]));
        assert_eq!(f.reduced_denominator(), &poly(&[1, 1]));

        // the reflection's fixed plane passes through the origin, so the
        // index of P_tau is one and the witness criterion does not apply;
        // non-polynomiality is still decided by the exact cancellation above
        assert_eq!(ctx.criterion_bad_element(), None);
        assert_eq!(ctx.records()[tau_class].index, 1);
        assert_eq!(ctx.records()[tau_class].denominator, 2);
    });
}

/// Hypercubes under coordinate permutations, d = 2, 3, 4: the closed
/// per-class formula, the marked tableaux decomposition over all partitions
/// and the Eulerian specialization.
#[test]
fn criterion_4_hypercube_tableaux() {
    criterion(4, "hypercube tableaux", 60, || {
        for d in 2..=4usize {
            let inst = gallery::hypercube_instance(d, HypercubeGroup::SymD);
            let ctx = EquivariantContext::new(inst.polytope, inst.group).unwrap();
            let group = ctx.group();
            let hstar = ctx.equivariant_hstar();
            let coeffs = hstar.coefficients().expect("hypercube phi is polynomial");
            assert_eq!(coeffs.len(), d);

            // per-class closed formula from the cycle type
            for c in 0..group.num_classes() {
                let mu = gallery::permutation_cycle_type(group.element(group.class_rep(c)))
                    .expect("permutation matrices");
                assert_eq!(
                    as_poly(&hstar.per_class[c]),
                    gallery::hypercube_char_formula(d, &mu),
                    "d = {d}, class {c}"
                );
            }

            // phi_i = sum over shapes of [t^i] P_lambda(t) chi^lambda, and
            // the dimension specialization gives the Eulerian numbers
            let shapes = gallery::partitions(d);
            let id_type = vec![1usize; d];
            let eulerian = eulerian_polynomial(d);
            for (i, coeff) in coeffs.iter().enumerate() {
                let mut expected = ClassFunction::trivial(group).scale(&rat(0));
                let mut dim_sum = Int::from(0);
                for shape in &shapes {
                    let p = gallery::marked_tableaux_polynomial(shape);
                    let c = p.coeff(i);
                    if c != Int::from(0) {
                        let chi = gallery::symmetric_irreducible(group, shape);
                        expected = expected.add(&chi.scale(&Rat::from_integer(c.clone())));
                    }
                    dim_sum += c * gallery::symmetric_group_character(shape, &id_type);
                }
                assert!(same(coeff, &expected), "d = {d}, degree {i}");
                assert_eq!(dim_sum, eulerian.coeff(i), "d = {d}, Eulerian number {i}");
            }

            // the small printed decompositions, stated explicitly
            let triv = ClassFunction::trivial(group);
            match d {
                2 => {
                    assert!(same(&coeffs[0], &triv) && same(&coeffs[1], &triv));
                    println!("d=2: phi = 1 + t");
                }
                3 => {
                    let chi21 = gallery::symmetric_irreducible(group, &[2, 1]);
                    assert!(same(&coeffs[0], &triv) && same(&coeffs[2], &triv));
                    assert!(same(&coeffs[1], &triv.scale(&rat(2)).add(&chi21)));
                    println!("d=3: phi = 1 + (2 + chi(2,1)) t + t^2");
                }
                4 => {
                    let chi31 = gallery::symmetric_irreducible(group, &[3, 1]);
                    let chi22 = gallery::symmetric_irreducible(group, &[2, 2]);
                    let mid = triv.scale(&rat(3)).add(&chi31.scale(&rat(2))).add(&chi22);
                    assert!(same(&coeffs[0], &triv) && same(&coeffs[3], &triv));
                    assert!(same(&coeffs[1], &mid) && same(&coeffs[2], &mid));
                    println!(
                        "d=4: phi = 1 + (3 + 2 chi(3,1) + chi(2,2)) (t + t^2) + t^3"
                    );
                }
                _ => unreachable!(),
            }
        }
    });
}

/// The reflexive (2n-1)-simplex under Sym_2n, n = 2, 3: trivial phi of
/// degree 2n - 1 by both routes, and the n-cycle's fixed polytope counts
/// C(m+n, n) + C(m, n) with minimal period one.
#[test]
fn criterion_5_reflexive_simplex() {
    criterion(5, "reflexive simplex", 30, || {
        for n in 2..=3usize {
            let inst = gallery::standard_reflexive_simplex(n);
            let ctx = EquivariantContext::new(inst.polytope, inst.group).unwrap();
            let triv = ClassFunction::trivial(ctx.group());
            let generic = ctx.equivariant_hstar();
            let boxed = ctx.box_points_hstar().unwrap();
            for hstar in [&generic, &boxed] {
                let coeffs = hstar.coefficients().expect("simplex phi is polynomial");
                assert_eq!(coeffs.len(), 2 * n, "n = {n}");
                for c in coeffs {
                    assert!(same(c, &triv), "n = {n}: phi = 1 + t + ... + t^(2n-1)");
                }
            }

            let qp = quasi_polynomial(&gallery::pip_family(n)).unwrap();
            assert_eq!(qp.minimal_period(), 1, "n = {n}");
            for m in 0..=20i64 {
                let expected = binomial(m + n as i64, n as i64) + binomial(m, n as i64);
                assert_eq!(qp.eval(m), Rat::from_integer(expected), "n = {n}, m = {m}");
            }
        }
    });
}

/// Centrally symmetric family: h* closed form, per-class phi under the
/// inversion, binomial lower bounds and the Pascal partial-sum table.
#[test]
fn criterion_6_centrally_symmetric() {
    criterion(6, "centrally symmetric family", 60, || {
        for (k, d) in [
            (0usize, 1usize),
            (0, 2),
            (0, 3),
            (0, 4),
            (1, 2),
            (2, 4),
            (1, 3),
            (1, 4),
        ] {
            let inst = gallery::cross_family(k, d);
            let h = h_star_data(&inst.polytope).unwrap().h_star;
            assert_eq!(h, gallery::cross_family_h_star(k, d), "(k, d) = ({k}, {d})");
            for i in 0..=d {
                assert!(
                    h.coeff(i) >= binomial(d as i64, i as i64),
                    "(k, d) = ({k}, {d}): h*_{i} >= C({d}, {i})"
                );
            }
            let ctx = EquivariantContext::new(inst.polytope, inst.group).unwrap();
            let group = ctx.group();
            let hstar = ctx.equivariant_hstar();
            let minus = {
                let rows: Vec<Vec<i64>> = (0..d)
                    .map(|i| (0..d).map(|j| if i == j { -1 } else { 0 }).collect())
                    .collect();
                let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
                AffineLatticeAutomorphism::linear_from_i64(&refs)
            };
            let id_class = class_of(group, &AffineLatticeAutomorphism::identity(d));
            assert_eq!(as_poly(&hstar.per_class[id_class]), h);
            assert_eq!(
                as_poly(&hstar.per_class[class_of(group, &minus)]),
                poly(&[1, 1]).pow(d),
                "(k, d) = ({k}, {d}): phi at the inversion"
            );
        }

        // Pascal partial sums: recurrence against the closed form, with the
        // generating-polynomial cross-check built into the constructor
        for d in 1..=10usize {
            assert_eq!(gallery::pascal_partial_sums(d, 0), Int::from(1));
            for i in 1..=d {
                assert_eq!(
                    gallery::pascal_partial_sums(d, i),
                    gallery::pascal_partial_sums(d, d - i),
                    "T({d}, {i}) symmetry"
                );
                if 2 * i < d {
                    assert_eq!(
                        gallery::pascal_partial_sums(d, i),
                        gallery::pascal_partial_sums(d - 1, i)
                            + gallery::pascal_partial_sums(d - 1, i - 1),
                        "T({d}, {i}) recurrence"
                    );
                } else if 2 * i == d {
                    assert_eq!(
                        gallery::pascal_partial_sums(d, i),
                        Int::from(2) * gallery::pascal_partial_sums(d - 1, i - 1)
                            + binomial(d as i64, i as i64),
                        "T({d}, {i}) middle recurrence"
                    );
                }
            }
        }
    });
}

/// The full property suite over every bundled instance.
#[test]
fn criterion_7_property_suite() {
    criterion(7, "property suite", 600, || {
        let reports = check::run_all();
        assert!(!reports.is_empty());
        let mut properties = 0usize;
        for report in &reports {
            for outcome in &report.outcomes {
                properties += 1;
                assert!(
                    outcome.passed,
                    "{}: {} failed: {}",
                    report.instance, outcome.name, outcome.detail
                );
            }
        }
        println!(
            "{} properties hold across {} instances",
            properties,
            reports.len()
        );
    });
}

/// Random lattice polytopes with the trivial group: phi collapses to the
/// classical h*, cross-checked against a binomial-transform oracle built
/// from raw dilate counts.
#[test]
fn criterion_8_trivial_group_regression() {
    criterion(8, "trivial group regression", 60, || {
        let mut rng = ChaCha8Rng::seed_from_u64(20260823);
        let mut produced = 0usize;
        while produced < 10 {
            let d = rng.gen_range(1..=3usize);
            let points: Vec<Vec<i64>> = (0..d + 4)
                .map(|_| (0..d).map(|_| rng.gen_range(-3..=3i64)).collect())
                .collect();
            let p = RationalPolytope::from_integer_points(d, &points);
            if p.dim() != d {
                continue;
            }
            produced += 1;

            let h = h_star_data(&p).unwrap().h_star;
            // oracle: h*_i = sum_j (-1)^(i-j) C(d+1, i-j) f(j) from raw counts
            let counts: Vec<Int> = (0..=d)
                .map(|m| Int::from(p.count_lattice_points(m) as i64))
                .collect();
            let oracle = IntPolynomial::new(
                (0..=d)
                    .map(|i| {
                        (0..=i)
                            .map(|j| {
                                let sign = if (i - j) % 2 == 0 { 1 } else { -1 };
                                Int::from(sign)
                                    * binomial(d as i64 + 1, (i - j) as i64)
                                    * &counts[j]
                            })
                            .sum()
                    })
                    .collect(),
            );
            assert_eq!(h, oracle, "polytope {produced}: h* against the count oracle");

            let ctx =
                EquivariantContext::new(p, FiniteMatrixGroup::trivial(d)).unwrap();
            let hstar = ctx.equivariant_hstar();
            let coeffs = hstar.coefficients().expect("trivial group phi is polynomial");
            let as_ints: Vec<Int> = coeffs
                .iter()
                .map(|c| {
                    c.value_at_identity()
                        .as_integer()
                        .expect("integer coefficients")
                })
                .collect();
            assert_eq!(IntPolynomial::new(as_ints), h, "polytope {produced}: phi = h*");
        }
    });
}
