use binforms::biform::basis_pairing_table;
use excalc::derive::{curvature_ansatz, fit_connection_scale, fit_curvature_sign};
use excalc::form::{bit, components, fpair, FormExpr, NGEN, OMEGA00, OMEGA02, OMEGA20, THETA};
use excalc::ideal::{local_symmetry_obstruction, restriction_functions, restriction_ideal};
use excalc::system::{param, parameters, theta_v};
use excalc::*;
use exactalg::random::random_rational_point;
use exactalg::scalar::{int, one};
use exactalg::Poly;
use proptest::prelude::*;

#[test]
fn closure_in_both_torsion_free_modes() {
    for mode in [Mode::H12, Mode::G12] {
        let report = StructureSystem::new(mode).d_squared_report();
        assert_eq!(report.residuals.len(), 26);
        assert!(report.all_zero(), "{mode}: {:?}", report.nonzero());
    }
}

#[test]
fn perturbed_curvature_coefficient_breaks_closure() {
    let mut k = Coefficients::default();
    k.curvature[4] = Poly::constant(binforms::biform::form_ctx(), int(-6));
    let report = StructureSystem::with_coefficients(Mode::H12, k).unwrap().d_squared_report();
    assert!(!report.all_zero());
}

/// With any curvature, `d²θ` is `-ε <<Ω,θ>>_1`: the first Bianchi
/// combination is the only thing the curvature contributes.
#[test]
fn theta_closure_residual_is_the_bianchi_combination() {
    let zero_curv = {
        let mut k = Coefficients::default();
        k.curvature_sign = Poly::zero(binforms::biform::form_ctx());
        StructureSystem::with_coefficients(Mode::G12, k).unwrap()
    };
    for g in THETA {
        assert!(zero_curv.exterior_d(zero_curv.gen_d(g)).is_zero());
    }
    let mut k = Coefficients::default();
    k.curvature[4] = Poly::constant(binforms::biform::form_ctx(), int(-6));
    let eps = k.curvature_sign.clone();
    let (om20, om02) = curvature_ansatz(&k.curvature);
    let sys = StructureSystem::with_coefficients(Mode::G12, k).unwrap();
    let th = theta_v();
    let bianchi = fpair(&om20, &th, 1, 0).add(&fpair(&om02, &th, 0, 1)).mul_fn(&eps.neg_poly());
    let predicted = components(&bianchi, 1, 2).unwrap();
    let mut any_nonzero = false;
    for (i, g) in THETA.iter().enumerate() {
        let r = sys.exterior_d(sys.gen_d(*g));
        any_nonzero |= !r.is_zero();
        assert_eq!(r, predicted[i]);
    }
    assert!(any_nonzero);
}

#[test]
fn torsion_mode_residual_matches_leibniz_prediction() {
    let sys = StructureSystem::new(Mode::TorsionS30);
    let predicted = sys.torsion_prediction().unwrap();
    let mut nonzero = 0;
    for (i, g) in THETA.iter().enumerate() {
        let r = sys.exterior_d(sys.gen_d(*g));
        nonzero += usize::from(!r.is_zero());
        assert_eq!(r, predicted[i], "component {i}");
    }
    assert!(nonzero > 0);
    assert_eq!(sys.d_squared_report().residuals.len(), 30);
}

/// The coframe rule against an oracle assembled from the weight-basis
/// pairing table rather than from polynomial pairings of forms.
#[test]
fn coframe_rule_matches_pairing_table() {
    let sys = StructureSystem::new(Mode::G12);
    let mut oracle = vec![FormExpr::zero(); 6];
    let (_, _, t20) = basis_pairing_table((2, 0), (1, 2), 1, 0).unwrap();
    let (_, _, t02) = basis_pairing_table((0, 2), (1, 2), 0, 1).unwrap();
    for (table, gens) in [(&t20, OMEGA20), (&t02, OMEGA02)] {
        for (a, row) in table.iter().enumerate() {
            for (b, entry) in row.iter().enumerate() {
                let wedge = FormExpr::generator(gens[a]).wedge(&FormExpr::generator(THETA[b]));
                for (idx, c) in entry {
                    oracle[*idx].add_assign_scaled(&wedge, &-c.clone());
                }
            }
        }
    }
    for (i, o) in oracle.iter_mut().enumerate() {
        o.add_assign_scaled(&FormExpr::generator(OMEGA00).wedge(&FormExpr::generator(THETA[i])), &-one());
        assert_eq!(*sys.gen_d(THETA[i]), *o, "component {i}");
    }
}

#[test]
fn bianchi_space_and_ansatz() {
    let r = bianchi_solve().unwrap();
    assert_eq!(r.unknowns, 105);
    assert_eq!(r.solution_dim, 6);
    assert_eq!(r.ansatz_first_slot, ["-4", "1"]);
    assert_eq!(r.ansatz_second_slot, ["3", "1", "-7"]);
    assert!(r.default_ansatz_solves);
    assert_eq!(r.ansatz_image_rank, 6);
    assert!(r.ansatz_spans_solutions);
    assert!(r.invariant);
    assert!(r.passed());
}

#[test]
fn derivation_recovers_the_rules() {
    let r = derive_curvature_derivatives().unwrap();
    let v = |s: &excalc::derive::StageSolution, k: &str| exactalg::scalar::format_short(s.value(k).unwrap());
    assert_eq!((v(&r.da, "ka"), v(&r.da, "sa"), v(&r.da, "be0")), ("2".into(), "-1".into(), "3".into()));
    assert_eq!(
        (v(&r.db, "kb"), v(&r.db, "sb"), v(&r.db, "g0"), v(&r.db, "g1")),
        ("3".into(), "-1".into(), "2".into(), "1".into())
    );
    assert_eq!((v(&r.dc, "kc"), v(&r.dc, "g2"), v(&r.dc, "g3")), ("4".into(), "-4/3".into(), "-7".into()));
    assert_eq!(r.dc_generic_freedom, 2);
    assert!(r.generic_freedom_is_c_shift);
    assert!(r.matches_rules);
}

#[test]
fn fitted_connection_conventions() {
    assert_eq!(fit_curvature_sign().unwrap().values["eps"], "-1");
    assert_eq!(fit_connection_scale().unwrap().values["h"], "-1/2");
}

#[test]
fn flat_model_has_closed_parameters() {
    let sys = StructureSystem::new(Mode::G12);
    let zero = parameters().iter().map(|p| (p.to_string(), exactalg::scalar::zero())).collect();
    for p in parameters() {
        if p != "c" {
            assert!(sys.par_d(p).subs_values(&zero).is_zero(), "{p}");
        }
    }
}

#[test]
fn frobenius_conditions_of_restriction_ideal() {
    let sys = StructureSystem::new(Mode::H12);
    let f = frobenius_residual(&restriction_ideal(), &sys);
    assert!(!f.closed());
    assert_eq!(f.rank, 3);
    assert!(f.spans(&restriction_functions()));
    // a different span is rejected
    let wrong: Vec<Poly> =
        (0..3).map(|i| param(&format!("a20_{i}")).sub_poly(&param(&format!("a02_{i}")))).collect();
    assert!(!f.spans(&wrong));
}

#[test]
fn restriction_chain_certificates() {
    let r = restriction_chain(7, 4).unwrap();
    assert!(r.conditions_hold(), "{r:?}");
    assert_eq!(r.b_constraint_rank, 2);
    assert!(r.independent_generically());
    // on the restricted locus the five differentials drop rank
    assert_eq!(r.differential_rank_locus, vec![4; 4]);
}

#[test]
fn local_symmetry_obstruction_identity() {
    for mode in [Mode::H12, Mode::G12] {
        let r = local_symmetry_obstruction(&StructureSystem::new(mode));
        assert!(r.matches, "{} vs {}", r.residual, r.expected);
    }
}

fn small_form(seed: u64, degree: u32) -> FormExpr {
    let vals = random_rational_point(&["k0", "k1", "k2"], seed);
    let mut f = FormExpr::zero();
    let names = parameters();
    for t in 0..3u64 {
        let mut mask: u32 = 0;
        let mut s = seed.wrapping_mul(31).wrapping_add(t * 7);
        while mask.count_ones() < degree {
            mask |= bit((s % NGEN as u64) as usize);
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407) >> 3;
        }
        let p = param(names[(seed as usize + t as usize) % names.len()]).scale(&vals[&format!("k{t}")]);
        f.add_term(mask, &p, &one());
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exterior_d_is_an_anti_derivation(s1 in 0u64..10_000, s2 in 0u64..10_000, d1 in 0u32..3, d2 in 0u32..3) {
        let sys = StructureSystem::new(Mode::G12);
        let a = small_form(s1, d1);
        let b = small_form(s2, d2);
        let lhs = sys.exterior_d(&a.wedge(&b));
        let sign = if d1 % 2 == 0 { one() } else { -one() };
        let mut rhs = sys.exterior_d(&a).wedge(&b);
        rhs.add_assign_scaled(&a.wedge(&sys.exterior_d(&b)), &sign);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_squared_vanishes_on_random_forms(s in 0u64..10_000, d in 0u32..3) {
        let sys = StructureSystem::new(Mode::H12);
        let a = small_form(s, d);
        prop_assert!(sys.exterior_d(&sys.exterior_d(&a)).is_zero());
    }
}
