use binforms::action::{act_poly, GENERATORS};
use binforms::biform::{form_ctx, weight_basis};
use excalc::form::{function_components, OMEGA00};
use excalc::ideal::{gradient_form_b, restriction_substitution};
use excalc::system::{a02_form, a20_form, b_form, param, system_ctx, A02, A20, B};
use excalc::{FormExpr, Mode, StructureSystem};
use exactalg::random::random_scalars;
use exactalg::scalar::{int, ratio, zero};
use exactalg::{context, Poly, Scalar};
use integrals::jmatrix::{h12, COLUMNS};
use integrals::point::coordinates;
use integrals::rank::{kernel_vectors, rank_at, specialized_j};
use integrals::*;
use proptest::prelude::*;
use std::collections::BTreeMap;

fn sym() -> CValue {
    CValue::Symbolic
}

#[test]
fn contraction_identity_reproduces_the_differentials() {
    let j = assemble_j(&sym());
    assert!(j.contraction_mismatches(&sym()).is_empty());
    let jc = assemble_j(&CValue::Value(ratio(5, 3)));
    assert!(jc.contraction_mismatches(&CValue::Value(ratio(5, 3))).is_empty());
}

/// At the flat point only the `c θ` term of the `b` rows survives.
#[test]
fn flat_point_leaves_only_the_c_block() {
    let c = int(7);
    let j = assemble_j(&sym()).matrix.eval(&CurvaturePoint::zero(c.clone()).values()).unwrap();
    let mut nonzero = 0;
    for i in 0..12 {
        for k in 0..12 {
            if !num_traits::Zero::is_zero(j.get(i, k)) {
                assert!(i >= 6 && k < 6, "entry ({i},{k})");
                nonzero += 1;
            }
        }
    }
    assert!(nonzero > 0);
    assert_eq!(j.rank(), 6);
}

/// The connection columns of the `b` rows are the infinitesimal action of
/// the connection on `b`, read off independently of the assembly.
#[test]
fn connection_columns_of_b_rows_are_the_action_on_b() {
    let j = assemble_j(&sym());
    let bf = FormExpr::function(b_form());
    let act = excalc::fpair(&excalc::system::omega20_v(), &bf, 1, 0)
        .add(&excalc::fpair(&excalc::system::omega02_v(), &bf, 0, 1))
        .neg();
    let comps = excalc::form::components(&act, 1, 2).unwrap();
    for (i, comp) in comps.iter().enumerate() {
        for (k, g) in COLUMNS.iter().enumerate().skip(6) {
            let expected = comp.coefficient(excalc::form::bit(*g)).cloned().unwrap_or_else(|| Poly::zero(form_ctx()));
            assert_eq!(*j.matrix.get(6 + i, k), expected, "row b{i} column {k}");
        }
    }
}

#[test]
fn first_integrals_are_conserved() {
    let r = first_integral_identity(&sym());
    assert!(r.holds(), "{r:?}");
    assert!(first_integral_identity(&CValue::Value(ratio(-2, 5))).holds());
}

#[test]
fn perturbed_first_integrals_are_not_conserved() {
    let r = first_integral_identity_variant(&sym(), Variant::PerturbedE1);
    assert!(r.nonzero_entries[0] > 0);
    let r = first_integral_identity_variant(&sym(), Variant::LiteralP24);
    assert_eq!(r.nonzero_entries[0], 0);
    assert!(r.nonzero_entries[1] > 0);
}

#[test]
fn conservation_persists_on_the_specialization() {
    let zeros: BTreeMap<String, Scalar> =
        [A20[0], A20[2], A02[0], A02[2]].iter().map(|n| (n.to_string(), zero())).collect();
    let j = specialized_j(&int(3));
    let (f1, f2) = first_integrals(&CValue::Value(int(3)));
    for f in [f1, f2] {
        let g: Vec<Poly> = gradient(&f).iter().map(|p| p.subs_values(&zeros)).collect();
        for k in 0..12 {
            let mut acc = Poly::zero(system_ctx());
            for (i, gi) in g.iter().enumerate() {
                acc = acc.add_poly(&gi.mul_poly(j.get(i, k)));
            }
            assert!(acc.is_zero());
        }
    }
}

#[test]
fn vanishing_under_restriction_substitution() {
    let (f1, f2) = first_integrals(&sym());
    let u: [Poly; 4] = std::array::from_fn(|k| Poly::variable(&format!("u{k}")));
    let mut sub = restriction_substitution();
    for (name, p) in B.iter().zip(gradient_form_b(&u)) {
        sub.insert(name.to_string(), p);
    }
    assert!(f1.subs(&sub).unwrap().is_zero());
    // the second integral is not forced to vanish there
    assert!(!f2.subs(&sub).unwrap().is_zero());
}

#[test]
fn gradient_rows_invert_the_defining_equation() {
    let (f1, f2) = first_integrals(&sym());
    for f in [f1, f2] {
        let rows = gradient_rows(&f);
        assert_eq!(rows.gradient(), gradient(&f));
        let flat = CurvaturePoint::zero(int(2)).values();
        assert!(rows.r20.iter().chain(&rows.r02).chain(&rows.r12).all(|p| p.subs_values(&flat).is_zero()));
    }
}

#[test]
fn kernel_vectors_and_rank_certificate() {
    let (_, ok) = kernel_vectors();
    assert!(ok);
    assert!(specialized_j(&ratio(1, 2)).det().unwrap().is_zero());
    for seed in 0..5 {
        let cert = rank_certificate(&ratio(3, 7), 100 + seed).unwrap();
        assert!(cert.passed(), "{cert:?}");
        assert_eq!(cert.certified.rank, 10);
    }
}

#[test]
fn rank_dichotomy_on_sampled_points() {
    let r = rank_dichotomy(&int(-2), 40, 20);
    assert!(r.samples.len() >= 20);
    assert!(r.consistent, "{:?}", r.samples.iter().filter(|p| !p.dichotomy_holds()).collect::<Vec<_>>());
    assert!(r.singular_samples >= 2);
}

/// Replaying a recorded point reproduces the recorded rank.
#[test]
fn recorded_point_replays() {
    let cert = rank_certificate(&int(1), 9).unwrap();
    let text = point_to_json(&cert.certified.point);
    let replay = rank_at(&point_from_json(&text).unwrap(), None);
    assert_eq!(replay.rank, cert.certified.rank);
}

#[test]
fn symmetry_fields_preserve_the_coframe() {
    let r = integrals::fields::symmetry_report();
    assert!(r.fields_nonzero);
    assert!(r.lie_derivatives_vanish, "{:?}", r.nonvanishing_lie_derivatives);
    assert!(r.bracket_vanishes);
    // the fields vanish at the flat point, so they cannot reproduce the coframe
    assert!(!r.lie_derivatives_identity);
}

#[test]
fn first_integrals_are_equivariant() {
    let (f1, f2) = first_integrals(&sym());
    let blocks = [(a20_form(), (2, 0)), (a02_form(), (0, 2)), (b_form(), (1, 2))];
    for (g, slot) in GENERATORS {
        // infinitesimal action on the coordinates
        let mut delta = Vec::new();
        for (form, (n, m)) in &blocks {
            delta.extend(function_components(&act_poly(g, slot, form), *n, *m).unwrap());
        }
        for f in [&f1, &f2] {
            let mut acc = Poly::zero(system_ctx());
            for (gi, di) in gradient(f).iter().zip(&delta) {
                acc = acc.add_poly(&gi.mul_poly(di));
            }
            assert!(acc.is_zero(), "{g:?} {slot:?}");
        }
    }
}

/// With the scalar connection component present, the integrals are
/// relative invariants of weights 8 and 12.
#[test]
fn scalar_component_weights() {
    let sys = StructureSystem::new(Mode::G12);
    let (f1, f2) = first_integrals(&sym());
    for (f, w) in [(f1, 8), (f2, 12)] {
        let expected = FormExpr::generator(OMEGA00).mul_fn(&f.scale(&int(w)));
        assert_eq!(sys.d_function(&f), expected);
    }
}

#[test]
fn structure_constants_at_points() {
    let flat = structure_constants(&CurvaturePoint::zero(int(4)));
    assert_eq!((flat.c1.as_str(), flat.c2.as_str()), ("0", "0"));
    assert!(flat.restriction_admissible);
    let pt = CurvaturePoint::random(5);
    assert_eq!(structure_constants(&pt), structure_constants(&CurvaturePoint::random(5)));
    // a point of the restricted locus
    let mut r = CurvaturePoint::random(6);
    for i in 0..3 {
        r.a20[i] = &r.a02[i] * ratio(3, 2);
    }
    let u: [Poly; 4] = std::array::from_fn(|k| Poly::constant(form_ctx(), int(k as i64 - 1)));
    for (i, p) in gradient_form_b(&u).iter().enumerate() {
        r.b[i] = p.constant_value().unwrap();
    }
    assert!(structure_constants(&r).restriction_admissible);
    assert!(!structure_constants(&pt).restriction_admissible);
}

/// `<u,v>_p` in the first slot straight from the alternating derivative sum.
fn slot1_pairing(u: &Poly, v: &Poly, p: u32) -> Poly {
    let mut acc = Poly::zero(form_ctx());
    let mut fact = int(1);
    for k in 1..=p {
        fact *= int(k as i64);
    }
    for k in 0..=p {
        let du = u.diff_multi(&[("x1", k), ("y1", p - k)]);
        let dv = v.diff_multi(&[("x1", p - k), ("y1", k)]);
        let sign = if k % 2 == 0 { 1 } else { -1 };
        acc.add_assign_scaled(&du.mul_poly(&dv), &(exactalg::scalar::binomial(p, k) * int(sign) / &fact));
    }
    acc
}

#[test]
fn invariants_at_a_simple_point() {
    let mut pt = CurvaturePoint::zero(int(0));
    pt.a20[1] = int(1);
    let inv = invariant_functions(&pt);
    let xy = weight_basis(2, 0)[1].clone();
    assert_eq!(inv.d1, slot1_pairing(&xy, &xy, 2));
    assert!(inv.d2.is_zero() && inv.e1.is_zero());
}

fn directional_oracle(f: &Poly, pt: &CurvaturePoint, v: &[Scalar]) -> Scalar {
    let ctx = context(["t"]);
    let t = Poly::var_in(&ctx, "t").unwrap();
    let mut sub: BTreeMap<String, Poly> = BTreeMap::new();
    for (k, (name, x)) in coordinates().iter().zip(pt.vector()).enumerate() {
        sub.insert(name.to_string(), t.scale(&v[k]).add_poly(&Poly::constant(&ctx, x)));
    }
    sub.insert("c".into(), Poly::constant(&ctx, pt.c.clone()));
    f.subs(&sub).unwrap().diff("t", 1).eval(&BTreeMap::from([("t".to_string(), zero())])).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn gradient_matches_directional_derivative(seed in 0u64..100_000) {
        let pt = CurvaturePoint::random(seed);
        let v = random_scalars(12, seed ^ 0x5a5a, 9);
        let (f1, f2) = first_integrals(&sym());
        for f in [f1, f2] {
            let g = gradient(&f);
            let mut dot = zero();
            for (gi, vi) in g.iter().zip(&v) {
                dot += gi.eval(&pt.values()).unwrap() * vi;
            }
            prop_assert_eq!(dot, directional_oracle(&f, &pt, &v));
        }
    }

    #[test]
    fn integrals_scale_with_weights(seed in 0u64..100_000, t in 1i64..5) {
        let pt = CurvaturePoint::random(seed);
        let s = pt.scaled(&int(t));
        let (f1, f2) = first_integrals(&sym());
        let t8 = int(t).pow(8);
        let t12 = int(t).pow(12);
        prop_assert_eq!(f1.eval(&s.values()).unwrap(), f1.eval(&pt.values()).unwrap() * t8);
        prop_assert_eq!(f2.eval(&s.values()).unwrap(), f2.eval(&pt.values()).unwrap() * t12);
    }

    #[test]
    fn flat_model_has_zero_gradient_rows(c in -20i64..20) {
        let (f1, _) = first_integrals(&CValue::Value(int(c)));
        let rows = gradient_rows(&f1);
        let flat = CurvaturePoint::zero(int(c)).values();
        prop_assert!(rows.r12.iter().all(|p| p.subs_values(&flat).is_zero()));
    }
}

#[test]
fn h12_system_is_shared() {
    assert_eq!(h12().mode(), Mode::H12);
    assert_eq!(param("c").total_degree(), Some(1));
}
