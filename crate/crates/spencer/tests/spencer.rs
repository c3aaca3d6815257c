use binforms::module::{multiset, Module};
use exactalg::random::random_scalars;
use exactalg::scalar::{int, ratio};
use exactalg::Scalar;
use spencer::coords::{check_spencer_formula, torsion_offset, PhiCoords, SpencerFormula, TorsionCoords};
use spencer::lla::{prolongation_and_h02, LinearLieAlgebra};
use spencer::torsion::{
    component_constraint_rank, contact_restriction_identity, delta_vanishing, intrinsic_adjustment, square_pair,
    torsion_criterion_solve,
};
use spencer::{spencer_in_coords, SpencerError};

#[test]
fn dimensions_and_cokernel_type() {
    let v = Module::irreducible(1, 2);
    let d = prolongation_and_h02(&LinearLieAlgebra::g1k(2), Some(&v)).unwrap();
    assert_eq!((d.dim_domain, d.dim_target, d.prolongation, d.h02), (42, 90, 0, 48));
    let coker = d.cokernel.unwrap();
    assert_eq!(coker.multiplicities(), multiset(&[(1, 4), (1, 6), (3, 0), (3, 4)]));
    assert_eq!(d.image.unwrap().accounted_dim(), 42);

    let g3 = prolongation_and_h02(&LinearLieAlgebra::g_binary(3), None).unwrap();
    assert_eq!(g3.prolongation, 0);
}

#[test]
fn spencer_map_is_equivariant() {
    let g = LinearLieAlgebra::g1k(2);
    let v = Module::irreducible(1, 2);
    assert!(g.spencer_equivariance(v.generators()));
}

#[test]
fn closed_form_holds_symbolically() {
    let phi = PhiCoords::symbolic();
    let check = check_spencer_formula(&phi, &SpencerFormula::default()).unwrap();
    assert_eq!(check.variables, 42);
    assert!(check.passed(), "{check:?}");
}

#[test]
fn perturbed_closed_form_fails() {
    let phi = PhiCoords::symbolic();
    let mut f = SpencerFormula::default();
    f.s32 = ratio(-1, 5);
    assert!(!check_spencer_formula(&phi, &f).unwrap().passed());
    let mut f = SpencerFormula::default();
    f.s12pp[2] = ratio(7, 3);
    assert!(!check_spencer_formula(&phi, &f).unwrap().passed());
}

#[test]
fn divisibility_criterion() {
    let t = torsion_criterion_solve().unwrap();
    assert_eq!(t.constraint_rank, 60);
    assert_eq!(t.solution_dim, 30);
    assert!(t.equals_locus());
    assert!(t.free_block_unconstrained);
    assert_eq!(t.free_block_dim, 4);

    // the solution space is a submodule of the torsion space
    let v = Module::irreducible(1, 2);
    let target = v.dual().wedge2().tensor(&v);
    let vectors: Vec<Vec<Scalar>> = t
        .kernel
        .iter()
        .map(|k| {
            TorsionCoords::from_scalars(k)
                .unwrap()
                .encode()
                .unwrap()
                .iter()
                .map(|p| p.constant_value().unwrap_or_default())
                .collect()
        })
        .collect();
    let (sub, _) = target.submodule(&vectors).unwrap();
    assert_eq!(sub.dim(), 30);

    let (p, q) = square_pair();
    assert_eq!(component_constraint_rank("s16", &p, &q).unwrap(), 14);
}

#[test]
fn normal_form_of_connections() {
    // a random point of the solution space
    let crit = torsion_criterion_solve().unwrap();
    let weights = random_scalars(crit.kernel.len(), 11, 7);
    let mut flat = vec![int(0); 90];
    for (w, k) in weights.iter().zip(&crit.kernel) {
        for (f, x) in flat.iter_mut().zip(k) {
            *f += w * x;
        }
    }
    let t = TorsionCoords::from_scalars(&flat).unwrap();
    let (phi, rank) = intrinsic_adjustment(&t).unwrap();
    assert_eq!(rank, 26);
    assert!(phi.get("r14").is_zero() && phi.get("r12pp").is_zero());
    let image = spencer_in_coords(&phi).unwrap().scalar_flat().unwrap();
    for (i, (a, b)) in image.iter().zip(&flat).enumerate() {
        if torsion_offset("s30").contains(&i) {
            assert_eq!(*a, int(0));
        } else {
            assert_eq!(a, b);
        }
    }

    // pure free block needs no adjustment
    let mut pure = vec![int(0); 90];
    for k in torsion_offset("s30") {
        pure[k] = int(k as i64);
    }
    let (phi, _) = intrinsic_adjustment(&TorsionCoords::from_scalars(&pure).unwrap()).unwrap();
    assert!(phi.forms.iter().all(|f| f.is_zero()));

    // outside the solution space the system is inconsistent
    let mut bad = vec![int(0); 90];
    bad[torsion_offset("s16").start] = int(1);
    assert_eq!(intrinsic_adjustment(&TorsionCoords::from_scalars(&bad).unwrap()).unwrap_err(), SpencerError::Inconsistent);
}

#[test]
fn contact_identity() {
    let r = contact_restriction_identity().unwrap();
    assert!(r.holds(), "{r:?}");
    assert_eq!(r.restricted_pairs, 6);
    // for an unrestricted vector-valued form the expression does not vanish
    assert!(r.full_nonzero > 0);
}

#[test]
fn obstruction_map_vanishes() {
    for k in 2..=4 {
        let r = delta_vanishing(k).unwrap();
        assert!(r.vanishes(), "{r:?}");
        assert!(r.single_test_isolates_top);
    }
}
