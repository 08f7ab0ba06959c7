mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{binary_level_violations, ec2_level_violations, random_covering};
use fdt::ec2::{fdt_2ec_with, verify_2ec_certificate, Ec2Options};
use fdt::fdt::{fdt_dive, fdt_tree_with, BranchOrder, FdtOptions};
use fdt::gen::{cv_points, gen_cv, gen_vc, random_graph};
use fdt::harness::lp_optimum;
use fdt::model::check_integer_feasible;
use fdt::{verify_certificate, Rational, Scalar};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn covering_certificates_are_valid(seed in any::<u64>(), n in 1usize..=7, shuffle in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let costs: Vec<Rational> = (0..n).map(|_| Rational::from_i64(rng.gen_range(1..=6))).collect();
        let inst = random_covering(&mut rng, n).with_objective(costs);
        let (x, _) = lp_optimum::<Rational>(&inst).unwrap();
        let order = if shuffle { BranchOrder::Shuffled(seed) } else { BranchOrder::Ascending };
        let run = fdt_tree_with(&inst, &x, &FdtOptions { order, parallel: false }).unwrap();
        let report = verify_certificate(&run.certificate, &inst).unwrap();
        prop_assert!(report.is_valid(), "{:?}", report.failure);
        let violations = binary_level_violations(&run, &x);
        prop_assert!(violations.is_empty(), "{:?}", violations);
        prop_assert!(run.certificate.factor >= Rational::from_i64(1));
    }

    #[test]
    fn vertex_cover_factor_at_most_two(seed in any::<u64>(), n in 3usize..=12, p in 0.1f64..0.7) {
        let g = random_graph(n, p, seed);
        prop_assume!(!g.edges.is_empty());
        let inst = gen_vc(&g, None).unwrap();
        let (x, _) = lp_optimum::<f64>(&inst).unwrap();
        let run = fdt_tree_with(&inst, &x, &FdtOptions::default()).unwrap();
        prop_assert!(verify_certificate(&run.certificate, &inst).unwrap().is_valid());
        prop_assert!(run.certificate.factor <= 2.0 + 1e-6);
        prop_assert!(binary_level_violations(&run, &x).is_empty());
        for level in &run.levels {
            for (a, b) in &level.branch_masses {
                prop_assert!(a + b >= 0.5 - 1e-6);
            }
        }
    }

    #[test]
    fn dives_end_in_feasible_solutions(seed in any::<u64>(), n in 3usize..=10) {
        let g = random_graph(n, 0.4, seed);
        prop_assume!(!g.edges.is_empty());
        let inst = gen_vc(&g, None).unwrap();
        let (x, _) = lp_optimum::<f64>(&inst).unwrap();
        let a = fdt_dive(&inst, &x, seed).unwrap();
        let b = fdt_dive(&inst, &x, seed).unwrap();
        prop_assert_eq!(&a.solution, &b.solution);
        prop_assert!(check_integer_feasible(&a.solution, &inst).unwrap().feasible);
        for (z, v) in a.solution.iter().zip(&x) {
            prop_assert!(*z == 0 || *v > 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn cycle_points_decompose_within_invariants(seed in 0u64..1000) {
        let matching = [(0, 4), (1, 6), (2, 5), (3, 7)];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let paths: Vec<usize> = (0..4).map(|_| rng.gen_range(1..=3)).collect();
        let points = cv_points(8, &matching, &paths, seed, 8);
        prop_assume!(points.is_ok(), "no fractional vertex for these objectives");
        for inst in points.unwrap() {
            let x = inst.point.x.clone();
            let run = fdt_2ec_with(&inst.point, &Ec2Options { parallel: false }).unwrap();
            let report = verify_2ec_certificate(&run.certificate, &inst.point.graph).unwrap();
            prop_assert!(report.is_valid(), "{:?}", report.failure);
            let violations = ec2_level_violations(&run, &x);
            prop_assert!(violations.is_empty(), "{:?}", violations);
            for level in &run.levels {
                for g in &level.branch_masses {
                    prop_assert!(g[0].clone() + g[1].clone() + g[2].clone() >= Rational::new(2.into(), 3.into()));
                }
            }
        }
    }
}

/// Cuts found for two branches in the same separation round used to be
/// mistaken for repeated rows.
#[test]
fn cut_shared_between_branches_in_one_round() {
    let matching = [(0, 2), (1, 5), (3, 7), (4, 8), (6, 9)];
    let inst = gen_cv(10, &matching, &[1; 5], 0).unwrap();
    let float = inst.point.convert::<f64>();
    let run = fdt_2ec_with(&float, &Ec2Options::default()).unwrap();
    assert!(verify_2ec_certificate(&run.certificate, &float.graph).unwrap().is_valid());
    let exact = fdt_2ec_with(&inst.point, &Ec2Options::default()).unwrap();
    assert!(verify_2ec_certificate(&exact.certificate, &inst.point.graph).unwrap().is_valid());
    assert!(exact.certificate.factor <= Rational::new(6.into(), 5.into()));
}
