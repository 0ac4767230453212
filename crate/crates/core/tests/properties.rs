//! Property tests for the algebraic laws the library relies on. Each case
//! draws a seed and builds its inputs from the shared generators.

mod common;

use common::*;
use loopstrata::formaltype::{orbit_equivalent, realize, rho_act};
use loopstrata::reduce::{gauge, kernel_solve, reduce_to_formal_type, GaugeElement};
use loopstrata::scalars::parse::{parse_scalar, parse_series};
use loopstrata::scalars::{q, qi, Precision};
use loopstrata::strata::{leading_stratum, slope, Connection};
use loopstrata::torus::pi_s;
use loopstrata::{Cyclotomic, LoopMatrix, PuiseuxSeries};
use proptest::prelude::*;
use rand::Rng;

fn scalar(rng: &mut impl Rng, order: u32) -> Cyclotomic {
    (0..3).fold(Cyclotomic::zero(), |acc, _| {
        acc + Cyclotomic::zeta_pow(order, rng.gen_range(0..order as i64)).scale(&nonzero_q(rng))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclotomic_field_laws(seed in any::<u64>(), order in 1u32..=12) {
        let mut rng = rng(seed);
        let (a, b, c) = (scalar(&mut rng, order), scalar(&mut rng, order), scalar(&mut rng, 6));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if let Some(inv) = a.inv() {
            prop_assert!((&a * &inv).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn literals_round_trip_through_display(seed in any::<u64>(), ram in 1u32..=4, order in 1u32..=8) {
        let mut rng = rng(seed);
        let terms: Vec<(i64, Cyclotomic)> = (0..4).map(|_| (rng.gen_range(-6i64..=6), scalar(&mut rng, order))).collect();
        let prec = if rng.gen_bool(0.5) { Precision::Exact } else { Precision::Below(7) };
        let s = PuiseuxSeries::from_terms(ram, prec, terms.clone());
        prop_assert_eq!(parse_series(&s.to_string()).unwrap(), s);
        let c = &terms[0].1;
        prop_assert_eq!(&parse_scalar(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn gauge_action_composes(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = rng(seed);
        let c = Connection::new(random_matrix(&mut rng, n, 4));
        let g1 = random_gauge(&mut rng, n, &qi(10));
        let g2 = random_gauge(&mut rng, n, &qi(10));
        let direct = gauge(&g1.compose(&g2), &c);
        let iterated = gauge(&g1, &gauge(&g2, &c));
        prop_assert!((direct.matrix() - iterated.matrix()).is_zero_to_precision());
        let back = gauge(&g1.invert(), &gauge(&g1, &c));
        prop_assert!((back.matrix() - c.matrix()).is_zero_to_precision());
    }

    #[test]
    fn exact_gauges_compose_exactly(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = rng(seed);
        let c = Connection::new(random_matrix(&mut rng, n, 5));
        let h = GaugeElement::constant(&random_constant(&mut rng, n)).unwrap();
        let mu: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        let s = GaugeElement::shear(&mu);
        prop_assert_eq!(gauge(&h.compose(&s), &c), gauge(&h, &gauge(&s, &c)));
    }

    #[test]
    fn kernel_solve_inverts_the_leading_commutator(seed in any::<u64>(), t in 0usize..6) {
        let mut rng = rng(seed);
        let torus = &regular_tori()[t];
        let x = torus.base_point();
        let r = random_depth(&mut rng, torus);
        let a = random_formal_type(&mut rng, torus, &r);
        let st = leading_stratum(&Connection::new(a.matrix()), &x).unwrap();
        let l = q(rng.gen_range(1..=6), 6);
        let raw = random_homogeneous(&mut rng, &x, &l);
        // the preimage orthogonal to the Cartan is the one kernel_solve returns
        let preimage = &raw - &pi_s(torus, &raw).unwrap().to_matrix(torus);
        let y = preimage.commutator(st.beta0());
        let solved = kernel_solve(&st, torus, &y, &l).unwrap();
        prop_assert!((&solved - &preimage).is_zero_to_precision());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reducing_a_formal_type_returns_it(seed in any::<u64>(), t in 0usize..6) {
        let mut rng = rng(seed);
        let torus = &regular_tori()[t];
        let r = random_depth(&mut rng, torus);
        let a = random_formal_type(&mut rng, torus, &r);
        let res = reduce_to_formal_type(&realize(&a).unwrap(), torus, None, &qi(2)).unwrap();
        prop_assert_eq!(&res.formal_type, &a);
        prop_assert!((res.p.matrix() - &LoopMatrix::identity(torus.n())).is_zero_to_precision());
    }

    #[test]
    fn formal_type_is_stable_under_more_precision(seed in any::<u64>(), t in 0usize..6) {
        let mut rng = rng(seed);
        let torus = &regular_tori()[t];
        let x = torus.base_point();
        let r = random_depth(&mut rng, torus);
        let a = random_formal_type(&mut rng, torus, &r);
        let tail = random_homogeneous_terms(&mut rng, &x, &qi(0), &qi(2), 3);
        let full = &a.matrix() + &tail;
        for n in [2, 4] {
            let c = Connection::new(full.truncate_q(&qi(n)));
            let res = reduce_to_formal_type(&c, torus, None, &qi(n)).unwrap();
            prop_assert_eq!(&res.formal_type, &a);
        }
    }

    #[test]
    fn slope_of_a_perturbed_formal_type_is_its_depth(seed in any::<u64>(), t in 0usize..6) {
        let mut rng = rng(seed);
        let torus = &regular_tori()[t];
        let r = random_depth(&mut rng, torus);
        let a = random_formal_type(&mut rng, torus, &r);
        let tail = random_homogeneous_terms(&mut rng, &torus.base_point(), &qi(0), &qi(2), 3);
        prop_assert_eq!(slope(&Connection::new(&a.matrix() + &tail)).unwrap(), r);
    }

    #[test]
    fn orbit_equivalence_is_symmetric(seed in any::<u64>(), t in 0usize..6) {
        let mut rng = rng(seed);
        let torus = &regular_tori()[t];
        let r = random_depth(&mut rng, torus);
        let a = random_formal_type(&mut rng, torus, &r);
        let b = rho_act(&random_word(&mut rng, torus, 5), &a).unwrap();
        let back = orbit_equivalent(&b, &a).expect("inverse witness");
        prop_assert_eq!(rho_act(&back, &b).unwrap(), a);
    }
}
