use std::f64::consts::{FRAC_2_PI, PI};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use schwarz_core::linalg::CMat;
use schwarz_core::mappings::{
    lambda0, lambda0_sampled, nabla_norm, random_ball_map, random_ball_map_with, random_boundary_map, BoundaryFamily, MapConstraints,
    Mapping, PluriharmonicMap, RandomFamily, Terms,
};
use schwarz_core::oracles::{fd_derivatives, numeric_bergman_metric0, numeric_operator_norm};
use schwarz_core::spaces::{LinearMap, Space, SphereSearch};
use schwarz_core::symmetric::TripleSystem;
use schwarz_core::theorems::{boundary_bound, interior_bound, mu_k, pairing_boundary_bound, PairingTarget, TheoremId};
use schwarz_core::C64;

fn spaces() -> Vec<Space<f64>> {
    vec![
        Space::euclidean(1),
        Space::euclidean(3),
        Space::sup(2),
        Space::one(3),
        Space::lp(2, 3.0).unwrap(),
        Space::product(&[2, 1]).unwrap(),
    ]
}

fn systems() -> Vec<TripleSystem> {
    vec![
        TripleSystem::hilbert_ball(1).unwrap(),
        TripleSystem::hilbert_ball(3).unwrap(),
        TripleSystem::polydisc(2).unwrap(),
        TripleSystem::product_of_balls(&[2, 1]).unwrap(),
    ]
}

const FAMILIES: [RandomFamily; 3] = [RandomFamily::PolyScaled, RandomFamily::SliceBlaschke, RandomFamily::HarmonicSlice];

fn pick<T: Clone>(v: &[T], rng: &mut ChaCha8Rng) -> T {
    v[rng.random_range(0..v.len())].clone()
}

fn random_map(rng: &mut ChaCha8Rng, cons: MapConstraints) -> PluriharmonicMap<f64> {
    let all = spaces();
    let (dom, codom) = (pick(&all, rng), pick(&all, rng));
    let fam = if cons.holomorphic { pick(&FAMILIES[..2], rng) } else { pick(&FAMILIES, rng) };
    let degree = rng.random_range(1..=4);
    random_ball_map_with(&dom, &codom, fam, degree, cons, rng).unwrap().0
}

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cases(256))]

    #[test]
    fn norm_axioms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for space in spaces() {
            let x = space.gaussian(&mut rng);
            let y = space.gaussian(&mut rng);
            let lambda = C64::from_polar(rng.random_range(0.0..3.0), rng.random_range(0.0..6.3));
            let (nx, ny) = (space.norm(&x).unwrap(), space.norm(&y).unwrap());
            let sum: Vec<C64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            let scaled: Vec<C64> = x.iter().map(|a| a * lambda).collect();
            prop_assert!(nx > 0.0);
            prop_assert!(space.norm(&sum).unwrap() <= nx + ny + 1e-12);
            prop_assert!((space.norm(&scaled).unwrap() - lambda.norm() * nx).abs() <= 1e-12 * (1.0 + nx));
        }
    }

    #[test]
    fn support_functionals_norm_their_point(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for space in spaces() {
            let x = space.gaussian(&mut rng);
            let l = space.support_functional(&x).unwrap();
            let nx = space.norm(&x).unwrap();
            prop_assert!((l.eval(&x).re - nx).abs() <= 1e-12 * (1.0 + nx));
            prop_assert!(l.eval(&x).im.abs() <= 1e-12 * (1.0 + nx));
            prop_assert!(space.dual_norm(&l.coefficients) <= 1.0 + 1e-12);
            for _ in 0..16 {
                let u = space.unit_sphere_sample(&mut rng);
                prop_assert!(l.eval(&u).norm() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = random_map(&mut rng, MapConstraints::default());
        let z = map.dom().ball_sample(0.9, &mut rng);
        let exact = map.derivatives(&z);
        let num = fd_derivatives(&map, &z, 1e-5);
        prop_assert!(exact.dh.sub(&num.dh).max_abs() <= 1e-6);
        prop_assert!(exact.dg.sub(&num.dg).max_abs() <= 1e-6);
    }

    #[test]
    fn gradient_norm_ignores_unimodular_factors(seed in any::<u64>(), theta in 0.0..6.3f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = random_map(&mut rng, MapConstraints::default());
        let gamma = C64::from_polar(1.0, theta);
        let rotate = |t: &Terms<f64>, s: C64| -> Terms<f64> {
            t.iter().map(|(k, v)| (k.clone(), v.iter().map(|c| c * s).collect())).collect()
        };
        let rotated = PluriharmonicMap::new(
            map.dom().clone(), map.codom().clone(), rotate(map.h(), gamma), rotate(map.g(), gamma.conj()),
        ).unwrap();
        let z = map.dom().ball_sample(0.8, &mut rng);
        let a = nabla_norm(&map, &z).unwrap();
        let b = nabla_norm(&rotated, &z).unwrap();
        if !a.lower_bound_only && !b.lower_bound_only {
            prop_assert!((a.value - b.value).abs() <= 1e-9 * (1.0 + a.value), "{a:?} {b:?}");
        }
    }

    #[test]
    fn maps_stay_in_the_ball(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = random_map(&mut rng, MapConstraints::default());
        for _ in 0..200 {
            let r = rng.random_range(0.0..1.0f64).sqrt();
            let z = map.dom().ball_sample(r, &mut rng);
            prop_assert!(map.codom().norm(&map.eval(&z)).unwrap() < 1.0);
        }
    }

    #[test]
    fn lambda_never_exceeds_four_over_pi(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = random_map(&mut rng, MapConstraints::default());
        let w = map.dom().unit_sphere_sample(&mut rng);
        prop_assert!(lambda0(&map, &w).unwrap().value <= 4.0 / PI + 1e-9);
    }

    #[test]
    fn tripotent_axiom_and_mobius_inverse(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for sys in systems() {
            let space = sys.space::<f64>();
            let a = space.ball_sample(rng.random_range(0.0..0.9), &mut rng);
            let aaa = sys.triple_product(&a, &a, &a).unwrap();
            let na = space.norm(&a).unwrap();
            prop_assert!((space.norm(&aaa).unwrap() - na.powi(3)).abs() <= 1e-10);
            let z = space.ball_sample(rng.random_range(0.0..0.9), &mut rng);
            let minus: Vec<C64> = a.iter().map(|x| -x).collect();
            let back = sys.mobius(&minus).unwrap().eval(&sys.mobius(&a).unwrap().eval(&z).unwrap()).unwrap();
            prop_assert!(back.iter().zip(&z).all(|(p, q)| (p - q).norm() <= 1e-10));
            let at_zero = sys.mobius(&a).unwrap().jacobian(&vec![C64::new(0.0, 0.0); sys.dim()]).unwrap();
            prop_assert!(at_zero.sub(&sys.bergman_sqrt(&a).unwrap()).max_abs() <= 1e-10);
        }
    }

    #[test]
    fn kaup_estimate(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for sys in systems() {
            let space = sys.space::<f64>();
            let z = space.ball_sample(rng.random_range(0.0..0.95), &mut rng);
            let n = space.norm(&z).unwrap();
            prop_assert!((sys.kaup_norm(&z).unwrap() * (1.0 - n * n) - 1.0).abs() <= 1e-6);
        }
    }

    #[test]
    fn mu_is_monotone_and_banded(k in 0.0..0.999f64, x in 0.0..1.0f64, dx in 0.0..0.1f64) {
        let (lo, hi) = (mu_k(k, x).unwrap(), mu_k(k, (x + dx).min(1.0)).unwrap());
        prop_assert!(lo <= hi + 1e-15);
        prop_assert!(1.0 - k <= lo && hi <= 1.0 + k + 1e-15);
    }

    #[test]
    fn pairing_checks_coincide_on_hilbert_balls(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=3);
        let ball = Space::euclidean(n);
        let (alpha, beta) = (ball.unit_sphere_sample(&mut rng), ball.unit_sphere_sample(&mut rng));
        let cons = MapConstraints { holomorphic: true, vanish_at_origin: false };
        let map = random_boundary_map(&ball, &ball, &alpha, &beta, BoundaryFamily::Slice, 3, cons, &mut rng).unwrap();
        let sys = TripleSystem::hilbert_ball(n).unwrap();
        let x = ball.gaussian(&mut rng);
        let inner: C64 = x.iter().zip(&beta).map(|(a, b)| a * b.conj()).sum();
        let paired: C64 = sys.pairing(&x, &beta).unwrap();
        prop_assert!((paired - inner).norm() <= 1e-12 * (1.0 + inner.norm()));
        let a = pairing_boundary_bound(TheoremId::T2_5, &PairingTarget::Triple { sys }, &map, &alpha, &beta, 1e-9).unwrap();
        let b = pairing_boundary_bound(TheoremId::T2_6, &PairingTarget::Hilbert, &map, &alpha, &beta, 1e-9).unwrap();
        prop_assert!((a.residual - b.residual).abs() <= 1e-10);
        prop_assert!(a.passed());
    }
}

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn euclidean_operator_norms_match_sampling(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, n) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let rows: Vec<Vec<C64>> = (0..m).map(|_| Space::<f64>::euclidean(n).gaussian(&mut rng)).collect();
        let a = LinearMap::new(CMat::from_rows(&rows), Space::euclidean(n), Space::euclidean(m)).unwrap();
        let exact = a.operator_norm();
        prop_assert!(!exact.lower_bound_only);
        let sampled = numeric_operator_norm(&a, 256, seed);
        prop_assert!(sampled <= exact.value * (1.0 + 1e-12));
        prop_assert!((exact.value - sampled) <= 1e-3 * exact.value);
    }

    #[test]
    fn lambda_closed_form_matches_its_supremum(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dom = pick(&spaces(), &mut rng);
        let codom = Space::euclidean(rng.random_range(1..=3));
        let fam = pick(&FAMILIES, &mut rng);
        let (map, _) = random_ball_map(&dom, &codom, fam, 3, &mut rng).unwrap();
        let w = dom.unit_sphere_sample(&mut rng);
        let closed = lambda0(&map, &w).unwrap().value;
        let sampled = lambda0_sampled(&map, &w, &SphereSearch::default()).unwrap().value;
        prop_assert!(sampled <= closed + 1e-12 && closed - sampled <= 1e-3, "{closed} {sampled}");
    }

    #[test]
    fn bergman_metric_matches_the_hessian(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for sys in systems() {
            let space = sys.space::<f64>();
            let (x, y) = (space.ball_sample(0.9, &mut rng), space.ball_sample(0.9, &mut rng));
            let num = numeric_bergman_metric0(&sys, &x, &y).unwrap();
            prop_assert!((num - sys.h0(&x, &y).unwrap()).norm() <= 1e-5);
            let c: f64 = sys.c_constant();
            prop_assert!((sys.dim() + sys.rank()) as f64 / 2.0 <= c && c <= sys.dim() as f64);
        }
    }

    #[test]
    fn interior_checks_are_sound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let holo = random_map(&mut rng, MapConstraints { holomorphic: true, vanish_at_origin: false });
        let z = holo.dom().ball_sample(rng.random_range(0.0..0.99), &mut rng);
        prop_assert!(interior_bound(TheoremId::T2_1, &holo, &z, 1e-9).unwrap().passed());
        prop_assert!(interior_bound(TheoremId::T3_1, &holo, &z, 1e-9).unwrap().passed());
        let vanishing = random_map(&mut rng, MapConstraints { holomorphic: true, vanish_at_origin: true });
        let z = vanishing.dom().ball_sample(rng.random_range(0.0..0.99), &mut rng);
        let r = interior_bound(TheoremId::T2_2, &vanishing, &z, 1e-9).unwrap();
        let x = vanishing.dom().norm(&z).unwrap();
        prop_assert!(r.passed());
        // The refined bound never exceeds the classical one.
        prop_assert!(r.rhs <= x + 1e-15, "{r:?}");
        let harmonic = random_map(&mut rng, MapConstraints { holomorphic: false, vanish_at_origin: true });
        let z = harmonic.dom().ball_sample(rng.random_range(0.0..0.99), &mut rng);
        prop_assert!(interior_bound(TheoremId::T3_2, &harmonic, &z, 1e-9).unwrap().passed());
    }

    #[test]
    fn both_boundary_branches_are_dominated(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let disc = Space::euclidean(1);
        let (b, y) = (disc.unit_sphere_sample(&mut rng), disc.unit_sphere_sample(&mut rng));
        let cons = MapConstraints { holomorphic: false, vanish_at_origin: rng.random_bool(0.5) };
        let map = random_boundary_map(&disc, &disc, &b, &y, BoundaryFamily::Slice, rng.random_range(1..=5), cons, &mut rng).unwrap();
        let r = boundary_bound(TheoremId::T3_3, &map, &b, 1e-9).unwrap();
        let a = map.eval(&[C64::new(0.0, 0.0)])[0].norm();
        prop_assert!(r.passed());
        prop_assert!(r.lhs >= FRAC_2_PI - a - 1e-9 && r.lhs >= (1.0 - a) / 2.0 - 1e-9);
    }
}

#[test]
fn boundary_branches_cross_where_expected() {
    let a = 4.0 / PI - 1.0;
    assert!((FRAC_2_PI - a - (1.0 - a) / 2.0).abs() < 1e-15);
}

#[test]
fn single_precision_smoke() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let disc = Space::<f32>::euclidean(1);
    let ball = Space::<f32>::euclidean(2);
    for _ in 0..20 {
        let cons = MapConstraints { holomorphic: true, vanish_at_origin: false };
        let (map, _) = random_ball_map_with(&ball, &disc, RandomFamily::PolyScaled, 3, cons, &mut rng).unwrap();
        let z = ball.ball_sample(0.7, &mut rng);
        let r = interior_bound(TheoremId::T2_1, &map, &z, 1e-5).unwrap();
        assert!(r.passed(), "{r:?}");
    }
    assert!((mu_k(0.5f32, 1.0).unwrap() - 1.5).abs() < 1e-6);
}
