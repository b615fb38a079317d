use proptest::prelude::*;

use bayespred::measure::{l1_distance, sample, tv_distance_exhaustive, Density};
use bayespred::models::DominatedModel;
use bayespred::risk::{loss_eval, Estimate, LossKind};

fn normalize(w: Vec<f64>) -> Vec<f64> {
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

fn pmf_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..=20).prop_flat_map(|k| {
        (
            prop::collection::vec(0.0f64..1.0, k),
            prop::collection::vec(0.0f64..1.0, k),
        )
            .prop_filter("nonzero mass", |(a, b)| {
                a.iter().sum::<f64>() > 1e-6 && b.iter().sum::<f64>() > 1e-6
            })
            .prop_map(|(a, b)| (normalize(a), normalize(b)))
    })
}

fn continuous() -> impl Strategy<Value = Density> {
    prop_oneof![
        (-3.0f64..3.0, 0.05f64..4.0).prop_map(|(m, v)| Density::normal(m, v).unwrap()),
        (0.1f64..5.0).prop_map(|r| Density::exponential(r).unwrap()),
        (0.5f64..6.0, 0.2f64..5.0).prop_map(|(a, s)| Density::lomax(a, s).unwrap()),
    ]
}

fn exp_l1_closed_form(a: f64, b: f64) -> f64 {
    let u = a.min(b) / a.max(b);
    if u == 1.0 {
        return 0.0;
    }
    2.0 * (u.powf(u / (1.0 - u)) - u.powf(1.0 / (1.0 - u)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tv_is_half_l1((p, q) in pmf_pair()) {
        let p = Density::categorical(p).unwrap();
        let q = Density::categorical(q).unwrap();
        let tv = tv_distance_exhaustive(&p, &q).unwrap();
        prop_assert!((tv - 0.5 * l1_distance(&p, &q).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn l1_is_symmetric_and_bounded(f in continuous(), g in continuous()) {
        if f.support().same_measure(&g.support()) {
            let a = l1_distance(&f, &g).unwrap();
            let b = l1_distance(&g, &f).unwrap();
            prop_assert_eq!(a, b);
            prop_assert!((0.0..=2.0).contains(&a));
        } else {
            prop_assert!(l1_distance(&f, &g).is_err());
        }
    }

    #[test]
    fn l1_triangle_on_the_line(
        m in prop::collection::vec(-3.0f64..3.0, 3),
        v in prop::collection::vec(0.05f64..4.0, 3),
    ) {
        let d: Vec<Density> = m.iter().zip(&v).map(|(m, v)| Density::normal(*m, *v).unwrap()).collect();
        let ab = l1_distance(&d[0], &d[1]).unwrap();
        let bc = l1_distance(&d[1], &d[2]).unwrap();
        let ac = l1_distance(&d[0], &d[2]).unwrap();
        prop_assert!(ac <= ab + bc + 1e-10);
    }

    #[test]
    fn l1_triangle_on_pmfs((p, q) in pmf_pair(), r in prop::collection::vec(0.01f64..1.0, 20)) {
        let k = p.len();
        let r = normalize(r[..k].to_vec());
        let (p, q, r) = (
            Density::categorical(p).unwrap(),
            Density::categorical(q).unwrap(),
            Density::categorical(r).unwrap(),
        );
        let pr = l1_distance(&p, &r).unwrap();
        prop_assert!(pr <= l1_distance(&p, &q).unwrap() + l1_distance(&q, &r).unwrap() + 1e-10);
    }

    #[test]
    fn exponential_l1_matches_closed_form(a in 0.05f64..20.0, b in 0.05f64..20.0) {
        let f = Density::exponential(a).unwrap();
        let g = Density::exponential(b).unwrap();
        prop_assert!((l1_distance(&f, &g).unwrap() - exp_l1_closed_form(a, b)).abs() < 1e-9);
    }

    #[test]
    fn densities_have_unit_mass(f in continuous()) {
        prop_assert!((f.total_mass().unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn discrete_densities_have_unit_mass(r in 0.01f64..50.0, shape in 0.2f64..30.0, rate in 0.05f64..10.0) {
        prop_assert!((Density::poisson(r).unwrap().total_mass().unwrap() - 1.0).abs() < 1e-8);
        prop_assert!((Density::neg_binomial(shape, rate).unwrap().total_mass().unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn sample_is_a_pure_function(theta in 0.1f64..10.0, n in 1usize..50, seed in any::<u64>()) {
        let m = DominatedModel::poisson_gamma(1.0).unwrap();
        prop_assert_eq!(sample(&m, theta, n, seed).unwrap(), sample(&m, theta, n, seed).unwrap());
        let e = DominatedModel::exp_gamma(1.0).unwrap();
        let s = sample(&e, theta, n, seed).unwrap();
        prop_assert_eq!(s.n(), n);
        prop_assert!(s.points().iter().all(|x| *x > 0.0));
    }

    #[test]
    fn squared_tv_loss_equals_exhaustive_tv(p in 0.0f64..=1.0, theta in 0.0f64..=1.0) {
        let m = DominatedModel::bernoulli_uniform();
        let est = Density::bernoulli(p).unwrap();
        let loss = loss_eval(&Estimate::Density(est.clone()), theta, &m, &LossKind::SquaredTV).unwrap();
        let tv = tv_distance_exhaustive(&est, &m.sampling_density(theta).unwrap()).unwrap();
        prop_assert!((loss - tv * tv).abs() <= 1e-10);
    }
}

#[test]
fn exponential_pair_example() {
    let f = Density::exponential(1.0).unwrap();
    let g = Density::exponential(2.0).unwrap();
    // crossing at ln 2: 2·(F₂ − F₁) = 2·(1/2 − 1/4)
    assert!((l1_distance(&f, &g).unwrap() - 0.5).abs() < 1e-12);
    assert!((exp_l1_closed_form(1.0, 2.0) - 0.5).abs() < 1e-15);
}

#[test]
fn lomax_tails_are_integrated() {
    let f = Density::lomax(0.6, 1.0).unwrap();
    let g = Density::lomax(0.9, 1.0).unwrap();
    // crossing where (1+x)^{0.3} = 0.9/0.6; the L1 distance is 2·|F_f − F_g| there
    let x = 1.5f64.powf(1.0 / 0.3) - 1.0;
    let want = 2.0 * ((1.0 + x).powf(-0.6) - (1.0 + x).powf(-0.9));
    assert!((l1_distance(&f, &g).unwrap() - want).abs() < 1e-9);
}
