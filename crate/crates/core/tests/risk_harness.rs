use bayespred::kernel::parse_kernel_file;
use bayespred::measure::{Density, Event};
use bayespred::models::DominatedModel;
use bayespred::risk::{
    bayes_risk_mc, consistency_curve, dominance_report, loss_eval, pointwise_trajectory, CdfEstimate, Estimate,
    EstimatorKind, EstimatorSpec, LossKind,
};
use bayespred::Error;

fn spec(kind: EstimatorKind, loss: &LossKind) -> EstimatorSpec {
    EstimatorSpec::for_loss(kind, loss).unwrap()
}

#[test]
fn laplace_risk_is_one_eighteenth() {
    let m = DominatedModel::bernoulli_uniform();
    let loss = LossKind::SquaredError(Event::Atoms(vec![1]));
    let r = bayes_risk_mc(
        &m,
        &spec(EstimatorKind::PosteriorPredictive, &loss),
        &loss,
        1,
        100_000,
        2024,
    )
    .unwrap();
    assert!((r.mean - 1.0 / 18.0).abs() <= 3.0 * r.std_error, "{r:?}");
    assert_eq!(r.failures, 0);
    assert_eq!((r.n, r.reps, r.seed), (1, 100_000, 2024));
}

#[test]
fn interval_events_score_probabilities() {
    let m = DominatedModel::normal_normal(0.0, 1.0, 1.0).unwrap();
    let loss: LossKind = "SquaredError[-1:1]".parse().unwrap();
    let pp = bayes_risk_mc(&m, &spec(EstimatorKind::PosteriorPredictive, &loss), &loss, 3, 4000, 5).unwrap();
    let prior = bayes_risk_mc(&m, &spec(EstimatorKind::PriorPredictive, &loss), &loss, 3, 4000, 5).unwrap();
    assert!(pp.mean < prior.mean);
}

#[test]
fn finite_experiment_risk_matches_enumeration() {
    let kf = parse_kernel_file(include_str!("../data/kernel_2x2.txt")).unwrap();
    let m = DominatedModel::finite(kf.prior, kf.likelihood).unwrap();
    let loss = LossKind::SquaredError(Event::Atoms(vec![0]));
    let r = bayes_risk_mc(
        &m,
        &spec(EstimatorKind::PosteriorPredictive, &loss),
        &loss,
        1,
        100_000,
        99,
    )
    .unwrap();
    assert!((r.mean - 0.061869).abs() <= 3.0 * r.std_error, "{r:?}");
}

#[test]
fn dominance_examples() {
    let normal = DominatedModel::normal_normal(0.0, 1.0, 1.0).unwrap();
    let r = dominance_report(
        &normal,
        &EstimatorKind::applicable(&LossKind::L1Squared),
        &LossKind::L1Squared,
        5,
        10_000,
        1,
    )
    .unwrap();
    assert!(r.dominant);
    assert_eq!(r.rows[0].estimator, EstimatorKind::PosteriorPredictive);
    assert!(r.rows.windows(2).all(|w| w[0].mean <= w[1].mean));

    let bern = DominatedModel::bernoulli_uniform();
    let kinds = [EstimatorKind::PosteriorPredictive, EstimatorKind::PluginPosteriorMean];
    assert!(
        dominance_report(&bern, &kinds, &LossKind::SquaredTV, 10, 10_000, 2)
            .unwrap()
            .dominant
    );

    let exp = DominatedModel::exp_gamma(1.0).unwrap();
    let kinds = [EstimatorKind::PosteriorPredictive, EstimatorKind::EmpiricalCDF];
    let r = dominance_report(&exp, &kinds, &LossKind::SupCDFSquared, 10, 10_000, 3).unwrap();
    assert_eq!(r.rows[0].estimator, EstimatorKind::PosteriorPredictive);
}

#[test]
fn prior_predictive_is_clearly_worse_at_n_20() {
    for m in [
        DominatedModel::poisson_gamma(1.0).unwrap(),
        DominatedModel::exp_gamma(1.0).unwrap(),
    ] {
        for loss in [LossKind::SquaredTV, LossKind::L1Squared] {
            let kinds = [EstimatorKind::PosteriorPredictive, EstimatorKind::PriorPredictive];
            let r = dominance_report(&m, &kinds, &loss, 20, 10_000, 4).unwrap();
            let c = &r.comparisons[0];
            assert!(c.gap > 5.0 * c.combined_se, "{} {loss}: {c:?}", m.family());
        }
    }
}

#[test]
fn consistency_examples() {
    let grid = [1, 2, 5, 10, 50, 200];
    let bern = DominatedModel::bernoulli_uniform();
    let l1 = LossKind::L1;
    let curve = consistency_curve(
        &bern,
        &spec(EstimatorKind::PosteriorPredictive, &l1),
        &l1,
        &grid,
        2000,
        8,
    )
    .unwrap();
    assert_eq!(curve.iter().map(|(n, _)| *n).collect::<Vec<_>>(), grid);
    assert!(curve[5].1.mean < curve[0].1.mean && curve[5].1.mean < 0.05);

    let pois = DominatedModel::poisson_gamma(1.0).unwrap();
    let tv = LossKind::SquaredTV;
    let curve = consistency_curve(
        &pois,
        &spec(EstimatorKind::PosteriorPredictive, &tv),
        &tv,
        &grid,
        2000,
        8,
    )
    .unwrap();
    let means: Vec<f64> = curve.iter().map(|(_, r)| r.mean).collect();
    assert!(means.windows(2).all(|w| w[1] < w[0]), "{means:?}");
    assert!(means[5] < 0.01);

    let flat = consistency_curve(&pois, &spec(EstimatorKind::PriorPredictive, &tv), &tv, &grid, 2000, 8).unwrap();
    let first = flat[0].1.mean;
    assert!(flat.iter().all(|(_, r)| (r.mean - first).abs() <= 3.0 * r.std_error));
}

#[test]
fn pointwise_diagnostic_shrinks_along_a_trajectory() {
    let m = DominatedModel::poisson_gamma(1.0).unwrap();
    let path = pointwise_trajectory(&m, 2.5, 2.0, &[1, 10, 100, 1000, 10_000], 17).unwrap();
    assert!(path.last().unwrap().1 < 0.01, "{path:?}");
}

#[test]
fn worker_count_does_not_change_estimates() {
    let m = DominatedModel::normal_normal(1.0, 2.0, 0.5).unwrap();
    let loss = LossKind::L1Squared;
    let s = spec(EstimatorKind::PluginMLE, &loss);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| bayes_risk_mc(&m, &s, &loss, 4, 777, 12).unwrap())
    };
    let a = run(1);
    assert_eq!(a, run(3));
    assert_eq!(a.mean.to_bits(), run(8).mean.to_bits());
}

#[test]
fn same_pairs_for_every_estimator() {
    // plug-in at the posterior mean and the posterior predictive coincide
    // for Bernoulli, so identical replicate streams give identical risks
    let m = DominatedModel::bernoulli_uniform();
    let loss = LossKind::SquaredTV;
    let a = bayes_risk_mc(&m, &spec(EstimatorKind::PosteriorPredictive, &loss), &loss, 7, 500, 3).unwrap();
    let b = bayes_risk_mc(&m, &spec(EstimatorKind::PluginPosteriorMean, &loss), &loss, 7, 500, 3).unwrap();
    assert_eq!(a.mean, b.mean);
}

#[test]
fn target_mismatches_are_rejected() {
    let m = DominatedModel::exp_gamma(1.0).unwrap();
    let cdf_spec = spec(EstimatorKind::EmpiricalCDF, &LossKind::SupCDFSquared);
    assert!(matches!(
        bayes_risk_mc(&m, &cdf_spec, &LossKind::L1, 2, 10, 1),
        Err(Error::TargetMismatch(_))
    ));
    assert!(EstimatorSpec::for_loss(EstimatorKind::EmpiricalCDF, &LossKind::SquaredTV).is_err());
    let est = Estimate::Cdf(CdfEstimate::Density(Density::exponential(1.0).unwrap()));
    assert!(loss_eval(&est, 1.0, &m, &LossKind::SquaredTV).is_err());
    assert!(loss_eval(&est, 1.0, &m, &LossKind::SupCDFSquared).unwrap() < 1e-30);
}
