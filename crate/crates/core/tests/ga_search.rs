mod oracles;

use granfore_core::ga::{
    cv_fitness, decode, decode_indices, evolve, evolve_with, fold_indices, FoldMode, GaConfig,
    Genome, ParamRange,
};
use granfore_core::svr::{
    default_max_iter, make_supervised, train_svr_scaled, SvrParams, DEFAULT_TOL,
};
use granfore_core::timeseries::ScalingState;

fn eight_bit(seed: u64) -> GaConfig {
    GaConfig {
        bits_per_param: 8,
        seed,
        ..GaConfig::default()
    }
}

/// Decodable optimum of the test quadratic.
fn target(cfg: &GaConfig) -> SvrParams {
    decode(&Genome::from_indices([187, 61, 110], cfg), cfg)
}

fn quadratic(t: SvrParams) -> impl Fn(&SvrParams) -> f64 + Sync {
    move |p| {
        (p.c_penalty - t.c_penalty).powi(2)
            + (p.gamma - t.gamma).powi(2)
            + (p.epsilon - t.epsilon).powi(2)
    }
}

/// Grid index minimising each separable term, found by scanning every decodable value.
fn grid_optimum(cfg: &GaConfig, t: SvrParams) -> [u64; 3] {
    let levels = ((1u64 << cfg.bits_per_param) - 1) as f64;
    let best_on = |r: ParamRange, v: f64| {
        (0..=levels as u64).min_by(|&a, &b| {
            let da = (r.at(a as f64 / levels) - v).abs();
            let db = (r.at(b as f64 / levels) - v).abs();
            da.total_cmp(&db)
        })
    };
    [
        best_on(cfg.c_range, t.c_penalty).unwrap(),
        best_on(cfg.gamma_range, t.gamma).unwrap(),
        best_on(cfg.epsilon_range, t.epsilon).unwrap(),
    ]
}

#[test]
fn quadratic_optimum_is_found() {
    let mut hits = 0;
    for seed in 0..20 {
        let cfg = eight_bit(seed);
        let t = target(&cfg);
        let res = evolve_with(&cfg, quadratic(t)).unwrap();
        let opt = grid_optimum(&cfg, t);
        assert_eq!(opt, [187, 61, 110]);
        let got = decode_indices(&res.best_genome, &cfg);
        if got.iter().zip(&opt).all(|(g, o)| g.abs_diff(*o) <= 1) {
            hits += 1;
        }
        assert!(res.history.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(res.history.len(), cfg.generations);
        assert_eq!(*res.history.last().unwrap(), res.best_fitness);
    }
    assert!(hits >= 19, "{hits}/20");
}

#[test]
fn decoded_parameters_are_legal() {
    let cfg = GaConfig::default();
    let len = cfg.genome_len();
    for g in [Genome::zeros(len), Genome::ones(len)] {
        let p = decode(&g, &cfg);
        assert!(p.validate().is_ok());
    }
    let lo = decode(&Genome::zeros(len), &cfg);
    let hi = decode(&Genome::from_indices([255 * 257; 3], &cfg), &cfg);
    assert!((lo.c_penalty - 0.01).abs() < 1e-12 && (hi.c_penalty - 100.0).abs() < 1e-9);
    assert!((lo.epsilon - 0.001).abs() < 1e-12 && (hi.epsilon - 1.0).abs() < 1e-12);

    let res = evolve_with(
        &GaConfig {
            generations: 30,
            ..cfg.clone()
        },
        |p| {
            assert!(p.validate().is_ok());
            assert!(p.c_penalty >= 0.01 - 1e-12 && p.c_penalty <= 100.0 + 1e-9);
            assert!(p.gamma >= 0.01 - 1e-12 && p.gamma <= 100.0 + 1e-9);
            assert!(p.epsilon >= 0.001 - 1e-12 && p.epsilon <= 1.0 + 1e-12);
            p.c_penalty + p.gamma + p.epsilon
        },
    )
    .unwrap();
    assert_eq!(res.best_genome.bits.len(), len);
}

fn series() -> Vec<f64> {
    (0..40)
        .map(|t| (t as f64 * 0.45).sin() + 0.02 * t as f64)
        .collect()
}

#[test]
fn cv_fitness_matches_fold_loop_oracle() {
    let data = make_supervised(&series(), 3).unwrap();
    let params = SvrParams {
        c_penalty: 4.0,
        epsilon: 0.02,
        gamma: 1.5,
    };
    for seed in [1u64, 7, 99] {
        let got = cv_fitness(&data, params, 5, seed).unwrap();

        let flat: Vec<f64> = data.inputs.iter().flatten().copied().collect();
        let xs = ScalingState::fit(&flat).unwrap();
        let ys = ScalingState::fit(&data.targets).unwrap();
        let folds = fold_indices(data.len(), 5, FoldMode::Random, seed);
        let mut assigned: Vec<usize> = folds.iter().flatten().copied().collect();
        assigned.sort_unstable();
        assert_eq!(assigned, (0..data.len()).collect::<Vec<_>>());

        let mut per_fold = Vec::new();
        for (f, held) in folds.iter().enumerate() {
            let train_idx: Vec<usize> = folds
                .iter()
                .enumerate()
                .filter(|(g, _)| *g != f)
                .flat_map(|(_, v)| v.clone())
                .collect();
            let train = data.subset(&train_idx);
            let m = train_svr_scaled(
                &train,
                params,
                xs,
                ys,
                DEFAULT_TOL,
                default_max_iter(train.len()),
            )
            .unwrap();
            let mut sse = 0.0;
            for &i in held {
                let z: Vec<f64> = data.inputs[i].iter().map(|&v| xs.apply(v)).collect();
                let e = m.decision_scaled(&z) - ys.apply(data.targets[i]);
                sse += e * e;
            }
            per_fold.push(sse / held.len() as f64);
        }
        let want = per_fold.iter().sum::<f64>() / 5.0;
        assert_eq!(got, want, "seed {seed}");
    }
}

#[test]
fn evolve_is_deterministic() {
    let data = make_supervised(&series(), 3).unwrap();
    let cfg = GaConfig {
        population: 8,
        generations: 6,
        seed: 42,
        ..GaConfig::default()
    };
    let a = evolve(&data, &cfg).unwrap();
    let b = evolve(&data, &cfg).unwrap();
    assert_eq!(a, b);
    assert!(a.history.windows(2).all(|w| w[1] <= w[0]));
    let c = evolve(&data, &GaConfig { seed: 43, ..cfg }).unwrap();
    assert_ne!(a.best_genome, c.best_genome);
}
