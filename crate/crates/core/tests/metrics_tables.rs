use granfore_core::metrics::evaluate;

const ACTUAL: [f64; 3] = [101.2, 103.3, 105.5];

/// Prediction rows of a reference test-set comparison.
/// Each row carries its predictions, the expected (MSE, RMSE, MAPE %, MAE) and their decimal places.
const ROWS: [(&str, [f64; 3], [f64; 4], i32); 4] = [
    (
        "hybrid",
        [101.2103, 102.94, 104.9834],
        [0.1322, 0.3636, 0.2828, 0.2956],
        4,
    ),
    (
        "arima",
        [100.971, 104.954, 106.864],
        [1.5496, 1.2448, 1.0401, 1.0823],
        4,
    ),
    (
        "grnn",
        [99.992, 101.517, 103.212],
        [3.2911, 1.8141, 1.6962, 1.7597],
        4,
    ),
    (
        "ga-svr",
        [101.2832, 99.23, 100.3076],
        [14.51, 3.809, 2.981, 3.115],
        3,
    ),
];

/// Agreement to one unit in the last printed digit.
fn close(got: f64, expected: f64, places: i32) -> bool {
    (got - expected).abs() <= 10f64.powi(-places) * (1.0 + 1e-9)
}

#[test]
fn reference_metric_rows() {
    for (name, pred, [mse, rmse, mape, mae], d) in ROWS {
        let m = evaluate(&pred, &ACTUAL).unwrap();
        assert!(close(m.mse, mse, d), "{name} mse {}", m.mse);
        assert!(close(m.rmse, rmse, d), "{name} rmse {}", m.rmse);
        assert!(
            close(m.mape_percent, mape, d),
            "{name} mape {}",
            m.mape_percent
        );
        assert!(close(m.mae, mae, d), "{name} mae {}", m.mae);
    }
}

#[test]
fn hybrid_ranks_first_on_every_metric() {
    let all: Vec<_> = ROWS
        .iter()
        .map(|(_, p, _, _)| evaluate(p, &ACTUAL).unwrap())
        .collect();
    for other in &all[1..] {
        assert!(
            all[0].mse < other.mse
                && all[0].mae < other.mae
                && all[0].mape_percent < other.mape_percent
        );
    }
}

#[test]
fn perfect_predictions_score_zero() {
    for (_, pred, _, _) in ROWS {
        let m = evaluate(&pred, &pred).unwrap();
        assert_eq!([m.mse, m.rmse, m.mae, m.mape_percent], [0.0; 4]);
    }
}

#[test]
fn ga_svr_row_at_four_decimals() {
    let m = evaluate(&ROWS[3].1, &ACTUAL).unwrap();
    for (got, want) in [
        (m.mse, 14.5109),
        (m.rmse, 3.8093),
        (m.mape_percent, 2.9813),
        (m.mae, 3.1152),
    ] {
        assert!(close(got, want, 4), "{got} vs {want}");
    }
}
