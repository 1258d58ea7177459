use shorcost::scaling::*;
use shorcost::ClassicalModelF64;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn clock_rates_from_first_principles() {
    // Hand-expanded depths: 54 * 576^3, 20 * 576^2 * log2(576), 9 * 576 * log2(576)^2.
    let l = (576f64).ln() / (2f64).ln();
    let bcdp = 54.0 * 576f64.powi(3);
    assert_eq!(bcdp, 10_319_560_704.0);
    let month = 30.0 * 24.0 * 3600.0;
    assert_eq!(
        required_clock(QuantumModel::Bcdp, 576.0, month).unwrap(),
        bcdp / month
    );
    let f = required_clock(QuantumModel::AlgF, 576.0, month).unwrap();
    assert!(rel(f, 20.0 * 576.0 * 576.0 * l / month) < 1e-12);
    let d = required_clock(QuantumModel::AlgD, 576.0, month).unwrap();
    assert!(rel(d, 9.0 * 576.0 * l * l / month) < 1e-12);

    assert!((bcdp / month - 3981.3).abs() < 0.05);
    assert!((f - 23.5).abs() < 0.05);
    assert!((d - 0.168).abs() < 0.0005);
}

#[test]
fn seconds_at_fixed_clocks() {
    let t: f64 = quantum_seconds(QuantumModel::Bcdp, 576.0, 1e6).unwrap();
    assert!((t - 10_319.56).abs() < 0.01);
    let slow = quantum_seconds(QuantumModel::Bcdp, 576.0, 1.0).unwrap();
    assert!(slow / YEAR_SECONDS > 300.0);
}

#[test]
fn clock_and_time_are_inverse() {
    for q in QuantumModel::ALL {
        for n in [8.0, 100.0, 576.0, 6000.0, 65536.0] {
            for f in [1e-3, 0.3, 27.0, 4e3, 1e6, 1e9] {
                let back = required_clock(q, n, quantum_seconds(q, n, f).unwrap()).unwrap();
                // one correctly rounded division each way: at most one ulp apart
                assert!(rel(back, f) <= f64::EPSILON, "{q} {n} {f}: {back}");
            }
        }
    }
}

#[test]
fn speedups() {
    let d = speedup(QuantumModel::Bcdp, QuantumModel::AlgD, 6000.0).unwrap();
    let f = speedup(QuantumModel::Bcdp, QuantumModel::AlgF, 6000.0).unwrap();
    let l = 6000f64.log2();
    assert!(rel(d, 6.0 * 6000.0 * 6000.0 / (l * l)) < 1e-12);
    assert!(rel(f, 2.7 * 6000.0 / l) < 1e-12);
    assert!((0.9e6..=2e6).contains(&d));
    assert!((0.9e3..=2e3).contains(&f));
}

#[test]
fn nfs_anchor_and_growth() {
    let base = ClassicalModelF64::baseline();
    assert_eq!(nfs_seconds(&base, 530.0).unwrap(), 2_592_000.0);
    let fast = ClassicalModel::new(1000.0).unwrap();
    assert_eq!(nfs_seconds(&fast, 530.0).unwrap(), 2_592.0);
    let pts = log_spaced(512.0, 8192.0, 16).unwrap();
    let ts: Vec<f64> = pts.iter().map(|&n| base.seconds(n).unwrap()).collect();
    assert!(ts.windows(2).all(|w| w[1] > w[0]));
    // Independent exponent: (64/9 * n * ln(n)^2)^(1/3) * ln(2)^(1/3).
    let e = |n: f64| (64.0 / 9.0 * 2f64.ln() * n * n.ln().powi(2)).powf(1.0 / 3.0);
    for n in [600.0, 1024.0, 2048.0] {
        let want = 2_592_000.0 * (e(n) - e(530.0)).exp();
        assert!(rel(base.seconds(n).unwrap(), want) < 1e-9);
        assert!(rel(base.ln_seconds(n), want.ln()) < 1e-12);
    }
}

#[test]
fn space_and_table_metadata() {
    assert_eq!(QuantumModel::Bcdp.space(576.0), 2883.0);
    assert_eq!(QuantumModel::AlgF.space(576.0), 663_552.0);
    assert_eq!(QuantumModel::AlgD.multipliers(576.0), 144.0);
    assert_eq!(QuantumModel::Bcdp.multipliers(576.0), 1.0);
    assert_eq!(QuantumModel::AlgF.concurrency(576.0), 432.0);
}

#[test]
fn crossover_behaviour() {
    let base = ClassicalModelF64::baseline();
    let x = crossover_bits(QuantumModel::Bcdp, 1e6, &base)
        .unwrap()
        .unwrap();
    // smallest n where quantum wins; the one below must lose
    let wins = |n: f64| QuantumModel::Bcdp.depth(n) / 1e6 < base.seconds(n).unwrap();
    assert!(wins(x as f64) && !wins(x as f64 - 1.0));
    let slow = crossover_bits(QuantumModel::Bcdp, 1.0, &base)
        .unwrap()
        .unwrap();
    assert!(slow > x);
    let d = crossover_bits(QuantumModel::AlgD, 1.0, &base)
        .unwrap()
        .unwrap();
    assert!(d < slow);
    assert_eq!(
        crossover_bits_in(QuantumModel::Bcdp, 1e-300, &base, 8, 4096).unwrap(),
        None
    );
    assert_eq!(
        crossover_bits(QuantumModel::Bcdp, 0.0, &base),
        Err(ModelError::NonPositiveClock)
    );
}

#[test]
fn series_are_straight_log_log_lines() {
    let ns: Vec<f64> = log_spaced(1024.0, 65536.0, 13).unwrap();
    let clocks = [1.0, 1e3, 1e6, 1e9];
    let models = [
        SeriesModel::Quantum(QuantumModel::Bcdp),
        SeriesModel::Quantum(QuantumModel::AlgD),
        SeriesModel::Quantum(QuantumModel::AlgF),
    ];
    let rows = series(&models, &clocks, &[], &ns).unwrap();
    assert_eq!(rows.len(), 3 * 4 * 13);
    for chunk in rows.chunks(13) {
        let pts: Vec<(f64, f64)> = chunk
            .iter()
            .map(|r| (r.n.log2(), r.seconds.log2()))
            .collect();
        let slopes: Vec<f64> = pts
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect();
        assert!(slopes.iter().all(|&s| s > 0.0));
        for w in slopes.windows(2) {
            assert!(
                (w[1] - w[0]).abs() <= 0.15,
                "{}: {slopes:?}",
                chunk[0].series
            );
        }
    }
}

#[test]
fn csv_round_trip() {
    let ns = log_spaced(512.0, 4096.0, 4).unwrap();
    let rows = series(
        &[
            SeriesModel::Quantum(QuantumModel::AlgF),
            SeriesModel::Classical,
        ],
        &[27.0],
        &[1.0, 1000.0],
        &ns,
    )
    .unwrap();
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("n,series,clock_hz,compute_factor,seconds\n"));
    assert!(text.lines().nth(1).unwrap().starts_with("5.12e2,f,2.7e1,,"));
    let back: Vec<SeriesRow<f64>> = read_csv(text.as_bytes()).unwrap();
    assert_eq!(back, rows);
}
