//! Parameter sweeps over (weight preset, window, multiplier, chain length)
//! grids, one CSV row per point.
//!
//! Grid points are evaluated in parallel up to `--jobs` threads; assembly is
//! single-threaded and follows the lexicographic order of the grid, so the
//! output is byte-identical regardless of the thread count.

use std::sync::atomic::{AtomicUsize, Ordering};

use embezzlement::{
    build_psi_f, closed_form_oracle_check_on, embezzlement_fidelity, rational_approximation,
    EmbezzleConfig, RotationPair,
};

use crate::args::{amplitudes_from_squares, parse_f64_list, parse_u64_list, SweepArgs};
use crate::error::{CliError, Result};
use crate::report::fmt_float;

#[derive(Clone, Debug)]
struct GridPoint {
    c_sq: Vec<f64>,
    eps: f64,
    big_n: u64,
    chain_l: u64,
}

#[derive(Clone, Debug)]
struct RowValues {
    d_eps: u64,
    pair_dim: u64,
    term_chain: f64,
    term_eps: f64,
    term_log: f64,
    total: f64,
    fidelity: f64,
    max_oracle_residual: f64,
}

pub fn run(args: &SweepArgs) -> Result<String> {
    let presets: Vec<Vec<f64>> = args
        .c_sq
        .iter()
        .map(|raw| parse_f64_list(raw, "--c-sq"))
        .collect::<Result<_>>()?;
    for preset in &presets {
        amplitudes_from_squares(preset)?;
    }
    let rank = presets[0].len();
    if presets.iter().any(|preset| preset.len() != rank) {
        return Err(CliError::usage(
            "--c-sq: all presets in one sweep must have the same rank; \
             the rank fixes the CSV column set",
        ));
    }
    let eps_grid = parse_f64_list(&args.eps, "--eps")?;
    for &eps in &eps_grid {
        if !eps.is_finite() || eps <= 0.0 {
            return Err(CliError::usage(format!(
                "--eps: window half-widths must be strictly positive, got {eps}"
            )));
        }
    }
    let n_grid = parse_u64_list(&args.big_n, "--big-n")?;
    let l_grid = parse_u64_list(&args.chain_l, "--chain-l")?;
    if args.angles == 0 {
        return Err(CliError::usage("--angles: need at least one probe angle"));
    }

    let mut points = Vec::new();
    for preset in &presets {
        for &eps in &eps_grid {
            for &big_n in &n_grid {
                for &chain_l in &l_grid {
                    points.push(GridPoint {
                        c_sq: preset.clone(),
                        eps,
                        big_n,
                        chain_l,
                    });
                }
            }
        }
    }
    points.sort_by(|a, b| {
        let weights = a
            .c_sq
            .iter()
            .zip(&b.c_sq)
            .map(|(x, y)| x.total_cmp(y))
            .find(|ordering| ordering.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal);
        weights
            .then(a.eps.total_cmp(&b.eps))
            .then(a.big_n.cmp(&b.big_n))
            .then(a.chain_l.cmp(&b.chain_l))
    });

    let rows = evaluate_grid(&points, args.angles, args.jobs.max(1))?;
    render_csv(rank, &points, &rows)
}

fn evaluate_grid(
    points: &[GridPoint],
    angles: usize,
    jobs: usize,
) -> Result<Vec<RowValues>> {
    let jobs = jobs.min(points.len().max(1));
    let next = AtomicUsize::new(0);
    let mut merged: Vec<(usize, Result<RowValues>)> = Vec::with_capacity(points.len());
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for _ in 0..jobs {
            let next = &next;
            handles.push(scope.spawn(move || {
                let mut local = Vec::new();
                loop {
                    let index = next.fetch_add(1, Ordering::Relaxed);
                    if index >= points.len() {
                        break;
                    }
                    local.push((index, evaluate_point(&points[index], angles)));
                }
                local
            }));
        }
        for handle in handles {
            merged.extend(handle.join().expect("sweep worker panicked"));
        }
    });
    merged.sort_by_key(|(index, _)| *index);
    merged
        .into_iter()
        .map(|(_, result)| result)
        .collect::<Result<Vec<_>>>()
}

fn evaluate_point(point: &GridPoint, angles: usize) -> Result<RowValues> {
    let amplitudes: Vec<f64> = point.c_sq.iter().map(|&value| value.sqrt()).collect();
    let approx = rational_approximation(&amplitudes, point.eps)?;
    let d_eps = approx.d_eps();
    let counts = approx.counts().to_vec();
    let config = EmbezzleConfig::new(approx, point.big_n)?;
    let pair_dim = config.pair_dim();

    let rungs = (2 * point.chain_l + 1) as f64;
    let term_chain = std::f64::consts::PI.powi(2) / (2.0 * rungs);
    let term_eps = (4 * point.chain_l + 3) as f64 * point.eps;
    let term_log = rungs * (d_eps as f64).ln() / (pair_dim as f64).ln_1p();
    let total = term_chain + term_eps + term_log;

    let fidelity = embezzlement_fidelity(&config)?;
    let max_oracle_residual = probe_oracle_residual(&config, &counts, angles)?;

    Ok(RowValues {
        d_eps,
        pair_dim,
        term_chain,
        term_eps,
        term_log,
        total,
        fidelity,
        max_oracle_residual,
    })
}

/// Compare the closed-form cross expectation against the brute-force oracle
/// on a deterministic fan of probe angles and report the worst residual.
fn probe_oracle_residual(
    config: &EmbezzleConfig,
    counts: &[u64],
    angles: usize,
) -> Result<f64> {
    let mut pairs = Vec::new();
    if counts.len() >= 2 {
        pairs.push(RotationPair::new(config, 1, 1, 2, 1)?);
        if counts[1] >= 2 {
            pairs.push(RotationPair::new(config, 1, 1, 2, 2)?);
        }
    } else if counts[0] >= 2 {
        pairs.push(RotationPair::new(config, 1, 1, 1, 2)?);
    }
    if pairs.is_empty() {
        return Ok(0.0);
    }
    let psi_f = build_psi_f(config)?;
    let mut worst = 0.0f64;
    let quarter = std::f64::consts::FRAC_PI_2;
    for k in 0..angles {
        let fraction = (k + 1) as f64 / (angles + 1) as f64;
        let theta = quarter * fraction;
        let phi = quarter * (1.0 - 0.45 * fraction);
        for pair in &pairs {
            let (_, diff) = closed_form_oracle_check_on(config, &psi_f, pair, theta, phi)?;
            worst = worst.max(diff);
        }
    }
    Ok(worst)
}

fn render_csv(rank: usize, points: &[GridPoint], rows: &[RowValues]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["d".to_string()];
    for i in 1..=rank {
        header.push(format!("c_sq_{i}"));
    }
    for column in [
        "eps", "d_eps", "N", "D", "L", "term_chain", "term_eps", "term_log", "total",
        "fidelity", "max_oracle_residual",
    ] {
        header.push(column.to_string());
    }
    writer.write_record(&header).expect("csv header");

    for (point, row) in points.iter().zip(rows) {
        let mut record = vec![rank.to_string()];
        for &value in &point.c_sq {
            record.push(fmt_float(value));
        }
        record.push(fmt_float(point.eps));
        record.push(row.d_eps.to_string());
        record.push(point.big_n.to_string());
        record.push(row.pair_dim.to_string());
        record.push(point.chain_l.to_string());
        record.push(fmt_float(row.term_chain));
        record.push(fmt_float(row.term_eps));
        record.push(fmt_float(row.term_log));
        record.push(fmt_float(row.total));
        record.push(fmt_float(row.fidelity));
        record.push(fmt_float(row.max_oracle_residual));
        writer.write_record(&record).expect("csv row");
    }
    let bytes = writer.into_inner().expect("csv buffer");
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
