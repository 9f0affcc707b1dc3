//! The closing-bound command: run the three-term recipe for a weight
//! profile and error budget, and report every selected parameter alongside
//! the terms.

use crate::args::{amplitudes_from_squares, parse_f64_list, BoundArgs};
use crate::error::{CliError, Result};
use crate::report::{CheckRecord, Report};

pub fn run(args: &BoundArgs) -> Result<Report> {
    let c_sq = parse_f64_list(&args.c_sq, "--c-sq")?;
    let amplitudes = amplitudes_from_squares(&c_sq)?;
    let budget = args.epsilon_total;
    if !budget.is_finite() || budget <= 0.0 {
        return Err(CliError::usage(format!(
            "--epsilon-total must be strictly positive, got {budget}"
        )));
    }

    let bound = embezzlement::final_bound(&amplitudes, budget)?;

    let mut checks = vec![
        CheckRecord::at_most("term_chain", bound.term_chain, budget / 3.0, 0.0),
        CheckRecord::at_most("term_eps", bound.term_eps, budget / 3.0, 0.0),
        CheckRecord::at_most("term_log", bound.term_log, budget / 3.0, 0.0),
        CheckRecord::at_most("total", bound.total, budget, 0.0),
        CheckRecord::info("chain_half_length", bound.chain_half_length as f64),
        CheckRecord::info("eps", bound.eps),
        CheckRecord::info("d_eps", bound.d_eps as f64),
        CheckRecord::info("count_product", bound.count_product as f64),
        CheckRecord::info("multiplier_log10", bound.multiplier_log10),
    ];
    if let Some(multiplier) = bound.multiplier {
        checks.push(CheckRecord::info("multiplier", multiplier));
    }

    // Human-readable recap on stderr; the report on stdout stays the
    // machine-readable source of truth.
    eprintln!(
        "L = {}, eps = {:.6e}, d_eps = {}, N = {}, terms = ({:.6e}, {:.6e}, {:.6e}), total = {:.6e} < {budget}",
        bound.chain_half_length,
        bound.eps,
        bound.d_eps,
        match bound.multiplier {
            Some(multiplier) => format!("{multiplier}"),
            None => format!("10^{:.3}", bound.multiplier_log10),
        },
        bound.term_chain,
        bound.term_eps,
        bound.term_log,
        bound.total,
    );

    Ok(Report::new("bound", None, checks))
}
