//! Check a user-supplied model description.
//!
//! Loads the JSON file, then runs every checker the file's contents support:
//! Born reproduction (direct and through each resolvable kernel), triviality
//! classification, ψ-onticity, parameter independence for declared joint
//! links, and the chained-ladder verification when the file carries ladder
//! tags (`psi_d` preparation plus `A[n]`/`B[n]` responses).
//!
//! Classification rows (triviality defect, is_trivial, is_psi_ontic) are
//! informational: they report what the model *is*, not whether it is valid,
//! so they never fail the run.

use ontic_models::{
    is_psi_ontic, model_is_trivial, parameter_independence_defect, reproduce_defect,
    triviality_defect, LoadedModel,
};

use crate::args::ModelArgs;
use crate::error::{CliError, Result};
use crate::report::{CheckRecord, Report};

pub fn run(args: &ModelArgs) -> Result<Report> {
    let loaded = ontic_models::load_model_file(&args.path)?;
    let checks = model_checks(&loaded, args.tol_oracle)?;
    if checks.is_empty() {
        return Err(CliError::usage(format!(
            "`{}` declares no checkable content (no preparations or responses)",
            args.path.display()
        )));
    }
    Ok(Report::new("model", None, checks))
}

pub fn model_checks(loaded: &LoadedModel, tol: f64) -> Result<Vec<CheckRecord>> {
    let model = &loaded.model;
    let registry = &loaded.registry;
    let mut checks = Vec::new();

    let state_resolves = |tag: &str| registry.state(tag).is_ok();
    let all_states_resolve = model
        .preparations()
        .iter()
        .all(|prep| state_resolves(prep.represents()));

    for prep in model.preparations() {
        if !state_resolves(prep.represents()) {
            // No quantum referent for this preparation: Born comparisons are
            // undefined, so reproduction rows are skipped for it.
            continue;
        }
        for response in model.responses() {
            if registry.observable(response.represents()).is_err() {
                continue;
            }
            let defect = reproduce_defect(registry, model, prep, response, None)?;
            checks.push(CheckRecord::at_most(
                format!("reproduce[{}|{}]", prep.represents(), response.represents()),
                defect,
                0.0,
                tol,
            ));
            for kernel in model.kernels() {
                if registry.unitary(kernel.represents()).is_err() {
                    continue;
                }
                let defect = reproduce_defect(registry, model, prep, response, Some(kernel))?;
                checks.push(CheckRecord::at_most(
                    format!(
                        "reproduce[{}|{}|{}]",
                        prep.represents(),
                        response.represents(),
                        kernel.represents()
                    ),
                    defect,
                    0.0,
                    tol,
                ));
            }
            let defect = triviality_defect(registry, model, prep, response)?;
            checks.push(CheckRecord::info(
                format!(
                    "triviality_defect[{}|{}]",
                    prep.represents(),
                    response.represents()
                ),
                defect,
            ));
        }
    }

    if all_states_resolve && !model.preparations().is_empty() && !model.responses().is_empty() {
        let observables_resolve = model
            .responses()
            .iter()
            .all(|response| registry.observable(response.represents()).is_ok());
        if observables_resolve {
            checks.push(CheckRecord::info_flag(
                "is_trivial",
                model_is_trivial(registry, model, tol)?,
            ));
            checks.push(CheckRecord::info_flag(
                "is_psi_ontic",
                is_psi_ontic(registry, model, tol)?,
            ));
        }
    }

    for link in &loaded.links {
        let fetch = |tag: &str| {
            model.response(tag).map_err(|_| CliError::Schema {
                pointer: "/joint_links".to_string(),
                detail: format!("joint link references unknown response `{tag}`"),
            })
        };
        let local_a = fetch(&link.local_a)?;
        let local_b = fetch(&link.local_b)?;
        let joint = fetch(&link.joint)?;
        let defect = parameter_independence_defect(model, local_a, local_b, joint)?;
        checks.push(CheckRecord::at_most(
            format!("parameter_independence[{}]", link.joint),
            defect,
            0.0,
            tol,
        ));
    }

    if let Some(record) = chained_ladder_check(model, tol)? {
        checks.push(record);
    }

    Ok(checks)
}

/// Run the chained-ladder verification when the model carries the ladder
/// tag scheme: a preparation for the maximally entangled pair plus local
/// responses `A[0..=N]`, `B[0..=N]`. The ladder convention rotates in the
/// (1, 2) outcome plane.
fn chained_ladder_check(
    model: &ontic_models::OnticModel,
    tol: f64,
) -> Result<Option<CheckRecord>> {
    if model
        .preparation(chained_bell::MAXIMALLY_ENTANGLED_TAG)
        .is_err()
    {
        return Ok(None);
    }
    let mut extent = 0usize;
    while model.response(&format!("A[{extent}]")).is_ok()
        && model.response(&format!("B[{extent}]")).is_ok()
    {
        extent += 1;
    }
    if extent == 0 {
        return Ok(None);
    }
    let half_length = extent - 1;
    let shape = model.shape();
    let d = match shape {
        [d, d2] if d == d2 && *d >= 2 => *d,
        _ => {
            return Err(CliError::Schema {
                pointer: "/shape".to_string(),
                detail: format!(
                    "ladder tags require a bipartite shape [d, d] with d >= 2, got {shape:?}"
                ),
            })
        }
    };
    let report = chained_bell::verify_equiprobability(model, d, half_length, 1, 2)?;
    let mut record = CheckRecord::at_most(
        format!("chained_equiprobability[N={half_length}]"),
        report.lhs,
        report.bound,
        tol,
    );
    record.pass = record.pass && report.holds && report.failing_rung.is_none();
    Ok(Some(record))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Format;
    use std::io::Write as _;

    fn shipped(name: &str) -> std::path::PathBuf {
        std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("../..")
            .join("models")
            .join(name)
    }

    fn model_args(path: std::path::PathBuf) -> ModelArgs {
        ModelArgs {
            path,
            tol_oracle: 1e-9,
            tol_exact: 1e-12,
            out: None,
            format: Format::Json,
        }
    }

    #[test]
    fn quantum_fragment_file_is_trivial_and_psi_ontic() {
        let report = run(&model_args(shipped("beltrametti_bugajski.json"))).unwrap();
        assert!(report.pass);
        let find = |name: &str| {
            report
                .checks
                .iter()
                .find(|check| check.name == name)
                .unwrap_or_else(|| panic!("missing check {name}"))
        };
        assert_eq!(find("is_trivial").value, 1.0);
        assert_eq!(find("is_psi_ontic").value, 1.0);
        for check in &report.checks {
            if check.name.starts_with("reproduce[") || check.name.starts_with("triviality_defect[")
            {
                assert!(check.value <= 1e-12, "{}: {}", check.name, check.value);
            }
        }
    }

    #[test]
    fn deterministic_counterexample_reports_the_separation() {
        let report = run(&model_args(shipped("deterministic_counterexample.json"))).unwrap();
        assert!(report.pass, "classification rows must not fail the run");
        let find = |name: &str| {
            report
                .checks
                .iter()
                .find(|check| check.name == name)
                .unwrap_or_else(|| panic!("missing check {name}"))
        };
        assert!(find("reproduce[plus|A]").value <= 1e-12);
        assert!((find("triviality_defect[plus|A]").value - 0.5).abs() <= 1e-12);
        assert_eq!(find("is_trivial").value, 0.0);
    }

    #[test]
    fn truncated_files_are_schema_errors() {
        let full = std::fs::read_to_string(shipped("beltrametti_bugajski.json")).unwrap();
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(full[..full.len() / 2].as_bytes()).unwrap();
        let err = run(&model_args(file.path().to_path_buf())).unwrap_err();
        assert_eq!(err.exit_code(), crate::error::ExitCode::Usage);
        assert!(matches!(err, CliError::Schema { .. }));
    }

    #[test]
    fn missing_files_are_usage_errors() {
        let err = run(&model_args("does/not/exist.json".into())).unwrap_err();
        assert_eq!(err.exit_code(), crate::error::ExitCode::Usage);
    }
}
