//! Composition laws for ontic-model components.
//!
//! Three finite-sum compositions: measuring after a transformation pulls the
//! response function back through the kernel, transforming after a
//! preparation pushes the measure forward, and two transformations compose
//! into one kernel. Result tags are synthesized from the operand tags
//! (`U*AU`, `UρU*`, and the concatenation for composed transformations); the
//! tags are bookkeeping only and are not auto-registered as quantum
//! referents.

use quantum_core::numeric::CompensatedSum;

use crate::error::{OnticError, Result};
use crate::types::{PreparationMeasure, ResponseFunction, TransformationKernel};

/// Response function of "first transform, then measure":
/// p'(a|λ) = Σ_λ̃ p(a|λ̃) γ(λ̃|λ). The result lives on the kernel's source
/// space and represents the conjugated observable `U*AU`.
pub fn response_after_kernel(
    response: &ResponseFunction,
    kernel: &TransformationKernel,
) -> Result<ResponseFunction> {
    if response.space() != kernel.target() {
        return Err(OnticError::SpaceMismatch {
            what: format!(
                "response `{}` composed with kernel `{}`",
                response.represents(),
                kernel.represents()
            ),
        });
    }
    let n_out = response.outcomes().len();
    let rows = kernel
        .rows()
        .iter()
        .map(|krow| {
            (0..n_out)
                .map(|a| {
                    let mut acc = CompensatedSum::new();
                    for (to, &gamma) in krow.iter().enumerate() {
                        if gamma != 0.0 {
                            acc.add(gamma * response.prob(to, a));
                        }
                    }
                    acc.value()
                })
                .collect()
        })
        .collect();
    ResponseFunction::new(
        kernel.source().clone(),
        response.outcomes().to_vec(),
        rows,
        format!(
            "{u}*{a}{u}",
            u = kernel.represents(),
            a = response.represents()
        ),
    )
}

/// Measure of "first prepare, then transform": μ'(λ̃) = Σ_λ γ(λ̃|λ) μ(λ).
/// The result lives on the kernel's target space and represents the evolved
/// state `UρU*`.
pub fn pushforward_measure(
    preparation: &PreparationMeasure,
    kernel: &TransformationKernel,
) -> Result<PreparationMeasure> {
    if preparation.space() != kernel.source() {
        return Err(OnticError::SpaceMismatch {
            what: format!(
                "preparation `{}` pushed through kernel `{}`",
                preparation.represents(),
                kernel.represents()
            ),
        });
    }
    let n_target = kernel.target().len();
    let weights = (0..n_target)
        .map(|to| {
            let mut acc = CompensatedSum::new();
            for (from, &mu) in preparation.weights().iter().enumerate() {
                if mu != 0.0 {
                    acc.add(mu * kernel.prob(from, to));
                }
            }
            acc.value()
        })
        .collect();
    PreparationMeasure::new(
        kernel.target().clone(),
        weights,
        format!(
            "{u}{rho}{u}*",
            u = kernel.represents(),
            rho = preparation.represents()
        ),
    )
}

/// Kernel of "`inner` then `outer`":
/// γ(λ''|λ) = Σ_λ' outer(λ''|λ') inner(λ'|λ).
pub fn kernel_product(
    outer: &TransformationKernel,
    inner: &TransformationKernel,
) -> Result<TransformationKernel> {
    if inner.target() != outer.source() {
        return Err(OnticError::SpaceMismatch {
            what: format!(
                "kernel `{}` composed after kernel `{}`",
                outer.represents(),
                inner.represents()
            ),
        });
    }
    let n_target = outer.target().len();
    let rows = inner
        .rows()
        .iter()
        .map(|irow| {
            (0..n_target)
                .map(|to| {
                    let mut acc = CompensatedSum::new();
                    for (mid, &g_in) in irow.iter().enumerate() {
                        if g_in != 0.0 {
                            acc.add(g_in * outer.prob(mid, to));
                        }
                    }
                    acc.value()
                })
                .collect()
        })
        .collect();
    TransformationKernel::new(
        inner.source().clone(),
        outer.target().clone(),
        rows,
        format!("{}{}", outer.represents(), inner.represents()),
    )
}
