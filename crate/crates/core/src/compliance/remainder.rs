
use super::{check_sync_compliance_from, ComplianceError, Verdict};
use crate::lang::{Action, Queue};
use crate::semantics::{async_endpoint_steps, EndpointConfig, StepLabel};

/// `c − σ`: the endpoint after reading every message of `σ`, in order,
/// without letting time pass. `None` when some message cannot be read
/// immediately.
pub fn remainder(c: &EndpointConfig, sigma: &Queue) -> Option<EndpointConfig> {
    let mut cur = c.clone();
    for a in sigma {
        cur = read(&cur, a)?;
    }
    Some(cur)
}

fn read(c: &EndpointConfig, a: &Action) -> Option<EndpointConfig> {
    async_endpoint_steps(c)
        .into_iter()
        .find(|(l, _)| *l == StepLabel::In(a.clone()))
        .map(|(_, next)| next)
}

/// `(p, ρ, ν)` is r-compliant with `(q, σ, η)`: both remainders exist and
/// the residual terms are synchronously compliant from the residual
/// valuations.
pub fn r_compliant(cl: &EndpointConfig, cr: &EndpointConfig) -> Result<bool, ComplianceError> {
    let (Some(l), Some(r)) = (remainder(cl, &cr.queue), remainder(cr, &cl.queue)) else {
        return Ok(false);
    };
    let verdict = check_sync_compliance_from(&l.term, &l.valuation, &r.term, &r.valuation, true, None)?;
    Ok(matches!(verdict, Some(Verdict::Compliant)))
}

