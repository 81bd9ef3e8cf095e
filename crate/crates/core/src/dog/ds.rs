use thiserror::Error;

use crate::grid::Masses;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, Error, PartialEq)]
pub enum DsError {
    #[error("total conflict between prior and observation (occ {occ} vs free {free})")]
    TotalConflict { occ: f64, free: f64 },
}

/// Discounts `prior` by `discount` (the removed belief moves to Ω) and fuses
/// it with `obs` using Dempster's rule, renormalizing away the conflict.
pub fn ds_update<T: Scalar>(
    prior: Masses<T>,
    obs: Masses<T>,
    discount: T,
) -> Result<Masses<T>, DsError> {
    let o1 = prior.occ * discount;
    let f1 = prior.free * discount;
    let u1 = T::one() - o1 - f1;
    let (o2, f2) = (obs.occ, obs.free);
    let u2 = obs.unknown();

    let conflict = o1 * f2 + f1 * o2;
    let norm = T::one() - conflict;
    if !(norm > T::zero()) {
        return Err(DsError::TotalConflict {
            occ: o1.as_f64(),
            free: f1.as_f64(),
        });
    }
    let occ = (o1 * o2 + o1 * u2 + u1 * o2) / norm;
    let free = (f1 * f2 + f1 * u2 + u1 * f2) / norm;
    Ok(Masses::new(occ.max(T::zero()), free.max(T::zero())))
}
