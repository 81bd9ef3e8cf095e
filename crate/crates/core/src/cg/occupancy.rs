use super::Thresholds;
use crate::grid::{Masses, Occupancy};
use crate::scalar::Scalar;

/// Occupied if `m_occ ≥ T_O`, else free if `m_free ≥ T_F`, else unknown.
pub fn categorize_occupancy<T: Scalar>(m: Masses<T>, th: &Thresholds<T>) -> Occupancy {
    if m.occ >= th.t_o {
        Occupancy::Occupied
    } else if m.free >= th.t_f {
        Occupancy::Free
    } else {
        Occupancy::Unknown
    }
}
