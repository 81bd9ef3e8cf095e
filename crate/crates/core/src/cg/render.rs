use crate::grid::{
    DisplayLabel, Dynamics, FovLabel, LabelState, Occlusion, Occupancy, Reliability, Sensing,
};

/// The single most relevant label of a cell.
///
/// Occupied cells show `unreliable` or their dynamics label, free cells show
/// `free`. Unknown cells take the first of: an occlusion label, `m_fov`,
/// `unsensed`, `o_fov`, `f_fov`, and otherwise `other`. Missing slots are
/// read as their least informative value, so every state maps to a label.
pub fn resolve_render_label(s: &LabelState) -> DisplayLabel {
    match s.occ {
        Occupancy::Occupied => {
            if s.reli != Some(Reliability::Reliable) {
                return DisplayLabel::Unreliable;
            }
            match s.dynamics.unwrap_or(Dynamics::Static) {
                Dynamics::Static => DisplayLabel::OccupiedStatic,
                Dynamics::Oncoming => DisplayLabel::Oncoming,
                Dynamics::Receding => DisplayLabel::Receding,
            }
        }
        Occupancy::Free => DisplayLabel::Free,
        Occupancy::Unknown => {
            match s.occl.unwrap_or(Occlusion::NonOccluded) {
                Occlusion::Static => return DisplayLabel::OcclStatic,
                Occlusion::Dynamic => return DisplayLabel::OcclDynamic,
                Occlusion::Unreliable => return DisplayLabel::OcclUnreliable,
                Occlusion::NonOccluded => {}
            }
            let fov = s.fov.unwrap_or(FovLabel::MFov);
            if fov == FovLabel::MFov {
                return DisplayLabel::MFov;
            }
            if s.sen.unwrap_or(Sensing::Unsensed) == Sensing::Unsensed {
                return DisplayLabel::Unsensed;
            }
            match fov {
                FovLabel::OFov => DisplayLabel::OFov,
                FovLabel::FFov => DisplayLabel::FFov,
                _ => DisplayLabel::Other,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unreliable_overrides_dynamics() {
        let s = LabelState::occupied(Reliability::Unreliable, Dynamics::Oncoming);
        assert_eq!(resolve_render_label(&s), DisplayLabel::Unreliable);
        let s = LabelState::occupied(Reliability::Reliable, Dynamics::Oncoming);
        assert_eq!(resolve_render_label(&s), DisplayLabel::Oncoming);
    }

    #[test]
    fn occlusion_beats_fov() {
        let s = LabelState::unknown(FovLabel::InView, Sensing::Sensed, Occlusion::Dynamic);
        assert_eq!(resolve_render_label(&s), DisplayLabel::OcclDynamic);
        let s = LabelState::unknown(FovLabel::MFov, Sensing::Unsensed, Occlusion::Static);
        assert_eq!(resolve_render_label(&s), DisplayLabel::OcclStatic);
    }

    #[test]
    fn unknown_cascade() {
        let u = |f, s| resolve_render_label(&LabelState::unknown(f, s, Occlusion::NonOccluded));
        assert_eq!(u(FovLabel::MFov, Sensing::Sensed), DisplayLabel::MFov);
        assert_eq!(u(FovLabel::OFov, Sensing::Unsensed), DisplayLabel::Unsensed);
        assert_eq!(u(FovLabel::OFov, Sensing::Sensed), DisplayLabel::OFov);
        assert_eq!(u(FovLabel::FFov, Sensing::Sensed), DisplayLabel::FFov);
        assert_eq!(u(FovLabel::InView, Sensing::Sensed), DisplayLabel::Other);
    }
}
