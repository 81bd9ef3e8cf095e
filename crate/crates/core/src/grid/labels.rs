//! The six-slot semantic label vector of a cell and the single label used
//! for display.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Token used in dumps for an inactive slot.
pub const NONE_TOKEN: &str = "none";

macro_rules! token_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $tok:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $tok),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = UnknownToken;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($tok => Ok($name::$variant),)+
                    _ => Err(UnknownToken {
                        slot: stringify!($name),
                        token: s.to_string(),
                    }),
                }
            }
        }
    };
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("'{token}' is not a valid {slot} label")]
pub struct UnknownToken {
    pub slot: &'static str,
    pub token: String,
}

token_enum!(
    Occupancy {
        Occupied => "occupied",
        Free => "free",
        Unknown => "unknown",
    }
);

token_enum!(
    Reliability {
        Reliable => "reliable",
        Unreliable => "unreliable",
    }
);

token_enum!(
    Dynamics {
        Static => "static",
        Oncoming => "oncoming",
        Receding => "receding",
    }
);

token_enum!(
    FovLabel {
        InView => "in_view",
        MFov => "m_fov",
        OFov => "o_fov",
        FFov => "f_fov",
    }
);

token_enum!(
    Sensing {
        Sensed => "sensed",
        Unsensed => "unsensed",
    }
);

token_enum!(
    /// Occlusion cause. Declaration order is the multi-region priority:
    /// static beats dynamic beats unreliable.
    Occlusion {
        NonOccluded => "non_occluded",
        Static => "occl_static",
        Dynamic => "occl_dynamic",
        Unreliable => "occl_unreliable",
    }
);

token_enum!(
    /// The one label drawn for a cell.
    DisplayLabel {
        OccupiedStatic => "occupied_static",
        Oncoming => "oncoming",
        Receding => "receding",
        Unreliable => "unreliable",
        Free => "free",
        OcclStatic => "occl_static",
        OcclDynamic => "occl_dynamic",
        OcclUnreliable => "occl_unreliable",
        MFov => "m_fov",
        OFov => "o_fov",
        FFov => "f_fov",
        Unsensed => "unsensed",
        Other => "other",
    }
);

impl Occlusion {
    /// Rank used when several occlusion regions cover one cell; lower wins.
    pub fn priority(self) -> u8 {
        match self {
            Occlusion::Static => 0,
            Occlusion::Dynamic => 1,
            Occlusion::Unreliable => 2,
            Occlusion::NonOccluded => 3,
        }
    }
}

/// Parses an optional slot value where `"none"` means the slot is inactive.
pub fn parse_slot<L: FromStr<Err = UnknownToken>>(s: &str) -> Result<Option<L>, UnknownToken> {
    if s == NONE_TOKEN {
        Ok(None)
    } else {
        s.parse().map(Some)
    }
}

pub fn slot_str<L: fmt::Display>(l: &Option<L>) -> String {
    match l {
        Some(l) => l.to_string(),
        None => NONE_TOKEN.to_string(),
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LabelError {
    #[error("slot {slot} must be {expected} when occupancy is {occ}")]
    Activation {
        slot: &'static str,
        expected: &'static str,
        occ: Occupancy,
    },
}

/// Semantic labels of one cell. Slots that do not apply to the cell's
/// occupancy are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelState {
    pub occ: Occupancy,
    pub reli: Option<Reliability>,
    pub dynamics: Option<Dynamics>,
    pub fov: Option<FovLabel>,
    pub sen: Option<Sensing>,
    pub occl: Option<Occlusion>,
}

impl LabelState {
    pub fn free() -> Self {
        Self {
            occ: Occupancy::Free,
            reli: None,
            dynamics: None,
            fov: None,
            sen: None,
            occl: None,
        }
    }

    pub fn occupied(reli: Reliability, dynamics: Dynamics) -> Self {
        Self {
            occ: Occupancy::Occupied,
            reli: Some(reli),
            dynamics: Some(dynamics),
            fov: None,
            sen: None,
            occl: None,
        }
    }

    pub fn unknown(fov: FovLabel, sen: Sensing, occl: Occlusion) -> Self {
        Self {
            occ: Occupancy::Unknown,
            reli: None,
            dynamics: None,
            fov: Some(fov),
            sen: Some(sen),
            occl: Some(occl),
        }
    }

    /// Occupied cells carry reliability and dynamics; unknown cells carry
    /// FoV, sensing and occlusion; free cells carry nothing else.
    pub fn validate(&self) -> Result<(), LabelError> {
        let occupied = self.occ == Occupancy::Occupied;
        let unknown = self.occ == Occupancy::Unknown;
        let checks: [(&'static str, bool, bool); 5] = [
            ("reli", self.reli.is_some(), occupied),
            ("dyn", self.dynamics.is_some(), occupied),
            ("fov", self.fov.is_some(), unknown),
            ("sen", self.sen.is_some(), unknown),
            ("occl", self.occl.is_some(), unknown),
        ];
        for (slot, present, required) in checks {
            if present != required {
                return Err(LabelError::Activation {
                    slot,
                    expected: if required { "set" } else { "none" },
                    occ: self.occ,
                });
            }
        }
        Ok(())
    }
}
