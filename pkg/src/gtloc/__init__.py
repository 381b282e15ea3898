"""Ground-texture localization with identity matching over compact binary descriptors."""

from gtloc.errors import (
    BitWidthMismatch,
    CorruptRecord,
    DegenerateInput,
    EmptyMap,
    FormatError,
    GtlocError,
    LocalizationError,
    NoConsensus,
    NoFeatures,
    NoVotes,
    OutOfBounds,
    UnknownId,
)
from gtloc.geometry import (
    Correspondence,
    CorrespondenceSet,
    Pose2D,
    RansacConfig,
    SuccessCriteria,
    compose,
    estimate_rigid,
    implied_origin,
    inverse,
    is_success,
    ransac_pose,
)

__version__ = "0.1.0"

__all__ = [
    "BitWidthMismatch",
    "Correspondence",
    "CorrespondenceSet",
    "CorruptRecord",
    "DegenerateInput",
    "EmptyMap",
    "FormatError",
    "GtlocError",
    "LocalizationError",
    "NoConsensus",
    "NoFeatures",
    "NoVotes",
    "OutOfBounds",
    "Pose2D",
    "RansacConfig",
    "SuccessCriteria",
    "UnknownId",
    "compose",
    "estimate_rigid",
    "implied_origin",
    "inverse",
    "is_success",
    "ransac_pose",
]
