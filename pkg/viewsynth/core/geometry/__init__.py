from .errors import GeometryError, DomainError, ValidationError
from .camera import CameraModel, scale_intrinsics
from .pose import RelativePose, check_rotation
from .rotation import PoseParams, rotation_to_axis_angle, rodrigues, pose_params, pose_vector
from .projection import CoordinateMaps, Reprojection, unproject, reproject, MIN_TARGET_DEPTH
