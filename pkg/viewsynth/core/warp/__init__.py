from .errors import WarpError
from .splat import (
    SHARPNESS,
    COVERAGE_EPS,
    SplatEntries,
    SplatResult,
    splat_entries,
    splat_weight,
    splat_forward,
    out_of_view_mask,
    mask_ratio,
)
from .coverage import QUARTER, quarter_depth, out_of_view_from_depth, upsample_mask
