from .psnr import PSNR_CAP, psnr
from .splits import SPLITS, OUT_OF_RANGE, BOUNDS, MOVEMENTS, LARGE_MOVE, categorize_split, categorize_movement
from .histogram import RATIO_RANGE, HISTOGRAM_BINS, Histogram, log_edges, norm_ratio_histogram
from .report import SampleScore, EvalReport, write_histogram_csv
