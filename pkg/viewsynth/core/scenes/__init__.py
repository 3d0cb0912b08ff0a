from .errors import GenerationError, DatasetError
from .texture import Texture, TEXTURE_KINDS
from .scene import Quad, Scene, generate_scene, BACKGROUND_DEPTH, MIN_QUADS, MAX_QUADS
from .raster import rasterize
from .pairs import SceneSample, make_pair, sample_motion, render_view, quantize, MAX_ATTEMPTS
from .io import write_ppm, read_ppm, write_pgm, read_pgm, write_pfm, read_pfm
from .dataset import (
    MANIFEST,
    ManifestEntry,
    Sample,
    Dataset,
    build_dataset,
    read_manifest,
    sample_seeds,
    sample_stem,
    stack_batch,
)
