from .weights import LossWeights
from .image import SSIM_C1, SSIM_C2, to_unit, ssim_map, ssim, photometric_error
from .depth import MissingPoseError, warp_to_reference, smoothness_loss, reprojection_errors, depth_loss
from .transform import TransformationSimilarity, ts_loss
from .perceptual import PerceptualExtractor, l1_loss, perceptual_loss, l1_and_perceptual
from .adversarial import (
    PatchDiscriminator,
    DiscriminatorPair,
    AdversarialLosses,
    random_crop_box,
    hinge_d_loss,
    hinge_g_loss,
    adversarial_losses,
)
from .total import ViewLoss, total_view_loss, weighted_sum
