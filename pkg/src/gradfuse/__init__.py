"""Multi-focus image fusion with gradient-domain initial fusion and Tenengrad saliency enhancement."""
from .image import ColorImage, ColorSpace, ImageError, load_image, luma, rgb_to_ycbcr, save_image, ycbcr_to_rgb
from .params import Ablation, FusionParams, ablation_config
from .pipeline import FusionResult, compose, fuse_pair

__all__ = [
    "Ablation", "ColorImage", "ColorSpace", "FusionParams", "FusionResult", "ImageError",
    "ablation_config", "compose", "fuse_pair", "load_image", "luma", "rgb_to_ycbcr",
    "save_image", "ycbcr_to_rgb",
]
