from .config import ViewNetConfig, DepthNetConfig
from .model import Model
from .model_registry import ModelRegistry
from .encoder import GLSABlock, Encoder
from .renderers import TransformerBlock, RendererBody, ExplicitOutput, ExplicitRenderer, ImplicitRenderer
from .decoder import Decoder
from .viewnet import RenderedPair, ViewOutput, ViewNet, norm_ratio_map
from .depthnet import DepthNet

ModelRegistry().register(ViewNet.name, ViewNet).register(DepthNet.name, DepthNet)
