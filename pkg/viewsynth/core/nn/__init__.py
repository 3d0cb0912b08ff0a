from .module import Module, Parameter, StateDictError
from .init import trunc_normal, kaiming_normal, initialize
from .layers import Linear, Conv2d, LayerNorm, ChannelNorm, Mlp
from .attention import HEADS, MultiHeadAttention, MAB, ISAB
from .conv_blocks import PatchEmbed, MixFFN, TokenMixFFN, ResNetBlock
from .positional import POS_DIM, PositionalEncoder, PoseEncoder, RelativePositionTable, window_offsets
from .lsa import LocalSetAttention
