from .base_service import BaseService
from .render_service import FORWARD_TIMER, RenderResult, RenderService
from .evaluation_service import EvaluationService
