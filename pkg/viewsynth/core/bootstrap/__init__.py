from .bootstrap import bootstrap
