from .maps import *  # noqa: F401,F403
from .maps import __all__ as _maps_all
from .morphism import BASIS_NAMES, Morphism, build, describe
from .parse import ExpressionError, parse

__all__ = list(_maps_all) + ["Morphism", "build", "describe", "BASIS_NAMES", "parse", "ExpressionError"]
