# Utils package - shared validation helpers
from .validators import (
    normalize_relative_path,
    validate_budget,
    validate_overlay,
    validate_temperature,
)

__all__ = [
    'normalize_relative_path',
    'validate_budget',
    'validate_overlay',
    'validate_temperature',
]
