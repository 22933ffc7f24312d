"""
Utility modules for symprod
"""

from .cache import LRUCache
from .config import SymprodConfig
from .errors import SymprodError

__all__ = ["SymprodConfig", "LRUCache", "SymprodError"]
