from .parser import parse
from .planner import plan

__all__ = ["parse", "plan"]
