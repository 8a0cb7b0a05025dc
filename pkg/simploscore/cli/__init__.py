"""
Command line interface of L{simploscore}.
"""
from .runner import main, run

__all__ = ["main", "run"]
