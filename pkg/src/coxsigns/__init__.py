"""Higher sign cocycles of finite Coxeter groups, with exact arithmetic."""

__version__ = "0.1.0"
