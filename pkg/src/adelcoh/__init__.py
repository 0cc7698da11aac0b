"""Adelic cochain complexes of finite posets with exact cohomology."""
__version__ = "0.1.0"
