"""
Mahler Kernels CLI Package

Command-line interface of the mahler-kernels tool.
"""

from .main import MahlerKernelsCLI, main

__all__ = ["MahlerKernelsCLI", "main"]
