"""Spin-j symbol correspondences, twisted products and their classical limit."""

__version__ = "0.1.0"
