"""Headless escape-room engine and building-physics simulation service."""

__version__ = "0.1.0"
