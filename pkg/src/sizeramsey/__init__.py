"""Bounded-degree graph embeddings into tree products and Ramsey host experiments."""

from __future__ import annotations

__version__ = "0.1.0"
