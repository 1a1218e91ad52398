"""Class label spaces shared across the pipeline.

The landmark classifier covers the 26 letters plus SPACE and DELETE control
gestures. The silhouette classifier covers the letters plus a BLANK rest
class. The shared space is their union in a fixed order, so probability
vectors from either model can be projected without renumbering letters.
"""
from __future__ import annotations

LETTERS: tuple[str, ...] = tuple("ABCDEFGHIJKLMNOPQRSTUVWXYZ")
SPACE = "SPACE"
DELETE = "DELETE"
BLANK = "BLANK"

RFC_CLASSES: tuple[str, ...] = LETTERS + (SPACE, DELETE)
CNN_CLASSES: tuple[str, ...] = LETTERS + (BLANK,)
SHARED_CLASSES: tuple[str, ...] = LETTERS + (SPACE, DELETE, BLANK)

RFC_INDEX: dict[str, int] = {name: i for i, name in enumerate(RFC_CLASSES)}
CNN_INDEX: dict[str, int] = {name: i for i, name in enumerate(CNN_CLASSES)}
SHARED_INDEX: dict[str, int] = {name: i for i, name in enumerate(SHARED_CLASSES)}
