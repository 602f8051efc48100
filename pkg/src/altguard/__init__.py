"""Exact minimum guard sets for 1.5D terrains watched from a horizontal altitude line."""
from .geom import AltitudeLine, GeometryError, Point, Ray, Terrain
from .sweep import Solution, replay, solve
from .witness import Certificate, certify

__all__ = [
    "AltitudeLine",
    "Certificate",
    "GeometryError",
    "Point",
    "Ray",
    "Solution",
    "Terrain",
    "certify",
    "replay",
    "solve",
]
