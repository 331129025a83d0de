"""Hexagonal lattice construction, pilot-reuse coloring, and user placement.

Cells live on an axial lattice with basis a1 = ISD * (1, 0) and
a2 = ISD * (1/2, sqrt(3)/2); the Voronoi region of each site is a pointy-top
hexagon of circumradius ISD / sqrt(3). Pilot reuse 3 colors the lattice by
(q - r) mod 3, so no two adjacent cells share pilots; the cells with the
origin's color form the contamination set.

Users are placed uniformly over their cell's hexagon by rejection from the
bounding box, redrawing any candidate closer than the minimum link distance
to the serving site (neighbor sites are geometrically out of reach of the
constraint for any inter-site distance above ~4x the minimum). Association
is by highest large-scale gain; the gain sampling elsewhere conditions the
shadowing so that the home site wins, hence serving_cell equals the cell of
the drop by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from ._backend import kernels

_SQRT3 = math.sqrt(3.0)

DOWNLINK = "downlink"
UPLINK = "uplink"


@dataclass(frozen=True)
class CellSite:
    """One base-station site of the lattice."""

    cell_id: int
    axial_q: int
    axial_r: int
    position: tuple
    pilot_group: int


@dataclass(frozen=True)
class UserPosition:
    """One placed user; serving_cell equals cell_of_drop (see module docstring)."""

    cell_of_drop: int
    serving_cell: int
    position: tuple
    direction: str
    user_index: int


def cell_circumradius(inter_site_distance_m: float) -> float:
    """Circumradius (center to vertex) of the hexagonal cell."""
    return inter_site_distance_m / _SQRT3


def hex_lattice(tiers: int, inter_site_distance_m: float) -> list:
    """All sites within `tiers` rings of the origin, origin first.

    Returns 1 + 3 * tiers * (tiers + 1) sites ordered by ring and then by
    axial coordinates, each already carrying its reuse-3 pilot group.
    """
    if tiers < 0:
        raise ValueError("tiers must be nonnegative")
    coords = []
    for q in range(-tiers, tiers + 1):
        for r in range(-tiers, tiers + 1):
            if max(abs(q), abs(r), abs(q + r)) <= tiers:
                coords.append((q, r))
    coords.sort(key=lambda qr: (max(abs(qr[0]), abs(qr[1]), abs(qr[0] + qr[1])),
                                qr[0], qr[1]))
    sites = []
    for cell_id, (q, r) in enumerate(coords):
        x = inter_site_distance_m * (q + 0.5 * r)
        y = inter_site_distance_m * (_SQRT3 / 2.0) * r
        sites.append(CellSite(cell_id=cell_id, axial_q=q, axial_r=r,
                              position=(x, y), pilot_group=(q - r) % 3))
    return sites


def pilot_reuse_coloring(sites: list) -> np.ndarray:
    """Cell ids sharing the origin cell's pilot group, origin excluded."""
    origin_group = sites[0].pilot_group
    return np.array([s.cell_id for s in sites[1:] if s.pilot_group == origin_group],
                    dtype=np.int64)


def site_positions(sites: list) -> np.ndarray:
    """(n_sites, 2) array of site coordinates in meters."""
    return np.array([s.position for s in sites], dtype=np.float64)


def sample_cell_positions(stream: rng.DropStream, purpose: int, site: CellSite,
                          count: int, inter_site_distance_m: float,
                          min_link_distance_m: float) -> np.ndarray:
    """(count, 2) positions uniform over the site's hexagon, in absolute meters."""
    radius = cell_circumradius(inter_site_distance_m)
    if min_link_distance_m >= radius:
        raise ValueError("minimum link distance leaves no cell area")
    return kernels.sample_hex_positions(
        stream.key_lo, stream.key_hi, purpose, site.cell_id, count,
        half_width=_SQRT3 * radius / 2.0,
        circumradius=radius,
        inv_sqrt3=1.0 / _SQRT3,
        min_dist_sq=min_link_distance_m * min_link_distance_m,
        center_x=site.position[0],
        center_y=site.position[1],
    )


def drop_users(cell: CellSite, count: int, direction: str, stream: rng.DropStream,
               inter_site_distance_m: float, min_link_distance_m: float) -> list:
    """Place `count` users of one direction uniformly in the cell."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    if direction not in (DOWNLINK, UPLINK):
        raise ValueError(f"direction must be '{DOWNLINK}' or '{UPLINK}'")
    purpose = (rng.PURPOSE_POSITION_DOWNLINK if direction == DOWNLINK
               else rng.PURPOSE_POSITION_UPLINK)
    points = sample_cell_positions(stream, purpose, cell, count,
                                   inter_site_distance_m, min_link_distance_m)
    return [UserPosition(cell_of_drop=cell.cell_id, serving_cell=cell.cell_id,
                         position=(float(x), float(y)), direction=direction,
                         user_index=i)
            for i, (x, y) in enumerate(points)]
