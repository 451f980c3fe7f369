"""Deterministic SVG renderings of tetrahedral summaries.

One figure per view: each institution is a disk placed at its projected
center in the face opposite the year vertex. Disk radius grows with the
spread bin of the six detector runs (radius, not diameter, is
proportional to ``size_bin + 1``); fill lightness decreases with the
center's distance from the year vertex, so year-dominated institutions
read as small light disks near the year marker. The markup is plain
string assembly with fixed number formatting, so identical inputs give
identical bytes.
"""

from __future__ import annotations

from math import sqrt

import numpy as np

from .tetrahedron import TETRA_VERTICES, project_year_view

__all__ = ["render_tetra_figure"]

_BASE_RADIUS = 6.0
_MAX_YEAR_DISTANCE = sqrt(3.0)  # edge length: farthest any point can be


def _fmt(x):
    return "%.4f" % float(x)


def _disk_color(year_distance):
    t = min(max(year_distance / _MAX_YEAR_DISTANCE, 0.0), 1.0)
    v = int(round(235.0 - 185.0 * t))
    return "rgb(%d,%d,%d)" % (v, v, v)


class _Panel:
    """Maps face coordinates to one SVG viewport."""

    def __init__(self, cx, cy, scale):
        self.cx, self.cy, self.scale = cx, cy, scale

    def pt(self, uv):
        return (self.cx + self.scale * uv[0], self.cy - self.scale * uv[1])


def _face_outline():
    corners = [TETRA_VERTICES[a] for a in ("major", "residence", "high_school")]
    return [project_year_view(c) for c in corners]


def _panel_markup(panel, rows, labels=True):
    parts = []
    outline = _face_outline()
    pts = " ".join("%s,%s" % (_fmt(x), _fmt(y))
                   for x, y in (panel.pt(uv) for uv in outline))
    parts.append('<polygon points="%s" fill="none" stroke="#999" '
                 'stroke-width="1"/>' % pts)
    yx, yy = panel.pt((0.0, 0.0))
    parts.append('<path d="M %s %s l -5 0 l 10 0 M %s %s l 0 -5 l 0 10" '
                 'stroke="#666" stroke-width="1" fill="none"/>'
                 % (_fmt(yx), _fmt(yy), _fmt(yx), _fmt(yy)))
    if labels:
        names = (("major", 0, -8), ("residence", 0, -8), ("high_school", 0, -8))
        for (name, dx, dy), uv in zip(names, outline):
            x, y = panel.pt(uv)
            parts.append('<text x="%s" y="%s" font-size="11" '
                         'text-anchor="middle" fill="#444">%s</text>'
                         % (_fmt(x + dx), _fmt(y + dy), name))
        parts.append('<text x="%s" y="%s" font-size="11" '
                     'text-anchor="middle" fill="#444">year</text>'
                     % (_fmt(yx), _fmt(yy + 16)))

    # larger disks first so small ones stay visible
    for name, u, v, size_bin, year_distance in sorted(
            rows, key=lambda r: (-int(r[3]), r[0])):
        x, y = panel.pt((u, v))
        radius = _BASE_RADIUS * (int(size_bin) + 1)
        parts.append(
            '<circle cx="%s" cy="%s" r="%s" fill="%s" stroke="#333" '
            'stroke-width="0.8" fill-opacity="0.85"><title>%s</title></circle>'
            % (_fmt(x), _fmt(y), _fmt(radius), _disk_color(year_distance),
               name))
    return parts


def render_tetra_figure(rows, view_kind, zoom=False):
    """SVG figure for one view across institutions.

    Parameters
    ----------
    rows : sequence of (institution, u, v, size_bin, year_distance)
        Projected center coordinates and summary per institution.
    view_kind : str
    zoom : bool, default False
        Add a second panel magnifying the area around the year marker.

    Returns
    -------
    str
        Complete SVG markup; byte-identical for identical inputs.
    """
    width = 1120 if zoom else 560
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="560" '
        'viewBox="0 0 %d 560">' % (width, width),
        '<desc>%s view. Disk radius is 6*(size_bin+1) px where size_bin = '
        'floor(max pairwise run distance / 0.1); radius (not diameter) '
        'encodes the bin. Fill lightness decreases with the distance from '
        'the year vertex.</desc>' % view_kind,
        '<rect x="0" y="0" width="%d" height="560" fill="white"/>' % width,
        '<text x="280" y="24" font-size="14" text-anchor="middle" '
        'fill="#222">%s view</text>' % view_kind,
    ]
    parts.extend(_panel_markup(_Panel(280.0, 310.0, 220.0), rows))
    if zoom:
        parts.append('<text x="840" y="24" font-size="14" '
                     'text-anchor="middle" fill="#222">%s view, year '
                     'neighborhood (4x)</text>' % view_kind)
        parts.append('<clipPath id="zoompane"><rect x="570" y="40" '
                     'width="540" height="510"/></clipPath>')
        parts.append('<g clip-path="url(#zoompane)">')
        parts.extend(_panel_markup(_Panel(840.0, 310.0, 880.0), rows,
                                   labels=False))
        parts.append('</g>')
        parts.append('<rect x="570" y="40" width="540" height="510" '
                     'fill="none" stroke="#bbb" stroke-width="1"/>')
    parts.append('</svg>')
    return "\n".join(parts) + "\n"
