"""
Drawings of folded chains: character grid and SVG
"""
import logging
from typing import Dict, List, Tuple

from .core import Chain, FoldingLike, as_folding, contacts, embed

logger = logging.getLogger(__name__)

# ASCII glyphs
CHAIN_H = '-'
CHAIN_V = '|'
BOND_H = '='
BOND_V = ':'

# SVG styling
SVG_SCALE = 40
SVG_MARGIN = 24
SVG_NODE_RADIUS = 9
SVG_STYLE = {
    'H': {'fill': '#222222', 'stroke': '#222222'},
    'P': {'fill': '#ffffff', 'stroke': '#222222'},
    'chain': {'stroke': '#555555', 'stroke-width': '3'},
    'bond': {'stroke': '#d62728', 'stroke-width': '2', 'stroke-dasharray': '4,3'},
}

FORMATS = ('ascii', 'svg')


def _segments(chain: Chain, points) -> List[Tuple[int, int]]:
    edges = [(i, i + 1) for i in range(len(points) - 1)]
    if chain.closed:
        edges.append((len(points) - 1, 0))
    return edges


def render_ascii(chain: Chain, folding: FoldingLike) -> str:
    """
    Character grid with y pointing up

    Nodes sit on even rows and columns; chain edges are '-' and '|',
    H-H contacts are '=' and ':'.
    """
    embedding = embed(chain, folding)
    points = embedding.points
    min_x, min_y, max_x, max_y = embedding.bounding_box()
    width = 2 * (max_x - min_x) + 1
    height = 2 * (max_y - min_y) + 1
    grid = [[' '] * width for _ in range(height)]

    def cell(p) -> Tuple[int, int]:
        return 2 * (max_y - p[1]), 2 * (p[0] - min_x)

    def draw(i: int, j: int, horizontal: str, vertical: str) -> None:
        (r1, c1), (r2, c2) = cell(points[i]), cell(points[j])
        grid[(r1 + r2) // 2][(c1 + c2) // 2] = horizontal if r1 == r2 else vertical

    for i, j in _segments(chain, points):
        draw(i, j, CHAIN_H, CHAIN_V)
    for i, j in contacts(chain, folding).contacts:
        draw(i, j, BOND_H, BOND_V)
    for i, p in enumerate(points):
        r, c = cell(p)
        grid[r][c] = chain.labels[i]
    return '\n'.join(''.join(row).rstrip() for row in grid)


def _attrs(style: Dict[str, str]) -> str:
    return ' '.join(f'{k}="{v}"' for k, v in style.items())


def render_svg(chain: Chain, folding: FoldingLike) -> str:
    """Standalone SVG document; node circles, chain lines and dashed bond lines"""
    steps = as_folding(folding).steps
    embedding = embed(chain, steps)
    points = embedding.points
    min_x, min_y, max_x, max_y = embedding.bounding_box()
    width = (max_x - min_x) * SVG_SCALE + 2 * SVG_MARGIN
    height = (max_y - min_y) * SVG_SCALE + 2 * SVG_MARGIN

    def xy(i: int) -> Tuple[int, int]:
        x, y = points[i]
        return (x - min_x) * SVG_SCALE + SVG_MARGIN, (max_y - y) * SVG_SCALE + SVG_MARGIN

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'  <title>{chain.labels} ({chain.topology.value}) {steps}</title>',
        '  <g id="chain">',
    ]
    for i, j in _segments(chain, points):
        (x1, y1), (x2, y2) = xy(i), xy(j)
        out.append(f'    <line class="chain" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" {_attrs(SVG_STYLE["chain"])}/>')
    out.append('  </g>')
    out.append('  <g id="bonds">')
    for i, j in sorted(contacts(chain, steps).contacts):
        (x1, y1), (x2, y2) = xy(i), xy(j)
        out.append(f'    <line class="bond" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" {_attrs(SVG_STYLE["bond"])}/>')
    out.append('  </g>')
    out.append('  <g id="nodes">')
    for i in range(len(points)):
        x, y = xy(i)
        label = chain.labels[i]
        out.append(
            f'    <circle class="node {label}" data-index="{i}" cx="{x}" cy="{y}" r="{SVG_NODE_RADIUS}" '
            f'{_attrs(SVG_STYLE[label])}/>'
        )
    out.append('  </g>')
    out.append('</svg>')
    return '\n'.join(out) + '\n'


def render(chain: Chain, folding: FoldingLike, format: str = 'ascii') -> str:
    """
    Draw a folded chain

    Args:
        chain: HP chain
        folding: Folding or direction string
        format: 'ascii' or 'svg'

    Returns:
        The drawing as text

    Raises:
        InvalidFoldingError: Propagated from embed()
        ValueError: On an unknown format
    """
    if format == 'ascii':
        return render_ascii(chain, folding)
    if format == 'svg':
        return render_svg(chain, folding)
    raise ValueError(f"Unknown render format: {format!r} (expected one of {', '.join(FORMATS)})")
