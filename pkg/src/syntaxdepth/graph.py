"""Spatial graphs of convex spaces / axial lines and their depth measures."""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

DEFAULT_ROOT = "outside"

# Band thresholds for site scoring; see `site_score`.
END_OF_SETTLEMENT_BELOW = 0.5
CENTRAL_ABOVE = 1.5

_SPACE_ID = re.compile(r"[A-Za-z0-9_]+\Z")


class GraphError(ValueError):
    """Base class for graph construction and measurement failures."""


class EmptyGraph(GraphError):
    pass


class RootMissing(GraphError):
    pass


class UnknownSpace(GraphError):
    pass


class DegenerateGraph(GraphError):
    pass


class Disconnected(GraphError):
    def __init__(self, origin: str, unreachable: Iterable[str]):
        self.origin = origin
        self.unreachable = tuple(sorted(unreachable))
        super().__init__(
            f"spaces unreachable from {origin!r}: {', '.join(self.unreachable)}"
        )


def check_space_id(name: str) -> str:
    if not isinstance(name, str) or not _SPACE_ID.match(name):
        raise ValueError(f"invalid space id {name!r}: use letters, digits, underscore")
    return name


@dataclass(frozen=True)
class SpatialGraph:
    """Undirected, unweighted graph with a designated root space.

    Build instances with :func:`build_graph`; the constructor does not normalize.
    """

    spaces: frozenset[str]
    edges: frozenset[frozenset[str]]
    root: str = DEFAULT_ROOT
    self_loops_dropped: int = 0
    duplicates_dropped: int = 0
    _adjacency: Mapping[str, tuple[str, ...]] = field(
        default=None, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        adj: dict[str, list[str]] = {s: [] for s in self.spaces}
        for edge in self.edges:
            u, v = sorted(edge)
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(
            self, "_adjacency", {s: tuple(sorted(n)) for s, n in adj.items()}
        )

    def neighbours(self, space: str) -> tuple[str, ...]:
        try:
            return self._adjacency[space]
        except KeyError:
            raise UnknownSpace(f"unknown space {space!r}") from None

    def __contains__(self, space: object) -> bool:
        return space in self.spaces

    def __len__(self) -> int:
        return len(self.spaces)

    def sorted_edges(self) -> list[tuple[str, str]]:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def with_edge(self, u: str, v: str) -> SpatialGraph:
        return build_graph([*self.sorted_edges(), (u, v)], self.root)


def build_graph(edges: Iterable[tuple[str, str]], root: str = DEFAULT_ROOT) -> SpatialGraph:
    """Normalize an edge list into a :class:`SpatialGraph`.

    Self-loops and repeated edges (in either orientation) are dropped and counted.
    Connectivity is not checked here; aggregate measures check it on demand.
    """
    seen: set[frozenset[str]] = set()
    loops = dupes = 0
    for u, v in edges:
        check_space_id(u)
        check_space_id(v)
        if u == v:
            loops += 1
            continue
        pair = frozenset((u, v))
        if pair in seen:
            dupes += 1
            continue
        seen.add(pair)
    if not seen:
        raise EmptyGraph("no edges left after dropping self-loops")
    spaces = frozenset(s for pair in seen for s in pair)
    if root not in spaces:
        raise RootMissing(f"root {root!r} does not appear in any edge")
    return SpatialGraph(frozenset(spaces), frozenset(seen), root, loops, dupes)


@dataclass(frozen=True)
class DepthProfile:
    origin: str
    depths: dict[str, int]

    def __getitem__(self, space: str) -> int:
        return self.depths[space]

    @property
    def max_depth(self) -> int:
        return max(self.depths.values())


def depth(g: SpatialGraph, origin: str) -> DepthProfile:
    """Breadth-first step counts from `origin`; unreachable spaces are left out."""
    if origin not in g:
        raise UnknownSpace(f"unknown space {origin!r}")
    depths = {origin: 0}
    queue = deque([origin])
    while queue:
        node = queue.popleft()
        step = depths[node] + 1
        for nb in g.neighbours(node):
            if nb not in depths:
                depths[nb] = step
                queue.append(nb)
    return DepthProfile(origin, depths)


def _connected_profile(g: SpatialGraph, origin: str) -> DepthProfile:
    profile = depth(g, origin)
    if len(profile.depths) != len(g):
        raise Disconnected(origin, g.spaces - profile.depths.keys())
    return profile


def total_depth(g: SpatialGraph, origin: str) -> int:
    return sum(_connected_profile(g, origin).depths.values())


def mean_depth(g: SpatialGraph, origin: str) -> float:
    """Total depth divided by the number of other spaces."""
    if len(g) < 2:
        raise DegenerateGraph("mean depth needs at least two spaces")
    return total_depth(g, origin) / (len(g) - 1)


@dataclass(frozen=True)
class SpaceRow:
    space: str
    depth_from_outside: int
    d_value: float


@dataclass(frozen=True)
class SyntaxReport:
    root: str
    rows: tuple[SpaceRow, ...]
    md_o: float
    max_depth: int
    space_count_excluding_root: int
    total_depth_from_root: int

    def row(self, space: str) -> SpaceRow:
        for r in self.rows:
            if r.space == space:
                return r
        raise UnknownSpace(f"no d-value row for {space!r}")


def syntax_report(g: SpatialGraph) -> SyntaxReport:
    """Depth from the root, mean depth from the root and d-value per space.

    The root itself gets no row and is left out of the mean's denominator.
    Rows are ordered by depth, then name.
    """
    profile = _connected_profile(g, g.root)
    interior = {s: d for s, d in profile.depths.items() if s != g.root}
    if not interior:
        raise DegenerateGraph("root is the only space")
    md_o = sum(interior.values()) / len(interior)
    rows = tuple(
        SpaceRow(s, d, d / md_o)
        for s, d in sorted(interior.items(), key=lambda kv: (kv[1], kv[0]))
    )
    return SyntaxReport(
        g.root, rows, md_o, profile.max_depth, len(interior), sum(interior.values())
    )


def band(d_value: float,
         low: float = END_OF_SETTLEMENT_BELOW,
         high: float = CENTRAL_ABOVE) -> str:
    if d_value < low:
        return "end-of-settlement"
    if d_value > high:
        return "central"
    return "intermediate"


@dataclass(frozen=True)
class SiteScore:
    space: str
    score: float
    d_value: float
    band: str


def site_score(report: SyntaxReport,
               low: float = END_OF_SETTLEMENT_BELOW,
               high: float = CENTRAL_ABOVE) -> list[SiteScore]:
    """Rank spaces by how close their d-value is to 1, best first.

    Ties go to the alphabetically first name. Scores are computed as the exact
    rational |D*n - TD| / TD first, so float rounding cannot split a true tie.
    """
    n, td = report.space_count_excluding_root, report.total_depth_from_root
    exact = {
        r.space: Fraction(abs(r.depth_from_outside * n - td), td) for r in report.rows
    }
    ranked = sorted(report.rows, key=lambda r: (exact[r.space], r.space))
    return [
        SiteScore(r.space, float(exact[r.space]), r.d_value, band(r.d_value, low, high))
        for r in ranked
    ]
