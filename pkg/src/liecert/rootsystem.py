"""Root systems of the finite simple series, generated by reflection closure.

Roots live in the simple-root basis as integer coordinate tuples, so all
arithmetic is exact.  The series A, B, C, D, E6 and E7 admit a simple-root
node whose coefficient grades the algebra in degrees -1, 0, +1; E8, F4 and
G2 are constructible here as well, but only so the absence of such a node
can be checked rather than asserted.

Conventions:

* ``cartan[i][j]`` pairs the j-th simple root against the coroot of the
  i-th, so the i-th simple reflection is
  ``v -> v - (sum_j v[j] * cartan[i][j]) * alpha_i``.
* Node arguments in the public API are 1-based (Bourbaki numbering);
  coordinate tuples are indexed 0-based.
* Roots are totally ordered by height, then by coordinates with earlier
  nodes weighted first.  The simple roots are therefore the first ``rank``
  entries of ``roots``, in node order, followed by the remaining positive
  roots and then the negatives in the mirrored order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q

Root = tuple[int, ...]


class InvalidRank(ValueError):
    """Rank outside the window where the series is defined and non-redundant."""


class InvalidSeries(ValueError):
    """Unknown series name."""


_RANK_MIN = {"A": 2, "B": 2, "C": 3, "D": 4}
_RANK_FIXED = {"E6": 6, "E7": 7, "E8": 8, "F4": 4, "G2": 2}

#: series with a node of highest-root coefficient one
GRADEABLE = ("A", "B", "C", "D", "E6", "E7")
#: series kept only for the completeness check (no such node exists)
UNGRADEABLE = ("E8", "F4", "G2")


@dataclass(frozen=True)
class SeriesLabel:
    series: str
    rank: int

    def __post_init__(self) -> None:
        if self.series in _RANK_MIN:
            if self.rank < _RANK_MIN[self.series]:
                raise InvalidRank(
                    f"{self.series}-series needs rank >= {_RANK_MIN[self.series]}, "
                    f"got {self.rank}"
                )
        elif self.series in _RANK_FIXED:
            if self.rank != _RANK_FIXED[self.series]:
                raise InvalidRank(
                    f"{self.series} has rank {_RANK_FIXED[self.series]}, got {self.rank}"
                )
        else:
            raise InvalidSeries(f"unknown series {self.series!r}")

    def __str__(self) -> str:
        return f"{self.series}{self.rank}" if self.series in _RANK_MIN else self.series


def height(root: Root) -> int:
    return sum(root)


def is_positive(root: Root) -> bool:
    return height(root) > 0


def _sort_key(root: Root):
    # Height first; ties broken so that larger coefficients on earlier
    # nodes come first (this puts alpha_1, alpha_2, ... in node order).
    return (height(root), tuple(-c for c in root))


def _path_matrix(rank: int) -> list[list[int]]:
    m = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for i in range(rank - 1):
        m[i][i + 1] = m[i + 1][i] = -1
    return m


def cartan_matrix(label: SeriesLabel) -> tuple[tuple[int, ...], ...]:
    s, r = label.series, label.rank
    if s == "A":
        m = _path_matrix(r)
    elif s == "B":
        # last node short: its row carries the -2
        m = _path_matrix(r)
        m[r - 1][r - 2] = -2
    elif s == "C":
        # last node long
        m = _path_matrix(r)
        m[r - 2][r - 1] = -2
    elif s == "D":
        m = [[2 if i == j else 0 for j in range(r)] for i in range(r)]
        edges = [(i, i + 1) for i in range(r - 3)] + [(r - 3, r - 2), (r - 3, r - 1)]
        for i, j in edges:
            m[i][j] = m[j][i] = -1
    elif s in ("E6", "E7", "E8"):
        m = [[2 if i == j else 0 for j in range(r)] for i in range(r)]
        edges = [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)]
        if r >= 7:
            edges.append((6, 7))
        if r == 8:
            edges.append((7, 8))
        for i, j in edges:
            m[i - 1][j - 1] = m[j - 1][i - 1] = -1
    elif s == "F4":
        m = _path_matrix(4)
        m[2][1] = -2  # third node short
    elif s == "G2":
        m = [[2, -3], [-1, 2]]
    else:  # pragma: no cover - guarded by SeriesLabel
        raise InvalidSeries(s)
    return tuple(tuple(row) for row in m)


def _symmetrizer(cartan) -> tuple[Q, ...]:
    """Half square lengths d_i with d_i * cartan[i][j] == d_j * cartan[j][i]."""
    rank = len(cartan)
    d: list[Q | None] = [None] * rank
    d[0] = Q(1)
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for j in range(rank):
            if j != i and cartan[i][j] != 0 and d[j] is None:
                d[j] = d[i] * cartan[i][j] / cartan[j][i]
                frontier.append(j)
    assert all(x is not None for x in d), "Dynkin diagram must be connected"
    for i in range(rank):
        for j in range(rank):
            assert d[i] * cartan[i][j] == d[j] * cartan[j][i]
    return tuple(d)  # type: ignore[arg-type]


@dataclass(frozen=True, eq=False)
class RootSystem:
    """Immutable root datum; safe to share read-only."""

    label: SeriesLabel
    cartan_matrix: tuple[tuple[int, ...], ...]
    roots: tuple[Root, ...]
    positive_roots: tuple[Root, ...]
    simple_roots: tuple[Root, ...]
    highest_root: Root
    symmetrizer: tuple[Q, ...]

    @property
    def rank(self) -> int:
        return self.label.rank

    @property
    def series(self) -> str:
        return self.label.series

    @property
    def root_set(self) -> frozenset[Root]:
        return frozenset(self.roots)

    def is_root(self, v: Root) -> bool:
        return v in self.root_set

    def coroot_pairing(self, v: Root, i: int) -> int:
        """Pairing of v against the coroot of the i-th simple root (0-based)."""
        row = self.cartan_matrix[i]
        return sum(v[j] * row[j] for j in range(self.rank) if v[j])

    def reflect(self, v: Root, i: int) -> Root:
        p = self.coroot_pairing(v, i)
        w = list(v)
        w[i] -= p
        return tuple(w)

    def inner(self, a: Root, b: Root) -> Q:
        """Invariant inner product, normalized so the first node has d = 1."""
        d, cm = self.symmetrizer, self.cartan_matrix
        total = Q(0)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj and cm[i][j]:
                        total += ai * bj * d[i] * cm[i][j]
        return total

    def __str__(self) -> str:
        return str(self.label)


def build_root_system(series: str | SeriesLabel, rank: int | None = None) -> RootSystem:
    """Generate the full root set by closing the simple roots under the
    simple reflections."""
    if isinstance(series, SeriesLabel):
        label = series
    else:
        label = SeriesLabel(series, _RANK_FIXED.get(series, rank if rank is not None else -1))
        if rank is not None and label.rank != rank:
            raise InvalidRank(f"{series} has fixed rank {label.rank}, got {rank}")
    cartan = cartan_matrix(label)
    r = label.rank

    simple = [tuple(1 if k == i else 0 for k in range(r)) for i in range(r)]
    seen: set[Root] = set(simple)
    frontier: list[Root] = list(simple)
    while frontier:
        fresh: list[Root] = []
        for v in frontier:
            for i in range(r):
                p = sum(v[j] * cartan[i][j] for j in range(r) if v[j])
                if p == 0:
                    continue
                w = list(v)
                w[i] -= p
                t = tuple(w)
                if t not in seen:
                    seen.add(t)
                    fresh.append(t)
        frontier = fresh

    positives = sorted((v for v in seen if height(v) > 0), key=_sort_key)
    roots = tuple(positives) + tuple(tuple(-c for c in v) for v in positives)
    highest = positives[-1]
    assert sum(1 for v in positives if height(v) == height(highest)) == 1

    return RootSystem(
        label=label,
        cartan_matrix=cartan,
        roots=roots,
        positive_roots=tuple(positives),
        simple_roots=tuple(positives[:r]),
        highest_root=highest,
        symmetrizer=_symmetrizer(cartan),
    )


def root_grade(root: Root, node: int) -> int:
    """Coefficient of the crossed simple root (1-based node) in ``root``."""
    return root[node - 1]


def valid_one_gradings(rs: RootSystem) -> tuple[int, ...]:
    """Nodes (1-based) whose crossing grades every root in {-1, 0, +1}.

    Equivalent to the highest root carrying coefficient one at the node.
    """
    return tuple(i + 1 for i, c in enumerate(rs.highest_root) if c == 1)


def grade_component_size(rs: RootSystem, node: int) -> int:
    """Number of roots of grade +1, i.e. the dimension of each extreme
    grade component."""
    return sum(1 for v in rs.positive_roots if root_grade(v, node) == 1)
