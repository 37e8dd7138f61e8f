"""Depth-one graded simple Lie algebras over the rationals.

The split form is built on a Chevalley basis: simple coroots ``H1..Hr``,
then root vectors ``E(beta)`` for the positive roots in root order, then
``F(beta) = E(-beta)`` in the mirrored order.  All structure constants are
integers.  Signs are fixed deterministically: for every non-simple
positive root the special pair with the smallest first member (in the root
order) gets a positive constant, and everything else follows from the
Jacobi identity.

Rank computations over Q performed downstream certify the corresponding
complex algebras as well, since ranks of integer matrices do not change
under field extension.

A vector is a sparse dict mapping basis index to ``Fraction``; no zero
entries are stored.  Grades are tagged per basis element at build time,
never recomputed.
"""

from __future__ import annotations

import itertools
from fractions import Fraction as Q

from .multitensor import SpanTracker, invert_rational_matrix
from .rootsystem import (
    Root,
    RootSystem,
    height,
    is_positive,
    root_grade,
    valid_one_gradings,
)

LieVec = dict[int, Q]


class InvalidNode(ValueError):
    """The chosen node does not induce a grading of depth one."""


class GradeError(ValueError):
    """Argument does not have the pure grade the operation requires."""


class SingularPairing(ArithmeticError):
    """Degenerate pairing where a perfect one was required."""


def _axpy(dst: LieVec, src: LieVec, c: Q) -> None:
    """dst += c * src, dropping entries that cancel."""
    if not c:
        return
    for k, v in src.items():
        w = dst.get(k, 0) + c * v
        if w:
            dst[k] = w
        else:
            dst.pop(k, None)


def vec_scale(v: LieVec, c: Q) -> LieVec:
    return {k: c * x for k, x in v.items()} if c else {}


def _neg(root: Root) -> Root:
    return tuple(-c for c in root)


def _add(a: Root, b: Root) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Root, b: Root) -> Root:
    return tuple(x - y for x, y in zip(a, b))


class _ChevalleyConstants:
    """Integer constants N(a, b) with [e_a, e_b] = N(a, b) e_{a+b}.

    Built by induction on height: every non-simple positive root gets its
    minimal special pair assigned N = +(p+1), where p is the length of the
    descending root string, and the remaining constants are solved from
    instances of the Jacobi identity.
    """

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.pos = rs.positive_roots
        self.order = {r: k for k, r in enumerate(self.pos)}
        self.posset = frozenset(self.pos)
        self.rootset = rs.root_set
        self._pp: dict[tuple[Root, Root], int] = {}
        self._memo: dict[tuple[Root, Root], int] = {}
        self._build()

    def _string_down(self, a: Root, b: Root) -> int:
        """Largest p with b - p*a still a root."""
        p = 0
        v = _sub(b, a)
        while v in self.rootset:
            p += 1
            v = _sub(v, a)
        return p

    def _build(self) -> None:
        for gamma in self.pos:
            if height(gamma) == 1:
                continue
            firsts = sorted(
                (
                    a
                    for a in self.posset
                    if _sub(gamma, a) in self.posset
                    and self.order[a] < self.order[_sub(gamma, a)]
                ),
                key=lambda a: self.order[a],
            )
            assert firsts, f"no special pair for {gamma}"
            a0 = firsts[0]
            b0 = _sub(gamma, a0)
            self._pp[(a0, b0)] = self._string_down(a0, b0) + 1
            for a in firsts[1:]:
                b = _sub(gamma, a)
                val = self._solve(a0, b0, a, b, gamma)
                assert abs(val) == self._string_down(a, b) + 1, (gamma, a, b, val)
                self._pp[(a, b)] = val

    def _solve(self, a0: Root, b0: Root, a: Root, b: Root, gamma: Root) -> int:
        # Jacobi identity for (e_{a0}, e_{b0}, e_{-a}), read off on e_b:
        #   N(a0,b0) N(gamma,-a) + N(b0,-a) N(b0-a,a0) + N(-a,a0) N(a0-a,b0) = 0
        t = Q(0)
        if _sub(b0, a) in self.rootset:
            t += self.n(b0, _neg(a)) * self.n(_sub(b0, a), a0)
        if _sub(a0, a) in self.rootset:
            t += self.n(_neg(a), a0) * self.n(_sub(a0, a), b0)
        n_gamma_nega = Q(-t, self._pp[(a0, b0)])
        # N(gamma, -a) = -(b,b)/(gamma,gamma) * N(a, b)
        val = -n_gamma_nega * self.rs.inner(gamma, gamma) / self.rs.inner(b, b)
        assert val.denominator == 1
        return int(val)

    def n(self, a: Root, b: Root) -> int:
        """N(a, b) for arbitrary roots a, b whose sum is again a root."""
        key = (a, b)
        got = self._memo.get(key)
        if got is not None:
            return got
        pa, pb = is_positive(a), is_positive(b)
        if pa and pb:
            v = self._pp.get((a, b))
            if v is None:
                v = -self._pp[(b, a)]
        elif not pa and not pb:
            v = -self.n(_neg(a), _neg(b))
        elif pa:
            eta = _neg(b)
            diff = _sub(a, eta)
            inner = self.rs.inner
            if diff in self.posset:
                # N(a,-eta) = -(d,d)/(a,a) N(eta,d)  with d = a - eta
                q = -inner(diff, diff) / inner(a, a) * self.n(eta, diff)
            else:
                # N(a,-eta) = (d,d)/(eta,eta) N(d,a)  with d = eta - a
                diff = _neg(diff)
                q = inner(diff, diff) / inner(eta, eta) * self.n(diff, a)
            assert q.denominator == 1
            v = int(q)
        else:
            v = -self.n(b, a)
        self._memo[key] = v
        return v


_constants_cache: dict[int, _ChevalleyConstants] = {}


def _constants(rs: RootSystem) -> _ChevalleyConstants:
    got = _constants_cache.get(id(rs))
    if got is None or got.rs is not rs:
        got = _ChevalleyConstants(rs)
        _constants_cache[id(rs)] = got
    return got


class Subspace:
    """Rational subspace kept in reduced row-echelon form over the fixed
    basis order."""

    def __init__(self, ambient: int):
        self.ambient = ambient
        self._tracker = SpanTracker(ambient)

    def insert(self, v: LieVec) -> bool:
        return self._tracker.insert(v)

    @property
    def dimension(self) -> int:
        return self._tracker.dimension

    def contains(self, v: LieVec) -> bool:
        return self._tracker.contains(v)

    def reduce(self, v: LieVec) -> LieVec:
        return self._tracker.reduce(v)

    def rows(self) -> list[LieVec]:
        """Echelon rows with ascending pivots; canonical for the span."""
        return self._tracker.canonical_rows()

    def same_span(self, other: "Subspace") -> bool:
        return self.ambient == other.ambient and self.rows() == other.rows()

    @property
    def pivots(self) -> list[int]:
        return sorted(self._tracker.rows)


class GradedLieAlgebra:
    """Graded algebra g = g(-1) + g(0) + g(+1) with exact integer structure
    constants, produced by :func:`build_algebra`.

    Immutable after construction apart from internal caches; safe to share
    read-only.
    """

    def __init__(self, rs: RootSystem, node: int):
        self.root_system = rs
        self.crossed_node = node
        self.rank = rs.rank
        npos = len(rs.positive_roots)
        self.dim = rs.rank + 2 * npos

        basis: list[tuple] = [("h", i + 1) for i in range(rs.rank)]
        basis += [("e", r) for r in rs.positive_roots]
        basis += [("e", _neg(r)) for r in rs.positive_roots]
        self.basis = tuple(basis)
        self._eindex = {d[1]: i for i, d in enumerate(basis) if d[0] == "e"}

        grade = [0] * rs.rank
        grade += [root_grade(r, node) for r in rs.positive_roots]
        grade += [-root_grade(r, node) for r in rs.positive_roots]
        self.grade = tuple(grade)

        self.g0_indices = tuple(i for i, g in enumerate(grade) if g == 0)
        self.gm1_indices = tuple(i for i, g in enumerate(grade) if g == -1)
        self.g1_indices = tuple(i for i, g in enumerate(grade) if g == 1)
        self._g0_pos = {b: k for k, b in enumerate(self.g0_indices)}
        self._gm1_pos = {b: k for k, b in enumerate(self.gm1_indices)}
        self._g1_pos = {b: k for k, b in enumerate(self.g1_indices)}

        self.table = self._build_table(rs)

        self._gram: dict[tuple[int, int], Q] | None = None
        self._E: LieVec | None = None
        self._dualZ: list[LieVec] | None = None

    # -- construction -------------------------------------------------

    def _coroot_vec(self, beta: Root) -> LieVec:
        rs = self.root_system
        bb = rs.inner(beta, beta)
        out: LieVec = {}
        for j, c in enumerate(beta):
            if c:
                q = c * rs.inner(rs.simple_roots[j], rs.simple_roots[j]) / bb
                assert q.denominator == 1
                out[j] = Q(q)
        return out

    def _build_table(self, rs: RootSystem) -> dict[tuple[int, int], LieVec]:
        NC = _constants(rs)
        table: dict[tuple[int, int], LieVec] = {}
        n = self.dim
        for i in range(n):
            di = self.basis[i]
            for j in range(i + 1, n):
                dj = self.basis[j]
                if di[0] == "h" and dj[0] == "h":
                    continue
                if di[0] == "h":
                    coeff = rs.coroot_pairing(dj[1], di[1] - 1)
                    if coeff:
                        table[(i, j)] = {j: Q(coeff)}
                    continue
                a, b = di[1], dj[1]
                s = _add(a, b)
                if not any(s):
                    # opposite root vectors meet in the coroot
                    pos = a if is_positive(a) else b
                    sign = 1 if is_positive(a) else -1
                    vec = self._coroot_vec(pos)
                    if sign < 0:
                        vec = vec_scale(vec, Q(-1))
                    table[(i, j)] = vec
                elif s in rs.root_set:
                    c = NC.n(a, b)
                    assert c != 0
                    table[(i, j)] = {self._eindex[s]: Q(c)}
        return table

    # -- bracket and grading ------------------------------------------

    def unit(self, i: int) -> LieVec:
        return {i: Q(1)}

    def describe(self, i: int) -> str:
        d = self.basis[i]
        if d[0] == "h":
            return f"H{d[1]}"
        root = d[1]
        if is_positive(root):
            return "E(" + ",".join(map(str, root)) + ")"
        return "F(" + ",".join(str(-c) for c in root) + ")"

    def basis_bracket(self, i: int, j: int) -> LieVec:
        if i == j:
            return {}
        if i < j:
            return dict(self.table.get((i, j), {}))
        return vec_scale(self.table.get((j, i), {}), Q(-1))

    def bracket(self, u: LieVec, v: LieVec) -> LieVec:
        out: LieVec = {}
        for i, ci in u.items():
            for j, cj in v.items():
                if i == j:
                    continue
                if i < j:
                    base = self.table.get((i, j))
                    c = ci * cj
                else:
                    base = self.table.get((j, i))
                    c = -ci * cj
                if base:
                    _axpy(out, base, c)
        return out

    def pure_grade(self, v: LieVec) -> int | None:
        grades = {self.grade[i] for i in v}
        return grades.pop() if len(grades) == 1 else None

    def act(self, A: LieVec, v: LieVec) -> LieVec:
        """Adjoint action of a grade-zero element; preserves the grade of v."""
        if A and self.pure_grade(A) != 0:
            raise GradeError("acting element must have pure grade 0")
        return self.bracket(A, v)

    # -- Killing form --------------------------------------------------

    def _ad_columns(self) -> list[dict[int, LieVec]]:
        ads: list[dict[int, LieVec]] = []
        for i in range(self.dim):
            col: dict[int, LieVec] = {}
            for j in range(self.dim):
                b = self.basis_bracket(i, j)
                if b:
                    col[j] = b
            ads.append(col)
        return ads

    def killing_gram(self) -> dict[tuple[int, int], Q]:
        """Gram matrix of trace(ad x ad y) on basis pairs (i <= j)."""
        if self._gram is None:
            ads = self._ad_columns()
            gram: dict[tuple[int, int], Q] = {}
            for i in range(self.dim):
                adi = ads[i]
                for j in range(i, self.dim):
                    adj = ads[j]
                    total = Q(0)
                    for m, vec in adj.items():
                        for k, c in vec.items():
                            back = adi.get(k)
                            if back:
                                w = back.get(m)
                                if w:
                                    total += c * w
                    if total:
                        gram[(i, j)] = total
            self._gram = gram
        return self._gram

    def killing(self, u: LieVec, v: LieVec) -> Q:
        gram = self.killing_gram()
        total = Q(0)
        for i, ci in u.items():
            for j, cj in v.items():
                g = gram.get((i, j) if i <= j else (j, i))
                if g:
                    total += ci * cj * g
        return total

    # -- distinguished elements and subspaces --------------------------

    def grading_element(self) -> LieVec:
        """Cartan element acting on each grade component as its grade."""
        if self._E is None:
            r, cm = self.rank, self.root_system.cartan_matrix
            rows = [[Q(cm[j][i]) for j in range(r)] for i in range(r)]
            rhs = [Q(1) if i == self.crossed_node - 1 else Q(0) for i in range(r)]
            inv = invert_rational_matrix(rows)
            self._E = {
                j: c
                for j in range(r)
                if (c := sum(inv[j][i] * rhs[i] for i in range(r)))
            }
        return dict(self._E)

    def semisimple_part(self) -> Subspace:
        """Span of all brackets of grade-zero basis pairs."""
        out = Subspace(self.dim)
        for i, j in itertools.combinations(self.g0_indices, 2):
            out.insert(self.basis_bracket(i, j))
        return out

    def simple_ideals(self) -> list[Subspace]:
        """Ideal decomposition of the semisimple part, one subspace per
        connected component of the diagram with the crossed node removed."""
        rs, crossed = self.root_system, self.crossed_node - 1
        nodes = [i for i in range(self.rank) if i != crossed]
        adj = {
            i: [
                j
                for j in nodes
                if j != i and rs.cartan_matrix[i][j] != 0
            ]
            for i in nodes
        }
        seen: set[int] = set()
        components: list[list[int]] = []
        for start in nodes:
            if start in seen:
                continue
            comp, stack = [], [start]
            seen.add(start)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            components.append(sorted(comp))

        ideals = []
        for comp in components:
            compset = set(comp)
            sub = Subspace(self.dim)
            for i in comp:
                sub.insert(self.unit(i))
            for r in rs.positive_roots:
                if all(c == 0 or k in compset for k, c in enumerate(r)):
                    sub.insert(self.unit(self._eindex[r]))
                    sub.insert(self.unit(self._eindex[_neg(r)]))
            ideals.append(sub)
        return ideals

    def gm1_basis(self) -> list[LieVec]:
        """X-basis of the grade -1 component: F(gamma) in root order."""
        return [self.unit(i) for i in self.gm1_indices]

    def dual_basis_g1(self, basisX: list[LieVec] | None = None) -> list[LieVec]:
        """Z-basis of g(+1) dual to basisX under the Killing form."""
        n = len(self.gm1_indices)
        if basisX is None:
            if self._dualZ is None:
                gram = self.killing_gram()
                out = []
                for ei, fi in zip(self.g1_indices, self.gm1_indices):
                    key = (ei, fi) if ei <= fi else (fi, ei)
                    pairing = gram.get(key, Q(0))
                    if not pairing:
                        raise SingularPairing("opposite root vectors pair to zero")
                    out.append({ei: 1 / pairing})
                self._dualZ = out
            return [dict(z) for z in self._dualZ]
        if len(basisX) != n:
            raise SingularPairing("basisX must have the dimension of g(-1)")
        m = [
            [self.killing(self.unit(ei), x) for x in basisX]
            for ei in self.g1_indices
        ]
        try:
            cinv = invert_rational_matrix(m)
        except ArithmeticError as exc:
            raise SingularPairing("basisX does not span g(-1)") from exc
        out = []
        for i in range(n):
            z: LieVec = {}
            for a, ea in enumerate(self.g1_indices):
                if cinv[i][a]:
                    z[ea] = cinv[i][a]
            out.append(z)
        return out

    # -- coordinates ----------------------------------------------------

    def g0_coords(self, v: LieVec) -> dict[int, Q]:
        out = {}
        for i, c in v.items():
            pos = self._g0_pos.get(i)
            if pos is None:
                raise GradeError("vector has support outside grade 0")
            out[pos] = c
        return out

    def gm1_coords(self, v: LieVec) -> dict[int, Q]:
        out = {}
        for i, c in v.items():
            pos = self._gm1_pos.get(i)
            if pos is None:
                raise GradeError("vector has support outside grade -1")
            out[pos] = c
        return out

    def name(self) -> str:
        return f"{self.root_system} node {self.crossed_node}"

    @property
    def dim_gm1(self) -> int:
        return len(self.gm1_indices)

    @property
    def dim_g0(self) -> int:
        return len(self.g0_indices)


def build_algebra(rs: RootSystem, node: int) -> GradedLieAlgebra:
    """Construct the graded algebra for a crossed node of the diagram.

    Raises InvalidNode when the node carries a highest-root coefficient
    other than one (in particular for every node of E8, F4 and G2).
    """
    if node not in valid_one_gradings(rs):
        raise InvalidNode(
            f"node {node} of {rs} has highest-root coefficient "
            f"{rs.highest_root[node - 1] if 1 <= node <= rs.rank else '?'}; "
            "a depth-one grading needs coefficient 1"
        )
    return GradedLieAlgebra(rs, node)


_algebra_cache: dict[tuple[str, int, int], GradedLieAlgebra] = {}


def algebra(series: str, rank: int, node: int) -> GradedLieAlgebra:
    """Cached convenience factory used by the CLI and the test suites."""
    key = (series, rank, node)
    if key not in _algebra_cache:
        from .rootsystem import build_root_system

        _algebra_cache[key] = build_algebra(build_root_system(series, rank), node)
    return _algebra_cache[key]
