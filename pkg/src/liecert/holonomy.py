"""Certification engine for the grade-zero curvature spans.

The central object is the operator sending a linear map P from the
grade -1 component to the grade +1 component, together with two grade -1
arguments, to the grade-zero value

    del(P, X, Y) = [P(X), Y] - [P(Y), X].

Feeding deterministic generator families through this operator and
tracking the span of the values yields machine certificates that the
image is all of g0 (arbitrary P) respectively all of the semisimple part
g0ss (P with symmetric Killing pairing).  A second family of certificates
establishes the surjectivity of two explicit symmetric tensors, and the
composite certificate chains the two: contractions of the tensor supply
the P fed to the del operator, mirroring four covariant derivatives of
the curvature of a polynomially deformed flat connection.

Everything is exact; a certificate's achieved dimension is a rank of an
integer-derived matrix over Q, not an estimate.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction as Q

from .gradedlie import GradedLieAlgebra, GradeError, LieVec, Subspace, _axpy, vec_scale
from .multitensor import (
    MultiIndex,
    SpanTracker,
    SymTensor,
    contract,
    dual_monomial,
    sym_basis,
    vector_monomial,
)


class NoAdjacentRoot(RuntimeError):
    """No simple root of the ideal borders the crossed node; impossible for
    a connected diagram, so raising this signals a bug."""


@dataclass
class RhoCandidate:
    """Linear map from g(-1) to g(+1) in the fixed dual bases.

    ``matrix[i][j]`` is the Z_i coefficient of the image of X_j.  The
    symmetric flag asserts that the associated bilinear pairing
    killing(P(X), Y) is symmetric, which for dual bases is the symmetry of
    the matrix itself.
    """

    matrix: tuple[tuple[Q, ...], ...]
    symmetric: bool
    label: str = ""

    def __post_init__(self) -> None:
        n = len(self.matrix)
        assert all(len(row) == n for row in self.matrix)
        if self.symmetric:
            assert all(
                self.matrix[i][j] == self.matrix[j][i]
                for i in range(n)
                for j in range(i + 1, n)
            )

    @property
    def dim(self) -> int:
        return len(self.matrix)


def rho_zero(n: int) -> RhoCandidate:
    z = tuple(tuple(Q(0) for _ in range(n)) for _ in range(n))
    return RhoCandidate(z, symmetric=True, label="0")


def rho_from_entries(n: int, entries: dict[tuple[int, int], Q], symmetric: bool,
                     label: str = "") -> RhoCandidate:
    m = [[Q(0)] * n for _ in range(n)]
    for (i, j), c in entries.items():
        m[i][j] = c
    return RhoCandidate(tuple(tuple(row) for row in m), symmetric, label)


def sym_pair_rho(n: int, i: int, j: int) -> RhoCandidate:
    """Symmetrized product Z_i Z_j as a map: X -> (Z_i <Z_j, X> + Z_j <Z_i, X>)/2."""
    entries = {(i, j): Q(1, 2), (j, i): Q(1, 2)} if i != j else {(i, i): Q(1)}
    return RhoCandidate(
        tuple(
            tuple(entries.get((a, b), Q(0)) for b in range(n)) for a in range(n)
        ),
        symmetric=True,
        label=f"Z{i + 1}*Z{j + 1}",
    )


def pair_rho(n: int, i: int, j: int) -> RhoCandidate:
    """Decomposable tensor Z_i (x) Z_j as a map: X -> Z_i <Z_j, X>."""
    return rho_from_entries(n, {(i, j): Q(1)}, symmetric=False, label=f"Z{i + 1}(x)Z{j + 1}")


def apply_rho(alg: GradedLieAlgebra, P: RhoCandidate, X: LieVec) -> LieVec:
    """Image of a grade -1 vector under P, as an algebra vector."""
    x = alg.gm1_coords(X)
    Z = alg.dual_basis_g1()
    out: LieVec = {}
    for j, c in x.items():
        col = P.matrix
        for i in range(P.dim):
            if col[i][j]:
                _axpy(out, Z[i], col[i][j] * c)
    return out


def del_op(alg: GradedLieAlgebra, P: RhoCandidate, X: LieVec, Y: LieVec) -> LieVec:
    """[P(X), Y] - [P(Y), X]; antisymmetric in (X, Y), grade 0 valued."""
    for v in (X, Y):
        if v and alg.pure_grade(v) != -1:
            raise GradeError("del operator arguments must have pure grade -1")
    out = alg.bracket(apply_rho(alg, P, X), Y)
    _axpy(out, alg.bracket(apply_rho(alg, P, Y), X), Q(-1))
    return out


@dataclass
class Certificate:
    """Outcome of one span certification run."""

    check: str
    algebra: str
    target_name: str
    target_dim: int
    achieved_dim: int
    witnesses: tuple[str, ...]
    generators_consumed: int
    passed: bool
    seconds: float
    cross_dim: int | None = None

    def as_dict(self) -> dict:
        out = {
            "check": self.check,
            "algebra": self.algebra,
            "target": self.target_name,
            "target_dim": self.target_dim,
            "achieved_dim": self.achieved_dim,
            "witness_count": len(self.witnesses),
            "witnesses": list(self.witnesses),
            "generators_consumed": self.generators_consumed,
            "pass": self.passed,
        }
        if self.cross_dim is not None:
            out["cross_dim"] = self.cross_dim
        return out


def _finish(check: str, alg_name: str, target_name: str, target_dim: int,
            tracker: SpanTracker, consumed: int, t0: float,
            cross_dim: int | None = None) -> Certificate:
    achieved = tracker.dimension
    passed = achieved == target_dim and (cross_dim is None or cross_dim == achieved)
    return Certificate(
        check=check,
        algebra=alg_name,
        target_name=target_name,
        target_dim=target_dim,
        achieved_dim=achieved,
        witnesses=tuple(tracker.ordered_witnesses()),
        generators_consumed=consumed,
        passed=passed,
        seconds=time.perf_counter() - t0,
        cross_dim=cross_dim,
    )


def _del_generators(alg: GradedLieAlgebra, symmetric: bool):
    """Deterministic generator stream (P, X-index, Y-index, witness)."""
    n = alg.dim_gm1
    if symmetric:
        rhos = [sym_pair_rho(n, i, j) for i in range(n) for j in range(i, n)]
    else:
        rhos = [pair_rho(n, i, j) for i in range(n) for j in range(n)]
    for P in rhos:
        for k in range(n):
            for l in range(k + 1, n):
                yield P, k, l, f"P={P.label} X=X{k + 1} Y=X{l + 1}"


def certify_del_surjectivity(alg: GradedLieAlgebra, symmetric: bool,
                             batch: int = 1, early_exit: bool = True) -> Certificate:
    """Certify that del values span g0 (all pairs of dual generators) or
    the semisimple part of g0 (symmetrized pairs).

    Generators run in lexicographic order; with ``batch > 1`` the stream is
    consumed in chunks whose trackers are merged, which exercises the same
    code path a parallel run would and produces the same span.
    """
    t0 = time.perf_counter()
    target_name = "g0ss" if symmetric else "g0"
    target = alg.dim_g0 - 1 if symmetric else alg.dim_g0
    tracker = SpanTracker(alg.dim_g0)
    Xb = alg.gm1_basis()
    consumed = 0
    if batch <= 1:
        for P, k, l, wit in _del_generators(alg, symmetric):
            v = del_op(alg, P, Xb[k], Xb[l])
            consumed += 1
            tracker.insert(alg.g0_coords(v), wit)
            if early_exit and tracker.dimension >= target:
                break
    else:
        chunk = SpanTracker(alg.dim_g0)
        pending = 0
        for P, k, l, wit in _del_generators(alg, symmetric):
            v = del_op(alg, P, Xb[k], Xb[l])
            consumed += 1
            chunk.insert(alg.g0_coords(v), wit)
            pending += 1
            if pending >= batch:
                tracker.merge(chunk)
                chunk = SpanTracker(alg.dim_g0)
                pending = 0
                if early_exit and tracker.dimension >= target:
                    break
        if pending:
            tracker.merge(chunk)
    return _finish(
        "surjectivity/symmetric" if symmetric else "surjectivity/full",
        alg.name(), target_name, target, tracker, consumed, t0,
    )


def brute_force_del_span(alg: GradedLieAlgebra, symmetric: bool) -> Subspace:
    """Full-stream span with no early exit; oracle for the certified path."""
    out = Subspace(alg.dim)
    Xb = alg.gm1_basis()
    for P, k, l, _ in _del_generators(alg, symmetric):
        out.insert(del_op(alg, P, Xb[k], Xb[l]))
    return out


def center_witness(alg: GradedLieAlgebra) -> dict:
    """Exhibit independent X, Y and a map P with P(Y) = 0 whose del value
    pairs nontrivially with the grading element, so the full image cannot
    avoid the center of g0.

    Uses P = Z_2 (x) (pairing against X_1): then killing(P(X_1), X_2) = 1.
    """
    n = alg.dim_gm1
    assert n > 1, "depth-one gradings of rank > 1 have dim g(-1) > 1"
    Xb = alg.gm1_basis()
    P = pair_rho(n, 1, 0)  # X_1 -> Z_2, everything else in the kernel of the slot
    X, Y = Xb[0], Xb[1]
    E = alg.grading_element()
    pairing = alg.killing(apply_rho(alg, P, X), Y)
    value = alg.killing(del_op(alg, P, X, Y), E)
    expected = pairing - alg.killing(apply_rho(alg, P, Y), X)
    return {
        "P": P.label,
        "X": "X1",
        "Y": "X2",
        "pairing": pairing,
        "del_vs_grading_element": value,
        "identity_holds": value == expected,
        "nonzero": value != 0,
        "passed": value != 0 and value == expected and alg.killing(apply_rho(alg, P, Y), X) == 0,
    }


def _ideal_nodes(alg: GradedLieAlgebra, ideal: Subspace) -> list[int]:
    """1-based simple-root nodes whose coroots lie in the ideal."""
    return [p + 1 for p in ideal.pivots if p < alg.rank]


def ideal_witness(alg: GradedLieAlgebra, ideal: Subspace) -> dict:
    """Produce a del value meeting a given simple ideal of the semisimple
    part: with b adjacent to the crossed node a, the symmetric candidate
    Z_a^2 + Z_{a+b}^2 sends (X_a, X_{a+b}) to a sum of nonzero vectors in
    the root spaces of +b and -b, both inside the ideal."""
    rs = alg.root_system
    crossed = alg.crossed_node - 1
    nodes = _ideal_nodes(alg, ideal)
    adjacent = [j for j in nodes if rs.cartan_matrix[crossed][j - 1] != 0]
    if not adjacent:
        raise NoAdjacentRoot(
            f"ideal on nodes {nodes} has no node adjacent to {alg.crossed_node}"
        )
    beta_node = min(adjacent)

    alpha = rs.simple_roots[crossed]
    beta = rs.simple_roots[beta_node - 1]
    alpha_beta = tuple(x + y for x, y in zip(alpha, beta))
    assert rs.is_root(alpha_beta)

    n = alg.dim_gm1
    neg = lambda r: tuple(-c for c in r)
    pos_a = alg.gm1_indices.index(alg._eindex[neg(alpha)])
    pos_ab = alg.gm1_indices.index(alg._eindex[neg(alpha_beta)])
    P = RhoCandidate(
        tuple(
            tuple(Q(1) if (i == j and i in (pos_a, pos_ab)) else Q(0) for j in range(n))
            for i in range(n)
        ),
        symmetric=True,
        label=f"Z{pos_a + 1}^2+Z{pos_ab + 1}^2",
    )
    Xb = alg.gm1_basis()
    w = del_op(alg, P, Xb[pos_a], Xb[pos_ab])

    comp_pos = w.get(alg._eindex[beta], Q(0))
    comp_neg = w.get(alg._eindex[neg(beta)], Q(0))
    e_proj = alg.killing(w, alg.grading_element())
    return {
        "ideal_nodes": nodes,
        "beta_node": beta_node,
        "P": P.label,
        "component_in_positive_root_space": comp_pos,
        "component_in_negative_root_space": comp_neg,
        "grading_element_pairing": e_proj,
        "value_in_ideal": ideal.contains(w),
        "passed": comp_pos != 0 and comp_neg != 0 and e_proj == 0 and ideal.contains(w),
    }


# -- explicit symmetric tensors ----------------------------------------


def witness_tensor(n: int, symmetric: bool) -> SymTensor:
    """The two explicit dual tensors whose degree-four contractions are
    surjective: sum over i < j of l_i^4 l_j^2 in the symmetric case, and
    sum over all i, j of l_i^3 l_j^2 (x) l_i in the mixed case (the
    diagonal i = j included; without it the mixed map is not surjective)."""
    if symmetric:
        T = SymTensor(6, n, "dual", {})
        for i in range(n):
            for j in range(i + 1, n):
                T.add_term((i,) * 4 + (j,) * 2, Q(1))
        return T
    T = SymTensor(5, n, "dual", {}, free_slots=1)
    for i in range(n):
        for j in range(n):
            T.add_term(tuple(sorted((i,) * 3 + (j,) * 2)), Q(1), (i,))
    return T


def _sym2_coords(res: SymTensor, index: dict[MultiIndex, int]) -> dict[int, Q]:
    return {index[mi]: c for (mi, _), c in res.coeffs.items()}


def _mixed_coords(res: SymTensor, n: int) -> dict[int, Q]:
    return {mi[0] * n + tail[0]: c for (mi, tail), c in res.coeffs.items()}


def certify_tensor_surjectivity(n: int, symmetric: bool,
                                early_exit: bool = True) -> Certificate:
    """Certify the rank of W -> contract(T, W) on degree-four vectors:
    n(n+1)/2 for the symmetric tensor, n^2 for the mixed one, and check the
    expected preimages land on their targets up to a nonzero scalar."""
    t0 = time.perf_counter()
    T = witness_tensor(n, symmetric)
    dom = sym_basis(4, n)
    if symmetric:
        cod = sym_basis(2, n)
        index = {mi: k for k, mi in enumerate(cod)}
        ambient, target = len(cod), n * (n + 1) // 2
    else:
        ambient, target = n * n, n * n
    tracker = SpanTracker(ambient)
    consumed = 0
    for mi in dom:
        W = vector_monomial(n, mi)
        res = contract(T, W)
        coords = (
            _sym2_coords(res, index) if symmetric else _mixed_coords(res, n)
        )
        consumed += 1
        tracker.insert(coords, "W=e" + "e".join(str(i + 1) for i in mi))
        if early_exit and tracker.dimension >= target:
            break

    spots_ok = _preimage_spot_checks(n, symmetric, T)
    cert = _finish(
        "tensor/symmetric" if symmetric else "tensor/mixed",
        f"n={n}", "S2-dual" if symmetric else "dual-x-dual",
        target, tracker, consumed, t0,
    )
    cert.passed = cert.passed and spots_ok
    return cert


def _preimage_spot_checks(n: int, symmetric: bool, T: SymTensor) -> bool:
    ok = True
    if symmetric:
        if n >= 2:
            # l_n^2 comes from e_{n-1}^4
            res = contract(T, vector_monomial(n, (n - 2,) * 4))
            ok &= res.proportional_to(dual_monomial(n, (n - 1, n - 1))) is not None
        for i in range(n - 1):
            res = contract(T, vector_monomial(n, (i, i, i + 1, i + 1)))
            ok &= res.proportional_to(dual_monomial(n, (i, i))) is not None
        for i in range(n):
            for j in range(i + 1, n):
                res = contract(T, vector_monomial(n, (i, i, i, j)))
                ok &= res.proportional_to(dual_monomial(n, (i, j))) is not None
    else:
        for i in range(n):
            res = contract(T, vector_monomial(n, (i,) * 4))
            ok &= res.proportional_to(dual_monomial(n, (i,), tail=(i,))) is not None
            for j in range(n):
                if j == i:
                    continue
                res = contract(T, vector_monomial(n, tuple(sorted((i, i, i, j)))))
                ok &= res.proportional_to(dual_monomial(n, (j,), tail=(i,))) is not None
    return bool(ok)


# -- composite certificate ----------------------------------------------


def rho_from_contraction(n: int, res: SymTensor, symmetric: bool,
                         label: str) -> RhoCandidate:
    """Reinterpret the two leftover dual slots of a degree-four contraction
    as a map from g(-1) to g(+1) through the Killing pairing.

    In the mixed case the remaining symmetric slot is the argument and the
    free slot the value; in the symmetric case the quadratic residue is
    polarized into its symmetric bilinear form.
    """
    m = [[Q(0)] * n for _ in range(n)]
    if symmetric:
        for (mi, _), c in res.coeffs.items():
            i, j = mi
            if i == j:
                m[i][i] += c
            else:
                m[i][j] += c / 2
                m[j][i] += c / 2
    else:
        for (mi, tail), c in res.coeffs.items():
            # argument slot mi[0], value slot tail[0]
            m[tail[0]][mi[0]] += c
    return RhoCandidate(tuple(tuple(row) for row in m), symmetric, label)


def certify_holonomy_span(alg: GradedLieAlgebra, exact_weyl: bool,
                          early_exit: bool = True) -> Certificate:
    """Composite certificate: contract the explicit witness tensor against
    every degree-four generator, turn each residue into a map P, feed del
    values into the span, and require saturation of g0ss (exact case,
    symmetric tensor) or g0 (general case, mixed tensor)."""
    t0 = time.perf_counter()
    n = alg.dim_gm1
    T = witness_tensor(n, symmetric=exact_weyl)
    target_name = "g0ss" if exact_weyl else "g0"
    target = alg.dim_g0 - 1 if exact_weyl else alg.dim_g0
    tracker = SpanTracker(alg.dim_g0)
    Xb = alg.gm1_basis()
    consumed = 0
    done = False
    for mi in sym_basis(4, n):
        W = vector_monomial(n, mi)
        res = contract(T, W)
        if res.is_zero():
            consumed += n * (n - 1) // 2
            continue
        wlabel = "W=e" + "e".join(str(i + 1) for i in mi)
        P = rho_from_contraction(n, res, exact_weyl, wlabel)
        for k in range(n):
            for l in range(k + 1, n):
                v = del_op(alg, P, Xb[k], Xb[l])
                consumed += 1
                tracker.insert(alg.g0_coords(v), f"{wlabel} X=X{k + 1} Y=X{l + 1}")
                if early_exit and tracker.dimension >= target:
                    done = True
                    break
            if done:
                break
        if done:
            break
    return _finish(
        "composite/exact" if exact_weyl else "composite/general",
        alg.name(), target_name, target, tracker, consumed, t0,
    )
