"""Syndrome decoding of dual Reed-Solomon measurements: Prony's method.

The measurement matrix is V[i, j] = g_j^i over distinct points g_j, with 2s
rows.  Any 2s of its columns are independent, so an s-sparse vector is the
unique preimage of its syndrome; with an advice set S of suspected support
positions the budget improves to |supp(x) \\ S| <= s - |S|/2, each advice
position costing half an error.

pronys_method recovers such a vector from its syndrome alone: it builds a
mixed matrix whose first |S| rows are point-power rows for the advice
positions and whose remaining rows are sliding windows of the syndrome,
row-reduces it, cuts at the largest invertible leading principal minor (its
size is |S| plus the number of surprises outside S), and reads the error
locator polynomial off the reduced form.  The locator's roots among the
points give the support; a final overdetermined Vandermonde solve fills in
the values and doubles as a promise check.
"""

from dataclasses import dataclass

from . import linalg
from .errors import (
    AdviceTooLarge,
    DuplicatePoints,
    FieldTooSmall,
    InconsistentSyndrome,
    ShapeMismatch,
)
from .field import Fel, FieldCtx


@dataclass(frozen=True)
class DualRSMeasurements:
    """The 2s x n matrix V[i, j] = points[j]^i over distinct points."""

    ctx: FieldCtx
    points: tuple[Fel, ...]
    s: int
    rows: tuple[tuple[Fel, ...], ...]

    def measure(self, x: list[Fel]) -> list[Fel]:
        ctx = self.ctx
        out = []
        for row in self.rows:
            acc = ctx.zero
            for c, v in zip(row, x):
                if v != ctx.zero:
                    acc = ctx.add(acc, ctx.mul(c, v))
            out.append(acc)
        return out


def dual_rs(ctx: FieldCtx, points, s: int) -> DualRSMeasurements:
    """Measurements for s-advice-sparse recovery; 2s rows.

    ``points`` may be an explicit list of distinct elements or an int n, in
    which case the first n powers 1, g, ..., g^(n-1) of the canonical
    element of order >= n are used.
    """
    if isinstance(points, int):
        g = ctx.element_of_order(points)
        pts = []
        cur = ctx.one
        for _ in range(points):
            pts.append(cur)
            cur = ctx.mul(cur, g)
        points = pts
    points = tuple(points)
    if len(set(points)) != len(points):
        raise DuplicatePoints("evaluation points must be pairwise distinct")
    rows = []
    cur = [ctx.one] * len(points)
    for _ in range(2 * s):
        rows.append(tuple(cur))
        cur = [ctx.mul(c, p) for c, p in zip(cur, points)]
    return DualRSMeasurements(ctx, points, s, tuple(rows))


def pronys_method(
    ctx: FieldCtx,
    n: int,
    s: int,
    advice: set[int],
    y: list[Fel],
    points: list[Fel],
) -> list[Fel]:
    """Recover x of length n from y = V x, given advice on its support.

    Promise: x has at most s - ceil(|advice|/2) nonzero entries outside the
    advice set.  Violations surface as InconsistentSyndrome, never as a
    silently wrong vector, because the final linear solve is overdetermined
    and fully verified.
    """
    if len(y) != 2 * s:
        raise ShapeMismatch(f"expected {2 * s} syndrome values, got {len(y)}")
    if len(points) != n:
        raise ShapeMismatch("need one evaluation point per coordinate")
    advice = set(advice)
    if len(advice) > 2 * s:
        raise AdviceTooLarge(f"|S| = {len(advice)} exceeds 2s = {2 * s}")
    if any(not 0 <= i < n for i in advice):
        raise AdviceTooLarge("advice positions must index the vector")

    points = list(points)
    if len(advice) % 2:
        # enlarge by the smallest absent index; if none, simulate index n
        free = next((i for i in range(n) if i not in advice), None)
        if free is None:
            points.append(_fresh_point(ctx, points))
            advice.add(n)
        else:
            advice.add(free)
    t = len(advice) // 2
    s_idx = sorted(advice)

    # mixed matrix: |S| point-power rows, then s-t sliding syndrome windows
    width = s + t + 1
    prime = ctx.k == 1
    a_rows: list[list[Fel]] = []
    for i in s_idx:
        if prime:
            p, pt = ctx.p, points[i]
            row = [1]
            for _ in range(width - 1):
                row.append(row[-1] * pt % p)
        else:
            row = [ctx.one]
            for _ in range(width - 1):
                row.append(ctx.mul(row[-1], points[i]))
        a_rows.append(row)
    for off in range(s - t):
        a_rows.append(y[off : off + width])

    red, pivots = linalg.rref(ctx, a_rows)
    rho = len(pivots)
    if pivots != list(range(rho)):
        # honest syndromes put all pivots on the diagonal, making the
        # locator nullspace one-dimensional at the principal-minor cut
        raise InconsistentSyndrome("syndrome matrix is not in generic position")
    coeffs = [ctx.neg(red[i][rho]) for i in range(rho)] + [ctx.one]

    if prime:
        p = ctx.p
        rev = coeffs[::-1]
        support = []
        for i, pt in enumerate(points):
            acc = 0
            for c in rev:
                acc = (acc * pt + c) % p
            if acc == 0:
                support.append(i)
    else:
        support = [i for i, pt in enumerate(points)
                   if linalg.poly_eval(ctx, coeffs, pt) == ctx.zero]
    if len(support) != rho:
        raise InconsistentSyndrome(
            "locator roots do not all lie among the evaluation points"
        )

    # solve the full 2s x |support| system and verify every equation
    cols = []
    for i in support:
        if prime:
            p, pt = ctx.p, points[i]
            col = [1]
            for _ in range(2 * s - 1):
                col.append(col[-1] * pt % p)
        else:
            col = [ctx.one]
            for _ in range(2 * s - 1):
                col.append(ctx.mul(col[-1], points[i]))
        cols.append(col)
    rows = [[col[i] for col in cols] for i in range(2 * s)]
    z = linalg.solve(ctx, rows, list(y))
    if z is None:
        raise InconsistentSyndrome("syndrome outside the promised support model")

    x = [ctx.zero] * n
    for i, v in zip(support, z):
        if i >= n:
            if v != ctx.zero:  # the simulated coordinate is zero by construction
                raise InconsistentSyndrome("virtual coordinate got a nonzero value")
            continue
        x[i] = v
    return x


def _fresh_point(ctx: FieldCtx, points: list[Fel]) -> Fel:
    used = set(points)
    for cand in ctx.nonzero_elements():
        if cand not in used:
            return cand
    raise FieldTooSmall("no unused evaluation point left for the virtual index")
