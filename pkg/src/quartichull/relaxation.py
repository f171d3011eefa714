"""Moment relaxations of the convex hull of a plane quartic: membership,
support functions, boundary sweeps and linear minimization.

The order-k relaxation constrains a truncated moment vector y by
M_k(y) >= 0 and M_{k-2}(p y) = 0, with y00, y10, y01 pinned to the
queried point. Membership margins come from maximizing t subject to
M_k(y) - t I >= 0, so the margin is a continuous proxy for signed
distance to the relaxed set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .moments import MomentIndex, build_moment_matrix, localizing_constraints
from .poly import BivarPoly, SupportLine, monomials_upto
from .sdp import SdpBlock, SdpProblem, SdpSettings, equality_multipliers, solve
from .sos import FEAS_MARGIN, IndeterminateResult

__all__ = [
    "RelaxationProblem",
    "MembershipResult",
    "SupportResult",
    "BoundaryRow",
    "membership",
    "separating_line",
    "support",
    "minimize_linear",
    "boundary_points",
    "boundary_csv",
    "BOUNDARY_CSV_HEADER",
]

BOUNDARY_CSV_HEADER = "angle,radians;f1;f2;support;x1;x2;status"


@dataclass(frozen=True)
class RelaxationProblem:
    """Assembled order-k relaxation data for one curve polynomial."""

    p: BivarPoly
    k: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("order must be >= 2")
        if self.p.degree > 4:
            raise ValueError("curve polynomial must have degree <= 4")
        object.__setattr__(self, "_index", MomentIndex(self.k))
        object.__setattr__(self, "_moment_form", build_moment_matrix(self.k))
        object.__setattr__(self, "_loc_rows", localizing_constraints(self.p, self.k))
        object.__setattr__(self, "_reduction", self._reduction_basis())

    def _reduction_basis(self):
        """Facial reduction of the moment matrix for k >= 4.

        Once deg(x^s p) <= k, the localizing equalities force the coefficient
        vector of x^s p into the kernel of M_k(y) for every feasible y, so the
        LMI has no strictly feasible point and interior-point iterations lose
        primal feasibility. Restricting M_k(y) to the orthogonal complement of
        those vectors is an equivalent, strictly feasible problem.
        """
        if self.k < 4 or self.p.is_zero():
            return None
        rows = monomials_upto(self.k)
        pos = {e: i for i, e in enumerate(rows)}
        cols = []
        for s in monomials_upto(self.k - 4):
            v = np.zeros(len(rows))
            for (a, b), c in self.p.terms.items():
                v[pos[(s[0] + a, s[1] + b)]] += c
            cols.append(v)
        K = np.array(cols).T
        U, sig, _ = np.linalg.svd(K, full_matrices=True)
        r = int(np.sum(sig > 1e-12 * sig[0]))
        return U[:, r:]

    @property
    def index(self):
        return self._index

    @property
    def nmoments(self):
        return len(self._index)

    @property
    def pin_positions(self):
        # graded-lex puts (0,0), (1,0), (0,1) first
        return (0, 1, 2)

    @property
    def lifting_count(self):
        return self.nmoments - 3

    def moment_block(self, with_margin):
        """M_k(y) as an SdpBlock over z = (moments, [t]), facially reduced
        for k >= 4."""
        nm = self.nmoments
        nvars = nm + 1 if with_margin else nm
        size = self._moment_form.size
        F = np.zeros((nvars, size, size))
        for pos, M in self._moment_form.coeff.items():
            F[pos] = M
        V = self._reduction
        if V is not None:
            F = np.einsum("pq,iqr,rs->ips", V.T, F, V, optimize=True)
            size = V.shape[1]
        if with_margin:
            F[-1] = -np.eye(size)
        return SdpBlock(F0=np.zeros((size, size)), F=F)

    def equality_system(self, pins, with_margin):
        """Rows: pins first (in the order given), then deduplicated
        localizing constraints. pins is a list of (position, value)."""
        nm = self.nmoments
        nvars = nm + 1 if with_margin else nm
        rows, rhs = [], []
        for pos, val in pins:
            row = np.zeros(nvars)
            row[pos] = 1.0
            rows.append(row)
            rhs.append(val)
        for loc in self._loc_rows:
            row = np.zeros(nvars)
            for pos, c in loc.items():
                row[pos] = c
            rows.append(row)
            rhs.append(0.0)
        return np.array(rows), np.array(rhs)


@dataclass
class MembershipResult:
    inside: bool
    margin: float
    moments: np.ndarray | None
    solution: object


@dataclass
class SupportResult:
    value: float  # +inf when unbounded in the direction
    maximizer: tuple | None
    status: str  # Optimal | Unbounded


@dataclass
class BoundaryRow:
    angle: float
    f1: float
    f2: float
    support: float
    x1: float
    x2: float
    status: str


def membership(p, k, point, settings=None):
    """Inside/outside test of a point against the order-k relaxed hull."""
    prob = RelaxationProblem(p, k)
    x1, x2 = float(point[0]), float(point[1])
    pins = [(0, 1.0), (1, x1), (2, x2)]
    block = prob.moment_block(with_margin=True)
    A, b = prob.equality_system(pins, with_margin=True)
    c = np.zeros(prob.nmoments + 1)
    c[-1] = -1.0
    sdp = SdpProblem(c=c, blocks=[block], eq_A=A, eq_b=b)
    sol = solve(sdp, settings or SdpSettings())
    if sol.status in ("Numerical", "MaxIter"):
        raise IndeterminateResult(f"membership solve returned {sol.status}: {sol.message}")
    if sol.status != "Optimal":
        raise IndeterminateResult(f"unexpected solver status {sol.status}")
    t = float(sol.z[-1])
    return MembershipResult(
        inside=t >= -FEAS_MARGIN,
        margin=t,
        moments=sol.z[:-1].copy(),
        solution=sol,
    )


def separating_line(p, k, point, settings=None):
    """Supporting line separating an exterior point from the relaxed hull,
    read off the equality multipliers of the membership solve.

    Returns (line, result). line is None when the point is inside.
    """
    prob = RelaxationProblem(p, k)
    x1, x2 = float(point[0]), float(point[1])
    pins = [(0, 1.0), (1, x1), (2, x2)]
    block = prob.moment_block(with_margin=True)
    A, b = prob.equality_system(pins, with_margin=True)
    c = np.zeros(prob.nmoments + 1)
    c[-1] = -1.0
    sdp = SdpProblem(c=c, blocks=[block], eq_A=A, eq_b=b)
    sol = solve(sdp, settings or SdpSettings())
    if sol.status != "Optimal":
        raise IndeterminateResult(f"membership solve returned {sol.status}: {sol.message}")
    t = float(sol.z[-1])
    res = MembershipResult(inside=t >= -FEAS_MARGIN, margin=t,
                           moments=sol.z[:-1].copy(), solution=sol)
    if res.inside:
        return None, res
    lam = equality_multipliers(sdp, sol)
    f = np.array(lam[:3], dtype=float)  # pin rows come first
    if f[0] + f[1] * x1 + f[2] * x2 > 0:
        f = -f
    norm = math.hypot(f[1], f[2])
    if norm < 1e-14:
        return None, res
    return SupportLine(tuple(f / norm)), res


def support(p, k, direction, settings=None):
    """max f.(x1,x2) over the order-k relaxed hull."""
    f1, f2 = float(direction[0]), float(direction[1])
    prob = RelaxationProblem(p, k)
    block = prob.moment_block(with_margin=False)
    A, b = prob.equality_system([(0, 1.0)], with_margin=False)
    c = np.zeros(prob.nmoments)
    c[1] = -f1
    c[2] = -f2
    sdp = SdpProblem(c=c, blocks=[block], eq_A=A, eq_b=b)
    sol = solve(sdp, settings or SdpSettings())
    if sol.status == "Unbounded":
        return SupportResult(value=math.inf, maximizer=None, status="Unbounded")
    status = "Optimal"
    if sol.status != "Optimal":
        # High orders are barely strictly feasible (the moment body of a
        # 1-dimensional curve thins out exponentially with the degree) and
        # the solver can stall with the certificate side adrift. The moment
        # iterate itself is still feasible, so its value is still a valid
        # inner estimate of the support; report it as inexact.
        if sol.z is None or sol.violation > 1e-6:
            raise IndeterminateResult(
                f"support solve returned {sol.status}: {sol.message}")
        status = "Inaccurate"
    return SupportResult(
        value=f1 * sol.z[1] + f2 * sol.z[2],
        maximizer=(float(sol.z[1]), float(sol.z[2])),
        status=status,
    )


def minimize_linear(p, objective, orders, settings=None):
    """Lower bounds on min f.(x1,x2) over the relaxed hulls, one per order.

    objective is a 2-vector. Returns a list of (order, bound, status);
    bound is None when the order's solve failed, -inf when unbounded.
    """
    f1, f2 = float(objective[0]), float(objective[1])
    out = []
    for k in orders:
        if k < 2:
            raise ValueError("order must be >= 2")
        try:
            res = support(p, k, (-f1, -f2), settings=settings)
        except IndeterminateResult as exc:
            out.append((k, None, str(exc)))
            continue
        if res.status == "Unbounded":
            out.append((k, -math.inf, "Unbounded"))
        else:
            out.append((k, -res.value, res.status))
    return out


def boundary_points(p, k, n, settings=None):
    """Support sweep at n equally spaced angles.

    Rows double as a supporting-line envelope (angle, support) and as a
    maximizer point cloud (x1, x2). Unbounded directions are flagged.
    """
    if n < 3:
        raise ValueError("need at least 3 sample angles")
    rows = []
    prob = RelaxationProblem(p, k)
    block = prob.moment_block(with_margin=False)
    A, b = prob.equality_system([(0, 1.0)], with_margin=False)
    for j in range(n):
        theta = 2 * math.pi * j / n
        f1, f2 = math.cos(theta), math.sin(theta)
        c = np.zeros(prob.nmoments)
        c[1] = -f1
        c[2] = -f2
        sdp = SdpProblem(c=c, blocks=[block], eq_A=A, eq_b=b)
        sol = solve(sdp, settings or SdpSettings())
        if sol.status == "Unbounded":
            rows.append(BoundaryRow(theta, f1, f2, math.inf, math.nan, math.nan,
                                    "unbounded"))
        elif sol.status == "Optimal":
            rows.append(BoundaryRow(theta, f1, f2,
                                    f1 * sol.z[1] + f2 * sol.z[2],
                                    float(sol.z[1]), float(sol.z[2]), "ok"))
        elif sol.z is not None and sol.violation <= 1e-6:
            # stalled but with a feasible moment iterate: still a valid
            # inner estimate of the support (see support())
            rows.append(BoundaryRow(theta, f1, f2,
                                    f1 * sol.z[1] + f2 * sol.z[2],
                                    float(sol.z[1]), float(sol.z[2]),
                                    "inaccurate"))
        else:
            rows.append(BoundaryRow(theta, f1, f2, math.nan, math.nan, math.nan,
                                    sol.status.lower()))
    return rows


def _fmt(v):
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.12g}"


def boundary_csv(rows):
    lines = [BOUNDARY_CSV_HEADER]
    for r in rows:
        lines.append(";".join([
            _fmt(r.angle), _fmt(r.f1), _fmt(r.f2), _fmt(r.support),
            _fmt(r.x1), _fmt(r.x2), r.status,
        ]))
    return "\n".join(lines) + "\n"
