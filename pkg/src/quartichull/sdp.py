"""Dense small-scale semidefinite solver.

Problems are given in LMI form:

    minimize    c' z
    subject to  F0_b + sum_i z_i Fi_b  >= 0   (PSD, one constraint per block b)
                E z = d

Equalities are eliminated up front by projection onto their affine solution
space (QR), then a primal-dual path-following method with Nesterov-Todd
scaling and a Mehrotra predictor-corrector step solves the cone phase.
Internally the LMI is treated as the dual side of a standard-form pair

    (P) min <C, X>  s.t.  <A_i, X> = b_i,  X >= 0
    (D) max b' y    s.t.  C - sum_i y_i A_i = S >= 0

with C = F0, A_i = -F_i, b = -c, y = z.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

__all__ = [
    "SdpBlock",
    "SdpProblem",
    "SdpSettings",
    "SdpSolution",
    "solve",
    "min_eig",
    "psd_truncate",
    "dump_problem",
    "NotPsdError",
]


class NotPsdError(ValueError):
    pass


@dataclass
class SdpBlock:
    """One PSD constraint F0 + sum_i z_i F[i] >= 0."""

    F0: np.ndarray
    F: np.ndarray  # shape (m, n, n)

    def __post_init__(self):
        self.F0 = np.asarray(self.F0, dtype=float)
        self.F = np.asarray(self.F, dtype=float)
        n = self.F0.shape[0]
        if self.F0.shape != (n, n) or self.F.shape[1:] != (n, n):
            raise ValueError("inconsistent block shapes")

    @property
    def size(self):
        return self.F0.shape[0]

    def at(self, z):
        return self.F0 + np.tensordot(z, self.F, axes=(0, 0))


@dataclass
class SdpProblem:
    c: np.ndarray
    blocks: list
    eq_A: np.ndarray | None = None
    eq_b: np.ndarray | None = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        m = len(self.c)
        for blk in self.blocks:
            if blk.F.shape[0] != m:
                raise ValueError("block variable count mismatch")
        if self.eq_A is not None:
            self.eq_A = np.atleast_2d(np.asarray(self.eq_A, dtype=float))
            self.eq_b = np.atleast_1d(np.asarray(self.eq_b, dtype=float))

    @property
    def nvars(self):
        return len(self.c)


@dataclass
class SdpSettings:
    gap_tol: float = 1e-8
    feas_tol: float = 1e-8
    max_iter: int = 200
    step_frac: float = 0.98
    ray_threshold: float = 1e6
    # fallback accuracy: if the strict tolerances are never met but some
    # iterate reaches this merit, that iterate is returned as Optimal
    accept_tol: float = 1e-6
    # declare stagnation when mu fails to halve over this many iterations
    stall_window: int = 80
    verbose: bool = False


@dataclass
class SdpSolution:
    status: str  # Optimal | Infeasible | Unbounded | MaxIter | Numerical
    z: np.ndarray | None
    duals: list | None
    objective: float | None
    violation: float
    min_eigenvalue: float
    iterates: list = field(default_factory=list)
    certificate: object = None
    message: str = ""


def min_eig(M, sym_tol=1e-12):
    """Smallest eigenvalue of a symmetric matrix."""
    M = np.asarray(M, dtype=float)
    scale = max(1.0, float(np.max(np.abs(M))) if M.size else 0.0)
    if np.max(np.abs(M - M.T)) > sym_tol * scale:
        raise ValueError("matrix is not symmetric")
    return float(np.linalg.eigvalsh(0.5 * (M + M.T))[0])


def psd_truncate(M, tol=1e-8):
    """Spectral split of a PSD-within-tolerance matrix into (weight, vector) pairs."""
    M = np.asarray(M, dtype=float)
    w, V = np.linalg.eigh(0.5 * (M + M.T))
    if w[0] < -tol:
        raise NotPsdError(f"not PSD within tolerance: min eigenvalue {w[0]:.3e}")
    return [(float(w[i]), V[:, i].copy()) for i in range(len(w)) if w[i] > tol]


# ---------------------------------------------------------------------------


def _eliminate_equalities(prob, settings):
    """Reduce E z = d by QR: z = z0 + N w. Returns (z0, N) or an infeasibility
    certificate (None, y) with E' y = 0, d' y != 0."""
    E, d = prob.eq_A, prob.eq_b
    m = prob.nvars
    if E is None or E.shape[0] == 0:
        return np.zeros(m), np.eye(m), None
    Q, R, piv = scipy.linalg.qr(E, pivoting=True)
    diag = np.abs(np.diag(R))
    rank = int(np.sum(diag > max(E.shape) * np.finfo(float).eps * (diag[0] if len(diag) else 1.0)))
    z0, res, *_ = np.linalg.lstsq(E, d, rcond=None)
    if np.linalg.norm(E @ z0 - d) > settings.feas_tol * (1 + np.linalg.norm(d)):
        # certificate: y in the left null space with d'y != 0
        y = Q[:, rank:] @ (Q[:, rank:].T @ d)
        return None, None, y
    # null space of E
    _, _, Vt = np.linalg.svd(E)
    N = Vt[rank:].T
    return z0, N, None


def _max_step(L, Delta, frac):
    """Largest alpha <= 1 with X + alpha*Delta psd, X = L L'."""
    W = scipy.linalg.solve_triangular(L, Delta, lower=True)
    W = scipy.linalg.solve_triangular(L, W.T, lower=True)
    lam = np.linalg.eigvalsh(0.5 * (W + W.T))[0]
    if lam >= -1e-14:
        return 1.0
    return min(1.0, -frac / lam)


def _ipm(C_blocks, A_blocks, b, settings):
    """Core primal-dual IPM on the standard-form pair. Returns dict."""
    nb = len(C_blocks)
    m = len(b)
    ns = [C.shape[0] for C in C_blocks]
    ntot = sum(ns)

    scale = max(
        [1.0]
        + [float(np.max(np.abs(C))) for C in C_blocks]
        + [float(np.max(np.abs(A))) if A.size else 0.0 for A in A_blocks]
        + [float(np.max(np.abs(b))) if m else 0.0]
    )
    X = [scale * np.eye(n) for n in ns]
    S = [scale * np.eye(n) for n in ns]
    y = np.zeros(m)

    bnorm = 1 + np.linalg.norm(b)
    Cnorm = 1 + np.sqrt(sum(np.sum(C * C) for C in C_blocks))

    iterates = []
    status = "MaxIter"
    message = ""
    mu_history = []
    best = None  # (merit, X, y, S) of the most accurate iterate seen
    # best iterate judged on the y/S side only: S >= 0 holds throughout, so
    # small rd and gap make y near-feasible and near-optimal for the LMI even
    # when the X side has drifted (degenerate problems)
    best_lmi = None

    def a_of_x(Xs):
        out = np.zeros(m)
        for A, Xb in zip(A_blocks, Xs):
            if A.size:
                out += np.tensordot(A, Xb, axes=([1, 2], [0, 1]))
        return out

    for it in range(settings.max_iter):
        rp = b - a_of_x(X)
        Rd = [C - Sb - np.tensordot(y, A, axes=(0, 0)) if A.size else C - Sb
              for C, Sb, A in zip(C_blocks, S, A_blocks)]
        gap = sum(np.sum(Xb * Sb) for Xb, Sb in zip(X, S))
        mu = gap / ntot
        pobj = sum(np.sum(C * Xb) for C, Xb in zip(C_blocks, X))
        dobj = float(b @ y)
        rp_norm = np.linalg.norm(rp)
        rd_norm = np.sqrt(sum(np.sum(R * R) for R in Rd))

        iterates.append(
            dict(iter=it, pobj=float(pobj), dobj=dobj, gap=float(gap), mu=float(mu),
                 rp=float(rp_norm), rd=float(rd_norm))
        )
        if settings.verbose:
            print(f"  it {it:3d}  pobj {pobj: .6e}  dobj {dobj: .6e}  gap {gap:.2e} "
                  f" rp {rp_norm:.2e}  rd {rd_norm:.2e}")

        gap_rel = gap / (1 + abs(pobj) + abs(dobj))
        merit = max(rp_norm / bnorm, rd_norm / Cnorm, gap_rel)
        if best is None or merit < best[0]:
            best = (merit, [Xb.copy() for Xb in X], y.copy(),
                    [Sb.copy() for Sb in S])
        merit_lmi = max(rd_norm / Cnorm, gap_rel)
        if (rp_norm / bnorm < 1e-2
                and (best_lmi is None or merit_lmi < best_lmi[0])):
            best_lmi = (merit_lmi, [Xb.copy() for Xb in X], y.copy(),
                        [Sb.copy() for Sb in S])

        if (rp_norm / bnorm < settings.feas_tol
                and rd_norm / Cnorm < settings.feas_tol
                and gap / (1 + abs(pobj) + abs(dobj)) < settings.gap_tol):
            status = "Optimal"
            break

        # divergence: improving-ray tests
        xnorm = np.sqrt(sum(np.sum(Xb * Xb) for Xb in X))
        ynorm = np.linalg.norm(y)
        if xnorm > 0 and pobj < 0:
            # X/|X| tends to a ray proving LMI infeasibility
            ray_res = np.linalg.norm(a_of_x(X) ) / xnorm
            if -pobj / xnorm > settings.ray_threshold * max(ray_res, 1e-16):
                status = "Infeasible"
                message = "primal improving ray found"
                break
        if ynorm > 0 and dobj > 0:
            res = np.sqrt(sum(
                np.sum((np.tensordot(y, A, axes=(0, 0)) + Sb) ** 2) if A.size else np.sum(Sb**2)
                for A, Sb in zip(A_blocks, S))) / ynorm
            if dobj / ynorm > settings.ray_threshold * max(res, 1e-16):
                status = "Unbounded"
                message = "dual improving ray found"
                break

        mu_history.append(mu)
        w = settings.stall_window
        if len(mu_history) > w and mu > 0.5 * mu_history[-w] and rp_norm / bnorm < 1e2:
            status = "Numerical"
            message = "no progress on the barrier parameter"
            break

        # NT scaling per block: W = R R' with W S W = X; in the scaled space
        # R^{-1} X R^{-T} = R' S R = diag(lam).
        try:
            Lx = [np.linalg.cholesky(Xb) for Xb in X]
            Ls = [np.linalg.cholesky(Sb) for Sb in S]
        except np.linalg.LinAlgError:
            status = "Numerical"
            message = "iterate left the cone"
            break
        Ws, Rs, Rinvs, lams = [], [], [], []
        for Lxb, Lsb in zip(Lx, Ls):
            U, sig, Vt = np.linalg.svd(Lsb.T @ Lxb)
            R = Lxb @ Vt.T / np.sqrt(sig)
            Rinv = (np.sqrt(sig)[:, None] * Vt) @ np.linalg.inv(Lxb)
            Ws.append(R @ R.T)
            Rs.append(R)
            Rinvs.append(Rinv)
            lams.append(sig)

        # Schur complement M_ij = sum_b tr(A_i W A_j W)
        M = np.zeros((m, m))
        WAW = []
        for A, W in zip(A_blocks, Ws):
            if not A.size:
                WAW.append(A)
                continue
            T = np.einsum("pq,iqr,rs->ips", W, A, W, optimize=True)
            WAW.append(T)
            M += np.tensordot(A, T, axes=([1, 2], [1, 2]))
        M = 0.5 * (M + M.T)

        jitter = 0.0
        for attempt in range(5):
            try:
                Lm = np.linalg.cholesky(M + jitter * np.eye(m))
                break
            except np.linalg.LinAlgError:
                jitter = max(1e-14 * (np.trace(M) / max(m, 1)), 10 * jitter, 1e-300)
        else:
            status = "Numerical"
            message = "singular Schur complement"
            break

        def solve_direction(Rc):
            rhs = rp.copy()
            for A, W, Rdb, Rcb in zip(A_blocks, Ws, Rd, Rc):
                if A.size:
                    rhs -= np.tensordot(A, Rcb - W @ Rdb @ W, axes=([1, 2], [0, 1]))
            dy = scipy.linalg.cho_solve((Lm, True), rhs)
            # iterative refinement: the Schur complement is increasingly
            # ill-conditioned as mu -> 0 and lost digits show up directly
            # as primal infeasibility
            for _ in range(3):
                r = rhs - M @ dy
                if np.linalg.norm(r) < 1e-14 * max(1.0, np.linalg.norm(rhs)):
                    break
                dy = dy + scipy.linalg.cho_solve((Lm, True), r)
            dS = [Rdb - (np.tensordot(dy, A, axes=(0, 0)) if A.size else 0.0)
                  for Rdb, A in zip(Rd, A_blocks)]
            dX = []
            for Rcb, W, dSb in zip(Rc, Ws, dS):
                d = Rcb - W @ dSb @ W
                dX.append(0.5 * (d + d.T))
            return dX, dy, dS

        def scaled_rhs_to_rc(rhs_blocks):
            # rhs in scaled space -> Rc with dX + W dS W = Rc, via the Lyapunov
            # scaling (lam_i + lam_j)/2.
            out = []
            for R, lam, rhs in zip(Rs, lams, rhs_blocks):
                denom = 0.5 * (lam[:, None] + lam[None, :])
                out.append(R @ (rhs / denom) @ R.T)
            return out

        # predictor: target X S -> 0; scaled rhs is -lam^2 (gives Rc = -X)
        Rc_aff = [-Xb for Xb in X]
        dXa, dya, dSa = solve_direction(Rc_aff)
        ap = min(_max_step(Lxb, dXb, settings.step_frac) for Lxb, dXb in zip(Lx, dXa))
        ad = min(_max_step(Lsb, dSb, settings.step_frac) for Lsb, dSb in zip(Ls, dSa))
        gap_aff = sum(np.sum((Xb + ap * dXb) * (Sb + ad * dSb))
                      for Xb, dXb, Sb, dSb in zip(X, dXa, S, dSa))
        sigma = min(1.0, max(0.0, (max(gap_aff, 0.0) / gap) ** 3)) if gap > 0 else 0.0

        # corrector with the Mehrotra second-order term in scaled space
        rhs_blocks = []
        for R, Rinv, lam, dXb, dSb in zip(Rs, Rinvs, lams, dXa, dSa):
            dXh = Rinv @ dXb @ Rinv.T
            dSh = R.T @ dSb @ R
            corr = 0.5 * (dXh @ dSh + dSh @ dXh)
            rhs_blocks.append(sigma * mu * np.eye(len(lam)) - np.diag(lam**2) - corr)
        Rc = scaled_rhs_to_rc(rhs_blocks)
        dX, dy, dS = solve_direction(Rc)
        ap = min(_max_step(Lxb, dXb, settings.step_frac) for Lxb, dXb in zip(Lx, dX))
        ad = min(_max_step(Lsb, dSb, settings.step_frac) for Lsb, dSb in zip(Ls, dS))
        if min(ap, ad) < 1e-10:
            status = "Numerical"
            message = "step length collapsed"
            break

        X = [Xb + ap * dXb for Xb, dXb in zip(X, dX)]
        y = y + ad * dy
        S = [Sb + ad * dSb for Sb, dSb in zip(S, dS)]

    if status in ("Numerical", "MaxIter"):
        # strict tolerances unreachable (degenerate optimal face is common
        # for moment problems) but an iterate of acceptable merit exists
        if best is not None and best[0] < settings.accept_tol:
            status = "Optimal"
            message = f"converged to reduced accuracy (merit {best[0]:.2e})"
            _, X, y, S = best
        elif best_lmi is not None and best_lmi[0] < settings.accept_tol:
            status = "Optimal"
            message = ("converged on the feasible side only "
                       f"(merit {best_lmi[0]:.2e})")
            _, X, y, S = best_lmi

    return dict(status=status, X=X, y=y, S=S, iterates=iterates, message=message)


def solve(prob, settings=None):
    """Solve an LMI-form SDP. See module docstring for conventions."""
    settings = settings or SdpSettings()
    m = prob.nvars

    z0, N, cert = _eliminate_equalities(prob, settings)
    if z0 is None:
        return SdpSolution(
            status="Infeasible", z=None, duals=None, objective=None,
            violation=float("inf"), min_eigenvalue=float("-inf"),
            certificate=cert, message="inconsistent equality system",
        )
    mr = N.shape[1]
    obj_offset = float(prob.c @ z0)
    c_red = N.T @ prob.c

    C_blocks = [blk.at(z0) for blk in prob.blocks]
    A_blocks = []
    for blk in prob.blocks:
        if mr:
            A = -np.tensordot(N, blk.F, axes=(0, 0))  # shape (mr, n, n)
        else:
            A = np.zeros((0, blk.size, blk.size))
        A_blocks.append(A)
    b = -c_red

    if mr == 0:
        lam = min(min_eig(C) for C in C_blocks)
        ok = lam >= -settings.feas_tol
        return SdpSolution(
            status="Optimal" if ok else "Infeasible",
            z=z0 if ok else None,
            duals=None,
            objective=obj_offset if ok else None,
            violation=max(0.0, -lam),
            min_eigenvalue=lam,
            message="fully determined by equalities",
        )

    res = _ipm(C_blocks, A_blocks, b, settings)
    z = z0 + N @ res["y"]
    lam = min(min_eig(0.5 * (blk.at(z) + blk.at(z).T)) for blk in prob.blocks) if prob.blocks else 0.0
    violation = max(0.0, -lam)
    if prob.eq_A is not None and prob.eq_A.shape[0]:
        violation = max(violation, float(np.max(np.abs(prob.eq_A @ z - prob.eq_b))))

    status = res["status"]
    sol = SdpSolution(
        status=status,
        z=z if status in ("Optimal", "MaxIter", "Numerical") else None,
        duals=res["X"],
        objective=float(prob.c @ z) if status in ("Optimal", "MaxIter", "Numerical") else None,
        violation=violation,
        min_eigenvalue=lam,
        iterates=res["iterates"],
        message=res["message"],
    )
    if status == "Infeasible":
        xnorm = np.sqrt(sum(np.sum(Xb * Xb) for Xb in res["X"]))
        sol.certificate = [Xb / xnorm for Xb in res["X"]]
    if status == "Unbounded":
        sol.certificate = N @ (res["y"] / np.linalg.norm(res["y"]))
    return sol


def equality_multipliers(prob, sol):
    """Recover multipliers for E z = d from stationarity:
    c_i - sum_b tr(F_{b,i} X_b) + (E' lam)_i = 0."""
    if prob.eq_A is None or sol.duals is None:
        raise ValueError("no equality system or no dual blocks")
    g = prob.c.copy()
    for blk, Xb in zip(prob.blocks, sol.duals):
        g -= np.tensordot(blk.F, Xb, axes=([1, 2], [0, 1]))
    lam, *_ = np.linalg.lstsq(prob.eq_A.T, -g, rcond=None)
    return lam


def dump_problem(prob, fh=None):
    """Text interchange dump: variable count, block sizes, equality system and
    sparse symmetric coefficient triples (see README for the format)."""
    out = fh or io.StringIO()
    out.write(f"nvars {prob.nvars}\n")
    out.write("blocks " + " ".join(str(b.size) for b in prob.blocks) + "\n")
    for bi, blk in enumerate(prob.blocks):
        mats = [("F0", blk.F0)] + [(f"F{i+1}", blk.F[i]) for i in range(prob.nvars)]
        for name, M in mats:
            idx = np.argwhere(np.triu(np.abs(M)) > 0)
            for i, j in idx:
                out.write(f"{bi} {name} {i} {j} {M[i, j]:.17g}\n")
    out.write("objective " + " ".join(f"{v:.17g}" for v in prob.c) + "\n")
    if prob.eq_A is not None:
        for r in range(prob.eq_A.shape[0]):
            row = " ".join(f"{v:.17g}" for v in prob.eq_A[r])
            out.write(f"eq {row} = {prob.eq_b[r]:.17g}\n")
    if fh is None:
        return out.getvalue()
    return None
