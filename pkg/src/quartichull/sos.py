"""Sum-of-squares certificates: Gram decompositions and membership in the
dual SOS cone of affine functions f = s0 + s1*p.

Gram matrices are indexed by monomials of degree <= k in graded-lex order.
Non-uniqueness is resolved by maximizing the minimum eigenvalue, so repeated
runs return the same certificate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .poly import BivarPoly, SupportLine, monomials_upto
from .sdp import SdpBlock, SdpProblem, SdpSettings, psd_truncate, solve

__all__ = [
    "SosCertificate",
    "IndeterminateResult",
    "sos_decompose",
    "sos_margin",
    "certify_in_fk",
    "nonneg_quartic",
]

FEAS_MARGIN = 1e-7

# Gram solves are tightened beyond the generic default so the rank-refinement
# step starts close enough to the exact low-rank certificate.
_GRAM_SETTINGS = SdpSettings(gap_tol=1e-11)


def _solve_gram(prob, settings):
    """Solve at the tight Gram tolerance, falling back to the generic
    tolerance when the extra digits are not numerically reachable."""
    if settings is not None:
        return solve(prob, settings)
    sol = solve(prob, _GRAM_SETTINGS)
    if sol.status in ("Numerical", "MaxIter"):
        sol = solve(prob, SdpSettings())
    return sol


class IndeterminateResult(RuntimeError):
    """The underlying SDP solve ended with a Numerical status."""


@dataclass
class SosCertificate:
    target: BivarPoly
    basis: list  # exponent pairs indexing the Gram matrix
    gram: np.ndarray
    multiplier: BivarPoly  # s1 with target = s0 + s1 * p (zero when plain SOS)
    squares: list  # list of BivarPoly, s0 = sum of squares
    residual: float
    margin: float  # optimal min-eigenvalue value of the Gram search

    def s0(self):
        out = BivarPoly()
        for s in self.squares:
            out = out + s * s
        return out

    def to_json(self):
        def poly_map(p):
            return {f"{a},{b}": c for (a, b), c in sorted(p.terms.items())}

        return json.dumps(
            {
                "target": poly_map(self.target),
                "multiplier": poly_map(self.multiplier),
                "squares": [poly_map(s) for s in self.squares],
                "gram": [[round(v, 12) for v in row] for row in self.gram.tolist()],
                "basis": [list(e) for e in self.basis],
                "residual": self.residual,
            },
            indent=2,
        )


def _gram_blocks(nb):
    """Upper-triangle parametrization of a symmetric nb x nb matrix.

    Returns (pairs, F) with F[i] the symmetric indicator matrix of variable i.
    """
    pairs = [(i, j) for i in range(nb) for j in range(i, nb)]
    F = np.zeros((len(pairs), nb, nb))
    for idx, (i, j) in enumerate(pairs):
        F[idx, i, j] = 1.0
        F[idx, j, i] = 1.0
    return pairs, F


def _gram_to_squares(G, tol=1e-6):
    eigpairs = psd_truncate(G, tol=tol)
    return eigpairs


def _refine_lowrank(G, s1_coeffs, s1_basis, p, target, basis, k, rank_cut=1e-3):
    """Snap an interior-point Gram onto the nearest exact low-rank certificate.

    The interior-point iterate carries O(sqrt(gap)) noise in the zero
    eigenvalues; Gauss-Newton on the factorized coefficients removes it.
    Returns (G, s1_coeffs) -- refined on success, the inputs otherwise.
    """
    w, V = np.linalg.eigh(0.5 * (G + G.T))
    wmax = max(w[-1], 1e-12)
    mons = monomials_upto(2 * k)
    target_vec = np.array([target.coeff(*s) for s in mons])
    p_shift = np.zeros((len(s1_basis), len(mons)))
    for gi, g in enumerate(s1_basis):
        for si, s in enumerate(mons):
            d = (s[0] - g[0], s[1] - g[1])
            if d[0] >= 0 and d[1] >= 0:
                p_shift[gi, si] = p.coeff(*d)

    # lookup: which (i, j) basis products hit each monomial
    prod_pos = {}
    nb = len(basis)
    for i in range(nb):
        for j in range(nb):
            s = (basis[i][0] + basis[j][0], basis[i][1] + basis[j][1])
            prod_pos.setdefault(s, []).append((i, j))
    mon_index = {s: si for si, s in enumerate(mons)}

    def residual(Vf, s1):
        Gf = Vf @ Vf.T
        c = np.zeros(len(mons))
        for s, pairs in prod_pos.items():
            c[mon_index[s]] = sum(Gf[i, j] for i, j in pairs)
        return c + s1 @ p_shift - target_vec

    for rank in range(int(np.sum(w > rank_cut * wmax)), nb + 1):
        if rank == 0:
            continue
        Vf = V[:, -rank:] * np.sqrt(np.maximum(w[-rank:], 0.0))
        s1 = s1_coeffs.copy()
        ok = False
        for _ in range(80):
            r = residual(Vf, s1)
            # the residual is quadratic along flat directions of the
            # certificate manifold, so drive it to machine precision or the
            # parameters themselves are only sqrt-accurate
            if np.max(np.abs(r)) < 5e-15 * max(1.0, np.max(np.abs(target_vec))):
                ok = True
                break
            J = np.zeros((len(mons), nb * rank + len(s1)))
            for widx in range(nb):
                for l in range(rank):
                    col = np.zeros(len(mons))
                    for j in range(nb):
                        s = (basis[widx][0] + basis[j][0], basis[widx][1] + basis[j][1])
                        col[mon_index[s]] += 2 * Vf[j, l]
                    J[:, widx * rank + l] = col
            J[:, nb * rank:] = p_shift.T
            step, *_ = np.linalg.lstsq(J, -r, rcond=None)
            Vf = Vf + step[: nb * rank].reshape(nb, rank)
            s1 = s1 + step[nb * rank:]
        if ok:
            return Vf @ Vf.T, s1
    return G, s1_coeffs


def _squares_from_eigpairs(eigpairs, basis):
    squares = []
    for lam, v in eigpairs:
        w = np.sqrt(lam) * v
        squares.append(BivarPoly({e: w[i] for i, e in enumerate(basis)}))
    return squares


def _reconstruction(squares, multiplier, p):
    out = BivarPoly()
    for s in squares:
        out = out + s * s
    if p is not None and not multiplier.is_zero():
        out = out + multiplier * p
    return out


def _gram_problem(q, k):
    """max t s.t. the Gram of q minus t*I is PSD, as an SdpProblem.

    Variables: upper-triangle Gram entries then t. The optimal t is >= 0
    exactly when q is SOS and is a continuous infeasibility margin otherwise.
    """
    basis = monomials_upto(k)
    nb = len(basis)
    pairs, Fg = _gram_blocks(nb)
    m = len(pairs) + 1  # gram entries + t
    F = np.zeros((m, nb, nb))
    F[: len(pairs)] = Fg
    F[-1] = -np.eye(nb)

    # coefficient matching: sum_{u+v=s} G_uv = q_s for every monomial s
    rows, rhs = [], []
    for s in monomials_upto(2 * k):
        row = np.zeros(m)
        for idx, (i, j) in enumerate(pairs):
            u, v = basis[i], basis[j]
            if (u[0] + v[0], u[1] + v[1]) == s:
                row[idx] = 1.0 if i == j else 2.0
        rows.append(row)
        rhs.append(q.coeff(*s))

    c = np.zeros(m)
    c[-1] = -1.0  # maximize t
    prob = SdpProblem(c=c, blocks=[SdpBlock(F0=np.zeros((nb, nb)), F=F)],
                      eq_A=np.array(rows), eq_b=np.array(rhs))
    return prob, pairs, basis


def sos_margin(q, k=2, settings=None):
    """Max-min-eigenvalue margin of the Gram search for q: nonnegative iff
    q is SOS at order k, continuously negative with the depth of failure."""
    if q.degree > 2 * k:
        raise ValueError("degree of q exceeds 2k")
    prob, _, _ = _gram_problem(q, k)
    sol = solve(prob, settings or SdpSettings())
    if sol.status != "Optimal":
        raise IndeterminateResult(f"SDP solve returned {sol.status}: {sol.message}")
    return float(sol.z[-1])


def sos_decompose(q, k, settings=None):
    """SOS decomposition of q over monomials of degree <= k.

    Returns an SosCertificate, or None when q is not a sum of squares.
    Raises IndeterminateResult if the SDP solve fails numerically.
    """
    if q.degree > 2 * k:
        raise ValueError("degree of q exceeds 2k")
    prob, pairs, basis = _gram_problem(q, k)
    nb = len(basis)
    sol = _solve_gram(prob, settings)
    if sol.status in ("Numerical", "MaxIter"):
        raise IndeterminateResult(f"SDP solve returned {sol.status}: {sol.message}")
    if sol.status != "Optimal":
        return None
    t = sol.z[-1]
    if t < -FEAS_MARGIN:
        return None
    G = np.zeros((nb, nb))
    for idx, (i, j) in enumerate(pairs):
        G[i, j] = G[j, i] = sol.z[idx]
    G, _ = _refine_lowrank(G, np.zeros(0), [], q, q, basis, k)
    eig = _gram_to_squares(G, tol=max(1e-7, 2 * abs(min(t, 0.0))))
    squares = _squares_from_eigpairs(eig, basis)
    zero = BivarPoly()
    recon = _reconstruction(squares, zero, None)
    residual = max(
        abs(recon.coeff(*s) - q.coeff(*s)) for s in monomials_upto(2 * k)
    )
    return SosCertificate(
        target=q, basis=basis, gram=G, multiplier=zero,
        squares=squares, residual=residual, margin=float(t),
    )


def certify_in_fk(f, p, k, settings=None):
    """Certificate that the affine function f lies in the order-k dual cone:
    f = s0 + s1*p with s0 SOS of degree <= 2k and deg s1 <= 2(k-2).

    Returns an SosCertificate (multiplier = s1) or None when infeasible.
    """
    if k < 2:
        raise ValueError("order must be >= 2")
    if not isinstance(f, SupportLine):
        f = SupportLine(tuple(f))
    target = f.affine_poly()
    basis = monomials_upto(k)
    nb = len(basis)
    s1_basis = monomials_upto(2 * (k - 2))
    pairs, Fg = _gram_blocks(nb)
    ng, ns = len(pairs), len(s1_basis)
    m = ng + ns + 1  # gram, s1 coefficients, t
    F = np.zeros((m, nb, nb))
    F[:ng] = Fg
    F[-1] = -np.eye(nb)

    rows, rhs = [], []
    for s in monomials_upto(2 * k):
        row = np.zeros(m)
        for idx, (i, j) in enumerate(pairs):
            u, v = basis[i], basis[j]
            if (u[0] + v[0], u[1] + v[1]) == s:
                row[idx] = 1.0 if i == j else 2.0
        for idx, g in enumerate(s1_basis):
            d = (s[0] - g[0], s[1] - g[1])
            if d[0] >= 0 and d[1] >= 0:
                row[ng + idx] += p.coeff(*d)
        rows.append(row)
        rhs.append(target.coeff(*s))

    c = np.zeros(m)
    c[-1] = -1.0
    prob = SdpProblem(c=c, blocks=[SdpBlock(F0=np.zeros((nb, nb)), F=F)],
                      eq_A=np.array(rows), eq_b=np.array(rhs))
    sol = _solve_gram(prob, settings)
    if sol.status in ("Numerical", "MaxIter"):
        raise IndeterminateResult(f"SDP solve returned {sol.status}: {sol.message}")
    if sol.status != "Optimal" or sol.z[-1] < -FEAS_MARGIN:
        return None
    G = np.zeros((nb, nb))
    for idx, (i, j) in enumerate(pairs):
        G[i, j] = G[j, i] = sol.z[idx]
    s1_vec = sol.z[ng:ng + ns].copy()
    G, s1_vec = _refine_lowrank(G, s1_vec, s1_basis, p, target, basis, k)
    s1 = BivarPoly({g: s1_vec[i] for i, g in enumerate(s1_basis)})
    eig = _gram_to_squares(G, tol=max(1e-7, 2 * abs(min(sol.z[-1], 0.0))))
    squares = _squares_from_eigpairs(eig, basis)
    recon = _reconstruction(squares, s1, p)
    residual = max(
        abs(recon.coeff(*s) - target.coeff(*s)) for s in monomials_upto(2 * k)
    )
    return SosCertificate(
        target=target, basis=basis, gram=G, multiplier=s1,
        squares=squares, residual=residual, margin=float(sol.z[-1]),
    )


def nonneg_quartic(q, settings=None):
    """Nonnegativity of a bivariate polynomial of degree <= 4 (exact: such
    polynomials are nonnegative iff SOS)."""
    if q.degree > 4:
        raise ValueError("degree must be <= 4")
    return sos_decompose(q, 2, settings=settings) is not None
