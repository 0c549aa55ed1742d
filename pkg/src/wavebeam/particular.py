"""Corner function and the interior double-Fourier correction.

The composite representation splits phi into boundary layers (homogeneous.py),
a corner term phi3 = x1 x2 / (4 a b) carried by three amplitudes
q3 = (q3u, q3v, q3w), and an interior double cosine/sine series

    phi0_c = sum_{m,n} lam_mn [ V1 cos cos + V2 sin cos + V3 cos sin
                                + V4 sin sin ](alpha_m x1, beta_n x2),

with lam_mn = 1/4, 1/2, 1 depending on how many of (m, n) vanish.  The corner
term does not solve the modal PDE; the interior coefficients are chosen so
the residual cancels mode by mode:  projecting

    L(phi0) = -L(phi3 q3)

onto each retained Fourier product decouples into tiny linear cells (3x3 at
most) whose right-hand sides are known in closed form.  The interior field is
therefore a fixed linear map of q3, assembled here as three evaluable
columns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InternalResonanceError, InvalidParameterError
from .model import CrossSection, Material, WaveState

#: Relative condition ceiling for the coupling cells.
CELL_COND_LIMIT = 1e13


def corner_eval(x1: np.ndarray, x2: np.ndarray, order: tuple[int, int],
                cs: CrossSection) -> np.ndarray:
    """Derivatives of the corner profile x1 x2 / (4 a b)."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    k1, k2 = order
    if k1 < 0 or k2 < 0:
        raise InvalidParameterError(f"derivative orders must be >= 0, got {order}")
    denom = 4.0 * cs.a * cs.b
    if k1 == 0 and k2 == 0:
        return x1 * x2 / denom
    if k1 == 1 and k2 == 0:
        return x2 / denom
    if k1 == 0 and k2 == 1:
        return x1 / denom
    if k1 == 1 and k2 == 1:
        return np.full(np.broadcast(x1, x2).shape, 1.0 / denom)
    return np.zeros(np.broadcast(x1, x2).shape)


def lambda_weights(M: int, N: int) -> np.ndarray:
    """(M+1, N+1) expansion weights: 1/4 at (0,0), 1/2 on the axes, 1 inside."""
    lam = np.ones((M + 1, N + 1))
    lam[0, :] = 0.5
    lam[:, 0] = 0.5
    lam[0, 0] = 0.25
    return lam


@dataclass
class InternalCoupling:
    """Interior Fourier coefficients as a linear map of q3.

    V has shape (4, 3, M+1, N+1, 3): trig kind (cc, sc, cs, ss), displacement
    component (u, v, w), Fourier indices, and the q3 column the coefficient
    multiplies.  lam carries the expansion weights.
    """

    M: int
    N: int
    V: np.ndarray
    lam: np.ndarray
    alphas: np.ndarray
    betas: np.ndarray


def solve_internal_coefficients(M: int, N: int, state: WaveState, mat: Material,
                                cs: CrossSection) -> InternalCoupling:
    """Solve every projection cell and collect the coefficient tables."""
    if M < 1 or N < 1:
        raise InvalidParameterError(f"interior truncation needs M, N >= 1, got {M}, {N}")
    lam_c, mu = mat.lam, mat.mu
    P = lam_c + 2.0 * mu
    Q = lam_c + mu
    k = state.k
    rw2 = mat.rho * state.omega ** 2
    cmu = rw2 - mu * k * k
    cP = rw2 - P * k * k
    a, b = cs.a, cs.b

    alphas = np.arange(M + 1) * math.pi / a
    betas = np.arange(N + 1) * math.pi / b
    V = np.zeros((4, 3, M + 1, N + 1, 3))

    def check_scalar(coef: float, where: tuple[int, int]) -> None:
        scale = rw2 + P * (k * k + alphas[where[0]] ** 2 + betas[where[1]] ** 2)
        if abs(coef) <= scale / CELL_COND_LIMIT:
            raise InternalResonanceError(
                f"interior cell ({where[0]}, {where[1]}) is singular",
                m=where[0], n=where[1])

    def check_cond(mats: np.ndarray, ms: np.ndarray, ns: np.ndarray) -> None:
        conds = np.linalg.cond(mats)
        bad = ~np.isfinite(conds) | (conds > CELL_COND_LIMIT)
        if np.any(bad):
            idx = np.argwhere(bad)[0]
            raise InternalResonanceError(
                f"interior cell ({int(ms[tuple(idx)])}, {int(ns[tuple(idx)])}) "
                f"is singular (cond = {conds[tuple(idx)]:.3e})",
                m=int(ms[tuple(idx)]), n=int(ns[tuple(idx)]))

    # --- (0, 0): constant mode -------------------------------------------
    check_scalar(cmu, (0, 0))
    check_scalar(cP, (0, 0))
    V[0, 0, 0, 0, 1] = -Q / (a * b * cmu)   # u, cc <- q3v
    V[0, 1, 0, 0, 0] = -Q / (a * b * cmu)   # v, cc <- q3u
    # w stays zero: its equation is cP * V = 0.

    # --- (m, 0), m >= 1 ---------------------------------------------------
    if M >= 1:
        al = alphas[1:]
        ms = np.arange(1, M + 1)
        sign_m = np.where(ms % 2 == 0, 1.0, -1.0)  # (-1)^m
        # (V1u, V2w) driven by q3v
        mats = np.zeros((M, 2, 2))
        mats[:, 0, 0] = -P * al ** 2 + cmu
        mats[:, 0, 1] = Q * k * al
        mats[:, 1, 0] = Q * k * al
        mats[:, 1, 1] = -mu * al ** 2 + cP
        check_cond(mats, ms, np.zeros(M, dtype=int))
        rhs = np.zeros((M, 2))
        rhs[:, 1] = Q * k * (-sign_m) / (b * ms * math.pi)  # (-1)^{m+1}
        sol = np.linalg.solve(mats, rhs[..., None])[..., 0]
        V[0, 0, 1:, 0, 1] = sol[:, 0]  # u, cc
        V[1, 2, 1:, 0, 1] = sol[:, 1]  # w, sc
        # V2v driven by q3w
        coef = -mu * al ** 2 + cmu
        scale = rw2 + P * (k * k + al ** 2)
        bad = np.abs(coef) <= scale / CELL_COND_LIMIT
        if np.any(bad):
            mbad = int(ms[np.argmax(bad)])
            raise InternalResonanceError(
                f"interior cell ({mbad}, 0) is singular", m=mbad, n=0)
        V[1, 1, 1:, 0, 2] = Q * k * sign_m / (b * ms * math.pi) / coef  # v, sc
        # (V2u, V1w) and V1v are homogeneous: zero.

    # --- (0, n), n >= 1 ---------------------------------------------------
    if N >= 1:
        be = betas[1:]
        ns = np.arange(1, N + 1)
        sign_n = np.where(ns % 2 == 0, 1.0, -1.0)
        coef = -mu * be ** 2 + cmu
        scale = rw2 + P * (k * k + be ** 2)
        bad = np.abs(coef) <= scale / CELL_COND_LIMIT
        if np.any(bad):
            nbad = int(ns[np.argmax(bad)])
            raise InternalResonanceError(
                f"interior cell (0, {nbad}) is singular", m=0, n=nbad)
        V[2, 0, 0, 1:, 2] = Q * k * sign_n / (a * ns * math.pi) / coef  # u, cs
        # (V1v, V3w) driven by q3u
        mats = np.zeros((N, 2, 2))
        mats[:, 0, 0] = -P * be ** 2 + cmu
        mats[:, 0, 1] = Q * k * be
        mats[:, 1, 0] = Q * k * be
        mats[:, 1, 1] = -mu * be ** 2 + cP
        conds = np.linalg.cond(mats)
        bad = ~np.isfinite(conds) | (conds > CELL_COND_LIMIT)
        if np.any(bad):
            nbad = int(ns[np.argmax(bad)])
            raise InternalResonanceError(
                f"interior cell (0, {nbad}) is singular", m=0, n=nbad)
        rhs = np.zeros((N, 2))
        rhs[:, 1] = Q * k * (-sign_n) / (a * ns * math.pi)
        sol = np.linalg.solve(mats, rhs[..., None])[..., 0]
        V[0, 1, 0, 1:, 0] = sol[:, 0]  # v, cc
        V[2, 2, 0, 1:, 0] = sol[:, 1]  # w, cs

    # --- (m, n), both >= 1 ------------------------------------------------
    if M >= 1 and N >= 1:
        A, B = np.meshgrid(alphas[1:], betas[1:], indexing="ij")
        mg, ng = np.meshgrid(np.arange(1, M + 1), np.arange(1, N + 1),
                             indexing="ij")
        D1 = -P * A ** 2 - mu * B ** 2 + cmu
        D2 = -mu * A ** 2 - P * B ** 2 + cmu
        D3 = -mu * A ** 2 - mu * B ** 2 + cP
        QAB = Q * A * B
        QKA = Q * k * A
        QKB = Q * k * B
        s_mn = np.where((mg + ng) % 2 == 0, -1.0, 1.0) / (mg * ng * math.pi ** 2)

        def cell(sign_ab: float, sign_ka: float, sign_kb: float,
                 rhs_slot: int, rhs_vals: np.ndarray) -> np.ndarray:
            mats = np.empty((M, N, 3, 3))
            mats[..., 0, 0] = D1
            mats[..., 1, 1] = D2
            mats[..., 2, 2] = D3
            mats[..., 0, 1] = mats[..., 1, 0] = sign_ab * QAB
            mats[..., 0, 2] = mats[..., 2, 0] = sign_ka * QKA
            mats[..., 1, 2] = mats[..., 2, 1] = sign_kb * QKB
            check_cond(mats, mg, ng)
            rhs = np.zeros((M, N, 3))
            rhs[..., rhs_slot] = rhs_vals
            return np.linalg.solve(mats, rhs[..., None])[..., 0]

        # (V1u, V4v, V2w) <- q3v
        sol = cell(+1.0, +1.0, -1.0, 1, cmu * s_mn)
        V[0, 0, 1:, 1:, 1] = sol[..., 0]
        V[3, 1, 1:, 1:, 1] = sol[..., 1]
        V[1, 2, 1:, 1:, 1] = sol[..., 2]
        # (V3u, V2v, V4w) <- q3w
        sol = cell(-1.0, +1.0, +1.0, 2, cP * s_mn)
        V[2, 0, 1:, 1:, 2] = sol[..., 0]
        V[1, 1, 1:, 1:, 2] = sol[..., 1]
        V[3, 2, 1:, 1:, 2] = sol[..., 2]
        # (V4u, V1v, V3w) <- q3u
        sol = cell(+1.0, -1.0, +1.0, 0, cmu * s_mn)
        V[3, 0, 1:, 1:, 0] = sol[..., 0]
        V[0, 1, 1:, 1:, 0] = sol[..., 1]
        V[2, 2, 1:, 1:, 0] = sol[..., 2]
        # (V2u, V3v, V1w) is fully homogeneous; its cell must still be
        # regular for the decomposition to be valid.
        mats = np.empty((M, N, 3, 3))
        mats[..., 0, 0] = D1
        mats[..., 1, 1] = D2
        mats[..., 2, 2] = D3
        mats[..., 0, 1] = mats[..., 1, 0] = -QAB
        mats[..., 0, 2] = mats[..., 2, 0] = -QKA
        mats[..., 1, 2] = mats[..., 2, 1] = -QKB
        check_cond(mats, mg, ng)

    return InternalCoupling(M=M, N=N, V=V, lam=lambda_weights(M, N),
                            alphas=alphas, betas=betas)


class ParticularBlock:
    """The three corner columns (corner term plus interior correction)."""

    def __init__(self, coupling: InternalCoupling, cs: CrossSection):
        self.coupling = coupling
        self.cs = cs
        # Fold the expansion weights into the tables once.
        self._VL = coupling.V * coupling.lam[None, None, :, :, None]

    def eval(self, x1: np.ndarray, x2: np.ndarray, k1: int, k2: int) -> np.ndarray:
        """(npts, 3, 3): component rows x q3 columns, with (k1, k2) derivatives."""
        x1 = np.atleast_1d(np.asarray(x1, dtype=float))
        x2 = np.atleast_1d(np.asarray(x2, dtype=float))
        al = self.coupling.alphas
        be = self.coupling.betas
        pha = np.outer(x1, al) + k1 * 0.5 * math.pi
        phb = np.outer(x2, be) + k2 * 0.5 * math.pi
        fa = al ** k1
        fb = be ** k2
        CA = fa[None, :] * np.cos(pha)
        SA = fa[None, :] * np.sin(pha)
        CB = fb[None, :] * np.cos(phb)
        SB = fb[None, :] * np.sin(phb)

        out = np.empty((x1.size, 3, 3))
        trig1 = (CA, SA, CA, SA)
        trig2 = (CB, CB, SB, SB)
        for c in range(3):
            for j in range(3):
                acc = np.zeros(x1.size)
                for i in range(4):
                    tab = self._VL[i, c, :, :, j]
                    if not tab.any():
                        continue
                    acc += np.einsum("pm,mn,pn->p", trig1[i], tab, trig2[i])
                out[:, c, j] = acc
        corner = corner_eval(x1, x2, (k1, k2), self.cs)
        for c in range(3):
            out[:, c, c] += corner
        return out


def particular_block(coupling: InternalCoupling, cs: CrossSection) -> ParticularBlock:
    return ParticularBlock(coupling, cs)
