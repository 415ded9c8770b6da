"""Upper-bound witness search: multi-start alternating nonnegative least
squares in floating point, followed by exact rational reconstruction.

Float arithmetic never certifies anything here.  A numeric solution with
infinity-norm residual below epsilon only *gates* the exact phase: freeze the
support pattern it suggests, round one side to small rationals (continued
fractions), solve the other side as exact nonnegative linear systems, and keep
the result only if the outer products sum to the target bit-exactly.  Numeric
successes whose reconstruction fails are logged and discarded.

Absence of a witness after the restart budget proves nothing; callers must
treat it as "not found", never as infeasibility.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.optimize import nnls

from ..ratmat import RatMatrix, solve_consistent
from .config import SearchConfig
from .decomp import Decomposition, decomposition_from_factors, verify_decomposition


@dataclass(frozen=True)
class NmfSearchResult:
    witness: Optional[Decomposition]
    numeric_hits: int
    restarts_run: int
    log: str


def _anls_restart(mf: np.ndarray, r: int, seed_key: tuple[int, int],
                  iters: int, epsilon: float) -> tuple[float, np.ndarray, np.ndarray, int]:
    """One alternating-NNLS run from a random start; returns the best
    infinity-norm residual reached, the factors, and iterations used."""
    m, n = mf.shape
    rng = np.random.default_rng(seed_key)
    scale = max(mf.max(initial=0.0), 1.0)
    u = rng.uniform(0.0, scale, size=(m, r))
    w = np.zeros((r, n))
    best = np.inf
    stalled = 0
    it = 0
    for it in range(1, iters + 1):
        for j in range(n):
            w[:, j] = nnls(u, mf[:, j])[0]
        for i in range(m):
            u[i, :] = nnls(w.T, mf[i, :])[0]
        resid = float(np.abs(mf - u @ w).max())
        if resid <= epsilon:
            return resid, u, w, it
        if resid >= best - 1e-13 * max(best, 1.0):
            stalled += 1
            if stalled >= 5:
                break
        else:
            stalled = 0
        best = min(best, resid)
    return min(best, float(np.abs(mf - u @ w).max())), u, w, it


def _rationalize(values, den_bound: int) -> list[Fraction]:
    return [Fraction(float(v)).limit_denominator(den_bound) for v in values]


def _solve_side(basis: list[list[Fraction]], target_vecs: list[list[Fraction]],
                supports: list[list[int]], r: int) -> Optional[list[list[Fraction]]]:
    """For each target vector, solve sum_l x_l * basis[l] = vec exactly with x
    restricted to the numeric support (retrying unrestricted), x >= 0."""
    out = []
    full = list(range(r))
    for vec, supp in zip(target_vecs, supports):
        x = None
        if supp:
            sol = solve_consistent([basis[l] for l in supp], vec)
            if sol is not None and all(v >= 0 for v in sol):
                x = [Fraction(0)] * r
                for l, v in zip(supp, sol):
                    x[l] = v
        if x is None and supp != full:
            sol = solve_consistent([basis[l] for l in full], vec)
            if sol is not None and all(v >= 0 for v in sol):
                x = list(sol)
        if x is None:
            return None
        out.append(x)
    return out


def _exact_lift(mat: RatMatrix, uf: np.ndarray, wf: np.ndarray,
                config: SearchConfig) -> tuple[Optional[Decomposition], str]:
    """Try to turn a numeric factorization into an exact one."""
    m, n = mat.shape
    r = uf.shape[1]
    uf = uf.copy()
    wf = wf.copy()
    # canonical scaling, max of each u column is 1: numeric entries snap to
    # nicer rationals
    for l in range(r):
        s = uf[:, l].max()
        if s > 0:
            uf[:, l] /= s
            wf[l, :] *= s
    tol = config.support_tol * max(1.0, float(np.abs(uf).max()), float(np.abs(wf).max()))
    u_supp = [[l for l in range(r) if uf[i, l] > tol] for i in range(m)]
    w_supp = [[l for l in range(r) if wf[l, j] > tol] for j in range(n)]

    # side 1: rationalize U, solve the columns of W exactly
    u_rat = [_rationalize(uf[:, l], config.den_bound) for l in range(r)]
    cols = [list(mat.col(j)) for j in range(n)]
    w_cols = _solve_side(u_rat, cols, w_supp, r)
    if w_cols is not None:
        pairs = [(tuple(u_rat[l]), tuple(w_cols[j][l] for j in range(n))) for l in range(r)]
        dec = decomposition_from_factors(pairs, m, n)
        if verify_decomposition(dec, mat):
            return dec, "exact lift via rationalized left factor"
    # side 2: rationalize W, solve the rows of U exactly
    w_rat = [_rationalize(wf[l, :], config.den_bound) for l in range(r)]
    rows = [list(mat.row(i)) for i in range(m)]
    u_rows = _solve_side(w_rat, rows, u_supp, r)
    if u_rows is not None:
        pairs = [(tuple(u_rows[i][l] for i in range(m)), tuple(w_rat[l])) for l in range(r)]
        dec = decomposition_from_factors(pairs, m, n)
        if verify_decomposition(dec, mat):
            return dec, "exact lift via rationalized right factor"
    return None, "rationalization failed on both sides"


def exact_nmf_search(mat: RatMatrix, r: int,
                     config: SearchConfig = SearchConfig()) -> NmfSearchResult:
    """Search for an exact nonnegative factorization with at most r factors.

    Deterministic for a fixed config: restart k draws from the PRNG keyed
    (seed, k), and with several workers (XCLAB_THREADS) the first success in
    restart order wins.
    """
    if not mat.is_nonnegative():
        raise ValueError("matrix must be nonnegative")
    m, n = mat.shape
    lines = [f"nmf: target {m}x{n}, r={r}, seed={config.seed}, "
             f"restarts={config.restarts}, iters={config.iters}, eps={config.epsilon:g}"]
    if mat.is_zero():
        dec = Decomposition((), m, n)
        lines.append("nmf: target is zero, empty decomposition")
        return NmfSearchResult(dec, 0, 0, "\n".join(lines) + "\n")
    if r == 0:
        lines.append("nmf: r=0 but target is nonzero, no witness")
        return NmfSearchResult(None, 0, 0, "\n".join(lines) + "\n")

    mf = np.array(mat.to_float_rows(), dtype=float)
    numeric_hits = 0
    witness = None
    ran = 0

    def run(k: int):
        return _anls_restart(mf, r, (config.seed, k), config.iters, config.epsilon)

    threads = config.threads
    for chunk_start in range(0, config.restarts, max(threads, 1)):
        chunk = list(range(chunk_start, min(chunk_start + max(threads, 1), config.restarts)))
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(run, chunk))
        else:
            results = [run(k) for k in chunk]
        for k, (resid, uf, wf, iters_used) in zip(chunk, results):
            ran += 1
            if resid <= config.epsilon:
                numeric_hits += 1
                dec, why = _exact_lift(mat, uf, wf, config)
                lines.append(f"nmf: restart {k}: numeric success "
                             f"(resid {resid:.2e}, {iters_used} iters); {why}")
                if dec is not None:
                    witness = dec
                    break
            else:
                lines.append(f"nmf: restart {k}: stalled at resid {resid:.2e} "
                             f"after {iters_used} iters")
        if witness is not None:
            break

    if witness is None:
        lines.append(f"nmf: no exact witness after {ran} restarts "
                     f"({numeric_hits} numeric-only successes); not a proof of infeasibility")
    else:
        lines.append(f"nmf: exact witness with {len(witness)} factors")
    return NmfSearchResult(witness, numeric_hits, ran, "\n".join(lines) + "\n")
