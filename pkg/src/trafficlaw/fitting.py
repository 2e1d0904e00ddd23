"""Least-squares fits of the Sarnoff, Odlyzko, Metcalfe and cube forms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .theory import LawKind

BASES = {
    LawKind.SARNOFF: (("n", lambda n: n), ("1", np.ones_like)),
    LawKind.ODLYZKO: (("n ln n", lambda n: n * np.log(n)), ("n", lambda n: n), ("1", np.ones_like)),
    LawKind.METCALFE: (("n^2", lambda n: n**2), ("n", lambda n: n), ("1", np.ones_like)),
    LawKind.CUBE: (("n^3", lambda n: n**3), ("n^2", lambda n: n**2), ("n", lambda n: n), ("1", np.ones_like)),
}

FIT_ORDER = (LawKind.SARNOFF, LawKind.ODLYZKO, LawKind.METCALFE, LawKind.CUBE)


@dataclass(frozen=True)
class FitModel:
    law: LawKind
    basis: tuple[str, ...]
    coefficients: tuple[float, ...]
    r_squared: float
    rmse: float
    adj_r_squared: float
    n_points: int

    def predict(self, n):
        n = np.asarray(n, dtype=float)
        return design_matrix(n, self.law) @ np.asarray(self.coefficients)

    def formula(self) -> str:
        terms = [f"{c:.6g}*{b}" if b != "1" else f"{c:.6g}" for c, b in zip(self.coefficients, self.basis)]
        return " + ".join(terms)


def design_matrix(n, law: LawKind) -> np.ndarray:
    if law not in BASES:
        raise ValueError(f"no fitting basis for {law}")
    n = np.asarray(n, dtype=float)
    return np.column_stack([f(n) for _, f in BASES[law]])


def _points(points):
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        return np.empty(0), np.empty(0)
    arr = arr.reshape(-1, 2)
    return arr[:, 0], arr[:, 1]


def fit(points, law: LawKind) -> FitModel:
    """Normal equations on max-abs scaled columns, one refinement step."""
    if law not in BASES:
        raise ValueError(f"no fitting basis for {law}")
    n, y = _points(points)
    p = len(BASES[law])
    if len(np.unique(n)) < p:
        raise ValueError("underdetermined fit")
    if law is LawKind.ODLYZKO and np.any(n < 2):
        raise ValueError("n ln n basis needs n >= 2")
    B = design_matrix(n, law)
    scale = np.max(np.abs(B), axis=0)
    scale[scale == 0] = 1.0
    Bs = B / scale
    gram = Bs.T @ Bs
    coef = np.linalg.solve(gram, Bs.T @ y)
    # iterative refinement pulls B^T r down to rounding level
    coef = coef + np.linalg.solve(gram, Bs.T @ (y - Bs @ coef))
    coef = coef / scale

    resid = y - B @ coef
    ssr = float(resid @ resid)
    sst = float(((y - y.mean()) ** 2).sum())
    m = len(y)
    r2 = 1.0 - ssr / sst if sst > 0 else (1.0 if ssr == 0 else -math.inf)
    dof = m - p
    adj = 1.0 - (1.0 - r2) * (m - 1) / dof if dof > 0 else float("nan")
    return FitModel(
        law=law,
        basis=tuple(name for name, _ in BASES[law]),
        coefficients=tuple(float(c) for c in coef),
        r_squared=float(r2),
        rmse=math.sqrt(ssr / m),
        adj_r_squared=float(adj),
        n_points=m,
    )


def residual_orthogonality(model: FitModel, points) -> float:
    """``||B^T r|| / ||B^T y||`` for a fitted model."""
    n, y = _points(points)
    B = design_matrix(n, model.law)
    scale = np.max(np.abs(B), axis=0)
    Bs = B / scale
    r = y - B @ np.asarray(model.coefficients)
    return float(np.linalg.norm(Bs.T @ r) / np.linalg.norm(Bs.T @ y))


def rank_models(points) -> list[FitModel]:
    """All four fits, best adjusted R² first; near-ties go to the smaller basis."""
    n, _ = _points(points)
    if len(np.unique(n)) <= len(BASES[LawKind.CUBE]):
        raise ValueError("underdetermined fit")
    models = [fit(points, law) for law in FIT_ORDER]
    return sorted(models, key=lambda m: (-round(m.adj_r_squared, 12), len(m.basis)))
