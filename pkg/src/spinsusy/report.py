"""Analytic versus finite-difference spectra, plus atomic JSON/CSV output."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .halfint import HalfInt
from .oracle import RadialGrid, discretize, eigenvector, lowest_eigenvalues, richardson
from .radial import RadialBlock
from .susy import eigenstate, energy, select_branch

CSV_COLUMNS = (
    "block",
    "kappa",
    "nu",
    "lambda_t",
    "n",
    "E_analytic",
    "E_oracle",
    "abs_err",
    "rel_err",
    "disc_err",
    "r_max",
    "n_points",
    "h",
)
TOLERANCE = 1e-3


@dataclass(frozen=True)
class LevelRow:
    n: int
    e_analytic: float
    e_oracle: float
    e_coarse: float
    e_fine: float

    @property
    def abs_err(self) -> float:
        return abs(self.e_oracle - self.e_analytic)

    @property
    def rel_err(self) -> float:
        return self.abs_err / abs(self.e_analytic)

    @property
    def disc_err(self) -> float:
        """|E(h) - E(h/2)|, the measured discretisation error at h."""
        return abs(self.e_coarse - self.e_fine)


@dataclass
class SpectrumReport:
    block: RadialBlock
    grid: RadialGrid
    levels: list[LevelRow] = field(default_factory=list)

    def __post_init__(self):
        e = [row.e_analytic for row in self.levels]
        if any(v >= 0 for v in e) or any(b <= a for a, b in zip(e, e[1:])):
            raise ValueError("analytic energies must be negative and strictly increasing")

    @property
    def max_rel_err(self) -> float:
        return max((row.rel_err for row in self.levels), default=0.0)

    def passed(self, tol: float = TOLERANCE) -> bool:
        return self.max_rel_err < tol

    def to_json(self) -> dict:
        return {
            "block": self.block.to_json(),
            "branch": select_branch(self.block).branch.value,
            "grid": self.grid.to_json(),
            "levels": [
                {
                    "n": row.n,
                    "E_analytic": row.e_analytic,
                    "E_oracle": row.e_oracle,
                    "E_h": row.e_coarse,
                    "E_h2": row.e_fine,
                    "abs_err": row.abs_err,
                    "rel_err": row.rel_err,
                }
                for row in self.levels
            ],
        }

    def csv_rows(self) -> list[list]:
        b, g = self.block, self.grid
        return [
            [
                b.label, str(b.kappa), str(b.nu), b.lambda_t, row.n, row.e_analytic, row.e_oracle,
                row.abs_err, row.rel_err, row.disc_err, g.r_max, g.n_points, g.h,
            ]
            for row in self.levels
        ]


@lru_cache(maxsize=512)
def _solve(kappa_twice: int, nu_twice: int, lambda_t: float, levels: int, r_max: float, n_points: int):
    block = RadialBlock(HalfInt(kappa_twice), HalfInt(nu_twice), lambda_t)
    grid = RadialGrid(r_max, n_points)
    coarse = lowest_eigenvalues(discretize(block, grid), levels)
    fine = lowest_eigenvalues(discretize(block, grid.refined()), levels)
    return tuple(coarse), tuple(fine)


def spectrum_report(block: RadialBlock, levels: int, grid: RadialGrid | None = None) -> SpectrumReport:
    """Richardson-extrapolated oracle levels at (grid, grid.refined()) against c_{j+n}."""
    if levels < 1:
        raise ValueError("levels must be at least 1")
    if grid is None:
        grid = RadialGrid.default(float(select_branch(block).j), levels, block.lambda_t)
    coarse, fine = _solve(block.kappa.twice, block.nu.twice, block.lambda_t, levels, grid.r_max, grid.n_points)
    rows = [
        LevelRow(n, energy(block, n), richardson(a, b), a, b) for n, (a, b) in enumerate(zip(coarse, fine))
    ]
    return SpectrumReport(block, grid, rows)


def ground_state_distance(block: RadialBlock, grid: RadialGrid | None = None) -> float:
    """L^2 distance between the oracle ground eigenvector and the normalised exact state."""
    if grid is None:
        grid = RadialGrid.default(float(select_branch(block).j), 1, block.lambda_t)
    H = discretize(block, grid)
    e0 = lowest_eigenvalues(H, 1)[0]
    u = eigenvector(H, e0)
    psi, _ = eigenstate(block, 0)
    ref = psi.evaluate(grid.points)
    if np.sum(u * ref) < 0:
        u = -u
    return float(math.sqrt(grid.h * np.sum((u - ref) ** 2)))


# -- output ------------------------------------------------------------------


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, shortest round-trip float repr."""
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def reports_to_csv(reports: list[SpectrumReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rep in reports:
        for row in rep.csv_rows():
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()
