"""Exact radial wavefunctions as finite sums  coeff * r^p * K_q(beta r).

A :class:`BesselState` has one term list per radial component and a single
scale ``beta`` shared by every term. It is closed under d/dr and under
multiplication by Laurent-polynomial matrices in ``r``, which is all the
ladder operators and radial Hamiltonians need.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .besselk import besselk_scaled

# (p, q_twice) -> coeff
Terms = dict


@dataclass(frozen=True)
class Term:
    coeff: float
    p: float
    q_twice: int


@dataclass
class BesselState:
    beta: float
    components: list[Terms]
    norm: float | None = None

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        cleaned = []
        for comp in self.components:
            out = defaultdict(float)
            for (p, qt), c in comp.items():
                out[(float(p), abs(int(qt)))] += float(c)
            cleaned.append({k: v for k, v in out.items() if v != 0.0})
        self.components = cleaned

    @classmethod
    def from_terms(cls, beta: float, components: Sequence[Iterable[Term]], norm=None) -> "BesselState":
        comps = []
        for comp in components:
            d = defaultdict(float)
            for t in comp:
                d[(t.p, t.q_twice)] += t.coeff
            comps.append(dict(d))
        return cls(beta, comps, norm)

    @classmethod
    def zero(cls, beta: float, size: int) -> "BesselState":
        return cls(beta, [{} for _ in range(size)])

    @property
    def size(self) -> int:
        return len(self.components)

    def terms(self) -> list[list[Term]]:
        return [
            [Term(c, p, qt) for (p, qt), c in sorted(comp.items())]
            for comp in self.components
        ]

    def is_zero(self) -> bool:
        return all(not comp for comp in self.components)

    # -- linear structure -------------------------------------------------

    def _check_compatible(self, other: "BesselState"):
        if self.size != other.size:
            raise ValueError("component count mismatch")
        if not np.isclose(self.beta, other.beta, rtol=1e-14, atol=0.0):
            raise ValueError(f"beta mismatch: {self.beta} vs {other.beta}")

    def __add__(self, other: "BesselState") -> "BesselState":
        self._check_compatible(other)
        comps = []
        for a, b in zip(self.components, other.components):
            d = defaultdict(float, a)
            for k, v in b.items():
                d[k] += v
            comps.append(dict(d))
        return BesselState(self.beta, comps)

    def __neg__(self) -> "BesselState":
        return self.scaled(-1.0)

    def __sub__(self, other: "BesselState") -> "BesselState":
        return self + (-other)

    def scaled(self, factor: float) -> "BesselState":
        comps = [{k: factor * v for k, v in comp.items()} for comp in self.components]
        norm = None if self.norm is None else abs(factor) * self.norm
        return BesselState(self.beta, comps, norm)

    def permuted(self, order: Sequence[int]) -> "BesselState":
        return BesselState(self.beta, [dict(self.components[i]) for i in order], self.norm)

    # -- calculus -----------------------------------------------------------

    def derivative(self) -> "BesselState":
        """d/dr via K_q' = -(K_{q-1} + K_{q+1}) / 2."""
        b = self.beta
        comps = []
        for comp in self.components:
            d = defaultdict(float)
            for (p, qt), c in comp.items():
                if p != 0.0:
                    d[(p - 1.0, qt)] += c * p
                d[(p, abs(qt - 2))] += -0.5 * b * c
                d[(p, qt + 2)] += -0.5 * b * c
            comps.append(dict(d))
        return BesselState(b, comps)

    def multiply(self, laurent: Mapping[int, np.ndarray]) -> "BesselState":
        """Apply sum_k M_k r^k, where each M_k is a size x size matrix."""
        comps = [defaultdict(float) for _ in range(self.size)]
        for k, mat in laurent.items():
            mat = np.atleast_2d(np.asarray(mat, dtype=float))
            for i in range(self.size):
                for j in range(self.size):
                    mij = mat[i, j]
                    if mij == 0.0:
                        continue
                    for (p, qt), c in self.components[j].items():
                        comps[i][(p + k, qt)] += mij * c
        return BesselState(self.beta, [dict(c) for c in comps])

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, r) -> np.ndarray:
        """Values at ``r``; shape ``(size, len(r))``."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if np.any(r <= 0):
            raise ValueError("evaluate needs r > 0")
        x = self.beta * r
        orders = {qt for comp in self.components for (_, qt) in comp}
        kvals = {qt: besselk_scaled(qt, x) for qt in orders}
        with np.errstate(under="ignore"):
            damp = np.exp(-x)
        out = np.zeros((self.size, r.size))
        for i, comp in enumerate(self.components):
            acc = np.zeros(r.size)
            for (p, qt), c in comp.items():
                acc += c * r**p * kvals[qt]
            out[i] = acc * damp
        return out

    def __call__(self, r) -> np.ndarray:
        return self.evaluate(r)

    # -- canonical form -----------------------------------------------------

    def canonical(self, prune: float | None = 1e-13) -> "BesselState":
        """Fold every order onto {K_0, K_1} (integer) or {K_1/2} (half-integer).

        Uses K_q = K_{q-2} + (2 (q-1)/x) K_{q-1} and K_{-q} = K_q. After folding,
        r^p K_q terms are linearly independent, so a state is the zero function
        iff its canonical form is empty. Coefficients are compared in the
        dimensionless variable x = beta r; those below ``prune`` times the
        largest magnitude seen during folding are dropped.
        """
        b = self.beta
        comps = []
        scale = 0.0
        for comp in self.components:
            work = defaultdict(float)
            for (p, qt), c in comp.items():
                work[(p, qt)] += c
                scale = max(scale, abs(c) * b ** -p)
            while True:
                high = [key for key, c in work.items() if key[1] > _fold_limit(key[1]) and c != 0.0]
                if not high:
                    break
                qt_max = max(k[1] for k in high)
                for key in [k for k in high if k[1] == qt_max]:
                    p, qt = key
                    c = work.pop(key)
                    q = qt / 2.0
                    work[(p, abs(qt - 4))] += c
                    work[(p - 1.0, qt - 2)] += c * 2.0 * (q - 1.0) / b
                    scale = max(scale, abs(c) * b ** -p, abs(c * 2.0 * (q - 1.0) / b) * b ** (1.0 - p))
            comps.append(dict(work))
        out = BesselState(b, comps)
        if prune is not None and scale > 0:
            out = BesselState(
                b,
                [
                    {k: c for k, c in comp.items() if abs(c) * b ** -k[0] > prune * scale}
                    for comp in out.components
                ],
            )
        out._fold_scale = scale
        return out

    def max_dimensionless_coeff(self) -> float:
        b = self.beta
        vals = [abs(c) * b ** -p for comp in self.components for (p, _), c in comp.items()]
        return max(vals, default=0.0)

    # -- serialisation ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "beta": self.beta,
            "components": [
                [{"coeff": t.coeff, "p": t.p, "q_twice": t.q_twice} for t in comp]
                for comp in self.terms()
            ],
            "norm": self.norm,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "BesselState":
        comps = [
            {(float(t["p"]), int(t["q_twice"])): float(t["coeff"]) for t in comp}
            for comp in obj["components"]
        ]
        return cls(float(obj["beta"]), comps, obj.get("norm"))


def _fold_limit(q_twice: int) -> int:
    # highest order kept: K_1 for integer orders, K_1/2 for half-integer ones
    return 1 if q_twice % 2 else 2


def coefficient_residual(state: BesselState, reference: BesselState) -> float:
    """Largest surviving canonical coefficient of ``state`` relative to ``reference``."""
    canon = state.canonical(prune=None)
    ref = max(reference.max_dimensionless_coeff(), getattr(canon, "_fold_scale", 0.0))
    if ref == 0.0:
        return 0.0
    return canon.max_dimensionless_coeff() / ref
