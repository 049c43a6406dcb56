"""Translation operators T_{delta^l lambda} acting on finitely supported sequences.

``synthesize(c, g, l) = sum_lambda c(lambda) T_{delta^l lambda} g`` and its
adjoint ``analyze(z, g, l)(lambda) = <z, T_{delta^l lambda} g>``.  Both are
exact in the index domain; only the tap arithmetic is floating point, summed
in sorted index order.
"""

from __future__ import annotations

from .characters import Sequence
from .errors import OutOfLambdaError
from .lambda_indexing import LambdaIndex, LambdaLattice


def _cache(lattice: LambdaLattice, name: str) -> dict:
    return lattice.__dict__.setdefault(name, {})


def solve_shift(lattice: LambdaLattice, x: LambdaIndex, tau: LambdaIndex, level: int):
    c = _cache(lattice, "_solve_cache")
    key = (x, tau, level)
    if key not in c:
        c[key] = lattice.solve_shift(x, tau, level)
    return c[key]


def shift_index(lattice: LambdaLattice, tau: LambdaIndex, lam: LambdaIndex, level: int):
    c = _cache(lattice, "_shift_cache")
    key = (tau, lam, level)
    if key not in c:
        c[key] = lattice.shift_index(tau, lam, level)
    return c[key]


class DropCounter:
    """Counts taps dropped because a translate left Lambda."""

    def __init__(self, strict: bool = False):
        self.strict = strict
        self.dropped = 0

    def drop(self, tau, lam):
        if self.strict:
            raise OutOfLambdaError(f"translate of {tuple(tau)} by {tuple(lam)} leaves Lambda")
        self.dropped += 1


def synthesize(c: Sequence, g: Sequence, lattice: LambdaLattice, level: int,
               counter: DropCounter | None = None) -> Sequence:
    out: dict[LambdaIndex, complex] = {}
    for lam, cv in c:
        for tau, gv in g:
            idx = shift_index(lattice, tau, lam, level)
            if idx is None:
                (counter or DropCounter()).drop(tau, lam)
                continue
            out[idx] = out.get(idx, 0) + cv * gv
    return Sequence(out)


def analyze(z: Sequence, g: Sequence, lattice: LambdaLattice, level: int) -> Sequence:
    """lambda -> <z, T_{delta^level lambda} g> over every lambda with a nonzero value."""
    out: dict[LambdaIndex, complex] = {}
    for x, zv in z:
        for tau, gv in g:
            lam = solve_shift(lattice, x, tau, level)
            if lam is not None:
                out[lam] = out.get(lam, 0) + zv * gv.conjugate()
    return Sequence(out)


def translate(z: Sequence, lam: LambdaIndex, lattice: LambdaLattice, level: int = 1,
              counter: DropCounter | None = None) -> Sequence:
    """T_{delta^level lambda} z."""
    return synthesize(Sequence.delta(lam), z, lattice, level, counter)
