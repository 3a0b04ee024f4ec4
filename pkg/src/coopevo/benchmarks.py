"""Shifted/rotated additively separable benchmark functions.

The suite mirrors the classic large-scale benchmark layout: a pool of base
functions is composed into 18 test functions whose variables are split into
known separable and rotated nonseparable groups, so optimizers with a
decomposition stage can be tested against the ground-truth structure.
Shift vectors and rotation matrices are synthesized from a seed instead of
being loaded from external data files, which keeps every run reproducible
from the seed alone.
"""

from __future__ import annotations

import json
import math
import zlib
from dataclasses import dataclass

import numpy as np

SEPARABLE = "separable-singleton-block"
NONSEPARABLE = "nonseparable-rotated"

# conventional box per base function
BASE_BOUNDS = {
    "sphere": (-100.0, 100.0),
    "elliptic": (-100.0, 100.0),
    "rastrigin": (-5.0, 5.0),
    "ackley": (-32.0, 32.0),
    "schwefel12": (-100.0, 100.0),
    "rosenbrock": (-100.0, 100.0),
}


def sphere(z: np.ndarray) -> float:
    return float(np.dot(z, z))


def elliptic(z: np.ndarray) -> float:
    """Sum of squares with coefficients 10^(6*i/(s-1)), i = 0..s-1."""
    s = z.size
    if s == 1:
        return float(z[0] * z[0])
    coef = 10.0 ** (6.0 * np.arange(s) / (s - 1))
    return float(np.dot(coef, z * z))


def rastrigin(z: np.ndarray) -> float:
    return float(np.sum(z * z - 10.0 * np.cos(2.0 * np.pi * z) + 10.0))


def ackley(z: np.ndarray) -> float:
    s = z.size
    term1 = -20.0 * math.exp(-0.2 * math.sqrt(np.dot(z, z) / s))
    term2 = -math.exp(np.sum(np.cos(2.0 * np.pi * z)) / s)
    return float(term1 + term2 + 20.0 + math.e)


def schwefel12(z: np.ndarray) -> float:
    partial = np.cumsum(z)
    return float(np.dot(partial, partial))


def rosenbrock(z: np.ndarray) -> float:
    # optimum moved to z = 0 (y = z + 1 is the classic parameterization)
    y = z + 1.0
    return float(np.sum(100.0 * (y[:-1] ** 2 - y[1:]) ** 2 + (y[:-1] - 1.0) ** 2))


BASES = {
    "sphere": sphere,
    "elliptic": elliptic,
    "rastrigin": rastrigin,
    "ackley": ackley,
    "schwefel12": schwefel12,
    "rosenbrock": rosenbrock,
}


@dataclass(frozen=True)
class SeparabilityStructure:
    """Ground-truth variable grouping of a benchmark function.

    ``groups`` partitions the 0-based variable indices; ``group_kind[k]``
    is SEPARABLE (additive down to single variables) or NONSEPARABLE
    (the group is rotated and must be treated as one block).
    """

    groups: tuple[tuple[int, ...], ...]
    group_kind: tuple[str, ...]

    def __post_init__(self):
        if len(self.groups) != len(self.group_kind):
            raise ValueError("groups and group_kind length mismatch")
        seen: set[int] = set()
        for grp in self.groups:
            if not grp:
                raise ValueError("empty group")
            if seen & set(grp):
                raise ValueError("groups are not disjoint")
            seen |= set(grp)
        n = max(seen) + 1
        if seen != set(range(n)):
            raise ValueError("groups do not cover 0..n-1")
        for kind in self.group_kind:
            if kind not in (SEPARABLE, NONSEPARABLE):
                raise ValueError(f"unknown group kind {kind!r}")

    @property
    def n(self) -> int:
        return sum(len(g) for g in self.groups)

    def separable_indices(self) -> list[int]:
        """All variables in separable groups, ascending."""
        out: list[int] = []
        for grp, kind in zip(self.groups, self.group_kind):
            if kind == SEPARABLE:
                out.extend(grp)
        return sorted(out)

    def nonseparable_groups(self) -> list[tuple[int, ...]]:
        return [g for g, k in zip(self.groups, self.group_kind) if k == NONSEPARABLE]


@dataclass(frozen=True)
class BenchmarkFunction:
    """A fixed, immutable test function f(x) = sum of per-group terms.

    Each group applies its base function to shifted (and, for nonseparable
    groups, rotated) coordinates, scaled by a per-group weight. Evaluation
    is pure: the same x always yields the same value.
    """

    fid: str
    n: int
    lower: np.ndarray
    upper: np.ndarray
    shift: np.ndarray
    rotations: tuple[np.ndarray, ...]
    structure: SeparabilityStructure
    bases: tuple[str, ...]
    weights: tuple[float, ...]
    seed: int

    def __post_init__(self):
        if self.structure.n != self.n:
            raise ValueError("structure does not cover dimension n")
        if len(self.bases) != len(self.structure.groups):
            raise ValueError("one base per group required")
        if len(self.weights) != len(self.structure.groups):
            raise ValueError("one weight per group required")
        if self.lower.shape != (self.n,) or self.upper.shape != (self.n,):
            raise ValueError("bounds must have shape (n,)")
        if not (np.all(self.shift > self.lower) and np.all(self.shift < self.upper)):
            raise ValueError("shift must lie strictly inside bounds")
        rot_iter = iter(self.rotations)
        for grp, kind in zip(self.structure.groups, self.structure.group_kind):
            if kind == NONSEPARABLE:
                rot = next(rot_iter, None)
                if rot is None:
                    raise ValueError("missing rotation for nonseparable group")
                m = len(grp)
                if rot.shape != (m, m):
                    raise ValueError("rotation shape does not match group size")
                err = np.max(np.abs(rot.T @ rot - np.eye(m)))
                if err > 1e-10:
                    raise ValueError(f"rotation not orthogonal (err={err:.2e})")
        if next(rot_iter, None) is not None:
            raise ValueError("more rotations than nonseparable groups")

    def __call__(self, x: np.ndarray) -> float:
        return self.evaluate(x)

    def evaluate(self, x: np.ndarray) -> float:
        """Full fitness: sum of all group terms."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"expected vector of length {self.n}, got shape {x.shape}")
        return sum(self.partial_fitness(x, g) for g in range(len(self.structure.groups)))

    def partial_fitness(self, x: np.ndarray, g: int) -> float:
        """Contribution of group ``g`` alone."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"expected vector of length {self.n}, got shape {x.shape}")
        if not 0 <= g < len(self.structure.groups):
            raise ValueError(f"group index {g} out of range")
        idx = np.asarray(self.structure.groups[g], dtype=int)
        z = x[idx] - self.shift[idx]
        if self.structure.group_kind[g] == NONSEPARABLE:
            rot = self._rotation_for(g)
            z = rot @ z
        return self.weights[g] * BASES[self.bases[g]](z)

    def _rotation_for(self, g: int) -> np.ndarray:
        pos = sum(
            1
            for k in range(g)
            if self.structure.group_kind[k] == NONSEPARABLE
        )
        return self.rotations[pos]

    def manifest(self) -> dict:
        """Auditable description of the function (no large matrices)."""
        return {
            "id": self.fid,
            "n": self.n,
            "seed": self.seed,
            "groups": [
                {
                    "kind": kind,
                    "base": base,
                    "weight": weight,
                    "size": len(grp),
                    "indices": list(map(int, grp)),
                }
                for grp, kind, base, weight in zip(
                    self.structure.groups,
                    self.structure.group_kind,
                    self.bases,
                    self.weights,
                )
            ],
            "bounds": {
                "lower": self.lower.tolist(),
                "upper": self.upper.tolist(),
            },
        }


def _synth_shift(rng: np.random.Generator, lower, upper) -> np.ndarray:
    # middle 80% of the box, so the optimum never sits on a bound
    span = upper - lower
    return rng.uniform(lower + 0.1 * span, upper - 0.1 * span)


def _synth_rotation(rng: np.random.Generator, m: int) -> np.ndarray:
    q, _ = np.linalg.qr(rng.standard_normal((m, m)))
    return q


# layout of the 18-function suite: (separable base, nonseparable base,
# number of rotated groups, weight on each rotated group). A group count of
# -1 means "all variables", i.e. a fully separable function.
_SUITE_LAYOUT = [
    ("f01", "elliptic", None, 0, 1.0),
    ("f02", "rastrigin", None, 0, 1.0),
    ("f03", "ackley", None, 0, 1.0),
    ("f04", "elliptic", "elliptic", 1, 1e6),
    ("f05", "rastrigin", "rastrigin", 1, 1e6),
    ("f06", "ackley", "ackley", 1, 1e6),
    ("f07", "sphere", "schwefel12", 1, 1e6),
    ("f08", "sphere", "rosenbrock", 1, 1e6),
    ("f09", "elliptic", "elliptic", 10, 1.0),
    ("f10", "rastrigin", "rastrigin", 10, 1.0),
    ("f11", "ackley", "ackley", 10, 1.0),
    ("f12", "sphere", "schwefel12", 10, 1.0),
    ("f13", "sphere", "rosenbrock", 10, 1.0),
    ("f14", None, "elliptic", 20, 1.0),
    ("f15", None, "rastrigin", 20, 1.0),
    ("f16", None, "ackley", 20, 1.0),
    ("f17", None, "schwefel12", 20, 1.0),
    ("f18", None, "rosenbrock", 20, 1.0),
]


def build_function(
    fid: str,
    dim: int,
    seed: int,
    sep_base: str | None,
    nonsep_base: str | None,
    n_groups: int,
    group_size: int,
    group_weight: float = 1.0,
) -> BenchmarkFunction:
    """Assemble one function: ``n_groups`` rotated blocks of ``group_size``
    variables drawn from a seeded permutation, remaining variables in one
    separable block. Pass ``n_groups=0`` for a fully separable function."""
    if n_groups * group_size > dim:
        raise ValueError("rotated groups exceed dimension")
    if n_groups > 0 and nonsep_base is None:
        raise ValueError("nonseparable base required")
    if n_groups * group_size < dim and sep_base is None:
        raise ValueError("separable base required")

    rng = np.random.default_rng(np.random.SeedSequence([seed, zlib.crc32(fid.encode())]))
    perm = rng.permutation(dim)

    groups: list[tuple[int, ...]] = []
    kinds: list[str] = []
    bases: list[str] = []
    weights: list[float] = []
    rotations: list[np.ndarray] = []

    lower = np.empty(dim)
    upper = np.empty(dim)

    sep_idx = np.sort(perm[n_groups * group_size:])
    if sep_idx.size:
        groups.append(tuple(int(i) for i in sep_idx))
        kinds.append(SEPARABLE)
        bases.append(sep_base)
        weights.append(1.0)
        lo, hi = BASE_BOUNDS[sep_base]
        lower[sep_idx] = lo
        upper[sep_idx] = hi
    for k in range(n_groups):
        idx = perm[k * group_size:(k + 1) * group_size]
        groups.append(tuple(int(i) for i in idx))
        kinds.append(NONSEPARABLE)
        bases.append(nonsep_base)
        weights.append(group_weight)
        rotations.append(_synth_rotation(rng, group_size))
        lo, hi = BASE_BOUNDS[nonsep_base]
        lower[idx] = lo
        upper[idx] = hi

    shift = _synth_shift(rng, lower, upper)
    fn = BenchmarkFunction(
        fid=fid,
        n=dim,
        lower=lower,
        upper=upper,
        shift=shift,
        rotations=tuple(rotations),
        structure=SeparabilityStructure(tuple(groups), tuple(kinds)),
        bases=tuple(bases),
        weights=tuple(weights),
        seed=seed,
    )
    opt = fn(shift)
    if abs(opt) > 1e-9:
        raise AssertionError(f"{fid}: f(shift) = {opt!r}, expected 0")
    return fn


def make_separable(base: str, dim: int, seed: int, fid: str | None = None) -> BenchmarkFunction:
    """Fully separable single-base function (handy for small experiments)."""
    return build_function(fid or f"{base}-{dim}d", dim, seed, base, None, 0, 0)


def make_suite(dim: int, seed: int) -> list[BenchmarkFunction]:
    """The 18-function suite scaled to ``dim``.

    Rotated groups have size dim/20 so the 20-group members exactly tile the
    space; at dim=1000 that reproduces the reference layout of 50-variable
    nonseparable blocks.
    """
    if dim < 20 or dim % 20 != 0:
        raise ValueError("dim must be a positive multiple of 20")
    group_size = dim // 20
    suite = []
    for fid, sep_base, nonsep_base, n_groups, weight in _SUITE_LAYOUT:
        suite.append(
            build_function(fid, dim, seed, sep_base, nonsep_base, n_groups, group_size, weight)
        )
    return suite


def get_function(fid: str, dim: int, seed: int) -> BenchmarkFunction:
    """Build a single suite member by id ('f01' .. 'f18')."""
    for layout in _SUITE_LAYOUT:
        if layout[0] == fid:
            _, sep_base, nonsep_base, n_groups, weight = layout
            if dim < 20 or dim % 20 != 0:
                raise ValueError("dim must be a positive multiple of 20")
            return build_function(fid, dim, seed, sep_base, nonsep_base, n_groups, dim // 20, weight)
    raise ValueError(f"unknown function id {fid!r}")


def suite_manifest(suite: list[BenchmarkFunction]) -> str:
    """JSON manifest for a whole suite (auditable record of a run's inputs)."""
    return json.dumps([fn.manifest() for fn in suite], indent=2)
