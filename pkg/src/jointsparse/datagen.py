"""Seeded synthetic MMV instances.

Generator: numpy ``PCG64`` seeded with the instance seed. Variates are
consumed in this order:

1. ``M * N`` standard normals filling ``Phi`` row-major; each column is then
   divided by its Euclidean norm.
2. ``K`` uniform integer draws performing a partial Fisher-Yates shuffle of
   ``0 .. N-1``; the first `K` positions form the support.
3. ``K * J`` standard normals filling the support rows of ``S_true``
   row-major, in ascending row order.

``Y`` is computed as ``Phi @ S_true``.
"""

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .core import read_matrix, write_matrix
from .exceptions import SpecError
from .projection import numeric_rank, spark_estimate

__all__ = [
    "InstanceSpec",
    "ProblemInstance",
    "rng_stream",
    "sample_support",
    "generate",
    "dump_instance",
    "load_instance",
]


@dataclass(frozen=True)
class InstanceSpec:
    N: int
    M: int
    K: int
    J: int
    seed: int = 0

    def __post_init__(self):
        for name in ("N", "M", "K", "J"):
            if getattr(self, name) < 1:
                raise SpecError(f"{name} must be positive, got {getattr(self, name)}")
        if self.M >= self.N:
            raise SpecError(f"need M < N, got M={self.M}, N={self.N}")
        if self.K > self.N:
            raise SpecError(f"need K <= N, got K={self.K}, N={self.N}")
        if not 0 <= self.seed < 2**64:
            raise SpecError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


@dataclass
class ProblemInstance:
    spec: InstanceSpec
    Phi: np.ndarray
    S_true: np.ndarray
    Y: np.ndarray
    support: np.ndarray

    @property
    def unique_solution_guaranteed(self):
        """True when ``K < (spark(Phi) + rank(Y) - 1) / 2``."""
        bound = spark_estimate(self.spec.M) + numeric_rank(self.Y) - 1
        return 2 * self.spec.K < bound


def rng_stream(seed):
    """Deterministic generator for a seed (numpy PCG64)."""
    return np.random.Generator(np.random.PCG64(seed))


def sample_support(rng, N, K):
    """First `K` entries of a partial Fisher-Yates shuffle of ``range(N)``, sorted."""
    perm = np.arange(N)
    for i in range(K):
        j = int(rng.integers(i, N))
        perm[i], perm[j] = perm[j], perm[i]
    return np.sort(perm[:K])


def generate(spec):
    """Draw the instance determined by `spec` (including its seed)."""
    N, M, K, J = spec.N, spec.M, spec.K, spec.J
    rng = rng_stream(spec.seed)
    Phi = rng.standard_normal((M, N))
    Phi /= np.linalg.norm(Phi, axis=0)
    support = sample_support(rng, N, K)
    S_true = np.zeros((N, J))
    S_true[support] = rng.standard_normal((K, J))
    Y = Phi @ S_true
    return ProblemInstance(spec=spec, Phi=Phi, S_true=S_true, Y=Y, support=support)


def dump_instance(instance, directory):
    """Write ``instance.json`` plus ``Phi.txt``, ``S_true.txt`` and ``Y.txt``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    header = asdict(instance.spec)
    header["support"] = [int(i) for i in instance.support]
    (directory / "instance.json").write_text(json.dumps(header, indent=2))
    write_matrix(directory / "Phi.txt", instance.Phi)
    write_matrix(directory / "S_true.txt", instance.S_true)
    write_matrix(directory / "Y.txt", instance.Y)


def load_instance(directory):
    directory = Path(directory)
    header = json.loads((directory / "instance.json").read_text())
    support = np.asarray(header.pop("support"), dtype=np.intp)
    spec = InstanceSpec(**header)
    return ProblemInstance(
        spec=spec,
        Phi=read_matrix(directory / "Phi.txt"),
        S_true=read_matrix(directory / "S_true.txt"),
        Y=read_matrix(directory / "Y.txt"),
        support=support,
    )
