"""Cycle statistics of the interchange process: exact formulas and Monte Carlo.

The expected number of k-cycles at time t has a closed spectral form
    E(s_k(t)) = (1/k) sum_rho a_rho sum_j exp(-t lambda_j(w, rho)),
where the coefficients a_rho take values in {-1, 0, +1} and are supported on
the trivial partition [n] (coefficient +1) together with two families of
hook-augmented two-row partitions:

* [k-i-1, n-k+1, 1^i] for i in {0, ..., 2k-n-2}, coefficient (-1)^(i+1),
* [n-k, k-i, 1^i] for i in {max(2k-n, 0), ..., k-1}, coefficient (-1)^i.

The same partitions admit closed forms for the complete graph eigenvalue and
the dimension, which this module exposes and cross-checks against the content
sum and hook length routes.

The simulator runs the process literally: Poisson clocks ring at total rate
sum_{i<j} w_ij, exponential waiting times, each ring swaps the marbles on an
edge chosen with probability proportional to its weight.  Trajectories are
seeded per (master seed, trajectory index) with a counter-based generator so
batches are reproducible in any execution order.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapError, ConsistencyError, ParameterError
from .graphs import WeightFunction
from .group_algebra import InterchangeExact, Perm, cycle_counts, identity_perm
from .irreps import (
    IRREP_MAX_N,
    Partition,
    delta_on_irrep,
    hook_dim,
    lambda_kn,
    validate_partition,
)

_BRUTE_FORCE_MAX_N = 5


@dataclass(frozen=True)
class CycleFormula:
    """Signed partition support of the expected k-cycle count formula."""

    n: int
    k: int
    terms: tuple[tuple[Partition, int], ...]

    def coefficient(self, p: Partition) -> int:
        for partition, a in self.terms:
            if partition == p:
                return a
        return 0


def _family_partition(n: int, k: int, i: int, family: str) -> Partition:
    if family == "first":
        parts = (k - i - 1, n - k + 1) + (1,) * i
    elif family == "second":
        parts = (n - k, k - i) + (1,) * i
    else:
        raise ParameterError(f"unknown family {family!r} (expected 'first' or 'second')")
    try:
        return validate_partition(parts, n)
    except ParameterError as exc:
        raise ConsistencyError(
            f"index table produced invalid partition {parts} "
            f"(n={n}, k={k}, i={i}, family={family})"
        ) from exc


def first_family_range(n: int, k: int) -> range:
    return range(0, 2 * k - n - 1)


def second_family_range(n: int, k: int) -> range:
    return range(max(2 * k - n, 0), k)


def cycle_coefficients(n: int, k: int) -> CycleFormula:
    """The a_rho table for counting k-cycles among n marbles.

    Index ranges are taken literally; if a range ever emitted a malformed
    partition this would raise ConsistencyError rather than dropping the
    term.  Duplicate partitions across families would likewise be an error.
    """
    if not 1 <= k <= n:
        raise ParameterError(f"need 1 <= k <= n, got k={k}, n={n}")
    terms: list[tuple[Partition, int]] = [((n,), 1)]
    seen = {(n,)}
    for i in first_family_range(n, k):
        p = _family_partition(n, k, i, "first")
        if p in seen:
            raise ConsistencyError(f"duplicate partition {p} in coefficient table")
        seen.add(p)
        terms.append((p, (-1) ** (i + 1)))
    for i in second_family_range(n, k):
        p = _family_partition(n, k, i, "second")
        if p in seen:
            raise ConsistencyError(f"duplicate partition {p} in coefficient table")
        seen.add(p)
        terms.append((p, (-1) ** i))
    return CycleFormula(n=n, k=k, terms=tuple(terms))


def coefficient_dimension_sum(n: int, k: int) -> int:
    """sum over the table of a_rho * dim(rho); zero for every k >= 2."""
    return sum(a * hook_dim(p) for p, a in cycle_coefficients(n, k).terms)


def expected_cycles_spectral(w: WeightFunction, k: int, t):
    """E(s_k(t)) by the spectral formula.  t may be a scalar or an array."""
    if w.n > IRREP_MAX_N:
        raise CapError(f"spectral route capped at n <= {IRREP_MAX_N}")
    t_arr = np.asarray(t, dtype=float)
    if (t_arr < 0).any():
        raise ParameterError("time must be >= 0")
    total = np.zeros_like(t_arr)
    for p, a in cycle_coefficients(w.n, k).terms:
        eigenvalues = delta_on_irrep(w, p).eigenvalues
        total = total + a * np.exp(-t_arr[..., None] * eigenvalues).sum(axis=-1)
    result = total / k
    return float(result) if np.isscalar(t) or t_arr.ndim == 0 else result


def family_lambda_dim(n: int, k: int, i: int, family: str) -> tuple[int, int]:
    """Closed-form (complete graph eigenvalue, dimension) for a family member.

    Both families share
        lambda = C(n, 2) + i k + k - ((n-k)^2 + k^2 - n) / 2,
    and their dimensions are
        first:  n! (2k - n - i - 1) / (i! k (n-k)! (k-i-1)! (n-k+i+1)),
        second: n! (n - 2k + i + 1) / (i! k (n-k)! (k-i-1)! (n-k+i+1)).
    """
    if not 1 <= k <= n:
        raise ParameterError(f"need 1 <= k <= n, got k={k}, n={n}")
    if family == "first":
        valid = first_family_range(n, k)
        numerator = math.factorial(n) * (2 * k - n - i - 1)
    elif family == "second":
        valid = second_family_range(n, k)
        numerator = math.factorial(n) * (n - 2 * k + i + 1)
    else:
        raise ParameterError(f"unknown family {family!r} (expected 'first' or 'second')")
    if i not in valid:
        raise ParameterError(
            f"index i={i} outside {family} family range {valid} for n={n}, k={k}"
        )
    half, parity = divmod((n - k) ** 2 + k * k - n, 2)
    assert parity == 0, "eigenvalue formula must be integral"
    lam = n * (n - 1) // 2 + i * k + k - half
    denominator = (
        math.factorial(i)
        * k
        * math.factorial(n - k)
        * math.factorial(k - i - 1)
        * (n - k + i + 1)
    )
    dim, remainder = divmod(numerator, denominator)
    if remainder != 0:
        raise ConsistencyError(
            f"dimension formula not integral at n={n}, k={k}, i={i}, family={family}"
        )
    return lam, dim


def trajectory_rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based generator for one trajectory of one batch."""
    if seed < 0 or index < 0:
        raise ParameterError("seed and trajectory index must be nonnegative")
    return np.random.Generator(np.random.Philox(key=np.array([seed, index], dtype=np.uint64)))


@dataclass(frozen=True)
class Trajectory:
    """One realized interchange trajectory at a fixed time."""

    weights: WeightFunction
    seed: int
    index: int
    t: float
    final: Perm
    events: int
    counts: np.ndarray  # counts[k] = number of k-cycles, index 0 unused

    def __post_init__(self):
        total = sum(k * int(self.counts[k]) for k in range(1, self.weights.n + 1))
        if total != self.weights.n:
            raise ConsistencyError("cycle lengths must sum to the number of marbles")


def simulate_interchange(
    w: WeightFunction, t: float, seed: int = 0, index: int = 0
) -> Trajectory:
    """Run the process to time t and return the final configuration.

    Zero total weight is not an error: no clock ever rings and the identity
    is returned.
    """
    if t < 0:
        raise ParameterError(f"time must be >= 0, got {t}")
    rng = trajectory_rng(seed, index)
    edges = list(w.edges())
    rate = float(sum(weight for _, weight in edges))
    marbles = list(range(w.n))
    events = 0
    if rate > 0.0 and t > 0.0:
        cumulative = np.cumsum([weight for _, weight in edges])
        cumulative /= cumulative[-1]
        elapsed = 0.0
        while True:
            block = min(max(16, int(rate * (t - elapsed)) + 16), 1 << 16)
            gaps = rng.exponential(scale=1.0 / rate, size=block)
            times = elapsed + np.cumsum(gaps)
            rung = int(np.searchsorted(times, t, side="right"))
            chosen = np.minimum(
                np.searchsorted(cumulative, rng.random(rung), side="right"),
                len(edges) - 1,
            )
            for e in chosen:
                (i, j), _ = edges[e]
                marbles[i], marbles[j] = marbles[j], marbles[i]
            events += rung
            if rung < block:
                break
            elapsed = float(times[-1])
    final = tuple(marbles)
    counts = cycle_counts(final)
    counts.setflags(write=False)
    return Trajectory(
        weights=w,
        seed=seed,
        index=index,
        t=float(t),
        final=final,
        events=events,
        counts=counts,
    )


def expected_cycles_mc(
    w: WeightFunction, k: int, t: float, samples: int, seed: int = 0
) -> tuple[float, float]:
    """Monte Carlo estimate of E(s_k(t)) with its standard error."""
    if samples < 1:
        raise ParameterError(f"need samples >= 1, got {samples}")
    if not 1 <= k <= w.n:
        raise ParameterError(f"need 1 <= k <= n, got k={k}")
    values = np.empty(samples)
    for idx in range(samples):
        values[idx] = simulate_interchange(w, t, seed, idx).counts[k]
    stderr = float(values.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return float(values.mean()), stderr


def large_cycle_probability(
    w: WeightFunction, t: float, samples: int, seed: int = 0
) -> tuple[float, float]:
    """MC probability that some cycle is strictly longer than n/2."""
    if samples < 1:
        raise ParameterError(f"need samples >= 1, got {samples}")
    threshold = w.n // 2
    hits = 0
    for idx in range(samples):
        counts = simulate_interchange(w, t, seed, idx).counts
        if counts[threshold + 1 :].sum() > 0:
            hits += 1
    p = hits / samples
    return p, math.sqrt(p * (1.0 - p) / samples)


def large_cycle_mass(
    w: WeightFunction, t: float, samples: int, seed: int = 0
) -> tuple[float, float]:
    """MC estimate of the expected number of cycles with n/2 <= length <= 3n/4."""
    if samples < 1:
        raise ParameterError(f"need samples >= 1, got {samples}")
    lo = (w.n + 1) // 2
    hi = (3 * w.n) // 4
    values = np.empty(samples)
    for idx in range(samples):
        counts = simulate_interchange(w, t, seed, idx).counts
        values[idx] = counts[lo : hi + 1].sum()
    stderr = float(values.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return float(values.mean()), stderr


def exact_cycles_bruteforce(w: WeightFunction, k: int, t: float) -> float:
    """E(s_k(t)) summed over all permutations with exact probabilities."""
    if w.n > _BRUTE_FORCE_MAX_N:
        raise CapError(f"brute force capped at n <= {_BRUTE_FORCE_MAX_N}")
    process = InterchangeExact(w)
    dist = process.distribution(t)
    return float(
        sum(p * cycle_counts(perm)[k] for p, perm in zip(dist, process.permutations))
    )


def oracle_t_grid(w: WeightFunction) -> np.ndarray:
    """Times {0, 0.01, 0.1, 0.5, 1, 5} scaled by the spectral gap of w."""
    gap = delta_on_irrep(w, (w.n - 1, 1) if w.n > 2 else (1, 1)).lambda_min
    if gap <= 1e-12:
        raise ParameterError("t grid needs a connected weight function")
    return np.array([0.0, 0.01, 0.1, 0.5, 1.0, 5.0]) / gap
