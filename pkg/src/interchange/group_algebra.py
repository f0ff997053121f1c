"""Real group algebra of the symmetric group and exact operator checks.

Permutations are tuples: p[i] is the image of i, composition is
compose(p, q)(i) = p[q[i]].  A group algebra element is a finitely supported
real coefficient vector c indexed by permutations; it acts on functions over
the symmetric group by (A f)(tau) = sum_sigma c_sigma f(sigma tau).  In the
basis of all permutations in lexicographic order this action is the matrix
M[tau, g] = c(g tau^{-1}), which is symmetric whenever c is self adjoint
(c_sigma = c of sigma^{-1}).

The interchange generator for a weight function w is
    delta_of_weights(w) = sum_{i<j} w_ij (1 - (i j)),
a self adjoint, positive semidefinite element.  Two operator inequalities
are checked exactly here by assembling the gap element and testing positive
semidefiniteness of its matrix:

* the octopus inequality: for a hub vertex h,
      sum_i w_hi (1 - (h i))  >=  sum_{i<j} (w_hi w_hj / w_h) (1 - (i j)),
* the doubling bound: for a lifted weight u with diagonal fraction eps,
      (2 + 2 eps) Delta_u  >=  Delta_{u^(2)}.

Exact semigroup distributions exp(-t Delta_w) are available for n <= 5 via
the symmetric eigendecomposition of the regular representation matrix.
"""

import itertools
import math
from typing import Iterable, NamedTuple

import numpy as np

from .chain import LiftedWeight, double_weight
from .errors import CapError, DegenerateWeightError, DisconnectedError, ParameterError
from .graphs import WeightFunction

Perm = tuple[int, ...]

REGULAR_REP_MAX_N = 7
EXACT_SEMIGROUP_MAX_N = 5
PSD_TOL = 1e-9


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def is_perm(p: Perm) -> bool:
    return sorted(p) == list(range(len(p)))


def compose(p: Perm, q: Perm) -> Perm:
    """(p q)(i) = p[q[i]], i.e. apply q first."""
    assert len(p) == len(q)
    return tuple(p[qi] for qi in q)


def invert(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, pi in enumerate(p):
        out[pi] = i
    return tuple(out)


def transposition_perm(n: int, i: int, j: int) -> Perm:
    if i == j:
        raise ParameterError("transposition needs two distinct points")
    out = list(range(n))
    out[i], out[j] = j, i
    return tuple(out)


def cycle_counts(p: Perm) -> np.ndarray:
    """counts[k] = number of k-cycles of p, for k = 0 .. n (index 0 unused)."""
    n = len(p)
    counts = np.zeros(n + 1, dtype=np.int64)
    seen = [False] * n
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        v = start
        while not seen[v]:
            seen[v] = True
            v = p[v]
            length += 1
        counts[length] += 1
    return counts


def cycle_type(p: Perm) -> tuple[int, ...]:
    """Cycle lengths of p, largest first."""
    counts = cycle_counts(p)
    out: list[int] = []
    for length in range(len(p), 0, -1):
        out.extend([length] * int(counts[length]))
    return tuple(out)


def all_perms(n: int) -> list[Perm]:
    """Every permutation of {0, ..., n-1} in lexicographic image order."""
    return list(itertools.permutations(range(n)))


class GroupAlgebraElement:
    """Finitely supported real function on the symmetric group."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: dict[Perm, float] | None = None):
        self.n = n
        self.coeffs: dict[Perm, float] = {}
        if coeffs:
            for p, c in coeffs.items():
                if len(p) != n or not is_perm(p):
                    raise ParameterError(f"{p} is not a permutation of {n} points")
                if c != 0.0:
                    self.coeffs[p] = self.coeffs.get(p, 0.0) + float(c)

    @classmethod
    def identity(cls, n: int) -> "GroupAlgebraElement":
        return cls(n, {identity_perm(n): 1.0})

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        self._check_same_group(other)
        out = dict(self.coeffs)
        for p, c in other.coeffs.items():
            out[p] = out.get(p, 0.0) + c
        return GroupAlgebraElement(self.n, out)

    def __sub__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return self + (-1.0) * other

    def __rmul__(self, scalar: float) -> "GroupAlgebraElement":
        return GroupAlgebraElement(
            self.n, {p: scalar * c for p, c in self.coeffs.items()}
        )

    def __matmul__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        """Composition of the associated operators."""
        self._check_same_group(other)
        out: dict[Perm, float] = {}
        for sigma, a in self.coeffs.items():
            for rho, b in other.coeffs.items():
                g = compose(rho, sigma)
                out[g] = out.get(g, 0.0) + a * b
        return GroupAlgebraElement(self.n, out)

    def _check_same_group(self, other: "GroupAlgebraElement") -> None:
        if self.n != other.n:
            raise ParameterError(f"mixing elements over {self.n} and {other.n} points")

    def adjoint(self) -> "GroupAlgebraElement":
        return GroupAlgebraElement(self.n, {invert(p): c for p, c in self.coeffs.items()})

    def is_self_adjoint(self, tol: float = 1e-12) -> bool:
        for p, c in self.coeffs.items():
            if abs(c - self.coeffs.get(invert(p), 0.0)) > tol:
                return False
        return True

    def coefficient(self, p: Perm) -> float:
        return self.coeffs.get(p, 0.0)

    def max_abs_coefficient(self) -> float:
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    def __repr__(self) -> str:
        return f"GroupAlgebraElement(n={self.n}, support={len(self.coeffs)})"


def nabla(n: int, i: int, j: int) -> GroupAlgebraElement:
    """1 - (i j), the positive semidefinite swap defect on pair {i, j}."""
    return GroupAlgebraElement(
        n, {identity_perm(n): 1.0, transposition_perm(n, i, j): -1.0}
    )


def delta_of_weights(w: WeightFunction) -> GroupAlgebraElement:
    """Interchange generator sum_{i<j} w_ij (1 - (i j))."""
    coeffs: dict[Perm, float] = {identity_perm(w.n): 0.0}
    for (i, j), weight in w.edges():
        coeffs[identity_perm(w.n)] += weight
        coeffs[transposition_perm(w.n, i, j)] = -weight
    return GroupAlgebraElement(w.n, coeffs)


def delta_complete(n: int) -> GroupAlgebraElement:
    """Generator of the interchange process on the complete graph, central."""
    coeffs: dict[Perm, float] = {identity_perm(n): n * (n - 1) / 2.0}
    for i in range(n):
        for j in range(i + 1, n):
            coeffs[transposition_perm(n, i, j)] = -1.0
    return GroupAlgebraElement(n, coeffs)


def regular_rep_matrix(a: GroupAlgebraElement) -> np.ndarray:
    """Matrix of (A f)(tau) = sum_sigma c_sigma f(sigma tau), size n! x n!."""
    if a.n > REGULAR_REP_MAX_N:
        raise CapError(
            f"regular representation capped at n <= {REGULAR_REP_MAX_N}, got {a.n}"
        )
    perms = all_perms(a.n)
    index = {p: k for k, p in enumerate(perms)}
    m = np.zeros((len(perms), len(perms)))
    for sigma, c in a.coeffs.items():
        for t_idx, tau in enumerate(perms):
            m[t_idx, index[compose(sigma, tau)]] += c
    return m


class PsdVerdict(NamedTuple):
    psd: bool
    min_eigenvalue: float


def is_psd(
    a: GroupAlgebraElement, tol: float = PSD_TOL, method: str = "auto"
) -> PsdVerdict:
    """Decide positive semidefiniteness of a self adjoint element.

    method "regular" assembles the full n! x n! matrix (n <= 7); "irrep"
    diagonalizes each irreducible block instead and reaches n <= 10; "auto"
    picks the regular route up to n = 5 and the irrep route beyond.  The
    verdict tolerates eigenvalues down to -tol times the largest matrix
    entry in absolute value.
    """
    if not a.is_self_adjoint():
        raise ParameterError("positive semidefiniteness needs a self adjoint element")
    if method == "auto":
        method = "regular" if a.n <= EXACT_SEMIGROUP_MAX_N else "irrep"
    if method == "regular":
        m = regular_rep_matrix(a)
        scale = float(np.abs(m).max())
        min_eig = float(np.linalg.eigvalsh(m).min()) if scale > 0 else 0.0
    elif method == "irrep":
        from .irreps import min_eigenvalue_on_irreps

        min_eig, scale = min_eigenvalue_on_irreps(a)
    else:
        raise ParameterError(f"unknown method {method!r}")
    return PsdVerdict(psd=min_eig >= -tol * max(scale, 1e-300), min_eigenvalue=min_eig)


def octopus_gap(n: int, hub: int, arm_weights: Iterable[float]) -> GroupAlgebraElement:
    """Gap element of the octopus inequality for a hub and its arm weights.

    arm_weights lists w(hub, v) for the non-hub vertices v in increasing
    order.  Returns sum_i w_hi (1 - (h i)) minus
    sum_{i<j} (w_hi w_hj / w_h) (1 - (i j)).
    """
    arms = [float(x) for x in arm_weights]
    others = [v for v in range(n) if v != hub]
    if not 0 <= hub < n:
        raise ParameterError(f"hub {hub} out of range for n={n}")
    if len(arms) != len(others):
        raise ParameterError(f"expected {len(others)} arm weights, got {len(arms)}")
    if any(a < 0 for a in arms):
        raise ParameterError("arm weights must be nonnegative")
    hub_weight = sum(arms)
    if hub_weight <= 0:
        raise DegenerateWeightError("octopus needs at least one positive arm")
    gap = GroupAlgebraElement(n)
    for v, a in zip(others, arms):
        if a > 0:
            gap = gap + a * nabla(n, hub, v)
    for x in range(len(others)):
        for y in range(x + 1, len(others)):
            c = arms[x] * arms[y] / hub_weight
            if c > 0:
                gap = gap - c * nabla(n, others[x], others[y])
    return gap


def octopus_check(
    n: int,
    hub: int,
    arm_weights: Iterable[float],
    tol: float = PSD_TOL,
    method: str = "auto",
) -> PsdVerdict:
    """Verify the octopus inequality for one hub configuration."""
    return is_psd(octopus_gap(n, hub, arm_weights), tol=tol, method=method)


def doubling_gap(u: LiftedWeight) -> GroupAlgebraElement:
    """(2 + 2 eps) Delta_u - Delta_{u^(2)}, both taken off the diagonal."""
    eps = u.epsilon
    doubled = double_weight(u)
    lhs = delta_of_weights(u.off_diagonal_weights())
    rhs = delta_of_weights(doubled.off_diagonal_weights())
    return (2.0 + 2.0 * eps) * lhs - rhs


def doubling_inequality_check(
    u: LiftedWeight, tol: float = PSD_TOL, method: str = "auto"
) -> PsdVerdict:
    """Verify the doubling inequality for one lifted weight."""
    return is_psd(doubling_gap(u), tol=tol, method=method)


class InterchangeExact:
    """Exact distribution of the interchange process started at the identity.

    Diagonalizes the regular representation of Delta_w once (n <= 5) and
    evaluates exp(-t Delta_w) applied to the point mass at the identity for
    any t from the spectral data.
    """

    def __init__(self, w: WeightFunction):
        if w.n > EXACT_SEMIGROUP_MAX_N:
            raise CapError(
                f"exact semigroup capped at n <= {EXACT_SEMIGROUP_MAX_N}, got {w.n}"
            )
        self.weights = w
        self.permutations = all_perms(w.n)
        m = regular_rep_matrix(delta_of_weights(w))
        self.eigenvalues, self.eigenvectors = np.linalg.eigh(m)
        # identity is first in lexicographic order
        self._id_row = self.eigenvectors[0, :]

    def distribution(self, t: float) -> np.ndarray:
        """Probabilities over all_perms(n) after time t >= 0."""
        if t < 0:
            raise ParameterError(f"time must be >= 0, got {t}")
        dist = self.eigenvectors @ (np.exp(-t * self.eigenvalues) * self._id_row)
        return dist

    def tv_from_uniform(self, t: float) -> float:
        size = len(self.permutations)
        return float(0.5 * np.abs(self.distribution(t) - 1.0 / size).sum())


def interchange_exact(w: WeightFunction, t: float) -> np.ndarray:
    """Exact interchange distribution at time t over all_perms(w.n)."""
    return InterchangeExact(w).distribution(t)


def interchange_tv_mix_exact(
    w: WeightFunction, t_tol: float = 1e-6, semigroup: InterchangeExact | None = None
) -> float:
    """First time the interchange process is within 1/4 of uniform in TV.

    Located by doubling and bisection on the continuous time axis; the
    result is accurate to t_tol.  Raises DisconnectedError when the weight
    function is disconnected (the process then never approaches uniform).
    """
    if not w.is_connected():
        raise DisconnectedError("interchange mixing needs a connected weight function")
    process = semigroup if semigroup is not None else InterchangeExact(w)
    hi = 1.0 / w.total_weight
    while process.tv_from_uniform(hi) >= 0.25:
        hi *= 2.0
        if hi > 1e9:
            raise DegenerateWeightError("interchange process failed to mix")
    lo = 0.0
    while hi - lo > t_tol:
        mid = 0.5 * (lo + hi)
        if process.tv_from_uniform(mid) < 0.25:
            hi = mid
        else:
            lo = mid
    return hi
