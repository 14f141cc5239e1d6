"""Finite and infinite Ising models over {0} ∪ ℕ with X₀ clamped to 1.

The unnormalized weight of x ∈ {0,1}^n is U(x) = exp(Σ_{(i,j)∈E} θ_ij x_i x_j)
with x₀ = 1, so θ_{i0} acts as a field on node i. States are encoded as
bitmasks: bit k − 1 of the state index is x_k.
"""

import itertools
import math
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
from scipy.special import expit, logsumexp

from ..config import DEFAULT_SETTINGS, Settings
from ..errors import ConfigError, DomainError, SizeError
from ..graph import (
    NATURALS_WITH_ZERO,
    LazyGraph,
    NeighborStream,
    from_adjacency,
)
from ..log import get_logger
from ..report import DiagnosticReport, Verdict

logger = get_logger(__name__)

PROBE = 200
ZERO = 0


class Regime(Enum):
    """Parameter regime declared for an Ising model."""

    SPARSE = "sparse"
    SUMMABLE = "summable"
    FINITE = "finite"


@dataclass(frozen=True, eq=False)
class IsingModel:
    """Graph over {0} ∪ ℕ plus edge parameters θ.

    `theta(i, j)` is called with i < j on edges only; `theta(0, k)` is the
    field of node k. Non-edges have θ = 0. The regime is validated on the
    first `probe` nodes at construction.
    """

    graph: LazyGraph
    theta: Callable[[int, int], float] = field(repr=False)
    regime: Regime = Regime.FINITE
    mass_bound: float | None = None
    probe: int = PROBE
    name: str = "ising"

    def __post_init__(self):
        # Step 1: structure of the graph
        if ZERO not in self.graph:
            raise DomainError(f"{self.name}: graph has no zero node")
        if self.regime is Regime.FINITE:
            if not self.graph.is_finite:
                raise DomainError(f"{self.name}: finite regime needs a finite graph")
            if tuple(self.graph.vertices) != tuple(range(self.size + 1)):
                raise DomainError(f"{self.name}: vertices must be 0..{self.size}")
        elif self.graph.is_finite:
            raise DomainError(f"{self.name}: {self.regime.value} regime needs an infinite graph")
        for k in range(1, self.probe_count + 1):
            if ZERO not in self.graph.neighbors(k):
                raise DomainError(f"{self.name}: node {k} has no edge to the zero node")

        # Step 2: regime-specific parameter checks
        if self.regime is Regime.SPARSE:
            self._validate_sparse()
        elif self.regime is Regime.SUMMABLE:
            self._validate_summable()

    @property
    def size(self) -> int | None:
        """Number of nonzero nodes, None for infinite models."""
        if not self.graph.is_finite:
            return None
        return len(self.graph.vertices) - 1

    @property
    def probe_count(self) -> int:
        return self.probe if self.size is None else min(self.probe, self.size)

    def pair_neighbors(self, i: int) -> tuple[int, ...]:
        """Nonzero neighbors of node i ≥ 1 (always a finite set)."""
        nbrs = self.graph.neighbors(i)
        if isinstance(nbrs, NeighborStream):
            raise DomainError(f"{self.name}: node {i} has infinite degree")
        return tuple(j for j in nbrs if j != ZERO)

    def coupling(self, i: int, j: int) -> float:
        """θ_ij, zero off the edge set."""
        if i == j:
            raise DomainError(f"no self-coupling at node {i}")
        lo, hi = min(i, j), max(i, j)
        if lo == ZERO:
            return float(self.theta(ZERO, hi))
        if hi not in self.pair_neighbors(lo):
            return 0.0
        return float(self.theta(lo, hi))

    def field_at(self, k: int) -> float:
        """θ_k0."""
        return self.coupling(ZERO, k)

    def arrays(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """(J, h) on nodes 1..n: upper-triangular couplings and fields."""
        if self.size is not None and n > self.size:
            raise DomainError(f"{self.name} has only {self.size} nodes, asked for {n}")
        J = np.zeros((n, n))
        h = np.zeros(n)
        for i in range(1, n + 1):
            h[i - 1] = self.field_at(i)
            for j in self.pair_neighbors(i):
                if i < j <= n:
                    J[i - 1, j - 1] = self.theta(i, j)
        return J, h

    def node_mass(self, k: int) -> float:
        """|θ_k0| + Σ_{j<k} |θ_jk|: the mass node k adds to the first k − 1 nodes."""
        return abs(self.field_at(k)) + sum(
            abs(self.theta(j, k)) for j in self.pair_neighbors(k) if j < k
        )

    def beta(self, n: int) -> float:
        """β_n = Σ_{1≤j≤n} |θ_{n+1,j}|, the coupling of node n+1 to earlier nodes."""
        return sum(abs(self.theta(j, n + 1)) for j in self.pair_neighbors(n + 1) if j <= n)

    def probed_mass(self, n: int) -> float:
        """Σ |θ| over edges (fields included) with both endpoints in {0..n}."""
        return sum(self.node_mass(k) for k in range(1, n + 1))

    def total_mass(self) -> float | None:
        """Σ |θ| over all edges: exact when finite, mass_bound when summable."""
        if self.size is not None:
            return self.probed_mass(self.size)
        if self.regime is Regime.SUMMABLE:
            return self.mass_bound
        return None

    def _validate_sparse(self) -> None:
        for k in range(1, self.probe_count + 1):
            if self.field_at(k) > -2 * math.log(k) + 1e-12:
                raise DomainError(
                    f"{self.name}: θ_{k}0 = {self.field_at(k):.6g} exceeds −2 log {k}"
                )
            for j in self.pair_neighbors(k):
                if j < k and self.theta(j, k) > 0:
                    raise DomainError(f"{self.name}: θ_{j}{k} is positive in the sparse regime")

    def _validate_summable(self) -> None:
        if self.mass_bound is None:
            raise DomainError(f"{self.name}: the summable regime needs a mass_bound")
        masses = [self.node_mass(k) for k in range(1, self.probe_count + 1)]
        total = sum(masses)
        if total > self.mass_bound + 1e-12:
            raise DomainError(
                f"{self.name}: probed Σ|θ| = {total:.6g} over {len(masses)} nodes "
                f"exceeds mass_bound {self.mass_bound:.6g}"
            )
        # Dyadic blocks of a summable series must shrink.
        half, quarter = len(masses) // 2, len(masses) // 4
        late = sum(masses[half:])
        early = sum(masses[quarter:half])
        if early > 0 and late >= 0.9 * early:
            raise DomainError(
                f"{self.name}: Σ|θ| grows like a divergent series "
                f"(block masses {early:.4g} then {late:.4g})"
            )


def _ising_graph(
    pair_oracle: Callable[[int], Iterable[int]], size: int | None, name: str
) -> LazyGraph:
    if size is not None:
        adjacency: dict[int, list[int]] = {ZERO: list(range(1, size + 1))}
        for i in range(1, size + 1):
            adjacency[i] = [ZERO, *(j for j in pair_oracle(i) if 1 <= j <= size)]
        return from_adjacency(adjacency, name=name)

    hub = NeighborStream(
        contains=lambda v: v >= 1,
        enumerate=lambda: itertools.count(1),
    )

    def oracle(i: int) -> Any:
        if i == ZERO:
            return hub
        return (ZERO, *pair_oracle(i))

    return LazyGraph(NATURALS_WITH_ZERO, oracle, name=name)


def _chain_neighbors(i: int) -> list[int]:
    return [j for j in (i - 1, i + 1) if j >= 1]


def chain_ising(
    coupling: Callable[[int], float],
    field: Callable[[int], float] = lambda k: 0.0,
    regime: Regime = Regime.SUMMABLE,
    mass_bound: float | None = None,
    size: int | None = None,
    name: str = "chain",
) -> IsingModel:
    """Nearest-neighbor chain with θ_{i,i+1} = coupling(i) and θ_{k0} = field(k)."""

    def theta(i: int, j: int) -> float:
        return field(j) if i == ZERO else coupling(i)

    if size is not None:
        regime = Regime.FINITE
    return IsingModel(
        _ising_graph(_chain_neighbors, size, name),
        theta,
        regime=regime,
        mass_bound=mass_bound,
        name=name,
    )


def chain_summable(rate: float = 0.5, scale: float = 1.0) -> IsingModel:
    """θ_{i,i+1} = scale·rate^i and no fields; Σ|θ| = |scale|·rate / (1 − rate)."""
    if not 0 < rate < 1:
        raise DomainError(f"rate must lie in (0, 1), got {rate}")
    return chain_ising(
        lambda i: scale * rate**i,
        regime=Regime.SUMMABLE,
        mass_bound=abs(scale) * rate / (1 - rate),
        name=f"chain(rate={rate})",
    )


def sparse_chain(shift: float = 0.0, coupling: float = 0.0) -> IsingModel:
    """θ_{k0} = −2 log k − shift with nonpositive nearest-neighbor couplings."""
    if shift < 0:
        raise DomainError(f"shift must be nonnegative, got {shift}")
    return chain_ising(
        lambda i: -abs(coupling),
        field=lambda k: -2 * math.log(k) - shift,
        regime=Regime.SPARSE,
        name=f"sparse(shift={shift})",
    )


def finite_ising(
    size: int,
    couplings: Mapping[tuple[int, int], float] | Iterable[tuple[int, int, float]] = (),
    fields: Sequence[float] | Mapping[int, float] = (),
    name: str = "finite",
) -> IsingModel:
    """Finite model on nodes 1..size from explicit couplings and fields."""
    if size < 1:
        raise DomainError(f"size must be positive, got {size}")
    items = couplings.items() if isinstance(couplings, Mapping) else (
        ((i, j), t) for i, j, t in couplings
    )
    table: dict[tuple[int, int], float] = {}
    for (i, j), t in items:
        if i == j or not (1 <= i <= size and 1 <= j <= size):
            raise DomainError(f"invalid edge ({i}, {j}) for {size} nodes")
        table[(min(i, j), max(i, j))] = float(t)
    if isinstance(fields, Mapping):
        field_of = {int(k): float(v) for k, v in fields.items()}
    else:
        field_of = {k: float(v) for k, v in enumerate(fields, start=1)}

    adjacency: dict[int, set[int]] = {k: set() for k in range(1, size + 1)}
    for i, j in table:
        adjacency[i].add(j)
        adjacency[j].add(i)

    def theta(i: int, j: int) -> float:
        if i == ZERO:
            return field_of.get(j, 0.0)
        return table[(i, j)]

    return IsingModel(
        _ising_graph(lambda i: sorted(adjacency[i]), size, name),
        theta,
        regime=Regime.FINITE,
        name=name,
    )


def ising_from_config(data: dict[str, Any]) -> IsingModel:
    """Build a model from a validated ising config."""
    family = data["family"]
    try:
        if family == "chain":
            rate = float(data.get("rate", 0.5))
            scale = float(data.get("coupling", 1.0))
            if "nodes" in data or data.get("regime") == "finite":
                h = float(data.get("field", 0.0))
                return chain_ising(
                    lambda i: scale * rate**i,
                    field=lambda k: h,
                    size=int(data["nodes"]),
                    name=f"chain(rate={rate},n={data['nodes']})",
                )
            if "mass_bound" in data:
                return chain_ising(
                    lambda i: scale * rate**i,
                    regime=Regime.SUMMABLE,
                    mass_bound=float(data["mass_bound"]),
                    name=f"chain(rate={rate})",
                )
            return chain_summable(rate, scale)
        if family == "sparse":
            return sparse_chain(float(data.get("shift", 0.0)), float(data.get("coupling", 0.0)))
        if family == "explicit":
            return finite_ising(
                int(data["nodes"]),
                [(int(i), int(j), float(t)) for i, j, t in data.get("edges", [])],
                [float(h) for h in data.get("field", [])],
            )
    except KeyError as e:
        raise ConfigError(f"{family} ising config is missing {e.args[0]!r}")
    except DomainError as e:
        raise ConfigError(str(e))
    raise ConfigError(f"unknown ising family {family!r}")


# -- exact enumeration ---------------------------------------------------------


def _check_cap(n: int, settings: Settings) -> None:
    if n > settings.enumeration_cap:
        raise SizeError("Ising enumeration", n, settings.enumeration_cap)


def _state_bits(n: int) -> list[np.ndarray]:
    """Boolean masks, one per variable, over all 2^n states."""
    states = np.arange(2**n, dtype=np.int64)
    return [((states >> k) & 1).astype(bool) for k in range(n)]


def _add_field(log_u: np.ndarray, h: np.ndarray, bits: list[np.ndarray]) -> np.ndarray:
    out = log_u.copy()
    for k, value in enumerate(h):
        if value:
            out[bits[k]] += value
    return out


def _log_weights(
    J: np.ndarray, h: np.ndarray, bits: list[np.ndarray] | None = None
) -> np.ndarray:
    """log U for every state of len(h) variables, accumulated per variable and edge."""
    n = len(h)
    bits = _state_bits(n) if bits is None else bits
    log_u = np.zeros(2**n)
    for i, j in zip(*np.nonzero(J)):
        log_u[bits[i] & bits[j]] += J[i, j]
    return _add_field(log_u, h, bits)


def ising_exact(
    m: IsingModel, n: int, settings: Settings = DEFAULT_SETTINGS
) -> np.ndarray:
    """Normalized pmf of (X_1..X_n) under the model restricted to nodes 0..n.

    Args:
        m: the model; infinite models are truncated to the induced subgraph.
        n: number of nonzero nodes kept.
        settings: supplies the enumeration cap.

    Returns:
        Flat array of length 2^n; bit k − 1 of the index is x_k.
    """
    if n < 1:
        raise DomainError(f"need at least one node, got {n}")
    _check_cap(n, settings)
    J, h = m.arrays(n)
    log_u = _log_weights(J, h)
    pmf = np.exp(log_u - logsumexp(log_u))
    logger.debug("%s: enumerated %d states", m.name, len(pmf))
    return pmf


def ising_conditional(m: IsingModel, j: int, x_rest: Mapping[int, int]) -> float:
    """P(X_j = 1 | X_{−j} = x) = expit(θ_j0 + Σ_{k∈ne(j)} θ_jk x_k).

    Only the neighbors of j are read from x_rest.
    """
    if j < 1:
        raise DomainError(f"node {j} is not a nonzero node")
    total = m.field_at(j)
    for k in m.pair_neighbors(j):
        if k not in x_rest:
            raise DomainError(f"value of neighbor {k} of node {j} is missing")
        total += m.coupling(j, k) * x_rest[k]
    return float(expit(total))


def _prefix_log_weight(m: IsingModel, v: Sequence[int]) -> float:
    mm = len(v)
    total = sum(m.field_at(i) * v[i - 1] for i in range(1, mm + 1))
    for i in range(1, mm + 1):
        if not v[i - 1]:
            continue
        for j in m.pair_neighbors(i):
            if i < j <= mm and v[j - 1]:
                total += m.theta(i, j)
    return total


def _free_log_partition(
    m: IsingModel, mm: int, n: int, vs: Sequence[Sequence[int]]
) -> tuple[np.ndarray, float]:
    """log Σ_X over x_{mm+1..n} with boundary v (per v) and with field only."""
    J, h = m.arrays(n)
    free = n - mm
    if free == 0:
        return np.zeros(len(vs)), 0.0
    J_free = J[mm:, mm:]
    bits = _state_bits(free)
    base = _log_weights(J_free, np.zeros(free), bits)
    den = float(logsumexp(_add_field(base, h[mm:], bits)))
    boundary = J[:mm, mm:]
    nums = np.array(
        [
            logsumexp(_add_field(base, h[mm:] + np.asarray(v, dtype=float) @ boundary, bits))
            for v in vs
        ]
    )
    return nums, den


def ising_fmvn(
    m: IsingModel,
    mm: int,
    v: Sequence[int],
    n: int,
    settings: Settings = DEFAULT_SETTINGS,
) -> float:
    """f_m(v, n) = P^m_n(X_{1..m} = v) / P^m_n(X_{1..m} = 0) by the ratio-of-sums formula.

    The numerator carries the prefix weight exp(Σ_{i<j≤m} θ_ij v_i v_j + Σ_i θ_i0 v_i)
    so that the identity with the marginal ratio holds exactly.
    """
    v = [int(x) for x in v]
    if len(v) != mm or any(x not in (0, 1) for x in v):
        raise DomainError(f"v must be a 0/1 vector of length {mm}")
    if not 1 <= mm <= n:
        raise DomainError(f"need 1 ≤ m ≤ n, got m={mm}, n={n}")
    _check_cap(n, settings)
    nums, den = _free_log_partition(m, mm, n, [v])
    return float(math.exp(_prefix_log_weight(m, v) + nums[0] - den))


def marginal_consistency(
    m: IsingModel, mm: int, n: int, settings: Settings = DEFAULT_SETTINGS
) -> float:
    """Max gap between the first-mm marginal of P_n and f_m(·, n)/F_m(n)."""
    pmf = ising_exact(m, n, settings)
    table = np.reshape(pmf, (2**mm, 2 ** (n - mm)), order="F").sum(axis=1)
    vs = list(itertools.product((0, 1), repeat=mm))
    f = np.array([ising_fmvn(m, mm, v, n, settings) for v in vs])
    # product() varies the last coordinate fastest; state bit k−1 is x_k.
    index = [sum(x << k for k, x in enumerate(v)) for v in vs]
    return float(np.max(np.abs(table[index] - f / f.sum())))


@dataclass
class IsingConvergence:
    """f_m(v, n) traces with α_n, β_n, bound flags, limits and the sandwich."""

    mm: int
    n_max: int
    traces: dict[tuple[int, ...], list[float]] = field(default_factory=dict)
    alphas: dict[tuple[int, ...], list[float]] = field(default_factory=dict)
    betas: list[float] = field(default_factory=list)
    qualifying_from: int = 0
    bound_flags: dict[tuple[int, ...], list[bool | None]] = field(default_factory=dict)
    limits: dict[tuple[int, ...], tuple[float, float]] | None = None
    sandwich_constant: float | None = None
    sandwich_ok: bool | None = None
    marginals: dict[tuple[int, ...], list[float]] = field(default_factory=dict)

    @property
    def ns(self) -> range:
        return range(self.mm, self.n_max + 1)

    @property
    def bounds_ok(self) -> bool:
        """Every qualifying |α_n − 1| ≤ 2β_n check passed."""
        return all(flag is not False for flags in self.bound_flags.values() for flag in flags)

    def rows(self) -> list[dict[str, Any]]:
        out = []
        for v, trace in self.traces.items():
            label = "".join(str(x) for x in v)
            for k, n in enumerate(self.ns):
                out.append(
                    {
                        "n": n,
                        "v": label,
                        "f_m": trace[k],
                        "alpha": self.alphas[v][k] if k < len(self.alphas[v]) else "",
                        "beta": self.betas[k] if k < len(self.betas) else "",
                        "bound_ok": ""
                        if k >= len(self.bound_flags[v]) or self.bound_flags[v][k] is None
                        else self.bound_flags[v][k],
                    }
                )
        return out


def qualifying_index(m: IsingModel, mm: int) -> int:
    """Smallest n ≥ mm past which node n+1 has no neighbor among 1..mm."""
    reach = [j for i in range(1, mm + 1) for j in m.pair_neighbors(i)]
    return max([mm, *reach])


def _tail_log_radius(m: IsingModel, n_max: int) -> float | None:
    """R with Π_{k≥n_max} α_k ∈ [e^{−R}, e^{R}]."""
    if m.regime is Regime.FINITE:
        return sum(m.beta(k) for k in range(n_max, m.size))
    if m.regime is Regime.SUMMABLE:
        return max(0.0, m.mass_bound - m.probed_mass(n_max))
    # Sparse: each new node multiplies by a factor in [1/(1+e^h), 1+e^h], e^h ≤ k^{-2}.
    return 1.0 / n_max


def ising_convergence(
    m: IsingModel, mm: int, n_max: int, settings: Settings = DEFAULT_SETTINGS
) -> IsingConvergence:
    """Trace f_m(v, n) for n = mm..n_max with the α_n/β_n diagnostics.

    Args:
        m: sparse, summable or finite model.
        mm: prefix length.
        n_max: largest truncation (capped by the enumeration cap).
        settings: enumeration cap.

    Returns:
        IsingConvergence. Limits are f(v, n_max)·[e^{−R}, e^{R}] where R
        bounds Σ_{k≥n_max} β_k (or the field mass in the sparse regime);
        they are None when n_max is not past the qualifying index.
    """
    if not 1 <= mm <= n_max:
        raise DomainError(f"need 1 ≤ m ≤ n_max, got m={mm}, n_max={n_max}")
    _check_cap(n_max, settings)
    if m.size is not None and n_max > m.size:
        raise DomainError(f"{m.name} has only {m.size} nodes")

    vs = [tuple(v) for v in itertools.product((0, 1), repeat=mm)]
    result = IsingConvergence(mm=mm, n_max=n_max, qualifying_from=qualifying_index(m, mm))
    prefix = np.array([_prefix_log_weight(m, v) for v in vs])

    # Step 1: f_m(v, n) for every v and n
    for v in vs:
        result.traces[v] = []
        result.marginals[v] = []
    for n in result.ns:
        nums, den = _free_log_partition(m, mm, n, vs)
        f = np.exp(prefix + nums - den)
        total = f.sum()
        for k, v in enumerate(vs):
            result.traces[v].append(float(f[k]))
            result.marginals[v].append(float(f[k] / total))

    # Step 2: α_n and the |α_n − 1| ≤ 2β_n checks past the qualifying index
    result.betas = [m.beta(n) for n in range(mm, n_max)]
    for v in vs:
        trace = result.traces[v]
        result.alphas[v] = [trace[k + 1] / trace[k] for k in range(len(trace) - 1)]
        result.bound_flags[v] = [
            abs(alpha - 1) <= 2 * beta + 1e-12 if n >= result.qualifying_from else None
            for n, alpha, beta in zip(result.ns, result.alphas[v], result.betas)
        ]

    # Step 3: certified limits
    if n_max >= result.qualifying_from:
        radius = _tail_log_radius(m, n_max)
        if radius is not None:
            result.limits = {
                v: (result.traces[v][-1] * math.exp(-radius), result.traces[v][-1] * math.exp(radius))
                for v in vs
            }

    # Step 4: 1/(C 2^m) ≤ P^m_n(v) ≤ C/2^m with C = exp(2Σ|θ|)
    mass = m.total_mass()
    if mass is not None:
        c = math.exp(2 * mass)
        result.sandwich_constant = c
        lo, hi = 1 / (c * 2**mm), c / 2**mm
        result.sandwich_ok = all(
            lo * (1 - 1e-12) <= p <= hi * (1 + 1e-12)
            for ps in result.marginals.values()
            for p in ps
        )

    logger.debug(
        "%s: m=%d n_max=%d bounds_ok=%s sandwich_ok=%s",
        m.name, mm, n_max, result.bounds_ok, result.sandwich_ok,
    )
    return result


IDENTITY_TOL = 1e-10


def ising_convergence_report(
    m: IsingModel, mm: int, n_max: int, settings: Settings = DEFAULT_SETTINGS
) -> DiagnosticReport:
    """Run ising_convergence and grade its traces.

    The f_m identity is checked against the exact marginal at every n;
    the α_n bound, the marginal sandwich and the certified limit become
    one check each.
    """
    result = ising_convergence(m, mm, n_max, settings)
    report = DiagnosticReport(
        name=f"ising convergence on {m.name}", anchor="ising.convergence", tolerance=IDENTITY_TOL
    )

    # Step 1: f_m(·, n)/F_m(n) against the marginal of the exact table
    gaps = [marginal_consistency(m, mm, n, settings) for n in result.ns]
    worst = max(gaps)
    report.add(
        "f_m identity",
        worst <= IDENTITY_TOL,
        anchor="ising.identity",
        detail=f"largest marginal gap {worst:.3g} over n = {mm}..{n_max}",
        max_gap=worst,
    )

    # Step 2: |α_n − 1| ≤ 2β_n past the qualifying index
    graded = [
        (n, "".join(map(str, v)), flag)
        for v, flags in result.bound_flags.items()
        for n, flag in zip(result.ns, flags)
        if flag is not None
    ]
    if not graded:
        report.add(
            "|α_n − 1| ≤ 2β_n",
            Verdict.INCONCLUSIVE,
            detail=f"no n in {mm}..{n_max - 1} reaches the qualifying index {result.qualifying_from}",
        )
    else:
        broken = [f"n={n}, v={v}" for n, v, flag in graded if not flag]
        report.add(
            "|α_n − 1| ≤ 2β_n",
            not broken,
            detail=f"{len(graded)} qualifying ratios from n = {result.qualifying_from}",
            witnesses=broken[:20],
            qualifying_from=result.qualifying_from,
        )

    # Step 3: 1/(C 2^m) ≤ P^m_n(v) ≤ C/2^m
    if result.sandwich_ok is not None:
        report.add(
            "marginal sandwich",
            result.sandwich_ok,
            anchor="ising.sandwich",
            detail=f"C = {result.sandwich_constant:.6g}",
            constant=result.sandwich_constant,
        )

    # Step 4: certified limit interval for f_m(v)
    if result.limits is None:
        report.add(
            "limit of f_m",
            Verdict.INCONCLUSIVE,
            detail="n_max is below the qualifying index",
        )
    else:
        widest = max(hi / lo for lo, hi in result.limits.values())
        report.add(
            "limit of f_m",
            Verdict.SUPPORTED,
            detail=f"every f_m(v) limit lies within a factor {widest:.6g} band",
            limits={"".join(map(str, v)): list(band) for v, band in result.limits.items()},
        )

    report.traces["ising"] = result.rows()
    logger.info("%s: %s", report.name, report.verdict.value)
    return report
