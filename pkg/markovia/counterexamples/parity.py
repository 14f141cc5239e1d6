"""A parity process whose pairwise independences do not combine.

Y₀, Y₁, Y₂ are i.i.d. Bernoulli(p) and Y₃ = Y₁ + Y₂. The tail X_4..X_M is
independent Bernoulli noise, and

    X₁ = Y₁ + Σ_k X_{3k+1},  X₂ = Y₂ + Σ_k X_{3k+2},  X₃ = Y₃ + Σ_k X_{3k+3}  (mod 2),
    X₀ = X₁ + Y₀  (mod 2).

Given everything else, X₁ and X₂ are each determined, so X₀ ⊥ X₁ | rest and
X₀ ⊥ X₂ | rest hold; X₀ ⊥ (X₁, X₂) | X₃..X_M does not.
"""

from dataclasses import dataclass
from typing import Any

import numpy as np

from ..config import DEFAULT_SETTINGS, Settings
from ..errors import DomainError, SizeError
from ..graphoid import Axiom, check_axiom, factorization_distance, marginal_pmf, pmf_tensor
from ..graphoid.relation import relation_from_discrete
from ..log import get_logger
from ..report import DiagnosticReport, Verdict

logger = get_logger(__name__)

MIN_TRUNCATION = 7
MAX_TRUNCATION = 16
CORE = 5


@dataclass(frozen=True)
class ParityProcessSpec:
    """Truncation M, latent parameter p and the tail parameters of X_4..X_M."""

    M: int = MIN_TRUNCATION
    p: float = 0.25
    tail: float | tuple[float, ...] = 0.1

    def __post_init__(self):
        if self.M < MIN_TRUNCATION:
            raise DomainError(f"truncation must be at least {MIN_TRUNCATION}, got {self.M}")
        if not 0 < self.p < 1:
            raise DomainError(f"p must lie in (0, 1), got {self.p}")
        if isinstance(self.tail, tuple) and len(self.tail) != self.M - 3:
            raise DomainError(f"need {self.M - 3} tail parameters, got {len(self.tail)}")
        for q in self.tail_parameters():
            if not 0 < q < 1:
                raise DomainError(f"tail parameter {q} is outside (0, 1)")

    def tail_parameters(self) -> tuple[float, ...]:
        if isinstance(self.tail, tuple):
            return self.tail
        return (float(self.tail),) * (self.M - 3)

    def truncated(self, M: int) -> "ParityProcessSpec":
        tail = self.tail[: M - 3] if isinstance(self.tail, tuple) else self.tail
        return ParityProcessSpec(M=M, p=self.p, tail=tail)


def parity_pmf(spec: ParityProcessSpec, settings: Settings = DEFAULT_SETTINGS) -> np.ndarray:
    """Exact pmf of (X₀..X_M); bit k of the state index is X_k."""
    if spec.M > MAX_TRUNCATION:
        raise SizeError("parity process truncation", spec.M, MAX_TRUNCATION)
    if spec.M + 1 > settings.enumeration_cap:
        raise SizeError("parity process enumeration", spec.M + 1, settings.enumeration_cap)
    qs = np.array(spec.tail_parameters())
    width = len(qs)
    tails = np.arange(2**width, dtype=np.int64)
    tail_bits = (tails[:, None] >> np.arange(width)) & 1
    tail_prob = np.prod(np.where(tail_bits == 1, qs, 1 - qs), axis=1)

    # Tail coordinate X_k sits at column k − 4; residue classes feed X₁, X₂, X₃.
    ks = np.arange(4, spec.M + 1)
    c = [tail_bits[:, (ks % 3) == r].sum(axis=1) % 2 for r in (1, 2, 0)]

    pmf = np.zeros(2 ** (spec.M + 1))
    for y0 in (0, 1):
        for y1 in (0, 1):
            for y2 in (0, 1):
                weight = np.prod([spec.p if y else 1 - spec.p for y in (y0, y1, y2)])
                x1 = (y1 + c[0]) % 2
                x2 = (y2 + c[1]) % 2
                x3 = (y1 + y2 + c[2]) % 2
                x0 = (x1 + y0) % 2
                index = x0 | (x1 << 1) | (x2 << 2) | (x3 << 3) | (tails << 4)
                np.add.at(pmf, index, weight * tail_prob)
    logger.debug("parity pmf M=%d: %d states", spec.M, len(pmf))
    return pmf


def _equal_given_rest(tensor: np.ndarray) -> tuple[float, float]:
    """Range of P(X₀ = X₁ | X₃..X_M) over positive-mass conditioning values."""
    joint = tensor.sum(axis=2)
    equal = (joint[0, 0] + joint[1, 1]).ravel()
    total = joint.sum(axis=(0, 1)).ravel()
    ratio = equal[total > 0] / total[total > 0]
    return float(ratio.min()), float(ratio.max())


def _statistics(spec: ParityProcessSpec, settings: Settings) -> dict[str, float]:
    pmf = parity_pmf(spec, settings)
    tensor = pmf_tensor(pmf)
    rest = list(range(3, spec.M + 1))
    lo, hi = _equal_given_rest(tensor)
    return {
        "pairwise_gap_01": factorization_distance(tensor, [0], [1], [2, *rest]),
        "pairwise_gap_02": factorization_distance(tensor, [0], [2], [1, *rest]),
        "joint_gap": factorization_distance(tensor, [0], [1, 2], rest),
        "p_equal_min": lo,
        "p_equal_max": hi,
        "min_probability": float(pmf.min()),
        "core_min_probability": float(marginal_pmf(pmf, list(range(CORE))).min()),
    }


def parity_verdicts(
    spec: ParityProcessSpec, settings: Settings = DEFAULT_SETTINGS
) -> DiagnosticReport:
    """Check the four finite signatures of the parity process at truncation M.

    Traces hold the same statistics for every truncation 7..M.
    """
    tol = settings.discrete_tol
    report = DiagnosticReport(
        name="parity counterexample", anchor="counterexample.parity", tolerance=tol
    )
    stats = {M: _statistics(spec.truncated(M), settings) for M in range(MIN_TRUNCATION, spec.M + 1)}
    last = stats[spec.M]

    # Step 1: the two pairwise statements given everything else
    pairwise = max(last["pairwise_gap_01"], last["pairwise_gap_02"])
    report.add(
        "X0 ⊥ X1 | rest and X0 ⊥ X2 | rest",
        pairwise <= tol,
        detail=f"largest factorization gap {pairwise:.3g}",
        gap=pairwise,
    )

    # Step 2: the joint statement fails
    gap = last["joint_gap"]
    report.add(
        "X0 ⊥ (X1, X2) | X3..XM fails",
        gap > tol,
        detail=(
            f"factorization gap {gap:.4g}; P(X0 = X1 | X3..XM) = {last['p_equal_min']:.6g}"
            if gap > tol
            else f"the joint statement holds (gap {gap:.3g}); no counterexample at p = {spec.p}"
        ),
        gap=gap,
        p_equal=last["p_equal_min"],
        expected_p_equal=1 - spec.p,
    )

    # Step 3: finite sub-tuples have positive mass, so P5 holds on them
    positive = last["core_min_probability"] > 0
    core = relation_from_discrete(
        marginal_pmf(parity_pmf(spec, settings), list(range(CORE))),
        tol,
        labels=range(CORE),
    )
    p5 = check_axiom(core, Axiom.INTERSECTION, cap=settings.axiom_cap)
    report.add(
        "finite sub-tuples satisfy P5",
        positive and p5.verdict.ok,
        anchor="graphoid.intersection",
        detail=f"min probability of X0..X{CORE - 1} {last['core_min_probability']:.3g}; "
        f"P5 on X0..X{CORE - 1}: {p5.instantiations} instantiations, "
        f"{len(p5.witnesses)} violations",
        min_probability=last["core_min_probability"],
    )

    # Step 4: finitely many ones, so every tail event is X_D-measurable
    report.add(
        "decorrelation via finite support",
        Verdict.SUPPORTED,
        detail=(
            "the tail has finitely many ones almost surely; on the truncation "
            "every tail event projects onto the conditioning coordinates"
        ),
        expected_tail_ones=float(sum(spec.tail_parameters())),
    )

    report.traces["parity"] = [
        {"example": "parity", "param": M, "statistic": key, "value": value}
        for M, row in stats.items()
        for key, value in row.items()
    ]
    report.notes.append(
        "All statements are evidence on the truncation X0..XM; the tail is finite here."
    )
    logger.info("parity counterexample M=%d: %s", spec.M, report.verdict.value)
    return report


def parity_from_config(data: dict[str, Any]) -> ParityProcessSpec:
    tail = data.get("tail", 0.1)
    return ParityProcessSpec(
        M=int(data.get("M", MIN_TRUNCATION)),
        p=float(data.get("p", 0.25)),
        tail=tuple(float(q) for q in tail) if isinstance(tail, list) else float(tail),
    )
