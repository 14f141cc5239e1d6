"""Pairwise, local and global Markov properties and their equivalence audit."""

from enum import Enum

from ..config import DEFAULT_SETTINGS, Settings
from ..errors import DomainError
from ..graph import (
    LazyGraph,
    explicit_graph,
    reach_avoiding,
    separating_triples,
    vertex_set,
)
from ..log import get_logger
from ..report import DiagnosticReport, Verdict
from .axioms import Axiom, check_axiom
from .relation import CIRelation, describe
from .statements import CIStatement

logger = get_logger(__name__)

MAX_LISTED = 20


class MarkovProperty(Enum):
    PAIRWISE = "P*"
    LOCAL = "L*"
    GLOBAL = "G*"

    @classmethod
    def parse(cls, label: str) -> "MarkovProperty":
        for p in cls:
            if label in (p.value, p.value.rstrip("*"), p.name, p.name.lower()):
                return p
        raise ValueError(f"unknown Markov property {label!r}")


_ANCHORS = {
    MarkovProperty.PAIRWISE: "markov.pairwise",
    MarkovProperty.LOCAL: "markov.local",
    MarkovProperty.GLOBAL: "markov.global",
}


def _require_same_vertices(r: CIRelation, g: LazyGraph) -> None:
    if not g.is_finite:
        raise DomainError(f"{g.name} is infinite; Markov checks need a finite graph")
    if tuple(g.vertices) != tuple(r.ground_set):
        raise DomainError(
            f"graph vertices {list(g.vertices)} differ from ground set {list(r.ground_set)}"
        )


def markov_statements(g: LazyGraph, which: MarkovProperty) -> list[CIStatement]:
    """Every statement a property requires of a relation on g."""
    vs = g.vertices
    out: list[CIStatement] = []
    if which is MarkovProperty.PAIRWISE:
        for i in vs:
            nbrs = set(g.neighbors(i))
            for j in vs:
                if j > i and j not in nbrs:
                    rest = tuple(v for v in vs if v not in (i, j))
                    out.append(CIStatement((i,), (j,), rest))
    elif which is MarkovProperty.LOCAL:
        for i in vs:
            cl = set(g.closure(i))
            far = tuple(v for v in vs if v not in cl)
            if far:
                out.append(CIStatement((i,), far, g.neighbors(i)))
    else:
        for a, b, s in separating_triples(g):
            out.append(CIStatement(a, b, s))
    return out


def _failing(r: CIRelation, g: LazyGraph, which: MarkovProperty) -> tuple[int, list[CIStatement]]:
    statements = markov_statements(g, which)
    failed = [st for st in statements if not r.holds_statement(st)]
    return len(statements), failed


def check_markov(
    r: CIRelation, g: LazyGraph, which: MarkovProperty | str
) -> DiagnosticReport:
    """Test one Markov property of r with respect to g."""
    if isinstance(which, str):
        which = MarkovProperty.parse(which)
    _require_same_vertices(r, g)
    tested, failed = _failing(r, g, which)
    report = DiagnosticReport(name=f"markov {which.value}", anchor=_ANCHORS[which])
    report.add(
        f"{which.value} on {g.name}",
        not failed,
        detail=f"{tested} statements tested, {len(failed)} failed",
        witnesses=[describe(r, st) for st in failed[:MAX_LISTED]],
        tested=tested,
        failed=len(failed),
    )
    logger.info("%s on %s: %s", which.value, g.name, report.verdict.value)
    return report


def pairwise_graph(r: CIRelation) -> LazyGraph:
    """Edge (i, j) iff {i} ⊥ {j} | V∖{i,j} fails, so P* holds by construction."""
    vs = r.ground_set
    edges = []
    for k, i in enumerate(vs):
        for j in vs[k + 1 :]:
            rest = tuple(v for v in vs if v not in (i, j))
            if not r.holds((i,), (j,), rest):
                edges.append((i, j))
    return explicit_graph(edges, vs)


def _implication(
    report: DiagnosticReport,
    label: str,
    premise: tuple[str, list[CIStatement]],
    conclusion: tuple[str, list[CIStatement]],
    r: CIRelation,
    asserted: bool,
    reason: str,
    evidence_only: bool = False,
) -> None:
    premise_name, premise_failed = premise
    conclusion_name, conclusion_failed = conclusion
    if not asserted:
        report.add(
            label,
            Verdict.INCONCLUSIVE,
            anchor="equivalence",
            detail=f"{reason}; {label} not asserted",
        )
        return
    violated = not premise_failed and bool(conclusion_failed)
    if violated and evidence_only:
        # The axioms held only on sampled instantiations.
        report.add(
            label,
            Verdict.INCONCLUSIVE,
            anchor="equivalence",
            detail=f"{premise_name} holds but {conclusion_name} fails; axioms were only sampled",
            witnesses=[describe(r, st) for st in conclusion_failed[:MAX_LISTED]],
        )
        return
    report.add(
        label,
        not violated,
        anchor="equivalence",
        detail=(
            f"{premise_name} holds but {conclusion_name} fails"
            if violated
            else f"{premise_name} {'holds' if not premise_failed else 'fails'}, "
            f"{conclusion_name} {'holds' if not conclusion_failed else 'fails'}"
        ),
        witnesses=[describe(r, st) for st in conclusion_failed[:MAX_LISTED]] if violated else [],
    )


def equivalence_audit(
    r: CIRelation,
    g: LazyGraph,
    settings: Settings = DEFAULT_SETTINGS,
) -> DiagnosticReport:
    """Audit G* ⇒ L* ⇒ P* and, for graphoids, P* ⇒ G*.

    A violated implication that was asserted means the implementation is
    wrong; failed axioms only withdraw the assertion. Above
    settings.axiom_cap the axioms are sampled, and a sampled pass is
    evidence: a violated implication resting on it is inconclusive.
    """
    _require_same_vertices(r, g)
    report = DiagnosticReport(name="equivalence audit", anchor="equivalence")

    # Step 1: axioms, sampled above the exhaustive cap
    sample = settings.axiom_samples if len(r.ground_set) > settings.axiom_cap else None
    axioms = {
        axiom: check_axiom(r, axiom, cap=settings.axiom_cap, sample=sample, seed=0)
        for axiom in Axiom
    }
    for axiom, result in axioms.items():
        check = result.to_check()
        if not result.verdict.ok:
            # A relation that is not a graphoid withdraws assertions; it is not a defect.
            check.verdict = Verdict.INCONCLUSIVE
        elif result.mode == "sampled":
            check.verdict = Verdict.SUPPORTED
        report.checks.append(check)
    if sample is not None:
        report.notes.append(
            f"{len(r.ground_set)} variables exceed the exhaustive cap {settings.axiom_cap}; "
            f"axioms were checked on {sample} seeded random instantiations each"
        )

    # Step 2: the three properties on g
    failed = {p: _failing(r, g, p)[1] for p in MarkovProperty}
    for p in MarkovProperty:
        report.add(
            f"{p.value} holds",
            Verdict.PASS,
            anchor=_ANCHORS[p],
            detail="holds" if not failed[p] else f"{len(failed[p])} statements fail",
            holds=not failed[p],
        )

    # Step 3: implications, asserted only where the axioms they rest on pass
    def ok(*ids: Axiom) -> bool:
        return all(axioms[a].verdict.ok for a in ids)

    def sampled(*ids: Axiom) -> bool:
        return any(axioms[a].mode == "sampled" for a in ids)

    _implication(
        report,
        "G*⇒L*",
        ("G*", failed[MarkovProperty.GLOBAL]),
        ("L*", failed[MarkovProperty.LOCAL]),
        r,
        asserted=True,
        reason="",
    )
    _implication(
        report,
        "L*⇒P*",
        ("L*", failed[MarkovProperty.LOCAL]),
        ("P*", failed[MarkovProperty.PAIRWISE]),
        r,
        asserted=ok(Axiom.SYMMETRY, Axiom.DECOMPOSITION, Axiom.WEAK_UNION),
        reason="P2*/P3* fail",
        evidence_only=sampled(Axiom.SYMMETRY, Axiom.DECOMPOSITION, Axiom.WEAK_UNION),
    )
    graphoid = ok(*Axiom)
    missing = [a.value for a in Axiom if not axioms[a].verdict.ok]
    _implication(
        report,
        "P*⇒G*",
        ("P*", failed[MarkovProperty.PAIRWISE]),
        ("G*", failed[MarkovProperty.GLOBAL]),
        r,
        asserted=graphoid,
        reason=f"{'/'.join(missing)} fails" if missing else "",
        evidence_only=sampled(*Axiom),
    )

    # Reachability closures behind each failing separation statement.
    closures = []
    for st in failed[MarkovProperty.GLOBAL][:MAX_LISTED]:
        a_tilde, _ = reach_avoiding(g, st.a, st.c)
        b_tilde = vertex_set(v for v in g.vertices if v not in a_tilde and v not in st.c)
        closures.append(
            {"statement": str(st), "a_tilde": list(a_tilde), "b_tilde": list(b_tilde)}
        )
    if closures:
        report.traces["separation_closures"] = closures

    logger.info("equivalence audit on %s: %s", r.name, report.verdict.value)
    return report
