"""Size, structural-cohesion and semiotic quality metrics over a Taxonomy."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .taxonomy import Taxonomy, find_cycle


@dataclass(frozen=True)
class SizeMetrics:
    size_c: int  # concepts (root included)
    size_i: int  # instance statements
    size_a: int  # (attribute-name, value-type) pairs
    size_r: int  # relation statements
    size_total: int


@dataclass(frozen=True)
class StructuralMetrics:
    n_rn: int          # root nodes (no parent)
    n_ln: int          # leaf nodes (no concept children)
    max_spl: int       # longest root-to-leaf simple path, in edges
    n_ic: int          # isolated concepts: no parent, children or instances, root excluded
    tnrnr: int         # concepts reachable from the roots (roots included)
    anrnr: Fraction    # tnrnr / n_rn, kept exact


@dataclass(frozen=True)
class SemioticReport:
    lawfulness: bool        # file parsed
    richness: int           # distinct statement kinds used (1..5)
    interpretability: bool  # names nonempty and unique
    consistency: bool       # acyclic is-a, single-owner instances
    clarity: bool           # no two concepts differ only by case
    comprehensiveness: int  # equals SizeMetrics.size_total
    accuracy: bool          # operator attestation, never computed


def size_metrics(tax: Taxonomy) -> SizeMetrics:
    size_c = len(tax.parent)
    size_i = len(tax.instances)
    size_a = sum(len(pairs) for pairs in tax.attributes.values())
    size_r = len(tax.relations)
    return SizeMetrics(size_c, size_i, size_a, size_r, size_c + size_i + size_a + size_r)


def _longest_depths(children: dict[str, list[str]], roots: list[str]) -> dict[str, int]:
    # Iterative post-order; the is-a graph is acyclic by validation.
    depth: dict[str, int] = {}
    for root in roots:
        stack: list[tuple[str, bool]] = [(root, False)]
        while stack:
            node, ready = stack.pop()
            if ready:
                kids = children.get(node, [])
                depth[node] = 1 + max(depth[k] for k in kids) if kids else 0
                continue
            if node in depth:
                continue
            stack.append((node, True))
            for kid in children.get(node, []):
                if kid not in depth:
                    stack.append((kid, False))
    return depth


def structural_metrics(tax: Taxonomy) -> StructuralMetrics:
    children = tax.children_map()
    roots = [c for c, p in tax.parent.items() if p is None]
    n_rn = len(roots)
    n_ln = sum(1 for c in tax.parent if not children.get(c))

    depth = _longest_depths(children, roots)
    max_spl = max((depth[r] for r in roots), default=0)

    reachable: set[str] = set()
    frontier = list(roots)
    while frontier:
        node = frontier.pop()
        if node in reachable:
            continue
        reachable.add(node)
        frontier.extend(children.get(node, []))
    tnrnr = len(reachable)

    has_instances = set(tax.instances.values())
    n_ic = sum(
        1
        for c, p in tax.parent.items()
        if p is None and not children.get(c) and c not in has_instances and c != tax.root
    )

    anrnr = Fraction(tnrnr, n_rn) if n_rn else Fraction(0)
    return StructuralMetrics(n_rn, n_ln, max_spl, n_ic, tnrnr, anrnr)


def semiotic_report(tax: Taxonomy, accuracy_attested: bool = False) -> SemioticReport:
    """Syntactic / semantic / pragmatic quality summary of a parsed taxonomy.

    Truthfulness of the modeled content cannot be computed mechanically, so
    ``accuracy`` is whatever the operator attested in the configuration.
    """
    richness = 1  # a validated taxonomy always has a root statement
    if len(tax.parent) > 1:
        richness += 1
    if tax.instances:
        richness += 1
    if tax.relations:
        richness += 1
    if tax.attributes:
        richness += 1

    names = list(tax.parent) + list(tax.instances)
    interpretability = all(n.strip() for n in names) and len(set(tax.parent)) == len(tax.parent)
    consistency = find_cycle(tax.parent) is None  # instance single-ownership holds by construction
    clarity = len({c.casefold() for c in tax.parent}) == len(tax.parent)
    total = size_metrics(tax).size_total

    return SemioticReport(
        lawfulness=True,
        richness=richness,
        interpretability=interpretability,
        consistency=consistency,
        clarity=clarity,
        comprehensiveness=total,
        accuracy=accuracy_attested,
    )
