"""Normalization and the derivability relation for anonymity atoms.

Hypotheses and goals are ``Atom`` values; entailment questions are asked
against an ``AtomSet``.  Three engines cover three fragments:

* ``entails_anonymity`` decides the plain (k = 2) fragment completely.
  The decision rule is subsumption after normalization: a goal follows
  exactly when some hypothesis publishes at least the goal's attributes
  and protects a subset of the goal's protected attributes, or when the
  hypothesis set is inconsistent.
* ``entails_k_simple`` decides the fragment where every protected side
  is a single attribute, additionally requiring the hypothesis
  multiplicity to be at least the goal's.
* ``entails_k_saturate`` is a sound saturation for arbitrary k-atoms.
  It closes the hypothesis set under the axioms (permutation and
  cancellation are absorbed into normal forms, weakening moves shrink
  the published side and grow the protected side, and chain composition
  multiplies multiplicities).  It answers Derivable or Unknown, never
  NotDerivable, since no completeness guarantee exists for this
  fragment.

Positive answers carry a ``Derivation`` tree that an independent
verifier (``verify_derivation``) can re-check; negative answers carry a
machine-verified countermodel built in :mod:`anonatom.countermodel`.

Derivation steps are checked at the set level: each rule's legality is
insensitive to attribute order and duplicates, which matches the
semantics (grouping ignores both).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Iterable

from .atoms import Atom
from .errors import FragmentError, ResourceError

if TYPE_CHECKING:  # pragma: no cover - import cycle guard, typing only
    from .countermodel import CountermodelReport


@dataclass(frozen=True)
class NormalAtom:
    """Order-free atom with the protected side disjoint from the published
    side (shared attributes cancel; within a published-group they are
    constant and cannot contribute distinct protected tuples)."""

    published: frozenset[str]
    protected: frozenset[str]
    k: int


def normalize(atom: Atom) -> NormalAtom:
    pub = frozenset(atom.published)
    return NormalAtom(pub, frozenset(atom.protected) - pub, atom.k)


def atom_from_normal(normal: NormalAtom) -> Atom:
    """Canonical sequence form of a normal atom (attributes sorted)."""
    return Atom(tuple(sorted(normal.published)), tuple(sorted(normal.protected)), normal.k)


@dataclass(frozen=True)
class AtomSet:
    """A hypothesis set plus the attribute universe it lives in.

    ``extra_attributes`` widens the universe beyond the attributes the
    member atoms mention (goals contribute theirs at query time).
    """

    atoms: tuple[Atom, ...]
    extra_attributes: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        deduped: list[Atom] = []
        seen: set[Atom] = set()
        for atom in self.atoms:
            if not isinstance(atom, Atom):
                raise TypeError(f"AtomSet members must be anonymity atoms, got {atom!r}")
            if atom not in seen:
                seen.add(atom)
                deduped.append(atom)
        object.__setattr__(self, "atoms", tuple(deduped))
        object.__setattr__(self, "extra_attributes", frozenset(self.extra_attributes))

    @classmethod
    def of(cls, *atoms: Atom, extra_attributes: Iterable[str] = ()) -> "AtomSet":
        return cls(tuple(atoms), frozenset(extra_attributes))

    @property
    def attributes(self) -> frozenset[str]:
        out = set(self.extra_attributes)
        for atom in self.atoms:
            out |= atom.attributes()
        return frozenset(out)

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __contains__(self, atom: object) -> bool:
        return atom in self.atoms


def universe(sigma: AtomSet, goal: Atom) -> frozenset[str]:
    """All attributes occurring in the hypotheses or the goal."""
    return sigma.attributes | goal.attributes()


class Rule(str, Enum):
    HYPOTHESIS = "hyp"
    PERMUTATION = "A1"
    MONOTONICITY = "A2"
    CANCELLATION = "A3"
    EMPTY_PROTECTED = "A4"
    COMPOSITION = "A5"
    EX_FALSO = "ex-falso"
    K1_TRIVIAL = "k1-trivial"


@dataclass(frozen=True)
class Derivation:
    """A proof tree: leaves are hypotheses (or trivially-true k = 1 atoms),
    internal nodes apply one named rule."""

    rule: Rule
    conclusion: Atom
    premises: tuple["Derivation", ...] = ()

    def to_dict(self) -> dict:
        return {
            "rule": self.rule.value,
            "conclusion": _atom_to_dict(self.conclusion),
            "premises": [p.to_dict() for p in self.premises],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Derivation":
        return cls(
            Rule(data["rule"]),
            _atom_from_dict(data["conclusion"]),
            tuple(cls.from_dict(p) for p in data.get("premises", ())),
        )


def _atom_to_dict(atom: Atom) -> dict:
    return {"published": list(atom.published), "protected": list(atom.protected), "k": atom.k}


def _atom_from_dict(data: dict) -> Atom:
    return Atom(tuple(data["published"]), tuple(data["protected"]), int(data["k"]))


class Verdict(str, Enum):
    DERIVABLE = "derivable"
    NOT_DERIVABLE = "not-derivable"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Entailment:
    verdict: Verdict
    derivation: Derivation | None = None
    countermodel: "CountermodelReport | None" = None
    saturated: frozenset[NormalAtom] | None = None

    @property
    def derivable(self) -> bool:
        return self.verdict is Verdict.DERIVABLE


def is_inconsistent(sigma: AtomSet) -> bool:
    """True iff some hypothesis cancels to an empty protected side with
    k >= 2; such a set is satisfied by the empty team only."""
    return _inconsistent_member(sigma) is not None


def _inconsistent_member(sigma: AtomSet) -> Atom | None:
    for atom in sigma.atoms:
        norm = normalize(atom)
        if not norm.protected and norm.k >= 2:
            return atom
    return None


def _ex_falso(goal: Atom, bad: Atom) -> Derivation:
    return Derivation(Rule.EX_FALSO, goal, (Derivation(Rule.HYPOTHESIS, bad),))


def _weakening(hyp: Atom, goal: Atom) -> Derivation:
    """Derivation of ``goal`` from a subsuming hypothesis: cancellation
    first if shared attributes must go, then weakening (or a pure
    permutation when nothing changes set-wise)."""
    node = Derivation(Rule.HYPOTHESIS, hyp)
    current = hyp
    pub_set = set(current.published)
    cancelled = tuple(a for a in current.protected if a not in pub_set)
    if cancelled != current.protected:
        current = Atom(current.published, cancelled, current.k)
        node = Derivation(Rule.CANCELLATION, current, (node,))
    if current != goal:
        same_sets = (
            set(current.published) == set(goal.published)
            and set(current.protected) == set(goal.protected)
            and current.k == goal.k
        )
        node = Derivation(Rule.PERMUTATION if same_sets else Rule.MONOTONICITY, goal, (node,))
    return node


def entails_anonymity(sigma: AtomSet, goal: Atom) -> Entailment:
    """Decide the plain-anonymity fragment (every multiplicity is 2).

    Derivable answers carry a hypothesis/cancellation/weakening tree;
    NotDerivable answers carry a verified countermodel team.
    """
    if goal.k != 2:
        raise FragmentError(
            f"goal has multiplicity {goal.k}; use entails_k_simple or entails_k_saturate"
        )
    for atom in sigma.atoms:
        if atom.k != 2:
            raise FragmentError(
                f"hypothesis {atom} has multiplicity {atom.k}; "
                "use entails_k_simple or entails_k_saturate"
            )
    from . import countermodel  # deferred: countermodel imports this module

    bad = _inconsistent_member(sigma)
    if bad is not None:
        return Entailment(Verdict.DERIVABLE, derivation=_ex_falso(goal, bad))
    g = normalize(goal)
    if not g.protected:
        report = countermodel.build_full_grid_countermodel(sigma, goal)
        return Entailment(Verdict.NOT_DERIVABLE, countermodel=report)
    for hyp in sigma.atoms:
        h = normalize(hyp)
        if g.published <= h.published and h.protected <= g.protected:
            return Entailment(Verdict.DERIVABLE, derivation=_weakening(hyp, goal))
    report = countermodel.build_anonymity_countermodel(sigma, goal)
    return Entailment(Verdict.NOT_DERIVABLE, countermodel=report)


def entails_k_simple(sigma: AtomSet, goal: Atom) -> Entailment:
    """Decide entailment for simple atoms (single protected attribute,
    arbitrary multiplicities).

    A goal follows exactly when it is trivial (k = 1), the hypotheses
    are inconsistent, or some hypothesis publishes at least the goal's
    attributes, protects the same attribute, and has multiplicity >= the
    goal's.
    """
    for atom in (*sigma.atoms, goal):
        if not atom.is_simple:
            raise FragmentError(
                f"{atom} is not simple (one protected attribute); use entails_k_saturate"
            )
    from . import countermodel

    if goal.k == 1:
        return Entailment(Verdict.DERIVABLE, derivation=Derivation(Rule.K1_TRIVIAL, goal))
    bad = _inconsistent_member(sigma)
    if bad is not None:
        return Entailment(Verdict.DERIVABLE, derivation=_ex_falso(goal, bad))
    g = normalize(goal)
    if not g.protected:
        report = countermodel.build_full_grid_countermodel(sigma, goal)
        return Entailment(Verdict.NOT_DERIVABLE, countermodel=report)
    for hyp in sigma.atoms:
        h = normalize(hyp)
        if g.published <= h.published and h.protected == g.protected and hyp.k >= goal.k:
            return Entailment(Verdict.DERIVABLE, derivation=_weakening(hyp, goal))
    report = countermodel.build_k_anonymity_countermodel(sigma, goal)
    return Entailment(Verdict.NOT_DERIVABLE, countermodel=report)


# Saturation bookkeeping: per (published, protected) pair we keep the best
# multiplicity reached (capped at the goal's, which weakening justifies)
# and, per reached triple, how it was derived.
_Key = tuple[frozenset[str], frozenset[str]]
_Triple = tuple[frozenset[str], frozenset[str], int]

# Trivially-true k = 1 atoms are seeded as composition fodder only while
# the universe stays small enough to enumerate the 3^|W| disjoint pairs.
_K1_SEED_LIMIT = 6561


class _Saturation:
    def __init__(self, sigma: AtomSet, goal: Atom, max_steps: int):
        self.cap = goal.k
        self.attrs = universe(sigma, goal)
        self.max_steps = max_steps
        self.best: dict[_Key, int] = {}
        self.proofs: dict[_Triple, tuple] = {}
        self.by_published: dict[frozenset[str], set[_Key]] = {}
        self.by_closure: dict[frozenset[str], set[_Key]] = {}
        self.queue: list[_Triple] = []
        self.steps = 0

    def offer(self, key: _Key, k: int, proof: tuple) -> None:
        k = min(k, self.cap)
        if self.best.get(key, 0) >= k:
            return
        self.best[key] = k
        triple = (key[0], key[1], k)
        self.proofs[triple] = proof
        self.queue.append(triple)
        self.by_published.setdefault(key[0], set()).add(key)
        self.by_closure.setdefault(key[0] | key[1], set()).add(key)

    def run(self) -> None:
        while self.queue:
            self.steps += 1
            if self.steps > self.max_steps:
                raise ResourceError(
                    f"saturation budget exceeded after {self.steps - 1} steps; "
                    f"partial closure holds {len(self.best)} atoms"
                )
            pub, prot, k = self.queue.pop()
            if self.best.get((pub, prot), 0) != k:
                continue  # superseded by a better multiplicity
            source = (pub, prot, k)
            # weakening moves: drop a published attribute (optionally
            # re-adding it on the protected side) or extend the protected side
            for a in pub:
                smaller = pub - {a}
                self.offer((smaller, prot), k, ("A2", source))
                self.offer((smaller, prot | {a}), k, ("A2", source))
            for w in self.attrs - pub - prot:
                self.offer((pub, prot | {w}), k, ("A2", source))
            # chain composition with this atom as the first link ...
            for key2 in list(self.by_published.get(pub | prot, ())):
                k2 = self.best[key2]
                self.offer((pub, prot | key2[1]), k * k2, ("A5", source, (key2[0], key2[1], k2)))
            # ... and as the second link
            for key1 in list(self.by_closure.get(pub, ())):
                k1 = self.best[key1]
                self.offer((key1[0], key1[1] | prot), k1 * k, ("A5", (key1[0], key1[1], k1), source))

    def rebuild(self, triple: _Triple) -> Derivation:
        proof = self.proofs[triple]
        conclusion = atom_from_normal(NormalAtom(*triple))
        if proof[0] == "hyp":
            hyp: Atom = proof[1]
            node = Derivation(Rule.HYPOTHESIS, hyp)
            if hyp != conclusion:
                dropped = set(hyp.protected) - triple[1]
                rule = Rule.CANCELLATION if dropped else Rule.PERMUTATION
                node = Derivation(rule, conclusion, (node,))
            return node
        if proof[0] == "k1":
            return Derivation(Rule.K1_TRIVIAL, conclusion)
        if proof[0] == "A2":
            return Derivation(Rule.MONOTONICITY, conclusion, (self.rebuild(proof[1]),))
        first = self.rebuild(proof[1])
        second = self.rebuild(proof[2])
        product = proof[1][2] * proof[2][2]
        composed = Atom(conclusion.published, conclusion.protected, product)
        node = Derivation(Rule.COMPOSITION, composed, (first, second))
        if product != triple[2]:
            node = Derivation(Rule.MONOTONICITY, conclusion, (node,))
        return node


def entails_k_saturate(sigma: AtomSet, goal: Atom, *, max_steps: int = 100_000) -> Entailment:
    """Sound saturation for arbitrary k-atoms: Derivable with a proof tree
    when the closure reaches the goal, otherwise Unknown with the
    saturated normal-atom set.  Never claims NotDerivable.
    """
    if goal.k == 1:
        return Entailment(Verdict.DERIVABLE, derivation=Derivation(Rule.K1_TRIVIAL, goal))
    bad = _inconsistent_member(sigma)
    if bad is not None:
        return Entailment(Verdict.DERIVABLE, derivation=_ex_falso(goal, bad))

    sat = _Saturation(sigma, goal, max_steps)
    for hyp in sigma.atoms:
        norm = normalize(hyp)
        sat.offer((norm.published, norm.protected), norm.k, ("hyp", hyp))
    if 3 ** len(sat.attrs) <= _K1_SEED_LIMIT:
        for pub, prot in _disjoint_pairs(sat.attrs):
            sat.offer((pub, prot), 1, ("k1",))
    sat.run()

    g = normalize(goal)
    key = (g.published, g.protected)
    saturated = frozenset(NormalAtom(p, r, k) for (p, r), k in sat.best.items())
    if sat.best.get(key, 0) >= goal.k:
        triple = (g.published, g.protected, sat.best[key])
        node = sat.rebuild(triple)
        if node.conclusion != goal:
            same_sets = set(goal.published) == set(node.conclusion.published) and set(
                goal.protected
            ) == set(node.conclusion.protected)
            rule = Rule.PERMUTATION if same_sets and goal.k == node.conclusion.k else Rule.MONOTONICITY
            node = Derivation(rule, goal, (node,))
        return Entailment(Verdict.DERIVABLE, derivation=node, saturated=saturated)
    return Entailment(Verdict.UNKNOWN, saturated=saturated)


def _disjoint_pairs(attrs: frozenset[str]):
    names = sorted(attrs)
    for mask in range(3 ** len(names)):
        pub, prot = set(), set()
        m = mask
        for name in names:
            m, r = divmod(m, 3)
            if r == 1:
                pub.add(name)
            elif r == 2:
                prot.add(name)
        yield frozenset(pub), frozenset(prot)


def explain_derivation(derivation: Derivation, sigma: AtomSet) -> str | None:
    """None when the tree is a legal proof from ``sigma``; otherwise a
    message locating the first illegal step."""
    return _explain(derivation, sigma, "root")


def verify_derivation(derivation: Derivation, sigma: AtomSet) -> bool:
    """Independent proof checker for Derivation trees."""
    return explain_derivation(derivation, sigma) is None


def _explain(node: Derivation, sigma: AtomSet, path: str) -> str | None:
    for i, premise in enumerate(node.premises):
        problem = _explain(premise, sigma, f"{path}.premises[{i}]")
        if problem is not None:
            return problem
    c = node.conclusion
    rule = node.rule
    if rule is Rule.HYPOTHESIS:
        if node.premises:
            return f"{path}: hypothesis leaves take no premises"
        if c not in sigma:
            return f"{path}: {c} is not a hypothesis"
        return None
    if rule is Rule.K1_TRIVIAL:
        if node.premises:
            return f"{path}: k1-trivial leaves take no premises"
        if c.k != 1:
            return f"{path}: k1-trivial conclusion must have multiplicity 1"
        return None
    if rule in (Rule.EX_FALSO, Rule.EMPTY_PROTECTED):
        if len(node.premises) != 1:
            return f"{path}: {rule.value} takes exactly one premise"
        p = normalize(node.premises[0].conclusion)
        if p.protected or p.k < 2:
            return f"{path}: {rule.value} premise must cancel to an empty protected side with k >= 2"
        return None
    if rule in (Rule.PERMUTATION, Rule.MONOTONICITY, Rule.CANCELLATION):
        if len(node.premises) != 1:
            return f"{path}: {rule.value} takes exactly one premise"
        p = node.premises[0].conclusion
        p_pub, p_prot = set(p.published), set(p.protected)
        c_pub, c_prot = set(c.published), set(c.protected)
        if rule is Rule.PERMUTATION:
            if p_pub == c_pub and p_prot == c_prot and p.k == c.k:
                return None
            return f"{path}: permutation must preserve both attribute sets and the multiplicity"
        if rule is Rule.MONOTONICITY:
            if c_pub <= p_pub and c_prot >= p_prot and c.k <= p.k:
                return None
            return (
                f"{path}: weakening may only shrink the published side, "
                "grow the protected side, and lower the multiplicity"
            )
        # cancellation: only attributes present on the published side may leave
        if c_pub == p_pub and c_prot <= p_prot and (p_prot - c_prot) <= p_pub and c.k == p.k:
            return None
        return f"{path}: cancellation may only drop protected attributes that are published"
    if rule is Rule.COMPOSITION:
        if len(node.premises) < 2:
            return f"{path}: composition takes at least two premises"
        links = [q.conclusion for q in node.premises]
        running = set(links[0].published)
        if set(c.published) != running:
            return f"{path}: composition must publish what its first link publishes"
        product = 1
        union_prot: set[str] = set()
        for link in links:
            if set(link.published) != running:
                return f"{path}: composition links must chain published+protected sides"
            running |= set(link.protected)
            union_prot |= set(link.protected)
            product *= link.k
        if set(c.protected) != union_prot:
            return f"{path}: composition must protect the union of its links' protected sides"
        if c.k != product:
            return f"{path}: composition multiplicity must be the product of its links'"
        return None
    return f"{path}: unknown rule {rule!r}"
