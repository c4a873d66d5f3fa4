"""Anonymity, k-anonymity, and auxiliary atoms, with their checkers.

The central statement is ``published Y_k protected``: every group of
rows that agree on the published attributes must exhibit at least k
distinct value tuples over the protected attributes, so knowing someone's
published values never narrows their protected values below k candidates.
k = 2 is the plain anonymity atom: for every row there is another row
with the same published tuple and a different protected tuple.

Several independently coded routes to the same semantics are exported
(per-row witness search, an inclusion-atom translation) so that tests
can cross-check them, plus the counting-based criterion that looks
similar but is genuinely different.

Conventions the definitions leave open: the empty team satisfies every
atom; an empty protected side with k >= 2 holds only on the empty team
(no row can differ from itself on the empty tuple); k = 1 holds on every
team.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .errors import ArityError
from .team import Row, Team, group_by


def _positive_multiplicity(k: object) -> int:
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ValueError(f"multiplicity must be a positive integer, got {k!r}")
    return k


@dataclass(frozen=True)
class Atom:
    """``published Y_k protected``: publishing keeps the protected tuple
    k-anonymous.  k defaults to 2, the plain anonymity atom."""

    published: tuple[str, ...]
    protected: tuple[str, ...]
    k: int = 2

    def __post_init__(self) -> None:
        object.__setattr__(self, "published", tuple(self.published))
        object.__setattr__(self, "protected", tuple(self.protected))
        _positive_multiplicity(self.k)

    @property
    def is_simple(self) -> bool:
        """A single protected attribute (before any normalization)."""
        return len(self.protected) == 1

    def attributes(self) -> frozenset[str]:
        return frozenset(self.published) | frozenset(self.protected)


@dataclass(frozen=True)
class DependenceAtom:
    """``dep(determinants; dependents)``: equal determinant tuples force
    equal dependent tuples."""

    determinants: tuple[str, ...]
    dependents: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "determinants", tuple(self.determinants))
        object.__setattr__(self, "dependents", tuple(self.dependents))

    def attributes(self) -> frozenset[str]:
        return frozenset(self.determinants) | frozenset(self.dependents)


@dataclass(frozen=True)
class InclusionAtom:
    """``inc(source; target)``: every source tuple occurs as a target tuple."""

    source: tuple[str, ...]
    target: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(self, "target", tuple(self.target))
        if len(self.source) != len(self.target):
            raise ArityError(
                f"inclusion sides must have equal length: {len(self.source)} vs {len(self.target)}"
            )

    def attributes(self) -> frozenset[str]:
        return frozenset(self.source) | frozenset(self.target)


@dataclass(frozen=True)
class IndependenceAtom:
    """``ind(left; right)``: every occurring left tuple combines with
    every occurring right tuple in some row."""

    left: tuple[str, ...]
    right: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))

    def attributes(self) -> frozenset[str]:
        return frozenset(self.left) | frozenset(self.right)


AuxAtom = Union[DependenceAtom, InclusionAtom, IndependenceAtom]
AnyAtom = Union[Atom, AuxAtom]


class _UnboundedDegree:
    """Anonymity degree of the empty team; compares above every integer."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "UNBOUNDED"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _UnboundedDegree)

    def __hash__(self) -> int:
        return hash("anonatom.UNBOUNDED")

    def __gt__(self, other: object) -> bool:
        return isinstance(other, int)

    def __ge__(self, other: object) -> bool:
        return isinstance(other, (int, _UnboundedDegree))

    def __lt__(self, other: object) -> bool:
        return False

    def __le__(self, other: object) -> bool:
        return isinstance(other, _UnboundedDegree)


UNBOUNDED = _UnboundedDegree()
Degree = Union[int, _UnboundedDegree]


def _tuples(team: Team, attrs: Sequence[str]):
    """(published-key, protected-key) extractors bound to this team's schema."""
    idx = team.schema.indexes(attrs)
    return lambda row: tuple(row[i] for i in idx)


def check_anonymity(team: Team, published: Sequence[str], protected: Sequence[str]) -> bool:
    """True iff every row has another row agreeing on ``published`` and
    differing on the ``protected`` tuple.

    Equivalently, every published-group shows at least two distinct
    protected tuples.  The empty team qualifies; with an empty protected
    side only the empty team does.
    """
    pub = _tuples(team, published)
    prot = _tuples(team, protected)
    first_seen: dict[Row, Row] = {}
    varied: set[Row] = set()
    for row in team.rows:
        key = pub(row)
        value = prot(row)
        if key not in first_seen:
            first_seen[key] = value
        elif value != first_seen[key]:
            varied.add(key)
    return all(key in varied for key in first_seen)


def check_k_anonymity(team: Team, published: Sequence[str], protected: Sequence[str], k: int) -> bool:
    """True iff every published-group shows at least k distinct protected
    tuples.  k = 1 holds on every team; k = 2 is ``check_anonymity``."""
    _positive_multiplicity(k)
    pub = _tuples(team, published)
    prot = _tuples(team, protected)
    if k == 1:
        return True
    values: dict[Row, set[Row]] = {}
    for row in team.rows:
        values.setdefault(pub(row), set()).add(prot(row))
    return all(len(seen) >= k for seen in values.values())


def check_k_anonymity_existential(
    team: Team, published: Sequence[str], protected: Sequence[str], k: int
) -> bool:
    """Witness-search formulation: for every row, find k rows that agree
    with it on ``published`` and carry pairwise distinct protected tuples.

    Scans the whole team per row instead of grouping; agrees with
    ``check_k_anonymity`` on every input (a tested equivalence).
    """
    _positive_multiplicity(k)
    pub = _tuples(team, published)
    prot = _tuples(team, protected)
    rows = list(team.rows)
    for row in rows:
        key = pub(row)
        witnesses: set[Row] = set()
        for other in rows:
            if pub(other) == key:
                witnesses.add(prot(other))
                if len(witnesses) >= k:
                    break
        if len(witnesses) < k:
            return False
    return True


def check_k_counting_variant(
    team: Team, published: Sequence[str], protected: Sequence[str], k: int
) -> bool:
    """Counting criterion: every row must have at least k *rows* (not
    values) agreeing on ``published`` and differing on the protected
    tuple.  Not equivalent to ``check_k_anonymity``; exported so the
    difference can be exhibited."""
    _positive_multiplicity(k)
    pub = _tuples(team, published)
    prot = _tuples(team, protected)
    rows = list(team.rows)
    for row in rows:
        key = pub(row)
        value = prot(row)
        differing = 0
        for other in rows:
            if pub(other) == key and prot(other) != value:
                differing += 1
                if differing >= k:
                    break
        if differing < k:
            return False
    return True


def check_dependence(team: Team, determinants: Sequence[str], dependents: Sequence[str]) -> bool:
    """Functional dependence: within every determinant-group the dependent
    tuple is constant."""
    dep = _tuples(team, dependents)
    groups = group_by(team, determinants)
    return all(len({dep(row) for row in rows}) <= 1 for rows in groups.values())


def check_inclusion(team: Team, source: Sequence[str], target: Sequence[str]) -> bool:
    """Every ``source`` tuple occurs somewhere as a ``target`` tuple."""
    if len(source) != len(target):
        raise ArityError(
            f"inclusion sides must have equal length: {len(source)} vs {len(target)}"
        )
    src = _tuples(team, source)
    tgt = _tuples(team, target)
    occurring = {tgt(row) for row in team.rows}
    return all(src(row) in occurring for row in team.rows)


def check_independence(team: Team, left: Sequence[str], right: Sequence[str]) -> bool:
    """True iff for all rows s, s' some row combines s's left tuple with
    s''s right tuple: the occurring (left, right) pairs form a full product.

    Note this may hold while anonymity fails, e.g. when the right side is
    constant.
    """
    lf = _tuples(team, left)
    rt = _tuples(team, right)
    lefts: set[Row] = set()
    rights: set[Row] = set()
    pairs: set[tuple[Row, Row]] = set()
    for row in team.rows:
        a, b = lf(row), rt(row)
        lefts.add(a)
        rights.add(b)
        pairs.add((a, b))
    return len(pairs) == len(lefts) * len(rights)


def check_anonymity_via_inclusion(
    team: Team, published: Sequence[str], protected: Sequence[str]
) -> bool:
    """Anonymity via its inclusion-logic reading: per row, search for a
    witness tuple u different from the row's protected tuple such that
    (published, u) occurs as a (published, protected) tuple of some row.

    Must agree with ``check_anonymity`` everywhere (a tested equivalence).
    """
    pub = _tuples(team, published)
    prot = _tuples(team, protected)
    pairs = {(pub(row), prot(row)) for row in team.rows}
    for row in team.rows:
        key = pub(row)
        value = prot(row)
        if not any(pk == key and pv != value for pk, pv in pairs):
            return False
    return True


def anonymity_degree(team: Team, published: Sequence[str], protected: Sequence[str]) -> Degree:
    """The largest k for which ``check_k_anonymity`` holds: the minimum
    over published-groups of the distinct protected-tuple count.

    The empty team has degree UNBOUNDED, which compares above every
    integer.
    """
    pub = _tuples(team, published)
    prot = _tuples(team, protected)
    values: dict[Row, set[Row]] = {}
    for row in team.rows:
        values.setdefault(pub(row), set()).add(prot(row))
    if not values:
        return UNBOUNDED
    return min(len(seen) for seen in values.values())


def group_distinct_counts(
    team: Team, published: Sequence[str], protected: Sequence[str]
) -> dict[Row, tuple[int, int]]:
    """Audit view: per published-group key, (rows in group, distinct
    protected tuples)."""
    prot = _tuples(team, protected)
    out: dict[Row, tuple[int, int]] = {}
    for key, rows in group_by(team, published).items():
        out[key] = (len(rows), len({prot(row) for row in rows}))
    return out


def satisfies(team: Team, atom: AnyAtom) -> bool:
    """Evaluate any atom kind on a team."""
    if isinstance(atom, Atom):
        return check_k_anonymity(team, atom.published, atom.protected, atom.k)
    if isinstance(atom, DependenceAtom):
        return check_dependence(team, atom.determinants, atom.dependents)
    if isinstance(atom, InclusionAtom):
        return check_inclusion(team, atom.source, atom.target)
    if isinstance(atom, IndependenceAtom):
        return check_independence(team, atom.left, atom.right)
    raise TypeError(f"not an atom: {atom!r}")
