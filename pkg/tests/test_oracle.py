import random

import pytest

from anonatom import (
    Atom,
    AtomSet,
    ConfigError,
    OracleConfig,
    OracleStatus,
    entails_k_simple,
    random_team,
    satisfies,
    semantic_entails,
)


def atom(pub, prot, k=2):
    return Atom(tuple(pub), tuple(prot), k)


CFG2 = OracleConfig(domain_size=2, attribute_limit=3)


def refutes(team, sigma, goal):
    return all(satisfies(team, h) for h in sigma.atoms) and not satisfies(team, goal)


class TestConfig:
    def test_exhaustive_lattice_gate(self):
        with pytest.raises(ConfigError):
            OracleConfig(domain_size=3, attribute_limit=3, mode="exhaustive")
        OracleConfig(domain_size=3, attribute_limit=2, mode="exhaustive")
        OracleConfig(domain_size=3, attribute_limit=4, mode="random")

    def test_domain_size_gate(self):
        with pytest.raises(ConfigError):
            OracleConfig(domain_size=4)

    def test_mode_gate(self):
        with pytest.raises(ConfigError):
            OracleConfig(mode="clever")

    def test_instance_wider_than_limit(self):
        sigma = AtomSet.of(atom("abc", "d"))
        with pytest.raises(ConfigError, match="limit"):
            semantic_entails(sigma, atom("abc", "d"), OracleConfig(attribute_limit=3))


class TestExhaustive:
    def test_transitivity_refuted(self):
        sigma = AtomSet.of(atom("x", "y"), atom("y", "z"))
        result = semantic_entails(sigma, atom("x", "z"), CFG2)
        assert result.status is OracleStatus.REFUTED
        assert refutes(result.refuter, sigma, atom("x", "z"))

    def test_weakening_entailed(self):
        sigma = AtomSet.of(atom("xy", "z"))
        result = semantic_entails(sigma, atom("x", "z"), CFG2)
        assert result.status is OracleStatus.ENTAILED

    def test_empty_sigma_refuted_fast(self):
        result = semantic_entails(AtomSet.of(), atom("x", "y"), CFG2)
        assert result.status is OracleStatus.REFUTED

    def test_cycle_needs_constructed_candidate(self):
        # no two-valued team refutes this one; the ternary construction does
        sigma = AtomSet.of(atom("x", "y"), atom("y", "z"), atom("z", "x"))
        result = semantic_entails(sigma, atom("x", "z"), CFG2)
        assert result.status is OracleStatus.REFUTED
        assert refutes(result.refuter, sigma, atom("x", "z"))
        values = {v for row in result.refuter.rows for v in row}
        assert len(values) == 3

    def test_deterministic(self):
        sigma = AtomSet.of(atom("x", "y"), atom("y", "z"))
        first = semantic_entails(sigma, atom("x", "z"), CFG2)
        second = semantic_entails(sigma, atom("x", "z"), CFG2)
        assert first == second

    def test_inconsistent_sigma_entails_everything(self):
        sigma = AtomSet.of(atom("x", "x"))
        result = semantic_entails(sigma, atom("y", "z"), CFG2)
        assert result.status is OracleStatus.ENTAILED

    def test_high_multiplicity_guard(self):
        # a domain of size 3 cannot certify entailment once multiplicities
        # exceed 2, so the oracle stays honest with UNKNOWN
        sigma = AtomSet.of(atom("x", "y", 3))
        cfg = OracleConfig(domain_size=3, attribute_limit=2)
        result = semantic_entails(sigma, atom("x", "y", 3), cfg)
        assert result.status is OracleStatus.UNKNOWN

    def test_k_refutation_via_truncated_candidate(self):
        sigma = AtomSet.of(atom("x", "y", 2))
        goal = atom("x", "y", 3)
        result = semantic_entails(sigma, goal, CFG2)
        assert result.status is OracleStatus.REFUTED
        assert refutes(result.refuter, sigma, goal)

    def test_agrees_with_simple_k_engine(self):
        # refutations coincide with NotDerivable verdicts; ENTAILED only
        # appears where the small domain can certify it, and then agrees
        rng = random.Random(88)
        attrs = ("x", "y")
        for _ in range(300):
            sigma = AtomSet.of(
                *(
                    Atom(
                        tuple(rng.sample(attrs, rng.randint(0, 2))),
                        (rng.choice(attrs),),
                        rng.randint(1, 4),
                    )
                    for _ in range(rng.randint(0, 2))
                )
            )
            goal = Atom(
                tuple(rng.sample(attrs, rng.randint(0, 2))), (rng.choice(attrs),), rng.randint(1, 4)
            )
            engine = entails_k_simple(sigma, goal)
            oracle = semantic_entails(sigma, goal, CFG2)
            assert (oracle.status is OracleStatus.REFUTED) == (not engine.derivable)
            if oracle.status is OracleStatus.ENTAILED:
                assert engine.derivable


class TestRandomMode:
    def test_never_entailed(self):
        cfg = OracleConfig(domain_size=2, attribute_limit=3, mode="random", samples=40, seed=9)
        outcomes = set()
        for goal in (atom("x", "z"), atom("x", "zy")):
            # entailed goals still come back UNKNOWN in random mode
            result = semantic_entails(AtomSet.of(atom("xy", "z"), atom("x", "zy")), goal, cfg)
            outcomes.add(result.status)
        assert OracleStatus.ENTAILED not in outcomes

    def test_finds_easy_refuters(self):
        cfg = OracleConfig(domain_size=2, attribute_limit=3, mode="random", samples=200, seed=1)
        sigma = AtomSet.of(atom("y", "x"))
        # strip the candidate shortcut's chance to matter: candidates also
        # refute, so just confirm the verdict and the refuter's validity
        result = semantic_entails(sigma, atom("x", "y"), cfg)
        assert result.status is OracleStatus.REFUTED
        assert refutes(result.refuter, sigma, atom("x", "y"))


class TestRandomTeam:
    def test_zero_budget(self):
        assert random_team(("a", "b"), ("0", "1"), 0, seed=3).is_empty

    def test_same_seed_same_team(self):
        first = random_team(("a", "b"), ("0", "1", "2"), 8, seed=42)
        second = random_team(("a", "b"), ("0", "1", "2"), 8, seed=42)
        assert first == second

    def test_budget_respected(self):
        for seed in range(25):
            assert len(random_team(("a",), ("0", "1"), 5, seed=seed)) <= 5

    def test_negative_budget(self):
        with pytest.raises(ValueError):
            random_team(("a",), ("0",), -1, seed=0)
