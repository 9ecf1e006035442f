import random
from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from posetreal.poset import Poset, Preposet
from posetreal.realization import RPoint

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


@st.composite
def dags(draw, max_size=7, min_size=1):
    """Edges only go from lower to higher index, so every draw is acyclic."""
    n = draw(st.integers(min_size, max_size))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs))) if pairs else set()
    perm = draw(st.permutations(range(n)))
    labels = [f"e{perm[i]}" for i in range(n)]
    return labels, [(labels[i], labels[j]) for i, j in sorted(edges)]


@st.composite
def posets(draw, max_size=7, min_size=1):
    labels, edges = draw(dags(max_size, min_size))
    return Poset(labels, edges)


@st.composite
def preposets(draw, max_size=7, min_size=1):
    labels, edges = draw(dags(max_size, min_size))
    return Preposet(labels, edges)


@st.composite
def points(draw, P, denom=12):
    chains = P.chains()
    ch = draw(st.sampled_from(chains))
    ws = draw(st.lists(st.integers(1, denom), min_size=len(ch), max_size=len(ch)))
    total = sum(ws)
    return RPoint(P, ch, [Fraction(w, total) for w in ws])


@st.composite
def poset_with_points(draw, k=2, max_size=7):
    P = draw(posets(max_size=max_size))
    return (P,) + tuple(draw(points(P)) for _ in range(k))


def rng_for(seed):
    return random.Random(seed)
