from fractions import Fraction as F

from hypothesis import given
from hypothesis import strategies as st

from intrearrange.dist import make_dist, reflect, translate
from intrearrange.rearrange import is_plus_form, plus_position, plus_rearrangement

from _gen import int_dists, random_dist, seeded

H = F(1, 2)


def placement_by_formula(probs):
    # k-th largest (1-based) goes to (-1)**k * floor(k/2)
    ordered = sorted(probs, reverse=True)
    return make_dist(((-1) ** k * (k // 2), p) for k, p in enumerate(ordered, start=1))


def test_three_atoms():
    d = make_dist({10: H, 20: F(1, 4), 30: F(1, 4)})
    assert plus_rearrangement(d) == make_dist({-1: F(1, 4), 0: H, 1: F(1, 4)})


def test_single_atom():
    assert plus_rearrangement(make_dist({7: 1})) == make_dist({0: 1})


def test_four_atoms_last_goes_to_plus_two():
    d = make_dist({0: F(2, 5), 5: F(3, 10), 9: F(1, 5), 12: F(1, 10)})
    assert plus_rearrangement(d) == make_dist({-1: F(1, 5), 0: F(2, 5), 1: F(3, 10), 2: F(1, 10)})


def test_positions():
    assert [plus_position(i) for i in range(7)] == [0, 1, -1, 2, -2, 3, -3]


def test_is_plus_form():
    assert is_plus_form(make_dist({-1: F(1, 4), 0: H, 1: F(1, 4)}))
    assert not is_plus_form(make_dist({0: F(1, 4), 1: F(3, 4)}))
    assert is_plus_form(make_dist({0: 1}))


@given(int_dists())
def test_matches_formula(d):
    assert plus_rearrangement(d) == placement_by_formula(d.probs)


@given(int_dists(), st.integers(-30, 30))
def test_invariances(d, k):
    plus = plus_rearrangement(d)
    assert plus_rearrangement(plus) == plus
    assert plus_rearrangement(translate(d, k)) == plus
    assert plus_rearrangement(reflect(d)) == plus
    assert sorted(plus.probs) == sorted(d.probs)


@given(int_dists(max_atoms=8))
def test_support_window_and_ordering(d):
    plus = plus_rearrangement(d)
    n = len(d)
    assert plus.values == tuple(range(-((n - 1) // 2), n // 2 + 1))
    p = plus.as_dict()
    get = lambda x: p.get(x, 0)  # noqa: E731
    assert all(get(0) >= q for q in p.values())
    for k in range(1, n + 1):
        assert get(k) >= get(-k)
        assert get(1 - k) >= get(k)


def test_tie_independence():
    rng = seeded(11)
    for _ in range(300):
        d = random_dist(rng, n_max=7, lo=-10, hi=10, max_weight=6, dup=True)
        atoms = list(d.atoms)
        probs = [p for _, p in atoms]
        rng.shuffle(probs)
        shuffled = make_dist(zip([x for x, _ in atoms], probs))
        assert plus_rearrangement(shuffled) == plus_rearrangement(d)
