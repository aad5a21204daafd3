import pytest

from uclab.enumeration import EnumerationSpec, enumerate_union_closed
from uclab.families import make_family, universe_of


def fam(members, n):
    """Family over the ground set {1..n} from an iterable of masks."""
    return make_family(members, universe_of(n))


def power_set_family(n):
    return fam(range(1 << n), n)


@pytest.fixture(scope="session")
def enumerated():
    """All union-closed families with full base set, for n = 1..4."""
    return {
        n: list(enumerate_union_closed(EnumerationSpec(n=n))) for n in (1, 2, 3, 4)
    }
