import math
import random

import pytest

from conftest import fam, power_set_family
from uclab.conjectures import (
    check_conj21_all,
    check_conj21_at,
    check_conj41,
    check_doubleton_implication,
    check_frankl,
    check_reimer,
    mix_lower_bound,
    reimer_sum,
    restriction_counter,
)
from uclab.errors import InputError
from uclab.families import (
    bit,
    extend_with_new_element,
    frequency_profile,
    make_family,
    mask_of,
    restrict_contains,
    restrict_disjoint,
    union_closure,
    universe_of,
)


def random_closed(rng, n, count):
    full = (1 << n) - 1
    return union_closure(
        make_family((rng.randrange(full + 1) for _ in range(count)), full)
    )


class TestFrankl:
    def test_two_member_chain(self):
        v = check_frankl(fam([1, 3], 2))
        assert v.holds and v.witness == "1"
        assert v.detail == {"m": 2, "frequency": 2}

    def test_power_set_equality_case(self):
        v = check_frankl(power_set_family(3))
        assert v.holds and v.witness == "1"
        assert v.detail["frequency"] == 4

    def test_smallest_family_with_empty_set(self):
        v = check_frankl(fam([0, 1], 1))
        assert v.holds and v.witness == "1"
        assert v.detail == {"m": 2, "frequency": 1}

    def test_preconditions(self):
        with pytest.raises(InputError, match="empty"):
            check_frankl(fam([], 1))
        with pytest.raises(InputError, match="standing assumption"):
            check_frankl(fam([0], 1))
        with pytest.raises(InputError, match="union-closed"):
            check_frankl(fam([1, 2], 2))


class TestConj21:
    def test_base_set_case_always_holds(self):
        for f in (power_set_family(2), fam([1, 3], 2), fam([0, 1], 1)):
            v = check_conj21_at(f, 1)
            assert v.holds
            assert v.detail["containing"] == 1
            assert v.detail["disjoint"] in (0, 1)

    def test_power_set_of_three_x2(self):
        v = check_conj21_at(power_set_family(3), 2)
        assert v.holds and v.witness == "1,2"
        assert (v.detail["containing"], v.detail["disjoint"]) == (2, 2)

    def test_power_set_of_three_x3(self):
        v = check_conj21_at(power_set_family(3), 3)
        assert v.holds and v.witness == "1"
        assert (v.detail["containing"], v.detail["disjoint"]) == (4, 4)

    def test_x_out_of_range(self):
        with pytest.raises(InputError, match="outside"):
            check_conj21_at(power_set_family(2), 3)

    def test_all_power_set_of_two(self):
        verdicts = check_conj21_all(power_set_family(2))
        assert len(verdicts) == 2
        assert all(v.holds for v in verdicts)

    def test_all_singleton_family(self):
        verdicts = check_conj21_all(fam([1], 1))
        assert len(verdicts) == 1 and verdicts[0].holds

    def test_frankl_equivalent_to_last_level(self, enumerated):
        # at x = n the candidate sets are singletons, so both checks agree
        for f in enumerated[2] + enumerated[3]:
            n = f.base.bit_count()
            assert check_frankl(f).holds == check_conj21_at(f, n).holds

    def test_doubleton_level_implies_singleton_level(self, enumerated):
        for f in enumerated[2] + enumerated[3]:
            n = f.base.bit_count()
            if n >= 2 and check_conj21_at(f, n - 1).holds:
                assert check_conj21_at(f, n).holds


class TestCountingTables:
    def test_tables_match_restriction_filters(self):
        for seed in range(300):
            rng = random.Random(seed)
            n = rng.randint(1, 6)
            full = (1 << n) - 1
            f = make_family(
                (rng.randrange(full + 1) for _ in range(rng.randint(0, 12))), full
            )
            counter = restriction_counter(f)
            for _ in range(10):
                b = rng.randrange(full + 1)
                assert counter.containing(b) == len(restrict_contains(f, b))
                assert counter.disjoint(b) == len(restrict_disjoint(f, b))

    def test_fallback_path_matches(self, monkeypatch):
        import uclab.conjectures as cj

        monkeypatch.setattr(cj, "_TABLE_BASE_LIMIT", 0)
        f = power_set_family(3)
        counter = restriction_counter(f)
        assert counter._sup is None
        assert counter.containing(bit(1)) == 4
        assert counter.disjoint(bit(1)) == 4


class TestDoubletonImplication:
    def test_single_doubleton_member(self):
        v = check_doubleton_implication(fam([3], 2))
        assert v.holds and v.witness == "1"
        assert v.detail["doubleton"] == "1,2"

    def test_vacuous_when_no_doubleton_succeeds(self):
        v = check_doubleton_implication(fam([0, 4], 3))
        assert v.holds and v.detail.get("vacuous")

    def test_seeded_trials(self):
        for seed in range(10_000):
            rng = random.Random(seed)
            n = rng.randint(1, 5)
            full = (1 << n) - 1
            f = make_family(
                (rng.randrange(full + 1) for _ in range(rng.randint(1, 12))), full
            )
            assert check_doubleton_implication(f).holds


class TestReimer:
    def test_power_set_meets_bound_with_equality(self):
        f = power_set_family(3)
        assert reimer_sum(f) == 12
        assert (len(f) / 2) * math.log2(len(f)) == 12.0

    def test_smallest_families(self):
        assert reimer_sum(fam([0, 1], 1)) == 1
        assert reimer_sum(fam([1], 1)) == 1

    def test_sum_equals_total_member_size(self):
        # oracle: summing frequencies equals summing member sizes
        for seed in range(300):
            rng = random.Random(seed)
            f = random_closed(rng, rng.randint(1, 6), rng.randint(1, 10))
            assert reimer_sum(f) == sum(m.bit_count() for m in f.members)

    def test_check_reimer_verdict(self):
        v = check_reimer(power_set_family(3))
        assert v.holds
        assert v.detail == {"sum": 12, "m": 8, "bound": 12.0}


class TestMixLowerBound:
    def test_direct_evaluation(self):
        assert mix_lower_bound(0.5, 8) == pytest.approx(12.0, abs=1e-12)

    def test_equals_half_log_bound(self):
        for m in (2, 4, 16):
            want = (m / 2) * math.log2(m)
            assert mix_lower_bound(0.5, m) == pytest.approx(want, rel=1e-9)

    def test_grid_monotone_for_m_100(self):
        grid = [0.5 + k / 100 for k in range(50)]
        values = [mix_lower_bound(c, 100) for c in grid]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_domain_errors(self):
        with pytest.raises(InputError):
            mix_lower_bound(0.4, 8)
        with pytest.raises(InputError):
            mix_lower_bound(1.0, 8)
        with pytest.raises(InputError):
            mix_lower_bound(0.5, 0)


class TestConj41:
    def test_power_set_of_two_variant_b(self):
        v = check_conj41(power_set_family(2), "b")
        assert v.holds
        assert v.detail == {"variant": "b", "m": 4, "high": 2, "power_set": True}

    def test_nested_chain_variant_b(self):
        v = check_conj41(fam([1, 3, 7], 3), "b")
        assert v.holds
        assert v.detail["high"] == 3 and not v.detail["power_set"]

    def test_variant_a_on_power_set(self):
        assert check_conj41(power_set_family(2), "a").holds

    def test_non_separating_rejected(self):
        with pytest.raises(InputError, match="separating_quotient"):
            check_conj41(fam([3, 7], 3), "b")

    def test_extension_pins_frequency_at_half(self):
        # the extension construction always lands exactly on the boundary
        for seed in range(200):
            rng = random.Random(seed)
            f = random_closed(rng, rng.randint(1, 4), rng.randint(1, 8))
            if not f.members or f.members == (0,):
                continue
            got = extend_with_new_element(f)
            z = f.base.bit_length() + 1
            assert 2 * frequency_profile(got).count_of(z) == len(got)
