import math

import pytest

from kida import qexp
from kida.errors import (BadReduction, BoundExceeded, MissingCoefficient,
                         PrecisionExceeded, RamifiedLevel, SpecParseError)


def eta24_naive(B):
    """Independent oracle: multiply the 24 factors (1-q^n) one at a time."""
    cur = [0] * B
    cur[0] = 1
    for n in range(1, B):
        for _ in range(24):
            for i in range(B - 1, n - 1, -1):
                cur[i] -= cur[i - n]
    return cur


X0_11 = qexp.EllipticCurve(0, -1, 1, -10, -20)


class TestTau:
    def test_leading(self):
        assert qexp.tau(1) == 1

    def test_tau23_known_value(self):
        assert qexp.tau(23) == 18643272

    def test_tau1123_mod_11(self):
        assert qexp.tau(1123, 1200) % 11 == 2

    def test_series_vs_naive_oracle(self):
        B = 40
        naive = eta24_naive(B)
        series = qexp.delta_qexp(B)
        assert list(series.coefficients) == naive

    def test_multiplicativity(self):
        for m, n in [(2, 3), (3, 4), (4, 5), (5, 7), (8, 9), (6, 35)]:
            assert math.gcd(m, n) == 1
            assert qexp.tau(m * n) == qexp.tau(m) * qexp.tau(n)

    def test_hecke_recursion_at_prime_squares(self):
        for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43):
            assert qexp.tau(p * p) == qexp.tau(p) ** 2 - p ** 11

    def test_precision_budget(self):
        with pytest.raises(PrecisionExceeded):
            qexp.tau(2001)
        with pytest.raises(PrecisionExceeded):
            qexp.tau(101, precision=100)
        assert qexp.tau(100, precision=100) == qexp.tau(100)


class TestPowerSeries:
    def test_coefficient_bounds(self):
        s = qexp.PowerSeries((1, -24, 252))
        assert s.coefficient(2) == -24
        with pytest.raises(PrecisionExceeded):
            s.coefficient(4)
        with pytest.raises(PrecisionExceeded):
            s.coefficient(0)

    def test_truncated_product_never_reads_beyond(self):
        a = qexp.PowerSeries((1, 2, 3, 4))
        b = qexp.PowerSeries((5, 6, 7, 8))
        prod = a.mul(b)
        assert prod.precision == 4
        # q^2 coefficient: 1*5; q^3: 1*6 + 2*5; q^4: 1*7 + 2*6 + 3*5
        assert prod.coefficients == (0, 5, 16, 34)


class TestEllipticCurve:
    def test_x0_11_discriminant(self):
        assert X0_11.discriminant() == -(11 ** 5)

    def test_x0_11_small_ap_match_naive_enumeration(self):
        # oracle: enumerate all (x, y) pairs directly
        for ell, expected in [(2, -2), (3, -1), (5, 1), (7, -2),
                              (13, 4), (23, -1)]:
            cnt = 1
            for x in range(ell):
                for y in range(ell):
                    if (y * y + X0_11.a1 * x * y + X0_11.a3 * y
                            - (x ** 3 + X0_11.a2 * x * x + X0_11.a4 * x
                               + X0_11.a6)) % ell == 0:
                        cnt += 1
            assert ell + 1 - cnt == expected
            assert qexp.ec_ap(X0_11, ell) == expected

    def test_hasse_bound_and_recount(self):
        for ell in (2, 3, 5, 7, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                    59, 61, 67, 71, 73, 79, 83, 89, 97):
            a = qexp.ec_ap(X0_11, ell)
            assert a * a <= 4 * ell
            assert X0_11.count_points(ell) == ell + 1 - a

    def test_order_11_point_criterion_at_23(self):
        # a_23 = 2 mod 11 iff 11 | #E(F_23); both sides by point counting
        n = X0_11.count_points(23)
        a = 23 + 1 - n
        assert (a % 11 == 2 % 11) == (n % 11 == 0)

    def test_bad_reduction(self):
        with pytest.raises(BadReduction):
            qexp.ec_ap(X0_11, 11)

    def test_bound(self):
        with pytest.raises(BoundExceeded):
            qexp.ec_ap(X0_11, 100003)


class TestFrobeniusData:
    def test_delta_23(self):
        assert qexp.frobenius_data(qexp.delta_form(), 23, 11) == (10, 1)

    def test_delta_1123(self):
        assert qexp.frobenius_data(qexp.delta_form(), 1123, 11,
                                   precision=1200) == (2, 1)

    def test_zero_coefficient(self):
        tbl = qexp.CoefficientTable(weight=2, level=5, ap={3: 0})
        f = qexp.table_form(tbl)
        a, c = qexp.frobenius_data(f, 3, 7)
        assert a == 0 and c == 3 % 7

    def test_level_one_c_is_ell_power(self):
        f = qexp.delta_form()
        for ell in (2, 3, 5, 7, 13):
            for p in (11, 13, 17):
                if ell == p:
                    continue
                _, c = qexp.frobenius_data(f, ell, p)
                assert c == pow(ell, 11, p)

    def test_ramified_level(self):
        f = qexp.ec_form(X0_11)
        assert f.level == 11
        with pytest.raises(RamifiedLevel):
            qexp.frobenius_data(f, 11, 5)

    def test_missing_coefficient(self):
        f = qexp.table_form(qexp.CoefficientTable(2, 11, {2: -2}))
        with pytest.raises(MissingCoefficient):
            qexp.frobenius_data(f, 3, 5)

    def test_ell_equals_p_rejected(self):
        with pytest.raises(ValueError):
            qexp.frobenius_data(qexp.delta_form(), 11, 11)


class TestDirichletAndTwists:
    def test_trivial_twist_keeps_coefficients(self):
        psi = qexp.DirichletCharacter.trivial(1)
        f = qexp.delta_form()
        for n in (1, 2, 10, 36):
            assert qexp.twist_coefficients(f, psi, n).rational() == qexp.tau(n)

    def test_conductor_zeroing(self):
        psi = qexp.DirichletCharacter.from_exponents(3, (1,))
        f = qexp.delta_form()
        assert qexp.twist_coefficients(f, psi, 6).is_zero()
        assert qexp.twist_coefficients(f, psi, 9).is_zero()

    def test_quadratic_mod_3_at_2(self):
        psi = qexp.DirichletCharacter.from_exponents(3, (1,))
        assert psi.order() == 2 and psi.conductor == 3
        assert psi.value(2).rational() == -1
        v = qexp.twist_coefficients(qexp.delta_form(), psi, 2)
        assert v.rational() == -qexp.tau(2) == 24

    def test_twist_untwist_restores(self):
        f = qexp.delta_form()
        for modulus, exps in [(7, (1,)), (7, (2,)), (9, (1,)), (5, (1,))]:
            psi = qexp.DirichletCharacter.from_exponents(modulus, exps)
            bar = psi.conjugate()
            for n in range(1, 30):
                if math.gcd(n, psi.conductor) > 1:
                    continue
                v = psi.value(n) * bar.value(n)
                assert v.rational() == 1
                w = qexp.twist_coefficients(f, psi, n) * bar.value(n)
                assert w.rational() == qexp.tau(n)

    def test_imprimitive_character_uses_conductor(self):
        # trivial character presented mod 9 is still 1 at multiples of 3
        triv9 = qexp.DirichletCharacter.trivial(9)
        assert triv9.conductor == 1
        assert triv9.value(3).rational() == 1
        # order-2 character mod 9 comes from the quadratic character mod 3
        psi9 = qexp.DirichletCharacter.from_exponents(9, (3,))
        psi3 = qexp.DirichletCharacter.from_exponents(3, (1,))
        assert psi9.conductor == 3
        for n in range(1, 20):
            if math.gcd(n, 3) == 1:
                assert psi9.value(n) == psi3.value(n)

    def test_even_modulus_conductors(self):
        # (Z/8)^* characters: sign character has conductor 4, the
        # five-part characters have conductor 8
        conds = {}
        for exps in [(0, 0), (1, 0), (0, 1), (1, 1)]:
            conds[exps] = qexp.DirichletCharacter.from_exponents(8, exps).conductor
        assert conds[(0, 0)] == 1
        assert sorted(conds.values()) == [1, 4, 8, 8]

    def test_cyc_value_normalization(self):
        assert qexp.CycValue(3, 2, 4) == qexp.CycValue(3, 1, 2) * 1
        assert qexp.CycValue(3, 1, 2).rational() == -3
        assert qexp.CycValue(0, 5, 7).m == 1
        v = qexp.CycValue(2, 1, 3) * qexp.CycValue(5, 2, 3)
        assert v.rational() == 10  # zeta_3 * zeta_3^2 = 1


class TestHeckeCompositeReconstruction:
    def test_table_composite(self):
        tbl = qexp.CoefficientTable(weight=2, level=11,
                                    ap={2: -2, 3: -1, 5: 1, 7: -2, 11: 1})
        f = qexp.table_form(tbl)
        # a_4 = a_2^2 - 2; a_6 = a_2 a_3; a_{121} = a_11^2 (11 | level)
        assert f.a_coefficient(4) == (-2) ** 2 - 2
        assert f.a_coefficient(6) == 2
        assert f.a_coefficient(121) == 1
        assert f.a_coefficient(12) == f.a_coefficient(4) * (-1)

    def test_ec_composites_match_delta_style_recursion(self):
        f = qexp.ec_form(X0_11)
        a2 = qexp.ec_ap(X0_11, 2)
        assert f.a_coefficient(8) == a2 ** 3 - 2 * 2 * a2

    def test_nontrivial_nebentypus_rejects_powers(self):
        tbl = qexp.CoefficientTable(weight=3, level=7, ap={2: 1})
        f = qexp.ModularFormData(3, 7, tbl, nebentypus={2: 1})
        with pytest.raises(MissingCoefficient):
            f.a_coefficient(4)


class TestTableParser:
    GOOD = """# sample table
weight 2 level 11
2 -2
3 -1  # inline comment
5 1
"""

    def test_round_trip(self):
        tbl = qexp.parse_table(self.GOOD)
        assert tbl.weight == 2 and tbl.level == 11
        assert tbl.ap == {2: -2, 3: -1, 5: 1}

    def test_missing_header(self):
        with pytest.raises(SpecParseError):
            qexp.parse_table("2 -2\n")

    def test_composite_index_rejected(self):
        with pytest.raises(SpecParseError):
            qexp.parse_table("weight 2 level 11\n4 5\n")

    def test_duplicate_rejected(self):
        with pytest.raises(SpecParseError):
            qexp.parse_table("weight 2 level 11\n2 -2\n2 -2\n")

    def test_file_loading(self, tmp_path):
        path = tmp_path / "aps.txt"
        path.write_text(self.GOOD, encoding="ascii")
        tbl = qexp.load_table(path)
        assert tbl.ap[5] == 1


class TestFormValidation:
    def test_delta_shape_enforced(self):
        with pytest.raises(ValueError):
            qexp.ModularFormData(2, 1, qexp.DELTA_SOURCE)

    def test_ec_weight_enforced(self):
        with pytest.raises(ValueError):
            qexp.ModularFormData(12, 11, X0_11)


class TestConcurrentCoefficientAccess:
    def test_parallel_tau_reads_consistent(self):
        import threading
        qexp._eta24_coefficients.cache_clear()
        results = []
        lock = threading.Lock()

        def worker():
            vals = [qexp.tau(n, precision=120) for n in (1, 23, 60, 120)]
            with lock:
                results.append(vals)

        threads = [threading.Thread(target=worker) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len({tuple(v) for v in results}) == 1
        assert results[0][1] == 18643272
