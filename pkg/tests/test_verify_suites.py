from kida import verify


class TestGroupIdentitySuite:
    def test_small_sweep_passes(self):
        res = verify.group_identity_suite(max_order=48, reps=30, seed=7)
        assert res.passed and res.checks > 1000

    def test_deterministic(self):
        a = verify.group_identity_suite(max_order=24, reps=10, seed=3)
        b = verify.group_identity_suite(max_order=24, reps=10, seed=3)
        assert a.checks == b.checks and a.failures == b.failures


class TestTowerAdditivitySuite:
    def test_passes(self):
        res = verify.tower_additivity_suite(max_size=27, seed=1)
        assert res.passed and res.checks > 500


class TestPathAgreementSuite:
    def test_passes(self):
        res = verify.path_agreement_suite(seed=3)
        assert res.passed
        # full cartesian product: 3 primes x 2 exponents x all types
        assert res.checks >= 2 * (9 + 25 + 121)


class TestHasseSuite:
    def test_passes(self):
        res = verify.hasse_suite(bound=100)
        assert res.passed and res.checks > 100


class TestRendering:
    def test_mapping_sorted_and_complete(self):
        res = verify.path_agreement_suite(seed=0)
        m = res.as_mapping()
        assert m["suite"] == "path-agreement"
        assert m["result"] == "pass"
        assert m["checks"] == res.checks
