import json

import pytest

from treecocycles.algebra import Place, valuation
from treecocycles.cellcomplex import HoroballSpec, act_point, apartment_point, corrupt_orientation
from treecocycles.config import Config
from treecocycles.fields import GF, QQ
from treecocycles.group import Matrix2, RingSpec, gamma_ball, random_laurent, sl2
from treecocycles.parse import parse_rational
from treecocycles.tree import busemann
from treecocycles.verify import (
    TAGS,
    Certificate,
    check_density,
    divergence_certificate,
    horoball_gap,
    horosphere_cover_sample,
    nooverlap_sample,
    random_unipotent,
    reduce_to_apartment,
    reverify,
    run_all,
    run_check,
)

Z = RingSpec.integers()


def R(text, field=QQ):
    return parse_rational(text, field)


def test_density_examples():
    cert = check_density(R("1"), R("0"), 1, 1)
    assert cert.passed and cert.witnesses[0]["i"] == 1
    assert cert.result == R("t/(t+1)")
    assert valuation(cert.result - 1, Place.INF) >= 1 and valuation(cert.result, Place.ZERO) >= 1
    same = check_density(R("t^2 - 3"), R("t^2 - 3"), 4, 4)
    assert same.result == R("t^2 - 3")
    cert = check_density(R("t"), R("t^-1"), 3, 3)
    assert valuation(cert.result - R("t"), Place.INF) >= 3 and valuation(cert.result - R("t^-1"), Place.ZERO) >= 3
    assert reverify(cert)


def test_density_random_witnesses_are_minimal(rng):
    for _ in range(50):
        v = random_laurent(rng, QQ, -4, 4).to_rational()
        w = random_laurent(rng, QQ, -4, 4).to_rational()
        ki, kz = rng.randint(-6, 6), rng.randint(-6, 6)
        cert = check_density(v, w, ki, kz)
        beta = cert.result
        assert valuation(beta - v, Place.INF) >= ki and valuation(beta - w, Place.ZERO) >= kz
        assert reverify(cert)


def test_reduce_to_apartment(rng):
    p = apartment_point(2, -3)
    u, q = reduce_to_apartment(p)
    assert u.is_identity() and q == p
    for field in (QQ, GF(3)):
        for _ in range(100):
            y = apartment_point(rng.randint(-5, 5), rng.randint(-5, 5))
            g = random_unipotent(rng, field, -6, 6, 4)
            p = act_point(g.matrix, y)
            u, q = reduce_to_apartment(p, field)
            assert q == y
            assert (busemann(q.inf), busemann(q.zero)) == (busemann(p.inf), busemann(p.zero))


def test_horoball_gap():
    assert horoball_gap(Z, 0).result == 1
    r1, r2 = horoball_gap(Z, 1), horoball_gap(Z, 2)
    assert r1.passed and r1.params["evaluated"] == len(gamma_ball(Z, 1))
    assert r1.result <= r2.result
    assert reverify(r1)


def test_divergence_examples():
    cert = divergence_certificate(Matrix2.identity(), 0)
    assert cert.passed and cert.result == 1
    first = cert.witnesses[1]
    assert first["i"] == 1 and first["a_inf"] == -1 and first["violated"]
    shifts = [divergence_certificate(Matrix2.identity(), L).result for L in range(-3, 4)]
    assert shifts == [1 - L for L in range(-3, 4)]
    with pytest.raises(ValueError):
        divergence_certificate(Matrix2.of(2, 0, 0, 1), 0)
    with pytest.raises(ValueError):
        divergence_certificate(sl2(1, R("1/(t-1)"), 0, 1), 0)


def test_divergence_index_is_minimal(rng):
    from treecocycles.verify import random_gamma

    for _ in range(20):
        M = random_gamma(rng, Z, 6)
        if M.a.is_zero() or M.c.is_zero():
            continue
        L = rng.randint(-3, 3)
        cert = divergence_certificate(M, L)
        assert cert.passed and cert.result <= 1 - L
        assert not cert.witnesses[0]["violated"]
        assert reverify(cert)


def test_horosphere_cover_sample():
    assert horosphere_cover_sample(4, 0, 1).passed
    on_sigma = horosphere_cover_sample(5, 15, 2, on_apartment=True)
    assert on_sigma.result <= 2 and on_sigma.labels == ["SAMPLED"]
    small, big = horosphere_cover_sample(4, 10, 1), horosphere_cover_sample(4, 10, 2)
    assert big.result <= small.result
    assert reverify(big)


def test_nooverlap_sample():
    w = Matrix2.of(0, -1, 1, 0)
    cert = nooverlap_sample(w, HoroballSpec(3), 25)
    assert cert.passed and len(cert.witnesses) == 25 and cert.labels == ["SAMPLED"]
    assert all(row["beta_rho"] >= 3 for row in cert.witnesses)
    with pytest.raises(ValueError, match="exact beta_rho-invariance"):
        nooverlap_sample(Matrix2.of(1, R("t"), 0, 1), HoroballSpec(3), 5)


def test_run_all_over_F3_passes():
    certs = run_all(Config(field_name="fp:3", ring_name="fp", samples=10))
    assert [c.lemma for c in certs] == sorted(TAGS)
    assert all(c.passed for c in certs), [c.lemma for c in certs if not c.passed]
    for c in certs:
        assert reverify(Certificate.from_json(json.loads(json.dumps(c.to_json()))))


def test_run_all_is_deterministic():
    cfg = Config(samples=5, seed=7)
    a = json.dumps([c.to_json() for c in run_all(cfg)], sort_keys=True)
    b = json.dumps([c.to_json() for c in run_all(cfg)], sort_keys=True)
    assert a == b


def test_corrupted_orientation_fails_the_pairing():
    with corrupt_orientation():
        assert not run_check("pairing", Config()).passed


def test_tampered_certificates_do_not_reverify():
    cert = run_check("horoball", Config(word_radius=1)).to_json()
    cert["witnesses"][3]["beta_rho"] += 1
    assert not reverify(Certificate.from_json(cert))
    cert = run_check("density", Config(samples=3)).to_json()
    cert["witnesses"][0]["i"] += 1
    assert not reverify(Certificate.from_json(cert))


def test_unknown_tag():
    with pytest.raises(ValueError, match="unknown lemma tag"):
        run_check("lemma99", Config())


def test_config_validation():
    with pytest.raises(ValueError):
        Config(field_name="q", ring_name="fp")
    with pytest.raises(ValueError):
        Config(field_name="fp:3", ring_name="z")
    with pytest.raises(ValueError):
        Config(word_radius=0)
    assert Config(field_name="fp:5", ring_name="fp").ring == RingSpec.prime(5)
