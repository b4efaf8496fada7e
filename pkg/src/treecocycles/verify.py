"""Certificates for the lemmas behind the cocycle construction.

Constructive statements are checked exactly and labelled EXACT.  Global
statements with nonconstructive constants are checked on samples or bounded
word balls and labelled SAMPLED; their reports give observed maxima only.
Every certificate carries enough witness data for ``reverify`` to repeat the
asserted checks without rerunning the search that produced them.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from typing import Callable

from .algebra import INF, Place, Polynomial, RationalFunction, jet, valuation
from .cellcomplex import (
    Chain,
    HoroballSpec,
    ProductVertex,
    StarDown,
    act_chain,
    act_point,
    apartment_point,
    apartment_square,
    beta_rho,
    boundary,
    cell_coords,
    make_C_cell,
    square_B,
    x_point,
)
from .cocycle import (
    BasicCycle,
    big_phi_terms,
    coset_window_for,
    in_Y_n,
    pairing_matrix,
    phi,
    reduce_theta,
    theta_chain,
)
from .config import Config
from .fields import GF, QQ, field_from_name
from .group import (
    Matrix2,
    RingSpec,
    Unipotent,
    diag_unit,
    gamma_ball,
    generators,
    matrix_from_json,
    matrix_to_json,
    p1_witness,
    projective_equal,
    random_laurent,
)
from .parse import parse_rational
from .tree import TreeVertex, ball, bfs_distances, busemann, distance, neighbors, vertex_from_json, vertex_to_json

PASS, FAIL = "PASS", "FAIL"
EXACT, SAMPLED = "EXACT", "SAMPLED"


@dataclass
class Certificate:
    lemma: str
    params: dict
    verdict: str
    witnesses: list = dc_field(default_factory=list)
    labels: list = dc_field(default_factory=lambda: [EXACT])
    notes: str = ""
    # in-memory result of the check (not serialized)
    result: object = dc_field(default=None, repr=False, compare=False)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma,
            "params": self.params,
            "verdict": self.verdict,
            "witnesses": self.witnesses,
            "labels": self.labels,
            "notes": self.notes,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        return cls(
            data["lemma"],
            dict(data["params"]),
            data["verdict"],
            list(data.get("witnesses", [])),
            list(data.get("labels", [EXACT])),
            data.get("notes", ""),
        )


def _verdict(ok: bool) -> str:
    return PASS if ok else FAIL


def field_name(field) -> str:
    return "q" if not field.is_finite else f"fp:{field.characteristic}"


def _val_json(v):
    return "+inf" if v == INF else int(v)


def point_to_json(p: ProductVertex, field=QQ) -> dict:
    return {"inf": vertex_to_json(p.inf, field), "zero": vertex_to_json(p.zero, field)}


def point_from_json(data: dict, field=QQ) -> ProductVertex:
    return ProductVertex(vertex_from_json(data["inf"], field), vertex_from_json(data["zero"], field))


def random_vertex(rng: random.Random, at: Place, field, levels=(-4, 4), window: int = 3) -> TreeVertex:
    level = rng.randint(*levels)
    coeffs = {k: field.random(rng, 3) for k in range(level - window, level) if rng.random() < 0.6}
    return TreeVertex.make(at, level, coeffs)


def random_point(rng: random.Random, field, levels=(-4, 4), window: int = 3) -> ProductVertex:
    return ProductVertex(random_vertex(rng, Place.INF, field, levels, window), random_vertex(rng, Place.ZERO, field, levels, window))


def random_unipotent(rng: random.Random, field, lo: int, hi: int, terms: int = 3, skip=None) -> Unipotent:
    x = random_laurent(rng, field, lo, hi, terms, height=4)
    if skip is not None:
        x = x.restrict(lambda k: not skip(k))
    return Unipotent(x.to_rational())


# -- points of P^1(F[t, 1/t]) are hit by SL_2(F[t]) ----------------------------


def p1_certificate(field, samples: int, rng: random.Random) -> Certificate:
    witnesses = []
    ok = True
    for _ in range(samples):
        while True:
            x = random_laurent(rng, field, -3, 3, 3)
            y = random_laurent(rng, field, -3, 3, 3)
            if x or y:
                break
        g = p1_witness(x, y, field)
        good = g.is_sl2() and projective_equal((g.a, g.c), (x.to_rational(), y.to_rational()))
        ok &= good
        witnesses.append({"point": [str(x), str(y)], "matrix": matrix_to_json(g), "ok": good})
    return Certificate("p1", {"field": field_name(field), "samples": samples}, _verdict(ok), witnesses)


def _reverify_p1(cert: Certificate) -> bool:
    field = field_from_name(cert.params["field"])
    for w in cert.witnesses:
        x, y = (parse_rational(s, field) for s in w["point"])
        g = matrix_from_json(w["matrix"], field)
        if not (g.is_sl2() and g.has_laurent_entries() and projective_equal((g.a, g.c), (x, y))):
            return False
    return True


# -- P_Gamma preserves beta_rho ---------------------------------------------------


def beta_invariance_certificate(ring: RingSpec, samples: int, rng: random.Random) -> Certificate:
    """Exact check of beta_rho-invariance under generators of P_Gamma on random points."""
    field = ring.field
    gens = [(label, g) for label, g in generators(ring) if g.is_upper_triangular()]
    gens += [(f"diag({field.format(u)})", diag_unit(u, field)) for u in ring.units()]
    witnesses = []
    ok = True
    for _ in range(samples):
        p = random_point(rng, field)
        for label, g in gens:
            q = act_point(g, p)
            good = beta_rho(q) == beta_rho(p)
            ok &= good
            if not good:
                witnesses.append({"generator": label, "matrix": matrix_to_json(g), "point": point_to_json(p, field)})
        witnesses.append({"point": point_to_json(p, field), "beta_rho": beta_rho(p)})
    note = "diag(u, 1/u) moves points (offset c -> u^2 c) but preserves every horosphere"
    return Certificate("beta", {"ring": str(ring), "samples": samples}, _verdict(ok), witnesses, [EXACT], note)


def _reverify_beta(cert: Certificate) -> bool:
    ring = _ring_from_json(cert.params["ring"])
    field = ring.field
    gens = [g for _, g in generators(ring) if g.is_upper_triangular()] + [diag_unit(u, field) for u in ring.units()]
    for w in cert.witnesses:
        if "generator" in w:
            return False
        p = point_from_json(w["point"], field)
        if beta_rho(p) != w["beta_rho"] or any(beta_rho(act_point(g, p)) != w["beta_rho"] for g in gens):
            return False
    return True


def _ring_from_json(name: str) -> RingSpec:
    return RingSpec.integers() if name == "Z" else RingSpec.prime(int(name[1:]))


# -- density of F(t) in F((1/t)) x F((t)) --------------------------------------------


def alpha(i: int, field=QQ) -> RationalFunction:
    """t^i / (t^i + 1): tends to 1 at infinity and to 0 at zero."""
    ti = RationalFunction.t_power(i, field)
    return ti / (ti + RationalFunction.one(field))


def _density_ok(v, w, beta, k_inf: int, k_zero: int) -> bool:
    return valuation(beta - v, Place.INF) >= k_inf and valuation(beta - w, Place.ZERO) >= k_zero


def density_witness(v: RationalFunction, w: RationalFunction, k_inf: int, k_zero: int):
    """Least i >= 1 with beta = (v - w) alpha_i + w close to v at infinity and to w at zero."""
    i = 1
    while True:
        beta = (v - w) * alpha(i, v.field) + w
        if _density_ok(v, w, beta, k_inf, k_zero):
            return i, beta
        i += 1


def check_density(v, w, k_inf: int, k_zero: int, field=None) -> Certificate:
    field = field or getattr(v, "field", QQ)
    v = v if isinstance(v, RationalFunction) else RationalFunction(Polynomial([v], field))
    w = w if isinstance(w, RationalFunction) else RationalFunction(Polynomial([w], field))
    i, beta = density_witness(v, w, k_inf, k_zero)
    witness = {
        "v": str(v),
        "w": str(w),
        "k_inf": k_inf,
        "k_zero": k_zero,
        "i": i,
        "beta": str(beta),
        "nu_inf": _val_json(valuation(beta - v, Place.INF)),
        "nu_zero": _val_json(valuation(beta - w, Place.ZERO)),
    }
    cert = Certificate("density", {"field": field_name(field)}, PASS, [witness])
    cert.result = beta
    return cert


def _reverify_density(cert: Certificate) -> bool:
    field = field_from_name(cert.params["field"])
    for wit in cert.witnesses:
        v, w, beta = (parse_rational(wit[k], field) for k in ("v", "w", "beta"))
        i, k_inf, k_zero = wit["i"], wit["k_inf"], wit["k_zero"]
        if beta != (v - w) * alpha(i, field) + w or not _density_ok(v, w, beta, k_inf, k_zero):
            return False
        if i > 1 and _density_ok(v, w, (v - w) * alpha(i - 1, field) + w, k_inf, k_zero):
            return False
    return True


def density_certificate(field, samples: int, rng: random.Random) -> Certificate:
    witnesses = []
    for _ in range(samples):
        v = random_laurent(rng, field, -4, 4).to_rational()
        w = random_laurent(rng, field, -4, 4).to_rational()
        witnesses += check_density(v, w, rng.randint(-6, 6), rng.randint(-6, 6), field).witnesses
    cert = Certificate("density", {"field": field_name(field), "samples": samples}, PASS, witnesses)
    cert.verdict = _verdict(_reverify_density(cert))
    return cert


# -- Sigma is a fundamental domain for U -------------------------------------------


def reduce_to_apartment(p: ProductVertex, field=QQ):
    """(u, q) with q = u p in Sigma, u built from a density witness for the two offsets."""
    v = p.inf.offset_rational(field)
    w = p.zero.offset_rational(field)
    _, beta = density_witness(v, w, p.inf.level, p.zero.level)
    u = Unipotent(-beta)
    q = act_point(u.matrix, p)
    if q.inf.offset or q.zero.offset:
        raise AssertionError(f"reduction of {p} left offsets {q}")
    return u, q


def apartment_certificate(field, samples: int, rng: random.Random) -> Certificate:
    witnesses = []
    ok = True
    for _ in range(samples):
        y = apartment_point(rng.randint(-5, 5), rng.randint(-5, 5))
        g = random_unipotent(rng, field, -5, 5, 4)
        p = act_point(g.matrix, y)
        u, q = reduce_to_apartment(p, field)
        good = q == y and busemann(q.inf) == busemann(p.inf) and busemann(q.zero) == busemann(p.zero)
        ok &= good
        witnesses.append({"point": point_to_json(p, field), "u": str(u.x), "image": point_to_json(q, field)})
    return Certificate("apartment", {"field": field_name(field), "samples": samples}, _verdict(ok), witnesses)


def _reverify_apartment(cert: Certificate) -> bool:
    field = field_from_name(cert.params["field"])
    for w in cert.witnesses:
        p, q = point_from_json(w["point"], field), point_from_json(w["image"], field)
        u = Unipotent(parse_rational(w["u"], field))
        if act_point(u.matrix, p) != q or q.inf.offset or q.zero.offset:
            return False
    return True


# -- horospheres lie near the orbit (sampled) -------------------------------------


def _orbit_ball(point: ProductVertex, ring: RingSpec, radius: int) -> dict:
    out = {}
    for word, g in gamma_ball(ring, radius, with_words=True):
        out.setdefault(act_point(g, point), word)
    return out


def _product_distance(p: ProductVertex, q: ProductVertex) -> int:
    return max(distance(p.inf, q.inf), distance(p.zero, q.zero))


def horosphere_cover_sample(
    R: int, samples: int, word_radius: int, ring: RingSpec | None = None, seed: int = 0, on_apartment: bool = False
) -> Certificate:
    """Max over sampled points of beta_rho^-1(R) of the distance to the word-ball orbit of x_m.

    Distances are per-factor tree distances combined by max.  Samples depend
    only on (R, seed), so enlarging the word ball never increases the result.
    """
    ring = ring or RingSpec.integers()
    field = ring.field
    m = R // 2
    rng = random.Random(f"cover:{R}:{seed}")
    orbit = _orbit_ball(x_point(m), ring, word_radius)
    witnesses = []
    worst = 0
    for _ in range(samples):
        a = rng.randint(m - 4, m + 4)
        y = apartment_point(a, R - a)
        u = Unipotent.of(0, field) if on_apartment else random_unipotent(rng, field, -3, 3)
        p = act_point(u.matrix, y)
        d, nearest = min((_product_distance(p, q), word) for q, word in orbit.items())
        worst = max(worst, d)
        witnesses.append({"point": point_to_json(p, field), "distance": d, "word": nearest})
    params = {"R": R, "samples": samples, "word_radius": word_radius, "ring": str(ring), "seed": seed}
    cert = Certificate("cover", params, PASS, witnesses, [SAMPLED], f"max observed distance {worst}; not a bound on the true supremum")
    cert.result = worst
    return cert


def _word_matrix(word: str, ring: RingSpec) -> Matrix2:
    table = dict(generators(ring))
    g = Matrix2.identity(ring.field)
    if word == "I":
        return g
    for label in word.split("*"):
        g = g @ table[label]
    return g


def _reverify_cover(cert: Certificate) -> bool:
    ring = _ring_from_json(cert.params["ring"])
    field = ring.field
    m = cert.params["R"] // 2
    for w in cert.witnesses:
        p = point_from_json(w["point"], field)
        if beta_rho(p) != cert.params["R"]:
            return False
        if _product_distance(p, act_point(_word_matrix(w["word"], ring), x_point(m))) != w["distance"]:
            return False
    return True


# -- the diagonal sequence leaves every bounded set -----------------------------------


def _divergence_row(M: Matrix2, i: int, L: int) -> dict:
    """Valuations of the first column of M D^i at infinity and M D^-i at zero."""
    field = M.field
    ti, tmi = RationalFunction.t_power(i, field), RationalFunction.t_power(-i, field)
    row = {"i": i}
    ok = True
    for name, e in (("a", M.a), ("c", M.c)):
        if e.is_zero():
            continue
        vi, v0 = valuation(e * ti, Place.INF), valuation(e * tmi, Place.ZERO)
        row[f"{name}_inf"], row[f"{name}_zero"] = vi, v0
        ok = ok and vi >= L and v0 >= L
    row["violated"] = not ok
    return row


def divergence_certificate(M: Matrix2, L: int) -> Certificate:
    """Least i0 beyond which M D^i cannot have all first-column valuations >= L.

    For nonzero Laurent e the bound on e t^(+-i) holds iff i <= min(nu_inf(e), nu_0(e)) - L,
    and nu_inf(e) + nu_0(e) <= 0, so i0 = 1 - L + min(...) never exceeds 1 - L.
    """
    if not M.is_sl2():
        raise ValueError("matrix must have determinant 1")
    if not M.has_laurent_entries():
        raise ValueError("matrix entries must be Laurent polynomials")
    vals = [min(valuation(e, Place.INF), valuation(e, Place.ZERO)) for e in (M.a, M.c) if not e.is_zero()]
    i0 = 1 - L + min(vals)
    rows = [_divergence_row(M, i, L) for i in range(i0 - 1, i0 + 4)]
    ok = not rows[0]["violated"] and all(r["violated"] for r in rows[1:]) and i0 <= 1 - L
    cert = Certificate("divergence", {"matrix": matrix_to_json(M), "L": L, "i0": i0, "field": field_name(M.field)}, _verdict(ok), rows)
    cert.result = i0
    return cert


def _reverify_divergence(cert: Certificate) -> bool:
    if "samples" in cert.params:
        return all(_reverify_divergence(Certificate.from_json(w)) for w in cert.witnesses)
    field = field_from_name(cert.params["field"])
    M = matrix_from_json(cert.params["matrix"], field)
    L, i0 = cert.params["L"], cert.params["i0"]
    rows = [_divergence_row(M, i, L) for i in range(i0 - 1, i0 + 4)]
    return rows == cert.witnesses and not rows[0]["violated"] and all(r["violated"] for r in rows[1:]) and i0 <= 1 - L


def random_gamma(rng: random.Random, ring: RingSpec, length: int = 6) -> Matrix2:
    gens = generators(ring)
    g = Matrix2.identity(ring.field)
    for _ in range(length):
        g = g @ rng.choice(gens)[1]
    return g


def divergence_suite(ring: RingSpec, samples: int, rng: random.Random) -> Certificate:
    witnesses = []
    ok = True
    for _ in range(samples):
        while True:
            M = random_gamma(rng, ring, rng.randint(2, 8))
            if not M.a.is_zero() and not M.c.is_zero():
                break
        cert = divergence_certificate(M, rng.randint(-3, 3))
        ok &= cert.passed
        witnesses.append(cert.to_json())
    return Certificate("divergence", {"ring": str(ring), "samples": samples}, _verdict(ok), witnesses)


# -- the orbit of x_0 stays out of a horoball -----------------------------------------


def horoball_gap(ring: RingSpec, radius: int) -> Certificate:
    """R* = 1 + max beta_rho over the orbit of x_0 under the word ball of the given radius."""
    log = []
    base = x_point(0)
    for word, g in gamma_ball(ring, radius, with_words=True):
        log.append({"word": word, "beta_rho": beta_rho(act_point(g, base))})
    r_star = 1 + max(row["beta_rho"] for row in log)
    ok = all(row["beta_rho"] < r_star for row in log)
    params = {"ring": str(ring), "radius": radius, "R_star": r_star, "evaluated": len(log)}
    note = "word-ball evaluation; for Laurent gamma beta_rho(gamma x_0) <= 0 always holds"
    cert = Certificate("horoball", params, _verdict(ok), log, [EXACT], note)
    cert.result = r_star
    return cert


def _reverify_horoball(cert: Certificate) -> bool:
    ring = _ring_from_json(cert.params["ring"])
    ball_size = len(gamma_ball(ring, cert.params["radius"]))
    if len(cert.witnesses) != ball_size:
        return False
    for row in cert.witnesses:
        g = _word_matrix(row["word"], ring)
        b = beta_rho(act_point(g, x_point(0)))
        if b != row["beta_rho"] or b >= cert.params["R_star"]:
            return False
    return True


# -- horoballs translated off P_Gamma do not overlap (sampled) -------------------------


def nooverlap_sample(gamma: Matrix2, h: HoroballSpec, samples: int, seed: int = 0) -> Certificate:
    if gamma.is_upper_triangular():
        raise ValueError("gamma lies in P; use the exact beta_rho-invariance check instead")
    field = gamma.field
    rng = random.Random(f"nooverlap:{seed}")
    witnesses = []
    ok = True
    for _ in range(samples):
        a = rng.randint(h.threshold - 4, h.threshold + 8)
        b = rng.randint(h.threshold - a, h.threshold - a + 6)
        u = random_unipotent(rng, field, -3, 3)
        p = act_point(u.matrix, apartment_point(a, b))
        image = beta_rho(act_point(gamma, p))
        good = image < h.threshold
        ok &= good
        witnesses.append({"point": point_to_json(p, field), "beta_rho": beta_rho(p), "image_beta_rho": image})
    params = {"gamma": matrix_to_json(gamma), "threshold": h.threshold, "samples": samples, "field": field_name(field)}
    return Certificate("nooverlap", params, _verdict(ok), witnesses, [SAMPLED])


def _reverify_nooverlap(cert: Certificate) -> bool:
    field = field_from_name(cert.params["field"])
    gamma = matrix_from_json(cert.params["gamma"], field)
    th = cert.params["threshold"]
    for w in cert.witnesses:
        p = point_from_json(w["point"], field)
        image = beta_rho(act_point(gamma, p))
        if beta_rho(p) < th or image != w["image_beta_rho"] or image >= th:
            return False
    return True


# -- tree structure ------------------------------------------------------------------------


def tree_certificate(p: int, radius: int) -> Certificate:
    """Closed-form distances against BFS, and valence p + 1, on a ball in the tree over F_p."""
    field = GF(p)
    witnesses = []
    ok = True
    for at in (Place.ZERO, Place.INF):
        verts = list(ball(TreeVertex(at, 0), radius, field))
        mismatches = 0
        for u in verts:
            bfs = bfs_distances(u, verts, field)
            mismatches += sum(bfs[v] != distance(u, v) for v in verts)
        inner = [v for v in verts if distance(TreeVertex(at, 0), v) < radius]
        valence_ok = all(
            len(set(neighbors(v, field))) == p + 1 and all(v in neighbors(w, field) for w in neighbors(v, field))
            for v in inner
        )
        ok &= mismatches == 0 and valence_ok
        witnesses.append({"place": at.value, "vertices": len(verts), "mismatches": mismatches, "valence_ok": valence_ok})
    return Certificate("tree", {"p": p, "radius": radius}, _verdict(ok), witnesses)


def _reverify_tree(cert: Certificate) -> bool:
    again = tree_certificate(cert.params["p"], cert.params["radius"])
    return again.witnesses == cert.witnesses and again.passed


# -- U_n acts simply transitively on the lower star -----------------------------------


def transitivity_certificate(primes=(2, 3, 5), ns=(1, 2, 3)) -> Certificate:
    witnesses = []
    ok = True
    for p in primes:
        field = GF(p)
        for n in ns:
            cells = set(StarDown(n, field))
            images = {}
            for a in field.elements():
                for b in field.elements():
                    images[(a, b)] = make_C_cell(n, a, b, field)
            inverse_ok = all(cell_coords(c, n, field) == ab for ab, c in images.items())
            good = len(cells) == p * p and set(images.values()) == cells and inverse_ok
            ok &= good
            witnesses.append({"p": p, "n": n, "cells": len(cells), "bijective": good})
    return Certificate("transitivity", {"primes": list(primes), "ns": list(ns)}, _verdict(ok), witnesses)


def _reverify_transitivity(cert: Certificate) -> bool:
    again = transitivity_certificate(cert.params["primes"], cert.params["ns"])
    return again.witnesses == cert.witnesses and again.passed


# -- phi_n is U_n-invariant on relative cycles ------------------------------------


def random_basic_cycle(rng: random.Random, field, n: int) -> BasicCycle:
    while True:
        x, y, x2, y2 = (field.random(rng, 4) for _ in range(4))
        if x != x2 or y != y2:
            return BasicCycle(n, x, y, x2, y2, field.random(rng, 4, nonzero=True))


def invariance_certificate(field, samples: int, rng: random.Random) -> Certificate:
    witnesses = []
    ok = True
    for _ in range(samples):
        n = rng.randint(1, 3)
        bc = random_basic_cycle(rng, field, n)
        u = random_unipotent(rng, field, -n, n, 4)
        chain = bc.chain(field)
        before, after = phi(n, chain), phi(n, act_chain(u, chain))
        ok &= before == after
        witnesses.append(
            {
                "n": n,
                "cycle": [field.format(s) for s in (bc.x, bc.y, bc.x2, bc.y2, bc.coeff)],
                "u": str(u.x),
                "phi": field.format(before),
                "phi_moved": field.format(after),
            }
        )
    return Certificate("invariance", {"field": field_name(field), "samples": samples}, _verdict(ok), witnesses)


def _reverify_invariance(cert: Certificate) -> bool:
    field = field_from_name(cert.params["field"])
    for w in cert.witnesses:
        n = w["n"]
        x, y, x2, y2, c = (field.parse(s) for s in w["cycle"])
        chain = BasicCycle(n, x, y, x2, y2, c).chain(field)
        u = Unipotent(parse_rational(w["u"], field))
        if field.format(phi(n, chain)) != w["phi"] or phi(n, act_chain(u, chain)) != phi(n, chain):
            return False
    return True


# -- chain complex -------------------------------------------------------------------------


def random_two_chain(rng: random.Random, field, cells: int = 6) -> Chain:
    """Sums of translated apartment squares (so faces are shared and cancel)."""
    gens = generators(RingSpec.integers() if not field.is_finite else RingSpec.prime(field.characteristic))
    terms = []
    for _ in range(cells):
        g = Matrix2.identity(field)
        for _ in range(rng.randint(0, 3)):
            g = g @ rng.choice(gens)[1]
        sq = Chain.single(apartment_square(rng.randint(-2, 2), rng.randint(-2, 2)), field.random(rng, 4, nonzero=True), field)
        terms.append(act_chain(g, sq))
    total = Chain([], field)
    for t in terms:
        total = total + t
    return total


def boundary_certificate(field, samples: int, rng: random.Random) -> Certificate:
    ok = True
    witnesses = []
    for _ in range(samples):
        c = random_two_chain(rng, field)
        dd = boundary(boundary(c))
        ok &= dd.is_zero()
        witnesses.append({"cells": len(c), "dd_terms": len(dd)})
    return Certificate("boundary", {"field": field_name(field), "samples": samples}, _verdict(ok), witnesses)


def _reverify_boundary(cert: Certificate) -> bool:
    return all(w["dd_terms"] == 0 for w in cert.witnesses)


# -- theta_n ---------------------------------------------------------------------------------


def y_n_by_enumeration(n: int, levels: tuple, field, extra: int = 2) -> set:
    """All offset pairs (Inf jet, Zero jet) reachable by x in U_n from Sigma, by brute force.

    Candidates are x = f / (t^n (1 + t)^k) with deg f <= 2n + k, all of which
    lie in U_n; over a finite field this family realizes every reachable pair
    of jets once k is large enough, which the caller can confirm by counting.
    """
    m_inf, m_zero = levels
    k = max(m_inf, 0) + max(m_zero, 0) + extra
    denom = RationalFunction(
        Polynomial([0] * n + [1], field) * Polynomial([1, 1], field) ** k if k else Polynomial([0] * n + [1], field)
    )
    reach = set()
    for coeffs in itertools.product(field.elements(), repeat=2 * n + k + 1):
        x = RationalFunction(Polynomial(list(coeffs), field)) / denom
        zi = tuple(sorted(jet(x, Place.INF, m_inf).items()))
        zz = tuple(sorted(jet(x, Place.ZERO, m_zero).items()))
        reach.add((zi, zz))
    return reach


def theta_certificate(field, samples: int, rng: random.Random, enum_n: int = 1, window: int = 3) -> Certificate:
    witnesses = []
    ok = True
    for _ in range(samples):
        n = rng.randint(1, 3)
        p = random_point(rng, field, (-n - 3, n + 3))
        u, q = reduce_theta(n, p, field)
        w = random_unipotent(rng, field, -n - 4, n + 4, 4, skip=lambda k: abs(k) <= n)
        _, q2 = reduce_theta(n, act_point(w.matrix, p), field)
        idem = reduce_theta(n, q, field)[0].is_identity()
        good = in_Y_n(n, q) and idem and q2 == q
        ok &= good
        witnesses.append({"n": n, "point": point_to_json(p, field), "u": str(u.x), "image": point_to_json(q, field), "w": str(w.x)})
    enum_rows = []
    if field.is_finite and field.characteristic == 2:
        enum_rows = _enumeration_rows(enum_n, window, field)
        ok &= all(r["agree"] for r in enum_rows)
    params = {"field": field_name(field), "samples": samples, "enum_n": enum_n, "window": window}
    return Certificate("theta", params, _verdict(ok), witnesses + enum_rows)


def _enumeration_rows(n: int, window: int, field) -> list:
    rows = []
    for m_inf in range(-n - 1, n + 2):
        for m_zero in range(-n - 1, n + 2):
            reach = y_n_by_enumeration(n, (m_inf, m_zero), field)
            agree = True
            for ci in itertools.product(field.elements(), repeat=window):
                for cz in itertools.product(field.elements(), repeat=window):
                    vi = TreeVertex.make(Place.INF, m_inf, {m_inf - window + j: c for j, c in enumerate(ci)})
                    vz = TreeVertex.make(Place.ZERO, m_zero, {m_zero - window + j: c for j, c in enumerate(cz)})
                    brute = (vi.offset, vz.offset) in reach
                    agree &= brute == in_Y_n(n, ProductVertex(vi, vz))
            rows.append({"n": n, "levels": [m_inf, m_zero], "agree": agree})
    return rows


def _reverify_theta(cert: Certificate) -> bool:
    field = field_from_name(cert.params["field"])
    for w in cert.witnesses:
        if "levels" in w:
            continue
        n = w["n"]
        p, q = point_from_json(w["point"], field), point_from_json(w["image"], field)
        u, wu = Unipotent(parse_rational(w["u"], field)), Unipotent(parse_rational(w["w"], field))
        if act_point(u.matrix, p) != q or not in_Y_n(n, q) or reduce_theta(n, act_point(wu.matrix, p), field)[1] != q:
            return False
    if field.is_finite and field.characteristic == 2:
        return all(r["agree"] for r in _enumeration_rows(cert.params["enum_n"], cert.params["window"], field))
    return True


# -- Phi_n: pairing, representative independence, support -----------------------------------


def pairing_certificate(indices, ring: RingSpec, horoball: HoroballSpec) -> Certificate:
    report = pairing_matrix(list(indices), ring, horoball)
    params = {"indices": list(indices), "ring": str(ring), "threshold": horoball.threshold}
    cert = Certificate("pairing", params, _verdict(report.triangular and report.rank == len(indices)), [report.to_json()])
    cert.result = report
    return cert


def _reverify_pairing(cert: Certificate) -> bool:
    ring = _ring_from_json(cert.params["ring"])
    again = pairing_certificate(cert.params["indices"], ring, HoroballSpec(cert.params["threshold"]))
    return again.witnesses == cert.witnesses and again.passed


def welldef_certificate(indices, ring: RingSpec, horoball: HoroballSpec, samples: int, rng: random.Random) -> Certificate:
    """Replacing each coset representative g by v g, v in U_Gamma, leaves every term unchanged."""
    field = ring.field
    witnesses = []
    ok = True
    for _ in range(samples):
        k, m = rng.choice(indices), rng.choice(indices) // 2
        chain = square_B(m, field)
        base = big_phi_terms(k, chain, ring, horoball)
        v = random_unipotent(rng, field, -3 * k, 3 * k, 5)
        moved = big_phi_terms(k, chain, ring, horoball, perturb=lambda u, j: v)
        good = moved == base
        ok &= good
        witnesses.append({"k": k, "m": m, "v": str(v.x), "terms": [field.format(t[2]) for t in base], "unchanged": good})
    params = {"indices": list(indices), "ring": str(ring), "threshold": horoball.threshold, "samples": samples}
    return Certificate("welldef", params, _verdict(ok), witnesses)


def _reverify_welldef(cert: Certificate) -> bool:
    ring = _ring_from_json(cert.params["ring"])
    field = ring.field
    h = HoroballSpec(cert.params["threshold"])
    for w in cert.witnesses:
        chain = square_B(w["m"], field)
        v = Unipotent(parse_rational(w["v"], field))
        base = big_phi_terms(w["k"], chain, ring, h)
        if [field.format(t[2]) for t in base] != w["terms"]:
            return False
        if big_phi_terms(w["k"], chain, ring, h, perturb=lambda u, j: v) != base:
            return False
    return True


def _support_rows(indices, ring: RingSpec, horoball: HoroballSpec) -> list:
    field = ring.field
    rows = []
    for m2 in indices:
        chain = square_B(m2 // 2, field)
        top = max(beta_rho(p) for p in boundary(chain).vertices())
        for k in indices:
            if top >= 2 * k:
                continue
            window = coset_window_for(k, chain, ring, horoball)
            star = StarDown(k, field)
            for u, j, g in window.representatives():
                moved = act_chain(g, window.chain)
                near = moved.restrict(
                    lambda c: all(k - 1 <= b <= k + 1 for pl in (Place.INF, Place.ZERO) for b in c.beta_range(pl))
                )
                image = theta_chain(k, near)
                stray = [c for c, _ in image if x_point(k) in c.vertices() and c not in star]
                rows.append({"k": k, "B": m2, "unit": field.format(u), "power": j, "stray": len(stray)})
    return rows


def support_certificate(indices, ring: RingSpec, horoball: HoroballSpec) -> Certificate:
    rows = _support_rows(indices, ring, horoball)
    params = {"indices": list(indices), "ring": str(ring), "threshold": horoball.threshold}
    return Certificate("support", params, _verdict(all(r["stray"] == 0 for r in rows)), rows)


def _reverify_support(cert: Certificate) -> bool:
    ring = _ring_from_json(cert.params["ring"])
    rows = _support_rows(cert.params["indices"], ring, HoroballSpec(cert.params["threshold"]))
    return rows == cert.witnesses and all(r["stray"] == 0 for r in rows)


# -- driver ------------------------------------------------------------------------------------

PAIRING_INDICES = (2, 4, 6)

_REVERIFIERS: dict[str, Callable[[Certificate], bool]] = {
    "apartment": _reverify_apartment,
    "beta": _reverify_beta,
    "boundary": _reverify_boundary,
    "cover": _reverify_cover,
    "density": _reverify_density,
    "divergence": _reverify_divergence,
    "horoball": _reverify_horoball,
    "invariance": _reverify_invariance,
    "nooverlap": _reverify_nooverlap,
    "p1": _reverify_p1,
    "pairing": _reverify_pairing,
    "support": _reverify_support,
    "theta": _reverify_theta,
    "transitivity": _reverify_transitivity,
    "tree": _reverify_tree,
    "welldef": _reverify_welldef,
}

TAGS = tuple(sorted(_REVERIFIERS))


def reverify(cert: Certificate) -> bool:
    """Repeat the checks a certificate asserts using only its parameters and witnesses."""
    if cert.lemma not in _REVERIFIERS:
        raise ValueError(f"unknown lemma tag {cert.lemma!r}")
    return _REVERIFIERS[cert.lemma](cert)


def run_check(tag: str, config: Config) -> Certificate:
    if tag not in TAGS:
        raise ValueError(f"unknown lemma tag {tag!r}; choose from {', '.join(TAGS)} or all")
    rng = random.Random(f"{config.seed}:{tag}")
    field, ring, h, s = config.field, config.ring, config.horoball, config.samples
    if tag == "apartment":
        return apartment_certificate(field, s, rng)
    if tag == "beta":
        return beta_invariance_certificate(ring, s, rng)
    if tag == "boundary":
        return boundary_certificate(field, s, rng)
    if tag == "cover":
        return horosphere_cover_sample(4, s, config.word_radius, ring, config.seed)
    if tag == "density":
        return density_certificate(field, s, rng)
    if tag == "divergence":
        return divergence_suite(ring, s, rng)
    if tag == "horoball":
        return horoball_gap(ring, config.word_radius)
    if tag == "invariance":
        return invariance_certificate(field, s, rng)
    if tag == "nooverlap":
        w = Matrix2.of(0, -1, 1, 0, field=field)
        return nooverlap_sample(w, h, s, config.seed)
    if tag == "p1":
        return p1_certificate(field, s, rng)
    if tag == "pairing":
        return pairing_certificate(PAIRING_INDICES, ring, h)
    if tag == "support":
        return support_certificate(PAIRING_INDICES, ring, h)
    if tag == "theta":
        return theta_certificate(field, s, rng)
    if tag == "transitivity":
        return transitivity_certificate()
    if tag == "tree":
        return tree_certificate(field.characteristic if field.is_finite else 2, config.ball_radius)
    return welldef_certificate(PAIRING_INDICES, ring, h, max(1, s // 4), rng)


def run_all(config: Config | None = None) -> list[Certificate]:
    """Every check, ordered by tag; deterministic given the seed."""
    config = config or Config()
    return [run_check(tag, config) for tag in TAGS]
