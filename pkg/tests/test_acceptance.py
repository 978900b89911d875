"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line."""

import json
import random
from functools import lru_cache

from reflexmod.algebra import audit_reflexive
from reflexmod.docs import parse_workspace
from reflexmod.generators import HOM_STYLES, random_hom, random_lattice
from reflexmod.lattice import ConsistencyError, OrderHom, SubspaceLattice, hom_tilde
from reflexmod.linalg import random_subspace_of, random_vector, random_vector_in
from reflexmod.modules import (
    is_reflexive_module,
    lat_module_verdicts,
    module_from_hom_left,
    module_from_hom_right,
    ref_module,
    ref_sampling_oracle,
    tau_of,
)
from reflexmod.oracles import compare_with_lattice
from reflexmod.rankone import (
    check_complete_distributivity,
    check_ref_rankone,
    lat_rankone_membership,
    rankone_in_left_module,
    rankone_in_right_module,
)
from reflexmod.suite import run_suite

from conftest import ROOT, WORKSPACES, hom, line, record_acceptance, sub

STYLES = ("random", "nest", "distributive", "lines")
AUDIT_TRIALS = 100


@lru_cache(maxsize=None)
def carrier(seed: int) -> SubspaceLattice:
    rng = random.Random(seed)
    n = 2 + seed % 3
    return random_lattice(rng, n, rng.randint(3, 9), STYLES[seed % len(STYLES)])


@lru_cache(maxsize=None)
def audit(seed: int):
    return audit_reflexive(carrier(seed), AUDIT_TRIALS, seed)


def audited_seeds(count: int, start: int = 0) -> list[int]:
    out = []
    seed = start
    while len(out) < count:
        if audit(seed).verified:
            out.append(seed)
        seed += 1
    return out


def hom_for(seed: int, salt: int = 0) -> OrderHom:
    rng = random.Random(f"hom:{seed}:{salt}")
    return random_hom(rng, carrier(seed), rng.choice(HOM_STYLES))


def test_roundtrip():
    failures = 0
    seeds = audited_seeds(200)
    for s in seeds:
        lat = carrier(s)
        inst = module_from_hom_right(lat, None, hom_for(s), audit(s))
        back = module_from_hom_right(lat, None, tau_of(inst.space, lat)).space
        if back != inst.space or not is_reflexive_module(inst.space, lat, inst.algebra):
            failures += 1
    record_acceptance(1, "round-trip", failures == 0, f"{len(seeds)} audited homs, {failures} failures")
    assert failures == 0


def _pair(rng, lat, phi, n, side):
    """Half the draws target the criterion (x in E, y orthogonal to the tilde value), half are free."""
    if rng.random() < 0.5:
        e = rng.choice(lat.elements)
        if side == "right":
            xs, ys = e, hom_tilde(lat, phi)(e).orth_complement()
        else:
            xs, ys = lat.meet(f for f, v in phi.items() if not e.contains(v)), e.orth_complement()
        x, y = random_vector_in(rng, xs, 3), random_vector_in(rng, ys, 3)
        if any(x) and any(y):
            return x, y
    while True:
        x, y = random_vector(rng, n, 3), random_vector(rng, n, 3)
        if any(x) and any(y):
            return x, y


def test_rankone_membership():
    rng = random.Random(2026)
    disagreements = 0
    off_carrier = 0
    carrier_valued = 0
    for t in range(1000):
        seed = t % 250
        lat = carrier(seed)
        phi = hom_for(seed, t)
        side = "right" if t % 2 == 0 else "left"
        x, y = _pair(rng, lat, phi, lat.n, side)
        carrier_valued += all(v in lat for v in phi.values)
        try:
            if side == "right":
                rankone_in_right_module(x, y, lat, phi)
            else:
                rankone_in_left_module(x, y, lat, phi)
        except ConsistencyError:
            disagreements += 1
            off_carrier += any(v not in lat for v in phi.values)
    record_acceptance(2, "rank-one membership", disagreements == 0,
                      f"1000 triples, {disagreements} disagreements, {off_carrier} of them with hom values "
                      f"outside the carrier; {carrier_valued} carrier-valued triples, "
                      f"{disagreements - off_carrier} disagreements among them")
    assert disagreements == 0


def test_lat_rankone():
    l2 = SubspaceLattice([line(1, 0)], 2)
    e1, e2 = line(1, 0), line(0, 1)
    ideal = hom(l2, l2.bottom, l2.bottom, e1)
    top = hom(l2, l2.bottom, l2.top, l2.top)
    goldens = [lat_rankone_membership(e1, l2, ideal), lat_rankone_membership(e2, l2, ideal),
               lat_rankone_membership(e1, l2, top)]
    rng = random.Random(31)
    disagreements = 0
    for t in range(500):
        seed = t % 250
        lat = carrier(seed)
        phi = hom_for(seed, t)
        if t % 2:
            k = random_subspace_of(rng, lat.top, box=3)
        else:
            lo = rng.choice(lat.elements)
            k = lo.sum(random_subspace_of(rng, lo.orth_complement(), box=3))
        try:
            lat_rankone_membership(k, lat, phi)
        except ConsistencyError:
            disagreements += 1
    ok = disagreements == 0 and goldens == [True, False, False]
    record_acceptance(3, "Lat R interval criterion", ok,
                      f"500 pairs, {disagreements} disagreements, L2 goldens {goldens}")
    assert ok


def test_lat_module():
    rng = random.Random(47)
    seeds = audited_seeds(250)
    disagreements = 0
    for t in range(500):
        s = seeds[t % len(seeds)]
        lat = carrier(s)
        build = module_from_hom_right if t % 2 == 0 else module_from_hom_left
        inst = build(lat, None, hom_for(s, t), audit(s))
        tau = tau_of(inst.space, lat, inst.side)
        if rng.random() < 0.5:
            e, v = rng.choice(list(tau.items()))
            lo, hi = (v, e) if inst.side == "right" else (e, v)
            p = lo.sum(random_subspace_of(rng, hi.intersect(lo.orth_complement()), box=3)) if hi.contains(lo) \
                else random_subspace_of(rng, lat.top, box=3)
        else:
            p = random_subspace_of(rng, lat.top, box=3)
        direct, crit = lat_module_verdicts(inst, p)
        disagreements += direct != crit
    record_acceptance(4, "Lat U interval criterion", disagreements == 0,
                      f"500 audited pairs, {disagreements} disagreements")
    assert disagreements == 0


def test_ref_rankone():
    l2 = SubspaceLattice([line(1, 0)], 2)
    e1 = line(1, 0)
    a2 = audit_reflexive(l2, AUDIT_TRIALS, 0)
    full = check_ref_rankone(module_from_hom_right(l2, None, hom(l2, l2.bottom, l2.top, l2.top), a2))
    strict = check_ref_rankone(module_from_hom_right(l2, None, hom(l2, l2.bottom, l2.bottom, e1), a2))
    goldens = (
        [(r["tau"], r["tau_tilde_tilde"]) for r in full["table"]]
        == [(l2.bottom, l2.bottom), (l2.top, l2.top), (l2.top, l2.top)]
        and full["verdict"] is True
        and [r["tau"] for r in strict["table"]] == [l2.bottom, l2.bottom, e1]
        and strict["verdict"] is True
    )
    seeds = audited_seeds(200)
    disagreements = 0
    for s in seeds:
        inst = module_from_hom_right(carrier(s), None, hom_for(s), audit(s))
        try:
            out = check_ref_rankone(inst)
            disagreements += not out["consistent"]
        except ConsistencyError:
            disagreements += 1
    ok = disagreements == 0 and goldens
    record_acceptance(5, "Ref R = U vs tau = tau~~", ok,
                      f"{len(seeds)} audited instances, {disagreements} disagreements, L2 goldens {goldens}")
    assert ok


def test_complete_distributivity():
    goldens = {
        "N3": SubspaceLattice([line(1, 0, 0), sub((1, 0, 0), (0, 1, 0))], 3),
        "B2": SubspaceLattice([line(1, 0), line(0, 1)], 2),
        "{0,H}": SubspaceLattice([], 2),
    }
    m3 = SubspaceLattice([line(1, 0), line(0, 1), line(1, 1)], 2)
    m3_audit = audit_reflexive(m3, AUDIT_TRIALS, 0)
    m3_ok = m3_audit.verdict == "counterexample" and m3_audit.witness not in m3
    bad = []
    for name, lat in goldens.items():
        out = check_complete_distributivity(lat, audit_reflexive(lat, AUDIT_TRIALS, 0))
        if not (out["sharp_route"] and out["hull_route"] and out["star_route"]):
            bad.append(name)
    seeds = audited_seeds(100)
    disagreements = 0
    for s in seeds:
        try:
            out = check_complete_distributivity(carrier(s), audit(s))
            disagreements += not out["consistent"]
        except ConsistencyError:
            disagreements += 1
    ok = disagreements == 0 and not bad and m3_ok
    record_acceptance(6, "complete distributivity triple", ok,
                      f"{len(seeds)} audited carriers, {disagreements} disagreements, golden failures {bad}, "
                      f"M3 excluded with counterexample {m3_ok}")
    assert ok


def test_oracle_sandwich():
    seeds = audited_seeds(200)
    not_containing = 0
    equal = 0
    resampled_equal = 0
    for s in seeds:
        lat = carrier(s)
        inst = module_from_hom_right(lat, None, hom_for(s), audit(s))
        hull = ref_module(inst.space, lat, inst.algebra, "right", inst.audit).space
        oracle = ref_sampling_oracle(inst.space, 3 * lat.n, s, probes=list(lat))
        if not oracle.contains(hull):
            not_containing += 1
        if oracle == hull:
            equal += 1
        else:
            big = ref_sampling_oracle(inst.space, 10 * lat.n, s + 1, probes=list(lat), box=99)
            resampled_equal += big == hull
    rate = equal / len(seeds)
    ok = not_containing == 0 and rate >= 0.95 and equal + resampled_equal == len(seeds)
    record_acceptance(7, "oracle sandwich", ok,
                      f"{len(seeds)} audited instances, equality {rate:.1%} at 3n samples per probe, "
                      f"{resampled_equal} reached equality on resampling, {not_containing} containment failures")
    assert ok


def test_map_oracle():
    mismatches = 0
    for s in range(250):
        lat = carrier(s)
        homs = {f"h{i}": hom_for(s, i) for i in range(3)}
        mismatches += len(compare_with_lattice(lat, homs))
    record_acceptance(8, "brute-force map oracle", mismatches == 0, f"250 carriers, {mismatches} mismatches")
    assert mismatches == 0


def test_worked_example_goldens():
    l2 = parse_workspace(json.loads((WORKSPACES / "l2.json").read_text()))
    m3 = parse_workspace(json.loads((WORKSPACES / "m3.json").read_text()))
    rec = [r.to_record() for r in run_suite(l2, ["alg", "lat-rankone"])]
    text = json.dumps(rec, indent=2, sort_keys=True) + "\n"
    golden = (ROOT / "tests" / "golden" / "l2_alg_rankone.json").read_text()
    m3_rec = json.dumps([r.to_record() for r in run_suite(m3, ["alg"])], indent=2, sort_keys=True) + "\n"
    m3_golden = (ROOT / "tests" / "golden" / "m3_alg.json").read_text()
    tables = rec[1]["tables"]
    checks = {
        "alg(L2) dim 3": rec[0]["tables"]["alg"][0]["dim"] == 3,
        "alg(M3) dim 1": json.loads(m3_rec)[0]["tables"]["alg"][0]["dim"] == 1,
        "R = span{e1 (x) e2}": tables["rankone:ideal"] == [{"basis": [[["0", "1"], ["0", "0"]]], "dim": 1}],
        "Lat R = {0, <e1>, H}": tables["lat:ideal"] == [
            {"elements": [[], [["1", "0"]], [["1", "0"], ["0", "1"]]], "finite": True}],
        "byte-exact records": text == golden and m3_rec == m3_golden,
    }
    bad = [k for k, v in checks.items() if not v]
    record_acceptance(9, "worked-example goldens", not bad, f"failed: {bad}" if bad else "all match")
    assert not bad
