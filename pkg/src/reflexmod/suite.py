"""Check registry and suite runner.

Each check consumes a :class:`~reflexmod.docs.Workspace` and produces a
:class:`CheckReport`.  A check that detects two routes disagreeing (on data
where they must agree) reports ``consistency == "violation"``; the CLI maps
that to exit status 1.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .algebra import AuditResult, OperatorSpace, alg, audit_reflexive
from .docs import Workspace, to_jsonable
from .lattice import (
    ConsistencyError,
    derived_tables,
    distributivity_verdict,
    hom_star,
    hom_tilde,
    is_commutative,
)
from .linalg import Subspace, random_subspace_of, random_vector, random_vector_in
from .modules import (
    ModuleInstance,
    is_ideal,
    is_reflexive_module,
    lat_module_verdicts,
    module_from_hom_left,
    module_from_hom_right,
    ref_module,
    ref_sampling_oracle,
    tau_of,
)
from .oracles import compare_with_lattice
from .rankone import (
    check_complete_distributivity,
    check_lat_determined,
    check_lattice_recovery,
    check_ref_rankone,
    lat_rankone_elements,
    lat_rankone_membership,
    rankone_in_left_module,
    rankone_in_right_module,
    rankone_submodule,
)

__all__ = ["CheckReport", "RunOptions", "CHECKS", "run_suite", "exit_status"]

UNAUDITED = "carrier failed the reflexivity audit; carrier-dependent verdicts are upper bounds"


@dataclass
class CheckReport:
    check: str
    digest: str
    audit: dict | None
    tables: dict
    verdict: bool | None
    consistency: str = "ok"
    notes: list = field(default_factory=list)
    runtime: float | None = None

    @property
    def passed(self) -> bool:
        return self.consistency == "ok"

    def to_record(self, include_runtime: bool = False) -> dict:
        out = {
            "check": self.check,
            "inputs_digest": self.digest,
            "audit": self.audit,
            "tables": to_jsonable(self.tables),
            "verdict": self.verdict,
            "consistency": self.consistency,
            "notes": list(self.notes),
        }
        if include_runtime:
            out["runtime"] = round(self.runtime or 0.0, 6)
        return out


@dataclass(frozen=True)
class RunOptions:
    seed: int | None = None
    trials: int = 200
    samples: int = 25

    def as_dict(self) -> dict:
        return {"seed": self.seed, "trials": self.trials, "samples": self.samples}


class _Context:
    """Per-run caches shared by the checks (audit, algebra, module instances)."""

    def __init__(self, ws: Workspace, opts: RunOptions):
        self.ws = ws
        self.opts = opts
        self._audit: AuditResult | None = None
        self._alg: OperatorSpace | None = None
        self._modules: dict[str, ModuleInstance] = {}

    def seed(self, key: str) -> int:
        return self.opts.seed if self.opts.seed is not None else self.ws.seed(key)

    def rng(self, key: str, salt: str) -> random.Random:
        return random.Random(f"{self.seed(key)}:{salt}")

    @property
    def algebra(self) -> OperatorSpace:
        if self._alg is None:
            self._alg = self.ws.algebra if self.ws.algebra is not None else alg(self.ws.lattice)
        return self._alg

    @property
    def audit(self) -> AuditResult:
        if self._audit is None:
            self._audit = audit_reflexive(self.ws.lattice, self.opts.trials, self.seed("audit"), self.algebra)
        return self._audit

    def module(self, name: str) -> ModuleInstance:
        if name not in self._modules:
            side, hom = self.ws.modules[name]
            build = module_from_hom_right if side == "right" else module_from_hom_left
            self._modules[name] = build(self.ws.lattice, self.ws.algebra, self.ws.homs[hom], self.audit)
        return self._modules[name]


class _Result:
    def __init__(self, tables: dict | None = None, verdict: bool | None = None, notes: list | None = None,
                 uses_audit: bool = False):
        self.tables = tables or {}
        self.verdict = verdict
        self.notes = notes or []
        self.uses_audit = uses_audit


def _check_audit(ctx: _Context) -> _Result:
    a = ctx.audit
    return _Result({"audit": [a.to_json()]}, a.verified, uses_audit=True)


def _check_closure(ctx: _Context) -> _Result:
    ws = ctx.ws
    rows = [{"name": ws.name_of(e), "dim": e.dim, "basis": e} for e in ws.lattice]
    summary = {
        "size": len(ws.lattice),
        "chain": ws.lattice.is_chain(),
        "distributive": distributivity_verdict(ws.lattice),
        "commutative": is_commutative(ws.lattice),
    }
    return _Result({"carrier": rows, "summary": [summary]}, None)


def _check_alg(ctx: _Context) -> _Result:
    a = alg(ctx.ws.lattice)
    rows = [{"dim": a.dim, "basis": a}]
    return _Result({"alg": rows}, a.is_unital_algebra())


def _check_maps(ctx: _Context) -> _Result:
    ws = ctx.ws
    tables = {"lattice": derived_tables(ws.lattice)}
    for name, phi in ws.homs.items():
        t = hom_tilde(ws.lattice, phi)
        s = hom_star(ws.lattice, phi)
        tables[f"hom:{name}"] = [{"E": e, "phi": v, "tilde": tv, "star": sv}
                                 for (e, v), tv, sv in zip(phi.items(), t.values, s.values)]
    bad = compare_with_lattice(ws.lattice, ws.homs)
    if bad:
        raise ConsistencyError("brute-force oracle disagrees: " + "; ".join(bad[:5]))
    return _Result(tables, True, [f"brute-force oracle agrees on {len(ws.lattice)} elements"])


def _check_module(ctx: _Context) -> _Result:
    tables = {}
    for name in ctx.ws.modules:
        inst = ctx.module(name)
        tau = tau_of(inst.space, inst.lattice, inst.side)
        tables[f"module:{name}"] = [{"side": inst.side, "dim": inst.space.dim, "basis": inst.space}]
        tables[f"tau:{name}"] = [{"E": e, "tau": t} for e, t in tau.items()]
    return _Result(tables, None)


def _check_roundtrip(ctx: _Context) -> _Result:
    rows = []
    for name in ctx.ws.modules:
        inst = ctx.module(name)
        tau = tau_of(inst.space, inst.lattice, inst.side)
        build = module_from_hom_right if inst.side == "right" else module_from_hom_left
        back = build(inst.lattice, inst.algebra, tau).space
        refl = is_reflexive_module(inst.space, inst.lattice, inst.algebra, inst.side)
        if back != inst.space or not refl:
            raise ConsistencyError(f"module {name}: rebuilt from tau equals U is {back == inst.space}, "
                                   f"reflexive is {refl}")
        rows.append({"module": name, "side": inst.side, "dim": inst.space.dim, "rebuilt": True, "reflexive": True})
    return _Result({"roundtrip": rows}, True)


def _check_ideal(ctx: _Context) -> _Result:
    rows = []
    for name in ctx.ws.modules:
        inst = ctx.module(name)
        rows.append({"module": name, "side": inst.side, "ideal": is_ideal(inst)})
    return _Result({"ideal": rows}, all(r["ideal"] for r in rows) if rows else None)


def _sample_p(rng: random.Random, inst: ModuleInstance, tau) -> Subspace:
    """Half the draws come from some interval [tau(E), E] (or its left mirror), half are free."""
    lat = inst.lattice
    if rng.random() < 0.5:
        e, t = rng.choice(list(tau.items()))
        lo, hi = (t, e) if inst.side == "right" else (e, t)
        if hi.contains(lo):
            d = hi.intersect(lo.orth_complement())
            return lo.sum(random_subspace_of(rng, d, box=3))
    return random_subspace_of(rng, lat.top, box=3)


def _check_lat_module(ctx: _Context) -> _Result:
    rows = []
    notes = []
    for name in ctx.ws.modules:
        inst = ctx.module(name)
        tau = tau_of(inst.space, inst.lattice, inst.side)
        rng = ctx.rng("sampling", f"lat-module:{name}")
        agree = invariant = 0
        for _ in range(ctx.opts.samples):
            p = _sample_p(rng, inst, tau)
            direct, crit = lat_module_verdicts(inst, p)
            if direct != crit:
                if inst.certainty == "exact":
                    raise ConsistencyError(f"module {name}: P={p!r} direct {direct}, criterion {crit}")
                notes.append(f"module {name}: criterion differs at {p!r} on an unaudited carrier")
            else:
                agree += 1
            invariant += direct
        rows.append({"module": name, "samples": ctx.opts.samples, "agree": agree, "invariant": invariant,
                     "certainty": inst.certainty})
    ok = all(r["agree"] == r["samples"] for r in rows)
    return _Result({"lat-module": rows}, ok, notes, uses_audit=True)


def _check_rankone_membership(ctx: _Context) -> _Result:
    ws = ctx.ws
    lat = ws.lattice
    n = ws.n
    rows = []
    for name, phi in ws.homs.items():
        rng = ctx.rng("sampling", f"rankone:{name}")
        u_r = module_from_hom_right(lat, ws.algebra, phi).space
        u_l = module_from_hom_left(lat, ws.algebra, phi).space
        tilde = hom_tilde(lat, phi)
        hits = {"right": 0, "left": 0}
        for _ in range(ctx.opts.samples):
            x, y = _rankone_pair(rng, lat, tilde, n)
            hits["right"] += rankone_in_right_module(x, y, lat, phi, u_r)
            x, y = _rankone_pair_left(rng, lat, phi, n)
            hits["left"] += rankone_in_left_module(x, y, lat, phi, u_l)
        rows.append({"hom": name, "samples": ctx.opts.samples, "right_members": hits["right"],
                     "left_members": hits["left"]})
    return _Result({"rankone-membership": rows}, True)


def _nonzero(rng: random.Random, s: Subspace, n: int):
    if s.is_zero():
        return None
    for box in (3, 9, 27):
        v = random_vector_in(rng, s, box)
        if any(v):
            return v
    return s.basis[0]


def _free_vector(rng: random.Random, n: int):
    while True:
        v = random_vector(rng, n, 3)
        if any(v):
            return v


def _rankone_pair(rng, lat, tilde, n):
    if rng.random() < 0.5:
        e, t = rng.choice(list(tilde.items()))
        x = _nonzero(rng, e, n)
        y = _nonzero(rng, t.orth_complement(), n)
        if x is not None and y is not None:
            return x, y
    return _free_vector(rng, n), _free_vector(rng, n)


def _rankone_pair_left(rng, lat, phi, n):
    if rng.random() < 0.5:
        e = rng.choice(lat.elements)
        m = lat.meet(f for f, v in phi.items() if not e.contains(v))
        x = _nonzero(rng, m, n)
        y = _nonzero(rng, e.orth_complement(), n)
        if x is not None and y is not None:
            return x, y
    return _free_vector(rng, n), _free_vector(rng, n)


def _check_lat_rankone(ctx: _Context) -> _Result:
    ws = ctx.ws
    lat = ws.lattice
    tables = {}
    for name, phi in ws.homs.items():
        t = hom_tilde(lat, phi)
        s = hom_star(lat, phi)
        r = rankone_submodule(lat, phi)
        tables[f"hom:{name}"] = [{"E": e, "tilde": tv, "star": sv} for e, tv, sv in zip(lat, t.values, s.values)]
        tables[f"rankone:{name}"] = [{"dim": r.dim, "basis": r}]
        elems = lat_rankone_elements(lat, phi)
        tables[f"lat:{name}"] = [{"finite": elems is not None, "elements": elems or []}]
        rng = ctx.rng("sampling", f"lat-rankone:{name}")
        members = 0
        for i in range(ctx.opts.samples):
            if i % 2 == 0:
                e, sv = rng.choice(list(s.items()))
                if sv.contains(e):
                    k = e.sum(random_subspace_of(rng, sv.intersect(e.orth_complement()), box=3))
                else:
                    k = random_subspace_of(rng, lat.top, box=3)
            else:
                k = random_subspace_of(rng, lat.top, box=3)
            members += lat_rankone_membership(k, lat, phi, r)
        tables[f"samples:{name}"] = [{"samples": ctx.opts.samples, "members": members}]
    return _Result(tables, True)


def _check_lat_determined(ctx: _Context) -> _Result:
    out = check_lat_determined(ctx.ws.lattice, ctx.audit, ctx.opts.samples, ctx.seed("sampling"))
    return _Result({"intervals": out["table"], "witnesses": [{"K": k} for k in out["spot_check_witnesses"]]}, out["verdict"],
                   [f"certainty: {out['certainty']}"], uses_audit=True)


def _check_lattice_recovery(ctx: _Context) -> _Result:
    out = check_lattice_recovery(ctx.ws.lattice, ctx.opts.samples, ctx.seed("sampling"))
    tables = {"intervals": out["table"]}
    if out["witness"] is not None:
        tables["witness"] = [{"K": out["witness"]}]
    return _Result(tables, out["verdict"])


def _check_ref_rankone(ctx: _Context) -> _Result:
    tables = {}
    verdicts = []
    notes = []
    for name in ctx.ws.modules:
        inst = ctx.module(name)
        if inst.side != "right":
            continue
        out = check_ref_rankone(inst)
        tables[f"tau:{name}"] = out["table"]
        tables[f"routes:{name}"] = [{k: out[k] for k in ("rankone_dim", "ref_rankone_dim", "module_dim",
                                                         "lattice_route", "operator_route", "consistent",
                                                         "certainty")}]
        if not out["consistent"]:
            notes.append(f"module {name}: routes differ on an unaudited carrier")
        verdicts.append(out["verdict"])
    verdict = all(verdicts) if verdicts and None not in verdicts else None
    return _Result(tables, verdict, notes, uses_audit=True)


def _check_complete_distributivity(ctx: _Context) -> _Result:
    out = check_complete_distributivity(ctx.ws.lattice, ctx.audit)
    routes = {k: out[k] for k in ("sharp_route", "hull_route", "star_route", "consistent", "certainty")}
    notes = [] if out["consistent"] else ["routes differ on an unaudited carrier"]
    return _Result({"lattice": out["table"], "routes": [routes]}, out["verdict"], notes, uses_audit=True)


def _check_oracle_sandwich(ctx: _Context) -> _Result:
    """U inside Ref U inside both hulls; sampled hull equals the carrier hull when the carrier is audited."""
    ws = ctx.ws
    n = ws.n
    rows = []
    notes = []
    for name in ws.modules:
        inst = ctx.module(name)
        if inst.side != "right":
            continue
        hull = ref_module(inst.space, inst.lattice, inst.algebra, "right", inst.audit).space
        seed = ctx.seed("sampling")
        oracle = ref_sampling_oracle(inst.space, 3 * n, seed, probes=list(inst.lattice))
        if not oracle.contains(inst.space) or not hull.contains(inst.space):
            raise ConsistencyError(f"module {name}: a hull misses U itself")
        contains = oracle.contains(hull)
        if not contains and inst.certainty == "exact":
            raise ConsistencyError(f"module {name}: sampled hull does not contain the carrier hull")
        equal = oracle == hull
        resampled = equal
        if not equal:
            big = ref_sampling_oracle(inst.space, 10 * n, seed + 1, probes=list(inst.lattice), box=99)
            resampled = big == hull
            if not resampled and inst.certainty == "exact":
                raise ConsistencyError(f"module {name}: resampled hull still differs from the carrier hull")
        rows.append({"module": name, "module_dim": inst.space.dim, "hull_dim": hull.dim,
                     "oracle_dim": oracle.dim, "contains": contains, "equal": equal,
                     "equal_after_resample": resampled, "certainty": inst.certainty})
    verdict = all(r["equal_after_resample"] for r in rows) if rows else None
    return _Result({"sandwich": rows}, verdict, notes, uses_audit=True)


CHECKS: dict[str, Callable[[_Context], _Result]] = {
    "audit": _check_audit,
    "closure": _check_closure,
    "alg": _check_alg,
    "maps": _check_maps,
    "module": _check_module,
    "roundtrip": _check_roundtrip,
    "ideal": _check_ideal,
    "lat-module": _check_lat_module,
    "rankone-membership": _check_rankone_membership,
    "lat-rankone": _check_lat_rankone,
    "lat-determined": _check_lat_determined,
    "lattice-recovery": _check_lattice_recovery,
    "ref-rankone": _check_ref_rankone,
    "complete-distributivity": _check_complete_distributivity,
    "oracle-sandwich": _check_oracle_sandwich,
}


def run_suite(ws: Workspace, checks: list[str], options: RunOptions | None = None) -> list[CheckReport]:
    """Run ``checks`` in the given order; unknown ids raise KeyError before anything runs."""
    opts = options or RunOptions()
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check id {unknown[0]!r}; known: {', '.join(CHECKS)}")
    ctx = _Context(ws, opts)
    reports = []
    for cid in checks:
        digest = ws.digest({"check": cid, **opts.as_dict()})
        start = time.perf_counter()
        try:
            res = CHECKS[cid](ctx)
            consistency = "ok"
        except ConsistencyError as exc:
            res = _Result(notes=[f"consistency violation: {exc}"], uses_audit=True)
            consistency = "violation"
        runtime = time.perf_counter() - start
        notes = list(res.notes)
        audit = None
        if res.uses_audit:
            audit = ctx.audit.to_json()
            if not ctx.audit.verified and cid != "audit":
                notes.insert(0, UNAUDITED)
        reports.append(CheckReport(cid, digest, audit, res.tables, res.verdict, consistency, notes, runtime))
    return reports


def exit_status(reports: list[CheckReport]) -> int:
    return 0 if all(r.passed for r in reports) else 1
