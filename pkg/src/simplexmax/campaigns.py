"""Verification campaigns driven by a JSON configuration.

A configuration lists campaigns; each campaign expands into independent
cases that run on a thread pool and are merged by case key, so the report
depends only on the configuration and seed.  Inequalities whose constants
are unknown are judged by band checks with thresholds taken from the
configuration.  Cases outside the stated hypotheses run in report-only
mode, and cases that exhaust their enumeration budget are marked skipped.

Configuration layout::

    {"seed": 0, "budget": 100000000,
     "campaigns": [{"name": "...", "kind": "second_moment", ...}, ...]}

Kinds: ``oracle``, ``second_moment``, ``l1_bound``, ``surrogate`` and
``region_crosscheck``; see the ``_defaults`` of each runner for fields.
"""
from __future__ import annotations

import itertools
import json
import math
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from .enumeration import (
    _as_int_matrix,
    count_simplex_copies,
    sphere_array,
    weight_second_moment,
)
from .errors import BudgetExceeded, EmptyAverage, InvalidInput
from .geometry import exact_det
from .operators import (
    GridFunction,
    box_points,
    default_eval_box,
    random_nonnegative,
    surrogate_checks,
)
from .regions import (
    Membership,
    ckq_polytope,
    in_Ckq,
    minimal_dimension,
    partial_sum_bounds,
    q_of_m,
    theorem_predicate,
)

STATUSES = ("pass", "fail", "skip", "report-only")


@dataclass
class CaseResult:
    campaign: str
    key: str
    status: str
    measured: dict
    input: dict
    elapsed_s: float = 0.0

    def to_json(self) -> dict:
        doc = {"campaign": self.campaign, "key": self.key, "status": self.status, "measured": self.measured, "input": self.input}
        return _plain(doc)


def _plain(obj):
    """Replace numpy scalars and tuples so the report serializes as plain JSON."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


@dataclass
class CampaignReport:
    config: dict
    cases: list[CaseResult] = field(default_factory=list)

    def counts(self) -> dict[str, int]:
        out = {s: 0 for s in STATUSES}
        for c in self.cases:
            out[c.status] += 1
        return out

    @property
    def failed(self) -> bool:
        return any(c.status == "fail" for c in self.cases)

    @property
    def budget_exhausted(self) -> bool:
        """True when every case that could pass or fail was skipped for budget."""
        judged = [c for c in self.cases if c.status != "report-only"]
        return bool(judged) and all(c.status == "skip" for c in judged)

    def to_json(self) -> dict:
        return {
            "config": self.config,
            "cases": [c.to_json() for c in self.cases],
            "summary": self.counts(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def timings(self) -> dict:
        return {c.key: round(c.elapsed_s, 3) for c in self.cases}

    def summary_text(self) -> str:
        lines = []
        width = max((len(c.key) for c in self.cases), default=10)
        for c in self.cases:
            lines.append(f"{c.status.upper():<12} {c.key:<{width}}  {_short(c.measured)}")
        n = self.counts()
        lines.append("")
        lines.append(" ".join(f"{s}={n[s]}" for s in STATUSES))
        return "\n".join(lines) + "\n"


def _short(measured: dict) -> str:
    keys = [k for k in ("reason", "forward_growth", "band_factor", "max_rel_violation", "inconsistencies", "mismatches") if k in measured]
    return ", ".join(f"{k}={measured[k]}" for k in keys)


# ---------------------------------------------------------------- config


def _gram(value, where: str) -> list[list[int]]:
    try:
        t = _as_int_matrix(value)
    except InvalidInput as exc:
        raise InvalidInput(f"{where}: {exc}") from None
    for n in range(1, len(t) + 1):
        if exact_det([row[:n] for row in t[:n]]) <= 0:
            raise InvalidInput(f"{where}: Gram matrix {t} is not positive definite (degenerate simplex)")
    return t


_DEFAULTS: dict[str, dict] = {
    "oracle": {"dims": [3], "grams": [[[1]]], "lambda_sq": [1]},
    "second_moment": {"dims": [11], "grams": [[[1, 0], [0, 1]]], "lambda_sq": [1, 2, 3, 4], "band": 2.0},
    "l1_bound": {"dims": [7], "grams": [], "random": None, "lambda_sq": [4, 16], "band": 2.0},
    "surrogate": {
        "dims": [3, 5],
        "gram": [[1, 0], [0, 1]],
        "lambda_sq": [1, 2],
        "ms": [2, 3, 4],
        "cases": 1000,
        "radius": 1,
        "density": 0.6,
        "points": 500,
        "block": 50,
        "rtol": 1e-10,
    },
    "region_crosscheck": {"theorems": ["T2ii"], "ks": [2], "ms": [2], "d": None, "samples": 100000, "block": 25000},
}


def validate_config(cfg: dict) -> dict:
    """Fill defaults and reject malformed entries; returns the resolved config."""
    if not isinstance(cfg, dict) or not isinstance(cfg.get("campaigns"), list):
        raise InvalidInput("config must be an object with a 'campaigns' list")
    out = {"seed": int(cfg.get("seed", 0)), "budget": cfg.get("budget"), "campaigns": []}
    if out["budget"] is not None:
        out["budget"] = int(out["budget"])
        if out["budget"] <= 0:
            raise InvalidInput("budget must be positive")
    unknown = set(cfg) - {"seed", "budget", "campaigns"}
    if unknown:
        raise InvalidInput(f"unknown config fields: {', '.join(sorted(unknown))}")
    names = set()
    for i, c in enumerate(cfg["campaigns"]):
        if not isinstance(c, dict) or c.get("kind") not in _DEFAULTS:
            raise InvalidInput(f"campaign {i}: kind must be one of {', '.join(_DEFAULTS)}")
        kind = c["kind"]
        extra = set(c) - set(_DEFAULTS[kind]) - {"kind", "name"}
        if extra:
            raise InvalidInput(f"campaign {i}: unknown fields {', '.join(sorted(extra))}")
        r = {"name": str(c.get("name", f"{kind}-{i}")), "kind": kind}
        r.update(json.loads(json.dumps(_DEFAULTS[kind])))
        r.update({k: v for k, v in c.items() if k not in ("name", "kind")})
        if r["name"] in names:
            raise InvalidInput(f"duplicate campaign name {r['name']!r}")
        names.add(r["name"])
        where = f"campaign {r['name']!r}"
        if "grams" in r:
            r["grams"] = [_gram(g, where) for g in r["grams"]]
        if "gram" in r:
            r["gram"] = _gram(r["gram"], where)
        if kind == "region_crosscheck":
            for tid in r["theorems"]:
                if tid not in ("T1ii", "T2ii"):
                    raise InvalidInput(f"{where}: cross-check supports T1ii and T2ii, got {tid!r}")
        if kind == "l1_bound" and r["random"] is not None:
            rnd = r["random"]
            if not {"k", "count", "bound"} <= set(rnd):
                raise InvalidInput(f"{where}: random needs k, count and bound")
        if kind == "surrogate" and len(r["gram"]) != 2:
            raise InvalidInput(f"{where}: surrogate campaigns use k = 2")
        out["campaigns"].append(r)
    return out


def load_config(path: str | Path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read config {path}: {exc.strerror}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"config {path} is not valid JSON: {exc}") from None
    return validate_config(raw)


# ---------------------------------------------------------------- helpers


def forward_growth(values: list[float]) -> float:
    """Largest ``v_j / v_i`` over ``i < j``; 1 for fewer than two values."""
    best = 1.0
    lowest = math.inf
    for v in values:
        if lowest < math.inf and lowest > 0:
            best = max(best, v / lowest)
        lowest = min(lowest, v)
    return best


def _band(ratios: list[float]) -> float | None:
    pos = [r for r in ratios if r > 0]
    return max(pos) / min(pos) if pos else None


def _num(x: float) -> float:
    return float(f"{x:.12g}")


Job = tuple[str, dict, Callable[[], tuple[str, dict]]]


def brute_force_count(t, lam_sq: int, dim: int) -> int:
    """Count isometric copies by scanning the whole box ``[-R, R]^d``.

    Deliberately naive: every box point is tested for each norm, then tuples
    are formed with explicit inner-product tests.
    """
    tm = _as_int_matrix(t)
    k = len(tm)
    rad = math.isqrt(max(lam_sq * tm[i][i] for i in range(k)))
    grid = np.array(list(itertools.product(range(-rad, rad + 1), repeat=dim)), dtype=np.int64)
    norms = (grid * grid).sum(axis=1)
    layers = [grid[norms == lam_sq * tm[i][i]] for i in range(k)]

    def rec(prefix: list[np.ndarray]) -> int:
        i = len(prefix)
        cands = layers[i]
        for j, y in enumerate(prefix):
            cands = cands[cands @ y == lam_sq * tm[i][j]]
        if i == k - 1:
            return len(cands)
        return sum(rec(prefix + [y]) for y in cands)

    return rec([])


# ---------------------------------------------------------------- campaigns


def _oracle_jobs(c: dict, seed: int, budget: int | None) -> list[Job]:
    jobs = []
    for d, t, lam in itertools.product(c["dims"], c["grams"], c["lambda_sq"]):
        key = f"{c['name']}/d={d}/T={t}/lam2={lam}"

        def run(d=d, t=t, lam=lam):
            pruned = count_simplex_copies(t, lam, d, budget)
            naive = brute_force_count(t, lam, d)
            return ("pass" if pruned == naive else "fail"), {"pruned": str(pruned), "brute_force": str(naive)}

        jobs.append((key, {"dim": d, "gram": t, "lambda_sq": lam}, run))
    return jobs


def _second_moment_jobs(c: dict, seed: int, budget: int | None) -> list[Job]:
    jobs = []
    for d, t in itertools.product(c["dims"], c["grams"]):
        k = len(t)
        key = f"{c['name']}/d={d}/T={t}"
        expo = 2 * d * k - 2 * k * k - 6 * k + 4

        def run(d=d, t=t, k=k, expo=expo):
            moments, ratios = [], []
            for lam in c["lambda_sq"]:
                s = weight_second_moment(t, lam, d, budget)
                moments.append(str(s))
                ratios.append(s / lam ** (expo / 2))
            growth = forward_growth(ratios)
            measured = {
                "exponent": expo,
                "second_moments": moments,
                "ratios": [_num(r) for r in ratios],
                "band_factor": _num(_band(ratios) or 0.0),
                "forward_growth": _num(growth),
            }
            if d < 4 * k + 3:
                measured["note"] = f"d below 4k+3 = {4 * k + 3}; nothing is claimed"
                return "report-only", measured
            return ("pass" if growth <= c["band"] else "fail"), measured

        jobs.append((key, {"dim": d, "gram": t, "lambda_sq": c["lambda_sq"], "band": c["band"]}, run))
    return jobs


def _random_gram(rng: np.random.Generator, k: int, bound: int) -> list[list[int]]:
    while True:
        a = rng.integers(-bound, bound + 1, size=(k, k))
        t = np.triu(a) + np.triu(a, 1).T
        t[np.diag_indices(k)] = np.abs(t[np.diag_indices(k)])
        tl = t.tolist()
        if all(exact_det([row[:n] for row in tl[:n]]) > 0 for n in range(1, k + 1)):
            return tl


def _l1_ratio(count: int, t: list[list[int]], d: int) -> float:
    k = len(t)
    det = exact_det(t)
    frob = math.sqrt(sum(a * a for row in t for a in row))
    return count / (det ** ((d - k - 1) / 2) + frob ** ((d - k) * (k - 1) / 2))


def _l1_bound_jobs(c: dict, seed: int, budget: int | None) -> list[Job]:
    grams = list(c["grams"])
    if c["random"] is not None:
        rng = np.random.default_rng([seed, 1])
        rnd = c["random"]
        want = len(grams) + int(rnd["count"])
        for _ in range(1000 * want):
            if len(grams) == want:
                break
            g = _random_gram(rng, int(rnd["k"]), int(rnd["bound"]))
            if g not in grams:
                grams.append(g)
        else:
            raise InvalidInput(f"could not draw {rnd['count']} distinct Gram matrices with entries <= {rnd['bound']}")
    jobs = []
    per_t: dict[tuple, list] = {}
    for d, t in itertools.product(c["dims"], grams):
        k = len(t)
        key = f"{c['name']}/d={d}/T={t}"

        def run(d=d, t=t, k=k):
            counts, ratios = [], []
            for lam in c["lambda_sq"]:
                n = count_simplex_copies(t, lam, d, budget)
                counts.append(str(n))
                ratios.append(_l1_ratio(n, [[lam * a for a in row] for row in t], d))
            growth = forward_growth(ratios)
            measured = {
                "det": exact_det(t),
                "counts": counts,
                "ratios": [_num(r) for r in ratios],
                "forward_growth": _num(growth),
            }
            if d < 2 * k + 3:
                measured["note"] = f"d below 2k+3 = {2 * k + 3}; nothing is claimed"
                return "report-only", measured
            return ("pass" if growth <= c["band"] else "fail"), measured

        jobs.append((key, {"dim": d, "gram": t, "lambda_sq": c["lambda_sq"], "band": c["band"]}, run))
        per_t.setdefault((d, k), []).append(t)

    for (d, k), ts in sorted(per_t.items()):
        if len(ts) < 3:
            continue  # a median split needs at least three matrices
        key = f"{c['name']}/d={d}/k={k}/argmax"
        lam0 = min(c["lambda_sq"])

        def run(d=d, k=k, ts=ts, lam0=lam0):
            dets = [exact_det(t) for t in ts]
            scaled = [[[lam0 * a for a in row] for row in t] for t in ts]
            ratios = [_l1_ratio(count_simplex_copies(t, lam0, d, budget), s, d) for t, s in zip(ts, scaled)]
            top = int(np.argmax(ratios))
            median = statistics.median(dets)
            measured = {"lambda_sq": lam0, "dets": dets, "ratios": [_num(r) for r in ratios], "argmax_det": dets[top], "median_det": median}
            if d < 2 * k + 3:
                return "report-only", measured
            return ("pass" if dets[top] <= median else "fail"), measured

        jobs.append((key, {"dim": d, "grams": ts}, run))
    return jobs


def _surrogate_block(c: dict, d: int, block: int, n: int, seed: int) -> tuple[str, dict]:
    rng = np.random.default_rng([seed, 2, d, block])
    t = c["gram"]
    worst = {m: -math.inf for m in c["ms"]}
    const = 0.0
    for _ in range(n):
        fs = [random_nonnegative(rng, d, c["radius"], c["density"]) for _ in range(2)]
        if fs[0].sup_norm() == 0 or fs[1].sup_norm() == 0:
            continue
        lams = [lam for lam in c["lambda_sq"]]
        lo, hi = default_eval_box(fs, t, max(lams))
        pts = box_points(lo, hi)
        if len(pts) > c["points"]:
            pts = pts[np.sort(rng.choice(len(pts), c["points"], replace=False))]
        num = np.zeros(len(pts))
        den = np.zeros(len(pts))
        for lam in lams:
            avg: dict = {}
            try:
                checks = surrogate_checks(fs, t, lam, c["ms"], x=pts, averages=avg)
            except EmptyAverage:
                continue
            for m, chk in checks.items():
                worst[m] = max(worst[m], chk.max_violation / chk.scale)
            num = np.maximum(num, avg["full"])
            den = np.maximum(den, avg["last_sq"])
        den = fs[0].sup_norm() * np.sqrt(den)
        ok = den > 0
        if ok.any():
            const = max(const, float((num[ok] / den[ok]).max()))
    measured = {
        "cases": n,
        "max_rel_violation": {str(m): _num(v) for m, v in worst.items()},
        "empirical_constant": _num(const),
    }
    status = "pass" if all(v <= c["rtol"] for v in worst.values()) else "fail"
    return status, measured


def _surrogate_jobs(c: dict, seed: int, budget: int | None) -> list[Job]:
    jobs = []
    for d in c["dims"]:
        total = int(c["cases"])
        for b, start in enumerate(range(0, total, c["block"])):
            n = min(c["block"], total - start)
            key = f"{c['name']}/d={d}/block={b:04d}"
            jobs.append((key, {"dim": d, "block": b, "cases": n}, lambda d=d, b=b, n=n: _surrogate_block(c, d, b, n, seed)))

        def constants(d=d):
            fs = [2.0, 3.0]
            res = {}
            equality = True
            for lam in c["lambda_sq"]:
                try:
                    checks = surrogate_checks(fs, c["gram"], lam, c["ms"], x=np.zeros((1, d), dtype=np.int64))
                except EmptyAverage:
                    continue
                for m, chk in checks.items():
                    rel = chk.max_violation / chk.scale
                    res[f"lam2={lam}/m={m}"] = _num(rel)
                    equality &= abs(rel) <= c["rtol"]
            return ("pass" if equality else "fail"), {"relative_gaps": res, "equality": equality}

        jobs.append((f"{c['name']}/d={d}/constants", {"dim": d, "functions": [2.0, 3.0]}, constants))
    return jobs


def _hypotheses_vectorized(tid: str, d: int, k: int, m: int, recips: np.ndarray, rr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Scalar hypotheses and region verdict (0/1/2) computed array-wise."""
    total = recips.sum(axis=1)
    ok = np.abs(rr - total) <= 1e-12
    disc = (d - 2) / d
    if tid == "T1ii":
        ok &= d >= 4 * k + 3
        ok &= (d - 2) / d > rr + 1e-15
        ok &= ((d - 2) / (2 * d) > recips + 1e-15).all(axis=1)
        poly = ckq_polytope(k, Fraction(2))
    else:
        q = float(q_of_m(m))
        btot = float(partial_sum_bounds(k, q_of_m(m))[-1])
        ok &= d >= 2 * m * k + 3
        ok &= btot * (d - 2) / d > rr + 1e-15
        ok &= ((d - 2) / (q * d) > recips + 1e-15).all(axis=1)
        poly = ckq_polytope(k, q_of_m(m))
    verdict = poly.classify_many(recips, disc)
    return ok & (verdict == 0), verdict


_CODE = {Membership.INTERIOR: 0, Membership.BOUNDARY: 1, Membership.EXTERIOR: 2}


def _crosscheck_block(tid: str, d: int, k: int, m: int, n: int, rng: np.random.Generator) -> dict:
    spread = rng.choice([0.5, 1.0], size=(n, 1))
    recips = rng.random((n, k)) * spread
    total = recips.sum(axis=1)
    rr = np.where((total <= 1) & (rng.random(n) < 0.9), total, rng.random(n))
    claimed_b, verdict_b = _hypotheses_vectorized(tid, d, k, m, recips, rr)
    q = 2 if tid == "T1ii" else q_of_m(m)
    disc = Fraction(d - 2, d)
    bad = mismatch = claimed = 0
    for i in range(n):
        p = [math.inf if x == 0 else 1.0 / x for x in recips[i]]
        r = math.inf if rr[i] == 0 else 1.0 / rr[i]
        a = theorem_predicate(tid, d, k, p, r, m).claimed
        claimed += a
        bad += a != bool(claimed_b[i])
        mismatch += _CODE[in_Ckq(recips[i].tolist(), q, disc)] != verdict_b[i]
    return {"tuples": n, "claimed": claimed, "inconsistencies": bad, "mismatches": mismatch}


def _boundary_tuples(tid: str, d: int, k: int, m: int) -> dict:
    q = Fraction(2) if tid == "T1ii" else q_of_m(m)
    poly = ckq_polytope(k, q)
    disc = Fraction(d - 2, d)
    upper = [v for v in poly.vertices if any(v)]
    faces = upper + [tuple((a + b) / 2 for a, b in zip(u, v)) for u, v in itertools.combinations(upper, 2)]
    bad = 0
    tested = 0
    for v in faces:
        x = [disc * a for a in v]
        a_side = in_Ckq(x, q, disc)
        if a_side != Membership.BOUNDARY:
            continue  # an interior chord midpoint, not a boundary point
        tested += 1
        b_side = poly.classify_many(np.array([[float(a) for a in x]]), float(disc))[0]
        p = [math.inf if a == 0 else 1 / a for a in x]
        r = 1 / min(sum(x), Fraction(1))  # sums above 1 fail the hypotheses anyway
        claimed = theorem_predicate(tid, d, k, p, r, m).claimed
        bad += b_side != 1 or claimed
    return {"tuples": tested, "inconsistencies": bad}


def _region_jobs(c: dict, seed: int, budget: int | None) -> list[Job]:
    jobs = []
    for tid, k, m in itertools.product(c["theorems"], c["ks"], c["ms"]):
        if tid == "T1ii" and m != c["ms"][0]:
            continue  # m does not enter T1ii
        d = c["d"] if c["d"] is not None else minimal_dimension(tid, k, m)
        total = int(c["samples"])
        base = f"{c['name']}/{tid}/k={k}/m={m}/d={d}"
        for b, start in enumerate(range(0, total, c["block"])):
            n = min(c["block"], total - start)

            def run(tid=tid, d=d, k=k, m=m, n=n, b=b):
                rng = np.random.default_rng([seed, 3, k, m, d, b])
                out = _crosscheck_block(tid, d, k, m, n, rng)
                return ("pass" if out["inconsistencies"] == 0 and out["mismatches"] == 0 else "fail"), out

            jobs.append((f"{base}/block={b:04d}", {"theorem": tid, "d": d, "k": k, "m": m, "tuples": n}, run))

        def boundary(tid=tid, d=d, k=k, m=m):
            out = _boundary_tuples(tid, d, k, m)
            return ("pass" if out["inconsistencies"] == 0 else "fail"), out

        jobs.append((f"{base}/boundary", {"theorem": tid, "d": d, "k": k, "m": m}, boundary))
    return jobs


_RUNNERS = {
    "oracle": _oracle_jobs,
    "second_moment": _second_moment_jobs,
    "l1_bound": _l1_bound_jobs,
    "surrogate": _surrogate_jobs,
    "region_crosscheck": _region_jobs,
}


def _execute(job: Job, campaign: str) -> CaseResult:
    key, inp, run = job
    start = time.perf_counter()
    try:
        status, measured = run()
    except BudgetExceeded as exc:
        status, measured = "skip", {"reason": str(exc)}
    return CaseResult(campaign, key, status, measured, inp, time.perf_counter() - start)


def run_campaigns(cfg: dict, threads: int = 1, seed: int | None = None, only: str | None = None) -> CampaignReport:
    """Run every campaign of a validated config (or only the named kind)."""
    cfg = validate_config(cfg) if "campaigns" in cfg and not all("name" in c for c in cfg["campaigns"]) else cfg
    if seed is not None:
        cfg = dict(cfg, seed=int(seed))
    jobs: list[tuple[Job, str]] = []
    for c in cfg["campaigns"]:
        if only is not None and c["kind"] != only:
            continue
        for job in _RUNNERS[c["kind"]](c, cfg["seed"], cfg["budget"]):
            jobs.append((job, c["name"]))
    keys = [j[0][0] for j in jobs]
    if len(set(keys)) != len(keys):
        raise InvalidInput("duplicate case keys; give campaigns distinct names or parameters")
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(lambda jc: _execute(*jc), jobs))
    results.sort(key=lambda r: r.key)
    return CampaignReport(cfg, results)


def _single(kind: str, cfg: dict, threads: int) -> CampaignReport:
    full = validate_config({"seed": cfg.pop("seed", 0), "budget": cfg.pop("budget", None), "campaigns": [dict(cfg, kind=kind)]})
    return run_campaigns(full, threads)


def run_oracle_campaign(cfg: dict, threads: int = 1) -> CampaignReport:
    return _single("oracle", dict(cfg), threads)


def run_second_moment_campaign(cfg: dict, threads: int = 1) -> CampaignReport:
    return _single("second_moment", dict(cfg), threads)


def run_l1_bound_campaign(cfg: dict, threads: int = 1) -> CampaignReport:
    return _single("l1_bound", dict(cfg), threads)


def run_surrogate_campaign(cfg: dict, threads: int = 1) -> CampaignReport:
    return _single("surrogate", dict(cfg), threads)


def run_region_crosscheck(cfg: dict, threads: int = 1) -> CampaignReport:
    return _single("region_crosscheck", dict(cfg), threads)


def smoke_config_path() -> Path:
    return Path(__file__).with_name("data") / "smoke.json"


__all__ = [
    "CaseResult",
    "CampaignReport",
    "brute_force_count",
    "forward_growth",
    "load_config",
    "validate_config",
    "run_campaigns",
    "run_oracle_campaign",
    "run_second_moment_campaign",
    "run_l1_bound_campaign",
    "run_surrogate_campaign",
    "run_region_crosscheck",
    "smoke_config_path",
]
