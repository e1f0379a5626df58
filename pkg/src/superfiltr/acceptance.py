"""Acceptance suite: each criterion is a function returning a
:class:`CriterionResult`; :func:`run_acceptance` runs them in order.

Randomized criteria draw from ``numpy.random.default_rng(seed)`` so a run is
replayable from the seed printed in the summary.
"""

from __future__ import annotations

import contextlib
import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from . import gl_modules, grassmann
from .characters import ch_ev, ch_induced, dim_of, verify_translation_identity
from .gl_modules import (
    build,
    bracket_violations,
    check_good_filtration,
    check_weyl_filtration,
    closed_form_mismatches,
    exterior_power,
    predicted,
    verify_exterior_invariants_formula,
)
from .grassmann import GrassmannAlgebra
from .supermatrix import berezinian, random_supermatrix, sm_multiply
from .weights import (
    BlockShape,
    apply_certificate,
    dominance_leq,
    is_dominant,
    is_steinberg_weight,
    marko_irreducible,
    positive_roots,
    root_cone_leq,
    steinberg_weight,
)

SHAPES = ((1, 1), (2, 1), (1, 2), (2, 2))
PRIMES = (3, 5)
K_RANGE = range(0, 9)
R_RANGE = (1, 2)
ST_RANGE = range(-3, 4)
DEFAULT_SEED = 20240611


@dataclass
class CriterionResult:
    number: int
    key: str
    title: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    failures: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:>2} {self.key:<16} {self.title} ({self.seconds:.2f}s) {self.detail}".rstrip()


def _grid():
    for m, n in SHAPES:
        for p in PRIMES:
            for k in K_RANGE:
                yield BlockShape(m, n, p), k


def _bits(flags) -> str:
    return "".join("1" if f else "0" for f in flags)


def truth_table(kind: str, mode: str):
    """Rows (shape, k, computed, predicted) over the standard grid."""
    check = check_good_filtration if mode == "good" else check_weyl_filtration
    rows = []
    for shape, k in _grid():
        verdict = check(build(kind, shape, k))
        rows.append((shape, k, verdict.is_yes, predicted(kind, shape, k)))
    return rows


def _table_result(rows) -> tuple[bool, str, list]:
    bad = [(s.m, s.n, s.p, k, comp, pred) for s, k, comp, pred in rows if comp != pred]
    if not bad:
        return True, f"{len(rows)} cells match", []
    by_panel: dict = {}
    for s, k, comp, pred in rows:
        by_panel.setdefault((s.m, s.n, s.p), ([], []))
        by_panel[(s.m, s.n, s.p)][0].append(comp)
        by_panel[(s.m, s.n, s.p)][1].append(pred)
    panels = [
        f"({m}|{n}) p={p} got {_bits(c)} want {_bits(w)}"
        for (m, n, p), (c, w) in sorted(by_panel.items())
        if c != w
    ]
    return False, f"{len(bad)}/{len(rows)} cells differ: " + "; ".join(panels), bad


# ---------------------------------------------------------------------------
# criteria


def c_exterior_good(seed):
    start = time.perf_counter()
    rows = truth_table("exterior", "good")
    elapsed = time.perf_counter() - start
    ok, detail, bad = _table_result(rows)
    if elapsed >= 10:
        ok = False
        detail += f"; runtime {elapsed:.1f}s exceeds 10s"
    return ok, detail, bad


def c_exterior_weyl(seed):
    return _table_result(truth_table("exterior", "weyl"))


def c_symmetric(seed):
    good = _table_result(truth_table("symmetric", "good"))
    weyl = _table_result(truth_table("symmetric", "weyl"))
    ok = good[0] and weyl[0]
    detail = f"good: {good[1]} | weyl: {weyl[1]}"
    return ok, detail, good[2] + weyl[2]


def c_lemma_exterior(seed):
    bad = [(s.m, s.n, s.p, k) for s, k in _grid() if not verify_exterior_invariants_formula(s, k)]
    return not bad, f"{len(bad)} failures over {len(SHAPES) * len(PRIMES) * len(K_RANGE)} cases", bad


def c_n_equals_one(seed):
    bad, checked = [], 0
    for shape, k in _grid():
        if shape.n != 1:
            continue
        M = exterior_power(shape, k)
        verdict = check_good_filtration(M)
        if not verdict.is_yes:
            continue
        checked += 1
        lam = shape.weight([1] * shape.m + [k - shape.m])
        if M.dim != 2**shape.m or M.character() != ch_induced(lam) or verdict.multiplicities != {lam: 1}:
            bad.append((shape.m, shape.n, shape.p, k))
    return not bad and checked > 0, f"{checked} Yes cases checked, {len(bad)} mismatches", bad


def _random_modules(seed, count=240):
    rng = np.random.default_rng(seed)
    mods = []
    while len(mods) < count:
        N = int(rng.integers(1, 5))
        p = int(rng.choice(PRIMES))
        M = grassmann.random_module(rng, N, p, max_dim=16)
        if grassmann.validate_module(M) is None:
            mods.append(M)
    return mods


def c_duality(seed):
    bad = []
    mods = _random_modules(seed)
    for idx, M in enumerate(mods):
        dual = grassmann.transpose_dual(M)
        for k in (0, 1, 2):
            h = grassmann.homology_dim(M, k)
            c = grassmann.cohomology_dim(dual, k)
            direct = grassmann.tor_dim(M, k)
            if not h == c == direct:
                bad.append((idx, k, h, c, direct))
    return not bad, f"{len(mods)} modules, k=0..2, checked against a direct Tor computation; {len(bad)} mismatches", bad


def c_free_injective(seed):
    bad = []
    mods = _random_modules(seed)
    n_free = 0
    for idx, M in enumerate(mods):
        free, inj = grassmann.is_free(M), grassmann.is_injective(M)
        n_free += free
        h1 = grassmann.cohomology_dim(M, 1)
        hom1 = grassmann.homology_dim(M, 1)
        if free != inj or inj != (h1 == 0) or free != (hom1 == 0):
            bad.append((idx, free, inj, h1, hom1))
    return not bad and 0 < n_free < len(mods), f"{len(mods)} modules ({n_free} free); {len(bad)} violations", bad


def _random_pair(rng, shape):
    size = shape.size
    lam = shape.weight(rng.integers(-4, 5, size=size))
    if rng.random() < 0.5:
        roots = positive_roots(shape)[0] + positive_roots(shape)[1]
        mu = lam
        for _ in range(int(rng.integers(0, 4))):
            a = roots[int(rng.integers(len(roots)))]
            mu = mu - a.as_weight(shape).scale(int(rng.integers(1, 3)))
        if rng.random() < 0.3:
            mu, lam = lam, mu
        return mu, lam
    mu_entries = rng.integers(-4, 5, size=size)
    mu_entries[-1] += sum(lam.entries) - int(mu_entries.sum()) if rng.random() < 0.8 else 0
    return shape.weight(mu_entries), lam


def c_order(seed, pairs=1000):
    rng = np.random.default_rng(seed)
    bad, yes = [], 0
    for m, n in SHAPES:
        shape = BlockShape(m, n, 3)
        for _ in range(pairs):
            mu, lam = _random_pair(rng, shape)
            leq = dominance_leq(mu, lam)
            cert = root_cone_leq(mu, lam)
            yes += leq
            if leq != (cert is not None) or (cert is not None and apply_certificate(mu, cert) != lam):
                bad.append((str(mu), str(lam)))
    return not bad, f"{pairs} pairs per shape, {yes} comparable; {len(bad)} disagreements", bad


def c_steinberg(seed):
    bad, total = [], 0
    for (m, n), p, r in itertools.product(SHAPES, PRIMES, R_RANGE):
        shape = BlockShape(m, n, p)
        for s, t in itertools.product(ST_RANGE, ST_RANGE):
            total += 1
            if is_steinberg_weight(shape, r, s, t) != marko_irreducible(steinberg_weight(shape, r, s, t)):
                bad.append((m, n, p, r, s, t))
    return not bad, f"{total} (shape,p,r,s,t) cases; {len(bad)} disagreements", bad


def c_translation(seed):
    bad, total = [], 0
    for (m, n), p in itertools.product(SHAPES, PRIMES):
        shape = BlockShape(m, n, p)
        lams = [shape.weight(e) for e in itertools.product(range(3), repeat=shape.size)]
        lams = [lam for lam in lams if is_dominant(lam)]
        for r, s, t in itertools.product(R_RANGE, ST_RANGE, ST_RANGE):
            for lam in lams:
                total += 1
                if not verify_translation_identity(shape, r, s, t, lam):
                    bad.append((m, n, p, r, s, t, str(lam)))
    return not bad, f"{total} identities; {len(bad)} failures", bad


def c_dimension(seed):
    rng = np.random.default_rng(seed)
    bad = []
    for m, n in SHAPES:
        shape = BlockShape(m, n, 3)
        for _ in range(50):
            even = sorted(rng.integers(-3, 6, size=m).tolist(), reverse=True)
            odd = sorted(rng.integers(-3, 6, size=n).tolist(), reverse=True)
            lam = shape.weight(even + odd)
            if dim_of(ch_induced(lam)) != 2 ** (m * n) * dim_of(ch_ev(lam)):
                bad.append(str(lam))
    return not bad, f"{50 * len(SHAPES)} weights; {len(bad)} failures", bad


def c_berezinian(seed):
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    bad = []
    for idx in range(100):
        m, n = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        alg = GrassmannAlgebra(int(rng.integers(0, 4)))
        A = random_supermatrix(rng, alg, m, n)
        B = random_supermatrix(rng, alg, m, n)
        if berezinian(sm_multiply(A, B)) != berezinian(A) * berezinian(B):
            bad.append(idx)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 5
    return ok, f"100 pairs, {len(bad)} failures, {elapsed:.2f}s (limit 5s)", bad


def c_structural(seed):
    bad, count = [], 0
    for kind in ("exterior", "symmetric"):
        for shape, k in _grid():
            M = build(kind, shape, k)
            count += 1
            br = bracket_violations(M)
            cf = closed_form_mismatches(M)
            if br or cf:
                bad.append((kind, shape.m, shape.n, shape.p, k, len(br), len(cf)))
    return not bad, f"{count} modules; {len(bad)} with violations", bad


CRITERIA = [
    (1, "exterior_good", "exterior good-filtration table", c_exterior_good),
    (2, "exterior_weyl", "exterior Weyl-filtration table", c_exterior_weyl),
    (3, "symmetric", "symmetric good and Weyl tables", c_symmetric),
    (4, "lemma_exterior", "U^opp-invariants of exterior powers", c_lemma_exterior),
    (5, "n_equals_one", "n=1 dimension and character", c_n_equals_one),
    (6, "duality", "homology equals cohomology of the dual", c_duality),
    (7, "free_injective", "free, injective and vanishing degree one", c_free_injective),
    (8, "order", "dominance order vs root cone", c_order),
    (9, "steinberg", "Steinberg criterion vs odd-root criterion", c_steinberg),
    (10, "translation", "translation character identity", c_translation),
    (11, "dimension", "induced dimension count", c_dimension),
    (12, "berezinian", "Berezinian multiplicativity", c_berezinian),
    (13, "structural", "bracket relations and closed forms", c_structural),
]


def select(only=None):
    if not only:
        return list(CRITERIA)
    wanted = {str(x).strip() for x in (only if isinstance(only, (list, tuple)) else str(only).split(","))}
    chosen = [c for c in CRITERIA if c[1] in wanted or str(c[0]) in wanted]
    unknown = wanted - {c[1] for c in chosen} - {str(c[0]) for c in chosen}
    if unknown:
        raise KeyError(f"unknown criteria: {', '.join(sorted(unknown))}")
    return chosen


def run_criterion(entry, seed=DEFAULT_SEED) -> CriterionResult:
    number, key, title, fn = entry
    start = time.perf_counter()
    try:
        passed, detail, failures = fn(seed)
    except Exception as exc:  # reported per item, never aborts the run
        passed, detail, failures = False, f"error: {type(exc).__name__}: {exc}", []
    return CriterionResult(number, key, title, bool(passed), detail, time.perf_counter() - start, failures)


def run_acceptance(only=None, seed=DEFAULT_SEED, echo=None) -> list[CriterionResult]:
    results = []
    for entry in select(only):
        res = run_criterion(entry, seed)
        if echo:
            echo(res.line())
        results.append(res)
    return results


# ---------------------------------------------------------------------------
# mutation harness


@contextlib.contextmanager
def corrupted_koszul_sign():
    """Build modules with the Koszul sign of odd operators dropped."""
    original = gl_modules.leibniz_action

    def mutated(kind, shape, i, j, word):
        out: dict = {}
        for t, idx in enumerate(word):
            if idx == j:
                new = list(word)
                new[t] = i
                s2, target = gl_modules.normalize(kind, shape, new)
                if s2:
                    out[target] = out.get(target, 0) + s2
        return {w: c for w, c in out.items() if c}

    gl_modules.leibniz_action = mutated
    try:
        yield
    finally:
        gl_modules.leibniz_action = original

