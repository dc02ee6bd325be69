"""Acceptance suite: one test per exit criterion, each printing a
PASS/FAIL line. Run standalone with ``python tests/test_acceptance.py``.

All comparisons are exact rational equality; runtime limits are the only
numeric tolerances.
"""

import json
import random
import sys
import time
from fractions import Fraction as F
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import random_general_matrix, random_prob, random_reasonable_matrix, simplex_grid  # noqa: E402

from modegap.certify import (  # noqa: E402
    binary_threshold,
    brute_force_oracle,
    check_counterexample,
    find_counterexample,
    ternary_conditions,
    verify_counterexample,
)
from modegap.cli import main  # noqa: E402
from modegap.cost_matrix import (  # noqa: E402
    CostMatrix,
    binary_matrix,
    canonicalize,
    is_zero_one,
    ternary_matrix,
    validate_reasonable,
)
from modegap.decision import bayes_set, mode_set, regret  # noqa: E402
from modegap.region import (  # noqa: E402
    SIMPLEX_AREA,
    bayes_regions_ternary,
    disagreement_region,
    mode_regions_ternary,
)

RESULTS: dict[int, str] = {}
DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


def _report(number, title, ok, detail, seconds, limit=None):
    status = "PASS" if ok else "FAIL"
    budget = f" (limit {limit:.0f}s)" if limit else ""
    line = f"[{status}] criterion {number}: {title} -- {detail}; {seconds:.2f}s{budget}"
    RESULTS[number] = line
    print(line)
    return line


def _random_ternary_ab(rng):
    q = rng.randint(1, 12)
    a = F(rng.randint(0, 3 * q), q)
    b = F(rng.randint(0, int((3 - a) * q)), q)
    return a, b


def criterion_1():
    """Theorem reproduction for k = 2..5."""
    rng = random.Random(20240601)
    start = time.perf_counter()
    failures = []
    counts = {}
    for k in (2, 3, 4, 5):
        found = 0
        mats = [random_reasonable_matrix(rng, k) for _ in range(200)]
        # plus constant off-diagonal matrices, which canonicalize to zero-one
        mats += [CostMatrix.zero_one(k)] + [
            CostMatrix.from_rows([[0 if i == j else F(c, 8) for j in range(k)] for i in range(k)])
            for c in (1, 5, 32)
        ]
        for L in mats:
            zero_one = is_zero_one(canonicalize(L))
            cx = find_counterexample(L)
            if (cx is None) != zero_one:
                failures.append((k, L.entries))
            elif cx is not None:
                found += 1
                if not verify_counterexample(L, cx):
                    failures.append((k, "witness fails recheck", L.entries))
        counts[k] = found
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    return ok, f"witnesses per k {counts}, failures {len(failures)}", elapsed, 60


def criterion_2():
    """Binary threshold at c/2, grid p1 = n/200."""
    rng = random.Random(7)
    start = time.perf_counter()
    cs = [F(1, 2), F(1), F(4, 3), F(3, 2)]  # thresholds on the grid, ties exercised
    while len(cs) < 100:
        q = rng.randint(1, 60)
        cs.append(F(rng.randint(1, 2 * q - 1), q))
    bad = 0
    ties = 0
    for c in cs:
        L = binary_matrix(c)
        t = binary_threshold(L)
        for n in range(201):
            p1 = F(n, 200)
            labels = bayes_set(L, (p1, 1 - p1)).labels
            expected = {1} if p1 > t else ({1, 2} if p1 == t else {2})
            ties += p1 == t
            bad += labels != expected
    elapsed = time.perf_counter() - start
    return bad == 0 and elapsed < 5, f"{len(cs)} thresholds, {ties} boundary ties, {bad} mismatches", elapsed, 5


def criterion_3():
    """Ternary inequalities vs expected-loss argmin on the N=60 grid."""
    rng = random.Random(33)
    start = time.perf_counter()
    pairs = [(F(1), F(1)), (F(0), F(0)), (F(3), F(0)), (F(0), F(3))]
    while len(pairs) < 50:
        pairs.append(_random_ternary_ab(rng))
    grid = list(simplex_grid(3, 60))
    bad = 0
    for a, b in pairs:
        C = ternary_matrix(a, b)
        systems = [ternary_conditions(C, t) for t in (1, 2, 3)]
        for p in grid:
            labels = bayes_set(C, p).labels
            for t, s in enumerate(systems, start=1):
                bad += s.satisfied_by(p) != (t in labels)
    elapsed = time.perf_counter() - start
    detail = f"{len(pairs)} (a,b) pairs x {len(grid)} points x 3 targets, {bad} mismatches"
    return bad == 0 and elapsed < 30, detail, elapsed, 30


def criterion_4():
    """a = b = 1 recovers zero-one loss."""
    start = time.perf_counter()
    C = ternary_matrix(1, 1)
    bad = sum(bayes_set(C, p).labels != mode_set(p).labels for p in simplex_grid(3, 60))
    dis = disagreement_region(C)
    ok = bad == 0 and not dis.polygons and dis.area == 0
    elapsed = time.perf_counter() - start
    return ok, f"{bad} grid mismatches, disagreement pieces {len(dis.polygons)}, area {dis.area}", elapsed, None


def criterion_5():
    """Argmin invariance under column shifts, scaling and canonicalization."""
    rng = random.Random(55)
    start = time.perf_counter()
    bad = 0
    closure_checked = 0
    for _ in range(1000):
        k = rng.randint(2, 5)
        L = random_general_matrix(rng, k)
        shift = [F(rng.randint(-30, 30), rng.randint(1, 7)) for _ in range(k)]
        scale = F(rng.randint(1, 40), rng.randint(1, 9))
        L2 = CostMatrix.from_rows([[scale * L(i, j) + shift[j - 1] for j in range(1, k + 1)]
                                   for i in range(1, k + 1)])
        p = random_prob(rng, k)
        C = canonicalize(L)
        ref = bayes_set(L, p).labels
        bad += ref != bayes_set(L2, p).labels
        bad += ref != bayes_set(C, p).labels
        if validate_reasonable(L2).is_reasonable:
            closure_checked += 1
            bad += canonicalize(L2) != C
    elapsed = time.perf_counter() - start
    return bad == 0, f"1000 tuples, {closure_checked} closure checks, {bad} mismatches", elapsed, None


def criterion_6():
    """Oracle agrees with the certifier on random k=3 matrices."""
    rng = random.Random(66)
    start = time.perf_counter()
    bad = 0
    witnesses = 0
    for _ in range(50):
        L = random_reasonable_matrix(rng, 3)
        cx = find_counterexample(L)
        oracle = brute_force_oracle(L, 60)
        if cx is not None:
            witnesses += 1
            bad += oracle is None
            bad += check_counterexample(L, cx.p) is None
        else:
            bad += oracle is not None
    for L in (CostMatrix.zero_one(3), ternary_matrix(1, 1)):
        bad += brute_force_oracle(L, 60) is not None
    elapsed = time.perf_counter() - start
    return bad == 0, f"{witnesses}/50 certifier witnesses, {bad} disagreements", elapsed, None


def criterion_7():
    """Regret is nonnegative, zero exactly when the mode is Bayes."""
    rng = random.Random(77)
    start = time.perf_counter()
    bad = 0
    zero_one_cases = 0
    for n in range(10_000):
        k = rng.randint(2, 5)
        if n % 10 == 0:
            L = CostMatrix.zero_one(k)
        else:
            L = random_reasonable_matrix(rng, k)
        p = random_prob(rng, k)
        r = regret(L, p)
        bad += r < 0
        bad += (r == 0) != (mode_set(p).labels <= bayes_set(L, p).labels)
        if is_zero_one(canonicalize(L)):
            zero_one_cases += 1
            bad += r != 0
    elapsed = time.perf_counter() - start
    return bad == 0, f"10000 pairs ({zero_one_cases} zero-one), {bad} violations", elapsed, None


def criterion_8():
    """Exact region geometry for k=3."""
    rng = random.Random(88)
    start = time.perf_counter()
    bad = 0
    mats = [random_reasonable_matrix(rng, 3) for _ in range(20)] + [CostMatrix.zero_one(3)]
    mode_rs = mode_regions_ternary()
    bad += mode_rs.area != SIMPLEX_AREA
    for L in mats:
        C = canonicalize(L)
        bayes_rs, dis_rs = bayes_regions_ternary(C), disagreement_region(C)
        bad += bayes_rs.area != SIMPLEX_AREA
        bad += (dis_rs.area == 0) != is_zero_one(C)
        for _ in range(1000):
            p = random_prob(rng, 3, max_den=30)
            bad += mode_rs.labels_at(p) != set(mode_set(p).labels)
            bad += bayes_rs.labels_at(p) != set(bayes_set(L, p).labels)
            cx = check_counterexample(L, p)
            bad += dis_rs.labels_at(p) != ({cx.mode_label} if cx else set())
    elapsed = time.perf_counter() - start
    return bad == 0, f"{len(mats)} matrices x 1000 points, {bad} mismatches", elapsed, None


def _cli_capture(args):
    import contextlib
    import io

    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            code = main([str(a) for a in args])
        except SystemExit as exc:
            code = exc.code
    return code, out.getvalue()


def criterion_9(tmp_dir: Path):
    """Golden outputs, reruns and exit codes for the CLI."""
    start = time.perf_counter()
    bad = []
    sizes = {"zero_one_3": 3, "shifted_2": 2, "ternary_a2_b1": 3}
    for name, k in sizes.items():
        for cmd in ("canonicalize", "decide", "certify", "oracle", "regions", "regret"):
            args = [cmd, "--matrix", DATA / f"{name}.csv"]
            if cmd in ("decide", "regret"):
                args += ["--probs", DATA / f"probs_{k}.csv"]
            if cmd == "decide":
                args += ["--seed", "7"]
            code, out = _cli_capture(args)
            if cmd == "regions" and k != 3:
                if code != 1:
                    bad.append((name, cmd, code))
                continue
            golden = GOLDEN / f"{name}.{cmd}.{'svg' if cmd == 'regions' else 'out'}"
            if code != 0 or out != golden.read_text(encoding="utf-8"):
                bad.append((name, cmd, "golden"))
            if _cli_capture(args) != (code, out):
                bad.append((name, cmd, "rerun"))
    cases = {"0,1\n1\n": 2, "0,1,2\n1,0,2\n": 2, "0,1\n2,3\n": 3}
    for i, (content, expected) in enumerate(cases.items()):
        path = tmp_dir / f"bad{i}.csv"
        path.write_text(content)
        code, _ = _cli_capture(["certify", "--matrix", path])
        if code != expected:
            bad.append(("exit", content, code))
    if _cli_capture(["decide", "--matrix", DATA / "shifted_2.csv"])[0] != 1:
        bad.append(("exit", "missing --probs"))
    if json.loads(_cli_capture(["certify", "--matrix", DATA / "zero_one_3.csv"])[1])["mode_is_bayes"] is not True:
        bad.append(("certify", "zero-one"))
    elapsed = time.perf_counter() - start
    return not bad, f"18 golden cases + exit codes, problems {bad}", elapsed, None


TITLES = {
    1: "theorem reproduction, k=2..5",
    2: "binary threshold c/2",
    3: "ternary inequality equivalence",
    4: "zero-one reduction at a=b=1",
    5: "canonicalization invariance",
    6: "oracle consistency",
    7: "regret properties",
    8: "region geometry",
    9: "CLI goldens and exit codes",
}
CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, tmp_path):
    fn = CRITERIA[number]
    ok, detail, elapsed, limit = fn(tmp_path) if number == 9 else fn()
    line = _report(number, TITLES[number], ok, detail, elapsed, limit)
    assert ok, line


if __name__ == "__main__":
    import tempfile

    all_ok = True
    with tempfile.TemporaryDirectory() as tmp:
        for number, fn in sorted(CRITERIA.items()):
            ok, detail, elapsed, limit = fn(Path(tmp)) if number == 9 else fn()
            _report(number, TITLES[number], ok, detail, elapsed, limit)
            all_ok &= ok
    sys.exit(0 if all_ok else 1)
