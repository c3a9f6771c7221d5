"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line with the measured
numbers. Run ``python3 tests/test_acceptance.py`` for the summary alone.
"""

import filecmp
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from _checks import run_suite  # noqa: E402
from _naive import naive_level_sums  # noqa: E402

from holocorr import cli  # noqa: E402
from holocorr.dimension import ReportConfig, hd_delta_report  # noqa: E402
from holocorr.families import bullett_penrose, from_rational_inverse, llmm  # noqa: E402
from holocorr.measure import conformality_residuals, parabolic_mass, patterson_sullivan  # noqa: E402
from holocorr.poincare import critical_exponent, level_weights  # noqa: E402


def squaring():
    return from_rational_inverse([0, 0, 1])


def cauliflower():
    return from_rational_inverse([0.25, 0, 1])


def ac1():
    t0 = time.perf_counter()
    c = squaring()
    w = level_weights(c, 1, 15)
    n = np.arange(16)
    err = max(np.max(np.abs(w.sums(s) / 2.0 ** (n * (1 - s)) - 1)) for s in (0.5, 1, 1.5, 2))
    delta = critical_exponent(c, 1, tol=1e-3, depth=15).delta
    dt = time.perf_counter() - t0
    ok = err <= 1e-9 and abs(delta - 1) <= 0.02 and dt < 10
    return ok, f"max rel err {err:.1e}, delta {delta:.4f}, {dt:.1f}s"


def ac2():
    t0 = time.perf_counter()
    rep = hd_delta_report(cauliflower(), 3, ReportConfig(depth=20))
    dt = time.perf_counter() - t0
    hd, d = rep["hd_est"], rep["delta_est"]
    ok = hd <= d + 0.1 and d < 2 - 0.05 and d >= 0.95 and dt < 120
    return ok, f"box-dim {hd:.4f}, delta {d:.4f}, {dt:.1f}s"


#: fixed test disks on the unit circle, kept away from the basepoint 1 so that
#: the branch images do not contain it either
AC3_CENTERS = np.exp(1j * (0.6 + np.arange(10) * (2 * np.pi - 1.2) / 9))
AC3_RADIUS = 0.5


def _ac3_residuals(depth):
    c = squaring()
    m = patterson_sullivan(c, 1, 1.0, depth)
    out = np.array([[r.rel_residual for r in conformality_residuals(m, c, z, AC3_RADIUS, [1.0, 2.0])]
                    for z in AC3_CENTERS])
    del m
    return out


def ac3():
    r12 = _ac3_residuals(12)
    r24 = _ac3_residuals(24)
    good = np.all(r24[:, 0] <= 0.05) and np.all(r24[:, 0] < r12[:, 0])
    wrong = int(np.sum(r24[:, 1] >= 0.2))
    ok = bool(good and wrong >= 8)
    return ok, (f"delta=1: max {r24[:, 0].max():.4f} at depth 24 vs min {r12[:, 0].min():.4f} "
                f"at depth 12; delta=2: {wrong}/10 disks >= 0.2")


def ac4():
    rng = np.random.default_rng(4)
    details = []
    ok = True
    for _ in range(5):
        a = 4 + complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        c = bullett_penrose(a)
        W = np.array([p.z for p in c.forward(0)])
        k = int(np.argmin(np.abs(W)))
        res = float(c.curve_residual(0, W[k]))
        m = c.multiplier(0, W[k])
        unity = min(abs(m - np.exp(2j * np.pi * j / q)) for q in range(1, 65) for j in range(q))
        other = W[1 - k]
        dnon = c.branch_derivative(0, other)
        ok &= abs(W[k]) <= 1e-10 and res <= 1e-10 and unity <= 1e-6 and dnon <= 1e-6
        details.append(max(res, unity, dnon))
    return bool(ok), f"worst of residual/unity gap/non-fixing derivative per a: {max(details):.1e}"


def ac5():
    c = llmm([0, 1, 0.5])
    P = c.P.coeffs / c.P.coeffs[1, 1]
    target = np.array([[1, 0], [2, 1]], complex)  # 1 + 2 zbar + zbar w
    coef_err = float(np.max(np.abs(P - target)))
    rng = np.random.default_rng(5)
    z = (rng.normal(size=100) + 1j * rng.normal(size=100)) * 2
    W = c.forward_many(z)[:, 0]
    expect = -2 - 1 / np.conj(z)
    branch_err = float(np.max(np.abs(W - expect) / np.maximum(1, np.abs(expect))))
    fix = c.forward(-1)[0].z
    ok = coef_err <= 1e-12 and branch_err <= 1e-10 and abs(fix + 1) <= 1e-12
    return ok, f"coefficient err {coef_err:.1e}, branch err {branch_err:.1e}, F(-1) = {fix.real:.12g}"


AC6_BASEPOINT = 0.52


def ac6():
    c = cauliflower()
    dhat = critical_exponent(c, AC6_BASEPOINT, depth=20).delta
    s = dhat + 0.05
    masses = [parabolic_mass(patterson_sullivan(c, AC6_BASEPOINT, s, N), 0.5, 0.05)
              for N in (12, 16, 20)]
    ok = masses[0] > masses[1] > masses[2]
    return ok, f"s = {s:.4f}, mass in B(1/2, 0.05): " + ", ".join(f"{m:.5f}" for m in masses)


def ac7():
    res = run_suite(seed=2024, n=1000)
    fails = {k: len(v) for k, v in res.items()}
    return sum(fails.values()) == 0, ", ".join(f"{k}: {v} failures" for k, v in fails.items())


AC8_CASES = [
    ("rational-inverse", lambda: from_rational_inverse([0.25, 0, 1]), 3.0),
    ("bullett-penrose", lambda: bullett_penrose(4.0), 0.3 + 0.2j),
    ("llmm", lambda: llmm([0, 1, 0, 1 / 3]), 1.5 + 0.5j),
]


def ac8():
    from holocorr.poincare import level_sums

    worst = 0.0
    for _, make, x in AC8_CASES:
        c = make()
        for s in (0.6, 1.0, 1.7):
            for depth in (1, 4, 6):
                a = level_sums(c, x, s, depth).a
                b = naive_level_sums(c, x, s, depth)
                worst = max(worst, float(np.max(np.abs(a - b) / np.abs(b))))
    return worst <= 1e-9, f"max relative difference {worst:.1e} over 3 families"


def ac9():
    argv = ["report", "--family", "rational-inverse", "--p", "0.25,0,1", "--q", "1", "--x", "3",
            "--seed", "11"]
    with tempfile.TemporaryDirectory() as tmp:
        dirs = []
        for k, threads in enumerate(("1", "1", "8")):
            d = Path(tmp) / f"run{k}"
            code = cli.main(argv + ["--threads", threads, "--out", str(d)])
            if code != 0:
                return False, f"report exited with {code}"
            dirs.append(d)
        names = sorted(p.name for p in dirs[0].iterdir())
        same = all(
            filecmp.cmp(dirs[0] / n, d / n, shallow=False) for d in dirs[1:] for n in names
        )
        kinds = sorted({n.rsplit(".", 1)[1] for n in names})
    return same, f"{len(names)} files ({'/'.join(kinds)}) identical across 2 runs and threads 1 vs 8"


CRITERIA = [
    (1, "closed-form Poincare oracle", ac1),
    (2, "box dimension <= delta + 0.1, 0.95 <= delta < 1.95 (cauliflower)", ac2),
    (3, "conformality residuals on the circle", ac3),
    (4, "Bullett-Penrose parabolic structure", ac4),
    (5, "LLMM hand algebra", ac5),
    (6, "mass near the parabolic point decreases with depth", ac6),
    (7, "property suite", ac7),
    (8, "brute-force level sums", ac8),
    (9, "determinism", ac9),
]


def _line(num, title, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] AC{num} {title}: {detail}"


@pytest.mark.parametrize("num,title,fn", CRITERIA, ids=[f"AC{n}" for n, _, _ in CRITERIA])
def test_acceptance(num, title, fn, capsys):
    ok, detail = fn()
    line = _line(num, title, ok, detail)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [fn() for _, _, fn in CRITERIA]
    print()
    for (num, title, _), (ok, detail) in zip(CRITERIA, results):
        print(_line(num, title, ok, detail))
    sys.exit(0 if all(ok for ok, _ in results) else 1)
