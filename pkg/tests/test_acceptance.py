"""Acceptance criteria 1-8.

Each criterion prints one ``PASS``/``FAIL`` line (pytest shows them in the
terminal summary; ``python tests/test_acceptance.py`` prints them directly).
The suites run in-process once, with timing; criterion 8 runs the installed
``kappa`` command as a subprocess.
"""
from __future__ import annotations

import json
import shutil
import subprocess
import sys
import time
from functools import lru_cache
from typing import Callable, Dict, List, Tuple

import pytest

from kappa.suites import SUITES, Config, report, run_suite

ORDER = 6
CFG = Config(n=1, order=ORDER)
RESULTS: Dict[int, Tuple[bool, str]] = {}


@lru_cache(maxsize=None)
def suite(name: str):
    t0 = time.perf_counter()
    checks = run_suite(name, CFG)
    return {c.name: c for c in checks}, time.perf_counter() - t0


@lru_cache(maxsize=None)
def cli_run():
    exe = shutil.which("kappa")
    cmd = [exe] if exe else [sys.executable, "-m", "kappa.cli"]
    t0 = time.perf_counter()
    proc = subprocess.run(cmd + ["verify", "all", "-n", "1", "--order", str(ORDER), "--json"],
                          capture_output=True, text=True, timeout=600)
    return proc, time.perf_counter() - t0


class Crit:
    """Collects reasons a criterion fails."""

    def __init__(self):
        self.problems: List[str] = []

    def need(self, cond, msg):
        if not cond:
            self.problems.append(msg)

    def passing(self, checks, names):
        for nm in names:
            c = checks.get(nm)
            self.need(c is not None, f"missing check {nm}")
            if c is not None:
                self.need(c.passed, f"{nm} failed: {c.detail[:200]}")

    def all_pass(self, checks, prefix=""):
        for nm, c in checks.items():
            if nm.startswith(prefix):
                self.need(c.passed, f"{nm} failed: {c.detail[:200]}")

    def cases(self, checks, nm, at_least):
        c = checks.get(nm)
        self.need(c is not None and c.cases >= at_least,
                  f"{nm}: {c.cases if c else 0} cases < {at_least}")


def crit1(k: Crit):
    checks, dt = suite("hopf-axioms")
    k.all_pass(checks)
    for n in (1, 2):
        gens = [nm for nm in checks if nm.startswith(f"hopf-axioms/n={n}/generator/")]
        k.need(len(gens) >= 5, f"n={n}: only {len(gens)} generator checks")
        for part in ("axioms", "cop-multiplicative", "counit-multiplicative"):
            k.cases(checks, f"hopf-axioms/n={n}/random-products/{part}", 100)
    k.need(dt < 60, f"runtime {dt:.1f}s >= 60s")
    return f"{len(checks)} checks in {dt:.1f}s"


def crit2(k: Crit):
    checks, dt = suite("pbw")
    k.all_pass(checks)
    for n in (1, 2):
        k.cases(checks, f"pbw/n={n}/representation k(ab)=k(1)(a)k(2)(b)", 100)
        k.passing(checks, [f"pbw/n={n}/confluence", f"pbw/n={n}/faithfulness operator-rank",
                           f"pbw/n={n}/faithfulness word action = normal form action"])
    k.need(dt < 60, f"runtime {dt:.1f}s >= 60s")
    return f"{len(checks)} checks in {dt:.1f}s"


def crit3(k: Crit):
    checks, dt = suite("mpi")
    k.all_pass(checks)
    want = ["X1", "s", "sinv", "s[1;1,1]", "s[1;1,1,1]", "s[1;1,1,1,1]"]
    k.passing(checks, [f"mpi/n=1/S^2=Ad(sinv)/{g}" for g in want])
    k.cases(checks, "mpi/n=1/orientation", len(want))
    return f"{len(checks)} checks; orientation: {checks['mpi/n=1/orientation'].detail}"


def crit4(k: Crit):
    checks, dt = suite("faadibruno")
    k.all_pass(checks)
    from itertools import combinations_with_replacement as cwr
    for n, top in ((1, 4), (2, 3)):
        for size in range(1, top + 1):
            for J in cwr(range(1, n + 1), size):
                for i in range(1, n + 1):
                    if n == 1 and size == 1:
                        continue   # b[1;1] is the determinant itself, covered below
                    g = f"b[{i};{','.join(map(str, J))}]"
                    k.passing(checks, [f"faadibruno/n={n}/cop=flip(cop_K)/{g}",
                                       f"faadibruno/n={n}/antipode=iota(S_K)/{g}"])
        k.passing(checks, [f"faadibruno/n={n}/{c}" for c in (
            "Phi^-1 Phi = id", "Phi Phi^-1 = id", "pi1 is a coalgebra map", "pi2 is a coalgebra map",
            "pi1 I1 = id", "pi2 I2 = id", "cop(binv) group-like")])
    return f"{len(checks)} checks"


def crit5(k: Crit):
    gv, _ = suite("gv")
    cyc, _ = suite("cyclic-cocycles")
    k.all_pass(gv)
    k.all_pass(cyc)
    k.passing(gv, ["gv/b(1(x)logs(x)s^-2 s11)=0", "gv/b(1(x)s^-2 s11(x)sinv logs)=0",
                   "gv/tau2(1(x)logs(x)s^-2 s11)", "gv/tau2(1(x)s^-2 s11(x)sinv logs)",
                   "gv/tau2(GV)=GV", "gv/GV/b=0", "gv/GV/cyclic", "gv/GV+1(x)1(x)logs rejected"])
    k.passing(cyc, ["cyclic-cocycles/u1/b=0", "cyclic-cocycles/u1/B=C1", "cyclic-cocycles/C0/b=0",
                    "cyclic-cocycles/C0/cyclic", "cyclic-cocycles/C1/b=0", "cyclic-cocycles/C1/cyclic",
                    "cyclic-cocycles/C0+1(x)X1 rejected"])
    return f"{len(gv) + len(cyc)} checks"


def crit6(k: Crit):
    checks, _ = suite("ce-cocycles")
    k.all_pass(checks)
    k.passing(checks, [f"ce-cocycles/{c}/{p}" for c in ("C0dagger", "C1dagger", "C0_H", "C1_H")
                       for p in ("coinvariant", "b_wedge=0", "partial_wedge=0")])
    k.passing(checks, ["ce-cocycles/r_H(C1dagger)=C1_H"])
    return f"{len(checks)} checks"


def crit7(k: Crit):
    checks, dt = suite("phi-c")
    k.all_pass(checks)
    k.passing(checks, ["phi-c/oint R1 = c1 (generic jets)", "phi-c/Theta_K(C1dagger)=c1",
                       "phi-c/Theta_K(C0dagger)=c0", "phi-c/Phi_C(c0) = chi_tau(sinv X1)",
                       "phi-c/Phi_C(c1) = chi_tau(s^-2 s[1;1,1])"])
    k.cases(checks, "phi-c/Theta_K translation insensitive", 20)
    k.cases(checks, "phi-c/sigma^-1 trace property", 20)
    k.cases(checks, "phi-c/eps-invariance random", 20)
    k.need(dt < 120, f"runtime {dt:.1f}s >= 120s")
    return f"{len(checks)} checks in {dt:.1f}s"


def crit8(k: Crit):
    proc, dt = cli_run()
    k.need(proc.returncode == 0, f"exit code {proc.returncode}: {proc.stderr[-300:]}")
    k.need(dt < 300, f"runtime {dt:.1f}s >= 300s")
    try:
        rep = json.loads(proc.stdout)
    except json.JSONDecodeError:
        k.need(False, "output is not JSON")
        return f"{dt:.1f}s"
    k.need(rep.get("schema") == "kappa-report/1" and rep.get("suite") == "all" and rep.get("pass") is True,
           "report header wrong")
    names = [c["name"] for c in rep["checks"]]
    k.need(names == sorted(names), "checks not in canonical order")
    expected = set()
    for nm in SUITES:
        expected |= set(suite(nm)[0])
    missing = expected - set(names)
    k.need(not missing, f"report lacks {len(missing)} checks, e.g. {sorted(missing)[:3]}")
    return f"{len(names)} checks, exit {proc.returncode}, {dt:.1f}s"


CRITERIA: List[Tuple[int, str, Callable[[Crit], str]]] = [
    (1, "Hopf axioms on generators and random products, n in {1,2}", crit1),
    (2, "representation, PBW confluence and faithfulness", crit2),
    (3, "modular pair in involution S^2 = Ad(sinv)", crit3),
    (4, "Faa di Bruno consistency and Phi round trips", crit4),
    (5, "golden cyclic identities, GV, u1, certified cocycles", crit5),
    (6, "Chevalley-Eilenberg cocycles and r_H", crit6),
    (7, "geometric side: Bott cochains, Theta_K, Phi_C, trace", crit7),
    (8, "kappa verify all -n 1 --order 6", crit8),
]


def evaluate(num: int) -> Tuple[bool, str]:
    _, title, fn = CRITERIA[num - 1]
    k = Crit()
    try:
        info = fn(k)
    except Exception as exc:            # a crash is a failure, reported as such
        k.problems.append(f"{type(exc).__name__}: {exc}")
        info = ""
    ok = not k.problems
    line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {title} ({info})"
    if not ok:
        line += " -- " + "; ".join(k.problems[:5])
    RESULTS[num] = (ok, line)
    return ok, line


@pytest.mark.parametrize("num", [c[0] for c in CRITERIA])
def test_criterion(num):
    ok, line = evaluate(num)
    print(line)
    assert ok, line


def test_verify_all_is_deterministic():
    """The subprocess report equals an independent in-process run."""
    proc, _ = cli_run()
    rep = json.loads(proc.stdout)
    again = report("all", run_suite("all", CFG))
    assert rep == json.loads(json.dumps(again))


if __name__ == "__main__":
    fails = 0
    for num, _, _ in CRITERIA:
        ok, line = evaluate(num)
        print(line, flush=True)
        fails += not ok
    sys.exit(1 if fails else 0)
