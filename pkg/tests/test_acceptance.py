"""Acceptance run: ten criteria, each at its stated bound and time limit.

Each test records one ``criterion N: PASS|FAIL`` line; pytest prints them
all in an "acceptance" block at the end of the run. Run just this module with
``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
Worker processes come from ``FUNDLOG_WORKERS`` (default 1).
"""

import itertools
import sys
import time

import pytest

from fundlog.frames import make_frame
from fundlog.logic import Proved, countermodel, derive, frame_consequence
from fundlog.suites import RunConfig, run_suite, workers_from_env

MINUTE = 60.0
RESULTS: list[str] = []  # shown in the terminal summary by conftest


def _config(**bounds):
    return RunConfig(workers=workers_from_env(), **bounds)


def _failures(report, only=None):
    return {name: c["witnesses"][:2] for name, c in report["checks"].items()
            if (only is None or name in only) and not c["ok"]}


def _announce(n, ok, elapsed, limit, detail=""):
    verdict = "PASS" if ok else "FAIL"
    line = f"criterion {n}: {verdict} ({elapsed:.1f} s, limit {limit:.0f} s){' ' + detail if detail else ''}"
    RESULTS.append(line)
    print(line)


def _judge(n, limit, run):
    start = time.perf_counter()
    failures, detail = run()
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed <= limit
    _announce(n, ok, elapsed, limit, detail)
    assert not failures, failures
    assert elapsed <= limit, f"took {elapsed:.1f} s"


def _suites(*runs):
    def run():
        failures, counts = {}, []
        for name, cfg, only in runs:
            rep = run_suite(name, cfg)
            bad = _failures(rep, only)
            if bad:
                failures[name] = bad
            counts.append(f"{name}={sum(c['instances'] for c in rep['checks'].values())}")
        return failures, " ".join(counts)
    return run


def test_c01_algebra_fundamental_iff_frame_conditions():
    _judge(1, 5 * MINUTE, _suites(("thm414", _config(max_frame_size=4), None)))


def test_c02_basic_frame_facts():
    _judge(2, 1 * MINUTE, _suites(("facts24", _config(max_frame_size=3), None)))


def test_c03_canonical_frames_and_hat_embedding():
    _judge(3, 10 * MINUTE, _suites(("thmB7", _config(max_lattice_size=6), None)))


def test_c04_canonical_extension():
    _judge(4, 10 * MINUTE, _suites(("lemma42", _config(max_lattice_size=5), None)))


def test_c05_dense_and_embedding_duals():
    only = {"injective_iff_dense", "surjective_iff_embedding"}
    _judge(5, 10 * MINUTE, _suites(("lemma32-35", _config(max_frame_size=3, max_lattice_size=4), only)))


def test_c06_dual_maps_of_homomorphisms():
    only = {"injective_iff_strongly_dense", "surjective_iff_strong_embedding"}
    _judge(6, 10 * MINUTE, _suites(
        ("lemma213", _config(max_lattice_size=4), None),
        ("lemma32-35", _config(max_frame_size=3, max_lattice_size=4), only),
    ))


def test_c07_coproduct_algebra_is_product():
    _judge(7, 2 * MINUTE, _suites(("lemma39", _config(max_frame_size=3), None)))


def test_c08_axiomatic_class_closure():
    _judge(8, 15 * MINUTE, _suites(("lemma44", _config(max_frame_size=3), None)))


def _reflexive_symmetric(n):
    pairs = list(itertools.combinations(range(n), 2))
    for chosen in itertools.product((False, True), repeat=len(pairs)):
        edges = [(x, x) for x in range(n)]
        for (x, y), keep in zip(pairs, chosen):
            if keep:
                edges += [(x, y), (y, x)]
        yield make_frame(n, edges)


def _logic():
    failures = {}
    for text in ("p |- ~~p", "F |- p"):
        if not isinstance(derive(text), Proved):
            failures[text] = "not proved"
    for text in ("~~p |- p", "T |- p | ~p", "p & (q | r) |- (p & q) | (p & r)"):
        if countermodel(text, 4) is None:
            failures[text] = "no countermodel up to 4 points"
    checked = 0
    for n in range(1, 5):
        for f in _reflexive_symmetric(n):
            checked += 1
            if not frame_consequence(f, "~~p |- p"):
                failures.setdefault("orthologic", []).append(f.edges())
    return failures, f"reflexive-symmetric frames={checked}"


def test_c09_logic_sanity():
    _judge(9, 5 * MINUTE, _logic)


def test_c10_modal_suite():
    """Expected red: the box clause fails on some modal lattices (2-chain,
    box = identity, diamond = 0) and some canonical frames are not AUFM.
    See the decision log for the counts and the analysis."""
    _judge(10, 15 * MINUTE, _suites(
        ("lemma54", _config(max_frame_size=3), None),
        ("lemma58", _config(max_lattice_size=4, max_frame_size=3), None),
    ))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
