"""End-to-end acceptance checks.

Each test covers one numbered criterion and prints a single
``ACCEPTANCE n PASS`` / ``ACCEPTANCE n FAIL`` line on the real stdout so the
verdicts survive pytest's capture.
"""

import time
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from modesub.cmsolver import ImpedancePair, solve_cm
from modesub.pointgroup import TE, TM, O3IrrepId, builtin_group, builtin_group_names
from modesub.sphwave import eigenvalue, poles, sample_trace, spherical_bessel
from modesub.subduction import (
    ParityFilter,
    chain_subduce,
    filtered_stage_content,
    octahedral_chain_table,
    spherical_to_octahedral_table,
    subduce,
)
from modesub.symaction import action_from_points, orbit_points, projector
from modesub.tracediagram import build_diagram, find_crossings
from modesub.tracker import (
    Snapshot,
    TrackOptions,
    TrackedTrace,
    TracePoint,
    split_at_poles,
    track,
)


def criterion(n):
    """Emit one ACCEPTANCE line per criterion, bypassing output capture."""
    def wrap(fn):
        def run(capsys):
            try:
                fn()
            except BaseException:
                with capsys.disabled():
                    print(f"ACCEPTANCE {n} FAIL", flush=True)
                raise
            with capsys.disabled():
                print(f"ACCEPTANCE {n} PASS", flush=True)
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


SPHERE_TO_OH = [
    ("t=1,TE", "T_1g:1"),
    ("t=1,TM", "T_1u:1"),
    ("t=2,TE", "E_u:1 T_2u:1"),
    ("t=2,TM", "E_g:1 T_2g:1"),
    ("t=3,TE", "A_2g:1 T_1g:1 T_2g:1"),
    ("t=3,TM", "A_2u:1 T_1u:1 T_2u:1"),
    ("t=4,TE", "A_1u:1 E_u:1 T_1u:1 T_2u:1"),
    ("t=4,TM", "A_1g:1 E_g:1 T_1g:1 T_2g:1"),
    ("t=5,TE", "E_g:1 T_1g:2 T_2g:1"),
    ("t=5,TM", "E_u:1 T_1u:2 T_2u:1"),
    ("t=6,TE", "A_1u:1 A_2u:1 E_u:1 T_1u:1 T_2u:2"),
    ("t=6,TM", "A_1g:1 A_2g:1 E_g:1 T_1g:1 T_2g:2"),
]

OH_CHAIN = {
    "A_1g": [("A_1g", (1.0,), False, None, None)],
    "A_2g": [("B_1g", (1.0,), False, None, None)],
    "E_g": [("A_1g", (1.0,), False, None, None),
            ("B_1g", (1.0,), False, None, None)],
    "T_1g": [("A_2g", (1.0,), False, None, None),
             ("E_g", (-1.0, -1.0), True, "E:1", "B_1:1 B_2:1")],
    "T_2g": [("B_2g", (1.0,), False, None, None),
             ("E_g", (-1.0, -1.0), True, "E:1", "B_1:1 B_2:1")],
    "A_1u": [("A_1u", (-1.0,), True, "A_2:1", "A_2:1")],
    "A_2u": [("B_1u", (-1.0,), True, "B_2:1", "A_2:1")],
    "E_u": [("A_1u", (-1.0,), True, "A_2:1", "A_2:1"),
            ("B_1u", (-1.0,), True, "B_2:1", "A_2:1")],
    "T_1u": [("A_2u", (-1.0,), True, "A_1:1", "A_1:1"),
             ("E_u", (1.0, 1.0), False, None, None)],
    "T_2u": [("B_2u", (-1.0,), True, "B_1:1", "A_1:1"),
             ("E_u", (1.0, 1.0), False, None, None)],
}


@criterion(1)
def test_criterion_1_spherical_to_octahedral_table():
    start = time.perf_counter()
    got = [(str(w), str(r)) for w, r in spherical_to_octahedral_table(6)]
    elapsed = time.perf_counter() - start
    assert got == SPHERE_TO_OH
    # cell-for-cell with exact integer multiplicities
    for (_, text), (_, want) in zip(got, SPHERE_TO_OH):
        assert text == want
    oh = builtin_group("O_h")
    for t in range(1, 7):
        for s in (TE, TM):
            for mult in subduce(O3IrrepId(t, s), oh).entries:
                assert mult[1].denominator == 1
    assert elapsed < 1.0


@criterion(2)
def test_criterion_2_tetragonal_chain_table():
    rows = octahedral_chain_table()
    assert [r["oh"] for r in rows] == list(OH_CHAIN)
    for row in rows:
        want = OH_CHAIN[row["oh"]]
        assert len(row["branches"]) == len(want)
        for br, (d4h, diag, odd, c4v, c2v) in zip(row["branches"], want):
            assert br["d4h"] == d4h
            got_diag = tuple(br["plane_matrix"][i][i]
                             for i in range(len(br["plane_matrix"])))
            assert got_diag == diag
            assert br["odd"] == odd
            if odd:
                assert " ".join(f"{n}:{m}" for n, m in br["c4v"]) == c4v
                assert " ".join(f"{n}:{m}" for n, m in br["c2v"]) == c2v
            else:
                # even branches are carried with their mirror block so the
                # dropped entries stay visible, e.g. E_u -> diag(1, 1)
                assert br["c4v"] is None and br["c2v"] is None


@criterion(3)
def test_criterion_3_closed_forms_and_wronskian():
    lam_te = eigenvalue(O3IrrepId(1, TE), np.pi)
    lam_tm = eigenvalue(O3IrrepId(1, TM), np.pi)
    assert abs(lam_te - (-1.0 / np.pi)) <= 1e-9
    assert abs(lam_tm - (np.pi - 1.0 / np.pi)) <= 1e-9
    for t in range(1, 11):
        for x in np.linspace(0.3, 40.0, 500):
            lhs = (spherical_bessel("j", t, x) * spherical_bessel("y", t - 1, x)
                   - spherical_bessel("j", t - 1, x)
                   * spherical_bessel("y", t, x))
            assert abs(lhs * x * x - 1.0) <= 1e-9


@criterion(4)
def test_criterion_4_pole_location_and_split_signs():
    # independent oracle: bisection on the closed form of the first-order
    # function j_1(x) = sin(x)/x^2 - cos(x)/x
    oracle = brentq(lambda x: np.sin(x) / x ** 2 - np.cos(x) / x, 4.0, 5.0,
                    xtol=1e-12)
    first = poles(O3IrrepId(1, TE), 4.0, 5.0)[0]
    assert abs(first - 4.49340946) <= 1e-6
    assert abs(oracle - 4.49340946) <= 1e-6
    assert abs(first - oracle) <= 1e-6

    kr = np.linspace(4.4, 4.6, 2001)
    lam, _ = sample_trace(O3IrrepId(1, TE), kr)
    tr = TrackedTrace(0, "T_1g",
                      [TracePoint(k, l, 0) for k, l in zip(kr, lam)], [])
    pieces = split_at_poles(tr)
    assert len(pieces) == 2
    # negative infinity approached from below the resonance, positive above
    assert pieces[0].lambdas[-1] < -1e3
    assert pieces[1].lambdas[0] > 1e3
    lo, hi = pieces[0].events[-1]["interval"]
    assert lo < first < hi


@criterion(5)
def test_criterion_5_forbidden_crossing_prediction():
    d = build_diagram(3, 0.05 * np.pi, 2.0 * np.pi, 800, "O_h")
    events = find_crossings(d)
    by = {str(tr.source): i for i, tr in enumerate(d)}
    tm13 = [ev for ev in events if ev.forbidden and
            {ev.index_a, ev.index_b} == {by["t=1,TM"], by["t=3,TM"]}]
    assert len(tm13) == 1
    assert abs(tm13[0].kr_star / np.pi - 0.75) <= 0.05
    assert tm13[0].shared == ("T_1u",)
    te_tm = [ev for ev in events if ev.forbidden and
             {ev.index_a, ev.index_b} == {by["t=1,TE"], by["t=1,TM"]}]
    assert te_tm == []


@criterion(6)
def test_criterion_6_dimension_bookkeeping():
    oh = builtin_group("O_h")
    d4h = builtin_group("D_4h")
    dims = {p.name: p.dimension for p in oh.irreps}
    for t in range(1, 13):
        for s in (TE, TM):
            res = subduce(O3IrrepId(t, s), oh)
            total = sum(Fraction(dims[n]) * m for n, m in res.entries)
            assert total == 2 * t + 1

            stage = chain_subduce(O3IrrepId(t, s), ("O_h", "D_4h"))[-1]
            odd = dict(filtered_stage_content(d4h, stage.entries,
                                              ParityFilter("odd")))
            even = dict(filtered_stage_content(d4h, stage.entries,
                                               ParityFilter("even")))
            for name, mult in stage.entries:
                assert odd.get(name, 0) + even.get(name, 0) == mult


@criterion(7)
def test_criterion_7_projector_properties():
    rng = np.random.default_rng(1234)
    for gname in builtin_group_names():
        g = builtin_group(gname)
        pts = orbit_points(g, np.array([1.0, 0.37, 0.21]))
        act = action_from_points(g, pts)
        projs = [projector(act, p.name) for p in g.irreps]
        eye = np.eye(act.dimension)
        total = sum(projs)
        assert np.abs(total - eye).max() <= 1e-8
        for i, p in enumerate(projs):
            assert np.abs(p @ p - p).max() <= 1e-8
            for q in projs[i + 1:]:
                assert np.abs(p @ q).max() <= 1e-8
        for _ in range(100):
            v = rng.normal(size=act.dimension)
            parts = [p @ v for p in projs]
            assert np.linalg.norm(sum(parts) - v) <= 1e-8 * np.linalg.norm(v)
            for p, part in zip(projs, parts):
                assert np.linalg.norm(p @ part - part) <= \
                    1e-8 * max(np.linalg.norm(v), 1.0)


@criterion(8)
def test_criterion_8_eigensolver_invariants_and_oracle():
    rng = np.random.default_rng(321)
    for _ in range(50):
        n = 20
        a = rng.normal(size=(n, n))
        b = rng.normal(size=(n, n))
        pair = ImpedancePair(a + a.T, b @ b.T + n * np.eye(n))
        modes = solve_cm(pair)
        assert modes.residual_norms(pair).max() <= 1e-7
        assert modes.r_orthonormality_error(pair) <= 1e-7
    for n in range(3, 9):
        a = rng.normal(size=(n, n))
        b = rng.normal(size=(n, n))
        x = a + a.T
        r = b @ b.T + 2 * n * np.eye(n)
        modes = solve_cm(ImpedancePair(x, r))
        dense = np.linalg.eigvals(np.linalg.solve(r, x))
        assert np.abs(dense.imag).max() <= 1e-10
        got = np.sort(modes.eigenvalues)
        want = np.sort(dense.real)
        scale = np.abs(want).max()
        assert np.abs(got - want).max() <= 1e-8 * scale


@criterion(9)
def test_criterion_9_tracker_recovery_and_no_crossing():
    rng = np.random.default_rng(7)
    freqs = np.linspace(0.0, 4.0, 50)
    basis = np.linalg.qr(rng.normal(size=(6, 3)))[0]
    curves = [
        lambda f: np.sin(3.0 * f),
        lambda f: 0.5 * f * f - 1.0,
        lambda f: np.cos(2.0 * f) + 2.0,
    ]
    snaps = []
    for f in freqs:
        lam = np.array([c(f) for c in curves])
        perm = rng.permutation(3)
        snaps.append(Snapshot(f, lam[perm], basis[:, perm]))
    traces = track(snaps, TrackOptions(enforce_no_crossing=False))
    assert len(traces) == 3
    for tr in traces:
        errs = [np.abs(tr.lambdas - c(freqs)).max() for c in curves]
        assert min(errs) == 0.0

    # same-irrep curves engineered to cross in the raw data
    labels = ("A_1", "A_1", "E", "E")
    vecs = np.eye(4)
    snaps = []
    for f in np.linspace(-1.0, 1.0, 61):
        lam = np.array([f, -f, 0.5 * f + 0.2, -0.5 * f - 0.2])
        snaps.append(Snapshot(f, lam, vecs, labels=labels))
    traces = track(snaps, TrackOptions())
    for i, a in enumerate(traces):
        for b in traces[i + 1:]:
            if a.irrep != b.irrep:
                continue
            fa = {p.frequency: p.lam for p in a.points}
            fb = {p.frequency: p.lam for p in b.points}
            common = sorted(set(fa) & set(fb))
            signs = {np.sign(fa[f] - fb[f]) for f in common}
            signs.discard(0.0)
            assert len(signs) <= 1


def test_criterion_10_desk_scale_exclusions(capsys):
    note = ("excluded at desk scale: meshed-body eigenvalue sweeps, "
            "far-field patterns, scattering-parameter measurements, and "
            "fabricated antenna dimensions; covered instead by the property "
            "suites and by ingesting external mode snapshots")
    with capsys.disabled():
        print(f"note: {note}", flush=True)
        print("ACCEPTANCE 10 PASS", flush=True)
