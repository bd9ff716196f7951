"""Suites, Nakayama machinery, and report determinism."""

import pytest

from smonkit import bqa, harness, layered
from smonkit.harness import (
    NotNakayama,
    SuiteConfig,
    as_nakayama,
    enumerate_indecomposables,
    evidence_non_gorenstein,
    gorenstein_core,
    nakayama_17_18_18,
    run_suite,
    submodule_pair,
    uniserial,
)


@pytest.fixture(scope="module")
def big_nakayama():
    return nakayama_17_18_18()


def small_cfg(ctx, **kw):
    defaults = dict(context=ctx, bound=4, samples=8, seed=13, context_label="test")
    defaults.update(kw)
    return SuiteConfig(**defaults)


# -- suite smoke + determinism ---------------------------------------------------


@pytest.mark.parametrize(
    "name",
    ["ce", "adjunction", "smon-perp", "lz3", "pd-add", "triangular", "weakly-gorenstein"],
)
def test_random_suites_pass_everywhere(name, ctx_dual_chain3, ctx_chain3_a2):
    for ctx in (ctx_dual_chain3, ctx_chain3_a2):
        report = run_suite(name, small_cfg(ctx))
        assert report.ok, report.first_counterexample().note


def test_reports_deterministic(ctx_dual_chain3):
    a = run_suite("lz3", small_cfg(ctx_dual_chain3))
    b = run_suite("lz3", small_cfg(ctx_dual_chain3))
    assert a.to_text(include_timing=False) == b.to_text(include_timing=False)
    assert a.to_records() == b.to_records()


def test_only_instance_replays_one(ctx_dual_chain3):
    full = run_suite("ce", small_cfg(ctx_dual_chain3))
    one = run_suite("ce", small_cfg(ctx_dual_chain3, only_instance=5))
    assert len(one.records) == 1
    assert one.records[0].note == full.records[5].note


def test_thread_pool_matches_serial(ctx_dual_chain3, monkeypatch):
    serial = run_suite("ce", small_cfg(ctx_dual_chain3))
    monkeypatch.setenv("SMONKIT_THREADS", "4")
    threaded = run_suite("ce", small_cfg(ctx_dual_chain3))
    assert serial.to_records() == threaded.to_records()


def test_unknown_suite_rejected(ctx_dual_chain3):
    with pytest.raises(KeyError):
        run_suite("bogus", small_cfg(ctx_dual_chain3))


# -- Nakayama machinery ------------------------------------------------------------


def test_as_nakayama_shapes(dual_numbers, a2, chain3):
    assert as_nakayama(dual_numbers).kupisch == (2,)
    assert as_nakayama(a2).kupisch == (1, 2)
    nak3 = as_nakayama(chain3)
    assert nak3.kupisch == (1, 2, 2) and not nak3.cyclic
    kron = harness.Quiver(2, [harness.Arrow("u", 2, 1), harness.Arrow("v", 2, 1)])
    from smonkit.quiver import MonomialIdeal

    wild = bqa.Algebra(kron, MonomialIdeal(kron, []), 2)
    with pytest.raises(NotNakayama):
        as_nakayama(wild)


def test_big_nakayama_kupisch(big_nakayama):
    assert as_nakayama(big_nakayama).kupisch == (17, 18, 18)


def test_uniserial_structure(big_nakayama):
    u = uniserial(big_nakayama, 2, 3)
    assert u.total_dim == 3
    assert bqa.top(u).module.total_dim == 1
    assert bqa.check_module(u) == []


def test_enumerate_counts(dual_numbers, a2):
    assert len(enumerate_indecomposables(as_nakayama(dual_numbers))) == 2
    mods = enumerate_indecomposables(as_nakayama(a2))
    assert len(mods) == 3
    loop6 = harness.algebra_loop_nilpotent(6)
    assert len(enumerate_indecomposables(as_nakayama(loop6))) == 6


def test_enumerated_pairwise_distinguishable(big_nakayama):
    nak = as_nakayama(big_nakayama)
    mods = enumerate_indecomposables(nak)
    seen = set()
    for v, ell, m in mods:
        fp = (m.dims, tuple(m.mats[a.name].rank() for a in big_nakayama.quiver.arrows))
        assert fp not in seen
        seen.add(fp)


def test_core_of_self_injective_is_everything(dual_numbers):
    nak = as_nakayama(dual_numbers)
    _, core = gorenstein_core(nak, 10)
    assert core.nonprojective_gp == [(1, 1)]
    assert core.core_size == 2


def test_core_of_hereditary_is_empty(a2):
    _, core = gorenstein_core(as_nakayama(a2), 10)
    assert core.nonprojective_gp == [] and core.core_size == 0


def test_evidence_self_injective_and_hereditary(dual_numbers, a2):
    assert evidence_non_gorenstein(dual_numbers, 10) == (0, 0)
    left, right = evidence_non_gorenstein(a2, 10)
    assert left is not None and left <= 1
    assert right is not None and right <= 1


def test_syzygy_of_indecomposable_stays_uniserial(big_nakayama):
    nak = as_nakayama(big_nakayama)
    for v, ell, m in enumerate_indecomposables(nak)[:12]:
        syz = bqa.syzygy(m)
        assert syz.is_zero() or bqa.top(syz).module.total_dim == 1


def test_submodule_pairs_certify_gp(big_nakayama):
    # pairs (core submodule inside a core module) over an A_2 factor stay
    # Gorenstein-projective: the sampled face of the infinite-type claim.
    # Core submodules of a core uniserial are its radical powers in steps
    # of three (lengths stay divisible by three on both sides).
    ctx = layered.TensorContext(big_nakayama, harness.algebra_line(2))
    core_module = uniserial(big_nakayama, 2, 9)
    for k in (0, 3, 6):
        incl = harness.radical_power_inclusion(core_module, k)
        pair = submodule_pair(ctx, incl)
        assert pair.violations() == []
        assert layered.check_separated_monic(pair, layered.ClassPredicate.all_modules()).passed
        assert layered.layered_gp_cert(pair, 8).certified
    # a pair whose quotient leaves the core is not Gorenstein-projective
    off = submodule_pair(ctx, harness.radical_power_inclusion(core_module, 1))
    assert not layered.layered_gp_cert(off, 8).certified


def test_nakayama_suite_small(dual_numbers):
    cfg = SuiteConfig(algebra=dual_numbers, bound=6)
    report = run_suite("nakayama", cfg)
    assert report.ok
    text = report.to_text(include_timing=False)
    assert "kupisch: (2,)" in text and "core-size: 2" in text


def test_witnesses_replayable(ctx_dual_chain3):
    # force a failing record through a planted inconsistency: not possible
    # via the public suites (they pass), so check the record format instead
    report = run_suite("smon-perp", small_cfg(ctx_dual_chain3))
    lines = report.to_records().splitlines()
    assert len(lines) == 8
    assert all(line.startswith("smon-perp ") for line in lines)


def test_suites_over_parallel_arrow_factor(dual_numbers):
    from smonkit.quiver import Arrow, MonomialIdeal, Quiver

    kron = Quiver(2, [Arrow("u", 2, 1), Arrow("v", 2, 1)], acyclic=True)
    factor = bqa.Algebra(kron, MonomialIdeal(kron, []), 2)
    ctx = layered.TensorContext(dual_numbers, factor)
    for name in ("smon-perp", "lz3", "triangular"):
        cfg = SuiteConfig(context=ctx, bound=4, samples=6, seed=2, context_label="kx2/kron2")
        report = run_suite(name, cfg)
        assert report.ok, report.first_counterexample().note


def test_nakayama_core_characteristic_independent():
    # the same core reproduces over a different prime
    nak = harness.nakayama_17_18_18(p=3)
    _, core = gorenstein_core(as_nakayama(nak), 24)
    assert core.nonprojective_gp == [(2, 3), (2, 6), (2, 9), (2, 12), (2, 15)]
    assert core.core_size == 6


def test_suites_over_branching_factor(dual_numbers):
    # two arrows into the sink from different sources plus a relation:
    # the direct-sum condition mixes distinct source branches here
    from smonkit.quiver import Arrow, MonomialIdeal, Quiver, make_path

    bq = Quiver(4, [Arrow("a", 4, 2), Arrow("b", 2, 1), Arrow("c", 3, 1)], acyclic=True)
    factor = bqa.Algebra(bq, MonomialIdeal(bq, [make_path(bq, ("a", "b"))]), 2)
    ctx = layered.TensorContext(dual_numbers, factor)
    for name in ("smon-perp", "lz3", "adjunction"):
        cfg = SuiteConfig(context=ctx, bound=4, samples=6, seed=23, context_label="kx2/branch4")
        report = run_suite(name, cfg)
        assert report.ok, report.first_counterexample().note


def test_core_pair_over_headline_tensor_algebra(big_nakayama):
    # the worked tensor algebra: big Nakayama base with an A_2 factor; a
    # core-submodule pair is certified Gorenstein-projective in layers
    ctx = layered.TensorContext(big_nakayama, harness.algebra_line(2))
    core = uniserial(big_nakayama, 2, 12)
    pair = submodule_pair(ctx, harness.radical_power_inclusion(core, 6))
    assert layered.layered_gp_cert(pair, 8).certified
