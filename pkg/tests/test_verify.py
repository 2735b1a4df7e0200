import pytest

from decic.verify import CHECK_IDS, REGISTRY, VerifyError, resolve_checks, run_check

CHECKS = {c.id: c for c in REGISTRY}


def run(ctx, check_id):
    return run_check(CHECKS[check_id], ctx)


def test_registry_order_and_resolution():
    assert CHECK_IDS[0] == "group" and CHECK_IDS[-1] == "unique-decic"
    mandatory = resolve_checks()
    assert "unique-decic" not in [c.id for c in mandatory]
    assert len(mandatory) == 11
    # requested checks still run in registry order
    assert [c.id for c in resolve_checks(["points", "group"])] == ["group", "points"]
    with pytest.raises(VerifyError, match="group"):
        resolve_checks(["nope"])


def test_decic_consistency_selects_one_variant(verify_ctx):
    rec = run(verify_ctx, "f-consistency")
    assert rec.status == "pass", rec.detail
    assert rec.values["matching_variants"]["value"] == 1
    assert rec.values["selected_variant"]["value"] == "minus"
    assert rec.values["swapped_layout_degrees"]["value"] == [8, 10, 12]


def test_relations_check_matches_golden(verify_ctx):
    rec = run(verify_ctx, "relations")
    assert rec.status == "pass", rec.detail
    assert rec.values["relation_sha256"]["value"] == rec.values["relation_sha256"]["expected"]


def test_generic_finiteness_witness(verify_ctx):
    rec = run(verify_ctx, "generic-finiteness")
    assert rec.values["rank_at_generic_point"]["value"] == [4, 4]
    assert rec.values["identity_map_rank"]["value"] == 6
    # the listed point only reaches rank 3 (see the decisions ledger)
    assert rec.values["rank_at_listed_point"]["value"] == [3, 3]


def test_reducedness_and_components(verify_ctx):
    for check_id in ("reducedness-witness", "puredim-witness", "points"):
        rec = run(verify_ctx, check_id)
        assert rec.status == "pass", (check_id, rec.detail)


def test_crashing_check_is_a_failure(verify_ctx):
    from decic.verify import CheckInfo

    def boom(ctx, rec):
        raise RuntimeError("kaput")

    rec = run_check(CheckInfo("boom", boom, False), verify_ctx)
    assert rec.status == "fail" and "kaput" in rec.detail
