import math

import numpy as np
import pytest

from qdlie import GroupSpec, InvalidInputError, Tri, classify
from qdlie.catalog import CATALOG_NAMES, all_entries, catalog, parse_name

YES, NO, UNKNOWN = Tri.YES, Tri.NO, Tri.UNKNOWN


def value(entry, flag):
    return getattr(entry.report, flag).value


def test_s2():
    e = catalog("S2")
    assert np.array_equal(e.spec.matrix, [[1.0]])
    assert value(e, "strongly_quasidiagonal") is NO and value(e, "quasidiagonal") is NO


def test_s3_parametrised():
    e = catalog("S3(2.5)")
    assert e.params == {"sigma": 2.5}
    assert np.array_equal(e.spec.matrix, [[2.5, 1.0], [-1.0, 2.5]])
    assert value(e, "quasidiagonal") is NO
    with pytest.raises(InvalidInputError):
        catalog("S3", sigma=0.0)


def test_s4():
    e = catalog("S4")
    assert e.spec.structure_constants.shape == (4, 4, 4)
    assert e.spec.matrix is None
    assert value(e, "strongly_quasidiagonal") is NO
    assert value(e, "quasidiagonal") is UNKNOWN


def test_heisenberg():
    e = catalog("heisenberg")
    assert value(e, "strongly_quasidiagonal") is YES
    assert value(e, "nilpotent") is YES


def test_mautner_default_theta():
    e = catalog("mautner")
    assert e.params["theta"] == math.sqrt(2)
    assert value(e, "quasidiagonal") is YES
    assert value(e, "strongly_quasidiagonal") is UNKNOWN
    assert not e.report.type_i_assumed


@pytest.mark.parametrize("n", [1, 2, 3])
def test_euclid_scaled(n):
    e = catalog("euclid_scaled", n=n)
    assert value(e, "quasidiagonal") is NO and value(e, "af_embeddable") is NO
    assert value(e, "exponential") is (YES if n == 1 else NO)
    assert e.spec.structure_constants.shape[0] == 1 + n * (n - 1) // 2 + n


def test_unknown_name_lists_valid_names():
    with pytest.raises(InvalidInputError) as info:
        catalog("Lorentz")
    for name in CATALOG_NAMES:
        assert name in str(info.value)
    with pytest.raises(InvalidInputError):
        parse_name("S2(3)")


def test_classify_catalog_spec():
    rep = classify(GroupSpec.from_catalog("S2"))
    assert rep.quasidiagonal.value is NO


def test_stored_flags_consistent_with_computed_for_matrix_groups():
    for name in ("S2", "S3", "mautner"):
        e = catalog(name)
        computed = classify(e.spec.matrix, type_i_assumed=e.report.type_i_assumed)
        for flag in e.report.FLAGS:
            assert getattr(computed, flag).value is value(e, flag), (name, flag)


def test_entries_serialise():
    for e in all_entries():
        d = e.to_dict()
        assert d["name"] in CATALOG_NAMES
        assert set(d["report"]) >= {"quasidiagonal", "strongly_quasidiagonal"}
