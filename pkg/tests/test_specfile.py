import json

import pytest

from enmorse.catalog import all_fixtures, catalog, hopf, rp3_lifted
from enmorse.morse import EnrichedMorseDatum
from enmorse.specfile import FibrationSpec, SpecError, emit_spec, parse_spec


def doc(spec):
    return json.loads(emit_spec(spec))


def errors_of(d):
    with pytest.raises(SpecError) as exc:
        parse_spec(json.dumps(d))
    return exc.value.errors


@pytest.mark.parametrize("spec", all_fixtures() + [catalog("s2-pathloop-3")], ids=lambda s: s.name)
def test_round_trip(spec):
    raw = emit_spec(spec)
    back = parse_spec(raw)
    assert back == spec
    assert emit_spec(back) == raw


def test_hopf_parses_to_hopf_datum():
    assert parse_spec(emit_spec(hopf())).datum == hopf().datum


def test_empty_datum():
    empty = FibrationSpec("empty", EnrichedMorseDatum((), {}))
    raw = emit_spec(empty)
    assert json.loads(raw) == {"base": [], "fibers": {}, "format": "enmorse-fibration/1", "name": "empty", "transports": []}
    assert parse_spec(raw) == empty


def test_rp3_document_has_group_block():
    d = doc(rp3_lifted())
    assert d["group"]["elements"] == ["1", "t"]
    assert d["group"]["table"] == [["1", "t"], ["t", "1"]]
    assert d["monodromy"]["system"] == "left-regular"


def test_missing_fiber_names_point():
    d = doc(hopf())
    del d["fibers"]["M"]
    assert any("missing fiber for critical point 'M'" in e for e in errors_of(d))


def test_shift_mismatch_names_pair():
    d = doc(hopf())
    d["transports"][0]["shift"] = 0
    errs = errors_of(d)
    assert any("$.transports[0]" in e and "M->m" in e for e in errs)


def test_non_gf2_entries():
    d = doc(hopf())
    d["transports"][0]["matrices"]["0"] = [[0, 0, 2]]
    assert any("$.transports[0].matrices.0[0]" in e for e in errors_of(d))
    d = doc(hopf())
    d["transports"][0]["matrices"]["0"] = [[0, 0], [0, 0]]
    assert any("repeated" in e for e in errors_of(d))
    d = doc(hopf())
    d["transports"][0]["matrices"]["0"] = [[1, 0]]
    assert any("outside" in e for e in errors_of(d))


def test_unknown_point_and_bad_syntax():
    d = doc(hopf())
    d["transports"][0]["to"] = "q"
    assert any("unknown critical point" in e for e in errors_of(d))
    with pytest.raises(SpecError) as exc:
        parse_spec(b'{"format": "enmorse-fibration/1",\n  "name": }')
    assert exc.value.errors[0].startswith("line 2, column")


def test_every_error_is_collected():
    d = doc(hopf())
    d["format"] = "other"
    d["extra"] = 1
    del d["fibers"]["m"]
    errs = errors_of(d)
    assert len(errs) >= 3
    assert any(e.startswith("$.format") for e in errs)


def test_monodromy_block_is_checked():
    d = doc(rp3_lifted())
    d["monodromy"]["transports"][0]["coefficients"] = ["1"]
    assert errors_of(d)
    d = doc(rp3_lifted())
    d["monodromy"]["system"] = "nope"
    assert any("$.monodromy.system" in e for e in errors_of(d))


def test_fiber_must_square_to_zero():
    d = doc(hopf())
    d["fibers"]["m"] = {"generators": {"0": ["v"], "1": ["a"], "2": ["b"]}, "differential": {"1": [[0, 0]], "2": [[0, 0]]}}
    assert any("square to zero" in e for e in errors_of(d))
