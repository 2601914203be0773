import pytest
from plugins.datum.datum import ext
from plugins.harness.registry import FixtureRegistry, UnknownFixture, verify_scenario
from plugins.harness.scenario import (
    MissingStanza,
    ParseError,
    UnresolvedReference,
    parse_scenario,
    serialize_scenario,
    tokenize,
)

SWAP = "ring p=5 atoms=[u, v]; groupoid cyclic n=2; action { e = [u, v]; s : [u |-> v, v ↦ u] }"


@pytest.mark.parametrize("name", ["FX-HEX", "FX-B2", "FX-DAT", "FX-GLOB", "FX-GAMMA"])
def test_serialize_round_trip(registry, name):
    sc = registry.load(name)
    again = parse_scenario(serialize_scenario(sc))
    assert again == sc


def test_registry_names(registry):
    assert registry.names() == ["FX-B2", "FX-DAT", "FX-GAMMA", "FX-GLOB", "FX-HEX"]
    with pytest.raises(UnknownFixture) as info:
        registry.load("FX-NOPE")
    assert info.value.exit_code == 2


def test_registry_prime_override():
    sc = FixtureRegistry().load("FX-DAT", p=7)
    assert sc.ring.p == 7
    assert sc.datum.ring.p == 7


@pytest.mark.parametrize("text", ["", "\n\n", "# only a comment\n"])
def test_empty_scenario(text):
    with pytest.raises(ParseError, match="empty scenario"):
        parse_scenario(text)


def test_semicolons_and_unicode_maps():
    sc = parse_scenario(SWAP)
    assert sc.ring.p == 5
    assert sc.action.alpha("s").mapping == {"u": "v", "v": "u"}
    assert verify_scenario(sc).ok


def test_prime_override_and_default():
    assert parse_scenario(SWAP, p=7).ring.p == 7
    text = SWAP.replace("p=5 ", "")
    assert parse_scenario(text).ring.p == 3
    assert parse_scenario(text, default_p=11).ring.p == 11


def test_unresolved_atom_position(registry):
    text = registry.text("FX-DAT").replace("e1 |-> e4", "e1 |-> e9")
    lines = text.splitlines()
    line = next(i for i, s in enumerate(lines, 1) if "e9" in s)
    with pytest.raises(UnresolvedReference) as info:
        parse_scenario(text)
    err = info.value
    assert (err.line, err.column) == (line, lines[line - 1].index("e9") + 1)
    assert err.ref == "e9"
    assert err.to_dict()["witness"]["name"] == "e9"


def test_unresolved_morphism(registry):
    text = registry.text("FX-DAT").replace("local g :", "local h :")
    with pytest.raises(UnresolvedReference, match="unknown morphism h"):
        parse_scenario(text)


def test_duplicate_stanza():
    with pytest.raises(ParseError) as info:
        parse_scenario("name a\nname b\n")
    assert (info.value.line, info.value.column) == (2, 1)


def test_bad_input():
    with pytest.raises(ParseError) as info:
        parse_scenario("name a$")
    assert info.value.column == 7
    with pytest.raises(ParseError, match="unknown stanza"):
        parse_scenario("bogus 1")
    with pytest.raises(ParseError, match="unterminated block"):
        parse_scenario("ring atoms=[u]; groupoid cyclic n=1; action { e = [u]")
    with pytest.raises(ParseError, match="not a bijection"):
        parse_scenario("ring atoms=[u, v]; groupoid cyclic n=2; action { s : [u |-> v, v |-> v] }")


def test_missing_tau(registry):
    text = registry.text("FX-DAT").replace("tau y = l", "")
    with pytest.raises(ParseError, match="no tau for y"):
        parse_scenario(text)


def test_tokens_keep_positions():
    tokens = tokenize("arrow l^-1 : y -> x")
    assert [t.text for t in tokens[:-1]] == ["arrow", "l^-1", ":", "y", "->", "x"]
    assert tokens[1].column == 7
    assert tokens[-1].kind == "eof"


def test_missing_stanzas():
    sc = parse_scenario("name bare")
    with pytest.raises(MissingStanza):
        sc.require_ring()
    with pytest.raises(MissingStanza):
        sc.theta()


def test_theta_of_datum(dat, registry):
    assert registry.load("FX-DAT").theta() == ext(dat)


def test_checks_are_collected(registry):
    assert registry.load("FX-DAT").checks == [
        "verify", "ext", "transport", "adjunction", "skew", "morita", "equivalence",
    ]
