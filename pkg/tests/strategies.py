"""Hypothesis strategies for split rings and datums."""

from hypothesis import strategies as st
from plugins.datum.datum import Datum, enumerate_group_actions
from plugins.groupoid.groupoid import Groupoid, Transversal
from plugins.partial_action.action import partial_bijections
from plugins.split_ring.ring import PartialRingIso, RingElement, SplitRing


@st.composite
def ring_elements(draw, ring: SplitRing) -> RingElement:
    coeffs = draw(st.lists(st.integers(0, ring.p - 1), min_size=ring.n, max_size=ring.n))
    return ring.from_vector(coeffs)


@st.composite
def sub_ideals(draw, ring: SplitRing):
    return ring.ideal(draw(st.sets(st.sampled_from(ring.atoms))))


@st.composite
def datums(draw, G: Groupoid, ring: SplitRing, tau: Transversal) -> Datum:
    """Links are partial bijections out of I_x, so every drawn datum is valid."""
    x = tau.base
    I_x = draw(sub_ideals(ring))
    ideals = {x: I_x}
    links = {x: PartialRingIso.identity(I_x)}
    for y in G.objects:
        if y == x:
            continue
        ideals[y] = draw(sub_ideals(ring))
        options = list(partial_bijections(list(I_x), list(ideals[y]), False))
        links[y] = PartialRingIso.of(draw(st.sampled_from(options)))
    local = draw(st.sampled_from(list(enumerate_group_actions(G.isotropy(x), ring, I_x))))
    return Datum(G, ring, tau, ideals, links, local)
