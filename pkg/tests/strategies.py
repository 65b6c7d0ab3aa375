from hypothesis import assume, strategies as st

from sharpldp.potentials import Potential
from sharpldp.ratefn import mean_interval
from sharpldp.sft import MarkovModel, admissible_words

MODELS = [MarkovModel.full_shift(2), MarkovModel.golden_mean(), MarkovModel.full_shift(3),
          MarkovModel(((0, 1, 1), (1, 0, 1), (1, 1, 0)))]
values = st.floats(-2, 2, allow_nan=False, allow_infinity=False)


@st.composite
def potentials(draw, model=None, memory=None, elements=values):
    model = draw(st.sampled_from(MODELS)) if model is None else model
    m = draw(st.integers(1, 3)) if memory is None else memory
    words = admissible_words(model, m)
    vals = draw(st.lists(elements, min_size=len(words), max_size=len(words)))
    return Potential(model, m, dict(zip(words, vals)))


@st.composite
def pairs(draw, nonconstant=True):
    model = draw(st.sampled_from(MODELS))
    phi = draw(potentials(model))
    psi = draw(potentials(model))
    if nonconstant and max(psi.values.values()) - min(psi.values.values()) < 0.1:
        psi = Potential(model, psi.memory, {w: v + (0.5 if i == 0 else 0.0)
                                            for i, (w, v) in enumerate(psi.values.items())})
    if nonconstant:
        # distinct values can still be cohomologous to a constant
        iv = mean_interval(model, psi)
        assume(iv.hi - iv.lo >= 0.01)
    return model, phi, psi
