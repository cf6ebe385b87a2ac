import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from swdknn.exceptions import EventOutOfRange, OverlappingEvents
from swdknn.signal_io import Annotation
from swdknn.synth import SwdEvent, SynthSpec, generate, make_corpus, swd_template
from swdknn.tls_model import fit_mle


def mad(x):
    return float(np.median(np.abs(x - np.median(x))))


def test_background_only():
    rec, anns = generate(SynthSpec(10.0))
    assert rec.n_samples == 2560 and rec.sample_rate_hz == 256
    assert anns == []


def test_single_event():
    rec, anns = generate(SynthSpec(10.0, (SwdEvent(2.0, 3.0, 3.0, 300.0),), seed=4))
    assert anns == [Annotation("Cz", 2.0, 3.0, 1)]
    x = rec.channel("Cz")
    inside = x[512:1280]
    outside = np.concatenate([x[:512], x[1280:]])
    assert np.max(np.abs(inside)) >= 5 * mad(outside)


def test_template_shape():
    assert swd_template(0.05, 300.0) == pytest.approx(300.0)
    assert swd_template(0.55, 300.0) == pytest.approx(-300.0)
    assert swd_template(0.0, 300.0) == pytest.approx(0.0)
    assert swd_template(0.1, 300.0) == pytest.approx(0.0, abs=1e-9)


def test_deterministic_and_seed_sensitive():
    spec = SynthSpec(5.0, (SwdEvent(1.0, 2.0),), channels=("Cz", "Fz"), seed=11)
    a, _ = generate(spec)
    b, _ = generate(spec)
    assert a.data.tobytes() == b.data.tobytes()
    c, _ = generate(SynthSpec(5.0, (SwdEvent(1.0, 2.0),), channels=("Cz", "Fz"), seed=12))
    assert a.data.tobytes() != c.data.tobytes()
    assert not np.array_equal(a.channel("Cz"), a.channel("Fz"))


def test_errors():
    with pytest.raises(OverlappingEvents):
        SynthSpec(10.0, (SwdEvent(1.0, 3.0), SwdEvent(3.5, 1.0)))
    with pytest.raises(EventOutOfRange):
        SynthSpec(10.0, (SwdEvent(8.0, 3.0),))
    with pytest.raises(EventOutOfRange):
        SynthSpec(10.0, (SwdEvent(1.0, 3.0, cycle_hz=6.0),))
    with pytest.raises(EventOutOfRange):
        SynthSpec(10.0, (SwdEvent(-1.0, 3.0),))
    # touching events are allowed
    SynthSpec(10.0, (SwdEvent(1.0, 2.0), SwdEvent(3.0, 2.0)))


@settings(max_examples=30, deadline=None)
@given(onsets=st.lists(st.floats(0, 18), min_size=0, max_size=4, unique=True), seed=st.integers(0, 10**6))
def test_annotations_match_events(onsets, seed):
    onsets = sorted(onsets)
    events = []
    for t in onsets:
        if not events or t >= events[-1].end_s + 0.01:
            events.append(SwdEvent(t, min(1.0, 20.0 - t)))
    _, anns = generate(SynthSpec(20.0, tuple(events), seed=seed, channels=("A", "B")))
    expected = [(e.onset_s, e.duration_s) for e in events]
    assert sorted((a.onset_s, a.duration_s) for a in anns if a.channel == "A") == expected
    assert all(a.label == 1 for a in anns) and len(anns) == 2 * len(events)


def test_separability():
    hits = 0
    trials = 40
    for seed in range(trials):
        rec, _ = generate(SynthSpec(8.0, (SwdEvent(4.0, 4.0),), seed=seed))
        x = rec.channel("Cz")
        outside = fit_mle(x[:1024]).params.sigma
        inside = fit_mle(x[1024:]).params.sigma
        hits += inside >= 3 * outside
    assert hits >= 0.95 * trials


def test_corpus_layout():
    rec, anns = make_corpus(3, 2, seed=5, epoch_s=10.0)
    assert rec.channels == ("S000", "S001", "S002", "S003", "S004")
    assert rec.n_samples == 2560
    assert sorted({a.channel for a in anns}) == ["S000", "S001", "S002"]
    for a in anns:
        assert a.duration_s >= 0.6 * 10.0 and a.end_s <= 10.0
    again, _ = make_corpus(3, 2, seed=5, epoch_s=10.0)
    assert again.data.tobytes() == rec.data.tobytes()
