import numpy as np
import pytest

from signpipe import datagen
from signpipe.labels import BLANK, CNN_CLASSES, LETTERS, RFC_CLASSES
from signpipe.rng import substream


def test_landmark_dataset_shape_and_labels():
    spec = datagen.LandmarkDatasetSpec(per_class=5, seed=1)
    frames = datagen.synth_landmarks(spec)
    assert len(frames) == 5 * len(RFC_CLASSES)
    labels = {f.label for f in frames}
    assert labels == set(RFC_CLASSES)
    X, y = datagen.frames_to_arrays(frames)
    assert X.shape == (140, 126)
    assert y.min() == 0 and y.max() == len(RFC_CLASSES) - 1


def test_landmark_clusters_tight_around_centroids():
    spec = datagen.LandmarkDatasetSpec(per_class=50, spread=0.05, seed=4)
    X, y = datagen.frames_to_arrays(datagen.synth_landmarks(spec))
    for k in (0, 7, 27):
        cluster = X[y == k]
        centroid = datagen.class_centroid(4, k)
        assert np.allclose(cluster.mean(axis=0), centroid, atol=0.05)
        spread = (cluster - centroid).std()
        assert abs(spread - 0.05) / 0.05 < 0.25


def test_landmark_determinism():
    spec = datagen.LandmarkDatasetSpec(per_class=3, seed=9)
    a, _ = datagen.frames_to_arrays(datagen.synth_landmarks(spec))
    b, _ = datagen.frames_to_arrays(datagen.synth_landmarks(spec))
    assert np.array_equal(a, b)
    c, _ = datagen.frames_to_arrays(
        datagen.synth_landmarks(datagen.LandmarkDatasetSpec(per_class=3, seed=10))
    )
    assert not np.array_equal(a, c)


def test_silhouettes_binary_and_blank():
    spec = datagen.SilhouetteDatasetSpec(per_class=3, seed=2)
    images, labels = datagen.synth_silhouettes(spec)
    assert images.shape == (3 * len(CNN_CLASSES), 32, 32)
    assert images.dtype == np.uint8
    assert set(np.unique(images)) <= {0, 255}
    for img, label in zip(images, labels):
        if label == BLANK:
            assert not img.any()
        else:
            frac = (img > 0).mean()
            assert 0.01 <= frac <= 0.60, (label, frac)


def test_silhouette_key_permutes_shapes():
    a = datagen.render_silhouette(0, 32, "asl")
    b = datagen.render_silhouette(0, 32, "isl")
    assert a.shape == b.shape == (32, 32)
    assert not np.array_equal(a, b)


def test_silhouette_jitter_varies_but_base_is_fixed():
    base1 = datagen.render_silhouette(3, 32, "asl")
    base2 = datagen.render_silhouette(3, 32, "asl")
    assert np.array_equal(base1, base2)
    r1 = datagen.render_silhouette(3, 32, "asl", jitter_rng=substream(0, "j", 0))
    r2 = datagen.render_silhouette(3, 32, "asl", jitter_rng=substream(0, "j", 1))
    assert not np.array_equal(r1, r2)


def test_atlas_contents():
    atlas = datagen.synth_atlas(size=64)
    assert set(atlas) == set(LETTERS) | {"SPACE"}
    assert all(img.shape == (64, 64) for img in atlas.values())
    assert not atlas["SPACE"].any()
    assert atlas["A"].any()
    assert not np.array_equal(atlas["A"], atlas["B"])


def test_phrase_corpus_properties():
    assert len(datagen.PHRASES) == 150
    words = {w for p in datagen.PHRASES for w in p.split()}
    assert len(words) >= 200  # corrector lexicon floor
    assert all(len(w) >= 3 for w in words)
    assert all(set(p) <= set(LETTERS) | {" "} for p in datagen.PHRASES)
    assert any("TOY BOOK" in p for p in datagen.PHRASES)
    assert "THANK YOU" in datagen.PHRASES


def test_sample_phrases(rng):
    out = datagen.sample_phrases(40, rng)
    assert len(out) == 40
    assert all(p in datagen.PHRASES for p in out)


def test_error_mix_validation():
    datagen.ErrorMix()  # defaults are a valid distribution
    with pytest.raises(ValueError):
        datagen.ErrorMix(p_substitution=0.9)
    with pytest.raises(ValueError):
        datagen.ErrorMix(p_substitution=-0.1, p_missing=0.5, p_extra=0.4, p_swap=0.2)


def test_corrupt_text_kinds(rng):
    text = "THE TOY BOOK"
    seen = set()
    for _ in range(300):
        corrupted, kind = datagen.corrupt_text(text, datagen.ErrorMix(), rng)
        seen.add(kind)
        assert corrupted != text
        if kind == "substitution":
            assert len(corrupted) == len(text)
        elif kind == "missing":
            assert len(corrupted) == len(text) - 1
        elif kind == "extra":
            assert len(corrupted) == len(text) + 1
        else:
            assert sorted(corrupted.split()) == sorted(text.split())
        # word boundaries survive character errors
        if kind != "missing":
            assert corrupted.count(" ") == text.count(" ")
    assert seen == set(datagen.ERROR_KINDS)


def test_corrupt_single_word_never_swaps(rng):
    for _ in range(200):
        _, kind = datagen.corrupt_text("HELLO", datagen.ErrorMix(), rng)
        assert kind != "swap"


def test_corrupt_mix_frequencies():
    mix = datagen.ErrorMix()
    rng = substream(0, "mixcheck")
    counts = dict.fromkeys(datagen.ERROR_KINDS, 0)
    n = 4000
    for _ in range(n):
        _, kind = datagen.corrupt_text("GOOD MORNING EVERYONE", mix, rng)
        counts[kind] += 1
    expected = dict(zip(datagen.ERROR_KINDS, (0.35, 0.25, 0.20, 0.20)))
    for kind, target in expected.items():
        assert abs(counts[kind] / n - target) < 0.03, (kind, counts[kind] / n)


def test_stream_shapes_and_content():
    spec = datagen.StreamSpec(text="AB C", hold=5, rest=4)
    lm, imgs = datagen.synth_stream(spec)
    T = len("AB C") * (5 + 4)
    assert lm.shape == (T, 126)
    assert imgs.shape == (T, 32, 32)
    # space and rest frames are black, letter holds show a glyph
    assert imgs[0].any()  # first 'A' hold frame
    assert not imgs[5].any()  # first rest frame after 'A'
    space_start = 2 * 9
    assert not imgs[space_start].any()


def test_stream_determinism_and_seed_split():
    spec = datagen.StreamSpec(text="HI", stream_seed=5)
    a_lm, a_img = datagen.synth_stream(spec)
    b_lm, b_img = datagen.synth_stream(spec)
    assert np.array_equal(a_lm, b_lm) and np.array_equal(a_img, b_img)
    c_lm, _ = datagen.synth_stream(datagen.StreamSpec(text="HI", stream_seed=6))
    assert not np.array_equal(a_lm, c_lm)


def test_stream_rejects_bad_text():
    with pytest.raises(ValueError):
        datagen.StreamSpec(text="hi!")
    with pytest.raises(ValueError):
        datagen.StreamSpec(text="")
