import pytest

from tweetprofiler import default_synth_spec, generate_synthetic_corpus


@pytest.fixture(scope="session")
def benchmark_corpus():
    """The 200-author benchmark corpus, built once per test session."""
    return generate_synthetic_corpus(default_synth_spec(seed=0))


@pytest.fixture(scope="session")
def small_corpus():
    """A quick 60-author corpus for integration-level tests."""
    spec = default_synth_spec(
        n_authors=60, tweets_per_author=20, signal_rate=0.3, n_varieties=3,
        shared_vocab_size=300, seed=3,
    )
    return generate_synthetic_corpus(spec)
