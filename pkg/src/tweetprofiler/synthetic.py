"""Deterministic synthetic corpora for desk-scale benchmarking.

Each author mixes three token sources per tweet: tokens signalling their
gender class, tokens signalling their variety class, and shared background
tokens drawn from a harmonically weighted pool (so background document
frequencies span a wide range and min-df pruning has something to prune).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Mapping

from .corpus import GENDERS, LANGUAGES, AuthorRecord, Corpus, TruthLabel
from .errors import ParameterError


@dataclass(frozen=True)
class ClassSignal:
    """Signal tokens for one class and the share of tokens drawn from them."""

    tokens: tuple[str, ...]
    rate: float


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for one synthetic corpus."""

    n_authors: int
    tweets_per_author: int
    gender_signals: Mapping[str, ClassSignal]
    variety_signals: Mapping[str, ClassSignal]
    shared_vocab_size: int = 1000
    tokens_per_tweet: int = 5
    seed: int = 0
    language: str = "en"


def default_synth_spec(
    n_authors: int = 200,
    tweets_per_author: int = 100,
    signal_rate: float = 0.3,
    n_varieties: int = 3,
    shared_vocab_size: int = 1000,
    tokens_per_tweet: int = 5,
    seed: int = 0,
    language: str = "en",
) -> SynthSpec:
    """The standard benchmark recipe: two genders, disjoint signal tokens."""
    genders = {
        gender: ClassSignal(
            tokens=tuple(f"sig{gender}{i}" for i in range(5)), rate=signal_rate
        )
        for gender in GENDERS
    }
    varieties = {
        f"v{j}": ClassSignal(
            tokens=tuple(f"sigv{j}x{i}" for i in range(5)), rate=signal_rate
        )
        for j in range(n_varieties)
    }
    return SynthSpec(
        n_authors=n_authors,
        tweets_per_author=tweets_per_author,
        gender_signals=genders,
        variety_signals=varieties,
        shared_vocab_size=shared_vocab_size,
        tokens_per_tweet=tokens_per_tweet,
        seed=seed,
        language=language,
    )


def _validate(spec: SynthSpec) -> None:
    if spec.n_authors < 1 or spec.tweets_per_author < 1 or spec.tokens_per_tweet < 1:
        raise ParameterError("author, tweet and token counts must be positive")
    if spec.shared_vocab_size < 1:
        raise ParameterError("shared_vocab_size must be positive")
    if spec.language not in LANGUAGES:
        raise ParameterError(f"unknown language {spec.language!r}")
    if not spec.gender_signals or not spec.variety_signals:
        raise ParameterError("gender and variety class maps must be non-empty")
    for gender in spec.gender_signals:
        if gender not in GENDERS:
            raise ParameterError(f"unknown gender class {gender!r}")
    for signal in itertools.chain(
        spec.gender_signals.values(), spec.variety_signals.values()
    ):
        if not signal.tokens:
            raise ParameterError("every class needs at least one signal token")
        if not 0.0 < signal.rate <= 1.0:
            raise ParameterError(f"signal rate {signal.rate} not in (0, 1]")


def _signal_counts(total: int, gender_rate: float, variety_rate: float) -> tuple[int, int]:
    """Tokens per tweet drawn from each signal pool.

    When the two rates overflow the tweet's token budget they split it
    proportionally and no background tokens remain.
    """
    n_gender = round(total * gender_rate)
    n_variety = round(total * variety_rate)
    if n_gender + n_variety > total:
        joint = gender_rate + variety_rate
        n_gender = int(total * gender_rate / joint)
        n_variety = total - n_gender
    return n_gender, n_variety


def generate_synthetic_corpus(spec: SynthSpec) -> Corpus:
    """Build an in-memory labeled corpus; identical for identical specs."""
    _validate(spec)
    rng = random.Random(spec.seed)

    genders = sorted(spec.gender_signals)
    varieties = sorted(spec.variety_signals)
    background = [f"w{j:04d}" for j in range(spec.shared_vocab_size)]
    cum_weights = list(
        itertools.accumulate(1.0 / (j + 1) for j in range(spec.shared_vocab_size))
    )

    width = max(4, len(str(spec.n_authors - 1)))
    authors = []
    labels = {}
    for i in range(spec.n_authors):
        gender = genders[i % len(genders)]
        variety = varieties[(i // len(genders)) % len(varieties)]
        g_signal = spec.gender_signals[gender]
        v_signal = spec.variety_signals[variety]
        n_gender, n_variety = _signal_counts(
            spec.tokens_per_tweet, g_signal.rate, v_signal.rate
        )
        n_background = spec.tokens_per_tweet - n_gender - n_variety

        tweets = []
        for _ in range(spec.tweets_per_author):
            tokens = rng.choices(g_signal.tokens, k=n_gender)
            tokens += rng.choices(v_signal.tokens, k=n_variety)
            if n_background:
                tokens += rng.choices(background, cum_weights=cum_weights, k=n_background)
            rng.shuffle(tokens)
            tweets.append(" ".join(tokens))

        author_id = f"author{i:0{width}d}"
        authors.append(
            AuthorRecord(author_id=author_id, language=spec.language, tweets=tuple(tweets))
        )
        labels[author_id] = TruthLabel(author_id=author_id, gender=gender, variety=variety)

    return Corpus(language=spec.language, authors=tuple(authors), labels=labels)
