"""Unigram/bigram counting over a tokenized corpus and Laplace-smoothed
pair probabilities.

Corpus input is UTF-8 plain text, one sentence per line, tokens separated
by single spaces. Tokens are lowercased at ingestion. "Word pairs" are
adjacent within-sentence token bigrams; pairs never cross sentence
boundaries, and a sentence with fewer than two tokens contributes unigrams
only.

Snapshot format (tab-separated):
  bigram file:   header lines #N=<int>, #V=<int>, #L=<int>,
                 then one `w1 \\t w2 \\t count` line per pair
  unigram file:  one `w \\t count` line per token
"""

from collections import Counter
from dataclasses import dataclass, field

from .fileio import atomic_write


@dataclass
class BigramStatistics:
    """Count statistics backing every probability estimate.

    total_pairs_N is the number of adjacent word-pair tokens and always
    equals the sum of bigram_counts values; laplace_L is the smoothing
    denominator mass, V**2 by default so that the smoothed pair
    distribution sums to exactly 1 over all V**2 ordered pairs.
    """

    unigram_counts: dict = field(default_factory=dict)
    bigram_counts: dict = field(default_factory=dict)
    total_pairs_N: int = 0
    vocab_size_V: int = 0
    laplace_L: int = 1


def read_corpus(path):
    """Yield one lowercased token list per non-empty corpus line."""
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            tokens = line.strip().split()
            if tokens:
                yield [t.lower() for t in tokens]


def build_counts(corpus_stream, min_count=1):
    """Count adjacent token pairs over an iterable of token sequences.

    min_count drops unigram and bigram entries seen fewer times; N, V and
    L are recomputed from the surviving entries so the snapshot invariants
    hold regardless of the threshold. Raises ValueError on an empty corpus.
    """
    unigrams = Counter()
    bigrams = Counter()
    for sentence in corpus_stream:
        tokens = [t.lower() for t in sentence]
        unigrams.update(tokens)
        for left, right in zip(tokens, tokens[1:]):
            bigrams[(left, right)] += 1
    if not unigrams:
        raise ValueError("empty corpus")
    if min_count > 1:
        unigrams = Counter({w: c for w, c in unigrams.items() if c >= min_count})
        bigrams = Counter(
            {pair: c for pair, c in bigrams.items() if c >= min_count}
        )
        if not unigrams:
            raise ValueError("empty corpus after min-count filtering")
    total = sum(bigrams.values())
    vocab = len(unigrams)
    return BigramStatistics(
        unigram_counts=dict(unigrams),
        bigram_counts=dict(bigrams),
        total_pairs_N=total,
        vocab_size_V=vocab,
        laplace_L=vocab * vocab,
    )


def merge_counts(a, b):
    """Combine two count snapshots (commutative, associative).

    Shards to be merged should be built without a min-count threshold;
    thresholding pre-merge and post-merge are not equivalent.
    """
    unigrams = Counter(a.unigram_counts)
    unigrams.update(b.unigram_counts)
    bigrams = Counter(a.bigram_counts)
    bigrams.update(b.bigram_counts)
    vocab = len(unigrams)
    return BigramStatistics(
        unigram_counts=dict(unigrams),
        bigram_counts=dict(bigrams),
        total_pairs_N=sum(bigrams.values()),
        vocab_size_V=vocab,
        laplace_L=vocab * vocab,
    )


def pair_probability(stats, w1, w2):
    """Laplace-smoothed probability (C(w1,w2)+1)/(N+L) of an ordered pair.

    Unseen pairs (including out-of-vocabulary tokens) fall through to
    count 0 and yield the smoothing floor 1/(N+L).
    """
    count = stats.bigram_counts.get((w1, w2), 0)
    return (count + 1) / (stats.total_pairs_N + stats.laplace_L)


def save_counts(stats, bigrams_path, unigrams_path):
    """Write the snapshot; bigrams and unigrams sorted for byte stability."""
    with atomic_write(bigrams_path) as handle:
        handle.write(f"#N={stats.total_pairs_N}\n")
        handle.write(f"#V={stats.vocab_size_V}\n")
        handle.write(f"#L={stats.laplace_L}\n")
        for (w1, w2), count in sorted(stats.bigram_counts.items()):
            handle.write(f"{w1}\t{w2}\t{count}\n")
    with atomic_write(unigrams_path) as handle:
        for token, count in sorted(stats.unigram_counts.items()):
            handle.write(f"{token}\t{count}\n")


def load_counts(bigrams_path, unigrams_path):
    """Load a snapshot and verify its header against the stored counts."""
    header = {}
    bigrams = {}
    with open(bigrams_path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                header[key] = int(value)
                continue
            w1, w2, count = line.split("\t")
            bigrams[(w1, w2)] = int(count)
    unigrams = {}
    with open(unigrams_path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            token, count = line.split("\t")
            unigrams[token] = int(count)
    for key in ("N", "V", "L"):
        if key not in header:
            raise ValueError(f"{bigrams_path}: missing #{key} header")
    if header["N"] != sum(bigrams.values()):
        raise ValueError(
            f"{bigrams_path}: header N={header['N']} does not match the "
            f"stored pair counts ({sum(bigrams.values())})"
        )
    if header["V"] != len(unigrams):
        raise ValueError(
            f"{bigrams_path}: header V={header['V']} does not match the "
            f"unigram file ({len(unigrams)} entries)"
        )
    return BigramStatistics(
        unigram_counts=unigrams,
        bigram_counts=bigrams,
        total_pairs_N=header["N"],
        vocab_size_V=header["V"],
        laplace_L=header["L"],
    )
