"""Pretrained word-vector store with exact cosine nearest-neighbor queries.

Input is the textual word-vector format: an optional first header line
`<count> <dim>`, then one line per token with the token followed by `dim`
space-separated floats. Neighbor search is a brute-force scan of the whole
vocabulary (exact, no approximate index); scans can be avoided on repeat
runs with the neighbor cache file (`w \\t n1:cos1 \\t ... \\t nk:cosk`).
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .fileio import atomic_write, fmt


@dataclass
class NeighborSet:
    """Top-k cosine neighbors of a query token, best first.

    The query itself is excluded; length is min(k, vocab-1). Cosine ties
    are broken by lexicographic token order.
    """

    query: str
    neighbors: list  # of (token, cosine) pairs

    def tokens(self):
        return [token for token, _ in self.neighbors]


class EmbeddingTable:
    """Token -> dense vector map over a single (vocab, dim) matrix."""

    def __init__(self, tokens, matrix, dropped_zero_rows=0, duplicate_rows=0):
        self.tokens = list(tokens)
        self.matrix = np.asarray(matrix, dtype=np.float64)
        self.dimension = self.matrix.shape[1]
        self.index = {token: i for i, token in enumerate(self.tokens)}
        self.dropped_zero_rows = dropped_zero_rows
        self.duplicate_rows = duplicate_rows
        norms = np.linalg.norm(self.matrix, axis=1, keepdims=True)
        self.unit_matrix = self.matrix / norms
        # rank of each row's token in lexicographic order, for tie-breaking
        order = sorted(range(len(self.tokens)), key=lambda i: self.tokens[i])
        self.lex_rank = np.empty(len(self.tokens), dtype=np.int64)
        for rank, i in enumerate(order):
            self.lex_rank[i] = rank

    def __len__(self):
        return len(self.tokens)

    def __contains__(self, token):
        return token in self.index

    def vector(self, token):
        return self.matrix[self.index[token]]

    def neighbor_tokens(self, token, k):
        """Neighbor tokens only; raises KeyError for OOV queries."""
        if token not in self.index:
            raise KeyError(token)
        return k_nearest(self, token, k).tokens()


def load_embeddings(path):
    """Parse a textual word-vector file into an EmbeddingTable.

    Duplicate tokens keep their first occurrence; all-zero vectors are
    dropped. Both events are counted on the returned table. A row whose
    float count disagrees with the established dimension raises ValueError
    naming the line number.
    """
    tokens = []
    rows = []
    seen = set()
    duplicates = 0
    zeros = 0
    dimension = None
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            parts = line.rstrip("\n").split(" ")
            parts = [p for p in parts if p]
            if not parts:
                continue
            if line_no == 1 and len(parts) == 2:
                try:
                    int(parts[0]), int(parts[1])
                    continue  # header line
                except ValueError:
                    pass
            token, values = parts[0], parts[1:]
            if dimension is None:
                if not values:
                    raise ValueError(f"{path}: line {line_no}: no vector values")
                dimension = len(values)
            if len(values) != dimension:
                raise ValueError(
                    f"{path}: line {line_no}: expected {dimension} values, "
                    f"got {len(values)}"
                )
            if token in seen:
                duplicates += 1
                continue
            vector = np.array([float(v) for v in values])
            if not vector.any():
                zeros += 1
                continue
            seen.add(token)
            tokens.append(token)
            rows.append(vector)
    if not rows:
        raise ValueError(f"{path}: empty embeddings file")
    return EmbeddingTable(
        tokens,
        np.vstack(rows),
        dropped_zero_rows=zeros,
        duplicate_rows=duplicates,
    )


def cosine(a, b):
    """cos(a, b) = dot(a,b) / (|a||b|); raises on a zero-norm input."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    norm_a = np.linalg.norm(a)
    norm_b = np.linalg.norm(b)
    if norm_a == 0.0 or norm_b == 0.0:
        raise ValueError("zero vector")
    return float(np.dot(a, b) / (norm_a * norm_b))


# extra candidates kept beyond k so boundary cosine ties can be resolved
# lexicographically without a full sort in the common case
_TIE_BUFFER = 64


def k_nearest(table, token, k):
    """Exact top-k cosine neighbors of `token` over the whole vocabulary.

    The query token is excluded (and only it); ties are broken by
    lexicographic token order, so results are fully deterministic.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if token not in table.index:
        raise KeyError(f"out-of-vocabulary: {token!r}")
    query_idx = table.index[token]
    sims = np.asarray(
        kernels.cosine_scores(table.unit_matrix, table.unit_matrix[query_idx])
    )
    sims = sims.copy()
    sims[query_idx] = -np.inf
    vocab = len(table)
    take = min(k, vocab - 1)
    if take == 0:
        return NeighborSet(query=token, neighbors=[])
    m = min(vocab, take + _TIE_BUFFER)
    if m < vocab:
        candidates = np.argpartition(-sims, m - 1)[:m]
        order = np.lexsort((table.lex_rank[candidates], -sims[candidates]))
        ranked = candidates[order]
        # if the worst kept candidate ties the k-th best, equal-cosine rows
        # may exist outside the partition; fall back to a full sort
        if sims[ranked[-1]] >= sims[ranked[take - 1]]:
            ranked = np.lexsort((table.lex_rank, -sims))
    else:
        ranked = np.lexsort((table.lex_rank, -sims))
    top = ranked[:take]
    return NeighborSet(
        query=token,
        neighbors=[(table.tokens[i], float(sims[i])) for i in top],
    )


class NeighborCache:
    """Precomputed neighbor lists, read back from the cache file.

    built_k records the k the cache was produced with; requests up to
    built_k are served from the cache (a shorter stored list means the
    source vocabulary was small and the list is already complete).
    """

    def __init__(self, entries, built_k):
        self.entries = dict(entries)
        self.built_k = built_k

    def __contains__(self, token):
        return token in self.entries

    def neighbor_tokens(self, token, k):
        if k > self.built_k:
            raise ValueError(
                f"neighbor cache was built with k={self.built_k}, "
                f"cannot serve k={k}; rebuild the cache"
            )
        if token not in self.entries:
            raise KeyError(token)
        return [tok for tok, _ in self.entries[token][:k]]


def save_neighbor_cache(path, neighbor_sets, k):
    with atomic_write(path) as handle:
        handle.write(f"#k={k}\n")
        for ns in neighbor_sets:
            cells = [ns.query]
            cells.extend(f"{tok}:{fmt(cos)}" for tok, cos in ns.neighbors)
            handle.write("\t".join(cells) + "\n")


def load_neighbor_cache(path):
    entries = {}
    built_k = None
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#k="):
                built_k = int(line[3:])
                continue
            cells = line.split("\t")
            neighbors = []
            for cell in cells[1:]:
                tok, _, cos = cell.rpartition(":")
                neighbors.append((tok, float(cos)))
            entries[cells[0]] = neighbors
    if built_k is None:
        raise ValueError(f"{path}: missing #k= header")
    return NeighborCache(entries, built_k)
