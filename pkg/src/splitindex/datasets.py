"""Dataset ingestion, query generation, and the brute-force reference scan.

``oracle_query`` is the ground truth the index is tested against; it is a
deliberately naive linear scan and shares no code with the index modules.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass

from .core import Dictionary
from .errors import DataError

log = logging.getLogger(__name__)

DNA_ALPHABET = b"ACGNT"  # the five symbols k-mer windows may contain


@dataclass(frozen=True)
class QuerySet:
    """Ordered query patterns plus a note on where they came from."""

    patterns: tuple[bytes, ...]
    provenance: str
    malformed_skipped: int = 0

    def __len__(self) -> int:
        return len(self.patterns)


def load_wordlist(path) -> Dictionary:
    """Newline-separated words -> deduplicated Dictionary.

    Blank lines are skipped and CRLF endings are normalized.
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    words = []
    for line in raw.split(b"\n"):
        line = line.rstrip(b"\r")
        if line:
            words.append(line)
    return Dictionary(words)


def load_misspellings(path) -> QuerySet:
    """Lines of ``wrong->right``; the left-hand sides become the patterns.

    Splitting happens at the first ``->``.  Lines without one (or with an
    empty left side) are skipped and counted in ``malformed_skipped``.
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    patterns = []
    skipped = 0
    for line in raw.split(b"\n"):
        line = line.rstrip(b"\r")
        if not line:
            continue
        wrong, sep, _ = line.partition(b"->")
        if not sep or not wrong:
            skipped += 1
            continue
        patterns.append(wrong)
    if skipped:
        log.warning("%s: skipped %d lines without 'wrong->right' form", path, skipped)
    return QuerySet(tuple(patterns), provenance=f"misspellings:{path}", malformed_skipped=skipped)


def extract_kmers(fasta_path, length: int = 20) -> Dictionary:
    """Distinct fixed-length windows from the sequences of a FASTA file.

    Sequence lines of each record are concatenated and uppercased; windows
    slide one position at a time and never span records.  Windows containing
    a byte outside A/C/G/T/N are skipped.
    """
    if length < 1:
        raise DataError(f"window length must be >= 1, got {length}")
    with open(fasta_path, "rb") as fh:
        raw = fh.read()
    records: list[bytes] = []
    current: list[bytes] = []
    for line in raw.split(b"\n"):
        line = line.rstrip(b"\r")
        if line.startswith(b">"):
            if current:
                records.append(b"".join(current))
                current = []
        elif line:
            current.append(line)
    if current:
        records.append(b"".join(current))

    valid = frozenset(DNA_ALPHABET)
    kmers: dict[bytes, None] = {}
    for seq in records:
        seq = seq.upper()
        last_bad = -1
        for i, b in enumerate(seq):
            if b not in valid:
                last_bad = i
            if i >= length - 1 and last_bad <= i - length:
                kmers[seq[i - length + 1 : i + 1]] = None
    if not kmers:
        log.warning("%s: no usable sequence data", fasta_path)
        return Dictionary(())
    return Dictionary(kmers)


def gen_noisy_queries(
    dictionary: Dictionary,
    count: int,
    seed: int,
    max_errors: int = 3,
    per_error_probability: float = 0.5,
    alphabet: bytes | None = None,
) -> QuerySet:
    """Patterns made by substituting random positions of sampled words.

    Each pattern starts as a uniformly chosen word; then, up to
    ``max_errors`` times, with the given probability one uniformly random
    position is overwritten with a uniformly random alphabet symbol (which
    may equal the original, so the realized error count can be lower).
    Pattern length always equals the source word's length.  Uses a seeded
    Mersenne Twister, so a fixed seed reproduces the set byte for byte.
    """
    if dictionary.word_count == 0:
        raise DataError("cannot generate queries from an empty dictionary")
    alpha = alphabet if alphabet is not None else dictionary.alphabet_bytes()
    rng = random.Random(seed)
    words = dictionary.words
    nwords = len(words)
    nalpha = len(alpha)
    patterns = []
    for _ in range(count):
        w = words[rng.randrange(nwords)]
        for _ in range(max_errors):
            if rng.random() < per_error_probability:
                pos = rng.randrange(len(w))
                j = rng.randrange(nalpha)
                w = w[:pos] + alpha[j : j + 1] + w[pos + 1 :]
        patterns.append(w)
    prov = f"generated(seed={seed}, max_errors={max_errors}, per_error_probability={per_error_probability})"
    return QuerySet(tuple(patterns), provenance=prov)


def oracle_query(dictionary: Dictionary, pattern: bytes, k: int) -> list[bytes]:
    """Ground-truth matches by linear scan: same length, at most k mismatches."""
    n = len(pattern)
    out = []
    for w in dictionary.words:
        if len(w) != n:
            continue
        mismatches = 0
        for x, y in zip(w, pattern):
            if x != y:
                mismatches += 1
                if mismatches > k:
                    break
        else:
            out.append(w)
    return sorted(out)
