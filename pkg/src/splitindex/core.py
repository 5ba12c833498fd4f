"""Split index for dictionary matching under a small mismatch budget.

Every indexed word is cut into ``k + 1`` contiguous pieces.  A query with at
most ``k`` mismatching positions must agree with a stored word on at least
one piece (pigeonhole), so each piece serves as a hash-table key whose list
holds the rest of the word.  Verification then runs a plain Hamming check on
the few surviving candidates.

List layout (one contiguous blob per key):

* ``k == 1`` -- ``[marker u16 LE][entry ...][0x00]`` where an entry is
  ``[length u8 >= 1][payload]``.  Entries whose key was the word's prefix
  come first (their payload is the missing suffix); the marker is the
  1-based entry index where missing prefixes begin, 0 if there are none.
* ``k > 1`` -- ``[entry ...][0x00]`` where an entry is
  ``[key position u8 in 1..k+1][length u8 >= 1][payload]`` and the payload
  is the concatenation of the word's other k pieces.  Piece boundaries are
  recomputed from the total length at query time.

Payloads may be substitution-coded (see ``qgrams``); keys never are.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import BuildError, ConfigError, CorruptListError, WordTooShortError
from .hashing import HASH_FUNCTIONS, ChainedHashTable, HashConfig
from .qgrams import SubstitutionList

PAYLOAD_LIMIT = 255  # entry lengths are single bytes; 0 terminates a list
LIST_ENTRY_LIMIT = 0xFFFF  # the k=1 region marker is a 16-bit entry index


def piece_lengths(length: int, k: int) -> tuple[int, ...]:
    """Piece lengths for a word of ``length`` bytes split into k+1 pieces.

    Pieces 1..k share a common length, round-half-up of ``length / (k+1)``;
    the last piece takes the remainder.  When that rounding would leave the
    last piece empty, the common length drops to ``(length - 1) // k`` so
    every piece stays non-empty (a zero length byte would read as the list
    terminator).
    """
    if k < 1:
        raise ConfigError(f"mismatch budget must be >= 1, got {k}")
    if length < k + 1:
        raise WordTooShortError(f"length {length} cannot make {k + 1} non-empty pieces")
    d = k + 1
    base = (2 * length + d) // (2 * d)
    if k * base >= length:
        base = (length - 1) // k
    return (base,) * k + (length - k * base,)


def split_word(word: bytes, k: int) -> tuple[bytes, ...]:
    """Split ``word`` into its k+1 pieces; words shorter than k+1 are rejected."""
    lens = piece_lengths(len(word), k)
    pieces = []
    start = 0
    for n in lens:
        pieces.append(word[start : start + n])
        start += n
    return tuple(pieces)


def hamming_at_most(a: bytes, b: bytes, limit: int) -> bool:
    """True iff equal-length ``a`` and ``b`` differ in at most ``limit`` positions.

    Iterates with an early exit; unequal lengths are a contract violation
    (callers filter by length first).
    """
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    if a == b:
        return limit >= 0
    m = 0
    for x, y in zip(a, b):
        if x != y:
            m += 1
            if m > limit:
                return False
    return True


def reconstruct(key: bytes, missing_blob: bytes, key_position: int, k: int, total_length: int) -> bytes:
    """Rebuild a word from a list key and its stored complement (k > 1 layout).

    ``missing_blob`` is the concatenation of the word's pieces other than the
    key; the key sits at 1-based piece ``key_position``.  Any disagreement
    with the piece arithmetic for ``total_length`` signals a corrupt list.
    """
    if k <= 1:
        raise ConfigError(f"positioned entries exist only for k > 1, got k={k}")
    if not 1 <= key_position <= k + 1:
        raise CorruptListError(f"key position {key_position} outside 1..{k + 1}")
    if total_length != len(key) + len(missing_blob):
        raise CorruptListError(
            f"total length {total_length} != key {len(key)} + blob {len(missing_blob)}"
        )
    try:
        lens = piece_lengths(total_length, k)
    except WordTooShortError as exc:
        raise CorruptListError(str(exc)) from None
    if lens[key_position - 1] != len(key):
        raise CorruptListError(
            f"key length {len(key)} does not fit piece {key_position} of a length-{total_length} word"
        )
    cut = sum(lens[: key_position - 1])
    return missing_blob[:cut] + key + missing_blob[cut:]


class Dictionary:
    """Deduplicated, ordered collection of byte-string words plus stats."""

    __slots__ = ("words", "total_bytes", "alphabet")

    def __init__(self, words: Iterable[bytes]):
        uniq = dict.fromkeys(words)
        for w in uniq:
            if not isinstance(w, bytes):
                raise TypeError(f"words must be bytes, got {type(w).__name__}")
            if not w:
                raise ValueError("empty words are not allowed")
        self.words: tuple[bytes, ...] = tuple(uniq)
        self.total_bytes: int = sum(len(w) for w in self.words)
        self.alphabet: frozenset[int] = frozenset(b"".join(self.words))

    @property
    def word_count(self) -> int:
        return len(self.words)

    @property
    def alphabet_size(self) -> int:
        return len(self.alphabet)

    def alphabet_bytes(self) -> bytes:
        """The distinct symbols, ascending."""
        return bytes(sorted(self.alphabet))

    def stats(self) -> "DictionaryStats":
        return DictionaryStats(self.total_bytes, self.word_count, self.alphabet_size)

    def __len__(self) -> int:
        return len(self.words)


@dataclass(frozen=True)
class DictionaryStats:
    total_bytes: int
    word_count: int
    alphabet_size: int


@dataclass(frozen=True)
class ListStats:
    list_count: int
    entry_count: int
    mean_entries: float
    max_entries: int
    payload_bytes: int


class SplitIndex:
    """Immutable index over a dictionary; safe for concurrent read-only queries."""

    __slots__ = (
        "k",
        "table",
        "lists",
        "side_table",
        "subs",
        "source_stats",
        "_decode",
        "_plen_cache",
        "_list_stats",
        "_buckets",
        "_mask",
        "_hash",
    )

    def __init__(
        self,
        k: int,
        table: ChainedHashTable,
        lists: list[bytes],
        side_table: dict[int, tuple[bytes, ...]],
        subs: SubstitutionList | None,
        source_stats: DictionaryStats,
    ):
        self.k = k
        self.table = table
        self.lists = lists
        self.side_table = side_table
        self.subs = subs
        self.source_stats = source_stats
        self._decode = subs.decode if subs is not None and len(subs) else None
        self._plen_cache: dict[int, tuple[int, ...]] = {}
        self._list_stats: ListStats | None = None
        # Frozen-table internals, snapshotted for the query path.
        self._buckets = table.buckets
        self._mask = table.bucket_count - 1
        self._hash = HASH_FUNCTIONS[table.config.function_id]

    # -- queries ---------------------------------------------------------

    def query(self, pattern: bytes) -> list[bytes]:
        """All stored words of the pattern's length within k mismatches, sorted."""
        n = len(pattern)
        if n == 0:
            raise ValueError("pattern must be non-empty")
        if n <= self.k:
            # Same length and Hamming <= length <= k: everything matches.
            return list(self.side_table.get(n, ()))
        if self.k == 1:
            return self._query_one(pattern)
        return self._query_many(pattern)

    def _plens(self, n: int) -> tuple[int, ...]:
        lens = self._plen_cache.get(n)
        if lens is None:
            lens = piece_lengths(n, self.k)
            self._plen_cache[n] = lens
        return lens

    def _lookup(self, key: bytes) -> int:
        # Bucket probe, same layout walk as ChainedHashTable.lookup_list but
        # without the call layering; -1 means absent.  Hot path.
        blob = self._buckets[self._hash(key) & self._mask]
        kl = len(key)
        o = 0
        bn = len(blob)
        while o < bn:
            el = blob[o]
            if el == kl and blob[o + 1 : o + 1 + kl] == key:
                p = o + 1 + kl
                return int.from_bytes(blob[p : p + 4], "little")
            o += el + 5
        return -1

    def _query_one(self, pattern: bytes) -> list[bytes]:
        # Mismatch-1 verification splits the wanted piece in half: a
        # candidate differing somewhere in each half has two mismatches, so
        # two C-level prefix checks reject the common case; the surviving
        # half is checked byte-wise through one integer xor.
        n = len(pattern)
        b = self._plens(n)[0]
        head = pattern[:b]
        tail = pattern[b:]
        lists = self.lists
        decode = self._decode
        ifb = int.from_bytes
        out = set()

        ref = self._lookup(head)
        if ref >= 0:
            # Key matched the pattern's prefix: only missing suffixes apply.
            blob = lists[ref]
            marker = blob[0] | blob[1] << 8
            need = n - b
            o = 2
            remaining = marker - 1 if marker else LIST_ENTRY_LIMIT + 1
            if decode is not None:
                # Stored lengths are coded, but decoding never shrinks, so
                # entries longer than the wanted piece cannot decode to it.
                while remaining:
                    ln = blob[o]
                    if ln == 0 or ln > need:
                        break
                    e = decode(blob[o + 1 : o + 1 + ln])
                    if len(e) == need and hamming_at_most(e, tail, 1):
                        out.add(head + e)
                    o += ln + 1
                    remaining -= 1
            else:
                while remaining:  # entries are shortest-first: skip, then exit
                    ln = blob[o]
                    if ln >= need or ln == 0:
                        break
                    o += ln + 1
                    remaining -= 1
                if remaining and blob[o] == need:
                    half = need >> 1
                    left = tail[:half]
                    right = tail[half:]
                    lint = ifb(left, "little")
                    rint = ifb(right, "little")
                    sw = blob.startswith
                    while remaining and blob[o] == need:
                        p = o + 1
                        mid = p + half
                        if sw(left, p):
                            if sw(right, mid):
                                out.add(pattern)
                            else:
                                x = ifb(blob[mid : p + need], "little") ^ rint
                                one = False
                                while x:
                                    if x & 255:
                                        if one:
                                            break
                                        one = True
                                    x >>= 8
                                else:
                                    out.add(head + blob[p : p + need])
                        elif sw(right, mid):
                            x = ifb(blob[p:mid], "little") ^ lint
                            one = False
                            while x:
                                if x & 255:
                                    if one:
                                        break
                                    one = True
                                x >>= 8
                            else:
                                out.add(head + blob[p : p + need])
                        o += need + 1
                        remaining -= 1

        ref = self._lookup(tail)
        if ref >= 0:
            # Key matched the pattern's suffix: only missing prefixes apply.
            blob = lists[ref]
            marker = blob[0] | blob[1] << 8
            if marker:
                o = 2
                for _ in range(marker - 1):  # hop over the suffix region
                    o += blob[o] + 1
                need = b
                if decode is not None:
                    while True:
                        ln = blob[o]
                        if ln == 0 or ln > need:
                            break
                        e = decode(blob[o + 1 : o + 1 + ln])
                        if len(e) == need and hamming_at_most(e, head, 1):
                            out.add(e + tail)
                        o += ln + 1
                else:
                    while True:  # entries are shortest-first: skip, then exit
                        ln = blob[o]
                        if ln >= need or ln == 0:
                            break
                        o += ln + 1
                    if blob[o] == need:
                        half = need >> 1
                        left = head[:half]
                        right = head[half:]
                        lint = ifb(left, "little")
                        rint = ifb(right, "little")
                        sw = blob.startswith
                        while blob[o] == need:
                            p = o + 1
                            mid = p + half
                            if sw(left, p):
                                if sw(right, mid):
                                    out.add(pattern)
                                else:
                                    x = ifb(blob[mid : p + need], "little") ^ rint
                                    one = False
                                    while x:
                                        if x & 255:
                                            if one:
                                                break
                                            one = True
                                        x >>= 8
                                    else:
                                        out.add(blob[p : p + need] + tail)
                            elif sw(right, mid):
                                x = ifb(blob[p:mid], "little") ^ lint
                                one = False
                                while x:
                                    if x & 255:
                                        if one:
                                            break
                                        one = True
                                    x >>= 8
                                else:
                                    out.add(blob[p : p + need] + tail)
                            o += need + 1
        return sorted(out)

    def _query_many(self, pattern: bytes) -> list[bytes]:
        n = len(pattern)
        k = self.k
        lens = self._plens(n)
        lists = self.lists
        lookup = self.table.lookup_list
        decode = self._decode
        out = set()
        start = 0
        for i, plen in enumerate(lens):
            end = start + plen
            piece = pattern[start:end]
            ref = lookup(piece)
            if ref is not None:
                rest = pattern[:start] + pattern[end:]
                need = n - plen
                pos = i + 1
                blob = lists[ref]
                o = 0
                while True:  # entries are shortest-first; stop once too long
                    p = blob[o]
                    if p == 0:
                        break
                    ln = blob[o + 1]
                    if ln > need:
                        break
                    if p == pos:
                        if decode is None:
                            if ln == need:
                                e = blob[o + 2 : o + 2 + ln]
                                if e == rest or hamming_at_most(e, rest, k):
                                    out.add(e[:start] + piece + e[start:])
                        else:
                            e = decode(blob[o + 2 : o + 2 + ln])
                            if len(e) == need and hamming_at_most(e, rest, k):
                                out.add(e[:start] + piece + e[start:])
                    o += ln + 2
            start = end
        return sorted(out)

    def query_counting(self, pattern: bytes) -> tuple[list[bytes], int, int]:
        """Like ``query`` but also reports (entries scanned, verifications run).

        A verification is a Hamming comparison on a candidate that survived
        the length filter.  Kept separate from ``query`` so the hot path
        carries no counters; equivalence of the two is covered by tests.
        """
        n = len(pattern)
        if n == 0:
            raise ValueError("pattern must be non-empty")
        if n <= self.k:
            return list(self.side_table.get(n, ())), 0, 0
        k = self.k
        lens = self._plens(n)
        lists = self.lists
        lookup = self.table.lookup_list
        decode = self._decode
        out = set()
        scanned = 0
        verified = 0
        start = 0
        for i, plen in enumerate(lens):
            end = start + plen
            piece = pattern[start:end]
            ref = lookup(piece)
            if ref is None:
                start = end
                continue
            rest = pattern[:start] + pattern[end:]
            need = n - plen
            blob = lists[ref]
            if k == 1:
                marker = blob[0] | blob[1] << 8
                o = 2
                if i == 0:
                    remaining = marker - 1 if marker else LIST_ENTRY_LIMIT + 1
                else:
                    if not marker:
                        start = end
                        continue
                    for _ in range(marker - 1):
                        o += blob[o] + 1
                    remaining = LIST_ENTRY_LIMIT + 1
                while remaining:
                    ln = blob[o]
                    if ln == 0 or ln > need:
                        break
                    scanned += 1
                    e = blob[o + 1 : o + 1 + ln]
                    if decode is not None:
                        e = decode(e)
                    if len(e) == need:
                        verified += 1
                        if hamming_at_most(e, rest, 1):
                            out.add(e + piece if i else piece + e)
                    o += ln + 1
                    remaining -= 1
            else:
                pos = i + 1
                o = 0
                while True:
                    p = blob[o]
                    if p == 0:
                        break
                    ln = blob[o + 1]
                    if ln > need:
                        break
                    if p == pos:
                        scanned += 1
                        e = blob[o + 2 : o + 2 + ln]
                        if decode is not None:
                            e = decode(e)
                        if len(e) == need:
                            verified += 1
                            if hamming_at_most(e, rest, k):
                                out.add(e[:start] + piece + e[start:])
                    o += ln + 2
            start = end
        return sorted(out), scanned, verified

    # -- stats and sizes ---------------------------------------------------

    def list_stats(self) -> ListStats:
        """Entry counts and stored payload bytes across all piece lists."""
        if self._list_stats is None:
            total = 0
            payload = 0
            worst = 0
            positioned = self.k > 1
            for blob in self.lists:
                o = 0 if positioned else 2
                c = 0
                while True:
                    if positioned:
                        if blob[o] == 0:
                            break
                        ln = blob[o + 1]
                        o += ln + 2
                    else:
                        ln = blob[o]
                        if ln == 0:
                            break
                        o += ln + 1
                    c += 1
                    payload += ln
                total += c
                if c > worst:
                    worst = c
            count = len(self.lists)
            self._list_stats = ListStats(
                list_count=count,
                entry_count=total,
                mean_entries=total / count if count else 0.0,
                max_entries=worst,
                payload_bytes=payload,
            )
        return self._list_stats

    def size_breakdown(self) -> dict[str, int]:
        """Exact byte sizes of every stored component.

        ``directory`` charges one 8-byte slot per bucket; everything else is
        the literal length of the stored blobs.  Allocator overhead is
        deliberately excluded.
        """
        side = sum(1 + len(w) for group in self.side_table.values() for w in group)
        subs = sum(1 + len(s.gram) for s in self.subs) if self.subs is not None else 0
        parts = {
            "directory": 8 * self.table.bucket_count,
            "buckets": self.table.content_bytes(),
            "lists": sum(len(b) for b in self.lists),
            "side_table": side,
            "substitutions": subs,
        }
        parts["total"] = sum(parts.values())
        return parts

    def size_bytes(self) -> int:
        return self.size_breakdown()["total"]


def build_index(
    dictionary: Dictionary,
    k: int,
    *,
    hash_config: HashConfig | None = None,
    substitutions: SubstitutionList | None = None,
) -> SplitIndex:
    """Build a split index for ``dictionary`` with mismatch budget ``k``.

    Words of length <= k go to a side table keyed by length; every other word
    contributes exactly k+1 list entries, one per piece.  With
    ``substitutions`` given, list payloads are stored substitution-coded.

    Raises BuildError when a word's stored complement would not fit an 8-bit
    length tag, or when a k=1 list outgrows the 16-bit region marker.
    """
    if not isinstance(k, int) or k < 1:
        raise ConfigError(f"mismatch budget must be an integer >= 1, got {k!r}")
    if k > 255:
        raise ConfigError(f"mismatch budget is limited to 255, got {k}")
    table = ChainedHashTable(hash_config)
    side: dict[int, list[bytes]] = {}
    # Growable per-list staging; compacted into contiguous blobs afterwards
    # because the k=1 layout needs suffix entries laid out before prefixes.
    staged_one: list[tuple[list[bytes], list[bytes]]] = []
    staged_many: list[list[tuple[int, bytes]]] = []
    find = table.find_or_create_list

    if k == 1:
        for word in dictionary.words:
            n = len(word)
            if n < 2:
                side.setdefault(n, []).append(word)
                continue
            b = (2 * n + 2) >> 2  # round-half-up of n/2
            head = word[:b]
            tail = word[b:]
            if b > PAYLOAD_LIMIT or n - b > PAYLOAD_LIMIT:
                raise BuildError(f"missing piece exceeds {PAYLOAD_LIMIT} bytes for word {word[:32]!r}")
            ref, created = find(head)
            if created:
                staged_one.append(([], []))
            staged_one[ref][0].append(tail)
            ref, created = find(tail)
            if created:
                staged_one.append(([], []))
            staged_one[ref][1].append(head)
    else:
        for word in dictionary.words:
            n = len(word)
            if n <= k:
                side.setdefault(n, []).append(word)
                continue
            lens = piece_lengths(n, k)
            start = 0
            for i, plen in enumerate(lens):
                end = start + plen
                blob = word[:start] + word[end:]
                if len(blob) > PAYLOAD_LIMIT:
                    raise BuildError(
                        f"missing pieces exceed {PAYLOAD_LIMIT} bytes for word {word[:32]!r}"
                    )
                ref, created = find(word[start:end])
                if created:
                    staged_many.append([])
                staged_many[ref].append((i + 1, blob))
                start = end

    if substitutions is not None and len(substitutions):
        _encode_staged(substitutions, staged_one, staged_many)

    # Entries within a region are laid out shortest first so scans can skip
    # ahead to the wanted length and stop as soon as entries get longer.
    lists: list[bytes] = []
    if k == 1:
        for ref, (suffixes, prefixes) in enumerate(staged_one):
            if len(suffixes) + len(prefixes) > LIST_ENTRY_LIMIT:
                raise BuildError(
                    f"list for key ref {ref} exceeds {LIST_ENTRY_LIMIT} entries; "
                    "the region marker is a 16-bit index"
                )
            marker = len(suffixes) + 1 if prefixes else 0
            buf = bytearray((marker & 0xFF, marker >> 8))
            for e in sorted(suffixes, key=_by_size):
                buf.append(len(e))
                buf += e
            for e in sorted(prefixes, key=_by_size):
                buf.append(len(e))
                buf += e
            buf.append(0)
            lists.append(bytes(buf))
    else:
        for entries in staged_many:
            buf = bytearray()
            entries.sort(key=_by_size_positioned)
            for pos, e in entries:
                buf.append(pos)
                buf.append(len(e))
                buf += e
            buf.append(0)
            lists.append(bytes(buf))

    table.freeze()
    side_sorted = {n: tuple(sorted(group)) for n, group in side.items()}
    return SplitIndex(k, table, lists, side_sorted, substitutions, dictionary.stats())


def _by_size(entry: bytes):
    return len(entry), entry


def _by_size_positioned(item: tuple[int, bytes]):
    pos, entry = item
    return len(entry), pos, entry


def _encode_staged(subs: SubstitutionList, staged_one, staged_many) -> None:
    """Substitution-code every staged payload in one batched pass."""
    flat: list[bytes] = []
    if staged_one:
        for suffixes, prefixes in staged_one:
            flat += suffixes
            flat += prefixes
    else:
        for entries in staged_many:
            flat += [e for _, e in entries]
    encoded = iter(subs.encode_many(flat))
    if staged_one:
        for suffixes, prefixes in staged_one:
            suffixes[:] = (next(encoded) for _ in range(len(suffixes)))
            prefixes[:] = (next(encoded) for _ in range(len(prefixes)))
    else:
        for entries in staged_many:
            entries[:] = ((pos, next(encoded)) for pos, _ in entries)
