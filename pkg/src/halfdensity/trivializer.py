"""Certificate-producing triviality pipeline for relator presentations.

The pipeline looks for evidence that every generator and inverse of a
presented group coincide, which pins the group to order one or two:

1. collision stage: find two relators whose tails agree from position k+1
   while their k-th letters differ; the prefix quotient w (length exactly 2k)
   is then trivial in the group.
2./3. reduction stage: inside fixed blocks of each relator, excise segments
   d w d^-1 whose flanking letters s, t do not cancel; this shortens the
   relator without changing its image in the group.
4. conclusion stage: two (shortened) relators that agree from their second
   letter on force their first letters to be equal in the group.

Every asserted equality is emitted as a Certificate: an ordered derivation
whose steps are replayed verbatim by check_certificate using word operations
only.  The pipeline answers "trivial" or "unknown"; it never claims
nontriviality.  abelianization_guard is the independent soundness oracle:
when the exponent-sum matrix has rank below m the group surjects onto an
infinite abelian group, so a "trivial" verdict would be a contradiction and
raises immediately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .words import (
    Presentation,
    Word,
    concat_reduce,
    invert,
    is_reduced,
    letter_to_char,
    word_from_str,
    word_to_str,
)

RESERVED_PREFIX = 2

POSSIBLY_TRIVIAL = "possibly-trivial"
CERTAINLY_NONTRIVIAL = "certainly-nontrivial"

OUTCOME_TRIVIAL = "trivial"
OUTCOME_UNKNOWN = "unknown"


class CertificateError(ValueError):
    """A certificate is structurally malformed (distinct from replay mismatch)."""


class SoundnessError(RuntimeError):
    """The pipeline derived 'trivial' for a group that is provably not."""


# ---------------------------------------------------------------------------
# configuration


def choose_k(ell: int, m: int = 2) -> int:
    """Default head length: max(1, round((1/2) log ell - log log ell)), logs base 2m-1."""
    if ell < 2:
        raise ValueError(f"ell must be >= 2, got {ell}")
    base = 2 * m - 1
    x = math.log(ell, base)
    return max(1, round(0.5 * x - math.log(x, base)))


@dataclass(frozen=True)
class TrivializerConfig:
    """Head length k plus the derived block geometry for relator length ell."""

    m: int
    ell: int
    k: int
    max_rounds: int = 1

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"m must be >= 2, got {self.m}")
        if not 1 <= self.k <= self.ell:
            raise ValueError(f"need 1 <= k <= ell, got k={self.k}, ell={self.ell}")
        if self.max_rounds < 1:
            raise ValueError(f"max_rounds must be >= 1, got {self.max_rounds}")

    @property
    def block_size(self) -> int:
        return (2 * self.k + 2) * (2 * self.m - 1) ** (2 * self.k)

    @property
    def block_count(self) -> int:
        return (self.ell - 2) // self.block_size

    def block_count_for(self, length: int) -> int:
        """Full blocks available in a relator of the given length."""
        return max(0, (length - 2) // self.block_size)

    @classmethod
    def for_params(cls, m: int, ell: int, k: int | None = None,
                   max_rounds: int = 1) -> "TrivializerConfig":
        if k is None:
            k = min(choose_k(ell, m), ell)
        return cls(m=m, ell=ell, k=k, max_rounds=max_rounds)


# ---------------------------------------------------------------------------
# domain records


@dataclass(frozen=True)
class TailCollision:
    """Relators r1, r2 with equal tails from k+1 and r1[k] != r2[k].

    w = (r1[1:k])^-1 * r2[1:k] is freely reduced of length exactly 2k and is
    trivial in the presented group.
    """

    r1_index: int
    r2_index: int
    k: int
    w: Word

    def __post_init__(self):
        if len(self.w) != 2 * self.k:
            raise ValueError(f"w has length {len(self.w)}, expected 2k = {2 * self.k}")
        if not is_reduced(self.w):
            raise ValueError("w is not freely reduced")


@dataclass(frozen=True)
class WReductionEvent:
    """One excision of d w d^-1 between non-cancelling flanks s, t.

    start/end are one-based inclusive positions of the removed segment in the
    host word at the moment of application.
    """

    start: int
    end: int
    conjugator: Word
    s_letter: int
    t_letter: int
    host_index: Optional[int] = None

    def __post_init__(self):
        if self.s_letter == -self.t_letter:
            raise ValueError("flanking letters cancel; not a valid reduction")
        if self.end < self.start:
            raise ValueError("empty reduction span")


# ---------------------------------------------------------------------------
# certificates
#
# A certificate is a list of steps; each step appends one derived word (or,
# for the final conclusion, an equality).  Steps reference earlier steps by
# list index.  Replaying uses only word operations plus membership of cited
# relators in the presentation.


@dataclass(frozen=True)
class RelatorStep:
    index: int
    word: Word


@dataclass(frozen=True)
class CollisionStep:
    r1: int
    r2: int
    k: int
    w: Word


@dataclass(frozen=True)
class ReductionStep:
    host: int
    w_ref: int
    start: int
    end: int
    conjugator: Word
    s_letter: int
    t_letter: int
    result: Word


@dataclass(frozen=True)
class ConclusionStep:
    r1: int
    r2: int
    x: int
    y: int


Step = Union[RelatorStep, CollisionStep, ReductionStep, ConclusionStep]


@dataclass
class Certificate:
    """A replayable derivation of the equality x = y in the presented group."""

    x: int
    y: int
    steps: list

    def to_json_dict(self) -> dict:
        out = []
        for s in self.steps:
            if isinstance(s, RelatorStep):
                out.append({"kind": "relator", "index": s.index, "word": word_to_str(s.word)})
            elif isinstance(s, CollisionStep):
                out.append({"kind": "collision", "r1": s.r1, "r2": s.r2, "k": s.k,
                            "w": word_to_str(s.w)})
            elif isinstance(s, ReductionStep):
                out.append({"kind": "reduction", "host": s.host, "w_ref": s.w_ref,
                            "start": s.start, "end": s.end,
                            "conjugator": word_to_str(s.conjugator),
                            "s_letter": letter_to_char(s.s_letter),
                            "t_letter": letter_to_char(s.t_letter),
                            "result": word_to_str(s.result)})
            elif isinstance(s, ConclusionStep):
                out.append({"kind": "conclusion", "r1": s.r1, "r2": s.r2,
                            "x": letter_to_char(s.x), "y": letter_to_char(s.y)})
            else:
                raise TypeError(f"unknown step type {type(s).__name__}")
        return {"x": letter_to_char(self.x), "y": letter_to_char(self.y), "steps": out}

    @classmethod
    def from_json_dict(cls, d: dict) -> "Certificate":
        try:
            steps: list[Step] = []
            for s in d["steps"]:
                kind = s.get("kind")
                if kind == "relator":
                    steps.append(RelatorStep(int(s["index"]), word_from_str(s["word"])))
                elif kind == "collision":
                    steps.append(CollisionStep(int(s["r1"]), int(s["r2"]), int(s["k"]),
                                               word_from_str(s["w"])))
                elif kind == "reduction":
                    steps.append(ReductionStep(int(s["host"]), int(s["w_ref"]),
                                               int(s["start"]), int(s["end"]),
                                               word_from_str(s["conjugator"]),
                                               word_from_str(s["s_letter"])[0],
                                               word_from_str(s["t_letter"])[0],
                                               word_from_str(s["result"])))
                elif kind == "conclusion":
                    steps.append(ConclusionStep(int(s["r1"]), int(s["r2"]),
                                                word_from_str(s["x"])[0],
                                                word_from_str(s["y"])[0]))
                else:
                    raise CertificateError(f"unknown step kind {kind!r}")
            return cls(word_from_str(d["x"])[0], word_from_str(d["y"])[0], steps)
        except CertificateError:
            raise
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise CertificateError(f"malformed certificate payload: {exc}") from exc

    def describe(self) -> str:
        """Human-readable derivation log."""
        lines = [f"claim: {letter_to_char(self.x)} = {letter_to_char(self.y)} in G"]
        for i, s in enumerate(self.steps):
            if isinstance(s, RelatorStep):
                lines.append(f"[{i}] relator #{s.index} is trivial: {word_to_str(s.word)}")
            elif isinstance(s, CollisionStep):
                lines.append(
                    f"[{i}] tails of [{s.r1}] and [{s.r2}] agree from position {s.k + 1}; "
                    f"prefix quotient w = {word_to_str(s.w)} is trivial"
                )
            elif isinstance(s, ReductionStep):
                d = word_to_str(s.conjugator) or "(empty)"
                lines.append(
                    f"[{i}] excise d*w*d^-1 from [{s.host}] at {s.start}..{s.end} "
                    f"(d = {d}, w from [{s.w_ref}], flanks "
                    f"{letter_to_char(s.s_letter)},{letter_to_char(s.t_letter)}): "
                    f"{word_to_str(s.result)}"
                )
            elif isinstance(s, ConclusionStep):
                lines.append(
                    f"[{i}] [{s.r1}] and [{s.r2}] agree from position 2, so "
                    f"{letter_to_char(s.x)} = {letter_to_char(s.y)} in G"
                )
        return "\n".join(lines)


def _check_ref(ref, upto: int) -> int:
    if not isinstance(ref, int) or not 0 <= ref < upto:
        raise CertificateError(f"step reference {ref!r} invalid before step {upto}")
    return ref


def check_certificate(R: Presentation, cert: Certificate) -> bool:
    """Replay a certificate; True iff every claimed word reproduces exactly.

    Structural problems (bad references, unknown step kinds, citing a word
    that is not a relator of R) raise CertificateError; value-level replay
    mismatches return False.
    """
    if not cert.steps:
        raise CertificateError("certificate has no steps")
    derived: list[Optional[Word]] = []
    concluded: Optional[tuple[int, int]] = None
    for pos, s in enumerate(cert.steps):
        if isinstance(s, RelatorStep):
            if not 0 <= s.index < len(R.relators):
                raise CertificateError(f"relator index {s.index} outside presentation")
            if tuple(R.relators[s.index]) != tuple(s.word):
                raise CertificateError(
                    f"step {pos} cites relator {s.index} with a word not in R"
                )
            derived.append(tuple(s.word))
        elif isinstance(s, CollisionStep):
            u = derived[_check_ref(s.r1, pos)]
            v = derived[_check_ref(s.r2, pos)]
            if u is None or v is None:
                raise CertificateError(f"step {pos} references a non-word step")
            k = s.k
            if not (1 <= k <= len(u) and k <= len(v)):
                return False
            if u[k:] != v[k:]:
                return False
            if u[0] == v[0] or u[k - 1] == v[k - 1]:
                return False
            w = concat_reduce(invert(u[:k]), v[:k])
            if len(w) != 2 * k or w != tuple(s.w):
                return False
            derived.append(w)
        elif isinstance(s, ReductionStep):
            host = derived[_check_ref(s.host, pos)]
            w = derived[_check_ref(s.w_ref, pos)]
            if host is None or w is None:
                raise CertificateError(f"step {pos} references a non-word step")
            start, end = s.start, s.end
            if not (2 <= start <= end <= len(host) - 1):
                return False
            d = tuple(s.conjugator)
            if host[start - 1 : end] != d + tuple(w) + invert(d):
                return False
            if host[start - 2] != s.s_letter or host[end] != s.t_letter:
                return False
            if s.s_letter == -s.t_letter:
                return False
            result = host[: start - 1] + host[end:]
            if not is_reduced(result) or result != tuple(s.result):
                return False
            derived.append(result)
        elif isinstance(s, ConclusionStep):
            u = derived[_check_ref(s.r1, pos)]
            v = derived[_check_ref(s.r2, pos)]
            if u is None or v is None:
                raise CertificateError(f"step {pos} references a non-word step")
            if len(u) < 1 or len(v) < 1:
                return False
            if u[0] != s.x or v[0] != s.y or s.x == s.y:
                return False
            if u[1:] != v[1:]:
                return False
            derived.append(None)
            concluded = (s.x, s.y)
        else:
            raise CertificateError(f"unknown step type {type(s).__name__}")
    if concluded is None:
        raise CertificateError("certificate never reaches a conclusion step")
    if concluded != (cert.x, cert.y):
        return False
    return True


# ---------------------------------------------------------------------------
# collision search


def _tail_key(word: Word, start: int) -> bytes:
    return bytes((x & 0xFF) for x in word[start:])


def _group_tails(cur_words: list, start: int, matrix: np.ndarray | None) -> dict:
    """Group word indices by their tail from one-based position start+1.

    Returns a dict keyed by tail bytes, values are index lists in ascending
    order (insertion order).  Words shorter than start letters are skipped.
    """
    groups: dict[bytes, list[int]] = {}
    if matrix is not None and start <= matrix.shape[1]:
        sub = np.ascontiguousarray(matrix[:, start:])
        buf = sub.tobytes()
        width = sub.shape[1] * sub.itemsize
        for i in range(matrix.shape[0]):
            key = buf[i * width : (i + 1) * width]
            groups.setdefault(key, []).append(i)
        return groups
    for i, u in enumerate(cur_words):
        if len(u) < start:
            continue
        groups.setdefault(_tail_key(u, start), []).append(i)
    return groups


def _collision_pairs_in_group(cur_words: list, idxs: list, k: int):
    """Yield valid collision pairs (i1, i2) within one equal-tail group."""
    for a in range(len(idxs)):
        i1 = idxs[a]
        u = cur_words[i1]
        for b in range(a + 1, len(idxs)):
            i2 = idxs[b]
            v = cur_words[i2]
            if u[0] == v[0] or u[k - 1] == v[k - 1]:
                continue
            yield i1, i2


def find_tail_collisions(R: Presentation, k: int, prefix1: tuple, prefix2: tuple) -> list:
    """All collisions between the two-letter prefix classes prefix1, prefix2.

    A collision is a pair (r1 in the prefix1 class, r2 in the prefix2 class)
    whose tails agree from position k+1 while positions k differ.  The two
    classes must have distinct first letters.
    """
    x, z1 = prefix1
    y, z2 = prefix2
    if x == y:
        raise ValueError("prefix classes must have distinct first letters")
    if z1 == z2 and -z1 in (x, y):
        raise ValueError("second letter must not be the inverse of either first letter")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")

    class1: list[int] = []
    class2: dict[bytes, list[int]] = {}
    for i, r in enumerate(R.relators):
        if len(r) < max(2, k):
            continue
        if r[0] == x and r[1] == z1:
            class1.append(i)
        elif r[0] == y and r[1] == z2:
            class2.setdefault(_tail_key(r, k), []).append(i)

    out = []
    for i1 in class1:
        u = R.relators[i1]
        for i2 in class2.get(_tail_key(u, k), ()):
            v = R.relators[i2]
            if u[k - 1] == v[k - 1]:
                continue
            w = concat_reduce(invert(u[:k]), v[:k])
            out.append(TailCollision(i1, i2, k, w))
    out.sort(key=lambda c: (c.r1_index, c.r2_index))
    return out


# ---------------------------------------------------------------------------
# w-reduction


def _pattern_span(r, W: int, i: int, lo0: int, hi0: int):
    """Span (si, ti) of the flanks around a w occurrence at 0-based i, or None.

    The conjugator is grown greedily outward while letters cancel; maximality
    means the final flanks cannot cancel unless growth was stopped by the
    window edge, which invalidates the occurrence.
    """
    n = 0
    while (i - n - 2 >= lo0 and i + W + n + 1 <= hi0
           and r[i - n - 1] == -r[i + W + n]):
        n += 1
    si = i - n - 1
    ti = i + W + n
    if si < lo0 or ti > hi0:
        return None
    if r[si] == -r[ti]:
        return None
    return si, ti


def w_reduce_once(r: Word, w: Word, search_from: int = RESERVED_PREFIX + 1,
                  search_to: int | None = None):
    """Excise the leftmost valid pattern s d w d^-1 t inside a window of r.

    The whole pattern, flanks included, must lie within one-based positions
    [search_from, search_to].  The conjugator d is grown greedily outward
    from the w occurrence; maximality makes the flanks non-cancelling unless
    the pattern hits the window edge, in which case the occurrence is skipped
    and the search continues.  Returns (reduced word, event) or None.
    """
    L = len(r)
    W = len(w)
    if W < 2 or not is_reduced(w):
        raise ValueError("w must be freely reduced of length >= 2")
    if search_to is None:
        search_to = L
    lo0 = search_from - 1
    hi0 = search_to - 1
    if lo0 < 0 or hi0 > L - 1 or lo0 > hi0:
        if lo0 >= L or lo0 > hi0:
            return None
        hi0 = min(hi0, L - 1)
        lo0 = max(lo0, 0)

    wt = tuple(w)
    for i in range(lo0 + 1, hi0 - W + 1):
        if tuple(r[i : i + W]) != wt:
            continue
        span = _pattern_span(r, W, i, lo0, hi0)
        if span is None:
            continue
        si, ti = span
        conj = tuple(r[si + 1 : i])
        result = tuple(r[: si + 1]) + tuple(r[ti:])
        event = WReductionEvent(start=si + 2, end=ti, conjugator=conj,
                                s_letter=r[si], t_letter=r[ti],
                                host_index=None)
        return result, event
    return None


def reduce_relator(r: Word, w: Word, cfg: TrivializerConfig):
    """At most one w-reduction in each full block of r, first two letters reserved.

    Blocks are consecutive block_size spans of r from position 3 on; letters
    beyond the last full block are left alone.  Returns (reduced word,
    events), event positions being relative to the word state at the moment
    each excision is applied.
    """
    length = len(r)
    b = cfg.block_count_for(length)
    events: list[WReductionEvent] = []
    cur = tuple(r)
    offset = 0
    size = cfg.block_size
    for j in range(b):
        lo = RESERVED_PREFIX + 1 + j * size
        hi = RESERVED_PREFIX + (j + 1) * size
        res = w_reduce_once(cur, w, search_from=lo - offset, search_to=hi - offset)
        if res is None:
            continue
        cur, ev = res
        events.append(ev)
        offset += ev.end - ev.start + 1
    return cur, events


# ---------------------------------------------------------------------------
# abelianization guard


def _exact_rank(mat: list) -> int:
    """Rank over the rationals of a small integer matrix (exact arithmetic)."""
    rows = [[Fraction(x) for x in row] for row in mat]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        for r in range(rank + 1, len(rows)):
            if rows[r][col] != 0:
                factor = rows[r][col] / pr[col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], pr)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def _exponent_matrix(R: Presentation) -> np.ndarray:
    mat = R.as_matrix()
    out = np.zeros((len(R.relators), R.m), dtype=np.int64)
    if mat is not None:
        for g in range(1, R.m + 1):
            out[:, g - 1] = (mat == g).sum(axis=1) - (mat == -g).sum(axis=1)
        return out
    for i, r in enumerate(R.relators):
        for x in r:
            out[i, abs(x) - 1] += 1 if x > 0 else -1
    return out


def abelianization_guard(R: Presentation) -> str:
    """Independent soundness oracle from exponent sums.

    If the |R| x m exponent matrix has rational rank below m, the
    abelianization is infinite and the group cannot be trivial.
    """
    if not R.relators:
        return CERTAINLY_NONTRIVIAL
    E = _exponent_matrix(R)
    # rank(E) = rank(E^T E); the Gram matrix is m x m so the exact
    # elimination stays tiny.  Entries are bounded by |R| * max_len^2.
    max_len = max((len(r) for r in R.relators), default=0)
    if len(R.relators) * max_len * max_len < (1 << 62):
        gram = (E.T @ E).tolist()
        rank = _exact_rank(gram)
    else:
        rank = _exact_rank(E.tolist())
    return POSSIBLY_TRIVIAL if rank >= R.m else CERTAINLY_NONTRIVIAL


# ---------------------------------------------------------------------------
# verdict assembly


@dataclass
class TrivializeStats:
    rounds: int = 0
    collisions_found: int = 0
    reductions_applied: int = 0
    letters_removed: int = 0
    equality_edges: int = 0

    def to_json_dict(self) -> dict:
        return {
            "rounds": self.rounds,
            "collisions_found": self.collisions_found,
            "reductions_applied": self.reductions_applied,
            "letters_removed": self.letters_removed,
            "equality_edges": self.equality_edges,
        }


@dataclass
class Verdict:
    outcome: str
    certificates: list
    stats: TrivializeStats
    config: TrivializerConfig

    def to_json_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "parameters": {
                "m": self.config.m,
                "ell": self.config.ell,
                "k": self.config.k,
                "block_size": self.config.block_size,
                "block_count": self.config.block_count,
                "max_rounds": self.config.max_rounds,
            },
            "certificates": [c.to_json_dict() for c in self.certificates],
            "statistics": self.stats.to_json_dict(),
        }


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True

    def component_count(self) -> int:
        return len({self.find(x) for x in self.parent})


def _symbol_code(x: int, m: int) -> int:
    return x - 1 if x > 0 else m + (-x) - 1


def _edge_class(x: int, y: int, m: int):
    """Canonical key of the unordered pair {x, y} up to inverting both."""
    p1 = tuple(sorted((x, y), key=lambda t: _symbol_code(t, m)))
    p2 = tuple(sorted((-x, -y), key=lambda t: _symbol_code(t, m)))
    return min(p1, p2, key=lambda p: (_symbol_code(p[0], m), _symbol_code(p[1], m)))


def _prune_derivation(deriv: list, last: int) -> list:
    """Ancestor closure of one step, re-indexed into a standalone step list."""
    needed = set()
    stack = [last]
    while stack:
        t = stack.pop()
        if t in needed:
            continue
        needed.add(t)
        s = deriv[t]
        if isinstance(s, CollisionStep):
            stack.extend((s.r1, s.r2))
        elif isinstance(s, ReductionStep):
            stack.extend((s.host, s.w_ref))
        elif isinstance(s, ConclusionStep):
            stack.extend((s.r1, s.r2))
    order = sorted(needed)
    remap = {old: new for new, old in enumerate(order)}
    out: list[Step] = []
    for t in order:
        s = deriv[t]
        if isinstance(s, CollisionStep):
            s = CollisionStep(remap[s.r1], remap[s.r2], s.k, s.w)
        elif isinstance(s, ReductionStep):
            s = ReductionStep(remap[s.host], remap[s.w_ref], s.start, s.end,
                              s.conjugator, s.s_letter, s.t_letter, s.result)
        elif isinstance(s, ConclusionStep):
            s = ConclusionStep(remap[s.r1], remap[s.r2], s.x, s.y)
        out.append(s)
    return out


def _best_collision(cur_words: list, k: int, used_ws: set,
                    matrix: np.ndarray | None):
    """Lexicographically smallest valid collision pair over all equal-tail groups.

    Returns ((i1, i2, w) or None, number of valid pairs seen).
    """
    if matrix is not None and k > matrix.shape[1]:
        return None, 0
    groups = _group_tails(cur_words, k, matrix)
    best = None
    count = 0
    for idxs in groups.values():
        if len(idxs) < 2:
            continue
        for i1, i2 in _collision_pairs_in_group(cur_words, idxs, k):
            count += 1
            if best is not None and (i1, i2) >= best[:2]:
                continue
            u, v = cur_words[i1], cur_words[i2]
            w = concat_reduce(invert(u[:k]), v[:k])
            if len(w) != 2 * k or w in used_ws:
                continue
            best = (i1, i2, w)
    return best, count


def trivialize(R: Presentation, cfg: TrivializerConfig | None = None) -> Verdict:
    """Run the full pipeline and assemble a certified verdict.

    Deterministic: ties in the collision search break by smallest
    (r1 index, r2 index); equality edges are certified in first-found order,
    one per unordered symbol pair up to inverting both sides.  Outcome is
    "trivial" only when the certified equalities, closed under that symmetry,
    connect all 2m symbols.
    """
    m = R.m
    relators = [tuple(r) for r in R.relators]
    if cfg is None:
        ell = max((len(r) for r in relators), default=2)
        cfg = TrivializerConfig.for_params(m, max(ell, 2))

    deriv: list[Step] = []
    cite_map: dict[int, int] = {}
    cur_ref: dict[int, int] = {}
    cur_words = list(relators)
    changed = False
    matrix = R.as_matrix()

    def ref_of(i: int) -> int:
        if i in cur_ref:
            return cur_ref[i]
        if i not in cite_map:
            deriv.append(RelatorStep(i, relators[i]))
            cite_map[i] = len(deriv) - 1
        cur_ref[i] = cite_map[i]
        return cur_ref[i]

    symbols = [i for i in range(1, m + 1)] + [-i for i in range(1, m + 1)]
    uf = _UnionFind(symbols)
    certs: dict[tuple, Certificate] = {}
    stats = TrivializeStats()
    used_ws: set[Word] = set()

    for _ in range(cfg.max_rounds):
        stats.rounds += 1
        round_reductions = 0

        # collision stage
        col, count = _best_collision(cur_words, cfg.k, used_ws,
                                     None if changed else matrix)
        stats.collisions_found += count
        w_entry = None
        w = None
        if col is not None:
            i1, i2, w = col
            used_ws.add(w)
            step = CollisionStep(ref_of(i1), ref_of(i2), cfg.k, w)
            deriv.append(step)
            w_entry = len(deriv) - 1

        # reduction stage
        if w is not None:
            for i, u in enumerate(cur_words):
                if cfg.block_count_for(len(u)) < 1:
                    continue
                reduced, events = reduce_relator(u, w, cfg)
                if not events:
                    continue
                host = u
                for ev in events:
                    host_ref = ref_of(i)
                    result = host[: ev.start - 1] + host[ev.end :]
                    deriv.append(ReductionStep(host_ref, w_entry, ev.start, ev.end,
                                               ev.conjugator, ev.s_letter, ev.t_letter,
                                               result))
                    cur_ref[i] = len(deriv) - 1
                    stats.letters_removed += ev.end - ev.start + 1
                    host = result
                assert host == reduced
                cur_words[i] = reduced
                round_reductions += len(events)
                changed = True
            stats.reductions_applied += round_reductions

        # conclusion stage
        groups = _group_tails(cur_words, 1, None if changed else matrix)
        for idxs in groups.values():
            if len(idxs) < 2:
                continue
            seen: dict[int, int] = {}
            for i in idxs:
                x = cur_words[i][0]
                if x not in seen:
                    for y, j in seen.items():
                        key = _edge_class(y, x, m)
                        if key in certs:
                            continue
                        r1_ref, r2_ref = ref_of(j), ref_of(i)
                        deriv.append(ConclusionStep(r1_ref, r2_ref, y, x))
                        steps = _prune_derivation(deriv, len(deriv) - 1)
                        certs[key] = Certificate(y, x, steps)
                        uf.union(x, y)
                        uf.union(-x, -y)
                    seen[x] = i

        if uf.component_count() == 1:
            break
        if w is None or round_reductions == 0:
            break

    stats.equality_edges = len(certs)
    outcome = OUTCOME_TRIVIAL if uf.component_count() == 1 else OUTCOME_UNKNOWN
    if outcome == OUTCOME_TRIVIAL and abelianization_guard(R) == CERTAINLY_NONTRIVIAL:
        raise SoundnessError(
            "pipeline derived 'trivial' but the abelianization is infinite; "
            "this indicates a defect in the derivation machinery"
        )
    return Verdict(outcome, list(certs.values()), stats, cfg)


# ---------------------------------------------------------------------------
# empirical per-block reduction rate


def planted_reduction_rate(k: int, m: int, blocks: int, rng, w: Word | None = None,
                           chunk: int = 2048) -> tuple:
    """Fraction of random blocks admitting a w-reduction, for a fixed valid w.

    Each trial samples a uniform reduced word of length block_size + 1; the
    first letter plays the preceding-letter role and the rest is the block.
    Returns (rate, stderr).  Per-block this rate exceeds 1/4 once k is large
    enough for the wrong-form occurrences (the block starting or ending with
    d w d^-1) to be negligible.
    """
    from .words import sample_relator_matrix

    cfg = TrivializerConfig(m=m, ell=max((2 * k + 2) * (2 * m - 1) ** (2 * k) + 2, 2 * k),
                            k=k)
    size = cfg.block_size
    if w is None:
        w = tuple([1, 2] * k) if m >= 2 else None
    w = tuple(w)
    if len(w) != 2 * k or not is_reduced(w):
        raise ValueError(f"w must be freely reduced of length 2k = {2 * k}")
    W = len(w)

    hits = 0
    done = 0
    chunk_index = 0
    from .rng import RandomSource

    if not isinstance(rng, RandomSource):
        rng = RandomSource(int(rng))
    while done < blocks:
        count = min(chunk, blocks - done)
        mat = sample_relator_matrix(m, size + 1, count, rng.child(chunk_index))
        chunk_index += 1
        # candidate occurrence columns: w inside the block (offset 1..size-W+1)
        ncand = size - W + 1
        mask = mat[:, 1 : 1 + ncand] == w[0]
        for j in range(1, W):
            mask &= mat[:, 1 + j : 1 + j + ncand] == w[j]
        rows = np.nonzero(mask.any(axis=1))[0]
        for ridx in rows:
            row = mat[ridx].tolist()
            cols = np.nonzero(mask[ridx])[0]
            for c in cols:
                # block occupies 0-based [1, size]; pattern must fit inside
                if _pattern_span(row, W, int(c) + 1, 1, size) is not None:
                    hits += 1
                    break
        done += count
    rate = hits / blocks
    stderr = math.sqrt(rate * (1.0 - rate) / blocks)
    return rate, stderr
