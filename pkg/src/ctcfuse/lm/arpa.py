"""ARPA text serialization for :class:`NGramModel`."""
from __future__ import annotations

import re

from ..exceptions import MalformedArpa, OrderTooHigh
from .counting import MAX_ORDER
from .model import NGramModel

_COUNT_LINE = re.compile(r"^ngram\s+(\d+)\s*=\s*(\d+)$")
_SECTION = re.compile(r"^\\(\d+)-grams:$")


def _fmt(x: float) -> str:
    # repr round-trips float64 exactly
    return repr(float(x))


def write_arpa(model: NGramModel, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\\data\\\n")
        for n in range(1, model.order + 1):
            fh.write(f"ngram {n}={len(model.entries[n - 1])}\n")
        for n in range(1, model.order + 1):
            fh.write(f"\n\\{n}-grams:\n")
            with_backoff = n < model.order
            for words, logp, bow in model.ngrams(n):
                line = f"{_fmt(logp)}\t{' '.join(words)}"
                if with_backoff:
                    line += f"\t{_fmt(bow)}"
                fh.write(line + "\n")
        fh.write("\n\\end\\\n")


def read_arpa(path, allow_high_order: bool = False) -> NGramModel:
    """Parse an ARPA file.

    Raises :class:`MalformedArpa` on header/section disagreement, a missing
    ``\\end\\`` marker, or an n-gram whose context is absent, and
    :class:`OrderTooHigh` for orders above four unless ``allow_high_order``.
    """
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh]

    i = 0
    while i < len(lines) and lines[i] != "\\data\\":
        i += 1
    if i == len(lines):
        raise MalformedArpa(f"{path}: no \\data\\ header")
    i += 1
    declared = {}
    while i < len(lines) and lines[i]:
        m = _COUNT_LINE.match(lines[i])
        if not m:
            break
        declared[int(m.group(1))] = int(m.group(2))
        i += 1
    if not declared:
        raise MalformedArpa(f"{path}: no ngram counts in header")
    order = max(declared)
    if sorted(declared) != list(range(1, order + 1)):
        raise MalformedArpa(f"{path}: header orders {sorted(declared)} are not contiguous from 1")
    if order > MAX_ORDER and not allow_high_order:
        raise OrderTooHigh(f"{path}: order {order} exceeds the {MAX_ORDER}-gram cap")

    raw = [[] for _ in range(order)]
    current = None
    saw_end = False
    for lineno in range(i, len(lines)):
        line = lines[lineno]
        if not line:
            continue
        if line == "\\end\\":
            saw_end = True
            break
        m = _SECTION.match(line)
        if m:
            current = int(m.group(1))
            if current not in declared:
                raise MalformedArpa(f"{path}:{lineno + 1}: section {current} not declared")
            continue
        if current is None:
            raise MalformedArpa(f"{path}:{lineno + 1}: entry outside any n-gram section")
        parts = line.split()
        if len(parts) not in (current + 1, current + 2):
            raise MalformedArpa(f"{path}:{lineno + 1}: expected {current} words")
        try:
            logp = float(parts[0])
            bow = float(parts[current + 1]) if len(parts) == current + 2 else 0.0
        except ValueError as exc:
            raise MalformedArpa(f"{path}:{lineno + 1}: {exc}") from exc
        raw[current - 1].append((tuple(parts[1 : current + 1]), logp, bow))
    if not saw_end:
        raise MalformedArpa(f"{path}: missing \\end\\ marker")
    for n in range(1, order + 1):
        if len(raw[n - 1]) != declared[n]:
            raise MalformedArpa(
                f"{path}: header declares {declared[n]} {n}-grams, found {len(raw[n - 1])}"
            )

    vocabulary = [g[0] for g, _, _ in raw[0]]
    index = {w: k for k, w in enumerate(vocabulary)}
    if len(index) != len(vocabulary):
        raise MalformedArpa(f"{path}: duplicate unigrams")
    entries = []
    for n in range(1, order + 1):
        table = {}
        for words, logp, bow in raw[n - 1]:
            try:
                ids = tuple(index[w] for w in words)
            except KeyError as exc:
                raise MalformedArpa(f"{path}: {n}-gram {' '.join(words)!r} uses unknown word {exc}") from None
            if n > 1 and ids[:-1] not in entries[n - 2]:
                raise MalformedArpa(f"{path}: context of {' '.join(words)!r} is missing")
            table[ids] = (logp, bow)
        entries.append(table)
    return NGramModel(order, vocabulary, entries)
