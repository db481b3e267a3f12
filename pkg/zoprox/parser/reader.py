"""LIBSVM sparse text: ``label idx:val idx:val ...`` with 1-based ascending indices."""

import logging
import math
import re
from typing import Iterable, Iterator, List, Optional, Tuple, Union

import numpy as np
from scipy import sparse
from tatsu.exceptions import FailedParse

from zoprox.objects.dataset import Dataset
from zoprox.objects.errors import ConfigException, InvalidArgumentException, LibsvmParseException
from zoprox.parser import lang
from zoprox.parser.semantics import LibsvmSemantics

logger = logging.getLogger(__name__)

PROGRESS_EVERY = 10_000

LABELS = {1.0: 1, -1.0: 0, 0.0: 0}

_token = re.compile(r"\S+")


def _token_at(text: str, pos: Optional[int]) -> Tuple[str, int]:
    """The whitespace separated token covering ``pos``, or the next one after it."""
    tokens = list(_token.finditer(text))
    if not tokens:
        return text, 0
    if pos is None:
        return tokens[0].group(), tokens[0].start()
    for m in tokens:
        if pos < m.end():
            return m.group(), m.start()
    return tokens[-1].group(), tokens[-1].start()


def parse_line(text: str, line: int) -> Tuple[int, List[Tuple[int, float]]]:
    """Parse one non-blank, comment-stripped line into ``(label, [(col, value), ...])`` with 0-based columns."""
    try:
        label, features = lang.parse(text, semantics=LibsvmSemantics())
    except FailedParse as e:
        token, column = _token_at(text, getattr(e, "pos", None))
        raise LibsvmParseException("malformed token", line=line, token=token, text=text, column=column) from None

    tokens = list(_token.finditer(text))
    if len(tokens) != len(features) + 1:
        # the grammar skips blanks, so "3 : 0.5" parses but is not one pair per token
        m = tokens[1] if len(tokens) > 1 else tokens[0]
        raise LibsvmParseException("whitespace inside an index:value pair", line=line,
                                   token=m.group(), text=text, column=m.start())

    if label not in LABELS:
        raise LibsvmParseException("label must be +1/-1 or 1/0", line=line,
                                   token=tokens[0].group(), text=text, column=tokens[0].start())

    entries = []
    previous = 0
    for (index, value), m in zip(features, tokens[1:]):
        if index < 1:
            reason = "feature index must be at least 1"
        elif index <= previous:
            reason = "feature indices must be strictly ascending"
        elif not math.isfinite(value):
            reason = "feature value is not finite"
        else:
            entries.append((index - 1, value))
            previous = index
            continue
        raise LibsvmParseException(reason, line=line, token=m.group(), text=text, column=m.start())
    return LABELS[label], entries


def parse_libsvm(stream: Union[str, Iterable[str]], n_features: Optional[int] = None) -> Dataset:
    """Read a LIBSVM document into a :class:`Dataset`.

    ``stream`` is the whole text or any iterable of lines, such as an open file.
    Text after ``#`` and blank lines are ignored. ``d`` is the largest index seen,
    or ``n_features`` when given.
    """
    lines = stream.splitlines() if isinstance(stream, str) else stream
    labels: List[int] = []
    indptr = [0]
    indices: List[int] = []
    data: List[float] = []
    width = 0

    for lineno, raw in enumerate(lines, 1):
        text = raw.split("#", 1)[0].strip()
        if lineno % PROGRESS_EVERY == 0:
            logger.info("parsed %d lines, %d rows", lineno, len(labels))
        if not text:
            continue
        try:
            label, entries = parse_line(text, lineno)
        except LibsvmParseException as e:
            # columns count from the raw line
            if e.column is not None:
                e.column += len(raw) - len(raw.lstrip())
            raise
        labels.append(label)
        for col, value in entries:
            indices.append(col)
            data.append(value)
        if entries:
            width = max(width, entries[-1][0] + 1)
        indptr.append(len(indices))

    if n_features is not None:
        if n_features < width:
            raise InvalidArgumentException(f"Feature index {width} exceeds the declared dimension {n_features}")
        width = n_features
    features = sparse.csr_matrix((np.asarray(data, dtype=float), np.asarray(indices, dtype=np.int64),
                                  np.asarray(indptr, dtype=np.int64)), shape=(len(labels), width))
    logger.debug("LIBSVM dataset with %d rows and %d features", len(labels), width)
    return Dataset(features, np.asarray(labels, dtype=np.int64))


def _decoded(lines: Iterable[bytes]) -> Iterator[str]:
    for lineno, raw in enumerate(lines, 1):
        try:
            yield raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise LibsvmParseException("not valid UTF-8", line=lineno, token=repr(raw[e.start:e.end]),
                                       column=len(raw[:e.start].decode("utf-8"))) from None


def read_libsvm(path: str, n_features: Optional[int] = None) -> Dataset:
    """Parse the file at ``path``; a file that cannot be opened is a :class:`ConfigException`."""
    try:
        with open(path, "rb") as f:
            return parse_libsvm(_decoded(f), n_features=n_features)
    except OSError as e:
        raise ConfigException(f"Can not read dataset {path!r}: {e.strerror}", fields=("dataset",)) from None


def format_libsvm(dataset: Dataset) -> str:
    """Canonical text: labels ``1``/``0`` and ascending 1-based ``idx:val`` pairs."""
    out = []
    for label, row in dataset.rows():
        pairs = " ".join(f"{col + 1}:{value!r}" for col, value in sorted(row.items()))
        out.append(f"{label} {pairs}" if pairs else str(label))
    return "\n".join(out) + ("\n" if out else "")
