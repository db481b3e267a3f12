import os

import tatsu

_grammar = os.path.join(os.path.dirname(__file__), "libsvm.ebnf")

with open(_grammar) as f:
    grammar = f.read()

lang = tatsu.compile(grammar)

from zoprox.parser.reader import format_libsvm, parse_libsvm, read_libsvm  # noqa: E402
