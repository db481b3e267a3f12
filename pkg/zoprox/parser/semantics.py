# pylint: disable=no-self-use


class LibsvmSemantics:
    """Turns a parsed line into ``(label, [(index, value), ...])`` with raw 1-based indices."""

    def number(self, ast):
        return float(ast)

    def index(self, ast):
        return int(ast)

    def feature(self, ast):
        return ast.index, ast.value

    def line(self, ast):
        return ast.label, list(ast.features or ())
