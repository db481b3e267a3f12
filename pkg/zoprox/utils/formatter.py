import math
from typing import Any, List, Sequence


def _cell(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.6g}"
    return str(value)


def format_table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """Render rows as a left aligned plain text table."""
    cells: List[List[str]] = [[str(h) for h in header]]
    cells.extend([_cell(v) for v in row] for row in rows)
    widths = [max(len(row[col]) for row in cells) for col in range(len(header))]

    def render(row):
        return "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()

    rule = "  ".join("-" * w for w in widths)
    return "\n".join([render(cells[0]), rule] + [render(r) for r in cells[1:]])
