"""Clock-count model for residue and binary arithmetic, and table generation.

The binary side is a model only: an ``n``-bit word is split into
``N = ceil(n/Q)`` digits of ``Q`` bits and each algorithm is charged the
usual digit-count formula.  All logarithms are base 2.

Tables 2, 3 and 5 of the digit-growth analysis are regenerated from the
natural ``Q``-bit systems.  Their printed conventions are reproduced as
found: integer bit widths are ``ceil(n_e)``, Table 2 rounds ``n_e * 0.301``
for its decimal-digit column (log10 2 truncated to three places), and
Table 5 derives its columns from ``ceil(n_e)`` and reports ``log2(p)/Q`` as
its ratio column.

Rows can be built from either digit-width construction.  The printed
Table 5 rows for Q=6 and Q=7 agree with the power-augmented systems while
its other rows, and all of Tables 2 and 3, agree with the natural ones.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .number_system import max_system_for_digit_width, metrics, natural_system, power_augmented_system
from .steps import StepCounter

KARATSUBA_EXPONENT = 1.585
STRASSEN_EXPONENT = 2.807
TABLE2_LOG10_2 = 0.301


@dataclass(frozen=True)
class CostParams:
    Q: int
    p: int
    n: float
    n_e: float
    N: int


@dataclass
class CostReport:
    params: CostParams
    rns: dict[str, float | tuple[int, int]]
    binary: dict[str, float]
    measured: dict[str, list[int]] = field(default_factory=dict)

    def matrix(self, M: int) -> dict[str, float]:
        """Clock totals for an ``M x M`` product in each arithmetic."""
        p, N = self.params.p, self.params.N
        return {
            "binary_standard": M**3 * 2 * N,
            "binary_strassen": M**STRASSEN_EXPONENT * 2 * N,
            "rns_delayed": M**3 + M**2 * 2 * p,
            "rns_delayed_exact": M**3 + M**2 * (M - 1) + M**2 * 2 * p,
        }


def cost_report(p: int, Q: int, n: float) -> CostReport:
    N = math.ceil(n / Q)
    params = CostParams(Q=Q, p=p, n=n, n_e=n, N=N)
    rns = {
        "add": 1,
        "sub": 1,
        "int_mul": 1,
        "frac_mul": (p, 2 * p),
        "compare": p,
        "reverse": p,
        "forward": N,
    }
    binary = {
        "schoolbook_add": N,
        "lookahead_add": N / math.log2(N) if N > 1 else 1.0,
        "digit_mul": 2 * N,
        "karatsuba": N**KARATSUBA_EXPONENT,
        "newton_div": N,
    }
    return CostReport(params, rns, binary)


def model_for(Q: int) -> tuple[CostParams, CostReport]:
    """Model of the widest natural system with ``Q``-bit digits."""
    if not 4 <= Q <= 20:
        raise ValueError(f"Q must be in 4..20, got {Q}")
    m = metrics(max_system_for_digit_width(Q))
    report = cost_report(m.p, Q, m.n_e)
    return report.params, report


# -- tables -----------------------------------------------------------------


@dataclass
class Table:
    table_id: str
    columns: list[str]
    rows: list[list]
    decimals: list[int | None]

    def formatted_rows(self) -> list[list[str]]:
        out = []
        for row in self.rows:
            out.append([_fmt(v, d) for v, d in zip(row, self.decimals)])
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        w.writerows(self.formatted_rows())
        return buf.getvalue()

    def to_json(self) -> str:
        rows = [[_json_value(v, d) for v, d in zip(r, self.decimals)] for r in self.rows]
        return json.dumps({"table_id": self.table_id, "columns": self.columns, "rows": rows}, indent=2) + "\n"

    def to_text(self) -> str:
        body = self.formatted_rows()
        widths = [max(len(c), *(len(r[i]) for r in body)) for i, c in enumerate(self.columns)]
        lines = ["  ".join(c.rjust(w) for c, w in zip(self.columns, widths))]
        lines += ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in body]
        return "\n".join(lines) + "\n"

    def render(self, fmt: str = "text") -> str:
        return {"csv": self.to_csv, "json": self.to_json, "text": self.to_text}[fmt]()


def _fmt(v, decimals: int | None) -> str:
    if v is None:
        return ""
    if decimals is None:
        return str(v)
    return f"{v:.{decimals}f}"


def _json_value(v, decimals: int | None):
    if v is None or decimals is None:
        return v
    return round(v, decimals)


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


CONSTRUCTIONS = {
    "natural": max_system_for_digit_width,
    "power-augmented": power_augmented_system,
}


def _metrics_for(Q: int, construction: str):
    try:
        build = CONSTRUCTIONS[construction]
    except KeyError:
        raise ValueError(f"unknown construction {construction!r}; choose from {', '.join(CONSTRUCTIONS)}") from None
    return metrics(build(Q))


def table2_row(Q: int, construction: str = "natural") -> list:
    m = _metrics_for(Q, construction)
    return [Q, m.p, _round_half_up(m.n_e * TABLE2_LOG10_2), math.ceil(m.n_e), m.p / m.n_e]


def table3_row(Q: int, construction: str = "natural") -> list:
    m = _metrics_for(Q, construction)
    return [Q, m.p, m.binary_digits, m.n_e, m.P]


def table5_row(Q: int, construction: str = "natural") -> list:
    m = _metrics_for(Q, construction)
    ne = math.ceil(m.n_e)
    lp = math.log2(m.p)
    return [Q, m.p, ne, lp, ne / lp, lp / Q, ne / Q, _round_half_up(2 * ne / Q)]


TABLE_LAYOUT = {
    "2": (
        ["Q", "p", "decimal_digits", "n_e", "p/n_e"],
        [None, None, None, None, 2],
        table2_row,
    ),
    "3": (
        ["Q", "p", "binary_digits", "n_e", "P"],
        [None, None, None, 2, None],
        table3_row,
    ),
    "5": (
        ["Q", "p", "n_e", "log2(p)", "n_e/log2(p)", "log2(p)/Q", "n_e/Q", "2*n_e/Q"],
        [None, None, None, 5, 2, 4, 2, None],
        table5_row,
    ),
}


def emit_table(table_id: int | str, q_range: Iterable[int], construction: str = "natural") -> Table:
    key = str(table_id)
    if key not in TABLE_LAYOUT:
        raise ValueError(f"unknown table {table_id!r}; choose from 2, 3, 5")
    columns, decimals, row_fn = TABLE_LAYOUT[key]
    rows = [row_fn(Q, construction) for Q in q_range]
    return Table(key, list(columns), rows, list(decimals))


def emit_graph_data(graph_id: int | str, xs: Iterable[int]) -> Table:
    """Plot series.

    Graph 1: ``x = p``, bit width ``n_e(p)``, the ``n_e / log2(p)``
    approximation and a Karatsuba curve ``n_e ** 1.585``.
    Graph 2: ``x = p``, RNS digits against Q-bit binary digits at equal ``n_e``.
    Graph 3: ``x = Q``, the digit-growth ratio ``log2(p) / Q`` and the exact
    ``log2(p) / log2(P)``.
    """
    key = str(graph_id)
    rows = []
    if key == "1":
        for p in xs:
            n_e = metrics(natural_system(p)).n_e
            approx = n_e / math.log2(p) if p > 1 else None
            rows.append([p, n_e, approx, n_e**KARATSUBA_EXPONENT])
        return Table("graph1", ["p", "n_e", "n_e/log2(p)", "karatsuba"], rows, [None, 4, 4, 2])
    if key == "2":
        for p in xs:
            m = metrics(natural_system(p))
            rows.append([p, m.Q, m.p, m.binary_digits, m.n_e])
        return Table("graph2", ["p", "Q", "rns_digits", "binary_digits", "n_e"], rows, [None, None, None, None, 4])
    if key == "3":
        for Q in xs:
            m = metrics(max_system_for_digit_width(Q))
            lp = math.log2(m.p)
            rows.append([Q, lp / Q, lp / math.log2(m.P)])
        return Table("graph3", ["Q", "log2(p)/Q", "log2(p)/log2(P)"], rows, [None, 4, 4])
    raise ValueError(f"unknown graph {graph_id!r}; choose from 1, 2, 3")


# -- model vs instrumentation -------------------------------------------------


@dataclass
class Validation:
    passed: bool
    violations: list[str]
    checked: int

    def __bool__(self) -> bool:
        return self.passed


INT_OPS = ("add", "sub", "mul", "mul_small", "neg")


def validate_counters(
    report: CostReport,
    measured: StepCounter | dict,
    *,
    expected_normalizations: int | None = None,
) -> Validation:
    """Check instrumented step counts against the model's bounds.

    Integer ops take exactly one step, a fractional multiply ``p..2p``,
    a comparison at most ``2p`` and a reverse conversion exactly ``p``.
    """
    if isinstance(measured, StepCounter):
        snap = measured.snapshot()
    else:
        snap = measured
    samples = snap["samples"]
    p = report.params.p
    bounds = {op: (1, 1) for op in INT_OPS}
    bounds.update(
        {
            "frac_mul": (p, 2 * p),
            "normalize": (p, 2 * p),
            "compare": (1, 2 * p),
            "reverse": (p, p),
            "mrc": (p, p),
        }
    )
    violations, checked = [], 0
    for op, (lo, hi) in bounds.items():
        for i, n in enumerate(samples.get(op, ())):
            checked += 1
            if not lo <= n <= hi:
                violations.append(f"{op}[{i}]: {n} steps outside [{lo}, {hi}]")
    if expected_normalizations is not None:
        checked += 1
        got = snap["normalizations"]
        if got != expected_normalizations:
            violations.append(f"normalizations: {got} != {expected_normalizations}")
    report.measured = {k: list(v) for k, v in samples.items()}
    return Validation(not violations, violations, checked)


def model_inequalities(Q: int) -> dict[str, bool]:
    """The two digit-count inequalities claimed for each table row."""
    m = metrics(max_system_for_digit_width(Q))
    return {
        "p < 2*n_e/Q": m.p < 2 * m.n_e / Q,
        "ceil(n_e/Q) <= n_e/log2(p)": math.ceil(m.n_e / Q) <= m.n_e / math.log2(m.p),
    }


def compare_rows(got: Sequence, expected: Sequence, tolerances: Sequence[float]) -> list[str]:
    """Cell-by-cell comparison; returns a description of every mismatch."""
    out = []
    for k, (g, e, tol) in enumerate(zip(got, expected, tolerances)):
        if abs(g - e) > tol:
            out.append(f"col {k}: {g} vs {e} (tol {tol})")
    return out
