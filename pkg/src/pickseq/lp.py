"""Exact feasibility of systems of non-strict linear inequalities.

:func:`feasible` runs a phase-one simplex on an integer (fraction-free)
tableau with Bland's least-index rule.  :func:`fourier_motzkin_feasible`
decides the same question by variable elimination and serves as an
independent check on small systems.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .core import CapacityError, as_rational

log = logging.getLogger(__name__)

LE = "<="
GE = ">="
_RELATIONS = {"<=": LE, "≤": LE, ">=": GE, "≥": GE}

MAX_FM_VARIABLES = 8


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class LinearConstraint:
    coefficients: tuple[Fraction, ...]
    relation: str
    bound: Fraction

    def __post_init__(self):
        if self.relation not in _RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "relation", _RELATIONS[self.relation])
        object.__setattr__(self, "coefficients", tuple(as_rational(c) for c in self.coefficients))
        object.__setattr__(self, "bound", as_rational(self.bound))

    def lhs(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.coefficients, x) if a), Fraction(0))

    def holds(self, x: Sequence[Fraction]) -> bool:
        value = self.lhs(x)
        return value <= self.bound if self.relation == LE else value >= self.bound

    def scaled(self, factor) -> "LinearConstraint":
        factor = as_rational(factor)
        if factor <= 0:
            raise ValueError("only positive rescaling preserves the relation")
        return LinearConstraint(tuple(a * factor for a in self.coefficients), self.relation, self.bound * factor)


def le(coefficients, bound) -> LinearConstraint:
    return LinearConstraint(tuple(coefficients), LE, bound)


def ge(coefficients, bound) -> LinearConstraint:
    return LinearConstraint(tuple(coefficients), GE, bound)


@dataclass(frozen=True)
class FeasibilityResult:
    witness: tuple[Fraction, ...] | None
    pivots: int = field(default=0, compare=False)

    @property
    def feasible(self) -> bool:
        return self.witness is not None

    def __bool__(self) -> bool:
        return self.feasible


def _num_vars(constraints: Sequence[LinearConstraint], num_vars: int | None) -> int:
    n = num_vars if num_vars is not None else (len(constraints[0].coefficients) if constraints else 0)
    for k, c in enumerate(constraints):
        if len(c.coefficients) != n:
            raise DimensionError(f"constraint {k} has {len(c.coefficients)} coefficients, expected {n}")
    return n


def _reduce(row: list[int]) -> list[int]:
    g = 0
    for v in row:
        if v:
            g = gcd(g, v)
            if g == 1:
                return row
    if g > 1:
        return [v // g for v in row]
    return row


def feasible(
    constraints: Sequence[LinearConstraint],
    nonneg_vars: Iterable[int] = (),
    num_vars: int | None = None,
) -> FeasibilityResult:
    """Decide exactly whether some rational point satisfies every constraint.

    Variables listed in ``nonneg_vars`` are additionally bound to be
    nonnegative; the others are free.  A returned witness has been checked
    against every constraint in exact arithmetic.
    """
    constraints = list(constraints)
    n = _num_vars(constraints, num_vars)
    nonneg = frozenset(nonneg_vars)
    if any(not 0 <= j < n for j in nonneg):
        raise DimensionError("nonnegative variable index out of range")

    # structural columns: x_j = pos_j - neg_j for free variables
    pos_col, neg_col = [], []
    ncols = 0
    for j in range(n):
        pos_col.append(ncols)
        ncols += 1
        if j in nonneg:
            neg_col.append(None)
        else:
            neg_col.append(ncols)
            ncols += 1

    prepared = []
    for c in constraints:
        coeffs, rel, b = list(c.coefficients), c.relation, c.bound
        if b < 0 or (b == 0 and rel == GE):
            coeffs = [-a for a in coeffs]
            b = -b
            rel = LE if rel == GE else GE
        prepared.append((coeffs, rel, b))

    slack_start = ncols
    ncols += len(prepared)
    artificial = [rel == GE for _, rel, _ in prepared]
    art_col = {}
    for r, is_art in enumerate(artificial):
        if is_art:
            art_col[r] = ncols
            ncols += 1

    table: list[list[int]] = []
    rhs: list[int] = []
    basis: list[int] = []
    for r, (coeffs, rel, b) in enumerate(prepared):
        scale = lcm(b.denominator, *(a.denominator for a in coeffs))
        row = [0] * ncols
        for j, a in enumerate(coeffs):
            if a:
                v = int(a * scale)
                row[pos_col[j]] = v
                if neg_col[j] is not None:
                    row[neg_col[j]] = -v
        if rel == LE:
            row[slack_start + r] = scale
            basis.append(slack_start + r)
        else:
            row[slack_start + r] = -scale
            row[art_col[r]] = scale
            basis.append(art_col[r])
        table.append(row)
        rhs.append(int(b * scale))

    # phase-one objective: minimise the sum of artificials, kept as a
    # positive multiple of the reduced-cost row
    art_rows = [r for r in range(len(table)) if artificial[r]]
    denom = lcm(*(table[r][art_col[r]] for r in art_rows)) if art_rows else 1
    obj = [0] * ncols
    for col in art_col.values():
        obj[col] = denom
    for r in art_rows:
        f = denom // table[r][art_col[r]]
        for j, v in enumerate(table[r]):
            if v:
                obj[j] -= f * v

    pivots = 0
    while True:
        q = next((j for j, v in enumerate(obj) if v < 0), None)
        if q is None:
            break
        p = None
        for r, row in enumerate(table):
            a = row[q]
            if a <= 0:
                continue
            if p is None:
                p = r
                continue
            # compare rhs[r]/a with rhs[p]/table[p][q]
            lhs_, rhs_ = rhs[r] * table[p][q], rhs[p] * a
            if lhs_ < rhs_ or (lhs_ == rhs_ and basis[r] < basis[p]):
                p = r
        if p is None:  # cannot happen: phase one is bounded below by zero
            raise RuntimeError("phase-one simplex reported an unbounded direction")
        prow, prhs, a = table[p], rhs[p], table[p][q]
        nz = [j for j, v in enumerate(prow) if v]
        for r, row in enumerate(table):
            f = row[q]
            if r == p or not f:
                continue
            new = [a * v for v in row]
            for j in nz:
                new[j] -= f * prow[j]
            new.append(a * rhs[r] - f * prhs)
            new = _reduce(new)
            rhs[r] = new.pop()
            table[r] = new
        f = obj[q]
        obj = [a * v for v in obj]
        for j in nz:
            obj[j] -= f * prow[j]
        obj = _reduce(obj)
        basis[p] = q
        pivots += 1

    for r in range(len(table)):
        if basis[r] in art_col.values() and rhs[r] != 0:
            log.debug("infeasible after %d pivots", pivots)
            return FeasibilityResult(None, pivots)

    values = [Fraction(0)] * ncols
    for r, col in enumerate(basis):
        values[col] = Fraction(rhs[r], table[r][col])
    witness = tuple(
        values[pos_col[j]] - (values[neg_col[j]] if neg_col[j] is not None else 0) for j in range(n)
    )
    check_witness(constraints, nonneg, witness)
    log.debug("feasible after %d pivots", pivots)
    return FeasibilityResult(witness, pivots)


def check_witness(constraints: Sequence[LinearConstraint], nonneg: Iterable[int], x: Sequence[Fraction]) -> None:
    for j in nonneg:
        if x[j] < 0:
            raise RuntimeError(f"simplex witness violates x{j + 1} >= 0")
    for k, c in enumerate(constraints):
        if not c.holds(x):
            raise RuntimeError(f"simplex witness violates constraint {k}: {format_constraint(c)}")


def fourier_motzkin_feasible(
    constraints: Sequence[LinearConstraint],
    nonneg_vars: Iterable[int] = (),
    num_vars: int | None = None,
) -> bool:
    """Decide feasibility by eliminating the variables one at a time.

    Derived rows combining more than k+1 originals after k eliminations are
    dropped (Chernikov's rule); they are always redundant.
    """
    constraints = list(constraints)
    n = _num_vars(constraints, num_vars)
    if n > MAX_FM_VARIABLES:
        raise CapacityError(f"Fourier-Motzkin is limited to {MAX_FM_VARIABLES} variables, got {n}")

    # every row is  a.x <= b, tagged with the originals it was built from
    rows: dict[tuple, frozenset[int]] = {}

    def add(coeffs, b, history, into):
        lead = next((abs(a) for a in coeffs if a), None)
        if lead is None:
            if b >= 0:
                return
            key = (tuple(coeffs), Fraction(-1))
        else:
            key = (tuple(a / lead for a in coeffs), b / lead)
        old = into.get(key)
        if old is None or len(history) < len(old):
            into[key] = history

    originals = []
    for c in constraints:
        if c.relation == LE:
            originals.append((list(c.coefficients), c.bound))
        else:
            originals.append(([-a for a in c.coefficients], -c.bound))
    for j in frozenset(nonneg_vars):
        unit = [Fraction(0)] * n
        unit[j] = Fraction(-1)
        originals.append((unit, Fraction(0)))
    for k, (coeffs, b) in enumerate(originals):
        add(coeffs, b, frozenset([k]), rows)

    for var in range(n):
        pos, neg, nxt = [], [], {}
        for (coeffs, b), hist in rows.items():
            a = coeffs[var]
            if a > 0:
                pos.append((coeffs, b, hist))
            elif a < 0:
                neg.append((coeffs, b, hist))
            else:
                nxt[(coeffs, b)] = hist
        for pc, pb, ph in pos:
            for nc, nb, nh in neg:
                hist = ph | nh
                if len(hist) > var + 2:
                    continue
                fp, fn = 1 / pc[var], -1 / nc[var]
                coeffs = tuple(x * fp + y * fn for x, y in zip(pc, nc))
                add(coeffs, pb * fp + nb * fn, hist, nxt)
        rows = nxt
    return all(b >= 0 for (_, b) in rows)


def format_constraint(c: LinearConstraint, names: Sequence[str] | None = None) -> str:
    names = names or [f"x{j + 1}" for j in range(len(c.coefficients))]
    terms = []
    for a, name in zip(c.coefficients, names):
        if not a:
            continue
        sign = "-" if a < 0 else "+"
        mag = abs(a)
        text = name if mag == 1 else f"{mag} {name}"
        terms.append((sign, text))
    if not terms:
        expr = "0"
    else:
        first_sign, first = terms[0]
        expr = ("-" if first_sign == "-" else "") + first
        expr += "".join(f" {s} {t}" for s, t in terms[1:])
    return f"{expr} {c.relation} {c.bound}"


def format_system(
    constraints: Sequence[LinearConstraint],
    nonneg_vars: Iterable[int] = (),
    names: Sequence[str] | None = None,
) -> str:
    """Plain-text dump, one inequality per line."""
    lines = [format_constraint(c, names) for c in constraints]
    for j in sorted(nonneg_vars):
        name = names[j] if names else f"x{j + 1}"
        lines.append(f"{name} >= 0")
    return "\n".join(lines) + "\n"
