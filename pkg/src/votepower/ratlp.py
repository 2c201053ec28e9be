"""Exact linear programming over the rationals.

A small dense two-phase primal simplex with Bland's rule, running
entirely on :class:`fractions.Fraction`.  No floats, no tolerances: a
returned optimum is exact and comes with a dual certificate that
:func:`verify` re-checks from scratch.

Scope: problems with tens of rows and a few hundred columns, which is
all the classification and bound modules need.  Variables are
nonnegative; optional upper bounds are handled as appended ``<=`` rows,
whose dual multipliers appear after the caller's own constraints in
``LPSolution.dual``.

Certificates
------------
* optimal: primal vector, exact objective, dual vector with
  sign-by-relation, dual feasibility, and strong duality.
* infeasible: a Farkas vector y (in ``dual``) with sense-independent
  signs (">=" rows y_i >= 0, "<=" rows y_i <= 0, "=" free),
  sum_i y_i A_ij <= 0 for every column j, and y . b > 0.
* unbounded: a feasible point plus an improving ray in ``ray``.

Sign conventions checked by :func:`verify`:

==========  ==============  ==============
relation    sense=min       sense=max
==========  ==============  ==============
``>=``      y_i >= 0        y_i <= 0
``<=``      y_i <= 0        y_i >= 0
``=``       free            free
==========  ==============  ==============

with dual feasibility sum_i y_i A_ij <= c_j (min) or >= c_j (max), and
y . b equal to the optimum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exceptions import MalformedLP

_ZERO = Fraction(0)
_ONE = Fraction(1)

RELATIONS = ("<=", "=", ">=")


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """min or max of objective . x subject to rows and 0 <= x (<= ub)."""

    objective: tuple
    sense: str
    constraints: tuple  # of (coefficients, relation, rhs)
    upper_bounds: tuple = None

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise MalformedLP(f"sense must be 'min' or 'max', got {self.sense!r}")
        obj = tuple(Fraction(v) for v in self.objective)
        if not obj:
            raise MalformedLP("need at least one variable")
        object.__setattr__(self, "objective", obj)
        n = len(obj)
        rows = []
        for idx, con in enumerate(self.constraints):
            try:
                coeffs, rel, rhs = con
            except (TypeError, ValueError) as exc:
                raise MalformedLP(f"constraint {idx}: expected (coeffs, rel, rhs)") from exc
            coeffs = tuple(Fraction(v) for v in coeffs)
            if len(coeffs) != n:
                raise MalformedLP(
                    f"constraint {idx}: {len(coeffs)} coefficients for {n} variables"
                )
            if rel not in RELATIONS:
                raise MalformedLP(f"constraint {idx}: bad relation {rel!r}")
            rows.append((coeffs, rel, Fraction(rhs)))
        object.__setattr__(self, "constraints", tuple(rows))
        if self.upper_bounds is not None:
            ubs = tuple(
                None if u is None else Fraction(u) for u in self.upper_bounds
            )
            if len(ubs) != n:
                raise MalformedLP(f"{len(ubs)} upper bounds for {n} variables")
            for u in ubs:
                if u is not None and u < 0:
                    raise MalformedLP(f"negative upper bound {u}")
            object.__setattr__(self, "upper_bounds", ubs)

    @property
    def n(self) -> int:
        return len(self.objective)

    def all_rows(self):
        """Caller constraints followed by upper-bound rows."""
        rows = list(self.constraints)
        if self.upper_bounds is not None:
            for j, u in enumerate(self.upper_bounds):
                if u is not None:
                    coeffs = tuple(
                        _ONE if i == j else _ZERO for i in range(self.n)
                    )
                    rows.append((coeffs, "<=", u))
        return rows


@dataclass(frozen=True)
class LPSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction = None
    primal: tuple = None
    dual: tuple = None  # per row of all_rows(); Farkas vector when infeasible
    ray: tuple = None


def _solve_square(mat, rhs):
    """Exact Gaussian elimination; mat is modified. Returns solution list."""
    m = len(rhs)
    aug = [list(mat[i]) + [rhs[i]] for i in range(m)]
    perm = list(range(m))
    for col in range(m):
        piv = next((r for r in range(col, m) if aug[r][col] != 0), None)
        if piv is None:
            raise MalformedLP("singular basis matrix")  # pragma: no cover
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(m):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return [aug[i][m] for i in range(m)]


class _Tableau:
    """Dense simplex tableau over Fractions with Bland's rule."""

    def __init__(self, a_std, b, basis):
        self.rows = [list(r) + [b[i]] for i, r in enumerate(a_std)]
        self.basis = list(basis)
        self.ncols = len(a_std[0]) if a_std else 0
        # re-normalize so basis columns are unit (true at construction here)

    def pivot(self, row, col):
        R = self.rows[row]
        inv = 1 / R[col]
        self.rows[row] = R = [v * inv for v in R]
        for i, other in enumerate(self.rows):
            if i != row and other[col] != 0:
                f = other[col]
                self.rows[i] = [v - f * w for v, w in zip(other, R)]
        self.basis[row] = col

    def run(self, cost, allowed):
        """Minimize cost . x over the current basis; Bland's rule.

        Returns ("optimal", None) or ("unbounded", entering_col).
        ``allowed[j]`` gates which columns may enter.
        """
        while True:
            # reduced costs from scratch: r_j = c_j - sum_i c_B[i] T[i][j]
            cb = [cost[v] for v in self.basis]
            entering = None
            for j in range(self.ncols):
                if not allowed[j]:
                    continue
                z = _ZERO
                for i, row in enumerate(self.rows):
                    if cb[i] != 0 and row[j] != 0:
                        z += cb[i] * row[j]
                if cost[j] - z < 0:
                    entering = j
                    break  # Bland: smallest index
            if entering is None:
                return "optimal", None
            leave = None
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    if best is None or ratio < best or (
                        ratio == best and self.basis[i] < self.basis[leave]
                    ):
                        best = ratio
                        leave = i
            if leave is None:
                return "unbounded", entering
            self.pivot(leave, entering)

    def value_of(self, col):
        for i, v in enumerate(self.basis):
            if v == col:
                return self.rows[i][-1]
        return _ZERO


def solve(lp: LinearProgram) -> LPSolution:
    """Solve exactly; see module docstring for certificate layout."""
    n = lp.n
    rows = lp.all_rows()
    m = len(rows)
    minimize = lp.sense == "min"
    c = [v if minimize else -v for v in lp.objective]

    # canonicalize rhs >= 0, remember flips for dual reporting
    a = []
    b = []
    rels = []
    flipped = []
    for coeffs, rel, rhs in rows:
        if rhs < 0:
            coeffs = tuple(-v for v in coeffs)
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
            flipped.append(True)
        else:
            flipped.append(False)
        a.append(list(coeffs))
        b.append(rhs)
        rels.append(rel)

    # standard-form columns: originals, slack/surplus, artificials
    slack_of = {}
    ncols = n
    for i, rel in enumerate(rels):
        if rel != "=":
            slack_of[i] = ncols
            ncols += 1
    art_of = {i: ncols + i for i in range(m)}
    total = ncols + m

    a_std = []
    for i in range(m):
        row = a[i] + [_ZERO] * (total - n)
        if i in slack_of:
            row[slack_of[i]] = _ONE if rels[i] == "<=" else -_ONE
        row[art_of[i]] = _ONE
        a_std.append(row)
    cost_full = [_ZERO] * total
    for j, v in enumerate(c):
        cost_full[j] = v
    phase1_cost = [_ZERO] * total
    for i in range(m):
        phase1_cost[art_of[i]] = _ONE

    tab = _Tableau(a_std, b, [art_of[i] for i in range(m)])
    row_of = list(range(m))  # tableau row -> original row index

    allowed = [True] * total
    status, _ = tab.run(phase1_cost, allowed)
    assert status == "optimal"
    phase1_value = sum(
        (tab.rows[i][-1] for i in range(len(tab.rows)) if tab.basis[i] >= ncols),
        _ZERO,
    )
    if phase1_value > 0:
        # Farkas certificate from the phase-1 dual
        y = _dual_from_basis(tab, row_of, a_std, phase1_cost, m)
        y = _report_dual(y, flipped, minimize=True)
        return LPSolution(status="infeasible", dual=tuple(y))

    # drive artificials out of the basis or drop redundant rows
    for i in range(len(tab.rows) - 1, -1, -1):
        if tab.basis[i] >= ncols:
            piv = next(
                (j for j in range(ncols) if tab.rows[i][j] != 0), None
            )
            if piv is None:
                del tab.rows[i]
                del tab.basis[i]
                del row_of[i]
            else:
                tab.pivot(i, piv)

    for j in range(ncols, total):
        allowed[j] = False
    status, entering = tab.run(cost_full, allowed)

    if status == "unbounded":
        d_std = [_ZERO] * total
        d_std[entering] = _ONE
        for i, row in enumerate(tab.rows):
            d_std[tab.basis[i]] = -row[entering]
        x = [tab.value_of(j) for j in range(n)]
        ray = d_std[:n]
        if not minimize:
            pass  # ray direction is sense-independent; improvement checked by verify
        point = tuple(x)
        return LPSolution(status="unbounded", primal=point, ray=tuple(ray))

    x = [tab.value_of(j) for j in range(n)]
    value = sum((cv * xv for cv, xv in zip(c, x)), _ZERO)
    y = _dual_from_basis(tab, row_of, a_std, cost_full, m)
    y = _report_dual(y, flipped, minimize)
    if not minimize:
        value = -value
    return LPSolution(
        status="optimal", value=value, primal=tuple(x), dual=tuple(y)
    )


def _dual_from_basis(tab, row_of, a_std, cost, m):
    """Solve y . B = c_B on the surviving rows; dropped rows get 0."""
    k = len(tab.rows)
    mat = [[a_std[row_of[r]][tab.basis[t]] for r in range(k)] for t in range(k)]
    rhs = [cost[tab.basis[t]] for t in range(k)]
    y_part = _solve_square(mat, rhs) if k else []
    y = [_ZERO] * m
    for r in range(k):
        y[row_of[r]] = y_part[r]
    return y


def _report_dual(y, flipped, minimize):
    out = []
    for yi, fl in zip(y, flipped):
        if fl:
            yi = -yi
        out.append(yi if minimize else -yi)
    return out


def verify(lp: LinearProgram, sol: LPSolution) -> bool:
    """Re-check a solution's certificates exactly, from scratch."""
    rows = lp.all_rows()
    n = lp.n
    minimize = lp.sense == "min"

    def feasible(x):
        if len(x) != n or any(v < 0 for v in x):
            return False
        for coeffs, rel, rhs in rows:
            lhs = sum((cv * xv for cv, xv in zip(coeffs, x)), _ZERO)
            if rel == "<=" and lhs > rhs:
                return False
            if rel == ">=" and lhs < rhs:
                return False
            if rel == "=" and lhs != rhs:
                return False
        return True

    def dual_signs_ok(y):
        for yi, (_, rel, _) in zip(y, rows):
            if rel == "=":
                continue
            geq = yi >= 0
            if minimize:
                want_geq = rel == ">="
            else:
                want_geq = rel == "<="
            if yi != 0 and geq != want_geq:
                return False
        return True

    if sol.status == "optimal":
        if sol.primal is None or sol.dual is None or sol.value is None:
            return False
        if not feasible(sol.primal):
            return False
        obj = sum(
            (cv * xv for cv, xv in zip(lp.objective, sol.primal)), _ZERO
        )
        if obj != sol.value:
            return False
        y = sol.dual
        if len(y) != len(rows) or not dual_signs_ok(y):
            return False
        for j in range(n):
            s = sum((y[i] * rows[i][0][j] for i in range(len(rows))), _ZERO)
            if minimize and s > lp.objective[j]:
                return False
            if not minimize and s < lp.objective[j]:
                return False
        yb = sum((y[i] * rows[i][2] for i in range(len(rows))), _ZERO)
        return yb == sol.value

    if sol.status == "infeasible":
        # Farkas certificates use a fixed, sense-independent convention:
        # ">=" rows y_i >= 0, "<=" rows y_i <= 0, "=" free.
        y = sol.dual
        if y is None or len(y) != len(rows):
            return False
        for yi, (_, rel, _) in zip(y, rows):
            if rel == ">=" and yi < 0:
                return False
            if rel == "<=" and yi > 0:
                return False
        for j in range(n):
            s = sum((y[i] * rows[i][0][j] for i in range(len(rows))), _ZERO)
            if s > 0:
                return False
        yb = sum((y[i] * rows[i][2] for i in range(len(rows))), _ZERO)
        return yb > 0

    if sol.status == "unbounded":
        if sol.primal is None or sol.ray is None:
            return False
        if not feasible(sol.primal):
            return False
        d = sol.ray
        if len(d) != n or any(v < 0 for v in d):
            return False
        if lp.upper_bounds is not None and any(
            u is not None and dv > 0
            for u, dv in zip(lp.upper_bounds, d)
        ):
            return False
        for coeffs, rel, _ in lp.constraints:
            ad = sum((cv * dv for cv, dv in zip(coeffs, d)), _ZERO)
            if rel == "<=" and ad > 0:
                return False
            if rel == ">=" and ad < 0:
                return False
            if rel == "=" and ad != 0:
                return False
        cd = sum((cv * dv for cv, dv in zip(lp.objective, d)), _ZERO)
        return cd < 0 if minimize else cd > 0

    return False


def certified_solve(lp: LinearProgram) -> LPSolution:
    """Solve and re-verify; raises VerificationFailed on any mismatch."""
    from .exceptions import VerificationFailed

    sol = solve(lp)
    if not verify(lp, sol):
        raise VerificationFailed(
            f"simplex produced a {sol.status} result that failed exact re-verification"
        )
    return sol
