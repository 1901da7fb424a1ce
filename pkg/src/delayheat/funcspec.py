"""Problem-data functions: a small expression language plus sampled grids.

Coefficient-level problem data (initial values, boundary traces, forcing)
enters the solvers as :class:`FunctionSpec` objects.  A spec is either

* an expression in the variables ``x`` and ``t`` — parsed from text by
  :func:`parse_expression` and differentiated symbolically, or
* a sampled grid (1D in ``x`` or ``t``, or a 2D rectangle) interpolated
  linearly or with cubic splines, or
* an algebraic combination of other specs (sums, scalings, exponential
  weights, time shifts) built with the ``fs_*`` helpers; these carry exact
  differentiation rules so solver-side changes of variables stay symbolic.

Expression grammar (ASCII, whitespace-insensitive)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | power
    power   := atom ('^' factor)?          (right-associative)
    atom    := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

Variables: ``x``, ``t``.  Named constants: ``pi`` (always bound), ``l`` and
``tau`` (bound when a problem is loaded).  Functions: ``sin``, ``cos``,
``exp``, ``log``, ``sqrt``, ``abs``.  ``^`` binds tighter than unary minus,
so ``-x^2`` means ``-(x^2)``.

Printing an AST with :func:`to_string` and re-parsing yields a structurally
identical AST (all ASTs produced by this module keep numeric literals
non-negative; a leading minus is represented by a unary-minus node).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DomainError,
    InputError,
    NumericError,
    ParseError,
    UnsupportedOperationError,
)

VARIABLES = ("x", "t")
FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt", "abs")
CONSTANTS = ("pi", "l", "tau")


# ---------------------------------------------------------------------------
# AST nodes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str  # 'x' or 't'


@dataclass(frozen=True)
class Const:
    name: str  # 'pi', 'l', 'tau'


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Bin:
    op: str  # one of + - * / ^
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object


# ---------------------------------------------------------------------------
# Tokenizer / recursive-descent parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
)


def _tokenize(src):
    tokens = []
    pos = 0
    n = len(src)
    while pos < n:
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", pos)
        if m.lastgroup == "num":
            tokens.append(("num", float(m.group()), pos))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group(), pos))
        else:
            tokens.append((m.group(), m.group(), pos))
        pos = m.end()
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, src):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.peek()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {self._describe(tok)}", tok[2])
        return self.advance()

    @staticmethod
    def _describe(tok):
        return "end of input" if tok[0] == "end" else repr(
            tok[1] if tok[0] != "num" else tok[1]
        )

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected trailing input {self._describe(tok)}", tok[2])
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            node = Bin(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.advance()[0]
            node = Bin(op, node, self.factor())
        return node

    def factor(self):
        if self.peek()[0] == "-":
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.advance()
            return Bin("^", base, self.factor())
        return base

    def atom(self):
        tok = self.peek()
        kind, value, pos = tok
        if kind == "num":
            self.advance()
            return Num(value)
        if kind == "name":
            self.advance()
            if self.peek()[0] == "(":
                if value not in FUNCTIONS:
                    raise ParseError(f"unknown function {value!r}", pos)
                self.advance()
                arg = self.expr()
                self.expect(")")
                return Call(value, arg)
            if value in VARIABLES:
                return Var(value)
            if value in CONSTANTS:
                return Const(value)
            raise ParseError(f"unknown identifier {value!r}", pos)
        if kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"expected a value, found {self._describe(tok)}", pos)


def parse_expression(src):
    """Parse expression source into an AST; raise ParseError with offset."""
    if not isinstance(src, str):
        raise InputError(f"expression source must be a string, got {type(src).__name__}")
    return _Parser(src).parse()


# ---------------------------------------------------------------------------
# Printing (inverse of parsing, up to whitespace)
# ---------------------------------------------------------------------------

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(node):
    if isinstance(node, Bin):
        return {"+": _PREC_ADD, "-": _PREC_ADD, "*": _PREC_MUL, "/": _PREC_MUL, "^": _PREC_POW}[node.op]
    if isinstance(node, Neg):
        return _PREC_NEG
    return _PREC_ATOM


def _wrap(node, min_prec):
    s = to_string(node)
    return f"({s})" if _prec(node) < min_prec else s


def to_string(node):
    """Render an AST back to grammar-conformant source text."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, (Var, Const)):
        return node.name
    if isinstance(node, Call):
        return f"{node.fn}({to_string(node.arg)})"
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, _PREC_NEG)
    if isinstance(node, Bin):
        if node.op in ("+", "-"):
            return f"{_wrap(node.left, _PREC_ADD)} {node.op} {_wrap(node.right, _PREC_MUL)}"
        if node.op in ("*", "/"):
            return f"{_wrap(node.left, _PREC_MUL)} {node.op} {_wrap(node.right, _PREC_NEG)}"
        return f"{_wrap(node.left, _PREC_ATOM)}^{_wrap(node.right, _PREC_NEG)}"
    raise InputError(f"not an AST node: {node!r}")


# ---------------------------------------------------------------------------
# Symbolic differentiation with light folding
# ---------------------------------------------------------------------------


def _num(v):
    # Keep literals non-negative so printing round-trips structurally.
    v = float(v)
    if not math.isfinite(v):
        raise NumericError("constant folding produced a non-finite value")
    return Num(v) if v >= 0.0 else Neg(Num(-v))


def _is_num(node, value=None):
    return isinstance(node, Num) and (value is None or node.value == value)


def _add(a, b):
    if _is_num(a) and _is_num(b):
        return _num(a.value + b.value)
    if _is_num(a, 0.0):
        return b
    if _is_num(b, 0.0):
        return a
    return Bin("+", a, b)


def _sub(a, b):
    if _is_num(a) and _is_num(b):
        return _num(a.value - b.value)
    if _is_num(b, 0.0):
        return a
    if _is_num(a, 0.0):
        return _neg(b)
    return Bin("-", a, b)


def _mul(a, b):
    if _is_num(a) and _is_num(b):
        return _num(a.value * b.value)
    if _is_num(a, 0.0) or _is_num(b, 0.0):
        return Num(0.0)
    if _is_num(a, 1.0):
        return b
    if _is_num(b, 1.0):
        return a
    return Bin("*", a, b)


def _div(a, b):
    if _is_num(a, 0.0) and not _is_num(b, 0.0):
        return Num(0.0)
    if _is_num(b, 1.0):
        return a
    return Bin("/", a, b)


def _pow(a, b):
    if _is_num(b, 1.0):
        return a
    if _is_num(b, 0.0):
        return Num(1.0)
    return Bin("^", a, b)


def _neg(a):
    if _is_num(a, 0.0):
        return a
    if isinstance(a, Neg):
        return a.operand
    return Neg(a)


def diff_ast(node, var):
    """Symbolic partial derivative of an AST with respect to 'x' or 't'."""
    if var not in VARIABLES:
        raise InputError(f"differentiation variable must be 'x' or 't', got {var!r}")
    if isinstance(node, Num) or isinstance(node, Const):
        return Num(0.0)
    if isinstance(node, Var):
        return Num(1.0) if node.name == var else Num(0.0)
    if isinstance(node, Neg):
        return _neg(diff_ast(node.operand, var))
    if isinstance(node, Bin):
        ld = diff_ast(node.left, var)
        rd = diff_ast(node.right, var)
        if node.op == "+":
            return _add(ld, rd)
        if node.op == "-":
            return _sub(ld, rd)
        if node.op == "*":
            return _add(_mul(ld, node.right), _mul(node.left, rd))
        if node.op == "/":
            return _div(_sub(_mul(ld, node.right), _mul(node.left, rd)),
                        _pow(node.right, Num(2.0)))
        # u^v: power rule when the exponent is constant, else exp/log form.
        u, v = node.left, node.right
        if _is_num(rd, 0.0):
            return _mul(_mul(v, _pow(u, _sub(v, Num(1.0)))), ld)
        if _is_num(ld, 0.0):
            return _mul(_mul(_pow(u, v), Call("log", u)), rd)
        return _mul(_pow(u, v),
                    _add(_mul(rd, Call("log", u)), _div(_mul(v, ld), u)))
    if isinstance(node, Call):
        ad = diff_ast(node.arg, var)
        u = node.arg
        if node.fn == "sin":
            outer = Call("cos", u)
        elif node.fn == "cos":
            outer = _neg(Call("sin", u))
        elif node.fn == "exp":
            outer = Call("exp", u)
        elif node.fn == "log":
            return _div(ad, u)
        elif node.fn == "sqrt":
            return _div(ad, _mul(Num(2.0), Call("sqrt", u)))
        elif node.fn == "abs":
            # sign(u) expressed inside the grammar; undefined at u = 0.
            outer = _div(u, Call("abs", u))
        else:
            raise InputError(f"unknown function {node.fn!r}")
        return _mul(outer, ad)
    raise InputError(f"not an AST node: {node!r}")


# ---------------------------------------------------------------------------
# AST evaluation (vectorized over numpy arrays)
# ---------------------------------------------------------------------------


def _eval_ast(node, x, t, consts):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x if node.name == "x" else t
    if isinstance(node, Const):
        try:
            return consts[node.name]
        except KeyError:
            raise InputError(f"constant {node.name!r} is not bound") from None
    if isinstance(node, Neg):
        return -_eval_ast(node.operand, x, t, consts)
    if isinstance(node, Bin):
        a = _eval_ast(node.left, x, t, consts)
        b = _eval_ast(node.right, x, t, consts)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            if np.any(np.asarray(b) == 0.0):
                raise DomainError("division by zero")
            return a / b
        a_arr, b_arr = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
        frac_exp = b_arr != np.floor(b_arr)
        if np.any((a_arr < 0.0) & frac_exp):
            raise DomainError("negative base raised to a non-integer power")
        if np.any((a_arr == 0.0) & (b_arr < 0.0)):
            raise DomainError("zero raised to a negative power")
        with np.errstate(over="ignore"):
            return np.power(a, b)
    if isinstance(node, Call):
        u = _eval_ast(node.arg, x, t, consts)
        if node.fn == "sin":
            return np.sin(u)
        if node.fn == "cos":
            return np.cos(u)
        if node.fn == "exp":
            with np.errstate(over="ignore"):
                return np.exp(u)
        if node.fn == "log":
            if np.any(np.asarray(u) <= 0.0):
                raise DomainError("log of a non-positive value")
            return np.log(u)
        if node.fn == "sqrt":
            if np.any(np.asarray(u) < 0.0):
                raise DomainError("sqrt of a negative value")
            return np.sqrt(u)
        if node.fn == "abs":
            return np.abs(u)
    raise InputError(f"not an AST node: {node!r}")


def free_constants(node):
    """Set of named-constant names appearing in an AST."""
    if isinstance(node, Const):
        return {node.name}
    if isinstance(node, Neg):
        return free_constants(node.operand)
    if isinstance(node, Bin):
        return free_constants(node.left) | free_constants(node.right)
    if isinstance(node, Call):
        return free_constants(node.arg)
    return set()


# ---------------------------------------------------------------------------
# FunctionSpec hierarchy
# ---------------------------------------------------------------------------


class FunctionSpec:
    """Evaluable function of (x, t) with partial derivatives.

    ``spec(x, t)`` broadcasts its arguments elementwise; scalar inputs give a
    float back.  ``differentiate(var, order)`` returns a new spec; sampled
    representations raise :class:`UnsupportedOperationError` once the order
    exceeds what the interpolant supports, and ``smoothness(var)`` reports the
    remaining trustworthy order (``None`` means unlimited).
    """

    def __call__(self, x, t):
        x_arr = np.asarray(x, dtype=float)
        t_arr = np.asarray(t, dtype=float)
        shape = np.broadcast_shapes(x_arr.shape, t_arr.shape)
        out = self._evaluate(x_arr, t_arr)
        out = np.broadcast_to(np.asarray(out, dtype=float), shape)
        if not np.all(np.isfinite(out)):
            raise NumericError(f"{type(self).__name__} produced a non-finite value")
        if shape == ():
            return float(out)
        return np.array(out)

    def _evaluate(self, x, t):
        raise NotImplementedError

    def differentiate(self, var, order=1):
        if var not in VARIABLES:
            raise InputError(f"differentiation variable must be 'x' or 't', got {var!r}")
        if order not in (1, 2):
            raise InputError(f"derivative order must be 1 or 2, got {order!r}")
        budget = self.smoothness(var)
        if budget is not None and order > budget:
            raise UnsupportedOperationError(
                f"{type(self).__name__} supports d/d{var} only up to order {budget}"
            )
        out = self
        for _ in range(order):
            out = out._diff_once(var)
        return out

    def _diff_once(self, var):
        raise NotImplementedError

    def smoothness(self, var):
        return None


@dataclass
class ExprFunction(FunctionSpec):
    """Expression-backed spec; differentiation is symbolic."""

    ast: object
    consts: dict = field(default_factory=dict)

    def __post_init__(self):
        merged = {"pi": math.pi}
        merged.update(self.consts)
        self.consts = merged

    def _evaluate(self, x, t):
        return _eval_ast(self.ast, x, t, self.consts)

    def _diff_once(self, var):
        return ExprFunction(diff_ast(self.ast, var), dict(self.consts))

    def bind(self, **values):
        merged = dict(self.consts)
        merged.update({k: float(v) for k, v in values.items()})
        return ExprFunction(self.ast, merged)

    @property
    def source(self):
        return to_string(self.ast)


def parse_function(src, **consts):
    """Parse source text into an ExprFunction, binding named constants."""
    return ExprFunction(parse_expression(src), dict(consts))


def fs_const(value):
    v = float(value)
    return ExprFunction(_num(v))


@dataclass
class Sampled1DFunction(FunctionSpec):
    """Values sampled on a strictly increasing 1D grid in ``x`` or ``t``."""

    var: str
    points: np.ndarray
    values: np.ndarray
    kind: str = "cubic"
    budget: int = None

    def __post_init__(self):
        if self.var not in VARIABLES:
            raise InputError(f"sample variable must be 'x' or 't', got {self.var!r}")
        if self.kind not in ("linear", "cubic"):
            raise InputError(f"interpolation kind must be 'linear' or 'cubic', got {self.kind!r}")
        self.points = np.asarray(self.points, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.points.ndim != 1 or self.points.shape != self.values.shape:
            raise InputError("sample points and values must be 1D arrays of equal length")
        if not (np.all(np.isfinite(self.points)) and np.all(np.isfinite(self.values))):
            raise InputError("sample data must be finite")
        if np.any(np.diff(self.points) <= 0.0):
            raise InputError("sample points must be strictly increasing")
        min_pts = 4 if self.kind == "cubic" else 2
        if self.points.size < min_pts:
            raise InputError(f"{self.kind} interpolation needs at least {min_pts} points")
        if self.budget is None:
            self.budget = 2 if self.kind == "cubic" else 1
        self._spline = None

    def _axis_values(self, x, t):
        u = x if self.var == "x" else t
        lo, hi = self.points[0], self.points[-1]
        tol = 1e-9 * max(hi - lo, 1.0)
        if np.any(u < lo - tol) or np.any(u > hi + tol):
            raise DomainError(
                f"sample evaluation outside [{lo!r}, {hi!r}] in {self.var}"
            )
        return np.clip(u, lo, hi)

    def _evaluate(self, x, t):
        u = self._axis_values(x, t)
        if self.kind == "linear":
            return np.interp(u, self.points, self.values)
        if self._spline is None:
            from scipy.interpolate import CubicSpline

            self._spline = CubicSpline(self.points, self.values)
        return self._spline(u)

    def smoothness(self, var):
        return self.budget if var == self.var else None

    def _diff_once(self, var):
        if var != self.var:
            return fs_const(0.0)
        if self.kind == "linear":
            grads = np.gradient(self.values, self.points)
            return Sampled1DFunction(self.var, self.points, grads, "linear",
                                     budget=self.budget - 1)
        from scipy.interpolate import CubicSpline

        if self._spline is None:
            self._spline = CubicSpline(self.points, self.values)
        deriv = self._spline.derivative(1)
        return _PPolyFunction(self.var, deriv, self.budget - 1,
                              (self.points[0], self.points[-1]))


@dataclass
class _PPolyFunction(FunctionSpec):
    """Derivative of a cubic-sampled spec (piecewise polynomial)."""

    var: str
    ppoly: object
    budget: int
    domain: tuple

    def _evaluate(self, x, t):
        u = x if self.var == "x" else t
        lo, hi = self.domain
        tol = 1e-9 * max(hi - lo, 1.0)
        if np.any(u < lo - tol) or np.any(u > hi + tol):
            raise DomainError(f"sample evaluation outside [{lo!r}, {hi!r}] in {self.var}")
        return self.ppoly(np.clip(u, lo, hi))

    def smoothness(self, var):
        return self.budget if var == self.var else None

    def _diff_once(self, var):
        if var != self.var:
            return fs_const(0.0)
        return _PPolyFunction(self.var, self.ppoly.derivative(1), self.budget - 1,
                              self.domain)


@dataclass
class Sampled2DFunction(FunctionSpec):
    """Values sampled on a rectangular (x, t) grid."""

    x_points: np.ndarray
    t_points: np.ndarray
    values: np.ndarray  # shape (len(x_points), len(t_points))
    kind: str = "cubic"
    budgets: dict = None

    def __post_init__(self):
        if self.kind not in ("linear", "cubic"):
            raise InputError(f"interpolation kind must be 'linear' or 'cubic', got {self.kind!r}")
        self.x_points = np.asarray(self.x_points, dtype=float)
        self.t_points = np.asarray(self.t_points, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.x_points.size, self.t_points.size):
            raise InputError("2D sample values must have shape (len(x_points), len(t_points))")
        for pts, name in ((self.x_points, "x"), (self.t_points, "t")):
            if np.any(np.diff(pts) <= 0.0):
                raise InputError(f"{name} sample points must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise InputError("sample data must be finite")
        min_pts = 4 if self.kind == "cubic" else 2
        if self.x_points.size < min_pts or self.t_points.size < min_pts:
            raise InputError(f"{self.kind} interpolation needs at least {min_pts} points per axis")
        if self.budgets is None:
            b = 2 if self.kind == "cubic" else 1
            self.budgets = {"x": b, "t": b}
        self._interp = None

    def _clipped(self, u, pts, name):
        lo, hi = pts[0], pts[-1]
        tol = 1e-9 * max(hi - lo, 1.0)
        if np.any(u < lo - tol) or np.any(u > hi + tol):
            raise DomainError(f"sample evaluation outside [{lo!r}, {hi!r}] in {name}")
        return np.clip(u, lo, hi)

    def _evaluate(self, x, t):
        xb, tb = np.broadcast_arrays(x, t)
        xc = self._clipped(xb, self.x_points, "x")
        tc = self._clipped(tb, self.t_points, "t")
        if self.kind == "cubic":
            if self._interp is None:
                from scipy.interpolate import RectBivariateSpline

                self._interp = RectBivariateSpline(
                    self.x_points, self.t_points, self.values, kx=3, ky=3, s=0
                )
            flat = self._interp.ev(np.ravel(xc), np.ravel(tc))
            return flat.reshape(np.shape(xc))
        if self._interp is None:
            from scipy.interpolate import RegularGridInterpolator

            self._interp = RegularGridInterpolator(
                (self.x_points, self.t_points), self.values, method="linear"
            )
        pts = np.column_stack([np.ravel(xc), np.ravel(tc)])
        return self._interp(pts).reshape(np.shape(xc))

    def smoothness(self, var):
        return self.budgets[var]

    def _diff_once(self, var):
        if self.kind == "linear":
            axis = 0 if var == "x" else 1
            pts = self.x_points if var == "x" else self.t_points
            grads = np.gradient(self.values, pts, axis=axis)
            budgets = dict(self.budgets)
            budgets[var] -= 1
            return Sampled2DFunction(self.x_points, self.t_points, grads, "linear",
                                     budgets=budgets)
        from scipy.interpolate import RectBivariateSpline

        if self._interp is None:
            self._interp = RectBivariateSpline(
                self.x_points, self.t_points, self.values, kx=3, ky=3, s=0
            )
        dx, dy = (1, 0) if var == "x" else (0, 1)
        budgets = dict(self.budgets)
        budgets[var] -= 1
        return _RectSplineFunction(
            self._interp.partial_derivative(dx, dy),
            (self.x_points[0], self.x_points[-1]),
            (self.t_points[0], self.t_points[-1]),
            budgets,
        )


@dataclass
class _RectSplineFunction(FunctionSpec):
    """Partial derivative of a cubic 2D sampled spec."""

    spline: object
    x_domain: tuple
    t_domain: tuple
    budgets: dict

    def _evaluate(self, x, t):
        xb, tb = np.broadcast_arrays(x, t)

        def clip(u, dom, name):
            lo, hi = dom
            tol = 1e-9 * max(hi - lo, 1.0)
            if np.any(u < lo - tol) or np.any(u > hi + tol):
                raise DomainError(f"sample evaluation outside [{lo!r}, {hi!r}] in {name}")
            return np.clip(u, lo, hi)

        xc = clip(xb, self.x_domain, "x")
        tc = clip(tb, self.t_domain, "t")
        flat = self.spline(np.ravel(xc), np.ravel(tc), grid=False)
        return np.asarray(flat, dtype=float).reshape(np.shape(xc))

    def smoothness(self, var):
        return self.budgets[var]

    def _diff_once(self, var):
        dx, dy = (1, 0) if var == "x" else (0, 1)
        budgets = dict(self.budgets)
        budgets[var] -= 1
        return _RectSplineFunction(self.spline.partial_derivative(dx, dy),
                                   self.x_domain, self.t_domain, budgets)


# ---------------------------------------------------------------------------
# Combinators (exact differentiation rules for solver-side transformations)
# ---------------------------------------------------------------------------


def _min_budget(values):
    finite = [v for v in values if v is not None]
    return min(finite) if finite else None


@dataclass
class SummedFunction(FunctionSpec):
    parts: tuple

    def _evaluate(self, x, t):
        total = 0.0
        for p in self.parts:
            total = total + p._evaluate(x, t)
        return total

    def smoothness(self, var):
        return _min_budget([p.smoothness(var) for p in self.parts])

    def _diff_once(self, var):
        return SummedFunction(tuple(p._diff_once(var) for p in self.parts))


@dataclass
class ScaledFunction(FunctionSpec):
    base: FunctionSpec
    factor: float

    def _evaluate(self, x, t):
        return self.factor * self.base._evaluate(x, t)

    def smoothness(self, var):
        return self.base.smoothness(var)

    def _diff_once(self, var):
        return ScaledFunction(self.base._diff_once(var), self.factor)


@dataclass
class ExpWeightedFunction(FunctionSpec):
    """exp(offset + coef_x*x + coef_t*t) * base(x, t)."""

    base: FunctionSpec
    coef_x: float = 0.0
    coef_t: float = 0.0
    offset: float = 0.0

    def _evaluate(self, x, t):
        w = np.exp(self.offset + self.coef_x * x + self.coef_t * t)
        return w * self.base._evaluate(x, t)

    def smoothness(self, var):
        return self.base.smoothness(var)

    def _diff_once(self, var):
        coef = self.coef_x if var == "x" else self.coef_t
        inner = SummedFunction((ScaledFunction(self.base, coef),
                                self.base._diff_once(var)))
        return ExpWeightedFunction(inner, self.coef_x, self.coef_t, self.offset)


@dataclass
class TimeShiftedFunction(FunctionSpec):
    """base(x, t - shift)."""

    base: FunctionSpec
    shift: float

    def _evaluate(self, x, t):
        return self.base._evaluate(x, np.asarray(t, dtype=float) - self.shift)

    def smoothness(self, var):
        return self.base.smoothness(var)

    def _diff_once(self, var):
        return TimeShiftedFunction(self.base._diff_once(var), self.shift)


@dataclass
class RampInXFunction(FunctionSpec):
    """x * slope(t)."""

    slope: FunctionSpec

    def _evaluate(self, x, t):
        return np.asarray(x, dtype=float) * self.slope._evaluate(x, t)

    def smoothness(self, var):
        return self.slope.smoothness(var)

    def _diff_once(self, var):
        if var == "x":
            return self.slope
        return RampInXFunction(self.slope._diff_once(var))


def fs_sum(*parts):
    flat = []
    for p in parts:
        if isinstance(p, SummedFunction):
            flat.extend(p.parts)
        else:
            flat.append(p)
    if len(flat) == 1:
        return flat[0]
    return SummedFunction(tuple(flat))


def fs_scale(f, factor):
    factor = float(factor)
    if factor == 1.0:
        return f
    return ScaledFunction(f, factor)


def fs_exp_weight(f, coef_x=0.0, coef_t=0.0, offset=0.0):
    if coef_x == 0.0 and coef_t == 0.0 and offset == 0.0:
        return f
    return ExpWeightedFunction(f, float(coef_x), float(coef_t), float(offset))


def fs_time_shift(f, shift):
    if shift == 0.0:
        return f
    return TimeShiftedFunction(f, float(shift))


def fs_ramp_x(slope):
    return RampInXFunction(slope)
