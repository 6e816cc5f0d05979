"""Experiment configuration: YAML documents, weight and function grammars.

Weight grammar
--------------
Terms joined by `` + `` (spaces required), each optionally prefixed by
``coef *``::

    atom RE [IM] MASS         point mass at RE + i IM
    radial BETA [KAPPA [SMAX]]  density KAPPA (1 - s)^-BETA on [0, SMAX]

Example: ``atom 0.3 1 + atom 0 -0.4 1`` or ``2 * radial 0.5``.

Function grammar
----------------
Prefix forms; nested arguments are parenthesised::

    z | const C | mono M | affine C1 C0 | poly C0 C1 ... CN
    mobius A B C D | pow A [THETA] | taylor A N | blaschke M A1 A2 ...
    outer | mul E1 E2 ... | add E1 E2 ... | scale C E | rpow Q E

Numbers are Python literals; complex numbers are written ``0.5-0.2j``.
``pow A THETA`` is ``(1 - e^{-i THETA} z)^-A``; ``taylor A N`` is the degree
``N`` Taylor polynomial of ``(1 - z)^-A``; ``outer`` is the outer function of
the experiment's weight.  Harmonic functions are ``re E`` or ``im E``.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field, fields
from importlib import resources
from typing import Any

import jsonschema
import yaml

from .errors import ConfigError, PshlabError
from .functions import (Affine, AnalyticFunction, Blaschke, Constant, HarmonicFunction, ImagPart, Mobius, Monomial,
                        Outer, Polynomial, Power, PowerBranch, Product, RealPart, Scale, Sum, taylor_partial_sum)
from .measures import RadialComponent, RieszMeasure

COMMANDS = ("density", "norm", "measure", "membership", "deflate", "isometry", "probe", "verify")


# ------------------------------------------------------------------ weights

def _num(tok: str, what: str) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ConfigError(f"expected a real number for {what}, got {tok!r}") from None


def parse_weight(text: str) -> RieszMeasure:
    """Parse the weight grammar (see module docstring) into a :class:`RieszMeasure`."""
    terms = re.split(r"\s\+\s", text.strip())
    atoms, radial = [], []
    for term in terms:
        coef = 1.0
        if "*" in term:
            head, _, term = term.partition("*")
            coef = _num(head.strip(), "coefficient")
        toks = term.split()
        if not toks:
            raise ConfigError(f"empty weight term in {text!r}")
        kind, args = toks[0], toks[1:]
        try:
            if kind == "atom":
                if len(args) == 2:
                    loc, mass = complex(_num(args[0], "atom location"), 0.0), _num(args[1], "atom mass")
                elif len(args) == 3:
                    loc = complex(_num(args[0], "atom location"), _num(args[1], "atom location"))
                    mass = _num(args[2], "atom mass")
                else:
                    raise ConfigError("atom takes RE [IM] MASS")
                atoms.append((loc, coef * mass))
            elif kind == "radial":
                if not 1 <= len(args) <= 3:
                    raise ConfigError("radial takes BETA [KAPPA [SMAX]]")
                vals = [_num(a, "radial parameter") for a in args] + [1.0, 1.0][len(args) - 1:]
                radial.append(RadialComponent(vals[0], coef * vals[1], vals[2]))
            else:
                raise ConfigError(f"unknown weight term {kind!r}")
        except ConfigError:
            raise
        except PshlabError as exc:
            raise ConfigError(str(exc)) from None
    try:
        return RieszMeasure(tuple(atoms), tuple(radial))
    except PshlabError as exc:
        raise ConfigError(str(exc)) from None


def format_weight(nu: RieszMeasure) -> str:
    parts = []
    for a, c in nu.atoms:
        parts.append(f"atom {a.real!r} {a.imag!r} {c!r}" if a.imag else f"atom {a.real!r} {c!r}")
    for r in nu.radial:
        parts.append(f"radial {r.beta!r} {r.kappa!r} {r.s_max!r}")
    return " + ".join(parts)


# ------------------------------------------------------------------ functions

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def _tokenize(text):
    return _TOKEN.findall(text)


def _cnum(tok, what):
    try:
        return complex(tok)
    except ValueError:
        raise ConfigError(f"expected a number for {what}, got {tok!r}") from None


class _Parser:
    def __init__(self, text, weight, outer_cache):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0
        self.weight = weight
        self.outer_cache = outer_cache

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ConfigError(f"unexpected end of expression {self.text!r}")
        self.pos += 1
        return tok

    def numbers(self):
        out = []
        while self.peek() not in (None, "(", ")", "z", "outer"):
            out.append(self.take())
        return out

    def operand(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            e = self.form()
            if self.take() != ")":
                raise ConfigError(f"expected ')' in {self.text!r}")
            return e
        if tok in ("z", "outer"):
            return self.form()
        raise ConfigError(f"expected a parenthesised operand in {self.text!r}, got {tok!r}")

    def operands(self):
        out = []
        while self.peek() in ("(", "z", "outer"):
            out.append(self.operand())
        return out

    def form(self):
        head = self.take()
        if head == "(":
            e = self.form()
            if self.take() != ")":
                raise ConfigError(f"expected ')' in {self.text!r}")
            return e
        try:
            return self._build(head)
        except ConfigError:
            raise
        except (PshlabError, ValueError) as exc:
            raise ConfigError(f"{head}: {exc}") from None

    def _build(self, head):
        if head == "z":
            return Monomial(1)
        if head == "outer":
            if self.weight is None:
                raise ConfigError("'outer' needs a weight")
            key = format_weight(self.weight)
            if key not in self.outer_cache:
                from .factorize import OuterFunction

                self.outer_cache[key] = OuterFunction(self.weight)
            return Outer(self.outer_cache[key])
        if head in ("mul", "add"):
            ops = self.operands()
            if len(ops) < 2:
                raise ConfigError(f"{head} needs at least two operands")
            return Product(tuple(ops)) if head == "mul" else Sum(tuple(ops))
        if head in ("scale", "rpow"):
            nums = self.numbers()
            if len(nums) != 1:
                raise ConfigError(f"{head} takes one number and one operand")
            op = self.operand()
            if head == "scale":
                return Scale(_cnum(nums[0], "scale"), op)
            return Power(op, _num(nums[0], "exponent"))
        nums = self.numbers()
        if head == "const":
            self._arity(head, nums, 1)
            return Constant(_cnum(nums[0], "constant"))
        if head == "mono":
            self._arity(head, nums, 1)
            return Monomial(int(_num(nums[0], "degree")))
        if head == "affine":
            self._arity(head, nums, 2)
            return Affine(_cnum(nums[0], "slope"), _cnum(nums[1], "offset"))
        if head == "poly":
            if not nums:
                raise ConfigError("poly needs coefficients")
            return Polynomial(tuple(_cnum(t, "coefficient") for t in nums))
        if head == "mobius":
            self._arity(head, nums, 4)
            return Mobius(*(_cnum(t, "Mobius coefficient") for t in nums))
        if head == "pow":
            if len(nums) not in (1, 2):
                raise ConfigError("pow takes A [THETA]")
            return PowerBranch(_num(nums[0], "exponent"), _num(nums[1], "angle") if len(nums) == 2 else 0.0)
        if head == "taylor":
            self._arity(head, nums, 2)
            return taylor_partial_sum(_num(nums[0], "exponent"), int(_num(nums[1], "degree")))
        if head == "blaschke":
            if not nums:
                raise ConfigError("blaschke takes M A1 A2 ...")
            return Blaschke(tuple(_cnum(t, "zero") for t in nums[1:]), int(_num(nums[0], "origin order")))
        raise ConfigError(f"unknown function form {head!r}")

    @staticmethod
    def _arity(head, nums, n):
        if len(nums) != n:
            raise ConfigError(f"{head} takes {n} number(s), got {len(nums)}")


def parse_function(text: str, weight: RieszMeasure | None = None, _cache=None) -> AnalyticFunction:
    """Parse the function grammar into an :class:`AnalyticFunction`."""
    p = _Parser(text, weight, {} if _cache is None else _cache)
    if not p.toks:
        raise ConfigError("empty function expression")
    e = p.form()
    if p.peek() is not None:
        raise ConfigError(f"trailing input {p.peek()!r} in {text!r}")
    return e


def parse_harmonic(text: str, weight: RieszMeasure | None = None) -> HarmonicFunction:
    """``re E`` or ``im E``: real or imaginary part of an analytic expression."""
    head, _, rest = text.strip().partition(" ")
    if head not in ("re", "im"):
        raise ConfigError(f"harmonic functions are 're E' or 'im E', got {text!r}")
    f = parse_function(rest, weight)
    return RealPart(f) if head == "re" else ImagPart(f)


# ------------------------------------------------------------------ documents

@dataclass
class ExperimentConfig:
    """A parsed experiment document.  Field names match the document keys."""

    command: str
    weights: list[str] = field(default_factory=list)
    functions: list[str] = field(default_factory=list)
    harmonic: list[str] = field(default_factory=list)
    p: list[float] = field(default_factory=lambda: [2.0])
    r_grid: list[float] = field(default_factory=lambda: [-1.0, -0.3, -0.1, -0.03, -0.01, -0.003, -0.001])
    t_grid: list[float] = field(default_factory=lambda: [0.9, 0.99, 0.999, 0.9999])
    tol: float = 1e-8
    out: str = "pshlab-out"
    suite: str = "core"
    grid_size: int = 4096
    probe_angle: float = 0.0
    threads: int | None = None

    def to_dict(self) -> dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self) if getattr(self, f.name) is not None}


def load_schema() -> dict:
    return json.loads(resources.files("pshlab").joinpath("schema/experiment.schema.json").read_text("utf-8"))


def _mark(node):
    return node.start_mark.line + 1, node.start_mark.column + 1


def _locate(root, path):
    """Line and column of the document node at a JSON-schema error path."""
    node = root
    for key in path:
        if isinstance(node, yaml.MappingNode):
            nxt = next((v for k, v in node.value if k.value == key), None)
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            nxt = node.value[key]
        else:
            nxt = None
        if nxt is None:
            break
        node = nxt
    return _mark(node)


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a YAML experiment document.

    Errors carry the line and column of the offending node.
    """
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        raise ConfigError(exc.problem or "malformed document", mark.line + 1 if mark else None,
                          mark.column + 1 if mark else None) from None
    if root is None or not isinstance(root, yaml.MappingNode):
        line, col = _mark(root) if root is not None else (1, 1)
        raise ConfigError("the document must be a mapping", line, col)
    data = yaml.safe_load(text)
    schema = load_schema()
    allowed = set(schema["properties"])
    for key_node, _ in root.value:
        if key_node.value not in allowed:
            raise ConfigError(f"unknown key {key_node.value!r}", *_mark(key_node))
    errors = sorted(jsonschema.Draft7Validator(schema).iter_errors(data), key=lambda e: list(e.path))
    if errors:
        err = errors[0]
        raise ConfigError(err.message, *_locate(root, list(err.path)))
    cfg = ExperimentConfig(**data)
    cfg.p = [float(x) for x in cfg.p]
    cfg.r_grid = [float(x) for x in cfg.r_grid]
    cfg.t_grid = [float(x) for x in cfg.t_grid]
    cfg.tol = float(cfg.tol)
    cfg.probe_angle = float(cfg.probe_angle)
    for i, w in enumerate(cfg.weights):
        try:
            parse_weight(w)
        except ConfigError as exc:
            raise ConfigError(f"weights[{i}]: {exc}", *_locate(root, ["weights", i])) from None
    return cfg


def print_config(cfg: ExperimentConfig) -> str:
    """Canonical YAML text; ``parse_config(print_config(c)) == c``."""
    return yaml.safe_dump(cfg.to_dict(), sort_keys=True, default_flow_style=None, allow_unicode=True, width=100)


def format_float(x: float) -> str:
    """CSV float format: ``%.12e``, with divergent values written ``inf``."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.12e" % x
