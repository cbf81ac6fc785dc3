"""Declarative descent scenarios.

A scenario is a JSON object naming a Darboux chart, a polynomial
partition of unity, one gauge fermion per open set and the cochains to
test.  Polynomials are written as plain arithmetic expressions in the
generator names (``x1``, ``xi1``, ``lam1``, ``hbar``); ``^`` and ``**``
both mean a power and ``/`` is allowed when the divisor is a number.

Keys:

``name``                 label used in check names (required)
``chart``                list of coordinate parities, all 0 (required)
``odd_constants``        number of odd constants lam1, lam2, ... (default 0)
``pou``                  list of polynomials summing to 1; its length is the cover size
``gauge_fermions``       one odd polynomial per open set
``basepoint``            chart point where the generating one-forms vanish (default origin)
``truncation``           nerve truncation K (default: the run's value)
``observables``          Delta-closed polynomials whose glued trace is reported
``coboundaries``         polynomials tau; Z((delta + hbar Delta) tau) must vanish
                         (must equal d Z(tau) when pou_end is given)
``random_coboundaries``  {"count": n, "degree": d, "terms": t, "seed": s}
``pou_end``              second partition of unity; observables are then also
                         checked for independence along the interpolation
"""

from __future__ import annotations

import ast
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .bvcalc import DarbouxChart
from .descent import (CechModel, FlexibleLagrangian, TWCochain, closedness_residual,
                      interpolate_pou, pou_independence_residual, trace_Z)
from .simplexforms import Simplex
from .superpoly import Kind, SuperPoly, Universe, random_poly

KNOWN_KEYS = {"name", "chart", "odd_constants", "pou", "gauge_fermions", "basepoint",
              "truncation", "observables", "coboundaries", "random_coboundaries", "pou_end"}


class ScenarioError(ValueError):
    pass


def parse_poly(text: str, universe: Universe) -> SuperPoly:
    """Evaluate an arithmetic expression in generator names into an exact polynomial."""
    try:
        tree = ast.parse(str(text).replace("^", "**"), mode="eval")
    except SyntaxError as e:
        raise ScenarioError(f"cannot parse {text!r}: {e.msg}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return universe.coerce(node.value)
        if isinstance(node, ast.Name):
            if node.id not in universe:
                raise ScenarioError(f"unknown symbol {node.id!r} in {text!r}")
            return universe[node.id].poly
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            val = ev(node.operand)
            return -val if isinstance(node.op, ast.USub) else val
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = node.right
                if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                    exp, sign = exp.operand, -1
                else:
                    sign = 1
                if not (isinstance(exp, ast.Constant) and type(exp.value) is int):
                    raise ScenarioError(f"exponents must be integers in {text!r}")
                return ev(node.left) ** (sign * exp.value)
            if isinstance(node.op, ast.Div):
                den = ev(node.right)
                if den.generators() or den.is_zero():
                    raise ScenarioError(f"can only divide by a nonzero number in {text!r}")
                return ev(node.left) * (1 / Fraction(den.constant_term()))
            ops = {ast.Add: lambda a, b: a + b, ast.Sub: lambda a, b: a - b,
                   ast.Mult: lambda a, b: a * b}
            for op, fn in ops.items():
                if isinstance(node.op, op):
                    return fn(ev(node.left), ev(node.right))
        raise ScenarioError(f"unsupported syntax {ast.dump(node)[:40]} in {text!r}")

    return ev(tree)


@dataclass
class Scenario:
    name: str
    chart: list[int]
    odd_constants: int
    pou: list[str]
    gauge_fermions: list[str]
    basepoint: list | None = None
    truncation: int | None = None
    observables: list[str] = field(default_factory=list)
    coboundaries: list[str] = field(default_factory=list)
    random_coboundaries: dict | None = None
    pou_end: list[str] | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        if not isinstance(data, dict):
            raise ScenarioError("a scenario must be a JSON object")
        unknown = set(data) - KNOWN_KEYS
        if unknown:
            raise ScenarioError(f"unknown scenario keys: {', '.join(sorted(unknown))}")
        for key in ("name", "chart", "pou", "gauge_fermions"):
            if key not in data:
                raise ScenarioError(f"scenario is missing {key!r}")
        if len(data["gauge_fermions"]) != len(data["pou"]):
            raise ScenarioError("need one gauge fermion per partition function")
        if data.get("pou_end") is not None and len(data["pou_end"]) != len(data["pou"]):
            raise ScenarioError("pou_end must have the same length as pou")
        return cls(name=str(data["name"]), chart=[int(p) for p in data["chart"]],
                   odd_constants=int(data.get("odd_constants", 0)), pou=list(data["pou"]),
                   gauge_fermions=list(data["gauge_fermions"]), basepoint=data.get("basepoint"),
                   truncation=data.get("truncation"), observables=list(data.get("observables", [])),
                   coboundaries=list(data.get("coboundaries", [])),
                   random_coboundaries=data.get("random_coboundaries"), pou_end=data.get("pou_end"))

    @classmethod
    def load(cls, path) -> "Scenario":
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise ScenarioError(f"cannot read scenario {path}: {e.strerror}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ScenarioError(f"scenario {path} is not valid JSON: {e}") from None
        return cls.from_dict(data)


class ScenarioModel:
    """The exact objects a scenario describes."""

    def __init__(self, sc: Scenario, truncation: int):
        self.scenario = sc
        self.U = U = Universe(f"scenario-{sc.name}")
        U.declare_hbar()
        self.lam = [U.gen(f"lam{i}", 1, 1, Kind.ODD_CONST) for i in range(1, sc.odd_constants + 1)]
        self.chart = DarbouxChart.create(U, sc.chart)
        self.K = sc.truncation if sc.truncation is not None else truncation
        pou = [parse_poly(p, U) for p in sc.pou]
        self.aux = None
        if sc.pou_end is not None:
            self.aux = Simplex(U, 1, "v")
            pou = interpolate_pou(self.aux, pou, [parse_poly(p, U) for p in sc.pou_end])
        self.pou = pou
        self.psis = [parse_poly(p, U) for p in sc.gauge_fermions]
        self.models = {}
        self.families = {}

    def model(self, K: int):
        if K not in self.models:
            m = CechModel(self.chart, self.pou, truncation=K, aux=self.aux)
            self.models[K] = m
            self.families[K] = FlexibleLagrangian(m, self.psis, basepoint=self.scenario.basepoint)
        return self.models[K], self.families[K]

    def coboundaries(self) -> list[SuperPoly]:
        out = [parse_poly(t, self.U) for t in self.scenario.coboundaries]
        spec = self.scenario.random_coboundaries
        if spec:
            rng = np.random.default_rng(int(spec.get("seed", 0)))
            model, _ = self.model(self.K)
            u = model.cover_simplex
            gens = self.chart.x + self.chart.xi + u.t + u.dt + self.lam
            for i in range(int(spec.get("count", 1))):
                out.append(random_poly(rng, gens, int(spec.get("degree", 3)), int(spec.get("terms", 10)),
                                       parity=i % 2))
        return out


def scenario_checks(sc: Scenario, truncation: int):
    """Yield (check name, residual thunk, value thunk or None) for every scenario check."""
    sm = ScenarioModel(sc, truncation)
    tag = sc.name

    def compat():
        model, fams = sm.model(sm.K)
        return fams.compatibility_residuals()

    yield f"scenario-compatibility[{tag}]", compat, None

    def cob(tau):
        def fn():
            out = []
            for K in (sm.K, sm.K + 1):
                model, fams = sm.model(K)
                out.append(closedness_residual(TWCochain.from_global(model, tau), model, fams))
            return out
        return fn

    for i, tau in enumerate(sm.coboundaries()):
        yield f"scenario-coboundary[{tag}:{i}]", cob(tau), None

    for i, text in enumerate(sc.observables):
        sigma = parse_poly(text, sm.U)

        def closed(sigma=sigma):
            model, _ = sm.model(sm.K)
            return [model.delta_op()(sigma)]

        def value(sigma=sigma):
            model, fams = sm.model(sm.K)
            return trace_Z(TWCochain.constant(model, sigma), model, fams)

        yield f"scenario-observable[{tag}:{i}]", closed, value
        if sm.aux is not None:
            def indep(sigma=sigma):
                model, fams = sm.model(sm.K)
                return [pou_independence_residual(TWCochain.constant(model, sigma), model, fams)]
            yield f"scenario-pou-independence[{tag}:{i}]", indep, None

