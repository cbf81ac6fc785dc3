"""Command-line verification runner.

``bvglue run --suite NAME`` executes every check of a suite and writes an
exact residual report; ``bvglue explain CHECK`` prints what a check
verifies; ``bvglue list`` names all checks.  The exit status of ``run`` is
0 exactly when every check passes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

from .scenario import Scenario, ScenarioError, scenario_checks
from .suites import (REGISTRY, SUITES, Context, Split, check_rng, checks_for, lookup,
                     residual_text)

SCHEMA = "bvglue-report/1"
SEED_ENV = "BVGLUE_SEED"
DEFAULT_SEED = 20240611


@dataclass
class SuiteConfig:
    suite: str = "all"
    seed: int = DEFAULT_SEED
    trials: int | None = None
    max_degree: int = 4
    truncation: int = 2
    scenario: str | None = None
    report_format: str = "json"
    out: str | None = None
    timings: bool = False
    seed_source: str = "default"

    def validate(self):
        if self.suite not in SUITES + ("all",):
            raise ValueError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES + ('all',))}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("the seed must be a 64-bit unsigned integer")
        if self.trials is not None and self.trials < 1:
            raise ValueError("trials must be positive")
        if self.max_degree < 0 or self.truncation < 0:
            raise ValueError("max-degree and truncation must be non-negative")
        if self.report_format not in ("json", "md"):
            raise ValueError("report format is json or md")


@dataclass
class Record:
    name: str
    suite: str
    anchor: str
    residual: str
    passed: bool
    instances: int
    failures: int
    value: str | None = None
    wall_time: float | None = None

    def to_json(self) -> dict:
        out = {"name": self.name, "suite": self.suite, "anchor": self.anchor,
               "residual": self.residual, "passed": self.passed,
               "instances": self.instances, "failures": self.failures}
        if self.value is not None:
            out["value"] = self.value
        if self.wall_time is not None:
            out["wall_time"] = round(self.wall_time, 3)
        return out


@dataclass
class Report:
    config: SuiteConfig
    records: list[Record] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def summary(self) -> dict:
        failed = sum(not r.passed for r in self.records)
        return {"checks": len(self.records), "passed": len(self.records) - failed,
                "failed": failed, "instances": sum(r.instances for r in self.records)}

    def to_json(self) -> dict:
        c = self.config
        return {"schema": SCHEMA,
                "config": {"suite": c.suite, "seed": c.seed, "seed_source": c.seed_source,
                           "trials": c.trials, "max_degree": c.max_degree,
                           "truncation": c.truncation, "scenario": c.scenario},
                "records": [r.to_json() for r in self.records],
                "summary": self.summary()}

    def render(self) -> str:
        if self.config.report_format == "json":
            return json.dumps(self.to_json(), indent=1, sort_keys=False) + "\n"
        return self.to_markdown()

    def to_markdown(self) -> str:
        c, s = self.config, self.summary()
        lines = [f"# bvglue report ({SCHEMA})", "",
                 f"- suite: {c.suite}", f"- seed: {c.seed} ({c.seed_source})",
                 f"- trials: {c.trials if c.trials is not None else 'default'}",
                 f"- max-degree: {c.max_degree}", f"- truncation: {c.truncation}",
                 f"- scenario: {c.scenario or 'none'}",
                 f"- result: {s['passed']}/{s['checks']} checks passed, {s['instances']} instances", "",
                 "| check | suite | status | residual |" + (" time (s) |" if c.timings else ""),
                 "|---|---|---|---|" + ("---|" if c.timings else "")]
        for r in self.records:
            res = r.residual.replace("|", "\\|")
            if r.value is not None:
                res += f" (value: {r.value})"
            row = f"| {r.name} | {r.suite} | {'pass' if r.passed else 'FAIL'} | `{res}` |"
            if c.timings:
                row += f" {r.wall_time:.2f} |"
            lines.append(row)
        return "\n".join(lines) + "\n"


def _records_from(name, suite, anchor, result, elapsed) -> list[Record]:
    if isinstance(result, Split):
        return [rec for key, sub in result.items()
                for rec in _records_from(f"{name}[{key}]", suite, anchor, sub, elapsed / len(result))]
    items = list(result) if isinstance(result, list) else [result]
    texts = [residual_text(r) for r in items]
    bad = [(i, t) for i, t in enumerate(texts) if t != "0"]
    if not bad:
        residual = "0"
    elif len(items) == 1:
        residual = bad[0][1]
    else:
        residual = f"instance {bad[0][0]}: {bad[0][1]}"
    return [Record(name, suite, anchor, residual, not bad, len(items), len(bad), wall_time=elapsed)]


def _error_record(name, suite, anchor, exc, elapsed) -> Record:
    return Record(name, suite, anchor, f"error: {type(exc).__name__}: {exc}", False, 1, 1,
                  wall_time=elapsed)


def run(config: SuiteConfig, progress=None, only=None) -> Report:
    """Execute every check of the configured suite (and scenario) in name order.

    ``only`` restricts the run to the named checks of the suite.
    """
    config.validate()
    scenario = Scenario.load(config.scenario) if config.scenario else None
    report = Report(config)
    selected = checks_for(config.suite)
    if only is not None:
        missing = set(only) - {c.name for c in selected}
        if missing:
            raise ValueError(f"not in suite {config.suite}: {', '.join(sorted(missing))}")
        selected = [c for c in selected if c.name in set(only)]
    for chk in selected:
        ctx = Context(check_rng(config.seed, chk.name), config.trials, config.max_degree,
                      config.truncation)
        start = time.perf_counter()
        try:
            result = chk.fn(ctx)
            recs = _records_from(chk.name, chk.suite, chk.anchor, result, time.perf_counter() - start)
        except Exception as exc:
            recs = [_error_record(chk.name, chk.suite, chk.anchor, exc, time.perf_counter() - start)]
        report.records += recs
        if progress:
            for r in recs:
                progress(r)
    if scenario is not None:
        report.records += _scenario_records(scenario, config, progress)
    if not config.timings:
        for r in report.records:
            r.wall_time = None
    return report


def _scenario_records(sc: Scenario, config: SuiteConfig, progress) -> list[Record]:
    out = []
    for name, residual_fn, value_fn in scenario_checks(sc, config.truncation):
        meta = lookup(name)
        start = time.perf_counter()
        try:
            recs = _records_from(name, "scenario", meta.anchor, residual_fn(), 0.0)
            if value_fn is not None:
                recs[0].value = residual_text(value_fn())
        except Exception as exc:
            recs = [_error_record(name, "scenario", meta.anchor, exc, 0.0)]
        for r in recs:
            r.wall_time = time.perf_counter() - start
        out += recs
        if progress:
            for r in recs:
                progress(r)
    return out


def explain(name: str) -> str:
    chk = lookup(name)
    return (f"{chk.name} ({chk.suite})\n"
            f"  anchor:    {chk.anchor}\n"
            f"  verifies:  {chk.formula}\n"
            f"  constants: {chk.constants}\n")


# ---------------------------------------------------------------------------
# argument handling


def _seed_from_env() -> tuple[int, str]:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED, "default"
    try:
        return int(raw, 0), f"env {SEED_ENV}"
    except ValueError:
        raise ValueError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _run_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bvglue run", description="Run a verification suite.")
    p.add_argument("--suite", default="all", help="one of " + ", ".join(SUITES + ("all",)))
    p.add_argument("--seed", type=lambda s: int(s, 0), default=None,
                   help=f"64-bit seed (default {DEFAULT_SEED}, or ${SEED_ENV})")
    p.add_argument("--trials", type=int, default=None, help="override each randomized check's sample count")
    p.add_argument("--max-degree", type=int, default=4, help="polynomial degree bound for random inputs")
    p.add_argument("--truncation", type=int, default=2, help="nerve truncation K for glued traces")
    p.add_argument("--scenario", default=None, help="JSON scenario file with extra descent checks")
    p.add_argument("--report", choices=("json", "md"), default="json", help="report format")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--timings", action="store_true", help="include wall times (reports are then not reproducible)")
    p.add_argument("--verbose", action="store_true", help="print one line per check to stderr")
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "explain":
        p = argparse.ArgumentParser(prog="bvglue explain", description="Describe a check.")
        p.add_argument("check")
        args = p.parse_args(argv[1:])
        try:
            sys.stdout.write(explain(args.check))
        except KeyError as e:
            print(f"bvglue: {e.args[0]}", file=sys.stderr)
            return 2
        return 0
    if argv and argv[0] == "list":
        for chk in sorted(REGISTRY.values(), key=lambda c: (c.suite, c.name)):
            print(f"{chk.suite:14s} {chk.name}")
        return 0
    if argv and argv[0] == "run":
        argv = argv[1:]
    args = _run_parser().parse_args(argv)
    try:
        if args.seed is not None:
            seed, source = args.seed, "flag"
        else:
            seed, source = _seed_from_env()
        config = SuiteConfig(args.suite, seed, args.trials, args.max_degree, args.truncation,
                             args.scenario, args.report, args.out, args.timings, source)
        progress = None
        if args.verbose:
            progress = lambda r: print(f"{'pass' if r.passed else 'FAIL'} {r.name}", file=sys.stderr)
        report = run(config, progress)
    except (ValueError, ScenarioError) as e:
        print(f"bvglue: {e}", file=sys.stderr)
        return 2
    text = report.render()
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as e:
            print(f"bvglue: cannot write {args.out}: {e.strerror}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    for r in report.records:
        if not r.passed:
            print(f"bvglue: {r.name} failed: {r.residual[:200]}", file=sys.stderr)
    return 0 if report.passed else 1
