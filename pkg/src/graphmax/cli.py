"""Command-line front end.

Every command prints (or writes with ``--out``) a deterministic JSON or CSV
document. Exit status: 0 success, 2 invalid input, 3 budget exceeded,
4 a proven inequality failed numerically.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path


from . import atlas, constants, search, zline
from .errors import BudgetExceededError, InvalidParameterError, InvariantViolation
from .graph import Graph, parse_graph_spec
from .series import cp_constant

COMMANDS = ("norm", "var", "star-formula", "complete-structured", "constants", "asymptotics",
            "atlas", "zline-check", "conjecture-scan", "sweep")
EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_INVARIANT = 0, 2, 3, 4


@dataclass
class RunSpec:
    command: str
    graph: str | None = None
    p: float | None = None
    p_range: tuple[float, float, float] | None = None
    n: int | None = None
    method: str = "ascent"
    config: dict = field(default_factory=dict)
    out: str | None = None
    format: str = "json"
    jobs: int = 1
    op: str = "lipschitz-half"
    f: str = "delta"
    length: int = 2
    samples: int = 1000
    tol: float = 1e-10

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InvalidParameterError(f"unknown command {self.command!r}")
        if self.p_range is not None:
            start, stop, step = self.p_range
            if not step > 0 or stop < start:
                raise InvalidParameterError("p-range needs start <= stop and a positive step")
        if self.format not in ("json", "csv"):
            raise InvalidParameterError("format must be json or csv")

    def search_config(self) -> search.SearchConfig:
        return search.SearchConfig(**self.config)


def _parse_range(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise InvalidParameterError("p-range is start:stop:step")
    return tuple(float(x) for x in parts)  # type: ignore[return-value]


def _p_values(spec: RunSpec) -> list[float]:
    if spec.p_range is None:
        return [_need(spec.p, "--p")]
    start, stop, step = spec.p_range
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def _need(value, flag: str):
    if value is None:
        raise InvalidParameterError(f"{flag} is required for this command")
    return value


def _graph(spec: RunSpec) -> Graph:
    return parse_graph_spec(_need(spec.graph, "--graph"))


_TAGS = {"S": "star", "K": "complete", "P": "path", "C": "cycle", "Q": "hypercube"}


def _family(g: Graph) -> tuple[str, int]:
    """Named family and size parameter, from labels such as ``S5``."""
    name = g.name or ""
    if name[:1] in _TAGS and name[1:].isdigit():
        return _TAGS[name[0]], int(name[1:])
    return "", g.n


# -- commands ---------------------------------------------------------------------

def _cmd_norm(spec: RunSpec) -> dict:
    g = _graph(spec)
    p = _need(spec.p, "--p")
    fam, size = _family(g)
    if spec.method == "formula":
        if fam != "star":
            raise InvalidParameterError("the closed-form norm is available for star graphs")
        r = search.star_norm_formula(size, p)
        return {"graph": spec.graph, "p": p, "method": "formula", "value": r.value,
                "x_star": r.x_star, "heuristic": r.heuristic}
    if spec.method == "oracle":
        res = search.grid_oracle_norm(g, p, spec.search_config().grid_step)
    elif spec.method == "ascent":
        res = search.ascent_norm(g, p, spec.search_config())
    elif spec.method == "structured":
        if fam == "star":
            res = search.star_norm_structured(size, p)
        elif fam == "complete":
            res = search.complete_norm_structured(size, p)
        else:
            raise InvalidParameterError("structured search exists for star and complete graphs")
    else:
        raise InvalidParameterError(f"unknown method {spec.method!r}")
    return {"graph": spec.graph, "method": spec.method, "result": res.to_dict()}


def _cmd_var(spec: RunSpec) -> dict:
    g = _graph(spec)
    p = _need(spec.p, "--p")
    fam, size = _family(g)
    if spec.method == "formula":
        if fam == "star" and p == 2:
            value = constants.star_var2_constant(size)
        elif fam == "complete":
            value = constants.kn_var_constant(size)
        else:
            raise InvalidParameterError("closed forms: star graphs at p = 2, complete graphs")
        return {"graph": spec.graph, "p": p, "method": "formula", "value": value}
    if spec.method == "oracle":
        res = search.grid_oracle_variation(g, p, spec.search_config().grid_step)
    elif spec.method == "ascent":
        res = search.ascent_variation(g, p, spec.search_config())
    else:
        raise InvalidParameterError(f"unknown method {spec.method!r} for var")
    floor, vertex = constants.max_delta_variation_ratio(g, p)
    return {"graph": spec.graph, "method": spec.method, "result": res.to_dict(),
            "delta_floor": floor, "delta_vertex": vertex}


def _cmd_star_formula(spec: RunSpec) -> list[dict]:
    n = _need(spec.n, "--n")
    rows = []
    for p in _p_values(spec):
        r = search.star_norm_formula(n, p)
        rows.append({"n": n, "p": p, "value": r.value, "x_star": r.x_star,
                     "heuristic": r.heuristic})
    return rows


def _cmd_complete_structured(spec: RunSpec) -> list[dict]:
    n = _need(spec.n, "--n")
    return [{"n": n, "result": search.complete_norm_structured(n, p).to_dict()}
            for p in _p_values(spec)]


def _cmd_constants(spec: RunSpec) -> list[dict]:
    n = _need(spec.n, "--n")
    rows = [
        constants.ConstantReport("C_Kn_var", n, constants.kn_var_constant(n), True),
    ]
    if n >= 3:
        x, c = 1.0, 0.5
        rows.append(constants.ConstantReport(
            "C_Sn_var2", n, constants.star_var2_constant(n), True, 2.0,
            {"extremizer": constants.star_var2_extremizer(n, x, c).tolist()}))
    for p in ([] if spec.p is None and spec.p_range is None else _p_values(spec)):
        lo, hi = constants.soria_tradacete_star_bounds(n, p)
        rows.append(constants.ConstantReport("star_norm_pp_lower", n, lo, True, p))
        rows.append(constants.ConstantReport("star_norm_pp_upper", n, hi, True, p))
        if n >= 3:
            rows.append(constants.ConstantReport("star_lower_bound", n,
                                                 constants.star_lower_bound(n, p), True, p))
    return [r.to_dict() for r in rows]


def _cmd_asymptotics(spec: RunSpec) -> list[dict]:
    n = _need(spec.n, "--n")
    kl = constants.kn_limit(n)
    sl = constants.star_limit(n)
    rows = [
        constants.ConstantReport("kn_limit", n, kl.value, False, math.inf,
                                 {"alpha": kl.alpha_star, "k": kl.k_star}),
        constants.ConstantReport("star_limit", n, sl.value, sl.exact, math.inf,
                                 None if sl.attaining is None
                                 else {"s": sl.attaining[0], "alpha2": sl.attaining[1],
                                       "alpha4": sl.attaining[2],
                                       "constrained_sup": sl.sup_constrained}),
    ]
    for p in ([] if spec.p is None and spec.p_range is None else _p_values(spec)):
        st = constants.star_norm_star(n, p)
        rows.append(constants.ConstantReport("star_norm_star_pp", n, st.ratio, False, p,
                                             {"y": st.y_star}))
    out = []
    for r in rows:
        d = r.to_dict()
        if d.get("p") == math.inf:
            d["p"] = "inf"
        out.append(d)
    return out


def _cmd_atlas(spec: RunSpec) -> dict:
    n = _need(spec.n, "--n")
    p = _need(spec.p, "--p")
    summary = atlas.scan_variation_constants(n, p, spec.search_config(), jobs=spec.jobs)
    if spec.out:
        base = Path(spec.out)
        base.with_suffix(".jsonl").write_text(summary.to_jsonl())
        base.with_suffix(".csv").write_text(summary.summary_csv())
    return {"n": n, "p": p, "graphs": len(summary.records), "c_hat": summary.c_hat,
            "C_hat": summary.C_hat, "argmin_code": summary.argmin_code.decode(),
            "argmax_code": summary.argmax_code.decode(), "certified": summary.certified}


def _lattice(spec: RunSpec) -> zline.LatticeFunction:
    kind = spec.f
    if kind == "delta":
        return zline.delta()
    if kind == "indicator":
        return zline.indicator(0, spec.length)
    if kind == "tent":
        return zline.tent(spec.length)
    path = Path(kind)
    if path.exists():
        return zline.LatticeFunction.from_json(path.read_text())
    raise InvalidParameterError("--f is delta, indicator, tent or a LatticeFunction JSON file")


def _cmd_zline(spec: RunSpec) -> dict:
    f = _lattice(spec)
    if spec.op == "lipschitz-half":
        rep = zline.check_lipschitz_half(f)
    elif spec.op == "centered-lipschitz":
        rep = zline.centered_lipschitz_ratio(f)
    elif spec.op == "var-norm":
        rep = zline.check_var_norm_bound(f, _need(spec.p, "--p"), spec.tol)
    elif spec.op == "cp":
        c = cp_constant(_need(spec.p, "--p"), spec.tol)
        return {"op": "cp", "p": spec.p, **c.to_dict()}
    else:
        raise InvalidParameterError(f"unknown --op {spec.op!r}")
    return {"op": spec.op, "f": f.to_dict(), **rep.to_dict()}


def _cmd_conjecture(spec: RunSpec) -> dict:
    rep = zline.conjecture_scan(_need(spec.p, "--p"), spec.search_config(), spec.samples)
    return rep.to_dict()


def _cmd_sweep(spec: RunSpec) -> list[dict]:
    g = _graph(spec)
    fam, n = _family(g)
    if fam != "star":
        raise InvalidParameterError("sweep plots the star norm; use --graph star:N")
    rows = []
    for p in _p_values(spec):
        lo, hi = constants.soria_tradacete_star_bounds(n, p)
        value = search.star_norm_formula(n, p).value ** p
        rows.append({"p": p, "value": value, "lower": lo, "lower_explicit":
                     constants.star_lower_bound(n, p), "upper": hi})
    return rows


_DISPATCH = {
    "norm": _cmd_norm,
    "var": _cmd_var,
    "star-formula": _cmd_star_formula,
    "complete-structured": _cmd_complete_structured,
    "constants": _cmd_constants,
    "asymptotics": _cmd_asymptotics,
    "atlas": _cmd_atlas,
    "zline-check": _cmd_zline,
    "conjecture-scan": _cmd_conjecture,
    "sweep": _cmd_sweep,
}


def _flatten(row: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in row.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, (list, tuple)):
            out[key] = json.dumps(v)
        else:
            out[key] = v
    return out


def render(payload, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    rows = payload if isinstance(payload, list) else [payload]
    flat = [_flatten(r) for r in rows]
    keys = sorted({k for r in flat for k in r})
    if rows and "p" in keys:  # p first so sweeps read as (p, value) tables
        keys.remove("p")
        keys.insert(0, "p")
        if "value" in keys:
            keys.remove("value")
            keys.insert(1, "value")
    buf = io.StringIO()
    w = csv.DictWriter(buf, keys, lineterminator="\n")
    w.writeheader()
    w.writerows(flat)
    return buf.getvalue()


def run(spec: RunSpec) -> tuple[int, str]:
    """Execute ``spec``; returns the exit status and the rendered document."""
    try:
        payload = _DISPATCH[spec.command](spec)
    except InvariantViolation as exc:
        return EXIT_INVARIANT, json.dumps({"error": "invariant", "message": str(exc)}) + "\n"
    except BudgetExceededError as exc:
        return EXIT_BUDGET, json.dumps({"error": "budget", "message": str(exc)}) + "\n"
    except (InvalidParameterError, OSError, KeyError) as exc:
        return EXIT_INVALID, json.dumps({"error": "invalid", "message": str(exc)}) + "\n"
    text = render(payload, spec.format)
    if spec.out and spec.command != "atlas":
        Path(spec.out).write_text(text)
    return EXIT_OK, text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphmax",
                                     description="Maximal operators on graphs and on the integers.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--graph", help="family:size (star:5) or an edge-list / JSON file")
    parser.add_argument("--p", type=float)
    parser.add_argument("--p-range", help="start:stop:step")
    parser.add_argument("--n", type=int)
    parser.add_argument("--method", default="ascent",
                        choices=("formula", "oracle", "ascent", "structured"))
    parser.add_argument("--step", type=float, help="grid step for the oracle")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--restarts", type=int)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out")
    parser.add_argument("--format", default="json", choices=("json", "csv"))
    parser.add_argument("--op", default="lipschitz-half",
                        choices=("lipschitz-half", "centered-lipschitz", "var-norm", "cp"))
    parser.add_argument("--f", default="delta", help="delta, indicator, tent or a JSON file")
    parser.add_argument("--length", type=int, default=2, help="indicator length / tent height")
    parser.add_argument("--samples", type=int, default=1000)
    parser.add_argument("--tol", type=float, default=1e-10)
    parser.add_argument("--spec", help="JSON run-spec file; its keys override defaults")
    return parser


def spec_from_args(args: argparse.Namespace) -> RunSpec:
    config = {}
    if args.step is not None:
        config["grid_step"] = args.step
    if args.seed is not None:
        config["seed"] = args.seed
    if args.restarts is not None:
        config["restarts"] = args.restarts
    fields = dict(command=args.command, graph=args.graph, p=args.p,
                  p_range=None if args.p_range is None else _parse_range(args.p_range),
                  n=args.n, method=args.method, config=config, out=args.out,
                  format=args.format, jobs=args.jobs, op=args.op, f=args.f,
                  length=args.length, samples=args.samples, tol=args.tol)
    if args.spec:
        extra = json.loads(Path(args.spec).read_text())
        if "p_range" in extra and isinstance(extra["p_range"], str):
            extra["p_range"] = _parse_range(extra["p_range"])
        elif "p_range" in extra:
            extra["p_range"] = tuple(extra["p_range"])
        fields.update(extra)
    return RunSpec(**fields)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = spec_from_args(args)
    except (InvalidParameterError, OSError, ValueError, TypeError) as exc:
        sys.stderr.write(f"graphmax: {exc}\n")
        return EXIT_INVALID
    code, text = run(spec)
    (sys.stdout if code == EXIT_OK else sys.stderr).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
