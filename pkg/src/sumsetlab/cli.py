"""Command-line front end: JSON reports on stdout, human summaries on stderr.

Exit codes: 0 for verified success, 2 when a pipeline ran but verification
failed, 1 for usage or input errors.  Every report embeds a manifest
(command, arguments, constants, seed, version, rng id, timestamp); re-running
a manifest reproduces the payload bit-for-bit except for the timestamp.
"""

from __future__ import annotations

import argparse
import importlib.resources
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__, bohr as bohr_mod, fourier, freiman, pipelines
from .errors import CapExceededError, GroupMismatchError, HypothesisError
from .fourier import GroupFunction
from .groups import GroupSpec, as_indices, parse_group
from .pipelines import ConstantsConfig
from .sampling import RNG_ID, SamplingTask, derive_seed, make_rng, measure_failure_rate


def _jsonify(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _load_schema() -> dict:
    text = importlib.resources.files("sumsetlab").joinpath("schemas/report.schema.json").read_text()
    return json.loads(text)


def validate_report(report: dict) -> None:
    import jsonschema

    jsonschema.validate(report, _load_schema())


def load_constants(specs: list[str] | None) -> ConstantsConfig:
    """Merge defaults with overrides given as JSON files or key=value pairs."""
    overrides: dict[str, float] = {}
    for item in specs or []:
        if "=" in item and not item.strip().startswith("{"):
            key, _, value = item.partition("=")
            overrides[key.strip().lower()] = float(value)
        else:
            text = item if item.strip().startswith("{") else Path(item).read_text()
            data = json.loads(text)
            overrides.update({str(k).lower(): float(v) for k, v in data.items()})
    return ConstantsConfig.from_mapping(overrides)


def parse_set(text: str) -> list:
    """A set literal: inline JSON array, or a path to a JSON file, or a
    {group, support} object; returns the support list."""
    stripped = text.strip()
    if stripped.startswith("[") or stripped.startswith("{"):
        data = json.loads(stripped)
    else:
        data = json.loads(Path(text).read_text())
    if isinstance(data, dict):
        return data["support"]
    return data


def _support_json(group: GroupSpec, idx: np.ndarray) -> list:
    if group.kind == "cyclic":
        return [int(i) for i in idx]
    return [list(group.coords_of(int(i))) for i in idx]


@dataclass(frozen=True)
class RunManifest:
    """Reproducibility record embedded in every report.

    Re-running a manifest (same command, arguments, constants, seed)
    reproduces the numeric payload bit-for-bit; only the timestamp differs.
    """

    command: str
    arguments: dict
    constants: ConstantsConfig
    seed: int | None
    timestamp: float
    version: str = __version__
    rng_id: str = RNG_ID

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "arguments": _jsonify(self.arguments),
            "constants": self.constants.to_json(),
            "seed": self.seed,
            "timestamp": self.timestamp,
            "version": self.version,
            "rng_id": self.rng_id,
        }


def build_manifest(command: str, arguments: dict, cfg: ConstantsConfig, seed: int | None) -> dict:
    return RunManifest(command, arguments, cfg, seed, time.time()).to_json()


def emit(report: dict, summary: str, json_only: bool) -> None:
    validate_report(report)
    print(json.dumps(_jsonify(report), indent=2, sort_keys=True))
    if not json_only:
        print(summary, file=sys.stderr)


def _error(message: str, kind: str = "usage") -> int:
    print(json.dumps({"error": {"kind": kind, "message": message}}, sort_keys=True))
    print(f"error: {message}", file=sys.stderr)
    return 1


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_fourier(args, cfg) -> tuple[dict, dict | None, str]:
    group = parse_group(args.group)
    support = as_indices(group, parse_set(args.support))
    f = GroupFunction.measure(group, support) if args.measure else GroupFunction.indicator(group, support)
    method = "direct" if args.direct else None
    if args.convolve_with:
        g_support = as_indices(group, parse_set(args.convolve_with))
        f = fourier.convolve(f, GroupFunction.indicator(group, g_support), method)
    if args.power > 1:
        f = fourier.convolution_power(f, args.power, method)
    spec = fourier.transform(f, method)
    result = {
        "function": f.to_json(),
        "spectrum": spec.to_json(),
        "norms": {
            "spectral_l1": fourier.spectral_l1_norm(spec),
            "l2": f.lp_norm(2),
            "mean": f.mean(),
        },
    }
    return result, None, f"fourier: |G| = {group.order}, spectral l1 = {result['norms']['spectral_l1']:.6g}"


def _cmd_bohr(args, cfg) -> tuple[dict, dict | None, str]:
    group = parse_group(args.group)
    freqs = [tuple(f) if isinstance(f, list) else f for f in json.loads(args.frequencies)]
    descriptor = bohr_mod.BohrDescriptor(group, tuple(freqs), args.delta)
    check = bohr_mod.size_bound_check(descriptor)
    result: dict = {"descriptor": descriptor.to_json(), "size_bound": check.to_json()}
    passed = check.passed
    if args.materialize:
        members = bohr_mod.materialize(descriptor)
        result["members"] = _support_json(group, members)
    if args.find_ap:
        witness = bohr_mod.find_ap_in_bohr(descriptor)
        result["progression"] = witness.to_json()
        result["length_guarantee"] = bohr_mod.ap_length_guarantee(descriptor)
        passed = passed and witness.verified and witness.length >= result["length_guarantee"]
    if args.chang is not None:
        reduction = bohr_mod.chang_reduce(
            group, descriptor.characters(), descriptor.delta, args.chang, c_chang=cfg.c_chang
        )
        result["chang"] = reduction.to_json()
        passed = passed and reduction.dissociated and reduction.spans_all
    summary = f"bohr: rank {descriptor.rank}, size {check.actual}, bound {check.bound:.4g}, passed {passed}"
    return result, {"passed": bool(passed)}, summary


def _cmd_sample(args, cfg) -> tuple[dict, dict | None, str]:
    group = parse_group(args.group)
    a = tuple(int(i) for i in as_indices(group, parse_set(args.A)))
    b = tuple(int(i) for i in as_indices(group, parse_set(args.B)))
    if args.mode == "fourier":
        f = fourier.convolve(GroupFunction.indicator(group, a), GroupFunction.indicator(group, b))
        task = SamplingTask("fourier", args.p, args.epsilon, function=f, c_sample=cfg.c_sample)
    else:
        task = SamplingTask(
            "physical", args.p, args.epsilon, group=group, a_support=a, b_support=b, c_sample=cfg.c_sample
        )
    if args.trials > 1:
        rate = measure_failure_rate(task, args.trials, args.seed)
        return {"failure_rate": rate.to_json()}, None, (
            f"sample[{args.mode}]: {rate.failures}/{rate.trials} failures (k = {rate.k})"
        )
    report = task.run(args.seed)
    return {"report": report.to_json()}, None, (
        f"sample[{args.mode}]: k = {report.k}, lp_error = {report.lp_error:.6g} (target {args.epsilon})"
    )


def _cmd_embed(args, cfg) -> tuple[dict, dict | None, str]:
    a = freiman.intset(parse_set(args.A))
    b = freiman.intset(parse_set(args.B))
    n = args.N
    if n is None:
        diff = freiman.iterated_combination(a, b, args.k)
        n = pipelines.next_prime(len(diff))
    xi_choice = freiman.choose_xi(a, b, args.k, n)
    cert = freiman.embed_pair(a, b, args.k, n)
    result = {"xi_choice": xi_choice.to_json(), "certificate": cert.to_json()}
    passed = bool(cert.verified)
    summary = (
        f"embed: N = {n}, |A'| = {len(cert.a_subset)}, |B'| = {len(cert.b_subset)}, verified {cert.verified}"
    )
    return result, {"passed": passed}, summary


def _cmd_find_ap(args, cfg) -> tuple[dict, dict | None, str]:
    if args.flavor == "dense":
        if args.N is None:
            raise ValueError("find-ap dense requires --N")
        a = freiman.intset(parse_set(args.A))
        b = freiman.intset(parse_set(args.B))
        report = pipelines.find_progression_dense(a, b, args.N, args.seed, cfg, compare_oracle=args.oracle)
        witness = report.witness
        result = report.to_json()
    elif args.flavor == "doubling":
        a = freiman.intset(parse_set(args.A))
        b = freiman.intset(parse_set(args.B))
        report = pipelines.find_progression_small_doubling(a, b, args.seed, cfg)
        witness = report.witness
        result = report.to_json()
    else:
        if args.group is None:
            raise ValueError("find-ap ff requires --group")
        group = parse_group(args.group)
        subset = parse_set(args.subset) if args.subset else None
        report = pipelines.finite_field_translate(
            group, parse_set(args.A), parse_set(args.B), args.variant, args.seed, cfg, subset=subset
        )
        witness = report.witness
        result = report.to_json()
    summary = f"find-ap {args.flavor}: length {witness.length}, verified {witness.verified}"
    return result, {"passed": bool(witness.verified)}, summary


def _cmd_almost_periods(args, cfg) -> tuple[dict, dict | None, str]:
    group = parse_group(args.group)
    a = as_indices(group, parse_set(args.A))
    b = as_indices(group, parse_set(args.B))
    f = fourier.convolve(GroupFunction.indicator(group, a), GroupFunction.indicator(group, b))
    report = pipelines.almost_period_bohr(f, args.p, args.epsilon, args.seed, cfg)
    summary = (
        f"almost-periods: rank {report.descriptor.rank}, |T| = {report.bohr_size}, "
        f"max distance {report.max_distance:.6g} vs {report.epsilon * report.reference_value:.6g}, "
        f"passed {report.passed}"
    )
    return {"periodicity": report.to_json()}, {"passed": bool(report.passed)}, summary


def _cmd_bogolyubov(args, cfg) -> tuple[dict, dict | None, str]:
    group = parse_group(args.group)
    a = as_indices(group, parse_set(args.A))
    report = pipelines.bogolyubov_bohr(group, a, args.seed, cfg)
    summary = (
        f"bogolyubov: |T| = {report.members}, rank {report.descriptor.rank}, confirmed {report.confirmed}"
    )
    return report.to_json(), {"passed": bool(report.confirmed)}, summary


def _cmd_oracle(args, cfg) -> tuple[dict, dict | None, str]:
    if args.flavor == "longest-ap":
        if args.set is None:
            raise ValueError("oracle longest-ap requires --set")
        record = pipelines.longest_ap_oracle(parse_set(args.set), modulus=args.modulus)
        return record.to_json(), None, f"oracle longest-ap: length {record.length}, step {record.step}"
    if args.group is None or args.A is None or args.B is None:
        raise ValueError("oracle periods requires --group, --A and --B")
    group = parse_group(args.group)
    a = as_indices(group, parse_set(args.A))
    b = as_indices(group, parse_set(args.B))
    f = fourier.convolve(GroupFunction.indicator(group, a), GroupFunction.indicator(group, b))
    if args.measure:
        f = fourier.convolve(GroupFunction.measure(group, a), GroupFunction.indicator(group, b))
    reference = args.ref if args.ref in ("spectral-l1", "p-half-sqrt") else float(args.ref)
    periods, threshold = pipelines.brute_force_almost_periods(f, args.p, args.epsilon, reference)
    result = {
        "periods": _support_json(group, periods),
        "count": int(periods.size),
        "threshold": threshold,
    }
    return result, None, f"oracle periods: {periods.size} almost-periods at threshold {threshold:.6g}"


def _cmd_bounds(args, cfg) -> tuple[dict, dict | None, str]:
    if args.grid:
        grid = [2.0**-i for i in range(1, 11)]
        rows = pipelines.crossover_table(grid, grid, args.N, args.c, log_n=args.log_N)
        result = {"crossover": rows}
        summary = f"bounds: {sum(r['improved_exceeds'] for r in rows)}/{len(rows)} grid cells favor the improved bound"
    else:
        table = pipelines.bound_table(args.alpha, args.beta, args.N, args.K_A, args.K_B, args.c, log_n=args.log_N)
        result = {"bounds": table}
        summary = f"bounds: green {table['green']:.6g}, improved {table['improved']:.6g}"
    return result, None, summary


# ---------------------------------------------------------------------------
# experiment batch runner


def _random_support(rng: np.random.Generator, order: int, size: int) -> np.ndarray:
    size = max(1, min(order, size))
    return np.sort(rng.choice(order, size=size, replace=False))


def _ff_subspace(group: GroupSpec, dim: int, rng: np.random.Generator) -> np.ndarray:
    """Indices of the span of dim random independent vectors."""
    basis: list[np.ndarray] = []
    span = {0}
    while len(basis) < dim:
        vec = rng.integers(0, group.modulus, size=group.dim)
        idx = group.index_of(tuple(int(v) for v in vec))
        if idx in span:
            continue
        basis.append(vec)
        new = set()
        for s in span:
            coords = np.asarray(group.coords_of(s), dtype=np.int64)
            for c in range(1, group.modulus):
                new.add(group.index_of(tuple((coords + c * vec) % group.modulus)))
        span |= new
    return np.asarray(sorted(span), dtype=np.int64)


def _run_trial(spec: dict, cfg: ConstantsConfig, base_seed: int, trial: int) -> dict:
    pipeline = spec["pipeline"]
    instance = spec.get("instance", {})
    params = spec.get("params", {})
    rng = make_rng(derive_seed(base_seed, trial, 0))
    run_seed = derive_seed(base_seed, trial, 1)
    if pipeline == "almost-periods":
        group = parse_group(instance["group"])
        a = _random_support(rng, group.order, round(instance.get("density_a", 0.5) * group.order))
        b = _random_support(rng, group.order, round(instance.get("density_b", 0.5) * group.order))
        f = fourier.convolve(GroupFunction.indicator(group, a), GroupFunction.indicator(group, b))
        report = pipelines.almost_period_bohr(f, params.get("p", 2.0), params["epsilon"], run_seed, cfg)
        return {"success": bool(report.passed), "length": None, "max_distance": report.max_distance}
    if pipeline == "find-ap-dense":
        n = instance["N"]
        a = 1 + _random_support(rng, n, round(instance.get("density_a", 0.5) * n))
        b = 1 + _random_support(rng, n, round(instance.get("density_b", 0.5) * n))
        report = pipelines.find_progression_dense(
            a, b, n, run_seed, cfg, compare_oracle=spec.get("compare_oracle", False)
        )
        out = {"success": bool(report.witness.verified), "length": report.witness.length}
        if report.oracle_length is not None:
            out["oracle_length"] = report.oracle_length
            out["oracle_dominated"] = report.witness.length <= report.oracle_length
        return out
    if pipeline == "find-ap-doubling":
        span = instance.get("range", 45)
        size = instance.get("size", 30)
        a = np.sort(rng.choice(span + 1, size=min(size, span + 1), replace=False))
        b = a if instance.get("equal", True) else np.sort(rng.choice(span + 1, size=min(size, span + 1), replace=False))
        report = pipelines.find_progression_small_doubling([int(v) for v in a], [int(v) for v in b], run_seed, cfg)
        return {"success": bool(report.witness.verified), "length": report.witness.length}
    if pipeline == "find-ap-ff":
        group = parse_group(instance["group"])
        a = _random_support(rng, group.order, round(instance.get("density_a", 0.5) * group.order))
        b = _random_support(rng, group.order, round(instance.get("density_b", 0.5) * group.order))
        report = pipelines.finite_field_translate(group, a, b, params.get("variant", "green"), run_seed, cfg)
        return {
            "success": bool(report.witness.verified),
            "length": report.witness.length,
            "dimension": report.stats["dimension"],
        }
    if pipeline == "bogolyubov":
        group = parse_group(instance["group"])
        if "subspace_dim" in instance:
            a = _ff_subspace(group, instance["subspace_dim"], rng)
        else:
            a = _random_support(rng, group.order, round(instance.get("density", 0.45) * group.order))
        report = pipelines.bogolyubov_bohr(group, a, run_seed, cfg)
        return {"success": bool(report.confirmed), "length": report.members}
    if pipeline in ("sample-fourier", "sample-physical"):
        group = parse_group(instance["group"])
        a = _random_support(rng, group.order, instance.get("size_a", group.order // 2))
        b = _random_support(rng, group.order, instance.get("size_b", group.order // 2))
        if pipeline == "sample-fourier":
            f = fourier.convolve(GroupFunction.indicator(group, a), GroupFunction.indicator(group, b))
            task = SamplingTask("fourier", params.get("p", 2.0), params["epsilon"], function=f, c_sample=cfg.c_sample)
        else:
            task = SamplingTask(
                "physical",
                params.get("p", 2.0),
                params["epsilon"],
                group=group,
                a_support=tuple(int(i) for i in a),
                b_support=tuple(int(i) for i in b),
                c_sample=cfg.c_sample,
            )
        report = task.run(run_seed)
        return {"success": bool(report.lp_error <= task.epsilon), "length": None, "lp_error": report.lp_error}
    raise ValueError(f"unknown experiment pipeline {pipeline!r}")


def run_experiment(spec: dict, cfg: ConstantsConfig, plot_path: str | None = None) -> dict:
    trials = int(spec.get("trials", 0))
    base_seed = int(spec.get("seed", 0))
    threads = max(1, int(os.environ.get("SUMSETLAB_THREADS", "1")))
    results: list[dict]
    if trials == 0:
        results = []
    elif threads == 1:
        results = [_run_trial(spec, cfg, base_seed, i) for i in range(trials)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda i: _run_trial(spec, cfg, base_seed, i), range(trials)))
    successes = sum(1 for r in results if r.get("success"))
    lengths = [r["length"] for r in results if r.get("length") is not None]
    aggregate: dict[str, Any] = {
        "trials": trials,
        "successes": successes,
        "success_rate": successes / trials if trials else None,
        "length_histogram": {str(k): lengths.count(k) for k in sorted(set(lengths))},
        "mean_length": float(np.mean(lengths)) if lengths else None,
    }
    if any("oracle_dominated" in r for r in results):
        aggregate["oracle_dominated"] = sum(1 for r in results if r.get("oracle_dominated"))
    if any("lp_error" in r for r in results):
        errors = [r["lp_error"] for r in results if "lp_error" in r]
        aggregate["mean_lp_error"] = float(np.mean(errors))
        aggregate["failure_rate"] = sum(1 for r in results if not r["success"]) / trials if trials else None
    plot_file = plot_path or spec.get("plot")
    if plot_file and lengths:
        _write_plot(plot_file, lengths, spec)
        aggregate["plot"] = str(plot_file)
    return aggregate


def _write_plot(path: str, lengths: list[int], spec: dict) -> None:
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "sumsetlab"
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(lengths, bins=range(1, max(lengths) + 2), align="left", rwidth=0.8)
    ax.set_xlabel("witness length")
    ax.set_ylabel("trials")
    ax.set_title(f"{spec.get('pipeline')} ({len(lengths)} trials)")
    bound = spec.get("bound")
    if bound:
        ax.axvline(bound, color="red", linestyle="--", label=f"bound {bound:.3g}")
        ax.legend()
    fig.savefig(path, format="svg")
    plt.close(fig)


def _cmd_experiment(args, cfg) -> tuple[dict, dict | None, str]:
    spec = json.loads(Path(args.spec).read_text())
    if "constants" in spec:
        cfg = ConstantsConfig.from_mapping({k.lower(): v for k, v in spec["constants"].items()})
    aggregate = run_experiment(spec, cfg, args.plot)
    verification = None
    if "min_success_rate" in spec and aggregate["success_rate"] is not None:
        verification = {"passed": bool(aggregate["success_rate"] >= spec["min_success_rate"])}
    summary = f"experiment: {aggregate['successes']}/{aggregate['trials']} successes"
    return {"aggregate": aggregate, "spec": spec}, verification, summary


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sumsetlab", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--constants", action="append", help="JSON file or key=value constant override")
    common.add_argument("--json-only", action="store_true", help="suppress the human summary on stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=argparse.ArgumentParser)

    def add_parser(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p = add_parser("fourier", help="transform/convolve indicator functions")
    p.add_argument("--group", required=True)
    p.add_argument("--support", required=True)
    p.add_argument("--measure", action="store_true", help="use the normalized measure instead of the indicator")
    p.add_argument("--convolve-with", default=None)
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--direct", action="store_true", help="force the direct-summation reference path")
    p.set_defaults(func=_cmd_fourier, seed=None)

    p = add_parser("bohr", help="Bohr set materialization, progression and Chang reduction")
    p.add_argument("--group", required=True)
    p.add_argument("--frequencies", required=True, help="JSON list of frequencies")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--materialize", action="store_true")
    p.add_argument("--find-ap", action="store_true")
    p.add_argument("--chang", type=float, default=None, metavar="TAU")
    p.set_defaults(func=_cmd_bohr, seed=None)

    p = add_parser("sample", help="random-sampling approximation runs")
    p.add_argument("--mode", choices=["fourier", "physical"], default="fourier")
    p.add_argument("--group", required=True)
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.set_defaults(func=_cmd_sample)

    p = add_parser("embed", help="two-set Freiman model embedding")
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--N", type=int, default=None)
    p.set_defaults(func=_cmd_embed, seed=None)

    p = add_parser("find-ap", help="progression/subspace pipelines")
    p.add_argument("flavor", choices=["dense", "doubling", "ff"])
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--N", type=int, default=None, help="interval bound for the dense pipeline")
    p.add_argument("--group", default=None, help="vector group for the ff pipeline")
    p.add_argument("--variant", choices=["green", "improved", "subset"], default="green")
    p.add_argument("--subset", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--oracle", action="store_true", help="compare against the longest-AP oracle")
    p.set_defaults(func=_cmd_find_ap)

    p = add_parser("almost-periods", help="Bohr set of verified L^p almost-periods of 1_A*1_B")
    p.add_argument("--group", required=True)
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_almost_periods)

    p = add_parser("bogolyubov", help="Bohr set inside 2A-2A with exact confirmation")
    p.add_argument("--group", required=True)
    p.add_argument("--A", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_bogolyubov)

    p = add_parser("oracle", help="brute-force oracles")
    p.add_argument("flavor", choices=["longest-ap", "periods"])
    p.add_argument("--set", default=None)
    p.add_argument("--modulus", type=int, default=None)
    p.add_argument("--group", default=None)
    p.add_argument("--A", default=None)
    p.add_argument("--B", default=None)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--ref", default="spectral-l1")
    p.add_argument("--measure", action="store_true", help="use mu_A*1_B instead of 1_A*1_B")
    p.set_defaults(func=_cmd_oracle, seed=None)

    p = add_parser("bounds", help="displayed bound formulas and crossover report")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--N", type=float, default=None)
    p.add_argument("--log-N", dest="log_N", type=float, default=None, help="natural log of N, for huge N")
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--K-A", dest="K_A", type=float, default=None)
    p.add_argument("--K-B", dest="K_B", type=float, default=None)
    p.add_argument("--grid", action="store_true")
    p.set_defaults(func=_cmd_bounds, seed=None)

    p = add_parser("experiment", help="seeded batch runs with aggregate statistics")
    p.add_argument("--spec", required=True)
    p.add_argument("--plot", default=None)
    p.set_defaults(func=_cmd_experiment, seed=None)

    return parser


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit:
        return _error("invalid arguments; see --help")
    try:
        cfg = load_constants(args.constants)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        return _error(f"bad constants: {exc}", kind="constants")
    try:
        result, verification, summary = args.func(args, cfg)
    except (ValueError, KeyError, OSError, GroupMismatchError, HypothesisError, CapExceededError) as exc:
        return _error(str(exc), kind=type(exc).__name__)
    arguments = {
        k: v for k, v in vars(args).items() if k not in ("func", "command", "constants", "json_only") and v is not None
    }
    report = {
        "manifest": build_manifest(args.command, arguments, cfg, getattr(args, "seed", None)),
        "command": args.command,
        "inputs": {},
        "result": result,
        "verification": verification,
    }
    emit(report, summary, args.json_only)
    if verification is not None and not verification["passed"]:
        return 2
    return 0


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
