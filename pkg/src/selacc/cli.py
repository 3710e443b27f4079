"""Command-line front end.

Subcommands: ``stats``, ``worst-cases``, ``sweep``, ``bound``, ``eval``,
``asm-demo``, ``fixtures``, ``rerun``.  Every command that writes files
also writes a run manifest capturing the resolved parameters, so
``selacc rerun <manifest>`` reproduces the outputs byte for byte.

Exit codes: 0 success, 1 usage or input errors, 2 infeasible bound,
3 enumeration guard exceeded.  The default seed can be overridden with
the ``SELACC_SEED`` environment variable.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import shutil
import sys
from pathlib import Path

from . import __version__, asm, bounds, metrics, scenarios, score_model, selector_sim
from .errors import (
    ComponentContractError,
    EnumerationGuardError,
    MapFormatError,
    MatrixFormatError,
)
from .fixtures import FIXTURE_NAMES, fixture_path

DEFAULT_SEED = 42
SEED_ENV = "SELACC_SEED"


class CliUsageError(Exception):
    """Usage-level problem; mapped to exit code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; remap through an exception
    def error(self, message):
        raise CliUsageError(f"{self.prog}: {message}")


def _abs(path: str) -> str:
    return str(Path(path).resolve())


def _abs_or_none(path):
    return None if path is None else _abs(path)


def _resolve_seed(value) -> int:
    if value is not None:
        return int(value)
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw, 0)
    except ValueError:
        raise CliUsageError(f"invalid {SEED_ENV} value {raw!r}") from None


def _parse_allowed(m, raw):
    """Comma list of algorithm ids or 1-based column positions."""
    if raw is None:
        return None
    out = []
    for token in raw.split(","):
        token = token.strip()
        if not token:
            continue
        if token in m.algorithm_ids:
            out.append(m.algorithm_ids.index(token))
        elif token.isdigit():
            pos = int(token)
            if not 1 <= pos <= m.n_algorithms:
                raise CliUsageError(f"--allowed position {pos} out of range 1..{m.n_algorithms}")
            out.append(pos - 1)
        else:
            raise CliUsageError(f"--allowed entry {token!r} is neither an algorithm id nor a position")
    if not out:
        raise CliUsageError("--allowed must name at least one algorithm")
    return out


def _emit(text: str, output) -> list[str]:
    sys.stdout.write(text)
    if output:
        Path(output).write_text(text, encoding="utf-8")
        return [output]
    return []


def _manifest_target(first_output: str) -> str:
    if first_output.endswith(".json"):
        return first_output[:-5] + ".manifest.json"
    return first_output + ".manifest.json"


def _write_manifest(command: str, params: dict, inputs, outputs, target=None):
    if not outputs and target is None:
        return
    target = target or _manifest_target(outputs[0])
    data = {
        "command": command,
        "inputs": [_abs(p) for p in inputs],
        "manifest_version": 1,
        "outputs": [_abs(p) for p in outputs],
        "params": params,
        "tool": "selacc",
        "version": __version__,
    }
    Path(target).write_text(json.dumps(data, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _run_stats(matrix, binarize, output) -> int:
    m = score_model.load_scores(matrix)
    if binarize:
        m = score_model.binarize(m)
    stats = score_model.column_stats(m)
    lines = [f"{'algorithm':<14} {'mean_pct':>9} {'wins':>5} {'win_rate_pct':>13}"]
    for s in stats:
        lines.append(
            f"{s.algorithm_id:<14} {s.mean_score * 100:>9.2f} {s.win_count:>5d} "
            f"{s.win_rate * 100:>13.2f}"
        )
    best = max(stats, key=lambda s: s.mean_score)
    lines.append(f"best: {best.algorithm_id} (mean {best.mean_score * 100:.2f}%)")
    outputs = _emit("\n".join(lines) + "\n", output)
    _write_manifest("stats", {"matrix": matrix, "binarize": binarize, "output": output},
                    [matrix], outputs)
    return 0


def _run_worst_cases(matrix, wrong_count, allowed, policy, output) -> int:
    m = score_model.load_scores(matrix)
    allowed_idx = _parse_allowed(m, allowed)
    cases = selector_sim.enumerate_error_cases(m, wrong_count, allowed_idx, policy)
    best_sel, best_mean = score_model.oracle_selection(m, allowed_idx)

    def fmt(sel):
        return ",".join(m.algorithm_ids[c] for c in sel.choices)

    width = max(24, len(fmt(best_sel)) + 2)
    lines = [f"{'case':<6} {'errors':<18} {'selection':<{width}} {'mean_pct':>9}"]
    lines.append(f"{'best':<6} {'-':<18} {fmt(best_sel):<{width}} {best_mean * 100:>9.2f}")
    combos = itertools.combinations(range(m.n_instances), wrong_count)
    for idx, (combo, case) in enumerate(zip(combos, cases), start=1):
        errs = ",".join(m.instance_ids[i] for i in combo) or "-"
        lines.append(f"{idx:<6d} {errs:<18} {fmt(case.selection):<{width}} {case.mean_score * 100:>9.2f}")
    var = selector_sim.variance([c.mean_score * 100 for c in cases])
    lines.append(f"cases {len(cases)}  variance_pct2 {var:.4f}")
    outputs = _emit("\n".join(lines) + "\n", output)
    _write_manifest(
        "worst-cases",
        {"matrix": matrix, "wrong_count": wrong_count, "allowed": allowed,
         "policy": policy, "output": output},
        [matrix], outputs)
    return 0


def _run_sweep(matrix, trials, seed, step_pct, policy, error_model, output) -> int:
    m = score_model.load_scores(matrix)
    cfg = selector_sim.SelectorConfig(
        accuracy=1.0, error_model=error_model, wrong_pick=policy, trials=trials, seed=seed
    )
    curve = selector_sim.sweep(m, cfg, grid_step=step_pct / 100.0)
    csv_path, json_path = f"{output}.csv", f"{output}.json"
    Path(csv_path).write_text(selector_sim.curve_to_csv(curve), encoding="utf-8")
    Path(json_path).write_text(selector_sim.curve_to_json(curve), encoding="utf-8")
    print(f"wrote {csv_path} and {json_path} ({len(curve.points)} points)")
    _write_manifest(
        "sweep",
        {"matrix": matrix, "trials": trials, "seed": seed, "step_pct": step_pct,
         "policy": policy, "error_model": error_model, "output": output},
        [matrix], [csv_path, json_path], target=f"{output}.manifest.json")
    return 0


def _run_bound(matrix, mode, grid_step_pct, trials, seed, policy, error_model, output) -> int:
    m = score_model.load_scores(matrix)
    if mode == "binary":
        if not score_model.is_binary(m):
            print("note: input is not one-hot; binarizing first", file=sys.stderr)
            m = score_model.binarize(m)
        report = bounds.binary_min_accuracy(m)
    else:
        cfg = selector_sim.SelectorConfig(
            accuracy=1.0, error_model=error_model, wrong_pick=policy, trials=trials, seed=seed
        )
        report = bounds.lemma_min_accuracy(m, cfg, mode=mode, grid_step=grid_step_pct / 100.0)
    Path(output).write_text(bounds.report_to_json(report), encoding="utf-8")
    status = "feasible" if report.feasible else "infeasible"
    print(
        f"mode {report.mode}: min_accuracy {report.min_accuracy * 100:.2f}% "
        f"({status}; sigma_best {report.sigma_best * 100:.2f}%, best {report.best_algorithm})"
    )
    _write_manifest(
        "bound",
        {"matrix": matrix, "mode": mode, "grid_step_pct": grid_step_pct, "trials": trials,
         "seed": seed, "policy": policy, "error_model": error_model, "output": output},
        [matrix], [output])
    return 0 if report.feasible else 2


def _run_eval(result, truth, weighted, output) -> int:
    rmap = metrics.load_label_map(result)
    tmap = metrics.load_label_map(truth)
    evals, mean = metrics.evaluate_maps(rmap, tmap, weighted=weighted)
    lines = [f"{'label':<7} {'result_px':>9} {'truth_px':>9} {'matched_px':>10} {'f':>9} {'reduced_f':>10}"]
    for e in evals:
        c = e.counts
        lines.append(
            f"{e.label:<7d} {c.result_pixels:>9d} {c.ground_truth_pixels:>9d} "
            f"{c.matched_pixels:>10d} {e.f:>9.6f} {e.reduced:>10.6f}"
        )
    kind = "weighted" if weighted else "unweighted"
    lines.append(f"mean_reduced_f {mean:.6f} ({kind})")
    outputs = _emit("\n".join(lines) + "\n", output)
    _write_manifest(
        "eval",
        {"result": result, "truth": truth, "weighted": weighted, "output": output},
        [result, truth], outputs)
    return 0


def _run_asm_demo(scenario, max_iterations, output) -> int:
    name = scenario
    if name not in scenarios.SCENARIO_NAMES and Path(name).exists():
        data = json.loads(Path(name).read_text(encoding="utf-8"))
        if not isinstance(data, dict) or "scenario" not in data:
            raise CliUsageError(f"scenario file {name} must carry a 'scenario' key")
        if max_iterations is None:
            max_iterations = data.get("max_iterations")
        name = data["scenario"]
    sc = scenarios.get_scenario(name)
    iterations = sc.max_iterations if max_iterations is None else int(max_iterations)
    state = asm.run_asm(sc.instance, sc.components, max_iterations=iterations)
    outputs = _emit(asm.trace_jsonl(state), output)
    _write_manifest(
        "asm-demo",
        {"scenario": name, "max_iterations": iterations, "output": output},
        [], outputs)
    return 0


def _run_fixtures(name, copy_to) -> int:
    names = FIXTURE_NAMES if name is None else (name,)
    paths = [fixture_path(n) for n in names]  # validates names
    if copy_to:
        dest = Path(copy_to)
        dest.mkdir(parents=True, exist_ok=True)
        for n, p in zip(names, paths):
            shutil.copyfile(p, dest / n)
            print(f"copied {n} -> {dest / n}")
    elif name is None:
        for n in names:
            print(n)
    else:
        print(paths[0])
    return 0


_RUNNERS = {
    "stats": _run_stats,
    "worst-cases": _run_worst_cases,
    "sweep": _run_sweep,
    "bound": _run_bound,
    "eval": _run_eval,
    "asm-demo": _run_asm_demo,
}

_OUTPUT_PARAMS = {name: ("output",) for name in _RUNNERS}


def _run_rerun(manifest, outdir) -> int:
    data = json.loads(Path(manifest).read_text(encoding="utf-8"))
    command = data.get("command")
    params = data.get("params")
    if command not in _RUNNERS or not isinstance(params, dict):
        raise CliUsageError(f"{manifest} is not a usable selacc manifest")
    params = dict(params)
    if outdir:
        dest = Path(outdir)
        dest.mkdir(parents=True, exist_ok=True)
        for key in _OUTPUT_PARAMS[command]:
            if params.get(key):
                params[key] = str(dest / Path(params[key]).name)
    return _RUNNERS[command](**params)


def build_parser() -> _Parser:
    p = _Parser(prog="selacc", description="Analyze algorithm-portfolio selection accuracy.")
    p.add_argument("--version", action="version", version=f"selacc {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    sp = sub.add_parser("stats", help="per-algorithm mean scores and win rates")
    sp.add_argument("matrix", help="score matrix CSV")
    sp.add_argument("--binarize", action="store_true", help="one-hot the matrix first")
    sp.add_argument("--output", help="also write the table to this file")
    sp.set_defaults(func=lambda a: _run_stats(_abs(a.matrix), a.binarize, _abs_or_none(a.output)))

    sp = sub.add_parser("worst-cases", help="enumerate selections with exactly k wrong picks")
    sp.add_argument("matrix")
    sp.add_argument("--wrong-count", type=int, default=1, metavar="K")
    sp.add_argument("--allowed", metavar="LIST",
                    help="comma list of algorithm ids or 1-based positions")
    sp.add_argument("--policy", choices=selector_sim.WRONG_PICKS, default="worst")
    sp.add_argument("--output")
    sp.set_defaults(func=lambda a: _run_worst_cases(
        _abs(a.matrix), a.wrong_count, a.allowed, a.policy, _abs_or_none(a.output)))

    sp = sub.add_parser("sweep", help="Monte Carlo mean-score/variance curve over an accuracy grid")
    sp.add_argument("matrix")
    sp.add_argument("--trials", type=int, default=selector_sim.DEFAULT_TRIALS)
    sp.add_argument("--seed", type=int, default=None,
                    help=f"RNG seed (default {DEFAULT_SEED}, or ${SEED_ENV})")
    sp.add_argument("--step", type=float, default=1.0, metavar="PCT",
                    help="grid step in percentage points (default 1)")
    sp.add_argument("--policy", choices=selector_sim.WRONG_PICKS, default="worst")
    sp.add_argument("--error-model", choices=selector_sim.ERROR_MODELS, default="exact-count")
    sp.add_argument("--output", default="sweep", metavar="PREFIX",
                    help="output prefix for PREFIX.csv / PREFIX.json (default sweep)")
    sp.set_defaults(func=lambda a: _run_sweep(
        _abs(a.matrix), a.trials, _resolve_seed(a.seed), a.step, a.policy,
        a.error_model, _abs(a.output)))

    sp = sub.add_parser("bound", help="minimal required selector accuracy")
    sp.add_argument("matrix")
    sp.add_argument("--mode", choices=("binary",) + bounds.LEMMA_MODES, default="lemma-score")
    sp.add_argument("--grid-step", type=float, default=1.0, metavar="PCT",
                    help="grid step in percentage points (default 1)")
    sp.add_argument("--trials", type=int, default=selector_sim.DEFAULT_TRIALS)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--policy", choices=selector_sim.WRONG_PICKS, default="worst")
    sp.add_argument("--error-model", choices=selector_sim.ERROR_MODELS, default="exact-count")
    sp.add_argument("--output", default="bound.json", metavar="FILE")
    sp.set_defaults(func=lambda a: _run_bound(
        _abs(a.matrix), a.mode, a.grid_step, a.trials, _resolve_seed(a.seed),
        a.policy, a.error_model, _abs(a.output)))

    sp = sub.add_parser("eval", help="pixel-overlap scores for a result/truth label-map pair")
    sp.add_argument("result", help="result label map (text grid)")
    sp.add_argument("truth", help="ground-truth label map (text grid)")
    sp.add_argument("--weighted", action="store_true",
                    help="weight the mean by ground-truth pixel counts")
    sp.add_argument("--output")
    sp.set_defaults(func=lambda a: _run_eval(
        _abs(a.result), _abs(a.truth), a.weighted, _abs_or_none(a.output)))

    sp = sub.add_parser("asm-demo", help="run a bundled select-verify loop scenario")
    sp.add_argument("scenario",
                    help=f"one of: {', '.join(scenarios.SCENARIO_NAMES)}; "
                         "or a JSON file with a 'scenario' key")
    sp.add_argument("--max-iterations", type=int, default=None)
    sp.add_argument("--output", help="also write the JSONL trace to this file")
    sp.set_defaults(func=lambda a: _run_asm_demo(a.scenario, a.max_iterations,
                                                 _abs_or_none(a.output)))

    sp = sub.add_parser("fixtures", help="list, locate, or copy the bundled example matrices")
    sp.add_argument("name", nargs="?", help="fixture file name (omit to list)")
    sp.add_argument("--copy-to", metavar="DIR")
    sp.set_defaults(func=lambda a: _run_fixtures(a.name, a.copy_to))

    sp = sub.add_parser("rerun", help="re-execute a command from its manifest")
    sp.add_argument("manifest", help="manifest JSON written by a previous run")
    sp.add_argument("--outdir", help="redirect output files into this directory")
    sp.set_defaults(func=lambda a: _run_rerun(_abs(a.manifest), a.outdir))

    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliUsageError as exc:
        print(f"selacc: error: {exc}", file=sys.stderr)
        return 1
    except EnumerationGuardError as exc:
        print(f"selacc: error: {exc}", file=sys.stderr)
        return 3
    except (MatrixFormatError, MapFormatError, ComponentContractError) as exc:
        print(f"selacc: error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, OSError) as exc:
        print(f"selacc: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
