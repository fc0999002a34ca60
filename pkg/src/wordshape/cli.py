"""Command-line front end.

Subcommands:
  rate         evaluate rate functions on grids, cross-check the two K routes
  sample       draw words, shapes, spectra, block tops, Brownian functionals
  verify       run the ldp / identity / concentration / oracle check suites
  equilibrium  equilibrium-measure diagnostics at one point

Every command is deterministic given its seed: outputs are byte-identical
across runs and across worker counts. To keep that true the resolved-config
line never mentions the worker count; workers change wall time only.
Exit codes: 0 all checks pass, 1 a check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import _rng, montecarlo as mc, rate_functions as rf, rmt, variational
from . import tableaux as tb, wordmodel as wm

_PRESET_NAMES = ("quick", "desk", "thorough")


def _fmt(v: float) -> str:
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if isinstance(v, float) and math.isnan(v):
        return "nan"
    return format(float(v), ".12g")


def _parse_grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError("grid must look like start:stop:step")
    start, stop, step = (float(p) for p in parts)
    if step <= 0 or stop < start:
        raise ValueError("grid needs step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def _parse_probs(text: str) -> tuple[float, ...]:
    return tuple(float(p) for p in text.split(","))


def _emit(lines: list[str], out: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_preset(name_or_path: str) -> dict:
    if name_or_path in _PRESET_NAMES:
        raw = resources.files("wordshape").joinpath(
            f"presets/{name_or_path}.json").read_text()
    else:
        raw = Path(name_or_path).read_text()
    return json.loads(raw)


def _model_from_spec(spec):
    """Preset model field: 'uniform', 'traceless', {'probs': [...]}, or
    {'type': 'nonuniform', 'p_max':, 'k':, 'filler_letters':} which spreads
    the leftover mass over many equal filler letters."""
    if spec in ("uniform", "traceless"):
        return spec
    if isinstance(spec, dict) and "probs" in spec:
        return wm.AlphabetDistribution(tuple(spec["probs"]))
    if isinstance(spec, dict) and spec.get("type") == "nonuniform":
        k, p_max, filler = spec["k"], spec["p_max"], spec["filler_letters"]
        rest = 1.0 - k * p_max
        probs = (p_max,) * k + (rest / filler,) * filler
        return wm.AlphabetDistribution(probs)
    raise ValueError(f"unrecognized model spec {spec!r}")


# ---------------------------------------------------------------------------
# rate


def _rate_value(fn: str, x, eta: float | None) -> float:
    if fn == "I1":
        return float(rf.rate_I_r([float(x)]))
    if fn == "Ir":
        return float(rf.rate_I_r([float(v) for v in x]))
    if fn == "J":
        return float(rf.rate_J(float(x)))
    if fn == "Jp":
        return rf.rate_J_prime(float(x))
    if fn == "Jpp":
        return rf.rate_J_second(float(x))
    if fn == "K":
        return float(rf.rate_K_closed(float(x)))
    if fn == "Keta":
        if eta is None:
            raise ValueError("Keta needs --eta")
        return float(variational.rate_K_eta(float(x), eta))
    if fn == "Keta-asym":
        if eta is None:
            raise ValueError("Keta-asym needs --eta")
        return rf.k_eta_asymptotic(float(x), eta)
    raise ValueError(f"unknown rate function {fn!r}")


def cmd_rate(args) -> int:
    if args.grid and args.at:
        raise ValueError("give --grid or --at, not both")
    if args.fn == "Ir":
        if not args.at:
            raise ValueError("Ir takes --at with one shape vector")
        xs = [tuple(args.at)]
    elif args.grid:
        xs = _parse_grid(args.grid)
    elif args.at:
        xs = list(args.at)
    else:
        raise ValueError("need --grid or --at")

    if args.compare:
        if args.compare != "closed:variational" or args.fn != "K":
            raise ValueError("--compare supports K with closed:variational")
        rows = [(x, float(rf.rate_K_closed(x)),
                 float(variational.rate_K_variational(x))) for x in xs]
        diffs = [abs(c - v) for _, c, v in rows]
        if args.format == "json":
            payload = {"schema": "wordshape-rate-compare-1", "fn": "K",
                       "rows": [{"x": x, "closed": c, "variational": v,
                                 "abs_diff": abs(c - v)} for x, c, v in rows],
                       "max_abs_diff": max(diffs)}
            _emit([json.dumps(payload, sort_keys=True)], args.out)
        else:
            lines = ["# wordshape rate-compare schema 1",
                     "x,closed,variational,abs_diff"]
            lines += [f"{_fmt(x)},{_fmt(c)},{_fmt(v)},{_fmt(abs(c - v))}"
                      for x, c, v in rows]
            lines.append(f"# max_abs_diff = {_fmt(max(diffs))}")
            _emit(lines, args.out)
        return 0

    rows = [(x, _rate_value(args.fn, x, args.eta)) for x in xs]
    if args.format == "json":
        payload = {"schema": "wordshape-rate-1", "fn": args.fn, "eta": args.eta,
                   "rows": [{"x": list(x) if isinstance(x, tuple) else x,
                             "value": v} for x, v in rows]}
        _emit([json.dumps(payload, sort_keys=True)], args.out)
    else:
        lines = ["# wordshape rate schema 1", "fn,x,eta,value"]
        eta_cell = "" if args.eta is None else _fmt(args.eta)
        for x, v in rows:
            x_cell = ";".join(_fmt(u) for u in x) if isinstance(x, tuple) else _fmt(x)
            lines.append(f"{args.fn},{x_cell},{eta_cell},{_fmt(v)}")
        _emit(lines, args.out)
    return 0


# ---------------------------------------------------------------------------
# sample


def _config_line(**kv) -> str:
    cells = [f"{k}={v}" for k, v in sorted(kv.items()) if v is not None]
    return "# config " + " ".join(cells)


def cmd_sample(args) -> int:
    lines = ["# wordshape sample schema 1"]
    t = args.target
    if t in ("words", "shape"):
        if args.uniform is not None:
            dist = wm.uniform(args.uniform)
        elif args.probs and t == "words":
            dist = wm.AlphabetDistribution(_parse_probs(args.probs))
        else:
            raise ValueError(f"{t} needs --uniform M" +
                             (" or --probs" if t == "words" else ""))
        m = dist.m
        if t == "words":
            lines.append(_config_line(target=t, m=m, probs=args.probs,
                                      n=args.n, reps=args.reps, seed=args.seed))
            lines.append("rep,n,m,word")
            for rep in range(args.reps):
                w = wm.sample_word(dist, args.n, _rng.stream_seed(args.seed, rep))
                word = " ".join(str(int(c)) for c in w.letters)
                lines.append(f"{rep},{args.n},{m},{word}")
        else:
            r = args.r if args.r is not None else m
            if not 1 <= r <= m:
                raise ValueError("need 1 <= r <= m")
            lines.append(_config_line(target=t, m=m, n=args.n, r=r,
                                      reps=args.reps, seed=args.seed))
            head = ",".join(f"row{i + 1}" for i in range(r))
            zhead = ",".join(f"z{i + 1}" for i in range(r))
            lines.append(f"rep,n,m,{head},{zhead}")
            seeds = _rng.stream_seeds(args.seed, args.reps)
            rows = np.zeros(m, dtype=np.int64)
            from . import _kernels
            for rep in range(args.reps):
                rows[:] = 0
                _kernels.shape_uniform_stream(seeds[rep], args.n, m, rows)
                z = (rows[:r] - args.n / m) / math.sqrt(args.n)
                cells = [str(rep), str(args.n), str(m)]
                cells += [str(int(v)) for v in rows[:r]]
                cells += [_fmt(float(v)) for v in z]
                lines.append(",".join(cells))
    elif t in ("gue", "traceless"):
        spectra = rmt.sample_gue_spectra(args.m, args.reps, args.seed,
                                         center=(t == "traceless"))
        lines.append(_config_line(target=t, m=args.m, reps=args.reps,
                                  seed=args.seed))
        lines.append("rep," + ",".join(f"ev{i + 1}" for i in range(args.m)))
        for rep in range(args.reps):
            lines.append(str(rep) + "," + ",".join(_fmt(v) for v in spectra[rep]))
    elif t == "blocks":
        spec = rmt.BlockEnsembleSpec(_parse_probs(args.probs),
                                     tuple(int(v) for v in args.mults.split(",")))
        tops = rmt.sample_block_tops(spec, args.reps, args.seed)
        lines.append(_config_line(target=t, probs=args.probs, mults=args.mults,
                                  reps=args.reps, seed=args.seed))
        lines.append("rep,lambda_tilde_1_0")
        lines += [f"{rep},{_fmt(v)}" for rep, v in enumerate(tops)]
    elif t == "brownian":
        vals = rmt.brownian_functional_batch(args.k, args.steps, args.rho,
                                             args.reps, args.seed)
        lines.append(_config_line(target=t, k=args.k, steps=args.steps,
                                  rho=args.rho, reps=args.reps, seed=args.seed))
        lines.append("rep,value")
        lines += [f"{rep},{_fmt(v)}" for rep, v in enumerate(vals)]
    else:
        raise ValueError(f"unknown sample target {t!r}")
    _emit(lines, args.out)
    return 0


# ---------------------------------------------------------------------------
# verify


def _check_line(kind: str, name: str, fields: dict, status: str) -> str:
    body = ",".join(f"{k}={v}" for k, v in fields.items())
    return f"check,{kind},{name},{body},status={status}"


def _verify_ldp(args, preset: dict) -> tuple[list[str], list[dict]]:
    lines = ["# wordshape verify-ldp schema 1",
             f"# preset {preset.get('name', 'custom')} seed {args.seed}"]
    lines.append(mc._CSV_HEADER)
    failures: list[dict] = []
    checks: list[str] = []
    for idx, exp in enumerate(preset["ldp"]["experiments"]):
        model = _model_from_spec(exp["model"])
        thresholds = tuple(tuple(x) if isinstance(x, list) else float(x)
                           for x in exp["thresholds"])
        cfg = mc.ExperimentConfig(
            model=model, n=int(exp.get("n", 0)),
            sizes=tuple(int(s) for s in exp.get("sizes", ())),
            thresholds=thresholds, side=exp["side"], reps=int(exp["reps"]),
            seed=_rng.stream_seed(args.seed, idx), workers=args.workers,
            speed=exp.get("speed"))
        table = mc.ldp_slope_experiment(cfg)
        lines += table.to_csv().splitlines()[2:]
        band = exp.get("ratio_band")
        name = exp.get("name", f"experiment{idx}")
        if band is not None:
            for row in table.rows:
                ratio = row.ratio
                fields = {"x": _fmt(float(row.x)), "size": row.size,
                          "ratio": _fmt(ratio),
                          "band": f"{_fmt(band[0])}:{_fmt(band[1])}"}
                ok = (not math.isnan(ratio)) and band[0] <= ratio <= band[1]
                checks.append(_check_line("ldp", name, fields,
                                          "PASS" if ok else "FAIL"))
                if not ok:
                    failures.append({"check": "ldp", "name": name,
                                     "x": _fmt(float(row.x)),
                                     "ratio": _fmt(ratio),
                                     "band": [band[0], band[1]]})
        elif exp.get("assert") == "monotone-positive":
            rates = [r.estimate.rate_estimate for r in table.rows]
            pos = all(v > 0 for v in rates)
            mono = all(a >= b for a, b in zip(rates, rates[1:]))
            fields = {"rates": ";".join(_fmt(v) for v in rates)}
            ok = pos and mono
            checks.append(_check_line("ldp", name, fields,
                                      "PASS" if ok else "FAIL"))
            if not ok:
                failures.append({"check": "ldp", "name": name,
                                 "rates": [_fmt(v) for v in rates],
                                 "want": "positive and nonincreasing in x"})
        else:
            for row in table.rows:
                checks.append(_check_line(
                    "ldp", name,
                    {"x": _fmt(float(row.x)) if not isinstance(row.x, tuple)
                     else ";".join(_fmt(v) for v in row.x),
                     "ratio": _fmt(row.ratio)}, "REPORT"))
    return lines + checks, failures


def _verify_identity(args, preset: dict | None) -> tuple[list[str], list[dict]]:
    lines = ["# wordshape verify-identity schema 1"]
    failures: list[dict] = []
    if args.which:
        k = args.k if args.k is not None else (4 if args.which == "brownian-functional" else 5)
        reps = args.reps if args.reps is not None else \
            (10000 if args.which == "brownian-functional" else 100000)
        if args.which == "lambda-decomposition":
            checks = [{"name": "lambda-decomposition",
                       "a": {"kind": "gue_top", "m": k},
                       "b": {"kind": "block_top_plus_gauss",
                             "probs": [1.0 / k], "mults": [k]},
                       "reps": reps}]
        elif args.which == "brownian-functional":
            checks = [{"name": "brownian-functional",
                       "a": {"kind": "brownian", "k": k, "steps": 4096, "rho": 0.0},
                       "b": {"kind": "gue_top", "m": k},
                       "reps": reps, "reps_b": 10 * reps, "abs_threshold": 0.03}]
        elif args.which == "null":
            checks = [{"name": "null",
                       "a": {"kind": "gue_top", "m": k},
                       "b": {"kind": "gue_top", "m": k}, "reps": reps}]
        else:
            raise ValueError(f"unknown identity {args.which!r}")
    else:
        if preset is None:
            raise ValueError("verify identity needs --which or --preset")
        checks = preset["identity"]["checks"]
    for idx, chk in enumerate(checks):
        res = mc.identity_ks_test(
            chk["a"], chk["b"], int(chk["reps"]),
            _rng.stream_seed(args.seed, 100 + idx),
            reps_b=int(chk["reps_b"]) if "reps_b" in chk else None,
            bias_allowance=float(chk.get("bias_allowance", 0.0)))
        if "abs_threshold" in chk:
            thr = float(chk["abs_threshold"])
            ok = res.statistic <= thr
        else:
            thr = res.threshold
            ok = res.passed
        name = chk.get("name", f"identity{idx}")
        lines.append(_check_line("identity", name,
                                 {"ks": _fmt(res.statistic), "threshold": _fmt(thr),
                                  "n_a": res.n_a, "n_b": res.n_b},
                                 "PASS" if ok else "FAIL"))
        if not ok:
            failures.append({"check": "identity", "name": name,
                             "ks": _fmt(res.statistic), "threshold": _fmt(thr)})
    return lines, failures


def _verify_concentration(args, preset: dict) -> tuple[list[str], list[dict]]:
    lines = ["# wordshape verify-concentration schema 1"]
    failures: list[dict] = []
    sec = preset["concentration"]
    report = mc.concentration_check(
        _model_from_spec(sec["model"]),
        [(int(n), int(s)) for n, s in sec["grid"]],
        [float(e) for e in sec["eps"]], int(sec["reps"]),
        _rng.stream_seed(args.seed, 200), workers=args.workers)
    lines.append("side,n,size,eps,p_hat,reps")
    for r in report.rows:
        lines.append(f"{r.side},{r.n},{r.size},{_fmt(r.eps)},{_fmt(r.p_hat)},{r.reps}")
    for side in ("upper", "lower"):
        if side in report.insufficient:
            lines.append(_check_line("concentration", side,
                                     {"reason": "fewer than 3 nonzero tails"},
                                     "INSUFFICIENT"))
            failures.append({"check": "concentration", "name": side,
                             "reason": "insufficient data"})
            continue
        fit = report.fits[side]
        ok = fit.c_hat > 0.0 and fit.envelope_ok
        lines.append(_check_line(
            "concentration", side,
            {"c_hat": _fmt(fit.c_hat), "points": fit.n_points,
             "envelope_ok": str(fit.envelope_ok).lower(),
             "max_envelope_ratio": _fmt(fit.max_envelope_ratio)},
            "PASS" if ok else "FAIL"))
        if not ok:
            failures.append({"check": "concentration", "name": side,
                             "c_hat": _fmt(fit.c_hat),
                             "envelope_ok": fit.envelope_ok})
    return lines, failures


def _verify_oracle(args) -> tuple[list[str], list[dict]]:
    lines = ["# wordshape verify-oracle schema 1"]
    failures: list[dict] = []

    def record(name: str, ok: bool, detail: str):
        lines.append(_check_line("oracle", name, {"detail": detail},
                                 "PASS" if ok else "FAIL"))
        if not ok:
            failures.append({"check": "oracle", "name": name, "detail": detail})

    bad = 0
    total = 0
    for m in range(1, 4):
        for n in range(0, 7):
            for code in range(m ** n):
                letters = np.empty(n, dtype=np.int64)
                c = code
                for i in range(n):
                    letters[i] = c % m
                    c //= m
                word = wm.Word(letters)
                shape = tb.rsk_shape(word, m)
                total += 1
                if n and shape.row(1) != tb.lis_weak(word):
                    bad += 1
                    continue
                if any(shape.prefix_sum(k) != tb.v_k_oracle(word, k)
                       for k in range(1, m + 1)):
                    bad += 1
    record("rsk-greene", bad == 0,
           f"words={total};alphabet<=3;length<=6;mismatches={bad}")

    worst = max(abs(float(rf.rate_K_closed(x)) -
                    float(variational.rate_K_variational(x)))
                for x in (0.5, 1.0, 1.5))
    record("k-two-routes", worst <= 1e-8, f"max_abs_diff={_fmt(worst)}")

    worst = max(max(abs(float(variational.rate_K_eta(x, 0.0)) - float(rf.rate_J(x))),
                    abs(float(variational.rate_K_eta(x, 1.0)) -
                        float(rf.rate_K_closed(x))))
                for x in (0.5, 1.0, 1.5))
    record("legendre-endpoints", worst <= 1e-8, f"max_abs_diff={_fmt(worst)}")

    worst = max(abs(float(rf.rate_I_r([x])) - rf.i1_by_quadrature(x))
                for x in (2.2, 3.0))
    record("i1-quadrature", worst <= 1e-10, f"max_abs_diff={_fmt(worst)}")

    mu = variational.equilibrium_measure(1.0)
    mass_err = abs(mu.mass() - 1.0)
    mean_err = abs(mu.mean() + 1.0)
    record("equilibrium-moments", max(mass_err, mean_err) <= 1e-8,
           f"mass_err={_fmt(mass_err)};mean_err={_fmt(mean_err)}")

    resid = variational.inf_convolution_check(0.0, 0.5)
    record("inf-convolution", resid <= 1e-4, f"residual={_fmt(resid)}")
    return lines, failures


def cmd_verify(args) -> int:
    preset = _load_preset(args.preset) if args.preset else None
    if args.seed is None:
        args.seed = int(preset.get("seed", 20260817)) if preset else 20260817
    if args.target == "ldp":
        if preset is None:
            raise ValueError("verify ldp needs --preset")
        lines, failures = _verify_ldp(args, preset)
    elif args.target == "identity":
        lines, failures = _verify_identity(args, preset)
    elif args.target == "concentration":
        if preset is None:
            raise ValueError("verify concentration needs --preset")
        lines, failures = _verify_concentration(args, preset)
    elif args.target == "oracle":
        lines, failures = _verify_oracle(args)
    else:
        raise ValueError(f"unknown verify target {args.target!r}")
    lines.append(f"result={'FAIL' if failures else 'PASS'}")
    if failures:
        lines.append("failures=" + json.dumps(failures, sort_keys=True,
                                              separators=(",", ":")))
    _emit(lines, args.out)
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# equilibrium


def cmd_equilibrium(args) -> int:
    mu = variational.equilibrium_measure(args.x)
    kv = float(variational.rate_K_variational(args.x))
    kc = float(rf.rate_K_closed(args.x))
    payload = {
        "schema": "wordshape-equilibrium-1",
        "x": args.x,
        "L": mu.L,
        "c2": mu.c2,
        "mass_error": mu.mass() - 1.0,
        "mean_error": mu.mean() + args.x,
        "K_variational": kv,
        "K_closed": kc,
        "abs_diff": abs(kv - kc),
    }
    _emit([json.dumps(payload, sort_keys=True)], args.out)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wordshape",
                                description="samplers and rate functions "
                                            "with verification experiments")
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("rate", help="evaluate rate functions")
    pr.add_argument("--fn", required=True,
                    choices=["I1", "Ir", "J", "Jp", "Jpp", "K", "Keta", "Keta-asym"])
    pr.add_argument("--grid", help="start:stop:step, stop inclusive")
    pr.add_argument("--at", type=float, nargs="+",
                    help="explicit points (a shape vector for Ir)")
    pr.add_argument("--eta", type=float)
    pr.add_argument("--compare", help="closed:variational (fn K only)")
    pr.add_argument("--format", choices=["csv", "json"], default="csv")
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_rate)

    ps = sub.add_parser("sample", help="draw samples")
    ps.add_argument("target",
                    choices=["words", "shape", "gue", "traceless", "blocks",
                             "brownian"])
    ps.add_argument("--uniform", type=int, help="uniform alphabet size")
    ps.add_argument("--probs", help="comma-separated probabilities")
    ps.add_argument("--mults", help="comma-separated block multiplicities")
    ps.add_argument("--n", type=int, default=100, help="word length")
    ps.add_argument("--m", type=int, default=5, help="matrix dimension")
    ps.add_argument("--r", type=int, help="rows to report (shape)")
    ps.add_argument("--k", type=int, default=4, help="Brownian coordinates")
    ps.add_argument("--steps", type=int, default=4096, help="Brownian grid size")
    ps.add_argument("--rho", type=float, default=0.0,
                    help="Brownian off-diagonal correlation")
    ps.add_argument("--reps", type=int, default=1)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--out")
    ps.set_defaults(func=cmd_sample)

    pv = sub.add_parser("verify", help="run check suites")
    pv.add_argument("target", choices=["ldp", "identity", "concentration",
                                       "oracle"])
    pv.add_argument("--preset", help="quick | desk | thorough | path to JSON")
    pv.add_argument("--seed", type=int)
    pv.add_argument("--workers", type=int, default=1)
    pv.add_argument("--which",
                    choices=["lambda-decomposition", "brownian-functional",
                             "null"], help="single identity to test")
    pv.add_argument("--k", type=int, help="dimension for --which")
    pv.add_argument("--reps", type=int, help="repetitions for --which")
    pv.add_argument("--out")
    pv.set_defaults(func=cmd_verify)

    pe = sub.add_parser("equilibrium", help="equilibrium-measure diagnostics")
    pe.add_argument("--x", type=float, required=True)
    pe.add_argument("--out")
    pe.set_defaults(func=cmd_equilibrium)
    return p


def _merge_dash_value(argv: list[str], flag: str) -> list[str]:
    """Fold `--grid -3:2:0.5` into `--grid=-3:2:0.5`; argparse would read the
    leading dash of the value as a new flag."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        if argv[i] == flag and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{flag}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_merge_dash_value(list(argv), "--grid"))
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
