"""Command-line interface.

Subcommands: ``exact`` (exact probabilities), ``asym`` (limit formulas),
``sample`` (domino-shuffling sampler), ``render`` (figures from tiling
files), ``verify`` (acceptance suites), ``oracle`` (enumeration
statistics), ``stats`` (Monte Carlo CSV reports, with optional figures).

Every output starts with a version header; identical (command, seed,
version) triples produce byte-identical output.  Exit codes: 0 success,
1 failed verification or internal integrity error, 2 usage error
(argparse), 3 domain error, 4 resource-cap error.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, exactcore
from .errors import AztecError, DomainError, ResourceCapError

HEADER = f"# aztec-tilings {__version__}"

__all__ = ["main", "build_parser"]


def _parse_bias(text):
    if text is None:
        return None
    try:
        p = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse bias {text!r}: {exc}") from exc
    if not 0 < p < 1:
        raise DomainError("bias must lie strictly between 0 and 1")
    return p


def _parse_pair(text, what):
    try:
        a, b = text.split(",")
        return int(a), int(b)
    except ValueError as exc:
        raise DomainError(f"cannot parse {what} {text!r}; expected 'A,B'") from exc


def _emit(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


# ---------------------------------------------------------------------------
# subcommands


def _cmd_exact(args) -> int:
    bias = _parse_bias(args.bias)
    order = args.order
    if args.at is not None:
        ell, m = _parse_pair(args.at, "--at")
        if bias is None:
            value = exactcore.placement_probability(ell, m, order)
        else:
            value = exactcore.biased_placement_probability(ell, m, order, bias)
        _emit(args, f"{HEADER}\n{exactcore.format_rational(value)}\n")
        return 0
    grid = exactcore.placement_grid(order, bias=bias)
    lines = [HEADER, "ell,m,probability"]
    for ell, m in sorted(exactcore.north_locations(order)):
        lines.append(f"{ell},{m},{exactcore.format_rational(grid.value(ell, m))}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def _cmd_asym(args) -> int:
    from . import asymptotics

    x, y = args.x, args.y
    bias = _parse_bias(args.bias)
    pf = None if bias is None else float(bias)
    lines = [HEADER]
    if args.level is not None:
        curve = asymptotics.level_curve(args.level)
        lines.append(f"level,{_fmt(curve.level)}")
        lines.append(f"mix,{_fmt(curve.mix)}")
        lines.append("x,y")
        for px, py in curve.points(args.points):
            lines.append(f"{_fmt(px)},{_fmt(py)}")
    elif args.all_directions:
        if pf is None:
            pn, pe, ps, pw = asymptotics.directional_placements(x, y)
        else:
            pn, pe, ps, pw = asymptotics.biased_directional_placements(x, y, pf)
        lines.append("north,east,south,west")
        lines.append(",".join(_fmt(v) for v in (pn, pe, ps, pw)))
    elif args.height:
        lines.append(_fmt(asymptotics.average_height(x, y)))
    elif args.tilt:
        s, t = asymptotics.height_tilt(x, y)
        lines.append(f"{_fmt(s)},{_fmt(t)}")
    else:
        if pf is None:
            lines.append(_fmt(asymptotics.arctan_placement(x, y)))
        else:
            lines.append(_fmt(asymptotics.biased_arctan_placement(x, y, pf)))
    _emit(args, "\n".join(lines) + "\n")
    return 0


def _sample_one(task):
    from . import shuffle

    n, seed, bias = task
    return seed, shuffle.sample_uniform(n, seed) if bias is None else shuffle.sample_biased(n, bias, seed)


def _cmd_sample(args) -> int:
    from . import shuffle

    bias = _parse_bias(args.bias)
    count = args.count
    if count > 1 and args.out in (None, "-"):
        raise DomainError("--count > 1 needs --out pointing at a directory")
    if args.trace:
        tracedir = Path(args.trace)
        tracedir.mkdir(parents=True, exist_ok=True)

        def trace(order, canon):
            t = shuffle.canon_to_tiling(canon, order)
            (tracedir / f"step_{order:04d}.txt").write_text(t.to_text(version=__version__))

        shuffle.sample_canon(args.order, args.seed, p=bias, trace=trace)
        print(f"wrote {args.order} per-step tilings to {tracedir}", file=sys.stderr)
    tasks = [(args.order, args.seed + i, bias) for i in range(count)]
    if args.threads > 1 and count > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(_sample_one, tasks))
    else:
        results = [_sample_one(t) for t in tasks]
    if count == 1:
        _emit(args, results[0][1].to_text(version=__version__))
        return 0
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for seed, tiling in results:
        path = outdir / f"tiling_n{args.order}_seed{seed}.txt"
        path.write_text(tiling.to_text(version=__version__))
    print(f"wrote {count} tilings to {outdir}")
    return 0


def _cmd_render(args) -> int:
    from . import render
    from .regions import Tiling

    tiling = Tiling.from_text(Path(args.infile).read_text())
    mode = "classes"
    if args.polar:
        mode = "polar"
    elif args.heights:
        mode = "heights"
    elif args.levels:
        mode = "levels"
    bias = _parse_bias(args.bias)
    palette = None
    if args.palette:
        palette = {}
        for part in args.palette.split(","):
            klass, _, color = part.partition("=")
            if klass not in ("N", "S", "E", "W") or not color:
                raise DomainError(f"bad palette entry {part!r}; expected K=#rrggbb")
            palette[klass] = color
    render.render_tiling(
        tiling,
        args.out,
        mode=mode,
        scale=args.scale,
        palette=palette,
        bias=None if bias is None else float(bias),
    )
    print(f"wrote {args.out}")
    return 0


def _cmd_verify(args) -> int:
    from . import acceptance

    results = acceptance.run_suite(args.suite)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


def _load_region(path: str):
    from .regions import Region, Tiling

    text = Path(path).read_text()
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if lines and lines[0].startswith("squares"):
        head = lines[0].split()
        count = int(head[1])
        parity = int(head[3]) if len(head) >= 4 and head[2] == "parity" else 0
        squares = frozenset(tuple(map(int, ln.split())) for ln in lines[1:])
        if len(squares) != count:
            raise DomainError("square count mismatch in region file")
        return Region(squares, white_parity=parity)
    return Tiling.from_text(text).region


def _cmd_oracle(args) -> int:
    from . import oracle

    region = _load_region(args.region)
    bias = _parse_bias(args.bias)
    stats_ = oracle.exact_statistics(region, bias=bias, cap=args.cap)
    count = oracle.count_tilings(region)
    body = stats_.to_csv()
    _emit(args, f"{HEADER}\n# tilings,{count}\n{body}")
    return 0


def _arctic_one(task):
    from . import shuffle, stats

    order, seed, bias = task
    canon = shuffle.sample_canon(order, seed, p=bias)
    rep = stats.arctic_report(canon, order, bias=None if bias is None else float(bias))
    return seed, rep.max_deviation, rep.degenerate


def _cmd_stats(args) -> int:
    from . import shuffle, stats

    bias = _parse_bias(args.bias)
    lines = [HEADER]
    fig_data = None
    if args.arctic:
        lines.append("sample_id,max_deviation,degenerate")
        tasks = [(args.order, args.seed + i, bias) for i in range(args.samples)]
        if args.threads > 1 and args.samples >= 2 * args.threads:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(max_workers=args.threads) as pool:
                rows = list(pool.map(_arctic_one, tasks))
        else:
            rows = [_arctic_one(t) for t in tasks]
        devs = []
        for (seed, dev, degenerate) in rows:
            devs.append(dev)
            lines.append(f"{seed},{_fmt(dev)},{int(degenerate)}")
        med = sorted(devs)[len(devs) // 2]
        lines.append(f"# median,{_fmt(med)}")
        fig_data = ("arctic", devs)
    elif args.variance is not None:
        vertex = _parse_pair(args.variance, "--variance")
        rep = stats.height_concentration(args.order, vertex, args.samples, args.seed, bias=bias)
        lines.append("vertex_x,vertex_y,m,samples,mean,variance,bound")
        lines.append(
            f"{vertex[0]},{vertex[1]},{rep.m},{rep.samples},{_fmt(rep.sample_mean)},"
            f"{_fmt(rep.sample_variance)},{_fmt(rep.bound)}"
        )
        lines.append("c,tail_frequency,tail_bound")
        for c in sorted(rep.tail_freqs):
            lines.append(f"{_fmt(c)},{_fmt(rep.tail_freqs[c])},{_fmt(rep.tail_bounds[c])}")
    elif args.convergence:
        orders = [int(t) for t in args.orders.split(",")] if args.orders else [args.order // 2, args.order]
        rows = stats.convergence_report(orders, bias=bias)
        lines.append(stats.convergence_csv(rows).rstrip("\n"))
        fig_data = ("convergence", rows)
    else:
        grid = stats.empirical_placement(
            args.order, args.samples, args.seed, bias=bias, threads=args.threads
        )
        exact = exactcore.placement_grid(args.order, bias=bias)
        lines.append(grid.to_csv(exact).rstrip("\n"))
        fig_data = ("placement", (grid, exact))
    _emit(args, "\n".join(lines) + "\n")
    if args.figure:
        _stats_figure(args, fig_data)
        print(f"wrote {args.figure}", file=sys.stderr)
    return 0


def _stats_figure(args, fig_data) -> None:
    if fig_data is None:
        return
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    kind, payload = fig_data
    matplotlib.rcParams["svg.hashsalt"] = "aztec-tilings"
    fig, ax = plt.subplots(figsize=(6, 4.5))
    if kind == "arctic":
        ax.hist(payload, bins=24, color="#4878cf", edgecolor="white")
        ax.set_xlabel("max frontier deviation (normalized)")
        ax.set_ylabel("samples")
    elif kind == "convergence":
        ns = [r.n for r in payload]
        ax.loglog(ns, [r.supnorm for r in payload], "o-", label="sup-norm")
        ax.loglog(ns, [r.central_dev for r in payload], "s--", label="central deviation")
        ax.set_xlabel("diamond order")
        ax.legend()
    elif kind == "placement":
        grid, exact = payload
        n = grid.n
        f = grid.counts / grid.samples
        img = np.where(np.isfinite(f), f, 0.0)
        im = ax.imshow(img, origin="lower", extent=(-n + 1, n - 1, -n + 1, n - 1), cmap="viridis")
        fig.colorbar(im, ax=ax, label="empirical frequency")
        ax.set_xlabel("ell")
        ax.set_ylabel("m")
    fig.savefig(args.figure, metadata={"Date": None} if str(args.figure).endswith(".svg") else None)
    plt.close(fig)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aztec",
        description="Exact, asymptotic and sampled local statistics of random "
        "domino tilings of Aztec diamonds.",
    )
    parser.add_argument("--version", action="version", version=f"aztec-tilings {__version__}")
    default_threads = int(os.environ.get("AZTEC_THREADS", "1"))
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="exact placement probabilities")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--bias", default=None)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--at", help="single location 'L,M'")
    g.add_argument("--grid", action="store_true", help="full grid as CSV (default)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("asym", help="limiting formulas at a normalized point")
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--y", type=float, default=0.0)
    p.add_argument("--bias", default=None)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--all-directions", action="store_true")
    g.add_argument("--height", action="store_true")
    g.add_argument("--tilt", action="store_true")
    g.add_argument("--level", type=float, default=None, help="emit the level-curve ellipse for this probability")
    p.add_argument("--points", type=int, default=128, help="points sampled on a level curve")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_asym)

    p = sub.add_parser("sample", help="sample random tilings by domino shuffling")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--bias", default=None)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--threads", type=int, default=default_threads)
    p.add_argument("--trace", default=None, help="directory for per-step tilings of the first sample")
    p.add_argument("--out", default=None, help="output file (or directory when --count > 1)")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("render", help="draw a tiling file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--polar", action="store_true", help="shade polar regions, overlay the arctic curve")
    g.add_argument("--heights", action="store_true", help="annotate vertex heights (small orders)")
    g.add_argument("--levels", action="store_true", help="overlay level-curve ellipses")
    p.add_argument("--scale", type=float, default=12.0, help="pixels per lattice unit")
    p.add_argument("--palette", default=None, help="class colors, e.g. 'N=#4878cf,S=#d65f5f'")
    p.add_argument("--bias", default=None)
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("verify", help="run the acceptance suites")
    p.add_argument("--suite", default="all", choices=["exact", "asym", "sampler", "heights", "all"])
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("oracle", help="brute-force statistics of a region file")
    p.add_argument("--region", required=True)
    p.add_argument("--bias", default=None)
    p.add_argument("--cap", type=int, default=40, help="square-count cap for enumeration")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("stats", help="Monte Carlo reports as CSV")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bias", default=None)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--arctic", action="store_true")
    g.add_argument("--variance", default=None, help="vertex 'VX,VY'")
    g.add_argument("--convergence", action="store_true")
    p.add_argument("--orders", default=None, help="comma-separated orders for --convergence")
    p.add_argument("--threads", type=int, default=default_threads)
    p.add_argument("--figure", default=None, help="also render a matplotlib figure to this path")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_stats)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except AztecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
