"""Command-line front end.

Subcommands:
  build    write the masses/centers data as JSON
  verify   run the verification checks, one JSON report per line
  sample   evaluate u and the metric scale on a grid (CSV or JSON)
  mass     report the masses and the total mass

Exit codes: 0 success, 1 verification failure, 2 input/validation error (the
error name goes to stderr). Identical configuration and seed produce
byte-identical output. MPQ_THREADS caps internal parallelism.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from ._format import fmt, fmt_bool, fmt_vector
from .errors import BadParameters, MPQuotError
from .groups import IsometryGroup, group_from_spec, named_group
from .mp import build_mp, mpdata_to_json, total_mass, u_values
from .verify import (
    DEFAULT_RADII,
    check_deck_algebra,
    check_deck_isometry,
    check_harmonic,
    check_harmonic_fd,
    check_mass_limit,
    check_pullback,
    exclusion_radius,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_INPUT = 2

# --check accepts coarse names (left) or the individual report names.
CHECK_ALIASES = {
    "pullback": ("pullback",),
    "harmonic": ("harmonic_analytic", "harmonic_fd_order"),
    "deck": ("deck_isometry", "deck_algebra"),
    "mass": ("mass_limit",),
}
ALL_REPORTS = (
    "pullback",
    "harmonic_analytic",
    "harmonic_fd_order",
    "deck_isometry",
    "deck_algebra",
    "mass_limit",
)


def _parse_params(text):
    if not text:
        return []
    try:
        return [int(v) for v in str(text).split(",") if v != ""]
    except ValueError as exc:
        raise BadParameters(f"--params must be comma-separated integers: {text!r}") from exc


def _resolve_group(args) -> IsometryGroup:
    name = args.group
    if name in ("trivial", "antipodal"):
        return named_group(name, dim=args.dim if args.dim is not None else 3)
    if name == "lens":
        params = _parse_params(args.params)
        if not params:
            raise BadParameters("lens needs --params k,l1[,l2,...]")
        return named_group("lens", dim=args.dim, params=params)
    if name.lstrip().startswith("{"):
        try:
            spec = json.loads(name)
        except json.JSONDecodeError as exc:
            raise BadParameters(f"inline group JSON does not parse: {exc}") from exc
        return group_from_spec(spec)
    if os.path.exists(name):
        try:
            with open(name, encoding="utf-8") as handle:
                spec = json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise BadParameters(f"cannot read group spec {name!r}: {exc}") from exc
        return group_from_spec(spec)
    raise BadParameters(
        f"unknown group {name!r}: expected a family name, inline JSON, or a path"
    )


def _resolve_base(args, group: IsometryGroup) -> np.ndarray:
    d = group.ambient_dim
    if args.base in (None, "default"):
        base = np.zeros(d)
        base[0] = 1.0
        return base
    try:
        values = [float(v) for v in str(args.base).split(",")]
    except ValueError as exc:
        raise BadParameters(f"--base must be comma-separated reals: {args.base!r}") from exc
    if len(values) != d:
        raise BadParameters(f"base point needs {d} coordinates, got {len(values)}")
    base = np.array(values, dtype=np.float64)
    norm = float(np.linalg.norm(base))
    deviation = abs(norm - 1.0)
    if deviation > 1e-6:
        raise BadParameters(f"base point is not unit: |b| = {norm!r}")
    if deviation > 1e-9:
        print(f"warning: normalizing base point (|b| = {norm!r})", file=sys.stderr)
    return base / norm


def _write(args, text: str) -> None:
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)


def cmd_build(args) -> int:
    group = _resolve_group(args)
    base = _resolve_base(args, group)
    mp = build_mp(group, base)
    _write(args, mpdata_to_json(mp) + "\n")
    return EXIT_OK


def _selected_reports(args):
    if not args.check:
        return ALL_REPORTS
    wanted = []
    for token in str(args.check).split(","):
        token = token.strip()
        if token in CHECK_ALIASES:
            wanted.extend(CHECK_ALIASES[token])
        elif token in ALL_REPORTS:
            wanted.append(token)
        else:
            raise BadParameters(f"unknown check {token!r}")
    return tuple(dict.fromkeys(wanted))


def cmd_verify(args) -> int:
    group = _resolve_group(args)
    base = _resolve_base(args, group)
    mp = build_mp(group, base)
    selected = _selected_reports(args)
    runners = {
        "pullback": lambda: check_pullback(mp, args.samples, args.seed),
        "harmonic_analytic": lambda: check_harmonic(mp, args.samples, args.seed),
        "harmonic_fd_order": lambda: check_harmonic_fd(mp, args.samples, args.seed),
        "deck_isometry": lambda: check_deck_isometry(mp, args.samples, args.seed),
        "deck_algebra": lambda: check_deck_algebra(mp, args.samples, args.seed),
        "mass_limit": lambda: check_mass_limit(group, base, DEFAULT_RADII),
    }
    reports = [runners[name]() for name in selected]
    _write(args, "".join(r.to_json() + "\n" for r in reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


def cmd_sample(args) -> int:
    group = _resolve_group(args)
    base = _resolve_base(args, group)
    mp = build_mp(group, base)
    if args.grid_steps < 1:
        raise BadParameters("--grid-steps must be >= 1")
    if args.grid_min > args.grid_max:
        raise BadParameters("--grid-min must not exceed --grid-max")
    if args.grid_steps ** mp.n > 1_000_000:
        raise BadParameters(
            f"grid of {args.grid_steps}^{mp.n} points is too large (cap 1e6)"
        )
    axis = np.linspace(args.grid_min, args.grid_max, args.grid_steps)
    mesh = np.meshgrid(*([axis] * mp.n), indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=1)
    u, nearest = u_values(mp, points)
    excluded = nearest <= exclusion_radius(mp)
    scale = np.where(excluded, np.nan, u) ** (4.0 / (mp.n - 2))

    if args.format == "csv":
        header = ",".join([f"x{i + 1}" for i in range(mp.n)] + ["u", "g_scale", "excluded"])
        lines = [header]
        for row, uv, gv, ex in zip(points, u, scale, excluded):
            coords = ",".join(fmt(c) for c in row)
            if ex:
                lines.append(f"{coords},,,1")
            else:
                lines.append(f"{coords},{fmt(uv)},{fmt(gv)},0")
        _write(args, "\n".join(lines) + "\n")
    else:
        rows = []
        for row, uv, gv, ex in zip(points, u, scale, excluded):
            uval = "null" if ex else fmt(uv)
            gval = "null" if ex else fmt(gv)
            rows.append(
                "{"
                + f'"x": {fmt_vector(row)}, "u": {uval}, "g_scale": {gval}, '
                + f'"excluded": {fmt_bool(bool(ex))}'
                + "}"
            )
        text = (
            "{"
            + f'"n": {mp.n}, "grid_min": {fmt(args.grid_min)}, '
            + f'"grid_max": {fmt(args.grid_max)}, "grid_steps": {args.grid_steps}, '
            + '"rows": [' + ", ".join(rows) + "]"
            + "}\n"
        )
        _write(args, text)
    return EXIT_OK


def cmd_mass(args) -> int:
    group = _resolve_group(args)
    base = _resolve_base(args, group)
    mp = build_mp(group, base)
    if args.format == "csv":
        lines = ["index,mass"]
        lines += [f"{i + 1},{fmt(m)}" for i, m in enumerate(mp.masses)]
        lines.append(f"total,{fmt(total_mass(mp))}")
        _write(args, "\n".join(lines) + "\n")
    else:
        masses = ", ".join(fmt(m) for m in mp.masses)
        _write(
            args,
            "{"
            + f'"n": {mp.n}, "group_order": {mp.group.order}, '
            + f'"masses": [{masses}], "total_mass": {fmt(total_mass(mp))}'
            + "}\n",
        )
    return EXIT_OK


def _add_common(sub):
    sub.add_argument("--group", required=True,
                     help="family name (trivial|antipodal|lens), inline JSON, or a JSON path")
    sub.add_argument("--dim", type=int, default=None,
                     help="sphere dimension n (default 3; lens infers it from --params)")
    sub.add_argument("--params", default=None, help="lens parameters k,l1[,l2,...]")
    sub.add_argument("--base", default=None,
                     help="base point coordinates or 'default' (first basis vector)")
    sub.add_argument("--seed", type=int, default=42)
    sub.add_argument("--samples", type=int, default=1000)
    sub.add_argument("--out", default="-", help="output path ('-' for stdout)")
    sub.add_argument("--format", choices=("json", "csv"), default="json")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpquot",
        description="Multi-center conformally flat metrics from finite sphere isometry groups.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_build = subs.add_parser("build", help="write masses and centers as JSON")
    _add_common(p_build)
    p_build.set_defaults(func=cmd_build)

    p_verify = subs.add_parser("verify", help="run verification checks (JSON lines)")
    _add_common(p_verify)
    p_verify.add_argument("--check", default=None,
                          help="comma-separated subset: pullback,harmonic,deck,mass")
    p_verify.set_defaults(func=cmd_verify)

    p_sample = subs.add_parser("sample", help="evaluate u on a grid")
    _add_common(p_sample)
    p_sample.add_argument("--grid-min", type=float, default=-1.0)
    p_sample.add_argument("--grid-max", type=float, default=1.0)
    p_sample.add_argument("--grid-steps", type=int, default=11)
    p_sample.set_defaults(func=cmd_sample)

    p_mass = subs.add_parser("mass", help="report masses and total mass")
    _add_common(p_mass)
    p_mass.set_defaults(func=cmd_mass)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MPQuotError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
