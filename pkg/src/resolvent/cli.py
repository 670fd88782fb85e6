"""Command-line interface.

Every subcommand prints one JSON document on standard output. Exit status is
0 on success, 1 for usage, I/O or parse errors and 2 when the input is valid
but outside an operation's domain.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings

import numpy as np

from .errors import DomainError
from .forms import (
    DegenerateSubspaceWarning,
    build_phi,
    parameter_lower_bound,
    phi_vanishes_on,
    restrict_phi,
)
from .monodromy import (
    DEFAULT_OPTIONS,
    Loop,
    ParamFamily,
    general_family,
    inertia_group,
    monodromy_group,
    petal_loops,
    start_roots,
    track_loop,
)
from .perm import DEFAULT_MAX_ORDER, PermGroup, SetPartition, chebotarev_bound, is_transitive, max_chain, symmetric_group
from .poly import RATIONAL, Polynomial, discriminant, find_roots, format_scalar, parse_complex
from .transform import bring_jerrard, klein_family, one_param_normalize, tschirnhaus

HILBERT_ROW = (1, 2, 3, 4, 4)
TABLE_DEGREES = (5, 6, 7, 8, 9)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _load_poly(path):
    obj = _load(path)
    if isinstance(obj, list):
        exact = all(isinstance(c, (str, int)) for c in obj)
        obj = {"kind": RATIONAL if exact else "complex", "coeffs": obj}
    return Polynomial.from_json(obj)


def _load_point(path):
    obj = _load(path)
    if isinstance(obj, dict):
        obj = obj.get("point", obj.get("basepoint"))
    return np.array([parse_complex(v) for v in obj])


def _load_roots(path):
    obj = _load(path)
    if isinstance(obj, dict):
        roots = [parse_complex(v) for v in obj["roots"]]
        mult = obj.get("multiplicities", [1] * len(roots))
        return [r for r, k in zip(roots, mult) for _ in range(int(k))]
    return [parse_complex(v) for v in obj]


def _cj(z):
    z = complex(z)
    return [z.real, z.imag]


def _group_json(g):
    out = g.to_json()
    out["transitive"] = is_transitive(g)
    return out


def emit_plot_data(trace, path, n=None, m=None):
    """Write a tracking trace as CSV: step, parameter point, root positions.

    ``trace`` is the list filled by ``track_loop(..., trace=...)``. An empty
    trace gives a file with the header only.
    """
    if trace:
        m = len(trace[0][0])
        n = len(trace[0][1])
    header = ["step"]
    for k in range(m or 0):
        header += [f"a{k + 1}_re", f"a{k + 1}_im"]
    for i in range(n or 0):
        header += [f"x{i + 1}_re", f"x{i + 1}_im"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for step, (point, roots) in enumerate(trace):
            row = [step]
            for v in list(point) + list(roots):
                row += [repr(complex(v).real), repr(complex(v).imag)]
            w.writerow(row)


# subcommands ----------------------------------------------------------------

def cmd_disc(a):
    return {"discriminant": format_scalar(discriminant(_load_poly(a.infile)))}


def cmd_roots(a):
    return find_roots(_load_poly(a.infile), tol=a.tol).to_json()


def cmd_tschirnhaus(a):
    f = _load_poly(a.infile)
    phi = _load_poly(a.phi)
    return {"polynomial": tschirnhaus(f, phi, reduce=a.reduce).to_json()}


def cmd_bring_jerrard(a):
    return bring_jerrard(_load_poly(a.infile), tol=a.tol).to_json()


def cmd_normalize(a):
    return one_param_normalize(parse_complex(a.p), parse_complex(a.q)).to_json()


def cmd_klein(a):
    return {"gamma": _cj(parse_complex(a.gamma)), "polynomial": klein_family(parse_complex(a.gamma)).to_json()}


def cmd_chain_bound(a):
    length, chain = max_chain(a.n, even_only=a.even_only)
    return {"n": a.n, "bound": length, "witness": [str(p) for p in chain], "even_only": a.even_only}


def cmd_monodromy(a):
    fam = ParamFamily.from_json(_load(a.family))
    g = monodromy_group(fam, DEFAULT_OPTIONS, a.seed, a.max_order, lines=a.lines)
    if a.trace:
        base = np.array([complex(*v) for v in g.meta["basepoint"]])
        loops = petal_loops(fam, base, a.seed)
        trace = []
        if loops:
            track_loop(fam, loops[0], DEFAULT_OPTIONS, trace)
        emit_plot_data(trace, a.trace, fam.n, fam.m)
    return _group_json(g)


def cmd_inertia(a):
    fam = ParamFamily.from_json(_load(a.family))
    pt = _load_point(a.point)
    base = _load_point(a.basepoint) if a.basepoint else None
    return _group_json(inertia_group(fam, pt, a.radius, DEFAULT_OPTIONS, a.seed, basepoint=base, max_order=a.max_order))


def cmd_phi(a):
    grp = PermGroup.from_json(_load(a.group), max_order=a.max_order)
    roots = _load_roots(a.roots)
    phi = build_phi(grp, roots)
    out = phi.to_json()
    if a.partition:
        part = SetPartition.parse(a.partition)
        if a.check_vanish:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", DegenerateSubspaceWarning)
                out["vanishes"] = phi_vanishes_on(phi, part, samples=a.samples, tol=a.tol, seed=a.seed)
            if caught:
                out["warning"] = str(caught[0].message)
            out["restricted_vanishes"] = restrict_phi(phi, part, tol=a.tol, samples=a.samples, seed=a.seed).all_coefficients_vanish
        out["partition"] = str(part)
    return out


def cmd_bound(a):
    fam = ParamFamily.from_json(_load(a.family))
    if a.group:
        grp = PermGroup.from_json(_load(a.group), max_order=a.max_order)
    else:
        grp = monodromy_group(fam, DEFAULT_OPTIONS, a.seed, a.max_order)
    out = parameter_lower_bound(fam, grp, even_only=a.even_only).to_json()
    out["group_order"] = grp.order
    return out


def cmd_table(a):
    chains = [max_chain(n, even_only=True)[0] for n in TABLE_DEGREES]
    formula = [chebotarev_bound(n) for n in TABLE_DEGREES]
    pipeline = [parameter_lower_bound(general_family(n), symmetric_group(n)).q1 for n in TABLE_DEGREES]
    return {
        "n": list(TABLE_DEGREES),
        "rows": [
            {
                "label": "formula",
                "values": chains,
                "source": "max_chain(n, even_only=True)",
                "floor_half_n_minus_1": formula,
                "parameter_lower_bound": pipeline,
                "consistent": chains == formula == pipeline,
            },
            {"label": "Hilbert", "values": list(HILBERT_ROW), "source": "Hilbert (per paper table)"},
        ],
    }


def _parity_flags(p):
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--even-only", dest="even_only", action="store_true", default=True,
                     help="only even permutations in the chain (default)")
    grp.add_argument("--any-parity", dest="even_only", action="store_false",
                     help="allow odd permutations in the chain")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    common.add_argument("--out", help="write JSON here instead of standard output")

    parser = _Parser(prog="resolvent", description="Resolvent-problem computations.")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    p = add("disc", cmd_disc, "exact or numeric discriminant")
    p.add_argument("--in", dest="infile", required=True)
    p = add("roots", cmd_roots, "roots with multiplicities")
    p.add_argument("--in", dest="infile", required=True)
    p = add("tschirnhaus", cmd_tschirnhaus, "transformed polynomial under y = phi(x)")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--phi", required=True)
    p.add_argument("--reduce", action="store_true", help="reduce phi modulo f first")
    p = add("bring-jerrard", cmd_bring_jerrard, "reduce a quintic to y^5 + p y + q")
    p.add_argument("--in", dest="infile", required=True)
    p = add("normalize", cmd_normalize, "one-parameter form z^5 + c z + 1")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p = add("klein", cmd_klein, "Klein one-parameter quintic")
    p.add_argument("--gamma", required=True)
    p = add("chain-bound", cmd_chain_bound, "longest height chain in degree n")
    p.add_argument("--n", type=int, required=True)
    _parity_flags(p)
    p = add("monodromy", cmd_monodromy, "monodromy group of a family")
    p.add_argument("--family", required=True)
    p.add_argument("--lines", type=int, default=1)
    p.add_argument("--trace", help="CSV file for the root paths of the first petal")
    p = add("inertia", cmd_inertia, "inertia group at a critical point")
    p.add_argument("--family", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--radius", type=float, default=1e-3)
    p.add_argument("--basepoint")
    p = add("phi", cmd_phi, "invariant form and its vanishing test")
    p.add_argument("--group", required=True)
    p.add_argument("--roots", required=True)
    p.add_argument("--partition")
    p.add_argument("--check-vanish", action="store_true")
    p.add_argument("--samples", type=int, default=20)
    p.set_defaults(tol=1e-8)
    p = add("bound", cmd_bound, "parameter lower bound for a family")
    p.add_argument("--family", required=True)
    p.add_argument("--group")
    _parity_flags(p)
    add("table", cmd_table, "chain bound against the Hilbert row for n = 5..9")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.tol <= 0:
            raise UsageError("--tol must be positive")
        result = args.func(args)
    except DomainError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError, TypeError, UsageError) as exc:
        print(json.dumps({"error": f"{type(exc).__name__}: {exc}"}), file=sys.stderr)
        return 1
    text = json.dumps(result)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
