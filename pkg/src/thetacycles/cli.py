"""Command line entry point: thetacycles {lattice-info, cycles, lift, check, boundary}.

Every command reads one JSON config; rationals are written as "num/den" strings.
Exit codes: 0 on success or PASS, 2 on FAIL, 1 on error.
"""
from __future__ import annotations

import hashlib
import json
import sys
import warnings
from dataclasses import dataclass, field, asdict
from fractions import Fraction

import click

from . import __version__
from .quadspace import QuadSpace, mat, vec, signature, find_isotropic
from .lattice import LatticeData
from .binarymodel import GroupSpec, cusp_classes
from .cycles import composite_cycle, singular_cycle
from . import lift as _lift
from . import modcheck as _mod
from . import kernel as _kernel


@dataclass
class Tolerances:
    quad_tol: float = 1e-8
    mod_tol: float = 1e-6


@dataclass
class JobConfig:
    gram: tuple
    h: tuple
    group: dict = field(default_factory=lambda: {"kind": "full"})
    cycle_spec: tuple | None = None
    prec: Fraction = Fraction(10)
    tolerances: Tolerances = field(default_factory=Tolerances)
    cache_dir: str | None = None

    @classmethod
    def from_dict(cls, doc):
        h = doc.get("h", [])
        if h and not isinstance(h[0], (list, tuple)):
            h = [h]
        gram = mat(doc["gram"])
        if not h:
            h = [[0] * len(gram)]
        tol = Tolerances(**doc.get("tolerances", {}))
        u = doc.get("cycle_spec")
        return cls(gram, tuple(vec(x) for x in h), dict(doc.get("group", {"kind": "full"})),
                   vec(u) if u is not None else None, Fraction(doc.get("prec", 10)), tol,
                   doc.get("cache_dir"))

    def to_dict(self):
        s = lambda xs: [str(x) for x in xs]
        return {"gram": [s(r) for r in self.gram], "h": [s(x) for x in self.h],
                "group": self.group, "cycle_spec": s(self.cycle_spec) if self.cycle_spec else None,
                "prec": str(self.prec), "tolerances": asdict(self.tolerances),
                "cache_dir": self.cache_dir}

    def hash(self):
        body = self.to_dict()
        body.pop("cache_dir")  # where the cache lives does not change results
        return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()[:16]

    def lattice(self):
        return LatticeData(QuadSpace(self.gram))

    def group_spec(self):
        kind = self.group.get("kind", "full")
        return GroupSpec(kind, int(self.group.get("N", 1)))


def load_config(path):
    with open(path) as f:
        return JobConfig.from_dict(json.load(f))


def _emit(payload, cfg, json_out):
    payload = dict(payload)
    payload["config_hash"] = cfg.hash()
    payload["version"] = __version__
    text = json.dumps(payload, sort_keys=True, indent=2)
    if json_out:
        with open(json_out, "w") as f:
            f.write(text + "\n")
    click.echo(text)


def _frac(ctx, param, value):
    if value is None:
        return None
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"not a rational number: {value}")


def _run(fn):
    """Map exceptions to exit code 1 with a structured error on stderr."""
    try:
        return fn()
    except (ValueError, RuntimeError, KeyError, OSError) as e:
        click.echo(json.dumps({"error": str(e), "type": type(e).__name__}), err=True)
        sys.exit(1)


common = [
    click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False)),
    click.option("--cache-dir", envvar="THETACYCLES_CACHE", default=None),
    click.option("--json-out", default=None, type=click.Path(dir_okay=False)),
]


def with_common(f):
    for opt in reversed(common):
        f = opt(f)
    return f


@click.group()
@click.version_option(__version__)
def main():
    """Special cycles, theta lifts and their checks for lattices of signature (2,1)."""
    warnings.simplefilter("ignore")


@main.command("lattice-info")
@with_common
def lattice_info(config_path, cache_dir, json_out):
    def go():
        cfg = load_config(config_path)
        L = cfg.lattice()
        p, q = signature(L.gram)
        isotropic = find_isotropic(L.space, 30) is not None
        ncusps = len(cusp_classes(L, cfg.group_spec())) if isotropic else 0
        _emit({"signature": [p, q], "level": L.level, "disc_group_order": str(L.disc_group_order),
               "cusps": ncusps}, cfg, json_out)
    _run(go)


@main.command("cycles")
@with_common
@click.option("--beta", required=True, callback=_frac)
def cycles(config_path, cache_dir, json_out, beta):
    def go():
        cfg = load_config(config_path)
        L, grp, h = cfg.lattice(), cfg.group_spec(), cfg.h[0]
        cyc = singular_cycle(L, h, beta, grp) if beta == 0 else composite_cycle(L, h, beta, grp)
        doc = cyc.to_json()
        doc["total_weight"] = str(cyc.total_weight())
        _emit(doc, cfg, json_out)
    _run(go)


def _spec(cfg):
    if cfg.cycle_spec is None:
        raise ValueError("config has no cycle_spec")
    return _lift.cycle_spec(cfg.lattice(), cfg.h[0], cfg.cycle_spec, cfg.group_spec())


@main.command("lift")
@with_common
@click.option("--prec", default=None, callback=_frac)
def lift(config_path, cache_dir, json_out, prec):
    def go():
        cfg = load_config(config_path)
        P = prec if prec is not None else cfg.prec
        spec = _spec(cfg)
        a = _lift.lift_over_cycle(spec, P)
        b = _lift.product_factorization(spec, P)
        diff = _mod.compare_series(a, b)
        _emit({"lift": a.to_json(), "product": b.to_json(),
               "first_difference": None if diff is None else str(diff), "prec": str(P)},
              cfg, json_out)
    _run(go)


@main.command("check")
@with_common
@click.option("--tol", default=None, type=float)
def check(config_path, cache_dir, json_out, tol):
    def go():
        cfg = load_config(config_path)
        L = cfg.lattice()
        spec = _spec(cfg)
        N = cfg.group_spec().N
        level = 4 * N * N * L.level
        P = max(cfg.prec, Fraction(_mod.required_precision(level)))
        series = _lift.product_factorization(spec, P)
        support = _mod.check_support(series)
        rep = _mod.check_transformation(series, Fraction(3, 2), level,
                                        tol=tol or cfg.tolerances.mod_tol, lattice_level=L.level)
        doc = rep.to_json()
        doc["support"] = {"passed": support.passed,
                          "negative_exponents": [str(e) for e in support.negative_exponents]}
        ok = rep.passed and support.passed
        doc["verdict"] = "PASS" if ok else "FAIL"
        _emit(doc, cfg, json_out)
        return ok
    if not _run(go):
        sys.exit(2)


@main.command("boundary")
@with_common
@click.option("--cusp-index", default=0, type=int)
@click.option("--prec", default=None, callback=_frac)
@click.option("--b", "b_coord", default="1/3", callback=_frac)
def boundary(config_path, cache_dir, json_out, cusp_index, prec, b_coord):
    def go():
        cfg = load_config(config_path)
        L, h = cfg.lattice(), cfg.h[0]
        cusps = cusp_classes(L, cfg.group_spec())
        if not 0 <= cusp_index < len(cusps):
            raise ValueError(f"cusp index out of range (there are {len(cusps)})")
        c = cusps[cusp_index]
        P = prec if prec is not None else cfg.prec
        series = _lift.boundary_theta(L, h, c, P, strict=False)
        rows = _kernel.boundary_limit_check(L, h, c, 1.0, (2, 4, 8, 16), b=b_coord)
        table = [{"t": t, "residual": str(r)} for t, r in rows]
        mono = all(rows[i + 1][1] <= rows[i][1] for i in range(len(rows) - 1))
        _emit({"cusp": [str(x) for x in c.u], "boundary_theta": series.to_json(),
               "residuals": table, "monotone": mono}, cfg, json_out)
    _run(go)


if __name__ == "__main__":
    main()
