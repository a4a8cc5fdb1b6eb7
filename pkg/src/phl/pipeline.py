"""Glue shared by the CLI and the acceptance runner: target -> cone -> holonomy."""
from __future__ import annotations

from functools import lru_cache

from .catalog import Built, build
from .classify import ClassificationReport, classify
from .cone import (ConeChart, complex_cone, projective_cone, ricci_flat_data, symplectic_cone,
                   zero_data)
from .errors import PreconditionError
from .holonomy import HolonomyResult, infinitesimal_holonomy
from .jets import DEFAULT_ORDER

__all__ = ["KINDS", "make_cone", "holonomy_of", "cached_holonomy"]

KINDS = ("real", "complex", "symplectic")


def make_cone(built: Built, kind: str = "real", auto_data: bool = True) -> ConeChart:
    if kind == "real":
        return projective_cone(built.conn)
    if kind == "complex":
        if built.rho_c is None:
            raise PreconditionError("a complex cone needs a holomorphic chart with a complex "
                                    "rho tensor (e.g. target cquadric:m)")
        return complex_cone(built.conn, built.rho_c)
    if kind == "symplectic":
        if built.nu is None:
            raise PreconditionError("a symplectic cone needs a symplectic form nu "
                                    "(e.g. target symplectic:2n)")
        data = ricci_flat_data(built.conn, built.nu) if auto_data else \
            zero_data(built.conn, built.nu)
        return symplectic_cone(built.conn, data)
    raise PreconditionError(f"unknown cone kind {kind!r}; expected one of {', '.join(KINDS)}")


def holonomy_of(cone: ConeChart, max_depth: int | None = None
                ) -> tuple[HolonomyResult, ClassificationReport]:
    result = infinitesimal_holonomy(cone.cone_conn, max_depth)
    return result, classify(result.algebra)


@lru_cache(maxsize=32)
def cached_holonomy(target: str, kind: str = "real", base: str = "generic",
                    order: int = DEFAULT_ORDER, max_depth: int | None = None):
    """(built, cone, holonomy, classification) for a catalog target; memoized."""
    built = build(target, order, base)
    cone = make_cone(built, kind)
    hol, report = holonomy_of(cone, max_depth)
    return built, cone, hol, report
