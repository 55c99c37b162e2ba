"""Named verification suites and their default parameter sweeps."""
from __future__ import annotations

import inspect
from dataclasses import dataclass, field
from typing import Callable

from . import checks
from .cellular import BLOWUP_EXAMPLES
from .errors import UsageError
from .report import ReportItem

# user-facing parameter names that differ from the keyword of the check
ALIASES = {"D": "dim_bound", "example": "example_id"}


@dataclass(frozen=True)
class Suite:
    name: str
    check: Callable[..., ReportItem]
    defaults: tuple[dict, ...] = field(default=({},))
    summary: str = ""

    def params(self) -> list[str]:
        inv = {v: k for k, v in ALIASES.items()}
        return [inv.get(p, p) for p in inspect.signature(self.check).parameters]

    def run_one(self, params: dict) -> ReportItem:
        known = set(self.params())
        unknown = sorted(set(params) - known)
        if unknown:
            raise UsageError(f"suite {self.name} has no parameter(s) {unknown}; expected some of {sorted(known)}")
        kwargs = {ALIASES.get(k, k): v for k, v in params.items()}
        try:
            inspect.signature(self.check).bind(**kwargs)
        except TypeError as exc:
            raise UsageError(f"suite {self.name}: {exc}") from None
        return self.check(**kwargs)

    def run(self, params: dict | None = None) -> list[ReportItem]:
        """One case when params are given, otherwise the default sweep."""
        if params:
            return [self.run_one(params)]
        return [self.run_one(case) for case in self.defaults]


def _grid(**axes) -> tuple[dict, ...]:
    keys = list(axes)
    cases = [{}]
    for k in keys:
        cases = [{**c, k: v} for c in cases for v in axes[k]]
    return tuple(cases)


SUITES: dict[str, Suite] = {
    s.name: s
    for s in [
        Suite("projector_orthogonality", checks.projector_orthogonality_check,
              _grid(r=range(1, 6), m=range(0, 4)),
              "pi_{i*} pi_j^* = delta_ij and sum_i pi_i^* pi_{i*} = Id"),
        Suite("cotangent_chern", checks.cotangent_chern_check, _grid(r=range(1, 7)),
              "c_k(Omega(1)) closed form against the Euler sequence"),
        Suite("flip_convolution", checks.flip_convolution_check,
              tuple({"n": n, "m": m} for n in range(5) for m in range(n + 1)),
              "composed flip kernels equal the diagonal"),
        Suite("flip_identity", checks.flip_identity_check,
              tuple({"n": n, "m": m} for n in range(5) for m in range(n + 1)),
              "Phi_* Phi^* = Id on basis classes"),
        Suite("flip_matrix", checks.flip_matrix_check,
              tuple({"n": n, "m": m} for n in range(5) for m in range(min(n, 3) + 1)),
              "shape of the matrix of Phi_* on powers of zeta"),
        Suite("flip_vanishing", checks.flip_vanishing_check,
              ({"n": 1, "m": 0}, {"n": 2, "m": 1}, {"n": 3, "m": 2, "D": 8}),
              "Phi_* gamma = 0 and c_{m+1} gamma = 0 force gamma = 0"),
        Suite("flip_linearity", checks.flip_linearity_check,
              ({"n": 1, "m": 1}, {"n": 2, "m": 1}, {"n": 3, "m": 1}),
              "Phi_* is a map of base-ring modules"),
        Suite("virtual_flip", checks.virtual_flip_check,
              tuple({"r": r, "i": i} for r, i in [(1, 0), (1, 1), (2, 0), (2, 1), (3, 0)]),
              "Psi_* Psi^* = (-1)^r Id"),
        Suite("cayley_gamma", checks.cayley_gamma_check, _grid(r=range(2, 7)),
              "Gamma_* Gamma^* for Cayley's trick, with the sign reported"),
        Suite("gamma_orthogonality", checks.gamma_orthogonality_check,
              ({"r": 1, "m": 1}, {"r": 2, "m": 1, "D": 7}, {"r": 3, "m": 2, "D": 9}),
              "Gamma_* pi_i^* = pi_{i*} Gamma^* = 0 in the local model"),
        Suite("blowup_key_formula", checks.blowup_key_formula_check,
              tuple({"example": e} for e in BLOWUP_EXAMPLES),
              "pi^* i_* = j_*(c_top(V) p^*) on every center basis class"),
        Suite("blowup_point_plane", checks.blowup_point_plane_check, ({},),
              "Bl_pt P^2 ranks, self-intersection and pairing"),
        Suite("projectivization_instance", checks.projectivization_instance_check, ({},),
              "r = 1 decomposition against Bl_pt P^2"),
        Suite("hom_space", checks.hom_space_check,
              tuple({"m": m, "n": n} for m, n in [(1, 2), (2, 3), (2, 4)]),
              "universal Hom spaces"),
        Suite("decomposition_ranks", checks.decomposition_ranks_check,
              tuple({"kind": k} for k in ("proj_bundle", "blowup", "flip")),
              "rank functions of decomposition models"),
        Suite("convolution_associativity", checks.convolution_associativity_check,
              tuple(dict(zip("abcd", rs)) for rs in [(1, 2, 3, 2), (2, 2, 2, 2), (2, 3, 2, 3), (3, 3, 3, 3)]),
              "(g1 * g2) * g3 = g1 * (g2 * g3) on basis kernels"),
        Suite("diagonal_unit", checks.diagonal_unit_check,
              tuple({"rank_a": a, "rank_b": b} for a in range(1, 5) for b in range(1, 5)),
              "the diagonal is a two-sided unit"),
    ]
}


def get_suite(name: str) -> Suite:
    try:
        return SUITES[name]
    except KeyError:
        raise UsageError(f"unknown suite {name!r}; try one of {', '.join(SUITES)}") from None


def run_suite(name: str, params: dict | None = None) -> list[ReportItem]:
    if name == "all":
        if params:
            raise UsageError("'all' takes no parameters")
        return [item for s in SUITES.values() for item in s.run()]
    return get_suite(name).run(params)
