"""Machine-readable analysis reports."""

from __future__ import annotations

import json
import math

from .decomposition import finest_independent_decomposition, verify_independence, verify_t_hat_independence
from .linalg import rank
from .model import KineticSystem, deficiency, is_plrdk, linkage_classes, stoichiometric_matrix
from .steady_state import BlockSolution, Verdict, relative_residual

_SOLUTION = {
    "type": "object",
    "required": ["scope", "block", "found", "residual", "x"],
    "properties": {
        "scope": {"enum": ["block", "whole"]},
        "block": {"type": ["integer", "null"]},
        "found": {"type": "boolean"},
        "residual": {"type": ["number", "null"]},
        "x": {"type": ["array", "null"], "items": {"type": "number", "exclusiveMinimum": 0}},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "plcrn analysis report",
    "type": "object",
    "required": ["network", "plrdk", "decomposition", "t_hat", "verdict", "steady_states"],
    "properties": {
        "network": {
            "type": "object",
            "required": ["m", "n", "r", "ell", "rank_N", "deficiency"],
            "properties": {
                "species": {"type": "array", "items": {"type": "string"}},
                **{key: {"type": "integer", "minimum": 0}
                   for key in ("m", "n", "r", "ell", "rank_N", "deficiency")},
            },
        },
        "plrdk": {"type": "boolean"},
        "decomposition": {
            "type": "object",
            "required": ["num_blocks", "blocks", "independent"],
            "properties": {
                "num_blocks": {"type": "integer", "minimum": 1},
                "blocks": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
                "ranks": {"type": "array", "items": {"type": "integer"}},
                "independent": {"type": "boolean"},
            },
        },
        "t_hat": {
            "type": ["object", "null"],
            "required": ["rank", "sub_ranks", "independent"],
            "properties": {
                "rank": {"type": "integer"},
                "sub_ranks": {"type": "array", "items": {"type": "integer"}},
                "independent": {"type": "boolean"},
                "shared_reactants": {"type": "array", "items": {"type": "string"}},
            },
        },
        "verdict": {"enum": ["nonempty", "no_witness_found", "conditions_not_met", "not_evaluated"]},
        "steady_states": {"type": "array", "items": _SOLUTION},
        "notes": {"type": "array", "items": {"type": "string"}},
    },
}


def _num(v):
    return float(v) if v is not None and math.isfinite(v) else None


def _solution(scope: str, block: int | None, sol: BlockSolution) -> dict:
    return {
        "scope": scope,
        "block": block,
        "found": bool(sol.found),
        "residual": _num(sol.residual),
        "x": [float(v) for v in sol.x] if sol.found and sol.x is not None else None,
    }


def build_report(sys: KineticSystem, verdict: Verdict | None = None) -> dict:
    """Collect network invariants, decomposition ranks and (optionally) a verdict."""
    net = sys.network
    plrdk = is_plrdk(sys)
    if verdict is not None:
        ind = verdict.report
    else:
        d = finest_independent_decomposition(net)
        ind = verify_t_hat_independence(sys, d) if plrdk else verify_independence(net, d)
    d = ind.decomposition
    report = {
        "network": {
            "species": list(net.species_names),
            "m": net.m,
            "n": net.n,
            "r": net.r,
            "ell": len(linkage_classes(net)),
            "rank_N": rank(stoichiometric_matrix(net)),
            "deficiency": deficiency(net),
        },
        "plrdk": plrdk,
        "decomposition": {
            "num_blocks": d.alpha,
            "blocks": d.labels(net),
            "ranks": list(ind.rank_blocks),
            "independent": ind.stoich_independent,
        },
        "t_hat": None if ind.t_hat_rank_whole is None else {
            "rank": ind.t_hat_rank_whole,
            "sub_ranks": list(ind.t_hat_rank_blocks),
            "independent": ind.t_hat_independent,
            "shared_reactants": [net.complexes[c].format(net.species_names)
                                 for c in ind.shared_reactants],
        },
        "verdict": "not_evaluated",
        "steady_states": [],
    }
    if verdict is not None:
        report["verdict"] = verdict.whole
        states = [_solution("block", i, b) for i, b in enumerate(verdict.per_block)]
        if verdict.witness is not None:
            merged = BlockSolution(True, verdict.witness, relative_residual(sys, verdict.witness))
            states.append(_solution("whole", None, merged))
        elif verdict.direct is not None:
            states.append(_solution("whole", None, verdict.direct))
        report["steady_states"] = states
        report["notes"] = list(verdict.notes)
    return report


def emit_report(sys: KineticSystem, verdict: Verdict | None = None, indent: int | None = 2) -> str:
    """JSON text of :func:`build_report`; keys appear in schema order."""
    return json.dumps(build_report(sys, verdict), indent=indent)
