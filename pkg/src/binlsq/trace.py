"""Serializable per-stage traces of a DPBB solve.

:func:`trace_document` builds a JSON-ready dict; :func:`render_tables` prints
the same content as row-labelled tables, one per branch, with rows
"Initial state", the removed column, "New state", "State estimate",
"Estimation error" and "SSE".
"""
from __future__ import annotations

import json


def _floats(v):
    return None if v is None else [float(e) for e in v]


def _branch_doc(branch, last):
    return {
        "decision": branch.bit,
        "new_state": _floats(branch.state),
        "relaxed_completion": None if last else _floats(branch.relaxed_completion),
        "state_estimate": None if last else _floats(branch.state_estimate),
        "estimation_error": _floats(branch.error),
        "sse": float(branch.sse),
    }


def trace_document(problem, result, source=None):
    n = problem.n
    stages = []
    for st in result.stages:
        last = st.index == n
        stages.append({
            "variable": f"x_{st.index}",
            "index": st.index,
            "remaining_columns": [] if last else list(range(st.index + 1, n + 1)),
            "initial_state": _floats(st.incoming_state),
            "branches": [_branch_doc(st.branch0, last), _branch_doc(st.branch1, last)],
            "decision": st.decision,
        })
    return {
        "problem": {"m": problem.m, "n": n, "source": source or {}},
        "method": "dpbb",
        "stages": stages,
        "x": [int(v) for v in result.x],
        "final_sse": float(result.final_sse),
    }


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _row(label, values, width):
    return f"{label:<{width}}" + "".join(f"{v:>13.6g}" for v in values)


def render_tables(doc):
    """Plain-text tables for every branch of every stage."""
    lines = []
    width = 28
    for st in doc["stages"]:
        i = st["index"]
        rem = st["remaining_columns"]
        for br in st["branches"]:
            bit = br["decision"]
            used = (f"B = [{', '.join(f'a_{j}' for j in rem)}] is used for pseudo inverse"
                    if rem else "B is not used for pseudo inverse")
            lines.append(f"Decision variable is x_{i}. Decision is x_{i} = {bit}. {used}. "
                         f"Initial state s_{i - 1}")
            if br["relaxed_completion"] is not None:
                opt = "  ".join(f"X_{j} = {v:.6g}" for j, v in zip(rem, br["relaxed_completion"]))
                lines.append(f"Optimal choice for remaining variables: {opt}")
            lines.append(_row(f"Initial state s_{i - 1}", st["initial_state"], width))
            if bit:
                column = [s - ns for s, ns in zip(st["initial_state"], br["new_state"])]
                lines.append(_row(f"a_{i}", column, width))
                lines.append(_row(f"New state s_{i} = s_{i - 1} - a_{i}", br["new_state"], width))
            else:
                lines.append(_row(f"New state s_{i} = s_{i - 1}", br["new_state"], width))
            if br["state_estimate"] is not None:
                lines.append(_row("State estimate", br["state_estimate"], width))
            lines.append(_row("Estimation error", br["estimation_error"], width))
            lines.append(f"{'SSE':<{width}}{br['sse']:>13.6g}")
            lines.append("")
        lines.append(f"=> x_{i} = {st['decision']}")
        lines.append("")
    lines.append(f"x = {doc['x']}  final SSE = {doc['final_sse']:.6g}")
    return "\n".join(lines) + "\n"
