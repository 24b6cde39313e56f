"""Text and JSON formats for instances, matchings, audit reports and solve results.

Instance text::

    smti <n_left> <n_right>
    cap m <id> <b>            # optional, capacity defaults to 1
    cap w <id> <b>
    m <id>: w1 (w2 w3) w4     # one line per left agent
    w <id>: m2 m1             # one line per right agent

Ids are 1-based in files and 0-based in memory.  ``#`` starts a comment.
Ties are parenthesised; the canonical writer emits ``(w2 w3)``, the reader
also accepts ``( w2 w3 )``.  Missing agent lines mean empty lists.

Matching text is a ``matching`` line followed by ``match m<i> w<j>`` lines
sorted by left then right id.
"""
from __future__ import annotations

import json
import re
from typing import Any

from .audit import AuditReport, DangerousPath, InvalidMatching
from .events import format_event
from .model import Instance, Matching, is_valid_matching

__all__ = [
    "ParseError", "parse_instance", "serialize_instance", "parse_matching",
    "serialize_matching", "instance_to_json", "instance_from_json", "matching_to_json",
    "matching_from_json", "serialize_audit", "audit_to_json", "audit_from_json",
    "result_to_json",
]


class ParseError(ValueError):
    def __init__(self, line: int, col: int, kind: str, message: str):
        self.line, self.col, self.kind = line, col, kind
        super().__init__(f"line {line}, col {col}: {kind}: {message}")


_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_REF = re.compile(r"([mw])(\d+)\Z")


def _strip_comment(raw: str) -> str:
    i = raw.find("#")
    return raw if i < 0 else raw[:i]


def _int(tok: str, line: int, col: int, what: str) -> int:
    if not tok.isdigit():
        raise ParseError(line, col, "bad_number", f"expected {what}, got {tok!r}")
    return int(tok)


def _parse_prefs(body: str, offset: int, line: int, want: str) -> list[list[int]]:
    ties: list[list[int]] = []
    open_tie: list[int] | None = None
    open_col = 0
    for m in _TOKEN.finditer(body):
        tok, col = m.group(), offset + m.start() + 1
        if tok == "(":
            if open_tie is not None:
                raise ParseError(line, col, "nested_tie", "ties cannot be nested")
            open_tie, open_col = [], col
        elif tok == ")":
            if open_tie is None:
                raise ParseError(line, col, "unbalanced_tie", "')' without '('")
            if not open_tie:
                raise ParseError(line, col, "empty_tie", "empty tie")
            ties.append(open_tie)
            open_tie = None
        else:
            ref = _REF.match(tok)
            if not ref or ref.group(1) != want:
                raise ParseError(line, col, "bad_reference",
                                 f"expected {want}<id>, got {tok!r}")
            idx = int(ref.group(2)) - 1
            if open_tie is None:
                ties.append([idx])
            else:
                open_tie.append(idx)
    if open_tie is not None:
        raise ParseError(line, open_col, "unclosed_tie", "tie is not closed")
    return ties


def parse_instance(text: str) -> Instance:
    """Parse instance text; raises ParseError or ValidationError."""
    header = None
    caps: dict[str, list[int]] = {}
    prefs: dict[str, list] = {}
    seen: set[tuple[str, int]] = set()
    lists_started = False
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        toks = line.split()
        col = len(line) - len(line.lstrip()) + 1
        if header is None:
            if toks[0] != "smti" or len(toks) != 3:
                raise ParseError(lineno, col, "header", "expected 'smti <n_left> <n_right>'")
            n_left = _int(toks[1], lineno, col, "n_left")
            n_right = _int(toks[2], lineno, col, "n_right")
            header = (n_left, n_right)
            caps = {"m": [1] * n_left, "w": [1] * n_right}
            prefs = {"m": [[] for _ in range(n_left)], "w": [[] for _ in range(n_right)]}
            continue
        if toks[0] == "cap":
            if len(toks) != 4 or toks[1] not in ("m", "w"):
                raise ParseError(lineno, col, "syntax", "expected 'cap m|w <id> <b>'")
            if lists_started:
                raise ParseError(lineno, col, "order", "capacity lines must precede lists")
            idx = _int(toks[2], lineno, col, "agent id") - 1
            if not 0 <= idx < len(caps[toks[1]]):
                raise ParseError(lineno, col, "bad_id", f"no agent {toks[1]}{idx + 1}")
            if (f"cap{toks[1]}", idx) in seen:
                raise ParseError(lineno, col, "duplicate", f"second capacity for {toks[1]}{idx + 1}")
            seen.add((f"cap{toks[1]}", idx))
            caps[toks[1]][idx] = _int(toks[3], lineno, col, "capacity")
            continue
        m = re.match(r"\s*([mw])\s*(\d+)\s*:", line)
        if not m:
            raise ParseError(lineno, col, "syntax", "expected 'm <id>:' or 'w <id>:'")
        side, idx = m.group(1), int(m.group(2)) - 1
        if not 0 <= idx < len(prefs[side]):
            raise ParseError(lineno, col, "bad_id", f"no agent {side}{idx + 1}")
        if (side, idx) in seen:
            raise ParseError(lineno, col, "duplicate", f"second list for {side}{idx + 1}")
        seen.add((side, idx))
        lists_started = True
        other = "w" if side == "m" else "m"
        prefs[side][idx] = _parse_prefs(line[m.end():], m.end(), lineno, other)
    if header is None:
        raise ParseError(1, 1, "header", "missing 'smti' header")
    return Instance(prefs["m"], prefs["w"], caps["m"], caps["w"])


def _fmt_prefs(prefix: str, ties) -> str:
    items = []
    for tie in ties:
        names = [f"{prefix}{x + 1}" for x in tie]
        items.append(names[0] if len(names) == 1 else "(" + " ".join(names) + ")")
    return " ".join(items)


def serialize_instance(instance: Instance) -> str:
    """Canonical text: header, non-default capacities, then every list in id order."""
    out = [f"smti {instance.n_left} {instance.n_right}"]
    for side, caps in (("m", instance.capacities_left), ("w", instance.capacities_right)):
        out += [f"cap {side} {i + 1} {int(b)}" for i, b in enumerate(caps.tolist()) if b != 1]
    for side, other, lists in (("m", "w", instance.prefs_left), ("w", "m", instance.prefs_right)):
        for i, ties in enumerate(lists):
            body = _fmt_prefs(other, ties)
            out.append(f"{side} {i + 1}:" + (" " + body if body else ""))
    return "\n".join(out) + "\n"


def serialize_matching(matching: Matching) -> str:
    lines = ["matching"] + [f"match m{u + 1} w{w + 1}" for u, w in matching.sorted_edges()]
    return "\n".join(lines) + "\n"


def parse_matching(text: str, instance: Instance | None = None) -> Matching:
    """Parse matching text; with an instance, also check it (InvalidMatching)."""
    pairs = []
    header = False
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if not header:
            if line != "matching":
                raise ParseError(lineno, 1, "header", "expected 'matching'")
            header = True
            continue
        m = re.fullmatch(r"match\s+m(\d+)\s+w(\d+)", line)
        if not m:
            raise ParseError(lineno, 1, "syntax", "expected 'match m<i> w<j>'")
        pair = (int(m.group(1)) - 1, int(m.group(2)) - 1)
        if pair in pairs:
            raise ParseError(lineno, 1, "duplicate", "edge listed twice")
        pairs.append(pair)
    if not header:
        raise ParseError(1, 1, "header", "missing 'matching' header")
    matching = Matching.of(pairs)
    if instance is not None and not is_valid_matching(instance, matching):
        raise InvalidMatching("matching uses a non-edge or exceeds a capacity")
    return matching


# -- JSON ----------------------------------------------------------------------

def _plus1(ties) -> list[list[int]]:
    return [[x + 1 for x in tie] for tie in ties]


def instance_to_json(instance: Instance) -> dict[str, Any]:
    return {
        "type": "instance",
        "n_left": instance.n_left,
        "n_right": instance.n_right,
        "capacities_left": instance.capacities_left.tolist(),
        "capacities_right": instance.capacities_right.tolist(),
        "prefs_left": [_plus1(t) for t in instance.prefs_left],
        "prefs_right": [_plus1(t) for t in instance.prefs_right],
    }


def instance_from_json(obj: dict[str, Any] | str) -> Instance:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if obj.get("type") != "instance":
        raise ValueError("not an instance object")
    minus1 = lambda lists: [[[x - 1 for x in tie] for tie in ties] for ties in lists]  # noqa: E731
    inst = Instance(minus1(obj["prefs_left"]), minus1(obj["prefs_right"]),
                    obj["capacities_left"], obj["capacities_right"])
    if inst.n_left != obj["n_left"] or inst.n_right != obj["n_right"]:
        raise ValueError("agent counts disagree with the lists")
    return inst


def matching_to_json(matching: Matching) -> dict[str, Any]:
    return {"type": "matching",
            "pairs": [{"left": u + 1, "right": w + 1} for u, w in matching.sorted_edges()]}


def matching_from_json(obj: dict[str, Any] | str, instance: Instance | None = None) -> Matching:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if obj.get("type") != "matching":
        raise ValueError("not a matching object")
    m = Matching.of((p["left"] - 1, p["right"] - 1) for p in obj["pairs"])
    if instance is not None and not is_valid_matching(instance, m):
        raise InvalidMatching("matching uses a non-edge or exceeds a capacity")
    return m


def serialize_audit(report: AuditReport) -> str:
    lines = [f"audit valid={str(report.valid).lower()} stable={str(report.stable).lower()} "
             f"blocking={len(report.blocking_pairs)} dangerous={len(report.dangerous_paths)}"]
    lines += [f"blocking m{u + 1} w{w + 1}" for u, w in report.blocking_pairs]
    for p in report.dangerous_paths:
        w, u1, w1, u = p.path
        kinds = ",".join(sorted(p.kinds)) or "none"
        lines.append(f"dangerous w{w + 1} m{u1 + 1} w{w1 + 1} m{u + 1} {kinds}")
    return "\n".join(lines) + "\n"


def audit_to_json(report: AuditReport) -> dict[str, Any]:
    return {
        "type": "audit",
        "valid": report.valid,
        "stable": report.stable,
        "blocking_pairs": [{"left": u + 1, "right": w + 1} for u, w in report.blocking_pairs],
        "dangerous_paths": [{"path": {"w": p.path[0] + 1, "m1": p.path[1] + 1,
                                      "w1": p.path[2] + 1, "m": p.path[3] + 1},
                             "kinds": sorted(p.kinds)} for p in report.dangerous_paths],
    }


def audit_from_json(obj: dict[str, Any] | str) -> AuditReport:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return AuditReport(
        obj["valid"],
        [(p["left"] - 1, p["right"] - 1) for p in obj["blocking_pairs"]],
        [DangerousPath((d["path"]["w"] - 1, d["path"]["m1"] - 1, d["path"]["w1"] - 1,
                        d["path"]["m"] - 1), frozenset(d["kinds"]))
         for d in obj["dangerous_paths"]])


def result_to_json(result) -> dict[str, Any]:
    c = result.counters
    out = {
        "type": "solve_result",
        "matching": matching_to_json(result.matching),
        "counters": {
            "total_proposals": c.total_proposals,
            "l_scans": int(c.l_scans.sum()),
            "lprime_scans": int(c.lprime_scans.sum()),
            "queue_ops": c.queue_ops,
            "queue_ops_logweighted": c.queue_ops_logweighted,
        },
    }
    if result.trace is not None:
        out["trace"] = [format_event(ev) for ev in result.trace]
        out["trace_truncated"] = result.trace_truncated
    return out
