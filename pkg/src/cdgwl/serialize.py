"""JSON-lines wire format for dynamic graphs.

Line 1 holds the start graph, every further line one event:

    {"type":"start","d":1,"nodes":[{"id":"a","attr":[1.0]}],"edges":[{"u":"a","v":"b","attr":[0.5]}]}
    {"type":"event","t":1.0,"item":"node","key":"c","kind":"add","attr":[1.0]}
    {"type":"event","t":2.0,"item":"edge","key":["a","c"],"kind":"delete"}

Floats round-trip exactly (shortest-repr encoding); node and edge lists are
emitted in sorted order so serialization is byte-stable.
"""

from __future__ import annotations

import json

from .cdg import Cdg, Event, StartGraph, EDGE, NODE


def cdg_to_jsonl(cdg) -> str:
    start = {
        "type": "start",
        "d": cdg.dim,
        "nodes": [{"id": v, "attr": list(a)} for v, a in sorted(cdg.start.nodes.items())],
        "edges": [
            {"u": u, "v": v, "attr": list(a)} for (u, v), a in sorted(cdg.start.edges.items())
        ],
    }
    lines = [json.dumps(start, separators=(",", ":"))]
    for e in cdg.events:
        obj = {
            "type": "event",
            "t": e.time,
            "item": e.item,
            "key": list(e.key) if e.item == EDGE else e.key,
            "kind": e.kind,
        }
        if e.attr is not None:
            obj["attr"] = list(e.attr)
        lines.append(json.dumps(obj, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def cdg_from_jsonl(text, max_nodes=None) -> Cdg:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty stream")
    head = json.loads(lines[0])
    if head.get("type") != "start":
        raise ValueError("first line must have type 'start'")
    nodes = {n["id"]: tuple(n["attr"]) for n in head.get("nodes", [])}
    edges = {(e["u"], e["v"]): tuple(e["attr"]) for e in head.get("edges", [])}
    events = []
    for ln in lines[1:]:
        obj = json.loads(ln)
        if obj.get("type") != "event":
            raise ValueError(f"expected an event line, got {obj.get('type')!r}")
        key = obj["key"]
        if obj["item"] == EDGE:
            key = tuple(key)
        elif obj["item"] != NODE:
            raise ValueError(f"unknown item kind {obj['item']!r}")
        attr = obj.get("attr")
        events.append(
            Event(
                time=obj["t"],
                item=obj["item"],
                key=key,
                kind=obj["kind"],
                attr=tuple(attr) if attr is not None else None,
            )
        )
    return Cdg(
        start=StartGraph(nodes, edges),
        events=tuple(events),
        dim=head["d"],
        max_nodes=max_nodes,
    )


def save_cdg(path, cdg):
    with open(path, "w") as fh:
        fh.write(cdg_to_jsonl(cdg))


def load_cdg(path, max_nodes=None) -> Cdg:
    with open(path) as fh:
        return cdg_from_jsonl(fh.read(), max_nodes=max_nodes)
