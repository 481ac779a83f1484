"""Problem specs (JSON in) and deterministic reports (JSON out)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .quiver import Arrow, DoubleQuiver, FiltrationSpec, Quiver, double

SCHEMA_KEYS = ("quiver", "dimension", "framing", "filtration", "task")


class SpecError(ValueError):
    """Schema violations, each as (json path, message)."""

    def __init__(self, violations: list[tuple[str, str]]):
        self.violations = list(violations)
        super().__init__("; ".join(f"{p}: {m}" for p, m in self.violations))


@dataclass
class ProblemSpec:
    quiver: Quiver
    dims: dict
    framing: dict
    filtration: FiltrationSpec
    task: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    @property
    def double(self) -> DoubleQuiver:
        return double(self.quiver)

    def to_json(self) -> dict:
        return json.loads(json.dumps(self.raw))


def _is_nat(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


def parse_spec(source) -> ProblemSpec:
    """Parse a path, JSON text, or already-decoded dict, collecting every violation."""
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise SpecError([("$", f"cannot read spec: {exc}")]) from None
    else:
        text = source
    if isinstance(text, dict):
        data = text
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError([("$", f"malformed JSON: {exc.msg} at line {exc.lineno}")]) from None
    return _validate(data)


def _validate(data) -> ProblemSpec:
    errs: list[tuple[str, str]] = []
    if not isinstance(data, dict):
        raise SpecError([("$", "spec must be a JSON object")])
    for k in data:
        if k not in SCHEMA_KEYS:
            errs.append((k, "unknown key"))
    q = data.get("quiver")
    vertices: list[str] = []
    arrows: list[Arrow] = []
    if not isinstance(q, dict):
        errs.append(("quiver", "missing or not an object"))
    else:
        vs = q.get("vertices")
        if not isinstance(vs, list) or not vs:
            errs.append(("quiver.vertices", "must be a nonempty list"))
        else:
            for k, v in enumerate(vs):
                if not isinstance(v, (str, int)) or isinstance(v, bool):
                    errs.append((f"quiver.vertices[{k}]", "vertex id must be a string or integer"))
                elif str(v) in vertices:
                    errs.append((f"quiver.vertices[{k}]", f"duplicate vertex {v!r}"))
                else:
                    vertices.append(str(v))
        arr = q.get("arrows", [])
        if not isinstance(arr, list):
            errs.append(("quiver.arrows", "must be a list"))
            arr = []
        names = set()
        for k, a in enumerate(arr):
            path = f"quiver.arrows[{k}]"
            if not isinstance(a, dict):
                errs.append((path, "arrow must be an object"))
                continue
            name = a.get("name")
            if not isinstance(name, str) or not name:
                errs.append((f"{path}.name", "missing arrow name"))
            elif name in names:
                errs.append((f"{path}.name", f"duplicate arrow name {name!r}"))
            ok = isinstance(name, str) and bool(name)
            for end in ("tail", "head"):
                v = a.get(end)
                if v is None or str(v) not in vertices:
                    errs.append((f"{path}.{end}", f"undeclared vertex {v!r}"))
                    ok = False
            op = a.get("op")
            if op is not None and (not isinstance(op, str) or not op):
                errs.append((f"{path}.op", "opposite arrow name must be a nonempty string"))
                ok = False
            if ok and name not in names:
                names.add(name)
                arrows.append(Arrow(name, str(a["tail"]), str(a["head"]), op))
        all_names = list(names)
        for a in arrows:
            opn = a.op_name or f"{a.name}op"
            if opn in all_names:
                errs.append(("quiver.arrows", f"opposite arrow name {opn!r} collides with another arrow"))
            all_names.append(opn)

    def vertex_map(key: str, required: bool) -> dict:
        m = data.get(key)
        if m is None:
            if required:
                errs.append((key, "missing"))
            return {}
        if not isinstance(m, dict):
            errs.append((key, "must be an object keyed by vertex"))
            return {}
        out = {}
        for v, x in m.items():
            if str(v) not in vertices:
                errs.append((f"{key}.{v}", "undeclared vertex"))
            elif not _is_nat(x):
                errs.append((f"{key}.{v}", "must be a nonnegative integer"))
            else:
                out[str(v)] = x
        return out

    dims = vertex_map("dimension", True)
    dims = {v: dims.get(v, 0) for v in vertices}
    framing = vertex_map("framing", False)

    steps = {}
    f = data.get("filtration", {})
    if not isinstance(f, dict):
        errs.append(("filtration", "must be an object keyed by vertex"))
        f = {}
    for v, seq in f.items():
        if not isinstance(seq, list) or not all(_is_nat(g) for g in seq):
            errs.append((f"filtration.{v}", "must be a list of nonnegative integers"))
            continue
        steps[str(v)] = tuple(seq)
    filt = FiltrationSpec(steps)
    errs.extend(filt.validate(dims))
    task = data.get("task", {})
    if not isinstance(task, dict):
        errs.append(("task", "must be an object"))
        task = {}
    if errs:
        raise SpecError(errs)
    quiver = Quiver(tuple(vertices), tuple(arrows))
    return ProblemSpec(quiver, dims, framing, filt, dict(task), data)


def jordan_spec(n: int, w: int = 1, blocks: tuple[int, ...] | None = None) -> dict:
    """Spec dict for the framed Jordan quiver with loop r (opposite s)."""
    steps, acc = [], 0
    for b in blocks or (1,) * n:
        acc += b
        steps.append(acc)
    return {
        "quiver": {"vertices": ["1"], "arrows": [{"name": "r", "tail": "1", "head": "1", "op": "s"}]},
        "dimension": {"1": n},
        "framing": {"1": w},
        "filtration": {"1": steps},
    }


# reports --------------------------------------------------------------------------


@dataclass
class Report:
    task: str
    inputs: dict
    results: dict
    provenance: dict = field(default_factory=dict)
    timing: dict | None = None
    ok: bool = True

    def to_json(self) -> dict:
        from . import __version__

        out = {
            "task": self.task,
            "version": __version__,
            "inputs": self.inputs,
            "provenance": self.provenance,
            "results": self.results,
        }
        if self.timing is not None:
            out["timing"] = self.timing
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    def pretty(self) -> str:
        lines = [f"{self.task}"]
        _pretty(self.results, lines, 1)
        return "\n".join(lines) + "\n"


def _pretty(obj, lines: list[str], depth: int):
    pad = "  " * depth
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                _pretty(v, lines, depth + 1)
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                _pretty(v, lines, depth + 1)
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
