"""JSON manifests in, JSON reports out.

A manifest declares algebras, matrix elements over them and an ordered
task list.  Every number crossing the JSON boundary is a string or an
integer; scalars in reports are written as ``{"re": "p/q", "im": "p/q"}``.
Timing lives under ``"timing"`` keys, which :func:`diff_reports` ignores.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .algebra import AlgMatrix, FDAlgebra, complex_numbers, direct_power, matrix_units, \
    truncated_polynomial, validate_algebra
from .chern import ALTERNATING_SIGN_DEFAULT, apply_scaling_c, ch_cq_even, ch_cq_odd, \
    cycle_defects
from .derham import PairingFunctional, compare_cq_cw, ch_cw_even, ch_cw_odd, \
    mu_map, pair
from .forms import DEFAULT_CAP, CapOverflow, GradedChain, verify_mixed_identities
from .homology import hochschild_dims, hp_dims
from .morita import LeviBlock, cyclic_group, direct_sum, function_algebra, group_algebra, \
    group_from_permutations, invariant_subalgebra, levi_block_model, matrix_algebra, \
    permutation_action, symmetric_group, trivial_group, wassermann_toy_check, GroupTable
from .presented import PresentedAlgebra, laurent, polynomial_ring, sphere, truncated
from .scalars import imag_part, parse_scalar, real_part

MANIFEST_SCHEMA = "cyclochern.manifest/1"
REPORT_SCHEMA = "cyclochern.report/1"

__all__ = ["ManifestError", "SchemaMismatch", "RunFlags", "load_manifest", "run_manifest",
           "run_manifest_data", "diff_reports", "MANIFEST_SCHEMA", "REPORT_SCHEMA",
           "encode_scalar", "encode_chain", "encode_forms"]


class ManifestError(ValueError):
    """Unparseable or invalid manifest."""


class SchemaMismatch(ValueError):
    pass


@dataclass
class RunFlags:
    cap: int | None = None
    sign_convention: str | None = None        # "alternating" | "plain"
    output: str | None = None
    quiet: bool = False

    def alternating(self) -> bool | None:
        if self.sign_convention is None:
            return None
        if self.sign_convention not in ("alternating", "plain"):
            raise ManifestError(f"unknown sign convention {self.sign_convention!r}")
        return self.sign_convention == "alternating"


# -- encoding -------------------------------------------------------------------

def encode_scalar(x) -> dict:
    return {"re": str(real_part(x)), "im": str(imag_part(x))}


def _encode_key(A, key) -> str:
    if isinstance(A, PresentedAlgebra):
        return A.mono_str(key)
    return A.labels[key]


def encode_chain(c: GradedChain, A) -> list:
    """Degree blocks of (basis-index tuple, scalar) pairs, with labels echoed."""
    out = []
    for n in sorted(c.components):
        terms = []
        for t, v in sorted(c.components[n].items(), key=lambda kv: repr(kv[0])):
            idx = [list(k) if isinstance(k, tuple) else k for k in t]
            terms.append({"basis": idx, "labels": [_encode_key(A, k) for k in t],
                          "value": encode_scalar(v)})
        out.append({"degree": n, "twopi_power": c.power(n), "terms": terms})
    return out


def encode_forms(forms: dict) -> list:
    out = []
    for n in sorted(forms):
        w = forms[n]
        P = w.algebra
        terms = [{"wedge": "^".join(f"d{P.generators[i]}" for i in I_) or "1",
                  "coefficient": P.to_str(f)} for I_, f in sorted(w.terms.items())]
        out.append({"degree": n, "twopi_power": w.twopi_power, "terms": terms})
    return out


# -- manifest loading -------------------------------------------------------------

def load_manifest(path) -> dict:
    text = Path(path).read_text()
    try:
        data = json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return data


def _reject_float(s: str):
    raise ManifestError(f"floating-point literal {s} not allowed; write rationals as strings")


@dataclass
class _Algebra:
    obj: Any
    convert: Callable = dict          # declared coordinates -> internal coordinates
    info: dict = field(default_factory=dict)


def _scalar(v):
    if isinstance(v, bool):
        raise ManifestError("booleans are not scalars")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return parse_scalar(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise ManifestError(f"bad scalar {v!r}") from exc
    raise ManifestError(f"bad scalar {v!r}")


def _group(conf) -> tuple[GroupTable, list | None]:
    if "cyclic" in conf:
        return cyclic_group(int(conf["cyclic"])), None
    if "symmetric" in conf:
        return symmetric_group(int(conf["symmetric"])), None
    if "trivial" in conf:
        return trivial_group(), None
    if "permutations" in conf:
        perms = [tuple(p) for p in conf["permutations"]]
        return group_from_permutations(perms), perms
    if "table" in conf:
        G = GroupTable(tuple(tuple(r) for r in conf["table"]), int(conf.get("identity", 0)),
                       tuple(str(i) for i in range(len(conf["table"]))))
        G.validate()
        return G, None
    raise ManifestError("group needs one of cyclic | symmetric | trivial | permutations | table")


def _build_algebra(name: str, conf: dict, env: dict) -> _Algebra:
    kind = conf.get("kind")
    if kind == "structure-constants":
        preset = conf.get("preset")
        if preset:
            k = int(conf.get("n", 2))
            A = {"complex": complex_numbers, "direct-power": lambda: direct_power(k),
                 "truncated-polynomial": lambda: truncated_polynomial(k),
                 "matrix-units": lambda: matrix_units(k)}.get(preset)
            if A is None:
                raise ManifestError(f"algebra {name}: unknown preset {preset!r}")
            return _Algebra(A(), info={"preset": preset, "n": k})
        labels = list(conf["labels"])
        pos = {l: i for i, l in enumerate(labels)}

        def vec(x):
            if isinstance(x, list):
                return {i: _scalar(c) for i, c in enumerate(x) if _scalar(c)}
            return {pos[l]: _scalar(c) for l, c in x.items() if _scalar(c)}
        table = [[vec(x) for x in row] for row in conf["table"]]
        unit = vec(conf["unit"]) if "unit" in conf else None
        A0 = FDAlgebra.from_table(labels, table, unit, name)
        rep = validate_algebra(A0)
        if not rep.ok:
            raise ManifestError(f"algebra {name}: invalid structure constants: {rep}")
        A, conv = A0.unit_first_with_map()
        return _Algebra(A, conv)
    if kind == "presented":
        preset = conf.get("preset")
        if preset == "sphere":
            P = sphere()
        elif preset == "laurent":
            P = laurent(conf.get("variable", "u"), conf.get("inverse"))
        elif preset == "polynomial":
            P = polynomial_ring(conf["generators"])
        elif preset == "truncated":
            P = truncated(conf.get("variable", "x"), int(conf["m"]))
        elif preset is None:
            rules = []
            for r in conf.get("rules", []):
                if "->" not in r:
                    raise ManifestError(f"algebra {name}: rule {r!r} lacks '->'")
                lhs, rhs = r.split("->", 1)
                rules.append((lhs.strip(), rhs.strip()))
            P = PresentedAlgebra.build(conf["generators"], rules, conf.get("order"),
                                       conf.get("inverses"), name=name,
                                       smooth=bool(conf.get("smooth", False)))
        else:
            raise ManifestError(f"algebra {name}: unknown preset {preset!r}")
        return _Algebra(P)
    if kind == "group-algebra":
        G, _ = _group(conf["group"])
        return _Algebra(group_algebra(G))
    if kind == "function-algebra":
        return _Algebra(function_algebra(int(conf["points"])))
    if kind == "matrix-over":
        base = _ref(env, conf["base"], name)
        B, corner = matrix_algebra(base.obj, int(conf["n"]))
        return _Algebra(B, info={"base": conf["base"], "n": int(conf["n"])})
    if kind == "invariant-subalgebra":
        n = int(conf["points"])
        G, perms = _group({"permutations": conf["permutations"]})
        act = permutation_action(G, n, perms)
        B, _ = invariant_subalgebra(act)
        return _Algebra(B, info={"action": act})
    if kind == "direct-sum":
        parts = [_ref(env, s, name).obj for s in conf["summands"]]
        B, _ = direct_sum(parts)
        return _Algebra(B)
    raise ManifestError(f"algebra {name}: unknown kind {kind!r}")


def _ref(env: dict, key: str, where: str):
    if key not in env:
        raise ManifestError(f"{where}: reference to undefined name {key!r}")
    return env[key]


def _build_element(name: str, conf: dict, algebras: dict) -> AlgMatrix:
    alg = _ref(algebras, conf["algebra"], f"element {name}")
    A = alg.obj
    rows = []
    for row in conf["matrix"]:
        out = []
        for x in row:
            if isinstance(A, PresentedAlgebra):
                if not isinstance(x, str):
                    raise ManifestError(f"element {name}: presented entries are polynomial strings")
                try:
                    out.append(A.parse(x))
                except Exception as exc:
                    raise ManifestError(f"element {name}: cannot parse {x!r}: {exc}") from exc
            elif isinstance(x, (list, dict)):
                if isinstance(x, list):
                    v = {i: _scalar(c) for i, c in enumerate(x) if _scalar(c)}
                else:
                    pos = {l: i for i, l in enumerate(A.labels)}
                    v = {pos[l]: _scalar(c) for l, c in x.items() if _scalar(c)}
                out.append(alg.convert(v))
            else:
                out.append({A.unit_key: _scalar(x)} if _scalar(x) else {})
        rows.append(out)
    return AlgMatrix.from_rows(A, rows)


# -- tasks ---------------------------------------------------------------------------

class _Ctx:
    def __init__(self, algebras, elements, cap, alternating):
        self.algebras = algebras
        self.elements = elements
        self.cap = cap
        self.alternating = alternating

    def alg(self, key, where):
        return _ref(self.algebras, key, where).obj

    def elem(self, key, where):
        return _ref(self.elements, key, where)

    def degree(self, value, where):
        if value > self.cap:
            raise CapOverflow(f"{where}: degree {value} exceeds cap {self.cap}")
        return value


def _check(asserts: list, name: str, expected, actual):
    asserts.append({"name": name, "passed": expected == actual,
                    "expected": expected, "actual": actual})


def _current(conf: dict) -> PairingFunctional:
    kind = conf["kind"]
    default = 0 if kind == "point-evaluation" else 1
    point = tuple(_scalar(p) for p in conf.get("point", []))
    return PairingFunctional(kind, int(conf.get("twopi_power", default)),
                             int(conf.get("orientation", 1)), point)


def _chern_N(task, ctx, odd):
    N = task.get("N")
    if N is None:
        N = (ctx.cap - 2) // 2
    ctx.degree(2 * N + (1 if odd else 0), task["id"])
    return N


def _t_check_identities(task, ctx, res, asserts):
    A = ctx.alg(task["algebra"], task["id"])
    deg = ctx.degree(int(task.get("max_degree", ctx.cap)), task["id"])
    rep = verify_mixed_identities(A, deg)
    for key, d in (("b_squared", rep.b_squared), ("B_squared", rep.B_squared),
                   ("bB_plus_Bb", rep.anticommutator)):
        res[key] = {str(n): ok for n, ok in sorted(d.items())}
        _check(asserts, key, True, all(d.values()))


def _t_homology(task, ctx, res, asserts):
    A = ctx.alg(task["algebra"], task["id"])
    hh_deg = ctx.degree(int(task.get("hh_degree", 4)), task["id"])
    trunc = int(task.get("hp_truncation", 4))
    hh = hochschild_dims(A, hh_deg)
    hp = hp_dims(A, trunc)
    res.update({"hh_dims": hh, "hp_dims": [hp.even, hp.odd], "stabilized": hp.stabilized,
                "truncation": trunc,
                "history": {str(M): list(v) for M, v in sorted(hp.history.items())}})
    exp = task.get("expect", {})
    if "hh" in exp:
        _check(asserts, "hh_dims", exp["hh"], hh)
    if "hp" in exp:
        _check(asserts, "hp_dims", exp["hp"], [hp.even, hp.odd])
    if "stabilized" in exp:
        _check(asserts, "stabilized", exp["stabilized"], hp.stabilized)


def _t_chern(task, ctx, res, asserts, odd):
    x = ctx.elem(task["element"], task["id"])
    N = _chern_N(task, ctx, odd)
    c = ch_cq_odd(x, N) if odd else ch_cq_even(x, N, ctx.alternating)
    if task.get("scaled", False):
        c = apply_scaling_c(c)
    res["N"] = N
    res["chain"] = encode_chain(c, x.algebra)
    if task.get("verify", True):
        bad = cycle_defects(c, x.algebra)
        res["cycle_defect_degrees"] = sorted(bad)
        _check(asserts, "cycle", [], sorted(bad))


def _t_verify_cycle(task, ctx, res, asserts):
    x = ctx.elem(task["element"], task["id"])
    odd = task.get("parity", "even") == "odd"
    N = _chern_N(task, ctx, odd)
    c = ch_cq_odd(x, N) if odd else ch_cq_even(x, N, ctx.alternating)
    bad = cycle_defects(c, x.algebra)
    res.update({"N": N, "parity": "odd" if odd else "even",
                "defect_degrees": sorted(bad)})
    _check(asserts, "cycle", [], sorted(bad))


def _t_pair(task, ctx, res, asserts):
    x = ctx.elem(task["element"], task["id"])
    tau = _current(task["current"])
    route = task.get("route", "cw")
    P = x.algebra
    N = int(task.get("N", tau.degree // 2))
    odd = tau.degree % 2 == 1
    if route == "cw":
        forms = ch_cw_odd(x, N) if odd else ch_cw_even(x, N)
    elif route == "cq":
        c = ch_cq_odd(x, N) if odd else ch_cq_even(x, N, ctx.alternating)
        forms = mu_map(apply_scaling_c(c), P)
    else:
        raise ManifestError(f"{task['id']}: unknown route {route!r}")
    val = pair(forms, tau)
    res.update({"route": route, "value": encode_scalar(val), "forms": encode_forms(forms)})
    if "expect" in task:
        _check(asserts, "value", encode_scalar(_scalar(task["expect"])), encode_scalar(val))
    if task.get("expect_abs_one"):
        _check(asserts, "unit_integer", True, val in (1, -1))


def _t_compare(task, ctx, res, asserts):
    x = ctx.elem(task["element"], task["id"])
    tau = _current(task["current"])
    tau_cq = _current(task["current_cq"]) if "current_cq" in task else None
    rep = compare_cq_cw(x, tau, tau_cq, task.get("N"), ctx.alternating)
    res.update({"kind": rep.kind, "cq": encode_scalar(rep.cq_value),
                "cw": encode_scalar(rep.cw_value)})
    _check(asserts, "routes_agree", encode_scalar(rep.cw_value), encode_scalar(rep.cq_value))
    if "expect" in task:
        _check(asserts, "value", encode_scalar(_scalar(task["expect"])),
               encode_scalar(rep.cw_value))


def _t_wassermann(task, ctx, res, asserts):
    n = int(task["points"])
    G, perms = _group({"permutations": task["permutations"]})
    rep = wassermann_toy_check(permutation_action(G, n, perms), int(task.get("N", 3)))
    res.update({"hp0_invariant_subalgebra": rep.hp0_invariants, "orbits": rep.orbit_count,
                "fixed_in_hp0": rep.fixed_in_hp0})
    _check(asserts, "three_way_equality", True, rep.ok)


def _t_morita(task, ctx, res, asserts):
    A = ctx.alg(task["algebra"], task["id"])
    trunc = int(task.get("hp_truncation", 4))
    base = hp_dims(A, trunc)
    res["base"] = [base.even, base.odd]
    for n in task.get("sizes", [2]):
        M, _ = matrix_algebra(A, int(n))
        h = hp_dims(M, trunc)
        res[f"M{n}"] = [h.even, h.odd]
        _check(asserts, f"M{n}", [base.even, base.odd], [h.even, h.odd])


def _t_levi(task, ctx, res, asserts):
    blocks = [LeviBlock(int(b["points"]), [list(p) for p in b["permutations"]], int(b["size"]))
              for b in task["blocks"]]
    model = levi_block_model(blocks)
    pm = model.pairing_matrix(ctx.alternating)
    hp = hp_dims(model.algebra, int(task.get("hp_truncation", 4)))
    rank = model.ch_class_rank(int(task.get("N", 3)), ctx.alternating)
    res.update({"pairing_matrix": [[str(v) for v in row] for row in pm],
                "hp_dims": [hp.even, hp.odd], "orbit_total": model.orbit_total,
                "ch_class_rank": rank})
    _check(asserts, "permutation_matrix", True, _is_permutation(pm))
    _check(asserts, "hp0_equals_orbits", model.orbit_total, hp.even)
    _check(asserts, "ch_classes_span_hp0", hp.even, rank)


def _is_permutation(M) -> bool:
    n = len(M)
    if any(len(r) != n for r in M):
        return False
    if any(v not in (0, 1) for r in M for v in r):
        return False
    return all(sum(r) == 1 for r in M) and all(sum(M[i][j] for i in range(n)) == 1
                                               for j in range(n))


_TASKS = {
    "check-identities": _t_check_identities,
    "homology": _t_homology,
    "chern-even": lambda t, c, r, a: _t_chern(t, c, r, a, False),
    "chern-odd": lambda t, c, r, a: _t_chern(t, c, r, a, True),
    "verify-cycle": _t_verify_cycle,
    "pair": _t_pair,
    "compare-cw": _t_compare,
    "wassermann": _t_wassermann,
    "morita": _t_morita,
    "levi-model": _t_levi,
}


# -- running --------------------------------------------------------------------------

def run_manifest_data(data: dict, flags: RunFlags | None = None) -> dict:
    flags = flags or RunFlags()
    if not isinstance(data, dict):
        raise ManifestError("manifest must be a JSON object")
    if data.get("schema") != MANIFEST_SCHEMA:
        raise SchemaMismatch(f"expected schema {MANIFEST_SCHEMA!r}, got {data.get('schema')!r}")
    cap = flags.cap if flags.cap is not None else int(data.get("cap", DEFAULT_CAP))
    alternating = flags.alternating()
    if alternating is None and "sign_convention" in data:
        alternating = RunFlags(sign_convention=data["sign_convention"]).alternating()
    effective_sign = ALTERNATING_SIGN_DEFAULT if alternating is None else alternating

    algebras: dict = {}
    for name, conf in data.get("algebras", {}).items():
        algebras[name] = _build_algebra(name, conf, algebras)
    elements = {name: _build_element(name, conf, algebras)
                for name, conf in data.get("elements", {}).items()}
    ctx = _Ctx(algebras, elements, cap, alternating)

    tasks = data.get("tasks", [])
    ids = set()
    for k, t in enumerate(tasks):
        t.setdefault("id", f"task{k}")
        if t["id"] in ids:
            raise ManifestError(f"duplicate task id {t['id']!r}")
        ids.add(t["id"])
        if t.get("kind") not in _TASKS:
            raise ManifestError(f"task {t['id']}: unknown kind {t.get('kind')!r}")

    out_tasks = []
    for t in tasks:
        res: dict = {}
        asserts: list = []
        err = None
        t0 = time.perf_counter()
        try:
            _TASKS[t["kind"]](t, ctx, res, asserts)
        except Exception as exc:       # recorded; later tasks still run
            err = f"{type(exc).__name__}: {exc}"
        dt = time.perf_counter() - t0
        status = "error" if err else ("pass" if all(a["passed"] for a in asserts) else "fail")
        block = {"id": t["id"], "kind": t["kind"], "inputs": t, "results": res,
                 "assertions": asserts, "status": status,
                 "timing": {"milliseconds": str(round(dt * 1000))}}
        if err:
            block["error"] = err
        out_tasks.append(block)

    passed = sum(1 for b in out_tasks if b["status"] == "pass")
    return {"schema": REPORT_SCHEMA, "version": __version__,
            "settings": {"cap": cap, "sign_convention":
                         "alternating" if effective_sign else "plain"},
            "tasks": out_tasks,
            "summary": {"passed": passed, "failed": len(out_tasks) - passed,
                        "ok": passed == len(out_tasks)}}


def run_manifest(path, flags: RunFlags | None = None) -> dict:
    flags = flags or RunFlags()
    report = run_manifest_data(load_manifest(path), flags)
    if flags.output:
        Path(flags.output).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return report


def diff_reports(a: dict, b: dict) -> list:
    """Paths (and both values) where two reports differ; timing is ignored."""
    if a.get("schema") != b.get("schema"):
        raise SchemaMismatch(f"schema {a.get('schema')!r} vs {b.get('schema')!r}")
    out: list = []
    _diff(a, b, "", out)
    return out


def _diff(x, y, path, out):
    if isinstance(x, dict) and isinstance(y, dict):
        for k in sorted(set(x) | set(y), key=str):
            if k == "timing":
                continue
            p = f"{path}/{k}"
            if k not in x or k not in y:
                out.append({"path": p, "a": x.get(k), "b": y.get(k)})
            else:
                _diff(x[k], y[k], p, out)
    elif isinstance(x, list) and isinstance(y, list):
        if len(x) != len(y):
            out.append({"path": path, "a": f"length {len(x)}", "b": f"length {len(y)}"})
        for i, (u, v) in enumerate(zip(x, y)):
            _diff(u, v, f"{path}/{i}", out)
    elif x != y or type(x) is not type(y):
        out.append({"path": path, "a": x, "b": y})

