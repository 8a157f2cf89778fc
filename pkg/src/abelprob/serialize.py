"""JSON encoders and validating loaders.

Loaders raise :class:`InputError` carrying a path to the offending field
(``dists[1].pmf[3]``), so command-line users can find the bad entry.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Sequence

from .cyclotomic import Cyclotomic, totient
from .distributions import CharFnTable, Distribution, IdempotentClassification, make_distribution
from .errors import AbelProbError
from .groups import Element, Group, Subgroup, make_group, subgroup_generate
from .independence import IndependenceReport, Witness
from .morphisms import FormSystem, Homomorphism, make_homomorphism


class InputError(AbelProbError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path or '<root>'}: {message}")
        self.path = path


def _at(path: str, key: object) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else str(key)


def _field(obj: Any, key: str, path: str) -> Any:
    if not isinstance(obj, dict):
        raise InputError(path, f"expected an object, got {type(obj).__name__}")
    if key not in obj:
        raise InputError(_at(path, key), "missing field")
    return obj[key]


def _list(obj: Any, path: str) -> list:
    if not isinstance(obj, list):
        raise InputError(path, f"expected a list, got {type(obj).__name__}")
    return obj


def _int(obj: Any, path: str) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise InputError(path, f"expected an integer, got {obj!r}")
    return obj


# -- encoders ---------------------------------------------------------------


def dump_value(v: object) -> Any:
    """Fractions as "num/den" strings, irrational values as power-basis coefficients."""
    if isinstance(v, Cyclotomic) and v.m != 1:
        return {"m": v.m, "coeffs": [str(c) for c in v.coeffs]}
    if isinstance(v, Cyclotomic):
        v = v.coeffs[0]
    return str(Fraction(v))


def dump_group(g: Group) -> dict:
    return {"moduli": list(g.moduli)}


def dump_element(x: Sequence[int]) -> list[int]:
    return [int(c) for c in x]


def dump_subgroup(h: Subgroup) -> dict:
    return {"generators": [dump_element(x) for x in h.generators], "order": h.order}


def dump_hom(h: Homomorphism) -> dict:
    return {"matrix": [list(r) for r in h.matrix]}


def dump_forms(fs: FormSystem) -> dict:
    return {"n": fs.n, "k": fs.k, "coeffs": [[[list(r) for r in h.matrix] for h in row] for row in fs.coeffs]}


def dump_distribution(d: Distribution) -> dict:
    return {"group": dump_group(d.group), "pmf": [dump_value(m) for m in d.masses]}


def dump_table(t: CharFnTable) -> dict:
    return {
        "group": dump_group(t.group),
        "values": [dump_value(v) for v in t.values],
        "float": [[round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0] for z in t.float_view],
    }


def dump_classification(c: IdempotentClassification) -> dict:
    out: dict[str, Any] = {"is_idempotent": c.is_idempotent}
    if c.is_idempotent:
        out["subgroup"] = dump_subgroup(c.subgroup)
        out["shift"] = dump_element(c.shift)
    return out


def dump_witness(w: Witness | None) -> Any:
    if w is None:
        return None
    return {"point": [dump_element(x) for x in w.point], "left": dump_value(w.left), "right": dump_value(w.right)}


def dump_report(r: IndependenceReport) -> dict:
    out: dict[str, Any] = {"independent": r.independent, "method": r.method}
    if r.witness is not None:
        out["witness"] = dump_witness(r.witness)
    return out


def dump_instance(group: Group, dists: Sequence[Distribution], fs: FormSystem) -> dict:
    """A bundle accepted by ``load_bundle`` and the check-independence command."""
    return {
        "group": dump_group(group),
        "dists": [{"pmf": [dump_value(m) for m in d.masses]} for d in dists],
        "forms": dump_forms(fs),
    }


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# -- loaders ----------------------------------------------------------------


def load_value(obj: Any, path: str) -> Fraction | Cyclotomic:
    if isinstance(obj, bool):
        raise InputError(path, f"expected a number, got {obj!r}")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        try:
            return Fraction(obj.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(path, f"cannot parse {obj!r} as a rational") from None
    if isinstance(obj, dict):
        m = _int(_field(obj, "m", path), _at(path, "m"))
        if m < 1:
            raise InputError(_at(path, "m"), "conductor must be positive")
        coeffs = _list(_field(obj, "coeffs", path), _at(path, "coeffs"))
        if len(coeffs) != totient(m):
            raise InputError(_at(path, "coeffs"), f"need {totient(m)} coefficients for m={m}, got {len(coeffs)}")
        vals = [load_value(c, _at(_at(path, "coeffs"), i)) for i, c in enumerate(coeffs)]
        if any(isinstance(v, Cyclotomic) for v in vals):
            raise InputError(_at(path, "coeffs"), "coefficients must be rational")
        out = Cyclotomic(m, vals)
        return out.coeffs[0] if out.m == 1 else out
    raise InputError(path, f"expected a rational string or cyclotomic object, got {type(obj).__name__}")


def parse_moduli(text: str, path: str = "group") -> Group:
    """Command-line shorthand: "2,4" is Z(2) x Z(4)."""
    try:
        mods = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(path, f"expected comma-separated moduli, got {text!r}") from None
    try:
        return make_group(mods)
    except AbelProbError as exc:
        raise InputError(path, str(exc)) from None


def load_group(obj: Any, path: str = "group") -> Group:
    if isinstance(obj, str):
        return parse_moduli(obj, path)
    mods = _list(_field(obj, "moduli", path), _at(path, "moduli"))
    vals = [_int(m, _at(_at(path, "moduli"), i)) for i, m in enumerate(mods)]
    try:
        return make_group(vals)
    except AbelProbError as exc:
        raise InputError(_at(path, "moduli"), str(exc)) from None


def load_element(obj: Any, group: Group, path: str) -> Element:
    vals = [_int(c, _at(path, i)) for i, c in enumerate(_list(obj, path))]
    if len(vals) != group.rank:
        raise InputError(path, f"element needs {group.rank} coordinates, got {len(vals)}")
    return group.validate(vals)


def load_subgroup(obj: Any, group: Group, path: str = "subgroup") -> Subgroup:
    gens = _list(_field(obj, "generators", path), _at(path, "generators"))
    return subgroup_generate(group, [load_element(x, group, _at(_at(path, "generators"), i)) for i, x in enumerate(gens)])


def load_hom(obj: Any, group: Group, path: str) -> Homomorphism:
    mat = _field(obj, "matrix", path) if isinstance(obj, dict) else obj
    mpath = _at(path, "matrix") if isinstance(obj, dict) else path
    rows = _list(mat, mpath)
    grid = [[_int(v, _at(_at(mpath, j), i)) for i, v in enumerate(_list(r, _at(mpath, j)))] for j, r in enumerate(rows)]
    try:
        return make_homomorphism(group, grid)
    except AbelProbError as exc:
        raise InputError(mpath, str(exc)) from None


def load_forms(obj: Any, group: Group, path: str = "forms") -> FormSystem:
    rows = _list(_field(obj, "coeffs", path), _at(path, "coeffs"))
    cpath = _at(path, "coeffs")
    grid = [
        tuple(load_hom(h, group, _at(_at(cpath, j), i)) for i, h in enumerate(_list(r, _at(cpath, j))))
        for j, r in enumerate(rows)
    ]
    if not grid or not grid[0]:
        raise InputError(cpath, "need at least one form with one coefficient")
    if len({len(r) for r in grid}) != 1:
        raise InputError(cpath, "every form needs the same number of coefficients")
    fs = FormSystem(group, tuple(grid))
    for key, val in (("n", fs.n), ("k", fs.k)):
        if key in obj and obj[key] != val:
            raise InputError(_at(path, key), f"declared {obj[key]!r} but coefficients give {val}")
    return fs


def load_distribution(obj: Any, group: Group | None = None, path: str = "") -> Distribution:
    if group is None or "group" in obj:
        g = load_group(_field(obj, "group", path), _at(path, "group"))
        if group is not None and g != group:
            raise InputError(_at(path, "group"), f"distribution group {g} differs from {group}")
        group = g
    pmf = _list(_field(obj, "pmf", path), _at(path, "pmf"))
    ppath = _at(path, "pmf")
    if len(pmf) != group.order:
        raise InputError(ppath, f"need {group.order} masses, got {len(pmf)}")
    masses = [load_value(v, _at(ppath, i)) for i, v in enumerate(pmf)]
    try:
        return make_distribution(group, masses)
    except AbelProbError as exc:
        raise InputError(ppath, str(exc)) from None


def load_bundle(obj: Any) -> tuple[Group, list[Distribution], FormSystem]:
    group = load_group(_field(obj, "group", ""), "group")
    dists = [
        load_distribution(d, group, _at("dists", i))
        for i, d in enumerate(_list(_field(obj, "dists", ""), "dists"))
    ]
    fs = load_forms(_field(obj, "forms", ""), group)
    if len(dists) != fs.n:
        raise InputError("dists", f"forms use {fs.n} variables but {len(dists)} distributions were given")
    return group, dists, fs


def load_json(text: str, path: str = "") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(path, f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
