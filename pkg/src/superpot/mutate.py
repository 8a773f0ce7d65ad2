"""Chart changes between the Bl4 tori, built-in potentials and period checks.

A :class:`ChartMap` from chart ``A`` to chart ``B`` writes the coordinates of
``B`` as rational functions of the coordinates of ``A``; pulling a potential
on ``B`` back along it gives the potential on ``A``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from importlib import resources

from . import polys
from .critlocus import CriticalPoint, find_critical_points, rational_model
from .laurent import LaurentPoly, NotLaurent, RationalFunc, parse_rational
from .scalars import QQ, Field

# total Betti numbers of the ambient manifolds
BETTI = {
    "clifford1": 2,
    "clifford2": 3,
    "clifford3": 4,
    "quadric": 4,
    "bl4": 7,
    "cubic": 9,
}

_TEXTS = {
    "clifford1": ("x + 1/x", ["x"]),
    "clifford2": ("x + y + 1/(x*y)", ["x", "y"]),
    "clifford3": ("x + y + z + 1/(x*y*z)", ["x", "y", "z"]),
    "quadric": ("x + y + z + 1/(x*y) + 1/(y*z)", ["x", "y", "z"]),
    "bl4": ("(1+x+y)*(1+1/x)*(1+1/y) - 3", ["x", "y"]),
    "cubic": ("(1+x+y)^3/(x*y) - 6", ["x", "y"]),
}


def clifford(n: int, field: Field = QQ) -> LaurentPoly:
    names = [f"z{i + 1}" for i in range(n)]
    text = " + ".join(names) + " + 1/(" + "*".join(names) + ")"
    return LaurentPoly.parse(text, names, field)


def builtin(name: str, field: Field = QQ) -> LaurentPoly:
    """A named potential; ``bl4_<chart>`` gives Bl4 in one of the mutated charts."""
    if name.startswith("bl4_"):
        chart = name[4:]
        cat = load_catalog(field)
        return cat.potential(chart)
    if name.startswith("clifford") and name not in _TEXTS:
        return clifford(int(name[8:]), field)
    if name not in _TEXTS:
        raise KeyError(f"unknown potential {name!r}")
    text, names = _TEXTS[name]
    return LaurentPoly.parse(text, names, field)


def builtin_potentials(field: Field = QQ) -> dict:
    out = {name: builtin(name, field) for name in _TEXTS}
    cat = load_catalog(field)
    for chart in cat.charts:
        if chart != cat.base:
            out[f"bl4_{chart}"] = cat.potential(chart)
    return out


def betti(name: str):
    if name.startswith("bl4"):
        return BETTI["bl4"]
    if name.startswith("clifford") and name not in BETTI:
        return int(name[8:]) + 1
    return BETTI.get(name)


# ---------------------------------------------------------------------------
# chart maps


@dataclass
class ChartMap:
    """Coordinates of ``target`` as rational functions in those of ``source``."""

    source: str
    target: str
    images: list

    def __call__(self, point, field=None):
        return tuple(_eval(f, point, field) for f in self.images)


def _eval(f: RationalFunc, point, field=None):
    field = field or f.field
    d = polys.evaluate(f.den, point, field)
    if not d:
        raise ZeroDivisionError("chart map undefined at the point")
    return polys.evaluate(f.num, point, field) / d


def substitute_rational(f: RationalFunc, images, names) -> RationalFunc:
    """``f`` composed with rational ``images`` (in the variables ``names``)."""
    num = LaurentPoly(f.field, f.names, f.num).substitute(images, names)
    den = LaurentPoly(f.field, f.names, f.den).substitute(images, names)
    return num / den


def compose(outer: ChartMap, inner: ChartMap, names) -> ChartMap:
    """``outer ∘ inner``: ``inner.source -> inner.target = outer.source -> outer.target``."""
    if inner.target != outer.source:
        raise ValueError("maps do not compose")
    images = [substitute_rational(f, inner.images, names) for f in outer.images]
    return ChartMap(inner.source, outer.target, images)


def change_chart(W: LaurentPoly, m: ChartMap, names=None) -> LaurentPoly:
    """Pull ``W`` (in the target chart of ``m``) back to the source chart.

    Raises :class:`NotLaurent` when the result has a non-monomial denominator.
    """
    names = names or m.images[0].names
    return W.substitute(m.images, names).as_laurent()


@dataclass
class ChartCatalog:
    field: Field
    charts: dict
    display: dict
    base: str
    maps: dict = dc_field(default_factory=dict)  # (source, target) -> ChartMap
    base_potential: LaurentPoly | None = None

    def map(self, source, target) -> ChartMap:
        return self.maps[(source, target)]

    def potential(self, chart) -> LaurentPoly:
        if chart == self.base:
            return self.base_potential
        W = change_chart(self.base_potential, self.map(chart, self.base), self.charts[chart])
        return W

    def identity(self, chart):
        names = self.charts[chart]
        return [RationalFunc.variable(self.field, names, i) for i in range(len(names))]

    def to_json(self):
        rows = {}
        for (src, tgt), m in sorted(self.maps.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            rows.setdefault(tgt, {})[src] = [repr(f) for f in m.images]
        return {"charts": self.charts, "display": self.display, "base": self.base, "rows": rows}


def catalog_from_json(data, field: Field = QQ, base_potential=None) -> ChartCatalog:
    charts = {k: list(v) for k, v in data["charts"].items()}
    cat = ChartCatalog(field, charts, data.get("display", charts), data["base"])
    for target, row in data["rows"].items():
        for source, texts in row.items():
            names = charts[source]
            images = [parse_rational(t, names, field) for t in texts]
            cat.maps[(source, target)] = ChartMap(source, target, images)
    if base_potential is None:
        text, _ = _TEXTS["bl4"]
        base_potential = LaurentPoly.parse(text, charts[cat.base], field)
    cat.base_potential = base_potential
    return cat


_CATALOG_CACHE = {}


def load_catalog(field: Field = QQ) -> ChartCatalog:
    key = repr(field.spec())
    if key not in _CATALOG_CACHE:
        text = resources.files("superpot").joinpath("data/figure1.json").read_text()
        _CATALOG_CACHE[key] = catalog_from_json(json.loads(text), field)
    return _CATALOG_CACHE[key]


def verify_catalog(cat: ChartCatalog):
    """Check every row: all printed entries describe the same point.

    For a row ``B`` and entries from charts ``A`` and ``C`` we need
    ``φ(A->B) ∘ φ(C->A) = φ(C->B)``; with ``C = B`` this is the statement that
    ``φ(B->A)`` inverts ``φ(A->B)``.  Also every chart potential must be Laurent.
    Returns ``{"ok", "checks": [...], "failures": [...]}``.
    """
    checks = []
    for target in cat.charts:
        for mid in cat.charts:
            if mid == target or (mid, target) not in cat.maps:
                continue
            outer = cat.map(mid, target)
            for src in cat.charts:
                if src == mid or (src, mid) not in cat.maps:
                    continue
                inner = cat.map(src, mid)
                got = compose(outer, inner, cat.charts[src]).images
                want = cat.identity(src) if src == target else cat.map(src, target).images
                checks.append(
                    {
                        "row": target,
                        "via": mid,
                        "from": src,
                        "ok": list(got) == list(want),
                    }
                )
    for chart in cat.charts:
        try:
            cat.potential(chart)
            ok = True
        except NotLaurent:
            ok = False
        checks.append({"row": chart, "laurent": True, "ok": ok})
    failures = [c for c in checks if not c["ok"]]
    return {"ok": not failures, "checks": checks, "failures": failures}


# ---------------------------------------------------------------------------
# critical points across charts


@dataclass
class ChartPoint:
    chart: str
    point: CriticalPoint
    shared_with: list
    status: str  # "new" or "shared"

    def to_json(self, W):
        out = self.point.to_json(W)
        out["chart"] = self.chart
        out["status"] = self.status
        out["shared_with"] = list(self.shared_with)
        return out


def _visible_in(cat, source, target, Ws, K, WK_cache, coords):
    m = cat.map(source, target)
    try:
        image = m(coords, K)
    except ZeroDivisionError:
        return False
    if any(not c for c in image):
        return False  # lands off the torus
    key = (target, id(K))
    if key not in WK_cache:
        WK_cache[key] = Ws[target] if K is cat.field else Ws[target].map_coefficients(K)
    return WK_cache[key].is_critical(image)


def chart_points(cat: ChartCatalog, strategy="eigen"):
    """Critical points in every chart with their classification.

    A point is ``shared`` with each chart where its image is defined, lies on
    the torus and is critical; base-chart points count as shared with the base
    chart itself.  Points in other charts shared with no other chart are ``new``.
    """
    Ws = {c: cat.potential(c) for c in cat.charts}
    WK_cache = {}
    out = {}
    for chart, W in Ws.items():
        found = []
        for cp in find_critical_points(W, strategy):
            K, _, coords = rational_model(W, cp)
            shared = [chart] if chart == cat.base else []
            for other in cat.charts:
                if other != chart and _visible_in(cat, chart, other, Ws, K, WK_cache, coords):
                    shared.append(other)
            status = "shared" if shared else "new"
            found.append(ChartPoint(chart, cp, shared, status))
        out[chart] = found
    return out


def new_critical_points(cat: ChartCatalog, strategy="eigen"):
    pts = chart_points(cat, strategy)
    return {chart: [p for p in lst if p.status == "new"] for chart, lst in pts.items()}


def isolated_accounting(cat: ChartCatalog, strategy="eigen"):
    """Geometric count of isolated points: base chart plus one entry per new point."""
    pts = chart_points(cat, strategy)
    base = sum(p.point.residue_degree * p.point.milnor for p in pts[cat.base])
    new = sum(
        p.point.residue_degree * p.point.milnor
        for chart, lst in pts.items()
        if chart != cat.base
        for p in lst
        if p.status == "new"
    )
    return {"base": base, "new": new, "total": base + new}


def period_invariance(W1: LaurentPoly, W2: LaurentPoly, order: int) -> bool:
    if W1.n_vars != W2.n_vars:
        raise ValueError("potentials must have the same number of variables")
    return W1.periods(order) == W2.periods(order)
