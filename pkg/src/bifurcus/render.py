"""Serializers: SVG, CSV, JSON, and a Markdown walk-through of the construction.

All emitters are deterministic: the same diagram always produces the same
bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from xml.sax.saxutils import escape

import numpy as np

from .diagram import (
    DEGENERATE,
    STABLE,
    UNSTABLE,
    Asymptotes,
    BifurcationPoint,
    Branch,
    ConstantBranch,
    ConstantSegment,
    Decomposition,
    Diagram,
    Endpoint,
    PoleZeroSet,
    SignRegion,
)
from .expr import ParamAffineSystem
from .oracle import ComparisonReport
from .poly import Polynomial, RealRoot, RootSet

__all__ = [
    "RenderConfig",
    "to_svg",
    "to_csv",
    "to_json",
    "from_json",
    "diagram_from_json",
    "report_from_json",
    "step_trace",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = 1
CSV_HEADER = ("branch_id", "kind", "lambda", "x", "stability")

BRANCH_COLOR = "#1f4e9c"
CONSTANT_COLOR = "#8e44ad"
ASYMPTOTE_COLOR = "#999999"
DASHES = {STABLE: None, UNSTABLE: "6 4", DEGENERATE: "1.5 3", None: "1.5 3"}


@dataclass(frozen=True)
class RenderConfig:
    width: int = 640
    height: int = 480
    x_window: tuple[float, float] | None = None
    param_window: tuple[float, float] | None = None
    # consecutive drawn vertices closer than this (in pixels) are merged
    resolution_px: float = 0.5

    def __post_init__(self):
        if self.width < 100 or self.height < 100:
            raise ValueError("canvas must be at least 100x100 pixels")
        for w in (self.x_window, self.param_window):
            if w is not None and not w[1] > w[0]:
                raise ValueError(f"degenerate window {w!r}")


# ---------------------------------------------------------------------------
# SVG


def _fmt(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _tick_label(v: float) -> str:
    s = format(round(v, 10) + 0.0, "g")
    return s


def _ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9)
    ticks = []
    k = first
    while k * step <= hi + 1e-9 * step:
        ticks.append(k * step)
        k += 1
    return ticks


def _symbol(name: str) -> str:
    return {"lambda": "λ", "mu": "μ"}.get(name, name)


class _Frame:
    left, right, top, bottom = 64, 16, 16, 48

    def __init__(self, cfg: RenderConfig, pwin, xwin):
        self.w, self.h = cfg.width, cfg.height
        self.pwin, self.xwin = pwin, xwin
        self.pw = self.w - self.left - self.right
        self.ph = self.h - self.top - self.bottom

    def px(self, p):
        lo, hi = self.pwin
        return self.left + (np.asarray(p, dtype=float) - lo) / (hi - lo) * self.pw

    def py(self, x):
        lo, hi = self.xwin
        return self.top + (hi - np.asarray(x, dtype=float)) / (hi - lo) * self.ph


def _decimate(xs: np.ndarray, ys: np.ndarray, res: float) -> list[tuple[float, float]]:
    pts = [(float(xs[0]), float(ys[0]))]
    for x, y in zip(xs[1:-1], ys[1:-1]):
        lx, ly = pts[-1]
        if math.hypot(x - lx, y - ly) >= res:
            pts.append((float(x), float(y)))
    if len(xs) > 1:
        pts.append((float(xs[-1]), float(ys[-1])))
    return pts


def _path(pts) -> str:
    head, *rest = pts
    d = f"M{_fmt(head[0])},{_fmt(head[1])}"
    return d + "".join(f" L{_fmt(x)},{_fmt(y)}" for x, y in rest)


def _stroke_attrs(color: str, stability, width: float = 1.75) -> str:
    attrs = f'fill="none" stroke="{color}" stroke-width="{width}"'
    dash = DASHES.get(stability)
    if dash:
        attrs += f' stroke-dasharray="{dash}"'
    return attrs


def _has_content(diagram: Diagram, pwin, xwin) -> bool:
    (plo, phi), (xlo, xhi) = pwin, xwin
    for b in diagram.branches:
        inside = (b.param >= plo) & (b.param <= phi) & (b.x >= xlo) & (b.x <= xhi)
        if inside.any():
            return True
    for c in diagram.constant_branches:
        if xlo <= c.x <= xhi and any(s.hi >= plo and s.lo <= phi for s in c.segments):
            return True
    return False


def to_svg(diagram: Diagram, config: RenderConfig | None = None) -> str:
    """Render the diagram with the parameter across and the state up."""
    cfg = config or RenderConfig()
    pwin = cfg.param_window or diagram.param_window
    xwin = cfg.x_window or diagram.x_window
    fr = _Frame(cfg, pwin, xwin)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{fr.w}" '
        f'height="{fr.h}" viewBox="0 0 {fr.w} {fr.h}" font-family="sans-serif" font-size="11">',
        f"<title>{escape(diagram.metadata.get('expression', diagram.system.to_text()))}</title>",
        "<defs>",
        f'<clipPath id="plot-area"><rect x="{fr.left}" y="{fr.top}" '
        f'width="{fr.pw}" height="{fr.ph}"/></clipPath>',
        "</defs>",
        f'<rect x="0" y="0" width="{fr.w}" height="{fr.h}" fill="white"/>',
    ]
    out += _axes(fr, diagram)

    out.append('<g clip-path="url(#plot-area)">')
    out += _asymptotes(fr, diagram)
    for c in diagram.constant_branches:
        out.append(f'<g class="constant" id="{escape(c.id)}">')
        for s in c.segments:
            y = _fmt(float(fr.py(c.x)))
            out.append(
                f'<line class="segment {s.stability or "unlabeled"}" x1="{_fmt(float(fr.px(s.lo)))}" '
                f'y1="{y}" x2="{_fmt(float(fr.px(s.hi)))}" y2="{y}" '
                f"{_stroke_attrs(CONSTANT_COLOR, s.stability)}/>"
            )
        out.append("</g>")
    for b in diagram.branches:
        pts = _decimate(fr.px(b.param), fr.py(b.x), cfg.resolution_px)
        if len(pts) == 1:
            pts = pts * 2
        out.append(
            f'<path class="branch {b.stability or "unlabeled"}" id="{escape(b.id)}" '
            f'd="{_path(pts)}" {_stroke_attrs(BRANCH_COLOR, b.stability)}/>'
        )
    for p in diagram.bifurcations:
        out.append(
            f'<circle class="bifurcation {p.kind}" cx="{_fmt(float(fr.px(p.param)))}" '
            f'cy="{_fmt(float(fr.py(p.x)))}" r="4" fill="black" stroke="white" stroke-width="1">'
            f"<title>{p.kind} at ({_tick_label(p.param)}, {_tick_label(p.x)})</title></circle>"
        )
    out.append("</g>")

    empty = not diagram.branches and not diagram.constant_branches
    if not empty and not _has_content(diagram, pwin, xwin):
        out.append(
            f'<text class="warning" x="{fr.left + fr.pw / 2:.2f}" y="{fr.top + fr.ph / 2:.2f}" '
            'text-anchor="middle" fill="#b03a2e">no diagram content inside the plotting window</text>'
        )
    out += _legend(fr)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _axes(fr: _Frame, diagram: Diagram) -> list[str]:
    x0, y0 = fr.left, fr.top + fr.ph
    out = ['<g class="axes" stroke="black" stroke-width="1">',
           f'<rect x="{fr.left}" y="{fr.top}" width="{fr.pw}" height="{fr.ph}" fill="none"/>']
    labels = []
    for t in _ticks(*fr.pwin):
        x = _fmt(float(fr.px(t)))
        out.append(f'<line x1="{x}" y1="{y0}" x2="{x}" y2="{y0 + 5}"/>')
        labels.append(f'<text x="{x}" y="{y0 + 17}" text-anchor="middle">{_tick_label(t)}</text>')
    for t in _ticks(*fr.xwin):
        y = _fmt(float(fr.py(t)))
        out.append(f'<line x1="{x0 - 5}" y1="{y}" x2="{x0}" y2="{y}"/>')
        labels.append(f'<text x="{x0 - 8}" y="{y}" text-anchor="end" dy="0.35em">{_tick_label(t)}</text>')
    out.append("</g>")
    out.append('<g class="tick-labels">')
    out += labels
    out.append("</g>")
    horiz = diagram.system.param if diagram.horizontal == "lambda" else "mu"
    out.append(
        f'<text class="axis-label" x="{fr.left + fr.pw / 2:.2f}" y="{fr.h - 10}" '
        f'text-anchor="middle">{escape(_symbol(horiz))}</text>'
    )
    out.append(
        f'<text class="axis-label" x="14" y="{fr.top + fr.ph / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 14 {fr.top + fr.ph / 2:.2f})">{escape(diagram.system.state)}</text>'
    )
    return out


def _asymptotes(fr: _Frame, diagram: Diagram) -> list[str]:
    out = ['<g class="asymptotes">']
    style = f'stroke="{ASYMPTOTE_COLOR}" stroke-width="0.75"'
    v = diagram.asymptotes.vertical
    if v is not None:
        x = _fmt(float(fr.px(v)))
        out.append(f'<line class="vertical" x1="{x}" y1="{fr.top}" x2="{x}" y2="{fr.top + fr.ph}" {style}/>')
    for z in diagram.asymptotes.horizontal:
        y = _fmt(float(fr.py(z)))
        out.append(f'<line class="horizontal" x1="{fr.left}" y1="{y}" x2="{fr.left + fr.pw}" y2="{y}" {style}/>')
    out.append("</g>")
    return out


def _legend(fr: _Frame) -> list[str]:
    entries = [
        ("stable", BRANCH_COLOR, STABLE),
        ("unstable", BRANCH_COLOR, UNSTABLE),
        ("degenerate", BRANCH_COLOR, DEGENERATE),
        ("constant branch", CONSTANT_COLOR, STABLE),
        ("asymptote", ASYMPTOTE_COLOR, STABLE),
    ]
    w, row = 144, 16
    x = fr.left + fr.pw - w - 6
    y = fr.top + 6
    out = ['<g class="legend">',
           f'<rect x="{x}" y="{y}" width="{w}" height="{row * (len(entries) + 1) + 4}" '
           'fill="white" fill-opacity="0.85" stroke="#cccccc"/>']
    for i, (name, color, stab) in enumerate(entries):
        yy = y + 12 + i * row
        width = 0.75 if name == "asymptote" else 1.75
        out.append(f'<line x1="{x + 8}" y1="{yy}" x2="{x + 36}" y2="{yy}" {_stroke_attrs(color, stab, width)}/>')
        out.append(f'<text x="{x + 44}" y="{yy}" dy="0.35em">{name}</text>')
    yy = y + 12 + len(entries) * row
    out.append(f'<circle cx="{x + 22}" cy="{yy}" r="4" fill="black"/>')
    out.append(f'<text x="{x + 44}" y="{yy}" dy="0.35em">bifurcation</text>')
    out.append("</g>")
    return out


# ---------------------------------------------------------------------------
# CSV


def _g17(v: float) -> str:
    return format(float(v) + 0.0, ".17g")


def to_csv(diagram: Diagram) -> str:
    """One row per sample, traced branches first, each ordered by parameter."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(CSV_HEADER)
    for b in diagram.branches:
        order = np.argsort(b.param, kind="stable")
        for i in order:
            w.writerow((b.id, "branch", _g17(b.param[i]), _g17(b.x[i]), b.stability or ""))
    for c in diagram.constant_branches:
        for s in c.segments:
            for p in (s.lo, s.hi):
                w.writerow((c.id, "constant", _g17(p), _g17(c.x), s.stability or ""))
    return buf.getvalue()


# ---------------------------------------------------------------------------
# JSON


def _poly_out(p: Polynomial) -> list[str]:
    return [str(c) for c in p.coeffs]


def _poly_in(cs) -> Polynomial:
    return Polynomial(Fraction(c) for c in cs)


def _roots_out(rs: RootSet) -> list[dict]:
    return [{"x": r.value, "multiplicity": r.multiplicity, "lo": str(r.lo), "hi": str(r.hi)} for r in rs]


def _roots_in(items) -> RootSet:
    return RootSet(RealRoot(float(r["x"]), int(r["multiplicity"]), Fraction(r["lo"]), Fraction(r["hi"]))
                   for r in items)


def _finite_or_null(v):
    return None if v is None or math.isinf(v) else v


def _endpoint_out(e: Endpoint) -> dict:
    return {"kind": e.kind, "lambda": e.param, "x": e.x}


def _diagram_doc(d: Diagram) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "diagram",
        "system": {
            "state": d.system.state,
            "param": d.system.param,
            "source": d.system.source,
            "f": _poly_out(d.system.f),
            "g": _poly_out(d.system.g),
        },
        "decomposition": {
            "h": _poly_out(d.decomposition.h),
            "f1": _poly_out(d.decomposition.f1),
            "g1": _poly_out(d.decomposition.g1),
            "sign": d.decomposition.sign,
            "mu_is_minus_lambda": d.decomposition.mu_is_minus_lambda,
        },
        "poles": _roots_out(d.poles_zeros.poles),
        "zeros": _roots_out(d.poles_zeros.zeros),
        "sign_regions": [
            {"lo": _finite_or_null(r.lo), "hi": _finite_or_null(r.hi),
             "mu_sign": r.mu_sign, "count_above": r.count_above}
            for r in d.sign_regions
        ],
        "asymptotes": {"vertical": d.asymptotes.vertical, "horizontal": list(d.asymptotes.horizontal)},
        "horizontal": d.horizontal,
        "x_window": list(d.x_window),
        "param_window": list(d.param_window),
        "domain_min": d.domain_min,
        "branches": [
            {
                "id": b.id,
                "slope_sign": b.slope_sign,
                "stability": b.stability,
                "start": _endpoint_out(b.start),
                "end": _endpoint_out(b.end),
                "lambda": [float(v) for v in b.param],
                "x": [float(v) for v in b.x],
            }
            for b in d.branches
        ],
        "constant_branches": [
            {
                "id": c.id,
                "x": c.x,
                "multiplicity": c.multiplicity,
                "segments": [{"lo": s.lo, "hi": s.hi, "stability": s.stability} for s in c.segments],
            }
            for c in d.constant_branches
        ],
        "bifurcation_points": [
            {"kind": p.kind, "lambda": p.param, "x": p.x, "branches": list(p.branches)}
            for p in d.bifurcations
        ],
        "metadata": d.metadata,
    }


def _report_doc(r: ComparisonReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "comparison_report",
        "passed": r.passed,
        "tolerance": r.tolerance,
        "max_hausdorff": r.max_hausdorff,
        "max_hausdorff_checked": r.max_hausdorff_checked,
        "worst_lambda": r.worst_lambda,
        "stability_mismatches": r.stability_mismatches,
        "missing": r.missing,
        "extra": r.extra,
        "grid": list(r.grid),
        "distances": [list(d) for d in r.distances],
        "exempt": list(r.exempt),
        "mismatch_details": r.mismatch_details,
    }


def to_json(obj: Diagram | ComparisonReport) -> str:
    if isinstance(obj, Diagram):
        doc = _diagram_doc(obj)
    elif isinstance(obj, ComparisonReport):
        doc = _report_doc(obj)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return json.dumps(doc, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _endpoint_in(e) -> Endpoint:
    return Endpoint(e["kind"], float(e["lambda"]), float(e["x"]))


def _check_version(doc, kind):
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
    if doc.get("kind") != kind:
        raise ValueError(f"expected a {kind} document, got {doc.get('kind')!r}")


def diagram_from_json(text: str) -> Diagram:
    doc = json.loads(text)
    _check_version(doc, "diagram")
    s, dec = doc["system"], doc["decomposition"]
    system = ParamAffineSystem(s["state"], s["param"], _poly_in(s["f"]), _poly_in(s["g"]), s["source"])
    return Diagram(
        system=system,
        decomposition=Decomposition(_poly_in(dec["h"]), _poly_in(dec["f1"]), _poly_in(dec["g1"]),
                                    int(dec["sign"]), bool(dec["mu_is_minus_lambda"])),
        poles_zeros=PoleZeroSet(_roots_in(doc["poles"]), _roots_in(doc["zeros"])),
        sign_regions=tuple(
            SignRegion(-math.inf if r["lo"] is None else r["lo"],
                       math.inf if r["hi"] is None else r["hi"],
                       r["mu_sign"], r["count_above"])
            for r in doc["sign_regions"]
        ),
        asymptotes=Asymptotes(doc["asymptotes"]["vertical"], tuple(doc["asymptotes"]["horizontal"])),
        branches=[
            Branch(b["id"], np.array(b["lambda"], dtype=float), np.array(b["x"], dtype=float),
                   b["slope_sign"], _endpoint_in(b["start"]), _endpoint_in(b["end"]), b["stability"])
            for b in doc["branches"]
        ],
        constant_branches=[
            ConstantBranch(c["id"], c["x"], c["multiplicity"],
                           tuple(ConstantSegment(s["lo"], s["hi"], s["stability"]) for s in c["segments"]))
            for c in doc["constant_branches"]
        ],
        bifurcations=[
            BifurcationPoint(p["lambda"], p["x"], p["kind"], tuple(p["branches"]))
            for p in doc["bifurcation_points"]
        ],
        x_window=tuple(doc["x_window"]),
        param_window=tuple(doc["param_window"]),
        horizontal=doc["horizontal"],
        domain_min=doc["domain_min"],
        metadata=doc["metadata"],
    )


def report_from_json(text: str) -> ComparisonReport:
    doc = json.loads(text)
    _check_version(doc, "comparison_report")
    return ComparisonReport(
        grid=doc["grid"],
        distances=[tuple(d) for d in doc["distances"]],
        exempt=doc["exempt"],
        max_hausdorff=doc["max_hausdorff"],
        max_hausdorff_checked=doc["max_hausdorff_checked"],
        worst_lambda=doc["worst_lambda"],
        stability_mismatches=doc["stability_mismatches"],
        missing=doc["missing"],
        extra=doc["extra"],
        tolerance=doc["tolerance"],
        mismatch_details=doc["mismatch_details"],
    )


def from_json(text: str) -> Diagram | ComparisonReport:
    kind = json.loads(text).get("kind")
    if kind == "comparison_report":
        return report_from_json(text)
    return diagram_from_json(text)


# ---------------------------------------------------------------------------
# step trace

_WORDS = ["no", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"]


def _count(n: int, noun: str) -> str:
    word = _WORDS[n] if n < len(_WORDS) else str(n)
    return f"{word} {noun}" if n == 1 else f"{word} {noun}s"


def _num(v: float) -> str:
    if math.isinf(v):
        return "+∞" if v > 0 else "−∞"
    s = format(round(v, 6) + 0.0, "g")
    return s.replace("-", "−")


def _points(rs: RootSet, state: str) -> str:
    vals = []
    for r in rs:
        v = _num(r.value)
        if r.multiplicity > 1 and len(rs) > 1:
            v += f" (×{r.multiplicity})"
        vals.append(v)
    return f"{state}=" + ", ".join(vals)


def _pz_phrase(rs: RootSet, noun: str, state: str) -> str:
    n = rs.total_multiplicity()
    if not n:
        return f"no {noun}s"
    return f"{_count(n, noun)} at {_points(rs, state)}"


def _mu_relation(diagram: Diagram) -> str:
    lam = _symbol(diagram.system.param)
    return f"μ=−{lam}" if diagram.decomposition.mu_is_minus_lambda else f"μ={lam}"


def _asymptote_phrase(diagram: Diagram) -> str:
    v = diagram.asymptotes.vertical
    st = diagram.system.state
    first = "no finite vertical asymptote" if v is None else f"vertical asymptote at μ={_num(diagram.decomposition.to_mu(v) if diagram.horizontal == 'lambda' else v)}"
    zs = [z.value for z in diagram.poles_zeros.zeros]
    if not zs:
        second = "no horizontal asymptote"
    elif len(zs) == 1:
        second = f"horizontal asymptote {st}={_num(zs[0])}"
    else:
        second = "horizontal asymptotes " + ", ".join(f"{st}={_num(z)}" for z in zs)
    return f"{first}; {second}"


def step_trace(diagram: Diagram, report: ComparisonReport | None = None) -> str:
    """Markdown account of each construction step for ``diagram``."""
    d = diagram.decomposition
    st = diagram.system.state
    lam = _symbol(diagram.system.param)
    h_roots = [c for c in diagram.constant_branches]
    if h_roots:
        const = ("constant root" if len(h_roots) == 1 else "constant roots") + f" at {st}=" + ", ".join(
            _num(c.x) for c in h_roots)
    else:
        const = "no constant root"
    summary = ", ".join([
        _pz_phrase(diagram.poles_zeros.poles, "pole", st),
        _pz_phrase(diagram.poles_zeros.zeros, "zero", st),
        const,
        _mu_relation(diagram),
    ])
    to_mu = (lambda p: d.to_mu(p)) if diagram.horizontal == "lambda" else (lambda p: p)

    lines = [f"# Bifurcation diagram of `{diagram.metadata.get('expression', diagram.system.to_text())}`", ""]
    lines += [
        "## Step 1: locus form",
        "",
        f"- f({st}) = `{diagram.system.f.to_text(st)}`",
        f"- g({st}) = `{diagram.system.g.to_text(st)}`",
        f"- h({st}) = `{d.h.to_text(st)}`, f1({st}) = `{d.f1.to_text(st)}`, g1({st}) = `{d.g1.to_text(st)}`",
        f"- locus: h·(f1 + μ·g1) = 0 with {_mu_relation(diagram)}",
        f"- {summary}",
        "",
        "## Step 2: sign of μ along the state axis",
        "",
        "| interval | poles+zeros above | μ |",
        "|---|---|---|",
    ]
    for r in diagram.sign_regions:
        lines.append(f"| ({_num(r.lo)}, {_num(r.hi)}) | {r.count_above} | {'> 0' if r.mu_sign > 0 else '< 0'} |")
    v = diagram.asymptotes.vertical
    lines += [
        "",
        "## Steps 3 and 4: asymptotes",
        "",
        f"- {_asymptote_phrase(diagram)}",
    ]
    if v is not None:
        lines.append(f"- in {lam} coordinates the vertical asymptote sits at {lam}={_num(v)}")
    hidden = [z.value for z in diagram.poles_zeros.zeros if z.value not in diagram.asymptotes.horizontal]
    if hidden:
        lines.append("- outside the plotted window: " + ", ".join(f"{st}={_num(z)}" for z in hidden))
    lines += [
        "",
        "## Step 5: branches of μ(" + st + ") = −f1/g1",
        "",
        f"| branch | {st} range | μ range | slope | starts at | ends at |",
        "|---|---|---|---|---|---|",
    ]
    for b in diagram.branches:
        mus = [to_mu(float(b.param[0])), to_mu(float(b.param[-1]))]
        slope = {1: "+", -1: "−", 0: "0"}[b.slope_sign if diagram.horizontal == "mu" or not d.mu_is_minus_lambda else -b.slope_sign]
        lines.append(
            f"| {b.id} | [{_num(float(b.x[0]))}, {_num(float(b.x[-1]))}] | "
            f"[{_num(min(mus))}, {_num(max(mus))}] | {slope} | {b.start.kind} | {b.end.kind} |"
        )
    if not diagram.branches:
        lines.append("| (none) | | | | | |")
    lines += ["", "## Step 6: constant branches", ""]
    if h_roots:
        for c in h_roots:
            lines.append(f"- {c.id}: {st}={_num(c.x)} (multiplicity {c.multiplicity}), independent of {lam}")
    else:
        lines.append(f"- none: h({st}) has no real roots in the window")
    lines += ["", "## Step 7: parameter orientation", ""]
    if d.mu_is_minus_lambda:
        lines.append(f"- {_mu_relation(diagram)}: the diagram is flipped horizontally")
    else:
        lines.append(f"- {_mu_relation(diagram)}: no flip")
    lines += ["", "## Step 8: stability", ""]
    lines.append(f"- labels alternate downward from the top equilibrium in each {lam} column")
    for b in diagram.branches:
        lines.append(f"- {b.id}: {b.stability or 'unlabeled'}")
    for c in h_roots:
        for s in c.segments:
            lines.append(f"- {c.id} on [{_num(s.lo)}, {_num(s.hi)}]: {s.stability or 'unlabeled'}")
    if diagram.bifurcations:
        lines += ["", "Bifurcation points:", ""]
        for p in diagram.bifurcations:
            lines.append(f"- {p.kind} at ({lam}, {st}) = ({_num(p.param)}, {_num(p.x)})")
    else:
        lines += ["", "No bifurcation points in the window."]
    amb = diagram.metadata.get("ambiguous") or []
    if amb:
        lines.append(f"- ambiguous column votes on: {', '.join(amb)}")
    dis = diagram.metadata.get("stability_disagreements") or []
    if dis:
        lines.append(f"- derivative labels disagree on: {', '.join(dis)}")
    if report is not None:
        lines += [
            "",
            "## Oracle check",
            "",
            f"- columns: {len(report.grid)}, max Hausdorff distance {report.max_hausdorff_checked:.3g} "
            f"outside bifurcation neighbourhoods ({report.max_hausdorff:.3g} overall)",
            f"- stability mismatches: {report.stability_mismatches}, missing: {report.missing}, "
            f"extra: {report.extra}",
            f"- result: {'pass' if report.passed else 'FAIL'}",
        ]
    return "\n".join(lines) + "\n"
