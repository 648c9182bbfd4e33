"""A small bigraded spectral sequence engine over one prime.

Charts hold cyclic summands at positions (s, t), labeled by monomials in
named classes with integer exponents (e.g. "2*zeta*u^-2").  Differentials
on page r go (s, t) -> (s + r, t + r - 1); a rule rewrites a source label
into its target label, the matched target is wiped out, and the source is
replaced by the kernel (order divided, label index multiplied).  Every
application is logged so a page turn is auditable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

from morava.padic import INF, CyclicDecomp

_NAME_RE = re.compile(r"^[a-z]+$")


@dataclass(frozen=True)
class Monomial:
    """index * prod(name^exp); exps is a sorted tuple of (name, exp)."""

    index: int = 1
    exps: tuple = ()

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("index must be a positive integer")
        seen = set()
        for name, e in self.exps:
            if not _NAME_RE.match(name):
                raise ValueError(f"bad class name {name!r}")
            if name in seen:
                raise ValueError(f"repeated class name {name!r}")
            if e == 0:
                raise ValueError("zero exponents must be dropped")
            seen.add(name)
        # u is the periodicity class; keep it last so labels read naturally
        ordered = sorted(self.exps, key=lambda pair: (pair[0] == "u", pair[0]))
        object.__setattr__(self, "exps", tuple(ordered))

    @staticmethod
    def parse(text: str) -> "Monomial":
        text = text.strip()
        if not text:
            raise ValueError("empty monomial")
        index = 1
        exps = []
        for tok in text.split("*"):
            tok = tok.strip()
            if not tok:
                raise ValueError(f"empty factor in {text!r}")
            if tok.lstrip("-").isdigit():
                index = index * int(tok)
                continue
            if "^" in tok:
                name, _, e = tok.partition("^")
                if not e.lstrip("-").isdigit():
                    raise ValueError(f"bad exponent in {tok!r}")
                exps.append((name, int(e)))
            else:
                exps.append((tok, 1))
        return Monomial(index, tuple(exps))

    def format(self) -> str:
        parts = [str(self.index)] if self.index != 1 or not self.exps else []
        for name, e in self.exps:
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    def exp(self, name: str) -> int:
        for nm, e in self.exps:
            if nm == name:
                return e
        return 0

    def core(self, without: str = "u") -> tuple:
        return tuple((nm, e) for nm, e in self.exps if nm != without)

    def with_exp(self, name: str, e: int) -> "Monomial":
        exps = [(nm, ex) for nm, ex in self.exps if nm != name]
        if e != 0:
            exps.append((name, e))
        return Monomial(self.index, tuple(exps))

    def scaled(self, m: int) -> "Monomial":
        return Monomial(self.index * m, self.exps)

    def __str__(self):
        return self.format()


@dataclass(frozen=True)
class Summand:
    """One cyclic summand: order (a prime power or INF) with its label."""

    order: object
    label: Monomial
    s: int
    t: int

    def __post_init__(self):
        if self.order != INF and (not isinstance(self.order, int) or self.order < 2):
            raise ValueError(f"order must be INF or an integer >= 2, got {self.order}")

    @property
    def stem(self) -> int:
        return self.t - self.s

    def describe(self) -> str:
        o = "Z_p" if self.order == INF else f"Z/{self.order}"
        return f"{o}[{self.label}]"


class Chart:
    """All summands of one page, addressable by (s, t)."""

    def __init__(self, page: int):
        self.page = page
        self.entries = {}
        self.log = []

    def add(self, summand: Summand) -> None:
        key = (summand.s, summand.t)
        cell = self.entries.get(key, ())
        if any(x.label == summand.label for x in cell):
            raise ValueError(f"duplicate label {summand.label} at {key}")
        self.entries[key] = cell + (summand,)

    def summands(self):
        for key in sorted(self.entries):
            yield from self.entries[key]

    def cell(self, s: int, t: int) -> tuple:
        return self.entries.get((s, t), ())

    def copy(self) -> "Chart":
        out = Chart(self.page)
        out.entries = dict(self.entries)
        out.log = list(self.log)
        return out

    def crop(self, s_max=None, t_min=None, t_max=None) -> "Chart":
        """Drop cells outside the window; used to cut boundary noise."""
        out = Chart(self.page)
        out.log = list(self.log)
        for (s, t), cell in self.entries.items():
            if s_max is not None and s > s_max:
                continue
            if t_min is not None and t < t_min:
                continue
            if t_max is not None and t > t_max:
                continue
            out.entries[(s, t)] = cell
        out.log.append(f"crop: s <= {s_max}, {t_min} <= t <= {t_max}")
        return out

    def to_json(self) -> dict:
        cells = []
        for (s, t) in sorted(self.entries):
            cells.append(
                {
                    "s": s,
                    "t": t,
                    "summands": [
                        {"order": "INF" if x.order == INF else x.order, "label": str(x.label)}
                        for x in self.entries[(s, t)]
                    ],
                }
            )
        return {"page": self.page, "cells": cells, "log": list(self.log)}

    def render_text(self) -> str:
        lines = [f"E_{self.page} page"]
        by_s = {}
        for (s, t) in sorted(self.entries):
            by_s.setdefault(s, []).append((s, t))
        for s in sorted(by_s, reverse=True):
            cells = []
            for key in by_s[s]:
                body = " + ".join(x.describe() for x in self.entries[key])
                cells.append(f"(s={key[0]},t={key[1]}) {body}")
            lines.append(f"s={s}: " + "; ".join(cells))
        return "\n".join(lines)


@dataclass(frozen=True)
class DifferentialRule:
    """Rewrite rule for one family of differentials on a page.

    Applies to summands whose label core (non-u part) equals source_core and
    whose u-exponent is u_res mod u_mod; the target label replaces the core
    and shifts the u-exponent by u_shift.
    """

    name: str
    source_core: tuple
    target_core: tuple
    u_shift: int
    u_mod: int = 1
    u_res: int = 0

    def matches(self, label: Monomial) -> bool:
        return (
            label.index == 1
            and label.core() == tuple(sorted(self.source_core))
            and label.exp("u") % self.u_mod == self.u_res % self.u_mod
        )

    def target_label(self, label: Monomial) -> Monomial:
        u = label.exp("u") + self.u_shift
        exps = tuple(self.target_core) + ((("u", u),) if u else ())
        return Monomial(1, exps)


def apply_differentials(chart: Chart, rules) -> Chart:
    """Turn the page: apply each rule's d_r with r = chart.page.

    All matches are found against the incoming page and then applied at
    once.  A matched target is removed; the source keeps its kernel (order
    divided by the target's order, label index multiplied by it; removed if
    nothing is left).  A source whose target cell has no matching label is
    logged and kept.
    """
    r = chart.page
    hits = []
    sources = set()
    targets = set()
    for (s, t), cell in chart.entries.items():
        for summand in cell:
            for rule in rules:
                if not rule.matches(summand.label):
                    continue
                tkey = (s + r, t + r - 1)
                tlabel = rule.target_label(summand.label)
                match = next(
                    (x for x in chart.entries.get(tkey, ()) if x.label == tlabel), None
                )
                if match is None:
                    chart.log.append(
                        f"d_{r} [{rule.name}] {summand.label} at (s={s},t={t}):"
                        f" no target {tlabel} at {tkey}; left in place"
                    )
                    continue
                hits.append((summand, match, rule))
                sources.add((s, t, summand.label))
                targets.add((tkey[0], tkey[1], tlabel))
                break
    overlap = sources & targets
    if overlap:
        raise ValueError(f"summand is both source and target on page {r}: {overlap}")

    out = chart.copy()
    out.page = r + 1
    for source, target, rule in hits:
        skey = (source.s, source.t)
        tkey = (target.s, target.t)
        out.entries[tkey] = tuple(x for x in out.entries[tkey] if x is not target)
        if not out.entries[tkey]:
            del out.entries[tkey]
        if source.order == INF:
            kernel = Summand(INF, source.label.scaled(target.order), source.s, source.t)
        else:
            if target.order == INF or source.order % target.order:
                raise ValueError(
                    f"inconsistent differential: {source.describe()} onto {target.describe()}"
                )
            q = source.order // target.order
            kernel = (
                Summand(q, source.label.scaled(target.order), source.s, source.t)
                if q > 1
                else None
            )
        cell = tuple(x for x in out.entries[skey] if x is not source)
        if kernel is not None:
            cell = cell + (kernel,)
        if cell:
            out.entries[skey] = cell
        else:
            del out.entries[skey]
        out.log.append(
            f"d_{r} [{rule.name}] {source.describe()} at (s={source.s},t={source.t})"
            f" kills {target.describe()} at (s={target.s},t={target.t})"
        )
    return out


def collapse_check(chart: Chart, r_from: int) -> bool:
    """True when no differential d_r, r >= r_from, can connect two cells."""
    keys = [k for k, cell in chart.entries.items() if cell]
    for (s1, t1) in keys:
        for (s2, t2) in keys:
            ds = s2 - s1
            if ds >= r_from and (t2 - t1) == ds - 1:
                return False
    return True


@dataclass(frozen=True)
class StemGroup:
    """The assembled abelian group in one stem."""

    stem: int
    decomp: CyclicDecomp
    labels: tuple
    joined: bool = False


def assemble_stems(chart: Chart, p: int, stems, extensions=None) -> dict:
    """Collapse a final page to homotopy groups, one per requested stem.

    extensions, when given, is {"modulus": m, "join": {residues}}: stems in
    those residue classes assemble as one cyclic group of the product order
    (the hidden extension), everything else as a direct sum.  Joining a free
    summand is refused.
    """
    by_stem = {}
    for x in chart.summands():
        by_stem.setdefault(x.stem, []).append(x)
    out = {}
    for i in stems:
        cell = by_stem.get(i, [])
        orders = [x.order for x in cell]
        labels = tuple(str(x.label) for x in cell)
        join = (
            extensions is not None
            and len(cell) > 1
            and i % extensions["modulus"] in extensions["join"]
        )
        if join:
            if INF in orders:
                raise ValueError(f"cannot join a free summand in stem {i}")
            prod = 1
            for o in orders:
                prod *= o
            out[i] = StemGroup(i, CyclicDecomp(p, [prod]), labels, joined=True)
        else:
            out[i] = StemGroup(i, CyclicDecomp(p, orders), labels)
    return out
