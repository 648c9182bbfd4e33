"""Height-one fixed point charts and their stem assembly.

The descent chart for the height-one stabilizer acting on the completed
K-theory line has two rows for odd primes and collapses immediately; at
p = 2 the central order-two subgroup contributes eta towers and a d_3
page turn with a hidden extension in stems 3 mod 8.  The KO-flavored
chart (the order-two subgroup alone) is built by the same engine.
"""

from __future__ import annotations

from dataclasses import dataclass

from morava.padic import INF, nu_p
from morava.homalg import g1_cohomology_E1
from morava.specseq import (
    Chart,
    DifferentialRule,
    Monomial,
    Summand,
    apply_differentials,
    assemble_stems,
    collapse_check,
)

# the p = 2 window: rows above KEEP only feed differentials, never stems
_S_BUILD = 14
_S_KEEP = 10
_T_MARGIN = 4


def sphere_label(p: int, s: int, t: int) -> Monomial:
    """Name the generator of the (s, t) chart cell for the sphere."""
    if s == 0:
        return Monomial.parse("1")
    if p != 2:
        base = (("zeta", 1),) if s == 1 else (("zeta", 1), ("eta", s - 1))
        return Monomial(1, base).with_exp("u", -t // 2)
    if s == 1:
        if t % 4 == 0:
            return Monomial(1, (("zeta", 1),)).with_exp("u", -t // 2)
        return Monomial(1, (("eta", 1),)).with_exp("u", (2 - t) // 2)
    if (t - 2 * s) % 4 == 0:
        return Monomial(1, (("eta", s),)).with_exp("u", (2 * s - t) // 2)
    return Monomial(1, (("zeta", 1), ("eta", s - 1))).with_exp("u", (2 * s - 2 - t) // 2)


def sphere_e2_page(p: int, s_max: int, t_lo: int, t_hi: int) -> Chart:
    """Descent chart of the sphere over the given window, page 2."""
    chart = Chart(2)
    for s in range(s_max + 1):
        for t in range(t_lo, t_hi + 1):
            if t % 2:
                continue
            orders = g1_cohomology_E1(p, s, t).decomp.orders
            if not orders:
                continue
            if len(orders) != 1:
                raise ValueError(f"chart cells must be cyclic, got {orders} at {(s, t)}")
            chart.add(Summand(orders[0], sphere_label(p, s, t), s, t))
    return chart


def sphere_d3_rules(s_max: int):
    """d_3 rewrites at p = 2: three more etas and two more powers of u.

    Only classes whose u-exponent is 2 mod 4 support the differential.  The
    bottom zeta tower feeds in with index one; its kernel keeps the label
    with a doubled index.
    """
    rules = []
    for a in range(1, s_max + 1):
        rules.append(
            DifferentialRule(
                name=f"eta^{a} tower",
                source_core=(("eta", a),),
                target_core=(("eta", a + 3),),
                u_shift=2,
                u_mod=4,
                u_res=2,
            )
        )
    for a in range(s_max + 1):
        source = (("zeta", 1),) if a == 0 else (("eta", a), ("zeta", 1))
        rules.append(
            DifferentialRule(
                name=f"zeta*eta^{a} tower",
                source_core=source,
                target_core=(("eta", a + 3), ("zeta", 1)),
                u_shift=2,
                u_mod=4,
                u_res=2,
            )
        )
    return rules


def ko_e2_page(s_max: int, t_lo: int, t_hi: int) -> Chart:
    """Fixed points of the order-two subgroup alone: the real K-theory chart."""
    chart = Chart(2)
    for s in range(s_max + 1):
        for t in range(t_lo, t_hi + 1):
            if t % 2 or (t - 2 * s) % 4:
                continue
            if s == 0:
                chart.add(Summand(INF, Monomial(1, (("u", -t // 2),) if t else ()), 0, t))
            else:
                label = Monomial(1, (("eta", s),)).with_exp("u", (2 * s - t) // 2)
                chart.add(Summand(2, label, s, t))
    return chart


def ko_d3_rules(s_max: int):
    rules = [
        DifferentialRule(
            name="u tower",
            source_core=(),
            target_core=(("eta", 3),),
            u_shift=2,
            u_mod=4,
            u_res=2,
        )
    ]
    for a in range(1, s_max + 1):
        rules.append(
            DifferentialRule(
                name=f"eta^{a} tower",
                source_core=(("eta", a),),
                target_core=(("eta", a + 3),),
                u_shift=2,
                u_mod=4,
                u_res=2,
            )
        )
    return rules


@dataclass(frozen=True)
class HomotopyTable:
    """Assembled stems of a collapsed chart, with the page they came from."""

    p: int
    groups: dict
    chart: Chart
    notes: tuple = ()

    def group(self, stem: int):
        return self.groups[stem]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "stems": {
                str(i): {
                    "group": str(g.decomp),
                    "labels": list(g.labels),
                    "joined": g.joined,
                }
                for i, g in sorted(self.groups.items())
            },
            "notes": list(self.notes),
        }

    def render_text(self) -> str:
        lines = []
        for i, g in sorted(self.groups.items()):
            body = str(g.decomp)
            if g.labels:
                body += "  <" + ", ".join(g.labels) + ">"
            if g.joined:
                body += "  (one cyclic group: hidden extension)"
            lines.append(f"pi_{i}: {body}")
        lines.extend(f"note: {note}" for note in self.notes)
        return "\n".join(lines)


def ko_table(stems) -> HomotopyTable:
    """Run the real K-theory chart through d_3 and read off the stems."""
    stems = sorted(stems)
    t_lo = stems[0] - _T_MARGIN
    t_hi = stems[-1] + _S_BUILD + _T_MARGIN
    chart = ko_e2_page(_S_BUILD, t_lo, t_hi)
    chart = apply_differentials(chart, [])
    chart = apply_differentials(chart, ko_d3_rules(_S_BUILD))
    chart = chart.crop(s_max=_S_KEEP, t_min=stems[0] - 1, t_max=stems[-1] + _S_KEEP + 1)
    if not collapse_check(chart, chart.page):
        raise ArithmeticError("chart does not collapse at page 4")
    groups = assemble_stems(chart, 2, stems)
    notes = ("d_3 doubles the u tower in stems 4 mod 8",)
    return HomotopyTable(2, groups, chart, notes)


def homotopy_table(p: int, stems) -> HomotopyTable:
    """Homotopy of the height-one local sphere on the requested stems."""
    stems = sorted(stems)
    if p == 2:
        t_lo = stems[0] - _T_MARGIN
        t_hi = stems[-1] + _S_BUILD + _T_MARGIN
        chart = sphere_e2_page(2, _S_BUILD, t_lo, t_hi)
        chart = apply_differentials(chart, [])
        chart = apply_differentials(chart, sphere_d3_rules(_S_BUILD))
        chart = chart.crop(
            s_max=_S_KEEP, t_min=stems[0] - 1, t_max=stems[-1] + _S_KEEP + 1
        )
        if not collapse_check(chart, chart.page):
            raise ArithmeticError("chart does not collapse at page 4")
        groups = assemble_stems(
            chart, 2, stems, extensions={"modulus": 8, "join": {3}}
        )
        notes = (
            "d_3 adds three etas and two powers of u where the u-exponent is 2 mod 4",
            "stems 3 mod 8 carry a hidden extension joining the two summands",
        )
        return HomotopyTable(2, groups, chart, notes)
    chart = sphere_e2_page(p, 1, stems[0] - 2, stems[-1] + 3)
    chart = apply_differentials(chart, [])
    if not collapse_check(chart, 2):
        raise ArithmeticError("two-row chart failed to collapse")
    groups = assemble_stems(chart, p, stems)
    notes = ("two rows only, so every differential vanishes and the chart collapses",)
    return HomotopyTable(p, groups, chart, notes)


@dataclass(frozen=True)
class ValuationReport:
    """Exact check of the unit-power valuation formula driving the zeta tower.

    unit_residues[t-1] is the cofactor ((p+1)^e - 1) / p^valuation reduced
    mod p; keeping the residue instead of the multi-kilobyte integer still
    witnesses that the valuation was exact.
    """

    p: int
    t_max: int
    formula: str
    checked: int
    max_valuation: int
    failures: tuple = ()
    unit_residues: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "t_max": self.t_max,
            "formula": self.formula,
            "checked": self.checked,
            "max_valuation": self.max_valuation,
            "failures": list(self.failures),
            "unit_samples": list(self.unit_residues[:16]),
            "ok": self.ok,
        }


def psi_valuation_report(p: int, t_max: int) -> ValuationReport:
    """Verify nu_p((p+1)^((p-1)t) - 1) = nu_p(t) + 1 on exact integers.

    At p = 2 the generator is 3 = p + 1 but squaring replaces the (p-1)
    power and the offset is 3: nu_2(3^(2t) - 1) = nu_2(t) + 3.  Powers are
    accumulated incrementally so each step is one big-integer multiply.
    """
    if t_max < 1:
        raise ValueError("t_max must be positive")
    offset = 3 if p == 2 else 1
    step = (p + 1) ** (2 if p == 2 else p - 1)
    if p == 2:
        formula = "nu_2(3^(2t) - 1) = nu_2(t) + 3"
    else:
        formula = f"nu_{p}({p + 1}^({p - 1}t) - 1) = nu_{p}(t) + 1"
    cur = 1
    failures = []
    residues = []
    max_val = 0
    for t in range(1, t_max + 1):
        cur *= step
        val = nu_p(cur - 1, p)
        max_val = max(max_val, val)
        residues.append((cur - 1) // p**val % p)
        if val != nu_p(t, p) + offset:
            failures.append((t, val))
    return ValuationReport(p, t_max, formula, t_max, max_val, tuple(failures), tuple(residues))
