"""Exact arithmetic for Morava stabilizer groups and the K(1)-local sphere."""

from morava.padic import INF, CyclicDecomp, PadicInt, PadicParams, nu_p
from morava.witt import (
    DEFAULT_POLYS,
    Fq,
    FqElem,
    PrecisionError,
    WittElem,
    WittRing,
    fq_field,
    make_ring,
    teichmuller,
)
from morava.order import (
    OrderElem,
    SValuation,
    from_digits,
    from_int,
    from_json,
    from_witt,
    order_one,
    s_gen,
)
from morava.stabilizer import (
    GrElem,
    StabElem,
    commutator,
    element_order,
    filtration_level,
    gr_project,
    in_K,
    order3_element,
    reduced_norm,
    s1_split,
    torus_embed,
)
from morava.grlie import (
    abelianization_report,
    check_bracket_vs_group,
    check_power_vs_group,
    commutator_span,
    gr_bracket,
    gr_power,
    predicted_span,
    trace_kernel,
)
from morava.homalg import (
    CohomologyGroup,
    ZpModuleWithOperator,
    cyclic_cohomology,
    g1_cohomology_E1,
    iwasawa_cohomology,
)
from morava.specseq import (
    Chart,
    DifferentialRule,
    Monomial,
    Summand,
    apply_differentials,
    assemble_stems,
    collapse_check,
)
from morava.k1 import (
    HomotopyTable,
    homotopy_table,
    ko_table,
    psi_valuation_report,
    sphere_e2_page,
)

__all__ = [
    "INF",
    "CyclicDecomp",
    "PadicInt",
    "PadicParams",
    "nu_p",
    "DEFAULT_POLYS",
    "Fq",
    "FqElem",
    "PrecisionError",
    "WittElem",
    "WittRing",
    "fq_field",
    "make_ring",
    "teichmuller",
    "OrderElem",
    "SValuation",
    "from_digits",
    "from_int",
    "from_json",
    "from_witt",
    "order_one",
    "s_gen",
    "GrElem",
    "StabElem",
    "commutator",
    "element_order",
    "filtration_level",
    "gr_project",
    "in_K",
    "order3_element",
    "reduced_norm",
    "s1_split",
    "torus_embed",
    "abelianization_report",
    "check_bracket_vs_group",
    "check_power_vs_group",
    "commutator_span",
    "gr_bracket",
    "gr_power",
    "predicted_span",
    "trace_kernel",
    "CohomologyGroup",
    "ZpModuleWithOperator",
    "cyclic_cohomology",
    "g1_cohomology_E1",
    "iwasawa_cohomology",
    "Chart",
    "DifferentialRule",
    "Monomial",
    "Summand",
    "apply_differentials",
    "assemble_stems",
    "collapse_check",
    "HomotopyTable",
    "homotopy_table",
    "ko_table",
    "psi_valuation_report",
    "sphere_e2_page",
]
