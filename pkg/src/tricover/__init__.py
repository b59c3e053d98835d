"""Edge-disjoint triangle packings and exact fractional triangle covers."""

from .charges import ChargeAssignment, Report, charge_order3, charge_order6, verify_cover
from .generators import InstanceSpec, generate
from .graph import (
    Graph,
    Triangle,
    build_graph,
    enumerate_triangles,
    format_edge_list,
    parse_edge_list,
    read_edge_list,
    triangles_on_edge,
    write_edge_list,
)
from .oracles import (
    OracleResult,
    compose_order_k,
    nu_exact,
    round_third_integral,
    tau_exact,
    tau_star_k_exact,
)
from .order2 import (
    build_chains,
    build_lend,
    check_demand_lemma,
    compute_demanding,
    compute_f_fix,
    discharge,
    discharge_and_pin,
    initial_half_charge,
    pin,
    run_order2,
)
from .packing import (
    Packing,
    SwapCertificate,
    greedy_packing,
    improve_packing,
    local_search_packing,
    targeted_swap,
    verify_packing,
    verify_swap,
)
from .pipeline import CoverResult, cover, cover_order2, certificate_obj, verify_certificate
from .structure import (
    SolutionStructure,
    StructureViolation,
    build_structure,
    check_structure,
    structure_debug_json,
    violation_to_focus,
)

__version__ = "0.1.0"

__all__ = [
    "ChargeAssignment",
    "CoverResult",
    "Graph",
    "InstanceSpec",
    "OracleResult",
    "Packing",
    "Report",
    "SolutionStructure",
    "StructureViolation",
    "SwapCertificate",
    "Triangle",
    "build_chains",
    "build_graph",
    "build_lend",
    "build_structure",
    "certificate_obj",
    "charge_order3",
    "charge_order6",
    "check_demand_lemma",
    "check_structure",
    "compose_order_k",
    "compute_demanding",
    "compute_f_fix",
    "cover",
    "cover_order2",
    "discharge",
    "discharge_and_pin",
    "enumerate_triangles",
    "format_edge_list",
    "generate",
    "greedy_packing",
    "improve_packing",
    "initial_half_charge",
    "local_search_packing",
    "nu_exact",
    "parse_edge_list",
    "pin",
    "read_edge_list",
    "round_third_integral",
    "run_order2",
    "structure_debug_json",
    "targeted_swap",
    "tau_exact",
    "tau_star_k_exact",
    "triangles_on_edge",
    "verify_certificate",
    "verify_cover",
    "verify_packing",
    "verify_swap",
    "violation_to_focus",
    "write_edge_list",
]
