"""Build and check dense 4-critical planar graphs from a diamond lattice and
contract-certified coloring gadgets."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("planar4crit")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.0.0+local"

from .assembly import GnHandle, build_gn, guaranteed_critical_edges, monochromatic_extension
from .coloring import chromatic_number, is_proper, solve
from .criticality import density_report, extract_4_critical, is_critical
from .gadgets import ContractId, build_gadget, verify_contract
from .graph import Graph, build_graph, parse, serialize
from .lattice import build_lattice, row_coloring, verify_endrow_transfer

__all__ = [
    "ContractId",
    "GnHandle",
    "Graph",
    "build_gadget",
    "build_gn",
    "build_graph",
    "build_lattice",
    "chromatic_number",
    "density_report",
    "extract_4_critical",
    "guaranteed_critical_edges",
    "is_critical",
    "is_proper",
    "monochromatic_extension",
    "parse",
    "row_coloring",
    "serialize",
    "solve",
    "verify_contract",
    "verify_endrow_transfer",
]
