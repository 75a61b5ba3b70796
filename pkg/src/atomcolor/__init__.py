"""Vertex coloring by column generation with interchangeable pricing
backends, including an emulated neutral-atom adiabatic sampler."""

from .colgen import RunTrace, gap_percent, run, warm_start_quantum, \
    warm_start_singletons
from .embedding import DeviceSpec, Redesign, Register
from .graphs import Graph, complement, gen_gnp, gen_unit_disk, \
    is_independent_set, line_graph
from .greedy import greedy_color
from .pricing import Column, PricerConfig, price, reduced_cost

__all__ = [
    "Graph", "gen_gnp", "gen_unit_disk", "complement", "line_graph",
    "is_independent_set", "Register", "DeviceSpec", "Redesign",
    "Column", "PricerConfig", "price", "reduced_cost",
    "RunTrace", "run", "warm_start_singletons", "warm_start_quantum",
    "gap_percent", "greedy_color",
]
