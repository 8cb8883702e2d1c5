"""Exact computations with concrete Cuntz semigroups."""
from .extnat import INF, ExtNatVec, NatMatrix
from .lsc import OpenSet, Space, StepFunction, chain_decompose, circle, closed_interval, open_interval, theta_graph
from .basis import Supernatural, epsilon_n, verify_axioms
from .metrics import SpectralMorphism, compare_spectral, dcu_distance, dd_distance
from .intertwining import IntertwiningData, InductiveSystem, check_two_sided, verify_iso
from .unitary import SpectrumMultiset, af_uniqueness_demo, classify_step

__version__ = "0.1.0"
