"""Fault masking analysis of TMR majority voters."""
from .dsl import ParseError, parse, serialize
from .errors import DomainError, NetlistError, TmrError, UsageError
from .faults import (EnumerationRow, ExternalFaultLabel, FaultDirection, FaultScenario,
                     InjectionSemantics, RowState, apply_scenario, enumerate_rows,
                     fault_free_internal, tally)
from .metrics import (FmrReport, MetricsEntry, ReliabilityPoint, fmr, ft_fom, rank,
                      reliability_curve, tmr_reliability)
from .netlist import Gate, GateKind, Netlist, evaluate, internal_nodes, truth_table, validate
from .report import emit_analysis, emit_curve, emit_ranking, emit_table
from .voters import VOTER_NAMES, builtin

__version__ = "0.1.0"
