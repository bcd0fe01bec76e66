"""Certificate-carrying checks on the BIT presentation of the Rado graph."""
from .core import (FinitePairUV, Kind, RadoError, ResourceExhausted, Verdict, adjacent, enumerate_pair, is_witness,
                   witness_direct)
from .views import (All, Base, Delete, Diff, Finite, FlipWithin, Inter, Nbhd, NonNbhdStrict, Restrict, Stream,
                    SymDiff, Switch, Union, WitnessSet, eval_adjacent, odd_parity, set_member, simplify)
from .backforth import PermTable, back, build_iso, forth, load_table, dump_table
from .classifiers import classify
from .constructions import CONSTRUCTIONS, ConstructionBundle
from .reports import RunConfig, inclusion_diagram, run_suite

__version__ = "0.1.0"

__all__ = [
    "FinitePairUV", "Kind", "RadoError", "ResourceExhausted", "Verdict", "adjacent", "enumerate_pair", "is_witness",
    "witness_direct", "All", "Base", "Delete", "Diff", "Finite", "FlipWithin", "Inter", "Nbhd", "NonNbhdStrict",
    "Restrict", "Stream", "SymDiff", "Switch", "Union", "WitnessSet", "eval_adjacent", "odd_parity", "set_member",
    "simplify", "PermTable", "back", "build_iso", "forth", "load_table", "dump_table", "classify", "CONSTRUCTIONS",
    "ConstructionBundle", "RunConfig", "inclusion_diagram", "run_suite",
]
