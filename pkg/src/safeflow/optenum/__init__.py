"""Output-sensitive enumerators of maximal safe paths."""
from .forest import (MaxEdgeForest, build_extension_forests, left_extend, right_extend_i,
                     right_extend_o)
from .optrep import expand_all, expand_concise, expand_optimal, opt_rep, opt_rep_enumerate
from .trie import opt_concise, opt_raw_enumerate

__all__ = ["opt_raw_enumerate", "opt_concise", "opt_rep", "opt_rep_enumerate", "expand_optimal",
           "expand_all", "expand_concise", "build_extension_forests", "MaxEdgeForest",
           "left_extend", "right_extend_o", "right_extend_i"]
