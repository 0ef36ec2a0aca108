from .newick import parse_newick, serialize_newick, cluster_children
from .consensus import mrc_tree
from .encoding import EncodedChain, encode_chain
from .io import read_tree_file, read_log_density, load_chain, load_chains, write_chain

__all__ = [
    "parse_newick",
    "serialize_newick",
    "cluster_children",
    "mrc_tree",
    "EncodedChain",
    "encode_chain",
    "read_tree_file",
    "read_log_density",
    "load_chain",
    "load_chains",
    "write_chain",
]
