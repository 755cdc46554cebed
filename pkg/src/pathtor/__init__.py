"""Path homology, Hodge Laplacians and torsion of finite digraphs."""

__version__ = "0.1.0"

from .chains import (Chain, ChainComplex, InnerProduct, boundary, cross_product,
                     inner_product, join_chains, omega_basis, staircases)
from .digraph import (Digraph, box_power, builtin, cartesian_product, join_digraph,
                      join_power, parse_digraph, random_digraph)
from .errors import (DigraphParseError, InvalidDigraph, NotInOmega, PathtorError,
                     UnsupportedInnerProduct)
from .paths import PathComplexDesc, allowed_paths, natural_dimension, simplicial_path_complex
from .spectral import (betti, euler, hodge_decompose, laplacian, pseudo_determinant,
                       spectral_summary, spectrum)
from .torsion import (Prediction, TorsionReport, analytic_torsion, normalized_from_standard,
                      predict_join, predict_power, predict_product, r_torsion,
                      standard_from_reduced, torsion_report)

__all__ = [
    "Chain",
    "ChainComplex",
    "Digraph",
    "DigraphParseError",
    "InnerProduct",
    "InvalidDigraph",
    "NotInOmega",
    "PathtorError",
    "Prediction",
    "TorsionReport",
    "UnsupportedInnerProduct",
    "PathComplexDesc",
    "allowed_paths",
    "analytic_torsion",
    "betti",
    "boundary",
    "box_power",
    "builtin",
    "cartesian_product",
    "cross_product",
    "euler",
    "hodge_decompose",
    "inner_product",
    "join_chains",
    "join_digraph",
    "join_power",
    "laplacian",
    "natural_dimension",
    "normalized_from_standard",
    "omega_basis",
    "parse_digraph",
    "predict_join",
    "predict_power",
    "predict_product",
    "pseudo_determinant",
    "r_torsion",
    "simplicial_path_complex",
    "random_digraph",
    "spectral_summary",
    "spectrum",
    "staircases",
    "standard_from_reduced",
    "torsion_report",
]
