from .parser import ParseError, parse_map, parse_poly
from .poly import Poly, PolyMap, compose, evaluate, shape_predicates, specialize
from .words import (A, E, J, R, S, T, AutWord, WordError, epsilon, parse_word, serialize_word,
                    uses_only, word_to_map)

__all__ = [
    "A", "E", "J", "R", "S", "T", "AutWord", "ParseError", "Poly", "PolyMap", "WordError",
    "compose", "epsilon", "evaluate", "parse_map", "parse_poly", "parse_word", "serialize_word",
    "shape_predicates", "specialize", "uses_only", "word_to_map",
]
