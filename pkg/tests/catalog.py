"""Named frames and spaces used across the tests."""

from cplkit.frames import NeighborhoodFrame
from cplkit.topology import FiniteTopology

F1 = NeighborhoodFrame("ab", {"a": [["a"], ["a", "b"]], "b": []})
F2 = NeighborhoodFrame("ab", {"a": [["b"], ["a", "b"]], "b": [["b"], ["a", "b"]]})
F3 = NeighborhoodFrame("a", {"a": []})
# N(a) = upward closure of {a,b} and {a,c}
F4 = NeighborhoodFrame("abc", {"a": [["a", "b"], ["a", "c"], ["a", "b", "c"]], "b": [], "c": []})
SUB_B = NeighborhoodFrame("b", {"b": [["b"]]})
SUB_A = NeighborhoodFrame("a", {"a": []})

DISCRETE_AB = FiniteTopology("ab", [[], ["a"], ["b"], ["a", "b"]])
INDISCRETE_AB = FiniteTopology("ab", [[], ["a", "b"]])
SIERPINSKI = FiniteTopology("ab", [[], ["a"], ["a", "b"]])
