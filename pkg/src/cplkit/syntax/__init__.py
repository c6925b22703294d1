"""Abstract syntax, parsers and printers for the three formula languages."""

from .cpl import (
    And, Box, Const, CplFormula, Eq, Exists, Forall, Implies, Not, Or, Pred, Signature, Var,
    constants, free_vars, parse_cpl, print_cpl, substitute,
)
from .fol2 import Fol2Formula, parse_fol2, print_fol2
from .modal import (
    Bottom, Diamond, MAnd, MBox, MImplies, MNot, MOr, ModalFormula, Prop, Top,
    expand_diamond, parse_modal, print_modal, propositions,
)
