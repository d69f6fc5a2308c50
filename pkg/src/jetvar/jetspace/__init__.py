from .derivatives import divergence, total_derivative, total_derivative_multi
from .forms import DegreeOverflowWarning, HorizontalForm, d_H, d_V
from .space import JetSpace, MultiIndex, multi_indices, order_cap, sub_indices
from .vectorfield import (
    ProjectableVectorField,
    generalized_lie_derivative,
    jets_of,
    prolong,
    vertical_part,
)

__all__ = [
    "DegreeOverflowWarning",
    "HorizontalForm",
    "JetSpace",
    "MultiIndex",
    "ProjectableVectorField",
    "d_H",
    "d_V",
    "divergence",
    "generalized_lie_derivative",
    "jets_of",
    "multi_indices",
    "order_cap",
    "prolong",
    "sub_indices",
    "total_derivative",
    "total_derivative_multi",
    "vertical_part",
]
