"""Shear-squeeze-rotation group, its representations and the metamorphism transform."""
from .fiducial import FiducialSpec, InvalidSpecError, airy_type, annihilation_residual, from_spec, gaussian, generic_type
from .group import AlgebraVector, GroupElement, bracket, exp_one_param, inverse, measures, multiply, to_matrix
from .image_space import (
    ComplexChart,
    SliceStack,
    Tolerances,
    cauchy_riemann_residuals,
    characterize,
    parabolic_residual,
    structural_residuals,
    to_complex_chart,
    transform_stack,
)
from .representations import derived_rep_apply, lie_derivative_apply, quasi_regular_point, schrodinger_apply
from .signals import (
    ComplexField2D,
    Context,
    GridMismatchError,
    MeasureSpec,
    PolyGaussChirp,
    SampledSignal,
    UniformGrid1D,
    WindowOverflowError,
    hermite,
    inner_product,
)
from .transform import (
    TransformResult,
    contravariant,
    covariant_direct,
    covariant_fast,
    intertwining_residual,
    metamorphism,
    orthogonality_defect,
)

__version__ = "0.1.0"
