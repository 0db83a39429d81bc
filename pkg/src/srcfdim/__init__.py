"""srcfdim: semi-regular continued fractions, non-autonomous digit systems,
and certified Hausdorff-dimension bounds for restricted-digit sets.

Exact integer/rational arithmetic carries everything geometric (branch maps,
fundamental intervals, derivative and distortion bounds, digit extraction);
floating point enters only in the pressure numerics and certificates, always
as two-sided brackets.
"""

from .blocks import BlockScheme, build_blocks
from .bounds import (
    DimensionReport,
    LowerCertificate,
    UpperCertificate,
    dimension_report,
    lower_certificate,
    upper_certificate,
)
from .digit_sets import (
    DigitSet,
    Explicit,
    Geometric,
    Naturals,
    PolynomialValues,
    Powers,
    Primes,
    TauEstimate,
    tau,
)
from .expand import DigitStream, evaluate, expand, reconvert, singleton_check
from .growth import ExponentialGrowth, GrowthFunction, PowerGrowth, TableGrowth
from .ifs import (
    NonAutonomousIFS,
    assemble,
    control_constants,
    sample_address,
)
from .mobius import (
    MobiusMap,
    RationalInterval,
    X,
    XTILDE,
    compose,
    derivative_bounds,
    derivative_profile,
    distortion_constant,
    fundamental_interval,
    generator,
    word_map,
)
from .numbers import DecimalBall, QuadraticSurd
from .pressure import (
    BowenBracket,
    PressureBracket,
    bowen_bisect,
    lower_pressure,
    partition_bracket,
)
from .signs import SignSequence, constant, explicit, periodic, seeded_random
from .transfer import leading_eigenvalue, transfer_refine

__version__ = "0.1.0"

__all__ = [
    "BlockScheme", "BowenBracket", "DecimalBall", "DigitSet", "DigitStream",
    "DimensionReport", "Explicit", "ExponentialGrowth", "Geometric",
    "GrowthFunction", "LowerCertificate", "MobiusMap", "Naturals",
    "NonAutonomousIFS", "PolynomialValues", "Powers", "PressureBracket",
    "Primes", "PowerGrowth", "QuadraticSurd", "RationalInterval",
    "SignSequence", "TableGrowth", "TauEstimate", "UpperCertificate", "X",
    "XTILDE", "assemble", "bowen_bisect", "build_blocks", "compose",
    "constant", "control_constants", "derivative_bounds", "derivative_profile",
    "dimension_report", "distortion_constant", "evaluate", "expand",
    "explicit", "fundamental_interval", "generator", "leading_eigenvalue",
    "lower_certificate", "lower_pressure", "partition_bracket", "periodic",
    "reconvert", "sample_address", "seeded_random", "singleton_check", "tau",
    "transfer_refine", "upper_certificate", "word_map",
]
