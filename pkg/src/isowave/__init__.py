"""Filter banks, scale isometries, transfer operators and wavelets on the circle."""

from .trigpoly import TrigPoly, random_poly
from .filterbank import (
    FilterBank,
    TightFrame,
    branch_inner,
    daubechies4_lowpass,
    haar_bank,
    haar_highpass,
    haar_lowpass,
    is_filter_bank,
    is_unit_filter,
    load_filter,
    modulate_highpass,
    partition_frame,
    quadrature_mirror,
    right_action,
    save_filter,
)
from .isometries import (
    ScaleIsometry,
    covariance_report,
    cuntz_relations_report,
    power_multiplier,
)
from .transfer import (
    OrbitQuery,
    TorusMeasure,
    TransferMatrix,
    build_transfer_matrix,
    fixed_measure,
    lebesgue_measure,
    modular_delta,
    quasi_invariance_residual,
)
from .shiftalgebra import (
    WordOp,
    adjoint,
    core_part,
    equal_ops,
    expectation_relations_report,
    gauge,
    generator,
    multiply,
    normal_form,
    op_distance,
    shift_endomorphism,
    shift_isometry,
    term,
    transfer_expectation,
    unit,
)
from .cascade import (
    CascadeConfig,
    SampledFn,
    lowpass_hypotheses,
    mra_embedding,
    orthonormality_gram,
    partition_unity_residual,
    purity_report,
    scaling_freq,
    two_scale_residual,
    wavelet_freq,
    wavelet_time,
)
from .ifs import (
    AffineIFS,
    CodedPoint,
    PointCloud,
    address_point,
    attractor,
    branch_disjointness,
    cantor,
    hausdorff_distance,
    hutchinson_step,
    lifted_map,
    lifted_shift,
    load_ifs,
    save_ifs,
    sierpinski,
)
from .errors import CheckError

__version__ = "0.1.0"
