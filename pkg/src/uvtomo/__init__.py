"""uvtomo: 2D tomography from projections with unknown angles and shifts."""

import os

# Honor the documented thread cap before any numerics are imported.
_threads = os.environ.get("UVT_THREADS")
if _threads:
    for _var in ("OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                 "OMP_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        os.environ.setdefault(_var, _threads)
del os

from .altmin import (AltMinConfig, IterationRecord, IterationTrace,
                     estimate_shifts, reconstruct_step, run_altmin,
                     update_angles)
from .errors import (ClippingError, ConfigurationError, DataFormatError,
                     DegeneracyError, GraphConnectivityError, MomentRangeError)
from .evaluate import (AlignmentResult, MetricSet, align, angle_error,
                       circular_order_agreement, metrics)
from .geometry import (GeometryEstimate, backproject, fbp, project,
                       project_many, reproject_all, shift_image,
                       shift_projection)
from .graphinit import (Embedding2D, SimilarityMatrix, assign_angles,
                        best_alignment_shift, build_similarity, circular_sort,
                        init_geometry, laplacian_embed)
from .moments import (ImageMoments, ProjectionMoments, candidate_angles,
                      disambiguate_third_moment, image_moments_from_references,
                      moment_method_pipeline, projection_moments)
from .phantoms import make_phantom
from .simulate import DistortionConfig, GroundTruth, empirical_sigma, synthesize

__version__ = "0.1.0"
