"""Likelihood-ratio evaluation: contour quadrature, Laplace and asymptotic forms."""

from .params import (LRParams, check_theta, d2, delta_p_value, lr_params, saddle_z0,
                     threshold_p)
from .parts import LaplaceParts, g_I_leading, laplace_parts, two_f_I
from .contour import ContourSpec, Segment, contour, reg_map
from .quadrature import QuadResult, lr_quadrature
from .laplace import (METHODS, LaplaceResult, LRResult, delta_p, evaluate, log_lr_asymptotic,
                      lr_asymptotic, lr_laplace)
