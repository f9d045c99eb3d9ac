"""Fractional Fourier, 9/7 wavelet and Arnold transforms."""

from .arnold import ArnoldKey, arnold, arnold_inverse, arnold_period
from .frft import frft1, frft2, frft_matrix
from .wavelet import WaveletSpec, dwt2, idwt2, idwt2_adjoint

__all__ = [
    "ArnoldKey",
    "arnold",
    "arnold_inverse",
    "arnold_period",
    "frft1",
    "frft2",
    "frft_matrix",
    "WaveletSpec",
    "dwt2",
    "idwt2",
    "idwt2_adjoint",
]
