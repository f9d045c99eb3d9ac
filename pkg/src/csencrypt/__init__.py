"""Compressive-sensing image encryption.

An image is sensed with a scrambled partial FFT, its measurements are
scrambled with the Arnold cat map, encrypted by double random phase
encoding in the fractional Fourier domain, and optionally hidden in a host
raster. Decryption inverts every stage exactly and recovers the image by
l1-regularized TwIST in a 9/7 wavelet basis.
"""

from .attacks import AttackSpec, add_noise, crop_pixels, perturb_key, run_bench
from .drpe import HostEmbedding, PhaseMask, drpe_decode, drpe_encode, embed_host, extract_host
from .errors import DivergenceError, FormatError, InvalidArgumentError
from .pipeline import CipherBundle, KeyBundle, decrypt, encrypt, keygen, psnr
from .recovery import SolverConfig, objective, soft_threshold, twist_run, twist_solve
from .sensing import Measurements, SrmOperator, coherence, srm_adjoint, srm_forward, srm_new
from .transforms import ArnoldKey, WaveletSpec, arnold, arnold_inverse, dwt2, frft1, frft2, idwt2

__version__ = "0.1.0"
