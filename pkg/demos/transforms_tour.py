"""
The building blocks: FRFT, Arnold map and 9/7 wavelet
=====================================================

Each transform is exactly invertible. This script checks that numerically and
shows a few properties worth knowing before using them as cipher stages.
"""

import numpy as np

from csencrypt.fileio import load_test_image
from csencrypt.transforms import ArnoldKey, WaveletSpec, arnold, arnold_inverse, arnold_period, dwt2, frft2, idwt2

image = load_test_image("cameraman")[::4, ::4]
print("image", image.shape)

# FRFT orders add: two quarter turns equal one half turn.
two_steps = frft2(frft2(image, 0.25, 0.25), 0.25, 0.25)
one_step = frft2(image, 0.5, 0.5)
print("order additivity error  %.2e" % np.abs(two_steps - one_step).max())

# A full turn (order 4) comes back to the start.
print("order 4 identity error  %.2e" % np.abs(frft2(image, 4, 4) - image).max())

# The cat map is a pure permutation with a finite period.
n = image.shape[0]
period = arnold_period(n)
key = ArnoldKey(17, n)
scrambled = arnold(image, key)
print("Arnold period for side %d: %d" % (n, period))
print("inverse exact:", np.array_equal(arnold_inverse(scrambled, key), image))
print("full period returns:", np.array_equal(arnold(image, ArnoldKey(period, n)), image))

# Wavelet sparsity: most detail coefficients of a natural image are small.
spec = WaveletSpec(3)
coeffs = dwt2(image, spec)
big = np.abs(coeffs) > 0.01 * np.abs(coeffs).max()
print("coefficients above 1%% of peak: %.1f%%" % (100 * big.mean()))
print("perfect reconstruction error %.2e" % np.abs(idwt2(coeffs, spec) - image).max())
