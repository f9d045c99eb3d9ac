"""
Encrypting an image end to end
==============================

Key generation, encryption to a complex field, optional hiding inside a host
picture, and decryption. Files are written to a temporary directory to show
the on-disk formats.
"""

import tempfile
from pathlib import Path

import numpy as np

from csencrypt.fileio import load_test_image, read_cipher, read_keys, write_cipher, write_keys
from csencrypt.pipeline import decrypt, encrypt, keygen, psnr

image = load_test_image("cameraman")[::2, ::2]
keys = keygen(image.shape[0], "1/4", master_seed=2024)
print(keys)

cipher = encrypt(image, keys)
print("cipher field", cipher.hidden.shape, cipher.hidden.dtype)

# The cipher looks like noise: its magnitude has no trace of the image.
mag = np.abs(cipher.hidden)
print("cipher |z| mean %.1f, std %.1f" % (mag.mean(), mag.std()))

out = Path(tempfile.mkdtemp())
write_keys(out / "keys.txt", keys)
write_cipher(out / "cipher.bin", cipher)
print((out / "keys.txt").read_text())

recovered = decrypt(read_cipher(out / "cipher.bin"), read_keys(out / "keys.txt"))
print("decrypted PSNR %.2f dB" % psnr(image, recovered))

# Hide the cipher in a public host picture twice as tall as the field.
s = cipher.meas_side
host = load_test_image("moon")[: 2 * s, :s]
hidden = encrypt(image, keys, host)
print("host-embedded raster", hidden.hidden.shape, "differs from host by %.1f grey levels on average"
      % np.abs(hidden.hidden - host).mean())
print("decrypted from host PSNR %.2f dB" % psnr(image, decrypt(hidden, keys, host)))
