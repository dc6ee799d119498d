# # Sparse recovery from quantized partial Fourier data
#
# Draw m rows of the 128-point DFT, measure a 5-sparse signal, quantize with
# Sigma-Delta and decode by l1 minimization under the constraint that the
# decoded signal reproduces the same quantizer state bound.

import numpy as np

from sdquant import DecoderConfig, l1_decode, sigma_delta_quantize, sparse_error, stable_alphabet
from sdquant.bench.experiments import sample_sparse_signal
from sdquant.frames import apply_selection, build_dft, draw_selection
from sdquant.rng import stream

N, k = 128, 5
x = sample_sparse_signal(N, k, stream(1))
print("support:", np.flatnonzero(x))

for m in (64, 128, 256, 512):
    A = apply_selection(build_dft(N), draw_selection(N, m, stream(2, m))) / np.sqrt(m)
    y = A @ x
    q = sigma_delta_quantize(y, 1, stable_alphabet(y, 0.1, 1)).q
    out = l1_decode(A, 1, q, DecoderConfig(1, 0.1))
    print(f"m={m:4d}  error {sparse_error(x, out.x_hat):.4f}  "
          f"iterations {out.iterations}  converged {out.converged}")

# Without quantization and with a tiny tolerance the same solver recovers
# the signal essentially exactly.

A = apply_selection(build_dft(N), draw_selection(N, 48, stream(3)))
out = l1_decode(A, 1, A @ x, DecoderConfig(1, 1e-8))
print("noiseless error:", f"{np.linalg.norm(out.x_hat - x):.2e}")
