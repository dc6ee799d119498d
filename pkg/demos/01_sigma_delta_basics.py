# # Sigma-Delta quantization in a few lines
#
# A Sigma-Delta quantizer rounds each sample after adding back the error it
# has accumulated so far.  The error does not vanish, it is pushed into the
# range of D^r, where D is the first-difference matrix.

import numpy as np

from sdquant import apply_dpower, msq_quantize, sigma_delta_quantize, stable_alphabet
from sdquant.rng import stream

rng = stream(0)
m = 64
y = rng.standard_normal(m) + 1j * rng.standard_normal(m)
y *= 0.9 / np.max(np.abs(y))

# The alphabet is the step-0.1 grid inside a disk just big enough to keep the
# state bounded.

for r in (1, 2, 3):
    alpha = stable_alphabet(y, 0.1, r)
    out = sigma_delta_quantize(y, r, alpha)
    gap = np.max(np.abs(y - out.q - apply_dpower(out.u, r)))
    # the state is bounded by delta/2 in each of the real and imaginary parts
    u_max = max(np.max(np.abs(out.u.real)), np.max(np.abs(out.u.imag)))
    print(f"r={r}  radius={alpha.radius:.2f}  points={len(alpha)}  "
          f"max state part={u_max:.4f}  identity gap={gap:.1e}")

# Plain rounding (MSQ) has a smaller per-sample error, but that error is white.
# The Sigma-Delta error is high-pass: summing it once gives back the bounded state.

alpha = stable_alphabet(y, 0.1, 1)
e_msq = y - msq_quantize(y, alpha)
e_sd = y - sigma_delta_quantize(y, 1, alpha).q
print("max running sum, MSQ:        ", np.max(np.abs(np.cumsum(e_msq))).round(3))
print("max running sum, Sigma-Delta:", np.max(np.abs(np.cumsum(e_sd))).round(3))
