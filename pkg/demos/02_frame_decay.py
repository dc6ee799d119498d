# # Error decay for harmonic frames
#
# Measure a 10-dimensional signal with m rows of a harmonic frame, quantize
# with first-order Sigma-Delta, and reconstruct with the Sobolev dual.  Taking
# the rows in natural order gives an error that does not fall with m.  Drawing
# the rows at random (with replacement) makes it fall roughly like m^(-1/2).

from sdquant.bench.experiments import ExperimentSpec, decay_fit, m_range, run_experiment

spec = ExperimentSpec(
    kind="frame-direct-vs-permuted", k=10, delta=0.1, order=1,
    m_values=m_range(100, 500, 5), trials_permutations=40, trials_signals=1,
)
records = run_experiment(spec)

for rec in records:
    label = "permuted" if rec.permute else "direct  "
    print(f"{label} m={rec.m:4d}  worst error {rec.worst_case_error:.5f}")

print("direct slope:  ", round(decay_fit(records, permute=False).slope, 3))
print("permuted slope:", round(decay_fit(records, permute=True).slope, 3))

# Second order shapes the noise harder, so the permuted error falls faster.

spec2 = ExperimentSpec(kind="frame-decay", k=10, delta=0.1, order=2,
                       m_values=m_range(100, 500, 5), trials_permutations=40)
print("r=2 permuted slope:", round(decay_fit(run_experiment(spec2)).slope, 3))
