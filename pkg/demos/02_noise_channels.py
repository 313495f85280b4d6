"""The four built-in single-qubit noise channels.

Each channel is a pair of Kraus operators parametrized by an error rate p,
satisfying sum E^dag E = I. Bit flips and phase flips are Pauli channels;
the two damping channels are not, which is why the whole package works
with density matrices instead of a stabilizer tableau.
"""

import numpy as np

from clusterfid import amplitude_damping, bit_flip, dephasing, phase_damping

ZERO = np.array([[1, 0], [0, 0]], dtype=complex)
PLUS = np.full((2, 2), 0.5, dtype=complex)

for family in (bit_flip, dephasing, phase_damping, amplitude_damping):
    ch = family(0.3)
    print(f"== {ch.name}(p=0.3) ==")
    for i, op in enumerate(ch.operators, start=1):
        print(f"  E{i} =\n{np.round(op, 6)}")
    acc = sum(op.conj().T @ op for op in ch.operators)
    print("  completeness |sum E^dag E - I|_max =", np.max(np.abs(acc - np.eye(2))))

# %% how each channel moves the basic states
print("\naction at p = 0.5:")
for family in (bit_flip, dephasing, phase_damping, amplitude_damping):
    ch = family(0.5)
    out_zero = ch.apply_single(ZERO)
    out_plus = ch.apply_single(PLUS)
    print(f"  {ch.name:10s} |0><0| -> diag {np.round(np.diag(out_zero).real, 4)}"
          f"   |+><+| off-diagonal -> {out_plus[0, 1].real:+.4f}")

# %% dephasing shrinks coherence linearly, phase damping by sqrt(1-p)
print("\ncoherence decay of |+><+|:")
for p in (0.0, 0.25, 0.5, 0.75, 1.0):
    d = dephasing(p).apply_single(PLUS)[0, 1].real
    pd = phase_damping(p).apply_single(PLUS)[0, 1].real
    print(f"  p={p:.2f}  dephasing {d:+.4f} (=1/2-p)   phasedamp {pd:+.4f} (=sqrt(1-p)/2)")
