"""Per-qubit fidelity curves for every gate and channel.

One qubit at a time is exposed to noise at rates 0..0.5 and the gate
fidelity is evaluated with the closed-form witness. The tables show the
three behaviors: exact horizontal lines (immunity), straight lines of
gradient -1 reaching 0.5 (bit/phase flips on susceptible qubits), and the
gentler damping curves.
"""

from clusterfid import (
    BUILTIN_CHANNELS,
    CONTROLLED_Z,
    HADAMARD,
    IDENTITY,
    default_registry,
    sweep_curve,
    z_rotation,
)

registry = default_registry()
grid = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]

for gate in (IDENTITY, HADAMARD, z_rotation(0.7853981633974483), CONTROLLED_Z):
    pattern = registry.pattern_for(gate)
    for channel_name, family in BUILTIN_CHANNELS.items():
        print(f"\n== {gate} under {channel_name}, one exposed qubit ==")
        print("qubit  " + "  ".join(f"F(p={p:.1f})" for p in grid))
        for label in pattern.labels:
            curve = sweep_curve(gate, family, [label], grid, registry)
            row = "  ".join(f"{f:8.4f}" for f in curve.fidelities())
            print(f"{label:>5s}  {row}")
