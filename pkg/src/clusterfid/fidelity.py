"""The two independent gate-fidelity evaluators and their cross-validation.

``fidelity_formula`` evaluates the closed-form witness expectation on the
noisy cluster state. ``mbqc_oracle`` knows nothing about witnesses: it
enumerates every measurement branch of the pattern (respecting the
measurement order and the outcome-adapted basis), projects the noisy state
branch by branch, applies the byproduct corrections, reduces to the kept
qubits, and compares against the same branch of the noiseless run,
averaging Tr(sigma_m sigma_m_ideal) under the noisy branch probabilities.
The two must agree; ``cross_validate`` reports the worst difference.
"""

from __future__ import annotations

import itertools
import threading
import weakref
from dataclasses import dataclass

import numpy as np

from .engine import (
    BRANCH_EPS,
    CapacityError,
    conjugate_on_qubit,
    embed,
    expectation,
    partial_trace_raw,
)
from .channels import KrausChannel, apply_assignment
from .patterns import GateKind, MeasurementPattern, PatternRegistry, default_registry

_PAULI_2 = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

DISCREPANCY_TOL = 1e-9

#: Branch enumeration is 2^k over measured qubits; refuse beyond this.
MAX_BRANCH_QUBITS = 12


@dataclass(frozen=True)
class FidelityResult:
    gate: GateKind
    assignment: str          # human-readable summary of the noise assignment
    value: float             # clipped to [0, 1] for reporting
    method: str              # 'formula' | 'oracle'
    raw_value: float = None  # unclipped, for tolerance checks

    def __post_init__(self):
        raw = self.value if self.raw_value is None else self.raw_value
        if raw < -1e-9 or raw > 1 + 1e-9:
            raise ValueError(f"fidelity {raw} outside [-1e-9, 1+1e-9]")
        object.__setattr__(self, "raw_value", float(raw))
        object.__setattr__(self, "value", float(min(max(raw, 0.0), 1.0)))


def describe_assignment(pattern: MeasurementPattern, assignment: dict) -> str:
    if not assignment:
        return "noiseless"
    parts = []
    for label in sorted(assignment, key=lambda lab: pattern.to_index(lab)):
        ch = assignment[label]
        parts.append(f"{ch.name}({ch.error_rate:g})@{label}")
    return ",".join(parts)


def resolve_assignment(pattern: MeasurementPattern, assignment: dict) -> dict:
    """Map label-keyed (or index-keyed) channels onto vertex indices."""
    resolved: dict[int, KrausChannel] = {}
    for label, channel in assignment.items():
        idx = pattern.to_index(label)
        if idx in resolved:
            raise ValueError(f"qubit {label!r} assigned twice")
        resolved[idx] = channel
    return resolved


def fidelity_formula(
    gate: GateKind,
    assignment: dict | None = None,
    registry: PatternRegistry | None = None,
) -> FidelityResult:
    """Closed-form average gate fidelity: Tr(noisy cluster x witness)."""
    registry = registry or default_registry()
    pattern = registry.pattern_for(gate)
    assignment = dict(assignment or {})
    rho = apply_assignment(
        registry.cluster_state(gate), resolve_assignment(pattern, assignment)
    )
    val = expectation(rho, registry.witness_for(gate).matrix)
    if abs(val.imag) > 1e-10:
        raise ValueError(f"witness expectation has imaginary part {val.imag:.3e}")
    return FidelityResult(
        gate, describe_assignment(pattern, assignment), val.real, "formula"
    )


# -- branch oracle -------------------------------------------------------------


@dataclass(frozen=True)
class _Branch:
    """One measurement outcome vector, precomputed for a (gate, theta) pair."""

    outcomes: dict            # measured label -> bit
    projectors: tuple         # ((qubit index, 2x2 projector), ...), in order
    correction: np.ndarray    # byproduct unitary on the kept register
    ideal_prob: float
    ideal_state: np.ndarray   # corrected reduced noiseless branch (normalized)


class _BranchCache:
    def __init__(self):
        self._per_registry = weakref.WeakKeyDictionary()
        self._lock = threading.Lock()

    def get(self, registry: PatternRegistry, gate: GateKind) -> tuple:
        key = (gate.kind, gate.theta)
        with self._lock:
            table = self._per_registry.setdefault(registry, {})
            hit = table.get(key)
        if hit is not None:
            return hit
        built = _enumerate_branches(registry, gate)
        with self._lock:
            return table.setdefault(key, built)


_branches = _BranchCache()


def _branch_projectors(
    pattern: MeasurementPattern, theta: float, outcomes: dict
) -> tuple:
    eye2 = np.eye(2, dtype=complex)
    projs = []
    for label in pattern.measure_order:
        basis = pattern.bases[label]
        ctrl_bit = outcomes[basis.control] if basis.axis == "adaptive" else None
        op = basis.operator(theta, ctrl_bit)
        sign = (-1) ** outcomes[label]
        projs.append((pattern.to_index(label), (eye2 + sign * op) / 2.0))
    return tuple(projs)


def _project_branch(mat: np.ndarray, projectors: tuple, num_qubits: int) -> np.ndarray:
    for qubit, proj in projectors:
        mat = conjugate_on_qubit(mat, proj, qubit, num_qubits)
    return mat


def _branch_correction(pattern: MeasurementPattern, outcomes: dict) -> np.ndarray:
    kept_indices = sorted(pattern.to_index(lab) for lab in pattern.kept_labels)
    m = len(kept_indices)
    corr = np.eye(2**m, dtype=complex)
    for rule in pattern.byproducts:
        parity = sum(outcomes[src] for src in rule.sources) % 2
        if parity:
            pos = kept_indices.index(pattern.to_index(rule.target))
            corr = embed(_PAULI_2[rule.pauli], [pos], m) @ corr
    return corr


def _enumerate_branches(registry: PatternRegistry, gate: GateKind) -> tuple:
    pattern = registry.pattern_for(gate)
    order = pattern.measure_order
    if len(order) > MAX_BRANCH_QUBITS:
        raise CapacityError(
            f"{len(order)} measured qubits exceed the {MAX_BRANCH_QUBITS}-qubit "
            "branch-enumeration limit"
        )
    kept = sorted(pattern.to_index(lab) for lab in pattern.kept_labels)
    clean = registry.cluster_state(gate)
    n = clean.num_qubits
    branches = []
    for bits in itertools.product((0, 1), repeat=len(order)):
        outcomes = dict(zip(order, bits))
        projs = _branch_projectors(pattern, gate.theta, outcomes)
        corr = _branch_correction(pattern, outcomes)
        reduced = partial_trace_raw(_project_branch(clean.mat, projs, n), kept, n)
        prob = float(np.trace(reduced).real)
        if prob <= BRANCH_EPS:
            # cannot happen for graph states (every branch has weight 2^-k),
            # but keep the contract: such a branch carries no ideal state.
            branches.append(_Branch(outcomes, projs, corr, 0.0, None))
            continue
        ideal = corr @ (reduced / prob) @ corr.conj().T
        branches.append(_Branch(outcomes, projs, corr, prob, ideal))
    return tuple(branches)


def mbqc_oracle(
    gate: GateKind,
    assignment: dict | None = None,
    registry: PatternRegistry | None = None,
    return_branch_probabilities: bool = False,
):
    """Exhaustive measurement-branch simulation of the pattern.

    Independent of the witness formulas: the only shared machinery is the
    dense engine and the pattern registry itself.
    """
    registry = registry or default_registry()
    pattern = registry.pattern_for(gate)
    assignment = dict(assignment or {})
    noisy = apply_assignment(
        registry.cluster_state(gate), resolve_assignment(pattern, assignment)
    )
    kept = sorted(pattern.to_index(lab) for lab in pattern.kept_labels)
    total = 0.0
    probs = []
    n = noisy.num_qubits
    for branch in _branches.get(registry, gate):
        reduced = partial_trace_raw(
            _project_branch(noisy.mat, branch.projectors, n), kept, n
        )
        prob = float(np.trace(reduced).real)
        if prob <= BRANCH_EPS:
            continue
        probs.append(prob)
        corrected = branch.correction @ reduced @ branch.correction.conj().T
        # prob * Tr(sigma_m sigma_m_ideal) with sigma_m = corrected / prob
        total += float(np.trace(corrected @ branch.ideal_state).real)
    result = FidelityResult(
        gate, describe_assignment(pattern, assignment), total, "oracle"
    )
    if return_branch_probabilities:
        return result, probs
    return result


@dataclass(frozen=True)
class CrossValidationRow:
    assignment: str
    formula: float
    oracle: float

    @property
    def discrepancy(self) -> float:
        return abs(self.formula - self.oracle)


@dataclass(frozen=True)
class CrossValidationReport:
    gate: GateKind
    rows: tuple
    tolerance: float = DISCREPANCY_TOL

    @property
    def max_discrepancy(self) -> float:
        return max((r.discrepancy for r in self.rows), default=0.0)

    @property
    def flagged(self) -> tuple:
        return tuple(r for r in self.rows if r.discrepancy > self.tolerance)

    @property
    def ok(self) -> bool:
        return not self.flagged


def cross_validate(
    gate: GateKind,
    assignments: list,
    registry: PatternRegistry | None = None,
) -> CrossValidationReport:
    """Run both evaluators over the given assignments and compare."""
    registry = registry or default_registry()
    rows = []
    for assignment in assignments:
        f = fidelity_formula(gate, assignment, registry)
        o = mbqc_oracle(gate, assignment, registry)
        rows.append(CrossValidationRow(f.assignment, f.raw_value, o.raw_value))
    return CrossValidationReport(gate, tuple(rows))
