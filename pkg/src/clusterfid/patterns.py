"""Registry of the four universal-gate measurement patterns and their witnesses.

Each pattern describes one gate of the universal set (identity, Hadamard,
Z-rotation, controlled-Z) realized by single-qubit measurements on a
cluster state: the graph, which qubits stay unmeasured as the logical
input/output pair(s), the measurement bases (including the one
outcome-adapted basis of the Z-rotation), and the byproduct Pauli
corrections that make every measurement branch realize the same gate.

The geometry is data, shipped in ``data/patterns.txt``; see the comments
there for how each layout is pinned. The fidelity witness of each gate is
built here from the pattern's stabilizers:

- identity:     (1 + K1 K3 K5)/2 (1 + K2 K4)/2
- Hadamard:     (1 + K1 K3 K5)/2 (1 + K2 K4 K6)/2
- Z-rotation:   (1 + K2 K4)/2
                (1 + K1 K3 K5 (cos^2 t + sin^2 t K4)
                   + cos t sin t (Z0 Y1 Z2) K2 K3 (1 - K4) K5)/2
- controlled-Z: (1 + K_a_in K3 K_a_out)/2 (1 + K_b_in K4 K_b_out)/2
                (1 + K1 K4)/2 (1 + K2 K3)/2

where K_l is the cluster stabilizer of the vertex labeled ``l``. The
expectation of the witness on the noisy pre-measurement cluster state
equals the branch-averaged gate fidelity; ``cmdValidate`` and the test
suite hold the registry to that via the independent branch oracle.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .engine import DensityMatrix, expectation
from .graphs import Graph, PauliString, build_cluster_state, stabilizer

_VALID_GATES = ("identity", "hadamard", "zrot", "cz")


@dataclass(frozen=True)
class GateKind:
    """One member of the universal gate set; ``theta`` only matters for zrot."""

    kind: str
    theta: float = 0.0

    def __post_init__(self):
        if self.kind not in _VALID_GATES:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if not np.isfinite(self.theta):
            raise ValueError("theta must be finite")
        if self.kind != "zrot" and self.theta != 0.0:
            raise ValueError(f"{self.kind} takes no angle")

    def __str__(self):
        if self.kind == "zrot":
            return f"zrot(theta={self.theta:g})"
        return self.kind


IDENTITY = GateKind("identity")
HADAMARD = GateKind("hadamard")
CONTROLLED_Z = GateKind("cz")


def z_rotation(theta: float) -> GateKind:
    return GateKind("zrot", float(theta))


def parse_gate(name: str, theta: float = 0.0) -> GateKind:
    name = name.strip().lower()
    if name == "zrot":
        return z_rotation(theta)
    return GateKind(name)


@dataclass(frozen=True)
class BasisSpec:
    """Measurement basis of one qubit: X, Y, Z, or an adaptive X-Y basis.

    The adaptive basis is cos(m*theta) X + sin(m*theta) Y where m = +-1 is
    the eigenvalue recorded at ``control`` (which is measured earlier).
    """

    axis: str                 # 'X' | 'Y' | 'Z' | 'adaptive'
    control: str | None = None

    def operator(self, theta: float, control_bit: int | None = None) -> np.ndarray:
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        y = np.array([[0, -1j], [1j, 0]], dtype=complex)
        z = np.array([[1, 0], [0, -1]], dtype=complex)
        if self.axis == "X":
            return x
        if self.axis == "Y":
            return y
        if self.axis == "Z":
            return z
        if control_bit is None:
            raise ValueError("adaptive basis needs the control outcome")
        adapted = (-1) ** control_bit * theta
        return np.cos(adapted) * x + np.sin(adapted) * y


@dataclass(frozen=True)
class ByproductRule:
    """Apply ``pauli`` to ``target`` when the outcome parity over ``sources`` is odd."""

    sources: tuple           # measured-qubit labels
    pauli: str               # 'X' | 'Z'
    target: str              # kept-qubit label


@dataclass(frozen=True)
class MeasurementPattern:
    name: str
    graph: Graph
    labels: tuple                     # vertex index -> label
    input_labels: tuple
    output_labels: tuple
    measure_order: tuple              # labels, in measurement order
    bases: dict = field(default_factory=dict)        # label -> BasisSpec
    byproducts: tuple = ()

    @property
    def index_of(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    @property
    def kept_labels(self) -> tuple:
        measured = set(self.measure_order)
        return tuple(lab for lab in self.labels if lab not in measured)

    def to_index(self, label) -> int:
        key = str(label)
        try:
            return self.index_of[key]
        except KeyError:
            raise ValueError(
                f"pattern {self.name!r} has no qubit {label!r}; "
                f"labels: {', '.join(self.labels)}"
            ) from None

    def validate(self) -> None:
        measured = set(self.measure_order)
        kept = set(self.input_labels) | set(self.output_labels)
        if measured & set(self.output_labels):
            raise ValueError(f"{self.name}: output qubits cannot be measured")
        if (measured | kept) != set(self.labels):
            raise ValueError(f"{self.name}: measured+input+output must cover all qubits")
        if len(self.measure_order) != len(measured):
            raise ValueError(f"{self.name}: duplicate label in measurement order")
        for lab in self.measure_order:
            if lab not in self.bases:
                raise ValueError(f"{self.name}: no basis for measured qubit {lab}")
        for lab, basis in self.bases.items():
            if basis.axis == "adaptive":
                if basis.control not in measured:
                    raise ValueError(f"{self.name}: adaptive control {basis.control} not measured")
                if self.measure_order.index(basis.control) >= self.measure_order.index(lab):
                    raise ValueError(
                        f"{self.name}: adaptive control {basis.control} must precede {lab}"
                    )
        for rule in self.byproducts:
            if rule.target in measured:
                raise ValueError(f"{self.name}: byproduct targets measured qubit {rule.target}")
            for src in rule.sources:
                if src not in measured:
                    raise ValueError(f"{self.name}: byproduct source {src} not measured")


@dataclass(frozen=True)
class WitnessFactor:
    """One (1 + S)/2 projector factor of a witness.

    ``stabilizer_labels`` records which vertex stabilizers make up S (the
    grouping the controlling-pattern analysis talks about), ``support`` the
    vertices its Pauli expansion actually touches.
    """

    stabilizer_labels: tuple
    support: frozenset
    matrix: np.ndarray


@dataclass(frozen=True)
class FidelityWitness:
    gate: GateKind
    factors: tuple
    matrix: np.ndarray                # cached product of the factors


class PatternRegistry:
    """Immutable pattern store with a per-(gate, theta) witness cache."""

    def __init__(self, patterns: dict):
        for pat in patterns.values():
            pat.validate()
        missing = [g for g in _VALID_GATES if g not in patterns]
        if missing:
            raise ValueError(f"registry is missing patterns: {', '.join(missing)}")
        self._patterns = dict(patterns)
        self._witness_cache: dict = {}
        self._cluster_cache: dict = {}
        self._lock = threading.Lock()

    def pattern_for(self, gate: GateKind) -> MeasurementPattern:
        return self._patterns[gate.kind]

    def cluster_state(self, gate: GateKind) -> DensityMatrix:
        """The (cached) pristine cluster state of the gate's graph."""
        key = gate.kind
        with self._lock:
            hit = self._cluster_cache.get(key)
        if hit is not None:
            return hit
        state = build_cluster_state(self.pattern_for(gate).graph)
        with self._lock:
            self._cluster_cache[key] = state
        return state

    def witness_for(self, gate: GateKind) -> FidelityWitness:
        key = (gate.kind, gate.theta)
        with self._lock:
            hit = self._witness_cache.get(key)
        if hit is not None:
            return hit
        built = self._build_witness(gate)
        with self._lock:
            self._witness_cache.setdefault(key, built)
            return self._witness_cache[key]

    def witness_support_partition(self, gate: GateKind) -> dict:
        """Group qubit labels by the set of witness factors touching them.

        Keys are tuples of factor indices (singletons for qubits owned by
        one factor; longer tuples are the merged blocks of qubits shared by
        several factors), values are sorted label lists.
        """
        pat = self.pattern_for(gate)
        witness = self.witness_for(gate)
        blocks: dict = {}
        for idx, lab in enumerate(pat.labels):
            touched = tuple(
                fi for fi, fac in enumerate(witness.factors) if idx in fac.support
            )
            if touched:
                blocks.setdefault(touched, []).append(lab)
        return {k: sorted(v, key=pat.labels.index) for k, v in blocks.items()}

    # -- witness construction ------------------------------------------------

    def _stab(self, pat: MeasurementPattern, label: str) -> PauliString:
        return stabilizer(pat.graph, pat.to_index(label))

    def _projector_factor(self, pat: MeasurementPattern, labels: tuple) -> WitnessFactor:
        prod = PauliString.identity(pat.graph.num_vertices)
        for lab in labels:
            prod = prod * self._stab(pat, lab)
        dim = 2**pat.graph.num_vertices
        mat = (np.eye(dim, dtype=complex) + prod.matrix()) / 2.0
        return WitnessFactor(tuple(labels), prod.support(), mat)

    def _build_witness(self, gate: GateKind) -> FidelityWitness:
        pat = self.pattern_for(gate)
        if gate.kind == "identity":
            factors = (
                self._projector_factor(pat, ("1", "3", "5")),
                self._projector_factor(pat, ("2", "4")),
            )
        elif gate.kind == "hadamard":
            factors = (
                self._projector_factor(pat, ("1", "3", "5")),
                self._projector_factor(pat, ("2", "4", "6")),
            )
        elif gate.kind == "cz":
            factors = (
                self._projector_factor(pat, ("a_in", "3", "a_out")),
                self._projector_factor(pat, ("b_in", "4", "b_out")),
                self._projector_factor(pat, ("1", "4")),
                self._projector_factor(pat, ("2", "3")),
            )
        else:
            factors = (
                self._projector_factor(pat, ("2", "4")),
                self._rotation_factor(pat, gate.theta),
            )
        combined = factors[0].matrix
        for fac in factors[1:]:
            combined = combined @ fac.matrix
        return FidelityWitness(gate, factors, combined)

    def _rotation_factor(self, pat: MeasurementPattern, theta: float) -> WitnessFactor:
        """The angle-dependent factor of the Z-rotation witness."""
        c, s = np.cos(theta), np.sin(theta)
        n = pat.graph.num_vertices
        dim = 2**n
        k = {lab: self._stab(pat, lab) for lab in ("1", "2", "3", "4", "5")}
        zyz = (
            PauliString.single(n, pat.to_index("0"), "Z")
            * PauliString.single(n, pat.to_index("1"), "Y")
            * PauliString.single(n, pat.to_index("2"), "Z")
        )
        eye = np.eye(dim, dtype=complex)
        k4 = k["4"].matrix()
        k135 = (k["1"] * k["3"] * k["5"]).matrix()
        swing = (zyz * k["2"] * k["3"]).matrix() @ (eye - k4) @ k["5"].matrix()
        mat = (eye + k135 @ (c * c * eye + s * s * k4) + c * s * swing) / 2.0
        support = frozenset().union(
            (k["1"] * k["3"] * k["5"]).support(),
            (k["1"] * k["3"] * k["5"] * k["4"]).support(),
            (zyz * k["2"] * k["3"] * k["5"]).support(),
            (zyz * k["2"] * k["3"] * k["4"] * k["5"]).support(),
        )
        return WitnessFactor(("1", "2", "3", "4", "5"), support, mat)


# -- registry file parsing ----------------------------------------------------

_ADAPTIVE_RE = re.compile(r"^adaptive\(\s*theta\s*,\s*([^)\s]+)\s*\)$")


def _parse_section(name: str, lines: list) -> MeasurementPattern:
    num = None
    edges = []
    labels: dict = {}
    inputs: tuple = ()
    outputs: tuple = ()
    order: tuple = ()
    bases: dict = {}
    byproducts: list = []

    for lineno, line in lines:
        parts = line.split()
        kw = parts[0]
        if kw == "n":
            num = int(parts[1])
        elif kw == "e":
            edges.append((int(parts[1]), int(parts[2])))
        elif kw == "label":
            labels[int(parts[1])] = parts[2]
        elif kw == "inputs":
            inputs = tuple(parts[1:])
        elif kw == "outputs":
            outputs = tuple(parts[1:])
        elif kw == "order":
            order = tuple(parts[1:])
        elif kw == "basis":
            lab, spec = parts[1], parts[2]
            m = _ADAPTIVE_RE.match(spec)
            if m:
                bases[lab] = BasisSpec("adaptive", m.group(1))
            elif spec in ("X", "Y", "Z"):
                bases[lab] = BasisSpec(spec)
            else:
                raise ValueError(f"line {lineno}: bad basis spec {spec!r}")
        elif kw == "byproduct":
            expr, pauli, target = parts[1], parts[2], parts[3]
            if pauli not in ("X", "Z"):
                raise ValueError(f"line {lineno}: byproduct pauli must be X or Z")
            sources = []
            for tok in expr.split("+"):
                if not tok.startswith("s"):
                    raise ValueError(f"line {lineno}: bad parity term {tok!r}")
                sources.append(tok[1:])
            byproducts.append(ByproductRule(tuple(sources), pauli, target))
        else:
            raise ValueError(f"line {lineno}: unknown keyword {kw!r}")

    if num is None:
        raise ValueError(f"section [{name}] has no 'n' line")
    graph = Graph.from_edges(num, edges)
    label_tuple = tuple(labels.get(i, str(i)) for i in range(num))
    if len(set(label_tuple)) != num:
        raise ValueError(f"section [{name}] has duplicate labels")
    return MeasurementPattern(
        name=name,
        graph=graph,
        labels=label_tuple,
        input_labels=inputs,
        output_labels=outputs,
        measure_order=order,
        bases=bases,
        byproducts=tuple(byproducts),
    )


def parse_registry_text(text: str) -> PatternRegistry:
    sections: dict = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().lower()
            if current in sections:
                raise ValueError(f"line {lineno}: duplicate section [{current}]")
            sections[current] = []
            continue
        if current is None:
            raise ValueError(f"line {lineno}: content before any [gate] section")
        sections[current].append((lineno, line))
    patterns = {name: _parse_section(name, body) for name, body in sections.items()}
    return PatternRegistry(patterns)


def load_registry(path: str | None = None) -> PatternRegistry:
    """Load a pattern registry from ``path``, or the bundled default."""
    if path is None:
        text = resources.files("clusterfid").joinpath("data/patterns.txt").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return parse_registry_text(text)


_default_registry: PatternRegistry | None = None
_default_lock = threading.Lock()


def default_registry() -> PatternRegistry:
    global _default_registry
    with _default_lock:
        if _default_registry is None:
            _default_registry = load_registry()
        return _default_registry


def witness_expectation_noiseless(registry: PatternRegistry, gate: GateKind) -> float:
    """Expectation of the gate's witness on its pristine cluster state.

    Equals 1 for a correct registry; ``cmdValidate`` uses this as the
    registry-correctness gate.
    """
    rho = registry.cluster_state(gate)
    return expectation(rho, registry.witness_for(gate).matrix).real
