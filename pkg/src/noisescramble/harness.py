"""Sweep orchestration: grids over (family, width, error rate, depth),
seed averaging, metric computation and CSV persistence.

Sweeps are deterministic: the seed of every row is a stable hash of the
configuration seed and the row's grid coordinates, so partial re-runs
reproduce identical numbers. Rows are written incrementally in a fixed
order; only the wall-time column varies between runs.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .ansatz import (
    FAMILIES,
    PARAMETER_MODES,
    AnsatzSpec,
    build_hva_circuit,
    build_sel_circuit,
)
from .errors import ConfigError, FitError, ResourceError, ShapeError
from .fitting import ScalingFit, ScalingSample, fit_scaling
from .hamiltonians import (
    PauliTermHamiltonian,
    build_tfi_hamiltonian,
    build_xxx_hamiltonian,
    load_hamiltonian_file,
)
from .metrics import compute_spectral_report
from .simulator import CircuitProgram, DensityMatrix, basis_statevector, run_circuit, run_ideal

CONFIG_SCHEMA_VERSION = 1
CSV_SCHEMA_VERSION = 1

# Dense density matrices only; 2^(2N) complex entries caps the width.
MAX_QUBITS = 12

# Default stand-ins for the zero-error limit, chosen small enough that the
# spectral ratios are rate-independent but still well above float noise.
EPSILON_PROXY_W = 1e-8
EPSILON_PROXY_C = 1e-7

_CSV_COLUMNS = (
    ("family", "family"),
    ("n_qubits", "n_qubits"),
    ("epsilon", "epsilon"),
    ("nu", "nu"),
    ("seed", "seed"),
    ("W", "uniformity"),
    ("C_rel", "commutator_rel"),
    ("C_abs", "commutator_abs"),
    ("F", "fidelity"),
    ("lambda1", "lambda1"),
    ("trace_dist_wn", "trace_dist_wn"),
    ("eta_est", "eta_est"),
    ("wall_time_seconds", "wall_time_seconds"),
    ("reason", "reason"),
)


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: a circuit family crossed with error rates, depths and seeds."""

    family: str
    n_qubits: int
    epsilons: tuple[float, ...]
    layers: tuple[int, ...]
    parameter_mode: str = "random"
    seeds: tuple[int, ...] = tuple(range(10))
    seed: int = 0
    sparse_terms_per_layer: int = 100
    hamiltonian_file: str | None = None
    out: str | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}, expected one of {FAMILIES}")
        if self.parameter_mode not in PARAMETER_MODES:
            raise ConfigError(f"unknown parameter mode {self.parameter_mode!r}")
        if not self.epsilons or not self.layers or not self.seeds:
            raise ConfigError("epsilons, layers and seeds must all be non-empty")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seeds must be distinct")
        if any(not (0.0 <= e <= 1.0) for e in self.epsilons):
            raise ConfigError("every epsilon must lie in [0, 1]")
        if any(n < 1 for n in self.layers):
            raise ConfigError("every layer count must be at least 1")

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        try:
            payload = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_dict(payload, source=str(path))

    @classmethod
    def from_dict(cls, payload: dict, source: str = "config") -> "ExperimentConfig":
        if not isinstance(payload, dict):
            raise ConfigError(f"{source}: expected a JSON object")
        version = payload.get("schema_version")
        if version != CONFIG_SCHEMA_VERSION:
            raise ConfigError(
                f"{source}: schema_version {version!r} unsupported, expected {CONFIG_SCHEMA_VERSION}"
            )
        for field in ("family", "n_qubits", "epsilons", "layers"):
            if field not in payload:
                raise ConfigError(f"{source}: missing field {field!r}")
        try:
            return cls(
                family=payload["family"],
                n_qubits=int(payload["n_qubits"]),
                epsilons=tuple(float(e) for e in payload["epsilons"]),
                layers=tuple(int(l) for l in payload["layers"]),
                parameter_mode=payload.get("parameter_mode", "random"),
                seeds=tuple(int(s) for s in payload.get("seeds", range(10))),
                seed=int(payload.get("seed", 0)),
                sparse_terms_per_layer=int(payload.get("sparse_terms_per_layer", 100)),
                hamiltonian_file=payload.get("hamiltonian_file"),
                out=payload.get("out"),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{source}: {exc}") from None

    def to_dict(self) -> dict:
        payload = {
            "schema_version": CONFIG_SCHEMA_VERSION,
            "family": self.family,
            "n_qubits": self.n_qubits,
            "epsilons": list(self.epsilons),
            "layers": list(self.layers),
            "parameter_mode": self.parameter_mode,
            "seeds": list(self.seeds),
            "seed": self.seed,
            "sparse_terms_per_layer": self.sparse_terms_per_layer,
        }
        if self.hamiltonian_file is not None:
            payload["hamiltonian_file"] = self.hamiltonian_file
        if self.out is not None:
            payload["out"] = self.out
        return payload


@dataclass(frozen=True)
class ResultRow:
    """Metrics of one simulated grid point for one seed."""

    family: str
    n_qubits: int
    epsilon: float
    nu: int
    seed: int
    uniformity: float | None
    commutator_rel: float | None
    commutator_abs: float
    fidelity: float
    lambda1: float
    trace_dist_wn: float
    eta_est: float
    wall_time_seconds: float
    reason: str | None = None


def derive_seed(*parts) -> int:
    """Stable 63-bit seed from arbitrary labelled grid coordinates."""
    text = "|".join(
        format(p, ".17g") if isinstance(p, float) else str(p) for p in parts
    )
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % (2**63)


def _no_error_probability(epsilon: float, nu: int) -> float:
    if epsilon == 0.0:
        return 1.0
    if epsilon >= 1.0:
        return 0.0
    return math.exp(nu * math.log1p(-epsilon))


def build_program(
    config: ExperimentConfig,
    n_layers: int,
    ansatz_seed: int,
    hamiltonian_seed: int,
    file_hamiltonian: PauliTermHamiltonian | None = None,
) -> CircuitProgram:
    """Construct the (noise-free) circuit for one grid point."""
    spec = AnsatzSpec(
        family=config.family,
        n_qubits=config.n_qubits,
        n_layers=n_layers,
        parameter_mode=config.parameter_mode,
        seed=ansatz_seed,
        sparse_terms_per_layer=config.sparse_terms_per_layer,
    )
    if config.family == "SEL":
        return build_sel_circuit(spec)
    if config.family == "HVA-XXX":
        h0, h1 = build_xxx_hamiltonian(config.n_qubits, hamiltonian_seed)
    elif config.family in ("HVA-TFI", "HVA-TFI-RZ"):
        h0, h1 = build_tfi_hamiltonian(
            config.n_qubits, hamiltonian_seed, with_rz_extension=config.family == "HVA-TFI-RZ"
        )
    else:  # HVA-SPARSE
        if file_hamiltonian is None:
            raise ConfigError("the sparse family needs a hamiltonian_file")
        if file_hamiltonian.n_qubits != config.n_qubits:
            raise ShapeError(
                f"hamiltonian file is on {file_hamiltonian.n_qubits} qubits, config says {config.n_qubits}"
            )
        h0 = file_hamiltonian.diagonal_part()
        h1 = file_hamiltonian.offdiagonal_part()
    return build_hva_circuit(spec, h0, h1)


def _compute_row(
    config: ExperimentConfig,
    epsilon: float,
    layer_index: int,
    n_layers: int,
    seed_index: int,
    file_hamiltonian: PauliTermHamiltonian | None,
) -> ResultRow:
    row_seed = derive_seed(
        config.seed, config.family, config.n_qubits, epsilon, layer_index, seed_index
    )
    program = build_program(
        config,
        n_layers,
        ansatz_seed=derive_seed(row_seed, "ansatz"),
        hamiltonian_seed=derive_seed(row_seed, "hamiltonian"),
        file_hamiltonian=file_hamiltonian,
    ).with_noise(epsilon)
    started = time.perf_counter()
    rho = run_circuit(program, DensityMatrix.basis_state(config.n_qubits))
    psi = run_ideal(program, basis_statevector(config.n_qubits))
    eta_est = _no_error_probability(epsilon, program.gate_count)
    report = compute_spectral_report(rho, psi, eta_estimate=eta_est)
    elapsed = time.perf_counter() - started
    return ResultRow(
        family=config.family,
        n_qubits=config.n_qubits,
        epsilon=epsilon,
        nu=program.gate_count,
        seed=seed_index,
        uniformity=report.uniformity,
        commutator_rel=report.commutator_rel,
        commutator_abs=report.commutator_abs,
        fidelity=report.fidelity,
        lambda1=report.lambda1,
        trace_dist_wn=report.trace_dist_wn,
        eta_est=eta_est,
        wall_time_seconds=elapsed,
        reason=report.degenerate_reason,
    )


def check_feasible(n_qubits: int) -> None:
    if n_qubits > MAX_QUBITS:
        raise ResourceError(
            f"{n_qubits} qubits needs a dense {4**n_qubits}-entry matrix; "
            f"the dense backend is capped at {MAX_QUBITS} qubits"
        )


def run_sweep(config: ExperimentConfig, out_path=None, threads: int = 1) -> list[ResultRow]:
    """Simulate every (epsilon, depth, seed) grid point of a configuration.

    Rows are returned in grid order and, when ``out_path`` is given, also
    appended to the CSV as soon as they are available. ``threads`` > 1
    evaluates independent rows concurrently without changing the output
    order.
    """
    check_feasible(config.n_qubits)
    file_hamiltonian = None
    if config.family == "HVA-SPARSE":
        if config.hamiltonian_file is None:
            raise ConfigError("the sparse family needs a hamiltonian_file")
        file_hamiltonian = load_hamiltonian_file(config.hamiltonian_file)
    tasks = [
        (epsilon, layer_index, n_layers, seed_index)
        for epsilon in config.epsilons
        for layer_index, n_layers in enumerate(config.layers)
        for seed_index in config.seeds
    ]
    rows: list[ResultRow] = []
    sink = _RowSink(out_path)
    try:
        if threads <= 1:
            for task in tasks:
                row = _compute_row(config, *task, file_hamiltonian)
                rows.append(row)
                sink.write(row)
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                futures = [
                    pool.submit(_compute_row, config, *task, file_hamiltonian)
                    for task in tasks
                ]
                for future in futures:
                    row = future.result()
                    rows.append(row)
                    sink.write(row)
    finally:
        sink.close()
    return rows


class _RowSink:
    """Incremental CSV writer; a no-op when no path is given."""

    def __init__(self, path):
        self._handle = None
        if path is not None:
            self._handle = open(path, "w", encoding="utf-8", newline="\n")
            self._handle.write(f"# noisescramble-rows schema_version={CSV_SCHEMA_VERSION}\n")
            self._handle.write(",".join(column for column, _ in _CSV_COLUMNS) + "\n")
            self._handle.flush()

    def write(self, row: ResultRow) -> None:
        if self._handle is not None:
            self._handle.write(format_row(row) + "\n")
            self._handle.flush()

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None


def _format_field(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def format_row(row: ResultRow) -> str:
    return ",".join(_format_field(getattr(row, attribute)) for _, attribute in _CSV_COLUMNS)


def write_rows(path, rows) -> None:
    sink = _RowSink(path)
    try:
        for row in rows:
            sink.write(row)
    finally:
        sink.close()


def read_rows(path) -> list[ResultRow]:
    """Parse a rows CSV written by this package back into ResultRow objects."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    body = [line for line in lines if line and not line.startswith("#")]
    if not body:
        raise ConfigError(f"{path}: no header row found")
    header = body[0].split(",")
    expected = [column for column, _ in _CSV_COLUMNS]
    if header != expected:
        raise ConfigError(f"{path}: unexpected header {header!r}")
    rows = []
    for line in body[1:]:
        fields = line.split(",")
        if len(fields) != len(expected):
            raise ConfigError(f"{path}: row has {len(fields)} fields, expected {len(expected)}")
        named = dict(zip(expected, fields))
        rows.append(
            ResultRow(
                family=named["family"],
                n_qubits=int(named["n_qubits"]),
                epsilon=float(named["epsilon"]),
                nu=int(named["nu"]),
                seed=int(named["seed"]),
                uniformity=float(named["W"]) if named["W"] else None,
                commutator_rel=float(named["C_rel"]) if named["C_rel"] else None,
                commutator_abs=float(named["C_abs"]),
                fidelity=float(named["F"]),
                lambda1=float(named["lambda1"]),
                trace_dist_wn=float(named["trace_dist_wn"]),
                eta_est=float(named["eta_est"]),
                wall_time_seconds=float(named["wall_time_seconds"]),
                reason=named["reason"] or None,
            )
        )
    return rows


@dataclass(frozen=True)
class PerSizeSummary:
    """Seed-mean of one metric at one circuit size."""

    nu: int
    mean: float
    stderr: float
    n_seeds: int


def aggregate_and_fit(rows, metric_kind: str = "W") -> tuple[ScalingFit, list[PerSizeSummary]]:
    """Seed-average one metric per circuit size, then fit the scaling model.

    The rows must all belong to a single (family, n_qubits, epsilon)
    configuration; rows whose metric is null (e.g. noiseless points) are
    skipped.
    """
    rows = list(rows)
    if not rows:
        raise FitError("no rows to aggregate")
    keys = {(r.family, r.n_qubits, r.epsilon) for r in rows}
    if len(keys) != 1:
        raise FitError(f"rows span {len(keys)} configurations, expected exactly one")
    family, n_qubits, epsilon = keys.pop()
    attribute = {"W": "uniformity", "C": "commutator_rel"}.get(metric_kind)
    if attribute is None:
        raise FitError(f"unknown metric kind {metric_kind!r}, expected 'W' or 'C'")
    by_nu: dict[int, list[float]] = {}
    for row in rows:
        value = getattr(row, attribute)
        if value is not None:
            by_nu.setdefault(row.nu, []).append(value)
    summaries = []
    samples = []
    for nu in sorted(by_nu):
        values = by_nu[nu]
        mean = sum(values) / len(values)
        if len(values) > 1:
            spread = math.sqrt(
                sum((v - mean) ** 2 for v in values) / (len(values) - 1)
            )
            stderr = spread / math.sqrt(len(values))
        else:
            stderr = 0.0
        summaries.append(PerSizeSummary(nu=nu, mean=mean, stderr=stderr, n_seeds=len(values)))
        samples.append(
            ScalingSample(
                nu=nu,
                circuit_error_rate=epsilon * nu,
                value=mean,
                metric_kind=metric_kind,
                n_qubits=n_qubits,
                n_seeds=len(values),
            )
        )
    fit = fit_scaling(samples)
    return fit, summaries


def substitute_zero_epsilons(
    config: ExperimentConfig,
    metric: str = "both",
    proxy_w: float = EPSILON_PROXY_W,
    proxy_c: float = EPSILON_PROXY_C,
) -> ExperimentConfig:
    """Replace exact-zero error rates with the metric's proxy rate(s).

    The zero-rate limit of the spectral ratios is simulated at a tiny but
    non-zero rate; which rate depends on the metric being studied.
    """
    if metric not in ("W", "C", "both"):
        raise ConfigError(f"unknown metric {metric!r}, expected 'W', 'C' or 'both'")
    substitution = {"W": (proxy_w,), "C": (proxy_c,), "both": (proxy_w, proxy_c)}[metric]
    epsilons: list[float] = []
    for epsilon in config.epsilons:
        replacement = substitution if epsilon == 0.0 else (epsilon,)
        for value in replacement:
            if value not in epsilons:
                epsilons.append(value)
    return replace(config, epsilons=tuple(epsilons))
