"""Seeded suite runner and report emission.

Instance ``i`` of a suite uses dimension ``dims[i % len(dims)]`` and norm
``norms[(i // len(dims)) % len(norms)]``. ``A`` and ``B`` are random positive
definite, ``X`` is a dense complex Gaussian matrix, all drawn from seeds derived
from ``(seed, i)``. Chain parameters come from a separate stream per theorem, so
filtering theorems does not change the parameters of the others.
"""

from __future__ import annotations

import csv
import io
import json
import time
import zlib
from dataclasses import dataclass, field

from .chains import (
    DEGENERATE,
    HOLDS,
    REGISTRY,
    THEOREM_IDS,
    VIOLATED,
    ChainReport,
    default_rel_tol,
    evaluate_chain,
    get_spec,
)
from .heinz import HeinzInstance, HeinzProfile
from .linalg import random_instance
from .norms import NormKind, parse_norm
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .rng import SplitMix64, derive_seed

DEFAULT_DIMS = (2, 3, 4, 5, 6)
DEFAULT_NORMS = ("tr", "fro", "op", "sch:3", "kyfan:2")
MIN_DIM, MAX_DIM = 2, 16
CSV_COLUMNS = ("theorem_id", "instance_seed", "term_index", "term_label", "value", "margin", "verdict")


class SuiteError(RuntimeError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    trials: int = 200
    dims: tuple[int, ...] = DEFAULT_DIMS
    norms: tuple[NormKind, ...] = tuple(parse_norm(n) for n in DEFAULT_NORMS)
    seed: int = 0
    tol_chain: float | None = None
    theorems: tuple[str, ...] = ()
    out: str | None = None
    fmt: str = "json"
    quad: QuadratureConfig = DEFAULT_CONFIG

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "norms", tuple(parse_norm(n) if isinstance(n, str) else n for n in self.norms))
        object.__setattr__(self, "theorems", tuple(self.theorems))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.dims or any(not MIN_DIM <= d <= MAX_DIM for d in self.dims):
            raise ValueError(f"dims must be a nonempty list inside [{MIN_DIM}, {MAX_DIM}], got {list(self.dims)}")
        if not self.norms:
            raise ValueError("at least one norm is required")
        for norm in self.norms:
            if norm.tag == "kyfan" and norm.k > min(self.dims):
                raise ValueError(f"{norm} needs every dimension >= {norm.k}")
        for tid in self.theorems:
            get_spec(tid)
        if self.fmt not in ("json", "csv"):
            raise ValueError(f"format must be json or csv, got {self.fmt!r}")
        if self.tol_chain is not None and not self.tol_chain >= 0:
            raise ValueError("tol_chain must be nonnegative")

    @property
    def theorem_ids(self) -> tuple[str, ...]:
        chosen = set(self.theorems) if self.theorems else set(THEOREM_IDS)
        return tuple(tid for tid in THEOREM_IDS if tid in chosen)

    @property
    def rel_tol(self) -> float:
        return default_rel_tol() if self.tol_chain is None else self.tol_chain


@dataclass
class SuiteEntry:
    theorem_id: str
    instance_index: int | None
    instance_seed: int | None
    dim: int | None
    norm: str | None
    report: ChainReport

    def to_dict(self) -> dict:
        return {
            "instance_index": self.instance_index,
            "instance_seed": self.instance_seed,
            "dim": self.dim,
            "norm": self.norm,
            **self.report.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SuiteEntry":
        return cls(
            data["theorem_id"], data["instance_index"], data["instance_seed"], data["dim"], data["norm"],
            ChainReport.from_dict(data),
        )


@dataclass
class SuiteResult:
    entries: list[SuiteEntry] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def counts(self) -> dict[str, int]:
        counts = {HOLDS: 0, VIOLATED: 0, DEGENERATE: 0}
        for e in self.entries:
            counts[e.report.verdict] += 1
        return counts

    @property
    def worst_margin(self) -> dict[str, float]:
        """Most negative margin relative to the largest term, per theorem."""
        worst: dict[str, float] = {}
        for e in self.entries:
            rel = e.report.worst_margin / max(e.report.max_term, 1e-300)
            worst[e.theorem_id] = min(worst.get(e.theorem_id, rel), rel)
        return worst

    def unexpected(self) -> list[SuiteEntry]:
        """Reports whose verdict contradicts the registry expectation."""
        bad = []
        for e in self.entries:
            expect = REGISTRY[e.theorem_id].expect
            if expect == VIOLATED and e.report.verdict != VIOLATED:
                bad.append(e)
            elif expect != VIOLATED and e.report.verdict == VIOLATED:
                bad.append(e)
        return bad

    @property
    def ok(self) -> bool:
        return not self.unexpected()

    def to_dict(self) -> dict:
        return {
            "counts": self.counts,
            "worst_margin": self.worst_margin,
            "wall_time": self.wall_time,
            "reports": [e.to_dict() for e in self.entries],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SuiteResult":
        return cls([SuiteEntry.from_dict(r) for r in data["reports"]], float(data.get("wall_time", 0.0)))


def instance_seed(seed: int, index: int) -> int:
    return derive_seed(seed, index)


def make_instance(seed: int, dim: int, norm: NormKind) -> HeinzInstance:
    """Random PD ``A``, ``B`` and dense complex ``X`` from one seed."""
    A = random_instance(dim, derive_seed(seed, 1), "pd")
    B = random_instance(dim, derive_seed(seed, 2), "pd")
    X = random_instance(dim, derive_seed(seed, 3), "dense")
    return HeinzInstance(A, B, X, norm)


def _theorem_salt(theorem_id: str) -> int:
    return zlib.crc32(theorem_id.encode())


def sample_params(theorem_id: str, inst_seed: int) -> dict:
    spec = get_spec(theorem_id)
    if spec.sample is None:
        return {}
    return spec.sample(SplitMix64(derive_seed(inst_seed, _theorem_salt(theorem_id))))


def run_suite(cfg: SuiteConfig) -> SuiteResult:
    """Evaluate the selected chains on ``cfg.trials`` seeded instances.

    Deterministic in ``cfg``; FALSIFY-r0 (fixed data) runs once.
    """
    start = time.perf_counter()
    ids = cfg.theorem_ids
    per_instance = [tid for tid in ids if REGISTRY[tid].subject != "fixed"]
    buckets: dict[str, list[SuiteEntry]] = {tid: [] for tid in ids}
    for tid in ids:
        if REGISTRY[tid].subject == "fixed":
            report = _guarded(tid, None, {}, cfg, None, None)
            buckets[tid].append(SuiteEntry(tid, None, None, None, None, report))
    if per_instance:
        for i in range(cfg.trials):
            dim = cfg.dims[i % len(cfg.dims)]
            norm = cfg.norms[(i // len(cfg.dims)) % len(cfg.norms)]
            s = instance_seed(cfg.seed, i)
            needs_matrix = any(REGISTRY[tid].subject in ("function", "matrix") for tid in per_instance)
            profile = HeinzProfile(make_instance(s, dim, norm)) if needs_matrix else None
            for tid in per_instance:
                params = sample_params(tid, s)
                report = _guarded(tid, profile, params, cfg, i, s)
                buckets[tid].append(SuiteEntry(tid, i, s, dim, str(norm), report))
    entries = [e for tid in ids for e in buckets[tid]]
    return SuiteResult(entries, time.perf_counter() - start)


def _guarded(tid, profile, params, cfg: SuiteConfig, index, seed) -> ChainReport:
    try:
        return evaluate_chain(tid, profile, params, cfg.quad, cfg.rel_tol)
    except Exception as exc:
        raise SuiteError(f"{tid} failed on instance {index} (seed {seed}, params {params}): {exc}") from exc


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def emit_report(result: SuiteResult, fmt: str = "json", path: str | None = None) -> str:
    """Serialise a suite result; also writes it to ``path`` when given.

    JSON numbers use Python's shortest round-trip repr; CSV numbers use 17
    significant digits. Both parse back to the identical doubles.
    """
    if fmt == "json":
        text = json.dumps(result.to_dict(), indent=1, allow_nan=True) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for e in result.entries:
            r = e.report
            for k, (label, value) in enumerate(zip(r.labels, r.values)):
                margin = _fmt(r.margins[k]) if k < len(r.margins) else ""
                seed = "" if e.instance_seed is None else e.instance_seed
                writer.writerow((r.theorem_id, seed, k, label, _fmt(value), margin, r.verdict))
        text = buf.getvalue()
    else:
        raise ValueError(f"format must be json or csv, got {fmt!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def summarize(result: SuiteResult) -> str:
    counts = result.counts
    lines = [
        f"{len(result.entries)} reports in {result.wall_time:.2f} s: "
        f"{counts[HOLDS]} holds, {counts[VIOLATED]} violated, {counts[DEGENERATE]} degenerate"
    ]
    worst = result.worst_margin
    for tid in worst:
        n = sum(1 for e in result.entries if e.theorem_id == tid)
        v = sum(1 for e in result.entries if e.theorem_id == tid and e.report.verdict == VIOLATED)
        lines.append(f"  {tid:<11} reports {n:>4}  violated {v:>4}  worst relative margin {worst[tid]:+.3e}")
    bad = result.unexpected()
    if bad:
        lines.append(f"{len(bad)} unexpected verdict(s)")
    return "\n".join(lines)
