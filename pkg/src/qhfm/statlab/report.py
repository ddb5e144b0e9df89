"""Battery orchestration, the sensitivity demo, and report serialisation."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..hashing import hex_encode, qhfm_hash_bits
from ..walk import WalkParams
from .corpus import MAX_MESSAGE_BITS, MIN_MESSAGE_BITS, SplitMix64, perturb
from .indicators import (
    AvalancheReport,
    CollisionReport,
    UniformityReport,
    avalanche_from_digests,
    collision_from_digests,
    hash_corpus,
    uniformity_from_digests,
)

SCHEMA_VERSION = 1


def params_dict(params: WalkParams) -> dict:
    return {
        "n": params.n,
        "m": params.m,
        "l": params.l,
        "theta0": params.theta0,
        "theta1": params.theta1,
        "alpha": params.alpha,
        "bit_length": params.bit_length,
    }


@dataclass
class BatteryReport:
    params: WalkParams
    avalanche: AvalancheReport
    uniformity: UniformityReport
    collision: CollisionReport
    meta: dict

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "params": params_dict(self.params),
            "meta": self.meta,
            "avalanche": self.avalanche.to_dict(),
            "uniformity": self.uniformity.to_dict(),
            "collision": self.collision.to_dict(),
        }


def run_battery(corpus, params: WalkParams, workers: int = 1, meta: dict | None = None) -> BatteryReport:
    """All three tests on one set of digest pairs."""
    draws = hash_corpus(corpus, params, workers)
    return BatteryReport(
        params,
        avalanche_from_digests(draws),
        uniformity_from_digests(draws),
        collision_from_digests(draws),
        dict(meta or {}, N=draws.n_draws),
    )


def changed_positions(a, b) -> list[int]:
    """1-based digest bit positions at which ``a`` and ``b`` differ."""
    diff = np.flatnonzero(a.to_bits() != b.to_bits())
    return [int(i) + 1 for i in diff]


def sensitivity_demo(params: WalkParams, seed: int, message=None) -> dict:
    """Digests of a message and of its flip, insert and delete variants."""
    rng = SplitMix64(seed)
    if message is None:
        message = rng.bits(MIN_MESSAGE_BITS + rng.below(MAX_MESSAGE_BITS - MIN_MESSAGE_BITS + 1))
    message = np.asarray(message, dtype=np.uint8)
    flip_at = rng.below(message.size)
    insert_at = rng.below(message.size + 1)
    insert_bit = rng.below(2)
    delete_at = rng.below(message.size)
    variants = [
        ("original", message, {}),
        ("flip", perturb(message, "flip", flip_at), {"position": flip_at}),
        (
            "insert",
            perturb(message, "insert", insert_at, insert_bit),
            {"position": insert_at, "bit": insert_bit},
        ),
        ("delete", perturb(message, "delete", delete_at), {"position": delete_at}),
    ]
    base = qhfm_hash_bits(message, params)
    conditions = []
    for name, bits, extra in variants:
        digest = base if name == "original" else qhfm_hash_bits(bits, params)
        conditions.append(
            dict(
                extra,
                condition=name,
                message_bits=int(bits.size),
                digest=hex_encode(digest),
                changed_positions=changed_positions(base, digest),
            )
        )
    return {
        "schema_version": SCHEMA_VERSION,
        "params": params_dict(params),
        "seed": int(seed),
        "conditions": conditions,
    }


def dumps(data: dict) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def write_json(data: dict, path) -> Path:
    path = Path(path)
    path.write_text(dumps(data), encoding="utf-8")
    return path


def indicator_rows(report: BatteryReport) -> list[tuple[str, object]]:
    av, un, co = report.avalanche, report.uniformity, report.collision
    return [
        ("N", av.N),
        ("bit_length", av.bit_length),
        ("B_mean", av.B_mean),
        ("P", av.P),
        ("dB", av.dB),
        ("dP", av.dP),
        ("I_DC", av.I_DC),
        ("T_mean", un.T_mean),
        ("Q", un.Q),
        ("dT", un.dT),
        ("dQ", un.dQ),
        ("kl", co.kl),
        ("kl_display", co.kl_display),
        ("d_byte_mean", co.d_byte_mean),
        ("delta_d", co.delta_d),
    ]


def _write_csv(path: Path, header, rows) -> Path:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def write_battery(report: BatteryReport, out_dir, fmt: str = "json", stem: str | None = None) -> list[Path]:
    """Write the battery report; CSV output adds histogram and per-bit files.

    The per-bit flip counts (bit position vs ``T_j``) are always written as
    CSV since they are plot input.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = stem or f"qhfm{report.params.bit_length}"
    written = []
    if fmt == "json":
        written.append(write_json(report.to_dict(), out_dir / f"{stem}_battery.json"))
    elif fmt == "csv":
        written.append(
            _write_csv(out_dir / f"{stem}_indicators.csv", ("indicator", "value"), indicator_rows(report))
        )
        hist = report.collision.hist
        written.append(
            _write_csv(
                out_dir / f"{stem}_hits.csv",
                ("omega", "W_e", "W_t", "P_t"),
                zip(range(hist.g + 1), hist.W_e, hist.W_t, hist.P_t),
            )
        )
    else:
        raise ValueError(f"unsupported report format {fmt!r}")
    written.append(
        _write_csv(
            out_dir / f"{stem}_bitflips.csv",
            ("bit_position", "T"),
            ((j + 1, t) for j, t in enumerate(report.uniformity.T)),
        )
    )
    return written


def summary_table(reports: list[BatteryReport]) -> str:
    """Plain-text table with the avalanche, uniformity and collision columns."""
    lines = [
        f"{'instance':<10}{'B_mean':>10}{'P%':>9}{'dB':>8}{'dP%':>8}{'I_DC%':>8}"
        f"{'dT':>9}{'dQ%':>8}{'W_e (0,1,2,3,4+)':>28}{'W_t (0,1,2,3,4+)':>28}{'D_KL':>10}{'dd':>7}"
    ]
    for r in reports:
        av, un, co = r.avalanche, r.uniformity, r.collision
        we = ",".join(str(w) for w in co.hist.W_e_display)
        wt = ",".join(str(w) for w in co.hist.W_t_display)
        lines.append(
            f"{'QHFM-' + str(av.bit_length):<10}{av.B_mean:>10.4f}{av.P:>9.4f}{av.dB:>8.4f}"
            f"{av.dP:>8.4f}{av.I_DC:>8.4f}{un.dT:>9.4f}{un.dQ:>8.4f}{we:>28}{wt:>28}"
            f"{co.kl:>10.6f}{co.delta_d:>7.2f}"
        )
    return "\n".join(lines)
