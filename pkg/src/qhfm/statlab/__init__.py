"""Statistical test battery: sensitivity, avalanche, uniformity, collisions."""

from .corpus import DrawPair, SplitMix64, generate_corpus, load_lines, perturb
from .indicators import (
    D_BYTE_THEORETICAL,
    AvalancheReport,
    CollisionReport,
    DrawDigests,
    HitHistogram,
    UniformityReport,
    avalanche_from_digests,
    avalanche_test,
    byte_distance,
    collision_from_digests,
    collision_test,
    hash_corpus,
    hit_probabilities,
    hits,
    kl_divergence,
    theoretical_hit_distribution,
    uniformity_from_digests,
    uniformity_test,
)
from .report import (
    SCHEMA_VERSION,
    BatteryReport,
    dumps,
    run_battery,
    sensitivity_demo,
    summary_table,
    write_battery,
    write_json,
)

__all__ = [
    "D_BYTE_THEORETICAL",
    "SCHEMA_VERSION",
    "AvalancheReport",
    "BatteryReport",
    "CollisionReport",
    "DrawDigests",
    "DrawPair",
    "HitHistogram",
    "SplitMix64",
    "UniformityReport",
    "avalanche_from_digests",
    "avalanche_test",
    "byte_distance",
    "collision_from_digests",
    "collision_test",
    "dumps",
    "generate_corpus",
    "hash_corpus",
    "hit_probabilities",
    "hits",
    "kl_divergence",
    "load_lines",
    "perturb",
    "run_battery",
    "sensitivity_demo",
    "summary_table",
    "theoretical_hit_distribution",
    "uniformity_from_digests",
    "uniformity_test",
    "write_battery",
    "write_json",
]
