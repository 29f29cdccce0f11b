"""Random summary records with a consistent shape across one universe."""
import random


def random_records(rng: random.Random, count: int, measures=("block", "array", "loop", "decision", "condition", "size")):
    n_blocks = rng.randint(1, 6)
    n_loops = rng.randint(1, 3)
    n_guards = rng.randint(1, 3)
    sites = {str(g): rng.randint(1, 3) for g in range(1, n_guards + 1)}
    records = []
    for _ in range(count):
        rec = {}
        if "block" in measures:
            rec["block"] = {str(b): True for b in range(1, n_blocks + 1) if rng.random() < 0.35}
        if "array" in measures:
            rec["array"] = {
                name: {
                    "read": sorted(rng.sample(range(5), rng.randint(0, 2))),
                    "write": sorted(rng.sample(range(5), rng.randint(0, 2))),
                }
                for name in ("main_a", "main_b")
                if rng.random() < 0.7
            }
        if "loop" in measures:
            rec["loop"] = {
                str(l): {str(rng.randint(0, 3)): rng.randint(1, 2)}
                for l in range(1, n_loops + 1)
                if rng.random() < 0.6
            }
        if "decision" in measures:
            rec["decision"] = {
                g: {"true": rng.random() < 0.5, "false": rng.random() < 0.5} for g in sites if rng.random() < 0.7
            }
        if "condition" in measures:
            rec["condition"] = {
                g: {str(j): {"true": rng.random() < 0.5, "false": rng.random() < 0.5} for j in range(k)}
                for g, k in sites.items()
                if rng.random() < 0.7
            }
        if "size" in measures:
            rec["size"] = {"size": rng.randint(0, 9)}
        records.append(rec)
    return records


def block_loop_records(rng: random.Random, count: int):
    """Small block/loop universes used by the optimiser oracles."""
    n_blocks = rng.randint(2, 8)
    records = []
    for _ in range(count):
        records.append(
            {
                "block": {str(b): True for b in range(1, n_blocks + 1) if rng.random() < 0.3},
                "loop": {str(l): {str(rng.randint(0, 4)): 1} for l in (1, 2) if rng.random() < 0.5},
            }
        )
    return records
