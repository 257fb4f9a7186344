"""Session-wide fixtures: the machine corpus and its translated pairs."""

from __future__ import annotations

import random
import time

import pytest

from pdapress import slp, translate, udpda

from helpers import handcrafted_machines, random_normal_udpda, random_slp


@pytest.fixture(scope="session")
def corpus():
    """At least 300 machines: handcrafted cases, random normalized machines,
    and machine images of random programs."""
    machines = list(handcrafted_machines())
    rng = random.Random(20240)
    for i in range(210):
        machines.append((f"random-{i}", random_normal_udpda(rng)))
    for i in range(70):
        p = random_slp(rng, "01", min_len=1, max_len=2000)
        machines.append((f"slp-image-{i}", translate.slp_to_udpda(p)))
    assert len(machines) >= 300
    return machines


@pytest.fixture(scope="session")
def translated(corpus):
    """Per machine: indicator pair, its sequence, and the simulated bits,
    both over a window covering min(|prefix| + 3|loop|, 5000) and 2000.
    The elapsed wall time of the whole translation+oracle pass is recorded."""
    started = time.monotonic()
    rows = []
    for label, machine in corpus:
        pair = translate.udpda_to_indicator(machine)
        n_round = min(slp.length(pair.prefix) + 3 * slp.length(pair.loop), 5000)
        window = max(n_round, 2000)
        rows.append({
            "label": label,
            "machine": machine,
            "pair": pair,
            "n_round": n_round,
            "sequence": pair.sequence(window),
            "bits": udpda.run_prefix(machine, window),
        })
    elapsed = time.monotonic() - started
    return {"rows": rows, "elapsed": elapsed}
