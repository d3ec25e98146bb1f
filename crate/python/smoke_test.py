#!/usr/bin/env python3
"""Smoke test for the ybe_py extension module.

Builds nothing itself: it locates the compiled cdylib under target/
(release preferred), stages it under a temp directory as an importable
module, and exercises the main types and operations end to end.

Run from the repository root:

    cargo build --release -p ybe-python
    python3 python/smoke_test.py
"""

import json
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def stage_module() -> Path:
    candidates = [
        REPO / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libybe_py.so", "libybe_py.dylib", "ybe_py.dll")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("ybe_py cdylib not found; run `cargo build --release -p ybe-python` first")
    stage = Path(tempfile.mkdtemp(prefix="ybe_py_"))
    suffix = ".pyd" if built.suffix == ".dll" else ".so"
    shutil.copy2(built, stage / f"ybe_py{suffix}")
    return stage


sys.path.insert(0, str(stage_module()))

import ybe_py  # noqa: E402


def check(name, actual, expected):
    assert actual == expected, f"{name}: expected {expected!r}, got {actual!r}"
    print(f"ok: {name} = {actual!r}")


# --- the 5-element retractable sample -------------------------------------
s = ybe_py.retractable5()
check("n", s.n, 5)
check("braid", s.check_braid(), True)
check("identities", s.check_braid_identities(), (True, True, True))
check("degenerate", s.classify()["degenerate"], True)
check("sim classes", s.sim(), [[0, 2, 4], [1, 3]])
approx, rounds = s.max_congruence()
check("max congruence", approx, [[0, 4], [1], [2], [3]])
check("rounds", rounds, 2)
check("refinement class counts", s.refinement_class_counts(), [2, 3, 4, 4])
check("tower sizes", s.retract_tower_sizes(), [5, 4, 1])
check("mpl", s.multipermutation_level(), 2)
check("mpl2 equations", s.mpl2_equations_hold(), True)

# --- JSON round-trip -------------------------------------------------------
text = s.to_json()
parsed = ybe_py.Solution.from_json(text)
check("round-trip equality", parsed == s, True)
check("round-trip bytes", parsed.to_json() == text, True)
check("json n", json.loads(text)["n"], 5)

# --- the irretractable family ---------------------------------------------
t = ybe_py.irretractable(3)
check("irr n", t.n, 4)
check("irr braid", t.check_braid(), True)
check("irr sim", t.sim(), [[0], [1], [2, 3]])
check("irretractable", t.is_irretractable(), True)
check("irr mpl", t.multipermutation_level(), None)

holds, witness = t.is_k_permutational(2)
check("depth 2 fails", holds, False)
check("depth 2 witness values", (witness["omega_y"], witness["omega_z"]), (2, 3))

holds, witness = t.is_k_permutational(3)
check("depth 3 fails with words", holds, False)
words = [w for _, w in witness["levels"] if w != list(range(len(w)))]
check("depth 3 witness uses the tau_0 word", words, [[1, 1, 1, 2]])

holds, witness = t.is_k_permutational(3, no_words=True)
check("depth 3 holds without words", holds, True)
check("irr mpl2 equations", t.mpl2_equations_hold(), False)
check("monoid size", t.monoid_size(), 5)

# --- quotients and towers --------------------------------------------------
chain = ybe_py.chain_with_twin(5)
check("chain tower", chain.retract_tower_sizes(), [7, 6, 1])
q = chain.quotient()
check("chain quotient size", q.n, 6)

proj = ybe_py.projection(4)
check("projection mpl", proj.multipermutation_level(), 1)
check("projection involutive", proj.classify()["involutive"], True)

# --- enumeration ------------------------------------------------------------
all2 = ybe_py.enumerate_solutions(2)
check("n=2 count", len(all2), 43)
reps2 = ybe_py.enumerate_solutions(2, up_to_iso=True)
check("n=2 classes", len(reps2), 26)
report = ybe_py.census(2)
check("census count", report["solutions_found"], 43)
check("census space", report["total_pairs_examined"], 256)

sampled = ybe_py.sample_solutions(3, 5, seed=1)
check("sampled solutions", all(x.check_braid() for x in sampled), True)
check("sampled count", len(sampled), 5)

print("\nall smoke tests passed")
