"""Time the pure-Python and compiled decision-diagram kernels on the same checks.

    python3 benchmarks/bench_diagram.py [--repeat N]

Workloads: H1-H5 on the 9-element 3BA from H(bool:2) (H4 has 13 variables),
the mutation sweep on that nBA, and c5 on H(bool:3) up to arity 4.
"""

import argparse
import time

from hyperaffine.diagram import CompiledDiagramManager, PythonDiagramManager
from hyperaffine.nba import check_axioms, mutation_check, nba_from_theory
from hyperaffine.rings import parse_ring_spec
from hyperaffine.theory import check_c5, hyperaffine_theory


def workloads():
    nba3 = nba_from_theory(hyperaffine_theory(parse_ring_spec("bool:2")), 3)
    h3 = hyperaffine_theory(parse_ring_spec("bool:3"))
    return [
        ("nba H1-H5 bool:2 n=3", lambda be: check_axioms(nba3, backend=be).ok),
        ("nba 20 mutations", lambda be: all(f for _, _, f in mutation_check(nba3, backend=be))),
        ("c5 H(bool:3) arity<=4", lambda be: check_c5(h3, 4, backend=be).ok),
    ]


def best_of(fn, backend, repeat):
    times, result = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(backend)
        times.append(time.perf_counter() - t0)
    return min(times), result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = [("python", PythonDiagramManager)]
    if CompiledDiagramManager is not None:
        backends.append(("compiled", CompiledDiagramManager))
    else:
        print("compiled kernel not built; timing the fallback only")
    print(f"{'workload':28} " + " ".join(f"{name:>10}" for name, _ in backends) + "   speedup")
    for label, fn in workloads():
        row, results = [], set()
        for _, be in backends:
            t, res = best_of(fn, be, args.repeat)
            row.append(t)
            results.add(res)
        assert len(results) == 1, f"backends disagree on {label}"
        speed = f"{row[0] / row[1]:8.1f}x" if len(row) == 2 else ""
        print(f"{label:28} " + " ".join(f"{t:9.3f}s" for t in row) + "  " + speed)


if __name__ == "__main__":
    main()
