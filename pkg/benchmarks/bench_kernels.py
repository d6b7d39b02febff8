"""
Time the compiled and pure-Python integration kernels on the seed corpus.

    python benchmarks/bench_kernels.py [--repeat N] [--span CHAR_TIMES]

Each seed is integrated in both modes over the span; the best of
``--repeat`` wall-clock times is reported per backend, with the speedup.
"""

import argparse
import time

from kninstanton import _pykernels, kernels
from kninstanton.corpus import CORPUS
from kninstanton.integrator import HAMILTONIAN_MODE, MINO_MODE, IntegratorOptions, integrate

try:
    from kninstanton import _ckernels
except ImportError:
    _ckernels = None


def _use(impl):
    kernels.integrate = impl.integrate
    kernels.mino_rhs = impl.mino_rhs
    kernels.ham_rhs = impl.ham_rhs


def run_corpus(span):
    nfev = 0
    for reg in CORPUS:
        for sd in reg.seeds:
            for mode in (MINO_MODE, HAMILTONIAN_MODE):
                o = IntegratorOptions(mode=mode, s_span=span * reg.params.M)
                nfev += integrate(reg.params, sd.q_charge, sd.state, o).nfev
    return nfev


def bench(impl, span, repeat):
    _use(impl)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        nfev = run_corpus(span)
        times.append(time.perf_counter() - t0)
    return min(times), nfev


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--span", type=float, default=1000.0, help="span in characteristic times")
    args = ap.parse_args(argv)
    rows = [("python", _pykernels)]
    if _ckernels is not None:
        rows.insert(0, ("cython", _ckernels))
    res = {}
    for name, impl in rows:
        t, nfev = bench(impl, args.span, args.repeat)
        res[name] = t
        print(f"{name:>7s}: {t:8.3f} s  {nfev:9d} rhs evals  {1e6 * t / nfev:7.2f} us/eval")
    if len(res) == 2:
        print(f"speedup: {res['python'] / res['cython']:.1f}x")
    else:
        print("compiled backend not built; python only")
    return res


if __name__ == "__main__":
    main()
