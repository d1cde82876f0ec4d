"""Measured operation counts versus the closed-form complexity model.

Detects one frame per window length with the instruction counter attached
and prints measured complex multiplications/additions next to the model
polynomial. The measured counts grow cubically in the window (the per-symbol
Cholesky dominates); the model, which assumes dense per-window processing
with explicit inverses, sits a small constant factor above.

Usage:
    python demos/complexity_counts.py [--n 512] [--windows 5,10,15,20]
"""

import argparse

import numpy as np

from equalab.analysis import complexity_model
from equalab.channel import FadingParams, NoiseModel, build_channel_matrix, jakes_realize, transmit
from equalab.constellation import Constellation
from equalab.equalizers import AmlDfbeConfig, amldfbe_detect


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=512)
    ap.add_argument("--l", type=int, default=5)
    ap.add_argument("--windows", default="5,10,15,20")
    args = ap.parse_args()

    c = Constellation.mpsk(2)
    real = jakes_realize(FadingParams(normalized_doppler=1e-4), args.l, args.n, 0)
    h = build_channel_matrix(real)
    rng = np.random.default_rng(0)
    s = c.points[rng.integers(0, 2, args.n)]
    r = transmit(h, s, NoiseModel(0.01), 1)

    windows = [int(w) for w in args.windows.split(",")]
    print(f"{'Lf':>4}{'measured mults':>16}{'model mults':>14}{'ratio':>8}"
          f"{'measured adds':>16}{'model adds':>14}")
    mults = []
    for lf in windows:
        res = amldfbe_detect(h, r, AmlDfbeConfig(lf), c, 0.01)
        model_adds, model_mults = complexity_model("amldfbe", args.n, args.l, lf)
        mults.append(res.op_count[0])
        print(f"{lf:>4}{res.op_count[0]:>16}{model_mults:>14}"
              f"{res.op_count[0] / model_mults:>8.3f}"
              f"{res.op_count[1]:>16}{model_adds:>14}")
    slope = np.polyfit(np.log(windows), np.log(mults), 1)[0]
    print(f"\nlog-log slope of measured multiplications vs window: {slope:.3f}"
          " (cubic growth)")


if __name__ == "__main__":
    main()
