"""How far the fractal reconstructions are from inverting the Mittag-Leffler forward map.

The fractal series and the literal multiplier E(lam^2 tau^alpha) are exact
inverses only at alpha = 1; this prints the interior errors across alpha.
"""

import argparse

import numpy as np

from retroherm import EvolutionK, SampledField, heat_forward_homogeneous, homogeneous, rel_l2
from retroherm.errors import RetroError
from retroherm.retro import ReconstructionConfig, reconstruct_series, spectral_invert


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tau", type=float, default=0.1)
    ap.add_argument("--alphas", type=float, nargs="+", default=[0.5, 0.8, 1.0, 1.2, 1.5])
    args = ap.parse_args(argv)
    f = SampledField.on_grid(-8.0, 8.0, 2048, lambda x: np.exp(-x * x))
    w = f.window(1.0)
    med = homogeneous(1.0)
    print("alpha  best_series(J)        spectral(cutoff=6)")
    for alpha in args.alphas:
        u = heat_forward_homogeneous(f, args.tau, alpha=alpha)
        kernel = EvolutionK.classical(args.tau) if alpha == 1.0 else EvolutionK.fractal(alpha, args.tau)
        series = {}
        for J in (4, 8, 12, 16, 20, 24):
            rec = reconstruct_series(u, med, ReconstructionConfig(kernel, order=J))
            series[J] = rel_l2(rec.values[w], f.values[w])
        J = min(series, key=series.get)
        try:
            sp = rel_l2(spectral_invert(u, med, kernel, 6.0).values[w], f.values[w])
        except RetroError as exc:
            sp = float("nan")
            print(f"  spectral failed: {exc}")
        print(f"{alpha:5.2f}  {series[J]:.3e} ({J:2d})       {sp:.3e}")


if __name__ == "__main__":
    main()
