"""MFDFA h(eta) on the binomial cascade against the closed form, for several scale grids."""
import argparse

import numpy as np

from qtriplet.mfdfa import default_scales, fluctuation_surface, generalized_hurst
from qtriplet.synth import cascade_hurst, gen_binomial_cascade


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a", type=float, default=0.75)
    ap.add_argument("--levels", type=int, default=16)
    args = ap.parse_args()
    v = gen_binomial_cascade(args.a, args.levels)
    n = v.size
    grids = {"log 20 in [10, N/4]": default_scales(n)}
    for lo in (4, 5, 6, 7, 8):
        grids[f"dyadic 2^{lo}..N/4"] = 2 ** np.arange(lo, int(np.log2(n // 4)) + 1)
    for order in (1, 2):
        for name, s in grids.items():
            if s[0] < 10 or s.size < 8:
                continue
            hc = generalized_hurst(fluctuation_surface(v, s, detrend_order=order))
            m = hc.moments != 0
            dev = hc.h[m] - cascade_hurst(hc.moments[m], args.a)
            print(f"order {order}, {name:22s}: max|dev| {np.max(np.abs(dev)):.3f}, mean dev {dev.mean():+.3f}")


if __name__ == "__main__":
    main()
